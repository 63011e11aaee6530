"""Published rank census counts: (n, rank, count, simple_count) rows.

Rows printed with a zero count are kept here; comparisons drop them because
the census only emits nonzero rows.
"""

CONNECTED = [  # connected graphs
    (3, 2, 1, 1), (3, 3, 1, 0),
    (4, 2, 3, 2), (4, 3, 1, 1), (4, 4, 2, 0),
    (5, 3, 11, 8), (5, 4, 6, 3), (5, 5, 4, 0),
    (6, 2, 2, 2), (6, 3, 27, 12), (6, 4, 32, 21), (6, 5, 35, 19), (6, 6, 16, 0),
    (7, 3, 6, 5), (7, 4, 189, 121), (7, 5, 240, 158), (7, 6, 352, 255), (7, 7, 66, 0),
    (8, 2, 3, 3), (8, 3, 39, 25), (8, 4, 466, 236), (8, 5, 1360, 776),
    (8, 6, 2523, 1492), (8, 7, 5781, 4787), (8, 8, 945, 0),
]

CUBIC = [  # connected cubic graphs, 10 and 12 vertices
    (10, 3, 2, 2), (10, 5, 8, 1), (10, 6, 5, 3), (10, 7, 1, 0), (10, 10, 3, 0),
    (12, 3, 1, 0), (12, 4, 3, 0), (12, 5, 8, 3), (12, 6, 11, 2), (12, 7, 18, 6),
    (12, 8, 14, 4), (12, 9, 14, 3), (12, 10, 11, 0), (12, 11, 2, 0), (12, 12, 3, 0),
]

BIPARTITE = [  # connected bipartite graphs
    (3, 2, 1, 1), (3, 3, 0, 0),
    (4, 2, 2, 1), (4, 3, 0, 0), (4, 4, 1, 0),
    (5, 3, 3, 3), (5, 4, 1, 0), (5, 5, 1, 0),
    (6, 2, 1, 1), (6, 3, 6, 3), (6, 4, 4, 0), (6, 5, 4, 0), (6, 6, 2, 0),
    (7, 3, 0, 0), (7, 4, 23, 20), (7, 5, 3, 0), (7, 6, 1, 0), (7, 7, 3, 0),
    (8, 2, 1, 1), (8, 3, 5, 2), (8, 4, 43, 24), (8, 5, 51, 0), (8, 6, 50, 0),
    (8, 7, 21, 0), (8, 8, 11, 0),
]


def block(table, n):
    return [row for row in table if row[0] == n and row[2] > 0]
