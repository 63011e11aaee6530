#!/usr/bin/env python3
"""Generate graph6 corpora for the opt-in census runs.

Writes, into the target directory:

  graphs7.g6, graphs8.g6   connected graphs on 7 and 8 vertices
  cubic10.g6, cubic12.g6   connected cubic graphs on 10 and 12 vertices

All graphs on n vertices come from adding a vertex, with every possible
neighbourhood, to each graph on n-1 vertices.  Connected cubic graphs come
from a backtracking search that completes the smallest unfinished vertex
first and only ever draws the next unused vertex.  Isomorphic duplicates are
removed by bucketing on cheap invariants and running networkx's VF2 test
within a bucket.  Each file is checked against the known class counts
before it is written.

Usage:  python scripts/make_corpora.py [OUTDIR]     (default: corpora/)
"""

import itertools
import sys
from pathlib import Path

import networkx as nx
import numpy as np

KNOWN = {"graphs7": 853, "graphs8": 11117, "cubic10": 19, "cubic12": 85}


def invariant(G):
    A = nx.to_numpy_array(G, nodelist=sorted(G))
    ev = np.round(np.linalg.eigvalsh(A), 6) + 0.0
    degs = dict(G.degree())
    local = sorted((degs[v], tuple(sorted(degs[u] for u in G[v]))) for v in G)
    tri = sorted(nx.triangles(nx.Graph(G)).values())
    return (tuple(local), tuple(tri), tuple(ev))


class IsoSet:
    def __init__(self):
        self.buckets = {}
        self.items = []

    def add(self, G):
        key = invariant(G)
        bucket = self.buckets.setdefault(key, [])
        if any(nx.is_isomorphic(G, H) for H in bucket):
            return False
        bucket.append(G)
        self.items.append(G)
        return True


def all_graphs(n_max):
    level = [nx.empty_graph(1)]
    for n in range(2, n_max + 1):
        seen = IsoSet()
        for G in level:
            for k in range(n):
                for nbrs in itertools.combinations(range(n - 1), k):
                    H = G.copy()
                    H.add_node(n - 1)
                    H.add_edges_from((v, n - 1) for v in nbrs)
                    seen.add(H)
        level = seen.items
        print(f"  all graphs on {n}: {len(level)}", file=sys.stderr)
        yield n, level


def _cubic_labelled(n):
    # complete the smallest unfinished vertex each step; untouched vertices are
    # interchangeable, so only the next few untouched ones are ever chosen
    adj = [set() for _ in range(n)]

    def rec(next_new):
        v = next((u for u in range(next_new) if len(adj[u]) < 3), None)
        if v is None:
            if next_new == n:
                yield [(a, b) for a in range(n) for b in adj[a] if a < b]
            return  # a finished component before all vertices were used: disconnected
        need = 3 - len(adj[v])
        touched = [u for u in range(v + 1, next_new) if len(adj[u]) < 3 and u not in adj[v]]
        for k in range(need + 1):
            fresh = list(range(next_new, min(n, next_new + need - k)))
            if len(fresh) != need - k:
                continue
            for old in itertools.combinations(touched, k):
                new = list(old) + fresh
                for u in new:
                    adj[v].add(u)
                    adj[u].add(v)
                yield from rec(next_new + len(fresh))
                for u in new:
                    adj[v].discard(u)
                    adj[u].discard(v)

    yield from rec(1)


def cubic_graphs(n_max):
    for n in range(4, n_max + 1, 2):
        seen = IsoSet()
        for edges in _cubic_labelled(n):
            G = nx.Graph(edges)
            seen.add(G)
        print(f"  connected cubic graphs on {n}: {len(seen.items)}", file=sys.stderr)
        yield n, seen.items


def write(path, graphs, expected):
    graphs = [G for G in graphs if nx.is_connected(G)]
    if len(graphs) != expected:
        raise SystemExit(f"{path.name}: generated {len(graphs)} graphs, expected {expected}")
    lines = sorted(nx.to_graph6_bytes(nx.convert_node_labels_to_integers(G), header=False) for G in graphs)
    path.write_bytes(b"".join(lines))
    print(f"wrote {path} ({len(lines)} graphs)", file=sys.stderr)


def main():
    out = Path(sys.argv[1] if len(sys.argv) > 1 else "corpora")
    out.mkdir(parents=True, exist_ok=True)
    for n, level in cubic_graphs(12):
        if n in (10, 12):
            write(out / f"cubic{n}.g6", level, KNOWN[f"cubic{n}"])
    for n, level in all_graphs(8):
        if n in (7, 8):
            write(out / f"graphs{n}.g6", level, KNOWN[f"graphs{n}"])


if __name__ == "__main__":
    main()
