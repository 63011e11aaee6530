"""Rank census over graph corpora: counts of graphs per (n, rank of the average mixing matrix)."""

from __future__ import annotations

import csv
import enum
import io
import json
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from itertools import islice
from pathlib import Path
from typing import Iterable, Iterator, Sequence

from .commutant import average_mixing_exact, commutant_basis
from .graphs import Graph, GraphClass, adjacency_matrix, classify, enumerate_connected, parse_graph6, read_graph6_file, write_graph6

__all__ = [
    "CensusFilter",
    "CensusRecord",
    "census_graph",
    "iter_source",
    "run_census",
    "emit_table",
    "CSV_HEADER",
]

CSV_HEADER = ("n", "rank", "count", "simple_count")


class CensusFilter(str, enum.Enum):
    ALL = "all"              # connected graphs
    CUBIC = "cubic"          # connected 3-regular graphs
    BIPARTITE = "bipartite"  # connected bipartite graphs

    def accepts(self, cls: GraphClass) -> bool:
        if not cls.connected:
            return False
        if self is CensusFilter.CUBIC:
            return cls.regular == 3
        if self is CensusFilter.BIPARTITE:
            return cls.bipartite
        return True


@dataclass(frozen=True, order=True)
class CensusRecord:
    n: int
    rank: int
    count: int
    simple_count: int


def census_graph(g: Graph) -> tuple[int, int, bool]:
    """``(n, rank, simple_spectrum)`` for one graph, all exact."""
    cb = commutant_basis(adjacency_matrix(g))
    return g.n, average_mixing_exact(cb).rank, cb.simple_spectrum


def iter_source(source: int | str | Path) -> Iterator[Graph]:
    """Graphs from the built-in enumerator (an int ``n``) or a graph6 file."""
    if isinstance(source, int):
        yield from enumerate_connected(source)
    else:
        for _, g in read_graph6_file(source):
            yield g


def _count_chunk(chunk: list[bytes], filt: str) -> Counter:
    f = CensusFilter(filt)
    counts: Counter = Counter()
    for rec in chunk:
        g = parse_graph6(rec)
        if f.accepts(classify(g)):
            counts[census_graph(g)] += 1
    return counts


def _chunks(graphs: Iterable[Graph], size: int) -> Iterator[list[bytes]]:
    it = iter(graphs)
    while chunk := [write_graph6(g) for g in islice(it, size)]:
        yield chunk


def run_census(
    source: int | str | Path | Iterable[Graph],
    filt: CensusFilter | str = CensusFilter.ALL,
    jobs: int = 1,
    chunk_size: int = 64,
) -> list[CensusRecord]:
    """One record per ``(n, rank)`` with a nonzero count, sorted by ``n`` then ``rank``.

    ``jobs > 1`` spreads chunks of the corpus over worker processes; the merged
    counts do not depend on the number of workers.
    """
    filt = CensusFilter(filt)
    graphs = iter_source(source) if isinstance(source, (int, str, Path)) else iter(source)
    counts: Counter = Counter()
    if jobs <= 1:
        for chunk in _chunks(graphs, chunk_size):
            counts.update(_count_chunk(chunk, filt.value))
    else:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            pending = []
            for chunk in _chunks(graphs, chunk_size):
                pending.append(pool.submit(_count_chunk, chunk, filt.value))
                if len(pending) >= 4 * jobs:
                    counts.update(pending.pop(0).result())
            for fut in pending:
                counts.update(fut.result())
    return _records(counts)


def _records(counts: Counter) -> list[CensusRecord]:
    table: dict[tuple[int, int], list[int]] = {}
    for (n, rank, simple), c in counts.items():
        row = table.setdefault((n, rank), [0, 0])
        row[0] += c
        if simple:
            row[1] += c
    return [CensusRecord(n, r, c, s) for (n, r), (c, s) in sorted(table.items())]


def emit_table(records: Sequence[CensusRecord], fmt: str = "csv") -> str:
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_HEADER)
        for r in records:
            w.writerow((r.n, r.rank, r.count, r.simple_count))
        return buf.getvalue()
    if fmt == "json":
        return json.dumps([asdict(r) for r in records], indent=2) + "\n"
    if fmt == "text":
        head = ("n", "rank", "# graphs", "# simple")
        rows = [head] + [tuple(str(x) for x in (r.n, r.rank, r.count, r.simple_count)) for r in records]
        widths = [max(len(row[k]) for row in rows) for k in range(4)]
        return "".join("  ".join(c.rjust(w) for c, w in zip(row, widths)) + "\n" for row in rows)
    raise ValueError(f"unknown format {fmt!r}")
