"""Simple graphs: graph6 I/O, adjacency matrices, classification, small enumeration."""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path
from typing import Iterable, Iterator

import numpy as np

from .rational import RationalMatrix

__all__ = [
    "Graph",
    "GraphClass",
    "Graph6Error",
    "MAX_ORDER",
    "MAX_ENUMERATION_ORDER",
    "parse_graph6",
    "write_graph6",
    "read_graph6_file",
    "adjacency_matrix",
    "classify",
    "enumerate_connected",
    "canonical_code",
    "complete_graph",
    "empty_graph",
    "path_graph",
    "cycle_graph",
    "petersen_graph",
    "disjoint_union",
]

MAX_ORDER = 258
MAX_ENUMERATION_ORDER = 6


class Graph6Error(ValueError):
    """Malformed graph6 record; ``offset`` is the byte position of the problem."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (byte offset {offset})")
        self.offset = offset


def _pair_index(i: int, j: int) -> int:
    """Position of the pair {i, j}, i < j, in graph6 (column-major upper triangle) order."""
    if i > j:
        i, j = j, i
    return j * (j - 1) // 2 + i


@dataclass(frozen=True)
class Graph:
    """Undirected simple graph on vertices ``0..n-1``.

    ``bits`` holds the upper triangle: bit ``_pair_index(i, j)`` is set iff
    ``{i, j}`` is an edge.
    """

    n: int
    bits: int = 0

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("a graph needs at least one vertex")
        if self.bits < 0 or self.bits >> (self.n * (self.n - 1) // 2):
            raise ValueError("edge bits outside the upper triangle")

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> Graph:
        bits = 0
        for i, j in edges:
            if i == j:
                raise ValueError(f"loop at vertex {i}")
            if not (0 <= i < n and 0 <= j < n):
                raise ValueError(f"edge {(i, j)} outside 0..{n - 1}")
            bits |= 1 << _pair_index(i, j)
        return cls(n, bits)

    def has_edge(self, i: int, j: int) -> bool:
        return i != j and bool(self.bits >> _pair_index(i, j) & 1)

    def edges(self) -> list[tuple[int, int]]:
        return [(i, j) for j in range(self.n) for i in range(j) if self.bits >> _pair_index(i, j) & 1]

    @property
    def num_edges(self) -> int:
        return bin(self.bits).count("1")

    @cached_property
    def neighbor_masks(self) -> tuple[int, ...]:
        masks = [0] * self.n
        for i, j in self.edges():
            masks[i] |= 1 << j
            masks[j] |= 1 << i
        return tuple(masks)

    def neighbors(self, v: int) -> list[int]:
        m = self.neighbor_masks[v]
        return [u for u in range(self.n) if m >> u & 1]

    def degree(self, v: int) -> int:
        return bin(self.neighbor_masks[v]).count("1")

    def degrees(self) -> list[int]:
        return [bin(m).count("1") for m in self.neighbor_masks]

    def permute(self, perm: Iterable[int]) -> Graph:
        """Relabel vertex ``v`` as ``perm[v]``."""
        p = list(perm)
        return Graph.from_edges(self.n, ((p[i], p[j]) for i, j in self.edges()))

    def to_numpy(self) -> np.ndarray:
        a = np.zeros((self.n, self.n), dtype=np.int64)
        for i, j in self.edges():
            a[i, j] = a[j, i] = 1
        return a

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, g6={write_graph6(self).decode()!r})"


@dataclass(frozen=True)
class GraphClass:
    connected: bool
    bipartite: bool
    regular: int | None

    @property
    def is_regular(self) -> bool:
        return self.regular is not None


# -- graph6 ---------------------------------------------------------------


def _encode_order(n: int) -> bytes:
    if n <= 62:
        return bytes([n + 63])
    return bytes([126, (n >> 12 & 63) + 63, (n >> 6 & 63) + 63, (n & 63) + 63])


def parse_graph6(line: bytes | str) -> Graph:
    """Decode one graph6 record.  A trailing newline is ignored; padding bits must be zero."""
    if isinstance(line, str):
        line = line.encode("ascii", errors="strict")
    data = line.rstrip(b"\r\n")
    if not data:
        raise Graph6Error("empty record", 0)
    for k, c in enumerate(data):
        if not 63 <= c <= 126:
            raise Graph6Error(f"byte {c} outside the printable range 63..126", k)

    if data[0] != 126:
        n, pos = data[0] - 63, 1
    else:
        if len(data) < 4:
            raise Graph6Error("truncated long-form order", len(data))
        if data[1] == 126:
            raise Graph6Error(f"order exceeds supported maximum {MAX_ORDER}", 1)
        n = (data[1] - 63) << 12 | (data[2] - 63) << 6 | (data[3] - 63)
        pos = 4
        if n < 63:
            raise Graph6Error("long-form order below 63", 1)
    if n > MAX_ORDER:
        raise Graph6Error(f"order {n} exceeds supported maximum {MAX_ORDER}", 1)
    if n == 0:
        raise Graph6Error("graph with no vertices", 0)

    m = n * (n - 1) // 2
    nbytes = -(-m // 6)
    body = data[pos:]
    if len(body) < nbytes:
        raise Graph6Error(f"expected {nbytes} body bytes, found {len(body)}", len(data))
    if len(body) > nbytes:
        raise Graph6Error("trailing bytes after graph body", pos + nbytes)

    bits = 0
    k = 0
    for off, c in enumerate(body):
        v = c - 63
        for shift in range(5, -1, -1):
            if v >> shift & 1:
                if k >= m:
                    raise Graph6Error("nonzero padding bit", pos + off)
                bits |= 1 << k
            k += 1
    return Graph(n, bits)


def write_graph6(g: Graph) -> bytes:
    if g.n > MAX_ORDER:
        raise ValueError(f"order {g.n} exceeds supported maximum {MAX_ORDER}")
    m = g.n * (g.n - 1) // 2
    out = bytearray(_encode_order(g.n))
    for start in range(0, m, 6):
        v = 0
        for k in range(start, start + 6):
            v = v << 1 | (k < m and g.bits >> k & 1)
        out.append(v + 63)
    return bytes(out)


def read_graph6_file(path: str | Path) -> Iterator[tuple[int, Graph]]:
    """Yield ``(line_number, graph)`` for each record; blank lines and a ``>>graph6<<`` header are skipped.

    A malformed record raises :class:`Graph6Error` with the line number in the message.
    """
    with open(path, "rb") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if line.startswith(b">>graph6<<"):
                line = line[len(b">>graph6<<"):]
            if not line:
                continue
            try:
                g = parse_graph6(line)
            except Graph6Error as exc:
                raise Graph6Error(f"{path}:{lineno}: {exc}", exc.offset) from None
            yield lineno, g


# -- matrices and classification -------------------------------------------


def adjacency_matrix(g: Graph) -> RationalMatrix:
    return RationalMatrix(g.to_numpy().tolist())


def _components(g: Graph) -> list[list[int]]:
    seen = [False] * g.n
    comps = []
    for s in range(g.n):
        if seen[s]:
            continue
        seen[s] = True
        comp, queue = [], deque([s])
        while queue:
            v = queue.popleft()
            comp.append(v)
            for u in g.neighbors(v):
                if not seen[u]:
                    seen[u] = True
                    queue.append(u)
        comps.append(comp)
    return comps


def two_coloring(g: Graph) -> list[int] | None:
    """A proper 2-colouring, or None if the graph has an odd cycle."""
    color = [-1] * g.n
    for s in range(g.n):
        if color[s] >= 0:
            continue
        color[s] = 0
        queue = deque([s])
        while queue:
            v = queue.popleft()
            for u in g.neighbors(v):
                if color[u] < 0:
                    color[u] = 1 - color[v]
                    queue.append(u)
                elif color[u] == color[v]:
                    return None
    return color


def classify(g: Graph) -> GraphClass:
    degs = g.degrees()
    return GraphClass(
        connected=len(_components(g)) == 1,
        bipartite=two_coloring(g) is not None,
        regular=degs[0] if len(set(degs)) == 1 else None,
    )


# -- enumeration --------------------------------------------------------------


def _code_weights(n: int) -> list[int]:
    # first bit of the graph6 string is the most significant
    m = n * (n - 1) // 2
    return [m - 1 - k for k in range(m)]


def canonical_code(g: Graph) -> int:
    """Lexicographic minimum of the graph6 bit string over all vertex permutations, as an integer."""
    m = g.n * (g.n - 1) // 2
    edges = g.edges()
    best = None
    for perm in itertools.permutations(range(g.n)):
        code = 0
        for i, j in edges:
            code |= 1 << (m - 1 - _pair_index(perm[i], perm[j]))
        if best is None or code < best:
            best = code
    return best


def _code_to_bits(code: int, m: int) -> int:
    bits = 0
    for k in range(m):
        if code >> (m - 1 - k) & 1:
            bits |= 1 << k
    return bits


def enumerate_connected(n: int) -> Iterator[Graph]:
    """One representative per isomorphism class of connected graphs on ``n <= 6`` vertices.

    Every labelled graph is mapped to its canonical code (the minimum over all
    ``n!`` relabellings); each distinct code is emitted once, in increasing
    code order, as the graph whose bit string is that code.
    """
    if not 1 <= n <= MAX_ENUMERATION_ORDER:
        raise ValueError(f"built-in enumeration supports 1 <= n <= {MAX_ENUMERATION_ORDER}, got {n}")
    m = n * (n - 1) // 2
    if m == 0:
        yield Graph(1)
        return
    pairs = [(i, j) for j in range(n) for i in range(j)]
    # labelled graphs indexed by their code: bit (m-1-k) of code <-> pair k
    codes = np.arange(1 << m, dtype=np.int64)
    best = codes.copy()
    for perm in itertools.permutations(range(n)):
        if list(perm) == list(range(n)):
            continue
        permuted = np.zeros_like(codes)
        for k, (i, j) in enumerate(pairs):
            target = m - 1 - _pair_index(perm[i], perm[j])
            permuted |= ((codes >> (m - 1 - k)) & 1) << target
        np.minimum(best, permuted, out=best)
    for code in np.unique(best):
        g = Graph(n, _code_to_bits(int(code), m))
        if classify(g).connected:
            yield g


# -- named graphs -------------------------------------------------------------


def empty_graph(n: int) -> Graph:
    return Graph(n)


def complete_graph(n: int) -> Graph:
    return Graph.from_edges(n, itertools.combinations(range(n), 2))


def path_graph(n: int) -> Graph:
    return Graph.from_edges(n, ((i, i + 1) for i in range(n - 1)))


def cycle_graph(n: int) -> Graph:
    if n < 3:
        raise ValueError("a cycle needs at least 3 vertices")
    return Graph.from_edges(n, ((i, (i + 1) % n) for i in range(n)))


def petersen_graph() -> Graph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return Graph.from_edges(10, outer + spokes + inner)


def disjoint_union(g: Graph, h: Graph) -> Graph:
    shifted = [(i + g.n, j + g.n) for i, j in h.edges()]
    return Graph.from_edges(g.n + h.n, g.edges() + shifted)
