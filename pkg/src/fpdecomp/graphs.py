"""Simple graphs, the basis-graph catalog, and graph text formats."""
from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Iterable

from .exceptions import DimensionError, ParseError
from .ffield import PrimeModulus, as_modulus
from .symmat import SymMatrix

Edge = tuple[int, int]


@dataclass(frozen=True)
class Graph:
    n: int
    edges: frozenset[Edge]

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("vertex count must be nonnegative")
        for e in self.edges:
            i, j = e
            if not (0 <= i < j < self.n):
                raise ValueError(f"edge {e} is not a normalized pair in range(0, {self.n})")

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Edge]) -> "Graph":
        norm = set()
        for i, j in edges:
            if i == j:
                raise ValueError(f"loop at vertex {i}")
            norm.add((min(i, j), max(i, j)))
        return cls(n, frozenset(norm))

    def sorted_edges(self) -> list[Edge]:
        return sorted(self.edges)

    def adjacency_rows(self) -> tuple[tuple[int, ...], ...]:
        a = [[0] * self.n for _ in range(self.n)]
        for i, j in self.edges:
            a[i][j] = a[j][i] = 1
        return tuple(tuple(row) for row in a)

    def __str__(self) -> str:
        return format_edge_list(self)


def adjacency(g: Graph, p: "int | PrimeModulus") -> SymMatrix:
    # 0/1 symmetric by construction; no need to re-validate
    return SymMatrix.trusted(g.adjacency_rows(), as_modulus(p))


def complete(n: int) -> Graph:
    return Graph(n, frozenset((i, j) for i in range(n) for j in range(i + 1, n)))


def cycle(n: int) -> Graph:
    return Graph.from_edges(n, ((i, (i + 1) % n) for i in range(n)))


def empty(n: int) -> Graph:
    return Graph(n, frozenset())


# Bowtie: center 0 joined to all, plus the two "wing" edges 1-4 and 2-3.
BOWTIE = Graph.from_edges(5, [(0, 1), (0, 2), (0, 3), (0, 4), (1, 4), (2, 3)])

# A..F = 0..5: 4-cycle ABCD with chord BD, E ~ A,B,D and F ~ B,C,D.
GRAPH_D = Graph.from_edges(
    6,
    [(0, 1), (1, 2), (2, 3), (0, 3), (1, 3), (0, 4), (1, 4), (3, 4), (1, 5), (2, 5), (3, 5)],
)

CATALOG: dict[str, Graph] = {
    "K1": complete(1),
    "K2": complete(2),
    "K3": complete(3),
    "K4": complete(4),
    "K6": complete(6),
    "C5": cycle(5),
    "B": BOWTIE,
    "D": GRAPH_D,
}

# Output order for blocks of a direct sum; K1 is always placed last.
CATALOG_ORDER = ("K2", "K3", "K4", "K6", "C5", "B", "D", "X4", "X5")


def catalog_graph(name: str) -> Graph:
    try:
        return CATALOG[name]
    except KeyError:
        raise KeyError(f"unknown catalog graph {name!r}") from None


def direct_sum(parts: Iterable[Graph]) -> Graph:
    edges = []
    off = 0
    for g in parts:
        edges.extend((i + off, j + off) for i, j in g.edges)
        off += g.n
    return Graph(off, frozenset(edges))


# -- integer determinants -----------------------------------------------------


def hadamard_bound(n: int) -> int:
    """Upper bound on |det| of an n x n 0/1 matrix: (n+1)^((n+1)/2) / 2^n."""
    return math.isqrt((n + 1) ** (n + 1)) // 2**n + 1


INT64_MAX = 2**63 - 1
# Largest order whose 0/1 determinants (and Bareiss intermediates, which are
# minors) are guaranteed to fit a signed 64-bit word.
MAX_INT_DET_ORDER = max(n for n in range(1, 80) if hadamard_bound(n) <= INT64_MAX)


def int_determinant_rows(a) -> int:
    """Fraction-free (Bareiss) determinant of an integer matrix."""
    n = len(a)
    if n == 0:
        return 1
    m = [list(row) for row in a]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            piv = next((i for i in range(k + 1, n) if m[i][k]), None)
            if piv is None:
                return 0
            m[k], m[piv] = m[piv], m[k]
            sign = -sign
        mkk = m[k][k]
        mk = m[k]
        for i in range(k + 1, n):
            mi = m[i]
            mik = mi[k]
            for j in range(k + 1, n):
                mi[j] = (mi[j] * mkk - mik * mk[j]) // prev
        prev = mkk
    return sign * m[n - 1][n - 1]


def int_determinant(g: Graph) -> int:
    if g.n > MAX_INT_DET_ORDER:
        raise DimensionError(
            f"{g.n} vertices exceeds the 64-bit determinant bound ({MAX_INT_DET_ORDER})"
        )
    return int_determinant_rows(g.adjacency_rows())


# -- graph6 -------------------------------------------------------------------

_G6_HEADER = ">>graph6<<"


def _g6_size(n: int) -> str:
    if n < 63:
        return chr(n + 63)
    if n < 258048:
        return "~" + "".join(chr(((n >> s) & 63) + 63) for s in (12, 6, 0))
    raise ValueError("graph6 supports at most 258047 vertices here")


def emit_graph6(g: Graph) -> str:
    bits = [
        1 if (i, j) in g.edges else 0 for j in range(1, g.n) for i in range(j)
    ]
    bits += [0] * (-len(bits) % 6)
    body = "".join(
        chr(63 + int("".join(map(str, bits[k : k + 6])), 2)) for k in range(0, len(bits), 6)
    )
    return _g6_size(g.n) + body


def parse_graph6(text: str) -> Graph:
    s = text.strip()
    base = 0
    if s.startswith(_G6_HEADER):
        base = len(_G6_HEADER)
        s = s[base:]
    if not s:
        raise ParseError("empty graph6 string", base)
    for k, ch in enumerate(s):
        if not 63 <= ord(ch) <= 126:
            raise ParseError(f"invalid graph6 byte {ch!r}", base + k)
    if s[0] != "~":
        n, pos = ord(s[0]) - 63, 1
    else:
        if len(s) < 4:
            raise ParseError("truncated graph6 size header", base + len(s))
        if s[1] == "~":
            raise ParseError("graph6 8-byte size header not supported", base + 1)
        n = ((ord(s[1]) - 63) << 12) | ((ord(s[2]) - 63) << 6) | (ord(s[3]) - 63)
        pos = 4
    nbits = n * (n - 1) // 2
    need = (nbits + 5) // 6
    body = s[pos:]
    if len(body) != need:
        raise ParseError(
            f"graph6 body has {len(body)} bytes, expected {need} for n={n}",
            base + pos + min(len(body), need),
        )
    bits = []
    for ch in body:
        v = ord(ch) - 63
        bits.extend((v >> (5 - b)) & 1 for b in range(6))
    if any(bits[nbits:]):
        raise ParseError("nonzero graph6 padding bits", base + len(s) - 1)
    edges = []
    k = 0
    for j in range(1, n):
        for i in range(j):
            if bits[k]:
                edges.append((i, j))
            k += 1
    return Graph(n, frozenset(edges))


# -- edge-list text -----------------------------------------------------------

_EDGE_LIST = re.compile(r"^\s*n\s*=\s*(\d+)\s*(?:;(.*))?$", re.S)
_EDGE = re.compile(r"^\s*(\d+)\s*-\s*(\d+)\s*$")


def parse_edge_list(text: str) -> Graph:
    """Parse ``"n=<int>; i-j, k-l, ..."`` with 0-based vertices."""
    m = _EDGE_LIST.match(text)
    if not m:
        raise ParseError("edge list must look like 'n=<int>; i-j, ...'", 0)
    n = int(m.group(1))
    rest = m.group(2) or ""
    offset = m.start(2) if m.group(2) is not None else len(text)
    edges: set[Edge] = set()
    if rest.strip():
        for item in rest.split(","):
            em = _EDGE.match(item)
            if not em:
                raise ParseError(f"bad edge {item.strip()!r}", offset)
            i, j = int(em.group(1)), int(em.group(2))
            if i == j:
                raise ParseError(f"loop at vertex {i}", offset)
            if not (i < n and j < n):
                raise ParseError(f"vertex out of range in edge {i}-{j} (n={n})", offset)
            e = (min(i, j), max(i, j))
            if e in edges:
                raise ParseError(f"duplicate edge {i}-{j}", offset)
            edges.add(e)
            offset += len(item) + 1
    return Graph(n, frozenset(edges))


def format_edge_list(g: Graph) -> str:
    body = ", ".join(f"{i}-{j}" for i, j in g.sorted_edges())
    return f"n={g.n}; {body}" if body else f"n={g.n}"


def parse_graph(text: str) -> Graph:
    """Accept an edge list (starts with ``n=``) or a graph6 string."""
    if re.match(r"\s*n\s*=", text):
        return parse_edge_list(text)
    return parse_graph6(text)
