"""Congruence of a graph's adjacency matrix to a direct sum of basis graphs.

For odd p the engine normalizes the adjacency matrix to its canonical
diagonal (rank r, determinant square class d), picks a multiset of basis
graphs with total size r and matching class, normalizes their direct sum
to the same canonical diagonal, and glues the two transforms together.
Over F_2 the adjacency matrix is an alternating form and splits into
hyperbolic planes (K2 blocks) plus a radical (K1 blocks).
"""
from __future__ import annotations

import enum
from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

from .exceptions import InfeasibleError, PreconditionError, VerificationError
from .ffield import PrimeModulus, ResidueClass, as_modulus, residue_class_int
from .graphs import (
    CATALOG,
    CATALOG_ORDER,
    Graph,
    adjacency,
    complete,
    direct_sum,
    emit_graph6,
    int_determinant,
)
from .oracle import InvariantReport, compute_invariants
from .symmat import (
    CongruenceMap,
    SymMatrix,
    block_diag,
    compose,
    congruent,
    det_mod,
    invert,
    normalize,
)

DEFAULT_ALLINS_CAP = 8


class CaseTag(enum.Enum):
    CHAR_TWO = "CharTwo"
    CASE1 = "Case1"
    CASE2 = "Case2"
    CASE3 = "Case3"
    CASE4 = "Case4"
    ONLY_TWO_IN_T = "OnlyTwoInT"
    ALL_IN_S = "AllInS"


@dataclass(frozen=True)
class CaseId:
    tag: CaseTag
    p: int
    x6: str | None = None  # "K6", "D" or None, only for ONLY_TWO_IN_T
    invariants: InvariantReport | None = None  # only for ALL_IN_S

    @property
    def name(self) -> str:
        return self.tag.value


@dataclass(frozen=True)
class BasisItem:
    id: str
    graph: Graph
    cls: ResidueClass

    @property
    def size(self) -> int:
        return self.graph.n


@dataclass(frozen=True)
class Decomposition:
    p: int
    k1_count: int
    blocks: tuple[BasisItem, ...]  # catalog order, multiplicities expanded
    transform: CongruenceMap

    def counts(self) -> dict[str, int]:
        c = Counter(b.id for b in self.blocks)
        return {k: c[k] for k in CATALOG_ORDER if c[k]}

    def target_graph(self) -> Graph:
        return direct_sum([b.graph for b in self.blocks] + [complete(1)] * self.k1_count)

    def to_dict(self) -> dict:
        return {
            "p": self.p,
            "n": self.transform.n,
            "k1_count": self.k1_count,
            "blocks": self.counts(),
            "block_graphs": {b.id: emit_graph6(b.graph) for b in self.blocks},
            "block_order": [b.id for b in self.blocks],
            "transform": [list(row) for row in self.transform.R],
        }


# -- case classification -------------------------------------------------------


def _residue_flags(p: int) -> dict[int, ResidueClass]:
    return {x: residue_class_int(x, p) for x in (-1, 2, 3, 5, 7)}


@lru_cache(maxsize=None)
def _invariants(p: int, cap: int) -> InvariantReport:
    # memo population is idempotent: a racing duplicate computes the same report
    return compute_invariants(p, cap)


def classify_prime(p: "int | PrimeModulus", cap: int = DEFAULT_ALLINS_CAP) -> CaseId:
    p = as_modulus(p).p
    if p == 2:
        return CaseId(CaseTag.CHAR_TWO, p)
    if p == 3:
        return CaseId(CaseTag.CASE4, p)
    S = ResidueClass.RESIDUE
    f = _residue_flags(p)
    m1, two, three = f[-1] is S, f[2] is S, f[3] is S
    if not m1:
        return CaseId(CaseTag.CASE3 if three else CaseTag.CASE4, p)
    if not three:
        return CaseId(CaseTag.CASE1 if two else CaseTag.CASE2, p)
    if not two:
        T = ResidueClass.NONRESIDUE
        x6 = "K6" if f[5] is T else "D" if f[7] is T else None
        return CaseId(CaseTag.ONLY_TWO_IN_T, p, x6=x6)
    return CaseId(CaseTag.ALL_IN_S, p, invariants=_invariants(p, cap))


# over F_2 every nonzero element is a square, so K2 (det 1) is "residue"
_F2_K2 = BasisItem("K2", CATALOG["K2"], ResidueClass.RESIDUE)

_CASE_IDS = {
    CaseTag.CASE1: ("K2", "K3", "K4"),
    CaseTag.CASE2: ("K2", "K3", "K4", "B"),
    CaseTag.CASE3: ("K2", "K3", "K4", "C5"),
    CaseTag.CASE4: ("K2", "K3", "C5"),
    CaseTag.ONLY_TWO_IN_T: ("K2", "K3", "B"),
}


def _item(name: str, g: Graph, p: int) -> BasisItem:
    cls = residue_class_int(int_determinant(g), p)
    if cls is ResidueClass.ZERO:
        raise PreconditionError(f"basis graph {name} is singular mod {p}")
    return BasisItem(name, g, cls)


def case_basis(case: CaseId, p: "int | PrimeModulus | None" = None) -> list[BasisItem]:
    """Basis graphs for the case (K1 excluded), in catalog order."""
    p = case.p if p is None else as_modulus(p).p
    return list(_case_basis(case, p))


@lru_cache(maxsize=256)
def _case_basis(case: CaseId, p: int) -> tuple[BasisItem, ...]:
    if case.tag is CaseTag.CHAR_TWO:
        return (_F2_K2,)
    if case.tag is CaseTag.ALL_IN_S:
        inv = case.invariants
        graphs = {"K2": CATALOG["K2"], "K3": CATALOG["K3"], "X4": inv.X4, "X5": inv.X5}
    else:
        names = _CASE_IDS[case.tag]
        if case.tag is CaseTag.ONLY_TWO_IN_T and case.x6:
            names = names + (case.x6,)
        graphs = {k: CATALOG[k] for k in names}
    return tuple(_item(k, graphs[k], p) for k in CATALOG_ORDER if k in graphs)


# -- block selection -----------------------------------------------------------

_INF = float("inf")


def solve_blocks(rank: int, cls: ResidueClass, basis: Sequence[BasisItem]) -> list[BasisItem]:
    """Multiset of basis items with total size ``rank`` and product class ``cls``.

    Fewest blocks wins; among those, the descending size sequence is made
    lexicographically largest (equal sizes fall back to catalog order).
    """
    if rank < 0:
        raise PreconditionError("rank must be nonnegative")
    if rank == 0:
        return []
    if cls not in (ResidueClass.RESIDUE, ResidueClass.NONRESIDUE):
        raise PreconditionError("a positive rank needs a nonzero determinant class")
    want = int(cls is ResidueClass.NONRESIDUE)
    # best[s][q]: fewest blocks of total size s whose nonresidue count has parity q
    best = [[_INF, _INF] for _ in range(rank + 1)]
    best[0][0] = 0
    par = [int(b.cls is ResidueClass.NONRESIDUE) for b in basis]
    for s in range(1, rank + 1):
        for q in (0, 1):
            for b, pb in zip(basis, par):
                if b.size <= s:
                    c = best[s - b.size][q ^ pb] + 1
                    if c < best[s][q]:
                        best[s][q] = c
    if best[rank][want] == _INF:
        raise InfeasibleError(
            f"no combination of {[b.id for b in basis]} has size {rank} and class {cls.value}"
        )
    order = sorted(
        range(len(basis)), key=lambda k: (-basis[k].size, CATALOG_ORDER.index(basis[k].id))
    )
    chosen: list[BasisItem] = []
    s, q = rank, want
    while s:
        for k in order:
            b = basis[k]
            if b.size <= s and best[s - b.size][q ^ par[k]] == best[s][q] - 1:
                chosen.append(b)
                s, q = s - b.size, q ^ par[k]
                break
    return sorted(chosen, key=lambda b: CATALOG_ORDER.index(b.id))


@lru_cache(maxsize=4096)
def _solve_cached(rank: int, cls: ResidueClass, basis: tuple[BasisItem, ...]) -> tuple[BasisItem, ...]:
    return tuple(solve_blocks(rank, cls, basis))


# -- decomposition ---------------------------------------------------------------


@lru_cache(maxsize=4096)
def _target_rows_cached(blocks: tuple[BasisItem, ...], k1: int) -> tuple[tuple[int, ...], ...]:
    return block_diag([b.graph.adjacency_rows() for b in blocks] + [((0,),)] * k1)


def _target_rows(blocks: Sequence[BasisItem], k1: int) -> tuple[tuple[int, ...], ...]:
    return _target_rows_cached(tuple(blocks), k1)


@lru_cache(maxsize=4096)
def _from_canonical(target: SymMatrix) -> CongruenceMap:
    """Map from the canonical diagonal of ``target`` onto ``target`` itself."""
    return invert(normalize(target)[0])


def decompose_matrix(a: SymMatrix, case: CaseId | None = None) -> tuple[list[BasisItem], int, CongruenceMap]:
    """Decompose a symmetric matrix over odd p into basis blocks plus zeros.

    Graph adjacency matrices are always feasible; other symmetric matrices
    may raise ``InfeasibleError``.
    """
    a.modulus.require_odd()
    p = a.p
    case = classify_prime(p) if case is None else case
    r1, form = normalize(a)
    blocks = _solve_cached(form.rank, form.cls, _case_basis(case, p))
    k1 = a.n - form.rank
    target = SymMatrix.trusted(_target_rows(blocks, k1), a.modulus)
    r2 = _from_canonical(target)
    if r2.source != r1.target:
        raise VerificationError("canonical forms of source and target disagree")
    return blocks, k1, compose(r1, r2)


def _adjacency_bits(g: Graph) -> list[int]:
    rows = [0] * g.n
    for i, j in g.edges:
        rows[i] |= 1 << j
        rows[j] |= 1 << i
    return rows


def _apply_bits(rows: list[int], v: int) -> int:
    """A v over F_2, vectors as bitmasks."""
    out = 0
    while v:
        low = v & -v
        out ^= rows[low.bit_length() - 1]
        v ^= low
    return out


def _alternating_split(g: Graph) -> tuple[int, list[int]]:
    """Symplectic basis of the adjacency form over F_2.

    Returns (number of K2 blocks, basis vectors as bitmasks). Taking the
    vectors as the columns of R gives R^t A R = m*K2 + z*K1.
    """
    rows = _adjacency_bits(g)
    # (w, A w) pairs; the form is B(u, w) = parity(u & A w)
    rest = [(1 << i, rows[i]) for i in range(g.n)]
    cols: list[int] = []
    pairs = 0
    while True:
        hit = next(
            (
                (a, b)
                for a in range(len(rest))
                for b in range(a + 1, len(rest))
                if (rest[b][0] & rest[a][1]).bit_count() & 1
            ),
            None,
        )
        if hit is None:
            break
        a, b = hit
        (u, au), (v, av) = rest[a], rest[b]
        nxt = []
        for k, (w, aw) in enumerate(rest):
            if k == a or k == b:
                continue
            # w + B(w, v) u + B(w, u) v is orthogonal to both u and v
            if (w & av).bit_count() & 1:
                w, aw = w ^ u, aw ^ au
            if (rest[k][0] & au).bit_count() & 1:
                w, aw = w ^ v, aw ^ av
            nxt.append((w, aw))
        rest = nxt
        cols += [u, v]
        pairs += 1
    cols += [w for w, _ in rest]
    return pairs, cols


def _f2_rank(vectors: Sequence[int]) -> int:
    basis: dict[int, int] = {}
    for v in vectors:
        while v:
            top = v.bit_length() - 1
            if top not in basis:
                basis[top] = v
                break
            v ^= basis[top]
    return len(basis)


@lru_cache(maxsize=4096)
def _bit_rows(rows) -> list[int]:
    return [sum((v & 1) << j for j, v in enumerate(row)) for row in rows]


def _verify_f2(g: Graph, r_rows, target_rows) -> "VerificationResult":
    n = g.n
    if len(r_rows) != n or any(len(row) != n for row in r_rows):
        return VerificationResult(False, f"transform is not {n}x{n}")
    if len(target_rows) != n:
        return VerificationResult(False, f"direct sum has {len(target_rows)} vertices, graph has {n}")
    cols = [0] * n
    rbits = [0] * n
    for i, row in enumerate(r_rows):
        for c, v in enumerate(row):
            if v == 1:
                cols[c] |= 1 << i
                rbits[i] |= 1 << c
            elif v:
                return VerificationResult(False, "transform entries are not reduced mod 2")
    if _f2_rank(cols) != n:
        return VerificationResult(False, "transform is singular mod 2")
    # rows of A R, then rows of R^t (A R), all as bitmasks
    ar = [_apply_bits(rbits, a) for a in _adjacency_bits(g)]
    got = [_apply_bits(ar, c) for c in cols]
    if got != _bit_rows(target_rows):
        full = tuple(tuple((row >> j) & 1 for j in range(n)) for row in got)
        return _first_mismatch(full, target_rows, 2)
    return VerificationResult(True)


def decompose(x: Graph, p: "int | PrimeModulus", cap: int = DEFAULT_ALLINS_CAP) -> Decomposition:
    m = as_modulus(p)
    a = adjacency(x, m)
    if m.p == 2:
        pairs, cols = _alternating_split(x)
        blocks: list[BasisItem] = [_F2_K2] * pairs
        k1 = x.n - 2 * pairs
        r = tuple(tuple((c >> i) & 1 for c in cols) for i in range(x.n))
        target = SymMatrix.trusted(_target_rows(blocks, k1), m)
        tm = CongruenceMap(r, a, target)
    else:
        blocks, k1, tm = decompose_matrix(a, classify_prime(m, cap=cap))
    dec = Decomposition(m.p, k1, tuple(blocks), tm)
    res = verify(x, dec, m.p)
    if not res:
        raise VerificationError(f"decomposition failed its own check: {res.reason}")
    return dec


@dataclass(frozen=True)
class VerificationResult:
    ok: bool
    reason: str = ""
    mismatch: tuple[int, int] | None = None

    def __bool__(self) -> bool:
        return self.ok


def verify_transform(
    a_rows, r_rows, target_rows, p: int
) -> VerificationResult:
    n = len(a_rows)
    if len(r_rows) != n or any(len(row) != n for row in r_rows):
        return VerificationResult(False, f"transform is not {n}x{n}")
    if len(target_rows) != n:
        return VerificationResult(False, f"direct sum has {len(target_rows)} vertices, graph has {n}")
    if n and det_mod(r_rows, p) == 0:
        return VerificationResult(False, f"transform is singular mod {p}")
    got = congruent(tuple(map(tuple, r_rows)), a_rows, p)
    return _first_mismatch(got, target_rows, p)


def _first_mismatch(got, target_rows, p: int) -> VerificationResult:
    n = len(got)
    for i in range(n):
        for j in range(n):
            if got[i][j] != target_rows[i][j] % p:
                return VerificationResult(
                    False,
                    f"R^t A R differs from the direct sum at ({i},{j}): "
                    f"{got[i][j]} != {target_rows[i][j] % p}",
                    (i, j),
                )
    return VerificationResult(True)


def verify(x: Graph, dec: Decomposition, p: "int | PrimeModulus") -> VerificationResult:
    """Check ``R`` is invertible and ``R^t A(x) R`` equals the rebuilt direct sum."""
    p = as_modulus(p).p
    target = _target_rows(dec.blocks, dec.k1_count)
    if p == 2:
        return _verify_f2(x, dec.transform.R, target)
    return verify_transform(x.adjacency_rows(), dec.transform.R, target, p)


def class_of_blocks(blocks: Sequence[BasisItem], p: int) -> ResidueClass:
    prod = 1
    for b in blocks:
        prod = prod * int_determinant(b.graph) % p
    return residue_class_int(prod, p)


def residue_report(p: int) -> dict[str, str]:
    """Residue classes of -1, 2, 3, 5, 7 at odd p as S/T/0."""
    return {str(x): residue_class_int(x, p).short for x in (-1, 2, 3, 5, 7)}
