"""Brute-force ground truth over all labeled graphs on a few vertices.

A graph on ``n`` vertices is identified with a bitmask over the
``n(n-1)/2`` vertex pairs taken in row-major order: bit 0 is pair (0, 1),
bit 1 is (0, 2), ..., bit ``n-2`` is (0, n-1), then (1, 2), and so on.
Masks are scanned in ascending order, which fixes every "first witness".

Determinants are exact integers (vectorised Bareiss in int64, safe far
beyond the orders enumerated here) reduced mod p afterwards, so one
enumeration serves every prime.
"""
from __future__ import annotations

import random
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Iterable, Iterator, Sequence

import numpy as np

from .exceptions import CapExceededError, PreconditionError
from .ffield import ResidueClass, as_modulus, legendre, residue_class_int
from .graphs import Graph, complete, cycle, direct_sum, emit_graph6, int_determinant

DEFAULT_CAP = 7
# n = 8 means 2**28 masks; allowed only when explicitly requested.
LARGE_CAP = 8
CHUNK = 1 << 15


@lru_cache(maxsize=None)
def mask_pairs(n: int) -> tuple[tuple[int, int], ...]:
    return tuple((i, j) for i in range(n) for j in range(i + 1, n))


def mask_count(n: int) -> int:
    return 1 << (n * (n - 1) // 2)


def graph_from_mask(n: int, mask: int) -> Graph:
    pairs = mask_pairs(n)
    return Graph(n, frozenset(pairs[b] for b in range(len(pairs)) if mask >> b & 1))


def mask_from_graph(g: Graph) -> int:
    index = {e: b for b, e in enumerate(mask_pairs(g.n))}
    return sum(1 << index[e] for e in g.edges)


@dataclass(frozen=True)
class EnumerationCursor:
    n: int
    mask: int = 0

    def __post_init__(self):
        if not 0 <= self.mask < mask_count(self.n):
            raise ValueError(f"mask {self.mask} out of range for n={self.n}")

    def graph(self) -> Graph:
        return graph_from_mask(self.n, self.mask)

    def advance(self) -> "EnumerationCursor | None":
        nxt = self.mask + 1
        return EnumerationCursor(self.n, nxt) if nxt < mask_count(self.n) else None


def enumerate_graphs(n: int, start: int = 0, stop: int | None = None) -> Iterator[Graph]:
    stop = mask_count(n) if stop is None else stop
    for mask in range(start, stop):
        yield graph_from_mask(n, mask)


# -- vectorised determinants --------------------------------------------------


def adjacency_batch(n: int, masks: np.ndarray) -> np.ndarray:
    masks = np.asarray(masks, dtype=np.int64)
    a = np.zeros((len(masks), n, n), dtype=np.int64)
    pairs = mask_pairs(n)
    if pairs:
        ii = np.array([i for i, _ in pairs])
        jj = np.array([j for _, j in pairs])
        bits = (masks[:, None] >> np.arange(len(pairs), dtype=np.int64)) & 1
        a[:, ii, jj] = bits
        a[:, jj, ii] = bits
    return a


def batch_determinants(a: np.ndarray) -> np.ndarray:
    """Exact Bareiss determinants of a stack of integer matrices."""
    a = np.array(a, dtype=np.int64, copy=True)
    b, n, _ = a.shape
    if n == 0:
        return np.ones(b, dtype=np.int64)
    idx = np.arange(b)
    sign = np.ones(b, dtype=np.int64)
    alive = np.ones(b, dtype=bool)
    prev = np.ones(b, dtype=np.int64)
    for k in range(n - 1):
        nz = a[:, k:, k] != 0
        has = nz.any(axis=1)
        alive &= has
        piv = nz.argmax(axis=1) + k
        swap = piv != k
        if swap.any():
            s = idx[swap]
            rk = a[s, k].copy()
            a[s, k] = a[s, piv[swap]]
            a[s, piv[swap]] = rk
            sign[swap] *= -1
        dead = ~has
        if dead.any():
            a[dead, k, k] = 1
        mkk = a[:, k, k]
        a[:, k + 1 :, k + 1 :] = (
            a[:, k + 1 :, k + 1 :] * mkk[:, None, None]
            - a[:, k + 1 :, k : k + 1] * a[:, k : k + 1, k + 1 :]
        ) // prev[:, None, None]
        prev = mkk
    det = sign * a[:, n - 1, n - 1]
    det[~alive] = 0
    return det


def mask_determinants(n: int, start: int, stop: int) -> np.ndarray:
    return batch_determinants(adjacency_batch(n, np.arange(start, stop, dtype=np.int64)))


def _ranges(total: int, chunk: int = CHUNK) -> list[tuple[int, int]]:
    return [(s, min(s + chunk, total)) for s in range(0, total, chunk)]


def _pmap(func: Callable, args: Sequence, workers: int) -> list:
    if workers <= 1 or len(args) <= 1:
        return [func(*a) for a in args]
    with ProcessPoolExecutor(max_workers=workers) as ex:
        return list(ex.map(func, *zip(*args)))


def _check_cap(n: int, allow_large: bool) -> None:
    limit = LARGE_CAP if allow_large else DEFAULT_CAP
    if n > limit:
        raise CapExceededError(
            f"n={n} exceeds the enumeration cap {limit}"
            + ("" if allow_large else " (n=8 needs allow_large)"),
            cap=limit,
        )


def _spectrum_range(n: int, start: int, stop: int) -> frozenset[int]:
    d = mask_determinants(n, start, stop)
    return frozenset(int(v) for v in np.unique(d) if v)


def det_spectrum(n: int, workers: int = 1, allow_large: bool = False) -> set[int]:
    """All nonzero determinants of adjacency matrices of graphs on n vertices."""
    if n < 1:
        raise PreconditionError("det_spectrum needs n >= 1")
    _check_cap(n, allow_large)
    parts = _pmap(_spectrum_range, [(n, s, e) for s, e in _ranges(mask_count(n))], workers)
    return set().union(*parts)


def format_spectrum(n: int, values: Iterable[int]) -> str:
    return f"G_{n} = {{{','.join(str(v) for v in sorted(values))}}}"


# -- N(p), N'(p) ----------------------------------------------------------------


@dataclass(frozen=True)
class InvariantReport:
    p: int
    N: int
    X4: Graph
    N_prime: int
    X5: Graph
    cap: int

    def to_dict(self) -> dict:
        return {
            "p": self.p,
            "N": self.N,
            "X4": emit_graph6(self.X4),
            "X4_det": int_determinant(self.X4),
            "N_prime": self.N_prime,
            "X5": emit_graph6(self.X5),
            "X5_det": int_determinant(self.X5),
            "cap": self.cap,
        }


def is_all_in_s(p: int) -> bool:
    return p >= 5 and all(legendre(x, p) == 1 for x in (-1, 2, 3))


def _first_nonresidue_mask(n: int, p: int, start: int, stop: int) -> int | None:
    d = mask_determinants(n, start, stop)
    bad = {int(v) for v in np.unique(d) if v and legendre(int(v), p) == -1}
    if not bad:
        return None
    hit = np.isin(d, np.fromiter(bad, dtype=np.int64))
    return start + int(np.argmax(hit))


def first_nonresidue_witness(n: int, p: int, workers: int = 1) -> Graph | None:
    """Lowest-mask graph on n vertices whose determinant is a nonresidue mod p."""
    ranges = _ranges(mask_count(n))
    step = max(1, workers)
    for k in range(0, len(ranges), step):
        batch = [(n, p, s, e) for s, e in ranges[k : k + step]]
        hits = [m for m in _pmap(_first_nonresidue_mask, batch, workers) if m is not None]
        if hits:
            return graph_from_mask(n, min(hits))
    return None


def compute_invariants(p: int, cap: int = DEFAULT_CAP, workers: int = 1) -> InvariantReport:
    """Smallest two orders N < N' carrying a graph with nonresidue determinant.

    Raises ``CapExceededError`` (with whatever was found in ``partial``) if
    the scan runs past ``cap`` vertices first.
    """
    p = as_modulus(p).p
    if not is_all_in_s(p):
        raise PreconditionError(f"p={p} does not have -1, 2, 3 all quadratic residues")
    if cap < 2:
        raise PreconditionError("cap must be at least 2")
    if cap > LARGE_CAP:
        raise PreconditionError(f"cap {cap} is beyond the enumerable limit {LARGE_CAP}")
    found: list[tuple[int, Graph]] = []
    for n in range(2, cap + 1):
        g = first_nonresidue_witness(n, p, workers)
        if g is not None:
            found.append((n, g))
            if len(found) == 2:
                (n4, x4), (n5, x5) = found
                return InvariantReport(p, n4, x4, n5, x5, cap)
    partial = {}
    if found:
        partial = {"N": found[0][0], "X4": emit_graph6(found[0][1])}
    what = "N'(p)" if found else "N(p)"
    raise CapExceededError(f"{what} for p={p} not found within {cap} vertices", cap, partial)


def check_invariant_report(rep: InvariantReport) -> list[str]:
    """Independent re-scan of a report's claims; returns a list of violations."""
    from .graphs import adjacency
    from .symmat import determinant

    problems = []
    p = rep.p
    for label, g, size in (("X4", rep.X4, rep.N), ("X5", rep.X5, rep.N_prime)):
        if g.n != size:
            problems.append(f"{label} has {g.n} vertices, expected {size}")
        d = determinant(adjacency(g, p))
        if residue_class_int(d.value, p) is not ResidueClass.NONRESIDUE:
            problems.append(f"{label} determinant {d.value} is not a nonresidue mod {p}")
    if not rep.N < rep.N_prime:
        problems.append("N' must exceed N")
    for n in list(range(2, rep.N)) + list(range(rep.N + 1, rep.N_prime)):
        for mask in range(mask_count(n)):
            d = determinant(adjacency(graph_from_mask(n, mask), p)).value
            if d and legendre(d, p) == -1:
                problems.append(f"graph n={n} mask={mask} has nonresidue determinant")
                break
    return problems


# -- theorem-level drivers ------------------------------------------------------


@dataclass
class VerifyReport:
    p: int
    n_max: int
    case: str
    graphs_checked: int = 0
    per_n: dict[int, int] = field(default_factory=dict)
    failures: list[dict] = field(default_factory=list)
    block_usage: Counter = field(default_factory=Counter)

    @property
    def ok(self) -> bool:
        return not self.failures

    def merge(self, other: "VerifyReport") -> None:
        self.graphs_checked += other.graphs_checked
        for n, c in other.per_n.items():
            self.per_n[n] = self.per_n.get(n, 0) + c
        self.failures.extend(other.failures)
        self.block_usage.update(other.block_usage)

    def to_dict(self) -> dict:
        return {
            "p": self.p,
            "n_max": self.n_max,
            "case": self.case,
            "graphs_checked": self.graphs_checked,
            "per_n": {str(n): self.per_n[n] for n in sorted(self.per_n)},
            "failures": sorted(self.failures, key=lambda f: (f["n"], f["mask"])),
            "block_usage": {k: self.block_usage[k] for k in sorted(self.block_usage)},
        }


def verify_masks(p: int, n: int, masks: Iterable[int], cap: int | None = None) -> VerifyReport:
    """Decompose and verify each listed graph; failures are recorded, never raised."""
    from .decomp import DEFAULT_ALLINS_CAP, case_basis, classify_prime, decompose, verify

    cap = DEFAULT_ALLINS_CAP if cap is None else cap
    case = classify_prime(p, cap=cap)
    allowed = {"K1", "K2"} if p == 2 else {b.id for b in case_basis(case, p)} | {"K1"}
    rep = VerifyReport(p, n, case.name)
    for mask in masks:
        g = graph_from_mask(n, mask)
        rep.graphs_checked += 1
        rep.per_n[n] = rep.per_n.get(n, 0) + 1
        try:
            dec = decompose(g, p, cap=cap)
        except Exception as exc:  # reported with the offending mask
            rep.failures.append({"n": n, "mask": mask, "reason": f"{type(exc).__name__}: {exc}"})
            continue
        res = verify(g, dec, p)
        if not res:
            rep.failures.append({"n": n, "mask": mask, "reason": res.reason})
            continue
        ids = [b.id for b in dec.blocks] + ["K1"] * dec.k1_count
        stray = sorted(set(ids) - allowed)
        if stray:
            rep.failures.append({"n": n, "mask": mask, "reason": f"blocks outside basis: {stray}"})
        rep.block_usage.update(ids)
    return rep


def _verify_range(p: int, n: int, start: int, stop: int, cap: int | None) -> VerifyReport:
    return verify_masks(p, n, range(start, stop), cap)


def exhaustive_verify(
    p: int, n_max: int, workers: int = 1, allow_large: bool = False, cap: int | None = None
) -> VerifyReport:
    """Run decompose + verify on every labeled graph with 1..n_max vertices."""
    from .decomp import classify_prime

    _check_cap(n_max, allow_large)
    p = as_modulus(p).p
    rep = VerifyReport(p, n_max, classify_prime(p, **({} if cap is None else {"cap": cap})).name)
    for n in range(1, n_max + 1):
        args = [(p, n, s, e, cap) for s, e in _ranges(mask_count(n), 4096)]
        for part in _pmap(_verify_range, args, workers):
            rep.merge(part)
    return rep


def sample_masks(n: int, count: int, seed: int = 0) -> list[int]:
    """``count`` distinct masks for n vertices, sorted, from a seeded RNG."""
    total = mask_count(n)
    count = min(count, total)
    return sorted(random.Random(seed).sample(range(total), count))


def sampled_verify(
    p: int, n: int, count: int, seed: int = 0, workers: int = 1, cap: int | None = None
) -> VerifyReport:
    masks = sample_masks(n, count, seed)
    chunks = [masks[k : k + 2048] for k in range(0, len(masks), 2048)]
    from .decomp import classify_prime

    rep = VerifyReport(p, n, classify_prime(p, **({} if cap is None else {"cap": cap})).name)
    for part in _pmap(verify_masks, [(p, n, c, cap) for c in chunks], workers):
        rep.merge(part)
    return rep


def lemma_checks() -> dict:
    """Closed-form determinant facts, checked by direct computation."""
    results = {}
    for n in range(2, 9):
        got = int_determinant(complete(n + 1))
        results[f"det K{n + 1}"] = {"expected": (-1) ** n * n, "got": got}
    results["det K2"] = {"expected": -1, "got": int_determinant(complete(2))}
    samples = {"K3": complete(3), "C5": cycle(5), "K4": complete(4), "K2": complete(2)}
    for name, g in samples.items():
        base = int_determinant(g)
        for m in range(3):
            k = 2 * m + 1
            got = int_determinant(direct_sum([g] * k))
            results[f"det {k}*{name}"] = {"expected": base**k, "got": got}
    ok = all(r["expected"] == r["got"] for r in results.values())
    return {"ok": ok, "checks": results}
