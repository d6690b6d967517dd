"""Arithmetic in the prime field F_p and its quadratic residue structure.

Moduli are limited to ``p < 2**64``: that is the range where the fixed
Miller-Rabin base set below is a proof of primality. Python integers never
overflow, so the bound is about the primality guarantee, not word size.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import lru_cache

from .exceptions import (
    FieldDivisionError,
    ModulusMismatchError,
    NoSquareRootError,
    PreconditionError,
    UnsupportedModulusError,
)

MAX_MODULUS = 2**64

# Deterministic for every n < 3.3 * 10**24.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


@lru_cache(maxsize=1024)
def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin primality test for ``n < 2**64``."""
    if n < 2:
        return False
    for q in _MR_BASES:
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


class ResidueClass(enum.Enum):
    ZERO = "zero"
    RESIDUE = "residue"
    NONRESIDUE = "nonresidue"

    @property
    def short(self) -> str:
        return {"zero": "0", "residue": "S", "nonresidue": "T"}[self.value]

    def __mul__(self, other: "ResidueClass") -> "ResidueClass":
        if not isinstance(other, ResidueClass):
            return NotImplemented
        if ResidueClass.ZERO in (self, other):
            return ResidueClass.ZERO
        return ResidueClass.RESIDUE if self is other else ResidueClass.NONRESIDUE


@dataclass(frozen=True)
class PrimeModulus:
    p: int

    def __post_init__(self):
        if not isinstance(self.p, int) or isinstance(self.p, bool):
            raise PreconditionError(f"modulus must be an int, got {self.p!r}")
        if not 2 <= self.p < MAX_MODULUS:
            raise PreconditionError(f"modulus {self.p} outside [2, 2**64)")
        if not is_prime(self.p):
            raise PreconditionError(f"{self.p} is not prime")

    @property
    def is_char_two(self) -> bool:
        return self.p == 2

    def require_odd(self) -> None:
        if self.p == 2:
            raise UnsupportedModulusError("operation requires an odd prime, got p = 2")

    def __call__(self, value: int) -> "Scalar":
        return Scalar(value % self.p, self)

    def __int__(self) -> int:
        return self.p

    def __str__(self) -> str:
        return str(self.p)


def as_modulus(p: "int | PrimeModulus") -> PrimeModulus:
    return p if isinstance(p, PrimeModulus) else PrimeModulus(p)


@dataclass(frozen=True)
class Scalar:
    """An element of F_p held as its canonical representative in ``[0, p)``."""

    value: int
    modulus: PrimeModulus

    def __post_init__(self):
        if not 0 <= self.value < self.modulus.p:
            raise PreconditionError(
                f"{self.value} is not a canonical residue mod {self.modulus.p}"
            )

    def _check(self, other: "Scalar") -> int:
        if not isinstance(other, Scalar):
            raise TypeError(f"expected Scalar, got {type(other).__name__}")
        if other.modulus != self.modulus:
            raise ModulusMismatchError(
                f"mixed moduli {self.modulus.p} and {other.modulus.p}"
            )
        return self.modulus.p

    def __add__(self, other: "Scalar") -> "Scalar":
        p = self._check(other)
        return Scalar((self.value + other.value) % p, self.modulus)

    def __sub__(self, other: "Scalar") -> "Scalar":
        p = self._check(other)
        return Scalar((self.value - other.value) % p, self.modulus)

    def __mul__(self, other: "Scalar") -> "Scalar":
        p = self._check(other)
        return Scalar(self.value * other.value % p, self.modulus)

    def __neg__(self) -> "Scalar":
        return Scalar(-self.value % self.modulus.p, self.modulus)

    def __truediv__(self, other: "Scalar") -> "Scalar":
        self._check(other)
        return self * other.inverse()

    def __pow__(self, k: int) -> "Scalar":
        if k < 0:
            return self.inverse() ** -k
        return Scalar(pow(self.value, k, self.modulus.p), self.modulus)

    def inverse(self) -> "Scalar":
        if self.value == 0:
            raise FieldDivisionError(f"0 has no inverse mod {self.modulus.p}")
        return Scalar(pow(self.value, -1, self.modulus.p), self.modulus)

    def __int__(self) -> int:
        return self.value

    def __repr__(self) -> str:
        return f"Scalar({self.value} mod {self.modulus.p})"


def add(a: Scalar, b: Scalar) -> Scalar:
    return a + b


def sub(a: Scalar, b: Scalar) -> Scalar:
    return a - b


def mul(a: Scalar, b: Scalar) -> Scalar:
    return a * b


def neg(a: Scalar) -> Scalar:
    return -a


def inv(a: Scalar) -> Scalar:
    return a.inverse()


# Integer-level helpers. Matrix code works on plain ints for speed and only
# wraps results in Scalar at the API boundary.


def legendre(x: int, p: int) -> int:
    """Euler's criterion: 0, 1 or -1 for zero, residue, nonresidue (odd p)."""
    return _legendre(x % p, p)


@lru_cache(maxsize=1 << 16)
def _legendre(x: int, p: int) -> int:
    if x == 0:
        return 0
    return 1 if pow(x, (p - 1) // 2, p) == 1 else -1


def residue_class_int(x: int, p: int) -> ResidueClass:
    if p == 2:
        raise UnsupportedModulusError("quadratic residue classes need an odd prime")
    return (ResidueClass.ZERO, ResidueClass.RESIDUE, ResidueClass.NONRESIDUE)[legendre(x, p)]


def residue_class(x: Scalar) -> ResidueClass:
    return residue_class_int(x.value, x.modulus.p)


@lru_cache(maxsize=None)
def smallest_nonresidue_int(p: int) -> int:
    if p == 2:
        raise UnsupportedModulusError("F_2 has no quadratic nonresidues")
    y = 2
    while legendre(y, p) != -1:
        y += 1
    return y


def smallest_nonresidue(p: "int | PrimeModulus") -> Scalar:
    m = as_modulus(p)
    return m(smallest_nonresidue_int(m.p))


def sqrt_int(x: int, p: int) -> int:
    """Square root mod odd prime ``p`` by Tonelli-Shanks; returns the smaller root."""
    if p == 2:
        raise UnsupportedModulusError("sqrt is only provided for odd primes")
    return _sqrt(x % p, p)


@lru_cache(maxsize=1 << 16)
def _sqrt(x: int, p: int) -> int:
    if x == 0:
        return 0
    if legendre(x, p) != 1:
        raise NoSquareRootError(f"{x} is a quadratic nonresidue mod {p}")
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    if s == 1:
        r = pow(x, (p + 1) // 4, p)
    else:
        m = s
        c = pow(smallest_nonresidue_int(p), q, p)
        t = pow(x, q, p)
        r = pow(x, (q + 1) // 2, p)
        while t != 1:
            i, t2 = 0, t
            while t2 != 1:
                t2 = t2 * t2 % p
                i += 1
            b = pow(c, 1 << (m - i - 1), p)
            m = i
            c = b * b % p
            t = t * c % p
            r = r * b % p
    return min(r, p - r)


def sqrt(x: Scalar) -> Scalar:
    return Scalar(sqrt_int(x.value, x.modulus.p), x.modulus)


def two_square_split_int(x: int, p: int) -> tuple[int, int]:
    x %= p
    if residue_class_int(x, p) is not ResidueClass.NONRESIDUE:
        raise PreconditionError(f"{x} is not a quadratic nonresidue mod {p}")
    t = smallest_nonresidue_int(p)
    s = x * pow(t, -1, p) % p
    return s, s * (t - 1) % p


def two_square_split(x: Scalar) -> tuple[Scalar, Scalar]:
    """Write a nonresidue ``x`` as ``a + b`` with both summands residues.

    With ``t`` the least nonresidue, ``t - 1`` is a residue and so is
    ``s = x / t``; then ``x = s + s(t - 1)``.
    """
    a, b = two_square_split_int(x.value, x.modulus.p)
    return x.modulus(a), x.modulus(b)


def residues(p: int) -> list[int]:
    """Sorted quadratic residues of F_p^x (by squaring, not Euler's criterion)."""
    return sorted({a * a % p for a in range(1, p)})


def nonresidues(p: int) -> list[int]:
    s = set(residues(p))
    return [x for x in range(1, p) if x not in s]
