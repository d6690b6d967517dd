import pytest
from hypothesis import given, strategies as st

from fpdecomp import ffield
from fpdecomp.exceptions import (
    FieldDivisionError,
    ModulusMismatchError,
    NoSquareRootError,
    PreconditionError,
    UnsupportedModulusError,
)
from fpdecomp.ffield import PrimeModulus, ResidueClass, Scalar

ODD_PRIMES_200 = [p for p in range(3, 200) if ffield.is_prime(p)]
ODD_PRIMES_50 = [p for p in ODD_PRIMES_200 if p <= 50]


def by_squaring(p):
    squares = {a * a % p for a in range(1, p)}
    return {x: ResidueClass.ZERO if x == 0 else
            ResidueClass.RESIDUE if x in squares else ResidueClass.NONRESIDUE
            for x in range(p)}


class TestScalar:
    def test_inverse(self):
        assert ffield.inv(PrimeModulus(7)(3)).value == 5

    def test_neg_zero(self):
        for p in (2, 3, 101):
            assert ffield.neg(PrimeModulus(p)(0)).value == 0

    def test_mul(self):
        f5 = PrimeModulus(5)
        assert ffield.mul(f5(2), f5(3)).value == 1

    def test_field_ops_mod_7(self):
        f = PrimeModulus(7)
        assert (f(5) + f(4)).value == 2
        assert (f(2) - f(5)).value == 4
        assert (f(3) / f(5)).value == 2
        assert (f(3) ** -1).value == 5

    def test_zero_has_no_inverse(self):
        with pytest.raises(FieldDivisionError):
            PrimeModulus(11)(0).inverse()

    def test_mixed_moduli(self):
        with pytest.raises(ModulusMismatchError):
            PrimeModulus(5)(1) + PrimeModulus(7)(1)

    def test_noncanonical_value(self):
        with pytest.raises(PreconditionError):
            Scalar(7, PrimeModulus(7))

    @pytest.mark.parametrize("bad", [0, 1, 4, 15, 2**64 + 13, 561])
    def test_rejects_non_primes(self, bad):
        with pytest.raises(PreconditionError):
            PrimeModulus(bad)

    def test_large_prime_accepted(self):
        assert PrimeModulus(2**61 - 1).p == 2**61 - 1

    def test_is_prime_matches_trial_division(self):
        def slow(n):
            return n > 1 and all(n % d for d in range(2, int(n**0.5) + 1))
        assert all(ffield.is_prime(n) == slow(n) for n in range(3000))


class TestResidues:
    def test_examples(self):
        assert ffield.residue_class(PrimeModulus(7)(2)) is ResidueClass.RESIDUE
        assert ffield.residue_class(PrimeModulus(7)(0)) is ResidueClass.ZERO
        assert ffield.residue_class(PrimeModulus(5)(2)) is ResidueClass.NONRESIDUE

    def test_char_two_rejected(self):
        with pytest.raises(UnsupportedModulusError):
            ffield.residue_class(PrimeModulus(2)(1))

    @pytest.mark.parametrize("p", ODD_PRIMES_200)
    def test_euler_matches_squaring(self, p):
        truth = by_squaring(p)
        assert all(ffield.residue_class_int(x, p) is truth[x] for x in range(p))
        assert len(ffield.residues(p)) == len(ffield.nonresidues(p)) == (p - 1) // 2

    @pytest.mark.parametrize("p", ODD_PRIMES_50)
    def test_group_law(self, p):
        for x in range(1, p):
            cx = ffield.residue_class_int(x, p)
            for y in range(1, p):
                assert ffield.residue_class_int(x * y, p) is cx * ffield.residue_class_int(y, p)

    @pytest.mark.parametrize("p,t", [(7, 3), (5, 2), (13, 2), (3, 2), (73, 5)])
    def test_smallest_nonresidue(self, p, t):
        assert ffield.smallest_nonresidue(p).value == t

    @pytest.mark.parametrize("p", ODD_PRIMES_200)
    def test_t_minus_one_is_residue(self, p):
        t = ffield.smallest_nonresidue_int(p)
        assert t == min(ffield.nonresidues(p))
        assert ffield.legendre(t - 1, p) == 1


class TestSqrt:
    @pytest.mark.parametrize("p,x,r", [(7, 2, 3), (13, 4, 2), (7, 0, 0), (101, 0, 0)])
    def test_examples(self, p, x, r):
        assert ffield.sqrt(PrimeModulus(p)(x)).value == r

    def test_nonresidue(self):
        with pytest.raises(NoSquareRootError):
            ffield.sqrt(PrimeModulus(7)(3))

    @pytest.mark.parametrize("p", ODD_PRIMES_200)
    def test_smaller_root_exhaustive(self, p):
        for x in ffield.residues(p):
            r = ffield.sqrt_int(x, p)
            assert r * r % p == x
            assert r <= p - r

    @given(st.sampled_from([10**9 + 7, 998244353, 2**61 - 1, 2**31 - 1]), st.integers(1, 2**62))
    def test_large_primes(self, p, a):
        x = a * a % p
        r = ffield.sqrt_int(x, p)
        assert r * r % p == x and r <= p - r


class TestTwoSquareSplit:
    @pytest.mark.parametrize("p,x,ab", [(7, 3, (1, 2)), (5, 2, (1, 1)), (13, 5, (9, 9))])
    def test_examples(self, p, x, ab):
        a, b = ffield.two_square_split(PrimeModulus(p)(x))
        assert (a.value, b.value) == ab

    def test_rejects_residue(self):
        with pytest.raises(PreconditionError):
            ffield.two_square_split(PrimeModulus(7)(2))

    @given(st.sampled_from(ODD_PRIMES_200), st.data())
    def test_summands_are_residues(self, p, data):
        x = data.draw(st.sampled_from(ffield.nonresidues(p)))
        a, b = ffield.two_square_split_int(x, p)
        assert (a + b) % p == x
        assert ffield.legendre(a, p) == ffield.legendre(b, p) == 1
