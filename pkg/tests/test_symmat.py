import itertools

import pytest
from hypothesis import given, settings, strategies as st

from fpdecomp import ffield
from fpdecomp.exceptions import DimensionError, PreconditionError, UnsupportedModulusError
from fpdecomp.ffield import PrimeModulus, ResidueClass
from fpdecomp.graphs import adjacency, complete, cycle, empty
from fpdecomp.oracle import graph_from_mask, mask_count
from fpdecomp.symmat import (
    CongruenceMap,
    SymMatrix,
    Tail,
    canonical_class,
    compose,
    congruence_diagonalize,
    congruent,
    det_mod,
    determinant,
    identity_rows,
    invert,
    mat_mul,
    normalize,
    pair_rescale,
    rank_mod,
)


def brute_det(rows, p):
    n = len(rows)
    total = 0
    for perm in itertools.permutations(range(n)):
        sign = 1
        for i in range(n):
            for j in range(i + 1, n):
                if perm[i] > perm[j]:
                    sign = -sign
        prod = sign
        for i in range(n):
            prod *= rows[i][perm[i]]
        total += prod
    return total % p


class TestSymMatrix:
    def test_rejects_asymmetric(self):
        with pytest.raises(PreconditionError):
            SymMatrix.from_rows([[0, 1], [0, 0]], 5)

    def test_rejects_ragged(self):
        with pytest.raises(DimensionError):
            SymMatrix(((0, 1), (1,)), PrimeModulus(5))

    def test_rejects_unreduced(self):
        with pytest.raises(PreconditionError):
            SymMatrix(((5,),), PrimeModulus(5))

    def test_from_rows_reduces(self):
        assert SymMatrix.from_rows([[-1, 6], [6, 7]], 5).entries == ((4, 1), (1, 2))

    def test_direct_sum(self):
        a = SymMatrix.diagonal([1, 2], 5)
        b = SymMatrix.identity(1, 5)
        assert a.direct_sum(b).diagonal_values() == [1, 2, 1]
        with pytest.raises(PreconditionError):
            a.direct_sum(SymMatrix.identity(1, 7))


class TestDeterminant:
    def test_k4_mod_7(self):
        assert determinant(adjacency(complete(4), 7)).value == 4

    def test_c5_mod_5(self):
        assert determinant(adjacency(cycle(5), 5)).value == 2

    @pytest.mark.parametrize("n", [1, 2, 5])
    def test_zero_matrix(self, n):
        assert determinant(adjacency(empty(n), 11)).value == 0

    @pytest.mark.parametrize("p", [2, 3, 7])
    def test_against_permutation_expansion(self, p):
        for mask in range(mask_count(4)):
            rows = graph_from_mask(4, mask).adjacency_rows()
            assert det_mod(rows, p) == brute_det(rows, p)


class TestDiagonalize:
    def test_k2_over_f5(self):
        m, diag = congruence_diagonalize(adjacency(complete(2), 5))
        assert [d.value for d in diag] == [1, 4]
        assert m.is_valid()

    def test_diagonal_input_untouched(self):
        a = SymMatrix.diagonal([3, 1, 4], 7)
        m, diag = congruence_diagonalize(a)
        assert m.R == identity_rows(3)
        assert [d.value for d in diag] == [3, 1, 4]

    def test_zero_matrix(self):
        m, diag = congruence_diagonalize(adjacency(empty(3), 5))
        assert [d.value for d in diag] == [0, 0, 0]
        assert m.is_valid()

    def test_zeros_collect_at_end(self):
        m, diag = congruence_diagonalize(adjacency(cycle(4), 3))
        vals = [d.value for d in diag]
        nz = [v for v in vals if v]
        assert vals == nz + [0] * (len(vals) - len(nz))

    def test_char_two_rejected(self):
        with pytest.raises(UnsupportedModulusError):
            congruence_diagonalize(adjacency(complete(2), 2))


class TestPairRescale:
    def test_residue_branch(self):
        m = pair_rescale(PrimeModulus(7)(2))
        assert m.R == ((3, 0), (0, 3))

    def test_one_is_identity(self):
        assert pair_rescale(PrimeModulus(7)(1)).R == identity_rows(2)

    def test_nonresidue_branch(self):
        assert pair_rescale(PrimeModulus(5)(2)).R == ((1, 1), (4, 1))

    def test_zero_rejected(self):
        with pytest.raises(PreconditionError):
            pair_rescale(PrimeModulus(5)(0))

    @pytest.mark.parametrize("p", [3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47])
    def test_every_scalar(self, p):
        for x in range(1, p):
            m = pair_rescale(PrimeModulus(p)(x))
            assert congruent(m.R, identity_rows(2), p) == ((x, 0), (0, x))

    def test_x_then_inverse_scales_by_one(self):
        p = 13
        for x in range(1, p):
            m1 = pair_rescale(PrimeModulus(p)(x)).R
            m2 = pair_rescale(PrimeModulus(p)(pow(x, -1, p))).R
            assert congruent(mat_mul(m1, m2, p), identity_rows(2), p) == identity_rows(2)


class TestNormalize:
    def test_k3_over_f5(self):
        _, form = normalize(adjacency(complete(3), 5))
        assert (form.rank, form.tail, form.t) == (3, Tail.ONES_THEN_T, 2)
        assert form.diagonal() == [1, 1, 2]

    def test_k2_over_f13(self):
        _, form = normalize(adjacency(complete(2), 13))
        assert (form.rank, form.tail) == (2, Tail.ALL_ONES)

    def test_empty_graph(self):
        m, form = normalize(adjacency(empty(4), 7))
        assert (form.rank, form.tail) == (0, Tail.EMPTY)
        assert m.is_valid()

    def test_canonical_class_agrees(self):
        a = adjacency(cycle(5), 7)
        assert canonical_class(a) == normalize(a)[1]

    @pytest.mark.parametrize("p", [3, 5, 7, 11, 13])
    def test_exhaustive_small_graphs(self, p):
        for n in range(1, 6):
            for mask in range(mask_count(n)):
                a = adjacency(graph_from_mask(n, mask), p)
                m, form = normalize(a)
                assert det_mod(m.R, p) != 0
                assert congruent(m.R, a.entries, p) == form.matrix().entries
                assert form.rank == rank_mod(a.entries, p)
                if form.rank == n:
                    d = det_mod(a.entries, p)
                    assert ffield.residue_class_int(d, p) is form.cls

    @settings(max_examples=60, deadline=None)
    @given(st.sampled_from([3, 5, 7, 101, 65537]), st.integers(1, 7), st.data())
    def test_random_symmetric(self, p, n, data):
        vals = data.draw(st.lists(st.integers(0, p - 1), min_size=n * n, max_size=n * n))
        rows = [[vals[min(i, j) * n + max(i, j)] for j in range(n)] for i in range(n)]
        a = SymMatrix.from_rows(rows, p)
        m, form = normalize(a)
        assert m.is_valid()
        assert form.rank == a.rank()


class TestCompose:
    def setup_method(self):
        self.a = adjacency(cycle(5), 7)
        self.m = normalize(self.a)[0]

    def test_with_inverse_is_identity(self):
        c = compose(self.m, invert(self.m))
        assert c.R == identity_rows(5)
        assert c.source == c.target == self.a

    def test_identity_is_neutral(self):
        assert compose(CongruenceMap.identity(self.a), self.m) == self.m

    def test_invert_swaps_endpoints(self):
        inv = invert(self.m)
        assert (inv.source, inv.target) == (self.m.target, self.m.source)
        assert inv.is_valid()

    def test_mismatched_endpoints(self):
        with pytest.raises(PreconditionError):
            compose(self.m, self.m)

    def test_from_matrix_computes_target(self):
        r = ((1, 1), (0, 1))
        m = CongruenceMap.from_matrix(r, adjacency(complete(2), 5))
        assert m.target.entries == ((0, 1), (1, 2))

    def test_residue_class_preserved(self):
        p = 11
        for mask in range(mask_count(4)):
            a = adjacency(graph_from_mask(4, mask), p)
            m = normalize(a)[0]
            d_src = det_mod(a.entries, p)
            d_tgt = det_mod(m.target.entries, p)
            if d_src:
                assert ffield.residue_class_int(d_src, p) is ffield.residue_class_int(d_tgt, p)
            assert d_tgt == d_src * det_mod(m.R, p) ** 2 % p


def test_residue_class_enum_product():
    s, t, z = ResidueClass.RESIDUE, ResidueClass.NONRESIDUE, ResidueClass.ZERO
    assert (s * s, t * t, s * t, t * z) == (s, s, t, z)
