import networkx as nx
import numpy as np
import pytest

from fpdecomp.exceptions import DimensionError, ParseError
from fpdecomp.graphs import (
    BOWTIE,
    CATALOG,
    GRAPH_D,
    MAX_INT_DET_ORDER,
    Graph,
    adjacency,
    complete,
    cycle,
    direct_sum,
    emit_graph6,
    empty,
    format_edge_list,
    int_determinant,
    parse_edge_list,
    parse_graph,
    parse_graph6,
)
from fpdecomp.oracle import graph_from_mask, mask_count
from fpdecomp.symmat import block_diag, det_mod


def to_nx(g: Graph) -> nx.Graph:
    h = nx.Graph()
    h.add_nodes_from(range(g.n))
    h.add_edges_from(g.edges)
    return h


def from_nx(h: nx.Graph) -> Graph:
    return Graph.from_edges(h.number_of_nodes(), h.edges())


class TestCatalog:
    @pytest.mark.parametrize(
        "name,det", [("K2", -1), ("K3", 2), ("K4", -3), ("K6", -5), ("C5", 2), ("B", -4), ("D", 7)]
    )
    def test_determinants(self, name, det):
        assert int_determinant(CATALOG[name]) == det

    def test_dets_match_float_linalg(self):
        for g in CATALOG.values():
            assert int_determinant(g) == round(np.linalg.det(np.array(g.adjacency_rows(), float)))

    @pytest.mark.parametrize("n", range(2, 9))
    def test_complete_graph_formula(self, n):
        assert int_determinant(complete(n + 1)) == (-1) ** n * n

    def test_bowtie_shape(self):
        degrees = sorted(d for _, d in to_nx(BOWTIE).degree())
        assert degrees == [2, 2, 2, 2, 4]

    def test_d_has_eleven_edges(self):
        assert len(GRAPH_D.edges) == 11 and GRAPH_D.n == 6

    def test_adjacency_k2_and_k1(self):
        assert complete(2).adjacency_rows() == ((0, 1), (1, 0))
        assert complete(1).adjacency_rows() == ((0,),)

    def test_c5_circulant(self):
        rows = cycle(5).adjacency_rows()
        assert all(rows[i][j] == (1 if (j - i) % 5 in (1, 4) else 0) for i in range(5) for j in range(5))

    @pytest.mark.parametrize("p", [q for q in range(2, 50) if all(q % d for d in range(2, q))])
    def test_int_det_reduces_to_field_det(self, p):
        for g in CATALOG.values():
            assert int_determinant(g) % p == det_mod(adjacency(g, p).entries, p)

    def test_hadamard_guard(self):
        assert MAX_INT_DET_ORDER >= 12
        with pytest.raises(DimensionError):
            int_determinant(complete(MAX_INT_DET_ORDER + 1))


class TestDirectSum:
    def test_two_k1(self):
        assert direct_sum([complete(1), complete(1)]) == empty(2)

    def test_det_multiplies(self):
        assert int_determinant(direct_sum([complete(3), complete(2)])) == -2

    def test_empty_sum(self):
        assert direct_sum([]) == empty(0)

    def test_adjacency_is_block_diagonal(self):
        parts = [cycle(5), complete(2), BOWTIE]
        assert direct_sum(parts).adjacency_rows() == block_diag([g.adjacency_rows() for g in parts])


class TestGraph6:
    def test_k1(self):
        assert emit_graph6(complete(1)) == "@"

    def test_known_string(self):
        g = parse_graph6("D?{")
        assert g == from_nx(nx.from_graph6_bytes(b"D?{"))
        assert g.sorted_edges() == [(0, 4), (1, 4), (2, 4), (3, 4)]
        assert emit_graph6(g) == "D?{"

    def test_header_accepted(self):
        assert parse_graph6(">>graph6<<Bw") == complete(3)

    @pytest.mark.parametrize(
        "text,offset",
        [("", 0), ("D?", 2), ("D?{{", 3), ("A\x7f", 1), ("A`", 1)],
    )
    def test_errors_carry_offsets(self, text, offset):
        with pytest.raises(ParseError) as info:
            parse_graph6(text)
        assert info.value.offset == offset

    def test_roundtrip_against_networkx(self):
        for n in range(0, 6):
            for mask in range(mask_count(n)):
                g = graph_from_mask(n, mask)
                s = emit_graph6(g)
                assert nx.to_graph6_bytes(to_nx(g), header=False).decode().strip() == s
                assert parse_graph6(s) == g

    @pytest.mark.slow
    def test_roundtrip_all_up_to_seven(self):
        for n in (6, 7):
            for mask in range(mask_count(n)):
                g = graph_from_mask(n, mask)
                assert parse_graph6(emit_graph6(g)) == g

    def test_long_size_header(self):
        g = direct_sum([cycle(5)] * 13)  # 65 vertices
        s = emit_graph6(g)
        assert s.startswith("~")
        assert parse_graph6(s) == g == from_nx(nx.from_graph6_bytes(s.encode()))


class TestEdgeList:
    def test_k3(self):
        assert parse_edge_list("n=3; 0-1, 1-2, 0-2") == complete(3)

    def test_bowtie(self):
        assert parse_edge_list("n=5; 0-1, 0-2, 0-3, 0-4, 1-4, 2-3") == BOWTIE

    def test_isolated(self):
        assert parse_edge_list("n=4") == empty(4)

    @pytest.mark.parametrize(
        "text", ["n=2; 0-0", "n=3; 0-1, 1-0", "n=3; 0-3", "m=3; 0-1", "n=3; 0+1"]
    )
    def test_rejects(self, text):
        with pytest.raises(ParseError):
            parse_edge_list(text)

    def test_format_roundtrip(self):
        for g in CATALOG.values():
            assert parse_edge_list(format_edge_list(g)) == g


def test_parse_graph_dispatch():
    assert parse_graph("n=2; 0-1") == complete(2)
    assert parse_graph("  Bw\n") == complete(3)
    # graph6 strings may begin with 'n' (n = 47 vertices)
    g = empty(47)
    assert parse_graph(emit_graph6(g)) == g


def test_graph_rejects_loops():
    with pytest.raises(ValueError):
        Graph.from_edges(2, [(1, 1)])
