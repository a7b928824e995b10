import random
from itertools import combinations
from math import comb

import networkx as nx
import pytest

from summon_qec.code import (
    InvalidParameterError,
    PauliOperator,
    StabilizerCode,
    build_css,
    build_cws,
    centralizer_on,
    commutes,
    distance,
    distance_exhaustive,
    erasure_correctable,
    erasure_correctable_exhaustive,
    in_centralizer,
    in_stabilizer,
    is_logical,
    matching_witness,
    resource_counts,
    star_vector,
    triangle_vector,
)
from summon_qec.gf2 import BitMatrix, BitVector, DimensionError, edge_index, n_edges, rank, same_span

EVEN = [4, 6, 8, 10, 12]


def edges_of(v: BitVector, n: int) -> set[tuple[int, int]]:
    return {(i, j) for i, j in combinations(range(1, n + 1), 2) if v[edge_index(i, j, n)]}


# -- graph vectors ------------------------------------------------------------


def test_triangle_vector():
    t = triangle_vector(1, 2, 3, 4)
    assert edges_of(t, 4) == {(1, 2), (2, 3), (1, 3)}
    assert t.weight == 3
    assert triangle_vector(1, 3, 2, 4) == t
    s = triangle_vector(1, 2, 3, 4) + triangle_vector(1, 2, 4, 4) + triangle_vector(1, 3, 4, 4)
    assert s == triangle_vector(2, 3, 4, 4)
    with pytest.raises(InvalidParameterError):
        triangle_vector(1, 1, 2, 4)


@pytest.mark.parametrize("n", [3, 4, 5, 9])
def test_star_vector(n):
    assert edges_of(star_vector(1, n), n) == {(1, k) for k in range(2, n + 1)}
    total = BitVector.zeros(n_edges(n))
    for j in range(1, n + 1):
        assert star_vector(j, n).weight == n - 1
        total = total + star_vector(j, n)
    assert total.is_zero()
    with pytest.raises(InvalidParameterError):
        star_vector(n + 1, n)


# -- Pauli operators ----------------------------------------------------------


def test_pauli_weight_and_commutation():
    assert PauliOperator.from_string("ZIYX").weight == 3
    assert not commutes(PauliOperator.from_string("ZI"), PauliOperator.from_string("XI"))
    assert commutes(PauliOperator.from_string("ZI"), PauliOperator.from_string("IX"))
    assert commutes(PauliOperator.from_string("XX"), PauliOperator.from_string("ZZ"))
    assert str(PauliOperator.from_string("IXYZ")) == "IXYZ"
    with pytest.raises(DimensionError):
        commutes(PauliOperator.from_string("Z"), PauliOperator.from_string("ZZ"))


# -- CSS code -------------------------------------------------------------------


@pytest.mark.parametrize("n", EVEN)
def test_build_css_structure(n):
    code = build_css(n)
    q = comb(n, 2)
    assert code.n_qubits == q
    assert code.h.shape == (q - 1, 2 * q)
    assert len(code.z_rows) == comb(n - 1, 2) and len(code.x_rows) == n - 2
    gens = code.generators
    assert all(commutes(a, b) for a, b in combinations(gens, 2))
    assert rank(code.h) == q - 1 and code.n_logical == 1
    for g in gens:
        assert commutes(code.logical_x, g) and commutes(code.logical_z, g)
    assert not commutes(code.logical_x, code.logical_z)
    assert same_span(code.z_rows, code.c1_perp)
    assert same_span(code.x_rows, code.c2)


def test_build_css_sizes():
    assert len(build_css(4).h) == 5
    assert len(build_css(6).h) == 14 and build_css(6).n_qubits == 15
    for bad in (3, 5, 2, 0):
        with pytest.raises(InvalidParameterError):
            build_css(bad)


def test_build_css_n4_rows():
    code = build_css(4)
    assert [str(g) for g in code.generators] == ["ZZIZII", "ZIZIZI", "IZZIIZ", "IXXXXI", "XIXXIX"]


def test_mutating_a_generator_breaks_an_invariant():
    rnd = random.Random(7)
    code = build_css(6)
    q = code.n_qubits
    for _ in range(20):
        row = rnd.randrange(len(code.h))
        while True:
            new = BitVector(rnd.getrandbits(2 * q), 2 * q)
            p = PauliOperator.from_symplectic(new)
            if not all(commutes(p, g) for i, g in enumerate(code.generators) if i != row):
                break
        rows = list(code.h.rows)
        rows[row] = new
        bad = StabilizerCode(6, BitMatrix(tuple(rows), 2 * q))
        gens = bad.generators
        assert not all(commutes(a, b) for a, b in combinations(gens, 2))


def test_in_stabilizer_examples():
    code = build_css(4)
    assert in_stabilizer(PauliOperator.identity(6), code)
    assert in_stabilizer(PauliOperator.z_type(triangle_vector(2, 3, 4, 4)), code)
    assert not in_stabilizer(PauliOperator.z_type(star_vector(1, 4)), code)


def test_in_centralizer_examples():
    code = build_css(4)
    assert in_centralizer(code.logical_x, code)
    z12 = PauliOperator.z_type(BitVector.unit(edge_index(1, 2, 4), 6))
    assert not in_centralizer(z12, code)
    assert in_centralizer(matching_witness(4), code)


# -- erasure ------------------------------------------------------------------


def three_qubit_counterexample() -> StabilizerCode:
    return StabilizerCode.from_paulis(3, ["ZZZ", "IXX"])


@pytest.mark.parametrize("n", [4, 6, 8])
def test_erasure_correctable(n):
    code = build_css(n)
    assert all(erasure_correctable(code, r) for r in range(1, n + 1))


@pytest.mark.parametrize("r", [1, 2, 3, 4])
def test_erasure_agrees_with_enumeration(r):
    code = build_css(4)
    assert erasure_correctable_exhaustive(code, r) is True
    assert erasure_correctable(code, r) is True


def test_erasure_counterexample():
    code = three_qubit_counterexample()
    zii = PauliOperator.from_string("ZII")
    assert in_centralizer(zii, code) and not in_stabilizer(zii, code)
    assert not erasure_correctable(code, 3)
    assert not erasure_correctable_exhaustive(code, 3)


def test_erasure_range_error():
    with pytest.raises(InvalidParameterError):
        erasure_correctable(build_css(4), 5)


def test_centralizer_on_lost_qubits_is_stabilizer():
    code = build_css(6)
    basis = centralizer_on(code, [edge_index(i, j, 6) for i, j in combinations(range(1, 6), 2)])
    # Z-type triangles on K_5: C(4, 2) independent ones
    assert len(basis) == comb(4, 2)
    assert all(p.x.is_zero() for p in basis)


@pytest.mark.parametrize("n", [4, 6, 8])
def test_low_weight_operators_avoiding_a_star_are_harmless(n):
    """Operators lighter than n/2 miss some vertex entirely; centralizer implies stabilizer."""
    rnd = random.Random(n)
    code = build_css(n)
    q = code.n_qubits
    for _ in range(300):
        w = rnd.randint(1, n // 2 - 1)
        supp = rnd.sample(range(q), w)
        chars = ["I"] * q
        for s in supp:
            chars[s] = rnd.choice("XYZ")
        p = PauliOperator.from_string("".join(chars))
        touched = {v for s in supp for v in code.edges.pair(s)}
        assert len(touched) < n
        if in_centralizer(p, code):
            assert in_stabilizer(p, code)


# -- distance -----------------------------------------------------------------


def test_distance_n4_matches_exhaustive():
    code = build_css(4)
    res = distance(code, 2)
    assert res.exact and res.distance == 2
    assert distance_exhaustive(code) == 2


def test_distance_n6():
    code = build_css(6)
    assert distance(code, 2).distance is None
    assert distance(code, 2).lower_bound == 3
    res = distance(code, 3)
    assert res.distance == 3 and is_logical(res.witness, code)


def test_distance_inconclusive_reports_bound():
    res = distance(build_css(8), 2)
    assert not res.exact and res.lower_bound == 3 and res.searched_weight == 2


def test_distance_non_css_path():
    assert StabilizerCode.from_paulis(3, ["ZZI", "IZZ"]).is_css
    mixed = StabilizerCode.from_paulis(3, ["XZI", "IZX"])
    assert not mixed.is_css
    assert distance(mixed, 3).distance == distance_exhaustive(mixed)


@pytest.mark.parametrize("n", EVEN)
def test_matching_witness_is_logical(n):
    code = build_css(n)
    w = matching_witness(n)
    assert w.weight == n // 2
    assert in_centralizer(w, code) and not in_stabilizer(w, code)
    assert edges_of(w.z, n) == {(2 * i - 1, 2 * i) for i in range(1, n // 2 + 1)}


# -- CWS ---------------------------------------------------------------------------


def line_graph_oracle(n: int) -> nx.Graph:
    g = nx.Graph()
    for e in combinations(range(1, n + 1), 2):
        for v in e:
            g.add_edge(("v", v), ("e", e))
    return nx.line_graph(g)


@pytest.mark.parametrize("n", [3, 4, 5, 6])
def test_cws_is_line_graph(n):
    cws = build_cws(n)
    assert cws.n_qubits == n * (n - 1)
    assert len(cws.graph_edges) == n * (n - 1) ** 2 // 2
    ours = nx.Graph()
    label = lambda v: frozenset({("v", v[0]), ("e", v[1])})
    ours.add_nodes_from(label(v) for v in cws.graph_vertices)
    ours.add_edges_from((label(cws.graph_vertices[a]), label(cws.graph_vertices[b])) for a, b in cws.graph_edges)
    oracle = nx.relabel_nodes(line_graph_oracle(n), lambda e: frozenset(e))
    assert nx.utils.graphs_equal(ours, oracle)


def test_cws_examples():
    assert build_cws(4).n_qubits == 12 and len(build_cws(4).graph_edges) == 18
    assert build_cws(3).n_qubits == 6 and len(build_cws(3).graph_edges) == 6
    words = build_cws(4).word_operators
    assert words[0].weight == 0 and str(words[1]) == "Z" * 12
    with pytest.raises(InvalidParameterError):
        build_cws(2)


def test_resource_counts():
    rc4 = resource_counts(4)
    assert (rc4.q_css, rc4.q_cws) == (6, 12)
    assert rc4.cws_prep_gates == {"H": 12, "CZ": 18}
    assert rc4.cws_gates == {"H": 12, "CZ": 30}
    assert rc4.css_gates == {"H": 2, "CNOT": 8}
    rc5 = resource_counts(5)
    assert rc5.n_tilde == 6 and rc5.q_css == 15
    with pytest.raises(InvalidParameterError):
        resource_counts(2)
