from itertools import combinations
from pathlib import Path

import networkx as nx
import pytest

from summon_qec.circuits import (
    Circuit,
    CircuitError,
    CorruptedStateError,
    Gate,
    branch_string,
    c2_projection,
    gate_count,
    held_qubits,
    parity_outcomes,
    synth_decoder,
    synth_encoder,
    synth_graph_state,
)
from summon_qec.code import InvalidParameterError, PauliOperator, build_css, build_cws, commutes
from summon_qec.gf2 import BitVector, span_elements

GOLDENS = Path(__file__).resolve().parents[1] / "goldens"


def encoder_cnots(n: int) -> int:
    """Stage 1 fans out to n - 2 star qubits; stage j touches 2n - 4 qubits, one of them the control."""
    return (n - 2) + (n - 2) * (2 * n - 5)


# -- gates and text format ----------------------------------------------------


def test_gate_validation():
    with pytest.raises(CircuitError):
        Gate("CNOT", (1, 1))
    with pytest.raises(CircuitError):
        Gate("H", (0, 1))
    with pytest.raises(CircuitError):
        Gate("SWAP", (0, 1))
    with pytest.raises(CircuitError):
        Gate("X_IF", (0,))
    with pytest.raises(CircuitError):
        Gate("MEASURE_PAULI_PRODUCT", (0,), PauliOperator.from_string("IZ"), 0)


def test_circuit_validate_read_before_write():
    c = Circuit(2, 1)
    c.append("X_IF", 0, cbit=0)
    with pytest.raises(CircuitError):
        c.validate()
    c = Circuit(2)
    c.append("CNOT", 0, 2)
    with pytest.raises(CircuitError):
        c.validate()


def test_gate_count_empty():
    counts = gate_count(Circuit(3))
    assert set(counts) >= {"H", "CNOT", "CZ", "X_IF"}
    assert all(v == 0 for v in counts.values())


@pytest.mark.parametrize("n", [4, 6])
def test_text_round_trip(n):
    code = build_css(n)
    for circ in [synth_encoder(code), synth_decoder(code, n)]:
        text = circ.to_text()
        back = Circuit.from_text(text)
        assert back.gates == circ.gates and back.n_cbits == circ.n_cbits
        assert back.qubit_labels == circ.qubit_labels
        assert back.to_text() == text


def test_from_text_errors():
    with pytest.raises(CircuitError):
        Circuit.from_text("H q0\n")
    with pytest.raises(CircuitError):
        Circuit.from_text("qubits 2\nMPP Z q0 Z q1 c0\n")
    with pytest.raises(CircuitError):
        Circuit.from_text("qubits 2\ncbits 1\nX? c0 q1\n")


def test_text_format_sample():
    code = build_css(4)
    text = synth_decoder(code, 4).to_text()
    assert text.splitlines()[:5] == [
        "qubits 3",
        "cbits 2",
        "label q0 = e_1_4",
        "label q1 = e_2_4",
        "label q2 = e_3_4",
    ]
    assert "MPP Z q0 Z q1 -> c0" in text and "X? c1 q0" in text


# -- encoder ----------------------------------------------------------------------


def test_encoder_n4_counts():
    counts = gate_count(synth_encoder(build_css(4)))
    assert counts["H"] == 2 and counts["CNOT"] == 8
    assert sum(counts.values()) == 10


@pytest.mark.parametrize("n", [4, 6, 8, 10, 12])
def test_encoder_counts_formula(n):
    counts = gate_count(synth_encoder(build_css(n)))
    assert counts["H"] == n - 2
    assert counts["CNOT"] == encoder_cnots(n) == 2 * (n - 2) ** 2


def test_encoder_cnot_ratio_approaches_two():
    ratios = [gate_count(synth_encoder(build_css(n)))["CNOT"] / n**2 for n in (4, 6, 8, 10)]
    assert ratios == sorted(ratios) and all(r < 2 for r in ratios)


def test_encoder_layout_n4():
    lines = synth_encoder(build_css(4)).to_text().splitlines()
    body = [l for l in lines if not l.startswith(("qubits", "cbits", "label"))]
    assert body == [
        "CNOT q0 q1",
        "CNOT q0 q2",
        "H q4",
        "CNOT q4 q1",
        "CNOT q4 q2",
        "CNOT q4 q3",
        "H q5",
        "CNOT q5 q0",
        "CNOT q5 q2",
        "CNOT q5 q3",
    ]


def test_goldens_match_synthesis():
    code = build_css(4)
    assert (GOLDENS / "encoder_n4.txt").read_text() == synth_encoder(code).to_text()
    for r in range(1, 5):
        assert (GOLDENS / f"decoder_n4_r{r}.txt").read_text() == synth_decoder(code, r).to_text()


# -- decoder ----------------------------------------------------------------------


@pytest.mark.parametrize("n", [4, 6, 8, 10])
def test_decoder_counts_linear(n):
    code = build_css(n)
    for r in (1, n):
        counts = gate_count(synth_decoder(code, r))
        assert counts["MEASURE_PAULI_PRODUCT"] == n - 2
        assert counts["CNOT"] == n - 2
        assert counts["X_IF"] == (n - 2) // 2


def test_decoder_range_error():
    with pytest.raises(InvalidParameterError):
        synth_decoder(build_css(4), 5)


@pytest.mark.parametrize("n", [4, 6])
def test_parity_operators_commute_with_restricted_stabilizers(n):
    code = build_css(n)
    for r in range(1, n + 1):
        held = held_qubits(code, r)
        parities = [g.pauli for g in synth_decoder(code, r).gates if g.pauli is not None]
        assert all(commutes(a, b) for a, b in combinations(parities, 2))
        for g in code.generators:
            if set(g.support()) <= set(held):
                local = PauliOperator(g.z.restrict(held), g.x.restrict(held))
                assert all(commutes(local, p) for p in parities)


@pytest.mark.parametrize("n", [4, 6])
def test_eigenvalue_vectors_distinct(n):
    code = build_css(n)
    for r in range(1, n + 1):
        held = held_qubits(code, r)
        seen = {}
        for x in span_elements(code.c2):
            key = tuple(parity_outcomes(x.restrict(held)))
            assert key not in seen
            seen[key] = x
        assert len(seen) == 2 ** (n - 2)


@pytest.mark.parametrize("n", [4, 6, 8])
def test_branch_string_recovers_projection(n):
    code = build_css(n)
    for r in range(1, n + 1):
        held = held_qubits(code, r)
        for x in span_elements(code.c2):
            y = x.restrict(held)
            for flip in (False, True):
                shown = y + BitVector.ones(len(held)) if flip else y
                assert branch_string(code, r, parity_outcomes(shown)) == y


@pytest.mark.parametrize("n", [4, 6, 8])
def test_branch_rule_matches_circuit_rule(n):
    """The X_IF pattern of the decoder equals the first bit of the reconstructed branch."""
    code = build_css(n)
    dec = synth_decoder(code, 1)
    conditioned = [g.cbit for g in dec.gates if g.kind == "X_IF"]
    for x in span_elements(code.c2):
        outcomes = parity_outcomes(x.restrict(held_qubits(code, 1)))
        assert sum(outcomes[c] for c in conditioned) % 2 == branch_string(code, 1, outcomes)[0]


def test_projection_is_even_weight():
    code = build_css(6)
    proj = c2_projection(code, 3)
    assert len(span_elements(proj)) == 2**4
    assert all(v.weight % 2 == 0 for v in span_elements(proj))


def test_branch_string_errors():
    code = build_css(4)
    with pytest.raises(CorruptedStateError):
        branch_string(code, 1, [0])
    with pytest.raises(CorruptedStateError):
        branch_string(build_css(6), 1, [1, 0, 0, 0, 1])


@pytest.mark.parametrize("n", [4, 6])
def test_every_full_length_record_has_one_branch(n):
    """An odd number of held qubits means exactly one of a string and its complement is even."""
    code = build_css(n)
    for bits in range(1 << (n - 2)):
        outcomes = [(bits >> i) & 1 for i in range(n - 2)]
        assert branch_string(code, 2, outcomes).weight % 2 == 0


# -- graph states -------------------------------------------------------------------


def test_graph_state_counts():
    assert {k: v for k, v in gate_count(synth_graph_state((3, []))).items() if v} == {"H": 3}
    tri = synth_graph_state(nx.complete_graph(3))
    assert gate_count(tri)["CZ"] == 3
    cws = build_cws(4)
    counts = gate_count(synth_graph_state((cws.n_qubits, cws.graph_edges)))
    assert counts["H"] == 12 and counts["CZ"] == 18
