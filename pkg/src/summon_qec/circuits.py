"""
Encoding, decoding and graph-state circuits, plus a line-oriented text format.

Text format, one gate per line::

    qubits 6
    cbits 0
    label q0 = e_1_2
    H q3
    CNOT q0 q1
    CZ q0 q1
    MPP Z q0 Z q1 -> c0
    X? c0 q2
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

from .code import PauliOperator, StabilizerCode, _check_vertex
from .gf2 import BitMatrix, BitVector, in_span

GATE_KINDS = ("H", "X", "Z", "CNOT", "CZ", "MEASURE_PAULI_PRODUCT", "X_IF", "Z_IF")
_ONE_QUBIT = {"H", "X", "Z", "X_IF", "Z_IF"}
_TWO_QUBIT = {"CNOT", "CZ"}


class CircuitError(ValueError):
    """Malformed gate or circuit."""


class CorruptedStateError(RuntimeError):
    """Measurement record matches no codeword branch."""


@dataclass(frozen=True)
class Gate:
    kind: str
    qubits: tuple[int, ...]
    pauli: PauliOperator | None = None
    cbit: int | None = None

    def __post_init__(self) -> None:
        if self.kind not in GATE_KINDS:
            raise CircuitError(f"unknown gate kind {self.kind!r}")
        if self.kind in _ONE_QUBIT and len(self.qubits) != 1:
            raise CircuitError(f"{self.kind} acts on exactly one qubit")
        if self.kind in _TWO_QUBIT and (len(self.qubits) != 2 or self.qubits[0] == self.qubits[1]):
            raise CircuitError(f"{self.kind} acts on two distinct qubits")
        if self.kind == "MEASURE_PAULI_PRODUCT":
            if self.pauli is None or self.cbit is None:
                raise CircuitError("MPP needs a Pauli operator and an output bit")
            if tuple(self.pauli.support()) != self.qubits:
                raise CircuitError("MPP qubits must equal the Pauli support")
        if self.kind in ("X_IF", "Z_IF") and self.cbit is None:
            raise CircuitError(f"{self.kind} needs a classical control bit")


@dataclass
class Circuit:
    n_qubits: int
    n_cbits: int = 0
    gates: list[Gate] = field(default_factory=list)
    qubit_labels: list[str] | None = None

    def append(self, kind: str, *qubits: int, pauli: PauliOperator | None = None, cbit: int | None = None) -> None:
        self.gates.append(Gate(kind, tuple(qubits), pauli, cbit))

    def measure(self, pauli: PauliOperator) -> int:
        """Append a Pauli-product measurement into a fresh classical bit."""
        c = self.n_cbits
        self.n_cbits += 1
        self.append("MEASURE_PAULI_PRODUCT", *pauli.support(), pauli=pauli, cbit=c)
        return c

    def validate(self) -> None:
        written: set[int] = set()
        for g in self.gates:
            if any(not 0 <= q < self.n_qubits for q in g.qubits):
                raise CircuitError(f"qubit out of range in {g}")
            if g.pauli is not None and g.pauli.n_qubits != self.n_qubits:
                raise CircuitError("Pauli width does not match circuit")
            if g.cbit is not None and not 0 <= g.cbit < self.n_cbits:
                raise CircuitError(f"classical bit out of range in {g}")
            if g.kind in ("X_IF", "Z_IF") and g.cbit not in written:
                raise CircuitError(f"c{g.cbit} read before it is written")
            if g.kind == "MEASURE_PAULI_PRODUCT":
                written.add(g.cbit)

    def to_text(self) -> str:
        lines = [f"qubits {self.n_qubits}", f"cbits {self.n_cbits}"]
        for i, lab in enumerate(self.qubit_labels or []):
            lines.append(f"label q{i} = {lab}")
        for g in self.gates:
            lines.append(_gate_line(g))
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> Circuit:
        n_qubits = n_cbits = None
        labels: dict[int, str] = {}
        body: list[list[str]] = []
        for raw in text.splitlines():
            tok = raw.split()
            if not tok or tok[0].startswith("#"):
                continue
            if tok[0] == "qubits":
                n_qubits = int(tok[1])
            elif tok[0] == "cbits":
                n_cbits = int(tok[1])
            elif tok[0] == "label":
                labels[_qid(tok[1])] = tok[3]
            else:
                body.append(tok)
        if n_qubits is None:
            raise CircuitError("missing 'qubits' header")
        circ = cls(n_qubits, n_cbits or 0, qubit_labels=[labels[i] for i in sorted(labels)] or None)
        for tok in body:
            circ.gates.append(_parse_gate(tok, n_qubits))
        circ.validate()
        return circ


def _qid(tok: str) -> int:
    if not tok.startswith("q"):
        raise CircuitError(f"expected qubit id, got {tok!r}")
    return int(tok[1:])


def _cid(tok: str) -> int:
    if not tok.startswith("c"):
        raise CircuitError(f"expected classical bit id, got {tok!r}")
    return int(tok[1:])


def _gate_line(g: Gate) -> str:
    qs = " ".join(f"q{q}" for q in g.qubits)
    if g.kind == "MEASURE_PAULI_PRODUCT":
        letters = str(g.pauli)
        factors = " ".join(f"{letters[q]} q{q}" for q in g.qubits)
        return f"MPP {factors} -> c{g.cbit}"
    if g.kind == "X_IF":
        return f"X? c{g.cbit} {qs}"
    if g.kind == "Z_IF":
        return f"Z? c{g.cbit} {qs}"
    return f"{g.kind} {qs}"


def _parse_gate(tok: list[str], n_qubits: int) -> Gate:
    head = tok[0]
    if head == "MPP":
        if tok[-2] != "->":
            raise CircuitError(f"MPP line needs '-> c<k>': {' '.join(tok)}")
        chars = ["I"] * n_qubits
        for letter, q in zip(tok[1:-2:2], tok[2:-2:2]):
            chars[_qid(q)] = letter
        p = PauliOperator.from_string("".join(chars))
        return Gate("MEASURE_PAULI_PRODUCT", tuple(p.support()), p, _cid(tok[-1]))
    if head in ("X?", "Z?"):
        return Gate("X_IF" if head == "X?" else "Z_IF", (_qid(tok[2]),), cbit=_cid(tok[1]))
    return Gate(head, tuple(_qid(t) for t in tok[1:]))


def gate_count(c: Circuit) -> dict[str, int]:
    """Exact tally of gates by kind; every kind is present, zeros included."""
    counts = Counter(g.kind for g in c.gates)
    return {k: counts.get(k, 0) for k in GATE_KINDS}


# ---------------------------------------------------------------------------
# Synthesis
# ---------------------------------------------------------------------------


def synth_encoder(code: StabilizerCode) -> Circuit:
    """Encoder taking ``|psi> (x) |0...0>`` to ``alpha|0>_L + beta|1>_L``.

    Input ``|psi>`` sits on ``q_12``.  CNOTs fan it out over the star of
    vertex 1, giving ``alpha|0> + beta|A_1>``.  Then for each ``j`` in
    ``2..n-1`` a Hadamard on ``q_jn`` and CNOTs to the rest of the support of
    ``A_1 + A_j`` apply ``(I + X^(A_1 + A_j))``.
    """
    n = code.n_vertices
    em = code.edges
    circ = Circuit(code.n_qubits, qubit_labels=[em.label(i) for i in range(code.n_qubits)])
    src = em.index(1, 2)
    for i in range(3, n + 1):
        circ.append("CNOT", src, em.index(1, i))
    for j in range(2, n):
        ctrl = em.index(j, n)
        support = _star_sum(code, 1, j)
        circ.append("H", ctrl)
        for t in support.support():
            if t != ctrl:
                circ.append("CNOT", ctrl, t)
    return circ


def _star_sum(code: StabilizerCode, a: int, b: int) -> BitVector:
    em = code.edges
    n = code.n_vertices
    idx = [em.index(a, k) for k in range(1, n + 1) if k != a]
    idx += [em.index(b, k) for k in range(1, n + 1) if k != b]
    return BitVector.from_indices(idx, code.n_qubits)


def held_qubits(code: StabilizerCode, r: int) -> list[int]:
    """Canonically ordered qubits ``q_rk`` available at vertex ``r``."""
    _check_vertex(code, r)
    return code.edges.star(r)


def c2_projection(code: StabilizerCode, r: int) -> BitMatrix:
    """Basis of ``C2`` restricted to the held qubits of ``r``."""
    held = held_qubits(code, r)
    return BitMatrix(tuple(v.restrict(held) for v in code.c2), len(held))


def parity_outcomes(branch: BitVector) -> list[int]:
    """Adjacent-pair parities ``y[i] ^ y[i+1]`` (0 means eigenvalue +1)."""
    return [branch[i] ^ branch[i + 1] for i in range(branch.length - 1)]


def branch_string(code: StabilizerCode, r: int, outcomes: list[int]) -> BitVector:
    """Recover the alpha-branch string ``y_r`` from adjacent-pair parities.

    The parities fix ``y_r`` up to complement; exactly one of the two
    candidates lies in the projection of ``C2`` onto the held qubits.

    Raises:
        CorruptedStateError: if neither or both candidates qualify, or the
            record has the wrong length.
    """
    m = code.n_vertices - 1
    if len(outcomes) != m - 1:
        raise CorruptedStateError(f"expected {m - 1} outcomes, got {len(outcomes)}")
    bits = [0]
    for o in outcomes:
        bits.append(bits[-1] ^ (o & 1))
    cand = BitVector.from_bits(bits)
    proj = c2_projection(code, r)
    hits = [c for c in (cand, cand + BitVector.ones(m)) if in_span(c, proj)]
    if len(hits) != 1:
        raise CorruptedStateError(f"record {outcomes} is consistent with {len(hits)} branches")
    return hits[0]


def synth_decoder(code: StabilizerCode, r: int) -> Circuit:
    """Decoder on the ``n - 1`` qubits held at vertex ``r``.

    Local qubit ``k`` is the ``k``-th held qubit in canonical order; the
    recovered state ends on local qubit 0.  After measuring the ``n - 2``
    adjacent ``ZZ`` parities, the alpha-branch value of qubit 0 equals the
    XOR of the odd-indexed outcomes (the branch string has even weight), so
    one conditioned X per odd outcome resets it.  A CNOT fan-out from qubit 0
    then leaves the targets in a fixed classical string.
    """
    held = held_qubits(code, r)
    m = len(held)
    circ = Circuit(m, qubit_labels=[code.edges.label(q) for q in held])
    for i in range(m - 1):
        z = BitVector.from_indices((i, i + 1), m)
        circ.measure(PauliOperator.z_type(z))
    for c in range(1, m - 1, 2):
        circ.append("X_IF", 0, cbit=c)
    for t in range(1, m):
        circ.append("CNOT", 0, t)
    return circ


def synth_graph_state(graph) -> Circuit:
    """``H`` on every vertex then ``CZ`` per edge.

    ``graph`` is either a ``networkx`` graph with integer nodes ``0..V-1`` or a
    ``(n_vertices, edges)`` pair.
    """
    if hasattr(graph, "number_of_nodes"):
        nv, edges = graph.number_of_nodes(), sorted(tuple(sorted(e)) for e in graph.edges())
    else:
        nv, edges = graph[0], sorted(tuple(sorted(e)) for e in graph[1])
    circ = Circuit(nv)
    for v in range(nv):
        circ.append("H", v)
    for a, b in edges:
        circ.append("CZ", a, b)
    return circ
