"""
Dense statevector simulation.

Qubit ``k`` is bit ``k`` of the amplitude index (qubit 0 least significant),
so the computational basis state ``|v>`` of a bit vector ``v`` has amplitude
index ``v.bits``.  Erasure is never simulated as an operation: lost qubits
simply stay in the global state and are not touched by the decoder, which is
equivalent to tracing them out.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .circuits import Circuit, CircuitError
from .code import PauliOperator, StabilizerCode
from .gf2 import BitVector, DimensionError, span_elements

_INV_SQRT2 = 1 / np.sqrt(2)


def make_rng(seed: int) -> np.random.Generator:
    """Counter-based generator; the stream depends on the seed only."""
    return np.random.Generator(np.random.Philox(seed))


class StateVector:
    """Pure state of ``n_qubits`` qubits, mutated in place by gates."""

    def __init__(self, amplitudes, n_qubits: int | None = None):
        amps = np.asarray(amplitudes, dtype=np.complex128).reshape(-1)
        n = int(amps.size).bit_length() - 1
        if amps.size != 1 << n:
            raise DimensionError(f"{amps.size} amplitudes is not a power of two")
        if n_qubits is not None and n_qubits != n:
            raise DimensionError(f"{amps.size} amplitudes for {n_qubits} qubits")
        self.amplitudes = amps.copy()
        self.n_qubits = n
        self._index = np.arange(amps.size, dtype=np.int64)

    @classmethod
    def zero(cls, n_qubits: int) -> StateVector:
        amps = np.zeros(1 << n_qubits, dtype=np.complex128)
        amps[0] = 1.0
        return cls(amps)

    @classmethod
    def basis(cls, v: BitVector) -> StateVector:
        amps = np.zeros(1 << v.length, dtype=np.complex128)
        amps[v.bits] = 1.0
        return cls(amps)

    @classmethod
    def product(cls, qubit_states) -> StateVector:
        """Tensor product; element ``k`` of ``qubit_states`` is qubit ``k``."""
        amps = np.array([1.0 + 0j])
        for s in qubit_states:
            amps = np.kron(np.asarray(s, dtype=np.complex128), amps)
        return cls(amps)

    @classmethod
    def with_input(cls, alpha: complex, beta: complex, n_qubits: int, qubit: int = 0) -> StateVector:
        """``alpha|0> + beta|1>`` on ``qubit``, ``|0>`` elsewhere."""
        amps = np.zeros(1 << n_qubits, dtype=np.complex128)
        amps[0] = alpha
        amps[1 << qubit] = beta
        return cls(amps)

    def copy(self) -> StateVector:
        return StateVector(self.amplitudes)

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def _bit(self, q: int) -> np.ndarray:
        return (self._index >> q) & 1

    # -- gates -------------------------------------------------------------

    def apply_x(self, q: int) -> None:
        self.amplitudes = self.amplitudes[self._index ^ (1 << q)]

    def apply_z(self, q: int) -> None:
        self.amplitudes[self._bit(q) == 1] *= -1

    def apply_h(self, q: int) -> None:
        a = self.amplitudes
        flipped = a[self._index ^ (1 << q)]
        sign = 1 - 2 * self._bit(q)
        self.amplitudes = (flipped + sign * a) * _INV_SQRT2

    def apply_cnot(self, control: int, target: int) -> None:
        self.amplitudes = self.amplitudes[self._index ^ (self._bit(control) << target)]

    def apply_cz(self, a: int, b: int) -> None:
        self.amplitudes[(self._bit(a) & self._bit(b)) == 1] *= -1

    def apply_pauli(self, p: PauliOperator) -> None:
        """Apply the Pauli with standard ``Y = -i Z X`` where both bits are set."""
        self.amplitudes = _pauli_times(self, p)

    def to_bytes(self) -> bytes:
        """``u32`` qubit count then little-endian ``f64`` (re, im) pairs."""
        body = np.empty(2 * self.amplitudes.size, dtype="<f8")
        body[0::2] = self.amplitudes.real
        body[1::2] = self.amplitudes.imag
        return struct.pack("<I", self.n_qubits) + body.tobytes()

    @classmethod
    def from_bytes(cls, data: bytes) -> StateVector:
        (n,) = struct.unpack_from("<I", data)
        body = np.frombuffer(data, dtype="<f8", offset=4)
        if body.size != 2 << n:
            raise DimensionError(f"dump holds {body.size // 2} amplitudes for {n} qubits")
        return cls(body[0::2] + 1j * body[1::2])

    def dump(self, path: str | Path) -> None:
        Path(path).write_bytes(self.to_bytes())

    @classmethod
    def load(cls, path: str | Path) -> StateVector:
        return cls.from_bytes(Path(path).read_bytes())


def _pauli_times(state: StateVector, p: PauliOperator) -> np.ndarray:
    if p.n_qubits != state.n_qubits:
        raise DimensionError(f"{p.n_qubits}-qubit Pauli on {state.n_qubits}-qubit state")
    idx = state._index
    out = state.amplitudes[idx ^ p.x.bits]
    parity = (np.bitwise_count(idx & p.z.bits) & 1).astype(np.int8)
    out = out * (1 - 2 * parity)
    y_count = (p.z.bits & p.x.bits).bit_count()
    return out * ((-1j) ** y_count)


@dataclass
class MeasurementRecord:
    """Outcomes as ``+1``/``-1`` with their Born probabilities."""

    rng_seed: int
    outcomes: list[int] = field(default_factory=list)
    probabilities: list[float] = field(default_factory=list)

    @property
    def bits(self) -> list[int]:
        return [0 if o == 1 else 1 for o in self.outcomes]


def measure_pauli(state: StateVector, p: PauliOperator, rng: np.random.Generator) -> tuple[int, float]:
    """Projective measurement of ``p``; returns ``(outcome, probability)``."""
    pv = _pauli_times(state, p)
    exp = float(np.real(np.vdot(state.amplitudes, pv)))
    p_plus = min(1.0, max(0.0, (1 + exp) / 2))
    outcome = 1 if rng.random() < p_plus else -1
    prob = p_plus if outcome == 1 else 1 - p_plus
    post = (state.amplitudes + outcome * pv) / 2
    state.amplitudes = post / np.sqrt(prob)
    return outcome, prob


def apply_circuit(
    state: StateVector, circuit: Circuit, seed: int = 0, wires: list[int] | None = None
) -> tuple[StateVector, MeasurementRecord]:
    """Run ``circuit`` on ``state`` in place.

    ``wires[k]`` is the state qubit playing circuit qubit ``k``; by default
    the circuit must span the whole state.
    """
    if wires is None:
        if circuit.n_qubits != state.n_qubits:
            raise DimensionError(f"{circuit.n_qubits}-qubit circuit on {state.n_qubits}-qubit state")
        wires = list(range(state.n_qubits))
    elif len(wires) != circuit.n_qubits or len(set(wires)) != len(wires):
        raise DimensionError("wires must map every circuit qubit to a distinct state qubit")
    elif any(not 0 <= w < state.n_qubits for w in wires):
        raise DimensionError("wire outside the state")
    rng = make_rng(seed)
    record = MeasurementRecord(seed)
    cbits: dict[int, int] = {}
    for g in circuit.gates:
        qs = [wires[q] for q in g.qubits]
        if g.kind == "H":
            state.apply_h(qs[0])
        elif g.kind == "X":
            state.apply_x(qs[0])
        elif g.kind == "Z":
            state.apply_z(qs[0])
        elif g.kind == "CNOT":
            state.apply_cnot(qs[0], qs[1])
        elif g.kind == "CZ":
            state.apply_cz(qs[0], qs[1])
        elif g.kind == "MEASURE_PAULI_PRODUCT":
            outcome, prob = measure_pauli(state, _widen(g.pauli, wires, state.n_qubits), rng)
            cbits[g.cbit] = 0 if outcome == 1 else 1
            record.outcomes.append(outcome)
            record.probabilities.append(prob)
        elif g.kind in ("X_IF", "Z_IF"):
            if g.cbit not in cbits:
                raise CircuitError(f"c{g.cbit} read before it is written")
            if cbits[g.cbit]:
                (state.apply_x if g.kind == "X_IF" else state.apply_z)(qs[0])
    return state, record


def _widen(p: PauliOperator, wires: list[int], n: int) -> PauliOperator:
    z = BitVector.from_indices((wires[i] for i in p.z.support()), n)
    x = BitVector.from_indices((wires[i] for i in p.x.support()), n)
    return PauliOperator(z, x)


def expectation(state: StateVector, p: PauliOperator) -> float:
    return float(np.real(np.vdot(state.amplitudes, _pauli_times(state, p))))


# ---------------------------------------------------------------------------
# Mixed states
# ---------------------------------------------------------------------------


class DensityMatrix:
    """Dense density matrix; qubit ``k`` is bit ``k`` of the row index."""

    def __init__(self, entries):
        m = np.asarray(entries, dtype=np.complex128)
        n = int(m.shape[0]).bit_length() - 1
        if m.shape != (1 << n, 1 << n):
            raise DimensionError(f"bad density matrix shape {m.shape}")
        self.entries = m
        self.n_qubits = n

    @classmethod
    def pure(cls, state: StateVector) -> DensityMatrix:
        a = state.amplitudes
        return cls(np.outer(a, a.conj()))

    @property
    def trace(self) -> complex:
        return complex(np.trace(self.entries))

    def is_valid(self, tol: float = 1e-12) -> bool:
        m = self.entries
        herm = np.max(np.abs(m - m.conj().T), initial=0.0) <= tol
        tr = abs(np.trace(m) - 1) <= tol
        psd = np.min(np.linalg.eigvalsh((m + m.conj().T) / 2)) >= -1e-10
        return bool(herm and tr and psd)


def partial_trace(state: StateVector, keep: list[int]) -> DensityMatrix:
    """Reduced state on ``keep``; ``keep[j]`` becomes bit ``j`` of the result."""
    n = state.n_qubits
    if len(set(keep)) != len(keep) or any(not 0 <= q < n for q in keep):
        raise DimensionError(f"invalid keep set {keep} for {n} qubits")
    tensor = state.amplitudes.reshape([2] * n)
    # numpy axis a is qubit n-1-a
    row_axes = [n - 1 - q for q in reversed(keep)]
    rest = [a for a in range(n) if a not in row_axes]
    mat = np.transpose(tensor, row_axes + rest).reshape(1 << len(keep), -1)
    return DensityMatrix(mat @ mat.conj().T)


def fidelity_qubit(rho: DensityMatrix, psi: StateVector) -> float:
    if rho.n_qubits != 1 or psi.n_qubits != 1:
        raise DimensionError("fidelity_qubit expects one-qubit operands")
    a = psi.amplitudes
    return float(np.real(np.vdot(a, rho.entries @ a)))


def logical_basis(code: StabilizerCode) -> tuple[StateVector, StateVector]:
    """``|0>_L`` (uniform over ``C2``) and ``|1>_L`` (uniform over ``A_1 + C2``)."""
    n = code.n_qubits
    elems = span_elements(code.c2)
    a1 = code.logical_x.x
    zero = np.zeros(1 << n, dtype=np.complex128)
    one = np.zeros(1 << n, dtype=np.complex128)
    for x in elems:
        zero[x.bits] = 1.0
        one[(x + a1).bits] = 1.0
    scale = 1 / np.sqrt(len(elems))
    return StateVector(zero * scale), StateVector(one * scale)


def branch_states(code: StabilizerCode, r: int, alpha: complex, beta: complex) -> list[StateVector]:
    """``alpha|x_r> + beta|1 + x_r>`` for every ``x`` in ``C2``, on the held qubits."""
    held = code.edges.star(r)
    m = len(held)
    ones = BitVector.ones(m)
    out = []
    for x in span_elements(code.c2):
        xr = x.restrict(held)
        amps = np.zeros(1 << m, dtype=np.complex128)
        amps[xr.bits] += alpha
        amps[(xr + ones).bits] += beta
        out.append(StateVector(amps))
    return out


def codeword_mixture(code: StabilizerCode, r: int, alpha: complex, beta: complex) -> DensityMatrix:
    states = branch_states(code, r, alpha, beta)
    acc = sum(np.outer(s.amplitudes, s.amplitudes.conj()) for s in states)
    return DensityMatrix(acc / len(states))


MAX_MIXTURE_VERTICES = 6


def codeword_mixture_check(
    rho_r: DensityMatrix, code: StabilizerCode, r: int, alpha: complex, beta: complex, tol: float = 1e-10
) -> bool:
    """Entrywise comparison of ``rho_r`` with the equal-weight branch mixture."""
    if code.n_vertices > MAX_MIXTURE_VERTICES:
        raise ValueError(f"mixture check limited to n <= {MAX_MIXTURE_VERTICES}")
    expected = codeword_mixture(code, r, alpha, beta)
    if expected.entries.shape != rho_r.entries.shape:
        raise DimensionError("reduced state has the wrong size")
    return bool(np.max(np.abs(rho_r.entries - expected.entries)) <= tol)
