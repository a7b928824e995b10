"""
The summoning protocol: qubit routing, request handling and end-to-end runs.

Diamond ``i`` of the configuration is vertex ``i`` of ``K_N``; ids must be
``1..N``.  For odd ``N`` a fictitious vertex ``N + 1`` is added to the code
graph.  It has no events, and its qubits go straight from the start agent to
reveal agents.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .circuits import branch_string, held_qubits, synth_decoder, synth_encoder
from .code import StabilizerCode, build_css, n_tilde_for
from .simulator import MeasurementRecord, StateVector, apply_circuit, fidelity_qubit, make_rng, partial_trace
from .spacetime import CausalDiamond, Configuration, Event, InvalidConfigurationError, precedes, validate


class RoutingError(RuntimeError):
    """No causal route exists for some qubit."""


class CausalityError(RuntimeError):
    """A message would travel outside the light cone."""


class InsufficientQubitsError(ValueError):
    """The decoder was offered fewer qubits than the star of the requested vertex."""


@dataclass(frozen=True)
class Agent:
    role: str  # "S", "request" or "reveal"
    vertex: int = 0

    @property
    def name(self) -> str:
        if self.role == "S":
            return "S"
        return f"A_{'y' if self.role == 'request' else 'z'}{self.vertex}"

    def event(self, c: Configuration) -> Event:
        if self.role == "S":
            return c.start
        d = c.diamond(self.vertex)
        return d.request if self.role == "request" else d.reveal


START = Agent("S")


def request_agent(i: int) -> Agent:
    return Agent("request", i)


def reveal_agent(i: int) -> Agent:
    return Agent("reveal", i)


@dataclass(frozen=True)
class Message:
    sender: Agent
    receiver: Agent
    qubit: tuple[int, int]

    def to_dict(self, c: Configuration) -> dict:
        return {
            "from": {"agent": self.sender.name, **self.sender.event(c).to_dict()},
            "to": {"agent": self.receiver.name, **self.receiver.event(c).to_dict()},
            "qubit": f"e_{self.qubit[0]}_{self.qubit[1]}",
        }


@dataclass(frozen=True)
class RoutingPlan:
    """Initial holder of every edge qubit and the forwarding rule of each holder.

    ``forward_rules[i][edge]`` is ``(destination if y_i is requested,
    destination otherwise)``.
    """

    n: int
    n_tilde: int
    assignments: dict[tuple[int, int], Agent]
    forward_rules: dict[int, dict[tuple[int, int], tuple[Agent, Agent]]]

    def held_by(self, i: int) -> list[tuple[int, int]]:
        return sorted(e for e, a in self.assignments.items() if a == request_agent(i))

    def route(self, r: int) -> tuple[list[Message], set[tuple[int, int]]]:
        """Every message sent when ``y_r`` receives the request, and the edges reaching ``z_r``."""
        msgs = [Message(START, holder, e) for e, holder in sorted(self.assignments.items())]
        for i in sorted(self.forward_rules):
            for e, (if_req, otherwise) in sorted(self.forward_rules[i].items()):
                msgs.append(Message(request_agent(i), if_req if i == r else otherwise, e))
        target = reveal_agent(r)
        delivered = {m.qubit for m in msgs if m.receiver == target}
        return msgs, delivered


def _require_valid(c: Configuration) -> None:
    report = validate(c)
    if not report.valid:
        raise InvalidConfigurationError(report)
    if sorted(c.ids) != list(range(1, c.n + 1)):
        raise ValueError(f"diamond ids must be 1..{c.n}, got {sorted(c.ids)}")
    if c.n < 2:
        raise ValueError("summoning needs at least two diamonds")


def build_routing(c: Configuration) -> RoutingPlan:
    """Assign each edge qubit ``q_ij`` to a request agent that can forward it to either end.

    ``q_ij`` goes to ``A_{y_i}`` when ``y_i`` precedes ``z_j``, else to
    ``A_{y_j}``; when both hold the smaller index wins.  Edges to the
    fictitious vertex of an odd configuration go to ``A_{z_j}`` directly.
    """
    _require_valid(c)
    n = c.n
    nt = n_tilde_for(n)
    assignments: dict[tuple[int, int], Agent] = {}
    rules: dict[int, dict[tuple[int, int], tuple[Agent, Agent]]] = {i: {} for i in range(1, n + 1)}
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            di, dj = c.diamond(i), c.diamond(j)
            if precedes(di.request, dj.reveal):
                holder, other = i, j
            elif precedes(dj.request, di.reveal):
                holder, other = j, i
            else:  # excluded by validity
                raise RoutingError(f"no causal route for q_{i}{j}")
            if not precedes(c.start, c.diamond(holder).request):
                raise RoutingError(f"start cannot reach request point y_{holder}")
            assignments[(i, j)] = request_agent(holder)
            rules[holder][(i, j)] = (reveal_agent(holder), reveal_agent(other))
    if nt > n:
        for j in range(1, n + 1):
            assignments[(j, nt)] = reveal_agent(j)
    return RoutingPlan(n, nt, assignments, {i: r for i, r in rules.items() if r})


def check_causal(c: Configuration, messages: list[Message]) -> None:
    for m in messages:
        if not precedes(m.sender.event(c), m.receiver.event(c)):
            raise CausalityError(f"{m.sender.name} cannot reach {m.receiver.name} with q_{m.qubit}")


@dataclass
class SummoningRun:
    requested: int
    delivered_qubits: list[tuple[int, int]]
    measurement_record: MeasurementRecord
    output_fidelity: float
    messages: list[Message]
    seed: int
    alpha: complex = 1.0
    beta: complex = 0.0
    branch: str = ""
    config: Configuration | None = field(default=None, repr=False)

    def to_dict(self) -> dict:
        return {
            "requested": self.requested,
            "delivered": [f"e_{i}_{j}" for i, j in self.delivered_qubits],
            "fidelity": self.output_fidelity,
            "messages": [m.to_dict(self.config) for m in self.messages],
            "seed": self.seed,
        }


def decode_delivered(
    code: StabilizerCode, state: StateVector, r: int, delivered: set[tuple[int, int]], seed: int
) -> tuple[MeasurementRecord, int]:
    """Run the decoder for vertex ``r`` on the delivered qubits of ``state``.

    Returns the measurement record and the state qubit holding the output.

    Raises:
        InsufficientQubitsError: if any qubit of the star of ``r`` is missing.
    """
    em = code.edges
    have = {em.index(i, j) for i, j in delivered}
    held = held_qubits(code, r)
    missing = [q for q in held if q not in have]
    if missing:
        raise InsufficientQubitsError(f"missing {[em.label(q) for q in missing]} for vertex {r}")
    _, record = apply_circuit(state, synth_decoder(code, r), seed, wires=held)
    return record, held[0]


def _check_amplitudes(alpha: complex, beta: complex) -> None:
    if abs(abs(alpha) ** 2 + abs(beta) ** 2 - 1) > 1e-12:
        raise ValueError("|alpha|^2 + |beta|^2 must equal 1")


def simulate_summon(c: Configuration, alpha: complex, beta: complex, r: int, seed: int = 0) -> SummoningRun:
    """Encode, route, lose every undelivered qubit and decode at ``z_r``."""
    _check_amplitudes(alpha, beta)
    plan = build_routing(c)
    if not 1 <= r <= c.n:
        raise ValueError(f"request {r} outside [1, {c.n}]")
    code = build_css(plan.n_tilde)
    messages, delivered = plan.route(r)
    check_causal(c, messages)

    state = StateVector.with_input(alpha, beta, code.n_qubits, qubit=code.edges.index(1, 2))
    apply_circuit(state, synth_encoder(code))
    record, out = decode_delivered(code, state, r, delivered, seed)
    branch = branch_string(code, r, record.bits)

    psi = StateVector(np.array([alpha, beta]))
    fid = fidelity_qubit(partial_trace(state, [out]), psi)
    return SummoningRun(
        requested=r,
        delivered_qubits=sorted(delivered),
        measurement_record=record,
        output_fidelity=fid,
        messages=messages,
        seed=seed,
        alpha=alpha,
        beta=beta,
        branch=str(branch),
        config=c,
    )


def check_order(c: Configuration, causal_order: list[int]) -> None:
    """Require each diamond's request to precede the next one's in ``causal_order``."""
    if sorted(causal_order) != sorted(c.ids):
        raise ValueError(f"order {causal_order} is not a permutation of {sorted(c.ids)}")
    for a, b in zip(causal_order, causal_order[1:]):
        ya, yb = c.diamond(a).request, c.diamond(b).request
        if not precedes(ya, yb) or (precedes(yb, ya) and ya != yb):
            raise ValueError(f"diamond {a} is not causally before diamond {b}")


def simulate_multi_request(
    c: Configuration,
    requested_set,
    causal_order: list[int],
    alpha: complex,
    beta: complex,
    seed: int = 0,
) -> SummoningRun:
    """Several request agents are asked; only the causally earliest one complies."""
    requested = set(requested_set)
    if not requested:
        raise ValueError("requested set is empty")
    if not requested <= set(c.ids):
        raise ValueError(f"unknown diamonds in {sorted(requested)}")
    check_order(c, list(causal_order))
    r = next(i for i in causal_order if i in requested)
    return simulate_summon(c, alpha, beta, r, seed)


def random_qubit(rng: np.random.Generator) -> tuple[complex, complex]:
    """Haar-random ``(alpha, beta)``."""
    v = rng.normal(size=4)
    a, b = complex(v[0], v[1]), complex(v[2], v[3])
    norm = math.sqrt(abs(a) ** 2 + abs(b) ** 2)
    return a / norm, b / norm


def seeded_qubit(seed: int) -> tuple[complex, complex]:
    return random_qubit(make_rng(seed))


# ---------------------------------------------------------------------------
# Reference configurations
# ---------------------------------------------------------------------------

PRISM_REVEAL_TIME = 1.2
PRISM_START_TIME = -2.0


def _triangle_vertex(k: int) -> tuple[float, float]:
    ang = math.pi / 2 + 2 * math.pi * k / 3
    return (math.cos(ang), math.sin(ang))


def _midpoint(a, b) -> tuple[float, float]:
    return ((a[0] + b[0]) / 2, (a[1] + b[1]) / 2)


def make_triangle_config() -> Configuration:
    """Three diamonds in 2+1d: requests on a unit triangle, reveals at edge midpoints.

    Each ``z_i`` sits above the midpoint of the edge from vertex ``i`` to the
    next vertex, so every pair of diamonds is related in one direction only.
    """
    verts = [_triangle_vertex(k) for k in range(3)]
    diamonds = [
        CausalDiamond(i + 1, Event(0.0, verts[i]), Event(PRISM_REVEAL_TIME, _midpoint(verts[i], verts[(i + 1) % 3])))
        for i in range(3)
    ]
    return Configuration(Event(PRISM_START_TIME, (0.0, 0.0)), tuple(diamonds))


def make_prism_config() -> Configuration:
    """Four diamonds in 2+1d on a triangular prism.

    ``y_1`` and ``z_1`` are the bottom and top centroids; ``y_2..y_4`` are
    the base vertices and ``z_2..z_4`` sit above the top-edge midpoints.
    """
    verts = [_triangle_vertex(k) for k in range(3)]
    diamonds = [CausalDiamond(1, Event(0.0, (0.0, 0.0)), Event(PRISM_REVEAL_TIME, (0.0, 0.0)))]
    diamonds += [
        CausalDiamond(i + 2, Event(0.0, verts[i]), Event(PRISM_REVEAL_TIME, _midpoint(verts[i], verts[(i + 1) % 3])))
        for i in range(3)
    ]
    return Configuration(Event(PRISM_START_TIME, (0.0, 0.0)), tuple(diamonds))


def make_chain_config(n: int = 4) -> Configuration:
    """``n`` timelike-ordered diamonds at the spatial origin of 1+1d."""
    diamonds = [CausalDiamond(k, Event(2.0 * (k - 1), (0.0,)), Event(2.0 * (k - 1) + 1, (0.0,))) for k in range(1, n + 1)]
    return Configuration(Event(-1.0, (0.0,)), tuple(diamonds))
