"""
Flat Minkowski events, causal diamonds and configuration validity (c = 1).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from itertools import combinations
from pathlib import Path

import networkx as nx


class InvalidConfigurationError(ValueError):
    """Raised when an operation needs a valid configuration and gets another."""

    def __init__(self, report: ValidationReport):
        super().__init__("; ".join(report.violations))
        self.report = report


@dataclass(frozen=True)
class Event:
    t: float
    x: tuple[float, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "x", tuple(float(v) for v in self.x))
        if not 1 <= len(self.x) <= 3:
            raise ValueError(f"spatial dimension must be 1..3, got {len(self.x)}")
        if not all(math.isfinite(v) for v in (self.t, *self.x)):
            raise ValueError("event coordinates must be finite")

    @property
    def dim(self) -> int:
        return len(self.x)

    def to_dict(self) -> dict:
        return {"t": self.t, "x": list(self.x)}

    @classmethod
    def from_dict(cls, d: dict) -> Event:
        return cls(float(d["t"]), tuple(d["x"]))


def precedes(a: Event, b: Event) -> bool:
    """True iff a signal from ``a`` can reach ``b`` (lightlike boundary included)."""
    if a.dim != b.dim:
        raise ValueError(f"dimension mismatch: {a.dim} vs {b.dim}")
    return b.t - a.t >= math.dist(a.x, b.x)


def boost(e: Event, velocity: float, axis: int = 0) -> Event:
    """Lorentz boost along spatial ``axis`` with speed ``|velocity| < 1``."""
    gamma = 1 / math.sqrt(1 - velocity * velocity)
    x = list(e.x)
    t = gamma * (e.t - velocity * x[axis])
    x[axis] = gamma * (x[axis] - velocity * e.t)
    return Event(t, tuple(x))


@dataclass(frozen=True)
class CausalDiamond:
    id: int
    request: Event
    reveal: Event

    def to_dict(self) -> dict:
        return {"id": self.id, "request": self.request.to_dict(), "reveal": self.reveal.to_dict()}

    @classmethod
    def from_dict(cls, d: dict) -> CausalDiamond:
        return cls(int(d["id"]), Event.from_dict(d["request"]), Event.from_dict(d["reveal"]))


def causally_related(d1: CausalDiamond, d2: CausalDiamond) -> bool:
    """Earliest point of one diamond can signal the latest point of the other."""
    return precedes(d1.request, d2.reveal) or precedes(d2.request, d1.reveal)


@dataclass(frozen=True)
class Configuration:
    start: Event
    diamonds: tuple[CausalDiamond, ...]
    dim: int = field(default=0)

    def __post_init__(self) -> None:
        object.__setattr__(self, "diamonds", tuple(self.diamonds))
        if not self.dim:
            object.__setattr__(self, "dim", self.start.dim)
        ids = [d.id for d in self.diamonds]
        if len(set(ids)) != len(ids):
            raise ValueError(f"duplicate diamond ids in {ids}")
        for e in [self.start] + [p for d in self.diamonds for p in (d.request, d.reveal)]:
            if e.dim != self.dim:
                raise ValueError(f"event {e} is not in {self.dim}+1 dimensions")

    @property
    def n(self) -> int:
        return len(self.diamonds)

    @property
    def ids(self) -> list[int]:
        return [d.id for d in self.diamonds]

    def diamond(self, i: int) -> CausalDiamond:
        for d in self.diamonds:
            if d.id == i:
                return d
        raise KeyError(i)

    def to_dict(self) -> dict:
        return {
            "dim": self.dim,
            "start": self.start.to_dict(),
            "diamonds": [d.to_dict() for d in self.diamonds],
        }

    @classmethod
    def from_dict(cls, d: dict) -> Configuration:
        return cls(Event.from_dict(d["start"]), tuple(CausalDiamond.from_dict(x) for x in d["diamonds"]), int(d.get("dim", 0)))

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    @classmethod
    def load(cls, path: str | Path) -> Configuration:
        return cls.from_dict(json.loads(Path(path).read_text()))

    def save(self, path: str | Path) -> None:
        Path(path).write_text(self.to_json() + "\n")


@dataclass
class ValidationReport:
    violations: list[str] = field(default_factory=list)
    bad_diamonds: list[int] = field(default_factory=list)
    unreachable_reveals: list[int] = field(default_factory=list)
    unrelated_pairs: list[tuple[int, int]] = field(default_factory=list)

    @property
    def valid(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.valid


def validate(c: Configuration) -> ValidationReport:
    """Check every diamond is well formed, C1 (reveals after start) and C2 (pairs related)."""
    rep = ValidationReport()
    for d in c.diamonds:
        if not precedes(d.request, d.reveal):
            rep.bad_diamonds.append(d.id)
            rep.violations.append(f"diamond {d.id}: request does not precede reveal")
    for d in c.diamonds:
        if not precedes(c.start, d.reveal):
            rep.unreachable_reveals.append(d.id)
            rep.violations.append(f"C1: reveal of diamond {d.id} is not in the future of the start")
    for d1, d2 in combinations(c.diamonds, 2):
        if not causally_related(d1, d2):
            rep.unrelated_pairs.append((d1.id, d2.id))
            rep.violations.append(f"C2: diamonds {d1.id} and {d2.id} are not causally related")
    return rep


def causal_graph(c: Configuration) -> nx.Graph:
    """Undirected graph with an edge for every causally related pair."""
    g = nx.Graph()
    g.add_nodes_from(c.ids)
    g.add_edges_from((a.id, b.id) for a, b in combinations(c.diamonds, 2) if causally_related(a, b))
    return g


def to_complete_graph(c: Configuration) -> nx.Graph:
    report = validate(c)
    if not report.valid:
        raise InvalidConfigurationError(report)
    return nx.complete_graph(c.ids)


def to_dot(g: nx.Graph, name: str = "causal") -> str:
    lines = [f"graph {name} {{"]
    lines += [f'  {v} [label="{v}"];' for v in sorted(g.nodes)]
    lines += [f"  {a} -- {b};" for a, b in sorted(tuple(sorted(e)) for e in g.edges)]
    lines.append("}")
    return "\n".join(lines) + "\n"
