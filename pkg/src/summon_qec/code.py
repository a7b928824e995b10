"""
The edge-indexed CSS code on ``K_n`` and the CWS comparison code.

Each physical qubit sits on an edge of the complete graph ``K_n`` (``n`` even).
Z-type generators are triangles ``T_1jk``; X-type generators are sums of
stars ``A_1 + A_j``.  The code encodes one qubit, has distance ``n/2`` and
survives the loss of every qubit not adjacent to any single vertex.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations, product
from math import comb

from .gf2 import (
    BitMatrix,
    BitVector,
    DimensionError,
    EdgeIndexMap,
    dot,
    edge_index,
    in_span,
    kernel,
    n_edges,
    rank,
)


class InvalidParameterError(ValueError):
    """Raised for code sizes outside the supported range."""


# ---------------------------------------------------------------------------
# Pauli operators
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PauliOperator:
    """Sign-free Pauli operator in symplectic form ``[P_Z | P_X]``.

    A qubit with both bits set carries ``Y``.
    """

    z: BitVector
    x: BitVector

    def __post_init__(self) -> None:
        if self.z.length != self.x.length:
            raise DimensionError("Z and X parts have different lengths")

    @classmethod
    def identity(cls, n: int) -> PauliOperator:
        return cls(BitVector.zeros(n), BitVector.zeros(n))

    @classmethod
    def z_type(cls, v: BitVector) -> PauliOperator:
        return cls(v, BitVector.zeros(v.length))

    @classmethod
    def x_type(cls, v: BitVector) -> PauliOperator:
        return cls(BitVector.zeros(v.length), v)

    @classmethod
    def from_symplectic(cls, v: BitVector) -> PauliOperator:
        n = v.length // 2
        mask = (1 << n) - 1
        return cls(BitVector(v.bits & mask, n), BitVector(v.bits >> n, n))

    @classmethod
    def from_string(cls, text: str) -> PauliOperator:
        """Parse ``"ZIXY"``; character ``k`` acts on qubit ``k``."""
        z = [ch in "ZY" for ch in text]
        x = [ch in "XY" for ch in text]
        return cls(BitVector.from_bits(z), BitVector.from_bits(x))

    @property
    def n_qubits(self) -> int:
        return self.z.length

    @property
    def weight(self) -> int:
        return (self.z.bits | self.x.bits).bit_count()

    @property
    def symplectic(self) -> BitVector:
        n = self.n_qubits
        return BitVector(self.z.bits | (self.x.bits << n), 2 * n)

    def support(self) -> list[int]:
        return BitVector(self.z.bits | self.x.bits, self.n_qubits).support()

    def __mul__(self, other: PauliOperator) -> PauliOperator:
        return PauliOperator(self.z + other.z, self.x + other.x)

    def __str__(self) -> str:
        chars = {(0, 0): "I", (1, 0): "Z", (0, 1): "X", (1, 1): "Y"}
        return "".join(chars[(a, b)] for a, b in zip(self.z, self.x))


def commutes(p: PauliOperator, q: PauliOperator) -> bool:
    """Symplectic commutation test."""
    if p.n_qubits != q.n_qubits:
        raise DimensionError(f"{p.n_qubits} vs {q.n_qubits} qubits")
    return (dot(p.z, q.x) ^ dot(p.x, q.z)) == 0


# ---------------------------------------------------------------------------
# Graph vectors
# ---------------------------------------------------------------------------


def triangle_vector(i: int, j: int, k: int, n: int) -> BitVector:
    """Indicator of the triangle on vertices ``i, j, k`` of ``K_n``."""
    if len({i, j, k}) != 3:
        raise InvalidParameterError(f"triangle needs distinct vertices, got {(i, j, k)}")
    return BitVector.from_indices(
        (edge_index(i, j, n), edge_index(j, k, n), edge_index(k, i, n)), n_edges(n)
    )


def star_vector(j: int, n: int) -> BitVector:
    """Indicator of the ``n - 1`` edges adjacent to vertex ``j``."""
    if not 1 <= j <= n:
        raise InvalidParameterError(f"vertex {j} outside [1, {n}]")
    return BitVector.from_indices((edge_index(l, j, n) for l in range(1, n + 1) if l != j), n_edges(n))


# ---------------------------------------------------------------------------
# Stabilizer codes
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class StabilizerCode:
    """Stabilizer code whose qubits are the edges of ``K_{n_vertices}``.

    ``h`` holds one generator per row in symplectic layout: columns
    ``[0, n)`` are the Z part, ``[n, 2n)`` the X part.
    """

    n_vertices: int
    h: BitMatrix
    logical_x: PauliOperator | None = None
    logical_z: PauliOperator | None = None
    c1: BitMatrix | None = None
    c1_perp: BitMatrix | None = None
    c2: BitMatrix | None = None
    edges: EdgeIndexMap = field(init=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "edges", EdgeIndexMap(self.n_vertices))
        if self.h.ncols != 2 * self.n_qubits:
            raise DimensionError(f"generator matrix width {self.h.ncols} != 2 * {self.n_qubits}")

    @classmethod
    def from_paulis(cls, n_vertices: int, generators, **kwargs) -> StabilizerCode:
        gens = [g if isinstance(g, PauliOperator) else PauliOperator.from_string(g) for g in generators]
        n = n_edges(n_vertices)
        return cls(n_vertices, BitMatrix(tuple(g.symplectic for g in gens), 2 * n), **kwargs)

    @property
    def n_tilde(self) -> int:
        return self.n_vertices

    @property
    def n_qubits(self) -> int:
        return n_edges(self.n_vertices)

    @property
    def generators(self) -> list[PauliOperator]:
        return [PauliOperator.from_symplectic(r) for r in self.h]

    @property
    def z_rows(self) -> BitMatrix:
        return BitMatrix(tuple(g.z for g in self.generators if g.x.is_zero()), self.n_qubits)

    @property
    def x_rows(self) -> BitMatrix:
        return BitMatrix(tuple(g.x for g in self.generators if g.z.is_zero()), self.n_qubits)

    @property
    def is_css(self) -> bool:
        return all(g.x.is_zero() or g.z.is_zero() for g in self.generators)

    @property
    def n_logical(self) -> int:
        return self.n_qubits - rank(self.h)


def build_css(n_tilde: int) -> StabilizerCode:
    """The ``[[C(n,2), 1, n/2]]`` summoning code on ``K_n`` for even ``n >= 4``."""
    if n_tilde < 4 or n_tilde % 2:
        raise InvalidParameterError(f"n_tilde must be even and >= 4, got {n_tilde}")
    n = n_tilde
    q = n_edges(n)
    zero = BitVector.zeros(q)
    stars = [star_vector(j, n) for j in range(1, n + 1)]
    triangles = [triangle_vector(1, j, k, n) for j, k in combinations(range(2, n + 1), 2)]
    pairs = [stars[0] + stars[j - 1] for j in range(2, n)]
    rows = [PauliOperator(t, zero).symplectic for t in triangles]
    rows += [PauliOperator(zero, a).symplectic for a in pairs]
    return StabilizerCode(
        n_vertices=n,
        h=BitMatrix(tuple(rows), 2 * q),
        logical_x=PauliOperator.x_type(stars[0]),
        logical_z=PauliOperator.z_type(stars[0]),
        c1=BitMatrix(tuple(stars[: n - 1]), q),
        c1_perp=BitMatrix(tuple(triangles), q),
        c2=BitMatrix(tuple(pairs), q),
    )


def in_stabilizer(p: PauliOperator, code: StabilizerCode) -> bool:
    """Membership in the stabilizer group, ignoring signs."""
    return in_span(p.symplectic, code.h)


def in_centralizer(p: PauliOperator, code: StabilizerCode) -> bool:
    return all(commutes(p, g) for g in code.generators)


def is_logical(p: PauliOperator, code: StabilizerCode) -> bool:
    """True iff ``p`` lies in ``C(S) \\ S``."""
    return in_centralizer(p, code) and not in_stabilizer(p, code)


def _check_vertex(code: StabilizerCode, r: int) -> None:
    if not 1 <= r <= code.n_vertices:
        raise InvalidParameterError(f"vertex {r} outside [1, {code.n_vertices}]")


def erased_qubits(code: StabilizerCode, r: int) -> list[int]:
    """Qubits on edges not adjacent to ``r``; the ones lost when summoned to ``r``."""
    _check_vertex(code, r)
    star = set(code.edges.star(r))
    return [i for i in range(code.n_qubits) if i not in star]


def centralizer_on(code: StabilizerCode, support: list[int]) -> list[PauliOperator]:
    """Basis of the Paulis supported on ``support`` that commute with every generator."""
    m = len(support)
    rows = []
    for g in code.generators:
        # variables: [P_Z on support | P_X on support]
        rows.append(BitVector(g.x.restrict(support).bits | (g.z.restrict(support).bits << m), 2 * m))
    out = []
    for v in kernel(BitMatrix(tuple(rows), 2 * m)):
        z = BitVector.from_indices((support[k] for k in range(m) if v[k]), code.n_qubits)
        x = BitVector.from_indices((support[k] for k in range(m) if v[m + k]), code.n_qubits)
        out.append(PauliOperator(z, x))
    return out


def erasure_correctable(code: StabilizerCode, r: int) -> bool:
    """True iff the code recovers from losing every qubit not adjacent to ``r``.

    Every centralizer element supported on the lost qubits must be a
    stabilizer.  Computed from a kernel basis, so it scales to large codes.
    """
    lost = erased_qubits(code, r)
    return all(in_stabilizer(p, code) for p in centralizer_on(code, lost))


def erasure_correctable_exhaustive(code: StabilizerCode, r: int) -> bool:
    """Enumeration oracle for :func:`erasure_correctable` (``4**|lost|`` Paulis)."""
    lost = erased_qubits(code, r)
    n = code.n_qubits
    for letters in product("IXYZ", repeat=len(lost)):
        chars = ["I"] * n
        for q, ch in zip(lost, letters):
            chars[q] = ch
        p = PauliOperator.from_string("".join(chars))
        if in_centralizer(p, code) and not in_stabilizer(p, code):
            return False
    return True


# ---------------------------------------------------------------------------
# Distance
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DistanceResult:
    """Outcome of a bounded minimum-weight search.

    ``distance`` is ``None`` when no logical operator was found up to
    ``searched_weight``; the true distance is then at least ``lower_bound``.
    """

    distance: int | None
    lower_bound: int
    searched_weight: int
    witness: PauliOperator | None = None

    @property
    def exact(self) -> bool:
        return self.distance is not None


def distance(code: StabilizerCode, max_weight: int) -> DistanceResult:
    """Minimum weight of ``C(S) \\ S`` found by increasing-weight enumeration.

    For CSS codes only pure Z and pure X operators need checking, one binary
    vector per support set.  Other codes fall back to all ``3**w`` Pauli
    assignments on each support.
    """
    n = code.n_qubits
    css = code.is_css
    for w in range(1, max_weight + 1):
        for supp in combinations(range(n), w):
            if css:
                v = BitVector.from_indices(supp, n)
                candidates = (PauliOperator.z_type(v), PauliOperator.x_type(v))
            else:
                candidates = _paulis_on(supp, n)
            for p in candidates:
                if is_logical(p, code):
                    return DistanceResult(w, w, w, p)
    return DistanceResult(None, max_weight + 1, max_weight)


def _paulis_on(supp, n):
    for letters in product("XYZ", repeat=len(supp)):
        chars = ["I"] * n
        for q, ch in zip(supp, letters):
            chars[q] = ch
        yield PauliOperator.from_string("".join(chars))


def distance_exhaustive(code: StabilizerCode) -> int | None:
    """Oracle: scan all ``4**n`` Paulis.  Only for very small codes."""
    n = code.n_qubits
    best = None
    for zb in range(1 << n):
        for xb in range(1 << n):
            p = PauliOperator(BitVector(zb, n), BitVector(xb, n))
            w = p.weight
            if w == 0 or (best is not None and w >= best):
                continue
            if is_logical(p, code):
                best = w
    return best


def matching_witness(n_tilde: int) -> PauliOperator:
    """``Z`` on the perfect matching ``{12, 34, ..., (n-1)n}``; a weight ``n/2`` logical."""
    q = n_edges(n_tilde)
    v = BitVector.from_indices((edge_index(2 * i - 1, 2 * i, n_tilde) for i in range(1, n_tilde // 2 + 1)), q)
    return PauliOperator.z_type(v)


# ---------------------------------------------------------------------------
# CWS comparison code
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CwsCode:
    """Graph-state CWS code on ``N(N-1)`` qubits, held structurally.

    Vertex ``(j, (a, b))`` is the half-edge of ``{a, b}`` at endpoint ``j``.
    """

    n: int
    graph_vertices: tuple[tuple[int, tuple[int, int]], ...]
    graph_edges: tuple[tuple[int, int], ...]
    word_operators: tuple[PauliOperator, PauliOperator]

    @property
    def n_qubits(self) -> int:
        return len(self.graph_vertices)

    def adjacency(self) -> dict[int, set[int]]:
        adj: dict[int, set[int]] = {i: set() for i in range(self.n_qubits)}
        for a, b in self.graph_edges:
            adj[a].add(b)
            adj[b].add(a)
        return adj


def build_cws(n: int) -> CwsCode:
    if n < 3:
        raise InvalidParameterError(f"CWS code needs n >= 3, got {n}")
    vertices = tuple((j, e) for e in combinations(range(1, n + 1), 2) for j in e)
    index = {v: i for i, v in enumerate(vertices)}
    edges = set()
    for (j, e), i in index.items():
        k = e[0] if e[1] == j else e[1]
        edges.add(tuple(sorted((i, index[(k, e)]))))
        for l in range(1, n + 1):
            if l not in e:
                edges.add(tuple(sorted((i, index[(j, tuple(sorted((j, l))))]))))
    q = len(vertices)
    words = (PauliOperator.identity(q), PauliOperator.z_type(BitVector.ones(q)))
    return CwsCode(n, vertices, tuple(sorted(edges)), words)


# ---------------------------------------------------------------------------
# Resource comparison
# ---------------------------------------------------------------------------


def n_tilde_for(n: int) -> int:
    """Smallest even vertex count covering ``n`` diamonds."""
    return n + (n % 2)


@dataclass(frozen=True)
class ResourceCounts:
    n: int
    n_tilde: int
    q_css: int
    q_cws: int
    css_gates: dict[str, int]
    cws_prep_gates: dict[str, int]
    cws_gates: dict[str, int]

    @property
    def css_total(self) -> int:
        return sum(self.css_gates.values())

    @property
    def cws_total(self) -> int:
        return sum(self.cws_gates.values())


def resource_counts(n: int) -> ResourceCounts:
    """Qubit and encoding-gate counts of both codes for ``n`` diamonds."""
    from .circuits import gate_count, synth_encoder

    if n < 3:
        raise InvalidParameterError(f"need n >= 3, got {n}")
    nt = n_tilde_for(n)
    enc = gate_count(synth_encoder(build_css(nt)))
    cws = build_cws(n)
    prep = {"H": cws.n_qubits, "CZ": len(cws.graph_edges)}
    # the nontrivial word operator is Z on every qubit, one CZ-equivalent each
    full = {"H": prep["H"], "CZ": prep["CZ"] + cws.n_qubits}
    return ResourceCounts(
        n=n,
        n_tilde=nt,
        q_css=comb(nt, 2),
        q_cws=cws.n_qubits,
        css_gates={"H": enc["H"], "CNOT": enc["CNOT"]},
        cws_prep_gates=prep,
        cws_gates=full,
    )
