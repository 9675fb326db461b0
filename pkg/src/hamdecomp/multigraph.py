"""Union multigraph of two Hamiltonian cycles, cycle-cover pairs and certificates.

Vertices are dense 0-based integers internally.  Every edge of the union
carries an ``origin`` label (``"x"`` or ``"y"``); an edge present in both
cycles appears as two parallel copies, one per origin.

A cover pair is a 0/1 list indexed by edge id: 1 puts the edge into ``z``,
0 into ``w``.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Sequence

DIRECTED = "directed"
UNDIRECTED = "undirected"
KINDS = (DIRECTED, UNDIRECTED)

FROM_X = "x"
FROM_Y = "y"

Z_SIDE = 1
W_SIDE = 0


class HamDecompError(Exception):
    """Base class for all library errors."""


class InvalidCycle(HamDecompError):
    pass


class MismatchedInstances(HamDecompError):
    pass


class InvalidCover(HamDecompError):
    pass


def _check_kind(kind: str) -> None:
    if kind not in KINDS:
        raise ValueError(f"unknown kind {kind!r}")


@dataclass(frozen=True)
class HamCycle:
    order: tuple[int, ...]
    kind: str

    def __post_init__(self):
        _check_kind(self.kind)
        order = tuple(int(v) for v in self.order)
        object.__setattr__(self, "order", order)
        n = len(order)
        if n < 3:
            raise InvalidCycle(f"a Hamiltonian cycle needs at least 3 vertices, got {n}")
        if sorted(order) != list(range(n)):
            raise InvalidCycle(f"cycle {list(order)} is not a permutation of 0..{n - 1}")

    @property
    def n(self) -> int:
        return len(self.order)

    def edge_pairs(self) -> list[tuple[int, int]]:
        """The n edges in traversal order; undirected pairs are (min, max)."""
        o = self.order
        pairs = [(o[i], o[(i + 1) % len(o)]) for i in range(len(o))]
        if self.kind == UNDIRECTED:
            pairs = [(a, b) if a <= b else (b, a) for a, b in pairs]
        return pairs

    def canonical(self) -> tuple[int, ...]:
        """Rotation (and, if undirected, reflection) invariant form."""
        o = self.order
        k = o.index(0)
        fwd = o[k:] + o[:k]
        if self.kind == DIRECTED:
            return fwd
        back = (fwd[0],) + tuple(reversed(fwd[1:]))
        return min(fwd, back)

    def same_cycle(self, other: "HamCycle") -> bool:
        return self.kind == other.kind and self.n == other.n and self.canonical() == other.canonical()


@dataclass(frozen=True)
class Edge:
    id: int
    tail: int
    head: int
    origin: str

    @property
    def endpoints(self) -> tuple[int, int]:
        return (self.tail, self.head)


@dataclass
class UnionMultigraph:
    n: int
    kind: str
    edges: list[Edge]
    shared_pairs: list[tuple[int, int]]
    # Undirected: the 4 incident edge ids of every vertex.  Directed: the
    # 2 outgoing and 2 incoming edge ids.
    incident: list[list[int]] = field(repr=False)
    out_edges: list[list[int]] = field(repr=False)
    in_edges: list[list[int]] = field(repr=False)

    @property
    def directed(self) -> bool:
        return self.kind == DIRECTED

    def other_end(self, edge_id: int, v: int) -> int:
        e = self.edges[edge_id]
        return e.head if e.tail == v else e.tail

    def edges_from(self, origin: str) -> list[int]:
        return [e.id for e in self.edges if e.origin == origin]

    def shared_ids(self) -> set[int]:
        return {i for pair in self.shared_pairs for i in pair}


def build_union(x: HamCycle, y: HamCycle) -> UnionMultigraph:
    if x.n != y.n or x.kind != y.kind:
        raise MismatchedInstances(
            f"cycles differ: n={x.n}/{y.n}, kind={x.kind}/{y.kind}"
        )
    n, kind = x.n, x.kind
    edges: list[Edge] = []
    for origin, cyc in ((FROM_X, x), (FROM_Y, y)):
        for a, b in cyc.edge_pairs():
            edges.append(Edge(len(edges), a, b, origin))

    x_index = {e.endpoints: e.id for e in edges[:n]}
    shared = [
        (x_index[e.endpoints], e.id) for e in edges[n:] if e.endpoints in x_index
    ]

    incident: list[list[int]] = [[] for _ in range(n)]
    out_edges: list[list[int]] = [[] for _ in range(n)]
    in_edges: list[list[int]] = [[] for _ in range(n)]
    for e in edges:
        incident[e.tail].append(e.id)
        incident[e.head].append(e.id)
        out_edges[e.tail].append(e.id)
        in_edges[e.head].append(e.id)
    return UnionMultigraph(n, kind, edges, shared, incident, out_edges, in_edges)


@dataclass
class CoverPair:
    assignment: list[int]

    def copy(self) -> "CoverPair":
        return CoverPair(list(self.assignment))

    def side(self, value: int) -> list[int]:
        return [i for i, a in enumerate(self.assignment) if a == value]


def validate_cover(pair: CoverPair, g: UnionMultigraph) -> None:
    a = pair.assignment
    if len(a) != len(g.edges) or any(v not in (0, 1) for v in a):
        raise InvalidCover("assignment must hold one 0/1 value per edge")
    if g.directed:
        for v in range(g.n):
            if sum(a[e] for e in g.out_edges[v]) != 1 or sum(a[e] for e in g.in_edges[v]) != 1:
                raise InvalidCover(f"vertex {v} violates the in/out discipline")
    else:
        for v in range(g.n):
            if sum(a[e] for e in g.incident[v]) != 2:
                raise InvalidCover(f"vertex {v} does not have z-degree 2")


def is_valid_cover(pair: CoverPair, g: UnionMultigraph) -> bool:
    try:
        validate_cover(pair, g)
    except InvalidCover:
        return False
    return True


def side_cycles(assignment: Sequence[int], g: UnionMultigraph, side: int) -> list[list[int]]:
    """Decompose one side of a valid cover into cycles (vertex sequences).

    No validation is done here; callers pass valid covers.
    """
    n = g.n
    if g.directed:
        succ = [-1] * n
        for v in range(n):
            for e in g.out_edges[v]:
                if assignment[e] == side:
                    succ[v] = g.edges[e].head
        seen = [False] * n
        cycles = []
        for s in range(n):
            if seen[s]:
                continue
            cyc = []
            v = s
            while not seen[v]:
                seen[v] = True
                cyc.append(v)
                v = succ[v]
            cycles.append(cyc)
        return cycles

    nbr: list[list[int]] = [[] for _ in range(n)]
    for v in range(n):
        for e in g.incident[v]:
            if assignment[e] == side:
                nbr[v].append(e)
    seen = [False] * n
    cycles = []
    edges = g.edges
    for s in range(n):
        if seen[s]:
            continue
        cyc = [s]
        seen[s] = True
        prev_edge = nbr[s][0]
        v = edges[prev_edge].head if edges[prev_edge].tail == s else edges[prev_edge].tail
        while v != s:
            seen[v] = True
            cyc.append(v)
            e0, e1 = nbr[v]
            nxt = e1 if e0 == prev_edge else e0
            prev_edge = nxt
            v = edges[nxt].head if edges[nxt].tail == v else edges[nxt].tail
        cycles.append(cyc)
    return cycles


def count_components(pair: CoverPair, g: UnionMultigraph) -> tuple[int, int]:
    validate_cover(pair, g)
    return (
        len(side_cycles(pair.assignment, g, Z_SIDE)),
        len(side_cycles(pair.assignment, g, W_SIDE)),
    )


def total_components(assignment: Sequence[int], g: UnionMultigraph) -> int:
    """Unvalidated z + w component count; hot path for local search."""
    return len(side_cycles(assignment, g, Z_SIDE)) + len(side_cycles(assignment, g, W_SIDE))


def extract_subtours(pair: CoverPair, g: UnionMultigraph) -> list[frozenset[int]]:
    """Vertex sets of all non-Hamiltonian cycles on either side, deduplicated.

    Ordered by first appearance (z cycles first), which keeps cut order
    deterministic.
    """
    validate_cover(pair, g)
    found: list[frozenset[int]] = []
    seen: set[frozenset[int]] = set()
    for side in (Z_SIDE, W_SIDE):
        cycles = side_cycles(pair.assignment, g, side)
        if len(cycles) == 1:
            continue
        for cyc in cycles:
            s = frozenset(cyc)
            if s not in seen:
                seen.add(s)
                found.append(s)
    return found


def is_hamiltonian_pair(pair: CoverPair, g: UnionMultigraph) -> bool:
    return count_components(pair, g) == (1, 1)


@dataclass(frozen=True)
class Certificate:
    z: HamCycle
    w: HamCycle


def pair_to_certificate(pair: CoverPair, g: UnionMultigraph) -> Certificate:
    zc = side_cycles(pair.assignment, g, Z_SIDE)
    wc = side_cycles(pair.assignment, g, W_SIDE)
    if len(zc) != 1 or len(wc) != 1:
        raise InvalidCover("cover pair is not a Hamiltonian decomposition")
    return Certificate(HamCycle(tuple(zc[0]), g.kind), HamCycle(tuple(wc[0]), g.kind))


def encode_split(z: HamCycle, g: UnionMultigraph) -> CoverPair:
    """Cover pair putting the edges of ``z`` on the z side.

    Each z edge claims one union edge with the same endpoints, preferring the
    x copy, so shared pairs come out pre-split (x copy in z).  Raises
    InvalidCover if some z edge is not in the union.
    """
    pool: dict[tuple[int, int], list[int]] = {}
    for e in g.edges:
        pool.setdefault(e.endpoints, []).append(e.id)
    assignment = [W_SIDE] * len(g.edges)
    for pair in z.edge_pairs():
        ids = pool.get(pair)
        if not ids:
            raise InvalidCover(f"edge {pair} is not available in the union")
        assignment[ids.pop(0)] = Z_SIDE
    return CoverPair(assignment)


@dataclass
class VerifyReport:
    hamiltonian_z: bool
    hamiltonian_w: bool
    union_partition: bool
    distinct_from_xy: bool

    @property
    def checks(self) -> dict[str, bool]:
        return {
            "hamiltonian_z": self.hamiltonian_z,
            "hamiltonian_w": self.hamiltonian_w,
            "union_partition": self.union_partition,
            "distinct_from_xy": self.distinct_from_xy,
        }

    @property
    def passed(self) -> bool:
        return all(self.checks.values())

    def lines(self) -> list[str]:
        return [f"{name} {'PASS' if ok else 'FAIL'}" for name, ok in self.checks.items()]


def _edge_multiset(cycles: Iterable[HamCycle]) -> Counter:
    c: Counter = Counter()
    for cyc in cycles:
        c.update(cyc.edge_pairs())
    return c


def verify_certificate(inst, cert: Certificate) -> VerifyReport:
    """Independent checks that ``cert`` is a decomposition of ``inst``'s union
    into two Hamiltonian cycles other than the input cycles.

    ``inst`` needs ``n``, ``kind``, ``x`` and ``y`` attributes.
    """
    def hamiltonian(c) -> bool:
        return isinstance(c, HamCycle) and c.kind == inst.kind and c.n == inst.n

    ham_z = hamiltonian(cert.z)
    ham_w = hamiltonian(cert.w)
    partition = (
        ham_z and ham_w
        and _edge_multiset([cert.z, cert.w]) == _edge_multiset([inst.x, inst.y])
    )
    distinct = ham_z and ham_w and not any(
        c.same_cycle(o) for c in (cert.z, cert.w) for o in (inst.x, inst.y)
    )
    return VerifyReport(ham_z, ham_w, partition, distinct)
