"""Local search over cover pairs minimising the total number of cycles.

A move takes an unfixed z edge, fixes it in w and lets chain fixing restore
(as far as it can) the degree discipline.  Directed instances need nothing
more.  On undirected instances the closure can leave broken vertices
(z-degree != 2), which are repaired by moving random unfixed incident edges;
several random repair branches are tried per candidate edge.

Copies of shared edges are fixed once, x copy in z and y copy in w, and are
never moved.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .multigraph import (
    W_SIDE,
    Z_SIDE,
    CoverPair,
    UnionMultigraph,
    total_components,
    validate_cover,
)
from .rng import Xorshift64Star

UNFIXED = -1


@dataclass
class LsParams:
    attempt_limit: int = 10

    def __post_init__(self):
        if self.attempt_limit < 1:
            raise ValueError("attempt_limit must be at least 1")


@dataclass
class LsStats:
    moves_tried: int = 0
    moves_accepted: int = 0
    repairs_failed: int = 0
    max_fix_ops: int = 0
    history: list[int] = field(default_factory=list)  # accepted component totals


class LsState:
    def __init__(self, pair: CoverPair, g: UnionMultigraph):
        validate_cover(pair, g)
        self.g = g
        m = len(g.edges)
        self.assign = list(pair.assignment)
        # Copies are interchangeable: make sure the x copy is the z one.
        for xe, ye in g.shared_pairs:
            if self.assign[xe] == W_SIDE and self.assign[ye] == Z_SIDE:
                self.assign[xe], self.assign[ye] = Z_SIDE, W_SIDE
        self.fixed = [UNFIXED] * m
        self.checked = [False] * m
        self.fix_trail: list[int] = []
        self.multiple = g.shared_ids()
        for xe, ye in g.shared_pairs:
            self.fixed[xe] = Z_SIDE
            self.fixed[ye] = W_SIDE
        self.zdeg = [0] * g.n
        for e in g.edges:
            if self.assign[e.id] == Z_SIDE:
                self.zdeg[e.tail] += 1
                self.zdeg[e.head] += 1
        self.touched: set[int] = set()
        self.fix_ops = 0

    @property
    def pair(self) -> CoverPair:
        return CoverPair(list(self.assign))

    def fix(self, e: int, side: int) -> None:
        self.fixed[e] = side
        self.fix_trail.append(e)
        self.fix_ops += 1
        if self.assign[e] != side:
            self.assign[e] = side
            edge = self.g.edges[e]
            delta = 1 if side == Z_SIDE else -1
            self.zdeg[edge.tail] += delta
            self.zdeg[edge.head] += delta
            self.touched.add(edge.tail)
            self.touched.add(edge.head)

    def snapshot(self):
        return (list(self.assign), list(self.zdeg), set(self.touched), len(self.fix_trail))

    def rollback(self, snap) -> None:
        assign, zdeg, touched, mark = snap
        self.assign = list(assign)
        self.zdeg = list(zdeg)
        self.touched = set(touched)
        while len(self.fix_trail) > mark:
            self.fixed[self.fix_trail.pop()] = UNFIXED

    def commit(self) -> None:
        """Keep the current pair as the new base: unfix all non-multiple edges."""
        while self.fix_trail:
            self.fixed[self.fix_trail.pop()] = UNFIXED
        self.touched.clear()

    def fixed_edges(self) -> set[int]:
        return {e for e, s in enumerate(self.fixed) if s != UNFIXED}

    def broken_vertices(self) -> list[int]:
        return sorted(v for v in self.touched if self.zdeg[v] != 2)


def _check_fixable(state: LsState, edge_id: int, side: int) -> bool:
    current = state.fixed[edge_id]
    if current == UNFIXED:
        return True
    if current != side:
        raise ValueError(f"edge {edge_id} is already fixed on the other side")
    return False


def chain_fix_directed(state: LsState, edge_id: int, side: int) -> int:
    """Fix an arc and close over the in/out discipline; returns fix operations done."""
    if not _check_fixable(state, edge_id, side):
        return 0
    g = state.g
    fixed = state.fixed
    before = state.fix_ops
    stack = [(edge_id, side)]
    while stack:
        e, s = stack.pop()
        if fixed[e] != UNFIXED:
            continue
        state.fix(e, s)
        state.checked[e] = True
        edge = g.edges[e]
        o0, o1 = g.out_edges[edge.tail]
        i0, i1 = g.in_edges[edge.head]
        for sib in (o1 if o0 == e else o0, i1 if i0 == e else i0):
            if fixed[sib] == UNFIXED:
                stack.append((sib, 1 - s))
    return state.fix_ops - before


def chain_fix_undirected(state: LsState, edge_id: int, side: int) -> int:
    """Fix an edge; any vertex holding two edges fixed on one side gets its
    remaining unfixed edges fixed on the other side, recursively."""
    if not _check_fixable(state, edge_id, side):
        return 0
    g = state.g
    fixed = state.fixed
    before = state.fix_ops
    stack = [(edge_id, side)]
    while stack:
        e, s = stack.pop()
        if fixed[e] != UNFIXED:
            continue
        state.fix(e, s)
        edge = g.edges[e]
        for v in (edge.tail, edge.head):
            inc = g.incident[v]
            if sum(1 for f in inc if fixed[f] == s) >= 2:
                for f in inc:
                    if fixed[f] == UNFIXED:
                        stack.append((f, 1 - s))
    return state.fix_ops - before


def repair_vertex(state: LsState, v: int, rng: Xorshift64Star) -> bool:
    """One repair step at broken vertex ``v``; False if no unfixed edge can help."""
    g = state.g
    if state.zdeg[v] < 2:
        want_from, target = W_SIDE, Z_SIDE
    else:
        want_from, target = Z_SIDE, W_SIDE
    candidates = [
        e for e in g.incident[v]
        if state.assign[e] == want_from and state.fixed[e] == UNFIXED
    ]
    if not candidates:
        return False
    chain_fix_undirected(state, rng.choice(candidates), target)
    return True


def repair_broken_vertices(state: LsState, rng: Xorshift64Star) -> bool:
    """Repair broken vertices in ascending order until none is left.

    Returns False (failed) when a broken vertex has no usable edge or after
    4n edge moves.
    """
    limit = 4 * state.g.n
    moves = 0
    while True:
        broken = state.broken_vertices()
        if not broken:
            return True
        if moves >= limit:
            return False
        if not repair_vertex(state, broken[0], rng):
            return False
        moves += 1


def _z_candidates(state: LsState, rng: Xorshift64Star) -> list[int]:
    cands = [e for e, a in enumerate(state.assign) if a == Z_SIDE]
    rng.shuffle(cands)
    return cands


def local_search_directed(
    pair: CoverPair,
    g: UnionMultigraph,
    rng: Xorshift64Star | None = None,
    stats: LsStats | None = None,
) -> CoverPair:
    rng = rng or Xorshift64Star(0)
    stats = stats if stats is not None else LsStats()
    state = LsState(pair, g)
    current = total_components(state.assign, g)
    while current > 2:
        improved = False
        state.checked = [False] * len(g.edges)
        for e in _z_candidates(state, rng):
            if state.checked[e] or state.fixed[e] != UNFIXED or state.assign[e] != Z_SIDE:
                continue
            snap = state.snapshot()
            state.fix_ops = 0
            chain_fix_directed(state, e, W_SIDE)
            stats.moves_tried += 1
            stats.max_fix_ops = max(stats.max_fix_ops, state.fix_ops)
            new = total_components(state.assign, g)
            if new < current:
                state.commit()
                current = new
                stats.moves_accepted += 1
                stats.history.append(new)
                improved = True
                break
            state.rollback(snap)
        if not improved:
            break
    return state.pair


def local_search_undirected(
    pair: CoverPair,
    g: UnionMultigraph,
    params: LsParams | None = None,
    rng: Xorshift64Star | None = None,
    stats: LsStats | None = None,
) -> CoverPair:
    params = params or LsParams()
    rng = rng or Xorshift64Star(0)
    stats = stats if stats is not None else LsStats()
    state = LsState(pair, g)
    current = total_components(state.assign, g)
    while current > 2:
        improved = False
        state.checked = [False] * len(g.edges)
        for e in _z_candidates(state, rng):
            if state.checked[e] or state.fixed[e] != UNFIXED or state.assign[e] != Z_SIDE:
                continue
            base = state.snapshot()
            state.fix_ops = 0
            chain_fix_undirected(state, e, W_SIDE)
            moved = state.snapshot()
            moved_ops = state.fix_ops
            for _ in range(params.attempt_limit):
                stats.moves_tried += 1
                state.fix_ops = moved_ops
                ok = repair_broken_vertices(state, rng)
                stats.max_fix_ops = max(stats.max_fix_ops, state.fix_ops)
                if ok:
                    new = total_components(state.assign, g)
                    if new < current:
                        state.commit()
                        current = new
                        stats.moves_accepted += 1
                        stats.history.append(new)
                        improved = True
                        break
                else:
                    stats.repairs_failed += 1
                state.rollback(moved)
            if improved:
                break
            state.rollback(base)
            state.checked[e] = True
        if not improved:
            break
    return state.pair


def local_search(pair: CoverPair, g: UnionMultigraph, params: LsParams | None = None,
                 rng: Xorshift64Star | None = None, stats: LsStats | None = None) -> CoverPair:
    if g.directed:
        return local_search_directed(pair, g, rng, stats)
    return local_search_undirected(pair, g, params, rng, stats)
