import pytest

from hamdecomp.instances import Instance, instance_for_seed
from hamdecomp.local_search import (
    UNFIXED,
    LsParams,
    LsState,
    LsStats,
    chain_fix_directed,
    chain_fix_undirected,
    local_search_directed,
    local_search_undirected,
    repair_broken_vertices,
    repair_vertex,
)
from hamdecomp.model import Model, build_base_model
from hamdecomp.multigraph import (
    W_SIDE,
    Z_SIDE,
    CoverPair,
    count_components,
    encode_split,
    is_valid_cover,
    total_components,
)
from hamdecomp.rng import Xorshift64Star
from hamdecomp.solver import Feasible, solve

from conftest import oct_instance, pair_from_z_edges, reversed_triangle


def eid(inst, u, v, origin=None):
    """Edge id for 1-based endpoints."""
    g = inst.union
    u, v = u - 1, v - 1
    key = (u, v) if g.directed else (min(u, v), max(u, v))
    for e in g.edges:
        if e.endpoints == key and (origin is None or e.origin == origin):
            return e.id
    raise KeyError(key)


def random_cover(inst, seed):
    """A valid cover pair found under a random variable relabelling."""
    base = build_base_model(inst)
    perm = list(range(base.num_vars))
    Xorshift64Star(seed).shuffle(perm)
    inv = {p: i for i, p in enumerate(perm)}
    relabelled = Model(base.num_vars)
    for c in base.constraints:
        relabelled.add(type(c)(tuple(inv[e] for e in c.edge_ids), c.lower, c.upper, c.tag))
    result = solve(relabelled)
    if not isinstance(result, Feasible):
        return None
    return CoverPair([result.pair.assignment[inv[e]] for e in range(base.num_vars)])


def covered_instance(n, kind, seed):
    """First instance from ``seed`` onwards that admits a cover pair besides x and y."""
    while True:
        inst = instance_for_seed(n, kind, seed)
        pair = random_cover(inst, seed)
        if pair is not None:
            return inst, pair
        seed += 1000


# ---- directed -------------------------------------------------------------


def test_chain_fix_directed_reversed_triangle():
    inst = reversed_triangle()
    state = LsState(encode_split(inst.y, inst.union), inst.union)
    ops = chain_fix_directed(state, eid(inst, 1, 2), Z_SIDE)
    assert ops == 6 <= 2 * inst.n
    z = {inst.union.edges[e].endpoints for e in state.pair.side(Z_SIDE)}
    assert z == {(0, 1), (1, 2), (2, 0)}
    assert count_components(state.pair, inst.union) == (1, 1)


def test_chain_fix_directed_already_fixed_is_noop():
    inst = reversed_triangle()
    state = LsState(encode_split(inst.x, inst.union), inst.union)
    chain_fix_directed(state, eid(inst, 1, 2), Z_SIDE)
    before = list(state.assign)
    assert chain_fix_directed(state, eid(inst, 2, 3), Z_SIDE) == 0
    assert state.assign == before
    with pytest.raises(ValueError):
        chain_fix_directed(state, eid(inst, 2, 3), W_SIDE)


def test_directed_closure_keeps_discipline():
    inst, pair = covered_instance(50, "directed", 4)
    g = inst.union
    rng = Xorshift64Star(4)
    state = LsState(pair, g)
    for _ in range(1000):
        movable = [e for e in range(len(g.edges)) if state.fixed[e] == UNFIXED]
        e = rng.choice(movable)
        snap = state.snapshot()
        before = list(state.assign)
        state.fix_ops = 0
        chain_fix_directed(state, e, 1 - state.assign[e])
        assert state.fix_ops <= 2 * inst.n
        assert is_valid_cover(state.pair, g)
        if rng.below(2):
            state.commit()
        else:
            state.rollback(snap)
            assert state.assign == before
            assert state.fixed_edges() == g.shared_ids()


CRAFTED_X = [6, 5, 3, 1, 2, 4]
CRAFTED_Y = [3, 4, 2, 5, 1, 6]
# z = 1->2->5->1 and 3->4->6->3; w = 1->6->5->3->1 and 2->4->2.
CRAFTED_Z = [(1, 2), (2, 5), (5, 1), (3, 4), (4, 6), (6, 3)]


def test_directed_single_move_merges_both_sides():
    inst = Instance.from_orders(CRAFTED_X, CRAFTED_Y, "directed", one_based=True)
    pair = pair_from_z_edges(inst, CRAFTED_Z)
    assert count_components(pair, inst.union) == (2, 2)
    stats = LsStats()
    out = local_search_directed(pair, inst.union, Xorshift64Star(0), stats)
    assert count_components(out, inst.union) == (1, 1)
    assert stats.moves_accepted == 1


def test_directed_hamiltonian_input_unchanged():
    inst = instance_for_seed(12, "directed", 9)
    pair = encode_split(inst.x, inst.union)
    assert local_search_directed(pair, inst.union, Xorshift64Star(1)) == pair


@pytest.mark.parametrize("seed", range(30))
def test_directed_monotone(seed):
    inst, pair = covered_instance(40, "directed", seed)
    start = total_components(pair.assignment, inst.union)
    stats = LsStats()
    out = local_search_directed(pair, inst.union, Xorshift64Star(seed), stats)
    assert is_valid_cover(out, inst.union)
    history = [start] + stats.history
    assert all(a > b for a, b in zip(history, history[1:]))
    assert total_components(out.assignment, inst.union) == history[-1] <= start
    assert stats.moves_accepted <= start - 2
    assert stats.max_fix_ops <= 2 * inst.n


# ---- undirected -----------------------------------------------------------


def test_two_fixed_edges_force_the_rest():
    inst = oct_instance()
    g = inst.union
    pair = pair_from_z_edges(inst, [(1, 5), (5, 8), (8, 4), (4, 1), (2, 3), (3, 7), (7, 6), (6, 2)])
    state = LsState(pair, g)
    # Vertex 1 has z edges 1-5, 1-4 and w edges 1-2, 1-8.
    chain_fix_undirected(state, eid(inst, 1, 5), Z_SIDE)
    assert state.fixed[eid(inst, 1, 2)] == UNFIXED
    chain_fix_undirected(state, eid(inst, 1, 4), Z_SIDE)
    assert state.fixed[eid(inst, 1, 2)] == W_SIDE
    assert state.fixed[eid(inst, 1, 8)] == W_SIDE


def test_hex_fix_one_two_in_w(hexagon, hex_solution):
    state = LsState(hex_solution, hexagon.union)
    multiples = hexagon.union.shared_ids()
    chain_fix_undirected(state, eid(hexagon, 1, 2), W_SIDE)
    # At vertex 2: 1-2 and the y copy of 2-3 are fixed in w, so 2-6 is fixed in z;
    # vertex 2 then holds two z-fixed edges (2-3 x copy, 2-6) and nothing is left.
    assert state.fixed_edges() - multiples == {eid(hexagon, 1, 2), eid(hexagon, 2, 6)}
    assert state.fixed[eid(hexagon, 2, 6)] == Z_SIDE
    assert state.assign == hex_solution.assignment
    assert is_valid_cover(state.pair, hexagon.union)


def test_shared_copies_prefixed_opposite(twin, twin_cover):
    state = LsState(twin_cover, twin.union)
    for xe, ye in twin.union.shared_pairs:
        assert (state.fixed[xe], state.fixed[ye]) == (Z_SIDE, W_SIDE)
        assert (state.assign[xe], state.assign[ye]) == (Z_SIDE, W_SIDE)


def broken_oct_state():
    """Octagon cover right after 5-8 moved from z to w; 5 and 8 are broken."""
    inst = oct_instance()
    before = pair_from_z_edges(inst, [(1, 5), (5, 8), (8, 4), (4, 1), (2, 3), (3, 7), (7, 6), (6, 2)])
    state = LsState(before, inst.union)
    chain_fix_undirected(state, eid(inst, 5, 8), W_SIDE)
    return inst, state


def test_oct_broken_state_edges():
    inst, state = broken_oct_state()
    z = {tuple(v + 1 for v in inst.union.edges[e].endpoints) for e in state.pair.side(Z_SIDE)}
    assert z == {(1, 5), (4, 8), (1, 4), (2, 3), (3, 7), (6, 7), (2, 6)}
    assert [v + 1 for v in state.broken_vertices()] == [5, 8]


def test_oct_repair_moves_eight_seven():
    inst, state = broken_oct_state()
    state.fix(eid(inst, 1, 8), W_SIDE)  # leave 8-7 as the only choice
    assert repair_vertex(state, 7, Xorshift64Star(0))
    assert state.assign[eid(inst, 7, 8)] == Z_SIDE
    assert [v + 1 for v in state.broken_vertices()] == [5, 7]


def test_oct_random_choice_includes_eight_seven():
    picks = set()
    for seed in range(20):
        inst, state = broken_oct_state()
        repair_vertex(state, 7, Xorshift64Star(seed))
        picks |= {e for e in (eid(inst, 7, 8), eid(inst, 1, 8)) if state.assign[e] == Z_SIDE}
    assert picks == {eid(inst, 7, 8), eid(inst, 1, 8)}


def test_repair_without_broken_vertices_is_noop(hexagon, hex_solution):
    state = LsState(hex_solution, hexagon.union)
    assert repair_broken_vertices(state, Xorshift64Star(0))
    assert state.assign == hex_solution.assignment


def test_repair_fails_when_edges_are_fixed():
    inst, state = broken_oct_state()
    for u, v in ((5, 6), (4, 5)):
        state.fix(eid(inst, u, v), W_SIDE)
    assert not repair_broken_vertices(state, Xorshift64Star(0))


def test_repair_restores_validity():
    for seed in range(20):
        inst, state = broken_oct_state()
        if repair_broken_vertices(state, Xorshift64Star(seed)):
            assert is_valid_cover(state.pair, inst.union)


def test_undirected_hamiltonian_input_unchanged(hexagon, hex_solution):
    out = local_search_undirected(hex_solution, hexagon.union, LsParams(10), Xorshift64Star(0))
    assert out == hex_solution


def test_twin_cover_reaches_hamiltonian_for_some_seed(twin, twin_cover):
    reached = 0
    for seed in range(100):
        out = local_search_undirected(twin_cover, twin.union, LsParams(10), Xorshift64Star(seed))
        counts = count_components(out, twin.union)
        assert sum(counts) <= 4
        reached += counts == (1, 1)
    assert reached >= 1


def test_more_attempts_do_not_hurt():
    corpus = []
    for seed in range(100):
        corpus.append(covered_instance(24, "undirected", 700 + seed))
    success = {}
    for limit in (1, 10):
        success[limit] = sum(
            total_components(
                local_search_undirected(p, i.union, LsParams(limit), Xorshift64Star(s)).assignment,
                i.union,
            ) == 2
            for s, (i, p) in enumerate(corpus)
        )
    assert success[10] >= success[1]


@pytest.mark.parametrize("seed", range(30))
def test_undirected_monotone_and_linear(seed):
    inst, pair = covered_instance(30, "undirected", seed)
    start = total_components(pair.assignment, inst.union)
    stats = LsStats()
    out = local_search_undirected(pair, inst.union, LsParams(5), Xorshift64Star(seed), stats)
    assert is_valid_cover(out, inst.union)
    history = [start] + stats.history
    assert all(a > b for a, b in zip(history, history[1:]))
    assert stats.moves_accepted <= start - 2
    assert stats.max_fix_ops <= 2 * inst.n


def test_rollback_fidelity_undirected():
    inst, pair = covered_instance(30, "undirected", 3)
    g = inst.union
    rng = Xorshift64Star(3)
    state = LsState(pair, g)
    base_assign = list(state.assign)
    for e in pair.side(Z_SIDE):
        if state.fixed[e] != UNFIXED:
            continue
        snap = state.snapshot()
        chain_fix_undirected(state, e, W_SIDE)
        repair_broken_vertices(state, rng)
        state.rollback(snap)
        assert state.assign == base_assign
        assert state.fixed_edges() == g.shared_ids()
        assert state.broken_vertices() == []


def test_params_validation():
    with pytest.raises(ValueError):
        LsParams(0)
