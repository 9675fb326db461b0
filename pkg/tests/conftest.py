import pytest

from hamdecomp.instances import Instance
from hamdecomp.multigraph import CoverPair


def hex_instance():
    return Instance.from_orders([1, 2, 3, 4, 5, 6], [1, 4, 6, 2, 3, 5], "undirected", one_based=True)


def twin_instance():
    # Shared edges 1-2 and 4-5.
    return Instance.from_orders([1, 2, 3, 4, 5, 6], [1, 2, 6, 4, 5, 3], "undirected", one_based=True)


def oct_instance():
    return Instance.from_orders([1, 5, 6, 2, 3, 7, 8, 4], [1, 2, 7, 6, 3, 4, 5, 8], "undirected", one_based=True)


def reversed_triangle():
    return Instance.from_orders([1, 2, 3], [1, 3, 2], "directed", one_based=True)


def pair_from_z_edges(inst, z_edges, one_based=True):
    """Cover pair whose z side holds the given endpoint pairs (x copies first)."""
    g = inst.union
    shift = 1 if one_based else 0
    pool = {}
    for e in g.edges:
        pool.setdefault(e.endpoints, []).append(e.id)
    a = [0] * len(g.edges)
    for u, v in z_edges:
        u, v = u - shift, v - shift
        key = (u, v) if g.directed else (min(u, v), max(u, v))
        a[pool[key].pop(0)] = 1
    return CoverPair(a)


def all_cover_assignments(g, presplit=True):
    """Every 0/1 assignment meeting the degree discipline (plain DFS, small n)."""
    m = len(g.edges)
    forced = {}
    if presplit:
        for xe, ye in g.shared_pairs:
            forced[xe], forced[ye] = 1, 0
    out = []
    vals = [0] * m

    def ok_partial(i):
        # check only vertices all of whose edges are decided
        e = g.edges[i]
        for v in (e.tail, e.head):
            groups = [g.out_edges[v], g.in_edges[v]] if g.directed else [g.incident[v]]
            need = 1 if g.directed else 2
            for grp in groups:
                if max(grp) <= i and sum(vals[f] for f in grp) != need:
                    return False
        return True

    def rec(i):
        if i == m:
            out.append(list(vals))
            return
        for b in ((forced[i],) if i in forced else (0, 1)):
            vals[i] = b
            if ok_partial(i):
                rec(i + 1)
        vals[i] = 0

    rec(0)
    return out


@pytest.fixture
def hexagon():
    return hex_instance()


@pytest.fixture
def twin():
    return twin_instance()


@pytest.fixture
def octagon():
    return oct_instance()


@pytest.fixture
def twin_cover(twin):
    return pair_from_z_edges(twin, [(1, 2), (2, 6), (6, 1), (3, 4), (4, 5), (5, 3)])


@pytest.fixture
def hex_solution(hexagon):
    return pair_from_z_edges(hexagon, [(1, 4), (4, 5), (5, 3), (3, 2), (2, 6), (6, 1)])


# One "criterion N PASS|FAIL detail" line per acceptance check, printed after the run.
ACCEPTANCE_LINES: list[str] = []


def record_criterion(number, passed, detail=""):
    ACCEPTANCE_LINES.append(f"criterion {number} {'PASS' if passed else 'FAIL'} {detail}".rstrip())


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
