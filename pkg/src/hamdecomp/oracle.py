"""Brute-force enumeration of Hamiltonian decompositions for small instances.

Deliberately independent of the solver: edges are assigned in index order
with nothing but per-vertex degree counting as pruning, and Hamiltonicity is
checked by a separate walk at every leaf.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .multigraph import Certificate, HamCycle, HamDecompError

MAX_ORACLE_N = 12


class TooLarge(HamDecompError):
    pass


@dataclass
class OracleResult:
    exists: bool
    count_pairs: int
    witnesses: list[Certificate] = field(default_factory=list)


def _single_cycle(n: int, arcs, directed: bool) -> list[int] | None:
    """Vertex order if ``arcs`` form one cycle through all n vertices."""
    adj: list[list[int]] = [[] for _ in range(n)]
    for a, b in arcs:
        adj[a].append(b)
        if not directed:
            adj[b].append(a)
    order = [0]
    prev, cur = -1, 0
    for _ in range(n - 1):
        nxt = None
        for c in adj[cur]:
            if directed or c != prev:
                nxt = c
                break
        if nxt is None or nxt in order:
            return None
        order.append(nxt)
        prev, cur = cur, nxt
    closes = 0 in adj[cur]
    return order if closes else None


def brute_force_decompose(inst, max_witnesses: int = 4) -> OracleResult:
    n = inst.n
    if n > MAX_ORACLE_N:
        raise TooLarge(f"oracle is limited to n <= {MAX_ORACLE_N}, got {n}")
    directed = inst.kind == "directed"
    edges = [(e.tail, e.head) for e in inst.union.edges]
    m = len(edges)
    forced = {}
    for xe, ye in inst.union.shared_pairs:
        forced[xe] = 1
        forced[ye] = 0

    x_set = set(inst.x.edge_pairs())
    y_set = set(inst.y.edge_pairs())

    # Directed: counters per (vertex, out/in); undirected: per vertex.
    if directed:
        cap = 1
        slots = [((a, 0), (b, 1)) for a, b in edges]
    else:
        cap = 2
        slots = [((a, 0), (b, 0)) for a, b in edges]
    used = {0: {}, 1: {}}
    values = [0] * m
    ordered = 0
    seen_keys: set = set()
    witnesses: list[Certificate] = []

    def leaf():
        nonlocal ordered
        z = [edges[i] for i in range(m) if values[i] == 1]
        w = [edges[i] for i in range(m) if values[i] == 0]
        zo = _single_cycle(n, z, directed)
        if zo is None:
            return
        wo = _single_cycle(n, w, directed)
        if wo is None:
            return
        zs, ws = set(z), set(w)
        if zs in (x_set, y_set) or ws in (x_set, y_set):
            return
        ordered += 1
        key = frozenset((frozenset(zs), frozenset(ws)))
        if len(witnesses) < max_witnesses and key not in seen_keys:
            seen_keys.add(key)
            kind = inst.kind
            witnesses.append(Certificate(HamCycle(tuple(zo), kind), HamCycle(tuple(wo), kind)))

    def dfs(i: int):
        if i == m:
            leaf()
            return
        options = (forced[i],) if i in forced else (1, 0)
        for val in options:
            counts = used[val]
            s0, s1 = slots[i]
            if counts.get(s0, 0) >= cap or counts.get(s1, 0) >= cap:
                continue
            counts[s0] = counts.get(s0, 0) + 1
            counts[s1] = counts.get(s1, 0) + 1
            values[i] = val
            dfs(i + 1)
            counts[s0] -= 1
            counts[s1] -= 1

    dfs(0)
    pairs = ordered // 2
    return OracleResult(pairs > 0, pairs, witnesses)
