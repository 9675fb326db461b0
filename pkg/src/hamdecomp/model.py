"""Feasibility model over one binary variable per union edge.

Every constraint has the form ``lower <= sum(x[e] for e in edge_ids) <= upper``.
The base model holds the degree constraints, the two constraints excluding
the input cycles, and the pre-split of shared edge copies.  Subtour
elimination cuts are added lazily, in pairs, as cover pairs with subtours are
discovered.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .multigraph import (
    FROM_X,
    FROM_Y,
    CoverPair,
    HamDecompError,
    UnionMultigraph,
    extract_subtours,
)

DEGREE = "Degree"
FORBID_X = "ForbidX"
FORBID_Y = "ForbidY"
SUBTOUR_UPPER = "SubtourUpper"
SUBTOUR_LOWER = "SubtourLower"
SHARED_SPLIT = "SharedSplit"
INFEASIBLE = "Infeasible"


class EmptyCut(HamDecompError):
    pass


@dataclass(frozen=True)
class CardinalityConstraint:
    edge_ids: tuple[int, ...]
    lower: int
    upper: int
    tag: str
    subset: tuple[int, ...] | None = None

    def __post_init__(self):
        if self.tag == INFEASIBLE:
            return
        if not self.edge_ids:
            raise ValueError("constraint needs at least one variable")
        if not 0 <= self.lower <= self.upper <= len(self.edge_ids):
            raise ValueError(
                f"bad bounds [{self.lower}, {self.upper}] over {len(self.edge_ids)} variables"
            )

    def satisfied_by(self, values: Sequence[int]) -> bool:
        s = sum(values[e] for e in self.edge_ids)
        return self.lower <= s <= self.upper


def subset_key(s) -> tuple[int, ...]:
    return tuple(sorted(s))


@dataclass
class Model:
    num_vars: int
    constraints: list[CardinalityConstraint] = field(default_factory=list)
    cut_registry: set[tuple[int, ...]] = field(default_factory=set)

    @property
    def infeasible(self) -> bool:
        return any(c.tag == INFEASIBLE for c in self.constraints)

    def add(self, c: CardinalityConstraint) -> None:
        self.constraints.append(c)

    def count(self, tag: str) -> int:
        return sum(1 for c in self.constraints if c.tag == tag)


def exclusion_bound(g: UnionMultigraph) -> int:
    return g.n - len(g.shared_pairs) - 2


def build_base_model(inst) -> Model:
    g: UnionMultigraph = inst.union
    model = Model(len(g.edges))

    if g.directed:
        for v in range(g.n):
            model.add(CardinalityConstraint(tuple(g.out_edges[v]), 1, 1, DEGREE))
            model.add(CardinalityConstraint(tuple(g.in_edges[v]), 1, 1, DEGREE))
    else:
        for v in range(g.n):
            model.add(CardinalityConstraint(tuple(g.incident[v]), 2, 2, DEGREE))

    shared = g.shared_ids()
    bound = exclusion_bound(g)
    for tag, origin in ((FORBID_X, FROM_X), (FORBID_Y, FROM_Y)):
        ids = tuple(e for e in g.edges_from(origin) if e not in shared)
        if bound < 0:
            model.add(CardinalityConstraint(ids, 1, 0, INFEASIBLE))
        else:
            model.add(CardinalityConstraint(ids, 0, bound, tag))

    for xe, ye in g.shared_pairs:
        model.add(CardinalityConstraint((xe,), 1, 1, SHARED_SPLIT))
        model.add(CardinalityConstraint((ye,), 0, 0, SHARED_SPLIT))
    return model


def edges_within(s, g: UnionMultigraph) -> tuple[int, ...]:
    members = set(s)
    return tuple(e.id for e in g.edges if e.tail in members and e.head in members)


def sec_for_subtour(s, g: UnionMultigraph) -> tuple[CardinalityConstraint, CardinalityConstraint]:
    """The z-side and w-side subtour elimination constraints for vertex set ``s``."""
    size = len(set(s))
    if not 2 <= size < g.n:
        raise ValueError(f"subtour size must lie in [2, {g.n}), got {size}")
    inside = edges_within(s, g)
    if not inside:
        raise EmptyCut(f"no union edge lies inside {sorted(s)}")
    key = subset_key(s)
    m = len(inside)
    # min(): keeps upper <= |E_S|; the sum can never exceed |E_S| anyway
    upper = CardinalityConstraint(inside, 0, min(size - 1, m), SUBTOUR_UPPER, key)
    lower = CardinalityConstraint(inside, max(0, m - size + 1), m, SUBTOUR_LOWER, key)
    return upper, lower


def add_subtour_cuts(model: Model, pair: CoverPair, g: UnionMultigraph) -> int:
    added = 0
    for s in extract_subtours(pair, g):
        key = subset_key(s)
        if key in model.cut_registry:
            continue
        for c in sec_for_subtour(s, g):
            model.add(c)
            added += 1
        model.cut_registry.add(key)
    return added
