"""Exact feasibility search for binary variables under cardinality constraints.

Depth-first search with counter-based propagation and chronological
backtracking.  Branching picks the lowest-index unassigned variable and
tries 1 before 0, so results are reproducible.

For every constraint with ``ones`` variables at 1 and ``free`` unassigned:

* ``ones > upper`` or ``ones + free < lower``: conflict
* ``ones == upper``: every free member is set to 0
* ``ones + free == lower``: every free member is set to 1
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

from .model import INFEASIBLE, Model
from .multigraph import CoverPair

UNASSIGNED = -1
BUDGET_CHECK_INTERVAL = 1024


@dataclass
class SolveBudget:
    max_decisions: int | None = None
    deadline: float | None = None  # seconds from the start of the call

    def __post_init__(self):
        if self.max_decisions is not None and self.max_decisions < 0:
            raise ValueError("max_decisions must be nonnegative")
        if self.deadline is not None and self.deadline < 0:
            raise ValueError("deadline must be nonnegative")


@dataclass
class SolveStats:
    decisions: int = 0
    conflicts: int = 0
    elapsed: float = 0.0


@dataclass
class Feasible:
    pair: CoverPair
    stats: SolveStats = field(default_factory=SolveStats)


@dataclass
class Infeasible:
    stats: SolveStats = field(default_factory=SolveStats)


@dataclass
class BudgetExceeded:
    stats: SolveStats = field(default_factory=SolveStats)


SolveOutcome = Feasible | Infeasible | BudgetExceeded


class SearchState:
    """Values, trail and per-constraint counters of one search."""

    def __init__(self, model: Model):
        cons = model.constraints
        self.num_vars = model.num_vars
        self.values = [UNASSIGNED] * model.num_vars
        self.members = [c.edge_ids for c in cons]
        self.lower = [c.lower for c in cons]
        self.upper = [c.upper for c in cons]
        self.count_one = [0] * len(cons)
        self.count_free = [len(c.edge_ids) for c in cons]
        self.var_cons: list[list[int]] = [[] for _ in range(model.num_vars)]
        for ci, c in enumerate(cons):
            for v in c.edge_ids:
                self.var_cons[v].append(ci)
        # (variable, is_decision) in assignment order
        self.trail: list[tuple[int, bool]] = []
        self.queue: list[int] = list(range(len(cons)))
        self.marker_conflict = next(
            (ci for ci, c in enumerate(cons) if c.tag == INFEASIBLE), None
        )

    def assign(self, var: int, value: int, decision: bool = False) -> None:
        self.values[var] = value
        self.trail.append((var, decision))
        count_free = self.count_free
        count_one = self.count_one
        queue = self.queue
        for ci in self.var_cons[var]:
            count_free[ci] -= 1
            if value:
                count_one[ci] += 1
            queue.append(ci)

    def propagate(self) -> int | None:
        """Run the rules to a fixed point; return a conflicting constraint or None."""
        if self.marker_conflict is not None:
            self.queue.clear()
            return self.marker_conflict
        queue = self.queue
        values = self.values
        count_one = self.count_one
        count_free = self.count_free
        lower = self.lower
        upper = self.upper
        members = self.members
        while queue:
            ci = queue.pop()
            ones = count_one[ci]
            free = count_free[ci]
            if ones > upper[ci] or ones + free < lower[ci]:
                queue.clear()
                return ci
            if free == 0:
                continue
            if ones == upper[ci]:
                forced = 0
            elif ones + free == lower[ci]:
                forced = 1
            else:
                continue
            for v in members[ci]:
                if values[v] == UNASSIGNED:
                    self.assign(v, forced)
        return None

    def undo_to(self, mark: int) -> None:
        values = self.values
        count_one = self.count_one
        count_free = self.count_free
        trail = self.trail
        while len(trail) > mark:
            var, _ = trail.pop()
            value = values[var]
            values[var] = UNASSIGNED
            for ci in self.var_cons[var]:
                count_free[ci] += 1
                if value:
                    count_one[ci] -= 1
        self.queue.clear()

    def counters_consistent(self) -> bool:
        for ci, ids in enumerate(self.members):
            ones = sum(1 for v in ids if self.values[v] == 1)
            free = sum(1 for v in ids if self.values[v] == UNASSIGNED)
            if ones != self.count_one[ci] or free != self.count_free[ci]:
                return False
        return True


def solve(model: Model, budget: SolveBudget | None = None, debug: bool = False) -> SolveOutcome:
    """Find one assignment satisfying every constraint of ``model``, or prove none exists."""
    budget = budget or SolveBudget()
    start = time.perf_counter()
    stats = SolveStats()

    def finish(outcome):
        stats.elapsed = time.perf_counter() - start
        return outcome

    state = SearchState(model)
    if state.propagate() is not None:
        return finish(Infeasible(stats))

    values = state.values
    n = state.num_vars
    # [trail mark, variable, value currently tried]
    stack: list[list[int]] = []
    while True:
        var = stack[-1][1] if stack else 0
        while var < n and values[var] != UNASSIGNED:
            var += 1
        if var == n:
            if debug:
                assert state.counters_consistent()
                assert check(values, model)
            return finish(Feasible(CoverPair(list(values)), stats))

        if budget.max_decisions is not None and stats.decisions >= budget.max_decisions:
            return finish(BudgetExceeded(stats))
        stats.decisions += 1
        if (
            budget.deadline is not None
            and stats.decisions % BUDGET_CHECK_INTERVAL == 0
            and time.perf_counter() - start > budget.deadline
        ):
            return finish(BudgetExceeded(stats))

        stack.append([len(state.trail), var, 1])
        state.assign(var, 1, decision=True)
        while state.propagate() is not None:
            stats.conflicts += 1
            while stack and stack[-1][2] == 0:
                stack.pop()
            if not stack:
                state.undo_to(0)
                return finish(Infeasible(stats))
            top = stack[-1]
            state.undo_to(top[0])
            if debug:
                assert state.counters_consistent()
            top[2] = 0
            state.assign(top[1], 0, decision=True)


def check(assignment, model: Model) -> bool:
    """Recount every constraint directly against a full 0/1 assignment."""
    if len(assignment) != model.num_vars:
        return False
    if any(v not in (0, 1) for v in assignment):
        return False
    for c in model.constraints:
        if c.tag == INFEASIBLE:
            return False
        total = 0
        for e in c.edge_ids:
            total += assignment[e]
        if not c.lower <= total <= c.upper:
            return False
    return True
