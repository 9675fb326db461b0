"""Iterative ILP search for Hamiltonian decompositions, with optional local search.

Each iteration solves the current model from scratch.  A Hamiltonian
solution ends the run; otherwise subtour elimination cuts for every subtour
found are added and the loop repeats.  With local search enabled, the solver
point is also improved heuristically and the local minimum's subtours are
cut as well.
"""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field

from .local_search import LsParams, LsStats, local_search
from .model import add_subtour_cuts, build_base_model
from .multigraph import (
    Certificate,
    CoverPair,
    VerifyReport,
    count_components,
    pair_to_certificate,
    verify_certificate,
)
from .rng import Xorshift64Star
from .solver import BudgetExceeded as SolverBudgetExceeded
from .solver import Feasible, Infeasible, SolveBudget, check, solve

log = logging.getLogger(__name__)

ILP = "ilp"
ILP_LS = "ilp-ls"
ALGORITHMS = (ILP, ILP_LS)

FOUND_BY_SOLVER = "Solver"
FOUND_BY_LS = "LocalSearch"

__all__ = [
    "ALGORITHMS", "ILP", "ILP_LS", "EngineConfig", "RunStats", "Decomposition",
    "NonExistent", "BudgetExceeded", "VerifyReport", "solve_iterative_ilp",
    "solve_iterative_ilp_ls", "run", "check_nonadjacency", "NotAdjacent",
    "SufficientConditionFails", "Unknown",
]


@dataclass
class EngineConfig:
    algorithm: str = ILP_LS
    budget: SolveBudget = field(default_factory=SolveBudget)
    max_iterations: int = 1000
    attempt_limit: int = 10
    seed: int = 0
    # Re-check every solver point against the model (slower).
    debug: bool = False

    def __post_init__(self):
        if self.algorithm not in ALGORITHMS:
            raise ValueError(f"unknown algorithm {self.algorithm!r}")
        if self.max_iterations < 0:
            raise ValueError("max_iterations must be nonnegative")
        if self.attempt_limit < 1:
            raise ValueError("attempt_limit must be at least 1")


@dataclass
class RunStats:
    iterations: int = 0
    cuts_added: int = 0
    solver_time: float = 0.0
    ls_time: float = 0.0
    total_time: float = 0.0
    found_by: str | None = None
    decisions: int = 0


@dataclass
class Decomposition:
    certificate: Certificate
    stats: RunStats


@dataclass
class NonExistent:
    stats: RunStats


@dataclass
class BudgetExceeded:
    stats: RunStats


Outcome = Decomposition | NonExistent | BudgetExceeded


def _hamiltonian(pair: CoverPair, g) -> bool:
    return count_components(pair, g) == (1, 1)


class _Run:
    def __init__(self, inst, config: EngineConfig, use_ls: bool):
        self.inst = inst
        self.g = inst.union
        self.config = config
        self.use_ls = use_ls
        self.stats = RunStats()
        self.start = time.perf_counter()
        self.rng = Xorshift64Star(config.seed)
        self.model = build_base_model(inst)

    def elapsed(self) -> float:
        return time.perf_counter() - self.start

    def remaining(self) -> float | None:
        deadline = self.config.budget.deadline
        if deadline is None:
            return None
        return deadline - self.elapsed()

    def done(self, outcome):
        self.stats.total_time = self.elapsed()
        return outcome

    def certificate(self, pair: CoverPair, found_by: str) -> Decomposition | None:
        cert = pair_to_certificate(pair, self.g)
        report = verify_certificate(self.inst, cert)
        if not report.passed:
            # Only reachable for local-search points equal to x or y.
            return None
        self.stats.found_by = found_by
        return Decomposition(cert, self.stats)

    def execute(self) -> Outcome:
        stats = self.stats
        cfg = self.config
        if self.model.infeasible:
            return self.done(NonExistent(stats))
        while True:
            if stats.iterations >= cfg.max_iterations:
                return self.done(BudgetExceeded(stats))
            remaining = self.remaining()
            if remaining is not None and remaining <= 0:
                return self.done(BudgetExceeded(stats))
            budget = SolveBudget(cfg.budget.max_decisions, remaining)

            t0 = time.perf_counter()
            result = solve(self.model, budget, debug=cfg.debug)
            stats.solver_time += time.perf_counter() - t0
            stats.iterations += 1
            stats.decisions += result.stats.decisions

            if isinstance(result, Infeasible):
                return self.done(NonExistent(stats))
            if isinstance(result, SolverBudgetExceeded):
                return self.done(BudgetExceeded(stats))
            assert isinstance(result, Feasible)
            pair = result.pair
            if cfg.debug:
                assert check(pair.assignment, self.model)

            if _hamiltonian(pair, self.g):
                found = self.certificate(pair, FOUND_BY_SOLVER)
                # The exclusion constraints make a solver point equal to x or y impossible.
                assert found is not None
                return self.done(found)
            added = add_subtour_cuts(self.model, pair, self.g)
            stats.cuts_added += added
            log.debug("iteration %d: %d cuts from solver point", stats.iterations, added)

            if not self.use_ls:
                continue
            t0 = time.perf_counter()
            improved = local_search(
                pair, self.g, LsParams(cfg.attempt_limit), self.rng, LsStats()
            )
            stats.ls_time += time.perf_counter() - t0
            if _hamiltonian(improved, self.g):
                found = self.certificate(improved, FOUND_BY_LS)
                if found is not None:
                    return self.done(found)
                continue
            added = add_subtour_cuts(self.model, improved, self.g)
            stats.cuts_added += added
            log.debug("iteration %d: %d cuts from local minimum", stats.iterations, added)


def solve_iterative_ilp(inst, config: EngineConfig | None = None) -> Outcome:
    return _Run(inst, config or EngineConfig(algorithm=ILP), use_ls=False).execute()


def solve_iterative_ilp_ls(inst, config: EngineConfig | None = None) -> Outcome:
    return _Run(inst, config or EngineConfig(algorithm=ILP_LS), use_ls=True).execute()


def run(inst, config: EngineConfig) -> Outcome:
    if config.algorithm == ILP:
        return solve_iterative_ilp(inst, config)
    return solve_iterative_ilp_ls(inst, config)


@dataclass
class NotAdjacent:
    certificate: Certificate


@dataclass
class SufficientConditionFails:
    """No decomposition exists; adjacency itself is not concluded."""


@dataclass
class Unknown:
    pass


def check_nonadjacency(inst, config: EngineConfig | None = None):
    outcome = run(inst, config or EngineConfig())
    if isinstance(outcome, Decomposition):
        return NotAdjacent(outcome.certificate)
    if isinstance(outcome, NonExistent):
        return SufficientConditionFails()
    return Unknown()
