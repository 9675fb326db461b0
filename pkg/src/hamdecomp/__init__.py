"""Hamiltonian decompositions of the union of two Hamiltonian cycles.

Deciding whether the union multigraph splits into two edge-disjoint
Hamiltonian cycles other than the inputs certifies that the corresponding
vertices of the traveling salesperson polytope are not adjacent.
"""

from .engine import (
    BudgetExceeded,
    Decomposition,
    EngineConfig,
    NonExistent,
    check_nonadjacency,
    run,
    solve_iterative_ilp,
    solve_iterative_ilp_ls,
)
from .instances import Instance, generate_instance, parse_instance, serialize_instance
from .multigraph import Certificate, CoverPair, HamCycle, build_union, verify_certificate

__version__ = "0.1.0"
