"""Construct and verify witness graphs for Ramsey lower bounds R(r, s) > n."""

__version__ = "0.1.0"

from .graph import (  # noqa: E402
    DomainError,
    Graph,
    RamseyParams,
    ViolationLedger,
    count_cliques,
    count_independent_sets,
    delta_clique_count,
    enumerate_violations,
    flip_edge,
    greedy_alpha,
    independence_number,
    is_witness,
)

__all__ = [
    "DomainError",
    "Graph",
    "RamseyParams",
    "ViolationLedger",
    "count_cliques",
    "count_independent_sets",
    "delta_clique_count",
    "enumerate_violations",
    "flip_edge",
    "greedy_alpha",
    "independence_number",
    "is_witness",
]
