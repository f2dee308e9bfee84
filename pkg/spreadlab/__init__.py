# spreadlab/__init__.py

# Package-level exports.
# `main`/`run` invoke the CLI programmatically (tests, "python -c", other
# tools); the rest is the library surface the commands are built from.
from .cli import main, run
from .graph import WeightedGraph, assign_probabilities, parse_edge_list, read_edge_list
from .sampling import Snapshot, SnapshotSet, sample_snapshot_set
from .selection import (
    SelectionResult,
    check_submodularity,
    conventional_greedy,
    static_greedy,
    static_greedy_du,
)
from .spread import SeedSet, SpreadEstimate, exact_spread, simulate_spread, snapshot_spread

__all__ = [
    "main",
    "run",
    "WeightedGraph",
    "assign_probabilities",
    "parse_edge_list",
    "read_edge_list",
    "Snapshot",
    "SnapshotSet",
    "sample_snapshot_set",
    "SelectionResult",
    "check_submodularity",
    "conventional_greedy",
    "static_greedy",
    "static_greedy_du",
    "SeedSet",
    "SpreadEstimate",
    "exact_spread",
    "simulate_spread",
    "snapshot_spread",
]
