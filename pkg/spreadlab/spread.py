# spreadlab/spread.py
#
# Influence-spread evaluation
# ---------------------------
# Three routes to I(S), the expected number of nodes eventually activated:
#   - snapshot_spread: mean reachable count over a fixed SnapshotSet
#   - simulate_spread: layered IC diffusion, averaged over rounds
#   - exact_spread:    weighted sum over all 2**|E| edge realizations
#
# I(empty set) = 0 on every route; seeds always count themselves.
#
# coverage_total() is the integer numerator of snapshot_spread. The
# submodularity audit and the exhaustive oracle compare these integers, so
# their checks are exact rather than subject to float rounding. Greedy keeps
# its own integer gain totals over per-snapshot covered sets.

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .compat import MAX_EXACT_EDGES, STREAM_SIMULATION
from .errors import ArgumentError, CapacityError, ConfigurationError
from .graph import WeightedGraph
from .logging_setup import _dbg
from .sampling import Snapshot, SnapshotSet
from .streams import check_seed, substream
from .workers import parallel_map

ESTIMATORS = ("snapshot", "simulation", "exact")


@dataclass(frozen=True)
class SeedSet:
    """Ordered, duplicate-free seed nodes (insertion order = selection order)."""
    members: tuple = ()

    def __post_init__(self):
        seen = set()
        out = []
        for v in self.members:
            v = int(v)
            if v < 0:
                raise ArgumentError(f"seed node must be non-negative, got {v}")
            if v not in seen:
                seen.add(v)
                out.append(v)
        object.__setattr__(self, "members", tuple(out))

    @classmethod
    def from_labels(cls, g: WeightedGraph, labels) -> "SeedSet":
        return cls(tuple(g.node(x) for x in labels))

    def validate(self, node_count: int) -> None:
        for v in self.members:
            if v >= node_count:
                raise ArgumentError(f"seed node {v} outside graph of {node_count} nodes")

    def add(self, v: int) -> "SeedSet":
        return self if int(v) in self.members else SeedSet(self.members + (int(v),))

    def __len__(self):
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def __contains__(self, v):
        return v in self.members


@dataclass(frozen=True)
class SpreadEstimate:
    value: float
    estimator: str
    samples: int
    rng_seed: Optional[int] = None
    std_error: float = 0.0

    def __post_init__(self):
        if self.estimator not in ESTIMATORS:
            raise ArgumentError(f"unknown estimator {self.estimator!r} (expected one of {', '.join(ESTIMATORS)})")

    def __float__(self):
        return float(self.value)


def _as_seedset(S) -> SeedSet:
    return S if isinstance(S, SeedSet) else SeedSet(tuple(S))


# --- snapshot route ----------------------------------------------------------

def multi_source_count(indptr, indices, n: int, members) -> int:
    """BFS over a CSR adjacency from every member at once; frontier kept id-ascending."""
    visited = bytearray(n)
    frontier = sorted(set(members))
    for s in frontier:
        visited[s] = 1
    count = len(frontier)
    while frontier:
        nxt = []
        for u in frontier:
            for w in indices[indptr[u]:indptr[u + 1]]:
                if not visited[w]:
                    visited[w] = 1
                    nxt.append(w)
        count += len(nxt)
        nxt.sort()
        frontier = nxt
    return count


def reachable_count(snap: Snapshot, S) -> int:
    """|nodes reachable from S over retained edges|, seeds included; 0 for S = {}."""
    S = _as_seedset(S)
    S.validate(snap.graph.node_count)
    if not S.members:
        return 0
    indptr, indices = snap.forward_adjacency
    return multi_source_count(indptr, indices, snap.graph.node_count, S.members)


def _counts(ss: SnapshotSet, S: SeedSet, threads=None) -> list:
    return parallel_map(lambda snap: reachable_count(snap, S), ss.snapshots, threads)


def coverage_total(ss: SnapshotSet, S, threads=None, *, adjacencies=None) -> int:
    """
    Sum over snapshots of reachable_count; snapshot_spread = total / R.

    `adjacencies` lets a caller that evaluates many seed sets on the same
    snapshots pass the (indptr, indices) pairs it already holds.
    """
    S = _as_seedset(S)
    S.validate(ss.graph.node_count)
    if not S.members:
        return 0
    if adjacencies is None:
        return sum(_counts(ss, S, threads))
    n = ss.graph.node_count
    members = S.members
    return sum(parallel_map(lambda adj: multi_source_count(adj[0], adj[1], n, members), adjacencies, threads))


def _std_error(counts) -> float:
    if len(counts) < 2:
        return 0.0
    return float(np.std(np.asarray(counts, dtype=np.float64), ddof=1) / math.sqrt(len(counts)))


def snapshot_spread(ss: SnapshotSet, S, threads=None) -> SpreadEstimate:
    S = _as_seedset(S)
    S.validate(ss.graph.node_count)
    if not S.members:
        return SpreadEstimate(0.0, "snapshot", ss.R, ss.rng_seed)
    counts = _counts(ss, S, threads)
    return SpreadEstimate(sum(counts) / ss.R, "snapshot", ss.R, ss.rng_seed, _std_error(counts))


# --- simulation route --------------------------------------------------------

def _simulate_round(g: WeightedGraph, seeds, rng: np.random.Generator) -> int:
    # Layered diffusion: A_0 = S; each newly active u gets one chance per
    # out-edge, drawn when u activates, so every edge is flipped at most once.
    indptr = g.out_indptr
    order = g.out_order
    dst = g.dst
    prob = g.prob
    active = bytearray(g.node_count)
    frontier = sorted(seeds)
    for s in frontier:
        active[s] = 1
    count = len(frontier)
    while frontier:
        nxt = []
        for u in frontier:
            lo, hi = indptr[u], indptr[u + 1]
            if lo == hi:
                continue
            edges = order[lo:hi]
            hits = rng.random(hi - lo) < prob[edges]
            for w in dst[edges[hits]].tolist():
                if not active[w]:
                    active[w] = 1
                    nxt.append(w)
        count += len(nxt)
        nxt.sort()
        frontier = nxt
    return count


def simulate_spread(g: WeightedGraph, S, rounds: int, rng_seed: int, threads=None) -> SpreadEstimate:
    """Mean activated count over `rounds` IC diffusions; round i uses substream(seed, SIM, i)."""
    if isinstance(rounds, bool) or not isinstance(rounds, (int, np.integer)) or rounds < 1:
        raise ArgumentError(f"rounds must be a positive integer, got {rounds!r}")
    rng_seed = check_seed(rng_seed)
    S = _as_seedset(S)
    S.validate(g.node_count)
    if not g.has_probabilities:
        raise ConfigurationError("cannot simulate diffusion: edge probabilities are unassigned")
    if not S.members:
        return SpreadEstimate(0.0, "simulation", int(rounds), rng_seed)
    seeds = S.members
    counts = parallel_map(
        lambda i: _simulate_round(g, seeds, substream(rng_seed, STREAM_SIMULATION, i)),
        range(int(rounds)), threads,
    )
    _dbg(f"simulate_spread: |S|={len(seeds)} rounds={rounds} seed={rng_seed}")
    return SpreadEstimate(sum(counts) / rounds, "simulation", int(rounds), rng_seed, _std_error(counts))


# --- exact route -------------------------------------------------------------

_CHUNK_BITS = 16


def exact_spread(g: WeightedGraph, S) -> SpreadEstimate:
    """
    Enumerate all 2**|E| realizations (|E| <= 24), weighting each by
    prod p * prod (1 - p) and counting the nodes reachable from S.

    Realizations are processed in vectorised chunks: row r of a chunk is the
    realization whose edge e is on iff bit e of (chunk_start + r) is set.
    Reachability is propagated edge by edge until a fixed point.
    """
    S = _as_seedset(S)
    S.validate(g.node_count)
    m = g.edge_count
    if m > MAX_EXACT_EDGES:
        raise CapacityError(f"exact_spread enumerates 2**|E| realizations; |E|={m} exceeds {MAX_EXACT_EDGES}")
    if not g.has_probabilities:
        raise ConfigurationError("cannot compute exact spread: edge probabilities are unassigned")
    if not S.members:
        return SpreadEstimate(0.0, "exact", 0)

    # Only edge endpoints can change state; a seed with no edges is reached
    # in every realization and adds exactly 1.
    touched = np.unique(np.concatenate((g.src, g.dst)))
    local = {int(v): i for i, v in enumerate(touched.tolist())}
    n = len(touched)
    seeds = [local[v] for v in S.members if v in local]
    isolated = len(S.members) - len(seeds)
    src = [local[u] for u in g.src.tolist()]
    dst = [local[v] for v in g.dst.tolist()]
    p = g.prob
    total_rows = 1 << m
    chunk = 1 << min(m, _CHUNK_BITS)
    shifts = np.arange(m, dtype=np.int64)
    value = 0.0
    for start in range(0, total_rows, chunk):
        idx = np.arange(start, start + chunk, dtype=np.int64)
        on = ((idx[:, None] >> shifts[None, :]) & 1).astype(bool)      # chunk x m
        weight = np.prod(np.where(on, p[None, :], 1.0 - p[None, :]), axis=1)
        reached = np.zeros((chunk, n), dtype=bool)
        reached[:, seeds] = True
        changed = True
        while changed:
            changed = False
            for e in range(m):
                push = reached[:, src[e]] & on[:, e] & ~reached[:, dst[e]]
                if push.any():
                    reached[:, dst[e]] |= push
                    changed = True
        value += float(np.dot(weight, reached.sum(axis=1)))
    return SpreadEstimate(value + isolated, "exact", 0)
