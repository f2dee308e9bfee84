# spreadlab/selection.py
#
# Seed selection
# --------------
# static_greedy        Sample R snapshots once, then run k greedy rounds
#                      against that same set.
# static_greedy_du     Same contract, dynamic update: per-snapshot covered
#                      sets maintained across rounds + lazy (CELF-style)
#                      re-evaluation of stale upper bounds.
# conventional_greedy  Fresh snapshot set in every round; reproduces the
#                      submodularity violations the static scheme avoids.
# degree_seeds / random_seeds   trivial baselines.
# check_submodularity  audit of snapshot_spread on a fixed set.
# exhaustive_optimum   brute-force OPT over all k-subsets (test oracle).
#
# All gains are kept as integer coverage totals (sum over snapshots of newly
# reached nodes) and only divided by R for reporting. Argmax is exact and
# ties go to the lowest node id, so plain and DU runs agree bit for bit.
#
# Marginal gain of v in snapshot j given the covered set C_j (everything
# reachable from S in G'_j): if v is covered the gain is 0; otherwise it is
# the number of nodes reachable from v without entering C_j. Skipping covered
# nodes is exact: anything reachable only through a covered node is itself
# covered.

import heapq
import itertools
import math
import time
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .compat import STREAM_AUDIT, STREAM_CONVENTIONAL, STREAM_RANDOM_SEEDS
from .errors import ArgumentError, CapacityError
from .graph import WeightedGraph
from .logging_setup import _dbg, _log
from .sampling import SnapshotSet, sample_snapshot_set
from .spread import SeedSet, coverage_total
from .streams import check_seed, substream

ALGORITHMS = ("static", "static-du", "conventional", "degree", "random")

# exhaustive_optimum refuses more subsets than this.
MAX_EXHAUSTIVE_SUBSETS = 2_000_000


@dataclass
class SelectionResult:
    algorithm: str
    seeds: SeedSet
    marginal_gains: list
    spread_trace: list
    evaluations: int
    evaluations_per_iteration: list
    elapsed: dict
    R: int = 0
    rng_seed: Optional[int] = None
    probe_gains: dict = field(default_factory=dict)

    @property
    def final_spread(self) -> float:
        return self.spread_trace[-1] if self.spread_trace else 0.0


@dataclass
class SubmodularityReport:
    trials: int
    violations: list
    min_gain: Optional[float] = None
    max_gain: Optional[float] = None

    @property
    def ok(self) -> bool:
        return not self.violations

    def as_dict(self) -> dict:
        return {
            "trials": self.trials,
            "violationCount": len(self.violations),
            "minGain": self.min_gain,
            "maxGain": self.max_gain,
            "violations": [
                {"S": list(S), "T": list(T), "v": v, "gainS": gs, "gainT": gt}
                for S, T, v, gs, gt in self.violations
            ],
        }


# --- argument checks ---------------------------------------------------------

def _check_positive(name, value):
    if isinstance(value, bool) or not isinstance(value, (int, np.integer)) or value < 1:
        raise ArgumentError(f"{name} must be a positive integer, got {value!r}")
    return int(value)


def _check_snapshots(g: WeightedGraph, ss: SnapshotSet, R: int):
    if ss.graph is not g and ss.graph != g:
        raise ArgumentError("snapshot set was sampled from a different graph")
    if ss.R != R:
        raise ArgumentError(f"snapshot set has R={ss.R}, expected R={R}")


# --- covered-set primitives --------------------------------------------------

def _adjacencies(ss: SnapshotSet) -> list:
    return [snap.forward_adjacency for snap in ss]


def _absorb(adj, covered: bytearray, s: int) -> int:
    """Mark everything reachable from s outside `covered`; return how many were new."""
    if covered[s]:
        return 0
    indptr, indices = adj
    covered[s] = 1
    stack = [s]
    added = 1
    while stack:
        u = stack.pop()
        for w in indices[indptr[u]:indptr[u + 1]]:
            if not covered[w]:
                covered[w] = 1
                stack.append(w)
                added += 1
    return added


def _uncovered_reach(adj, covered: bytearray, v: int) -> int:
    if covered[v]:
        return 0
    indptr, indices = adj
    seen = {v}
    stack = [v]
    while stack:
        u = stack.pop()
        for w in indices[indptr[u]:indptr[u + 1]]:
            if not covered[w] and w not in seen:
                seen.add(w)
                stack.append(w)
    return len(seen)


def _gain_total(adjs, covered, v: int) -> int:
    """Sum over snapshots of v's marginal coverage: one 'evaluation'."""
    total = 0
    for adj, cov in zip(adjs, covered):
        total += _uncovered_reach(adj, cov, v)
    return total


def _covered_from(adjs, n: int, seeds) -> list:
    covered = [bytearray(n) for _ in adjs]
    for adj, cov in zip(adjs, covered):
        for s in seeds:
            _absorb(adj, cov, s)
    return covered


def _trace(gain_totals, R) -> tuple:
    gains = [t / R for t in gain_totals]
    cumulative = list(itertools.accumulate(gain_totals))
    return gains, [c / R for c in cumulative]


# --- greedy drivers ----------------------------------------------------------

def _plain_greedy(n: int, k: int, provider, trace_nodes=()):
    """
    Non-incremental greedy: every round takes its snapshot set from
    provider(round), recomputes the covered sets for the current seeds and
    evaluates every remaining candidate.
    """
    seeds = []
    chosen = set()
    gain_totals = []
    evals = []
    probes = {int(p): [] for p in trace_nodes}
    last_ss = adjs = None
    R = 0
    for t in range(min(k, n)):
        ss = provider(t)
        if ss is not last_ss:
            last_ss, adjs, R = ss, _adjacencies(ss), ss.R
        covered = _covered_from(adjs, n, seeds)
        best_v, best = -1, -1
        count = 0
        for v in range(n):
            if v in chosen:
                continue
            gain = _gain_total(adjs, covered, v)
            count += 1
            if v in probes:
                probes[v].append(gain / R)
            if gain > best:
                best_v, best = v, gain
        for p in probes:
            if p in chosen:
                probes[p].append(0.0)
        seeds.append(best_v)
        chosen.add(best_v)
        gain_totals.append(best)
        evals.append(count)
        _dbg(f"greedy round {t}: chose {best_v} gain_total={best} evaluations={count}")
    return seeds, gain_totals, evals, probes, R


def _lazy_greedy(ss: SnapshotSet, k: int):
    """
    Dynamic-update greedy on one fixed snapshot set.

    Heap entries are (-gain_total, node, round_evaluated). An entry evaluated
    in the current round is exact; any other is an upper bound (submodularity
    of the fixed-snapshot objective). The top entry is taken once it is exact.
    Equal bounds order by node id, so ties resolve to the lowest id exactly
    as in the plain scan.
    """
    n = ss.graph.node_count
    adjs = _adjacencies(ss)
    covered = [bytearray(n) for _ in adjs]
    seeds = []
    gain_totals = []
    evals = []

    heap = [(-_gain_total(adjs, covered, v), v, 0) for v in range(n)]
    heapq.heapify(heap)
    count = n
    for t in range(min(k, n)):
        while True:
            neg, v, stamp = heap[0]
            if stamp == t:
                heapq.heappop(heap)
                break
            heapq.heapreplace(heap, (-_gain_total(adjs, covered, v), v, t))
            count += 1
        seeds.append(v)
        gain_totals.append(-neg)
        evals.append(count)
        count = 0
        for adj, cov in zip(adjs, covered):
            _absorb(adj, cov, v)
        _dbg(f"lazy round {t}: chose {v} gain_total={-neg} evaluations={evals[-1]}")
    return seeds, gain_totals, evals


def _finish(algorithm, seeds, gain_totals, evals, R, rng_seed, sampling_s, selection_s, probes=None):
    gains, trace = _trace(gain_totals, R)
    result = SelectionResult(
        algorithm=algorithm,
        seeds=SeedSet(tuple(seeds)),
        marginal_gains=gains,
        spread_trace=trace,
        evaluations=sum(evals),
        evaluations_per_iteration=list(evals),
        elapsed={"sampling": sampling_s, "selection": selection_s},
        R=R,
        rng_seed=rng_seed,
        probe_gains=probes or {},
    )
    _log(f"{algorithm}: k={len(seeds)} R={R} seed={rng_seed} spread={result.final_spread:.6g} "
         f"evaluations={result.evaluations} sampling={sampling_s:.3f}s selection={selection_s:.3f}s")
    return result


def _static_inputs(g, k, R, rng_seed, snapshots, threads, materialize):
    k = _check_positive("k", k)
    R = _check_positive("R", R)
    rng_seed = check_seed(rng_seed)
    t0 = time.perf_counter()
    if snapshots is None:
        snapshots = sample_snapshot_set(g, R, rng_seed, threads=threads, materialize=materialize)
        sampling_s = time.perf_counter() - t0
    else:
        _check_snapshots(g, snapshots, R)
        sampling_s = 0.0
    return k, R, rng_seed, snapshots, sampling_s


def static_greedy(g: WeightedGraph, k: int, R: int, rng_seed: int, *, snapshots: Optional[SnapshotSet] = None,
                  threads=None, trace_nodes=(), materialize: bool = True) -> SelectionResult:
    """
    Stage 1 samples R snapshots once (or uses `snapshots`),
    stage 2 runs k rounds of argmax marginal coverage on that same set.
    Stops after n selections when k > n.
    """
    k, R, rng_seed, ss, sampling_s = _static_inputs(g, k, R, rng_seed, snapshots, threads, materialize)
    t0 = time.perf_counter()
    seeds, totals, evals, probes, _ = _plain_greedy(g.node_count, k, lambda t: ss, trace_nodes)
    return _finish("static", seeds, totals, evals, R, rng_seed, sampling_s, time.perf_counter() - t0, probes)


def static_greedy_du(g: WeightedGraph, k: int, R: int, rng_seed: int, *, snapshots: Optional[SnapshotSet] = None,
                     threads=None, materialize: bool = True) -> SelectionResult:
    """Static greedy with dynamic update; same seeds and gains as static_greedy, less work."""
    k, R, rng_seed, ss, sampling_s = _static_inputs(g, k, R, rng_seed, snapshots, threads, materialize)
    t0 = time.perf_counter()
    seeds, totals, evals = _lazy_greedy(ss, k)
    return _finish("static-du", seeds, totals, evals, R, rng_seed, sampling_s, time.perf_counter() - t0)


def conventional_greedy(g: WeightedGraph, k: int, R_per_iter: int, rng_seed: int, *, snapshot_source=None,
                        threads=None, trace_nodes=()) -> SelectionResult:
    """
    Greedy that draws a fresh snapshot set every round (round t uses
    substream domain (CONVENTIONAL, t)). `snapshot_source(t)` overrides the
    sampler, which is how hand-built per-round snapshots are replayed.
    """
    k = _check_positive("k", k)
    R_per_iter = _check_positive("R_per_iter", R_per_iter)
    rng_seed = check_seed(rng_seed)
    sampling = [0.0]

    def provider(t):
        t0 = time.perf_counter()
        if snapshot_source is not None:
            ss = snapshot_source(t)
        else:
            ss = sample_snapshot_set(g, R_per_iter, rng_seed, threads=threads, domain=(STREAM_CONVENTIONAL, t))
        sampling[0] += time.perf_counter() - t0
        if ss.graph is not g and ss.graph != g:
            raise ArgumentError("per-round snapshot set was sampled from a different graph")
        if ss.R != R_per_iter:
            raise ArgumentError(f"per-round snapshot set has R={ss.R}, expected {R_per_iter}")
        return ss

    t0 = time.perf_counter()
    seeds, totals, evals, probes, _ = _plain_greedy(g.node_count, k, provider, trace_nodes)
    selection_s = time.perf_counter() - t0 - sampling[0]
    return _finish("conventional", seeds, totals, evals, R_per_iter, rng_seed, sampling[0], selection_s, probes)


# --- baselines ---------------------------------------------------------------

def score_seed_prefixes(ss: SnapshotSet, seeds) -> tuple:
    """(marginal_gains, spread_trace) of a fixed seed order on `ss`."""
    n = ss.graph.node_count
    adjs = _adjacencies(ss)
    covered = [bytearray(n) for _ in adjs]
    totals = []
    for s in seeds:
        totals.append(sum(_absorb(adj, cov, s) for adj, cov in zip(adjs, covered)))
    return _trace(totals, ss.R)


def _baseline(algorithm, g, order, snapshots, rng_seed, t0):
    seeds = [int(v) for v in order]
    selection_s = time.perf_counter() - t0
    if snapshots is not None:
        if snapshots.graph is not g and snapshots.graph != g:
            raise ArgumentError("snapshot set was sampled from a different graph")
        gains, trace = score_seed_prefixes(snapshots, seeds)
        R = snapshots.R
    else:
        gains, trace, R = [], [], 0
    return SelectionResult(
        algorithm=algorithm,
        seeds=SeedSet(tuple(seeds)),
        marginal_gains=gains,
        spread_trace=trace,
        evaluations=0,
        evaluations_per_iteration=[0] * len(seeds),
        elapsed={"sampling": 0.0, "selection": selection_s},
        R=R,
        rng_seed=rng_seed,
    )


def degree_seeds(g: WeightedGraph, k: int, *, snapshots: Optional[SnapshotSet] = None) -> SelectionResult:
    """k highest out-degree nodes, ties by lowest id. Scored on `snapshots` when given."""
    k = _check_positive("k", k)
    t0 = time.perf_counter()
    deg = g.out_degree()
    order = np.lexsort((np.arange(g.node_count), -deg))[:k]
    return _baseline("degree", g, order.tolist(), snapshots, None, t0)


def random_seeds(g: WeightedGraph, k: int, rng_seed: int, *,
                 snapshots: Optional[SnapshotSet] = None) -> SelectionResult:
    """k distinct uniform nodes (all n when k >= n), deterministic given rng_seed."""
    k = _check_positive("k", k)
    rng_seed = check_seed(rng_seed)
    t0 = time.perf_counter()
    order = substream(rng_seed, STREAM_RANDOM_SEEDS).permutation(g.node_count)[:k]
    return _baseline("random", g, order.tolist(), snapshots, rng_seed, t0)


# --- audit and oracle --------------------------------------------------------

def _total(ss: SnapshotSet, adjs, members) -> int:
    return coverage_total(ss, members, threads=1, adjacencies=adjs)


def check_submodularity(ss: SnapshotSet, trials: int, rng_seed: int, *,
                        t_side: Optional[SnapshotSet] = None) -> SubmodularityReport:
    """
    Sample chains S subset-of T (S strictly smaller) and v outside T, and compare

        gain_S = f(S + v) - f(S)      on ss
        gain_T = f(T + v) - f(T)      on t_side (default: ss)

    with f the snapshot coverage. Every gain_S < gain_T (submodularity) and
    every negative gain (monotonicity) is recorded. Comparisons use integer
    totals, so there is no tolerance. Passing a different `t_side` mimics
    conventional greedy, where the two sides see different snapshots.
    """
    trials = _check_positive("trials", trials)
    rng_seed = check_seed(rng_seed)
    t_ss = ss if t_side is None else t_side
    if t_ss.graph is not ss.graph and t_ss.graph != ss.graph:
        raise ArgumentError("t_side must share the parent graph")
    n = ss.graph.node_count
    adjs_s = _adjacencies(ss)
    adjs_t = adjs_s if t_ss is ss else _adjacencies(t_ss)
    Rs, Rt = ss.R, t_ss.R

    violations = []
    lo = hi = None
    if n < 2:
        _log(f"submodularity audit: n={n}, no chains to sample")
        return SubmodularityReport(trials, violations)

    for trial in range(trials):
        rng = substream(rng_seed, STREAM_AUDIT, trial)
        perm = rng.permutation(n).tolist()
        b = int(rng.integers(1, n))          # |T| in [1, n-1]
        a = int(rng.integers(0, b))          # |S| in [0, |T|-1]
        S, T, v = perm[:a], perm[:b], perm[b]
        gs = _total(ss, adjs_s, S + [v]) - _total(ss, adjs_s, S)
        gt = _total(t_ss, adjs_t, T + [v]) - _total(t_ss, adjs_t, T)
        gain_s, gain_t = gs / Rs, gt / Rt
        lo = min(gain_s, gain_t) if lo is None else min(lo, gain_s, gain_t)
        hi = max(gain_s, gain_t) if hi is None else max(hi, gain_s, gain_t)
        # gs/Rs < gt/Rt  <=>  gs*Rt < gt*Rs  (exact in integers)
        if gs * Rt < gt * Rs or gs < 0 or gt < 0:
            violations.append((tuple(S), tuple(T), v, gain_s, gain_t))

    _log(f"submodularity audit: trials={trials} seed={rng_seed} violations={len(violations)}"
         f"{' (split snapshot sets)' if t_side is not None else ''}")
    return SubmodularityReport(trials, violations, lo, hi)


def exhaustive_optimum(ss: SnapshotSet, k: int) -> tuple:
    """(best snapshot spread, best node tuple) over all subsets of size min(k, n)."""
    k = _check_positive("k", k)
    n = ss.graph.node_count
    size = min(k, n)
    if math.comb(n, size) > MAX_EXHAUSTIVE_SUBSETS:
        raise CapacityError(f"C({n},{size}) subsets exceed the exhaustive-search bound")
    adjs = _adjacencies(ss)
    best, best_set = -1, ()
    for combo in itertools.combinations(range(n), size):
        total = _total(ss, adjs, combo)
        if total > best:
            best, best_set = total, combo
    return best / ss.R, best_set
