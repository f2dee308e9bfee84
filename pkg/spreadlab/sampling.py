# spreadlab/sampling.py
#
# Static snapshot sampling
# ------------------------
# A snapshot keeps each edge of the parent graph independently with
# probability p(u, v): edge e survives iff draw_e < p(e). The strict
# inequality makes p=0 and p=1 exact.
#
# Snapshot i of a set is drawn from substream(seed, STREAM_SNAPSHOT, i), so it
# is a pure function of (graph, seed, i) and the set is identical whatever
# SPREADLAB_THREADS says.
#
# Storage: a boolean mask over the parent's edge indices (compact, cheap to
# compare and serialise) plus a forward adjacency in CSR form built from the
# mask. The adjacency is held as plain Python lists because the BFS loops in
# spread.py/selection.py index it element by element. With materialize=False
# only the mask is kept and the adjacency is rebuilt on each access.

import time
from dataclasses import dataclass

import numpy as np

from .compat import STREAM_SNAPSHOT
from .errors import ArgumentError, ConfigurationError
from .graph import WeightedGraph
from .logging_setup import _dbg, _log
from .streams import check_seed, substream
from .workers import parallel_map


class Snapshot:
    __slots__ = ("graph", "mask", "_adjacency")

    def __init__(self, graph: WeightedGraph, mask, *, materialize: bool = True):
        mask = np.array(mask, dtype=bool, copy=True).reshape(-1)
        if mask.shape != (graph.edge_count,):
            raise ArgumentError(f"mask has {mask.size} bits, graph has {graph.edge_count} edges")
        mask.setflags(write=False)
        self.graph = graph
        self.mask = mask
        self._adjacency = self._build_adjacency() if materialize else None

    @classmethod
    def from_edges(cls, graph: WeightedGraph, retained, *, materialize: bool = True):
        """Snapshot keeping exactly the given edge indices."""
        mask = np.zeros(graph.edge_count, dtype=bool)
        mask[np.asarray(list(retained), dtype=np.int64)] = True
        return cls(graph, mask, materialize=materialize)

    def _build_adjacency(self):
        g = self.graph
        kept = g.out_order[self.mask[g.out_order]]
        indptr = np.zeros(g.node_count + 1, dtype=np.int64)
        np.cumsum(np.bincount(g.src[kept], minlength=g.node_count), out=indptr[1:])
        return indptr.tolist(), g.dst[kept].tolist()

    @property
    def forward_adjacency(self):
        """(indptr, indices): targets of u are indices[indptr[u]:indptr[u+1]], ascending."""
        if self._adjacency is not None:
            return self._adjacency
        return self._build_adjacency()

    @property
    def materialized(self) -> bool:
        return self._adjacency is not None

    @property
    def retained_count(self) -> int:
        return int(np.count_nonzero(self.mask))

    def retained_edges(self) -> np.ndarray:
        return np.flatnonzero(self.mask)

    def __eq__(self, other):
        if not isinstance(other, Snapshot):
            return NotImplemented
        same_parent = self.graph is other.graph or self.graph == other.graph
        return same_parent and np.array_equal(self.mask, other.mask)

    __hash__ = None

    def __repr__(self):
        return f"Snapshot(retained={self.retained_count}/{self.graph.edge_count})"


@dataclass(frozen=True, eq=False)
class SnapshotSet:
    graph: WeightedGraph
    snapshots: tuple
    rng_seed: object = None

    def __post_init__(self):
        snaps = tuple(self.snapshots)
        if not snaps:
            raise ArgumentError("a snapshot set needs at least one snapshot")
        for s in snaps:
            if s.graph is not self.graph:
                raise ArgumentError("every snapshot must share the set's parent graph")
        object.__setattr__(self, "snapshots", snaps)

    @property
    def R(self) -> int:
        return len(self.snapshots)

    def __len__(self):
        return len(self.snapshots)

    def __iter__(self):
        return iter(self.snapshots)

    def __getitem__(self, i):
        return self.snapshots[i]

    def masks(self) -> np.ndarray:
        """R x |E| boolean matrix."""
        if self.graph.edge_count == 0:
            return np.zeros((self.R, 0), dtype=bool)
        return np.vstack([s.mask for s in self.snapshots])

    def __eq__(self, other):
        if not isinstance(other, SnapshotSet):
            return NotImplemented
        return (
            self.graph == other.graph
            and self.rng_seed == other.rng_seed
            and np.array_equal(self.masks(), other.masks())
        )

    __hash__ = None


def _require_probabilities(g: WeightedGraph):
    if not g.has_probabilities:
        missing = int(np.isnan(g.prob).sum())
        raise ConfigurationError(
            f"{missing} edge(s) have no probability; pass a default p or assign a probability model"
        )


def sample_snapshot(g: WeightedGraph, stream: np.random.Generator, *, materialize: bool = True) -> Snapshot:
    """One snapshot: edge e is retained iff stream draw < p(e)."""
    _require_probabilities(g)
    draws = stream.random(g.edge_count)
    return Snapshot(g, draws < g.prob, materialize=materialize)


def sample_snapshot_set(g: WeightedGraph, R: int, rng_seed: int, *, threads=None,
                        materialize: bool = True, domain=(STREAM_SNAPSHOT,)) -> SnapshotSet:
    """
    R snapshots; snapshot i comes from substream(rng_seed, *domain, i).

    `domain` lets other algorithms (conventional greedy) draw their own
    families of snapshot sets without colliding with the static one.
    """
    if isinstance(R, bool) or not isinstance(R, (int, np.integer)) or R < 1:
        raise ArgumentError(f"R must be a positive integer, got {R!r}")
    rng_seed = check_seed(rng_seed)
    _require_probabilities(g)

    t0 = time.perf_counter()

    def one(i):
        return sample_snapshot(g, substream(rng_seed, *domain, i), materialize=materialize)

    snaps = parallel_map(one, range(int(R)), threads)
    ss = SnapshotSet(g, tuple(snaps), rng_seed)
    dt = time.perf_counter() - t0
    if domain == (STREAM_SNAPSHOT,):
        _log(f"sampled snapshot set: R={R} seed={rng_seed} n={g.node_count} m={g.edge_count} "
             f"elapsed={dt:.3f}s")
    else:
        _dbg(f"sampled snapshot set: R={R} seed={rng_seed} domain={domain} elapsed={dt:.3f}s")
    return ss
