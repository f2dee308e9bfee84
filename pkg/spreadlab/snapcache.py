# spreadlab/snapcache.py
"""
Snapshot-set cache files.

Layout (all integers little-endian):

    8 bytes   magic b"SPLSNAP1"
    32 bytes  sha256 of the parent graph (WeightedGraph.content_hash)
    8 bytes   R
    8 bytes   rng_seed
    8 bytes   edge count m
    R blocks  ceil(m / 8) bytes each: the edge mask, bit i of the block is
              edge i, least-significant bit first

The graph itself is never stored; loading takes the graph and refuses files
whose hash does not match it.
"""
import os
import struct

import numpy as np

from .errors import SnapshotCacheError
from .graph import WeightedGraph
from .logging_setup import _log
from .sampling import Snapshot, SnapshotSet, sample_snapshot_set
from .streams import SEED_LIMIT

MAGIC = b"SPLSNAP1"
_HEADER = struct.Struct("<8s32sQQQ")


def _block_size(m: int) -> int:
    return (m + 7) // 8


def write_snapshot_cache(ss: SnapshotSet, path) -> None:
    if ss.rng_seed is None:
        raise SnapshotCacheError("only sampled snapshot sets (with a seed) can be cached")
    seed = int(ss.rng_seed)
    if not 0 <= seed < SEED_LIMIT:
        raise SnapshotCacheError(f"seed {seed} does not fit the cache header (0 <= seed < 2**64)")
    g = ss.graph
    header = _HEADER.pack(MAGIC, bytes.fromhex(g.content_hash()), ss.R, seed, g.edge_count)
    tmp = f"{path}.tmp"
    with open(tmp, "wb") as f:
        f.write(header)
        for snap in ss:
            f.write(np.packbits(snap.mask, bitorder="little").tobytes())
    os.replace(tmp, path)
    _log(f"wrote snapshot cache {path}: R={ss.R} seed={ss.rng_seed}")


def read_cache_header(path):
    """(graph_hash_hex, R, rng_seed, m) without reading the masks."""
    try:
        with open(path, "rb") as f:
            raw = f.read(_HEADER.size)
    except OSError as e:
        raise SnapshotCacheError(f"cannot read snapshot cache {path}: {e}") from e
    if len(raw) < _HEADER.size:
        raise SnapshotCacheError(f"{path}: truncated header")
    magic, digest, R, seed, m = _HEADER.unpack(raw)
    if magic != MAGIC:
        raise SnapshotCacheError(f"{path}: not a spreadlab snapshot cache")
    return digest.hex(), R, seed, m


def read_snapshot_cache(g: WeightedGraph, path, *, materialize: bool = True) -> SnapshotSet:
    digest, R, seed, m = read_cache_header(path)
    if digest != g.content_hash():
        raise SnapshotCacheError(f"{path}: snapshot cache was built for a different graph")
    if m != g.edge_count or R < 1:
        raise SnapshotCacheError(f"{path}: header does not match graph (m={m}, R={R})")
    block = _block_size(m)
    with open(path, "rb") as f:
        f.seek(_HEADER.size)
        body = f.read()
    if len(body) != R * block:
        raise SnapshotCacheError(f"{path}: expected {R * block} mask bytes, found {len(body)}")
    raw = np.frombuffer(body, dtype=np.uint8).reshape(R, block)
    snaps = tuple(
        Snapshot(g, np.unpackbits(row, count=m, bitorder="little").astype(bool), materialize=materialize)
        for row in raw
    )
    return SnapshotSet(g, snaps, int(seed))


def load_or_sample(g: WeightedGraph, R: int, rng_seed: int, path, *, threads=None,
                   materialize: bool = True) -> SnapshotSet:
    """Reuse a cache whose header matches (graph, R, seed); otherwise sample and overwrite it."""
    if path and os.path.exists(path):
        try:
            digest, cR, cseed, _m = read_cache_header(path)
        except SnapshotCacheError as e:
            _log(f"WARNING: ignoring unreadable snapshot cache: {e}")
        else:
            if (digest, cR, cseed) == (g.content_hash(), R, rng_seed):
                _log(f"snapshot cache hit: {path}")
                return read_snapshot_cache(g, path, materialize=materialize)
            _log(f"snapshot cache miss (header differs): {path}")
    ss = sample_snapshot_set(g, R, rng_seed, threads=threads, materialize=materialize)
    if path:
        write_snapshot_cache(ss, path)
    return ss
