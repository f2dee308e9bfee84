# spreadlab/compat.py
"""
Shared constants and environment checks that must be settled before the
numeric modules are imported.

numpy is the workhorse for edge arrays, coin flips and bit packing. The
features we rely on (Generator/Philox, SeedSequence spawn keys, packbits with
`bitorder`) need numpy >= 1.22, so we check once here and fail with a readable
message instead of an AttributeError deep inside sampling.
"""
import sys

import numpy as np
from packaging.version import Version

MIN_NUMPY = Version("1.22")

if Version(np.__version__) < MIN_NUMPY:
    raise ImportError(
        f"spreadlab needs numpy >= {MIN_NUMPY}, found {np.__version__}"
    )


def is_frozen() -> bool:
    # PyInstaller/py2exe builds set sys.frozen.
    return bool(getattr(sys, "frozen", False))


# Substream domains. Every random draw in the toolkit comes from
# substream(seed, DOMAIN, ...) so two purposes never share a stream even when
# they are given the same user seed.
STREAM_SNAPSHOT = 0
STREAM_SIMULATION = 1
STREAM_TRIVALENCY = 2
STREAM_CONVENTIONAL = 3
STREAM_RANDOM_SEEDS = 4
STREAM_AUDIT = 5

# Added to the selection seed by `evaluate` so evaluation snapshots never
# coincide with the snapshots the seeds were chosen on.
EVAL_SEED_OFFSET = 1_000_003

# exact_spread enumerates 2**|E| realizations.
MAX_EXACT_EDGES = 24

TRIVALENCY_VALUES = (0.1, 0.01, 0.001)

ENV_THREADS = "SPREADLAB_THREADS"
ENV_DEBUG = "SPREADLAB_DEBUG"
ENV_LOG_DIR = "SPREADLAB_LOG_DIR"
