# spreadlab/workers.py
"""
Worker pool helpers.

Parallelism here is a throughput knob only. Every caller hands in work items
that are pure functions of their index, and results come back in input order,
so SPREADLAB_THREADS can never change an output.
"""
import os
from concurrent.futures import ThreadPoolExecutor

import psutil

from .compat import ENV_THREADS
from .logging_setup import _dbg


def _default_threads() -> int:
    try:
        n = psutil.cpu_count(logical=False) or psutil.cpu_count(logical=True)
    except Exception:
        n = None
    return max(1, int(n or 1))


def resolve_threads(threads=None) -> int:
    """Explicit argument wins; otherwise the physical core count, capped by SPREADLAB_THREADS."""
    if threads is not None:
        return max(1, int(threads))
    raw = os.environ.get(ENV_THREADS, "").strip()
    if raw:
        try:
            return max(1, min(int(raw), _default_threads()))
        except ValueError:
            _dbg(f"ignoring non-integer {ENV_THREADS}={raw!r}")
    return _default_threads()


def parallel_map(fn, items, threads=None) -> list:
    items = list(items)
    workers = min(resolve_threads(threads), len(items))
    if workers <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers, thread_name_prefix="spreadlab") as pool:
        return list(pool.map(fn, items))
