# Command-line formatting helpers (display only)
# ---------------------------------------------
# Renders argv lists for the log and for the "rerun with" hint printed when a
# seed was chosen automatically.
#
# IMPORTANT:
# - These helpers are for display/logging only. Never execute the result.

import shlex
import sys

from .compat import is_frozen


def format_cmd_for_display(argv) -> str:
    """POSIX-shell quoting, copy/paste safe."""
    if argv is None:
        return ""
    return shlex.join("" if a is None else str(a) for a in argv)


def format_spreadlab_cmd_for_display(args, *, frozen=None) -> str:
    """Prefix with `./spreadlab` for frozen builds, `python -m spreadlab` otherwise."""
    if frozen is None:
        frozen = is_frozen()
    prefix = "./spreadlab" if frozen else f"{shlex.quote(sys.executable)} -m spreadlab"
    return f"{prefix} {format_cmd_for_display(args)}".strip()


def with_seed(argv, seed: int) -> list:
    """argv with --seed set to `seed` (replacing any existing value)."""
    out = []
    skip = False
    for a in argv:
        if skip:
            skip = False
            continue
        if a == "--seed":
            skip = True
            continue
        if a.startswith("--seed="):
            continue
        out.append(a)
    return out + ["--seed", str(seed)]
