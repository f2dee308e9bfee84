# spreadlab/errors.py
"""
Exception hierarchy and process exit codes.

Every library error derives from SpreadLabError *and* from the builtin a caller
would naturally catch (ValueError for bad input, RuntimeError for state
problems, OSError for file problems). The CLI maps the hierarchy onto exit
codes through `exit_code`.
"""

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_RUNTIME = 3
EXIT_INTERRUPTED = 130


class SpreadLabError(Exception):
    exit_code = EXIT_RUNTIME


class ParseError(SpreadLabError, ValueError):
    """Malformed edge-list record. `line` is 1-based, or None for API input."""

    def __init__(self, line, message):
        self.line = line
        self.message = message
        where = f"line {line}: " if line is not None else ""
        super().__init__(f"{where}{message}")


class DomainError(ParseError):
    """A probability outside [0, 1]."""


class ArgumentError(SpreadLabError, ValueError):
    exit_code = EXIT_USAGE


class ConfigurationError(SpreadLabError, RuntimeError):
    """The graph is not ready for the requested operation (e.g. probabilities unassigned)."""


class CapacityError(SpreadLabError, RuntimeError):
    """Input too large for an exact/brute-force routine."""


class SnapshotCacheError(SpreadLabError, OSError):
    """Snapshot cache file does not match the graph or is damaged."""
