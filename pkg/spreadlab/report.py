# spreadlab/report.py
"""
CSV result rows.

One row per selection round. Reals are written with at most 6 significant
digits, positional notation, trailing zeros trimmed ("3.0" -> "3"), via
numpy's locale-independent formatter. Lines end in '\n'.

The two timing columns are left empty unless timings were requested, which
keeps repeated runs byte-identical.
"""
import csv
import io
from dataclasses import astuple, dataclass
from typing import Optional

import numpy as np

from .errors import ParseError

FIELDS = (
    "algorithm", "n", "edge_count", "k", "R", "seed", "iteration", "chosen_node",
    "marginal_gain", "cumulative_spread", "evaluations", "sampling_ms", "selection_ms",
)


@dataclass(frozen=True)
class ResultRow:
    algorithm: str
    n: int
    edge_count: int
    k: int
    R: int
    seed: int
    iteration: int
    chosen_node: int
    marginal_gain: Optional[float]
    cumulative_spread: Optional[float]
    evaluations: int
    sampling_ms: Optional[float] = None
    selection_ms: Optional[float] = None


def format_real(x) -> str:
    if x is None:
        return ""
    return np.format_float_positional(float(x), precision=6, unique=False, fractional=False, trim="-")


def _cell(x) -> str:
    if x is None:
        return ""
    if isinstance(x, float):
        return format_real(x)
    return str(x)


def result_rows(result, g, k: int, seed: int, *, timings: bool = False) -> list:
    """ResultRows for a SelectionResult; chosen nodes are written as external labels."""
    sampling_ms = result.elapsed.get("sampling", 0.0) * 1000.0 if timings else None
    selection_ms = result.elapsed.get("selection", 0.0) * 1000.0 if timings else None
    rows = []
    for i, v in enumerate(result.seeds.members):
        rows.append(ResultRow(
            algorithm=result.algorithm,
            n=g.node_count,
            edge_count=g.edge_count,
            k=k,
            R=result.R,
            seed=seed,
            iteration=i + 1,
            chosen_node=g.label(v),
            marginal_gain=result.marginal_gains[i] if i < len(result.marginal_gains) else None,
            cumulative_spread=result.spread_trace[i] if i < len(result.spread_trace) else None,
            evaluations=result.evaluations_per_iteration[i] if i < len(result.evaluations_per_iteration) else 0,
            sampling_ms=sampling_ms,
            selection_ms=selection_ms,
        ))
    return rows


def render_csv(rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(FIELDS)
    for row in rows:
        writer.writerow([_cell(x) for x in astuple(row)])
    return buf.getvalue()


def write_csv(rows, sink) -> None:
    """Write header + rows to a binary or text stream."""
    text = render_csv(rows)
    if isinstance(sink, io.TextIOBase):
        sink.write(text)
    else:
        sink.write(text.encode("utf-8"))
    sink.flush()


def read_chosen_nodes(path) -> list:
    """chosen_node column (external labels, in row order) of a CSV written by write_csv."""
    with open(path, "r", encoding="utf-8", newline="") as f:
        reader = csv.DictReader(f)
        if reader.fieldnames is None or "chosen_node" not in reader.fieldnames:
            raise ParseError(None, f"{path}: no chosen_node column")
        out = []
        for lineno, r in enumerate(reader, start=2):
            try:
                out.append(int(r["chosen_node"]))
            except (TypeError, ValueError):
                raise ParseError(lineno, f"{path}: bad chosen_node {r.get('chosen_node')!r}") from None
        return out
