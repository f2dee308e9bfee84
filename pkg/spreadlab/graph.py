# spreadlab/graph.py
#
# Graph core
# ----------
# WeightedGraph is the diffusion substrate every other module reads:
#   - nodes are dense ids 0..n-1; external labels are kept for output
#   - edges live in three parallel numpy arrays (src, dst, prob) in *ingestion
#     order*; that order is the edge index used by snapshot bitmasks
#   - a CSR view (out_order/out_indptr) gives O(out-degree) forward traversal,
#     with each node's targets sorted ascending
#
# Probabilities may be unassigned (NaN) right after parsing an edge list that
# carries no third column; assign_probabilities() or a default_p fills them.
#
# Graphs are immutable: arrays are flagged read-only and every "change"
# returns a new graph. That makes them safe to share across worker threads.

import hashlib
import io
import sys
from dataclasses import dataclass, field
from typing import Union

import numpy as np

from .compat import STREAM_TRIVALENCY, TRIVALENCY_VALUES
from .errors import ArgumentError, DomainError, ParseError
from .logging_setup import _dbg, _log
from .streams import substream


def _frozen(a, dtype):
    arr = np.array(a, dtype=dtype, copy=True).reshape(-1)
    arr.setflags(write=False)
    return arr


def _check_probability(p, line=None):
    # NaN fails both comparisons, so it is rejected here too.
    if not (0.0 <= p <= 1.0):
        raise DomainError(line, f"probability {p!r} outside [0, 1]")
    return float(p)


@dataclass(frozen=True, eq=False)
class WeightedGraph:
    node_count: int
    src: np.ndarray
    dst: np.ndarray
    prob: np.ndarray
    labels: np.ndarray
    dropped_self_loops: int = 0
    duplicate_edges: int = 0
    out_order: np.ndarray = field(init=False, repr=False)
    out_indptr: np.ndarray = field(init=False, repr=False)
    _label_index: dict = field(init=False, repr=False)

    def __post_init__(self):
        n = int(self.node_count)
        if n < 0:
            raise ArgumentError(f"node_count must be >= 0, got {n}")
        src = _frozen(self.src, np.int64)
        dst = _frozen(self.dst, np.int64)
        prob = _frozen(self.prob, np.float64)
        labels = _frozen(self.labels, np.int64)
        if not (len(src) == len(dst) == len(prob)):
            raise ArgumentError("src, dst and prob must have the same length")
        if len(labels) != n:
            raise ArgumentError(f"expected {n} labels, got {len(labels)}")
        if len(src) and (src.min() < 0 or dst.min() < 0 or src.max() >= n or dst.max() >= n):
            raise ArgumentError("edge endpoint outside [0, node_count)")
        assigned = prob[~np.isnan(prob)]
        if len(assigned) and (assigned.min() < 0.0 or assigned.max() > 1.0):
            raise DomainError(None, "edge probability outside [0, 1]")
        if len(np.unique(src * max(n, 1) + dst)) != len(src):
            raise ArgumentError("duplicate directed edge")
        if len(np.unique(labels)) != n:
            raise ArgumentError("external labels must be unique")

        order = np.lexsort((dst, src))
        order.setflags(write=False)
        indptr = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(np.bincount(src, minlength=n), out=indptr[1:])
        indptr.setflags(write=False)

        object.__setattr__(self, "node_count", n)
        object.__setattr__(self, "src", src)
        object.__setattr__(self, "dst", dst)
        object.__setattr__(self, "prob", prob)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "out_order", order)
        object.__setattr__(self, "out_indptr", indptr)
        object.__setattr__(self, "_label_index", {int(x): i for i, x in enumerate(labels.tolist())})

    # --- construction -------------------------------------------------------

    @classmethod
    def from_edges(cls, edges, node_count=None, labels=None, default_p=None):
        """
        Build from dense-id tuples (u, v) or (u, v, p).

        Same rules as parse_edge_list: self-loops dropped, first duplicate wins.
        node_count defaults to max endpoint + 1; isolated nodes are allowed.
        """
        if default_p is not None:
            default_p = _check_probability(float(default_p))
        seen = set()
        src, dst, prob = [], [], []
        loops = dups = 0
        top = -1
        for e in edges:
            u, v = int(e[0]), int(e[1])
            p = _check_probability(float(e[2])) if len(e) > 2 and e[2] is not None else default_p
            top = max(top, u, v)
            if u == v:
                loops += 1
                continue
            if (u, v) in seen:
                dups += 1
                continue
            seen.add((u, v))
            src.append(u)
            dst.append(v)
            prob.append(np.nan if p is None else p)
        n = top + 1 if node_count is None else int(node_count)
        if labels is None:
            labels = np.arange(n)
        return cls(n, src, dst, prob, labels, dropped_self_loops=loops, duplicate_edges=dups)

    # --- queries ------------------------------------------------------------

    @property
    def edge_count(self) -> int:
        return len(self.src)

    @property
    def has_probabilities(self) -> bool:
        return not bool(np.isnan(self.prob).any())

    def out_degree(self) -> np.ndarray:
        return np.diff(self.out_indptr)

    def in_degree(self) -> np.ndarray:
        return np.bincount(self.dst, minlength=self.node_count)

    def out_edges(self, u: int) -> np.ndarray:
        """Edge indices leaving u, targets ascending."""
        return self.out_order[self.out_indptr[u]:self.out_indptr[u + 1]]

    def label(self, node: int) -> int:
        return int(self.labels[node])

    def node(self, label: int) -> int:
        try:
            return self._label_index[int(label)]
        except KeyError:
            raise ArgumentError(f"unknown node label {label}") from None

    def edges(self):
        """(u, v, p) in edge-index order; p is None when unassigned."""
        for u, v, p in zip(self.src.tolist(), self.dst.tolist(), self.prob.tolist()):
            yield u, v, (None if p != p else p)

    def with_probabilities(self, prob) -> "WeightedGraph":
        prob = np.asarray(prob, dtype=np.float64)
        if prob.shape != (self.edge_count,):
            raise ArgumentError(f"expected {self.edge_count} probabilities, got {prob.shape}")
        return WeightedGraph(
            self.node_count, self.src, self.dst, prob, self.labels,
            dropped_self_loops=self.dropped_self_loops, duplicate_edges=self.duplicate_edges,
        )

    def content_hash(self) -> str:
        h = hashlib.sha256()
        h.update(np.int64(self.node_count).tobytes())
        for arr in (self.src, self.dst, self.prob, self.labels):
            h.update(np.ascontiguousarray(arr).astype("<f8" if arr.dtype.kind == "f" else "<i8").tobytes())
        return h.hexdigest()

    def __eq__(self, other):
        if not isinstance(other, WeightedGraph):
            return NotImplemented
        return (
            self.node_count == other.node_count
            and np.array_equal(self.src, other.src)
            and np.array_equal(self.dst, other.dst)
            and np.array_equal(self.prob, other.prob, equal_nan=True)
            and np.array_equal(self.labels, other.labels)
        )

    __hash__ = None


# --- edge-list format --------------------------------------------------------

def _iter_lines(text):
    # Bytes stay undecoded here so a bad byte is reported against its line.
    if isinstance(text, (bytes, bytearray)):
        return bytes(text).splitlines()
    if isinstance(text, str):
        return text.splitlines()
    return text


def _decode(raw, lineno) -> str:
    if isinstance(raw, (bytes, bytearray)):
        try:
            return bytes(raw).decode("utf-8")
        except UnicodeDecodeError:
            raise ParseError(lineno, "invalid UTF-8") from None
    return raw


def _parse_label(tok, lineno):
    # ASCII digits only: int() would also take "+5", "1_0" and non-ASCII digits.
    if tok.isascii() and tok.isdigit():
        return int(tok)
    if tok.startswith("-") and tok[1:].isascii() and tok[1:].isdigit():
        raise ParseError(lineno, f"node label must be non-negative, got {tok}")
    raise ParseError(lineno, f"non-numeric node label {tok!r}")


def _parse_probability(tok, lineno):
    if not tok.isascii() or "_" in tok:
        raise ParseError(lineno, f"non-numeric probability {tok!r}")
    try:
        p = float(tok)
    except ValueError:
        raise ParseError(lineno, f"non-numeric probability {tok!r}") from None
    return _check_probability(p, lineno)


def parse_edge_list(text, default_p=None) -> WeightedGraph:
    """
    Parse "u v" / "u v p" records ('#' comments, whitespace separated).

    `text` may be bytes, str, or an iterable of lines. External labels become
    dense ids in order of first appearance. Self-loops are dropped and the
    first occurrence of a duplicate edge wins; both counts are kept on the
    graph. Edges without p take default_p, or stay unassigned (NaN).
    """
    if default_p is not None:
        default_p = _check_probability(float(default_p))
    index = {}
    order = []
    seen = set()
    src, dst, prob = [], [], []
    loops = dups = 0

    def dense(label):
        i = index.get(label)
        if i is None:
            i = index[label] = len(order)
            order.append(label)
        return i

    for lineno, raw in enumerate(_iter_lines(text), start=1):
        line = _decode(raw, lineno).strip()
        if not line or line.startswith("#"):
            continue
        tokens = line.split()
        if len(tokens) not in (2, 3):
            raise ParseError(lineno, f"expected 'u v' or 'u v p', got {len(tokens)} fields")
        a = _parse_label(tokens[0], lineno)
        b = _parse_label(tokens[1], lineno)
        p = default_p
        if len(tokens) == 3:
            p = _parse_probability(tokens[2], lineno)
        if a == b:
            loops += 1
            continue
        if (a, b) in seen:
            dups += 1
            continue
        seen.add((a, b))
        src.append(dense(a))
        dst.append(dense(b))
        prob.append(np.nan if p is None else p)

    g = WeightedGraph(len(order), src, dst, prob, order, dropped_self_loops=loops, duplicate_edges=dups)
    _log(f"parsed edge list: n={g.node_count} m={g.edge_count} "
         f"self_loops_dropped={loops} duplicate_edges={dups}")
    if dups:
        _log(f"WARNING: {dups} duplicate edge(s) ignored (first occurrence kept)")
    return g


def format_edge_list(g: WeightedGraph) -> str:
    """Inverse of parse_edge_list; probabilities use repr() so re-parsing is exact."""
    out = io.StringIO()
    out.write(f"# spreadlab edge list: n={g.node_count} m={g.edge_count}\n")
    labels = g.labels.tolist()
    for u, v, p in g.edges():
        if p is None:
            out.write(f"{labels[u]} {labels[v]}\n")
        else:
            out.write(f"{labels[u]} {labels[v]} {p!r}\n")
    return out.getvalue()


def read_edge_list(path, default_p=None) -> WeightedGraph:
    """Read from a file path, or from stdin when path is '-'."""
    if path == "-":
        return parse_edge_list(sys.stdin.buffer.read(), default_p=default_p)
    with open(path, "rb") as f:
        data = f.read()
    _dbg(f"read {len(data)} bytes from {path}")
    return parse_edge_list(data, default_p=default_p)


def write_edge_list(g: WeightedGraph, path) -> None:
    text = format_edge_list(g)
    if path in (None, "-"):
        sys.stdout.write(text)
        return
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write(text)


# --- probability models ------------------------------------------------------

@dataclass(frozen=True)
class Uniform:
    p: float

    def __post_init__(self):
        _check_probability(float(self.p))

    def probabilities(self, g: WeightedGraph, rng_seed: int) -> np.ndarray:
        return np.full(g.edge_count, float(self.p))


@dataclass(frozen=True)
class WeightedCascade:
    """p(u, v) = 1 / in-degree(v). Every edge target has in-degree >= 1."""

    def probabilities(self, g: WeightedGraph, rng_seed: int) -> np.ndarray:
        indeg = g.in_degree()
        return 1.0 / indeg[g.dst]


@dataclass(frozen=True)
class Trivalency:
    values: tuple = TRIVALENCY_VALUES

    def __post_init__(self):
        if not self.values:
            raise ArgumentError("trivalency needs at least one value")
        for p in self.values:
            _check_probability(float(p))

    def probabilities(self, g: WeightedGraph, rng_seed: int) -> np.ndarray:
        rng = substream(rng_seed, STREAM_TRIVALENCY)
        values = np.asarray(self.values, dtype=np.float64)
        return values[rng.integers(0, len(values), size=g.edge_count)]


ProbabilityModel = Union[Uniform, WeightedCascade, Trivalency]

MODEL_NAMES = ("uniform", "wc", "trivalency")


def model_from_name(name: str, p=None) -> ProbabilityModel:
    if name == "uniform":
        if p is None:
            raise ArgumentError("--prob-model uniform needs --p")
        return Uniform(float(p))
    if name == "wc":
        return WeightedCascade()
    if name == "trivalency":
        return Trivalency()
    raise ArgumentError(f"unknown probability model {name!r} (expected one of {', '.join(MODEL_NAMES)})")


def assign_probabilities(g: WeightedGraph, model: ProbabilityModel, rng_seed: int = 0) -> WeightedGraph:
    """New graph with the same edges and probabilities set by `model`."""
    out = g.with_probabilities(model.probabilities(g, rng_seed))
    _log(f"assigned probabilities: model={type(model).__name__} m={g.edge_count}")
    return out
