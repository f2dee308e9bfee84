# spreadlab/cli.py
#
# This module defines the *public* CLI surface for spreadlab.
# It is the single command router used by humans, scripts and the PyInstaller
# build. The library modules stay importable on their own; everything here is
# argument handling, file plumbing and output formatting.
#
# Output contract:
#   - `select` writes CSV (stdout or --out), one row per selection round.
#   - `sample`, `evaluate`, `bench`, `audit` print one JSON document.
#   - `gen` writes an edge list (stdout or --out).
#   - errors go to stderr as "ERROR: ..."; tracebacks go to the log file.
#
# Exit codes:
#   0   success
#   2   usage error (bad/missing flags, invalid values); nothing is written
#   3   runtime error (I/O, cache mismatch, unassigned probabilities, ...)
#   130 interrupted
import sys
import argparse
import json
import time

import psutil

from .compat import EVAL_SEED_OFFSET
from .cmdline_fmt import format_spreadlab_cmd_for_display, with_seed
from .errors import ArgumentError, EXIT_INTERRUPTED, EXIT_OK, EXIT_RUNTIME, EXIT_USAGE, SpreadLabError
from .generators import MODELS, generate
from .graph import MODEL_NAMES, assign_probabilities, model_from_name, read_edge_list, write_edge_list
from .logging_setup import _log, _log_exc, _log_path, set_debug
from .report import read_chosen_nodes, result_rows, write_csv
from .sampling import sample_snapshot_set
from .selection import (
    ALGORITHMS,
    check_submodularity,
    conventional_greedy,
    degree_seeds,
    random_seeds,
    static_greedy,
    static_greedy_du,
)
from .snapcache import load_or_sample, write_snapshot_cache
from .spread import SeedSet, simulate_spread, snapshot_spread
from .streams import SEED_LIMIT, check_seed, fresh_seed


class SpreadLabArgumentParser(argparse.ArgumentParser):
    """Compact two-column help; usage errors print the help text and exit 2."""

    def format_help(self):
        lines = []

        title = self.description or "spreadlab"
        lines.append(title)
        lines.append("")

        positionals = []
        options = []
        subparsers_action = None

        for action in self._actions:
            if isinstance(action, argparse._SubParsersAction):
                subparsers_action = action
            elif action.option_strings:
                if action.help is not argparse.SUPPRESS:
                    options.append(action)
            else:
                if action.help is not argparse.SUPPRESS:
                    positionals.append(action)

        if subparsers_action or positionals:
            lines.append("positional arguments:")
            if subparsers_action:
                lines.append("  COMMAND")
                help_map = {}
                for choice_action in getattr(subparsers_action, "_choices_actions", []):
                    help_map[choice_action.dest] = choice_action.help or ""
                visible = [(name, help_map.get(name, "")) for name in subparsers_action.choices]
                cmd_col_width = 12
                if visible:
                    cmd_col_width = max(cmd_col_width, max(len(name) for name, _ in visible) + 2)
                for name, help_text in visible:
                    lines.append(f"    {name.ljust(cmd_col_width)} {help_text}")
            for action in positionals:
                label = action.metavar or action.dest.upper()
                lines.append(f"  {label}")
                if action.help:
                    lines.append(f"    {action.help}")
            lines.append("")

        if options:
            lines.append("options:")
            rows = []
            for action in options:
                flags = ", ".join(action.option_strings)
                metavar = ""
                if action.nargs != 0:
                    if action.metavar:
                        metavar = str(action.metavar)
                    elif action.choices:
                        metavar = "{" + ",".join(str(c) for c in action.choices) + "}"
                    elif action.dest != "help":
                        metavar = str(action.dest).upper()
                rows.append((flags, metavar, action.help or ""))

            flag_col_width = max(20, max(len(f) for f, _, _ in rows) + 2)
            meta_col_width = max(12, max(len(m) for _, m, _ in rows) + 2)
            for flags, metavar, help_text in rows:
                lines.append(f"  {flags.ljust(flag_col_width)}{metavar.ljust(meta_col_width)}{help_text}")
            lines.append("")

        return "\n".join(lines)

    def error(self, message):
        self.print_help(sys.stderr)
        self.exit(EXIT_USAGE, f"\nERROR: {message}\n")


# --- argument types ----------------------------------------------------------

def _positive_int(text):
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {value}")
    return value


def _seed(text):
    try:
        return check_seed(int(text))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a seed in [0, 2**64), got {text!r}") from None


def _probability(text):
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a probability, got {text!r}") from None
    if not (0.0 <= value <= 1.0):
        raise argparse.ArgumentTypeError(f"probability must be in [0, 1], got {value}")
    return value


def _label_list(text):
    try:
        return [int(tok) for tok in text.replace(",", " ").split()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated node labels, got {text!r}") from None


# --- shared plumbing ---------------------------------------------------------

def _resolve_seed(args):
    # No clock-based seeds unless --seed is omitted; then the chosen seed is
    # printed together with a command line that reproduces the run.
    if args.seed is not None:
        return args.seed
    seed = fresh_seed()
    argv = getattr(args, "_argv", None) or []
    print(f"seed: {seed} (rerun with: {format_spreadlab_cmd_for_display(with_seed(argv, seed))})",
          file=sys.stderr)
    _log(f"no --seed given, using {seed}")
    return seed


def _load_graph(args, seed):
    # --p fills edges without an explicit probability; --prob-model replaces
    # all probabilities (uniform uses --p as its value).
    if args.prob_model:
        g = read_edge_list(args.graph)
        return assign_probabilities(g, model_from_name(args.prob_model, args.p), seed)
    return read_edge_list(args.graph, default_p=args.p)


def _open_sink(path):
    if path in (None, "-"):
        return sys.stdout.buffer, False
    return open(path, "wb"), True


def _print_json(payload):
    print(json.dumps(payload, indent=2))


def _run_algorithm(algorithm, g, k, R, seed, snapshots=None, materialize=True):
    if algorithm == "static":
        return static_greedy(g, k, R, seed, snapshots=snapshots, materialize=materialize)
    if algorithm == "static-du":
        return static_greedy_du(g, k, R, seed, snapshots=snapshots, materialize=materialize)
    if algorithm == "conventional":
        return conventional_greedy(g, k, R, seed)
    # Baselines are scored on the run's snapshot set so their rows carry
    # comparable marginal_gain / cumulative_spread values.
    t0 = time.perf_counter()
    if snapshots is None:
        snapshots = sample_snapshot_set(g, R, seed, materialize=materialize)
    sampling_s = time.perf_counter() - t0
    if algorithm == "degree":
        result = degree_seeds(g, k, snapshots=snapshots)
    else:
        result = random_seeds(g, k, seed, snapshots=snapshots)
    result.elapsed["sampling"] = sampling_s
    return result


def _materialize(args):
    return not getattr(args, "mask_only", False)


def _snapshots_for(args, g, seed):
    if getattr(args, "snapshots", None):
        return load_or_sample(g, args.R, seed, args.snapshots, materialize=_materialize(args))
    return None


def _fixed_snapshots(args, g, seed):
    ss = _snapshots_for(args, g, seed)
    if ss is None:
        ss = sample_snapshot_set(g, args.R, seed, materialize=_materialize(args))
    return ss


# --- commands ----------------------------------------------------------------

def cmd_gen(args):
    # gen:
    #   Write a synthetic graph (er | pa) as an edge list. With --p every edge
    #   carries that probability as a third column.
    #
    # Exit codes:
    #   0 success
    #   2 invalid generator parameters
    seed = _resolve_seed(args)
    g = generate(args.model, args.n, args.avg_degree, seed, default_p=args.p)
    write_edge_list(g, args.out)
    return EXIT_OK


def cmd_sample(args):
    # sample:
    #   Materialize R snapshots and write the snapshot cache file. A later
    #   `select/audit --snapshots PATH` with the same graph, R and seed reuses it.
    #
    # Output JSON:
    #   {"snapshots": path, "R": int, "seed": int, "n": int, "edgeCount": int, "graphHash": hex}
    path = args.out or args.snapshots
    if not path:
        raise ArgumentError("sample needs --out or --snapshots")
    seed = _resolve_seed(args)
    g = _load_graph(args, seed)
    ss = sample_snapshot_set(g, args.R, seed)
    write_snapshot_cache(ss, path)
    _print_json({"snapshots": path, "R": ss.R, "seed": seed, "n": g.node_count,
                 "edgeCount": g.edge_count, "graphHash": g.content_hash()})
    return EXIT_OK


def cmd_select(args):
    # select:
    #   Run one selection algorithm and write ResultRows as CSV.
    #   Sampling/selection timings are only written with --timings so that
    #   identical flags produce identical bytes.
    #
    # Exit codes:
    #   0 success
    #   2 --snapshots with --algo conventional (it resamples every round)
    if args.algo == "conventional" and args.snapshots:
        raise ArgumentError("--snapshots cannot be used with --algo conventional, which samples fresh snapshots each round")
    seed = _resolve_seed(args)
    g = _load_graph(args, seed)
    snapshots = _snapshots_for(args, g, seed)
    result = _run_algorithm(args.algo, g, args.k, args.R, seed, snapshots, _materialize(args))
    rows = result_rows(result, g, args.k, seed, timings=args.timings)
    sink, owned = _open_sink(args.out)
    try:
        write_csv(rows, sink)
    finally:
        if owned:
            sink.close()
    return EXIT_OK


def cmd_evaluate(args):
    # evaluate:
    #   Score a seed list on a fresh snapshot set of size --eval-R drawn with
    #   seed + EVAL_SEED_OFFSET, independent of the snapshots used to choose
    #   the seeds. --rounds adds a diffusion-simulation estimate.
    #
    # Output JSON:
    #   {"seeds": [labels], "spread": float, "stdError": float, "samples": int,
    #    "evalSeed": int, "simulation": {...} | null}
    if not args.seeds and not args.seeds_from:
        raise ArgumentError("evaluate needs --seeds or --seeds-from")
    seed = _resolve_seed(args)
    g = _load_graph(args, seed)
    labels = args.seeds if args.seeds else read_chosen_nodes(args.seeds_from)
    S = SeedSet.from_labels(g, labels)
    eval_seed = (seed + EVAL_SEED_OFFSET) % SEED_LIMIT
    ss = sample_snapshot_set(g, args.eval_R, eval_seed)
    est = snapshot_spread(ss, S)
    sim = None
    if args.rounds:
        s = simulate_spread(g, S, args.rounds, eval_seed)
        sim = {"spread": s.value, "stdError": s.std_error, "rounds": s.samples}
    _print_json({"seeds": [g.label(v) for v in S], "spread": est.value, "stdError": est.std_error,
                 "samples": est.samples, "evalSeed": eval_seed, "simulation": sim})
    return EXIT_OK


def cmd_bench(args):
    # bench:
    #   static vs static-du on the same snapshot set. Reports selection wall
    #   time, evaluations, the time ratio and resident memory.
    #
    # Exit codes:
    #   0 success
    #   3 the two variants disagreed (seeds or gains); that is a bug
    seed = _resolve_seed(args)
    g = _load_graph(args, seed)
    t0 = time.perf_counter()
    ss = _fixed_snapshots(args, g, seed)
    sampling_s = time.perf_counter() - t0
    plain = static_greedy(g, args.k, args.R, seed, snapshots=ss)
    du = static_greedy_du(g, args.k, args.R, seed, snapshots=ss)
    identical = plain.seeds == du.seeds and plain.marginal_gains == du.marginal_gains
    t_plain, t_du = plain.elapsed["selection"], du.elapsed["selection"]
    payload = {
        "n": g.node_count, "edgeCount": g.edge_count, "k": args.k, "R": args.R, "seed": seed,
        "samplingMs": sampling_s * 1000.0,
        "static": {"selectionMs": t_plain * 1000.0, "evaluations": plain.evaluations},
        "static-du": {"selectionMs": t_du * 1000.0, "evaluations": du.evaluations},
        "timeRatio": (t_du / t_plain) if t_plain > 0 else None,
        "speedup": (t_plain / t_du) if t_du > 0 else None,
        "identical": identical,
        "rssMB": psutil.Process().memory_info().rss / (1 << 20),
    }
    _print_json(payload)
    if not identical:
        print("ERROR: static and static-du selected different seeds", file=sys.stderr)
        return EXIT_RUNTIME
    return EXIT_OK


def cmd_audit(args):
    # audit:
    #   Sample --trials chains S < T, v outside T, on one fixed snapshot set
    #   and report every submodularity/monotonicity violation (there should be none).
    #
    # Exit codes:
    #   0 no violations
    #   3 violations found
    seed = _resolve_seed(args)
    g = _load_graph(args, seed)
    ss = _fixed_snapshots(args, g, seed)
    report = check_submodularity(ss, args.trials, seed)
    _print_json(report.as_dict())
    if not report.ok:
        print(f"ERROR: {len(report.violations)} violation(s) on a fixed snapshot set", file=sys.stderr)
        return EXIT_RUNTIME
    return EXIT_OK


# --- parser ------------------------------------------------------------------

def _add_graph_flags(p, *, need_R=True):
    p.add_argument("--graph", required=True, metavar="PATH", help="Edge-list file ('-' for stdin)")
    p.add_argument("--p", type=_probability, metavar="FLOAT",
                   help="Probability for edges without one (value for --prob-model uniform)")
    p.add_argument("--prob-model", choices=MODEL_NAMES, help="Replace all edge probabilities")
    p.add_argument("--seed", type=_seed, metavar="INT", help="Master seed (printed when omitted)")
    if need_R:
        p.add_argument("--R", type=_positive_int, default=100, metavar="INT", help="Snapshot count (default 100)")


def build_parser():
    # Subcommands:
    #   - gen       synthetic graphs
    #   - sample    snapshot cache
    #   - select    seed selection -> CSV
    #   - evaluate  independent scoring of a seed list
    #   - bench     static vs static-du
    #   - audit     submodularity audit
    p = SpreadLabArgumentParser(
        prog="spreadlab",
        description="spreadlab - static-snapshot greedy influence maximization toolkit"
    )
    p.add_argument("--debug", action="store_true", help="Verbose log file output")
    sub = p.add_subparsers(
        dest="cmd",
        required=True,
        metavar="COMMAND",
        parser_class=SpreadLabArgumentParser
    )
    # --- gen ---
    p_gen = sub.add_parser("gen", help="Generate a synthetic graph as an edge list")
    p_gen.add_argument("--n", type=_positive_int, required=True, metavar="INT", help="Node count")
    p_gen.add_argument("--avg-degree", type=float, required=True, metavar="FLOAT", help="Average out-degree")
    p_gen.add_argument("--model", choices=MODELS, default="er", help="er (Erdos-Renyi) or pa (preferential attachment)")
    p_gen.add_argument("--p", type=_probability, metavar="FLOAT", help="Write this probability on every edge")
    p_gen.add_argument("--seed", type=_seed, metavar="INT", help="Generator seed")
    p_gen.add_argument("--out", metavar="PATH", help="Output file (default stdout)")
    p_gen.set_defaults(func=cmd_gen)
    # --- sample ---
    p_s = sub.add_parser("sample", help="Sample R snapshots and write a snapshot cache")
    _add_graph_flags(p_s)
    p_s.add_argument("--out", metavar="PATH", help="Cache file to write")
    p_s.add_argument("--snapshots", metavar="PATH", help="Alias for --out")
    p_s.set_defaults(func=cmd_sample)
    # --- select ---
    p_sel = sub.add_parser("select", help="Select seeds and write per-round CSV")
    _add_graph_flags(p_sel)
    p_sel.add_argument("--algo", choices=ALGORITHMS, default="static", help="Selection algorithm")
    p_sel.add_argument("--k", type=_positive_int, required=True, metavar="INT", help="Seed budget")
    p_sel.add_argument("--snapshots", metavar="PATH", help="Snapshot cache (reused when it matches)")
    p_sel.add_argument("--timings", action="store_true", help="Fill sampling_ms/selection_ms columns")
    p_sel.add_argument("--mask-only", action="store_true", help="Keep snapshots as edge masks only (less memory, slower)")
    p_sel.add_argument("--out", metavar="PATH", help="CSV file (default stdout)")
    p_sel.set_defaults(func=cmd_select)
    # --- evaluate ---
    p_ev = sub.add_parser("evaluate", help="Score seeds on an independent, larger snapshot set")
    _add_graph_flags(p_ev, need_R=False)
    p_ev.add_argument("--seeds", type=_label_list, metavar="LABELS", help="Comma-separated node labels")
    p_ev.add_argument("--seeds-from", metavar="PATH", help="CSV written by select")
    p_ev.add_argument("--eval-R", type=_positive_int, default=10000, metavar="INT",
                      help="Evaluation snapshot count (default 10000)")
    p_ev.add_argument("--rounds", type=_positive_int, metavar="INT", help="Also run this many diffusion simulations")
    p_ev.set_defaults(func=cmd_evaluate)
    # --- bench ---
    p_b = sub.add_parser("bench", help="Compare static and static-du on the same inputs")
    _add_graph_flags(p_b)
    p_b.add_argument("--k", type=_positive_int, required=True, metavar="INT", help="Seed budget")
    p_b.add_argument("--snapshots", metavar="PATH", help="Snapshot cache (reused when it matches)")
    p_b.add_argument("--mask-only", action="store_true", help="Keep snapshots as edge masks only")
    p_b.set_defaults(func=cmd_bench)
    # --- audit ---
    p_a = sub.add_parser("audit", help="Check submodularity/monotonicity on a fixed snapshot set")
    _add_graph_flags(p_a)
    p_a.add_argument("--trials", type=_positive_int, default=1000, metavar="INT", help="Sampled chains (default 1000)")
    p_a.add_argument("--snapshots", metavar="PATH", help="Snapshot cache (reused when it matches)")
    p_a.add_argument("--mask-only", action="store_true", help="Keep snapshots as edge masks only")
    p_a.set_defaults(func=cmd_audit)
    return p


def run(argv) -> int:
    """Parse argv, dispatch, and map failures onto exit codes."""
    argv = list(argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        # argparse exits 0 for --help and 2 for usage errors.
        return e.code if isinstance(e.code, int) else EXIT_USAGE
    args._argv = argv
    if args.debug:
        set_debug(True)
    _log(f"invocation: {format_spreadlab_cmd_for_display(argv)}")
    try:
        rc = args.func(args)
    except KeyboardInterrupt:
        rc = EXIT_INTERRUPTED
    except SpreadLabError as e:
        _log_exc(f"{args.cmd} failed")
        if e.exit_code == EXIT_USAGE:
            parser.print_usage(sys.stderr)
        print(f"ERROR: {e}", file=sys.stderr)
        rc = e.exit_code
    except OSError as e:
        # open() errors carry the path in their message.
        _log_exc(f"{args.cmd} failed")
        print(f"ERROR: {e} (log: {_log_path()})", file=sys.stderr)
        rc = EXIT_RUNTIME
    _log(f"{args.cmd} finished with exit code {rc}")
    return rc


def main(argv=None):
    # Entry point for `python -m spreadlab` and the PyInstaller stub.
    if argv is None:
        argv = sys.argv[1:]
    return run(argv)
