import json

import pytest

from spreadlab import cli
from spreadlab.cli import main, run
from spreadlab.report import FIELDS


@pytest.fixture
def random_graph_file(tmp_path):
    path = tmp_path / "er.txt"
    assert run(["gen", "--n", "60", "--avg-degree", "4", "--seed", "3", "--p", "0.2", "--out", str(path)]) == 0
    return path


def _select(graph, out, *extra):
    return run(["select", "--graph", str(graph), "--k", "1", "--R", "10", "--seed", "1", "--out", str(out),
                *extra])


def test_select_on_chain(chain_file, tmp_path):
    out = tmp_path / "rows.csv"
    assert _select(chain_file, out, "--p", "1.0", "--algo", "static") == 0
    lines = out.read_text(encoding="utf-8").split("\n")
    assert lines[0] == ",".join(FIELDS)
    assert lines[1] == "static,3,2,1,10,1,1,0,3,3,3,,"
    assert lines[2:] == [""]


def test_select_is_byte_identical_across_runs_and_threads(random_graph_file, tmp_path, monkeypatch):
    outputs = []
    for threads in ("1", "4", "1"):
        monkeypatch.setenv("SPREADLAB_THREADS", threads)
        out = tmp_path / f"rows-{len(outputs)}.csv"
        assert run(["select", "--graph", str(random_graph_file), "--algo", "static-du", "--k", "4",
                    "--R", "20", "--seed", "5", "--out", str(out)]) == 0
        outputs.append(out.read_bytes())
    assert outputs[0] == outputs[1] == outputs[2]


def test_zero_budget_is_a_usage_error(chain_file, tmp_path, capsys):
    out = tmp_path / "rows.csv"
    assert run(["select", "--graph", str(chain_file), "--p", "1", "--k", "0", "--out", str(out)]) == 2
    assert not out.exists()
    assert "ERROR" in capsys.readouterr().err


@pytest.mark.parametrize("argv", [
    ["frobnicate"],
    ["select", "--bogus"],
    [],
    ["select", "--graph", "g.txt", "--k", "1", "--algo", "celf++"],
    ["select", "--graph", "g.txt", "--k", "1", "--p", "1.5"],
])
def test_usage_errors(argv, capsys):
    assert run(argv) == 2
    err = capsys.readouterr().err
    assert "ERROR" in err
    assert "COMMAND" in err or "options:" in err


def test_help_exits_zero(capsys):
    assert run(["--help"]) == 0
    out = capsys.readouterr().out
    for name in ("gen", "sample", "select", "evaluate", "bench", "audit"):
        assert name in out


def test_missing_graph_file_is_a_runtime_error(tmp_path, capsys):
    missing = tmp_path / "absent.txt"
    assert run(["select", "--graph", str(missing), "--p", "1", "--k", "1", "--seed", "0"]) == 3
    assert str(missing) in capsys.readouterr().err


def test_malformed_graph_reports_line(tmp_path, capsys):
    path = tmp_path / "bad.txt"
    path.write_text("0 1\n0 x\n", encoding="utf-8")
    assert run(["select", "--graph", str(path), "--p", "1", "--k", "1", "--seed", "0"]) == 3
    assert "line 2" in capsys.readouterr().err


def test_invalid_utf8_graph_reports_line(tmp_path, capsys):
    path = tmp_path / "bad.txt"
    path.write_bytes(b"0 1\n\xff\xfe 2\n")
    assert run(["select", "--graph", str(path), "--p", "1", "--k", "1", "--seed", "0"]) == 3
    err = capsys.readouterr().err
    assert "line 2" in err
    assert "invalid UTF-8" in err


def test_unassigned_probabilities_are_a_runtime_error(chain_file):
    assert run(["select", "--graph", str(chain_file), "--k", "1", "--seed", "0"]) == 3


def test_probability_models(chain_file, tmp_path):
    assert _select(chain_file, tmp_path / "wc.csv", "--prob-model", "wc") == 0
    assert _select(chain_file, tmp_path / "tri.csv", "--prob-model", "trivalency") == 0
    assert _select(chain_file, tmp_path / "uni.csv", "--prob-model", "uniform", "--p", "1") == 0
    # wc gives both chain edges p = 1.
    assert (tmp_path / "wc.csv").read_text().split("\n")[1] == "static,3,2,1,10,1,1,0,3,3,3,,"
    assert _select(chain_file, tmp_path / "bad.csv", "--prob-model", "uniform") == 2


def test_missing_seed_is_chosen_and_printed(chain_file, tmp_path, capsys):
    assert _select(chain_file, tmp_path / "a.csv", "--p", "1") == 0
    assert run(["select", "--graph", str(chain_file), "--p", "1", "--k", "1", "--out", str(tmp_path / "b.csv")]) == 0
    err = capsys.readouterr().err
    assert "seed:" in err
    assert "--seed" in err


def test_timings_fill_the_last_columns(chain_file, tmp_path):
    out = tmp_path / "rows.csv"
    assert _select(chain_file, out, "--p", "1", "--timings") == 0
    cells = out.read_text().split("\n")[1].split(",")
    assert len(cells) == 13
    assert cells[-1] != "" and cells[-2] != ""


@pytest.mark.parametrize("algo", ["static", "static-du", "conventional", "degree", "random"])
def test_every_algorithm_runs(random_graph_file, tmp_path, algo):
    out = tmp_path / f"{algo}.csv"
    assert run(["select", "--graph", str(random_graph_file), "--algo", algo, "--k", "3", "--R", "5",
                "--seed", "2", "--out", str(out)]) == 0
    rows = out.read_text().strip().split("\n")[1:]
    assert len(rows) == 3
    assert all(r.startswith(algo + ",") for r in rows)


def test_evaluate_seed_list(chain_file, capsys):
    assert run(["evaluate", "--graph", str(chain_file), "--p", "1", "--seeds", "0", "--seed", "1",
                "--eval-R", "50", "--rounds", "20"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["spread"] == 3.0
    assert payload["stdError"] == 0.0
    assert payload["samples"] == 50
    assert payload["evalSeed"] == 1 + 1_000_003
    assert payload["simulation"]["spread"] == 3.0


def test_evaluate_seeds_from_select(random_graph_file, tmp_path, capsys):
    rows = tmp_path / "rows.csv"
    assert run(["select", "--graph", str(random_graph_file), "--k", "3", "--R", "50", "--seed", "4",
                "--out", str(rows)]) == 0
    assert run(["evaluate", "--graph", str(random_graph_file), "--seeds-from", str(rows), "--seed", "4",
                "--eval-R", "200"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert len(payload["seeds"]) == 3
    assert payload["spread"] >= 3


def test_evaluate_needs_seeds(chain_file):
    assert run(["evaluate", "--graph", str(chain_file), "--p", "1", "--seed", "1"]) == 2


def test_evaluate_unknown_label(chain_file):
    assert run(["evaluate", "--graph", str(chain_file), "--p", "1", "--seed", "1", "--seeds", "42"]) == 2


def test_gen_is_seeded(tmp_path):
    a, b = tmp_path / "a.txt", tmp_path / "b.txt"
    for path in (a, b):
        assert run(["gen", "--n", "80", "--avg-degree", "3", "--model", "pa", "--seed", "9", "--out", str(path)]) == 0
    assert a.read_bytes() == b.read_bytes()
    assert a.read_text().startswith("# spreadlab edge list")


def test_sample_then_select_reuses_the_cache(random_graph_file, tmp_path, capsys):
    cache = tmp_path / "snaps.bin"
    assert run(["sample", "--graph", str(random_graph_file), "--R", "20", "--seed", "6", "--out", str(cache)]) == 0
    info = json.loads(capsys.readouterr().out)
    assert info["R"] == 20 and info["seed"] == 6
    cached, fresh = tmp_path / "cached.csv", tmp_path / "fresh.csv"
    base = ["select", "--graph", str(random_graph_file), "--k", "3", "--R", "20", "--seed", "6"]
    assert run(base + ["--snapshots", str(cache), "--out", str(cached)]) == 0
    assert run(base + ["--out", str(fresh)]) == 0
    assert cached.read_bytes() == fresh.read_bytes()


def test_sample_needs_a_destination(chain_file):
    assert run(["sample", "--graph", str(chain_file), "--p", "1", "--seed", "1"]) == 2


def test_bench_reports_both_variants(random_graph_file, capsys):
    assert run(["bench", "--graph", str(random_graph_file), "--k", "3", "--R", "10", "--seed", "1"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["identical"] is True
    assert payload["static-du"]["evaluations"] <= payload["static"]["evaluations"]
    assert payload["rssMB"] > 0


def test_audit_finds_nothing_on_fixed_snapshots(random_graph_file, capsys):
    assert run(["audit", "--graph", str(random_graph_file), "--R", "5", "--trials", "200", "--seed", "3",
                "--mask-only"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["violationCount"] == 0
    assert payload["trials"] == 200


def test_interrupt_maps_to_130(chain_file, monkeypatch):
    def interrupted(args):
        raise KeyboardInterrupt

    monkeypatch.setattr(cli, "cmd_audit", interrupted)
    assert main(["audit", "--graph", str(chain_file), "--p", "1", "--seed", "0"]) == 130


def test_debug_flag(chain_file, tmp_path):
    from spreadlab import logging_setup

    assert run(["--debug", "select", "--graph", str(chain_file), "--p", "1", "--k", "1", "--seed", "0",
                "--out", str(tmp_path / "r.csv")]) == 0
    assert logging_setup.debug_enabled()


@pytest.mark.parametrize("command", ["sample", "select"])
def test_seed_must_fit_in_64_bits(chain_file, tmp_path, capsys, command):
    cache = tmp_path / "snaps.bin"
    argv = [command, "--graph", str(chain_file), "--p", "0.5", "--R", "2", "--seed", str(2**64),
            "--out" if command == "sample" else "--snapshots", str(cache)]
    if command == "select":
        argv += ["--k", "1", "--out", str(tmp_path / "rows.csv")]
    assert run(argv) == 2
    assert "ERROR" in capsys.readouterr().err
    assert not cache.exists()


def test_largest_seed_is_accepted(chain_file, tmp_path, capsys):
    cache = tmp_path / "snaps.bin"
    top = str(2**64 - 1)
    assert run(["sample", "--graph", str(chain_file), "--p", "0.5", "--R", "2", "--seed", top,
                "--out", str(cache)]) == 0
    assert json.loads(capsys.readouterr().out)["seed"] == 2**64 - 1
    assert run(["evaluate", "--graph", str(chain_file), "--p", "1", "--seed", top, "--seeds", "0",
                "--eval-R", "5"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert 0 <= payload["evalSeed"] < 2**64
    assert payload["spread"] == 3.0


def test_conventional_refuses_a_snapshot_cache(chain_file, tmp_path, capsys):
    cache = tmp_path / "snaps.bin"
    out = tmp_path / "rows.csv"
    assert run(["select", "--graph", str(chain_file), "--p", "1", "--k", "1", "--seed", "1",
                "--algo", "conventional", "--snapshots", str(cache), "--out", str(out)]) == 2
    assert "--snapshots" in capsys.readouterr().err
    assert not cache.exists() and not out.exists()
