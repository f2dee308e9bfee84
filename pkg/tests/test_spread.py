import pytest

from spreadlab.errors import ArgumentError, CapacityError, ConfigurationError
from spreadlab.graph import WeightedGraph, parse_edge_list
from spreadlab.sampling import Snapshot, SnapshotSet, sample_snapshot_set
from spreadlab.spread import (
    SeedSet,
    SpreadEstimate,
    coverage_total,
    exact_spread,
    reachable_count,
    simulate_spread,
    snapshot_spread,
)


@pytest.fixture
def pair():
    return WeightedGraph.from_edges([(0, 1)], default_p=0.5)


# --- SeedSet ------------------------------------------------------------------

def test_seed_set_drops_duplicates_and_keeps_order():
    assert SeedSet((3, 1, 3, 2)).members == (3, 1, 2)
    assert SeedSet((1,)).add(1).members == (1,)
    assert SeedSet((1,)).add(0).members == (1, 0)


def test_seed_set_validation(chain):
    with pytest.raises(ArgumentError):
        SeedSet((-1,))
    with pytest.raises(ArgumentError):
        SeedSet((3,)).validate(chain.node_count)


def test_seed_set_from_labels():
    g = parse_edge_list("10 20\n", default_p=1.0)
    assert SeedSet.from_labels(g, [20, 10]).members == (1, 0)


# --- reachable_count ----------------------------------------------------------

def test_reachable_count_on_chain(chain):
    full = Snapshot.from_edges(chain, [0, 1])
    cut = Snapshot.from_edges(chain, [0])
    assert reachable_count(full, SeedSet((0,))) == 3
    assert reachable_count(full, SeedSet()) == 0
    assert reachable_count(cut, SeedSet((0,))) == 2
    assert reachable_count(cut, [2, 0]) == 3


def test_reachable_count_rejects_foreign_nodes(chain):
    with pytest.raises(ArgumentError):
        reachable_count(Snapshot.from_edges(chain, []), [5])


# --- snapshot_spread ----------------------------------------------------------

def test_snapshot_spread_is_the_mean_count(chain):
    ss = SnapshotSet(chain, (Snapshot.from_edges(chain, []), Snapshot.from_edges(chain, [0, 1])))
    est = snapshot_spread(ss, [0])
    assert est.value == 2.0
    assert est.estimator == "snapshot"
    assert est.samples == 2
    assert coverage_total(ss, [0]) == 4
    assert snapshot_spread(ss, []).value == 0.0
    assert coverage_total(ss, []) == 0


def test_snapshot_spread_single_edge(pair):
    est = snapshot_spread(sample_snapshot_set(pair, 10_000, 17), [0])
    assert est.value == pytest.approx(1.5, abs=0.02)
    assert est.std_error > 0


def test_snapshot_spread_independent_of_threads(make_random_graph):
    g = make_random_graph(6, 40, 100)
    ss = sample_snapshot_set(g, 25, 3)
    assert snapshot_spread(ss, [0, 5], threads=1) == snapshot_spread(ss, [0, 5], threads=4)


def test_duplicate_seed_changes_nothing(make_random_graph):
    g = make_random_graph(7, 20, 50)
    ss = sample_snapshot_set(g, 30, 1)
    assert snapshot_spread(ss, [3, 4]).value == snapshot_spread(ss, [3, 4, 3]).value
    small = make_random_graph(7, 6, 10)
    assert exact_spread(small, [1]).value == exact_spread(small, [1, 1]).value


def test_estimates_are_bounded(make_random_graph):
    g = make_random_graph(8, 30, 80)
    ss = sample_snapshot_set(g, 20, 2)
    for S in ([0], [1, 2, 3], list(range(10))):
        value = snapshot_spread(ss, S).value
        assert len(S) <= value <= g.node_count


# --- simulate_spread ----------------------------------------------------------

def test_simulation_on_certain_chain(chain):
    assert simulate_spread(chain, [0], 7, 1).value == 3.0
    assert simulate_spread(chain, [], 7, 1).value == 0.0


def test_simulation_single_edge(pair):
    est = simulate_spread(pair, [0], 20_000, 5)
    assert est.estimator == "simulation"
    assert abs(est.value - 1.5) <= 4 * est.std_error


def test_simulation_is_seeded(diamond):
    a = simulate_spread(diamond, [0], 300, 9, threads=1)
    b = simulate_spread(diamond, [0], 300, 9, threads=3)
    assert a == b


@pytest.mark.parametrize("rounds", [0, -3, 1.5])
def test_simulation_needs_positive_rounds(diamond, rounds):
    with pytest.raises(ArgumentError):
        simulate_spread(diamond, [0], rounds, 1)


def test_simulation_needs_probabilities():
    with pytest.raises(ConfigurationError):
        simulate_spread(parse_edge_list("0 1\n"), [0], 10, 1)


# --- exact_spread -------------------------------------------------------------

def test_exact_single_edge(pair):
    est = exact_spread(pair, [0])
    assert est.value == pytest.approx(1.5)
    assert est.samples == 0


def test_exact_fan_out():
    g = WeightedGraph.from_edges([(0, 1), (0, 2)], default_p=0.5)
    assert exact_spread(g, [0]).value == pytest.approx(2.0)


def test_exact_diamond(diamond):
    assert exact_spread(diamond, [0]).value == pytest.approx(2.4375)
    assert exact_spread(diamond, []).value == 0.0


def test_exact_edgeless():
    g = WeightedGraph.from_edges([], node_count=3, default_p=0.5)
    assert exact_spread(g, [0, 2]).value == pytest.approx(2.0)


def test_exact_enumeration_bound(make_random_graph):
    g = make_random_graph(1, 8, 25)
    assert g.edge_count == 25
    with pytest.raises(CapacityError):
        exact_spread(g, [0])


def test_exact_spans_several_chunks(make_random_graph):
    # 18 edges = 4 enumeration chunks; compare against a large snapshot sample.
    g = make_random_graph(12, 9, 18, p=0.3)
    exact = exact_spread(g, [0]).value
    est = snapshot_spread(sample_snapshot_set(g, 20_000, 4), [0])
    assert abs(est.value - exact) <= 4 * est.std_error + 1e-9


def test_exact_ignores_isolated_nodes_when_sizing():
    # 16 certain edges on a path plus a very large isolated tail; only the
    # path endpoints take part in the enumeration.
    g = WeightedGraph.from_edges([(i, i + 1) for i in range(16)], node_count=200_000, default_p=1.0)
    assert exact_spread(g, [0]).value == pytest.approx(17.0)
    assert exact_spread(g, [0, 199_999]).value == pytest.approx(18.0)
    assert exact_spread(g, [199_999]).value == pytest.approx(1.0)


def test_coverage_total_with_prebuilt_adjacencies(make_random_graph):
    g = make_random_graph(8, 25, 60)
    ss = sample_snapshot_set(g, 12, 3)
    adjs = [snap.forward_adjacency for snap in ss]
    for S in ([0], [4, 9, 0], []):
        assert coverage_total(ss, S, adjacencies=adjs) == coverage_total(ss, S)
    assert coverage_total(ss, [0, 4]) == round(snapshot_spread(ss, [0, 4]).value * ss.R)
    with pytest.raises(ArgumentError):
        coverage_total(ss, [25], adjacencies=adjs)


def test_estimate_names_a_known_estimator():
    assert SpreadEstimate(1.0, "exact", 0).estimator == "exact"
    with pytest.raises(ArgumentError):
        SpreadEstimate(1.0, "guess", 0)
