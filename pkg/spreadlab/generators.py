# spreadlab/generators.py
"""
Synthetic graphs for desk-scale runs.

- er: directed G(n, p) with p = avg_degree / (n - 1), so the expected
      out-degree is avg_degree (networkx fast_gnp_random_graph, O(n + m)).
- pa: Barabasi-Albert preferential attachment with m = round(avg_degree / 2)
      links per new node; every undirected link is emitted in both
      directions, giving an average out-degree of about avg_degree.

Node labels are 0..n-1. Isolated nodes exist in the returned graph but are not
representable in the edge-list format, so they disappear when written out.
"""
import networkx as nx

from .errors import ArgumentError
from .graph import WeightedGraph
from .logging_setup import _log
from .streams import check_seed

MODELS = ("er", "pa")


def from_networkx(G, default_p=None) -> WeightedGraph:
    """Dense-id graph from a networkx graph whose nodes are 0..n-1."""
    n = G.number_of_nodes()
    if set(G.nodes()) != set(range(n)):
        raise ArgumentError("networkx graph nodes must be 0..n-1")
    if G.is_directed():
        edges = list(G.edges())
    else:
        edges = []
        for u, v in G.edges():
            edges.append((u, v))
            edges.append((v, u))
    return WeightedGraph.from_edges(edges, node_count=n, default_p=default_p)


def erdos_renyi(n: int, avg_degree: float, seed: int, default_p=None) -> WeightedGraph:
    if n < 1:
        raise ArgumentError(f"n must be >= 1, got {n}")
    if avg_degree < 0:
        raise ArgumentError(f"avg-degree must be >= 0, got {avg_degree}")
    p = min(1.0, avg_degree / (n - 1)) if n > 1 else 0.0
    G = nx.fast_gnp_random_graph(n, p, seed=check_seed(seed), directed=True)
    return from_networkx(G, default_p)


def preferential_attachment(n: int, avg_degree: float, seed: int, default_p=None) -> WeightedGraph:
    m = max(1, int(round(avg_degree / 2)))
    if n <= m:
        raise ArgumentError(f"preferential attachment needs n > {m} for avg-degree {avg_degree}")
    G = nx.barabasi_albert_graph(n, m, seed=check_seed(seed))
    return from_networkx(G, default_p)


def generate(model: str, n: int, avg_degree: float, seed: int, default_p=None) -> WeightedGraph:
    if model == "er":
        g = erdos_renyi(n, avg_degree, seed, default_p)
    elif model == "pa":
        g = preferential_attachment(n, avg_degree, seed, default_p)
    else:
        raise ArgumentError(f"unknown generator model {model!r} (expected one of {', '.join(MODELS)})")
    _log(f"generated {model} graph: n={g.node_count} m={g.edge_count} seed={seed}")
    return g
