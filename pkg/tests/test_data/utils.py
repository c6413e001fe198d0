import json
import random
from pathlib import Path

import networkx as nx
import numpy as np

from submodular_bounds.detineq import PosDefMatrix, random_pd_matrix
from submodular_bounds.entropy import JointDistribution, random_distribution
from submodular_bounds.hypergraph import Hypergraph, random_hypergraph


def random_sizes(rng: random.Random, n_max: int = 4, alphabet_max: int = 3) -> tuple[int, ...]:
    return tuple(rng.randint(2, alphabet_max) for _ in range(rng.randint(1, n_max)))


def random_pmf(seed: int, n_max: int = 4) -> JointDistribution:
    rng = random.Random(seed)
    return random_distribution(random_sizes(rng, n_max), rng)


def random_covered_hypergraph(n: int, rng: random.Random) -> Hypergraph:
    """A random hypergraph with every singleton appended, so fractional partitions exist."""
    base = random_hypergraph(n, rng.randint(1, 2 * n), rng)
    return Hypergraph(n, base.edges + tuple((i,) for i in range(1, n + 1)))


def random_regular_collection(n: int, r: int, rng: random.Random) -> Hypergraph:
    """r random partitions of [n], each into at least two blocks, listed one after another."""
    edges: list[tuple[int, ...]] = []
    for _ in range(r):
        order = rng.sample(range(1, n + 1), n)
        cuts = sorted(rng.sample(range(1, n), rng.randint(1, n - 1)))
        bounds = [0, *cuts, n]
        edges.extend(tuple(order[a:b]) for a, b in zip(bounds, bounds[1:]))
    return Hypergraph(n, tuple(edges))


def random_matrix(seed: int, n_max: int = 6, n_min: int = 1) -> PosDefMatrix:
    rng = np.random.default_rng(seed)
    return random_pd_matrix(int(rng.integers(n_min, n_max + 1)), rng)


def random_simple_graph(seed: int, n_max: int = 8) -> nx.Graph:
    rng = random.Random(seed)
    n = rng.randint(2, n_max)
    graph = nx.gnp_random_graph(n, rng.uniform(0.2, 0.8), seed=seed)
    return nx.convert_node_labels_to_integers(graph, first_label=1, ordering="sorted")


def write_json(directory: Path, name: str, data) -> str:
    path = directory / name
    path.write_text(json.dumps(data), encoding="utf-8")
    return str(path)


C5 = {"n": 5, "edges": [[1, 2], [2, 3], [3, 4], [4, 5], [1, 5]]}
TRIANGLE = {"n": 3, "edges": [[1, 2], [2, 3], [1, 3]]}
C4_GRAPH = {"n": 4, "edges": [[1, 2], [2, 3], [3, 4], [1, 4]]}
TWO_BY_TWO = {"n": 2, "rows": [[2, 1], [1, 2]]}
FAIR_BITS = {
    "alphabet_sizes": [2, 2],
    "pmf": [
        {"x": [0, 0], "p": "1/4"},
        {"x": [0, 1], "p": "1/4"},
        {"x": [1, 0], "p": "1/4"},
        {"x": [1, 1], "p": "1/4"},
    ],
}
CORRELATED = {
    "alphabet_sizes": [2, 2, 2],
    "pmf": [
        {"x": [0, 0, 0], "p": "3/8"},
        {"x": [0, 1, 1], "p": "1/8"},
        {"x": [1, 0, 1], "p": "1/8"},
        {"x": [1, 1, 0], "p": "1/4"},
        {"x": [1, 1, 1], "p": "1/8"},
    ],
}
