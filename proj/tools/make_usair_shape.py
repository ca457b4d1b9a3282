#!/usr/bin/env python3
"""Generate a deterministic benchmark graph shaped like the USAir97 network.

The airline network has 332 nodes, 2126 edges and degeneracy 26: a dense
hub core and a long tail of low-degree airports. This script plants a
dense "rich club" among the heaviest nodes, fills the rest with a Chung-Lu
graph with power-law expected degrees, trims or tops up to the exact edge
count, and searches a fixed parameter grid for the first graph that is
connected and has maximum core value 26.

Usage: make_usair_shape.py [output path]   (default: data/usair_shape.txt)
"""

import itertools
import random
import sys

import networkx as nx

NODES = 332
EDGES = 2126
MAX_CORE = 26


def chung_lu(exponent: float, hubs: int, density: float, seed: int) -> nx.Graph:
    rng = random.Random(seed)
    raw = [(i + 1) ** (-1.0 / (exponent - 1.0)) for i in range(NODES)]
    scale = 2.0 * EDGES / sum(raw)
    weights = [w * scale for w in raw]
    total = sum(weights)
    g = nx.Graph()
    g.add_nodes_from(range(NODES))
    for u in range(hubs):
        for v in range(u + 1, hubs):
            if rng.random() < density:
                g.add_edge(u, v)
    for u in range(NODES):
        for v in range(u + 1, NODES):
            if rng.random() < min(1.0, weights[u] * weights[v] / total):
                g.add_edge(u, v)
    # Give every node at least one edge, attaching to a weight-biased partner.
    for u in range(NODES):
        if g.degree(u) == 0:
            v = rng.choices(range(NODES), weights=weights)[0]
            if v != u:
                g.add_edge(u, v)
    # Hit the edge count exactly: drop random tail-tail edges or add hub-biased ones.
    edges = sorted(g.edges())
    rng.shuffle(edges)
    for u, v in edges:
        if g.number_of_edges() <= EDGES:
            break
        if g.degree(u) > 1 and g.degree(v) > 1 and not (u < hubs and v < hubs):
            g.remove_edge(u, v)
    while g.number_of_edges() < EDGES:
        u, v = rng.choices(range(NODES), weights=weights, k=2)
        if u != v:
            g.add_edge(u, v)
    return g


def generate() -> nx.Graph:
    grid = itertools.product([2.2, 2.5, 2.8], [32, 34, 36, 38, 40], [0.7, 0.75, 0.8, 0.85], range(5))
    for exponent, hubs, density, seed in grid:
        g = chung_lu(exponent, hubs, density, seed)
        if g.number_of_edges() != EDGES or not nx.is_connected(g):
            continue
        if max(nx.core_number(g).values()) == MAX_CORE:
            return g
    raise SystemExit("no graph with the requested shape in the search grid")


def main() -> None:
    path = sys.argv[1] if len(sys.argv) > 1 else "data/usair_shape.txt"
    g = generate()
    with open(path, "w") as out:
        out.write(f"# synthetic USAir-shaped graph: {NODES} nodes, {EDGES} edges, max core {MAX_CORE}\n")
        for u, v in sorted(g.edges()):
            out.write(f"{u + 1} {v + 1}\n")


if __name__ == "__main__":
    main()
