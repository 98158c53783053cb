#!/usr/bin/env python3
"""Generate the synthetic road-network stand-ins under data/.

The benchmark datasets used by the harness (Europe road network, Minnesota
road network, City of Oldenburg) are distributed by third parties and are
not bundled here. This script produces deterministic stand-ins with the same
node and edge counts and a similar sparse, mostly-degree-2 shape: a spanning
forest (one large component plus optional small ones) topped up with random
chord edges, uniform weights in [10, 300].

Usage: python3 tools/make_synthetic_dataset.py  (writes into data/)
"""

import random
from pathlib import Path

OUT = Path(__file__).resolve().parent.parent / "data"


def make_edges(n, m, components, rng):
    """Random connected-per-component edge set: forest + chords."""
    sizes = list(components)
    assert sum(sizes) == n
    offsets = []
    base = 0
    for s in sizes:
        offsets.append(base)
        base += s

    edges = []
    seen = set()

    def add(u, v, w):
        key = (min(u, v), max(u, v))
        if u == v or key in seen:
            return False
        seen.add(key)
        edges.append((u, v, w))
        return True

    def weight():
        return round(rng.uniform(10.0, 300.0), 1)

    # Spanning tree per component: node i attaches to a random earlier node.
    for base, size in zip(offsets, sizes):
        for i in range(1, size):
            j = rng.randrange(i)
            add(base + i, base + j, weight())

    # Chords only inside the largest component, keeping small ones tree-like.
    big_base = offsets[0]
    big_size = sizes[0]
    while len(edges) < m:
        u = big_base + rng.randrange(big_size)
        v = big_base + rng.randrange(big_size)
        add(u, v, weight())
    return edges


def write_mtx_pattern(path, n, edges):
    # The real networkrepository road files are pattern matrices (no
    # weights; every edge loads as 1.0). Mirror that exactly.
    with open(path, "w") as f:
        f.write("%%MatrixMarket matrix coordinate pattern symmetric\n")
        f.write("% synthetic road-network stand-in, see data/README.md\n")
        f.write(f"{n} {n} {len(edges)}\n")
        for u, v, _ in edges:
            f.write(f"{u + 1} {v + 1}\n")


def write_oldenburg(path, edges):
    with open(path, "w") as f:
        for eid, (u, v, w) in enumerate(edges):
            f.write(f"{eid} {u} {v} {w}\n")


def main():
    OUT.mkdir(exist_ok=True)

    # Europe road network stand-in: 1174 nodes / 1417 edges, one big
    # component plus two small ones (the loader and the selectors must cope
    # with unreachable POIs).
    rng = random.Random(20240501)
    edges = make_edges(1174, 1417, [1150, 14, 10], rng)
    write_mtx_pattern(OUT / "erd_synthetic.mtx", 1174, edges)

    # Minnesota road network stand-in: 2642 nodes / 3303 edges, connected.
    rng = random.Random(20240502)
    edges = make_edges(2642, 3303, [2642], rng)
    write_mtx_pattern(OUT / "mnr_synthetic.mtx", 2642, edges)

    # City of Oldenburg stand-in: 6105 nodes / 7035 edges, connected,
    # in the `edge_id u v w` format of the original distribution.
    rng = random.Random(20240503)
    edges = make_edges(6105, 7035, [6105], rng)
    write_oldenburg(OUT / "oldenburg_synthetic.txt", edges)


if __name__ == "__main__":
    main()
