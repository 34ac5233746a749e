"""Small builders shared by the test modules."""

from __future__ import annotations

import numpy as np

from tmncell.network import TMNetwork, build_network


def net_from_rows(vertices, arcs, sample_time_s=1.0) -> TMNetwork:
    """Build a network from terse tuples.

    vertices: (id, label, materials, initial_stock_mg)
    arcs: (id, tail, head, amount_mg, departs, arrives) or the same with
    a trailing materials tuple.
    """
    vrows = [
        {"id": vid, "label": label, "materials": list(mats), "initial_stock_mg": stock}
        for vid, label, mats, stock in vertices
    ]
    arows = []
    for row in arcs:
        if len(row) == 6:
            aid, tail, head, amount, departs, arrives = row
            mats = ()
        else:
            aid, tail, head, amount, departs, arrives, mats = row
        arows.append({
            "id": aid, "tail": tail, "head": head, "amount_mg": amount,
            "departs": departs, "arrives": arrives, "materials": list(mats),
        })
    return build_network({
        "sample_time_s": sample_time_s,
        "vertices": vrows,
        "arcs": arows,
    })


def two_vertex_net(amount=500, departs=2, arrives=5, stock=1000,
                   sample_time_s=1.0) -> TMNetwork:
    """Minimal stock -> sink network with one scheduled transfer."""
    return net_from_rows(
        vertices=[
            (1, "source", ("m",), stock),
            (2, "sink", ("m",), 0),
        ],
        arcs=[(3, 1, 2, amount, departs, arrives, ("m",))],
        sample_time_s=sample_time_s,
    )


def shift_rows(arcs, k):
    """Translate every schedule by k samples."""
    return [(aid, t, h, amt, d + k, a + k, mats)
            for aid, t, h, amt, d, a, mats in arcs]


def renumber_arcs(arcs, n_v):
    """Reassign arc ids to the contiguous block right after the vertices."""
    return [(n_v + 1 + k, t, h, amt, d, a, mats)
            for k, (_, t, h, amt, d, a, mats) in enumerate(arcs)]


def random_feasible_rows(rng: np.random.Generator):
    """Random net whose vertices are funded to cover their out-arcs,
    so every schedule is feasible regardless of impulse ordering."""
    n_v = int(rng.integers(2, 6))
    pairs = [(t, h) for t in range(1, n_v + 1) for h in range(1, n_v + 1) if t != h]
    rng.shuffle(pairs)
    n_a = int(rng.integers(1, min(len(pairs), 6) + 1))
    arcs = []
    out_total = {v: 0 for v in range(1, n_v + 1)}
    for k, (tail, head) in enumerate(pairs[:n_a]):
        amount = int(rng.integers(0, 5001))
        departs = int(rng.integers(0, 21))
        arrives = departs + int(rng.integers(1, 11))
        arcs.append((n_v + 1 + k, tail, head, amount, departs, arrives, ("m",)))
        out_total[tail] += amount
    vertices = [
        (v, f"v{v}", ("m",), out_total[v] + int(rng.integers(0, 100)))
        for v in range(1, n_v + 1)
    ]
    return vertices, arcs


def processor_star_rows(rng: np.random.Generator):
    """One feed into vertex 2 and 1-3 outputs, with random schedules."""
    feed_arrives = int(rng.integers(1, 15))
    n_out = int(rng.integers(1, 4))
    arcs = [(0, 1, 2, 300, int(rng.integers(0, feed_arrives)),
             feed_arrives, ("m",))]
    for j in range(n_out):
        departs = int(rng.integers(feed_arrives, feed_arrives + 30))
        arcs.append((0, 2, 3 + j, 100, departs,
                     departs + int(rng.integers(1, 6)), ("m",)))
    vertices = [(1, "stock", ("m",), 1000), (2, "proc", ("m",), 1000)]
    vertices += [(3 + j, f"bin{j}", ("m",), 0) for j in range(n_out)]
    return vertices, renumber_arcs(arcs, len(vertices))
