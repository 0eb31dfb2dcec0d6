"""Instance builders: the three-vertex parallel-arc example and random networks."""

from __future__ import annotations

import math
import random
from fractions import Fraction

from .network import Arc, Network


def parallel_example(b: int) -> Network:
    """Vertices s=1, v=2, t=3; ``b`` unit arcs s->v (ids 1..b) then two
    arcs v->t of capacity ``b`` (ids b+1, b+2)."""
    if b < 1:
        raise ValueError("b must be positive")
    arcs = [Arc(1, 2, Fraction(1))] * b + [Arc(2, 3, Fraction(b))] * 2
    return Network(3, tuple(arcs), 1, 3)


def random_network(
    rng: random.Random, max_n: int = 8, max_m: int = 14, max_cap: int = 10
) -> Network:
    """Random digraph with source 1 and sink n; parallel arcs may occur.

    Three quarters of the arcs are drawn forward (low id to high id) so that most
    instances carry positive flow.
    """
    n = rng.randint(2, max_n)
    m = rng.randint(1, max_m)
    arcs = []
    for _ in range(m):
        u, v = rng.sample(range(1, n + 1), 2)
        if rng.random() < 0.75 and u > v:
            u, v = v, u
        arcs.append(Arc(u, v, Fraction(rng.randint(1, max_cap))))
    return Network(n, tuple(arcs), 1, n)


def random_suite(
    count: int, seed: int = 0, max_scenarios: int = 400, ks=(1, 2, 3)
) -> list[tuple[Network, int]]:
    """``count`` (network, k) pairs with k in ``ks``, k <= m and C(m,k) bounded."""
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        net = random_network(rng)
        k = rng.choice(ks)
        if k <= net.m and math.comb(net.m, k) <= max_scenarios:
            out.append((net, k))
    return out
