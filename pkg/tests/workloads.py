"""Random quivers, weights and modules shared by the property tests."""

import random

from cjtkit import Weight, enumerate_flow_points, random_rep
from cjtkit.quiver import random_quiver


def divergence(q, r):
    """Weight whose flow polytope contains the arrow labelling ``r``."""
    sigma = {v: 0 for v in q.vertices}
    for a, x in zip(q.arrows, r):
        sigma[a.tail] += x
        sigma[a.head] -= x
    return sigma


def random_setup(rng: random.Random, n_vertices=(2, 4), n_arrows=(1, 4), max_length=None, max_label=1):
    """A random quiver with a weight admitting a flow through every arrow.

    Every arrow carries a positive label of some flow point, so each phi_a is a
    nonzero polynomial and points with all coordinates nonzero lie in F_inj.
    """
    while True:
        q = random_quiver(rng, rng.randint(*n_vertices), rng.randint(*n_arrows), max_length)
        if not q.arrows:
            continue
        r = [rng.randint(1, max_label) for _ in q.arrows]
        sigma = divergence(q, r)
        if not any(sigma.values()):
            continue
        return q, enumerate_flow_points(q, Weight.of(q, sigma))


def random_dims(rng: random.Random, q, total):
    dims = {v: 0 for v in q.vertices}
    for _ in range(total):
        dims[rng.choice(q.vertices)] += 1
    return dims


def random_module(rng: random.Random, q, max_total, bound=2):
    dims = random_dims(rng, q, rng.randint(1, max_total))
    return random_rep(q, dims, rng.randrange(2**32), bound)


def small_point(rng: random.Random, fb, lo=-3, hi=3):
    """Point with small integer coordinates, retried until semistable."""
    from cjtkit import is_semistable
    while True:
        pt = {a: rng.randint(lo, hi) for a in fb.variables}
        if is_semistable(fb, pt):
            return pt
