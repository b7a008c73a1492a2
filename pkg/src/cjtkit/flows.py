"""Weights, lattice points of the flow polytope, and the coefficients phi.

A flow point ``r`` assigns a nonnegative integer to every arrow such that at
each vertex the outflow minus the inflow equals the weight.  The monomials
``Y_r`` span the weight space of semi-invariants; a point ``alpha`` is
semistable when one of them is nonzero at ``alpha``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from functools import cached_property
from typing import Mapping, Sequence

from .exactalg import QQ, MultiPoly
from .quiver import Path, Quiver, loewy_length, gamma_in


class WeightError(ValueError):
    """The weight is not a nonzero integer vector summing to zero."""


class EmptySemistableLocus(ValueError):
    """No flow points: the semistable locus is empty."""


class SamplingBudgetError(RuntimeError):
    """Rejection sampling did not find a point of the requested locus."""


@dataclass(frozen=True)
class Weight:
    sigma: tuple  # ((vertex, value), ...) in quiver vertex order

    @classmethod
    def of(cls, q: Quiver, values) -> "Weight":
        if isinstance(values, Weight):
            return values
        if isinstance(values, Mapping):
            extra = set(map(str, values)) - set(q.vertices)
            if extra:
                raise WeightError(f"weight given on unknown vertices {sorted(extra)}")
            vals = {str(k): v for k, v in values.items()}
            seq = [vals.get(v, 0) for v in q.vertices]
        else:
            seq = list(values)
            if len(seq) != len(q.vertices):
                raise WeightError("weight length does not match the vertex count")
        out = []
        for v, s in zip(q.vertices, seq):
            if isinstance(s, bool) or not isinstance(s, int):
                raise WeightError(f"weight at {v} must be an integer")
            out.append((v, s))
        if sum(s for _, s in out) != 0:
            raise WeightError("weight entries must sum to zero")
        if not any(s for _, s in out):
            raise WeightError("weight must be nonzero")
        return cls(tuple(out))

    def __getitem__(self, v):
        return dict(self.sigma)[v]

    def as_dict(self) -> dict:
        return dict(self.sigma)


def kronecker_weight(q: Quiver) -> Weight:
    """The weight (1, -1) on the Kronecker quiver."""
    return Weight.of(q, {"1": 1, "2": -1})


class FlowBasis:
    """The complete set I of flow points for ``(q, weight)``.

    ``points`` are tuples indexed like ``q.arrows``, sorted in descending
    lexicographic order.
    """

    def __init__(self, q: Quiver, weight: Weight, points: Sequence[tuple], bound: int):
        self.quiver = q
        self.weight = weight
        self.points = tuple(points)
        self.bound = bound

    def __len__(self):
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    @property
    def variables(self) -> tuple:
        return self.quiver.arrow_ids

    @cached_property
    def loewy_length(self) -> int:
        return loewy_length(self.quiver)

    @cached_property
    def monomials(self) -> list:
        """``Y_r`` for each flow point, as polynomials in the arrow variables."""
        return [MultiPoly(self.variables, {r: 1}) for r in self.points]

    @cached_property
    def phi_polys(self) -> dict:
        """``phi_a = sum_r r_a Y_r`` for each arrow (arrow-first assembly)."""
        out = {}
        for k, a in enumerate(self.quiver.arrows):
            out[a.id] = MultiPoly(self.variables, {r: r[k] for r in self.points if r[k]})
        return out

    def phi_polys_by_monomial(self) -> dict:
        """Same polynomials assembled monomial by monomial (independent route).

        ``T_alpha = sum_r Y_r X_r`` with ``X_r`` the sum over arrows of ``r_a X_a``
        collected term by term.
        """
        acc = {a: {} for a in self.variables}
        for r, y in zip(self.points, self.monomials):
            for (exp, c) in y.terms.items():
                for aid, mult in zip(self.variables, r):
                    for _ in range(mult):
                        acc[aid][exp] = acc[aid].get(exp, 0) + c
        return {a: MultiPoly(self.variables, t) for a, t in acc.items()}

    def path_poly(self, p: Path) -> MultiPoly:
        out = MultiPoly.constant(self.variables, 1)
        for a in p.arrows:
            out = out * self.phi_polys[a.id]
        return out

    def to_json(self) -> dict:
        return {
            "weight": self.weight.as_dict(),
            "bound": self.bound,
            "count": len(self.points),
            "points": [dict(zip(self.variables, r)) for r in self.points],
        }


def enumerate_flow_points(q: Quiver, w) -> FlowBasis:
    """All nonnegative integer flows with divergence ``w``.

    Vertices are visited in topological order; when a vertex is reached its
    inflow is already fixed, so its outflow total is forced and is split over
    the outgoing arrows in every possible way.  No arc can carry more than the
    total positive divergence, which bounds the search.
    """
    w = Weight.of(q, w)
    sigma = w.as_dict()
    bound = sum(max(s, 0) for s in sigma.values())
    idx = q.arrow_index
    outs = {v: [idx[a.id] for a in q.out_arrows(v)] for v in q.vertices}
    ins = {v: [idx[a.id] for a in q.in_arrows(v)] for v in q.vertices}
    order = q.order
    r = [0] * len(q.arrows)
    found = []

    def compositions(total, parts):
        if parts == 1:
            if total <= bound:
                yield (total,)
            return
        for first in range(min(total, bound), -1, -1):
            for rest in compositions(total - first, parts - 1):
                yield (first,) + rest

    def visit(k):
        if k == len(order):
            found.append(tuple(r))
            return
        v = order[k]
        need = sigma[v] + sum(r[i] for i in ins[v])
        if need < 0:
            return
        if not outs[v]:
            if need == 0:
                visit(k + 1)
            return
        for split in compositions(need, len(outs[v])):
            for i, x in zip(outs[v], split):
                r[i] = x
            visit(k + 1)
        for i in outs[v]:
            r[i] = 0

    visit(0)
    found = sorted(set(found), reverse=True)
    for pt in found:  # re-verify the divergence equations
        for v in q.vertices:
            div = sum(pt[i] for i in outs[v]) - sum(pt[i] for i in ins[v])
            if div != sigma[v] or any(x < 0 or x > bound for x in pt):
                raise AssertionError("flow enumeration produced an invalid point")
    if not found:
        raise EmptySemistableLocus("no flow points: the semistable locus is empty")
    return FlowBasis(q, w, found, bound)


# -- evaluation -----------------------------------------------------------------


def eval_point(fb: FlowBasis, alpha, field=QQ) -> dict:
    """Normalize ``alpha`` (sequence in arrow order or mapping) to a dict over ``field``."""
    ids = fb.variables
    if isinstance(alpha, Mapping):
        missing = [a for a in ids if a not in alpha]
        if missing:
            raise ValueError(f"point does not assign arrows {missing}")
        extra = set(alpha) - set(ids)
        if extra:
            raise ValueError(f"point assigns unknown arrows {sorted(extra)}")
        return {a: field(alpha[a]) for a in ids}
    alpha = list(alpha)
    if len(alpha) != len(ids):
        raise ValueError(f"point has {len(alpha)} coordinates, expected {len(ids)}")
    return {a: field(x) for a, x in zip(ids, alpha)}


def monomial_values(fb: FlowBasis, alpha, field=QQ) -> list:
    pt = eval_point(fb, alpha, field)
    return [y.evaluate(pt, field) for y in fb.monomials]


def is_semistable(fb: FlowBasis, alpha, field=QQ) -> bool:
    return any(v != 0 for v in monomial_values(fb, alpha, field))


def phi_values(fb: FlowBasis, alpha, field=QQ) -> dict:
    pt = eval_point(fb, alpha, field)
    return {a: f.evaluate(pt, field) for a, f in fb.phi_polys.items()}


def phi_arrow(fb: FlowBasis, alpha, a: str, field=QQ):
    pt = eval_point(fb, alpha, field)
    return fb.phi_polys[a].evaluate(pt, field)


def _path_value(phis: dict, p: Path, field):
    out = field.one
    for a in p.arrows:
        out = out * phis[a.id]
    p_ = getattr(field, "p", None)
    return out % p_ if p_ else out


def phi_path(fb: FlowBasis, alpha, path: Path, field=QQ):
    """Product of the arrow coefficients along ``path``; 1 for trivial paths."""
    return _path_value(phi_values(fb, alpha, field), path, field)


def finj_failures(fb: FlowBasis, alpha, field=QQ) -> list:
    """Pairs ``(l, y)`` where every length-l path into y has zero coefficient."""
    phis = phi_values(fb, alpha, field)
    q = fb.quiver
    bad = []
    for l in range(1, fb.loewy_length):
        for y in sorted(gamma_in(q, l)):
            if not any(_path_value(phis, p, field) != 0 for p in q.paths(l) if p.end == y):
                bad.append((l, y))
    return bad


def in_F_inj(fb: FlowBasis, alpha, field=QQ) -> bool:
    return not finj_failures(fb, alpha, field)


def in_V_inj(fb: FlowBasis, alpha, field=QQ) -> bool:
    return is_semistable(fb, alpha, field) and in_F_inj(fb, alpha, field)


# -- sampling -------------------------------------------------------------------


def _random_value(field, rng):
    return field.random_nonzero(rng)


def _dense_point(fb, rng, field):
    return {a: _random_value(field, rng) for a in fb.variables}


def _support_point(fb, rng, field):
    r = rng.choice(fb.points)
    return {a: (_random_value(field, rng) if r[k] else field.zero) for k, a in enumerate(fb.variables)}


def sample_semistable(fb: FlowBasis, strategy: str, seed: int, count: int, field=QQ,
                      budget: int = 1000) -> list:
    """``count`` semistable points drawn with the given strategy.

    ``dense``: every coordinate random nonzero.  ``support``: zero outside the
    support of a randomly chosen flow point.  ``finj``: rejection sampling from
    a mix of the two until the point lies in F_inj; ``budget`` bounds the
    number of rejected draws.
    """
    if not fb.points:
        raise EmptySemistableLocus("no flow points")
    rng = random.Random(seed)
    out = []
    rejected = 0
    while len(out) < count:
        if strategy == "dense":
            pt = _dense_point(fb, rng, field)
        elif strategy == "support":
            pt = _support_point(fb, rng, field)
        elif strategy == "finj":
            pt = _support_point(fb, rng, field) if rng.random() < 0.5 else _dense_point(fb, rng, field)
            if not in_F_inj(fb, pt, field):
                rejected += 1
                if rejected > budget:
                    raise SamplingBudgetError(
                        f"no point of F_inj found after {budget} rejections; V_inj may be empty")
                continue
        else:
            raise ValueError(f"unknown sampling strategy {strategy!r}")
        if not is_semistable(fb, pt, field):
            # cannot happen for these strategies over a field, kept as a guard
            rejected += 1
            if rejected > budget:
                raise SamplingBudgetError("sampler keeps producing unstable points")
            continue
        out.append(pt)
    return out
