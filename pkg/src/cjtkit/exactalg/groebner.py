"""Reduced Groebner bases over QQ by Buchberger's algorithm.

Meant for small certification problems only.  Pairs are processed in
normal-selection order (smallest lcm first) with the product criterion and the
Gebauer-Moeller chain criterion; a configurable pair limit turns runaway
computations into :class:`BudgetExceededError`.
"""

from __future__ import annotations

from typing import Sequence

from .poly import MultiPoly, order_key


class BudgetExceededError(RuntimeError):
    """The pair limit was reached; ``partial`` holds the basis so far."""

    def __init__(self, message, partial=None, pairs_processed=0):
        super().__init__(message)
        self.partial = partial or []
        self.pairs_processed = pairs_processed


def _lcm(a: tuple, b: tuple) -> tuple:
    return tuple(max(x, y) for x, y in zip(a, b))


def _divides(a: tuple, b: tuple) -> bool:
    return all(x <= y for x, y in zip(a, b))


def _lead(terms: dict, key):
    e = max(terms, key=key)
    return e, terms[e]


def reduce(f: MultiPoly, G: Sequence[MultiPoly], order: str = "degrevlex") -> MultiPoly:
    """Full normal form of ``f`` modulo ``G`` (remainder of multivariate division)."""
    key = order_key(order)
    leads = [(_lead(g.terms, key), g.terms) for g in G if g.terms]
    p = dict(f.terms)
    r: dict = {}
    while p:
        e, c = _lead(p, key)
        for (ge, gc), gt in leads:
            if _divides(ge, e):
                q = tuple(a - b for a, b in zip(e, ge))
                m = c / gc
                for h, d in gt.items():
                    k = tuple(a + b for a, b in zip(q, h))
                    v = p.get(k, 0) - m * d
                    if v:
                        p[k] = v
                    else:
                        p.pop(k, None)
                break
        else:
            r[e] = c
            del p[e]
    return MultiPoly._raw(f.variables, r)


def s_polynomial(f: MultiPoly, g: MultiPoly, order: str = "degrevlex") -> MultiPoly:
    key = order_key(order)
    fe, fc = _lead(f.terms, key)
    ge, gc = _lead(g.terms, key)
    m = _lcm(fe, ge)
    a = f.mul_term(tuple(x - y for x, y in zip(m, fe)), 1 / fc)
    b = g.mul_term(tuple(x - y for x, y in zip(m, ge)), 1 / gc)
    return a - b


def buchberger(gens: Sequence[MultiPoly], order: str = "degrevlex", max_pairs: int = 20000) -> list[MultiPoly]:
    """Reduced Groebner basis of the ideal generated by ``gens``.

    The unit ideal returns ``[1]`` and the zero ideal returns ``[]``.
    """
    key = order_key(order)
    gens = [g for g in gens if g.terms]
    if not gens:
        return []
    variables = gens[0].variables
    for g in gens:
        if g.variables != variables:
            raise ValueError("generators must share one variable list")

    G: list[MultiPoly] = []
    pairs: list[tuple[int, int]] = []

    def lm(i):
        return _lead(G[i].terms, key)[0]

    def add(h: MultiPoly):
        h = h.monic(order)
        G.append(h)
        k = len(G) - 1
        hk = lm(k)
        # Gebauer-Moeller style pruning of old pairs
        kept = []
        for i, j in pairs:
            m = _lcm(lm(i), lm(j))
            if (_divides(hk, m) and _lcm(lm(i), hk) != m and _lcm(lm(j), hk) != m):
                continue
            kept.append((i, j))
        pairs[:] = kept
        for i in range(k):
            if G[i] is None:
                continue
            pairs.append((i, k))

    for g in gens:
        h = reduce(g, [x for x in G if x is not None], order)
        if h.terms:
            if h.is_constant():
                return [MultiPoly.constant(variables, 1)]
            add(h)

    processed = 0
    while pairs:
        pairs.sort(key=lambda ij: key(_lcm(lm(ij[0]), lm(ij[1]))))
        i, j = pairs.pop(0)
        ei, ej = lm(i), lm(j)
        if all(min(a, b) == 0 for a, b in zip(ei, ej)):
            continue  # coprime leading monomials
        processed += 1
        if processed > max_pairs:
            raise BudgetExceededError(
                f"Buchberger pair limit {max_pairs} exceeded",
                partial=[g for g in G if g is not None],
                pairs_processed=processed - 1,
            )
        s = s_polynomial(G[i], G[j], order)
        h = reduce(s, [x for x in G if x is not None], order)
        if h.terms:
            if h.is_constant():
                return [MultiPoly.constant(variables, 1)]
            add(h)

    return _reduced(G, order)


def _reduced(G: Sequence[MultiPoly], order: str) -> list[MultiPoly]:
    key = order_key(order)
    G = [g.monic(order) for g in G if g.terms]
    # drop elements whose leading monomial is divisible by another one
    minimal = []
    leads = [_lead(g.terms, key)[0] for g in G]
    for i, g in enumerate(G):
        if any(j != i and _divides(leads[j], leads[i]) and (leads[j] != leads[i] or j < i)
               for j in range(len(G))):
            continue
        minimal.append(g)
    out = []
    for i, g in enumerate(minimal):
        rest = minimal[:i] + minimal[i + 1:]
        out.append(reduce(g, rest, order).monic(order))
    out.sort(key=lambda g: key(_lead(g.terms, key)[0]))
    return out


def is_groebner(G: Sequence[MultiPoly], order: str = "degrevlex") -> bool:
    """Buchberger's criterion: every S-polynomial reduces to zero."""
    G = [g for g in G if g.terms]
    for i in range(len(G)):
        for j in range(i + 1, len(G)):
            if reduce(s_polynomial(G[i], G[j], order), G, order).terms:
                return False
    return True


def in_ideal(f: MultiPoly, G: Sequence[MultiPoly], order: str = "degrevlex") -> bool:
    """Membership test against a Groebner basis ``G``."""
    return not reduce(f, G, order).terms
