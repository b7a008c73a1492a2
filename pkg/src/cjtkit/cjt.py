"""Deciding constant Jordan type on a locus of semistable points.

A negative answer is always certified by an exact witness: two points of the
locus (with rational coordinates) whose rank profiles differ, recomputed over
QQ.  A positive answer from sampling is probabilistic; for small modules the
generic ranks can additionally be certified on the whole semistable locus by
a Groebner-basis computation (Rabinowitsch trick).
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from math import comb
from typing import Callable

from .exactalg import DEFAULT_PRIME, GF, QQ, BudgetExceededError, MultiPoly, buchberger, reduce
from .flows import (
    FlowBasis,
    eval_point,
    in_V_inj,
    is_semistable,
)
from .jordan import JordanType, RankProfile, profile_at, schwartz_zippel_bound
from .quiver import Representation


class LocusEmptyError(RuntimeError):
    """The locus sampler found no point."""


# -- loci ---------------------------------------------------------------------------

DENSE_BOUND = 10**6
SMALL_BOUND = 5


def _dense_int_point(fb: FlowBasis, rng: random.Random) -> dict:
    return {a: Fraction(rng.randint(1, DENSE_BOUND)) for a in fb.variables}


@dataclass(frozen=True)
class Locus:
    """A locus inside the semistable points: membership test plus sampler.

    ``predicate(fb, point, field)`` decides membership; ``sampler(fb, rng)``
    proposes points with rational coordinates (proposals failing the
    predicate are rejected).
    """

    kind: str
    predicate: Callable
    sampler: Callable = _dense_int_point

    def contains(self, fb: FlowBasis, point, field=QQ) -> bool:
        return bool(self.predicate(fb, point, field))

    def sample(self, fb: FlowBasis, rng: random.Random, count: int, field=QQ, budget: int = 1000) -> list:
        out, rejected = [], 0
        while len(out) < count:
            pt = self.sampler(fb, rng)
            if self.contains(fb, pt, field):
                out.append(pt)
            else:
                rejected += 1
                if rejected > budget:
                    raise LocusEmptyError(
                        f"no point of locus {self.kind!r} found after {budget} rejected proposals")
        return out


def full_semistable() -> Locus:
    return Locus("v", is_semistable)


def v_inj() -> Locus:
    return Locus("vinj", in_V_inj)


def custom_locus(predicate: Callable, sampler: Callable | None = None, name: str = "custom") -> Locus:
    """A locus given by a predicate; membership is intersected with semistability."""

    def pred(fb, pt, field):
        return is_semistable(fb, pt, field) and predicate(fb, pt, field)

    return Locus(name, pred, sampler or _dense_int_point)


def locus_by_name(name: str) -> Locus:
    if name in ("v", "V", "semistable"):
        return full_semistable()
    if name in ("vinj", "V_inj"):
        return v_inj()
    raise ValueError(f"unknown locus {name!r}; expected 'v' or 'vinj'")


# -- verdicts ---------------------------------------------------------------------


def point_json(point: dict) -> dict:
    return {a: QQ.to_json(Fraction(v)) for a, v in point.items()}


@dataclass
class ConstantProbable:
    jtype: JordanType
    samples_used: int
    failure_bound: Fraction
    generic_profile: RankProfile
    refusals: list = dc_field(default_factory=list)
    kind: str = "ConstantProbable"

    @property
    def is_constant(self):
        return True

    def to_json(self) -> dict:
        return {
            "verdict": self.kind,
            "jtype": self.jtype.to_json(),
            "generic_profile": self.generic_profile.to_json(),
            "samples_used": self.samples_used,
            "failure_bound": str(self.failure_bound),
            "certification_refusals": [r.to_json() for r in self.refusals],
        }


@dataclass
class NotConstant:
    witness: dict
    witness_profile: RankProfile
    generic_profile: RankProfile
    reference: dict
    stage: str
    kind: str = "NotConstant"

    @property
    def is_constant(self):
        return False

    @property
    def witness_jtype(self) -> JordanType:
        return self.witness_profile.jordan_type()

    @property
    def generic_jtype(self) -> JordanType:
        return self.generic_profile.jordan_type()

    def to_json(self) -> dict:
        return {
            "verdict": self.kind,
            "witness": point_json(self.witness),
            "witness_profile": self.witness_profile.to_json(),
            "witness_jtype": self.witness_jtype.to_json(),
            "generic_profile": self.generic_profile.to_json(),
            "generic_jtype": self.generic_jtype.to_json(),
            "reference": point_json(self.reference),
            "stage": self.stage,
        }


@dataclass
class RankCertificate:
    """Proof that rank of ``alpha_M^i`` is ``generic_rank`` on the semistable locus."""

    i: int
    generic_rank: int
    variables: tuple
    minors: list  # MultiPoly generators of the minor ideal
    bases: list = dc_field(default_factory=list)  # (flow point, reduced Groebner basis)

    def to_json(self) -> dict:
        return {
            "i": self.i,
            "generic_rank": self.generic_rank,
            "minor_count": len(self.minors),
            "minors": [str(m) for m in self.minors[:20]],
            "saturations": [{"flow_point": list(r), "groebner_basis": [str(g) for g in G]}
                            for r, G in self.bases],
        }


@dataclass
class CertificationRefusal:
    i: int
    reason: str
    detail: str = ""
    kind: str = "Refusal"

    def to_json(self) -> dict:
        return {"i": self.i, "refusal": self.reason, "detail": self.detail}


@dataclass
class CertifiedConstant:
    jtype: JordanType
    certificates: list
    kind: str = "CertifiedConstant"

    @property
    def is_constant(self):
        return True

    def to_json(self) -> dict:
        return {
            "verdict": self.kind,
            "jtype": self.jtype.to_json(),
            "certificates": [c.to_json() for c in self.certificates],
        }


@dataclass(frozen=True)
class Budget:
    per_stratum: int = 200
    dense: int = 1000
    generic: int = 20
    max_strata: int = 256
    coord_bound: int = SMALL_BOUND
    rejection: int = 1000


# -- witness hunting -------------------------------------------------------------------


def coordinate_strata(fb: FlowBasis, limit: int = 256) -> list:
    """Nonempty sets of arrows that can vanish while some ``Y_r`` stays nonzero.

    These are the nonempty subsets of complements of flow supports, ordered by
    size and then lexicographically.
    """
    ids = fb.variables
    maximal = set()
    for r in fb.points:
        maximal.add(frozenset(a for a, x in zip(ids, r) if not x))
    strata = set()
    for Z in maximal:
        zs = sorted(Z, key=ids.index)
        for k in range(1, len(zs) + 1):
            for sub in itertools.combinations(zs, k):
                strata.add(sub)
                if len(strata) > 50 * limit:
                    break
    ordered = sorted(strata, key=lambda s: (len(s), [ids.index(a) for a in s]))
    return ordered[:limit]


def _small(rng, bound):
    v = 0
    while v == 0:
        v = rng.randint(-bound, bound)
    return Fraction(v)


def _stratum_points(fb, Z, rng, count, bound):
    Z = set(Z)
    for _ in range(count):
        yield {a: (Fraction(0) if a in Z else _small(rng, bound)) for a in fb.variables}


def _hypersurface_points(fb, rng, count, bound):
    """Points on ``phi_a = 0``, solving for one variable in which phi_a is linear."""
    targets = []
    for a, f in fb.phi_polys.items():
        for k, x in enumerate(fb.variables):
            if f.degree_in(x) == 1:
                A = {e[:k] + (0,) + e[k + 1:]: c for e, c in f.terms.items() if e[k] == 1}
                B = {e: c for e, c in f.terms.items() if e[k] == 0}
                targets.append((a, x, MultiPoly(fb.variables, A), MultiPoly(fb.variables, B)))
    if not targets:
        return
    produced = 0
    attempts = 0
    while produced < count and attempts < 4 * count:
        attempts += 1
        a, x, A, B = targets[produced % len(targets)] if attempts <= count else rng.choice(targets)
        pt = {v: _small(rng, bound) for v in fb.variables}
        pt[x] = Fraction(0)
        den = A.evaluate(pt)
        if not den:
            continue
        pt[x] = -B.evaluate(pt) / den
        produced += 1
        yield pt


def _candidates(fb: FlowBasis, budget: Budget, seed):
    """Candidate points in deterministic order: strata, hypersurfaces, dense."""
    for idx, Z in enumerate(coordinate_strata(fb, budget.max_strata)):
        rng = random.Random(f"{seed}:stratum:{idx}")
        for pt in _stratum_points(fb, Z, rng, budget.per_stratum, budget.coord_bound):
            yield "stratum " + ",".join(Z), pt
    rng = random.Random(f"{seed}:hypersurface")
    for pt in _hypersurface_points(fb, rng, budget.per_stratum, budget.coord_bound):
        yield "hypersurface", pt
    rng = random.Random(f"{seed}:dense")
    for _ in range(budget.dense):
        yield "dense", {a: _small(rng, budget.coord_bound) for a in fb.variables}


def _working_field(field):
    return field or GF(DEFAULT_PRIME)


def _reduce_ok(pt, field) -> bool:
    """A rational point can be used over ``field`` (no denominator divisible by p)."""
    p = getattr(field, "p", None)
    return p is None or all(Fraction(v).denominator % p for v in pt.values())


def _phase1(M, fb, locus, budget, seed, field):
    rng = random.Random(f"{seed}:generic")
    pts = locus.sample(fb, rng, budget.generic, QQ, budget.rejection)
    best, ref, ref_prof = None, None, None
    for pt in pts:
        prof = profile_at(M, fb, pt, field)
        if best is None:
            best = prof.ranks
        else:
            best = tuple(max(x, y) for x, y in zip(best, prof.ranks))
        if prof.ranks == best:
            ref, ref_prof = pt, prof
    generic = RankProfile(best)
    if ref_prof.ranks != generic.ranks:
        # no single sample realizes the componentwise maximum: the samples differ
        ref = next(pt for pt in pts if profile_at(M, fb, pt, field) != ref_prof)
    return generic, ref, pts


def _verified_pair(M, fb, locus, a, b):
    """Exact QQ check that ``a`` and ``b`` are in the locus with different profiles."""
    if not (locus.contains(fb, a, QQ) and locus.contains(fb, b, QQ)):
        return None
    pa, pb = profile_at(M, fb, a, QQ), profile_at(M, fb, b, QQ)
    if pa == pb:
        return None
    if pb.dominated_by(pa):
        a, b, pa, pb = b, a, pb, pa
    return a, pa, pb, b


def find_witness(M: Representation, fb: FlowBasis, locus: Locus | None = None, budget: Budget | None = None,
                 seed=0, field=None):
    """First locus point whose profile differs from the generic one, or None.

    Returns ``(NotConstant | None, generic_profile, candidates_examined)``.
    """
    locus = locus or full_semistable()
    budget = budget or Budget()
    field = _working_field(field)
    generic, ref, pts = _phase1(M, fb, locus, budget, seed, field)
    # the generic samples themselves may already disagree
    for pt in pts:
        prof = profile_at(M, fb, pt, field)
        if prof != generic:
            pair = _verified_pair(M, fb, locus, pt, ref)
            if pair:
                w, pw, pg, r = pair
                return NotConstant(w, pw, pg, r, "generic sampling"), generic, len(pts)
    examined = len(pts)
    for stage, pt in _candidates(fb, budget, seed):
        if not _reduce_ok(pt, field) or not locus.contains(fb, pt, field):
            continue
        examined += 1
        prof = profile_at(M, fb, pt, field)
        if prof == generic:
            continue
        pair = _verified_pair(M, fb, locus, pt, ref)
        if pair:
            w, pw, pg, r = pair
            return NotConstant(w, pw, pg, r, stage), generic, examined
        # a profile over GF(p) that does not survive over QQ is a characteristic artifact
    return None, generic, examined


def check_constant_jordan_type(M: Representation, fb: FlowBasis, locus: Locus | None = None,
                               budget: Budget | None = None, seed=0, field=None, certify: bool = False):
    """Decide whether the Jordan type of ``alpha_M`` is the same at all locus points.

    The failure bound of a ``ConstantProbable`` verdict bounds the probability
    that the generic profile was misestimated by the random samples; it does
    not quantify how likely the structured search was to miss a lower
    stratum.  With ``certify=True`` on the full semistable locus, small
    instances may be upgraded to ``CertifiedConstant``.
    """
    locus = locus or full_semistable()
    budget = budget or Budget()
    wf = _working_field(field)
    witness, generic, examined = find_witness(M, fb, locus, budget, seed, wf)
    if witness is not None:
        return witness
    bound = schwartz_zippel_bound(generic, fb, budget.generic, QQ)
    verdict = ConstantProbable(generic.jordan_type(), examined, bound, generic)
    if certify and locus.kind == "v":
        certs = []
        for i in range(1, fb.loewy_length):
            c = certify_constant_rank(M, fb, i)
            if not isinstance(c, RankCertificate):
                verdict.refusals.append(c)
                return verdict
            if c.generic_rank != generic.ranks[i]:
                raise AssertionError("sampled and symbolic generic ranks disagree")
            certs.append(c)
        return CertifiedConstant(generic.jordan_type(), certs)
    return verdict


def verify_witness(M: Representation, fb: FlowBasis, verdict: NotConstant, locus: Locus | None = None) -> bool:
    """Independent exact recomputation of a NotConstant verdict."""
    locus = locus or full_semistable()
    w = eval_point(fb, verdict.witness, QQ)
    r = eval_point(fb, verdict.reference, QQ)
    if not (locus.contains(fb, w, QQ) and locus.contains(fb, r, QQ)):
        return False
    pw, pr = profile_at(M, fb, w, QQ), profile_at(M, fb, r, QQ)
    return (pw == verdict.witness_profile and pr == verdict.generic_profile
            and pw != pr and any(x < y for x, y in zip(pw.ranks, pr.ranks)))


@dataclass
class VMaxReport:
    generic_profile: RankProfile
    non_maximal: list  # (point, profile) pairs

    def to_json(self) -> dict:
        return {
            "generic_profile": self.generic_profile.to_json(),
            "non_maximal": [{"point": point_json(p), "profile": prof.to_json()} for p, prof in self.non_maximal],
        }


def v_max(M: Representation, fb: FlowBasis, samples: int = 20, seed=0, budget: Budget | None = None,
          field=None, locus: Locus | None = None) -> VMaxReport:
    """Generic profile plus every examined point where some rank is not maximal.

    The listed points under-approximate the complement of the max-rank locus.
    """
    locus = locus or full_semistable()
    budget = budget or Budget(per_stratum=20, dense=100)
    budget = Budget(budget.per_stratum, budget.dense, samples, budget.max_strata, budget.coord_bound,
                    budget.rejection)
    field = _working_field(field)
    generic, _, pts = _phase1(M, fb, locus, budget, seed, field)
    found = []
    seen = set()
    cands = [("generic", p) for p in pts] + list(_candidates(fb, budget, seed))
    for _, pt in cands:
        key = tuple(pt[a] for a in fb.variables)
        if key in seen or not _reduce_ok(pt, field) or not locus.contains(fb, pt, field):
            continue
        seen.add(key)
        if profile_at(M, fb, pt, field) != generic:
            prof = profile_at(M, fb, pt, QQ)
            if prof != generic and prof.dominated_by(generic):
                found.append((pt, prof))
    return VMaxReport(generic, found)


# -- certification --------------------------------------------------------------


def symbolic_operator(M: Representation, fb: FlowBasis) -> list:
    """``alpha_M`` as a dense matrix of polynomials in the arrow variables."""
    vars_ = fb.variables
    n = M.total_dim
    zero = MultiPoly(vars_)
    A = [[zero] * n for _ in range(n)]
    for a in M.quiver.arrows:
        phi = fb.phi_polys[a.id]
        r0, c0 = M.offsets[a.head], M.offsets[a.tail]
        for i, row in enumerate(M.maps[a.id].sparse_rows()):
            for j, v in row.items():
                A[r0 + i][c0 + j] = A[r0 + i][c0 + j] + phi * v
    return A


def poly_matmul(A: list, B: list, vars_) -> list:
    zero = MultiPoly(vars_)
    n, k, m = len(A), len(B), len(B[0]) if B else 0
    out = []
    for i in range(n):
        row = []
        for j in range(m):
            s = zero
            for t in range(k):
                if A[i][t] and B[t][j]:
                    s = s + A[i][t] * B[t][j]
            row.append(s)
        out.append(row)
    return out


def poly_bareiss(mat: list, vars_):
    """Fraction-free elimination over the polynomial ring.

    Returns ``(rank, det)``; ``det`` is only meaningful for square input.
    """
    A = [list(r) for r in mat]
    n = len(A)
    m = len(A[0]) if A else 0
    one = MultiPoly.constant(vars_, 1)
    zero = MultiPoly(vars_)
    prev = one
    sign = 1
    r = 0
    for c in range(m):
        piv = next((i for i in range(r, n) if A[i][c]), None)
        if piv is None:
            continue
        if piv != r:
            A[r], A[piv] = A[piv], A[r]
            sign = -sign
        for i in range(r + 1, n):
            for j in range(c + 1, m):
                A[i][j] = (A[r][c] * A[i][j] - A[i][c] * A[r][j]).exact_div(prev)
            A[i][c] = zero
        prev = A[r][c]
        r += 1
        if r == n:
            break
    if n == m and r == n:
        det = A[n - 1][n - 1] * sign if n else one
    else:
        det = zero
    return r, det


def certify_constant_rank(M: Representation, fb: FlowBasis, i: int, max_arrows: int = 8, max_dim: int = 12,
                          max_minors: int = 2000, max_pairs: int = 20000):
    """Certificate that ``rank alpha_M^i`` equals its generic value on the semistable locus.

    Let ``g`` be the generic rank and ``J`` the ideal of ``g x g`` minors.  The
    rank is at least ``g`` at every semistable point iff no point with some
    ``Y_r != 0`` lies on ``V(J)``, i.e. ``1 in J + (z Y_r - 1)`` for every
    flow point ``r``.  Returns a :class:`RankCertificate` or a
    :class:`CertificationRefusal`.
    """
    if i < 1:
        raise ValueError("i must be at least 1")
    q = M.quiver
    if len(q.arrows) > max_arrows or M.total_dim > max_dim:
        return CertificationRefusal(i, "caps", f"needs <= {max_arrows} arrows and dim <= {max_dim}")
    vars_ = fb.variables
    A = symbolic_operator(M, fb)
    P = A
    for _ in range(i - 1):
        P = poly_matmul(P, A, vars_)
    rows = [k for k in range(len(P)) if any(P[k])]
    cols = [k for k in range(len(P)) if any(P[t][k] for t in range(len(P)))]
    sub = [[P[r][c] for c in cols] for r in rows]
    g, _ = poly_bareiss(sub, vars_) if sub else (0, None)
    cert = RankCertificate(i, g, vars_, [])
    if g == 0:
        return cert  # rank 0 everywhere, nothing to prove
    count = comb(len(rows), g) * comb(len(cols), g)
    if count > max_minors:
        return CertificationRefusal(i, "caps", f"{count} minors of size {g} exceed the cap {max_minors}")
    minors = []
    seen = set()
    for rs in itertools.combinations(range(len(rows)), g):
        for cs in itertools.combinations(range(len(cols)), g):
            _, d = poly_bareiss([[sub[r][c] for c in cs] for r in rs], vars_)
            if d:
                d = d.monic("degrevlex")
                if d not in seen:
                    seen.add(d)
                    minors.append(d)
    cert.minors = minors
    ext = vars_ + ("_z",)
    gens = [m.extend(ext) for m in minors]
    z = MultiPoly.var(ext, "_z")
    for r, y in zip(fb.points, fb.monomials):
        try:
            G = buchberger(gens + [z * y.extend(ext) - 1], "degrevlex", max_pairs)
        except BudgetExceededError as exc:
            return CertificationRefusal(i, "budget", f"Groebner pair limit hit for flow point {r}: {exc}")
        if not (len(G) == 1 and G[0].is_constant()):
            return CertificationRefusal(
                i, "non-unit saturation",
                f"the rank drops somewhere on the chart Y_{list(r)} != 0 (basis: {[str(h) for h in G]})")
        cert.bases.append((r, G))
    return cert


def verify_certificate(cert: RankCertificate, fb: FlowBasis) -> bool:
    """Recompute each saturation basis and reduce 1 against it."""
    if cert.generic_rank == 0:
        return True
    ext = tuple(cert.variables) + ("_z",)
    gens = [m.extend(ext) for m in cert.minors]
    z = MultiPoly.var(ext, "_z")
    one = MultiPoly.constant(ext, 1)
    if len(cert.bases) != len(fb.points):
        return False
    for (r, _), y in zip(cert.bases, fb.monomials):
        G = buchberger(gens + [z * y.extend(ext) - 1])
        if reduce(one, G).terms:
            return False
    return True


