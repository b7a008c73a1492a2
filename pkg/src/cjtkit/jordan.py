"""The nilpotent operator alpha_M, rank profiles and Jordan types.

Conventions: the rank profile is ``(r_0, ..., r_L)`` with ``r_0 = dim M`` and
``r_L = 0``; ``r_{L+1}`` is taken to be 0.  A Jordan type is the vector
``(a_1, ..., a_L)`` where ``a_i`` counts blocks of size ``i``, so that
``a_i = r_{i-1} + r_{i+1} - 2 r_i``.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Sequence

from .exactalg import DEFAULT_PRIME, GF, QQ, Matrix
from .flows import FlowBasis, eval_point, phi_values, sample_semistable
from .quiver import Representation


class JordanTypeError(ValueError):
    """Length mismatch or an impossible rank profile."""


@dataclass(frozen=True)
class JordanType:
    """Block multiplicities ``a = (a_1, ..., a_L)``; may be virtual (negative)."""

    a: tuple

    def __post_init__(self):
        object.__setattr__(self, "a", tuple(int(x) for x in self.a))

    @property
    def L(self) -> int:
        return len(self.a)

    def __getitem__(self, i: int) -> int:
        """Multiplicity of blocks of size ``i`` (1-based)."""
        if not 1 <= i <= len(self.a):
            raise IndexError(f"block size {i} outside 1..{len(self.a)}")
        return self.a[i - 1]

    def dim(self) -> int:
        return sum(i * x for i, x in enumerate(self.a, start=1))

    def is_genuine(self) -> bool:
        return all(x >= 0 for x in self.a)

    def profile(self) -> "RankProfile":
        return RankProfile(profile_from_jtype(self))

    def __add__(self, other):
        return jtype_add(self, other)

    def __sub__(self, other):
        return jtype_sub(self, other)

    def __neg__(self):
        return JordanType(tuple(-x for x in self.a))

    def __str__(self):
        parts = [f"[{i}]^{x}" for i, x in reversed(list(enumerate(self.a, start=1))) if x]
        return " ".join(parts) if parts else "0"

    def to_json(self) -> dict:
        return {"blocks": list(self.a), "text": str(self)}


@dataclass(frozen=True)
class RankProfile:
    ranks: tuple  # r_0 .. r_L

    def __post_init__(self):
        object.__setattr__(self, "ranks", tuple(int(x) for x in self.ranks))

    @property
    def L(self) -> int:
        return len(self.ranks) - 1

    def __getitem__(self, i):
        return self.ranks[i]

    def __iter__(self):
        return iter(self.ranks)

    def __len__(self):
        return len(self.ranks)

    def is_monotone(self) -> bool:
        return all(x >= y for x, y in zip(self.ranks, self.ranks[1:]))

    def is_convex(self) -> bool:
        r = self.ranks
        return all(r[i - 1] + r[i + 1] >= 2 * r[i] for i in range(1, len(r) - 1))

    def jordan_type(self) -> JordanType:
        return jtype_from_profile(self)

    def dominated_by(self, other: "RankProfile") -> bool:
        return all(x <= y for x, y in zip(self.ranks, other.ranks))

    def to_json(self) -> list:
        return list(self.ranks)


def jtype_from_profile(profile) -> JordanType:
    r = list(profile.ranks if isinstance(profile, RankProfile) else profile)
    L = len(r) - 1
    if L < 1:
        raise JordanTypeError("a rank profile needs r_0 and at least r_1")
    if r[L] != 0:
        raise JordanTypeError(f"operator is not nilpotent of index <= {L}: r_L = {r[L]}")
    ext = r + [0]
    a = tuple(ext[i - 1] + ext[i + 1] - 2 * ext[i] for i in range(1, L + 1))
    if any(x < 0 for x in a):
        raise JordanTypeError(f"rank profile {tuple(r)} is not convex")
    return JordanType(a)


def profile_from_jtype(t: JordanType) -> tuple:
    """``r_i = sum_{j>i} a_j (j - i)`` for ``i = 0..L``."""
    a = t.a
    L = len(a)
    return tuple(sum(a[j - 1] * (j - i) for j in range(i + 1, L + 1)) for i in range(L + 1))


def _check_len(s: JordanType, t: JordanType):
    if s.L != t.L:
        raise JordanTypeError(f"Jordan types of different lengths {s.L} and {t.L}")


def jtype_add(s: JordanType, t: JordanType) -> JordanType:
    _check_len(s, t)
    return JordanType(tuple(x + y for x, y in zip(s.a, t.a)))


def jtype_sub(s: JordanType, t: JordanType) -> JordanType:
    _check_len(s, t)
    return JordanType(tuple(x - y for x, y in zip(s.a, t.a)))


def jtype_scale(t: JordanType, k: int) -> JordanType:
    return JordanType(tuple(k * x for x in t.a))


def jtype_as_vector(t: JordanType) -> tuple:
    return tuple(t.a)


def jtype_combination(coeffs: Sequence[int], types: Sequence[JordanType]) -> JordanType:
    if len(coeffs) != len(types):
        raise JordanTypeError("coefficient and type lists differ in length")
    if not types:
        raise JordanTypeError("empty combination")
    out = jtype_scale(types[0], 0)
    for c, t in zip(coeffs, types):
        out = jtype_add(out, jtype_scale(t, c))
    return out


def unit_jtype(L: int, size: int) -> JordanType:
    """``E_size``: a single block of the given size."""
    return JordanType(tuple(1 if i == size else 0 for i in range(1, L + 1)))


# -- the operator ----------------------------------------------------------------


@dataclass
class NilpotentOperator:
    rep: Representation
    point: dict
    field: object
    matrix: Matrix
    L: int
    phis: dict = dc_field(default_factory=dict)

    def powers(self):
        """Yield ``A^1, A^2, ...`` up to ``A^L``, stopping after the first zero."""
        P = self.matrix
        for _ in range(self.L):
            yield P
            if P.is_zero():
                return
            P = P @ self.matrix


def rep_matrices(M: Representation, field) -> dict:
    if field == QQ:
        return M.maps
    return {a: m.to_field(field) for a, m in M.maps.items()}


def build_operator(M: Representation, fb: FlowBasis, alpha, field=QQ) -> NilpotentOperator:
    """Block matrix with block ``(h(a), t(a))`` equal to ``phi_a(alpha) M_a``."""
    if M.quiver != fb.quiver:
        raise ValueError("representation and flow basis live on different quivers")
    pt = eval_point(fb, alpha, field)
    phis = phi_values(fb, pt, field)
    q = M.quiver
    maps = rep_matrices(M, field)
    n = M.total_dim
    entries = {}
    for a in q.arrows:
        c = phis[a.id]
        if not c:
            continue
        r0, c0 = M.offsets[a.head], M.offsets[a.tail]
        for i, row in enumerate(maps[a.id].sparse_rows()):
            for j, v in row.items():
                key = (r0 + i, c0 + j)
                entries[key] = field(entries.get(key, field.zero) + c * v)
    mat = Matrix.from_entries(n, n, {k: v for k, v in entries.items() if v}, field)
    return NilpotentOperator(M, pt, field, mat, fb.loewy_length, phis)


def rank_profile(op: NilpotentOperator) -> RankProfile:
    """``(rank A^0, ..., rank A^L)``; raises if ``A^L`` is not zero."""
    n = op.matrix.nrows
    ranks = [n]
    for P in op.powers():
        ranks.append(P.rank())
    ranks += [0] * (op.L + 1 - len(ranks))
    if ranks[op.L] != 0:
        raise JordanTypeError("operator is not nilpotent of the expected index")
    prof = RankProfile(ranks)
    if not prof.is_monotone() or not prof.is_convex():
        raise JordanTypeError(f"impossible rank profile {prof.ranks}")
    return prof


def profile_at(M: Representation, fb: FlowBasis, alpha, field=QQ) -> RankProfile:
    return rank_profile(build_operator(M, fb, alpha, field))


def jordan_type_at(M: Representation, fb: FlowBasis, alpha, field=QQ) -> JordanType:
    t = profile_at(M, fb, alpha, field).jordan_type()
    if t.dim() != M.total_dim:
        raise JordanTypeError("Jordan type does not account for the full dimension")
    return t


# -- generic type ---------------------------------------------------------------


def sample_size(field) -> int:
    """Size of the set coordinates are drawn from when sampling."""
    p = getattr(field, "p", None)
    return p - 1 if p else 10**6


def flow_degree(fb: FlowBasis) -> int:
    """Largest total degree of the coefficients phi_a."""
    return max(sum(r) for r in fb.points)


def schwartz_zippel_bound(profile: RankProfile, fb: FlowBasis, samples: int, field) -> Fraction:
    """Upper bound on the chance that ``samples`` random points all miss a generic rank.

    Entries of ``A^i`` are polynomials of degree at most ``i * delta``, so a
    nonzero ``g_i``-minor has degree at most ``g_i * i * delta``.
    """
    delta = flow_degree(fb)
    S = sample_size(field)
    total = Fraction(0)
    for i in range(1, len(profile.ranks)):
        D = profile.ranks[i] * i * delta
        if D:
            total += Fraction(D, S) ** samples
    return min(Fraction(1), total)


@dataclass(frozen=True)
class GenericType:
    jtype: JordanType
    profile: RankProfile
    samples: int
    failure_bound: Fraction

    def __iter__(self):
        return iter((self.jtype, self.profile))


def generic_profile(M: Representation, fb: FlowBasis, points, field) -> RankProfile:
    best = None
    for pt in points:
        prof = profile_at(M, fb, pt, field)
        best = prof.ranks if best is None else tuple(max(x, y) for x, y in zip(best, prof.ranks))
    return RankProfile(best)


def generic_jordan_type(M: Representation, fb: FlowBasis, samples: int = 20, seed: int = 0,
                        field=None) -> GenericType:
    """Componentwise maximal rank profile over random semistable points.

    Ranks are lower semicontinuous, so the maximum over random points is the
    generic value unless every sample lies on a proper hypersurface; the
    returned ``failure_bound`` bounds that probability.
    """
    if samples < 1:
        raise ValueError("samples must be at least 1")
    field = field or GF(DEFAULT_PRIME)
    pts = sample_semistable(fb, "dense", seed, samples, field)
    prof = generic_profile(M, fb, pts, field)
    return GenericType(prof.jordan_type(), prof, samples, schwartz_zippel_bound(prof, fb, samples, field))


def torus_action(fb: FlowBasis, t, alpha, field=QQ) -> dict:
    """``(t . alpha)_a = t_{h(a)} t_{t(a)}^{-1} alpha_a`` for nonzero ``t``."""
    q = fb.quiver
    tv = t if isinstance(t, dict) else dict(zip(q.vertices, t))
    pt = eval_point(fb, alpha, field)
    out = {}
    for a in q.arrows:
        out[a.id] = field(pt[a.id] * field(tv[a.head]) * field.inv(field(tv[a.tail])))
    return out


__all__ = [
    "JordanType", "RankProfile", "JordanTypeError", "NilpotentOperator", "GenericType",
    "build_operator", "rank_profile", "profile_at", "jordan_type_at", "generic_jordan_type",
    "generic_profile", "jtype_add", "jtype_sub", "jtype_scale", "jtype_as_vector",
    "jtype_combination", "jtype_from_profile", "profile_from_jtype", "unit_jtype",
    "schwartz_zippel_bound", "torus_action",
]
