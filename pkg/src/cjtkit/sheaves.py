"""Graded Hilbert functions of the filtration quotients on Kronecker quivers.

For the Kronecker quiver with arrows ``a1..an`` and weight (1, -1) the
semi-invariant ring is the polynomial ring ``S = K[x_1..x_n]`` with
``x_k = Y_{a_k}``, and the operator ``theta(m ⊗ f) = sum_k X_{a_k} m ⊗ x_k f``
acts on ``M ⊗ S`` with degree +1.  The quotients

    F_{i,j} = (Ker θ^{j+1} ∩ Im θ^{i-j-1}) / ((Ker θ^{j+1} ∩ Im θ^{i-j}) + (Ker θ^j ∩ Im θ^{i-j-1}))

are graded S-modules; for n = 2 they define sheaves on the projective line,
whose splitting types are recovered from linear algebra in finitely many
degrees.

Basis of ``(M ⊗ S)_d``: module index major (the representation's block
order), monomials of degree ``d`` minor in descending lexicographic order
(``x^d, x^{d-1} y, ..., y^d`` for n = 2).
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import Sequence

from .exactalg import QQ, Matrix
from .exactalg.subspace import intersect, span_basis, subspace_sum
from .jordan import rep_matrices
from .quiver import Quiver, Representation, loewy_length


class UnsupportedQuiverError(ValueError):
    """Graded computations are only implemented for Kronecker quivers."""


class WindowTooSmallError(ValueError):
    """The Hilbert function did not stabilize inside the degree window."""


def kronecker_arity(q: Quiver) -> int:
    """Number of arrows if ``q`` is a Kronecker quiver (two vertices, all arrows one way)."""
    if len(q.vertices) != 2 or not q.arrows:
        raise UnsupportedQuiverError("graded computations need a Kronecker quiver")
    t, h = q.arrows[0].tail, q.arrows[0].head
    if t == h or any(a.tail != t or a.head != h for a in q.arrows):
        raise UnsupportedQuiverError("graded computations need a Kronecker quiver")
    return len(q.arrows)


@lru_cache(maxsize=None)
def monomials(n: int, d: int) -> tuple:
    """Exponent vectors of degree ``d`` in ``n`` variables, descending lex."""
    if d < 0:
        return ()
    if n == 1:
        return ((d,),)
    out = []
    for first in range(d, -1, -1):
        for rest in monomials(n - 1, d - first):
            out.append((first,) + rest)
    return tuple(out)


def dim_S(n: int, d: int) -> int:
    return comb(d + n - 1, n - 1) if d >= 0 else 0


class GradedModule:
    """``M ⊗ S`` with the degree-one operator theta, caching matrices and ranks."""

    def __init__(self, M: Representation, field=QQ):
        self.M = M
        self.n = kronecker_arity(M.quiver)
        self.field = field
        self.dim = M.total_dim
        self._maps = rep_matrices(M, field)
        self._theta = {}
        self._power = {}
        self._rank = {}
        self.L = loewy_length(M.quiver)

    def size(self, d: int) -> int:
        return self.dim * dim_S(self.n, d)

    def _index(self, d):
        return {m: k for k, m in enumerate(monomials(self.n, d))}

    def theta(self, d: int) -> Matrix:
        """Matrix of theta from degree ``d`` to ``d + 1``."""
        if d in self._theta:
            return self._theta[d]
        M, n, F = self.M, self.n, self.field
        src = monomials(n, d)
        dst = self._index(d + 1)
        s_src, s_dst = len(src), len(dst)
        entries = {}
        for k, a in enumerate(M.quiver.arrows):
            mat = self._maps[a.id]
            r0, c0 = M.offsets[a.head], M.offsets[a.tail]
            for i, row in enumerate(mat.sparse_rows()):
                for j, v in row.items():
                    for mi, mono in enumerate(src):
                        up = mono[:k] + (mono[k] + 1,) + mono[k + 1:]
                        key = ((r0 + i) * s_dst + dst[up], (c0 + j) * s_src + mi)
                        entries[key] = F(entries.get(key, F.zero) + v)
        mat = Matrix.from_entries(self.dim * s_dst, self.dim * s_src,
                                  {key: v for key, v in entries.items() if v}, F)
        self._theta[d] = mat
        return mat

    def power(self, e: int, k: int) -> Matrix:
        """theta^k from degree ``e`` to ``e + k`` (identity for k = 0)."""
        key = (e, k)
        if key not in self._power:
            if k == 0:
                self._power[key] = Matrix.identity(self.size(e), self.field)
            else:
                self._power[key] = self.theta(e + k - 1) @ self.power(e, k - 1)
        return self._power[key]

    def rho(self, k: int, e: int) -> int:
        """Rank of theta^k starting in degree ``e`` (0 for negative degrees)."""
        if e < 0:
            return 0
        if k == 0:
            return self.size(e)
        key = (k, e)
        if key not in self._rank:
            self._rank[key] = 0 if k >= self.L else self.power(e, k).rank()
        return self._rank[key]

    # -- subspaces in a fixed degree -------------------------------------------------

    def image(self, b: int, d: int) -> list:
        """Basis of Im theta^b in degree ``d``."""
        if b == 0:
            return span_basis(_unit_vectors(self.size(d), self.field), self.field, self.size(d))
        if d - b < 0:
            return []
        return self.power(d - b, b).image_basis()

    def kernel(self, a: int, d: int) -> list:
        """Basis of Ker theta^a in degree ``d``."""
        if a == 0 or d < 0:
            return []
        return self.power(d, a).kernel_basis()

    def ker_im(self, a: int, b: int, d: int) -> list:
        n = self.size(d)
        return intersect(self.kernel(a, d), self.image(b, d), self.field, n)

    def multiply(self, d: int, exponent: Sequence[int]) -> Matrix:
        """Multiplication by a monomial, from degree ``d`` to ``d + deg``."""
        e = tuple(exponent)
        up = sum(e)
        src = monomials(self.n, d)
        dst = self._index(d + up)
        s_src, s_dst = len(src), len(dst)
        entries = {}
        for j in range(self.dim):
            for mi, mono in enumerate(src):
                tgt = tuple(x + y for x, y in zip(mono, e))
                entries[(j * s_dst + dst[tgt], j * s_src + mi)] = self.field.one
        return Matrix.from_entries(self.dim * s_dst, self.dim * s_src, entries, self.field)


def _unit_vectors(n, field):
    return [tuple(field.one if i == k else field.zero for i in range(n)) for k in range(n)]


def graded_theta(M: Representation, d: int, field=QQ) -> Matrix:
    if d < 0:
        raise ValueError("degree must be nonnegative")
    return GradedModule(M, field).theta(d)


# -- Hilbert tables -------------------------------------------------------------------


@dataclass
class HilbertTable:
    i: int
    j: int
    values: dict  # degree -> dimension
    method: str = "rank"

    @property
    def degrees(self) -> list:
        return sorted(self.values)

    def to_json(self) -> dict:
        return {"i": self.i, "j": self.j, "method": self.method,
                "values": {str(d): self.values[d] for d in self.degrees}}


def _check_ij(i, j, L):
    if not (0 <= j < i <= L):
        raise ValueError(f"need 0 <= j < i <= L = {L}, got i={i}, j={j}")


def _N(G: GradedModule, a: int, b: int, d: int) -> int:
    """dim (Ker θ^a ∩ Im θ^b) in degree d = ρ_b(d-b) - ρ_{a+b}(d-b)."""
    if a == 0:
        return 0
    if b == 0:
        return G.size(d) - G.rho(a, d) if d >= 0 else 0
    return G.rho(b, d - b) - G.rho(a + b, d - b)


def hilbert_value(G: GradedModule, i: int, j: int, d: int) -> int:
    return (_N(G, j + 1, i - j - 1, d) - _N(G, j + 1, i - j, d)
            - _N(G, j, i - j - 1, d) + _N(G, j, i - j, d))


def hilbert_value_subspace(G: GradedModule, i: int, j: int, d: int) -> int:
    """Same dimension from explicit kernels, images, sums and intersections."""
    n = G.size(d)
    num = G.ker_im(j + 1, i - j - 1, d)
    den = subspace_sum(G.ker_im(j + 1, i - j, d), G.ker_im(j, i - j - 1, d), G.field, n)
    inside = intersect(num, den, G.field, n)
    if len(inside) != len(den):
        raise AssertionError("denominator is not contained in the numerator")
    return len(num) - len(den)


def hilbert_table(M: Representation, i: int, j: int = 0, d_range=None, field=QQ, method: str = "rank",
                  graded: GradedModule | None = None) -> HilbertTable:
    """Dimensions of ``F_{i,j}(M)`` in the given degrees (default ``0..2 dim M + 2L``)."""
    G = graded or GradedModule(M, field)
    L = loewy_length(M.quiver)
    _check_ij(i, j, L)
    if d_range is None:
        d_range = range(0, default_window_end(M) + 1)
    if method == "rank":
        f = hilbert_value
    elif method == "subspace":
        f = hilbert_value_subspace
    else:
        raise ValueError(f"unknown method {method!r}")
    return HilbertTable(i, j, {d: f(G, i, j, d) for d in d_range}, method)


def default_window_end(M: Representation) -> int:
    return 2 * M.total_dim + 2 * loewy_length(M.quiver)


# -- splitting types ------------------------------------------------------------------


@dataclass
class SplittingType:
    degrees: tuple  # the twists d_j, ascending; empty when only rank/c1 are known
    rank: int
    c1: int
    torsion_degrees: list = dc_field(default_factory=list)
    deficit_degrees: list = dc_field(default_factory=list)
    stable_from: int = 0
    window: tuple = (0, 0)
    partial: bool = False
    hilbert: dict = dc_field(default_factory=dict)

    def model(self, d: int) -> int:
        return sum(max(0, d + t + 1) for t in self.degrees)

    def __str__(self):
        if self.partial:
            return f"rank {self.rank}, c1 {self.c1} (partial)"
        return "{" + ", ".join(str(t) for t in self.degrees) + "}"

    def to_json(self) -> dict:
        return {
            "degrees": list(self.degrees),
            "rank": self.rank,
            "c1": self.c1,
            "torsion_degrees": self.torsion_degrees,
            "deficit_degrees": self.deficit_degrees,
            "stable_from": self.stable_from,
            "window": list(self.window),
            "partial": self.partial,
        }


def _binomial_basis(m: int, d: int) -> list:
    """``C(d + m - i, m - i)`` for ``i = 0..m`` (Hilbert polynomial basis on P^m)."""
    return [Fraction(comb(d + m - i, m - i)) if d + m - i >= 0 else Fraction(0) for i in range(m + 1)]


def _fit_polynomial(values: dict, degrees: list, m: int):
    """Coefficients of ``h`` in the binomial basis from the first m+1 degrees, or None."""
    pts = degrees[: m + 1]
    A = Matrix.from_rows([_binomial_basis(m, d) for d in pts], QQ, ncols=m + 1)
    sol = A.solve([values[d] for d in pts])
    if sol is None:
        return None
    for d in degrees:
        if sum(c * b for c, b in zip(sol, _binomial_basis(m, d))) != values[d]:
            return None
    return sol


def _stable_start(values: dict, lo: int, hi: int, m: int, run: int):
    """Smallest ``d0`` such that ``h`` is a polynomial of degree ``m`` on ``[d0, hi]``."""
    for d0 in range(lo, hi - run + 2):
        degs = list(range(d0, hi + 1))
        if len(degs) < max(run, m + 1):
            break
        sol = _fit_polynomial(values, degs, m)
        if sol is not None:
            return d0, sol
    return None, None


def _sections(G: GradedModule, i: int, d0: int, e: int, cache: dict) -> int:
    """``h^0(E(d0 - e))`` for the sheaf of ``F_i`` on the projective line.

    A section of twist ``k = d0 - e`` is a pair ``(u, v)`` in degree ``d0``
    with ``y^e u = x^e v`` in degree ``d0 + e`` (``u = x^e s``, ``v = y^e s``),
    valid once ``d0`` lies in the torsion-free stable range.
    """
    F = G.field

    def num_den(d):
        if d not in cache:
            A = G.ker_im(1, i - 1, d)
            B = G.ker_im(1, i, d)
            cache[d] = (A, B)
        return cache[d]

    A0, B0 = num_den(d0)
    if e == 0:
        return len(A0) - len(B0)
    _, Be = num_den(d0 + e)
    ymul = G.multiply(d0, (0, e))
    xmul = G.multiply(d0, (e, 0))
    cols = [ymul.apply(u) for u in A0] + [tuple(F(-c) for c in xmul.apply(u)) for u in A0] + list(Be)
    size = G.size(d0 + e)
    rank_all = Matrix.from_columns(cols, size, F).rank() if cols else 0
    return 2 * len(A0) + len(Be) - rank_all - 2 * len(B0)


def splitting_type(M: Representation, i: int = 1, window=None, field=QQ) -> SplittingType:
    """Twists ``d_j`` with ``F_i(M)~ ≅ ⊕ O(d_j)`` on P^1 (Kronecker with two arrows).

    The Hilbert function is computed on ``window`` (default
    ``0..2 dim M + 2L``); from the degree ``d0`` where it becomes linear, the
    section counts ``g(k) = h^0(E(k))`` of all lower twists are computed
    until they vanish, and the multiplicity of ``-k`` among the ``d_j`` is the
    second difference of ``g`` at ``k``.  Degrees where the computed Hilbert
    function exceeds (falls short of) the bundle model are reported as
    torsion (deficit) degrees.  With more than two arrows only the rank and
    first Chern degree are determined and ``partial`` is set.
    """
    G = GradedModule(M, field)
    n = G.n
    L = loewy_length(M.quiver)
    if not 1 <= i <= L:
        raise ValueError(f"i must lie in 1..{L}")
    lo, hi = window if window is not None else (0, default_window_end(M))
    if lo < 0 or hi < lo:
        raise ValueError("window must satisfy 0 <= start <= end")
    h = hilbert_table(M, i, 0, range(lo, hi + 1), field, graded=G).values
    m = n - 1
    run = L + 2 + (m - 1)
    d0, coeffs = _stable_start(h, lo, hi, m, run)
    if d0 is None:
        raise WindowTooSmallError(
            f"Hilbert function not stable on {lo}..{hi}; widen the window (e.g. {lo}..{2 * hi + 2})")
    rank = int(coeffs[0])
    c1 = int(coeffs[1]) if m >= 1 else 0
    if n != 2:
        return SplittingType((), rank, c1, stable_from=d0, window=(lo, hi), partial=True, hilbert=h)

    g = {k: h[k] for k in range(d0, hi + 1)}
    cache = {}
    k = d0 - 1
    while True:
        g[k] = _sections(G, i, d0, d0 - k, cache)
        if g[k] == 0:
            break
        k -= 1
        if d0 - k > 4 * (hi + 2) + 4 * M.total_dim:
            raise WindowTooSmallError("section counts did not vanish; window is not in the stable range")
    kz = k
    g[kz - 1] = 0
    s = {t: g[t] - g[t - 1] for t in range(kz, d0 + 2)}
    s[kz - 1] = 0
    degrees = []
    for t in range(kz, d0 + 2):
        mult = s[t] - s[t - 1]
        if mult < 0:
            raise AssertionError("negative multiplicity: Hilbert data is not that of a bundle")
        degrees += [-t] * mult
    degrees.sort()
    st = SplittingType(tuple(degrees), rank, c1, stable_from=d0, window=(lo, hi), hilbert=h)
    if len(degrees) != rank or sum(degrees) != c1:
        raise AssertionError(f"recovered twists {degrees} disagree with rank {rank} / c1 {c1}")
    st.torsion_degrees = [d for d in sorted(h) if h[d] > st.model(d)]
    st.deficit_degrees = [d for d in sorted(h) if h[d] < st.model(d)]
    return st


def filtration_total(M: Representation, d: int, field=QQ, graded: GradedModule | None = None) -> int:
    """Sum of ``dim F_{i,j}(M)_d`` over all ``0 <= j < i <= L``."""
    G = graded or GradedModule(M, field)
    L = loewy_length(M.quiver)
    return sum(hilbert_value(G, i, j, d) for i in range(1, L + 1) for j in range(i))
