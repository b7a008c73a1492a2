"""Equal-images / equal-kernels properties and the test modules X^l_alpha.

For a length ``l`` the canonical subspaces are ``R^l(M)``, the sum of the
``M_y`` at vertices receiving a path of length ``l``, and ``S^l(M)``, the sum
of the ``M_x`` at vertices emitting none.  Always ``Im alpha^l ⊆ R^l`` and
``Ker alpha^l ⊇ S^l``; the properties ask for equality.

``X^l_alpha`` is the cokernel of the map ``F^l_alpha`` between projectives;
it is never built, only its presentation and the dimensions of
``Hom(X^l_alpha, M)`` and ``Ext^1(X^l_alpha, M)``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field as dc_field
from fractions import Fraction

from .cjt import Budget, LocusEmptyError, _candidates, _reduce_ok, point_json, v_inj
from .exactalg import DEFAULT_PRIME, GF, QQ, Matrix
from .exactalg.subspace import contains
from .flows import FlowBasis, eval_point, phi_values, _path_value
from .jordan import (
    JordanType,
    build_operator,
    flow_degree,
    jordan_type_at,
    jtype_combination,
    rep_matrices,
)
from .quiver import (
    Quiver,
    Representation,
    gamma_in,
    gamma_out,
    injective,
    level_vertices,
    loewy_length,
    paths_between,
    quotient,
    quotient_by_R,
    quotient_by_S,
    random_extension,
    subrepresentation,
)


class FinjPreconditionError(ValueError):
    """The presentation of X^l_alpha is not injective at this point."""


class LevelGapError(ValueError):
    """Some level Q_0(l) is empty, so the injective table is incomplete."""


class PreconditionError(ValueError):
    pass


# -- canonical subspaces -----------------------------------------------------------


def R_vertices(q: Quiver, l: int) -> list:
    return sorted(gamma_in(q, l))


def S_vertices(q: Quiver, l: int) -> list:
    return sorted(set(q.vertices) - gamma_out(q, l))


def _coordinate_vectors(M: Representation, vertices, field) -> list:
    n = M.total_dim
    out = []
    for v in vertices:
        for k in M.block(v):
            out.append(tuple(field.one if j == k else field.zero for j in range(n)))
    return out


def R_slices(M: Representation, l: int) -> dict:
    return {v: [tuple(1 if i == k else 0 for i in range(M.dims[v])) for k in range(M.dims[v])]
            for v in R_vertices(M.quiver, l)}


def S_slices(M: Representation, l: int) -> dict:
    return {v: [tuple(1 if i == k else 0 for i in range(M.dims[v])) for k in range(M.dims[v])]
            for v in S_vertices(M.quiver, l)}


def _power(op, l):
    P = op.matrix
    for _ in range(l - 1):
        if P.is_zero():
            break
        P = P @ op.matrix
    return P


def _check_l(fb: FlowBasis, l: int, upper: int):
    if not 1 <= l <= upper:
        raise ValueError(f"l must lie in 1..{upper}, got {l}")


def is_EIP_at(M: Representation, fb: FlowBasis, alpha, l: int, field=QQ) -> bool:
    """``Im alpha_M^l == R^l(M)`` as subspaces of M."""
    _check_l(fb, l, fb.loewy_length)
    op = build_operator(M, fb, alpha, field)
    P = _power(op, l)
    R = _coordinate_vectors(M, R_vertices(M.quiver, l), field)
    img = P.image_basis()
    return len(img) == len(R) and contains(R, img, field)


def is_EKP_at(M: Representation, fb: FlowBasis, alpha, l: int, field=QQ) -> bool:
    """``Ker alpha_M^l == S^l(M)`` as subspaces of M."""
    _check_l(fb, l, fb.loewy_length)
    op = build_operator(M, fb, alpha, field)
    P = _power(op, l)
    S = _coordinate_vectors(M, S_vertices(M.quiver, l), field)
    ker = P.kernel_basis()
    return len(ker) == len(S) and contains(ker, S, field)


def kronecker_surjectivity(M: Representation, alpha, field=QQ) -> bool:
    """On a Kronecker quiver: is ``sum_i alpha_i M(a_i)`` onto ``M_2``?"""
    q = M.quiver
    maps = rep_matrices(M, field)
    total = Matrix.zeros(M.dims["2"], M.dims["1"], field)
    for a in q.arrows:
        total = total + maps[a.id].scale(field(alpha[a.id]))
    return total.rank() == M.dims["2"]


def _is_kronecker(q: Quiver) -> bool:
    return q.vertices == ("1", "2") and all(a.tail == "1" and a.head == "2" for a in q.arrows) and q.arrows


# -- the presentation of X^l_alpha ---------------------------------------------------


@dataclass
class PresentationMap:
    l: int
    alpha: dict
    field: object
    targets: list  # Γ^l_in, sorted
    sources: list  # Γ^l_out, sorted
    components: dict  # (x, y) -> [(path, coefficient)]
    column_basis: list  # (y, q): q a path starting at y
    row_basis: list  # (x, w): w a path starting at x
    matrix: Matrix
    path_condition_holds: bool

    def to_json(self) -> dict:
        return {
            "l": self.l,
            "targets": self.targets,
            "sources": self.sources,
            "components": {f"{x}->{y}": [[str(p), self.field.to_json(c)] for p, c in terms]
                           for (x, y), terms in sorted(self.components.items())},
            "shape": list(self.matrix.shape),
        }


def path_condition(fb: FlowBasis, alpha, l: int, field=QQ) -> bool:
    """Every ``y`` receiving a length-l path receives one with nonzero coefficient."""
    phis = phi_values(fb, alpha, field)
    q = fb.quiver
    for y in gamma_in(q, l):
        if not any(_path_value(phis, p, field) != 0 for p in q.paths(l) if p.end == y):
            return False
    return True


def presentation(q: Quiver, fb: FlowBasis, alpha, l: int, field=QQ) -> PresentationMap:
    """``F^l_alpha``: sends ``q`` in ``P(y)`` to ``sum_{p: x -> y, |p| = l} phi_p (q p)``."""
    _check_l(fb, l, max(1, fb.loewy_length - 1))
    pt = eval_point(fb, alpha, field)
    phis = phi_values(fb, pt, field)
    targets = sorted(gamma_in(q, l))
    sources = sorted(gamma_out(q, l))
    components = {}
    for x in sources:
        for y in targets:
            terms = [(p, _path_value(phis, p, field)) for p in paths_between(q, x, y, l)]
            if terms:
                components[(x, y)] = terms
    all_paths = q.paths()
    cols = [(y, w) for y in targets for w in all_paths if w.start == y]
    rows = [(x, w) for x in sources for w in all_paths if w.start == x]
    row_index = {r: i for i, r in enumerate(rows)}
    entries = {}
    for j, (y, w) in enumerate(cols):
        for x in sources:
            for p, c in components.get((x, y), []):
                if c:
                    i = row_index[(x, p.concat(w))]
                    entries[(i, j)] = field(entries.get((i, j), field.zero) + c)
    mat = Matrix.from_entries(len(rows), len(cols), {k: v for k, v in entries.items() if v}, field)
    return PresentationMap(l, pt, field, targets, sources, components, cols, rows, mat,
                           path_condition(fb, pt, l, field))


def is_F_alpha_injective(pm: PresentationMap) -> bool:
    """Injectivity by rank, cross-checked against the path criterion."""
    by_rank = pm.matrix.rank() == pm.matrix.ncols
    if by_rank != pm.path_condition_holds:
        raise AssertionError("rank test and path criterion disagree on injectivity")
    return by_rank


# -- Hom / Ext -------------------------------------------------------------------------


def delta_matrix(M: Representation, fb: FlowBasis, alpha, l: int, field=QQ) -> Matrix:
    """``Hom(F^l_alpha, M)``: blocks ``sum_{p: x -> y} phi_p M_p`` from M_x to M_y."""
    q = M.quiver
    phis = phi_values(fb, alpha, field)
    maps = rep_matrices(M, field)
    targets = sorted(gamma_in(q, l))
    sources = sorted(gamma_out(q, l))
    grid = {}
    for i, y in enumerate(targets):
        for j, x in enumerate(sources):
            blk = Matrix.zeros(M.dims[y], M.dims[x], field)
            for p in paths_between(q, x, y, l):
                c = _path_value(phis, p, field)
                if not c:
                    continue
                Mp = Matrix.identity(M.dims[x], field)
                for a in p.arrows:
                    Mp = maps[a.id] @ Mp
                blk = blk + Mp.scale(c)
            grid[(i, j)] = blk
    return Matrix.block(grid, [M.dims[y] for y in targets], [M.dims[x] for x in sources], field)


@dataclass(frozen=True)
class HomExt:
    l: int
    hom: int
    ext1: int
    rank: int
    out_dim: int
    in_dim: int

    def to_json(self) -> dict:
        return {"l": self.l, "hom": self.hom, "ext1": self.ext1, "rank": self.rank,
                "sum_out": self.out_dim, "sum_in": self.in_dim}


def hom_ext(M: Representation, fb: FlowBasis, alpha, l: int, field=QQ) -> HomExt:
    """Dimensions of ``Hom`` and ``Ext^1`` from ``X^l_alpha`` to ``M``.

    Both ranks — of ``alpha_M^l`` and of the path-sum map — are computed and
    must agree.
    """
    _check_l(fb, l, max(1, fb.loewy_length - 1))
    pt = eval_point(fb, alpha, field)
    if not path_condition(fb, pt, l, field):
        raise FinjPreconditionError(f"presentation of length {l} is not injective at this point")
    q = M.quiver
    rank_alpha = _power(build_operator(M, fb, pt, field), l).rank()
    rank_delta = delta_matrix(M, fb, pt, l, field).rank()
    if rank_alpha != rank_delta:
        raise AssertionError(f"rank of alpha^{l} ({rank_alpha}) differs from path-sum rank ({rank_delta})")
    out_dim = sum(M.dims[x] for x in gamma_out(q, l))
    in_dim = sum(M.dims[y] for y in gamma_in(q, l))
    hom, ext = out_dim - rank_alpha, in_dim - rank_alpha
    assert hom + rank_alpha == out_dim and ext + rank_alpha == in_dim and hom >= 0 and ext >= 0
    return HomExt(l, hom, ext, rank_alpha, out_dim, in_dim)


def hom_dim_X(M: Representation, fb: FlowBasis, alpha, l: int, field=QQ) -> int:
    return hom_ext(M, fb, alpha, l, field).hom


def ext1_dim_X(M: Representation, fb: FlowBasis, alpha, l: int, field=QQ) -> int:
    return hom_ext(M, fb, alpha, l, field).ext1


# -- locus-level verdicts -----------------------------------------------------------------


@dataclass
class PropertyVerdict:
    prop: str  # "EIP" or "EKP"
    holds: bool
    samples_used: int
    failure_bound: Fraction | None = None
    witness: dict | None = None
    failing_l: int | None = None
    tables: list = dc_field(default_factory=list)  # per sample point: list of HomExt

    @property
    def kind(self) -> str:
        return f"{self.prop}Probable" if self.holds else f"Not{self.prop}"

    def to_json(self) -> dict:
        out = {
            "verdict": self.kind,
            "property": self.prop,
            "samples_used": self.samples_used,
        }
        if self.holds:
            out["failure_bound"] = str(self.failure_bound)
        else:
            out["witness"] = point_json(self.witness)
            out["failing_l"] = self.failing_l
        out["hom_ext"] = [{"point": point_json(p), "rows": [h.to_json() for h in rows]} for p, rows in self.tables]
        return out


def _property_at(M, fb, pt, prop, field):
    """First ``l`` where the property fails at ``pt``, or None."""
    test = is_EIP_at if prop == "EIP" else is_EKP_at
    for l in range(1, fb.loewy_length + 1):
        if not test(M, fb, pt, l, field):
            return l
    return None


def _check_property(prop, M, fb, locus, budget, seed, field, table_points=3):
    locus = locus or v_inj()
    budget = budget or Budget(per_stratum=50, dense=200)
    field = field or GF(DEFAULT_PRIME)
    rng = random.Random(f"{seed}:{prop}:generic")
    pts = locus.sample(fb, rng, budget.generic, QQ, budget.rejection)
    kron = _is_kronecker(M.quiver)
    examined = 0

    def fails(pt):
        l = _property_at(M, fb, pt, prop, field)
        if kron and prop == "EIP":
            if (l is None) != kronecker_surjectivity(M, pt, field):
                raise AssertionError("EIP test disagrees with the Kronecker surjectivity criterion")
        return l

    cands = [("generic", p) for p in pts] + list(_candidates(fb, budget, f"{seed}:{prop}"))
    for _, pt in cands:
        if not _reduce_ok(pt, field) or not locus.contains(fb, pt, field):
            continue
        examined += 1
        l = fails(pt)
        if l is not None and _property_at(M, fb, pt, prop, QQ) is not None:
            return PropertyVerdict(prop, False, examined, witness=pt, failing_l=_property_at(M, fb, pt, prop, QQ))
    tables = []
    for pt in pts[:table_points]:
        rows = []
        for l in range(1, max(2, fb.loewy_length)):
            if l <= fb.loewy_length - 1 and path_condition(fb, pt, l, QQ):
                rows.append(hom_ext(M, fb, pt, l, QQ))
        tables.append((pt, rows))
    # each failing set is cut out by minors of size dim R^l (resp. sum over Γ^l_out)
    delta = flow_degree(fb)
    total = Fraction(0)
    for l in range(1, fb.loewy_length):
        if prop == "EIP":
            g = sum(M.dims[y] for y in gamma_in(M.quiver, l))
        else:
            g = sum(M.dims[x] for x in gamma_out(M.quiver, l))
        D = g * l * delta
        if D:
            total += Fraction(D, 10**6) ** budget.generic
    return PropertyVerdict(prop, True, examined, failure_bound=min(Fraction(1), total), tables=tables)


def check_EIP(M: Representation, fb: FlowBasis, locus=None, budget: Budget | None = None, seed=0, field=None):
    """EIP at every sampled and structured point of the locus (default V_inj).

    A NO carries an exact witness; a YES is probabilistic.  The failure bound
    covers the event that EIP fails generically yet every random sample hits
    the exceptional set.
    """
    return _check_property("EIP", M, fb, locus, budget, seed, field)


def check_EKP(M: Representation, fb: FlowBasis, locus=None, budget: Budget | None = None, seed=0, field=None):
    return _check_property("EKP", M, fb, locus, budget, seed, field)


# -- quotient laws ----------------------------------------------------------------------


def expected_quotient_R(t: JordanType, l: int) -> JordanType:
    """Type of ``M / R^l``: blocks longer than ``l`` are cut down to size ``l``."""
    L = t.L
    b = [0] * L
    for k in range(1, L + 1):
        if k < l:
            b[k - 1] = t[k]
        elif k == l:
            b[k - 1] = sum(t[j] for j in range(l, L + 1))
    return JordanType(b)


def expected_quotient_S(t: JordanType, l: int) -> JordanType:
    """Type of ``M / S^l``: a block of size ``k`` becomes one of size ``k - l``."""
    L = t.L
    return JordanType([t[k + l] if k + l <= L else 0 for k in range(1, L + 1)])


@dataclass
class LawReport:
    kind: str  # "R" or "S"
    l: int
    points_checked: int
    violations: list = dc_field(default_factory=list)  # (point, expected, observed)

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_json(self) -> dict:
        return {
            "quotient": self.kind, "l": self.l, "points_checked": self.points_checked,
            "violations": [{"point": point_json(p), "expected": e.to_json(), "observed": o.to_json()}
                           for p, e, o in self.violations],
        }


def quotient_jtype_laws(M: Representation, fb: FlowBasis, locus=None, l: int = 1, kind: str = "R",
                        samples: int = 20, seed=0, verdict: PropertyVerdict | None = None,
                        field=QQ) -> LawReport:
    """Check the Jordan types of ``M/R^l`` (kind R, for EIP modules) or ``M/S^l`` (kind S, EKP)."""
    if kind not in ("R", "S"):
        raise ValueError("kind must be 'R' or 'S'")
    prop = "EIP" if kind == "R" else "EKP"
    locus = locus or v_inj()
    if verdict is None:
        verdict = _check_property(prop, M, fb, locus, Budget(per_stratum=10, dense=20), seed, None, 0)
    if verdict.prop != prop:
        raise PreconditionError(f"quotient by {kind} needs a {prop} verdict, got {verdict.prop}")
    if not verdict.holds:
        raise PreconditionError(f"module fails {prop}; the quotient law does not apply")
    Q = quotient_by_R(M, l) if kind == "R" else quotient_by_S(M, l)
    rng = random.Random(f"{seed}:laws")
    pts = locus.sample(fb, rng, samples, QQ)
    report = LawReport(kind, l, len(pts))
    for pt in pts:
        t = jordan_type_at(M, fb, pt, field)
        want = expected_quotient_R(t, l) if kind == "R" else expected_quotient_S(t, l)
        got = jordan_type_at(Q, fb, pt, field)
        if got != want:
            report.violations.append((pt, want, got))
    return report


# -- closure under quotients, submodules, extensions ------------------------------------------


def ses_from_subspaces(M: Representation, spaces: dict):
    """``(sub, M, quotient)`` for a subrepresentation given by vertex subspaces."""
    sub, _ = subrepresentation(M, spaces)
    quo, _ = quotient(M, spaces)
    return sub, M, quo


def ses_from_extension(N: Representation, Q: Representation, seed=0):
    """``(N, E, Q)`` with ``E`` a random extension of ``Q`` by ``N``."""
    return N, random_extension(N, Q, seed), Q


@dataclass
class ClosureReport:
    checks: int = 0
    violations: list = dc_field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_json(self) -> dict:
        return {"checks": self.checks, "violations": self.violations}


def _holds_all(M, fb, pt, prop, field):
    return _property_at(M, fb, pt, prop, field) is None


def torsion_closure_probe(triples, fb: FlowBasis, locus=None, samples: int = 5, seed=0, field=QQ) -> ClosureReport:
    """Pointwise closure checks on short exact sequences ``0 -> A -> B -> C -> 0``.

    At each sampled locus point: B EIP implies C EIP; B EKP implies A EKP;
    A and C EIP (resp. EKP) imply B EIP (resp. EKP).
    """
    locus = locus or v_inj()
    rng = random.Random(f"{seed}:closure")
    pts = locus.sample(fb, rng, samples, QQ)
    rep = ClosureReport()
    for k, (A, B, C) in enumerate(triples):
        if A.total_dim + C.total_dim != B.total_dim:
            raise ValueError(f"triple {k} is not a short exact sequence (dimensions)")
        for pt in pts:
            eip = [_holds_all(X, fb, pt, "EIP", field) for X in (A, B, C)]
            ekp = [_holds_all(X, fb, pt, "EKP", field) for X in (A, B, C)]
            rules = [
                ("quotient of EIP is EIP", eip[1], eip[2]),
                ("submodule of EKP is EKP", ekp[1], ekp[0]),
                ("extension of EIP is EIP", eip[0] and eip[2], eip[1]),
                ("extension of EKP is EKP", ekp[0] and ekp[2], ekp[1]),
            ]
            for name, premise, conclusion in rules:
                rep.checks += 1
                if premise and not conclusion:
                    rep.violations.append({"triple": k, "rule": name, "point": point_json(pt)})
    return rep


# -- injective Jordan types and virtual realization -----------------------------------------


@dataclass
class JtypeTable:
    vertices: list  # x_0 .. x_{L-1}
    rows: list  # JordanType of I(x_l)
    points_checked: int

    @property
    def L(self) -> int:
        return len(self.rows)

    def matrix(self) -> list:
        return [list(t.a) for t in self.rows]

    def is_unitriangular(self) -> bool:
        T = self.matrix()
        return all(T[l][l] == 1 and all(T[l][j] == 0 for j in range(l + 1, self.L)) for l in range(self.L))

    def solve(self, target) -> list:
        """Integer coefficients ``c`` with ``sum_l c_l Jtype(I(x_l)) = target``."""
        v = list(target.a if isinstance(target, JordanType) else target)
        if len(v) != self.L:
            raise ValueError(f"target has length {len(v)}, expected {self.L}")
        T = self.matrix()
        c = [0] * self.L
        for l in range(self.L - 1, -1, -1):
            c[l] = v[l] - sum(c[m] * T[m][l] for m in range(l + 1, self.L))
        return c

    def realize(self, target) -> tuple:
        """Coefficients plus the recombined virtual type (checked to equal the target)."""
        c = self.solve(target)
        t = jtype_combination(c, self.rows)
        want = JordanType(target.a if isinstance(target, JordanType) else target)
        if t != want:
            raise AssertionError("virtual combination does not reproduce the target")
        return c, t

    def to_json(self) -> dict:
        return {"vertices": self.vertices, "matrix": self.matrix(), "unitriangular": self.is_unitriangular(),
                "points_checked": self.points_checked}


def injective_jtype_table(q: Quiver, fb: FlowBasis, locus=None, samples: int = 3, seed=0,
                          field=QQ) -> JtypeTable:
    """Jordan types of ``I(x_l)`` for ``x_l`` the smallest vertex at level ``l``.

    The row for level ``l`` has a single block of size ``l + 1`` plus smaller
    blocks, so the table is lower unitriangular and its rows form a basis of
    ``Z^L``.
    """
    L = loewy_length(q)
    chosen = []
    for l in range(L):
        lv = level_vertices(q, l)
        if not lv:
            raise LevelGapError(f"no vertex has longest incoming path of length exactly {l}")
        chosen.append(lv[0])
    locus = locus or v_inj()
    rng = random.Random(f"{seed}:jtable")
    try:
        pts = locus.sample(fb, rng, samples, QQ)
    except LocusEmptyError:
        raise
    rows = []
    for x in chosen:
        I = injective(q, x)
        types = {jordan_type_at(I, fb, pt, field) for pt in pts}
        if len(types) != 1:
            raise AssertionError(f"I({x}) has varying Jordan type on the sampled points")
        rows.append(types.pop())
    table = JtypeTable(chosen, rows, len(pts))
    if not table.is_unitriangular():
        raise AssertionError(f"injective Jordan-type table is not unitriangular: {table.matrix()}")
    return table
