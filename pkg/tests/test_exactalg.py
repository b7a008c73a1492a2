from fractions import Fraction

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from cjtkit.exactalg import (
    GF,
    QQ,
    FieldMismatchError,
    Matrix,
    MultiPoly,
    bareiss_rank,
    buchberger,
    contains,
    equal,
    in_ideal,
    intersect,
    is_groebner,
    parse_field,
    parse_rational,
    quotient_dim,
    reduce,
    span_basis,
    subspace_sum,
)

P31 = 2**31 - 1
small = st.integers(min_value=-4, max_value=4)
fracs = st.fractions(min_value=-5, max_value=5, max_denominator=6)


def matrices(entries=small, max_rows=6, max_cols=6):
    return st.integers(1, max_rows).flatmap(
        lambda r: st.integers(1, max_cols).flatmap(
            lambda c: st.lists(st.lists(entries, min_size=c, max_size=c), min_size=r, max_size=r)))


# -- fields ----------------------------------------------------------------------

def test_parse_rational_accepts_ints_and_strings():
    assert parse_rational(3) == 3
    assert parse_rational("-7/4") == Fraction(-7, 4)
    with pytest.raises(ValueError):
        parse_rational("1/0")
    with pytest.raises((ValueError, TypeError)):
        parse_rational(0.5)


def test_parse_field():
    assert parse_field("q") is QQ
    assert parse_field("fp") == GF()
    assert parse_field("fp:2147483647") == GF(2147483647)
    with pytest.raises(ValueError):
        parse_field("reals")


def test_prime_field_arithmetic():
    F = GF(P31)
    assert F(-1) == P31 - 1
    assert F(F.inv(7) * 7) == 1
    with pytest.raises(ZeroDivisionError):
        F.inv(0)
    with pytest.raises(ValueError):
        GF(101)  # too small for the sampling bounds


def test_mixed_fields_rejected():
    with pytest.raises(FieldMismatchError):
        Matrix.identity(2, QQ) @ Matrix.identity(2, GF(P31))


# -- matrices --------------------------------------------------------------------

@given(matrices())
def test_rank_matches_sympy(rows):
    assert Matrix.from_rows(rows).rank() == sympy.Matrix(rows).rank()


@given(matrices(fracs))
def test_rank_methods_agree(rows):
    m = Matrix.from_rows(rows)
    assert m.rank("bareiss") == m.rank("sparse") == bareiss_rank(rows)


@given(matrices())
def test_rank_mod_large_prime_equals_rational_rank(rows):
    # minors of a 6x6 matrix with entries in [-4, 4] are far below the modulus
    assert Matrix.from_rows(rows, GF()).rank() == Matrix.from_rows(rows).rank()


@given(matrices(fracs))
def test_rank_nullity(rows):
    m = Matrix.from_rows(rows)
    ker = m.kernel_basis()
    assert len(ker) + m.rank() == m.ncols
    for v in ker:
        assert all(x == 0 for x in m.apply(v))


@given(matrices(fracs))
def test_transpose_preserves_rank(rows):
    m = Matrix.from_rows(rows)
    assert m.T.rank() == m.rank() == len(m.image_basis()) == len(m.row_space_basis())


@given(matrices(small, 5, 5), st.lists(small, min_size=5, max_size=5))
def test_solve_consistent_systems(rows, x):
    m = Matrix.from_rows(rows)
    x = x[:m.ncols]
    b = m.apply(x)
    sol = m.solve(b)
    assert sol is not None and m.apply(sol) == b


def test_solve_inconsistent():
    m = Matrix.from_rows([[1, 1], [2, 2]])
    assert m.solve([1, 3]) is None


@given(matrices(small, 4, 4), matrices(small, 4, 4))
def test_matmul_matches_sympy(a, b):
    A, B = Matrix.from_rows(a), Matrix.from_rows(b)
    if A.ncols != B.nrows:
        return
    assert (A @ B).to_list() == (sympy.Matrix(a) * sympy.Matrix(b)).tolist()


def test_block_layout():
    A = Matrix.from_rows([[1, 2]])
    B = Matrix.from_rows([[3], [4]])
    m = Matrix.block({(0, 0): A, (1, 1): B}, [1, 2], [2, 1])
    assert m.to_list() == [[1, 2, 0], [0, 0, 3], [0, 0, 4]]
    assert Matrix.block_diag([A, B]).shape == (3, 3)


def test_zero_size_matrices():
    assert Matrix.zeros(0, 3).rank() == 0
    assert len(Matrix.zeros(0, 3).kernel_basis()) == 3


# -- subspaces -------------------------------------------------------------------

vectors = st.lists(st.lists(small, min_size=4, max_size=4), min_size=0, max_size=4)


@given(vectors, vectors)
def test_dimension_formula(U, W):
    dU = len(span_basis(U, QQ, 4))
    dW = len(span_basis(W, QQ, 4))
    assert len(subspace_sum(U, W, QQ, 4)) + len(intersect(U, W, QQ, 4)) == dU + dW
    assert quotient_dim(U, W, QQ, 4) == dU - len(intersect(U, W, QQ, 4))


@given(vectors, vectors)
def test_intersection_is_contained_in_both(U, W):
    X = intersect(U, W, QQ, 4)
    assert contains(U, X) and contains(W, X)
    assert equal(subspace_sum(U, W, QQ, 4), subspace_sum(W, U, QQ, 4))


# -- polynomials and Groebner bases ----------------------------------------------

XY = ("x", "y", "z")


def polys():
    term = st.tuples(st.tuples(st.integers(0, 2), st.integers(0, 2), st.integers(0, 2)), st.integers(-3, 3))
    return st.lists(term, min_size=1, max_size=3).map(lambda ts: MultiPoly(XY, dict(ts)))


def to_sympy(f: MultiPoly):
    syms = sympy.symbols(XY)
    return sum(sympy.Rational(c.numerator, c.denominator) * sympy.prod(s ** k for s, k in zip(syms, e))
               for e, c in f.terms.items())


@given(polys(), polys())
def test_poly_arithmetic_matches_sympy(f, g):
    assert sympy.expand(to_sympy(f * g) - to_sympy(f) * to_sympy(g)) == 0
    assert sympy.expand(to_sympy(f - g) - (to_sympy(f) - to_sympy(g))) == 0


@given(st.lists(polys(), min_size=1, max_size=3))
def test_buchberger_generators_reduce_to_zero(gens):
    G = buchberger(gens)
    assert is_groebner(G)
    for g in gens:
        assert reduce(g, G).is_zero()


@given(st.lists(polys(), min_size=1, max_size=3), polys())
def test_ideal_membership_of_combinations(gens, h):
    G = buchberger(gens)
    assert in_ideal(h * gens[0], G)


def test_buchberger_matches_sympy_groebner():
    x, y, z = (MultiPoly.var(XY, v) for v in XY)
    gens = [x * x - y, x * y - z, y * y - x * z]
    ours = buchberger(gens)
    theirs = sympy.groebner([to_sympy(g) for g in gens], *sympy.symbols(XY), order="grevlex")
    assert {sympy.expand(to_sympy(g)) for g in ours} == {sympy.expand(g) for g in theirs.exprs}


def test_unit_and_zero_ideal():
    x, y, _ = (MultiPoly.var(XY, v) for v in XY)
    one = MultiPoly.constant(XY, 1)
    assert buchberger([x, x - one]) == [one]
    assert buchberger([MultiPoly(XY)]) == []
    # Rabinowitsch trick: 1 in (x*y, 1 - t*x*y) shows x*y never vanishes on V(x*y)^c
    assert buchberger([x * y, one - x * y]) == [one]


def test_evaluate_and_divide():
    x, y, _ = (MultiPoly.var(XY, v) for v in XY)
    f = (x + y) ** 2
    assert f.evaluate({"x": 1, "y": 2, "z": 0}) == 9
    assert f.exact_div(x + y) == x + y
    assert f.evaluate({"x": 3, "y": 5, "z": 0}, GF(P31)) == 64
