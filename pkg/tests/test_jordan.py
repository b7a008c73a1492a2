import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from cjtkit import direct_sum, kronecker_I, kronecker_P, running_example_quiver
from cjtkit.exactalg import GF, QQ
from cjtkit.flows import is_semistable
from cjtkit.jordan import (
    GenericType,
    JordanType,
    JordanTypeError,
    RankProfile,
    build_operator,
    generic_jordan_type,
    jordan_type_at,
    jtype_add,
    jtype_as_vector,
    jtype_combination,
    jtype_from_profile,
    jtype_scale,
    jtype_sub,
    profile_at,
    profile_from_jtype,
    schwartz_zippel_bound,
    torus_action,
    unit_jtype,
)
from cjtkit.quiver import Representation, injective, projective, semisimple, simple
from oracles import jordan_blocks, multiplicities
from workloads import random_module, random_setup, small_point

genuine = st.lists(st.integers(0, 4), min_size=1, max_size=5).map(JordanType)
seeds = st.integers(0, 2**32 - 1)


# -- Jordan type arithmetic ------------------------------------------------------

@given(genuine)
def test_profile_round_trip(t):
    prof = RankProfile(profile_from_jtype(t))
    assert prof.is_monotone() and prof.is_convex()
    assert jtype_from_profile(prof) == t
    assert prof.ranks[0] == t.dim()


@given(genuine, genuine)
def test_profiles_are_additive(s, t):
    if s.L != t.L:
        with pytest.raises(JordanTypeError):
            jtype_add(s, t)
        return
    ps, pt = profile_from_jtype(s), profile_from_jtype(t)
    assert profile_from_jtype(s + t) == tuple(x + y for x, y in zip(ps, pt))
    assert jtype_sub(s + t, t) == s
    assert jtype_combination([2, -1], [s, t]) == jtype_scale(s, 2) - t


def test_jordan_type_rendering():
    t = JordanType((1, 3))
    assert str(t) == "[2]^3 [1]^1"
    assert t[2] == 3 and t.dim() == 7
    assert str(JordanType((0, 0))) == "0"
    assert t.to_json() == {"blocks": [1, 3], "text": "[2]^3 [1]^1"}
    assert jtype_as_vector(-t) == (-1, -3) and not (-t).is_genuine()
    assert unit_jtype(3, 2) == JordanType((0, 1, 0))
    with pytest.raises(IndexError):
        t[3]


def test_invalid_profiles():
    with pytest.raises(JordanTypeError):
        jtype_from_profile((3, 1, 1))  # not nilpotent
    with pytest.raises(JordanTypeError):
        jtype_from_profile((2,))  # needs at least r_0 and r_1
    with pytest.raises(JordanTypeError):
        jtype_from_profile((4, 3, 0))  # not convex


# -- the operator ----------------------------------------------------------------

def test_kronecker_P4_profile(k2):
    _, fb = k2
    assert profile_at(kronecker_P(4), fb, (1, 1)).ranks == (9, 4, 0)


@pytest.mark.parametrize("n", [0, 1, 2, 5])
def test_kronecker_constant_types(k2, n):
    _, fb = k2
    for pt in [(1, 0), (0, 1), (3, -7), (1, 1)]:
        assert jordan_type_at(kronecker_P(n), fb, pt) == JordanType((1, n))
        assert jordan_type_at(kronecker_I(n), fb, pt) == JordanType((1, n))


def test_injective_of_running_example(running):
    q, fb = running
    prof = profile_at(injective(q, "1"), fb, (1, 1, 1, 1))
    assert prof.ranks == (5, 2, 1, 0)
    assert jordan_type_at(injective(q, "1"), fb, (1, 1, 1, 1)) == JordanType((2, 0, 1))


def test_zero_operator_cases(running, k2):
    q, fb = running
    op = build_operator(simple(q, "1"), fb, (1, 1, 1, 1))
    assert op.matrix.shape == (1, 1) and op.matrix.is_zero()
    # phi vanishes identically at the origin
    M = projective(q, "0")
    assert build_operator(M, fb, (0, 0, 0, 0)).matrix.is_zero()
    _, fk = k2
    assert profile_at(semisimple(fk.quiver, {"1": 2, "2": 3}), fk, (1, 2)).ranks == (5, 0, 0)


def test_block_structure_follows_arrows(running):
    q, fb = running
    M = projective(q, "0")
    A = build_operator(M, fb, (1, 2, 3, 4)).matrix
    for x in q.vertices:
        for y in q.vertices:
            if any(a.tail == x and a.head == y for a in q.arrows):
                continue
            for i in M.block(y):
                for j in M.block(x):
                    assert A[i, j] == 0


@given(seeds)
def test_rank_difference_matches_jordan_form(seed):
    rng = random.Random(seed)
    q, fb = random_setup(rng, (2, 4), (1, 5))
    M = random_module(rng, q, 6)
    pt = small_point(rng, fb)
    op = build_operator(M, fb, pt)
    t = jordan_type_at(M, fb, pt)
    assert t.a == multiplicities(jordan_blocks(op.matrix.to_list()), fb.loewy_length)


@given(seeds)
def test_type_is_additive_pointwise(seed):
    rng = random.Random(seed)
    q, fb = random_setup(rng)
    M, N = random_module(rng, q, 4), random_module(rng, q, 4)
    pt = small_point(rng, fb)
    assert jordan_type_at(direct_sum(M, N), fb, pt) == jordan_type_at(M, fb, pt) + jordan_type_at(N, fb, pt)


@given(seeds)
def test_type_is_torus_invariant(seed):
    rng = random.Random(seed)
    q, fb = random_setup(rng)
    M = random_module(rng, q, 5)
    pt = small_point(rng, fb)
    t = {v: Fraction(rng.choice([-3, -2, -1, 1, 2, 3]), rng.choice([1, 2, 5])) for v in q.vertices}
    moved = torus_action(fb, t, pt)
    assert is_semistable(fb, moved)
    assert jordan_type_at(M, fb, moved) == jordan_type_at(M, fb, pt)


@given(seeds)
def test_prime_field_agrees_with_rationals_for_small_points(seed):
    rng = random.Random(seed)
    q, fb = random_setup(rng)
    M = random_module(rng, q, 5)
    pt = small_point(rng, fb)
    # all minors are tiny integers compared with the modulus
    assert jordan_type_at(M, fb, pt, GF()) == jordan_type_at(M, fb, pt, QQ)


def test_generic_types(k2):
    _, fb = k2
    g = generic_jordan_type(kronecker_P(3), fb, samples=10, seed=1)
    assert isinstance(g, GenericType)
    assert g.jtype == JordanType((1, 3))
    assert 0 < g.failure_bound < Fraction(1, 10**50)
    regular = Representation(fb.quiver, {"1": 1, "2": 1}, {"a1": [[1]], "a2": [[1]]})
    t, prof = generic_jordan_type(regular, fb, samples=5, seed=0)
    assert prof.ranks == (2, 1, 0) and t == JordanType((0, 1))
    with pytest.raises(ValueError):
        generic_jordan_type(regular, fb, samples=0)


def test_failure_bound_shrinks_with_samples(running):
    q, fb = running
    prof = RankProfile((5, 2, 1, 0))
    b1 = schwartz_zippel_bound(prof, fb, 1, GF())
    b5 = schwartz_zippel_bound(prof, fb, 5, GF())
    assert b5 < b1 <= 1


def test_operator_rejects_foreign_quiver(k2, running):
    _, fb = k2
    with pytest.raises(ValueError):
        build_operator(projective(running_example_quiver(), "0"), fb, (1, 1))
