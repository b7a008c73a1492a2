import itertools
import random

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from cjtkit import FlowBasis, Weight, enumerate_flow_points, kronecker_quiver, kronecker_weight
from cjtkit.exactalg import GF, QQ, MultiPoly
from cjtkit.flows import (
    EmptySemistableLocus,
    SamplingBudgetError,
    WeightError,
    finj_failures,
    in_F_inj,
    in_V_inj,
    is_semistable,
    phi_arrow,
    phi_path,
    phi_values,
    sample_semistable,
)
from cjtkit.quiver import Path, Quiver, gamma_in, loewy_length
from workloads import divergence, random_setup

setups = st.integers(0, 2**32 - 1).map(lambda s: random_setup(random.Random(s), max_label=2))


def brute_force_flows(q, sigma):
    bound = sum(max(s, 0) for s in sigma.values())
    found = []
    for r in itertools.product(range(bound + 1), repeat=len(q.arrows)):
        if divergence(q, r) == sigma:
            found.append(r)
    return sorted(found, reverse=True)


def sympy_phi(fb):
    syms = sympy.symbols(fb.variables)
    out = {}
    for k, a in enumerate(fb.variables):
        out[a] = sympy.expand(sum(r[k] * sympy.prod(s ** e for s, e in zip(syms, r)) for r in fb.points))
    return out


def as_sympy(f: MultiPoly):
    syms = sympy.symbols(f.variables)
    return sympy.expand(sum(sympy.Rational(c.numerator, c.denominator) * sympy.prod(s ** e for s, e in zip(syms, ex))
                            for ex, c in f.terms.items()))


def test_running_example_flow_points(running):
    _, fb = running
    assert list(fb.points) == [(1, 1, 0, 0), (1, 0, 1, 0), (0, 2, 0, 1), (0, 1, 1, 1), (0, 0, 2, 1)]
    assert fb.bound == 2


@pytest.mark.parametrize("n", range(1, 7))
def test_kronecker_flow_points(n):
    q = kronecker_quiver(n)
    fb = enumerate_flow_points(q, kronecker_weight(q))
    assert sorted(fb.points) == sorted(tuple(int(i == j) for j in range(n)) for i in range(n))


def test_weight_validation():
    q = kronecker_quiver(2)
    with pytest.raises(WeightError):
        Weight.of(q, {"1": 1, "2": 0})
    with pytest.raises(WeightError):
        Weight.of(q, {"1": 0, "2": 0})
    with pytest.raises(WeightError):
        Weight.of(q, {"3": 1})
    with pytest.raises(WeightError):
        Weight.of(Quiver(["x"], []), {"x": 0})


def test_empty_flow_polytope():
    q = kronecker_quiver(2)
    with pytest.raises(EmptySemistableLocus):
        enumerate_flow_points(q, {"1": -1, "2": 1})


@given(setups)
def test_enumeration_matches_brute_force(setup):
    q, fb = setup
    assert list(fb.points) == brute_force_flows(q, fb.weight.as_dict())


@given(setups)
def test_phi_routes_agree(setup):
    _, fb = setup
    theirs = sympy_phi(fb)
    by_monomial = fb.phi_polys_by_monomial()
    for a in fb.variables:
        assert fb.phi_polys[a] == by_monomial[a]
        assert as_sympy(fb.phi_polys[a]) == theirs[a]


def test_running_example_phi_closed_forms(running):
    _, fb = running
    v = fb.variables
    x1, x2, x3, x4 = (MultiPoly.var(v, a) for a in v)
    assert fb.phi_polys["a1"] == x1 * x2 + x1 * x3
    assert fb.phi_polys["a2"] == x1 * x2 + 2 * x2 ** 2 * x4 + x2 * x3 * x4
    assert fb.phi_polys["a3"] == x1 * x3 + x2 * x3 * x4 + 2 * x3 ** 2 * x4
    assert fb.phi_polys["a4"] == x2 ** 2 * x4 + x2 * x3 * x4 + x3 ** 2 * x4


def test_running_example_points(running):
    q, fb = running
    assert is_semistable(fb, (1, 2, 0, 0))
    assert not in_F_inj(fb, (1, 2, 0, 0))
    assert finj_failures(fb, (1, 2, 0, 0)) == [(2, "1")]
    assert in_V_inj(fb, (1, 1, 1, 1))
    vals = phi_values(fb, (1, 1, 1, 1))
    assert vals == {"a1": 2, "a2": 4, "a3": 4, "a4": 3}
    p = Path("0").then(q.arrow("a2")).then(q.arrow("a4"))
    assert phi_path(fb, (1, 1, 1, 1), p) == 12
    assert phi_path(fb, (1, 1, 1, 1), Path("0")) == 1
    assert phi_arrow(fb, {"a1": 1, "a2": 2, "a3": 0, "a4": 0}, "a1") == 2


def test_kronecker_semistability(k2):
    _, fb = k2
    assert not is_semistable(fb, (0, 0))
    assert is_semistable(fb, (1, 0))
    assert in_F_inj(fb, (0, 5))


def test_point_validation(k2):
    _, fb = k2
    with pytest.raises(ValueError):
        is_semistable(fb, (1,))
    with pytest.raises(ValueError):
        is_semistable(fb, {"a1": 1})
    with pytest.raises(ValueError):
        is_semistable(fb, {"a1": 1, "a2": 1, "a9": 1})


@given(setups, st.sampled_from(["dense", "support", "finj"]), st.integers(0, 1000))
def test_samplers_produce_valid_points(setup, strategy, seed):
    _, fb = setup
    field = GF()
    pts = sample_semistable(fb, strategy, seed, 4, field)
    assert len(pts) == 4
    for pt in pts:
        assert is_semistable(fb, pt, field)
        if strategy == "dense":
            assert all(pt[a] != 0 for a in fb.variables)
        if strategy == "finj":
            assert in_F_inj(fb, pt, field)
    assert pts == sample_semistable(fb, strategy, seed, 4, field)


def test_support_sampler_respects_support(running):
    _, fb = running
    supports = {frozenset(a for a, x in zip(fb.variables, r) if x) for r in fb.points}
    for pt in sample_semistable(fb, "support", 1, 20, QQ):
        assert frozenset(a for a in fb.variables if pt[a]) in supports


def test_finj_budget_exhaustion():
    # the length-2 path a2 a1 always has coefficient zero: no flow uses both arrows
    q = Quiver(["x", "y", "z"], [("a1", "x", "y"), ("a2", "y", "z"), ("a3", "x", "z")])
    fb = enumerate_flow_points(q, {"x": 1, "y": -1, "z": 0})
    assert gamma_in(q, 2) == {"z"} and loewy_length(q) == 3
    with pytest.raises(SamplingBudgetError):
        sample_semistable(fb, "finj", 0, 1, QQ, budget=20)


def test_flow_basis_json(k2):
    _, fb = k2
    doc = fb.to_json()
    assert doc["count"] == 2 and doc["points"] == [{"a1": 1, "a2": 0}, {"a1": 0, "a2": 1}]
    assert isinstance(fb, FlowBasis)
