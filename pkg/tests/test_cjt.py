import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cjtkit import direct_sum, enumerate_flow_points, kronecker_I, kronecker_P, kronecker_quiver, kronecker_weight
from cjtkit.cjt import (
    Budget,
    CertificationRefusal,
    CertifiedConstant,
    ConstantProbable,
    LocusEmptyError,
    NotConstant,
    RankCertificate,
    certify_constant_rank,
    check_constant_jordan_type,
    coordinate_strata,
    custom_locus,
    locus_by_name,
    poly_bareiss,
    symbolic_operator,
    v_inj,
    v_max,
    verify_certificate,
    verify_witness,
)
from cjtkit.exactalg import Matrix, MultiPoly
from cjtkit.flows import eval_point, in_F_inj
from cjtkit.jordan import JordanType, profile_at
from cjtkit.quiver import Representation, injective, projective, semisimple
from workloads import random_module, random_setup, small_point

SMALL = Budget(per_stratum=20, dense=60, generic=8)


@pytest.fixture(scope="module")
def regular(k2):
    q, _ = k2
    return Representation(q, {"1": 1, "2": 1}, {"a1": [[1]], "a2": [[1]]})


def test_regular_module_is_not_constant(k2, regular):
    _, fb = k2
    v = check_constant_jordan_type(regular, fb, seed=0)
    assert isinstance(v, NotConstant) and not v.is_constant
    w = v.witness
    assert w["a1"] + w["a2"] == 0 and w["a1"] != 0
    assert v.witness_profile.ranks == (2, 0, 0) and v.generic_profile.ranks == (2, 1, 0)
    assert verify_witness(regular, fb, v)


def test_witnesses_are_deterministic(running):
    q, fb = running
    M = projective(q, "2")
    a = check_constant_jordan_type(M, fb, seed=7)
    b = check_constant_jordan_type(M, fb, seed=7)
    assert isinstance(a, NotConstant)
    assert a.to_json() == b.to_json()
    assert verify_witness(M, fb, a)


def test_tampered_witness_is_rejected(k2, regular):
    _, fb = k2
    v = check_constant_jordan_type(regular, fb, seed=0)
    bad = NotConstant({"a1": 1, "a2": 1}, v.witness_profile, v.generic_profile, v.reference, v.stage)
    assert not verify_witness(regular, fb, bad)
    outside = NotConstant({"a1": 0, "a2": 0}, v.witness_profile, v.generic_profile, v.reference, v.stage)
    assert not verify_witness(regular, fb, outside)


@pytest.mark.parametrize("n", [1, 2, 4])
def test_preprojectives_are_constant(k2, n):
    _, fb = k2
    v = check_constant_jordan_type(kronecker_P(n), fb, budget=SMALL, seed=n)
    assert isinstance(v, ConstantProbable) and v.jtype == JordanType((1, n))
    assert 0 < v.failure_bound < 1e-30
    assert v.samples_used > SMALL.generic


def test_injectives_on_vinj_are_constant(running):
    q, fb = running
    for x in q.vertices:
        v = check_constant_jordan_type(injective(q, x), fb, v_inj(), SMALL, seed=1)
        assert isinstance(v, ConstantProbable), x


def test_vinj_witnesses_stay_in_vinj(running):
    q, fb = running
    M = projective(q, "0")
    v = check_constant_jordan_type(M, fb, v_inj(), SMALL, seed=3)
    if isinstance(v, NotConstant):
        assert in_F_inj(fb, v.witness) and verify_witness(M, fb, v, v_inj())


def test_custom_locus(k2, regular):
    _, fb = k2
    positive = custom_locus(lambda fb, pt, field: all(x > 0 for x in pt.values()), name="positive")
    v = check_constant_jordan_type(regular, fb, positive, SMALL, seed=0)
    assert isinstance(v, ConstantProbable)  # a1 + a2 never vanishes there
    empty = custom_locus(lambda fb, pt, field: False)
    with pytest.raises(LocusEmptyError):
        check_constant_jordan_type(regular, fb, empty, Budget(rejection=10), seed=0)
    assert locus_by_name("vinj").kind == "vinj" and locus_by_name("v").kind == "v"
    with pytest.raises(ValueError):
        locus_by_name("everywhere")


def test_coordinate_strata(running):
    _, fb = running
    strata = coordinate_strata(fb)
    assert ("a1",) in strata and ("a4",) in strata
    assert ("a1", "a2", "a3") not in strata  # would kill every flow monomial
    assert all(len(a) <= len(b) for a, b in zip(strata, strata[1:]))


def test_v_max(k2, regular):
    _, fb = k2
    rep = v_max(regular, fb, samples=5, seed=0)
    assert rep.generic_profile.ranks == (2, 1, 0)
    assert rep.non_maximal and all(p["a1"] == -p["a2"] for p, _ in rep.non_maximal)
    assert v_max(kronecker_P(2), fb, samples=5, seed=0).non_maximal == []


# -- certification ---------------------------------------------------------------

def test_certify_P1(k2):
    _, fb = k2
    cert = certify_constant_rank(kronecker_P(1), fb, 1)
    assert isinstance(cert, RankCertificate) and cert.generic_rank == 1
    assert {str(m) for m in cert.minors} == {"a1", "a2"}
    assert verify_certificate(cert, fb)


def test_certify_refuses_regular(k2, regular):
    _, fb = k2
    ref = certify_constant_rank(regular, fb, 1)
    assert isinstance(ref, CertificationRefusal) and ref.reason == "non-unit saturation"


def test_certified_verdict(k2):
    _, fb = k2
    v = check_constant_jordan_type(kronecker_P(2), fb, budget=SMALL, seed=0, certify=True)
    assert isinstance(v, CertifiedConstant) and v.jtype == JordanType((1, 2))
    assert all(verify_certificate(c, fb) for c in v.certificates)


def test_certification_caps(running):
    q, fb = running
    big = semisimple(q, {"0": 7, "1": 7})
    ref = certify_constant_rank(big, fb, 1)
    assert isinstance(ref, CertificationRefusal) and ref.reason == "caps"
    v = check_constant_jordan_type(big, fb, budget=SMALL, seed=0, certify=True)
    assert isinstance(v, ConstantProbable) and v.refusals and v.refusals[0].reason == "caps"


def test_tampered_certificate_fails(k2):
    _, fb = k2
    cert = certify_constant_rank(kronecker_P(1), fb, 1)
    cert.minors = [cert.minors[0] * cert.minors[0]]  # ideal (a1^2) misses the chart a2 != 0
    assert not verify_certificate(cert, fb)


def test_symbolic_operator_evaluates_to_numeric(running):
    q, fb = running
    M = projective(q, "0")
    A = symbolic_operator(M, fb)
    pt = eval_point(fb, (1, -2, 3, 1))
    num = profile_at(M, fb, pt)
    vals = [[f.evaluate(pt) for f in row] for row in A]
    assert Matrix.from_rows(vals).rank() == num.ranks[1]
    rank, _ = poly_bareiss(A, fb.variables)
    assert rank >= num.ranks[1]


def test_poly_bareiss_determinant():
    v = ("x", "y")
    x, y = MultiPoly.var(v, "x"), MultiPoly.var(v, "y")
    rank, det = poly_bareiss([[x, y], [y, x]], v)
    assert rank == 2 and det == x * x - y * y
    rank, _ = poly_bareiss([[x, y], [x * y, y * y]], v)
    assert rank == 1


# -- properties ------------------------------------------------------------------

@settings(max_examples=15)
@given(st.integers(0, 2**32 - 1))
def test_verdicts_are_consistent(seed):
    rng = random.Random(seed)
    q, fb = random_setup(rng, (2, 3), (1, 3))
    M = random_module(rng, q, 4)
    v = check_constant_jordan_type(M, fb, budget=SMALL, seed=seed)
    if isinstance(v, NotConstant):
        assert verify_witness(M, fb, v)
    else:
        for _ in range(3):
            pt = small_point(rng, fb, 1, 9)
            assert profile_at(M, fb, pt).dominated_by(v.generic_profile)


@settings(max_examples=10)
@given(st.integers(0, 3), st.integers(0, 2**32 - 1))
def test_summand_with_varying_type_varies(n, seed):
    q = kronecker_quiver(2)
    fb = enumerate_flow_points(q, kronecker_weight(q))
    reg = Representation(q, {"1": 1, "2": 1}, {"a1": [[1]], "a2": [[1]]})
    M = direct_sum(reg, kronecker_I(n))
    v = check_constant_jordan_type(M, fb, budget=SMALL, seed=seed)
    assert isinstance(v, NotConstant) and verify_witness(M, fb, v)
