from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from frobound import datasets
from frobound.bounds_engine import (
    Regime,
    bound_for_regime,
    bound_u0_minus_one,
    bound_u0_one,
    bound_u0_zero,
    certificate_from_json,
    check_conditions,
    check_symmetry,
    exclusion_certificate,
    explicit_formula_identity,
    normalize_u0,
    symmetry_order,
    verify_certificate_json,
)
from frobound.cosine_poly import CosinePoly
from frobound.errors import ConditionFailure, RadicandMismatchError, RegimeMismatchError, UnusablePolynomialError
from frobound.exactnum import QField
from frobound.theta_sets import ThetaSet, complement_of_interval
from frobound.zeta import WeilPoly

F = Fraction
S2, S3 = QField.sqrt(2), QField.sqrt(3)
P = datasets.polynomial
T = datasets.theta


def test_conditions_genus_cap():
    c = check_conditions(P("q4-genus-cap"), T("elliptic-q4-over-f2"), Regime.U0_MINUS_ONE, q=4)
    assert c.a and c.b and c.d


def test_regime_mismatch():
    with pytest.raises(RegimeMismatchError):
        check_conditions(P("q4-genus-cap"), T("full"), Regime.U0_ONE)


def test_symmetry_m3():
    f = P("cos-m3")
    assert check_symmetry(f, 3)
    assert symmetry_order(f) == 3
    c = check_conditions(f, complement_of_interval(F(1, 2), -1), Regime.U0_ZERO, q=4, m=3)
    assert c.c


def test_strict_vs_restricted_condition_a():
    f = CosinePoly([1, F(-1, 10), 1])
    assert not check_conditions(f, T("full"), Regime.U0_ONE).a
    assert check_conditions(f, T("full"), Regime.U0_ONE_RESTRICTED).a


def test_linear_bound_q3():
    c = bound_u0_one(P("q3-linear"), T("full"), 3)
    assert c.psi_rinv == F(41, 27) and c.psi_r == 11
    assert c.bound["slope"] == F(54, 41)
    assert c.bound["intercept"] == F(338, 41)
    assert c.bound["intercept"] == 28 - 15 * c.bound["slope"]
    assert c.holds_for(28, 15) and not c.holds_for(29, 15)


def test_linear_bound_f2_normalized():
    f = normalize_u0(P("f2-exclusion"))
    assert f.u0 == 1
    c = bound_u0_one(f, complement_of_interval(F(1, 2), -S2 / 2), 2, strict=False)
    slope = (8 - 2 * S2) / 7
    assert c.bound["slope"] == slope
    assert c.bound["intercept"] == 5 - slope


def test_linear_bound_cubic():
    th = complement_of_interval(-S2 / 2, -1, exclude_pi=True)
    c = bound_u0_one(P("cubic-exclusion"), th, 2, strict=False)
    assert (c.psi_rinv, c.psi_r) == (4, 14)
    assert c.bound["slope"] == F(1, 2) and c.bound["intercept"] == F(9, 2)


def test_linear_bound_unusable():
    with pytest.raises(UnusablePolynomialError):
        bound_u0_one(CosinePoly([1]), T("full"), 2)


def test_genus_free_bound_q2():
    c = bound_u0_zero(P("q2-genus-free"), T("elliptic-q2"), 2)
    assert c.bound["constant"] == 6 and c.bound["floor"] == 6
    assert c.zeros == tuple(T("elliptic-q2").points)
    assert c.equal_counts == (3, 5)


@pytest.mark.parametrize("q", [2, 3, 5, 8])
def test_cos_theta_gives_q_plus_one(q):
    th = complement_of_interval(0, -1, exclude_pi=True)
    c = bound_u0_zero(P("cos-m2"), th, q, m=2)
    assert c.bound["constant"] == q + 1


@pytest.mark.parametrize("q", [2, 3, 4, 7])
def test_cos_m3_gives_r3_plus_one(q):
    th = complement_of_interval(F(1, 2), -1)
    c = bound_u0_zero(P("cos-m3"), th, q, m=3)
    assert c.bound["constant"] == QField.sqrt(q) ** 3 + 1


def test_genus_cap():
    c = bound_u0_minus_one(P("q4-genus-cap"), T("elliptic-q4-over-f2"), 4)
    assert c.psi_rinv == 0 and c.psi_r == 52
    assert c.bound["two_g_max"] == 52 and c.bound["g_max"] == 26
    assert c.holds_for(55, 26) and not c.holds_for(0, 27)


def test_nonpositive_function_rejected_with_witness():
    with pytest.raises(ConditionFailure) as err:
        bound_u0_minus_one(CosinePoly([-1, 0, 1]), T("full"), 4)
    assert err.value.condition == "b"
    assert err.value.witness is not None


def test_genus_cap_condition_d_fails_for_q2():
    # the F_4 polynomial does not vanish at psi(1/sqrt2); psi(1/sqrt2) > 0, so a weaker
    # combined inequality is offered as a fallback
    f, th = P("q4-genus-cap"), T("elliptic-q4-over-f2")
    with pytest.raises(ConditionFailure) as err:
        bound_u0_minus_one(f, th, 2)
    assert err.value.condition == "d"
    fb = err.value.fallback
    assert fb is not None and fb.kind == "combined"
    combined = bound_u0_minus_one(f, th, 2, allow_combined=True)
    assert combined.psi_rinv > 0
    assert combined.to_json() == fb.to_json()


def test_identity_x11():
    ident = explicit_formula_identity(P("q4-genus-cap"), datasets.curve("x11-q4"))
    assert ident.holds and ident.slack_zero
    assert ident.lhs == ident.rhs == 0


def test_identity_genus3():
    ident = explicit_formula_identity(P("q2-genus-free"), datasets.curve("genus3-q2"))
    assert ident.lhs == ident.rhs == 6
    assert ident.slack_zero


def test_identity_deligne_lusztig_is_tight():
    f = P("q3-linear")
    W = datasets.curve("deligne-lusztig-q3")
    ident = explicit_formula_identity(f, W)
    assert ident.holds and ident.slack_zero
    c = bound_u0_one(f, T("full"), 3)
    assert c.bound["slope"] * W.genus + c.bound["intercept"] == 28


def test_identity_radicand_mismatch():
    with pytest.raises(RadicandMismatchError):
        explicit_formula_identity(P("q3-linear"), datasets.curve("genus3-q2"))


def test_exclusion_statements():
    ex = exclusion_certificate(normalize_u0(P("f2-exclusion")), 2, F(1, 2), -S2 / 2, "u0_one_restricted")
    assert (ex.lo, ex.hi, ex.lo_closed) == (-S2 / 2, F(1, 2), False)
    assert "(0.333333π, 0.75π)" in ex.statement()
    ex = exclusion_certificate(P("cubic-exclusion"), 2, -S2 / 2, -1, "u0_one_restricted", exclude_pi=True)
    assert ex.interval_text() == "(0.75π, 1π]"


@pytest.mark.parametrize("q", [2, 5])
def test_negative_trace_exclusion(q):
    ex = exclusion_certificate(P("cos-m2"), q, 0, -1, "u0_zero", exclude_pi=True)
    assert ex.base.bound["constant"] == q + 1
    assert (ex.lo, ex.hi) == (-1, 0)


@pytest.mark.parametrize("k", [F(1, 3), F(2), F(7, 5)])
def test_scaling_invariance(k):
    c0 = bound_u0_zero(P("q2-genus-free"), T("elliptic-q2"), 2)
    c1 = bound_u0_zero(P("q2-genus-free").scale(k), T("elliptic-q2"), 2)
    assert c0.bound["constant"] == c1.bound["constant"]
    c0 = bound_u0_one(P("q3-linear"), T("full"), 3)
    c1 = bound_u0_one(normalize_u0(P("q3-linear").scale(k)), T("full"), 3)
    assert c0.bound == c1.bound


@given(st.lists(st.fractions(min_value=0, max_value=5, max_denominator=9), min_size=1, max_size=5), st.sampled_from([2, 3, 5]))
def test_symmetric_ratio_is_r_to_the_m(half, q):
    # u_n = u_{m-n} for 0 < n < m with u_0 = u_m = 0
    m = 2 * len(half) + 1
    u = [0] + half + half[::-1] + [0]
    if not any(half):
        return
    f = CosinePoly(u)
    r = QField.sqrt(q)
    assert f.psi(r) / f.psi(1 / r) == r**m


def test_certificate_json_roundtrip():
    c = bound_u0_minus_one(P("q4-genus-cap"), T("elliptic-q4-over-f2"), 4)
    obj = c.to_json()
    assert certificate_from_json(obj).to_json() == obj
    assert verify_certificate_json(obj)
    tampered = dict(obj, f=CosinePoly([-1, F(-4, 3), F(7, 9), F(26, 9), 2]).to_json())
    assert not verify_certificate_json(tampered)


def test_bound_for_regime_dispatch():
    c = bound_for_regime(P("q2-genus-free"), T("elliptic-q2"), 2, "u0_zero")
    assert c.regime is Regime.U0_ZERO
    with pytest.raises(ValueError):
        bound_for_regime(P("q2-genus-free"), T("elliptic-q2"), 2, "no-such-regime")


def test_weil_type_for_identity():
    ident = explicit_formula_identity(CosinePoly([1, 0, 1]), WeilPoly(5, [(2, 1), (-3, 2)]))
    assert ident.holds
