from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from frobound.errors import DomainError, UnsupportedShapeError
from frobound.exactnum import QField
from frobound.theta_sets import (
    ThetaSet,
    admissible_trace_angles,
    complement_of_interval,
    frobenius_square_pushforward,
)

F = Fraction
S2 = QField.sqrt(2)


def test_complement_pi3_3pi4():
    th = complement_of_interval(F(1, 2), -S2 / 2)
    assert th.intervals == ((-1, -S2 / 2), (F(1, 2), 1))
    assert th.points == ()


def test_complement_m4():
    th = complement_of_interval(S2 / 2, -S2 / 2)
    assert th.intervals == ((-1, -S2 / 2), (S2 / 2, 1))


def test_complement_degenerate_is_full():
    assert complement_of_interval(F(1, 3), F(1, 3)) == ThetaSet.full()


def test_complement_exclude_pi():
    th = complement_of_interval(-S2 / 2, -1, exclude_pi=True)
    assert th.intervals == ((-S2 / 2, 1),)
    assert QField(-1) not in th


@pytest.mark.parametrize("alpha, beta", [(F(-1, 2), F(1, 2)), (F(3, 2), 0), (0, F(-3, 2))])
def test_complement_rejects(alpha, beta):
    with pytest.raises(DomainError):
        complement_of_interval(alpha, beta)


@given(
    st.fractions(min_value=-1, max_value=1, max_denominator=40),
    st.fractions(min_value=-1, max_value=1, max_denominator=40),
    st.fractions(min_value=-1, max_value=1, max_denominator=97),
)
def test_complement_membership(a, b, x):
    lo, hi = min(a, b), max(a, b)
    th = complement_of_interval(hi, lo)
    assert (QField(x) in th) == (not (lo < x < hi))


@pytest.mark.parametrize("q, count", [(2, 5), (3, 7), (4, 9)])
def test_admissible_traces(q, count):
    th = admissible_trace_angles(q)
    assert len(th.points) == count
    assert all(-p in th for p in th.points)


def test_admissible_q2_values():
    pts = admissible_trace_angles(2).points
    assert pts == tuple(QField(t) / (2 * S2) for t in range(-2, 3))


def test_admissible_rejects_small_q():
    with pytest.raises(DomainError):
        admissible_trace_angles(1)


def test_pushforward_examples():
    th = frobenius_square_pushforward(admissible_trace_angles(2))
    assert th.points == (-1, F(-3, 4), 0)
    assert frobenius_square_pushforward(ThetaSet(points=[QField(1)])).points == (1,)
    assert frobenius_square_pushforward(ThetaSet(points=[QField(0)])).points == (-1,)


def test_pushforward_twice_matches_trace_map():
    q = 3
    th = admissible_trace_angles(q)
    twice = frobenius_square_pushforward(frobenius_square_pushforward(th))
    # t -> t^2 - 2q over F_{q^2}, then again over F_{q^4}
    traces = {((t * t - 2 * q) ** 2 - 2 * q * q) for t in range(-3, 4)}
    assert twice.points == tuple(sorted(QField(F(s, 2 * q * q)) for s in traces))


def test_pushforward_rejects_intervals():
    with pytest.raises(UnsupportedShapeError):
        frobenius_square_pushforward(ThetaSet.full())


def test_structure_invariants():
    th = ThetaSet([(F(1, 2), 1), (-1, F(-1, 2))], [F(3, 4), 0, 0])
    assert th.intervals[0][0] == -1
    assert th.points == (0,)  # 3/4 is inside [1/2, 1]
    with pytest.raises(DomainError):
        ThetaSet([(-1, F(1, 2)), (0, 1)])
    with pytest.raises(DomainError):
        ThetaSet(points=[F(5, 4)])


def test_json_roundtrip():
    th = complement_of_interval(F(1, 2), -S2 / 2)
    assert ThetaSet.from_json(th.to_json()) == th


def test_excluded_gaps():
    th = complement_of_interval(F(1, 2), -S2 / 2)
    assert th.excluded_gaps() == [(-S2 / 2, F(1, 2), False, False)]
    half = complement_of_interval(-S2 / 2, -1, exclude_pi=True)
    assert half.excluded_gaps() == [(-1, -S2 / 2, True, False)]
    assert ThetaSet.full().excluded_gaps() == []
