"""Allowed-angle sets Theta in the coordinate x = cos(theta).

cos is decreasing on [0, pi], so an angle interval (alpha, beta) becomes the
x-interval (cos beta, cos alpha).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .errors import DomainError, UnsupportedShapeError
from .exactnum import QField, squarefree_decompose

Interval = tuple[QField, QField]


@dataclass(frozen=True)
class ThetaSet:
    intervals: tuple[Interval, ...] = ()
    points: tuple[QField, ...] = ()

    def __init__(self, intervals: Iterable = (), points: Iterable = ()):
        ivs = []
        pts = []
        for lo, hi in intervals:
            lo, hi = QField.coerce(lo), QField.coerce(hi)
            if lo > hi:
                raise DomainError(f"interval [{lo}, {hi}] is reversed")
            if lo == hi:
                pts.append(lo)
            else:
                ivs.append((lo, hi))
        pts.extend(QField.coerce(p) for p in points)
        for x in [e for iv in ivs for e in iv] + pts:
            if x < -1 or x > 1:
                raise DomainError(f"{x} lies outside [-1, 1]")
        ivs.sort(key=lambda iv: iv[0])
        merged: list[Interval] = []
        for lo, hi in ivs:
            if merged and lo <= merged[-1][1]:
                raise DomainError("intervals overlap")
            merged.append((lo, hi))
        uniq: list[QField] = []
        for p in sorted(pts):
            if p in uniq or any(lo <= p <= hi for lo, hi in merged):
                continue
            uniq.append(p)
        object.__setattr__(self, "intervals", tuple(merged))
        object.__setattr__(self, "points", tuple(uniq))

    @classmethod
    def full(cls) -> ThetaSet:
        return cls([(QField(-1), QField(1))])

    @property
    def is_finite(self) -> bool:
        return not self.intervals

    def __contains__(self, x) -> bool:
        x = QField.coerce(x)
        return x in self.points or any(lo <= x <= hi for lo, hi in self.intervals)

    def excluded_gaps(self) -> list[tuple[QField, QField, bool, bool]]:
        """Maximal gaps of [-1, 1] not covered, as (lo, hi, lo_closed, hi_closed)."""
        pieces = sorted(
            [(lo, hi) for lo, hi in self.intervals] + [(p, p) for p in self.points],
            key=lambda t: t[0],
        )
        gaps = []
        cur, covered = QField(-1), False
        for lo, hi in pieces:
            if lo > cur:
                gaps.append((cur, lo, not covered, False))
            cur, covered = hi, True
        if cur < 1 or not covered:
            gaps.append((cur, QField(1), not covered, True))
        return gaps

    def to_json(self) -> dict:
        return {
            "intervals": [[lo.to_json(), hi.to_json()] for lo, hi in self.intervals],
            "points": [p.to_json() for p in self.points],
        }

    @classmethod
    def from_json(cls, obj) -> ThetaSet:
        return cls(
            [(QField.from_json(lo), QField.from_json(hi)) for lo, hi in obj.get("intervals", [])],
            [QField.from_json(p) for p in obj.get("points", [])],
        )


def complement_of_interval(alpha_x, beta_x, exclude_pi: bool = False) -> ThetaSet:
    """Theta = [0, pi] minus the open angle interval (alpha, beta).

    Arguments are ``alpha_x = cos(alpha)`` and ``beta_x = cos(beta)``.  With
    ``exclude_pi`` the removed set is (alpha, pi]; this requires beta = pi.
    """
    a, b = QField.coerce(alpha_x), QField.coerce(beta_x)
    if b < -1 or a > 1 or b > a:
        raise DomainError(f"need -1 <= beta_x <= alpha_x <= 1, got beta_x={b}, alpha_x={a}")
    if a == b:
        if exclude_pi:
            raise DomainError("exclude_pi requires a nonempty excluded interval")
        return ThetaSet.full()
    if exclude_pi:
        if b != -1:
            raise DomainError("exclude_pi requires beta_x = -1 (beta = pi)")
        return ThetaSet([(a, QField(1))])
    return ThetaSet([(QField(-1), b), (a, QField(1))])


def _sqrt_q(q: int) -> QField:
    return QField.sqrt(q)


def admissible_trace_angles(q: int) -> ThetaSet:
    """x = t / (2 sqrt(q)) for every integer trace t with t**2 <= 4q."""
    if q < 2:
        raise DomainError(f"field size q={q} must be at least 2")
    two_r = 2 * _sqrt_q(q)
    tmax = 0
    while (tmax + 1) ** 2 <= 4 * q:
        tmax += 1
    return ThetaSet(points=[QField(t) / two_r for t in range(-tmax, tmax + 1)])


def frobenius_square_pushforward(S: ThetaSet, q: int | None = None) -> ThetaSet:
    """Image of a finite angle set under theta -> 2 theta, i.e. x -> 2x^2 - 1."""
    if not S.is_finite:
        raise UnsupportedShapeError("pushforward is defined for finite point sets only")
    return ThetaSet(points=[2 * x * x - 1 for x in S.points])


def session_radicand(q: int) -> int:
    return squarefree_decompose(q)[1]
