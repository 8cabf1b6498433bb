"""Zeta numerators built from quadratic factors and the point counts they imply.

A factor ``(a, e)`` stands for ``(1 + a T + q T^2)^e``.  Its inverse roots
alpha, conj(alpha) satisfy alpha + conj(alpha) = -a, so each factor adds
``e * a`` to the number of rational points over F_q.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .errors import DomainError
from .exactnum import QField


@dataclass(frozen=True)
class WeilPoly:
    q: int
    factors: tuple[tuple[int, int], ...]

    def __init__(self, q: int, factors: Iterable):
        q = int(q)
        if q < 2:
            raise DomainError(f"field size q={q} must be at least 2")
        merged: dict[int, int] = {}
        for a, e in factors:
            a, e = int(a), int(e)
            if e <= 0:
                raise DomainError(f"multiplicity {e} must be positive")
            merged[a] = merged.get(a, 0) + e
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "factors", tuple(sorted(merged.items(), reverse=True)))

    @property
    def genus(self) -> int:
        return sum(e for _, e in self.factors)

    def coefficients(self) -> list[int]:
        """Integer coefficients of P(T), constant term first."""
        out = [1]
        for a, e in self.factors:
            for _ in range(e):
                nxt = [0] * (len(out) + 2)
                for i, c in enumerate(out):
                    nxt[i] += c
                    nxt[i + 1] += a * c
                    nxt[i + 2] += self.q * c
                out = nxt
        return out

    def to_json(self) -> dict:
        return {"q": self.q, "factors": [[a, e] for a, e in self.factors]}

    @classmethod
    def from_json(cls, obj) -> WeilPoly:
        return cls(obj["q"], obj["factors"])


@dataclass(frozen=True)
class PointCounts:
    N: tuple[int, ...]

    def __getitem__(self, m: int) -> int:
        """N_m for m >= 1."""
        if m < 1:
            raise IndexError("point counts are indexed from 1")
        return self.N[m - 1]

    def __len__(self):
        return len(self.N)


def _power_sums(a: int, q: int, M: int) -> list[int]:
    # s_m = alpha^m + conj(alpha)^m for the roots of X^2 + a X + q
    s = [2, -a]
    for _ in range(2, M + 1):
        s.append(-a * s[-1] - q * s[-2])
    return s


def point_counts(W: WeilPoly, M: int) -> PointCounts:
    if M < 1:
        raise DomainError("M must be at least 1")
    totals = [0] * (M + 1)
    for a, e in W.factors:
        s = _power_sums(a, W.q, M)
        for m in range(1, M + 1):
            totals[m] += e * s[m]
    return PointCounts(tuple(W.q**m + 1 - totals[m] for m in range(1, M + 1)))


def angle_multiset(W: WeilPoly) -> list[tuple[QField, int]]:
    """(cos theta, multiplicity) per factor; cos theta = -a / (2 sqrt(q))."""
    two_r = 2 * QField.sqrt(W.q)
    return [(QField(-a) / two_r, e) for a, e in W.factors]


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    message: str = ""

    def __bool__(self):
        return self.ok


def validate(W: WeilPoly, M: int) -> ValidationReport:
    for a, _ in W.factors:
        if a * a > 4 * W.q:
            return ValidationReport(False, f"Weil bound violated: a={a}, a^2={a * a} > 4q={4 * W.q}")
    N = point_counts(W, M)
    for m in range(1, M + 1):
        if N[m] < 0:
            return ValidationReport(False, f"N_{m} = {N[m]} < 0")
    for m in range(1, M + 1):
        for k in range(2 * m, M + 1, m):
            if N[k] < N[m]:
                return ValidationReport(False, f"N_{k} = {N[k]} < N_{m} = {N[m]}")
    return ValidationReport(True, "ok")


def format_counts_tsv(W: WeilPoly, N: PointCounts) -> str:
    lines = ["m\tq^m\tN_m"]
    for m in range(1, len(N) + 1):
        lines.append(f"{m}\t{W.q**m}\t{N[m]}")
    return "\n".join(lines) + "\n"
