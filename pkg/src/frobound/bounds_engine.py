"""Explicit-formula bounds on points and genus for curves with restricted Frobenius angles.

For a cosine polynomial f with power series psi(x) = sum_{n>=1} u_n x^n and
r = sqrt(q), every curve of genus g over F_q satisfies

    N_1 psi(1/r) + sum_{n>=2} u_n (N_n - N_1) r^-n
        = 2 u_0 g + psi(r) + psi(1/r) - 2 sum_j f(theta_j).

When u_n >= 0 for n >= 2 and f >= 0 on every Frobenius angle, both slack
sums are nonnegative and the identity turns into an inequality.  The value
of u_0 selects what is bounded: 1 gives N <= slope*g + intercept, 0 a bound
on N alone, -1 a bound on the genus.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

from .cosine_poly import CosinePoly, is_nonneg_on, zeros_on
from .errors import (
    ConditionFailure,
    DomainError,
    InternalAssertionError,
    RegimeMismatchError,
    UnusablePolynomialError,
)
from .exactnum import QField
from .theta_sets import ThetaSet, complement_of_interval
from .zeta import WeilPoly, angle_multiset, point_counts


class Regime(str, Enum):
    U0_ONE = "u0_one"
    U0_ONE_RESTRICTED = "u0_one_restricted"
    U0_ZERO = "u0_zero"
    U0_MINUS_ONE = "u0_minus_one"


REGIME_U0 = {
    Regime.U0_ONE: 1,
    Regime.U0_ONE_RESTRICTED: 1,
    Regime.U0_ZERO: 0,
    Regime.U0_MINUS_ONE: -1,
}


def sqrt_q(q: int) -> tuple[QField, QField]:
    r = QField.sqrt(q)
    return r, r.inverse()


@dataclass(frozen=True)
class Conditions:
    a: bool
    b: bool
    c: bool | None = None
    d: bool | None = None
    witness: QField | None = None
    symmetry_m: int | None = None

    def failed(self, required: str) -> str | None:
        for name in required:
            if getattr(self, name) is not True:
                return name
        return None

    def to_json(self) -> dict:
        return {"a": self.a, "b": self.b, "c": self.c, "d": self.d}


def symmetry_order(f: CosinePoly) -> int | None:
    """The m > deg(psi) with u_n = u_{m-n} for n = 0..m, if any.

    Such an m is forced: u_0 = u_m = 0 and the lowest nonzero index k must
    pair with the degree D, so m = k + D.
    """
    if f.u0 or not f.u:
        return None
    low = next(n for n, v in enumerate(f.u) if v)
    m = low + f.degree
    return m if check_symmetry(f, m) else None


def check_symmetry(f: CosinePoly, m: int) -> bool:
    if m <= f.degree:
        return False
    return all(f.coeff(n) == f.coeff(m - n) for n in range(m + 1))


def check_conditions(
    f: CosinePoly,
    theta: ThetaSet,
    regime: Regime | str,
    q: int | None = None,
    m: int | None = None,
) -> Conditions:
    regime = Regime(regime)
    if f.u0 != REGIME_U0[regime]:
        raise RegimeMismatchError(f"regime {regime.value} needs u_0 = {REGIME_U0[regime]}, got {f.u0}")
    start = 1 if regime is Regime.U0_ONE else 2
    cond_a = all(f.coeff(n).sign() >= 0 for n in range(start, f.degree + 1))
    nonneg = is_nonneg_on(f, theta)
    cond_c = None
    sym_m = None
    if m is not None:
        cond_c = check_symmetry(f, m)
        sym_m = m if cond_c else None
    elif regime is Regime.U0_ZERO:
        sym_m = symmetry_order(f)
        cond_c = sym_m is not None
    cond_d = None
    if regime is Regime.U0_MINUS_ONE and q is not None:
        cond_d = not f.psi(sqrt_q(q)[1])
    return Conditions(cond_a, nonneg.ok, cond_c, cond_d, nonneg.witness, sym_m)


def _equal_counts_tightness(f: CosinePoly) -> list[int]:
    return [n for n in range(2, f.degree + 1) if f.coeff(n)]


@dataclass(frozen=True)
class BoundCertificate:
    regime: Regime
    f: CosinePoly
    theta: ThetaSet
    q: int
    psi_r: QField
    psi_rinv: QField
    bound: dict
    conditions: Conditions
    equal_counts: tuple[int, ...] = ()
    zeros: tuple[QField, ...] = ()

    @property
    def kind(self) -> str:
        return self.bound["kind"]

    def holds_for(self, N1: int, g: int) -> bool:
        """Whether a curve with N_1 points and genus g satisfies the certified inequality."""
        b = self.bound
        if b["kind"] == "linear":
            return N1 <= b["slope"] * g + b["intercept"]
        if b["kind"] == "constant":
            return N1 <= b["constant"]
        if b["kind"] == "genus_cap":
            return 2 * g <= b["two_g_max"]
        if b["kind"] == "combined":
            return N1 * self.psi_rinv + 2 * g <= self.psi_r + self.psi_rinv
        raise ValueError(b["kind"])

    def tightness(self) -> list[dict]:
        out = [{"kind": "equal_counts", "n": n, "text": f"N_{n} = N_1"} for n in self.equal_counts]
        out.append(
            {
                "kind": "angles_in_zero_set",
                "zeros": [z.to_json() for z in self.zeros],
                "text": "f(theta_j) = 0 for every Frobenius angle",
            }
        )
        return out

    def statement(self) -> str:
        b = self.bound
        if b["kind"] == "linear":
            return f"N <= ({b['slope']})*g + ({b['intercept']})"
        if b["kind"] == "constant":
            return f"N <= {b['constant']}  (N <= {b['floor']})"
        if b["kind"] == "genus_cap":
            return f"2g <= {b['two_g_max']}  (g <= {b['g_max']})"
        return f"N*({self.psi_rinv}) + 2g <= {self.psi_r + self.psi_rinv}"

    def to_json(self) -> dict:
        bound = {}
        for k, v in self.bound.items():
            bound[k] = v.to_json() if isinstance(v, QField) else v
        return {
            "regime": self.regime.value,
            "q": self.q,
            "f": self.f.to_json(),
            "theta": self.theta.to_json(),
            "psi_r": self.psi_r.to_json(),
            "psi_rinv": self.psi_rinv.to_json(),
            "bound": bound,
            "conditions": self.conditions.to_json(),
            "symmetry_m": self.conditions.symmetry_m,
            "tightness": self.tightness(),
        }


def _require(cond: Conditions, names: str):
    bad = cond.failed(names)
    if bad is None:
        return
    msgs = {
        "a": "a coefficient u_n that must be nonnegative is negative",
        "b": "f is negative somewhere on Theta",
        "c": "coefficients are not symmetric",
        "d": "psi(1/r) != 0",
    }
    raise ConditionFailure(bad, msgs[bad], witness=cond.witness if bad == "b" else None)


def _certificate(regime, f, theta, q, cond, bound) -> BoundCertificate:
    r, rinv = sqrt_q(q)
    return BoundCertificate(
        regime=regime,
        f=f,
        theta=theta,
        q=q,
        psi_r=f.psi(r),
        psi_rinv=f.psi(rinv),
        bound=bound,
        conditions=cond,
        equal_counts=tuple(_equal_counts_tightness(f)),
        zeros=tuple(zeros_on(f, theta)),
    )


def bound_u0_one(f: CosinePoly, theta: ThetaSet, q: int, strict: bool = True) -> BoundCertificate:
    """N <= slope*g + intercept for curves with all angles in theta.

    ``strict`` demands u_n >= 0 for every n >= 1; otherwise only n >= 2.
    """
    regime = Regime.U0_ONE if strict else Regime.U0_ONE_RESTRICTED
    cond = check_conditions(f, theta, regime, q)
    _require(cond, "ab")
    r, rinv = sqrt_q(q)
    pr, pi = f.psi(r), f.psi(rinv)
    if pi.sign() <= 0:
        raise UnusablePolynomialError(f"psi(1/r) = {pi} is not positive")
    bound = {"kind": "linear", "slope": 2 / pi, "intercept": (pr + pi) / pi}
    return _certificate(regime, f, theta, q, cond, bound)


def bound_u0_zero(f: CosinePoly, theta: ThetaSet, q: int, m: int | None = None) -> BoundCertificate:
    """A genus-free bound N <= (psi(r) + psi(1/r)) / psi(1/r)."""
    cond = check_conditions(f, theta, Regime.U0_ZERO, q, m)
    _require(cond, "ab" + ("c" if m is not None else ""))
    r, rinv = sqrt_q(q)
    pr, pi = f.psi(r), f.psi(rinv)
    if pi.sign() <= 0:
        raise UnusablePolynomialError(f"psi(1/r) = {pi} is not positive")
    const = (pr + pi) / pi
    if cond.symmetry_m is not None and const != r**cond.symmetry_m + 1:
        raise InternalAssertionError(f"symmetric f must give r^{cond.symmetry_m} + 1, got {const}")
    bound = {"kind": "constant", "constant": const, "floor": const.floor()}
    if cond.symmetry_m is not None:
        bound["symmetry_m"] = cond.symmetry_m
    return _certificate(Regime.U0_ZERO, f, theta, q, cond, bound)


def bound_u0_minus_one(
    f: CosinePoly, theta: ThetaSet, q: int, allow_combined: bool = False
) -> BoundCertificate:
    """Genus cap 2g <= psi(r), valid when psi(1/r) = 0.

    If psi(1/r) > 0 the combined inequality N psi(1/r) + 2g <= psi(r) + psi(1/r)
    still holds; it is returned when ``allow_combined`` is set and otherwise
    attached to the raised ConditionFailure as ``fallback``.
    """
    cond = check_conditions(f, theta, Regime.U0_MINUS_ONE, q)
    _require(cond, "ab")
    r, rinv = sqrt_q(q)
    pr, pi = f.psi(r), f.psi(rinv)
    if cond.d:
        bound = {"kind": "genus_cap", "two_g_max": pr, "g_max": (pr / 2).floor()}
        return _certificate(Regime.U0_MINUS_ONE, f, theta, q, cond, bound)
    if pi.sign() < 0:
        raise ConditionFailure("d", f"psi(1/r) = {pi} is negative; no bound follows")
    combined = _certificate(Regime.U0_MINUS_ONE, f, theta, q, cond, {"kind": "combined"})
    if allow_combined:
        return combined
    raise ConditionFailure("d", f"psi(1/r) = {pi} != 0", fallback=combined)


def bound_for_regime(f, theta, q, regime, **kw) -> BoundCertificate:
    regime = Regime(regime)
    if regime in (Regime.U0_ONE, Regime.U0_ONE_RESTRICTED):
        return bound_u0_one(f, theta, q, strict=regime is Regime.U0_ONE)
    if regime is Regime.U0_ZERO:
        return bound_u0_zero(f, theta, q, **kw)
    return bound_u0_minus_one(f, theta, q, **kw)


def normalize_u0(f: CosinePoly) -> CosinePoly:
    """Scale f by a positive constant so that u_0 = +-1."""
    if not f.u0:
        raise DomainError("u_0 = 0 cannot be normalized")
    return f.scale(abs(f.u0).inverse())


# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FormulaIdentity:
    lhs: QField
    rhs: QField
    count_slack: tuple[tuple[int, QField], ...]
    angle_slack: QField
    counts: tuple[int, ...] = field(default=())

    @property
    def holds(self) -> bool:
        return self.lhs == self.rhs

    @property
    def slack_zero(self) -> bool:
        return not self.angle_slack and all(not v for _, v in self.count_slack)


def explicit_formula_identity(f: CosinePoly, W: WeilPoly) -> FormulaIdentity:
    """Evaluate both sides of the explicit formula exactly for zeta data W."""
    D = max(f.degree, 1)
    r, rinv = sqrt_q(W.q)
    N = point_counts(W, D)
    slack = tuple((n, f.coeff(n) * (N[n] - N[1]) * rinv**n) for n in range(2, D + 1))
    lhs = N[1] * f.psi(rinv) + sum((v for _, v in slack), QField(0))
    angle_sum = sum((e * f(x) for x, e in angle_multiset(W)), QField(0))
    rhs = 2 * f.u0 * W.genus + f.psi(r) + f.psi(rinv) - 2 * angle_sum
    if lhs != rhs:
        raise InternalAssertionError(f"explicit formula fails: {lhs} != {rhs}")
    return FormulaIdentity(lhs, rhs, slack, 2 * angle_sum, N.N)


# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ExclusionCertificate:
    base: BoundCertificate
    lo: QField
    hi: QField
    lo_closed: bool = False

    def interval_text(self) -> str:
        # x-interval (lo, hi) <-> angle interval (acos hi, acos lo)
        a = math.acos(float(self.hi)) / math.pi
        b = math.acos(float(self.lo)) / math.pi
        right = "]" if self.lo_closed else ")"
        return f"({a:.6g}π, {b:.6g}π{right}"

    def statement(self) -> str:
        b = self.base.bound
        if b["kind"] == "linear":
            premise = f"N > ({b['slope']})*g + ({b['intercept']})"
        elif b["kind"] == "constant":
            premise = f"N > {b['constant']}"
        elif b["kind"] == "genus_cap":
            premise = f"2g > {b['two_g_max']}"
        else:
            premise = "N*psi(1/r) + 2g > psi(r) + psi(1/r)"
        lb = "[" if self.lo_closed else "("
        return (
            f"{premise} => some Frobenius angle has cos(theta) in {lb}{self.lo}, {self.hi}), "
            f"i.e. theta in {self.interval_text()} (approx.)"
        )

    def to_json(self) -> dict:
        return {
            "certificate": self.base.to_json(),
            "excluded_x": {"lo": self.lo.to_json(), "hi": self.hi.to_json(), "lo_closed": self.lo_closed},
            "statement": self.statement(),
        }


def exclusion_certificate(
    f: CosinePoly,
    q: int,
    alpha_x,
    beta_x,
    regime: Regime | str,
    exclude_pi: bool = False,
) -> ExclusionCertificate:
    theta = complement_of_interval(alpha_x, beta_x, exclude_pi=exclude_pi)
    base = bound_for_regime(f, theta, q, regime)
    return ExclusionCertificate(base, QField.coerce(beta_x), QField.coerce(alpha_x), exclude_pi)


# ---------------------------------------------------------------------------


def certificate_from_json(obj: dict) -> BoundCertificate:
    """Rebuild a certificate from its JSON form by re-running every check."""
    f = CosinePoly.from_json(obj["f"])
    theta = ThetaSet.from_json(obj["theta"])
    q = int(obj["q"])
    regime = Regime(obj["regime"])
    kw = {}
    if regime is Regime.U0_MINUS_ONE and obj["bound"].get("kind") == "combined":
        kw["allow_combined"] = True
    if regime is Regime.U0_ZERO and obj.get("symmetry_m") is not None:
        kw["m"] = int(obj["symmetry_m"])
    return bound_for_regime(f, theta, q, regime, **kw)


def verify_certificate_json(obj: dict) -> bool:
    """Independent re-verification of a serialized certificate."""
    try:
        fresh = certificate_from_json(obj)
    except (ConditionFailure, UnusablePolynomialError, RegimeMismatchError):
        return False
    return fresh.to_json() == obj
