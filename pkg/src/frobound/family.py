"""The infinite family of cosine polynomials excluding angles in (pi/m, 3pi/m).

With alpha = pi/m the coefficients

    u_n = sin((n-1)a) sin(na) sin((n+1)a) / (sin(a) sin(2a) sin(3a)),  2 <= n <= m-2,

give f(theta) = (1 + cos m theta) / (4 (cos theta - cos a)(cos theta - cos 3a)).
Exact checks run in Q[x]/(x^m + 1) with x standing for e^{i pi/m}.  That
ring is not a field (x^m + 1 factors into cyclotomic polynomials), so an
equation is declared to hold at x = e^{i pi/m} after reducing the
difference modulo Phi_{2m}, the minimal polynomial of e^{i pi/m}.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import mpmath

from .bounds_engine import bound_u0_zero
from .cosine_poly import CosinePoly
from .errors import DomainError, InternalAssertionError, UnusablePolynomialError, ConditionFailure
from .exactnum import QField, squarefree_decompose
from .theta_sets import ThetaSet, complement_of_interval

PRECISION_BITS = 128
TOLERANCE = mpmath.mpf("1e-20")
MAX_M = 64


# ---------------------------------------------------------------------------
# integer polynomials, low -> high


def _ipoly_mul(p, q):
    out = [0] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a:
            for j, b in enumerate(q):
                out[i + j] += a * b
    return out


def _ipoly_divmod_monic(p, q):
    """Division by a monic integer polynomial."""
    r = list(p)
    if q[-1] != 1:
        raise ValueError("divisor must be monic")
    quot = [0] * max(len(r) - len(q) + 1, 1)
    for k in range(len(r) - len(q), -1, -1):
        c = r[k + len(q) - 1]
        quot[k] = c
        if c:
            for i, b in enumerate(q):
                r[k + i] -= c * b
    rem = r[: len(q) - 1]
    while rem and rem[-1] == 0:
        rem.pop()
    return quot, rem


def _y_power_minus_one(k: int) -> list[int]:
    p = [0] * (k + 1)
    p[0], p[k] = -1, 1
    return p


@lru_cache(maxsize=None)
def cyclotomic(n: int) -> tuple[int, ...]:
    """Coefficients of the n-th cyclotomic polynomial."""
    p = _y_power_minus_one(n)
    for d in range(1, n):
        if n % d == 0:
            p, rem = _ipoly_divmod_monic(p, list(cyclotomic(d)))
            assert not rem
    while p and p[-1] == 0:
        p.pop()
    return tuple(p)


# ---------------------------------------------------------------------------


class CycloElem:
    """Residue class in Q[x]/(x^m + 1)."""

    __slots__ = ("m", "c")

    def __init__(self, m: int, coeffs: Sequence = ()):
        c = [Fraction(0)] * m
        for k, v in enumerate(coeffs):
            if v:
                # x^(k) with k = j*m + r equals (-1)^j x^r
                j, r = divmod(k, m)
                c[r] += -Fraction(v) if j % 2 else Fraction(v)
        self.m = m
        self.c = tuple(c)

    @classmethod
    def monomial(cls, k: int, m: int, coef=1) -> CycloElem:
        # x^k for any integer k, using x^(2m) = 1
        k %= 2 * m
        out = [0] * (k + 1)
        out[k] = coef
        return cls(m, out)

    @classmethod
    def quantum(cls, k: int, m: int) -> CycloElem:
        """[k] = x^k - x^-k (equal to 2i sin(k pi/m) at x = e^{i pi/m})."""
        return cls.monomial(k, m) - cls.monomial(-k, m)

    @classmethod
    def constant(cls, v, m: int) -> CycloElem:
        return cls(m, [v])

    def _check(self, other):
        if not isinstance(other, CycloElem):
            other = CycloElem.constant(other, self.m)
        if other.m != self.m:
            raise ValueError("ring mismatch")
        return other

    def __add__(self, other):
        o = self._check(other)
        return CycloElem(self.m, [a + b for a, b in zip(self.c, o.c)])

    __radd__ = __add__

    def __neg__(self):
        return CycloElem(self.m, [-a for a in self.c])

    def __sub__(self, other):
        return self + (-self._check(other))

    def __mul__(self, other):
        o = self._check(other)
        m = self.m
        out = [Fraction(0)] * m
        for i, a in enumerate(self.c):
            if not a:
                continue
            for j, b in enumerate(o.c):
                if not b:
                    continue
                k = i + j
                if k >= m:
                    out[k - m] -= a * b
                else:
                    out[k] += a * b
        e = CycloElem.__new__(CycloElem)
        e.m, e.c = m, tuple(out)
        return e

    __rmul__ = __mul__

    def __eq__(self, other):
        o = self._check(other)
        return self.c == o.c

    def __hash__(self):
        return hash((self.m, self.c))

    def is_zero(self) -> bool:
        return not any(self.c)

    def reduce_at_root(self) -> tuple[Fraction, ...]:
        """Remainder modulo Phi_{2m}: the canonical form of the value at e^{i pi/m}."""
        phi = cyclotomic(2 * self.m)
        r = list(self.c)
        dphi = len(phi) - 1
        for k in range(len(r) - 1, dphi - 1, -1):
            c = r[k]
            if c:
                for i, b in enumerate(phi):
                    r[k - dphi + i] -= c * b
        return tuple(r[:dphi])

    def is_zero_at_root(self) -> bool:
        return not any(self.reduce_at_root())

    def equals_at_root(self, other) -> bool:
        return (self - self._check(other)).is_zero_at_root()

    def evaluate(self):
        """Complex value at x = e^{i pi/m} (current mpmath precision)."""
        x = mpmath.expjpi(mpmath.mpf(1) / self.m)
        acc = mpmath.mpc(0)
        for k in range(self.m - 1, -1, -1):
            acc = acc * x + mpmath.mpf(self.c[k].numerator) / self.c[k].denominator
        return acc

    def to_qfield(self) -> QField:
        """Exact real value for m in {2, 3, 4, 6}, where cos(pi/m), sin(pi/m) are quadratic."""
        cs = _EXACT_TRIG.get(self.m)
        if cs is None:
            raise DomainError(f"e^(i pi/{self.m}) does not lie in a real-quadratic extension")
        cos1, sin1 = cs
        re, im = QField(0), QField(0)
        pr, pi = QField(1), QField(0)
        for k in range(self.m):
            if self.c[k]:
                re = re + self.c[k] * pr
                im = im + self.c[k] * pi
            pr, pi = pr * cos1 - pi * sin1, pr * sin1 + pi * cos1
        if im:
            raise DomainError("element is not real")
        return re

    def __repr__(self):
        terms = []
        for k, v in enumerate(self.c):
            if v:
                terms.append(f"{v}" if k == 0 else f"{v}*x^{k}")
        return " + ".join(terms) if terms else "0"


_EXACT_TRIG = {
    2: (QField(0), QField(1)),
    3: (QField(Fraction(1, 2)), QField(0, Fraction(1, 2), 3)),
    4: (QField(0, Fraction(1, 2), 2), QField(0, Fraction(1, 2), 2)),
    6: (QField(0, Fraction(1, 2), 3), QField(Fraction(1, 2))),
}


# ---------------------------------------------------------------------------


def gauss_binom3_poly(n: int) -> list[int]:
    """Gaussian binomial [n+1 choose 3] as an integer polynomial in y."""
    num = _ipoly_mul(_ipoly_mul(_y_power_minus_one(n + 1), _y_power_minus_one(n)), _y_power_minus_one(n - 1))
    den = _ipoly_mul(_ipoly_mul(_y_power_minus_one(3), _y_power_minus_one(2)), _y_power_minus_one(1))
    quot, rem = _ipoly_divmod_monic(num, den)
    if rem:
        raise InternalAssertionError(f"Gaussian binomial division for n={n} left remainder {rem}")
    while len(quot) > 1 and quot[-1] == 0:
        quot.pop()
    return quot


def gauss_binom3(n: int, m: int) -> CycloElem:
    """The Gaussian binomial at y = x^2, reduced in Q[x]/(x^m + 1)."""
    if not 2 <= n <= m - 2:
        raise DomainError(f"need 2 <= n <= m-2, got n={n}, m={m}")
    g = gauss_binom3_poly(n)
    coeffs = [0] * (2 * len(g))
    for j, v in enumerate(g):
        coeffs[2 * j] = v
    return CycloElem(m, coeffs)


def _sine_numerator(n: int, m: int) -> CycloElem:
    return CycloElem.quantum(n - 1, m) * CycloElem.quantum(n, m) * CycloElem.quantum(n + 1, m)


def _sine_denominator(m: int) -> CycloElem:
    return CycloElem.quantum(1, m) * CycloElem.quantum(2, m) * CycloElem.quantum(3, m)


def _check_m(m: int, lo: int = 4):
    if m < lo:
        raise DomainError(f"m = {m} must be at least {lo}")
    if m > MAX_M:
        raise DomainError(f"m = {m} exceeds the cap {MAX_M}")


def sine_coefficient(n: int, m: int):
    a = mpmath.pi / m
    return (
        mpmath.sin((n - 1) * a) * mpmath.sin(n * a) * mpmath.sin((n + 1) * a)
        / (mpmath.sin(a) * mpmath.sin(2 * a) * mpmath.sin(3 * a))
    )


@dataclass(frozen=True)
class FamilyPoly:
    m: int
    exact: tuple[CycloElem, ...]  # u_2 .. u_{m-2}
    approx: tuple  # mpmath values, same indexing

    def u(self, n: int) -> CycloElem:
        if 2 <= n <= self.m - 2:
            return self.exact[n - 2]
        return CycloElem.constant(0, self.m)

    def u_float(self, n: int):
        if 2 <= n <= self.m - 2:
            return self.approx[n - 2]
        return mpmath.mpf(0)

    def cosine_poly(self) -> CosinePoly:
        """Exact QField form; only available when e^{i pi/m} is quadratic."""
        return CosinePoly([QField(0), QField(0)] + [e.to_qfield() for e in self.exact])

    def evaluate(self, theta):
        return mpmath.fsum(self.u_float(n) * mpmath.cos(n * theta) for n in range(2, self.m - 1))


def family_coefficients(m: int) -> FamilyPoly:
    _check_m(m)
    den = _sine_denominator(m)
    exact, approx = [], []
    with mpmath.workprec(PRECISION_BITS):
        for n in range(2, m - 1):
            un = CycloElem.monomial(6 - 3 * n, m) * gauss_binom3(n, m)
            if un * den != _sine_numerator(n, m):
                raise InternalAssertionError(f"u_{n} * [1][2][3] != [n-1][n][n+1] for m={m}")
            val = sine_coefficient(n, m)
            if not val > mpmath.mpf("1e-30"):
                raise InternalAssertionError(f"u_{n} = {val} is not positive for m={m}")
            exact.append(un)
            approx.append(val)
    return FamilyPoly(m, tuple(exact), tuple(approx))


def symmetry_check(m: int, fam: FamilyPoly | None = None) -> bool:
    fam = fam or family_coefficients(m)
    return all(fam.u(n).equals_at_root(fam.u(m - n)) for n in range(2, m - 1))


def degree_window_check(m: int) -> bool:
    """u_n vanishes for n in {0, 1, m-1, m}: the sine numerator is zero there."""
    _check_m(m)
    return all(_sine_numerator(n, m).is_zero() for n in (0, 1, m - 1, m))


def ring_value_check(m: int, fam: FamilyPoly | None = None) -> bool:
    """Exact ring values evaluate to the sine formula (precision 128 bits)."""
    fam = fam or family_coefficients(m)
    with mpmath.workprec(PRECISION_BITS):
        for n in range(2, m - 1):
            z = fam.u(n).evaluate()
            if abs(z.imag) > TOLERANCE or abs(z.real - fam.u_float(n)) > TOLERANCE * max(1, abs(fam.u_float(n))):
                return False
    return True


def family_identity_check(m: int, coefficients: Sequence[CycloElem] | None = None) -> bool:
    """(sum u_n t^n)(t^2 - (x + 1/x) t + 1)(t^2 - (x^3 + 1/x^3) t + 1) == t^2 (1 + t^m).

    ``coefficients`` overrides u_2..u_{m-2}.
    """
    _check_m(m)
    us = list(coefficients) if coefficients is not None else list(family_coefficients(m).exact)
    if len(us) != m - 3:
        raise DomainError(f"expected {m - 3} coefficients, got {len(us)}")
    one = CycloElem.constant(1, m)
    c1 = CycloElem.monomial(1, m) + CycloElem.monomial(-1, m)
    c3 = CycloElem.monomial(3, m) + CycloElem.monomial(-3, m)
    # polynomials in t with CycloElem coefficients
    poly = [CycloElem.constant(0, m)] * 2 + [CycloElem(m, u.c) if isinstance(u, CycloElem) else CycloElem.constant(u, m) for u in us]
    for quad in ([one, -c1, one], [one, -c3, one]):
        out = [CycloElem.constant(0, m)] * (len(poly) + 2)
        for i, a in enumerate(poly):
            for j, b in enumerate(quad):
                out[i + j] = out[i + j] + a * b
        poly = out
    target = [CycloElem.constant(0, m)] * len(poly)
    target[2] = one
    target[m + 2] = target[m + 2] + one
    return all(a.equals_at_root(b) for a, b in zip(poly, target))


def family_identity_numeric(m: int, samples: int = 20, seed: int = 0) -> bool:
    """Floating check of f(theta) * 4(cos t - cos a)(cos t - cos 3a) = 1 + cos(m t)."""
    fam = family_coefficients(m)
    rng = random.Random(seed)
    with mpmath.workprec(PRECISION_BITS):
        a = mpmath.pi / m
        for _ in range(samples):
            t = mpmath.mpf(rng.random()) * mpmath.pi
            lhs = fam.evaluate(t) * 4 * (mpmath.cos(t) - mpmath.cos(a)) * (mpmath.cos(t) - mpmath.cos(3 * a))
            if abs(lhs - (1 + mpmath.cos(m * t))) > TOLERANCE:
                return False
    return True


def product_form(m: int, theta):
    a = mpmath.pi / m
    acc = mpmath.mpf(2) ** (m - 3)
    for k in range(2, m):
        acc *= mpmath.cos(theta) - mpmath.cos((2 * k + 1) * a)
    return acc


def family_product_check(m: int, samples: int = 50, seed: int = 0, bits: int = PRECISION_BITS) -> bool:
    """Compare the coefficient sum with the cosine product at random angles."""
    _check_m(m)
    fam = family_coefficients(m)
    rng = random.Random(seed)
    with mpmath.workprec(bits):
        for _ in range(samples):
            t = mpmath.mpf(rng.random()) * mpmath.pi
            if abs(product_form(m, t) - fam.evaluate(t)) > TOLERANCE:
                return False
    return True


def gauss_series_coefficients(i_max: int) -> list[list[int]]:
    """Coefficients of T^i in 1/((1-T)(1-yT)(1-y^2T)(1-y^3T)) by enumeration, as polys in y."""
    out = []
    for i in range(i_max + 1):
        poly = [0] * (3 * i + 1)
        for b in range(i + 1):
            for c in range(i - b + 1):
                for d in range(i - b - c + 1):
                    poly[b + 2 * c + 3 * d] += 1
        out.append(poly)
    return out


# ---------------------------------------------------------------------------


def exclusion_theta(m: int) -> ThetaSet | None:
    """Theta = [0, pi] minus (pi/m, 3pi/m) in x-space, when the endpoints are quadratic."""
    if m == 2:
        return complement_of_interval(QField(0), QField(-1), exclude_pi=True)
    if m in _EXACT_TRIG:
        cos1 = _EXACT_TRIG[m][0]
        cos3 = {3: QField(-1), 4: -cos1, 6: QField(0)}[m]
        return complement_of_interval(cos1, cos3)
    return None


_EXACT_RADICAND = {2: None, 3: None, 4: 2, 6: 3}


def threshold_value(m: int, q: int) -> QField:
    """r^m + 1 with r = sqrt(q)."""
    return QField.sqrt(q) ** m + 1


@dataclass
class FamilyThreshold:
    m: int
    q: int
    threshold: QField
    exact_path: bool
    checks: dict = field(default_factory=dict)
    certificate: object = None

    @property
    def verified(self) -> bool:
        return all(self.checks.values())

    def statement(self) -> str:
        return f"q={self.q}: N > {self.threshold} => some Frobenius angle lies in {excluded_interval_text(self.m)}"


def _pi_multiple(k: int, m: int) -> str:
    fr = Fraction(k, m)
    num = "π" if fr.numerator == 1 else f"{fr.numerator}π"
    return num if fr.denominator == 1 else f"{num}/{fr.denominator}"


def excluded_interval_text(m: int) -> str:
    if m == 2:
        return "(π/2, π]"
    return f"({_pi_multiple(1, m)}, {_pi_multiple(3, m)})"


def family_threshold(m: int, q: int) -> FamilyThreshold:
    if m < 2:
        raise DomainError("m must be at least 2")
    if q < 2:
        raise DomainError("q must be at least 2")
    if m > MAX_M:
        raise DomainError(f"m = {m} exceeds the cap {MAX_M}")
    target = threshold_value(m, q)
    d = squarefree_decompose(q)[1]
    if m == 2:
        f = CosinePoly([0, 1])
    elif m == 3:
        f = CosinePoly([0, 1, 1])
    else:
        f = None
    theta = exclusion_theta(m)
    exact = theta is not None and (_EXACT_RADICAND[m] is None or _EXACT_RADICAND[m] == d)
    result = FamilyThreshold(m, q, target, exact)
    if exact:
        if f is None:
            f = family_coefficients(m).cosine_poly()
        try:
            cert = bound_u0_zero(f, theta, q, m=m)
        except (ConditionFailure, UnusablePolynomialError):
            result.checks["exact_certificate"] = False
            return result
        result.certificate = cert
        result.checks["exact_certificate"] = True
        result.checks["threshold_matches"] = cert.bound["constant"] == target
        return result
    fam = family_coefficients(m)
    result.checks["positivity"] = all(v > 0 for v in fam.approx)
    result.checks["symmetry"] = symmetry_check(m, fam)
    result.checks["degree_window"] = degree_window_check(m)
    result.checks["identity"] = family_identity_check(m, fam.exact)
    result.checks["nonnegative_on_theta"] = _numeric_nonneg_scan(fam)
    return result


def _numeric_nonneg_scan(fam: FamilyPoly, points: int = 2000) -> bool:
    # f = (1 + cos m t) / (4 (cos t - cos a)(cos t - cos 3a)) is >= 0 off (a, 3a);
    # a dense scan guards against a wrong coefficient table.
    m = fam.m
    with mpmath.workprec(PRECISION_BITS):
        a = mpmath.pi / m
        for k in range(points + 1):
            t = mpmath.pi * k / points
            if a < t < 3 * a:
                continue
            if fam.evaluate(t) < -TOLERANCE:
                return False
    return True

