"""Cosine polynomials f(theta) = u0 + sum u_n cos(n theta) and their power-basis images.

All angle handling goes through x = cos(theta), where cos(n theta) = T_n(x).
Nonnegativity of f on a set of angles is decided exactly with Sturm chains
over Q(sqrt(d)).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import DegenerateInputError, DomainError
from .exactnum import QField, rational_between

MAX_EXACT_DEGREE = 64

ZERO = QField(0)
ONE = QField(1)


# ---------------------------------------------------------------------------
# dense polynomial helpers, coefficient lists low -> high over QField


def _trim(c: Sequence[QField]) -> list[QField]:
    c = [QField.coerce(v) for v in c]
    while c and not c[-1]:
        c.pop()
    return c


def p_add(p, q):
    n = max(len(p), len(q))
    return _trim([(p[i] if i < len(p) else ZERO) + (q[i] if i < len(q) else ZERO) for i in range(n)])


def p_sub(p, q):
    n = max(len(p), len(q))
    return _trim([(p[i] if i < len(p) else ZERO) - (q[i] if i < len(q) else ZERO) for i in range(n)])


def p_scale(p, s):
    return _trim([s * v for v in p])


def p_mul(p, q):
    if not p or not q:
        return []
    out = [ZERO] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if not a:
            continue
        for j, b in enumerate(q):
            if b:
                out[i + j] = out[i + j] + a * b
    return _trim(out)


def p_divmod(p, q):
    q = _trim(q)
    if not q:
        raise ZeroDivisionError("polynomial division by zero")
    r = list(_trim(p))
    lead_inv = q[-1].inverse()
    quot = [ZERO] * max(len(r) - len(q) + 1, 0)
    while len(r) >= len(q) and r:
        k = len(r) - len(q)
        c = r[-1] * lead_inv
        quot[k] = c
        for i, b in enumerate(q):
            r[i + k] = r[i + k] - c * b
        r = _trim(r[:-1]) if not r[-1] else _trim(r)
    return _trim(quot), r


def p_deriv(p):
    return _trim([i * p[i] for i in range(1, len(p))])


def p_monic(p):
    p = _trim(p)
    return p_scale(p, p[-1].inverse()) if p else p


def p_gcd(p, q):
    p, q = _trim(p), _trim(q)
    while q:
        p, q = q, p_divmod(p, q)[1]
    return p_monic(p)


def p_eval(p, x) -> QField:
    acc = ZERO
    for c in reversed(p):
        acc = acc * x + c
    return acc


def squarefree_factors(p) -> list[list[QField]]:
    """Yun's algorithm: ``[A1, A2, ...]`` with p = c * A1 * A2**2 * A3**3 ..."""
    p = _trim(p)
    if len(p) <= 1:
        return []
    dp = p_deriv(p)
    a = p_gcd(p, dp)
    b = p_divmod(p, a)[0]
    c = p_divmod(dp, a)[0]
    d = p_sub(c, p_deriv(b))
    out = []
    while len(b) > 1:
        a = p_gcd(b, d)
        out.append(a)
        b = p_divmod(b, a)[0]
        c = p_divmod(d, a)[0]
        d = p_sub(c, p_deriv(b))
    return out


def odd_part(p) -> list[QField]:
    """Product of the odd-multiplicity squarefree factors of ``p`` (monic)."""
    out = [ONE]
    for i, a in enumerate(squarefree_factors(p), start=1):
        if i % 2 == 1:
            out = p_mul(out, a)
    return p_monic(out)


def squarefree_part(p) -> list[QField]:
    p = _trim(p)
    if len(p) <= 1:
        return p_monic(p)
    return p_monic(p_divmod(p, p_gcd(p, p_deriv(p)))[0])


# ---------------------------------------------------------------------------


def chebyshev_T(n: int) -> list[QField]:
    """Power-basis coefficients of T_n."""
    t0, t1 = [ONE], [ZERO, ONE]
    if n == 0:
        return t0
    for _ in range(n - 1):
        t0, t1 = t1, p_sub(p_mul([ZERO, QField(2)], t1), t0)
    return t1


@dataclass(frozen=True)
class PowerPoly:
    """Polynomial in x = cos(theta); ``c[i]`` multiplies x**i."""

    c: tuple[QField, ...]

    def __init__(self, c: Iterable = ()):
        object.__setattr__(self, "c", tuple(_trim(list(c))))

    @property
    def degree(self) -> int:
        return len(self.c) - 1

    def __call__(self, x) -> QField:
        return p_eval(self.c, QField.coerce(x))

    def to_json(self) -> dict:
        return {"c": [v.to_json() for v in self.c]}

    @classmethod
    def from_json(cls, obj) -> PowerPoly:
        return cls(QField.from_json(v) for v in obj["c"])


@dataclass(frozen=True)
class CosinePoly:
    """f(theta) = u[0] + sum_{n>=1} u[n] cos(n theta)."""

    u: tuple[QField, ...]

    def __init__(self, u: Iterable = ()):
        coeffs = _trim(list(u))
        if len(coeffs) - 1 > MAX_EXACT_DEGREE:
            raise DomainError(f"degree {len(coeffs) - 1} exceeds the exact-mode cap {MAX_EXACT_DEGREE}")
        object.__setattr__(self, "u", tuple(coeffs))

    @property
    def degree(self) -> int:
        return max(len(self.u) - 1, 0)

    def coeff(self, n: int) -> QField:
        return self.u[n] if n < len(self.u) else ZERO

    @property
    def u0(self) -> QField:
        return self.coeff(0)

    def radicand(self) -> int:
        ds = {v.d for v in self.u if not v.is_rational}
        if len(ds) > 1:
            from .errors import RadicandMismatchError

            raise RadicandMismatchError(f"coefficients mix radicands {sorted(ds)}")
        return ds.pop() if ds else 1

    def scale(self, s) -> CosinePoly:
        s = QField.coerce(s)
        return CosinePoly(s * v for v in self.u)

    def __add__(self, other: CosinePoly) -> CosinePoly:
        return CosinePoly(p_add(list(self.u), list(other.u)))

    def __call__(self, x) -> QField:
        return eval_f(self, x)

    def psi(self, x) -> QField:
        return psi_eval(self, x)

    def to_json(self) -> dict:
        return {"u": [v.to_json() for v in self.u]}

    @classmethod
    def from_json(cls, obj) -> CosinePoly:
        return cls(QField.from_json(v) for v in obj["u"])

    def __str__(self):
        terms = []
        for n, v in enumerate(self.u):
            if not v:
                continue
            if n == 0:
                terms.append(f"{v}")
            else:
                trig = "cos θ" if n == 1 else f"cos {n}θ"
                terms.append(f"({v})·{trig}")
        return " + ".join(terms) if terms else "0"


def to_power(f: CosinePoly) -> PowerPoly:
    acc: list[QField] = []
    t_prev, t_cur = [ONE], [ZERO, ONE]
    for n, un in enumerate(f.u):
        if n == 0:
            tn = t_prev
        elif n == 1:
            tn = t_cur
        else:
            t_prev, t_cur = t_cur, p_sub(p_mul([ZERO, QField(2)], t_cur), t_prev)
            tn = t_cur
        if un:
            acc = p_add(acc, p_scale(tn, un))
    return PowerPoly(acc)


def from_power(P: PowerPoly) -> CosinePoly:
    rem = list(P.c)
    u = [ZERO] * len(rem)
    while rem:
        n = len(rem) - 1
        tn = chebyshev_T(n)
        coef = rem[-1] / tn[-1]
        u[n] = coef
        rem = p_sub(rem, p_scale(tn, coef))
    return CosinePoly(u)


def _check_unit(x: QField):
    if x < -1 or x > 1:
        raise DomainError(f"x = {x} lies outside [-1, 1]")


def eval_f(f: CosinePoly, x) -> QField:
    x = QField.coerce(x)
    _check_unit(x)
    return to_power(f)(x)


def psi_eval(f: CosinePoly, x) -> QField:
    x = QField.coerce(x)
    acc = ZERO
    for un in reversed(f.u[1:]):
        acc = (acc + un) * x
    return acc


# ---------------------------------------------------------------------------
# Sturm chains


def sturm_chain(p) -> list[list[QField]]:
    p = _trim(p)
    if not p:
        raise DegenerateInputError("Sturm chain of the zero polynomial")
    chain = [p, p_deriv(p)]
    while chain[-1]:
        r = p_divmod(chain[-2], chain[-1])[1]
        if r:
            r = p_scale(r, -abs(r[-1]).inverse())
        chain.append(r)
    chain.pop()
    return chain


def _variations(chain, x: QField) -> int:
    signs = [s for s in (p_eval(p, x).sign() for p in chain) if s]
    return sum(1 for s, t in zip(signs, signs[1:]) if s != t)


def sturm_count(P, lo, hi) -> int:
    """Number of distinct real roots of ``P`` in the half-open interval (lo, hi]."""
    coeffs = P.c if isinstance(P, PowerPoly) else _trim(P)
    if not coeffs:
        raise DegenerateInputError("cannot count roots of the zero polynomial")
    lo, hi = QField.coerce(lo), QField.coerce(hi)
    if not lo < hi:
        raise DomainError("sturm_count needs lo < hi")
    chain = sturm_chain(coeffs)
    return _variations(chain, lo) - _variations(chain, hi)


def _open_count(chain, p, lo, hi) -> int:
    return _variations(chain, lo) - _variations(chain, hi) - (1 if not p_eval(p, hi) else 0)


_SPLIT_WEIGHTS = [Fraction(1, 2), Fraction(3, 7), Fraction(4, 7), Fraction(2, 5), Fraction(3, 5)]


def _nonroot_between(p, lo, hi) -> Fraction:
    """A rational in (lo, hi), near the middle, where ``p`` does not vanish."""
    k = 0
    while True:
        w = _SPLIT_WEIGHTS[k] if k < len(_SPLIT_WEIGHTS) else Fraction(1, k + 2)
        x = rational_between(lo, hi, w)
        if p_eval(p, QField(x)):
            return x
        k += 1


def _isolate(sqf, lo: QField, hi: QField) -> list[tuple[QField, QField]]:
    """Isolating intervals (l, h) of the roots of ``sqf`` in the open interval (lo, hi).

    Endpoints of every returned interval lie strictly inside (lo, hi) and are
    rational non-roots.
    """
    chain = sturm_chain(sqf)
    out = []
    stack = [(lo, hi)]
    while stack:
        a, b = stack.pop()
        k = _open_count(chain, sqf, a, b)
        if k == 0:
            continue
        if k == 1 and a != lo and b != hi:
            out.append((a, b))
            continue
        mid = QField(_nonroot_between(sqf, a, b))
        stack.append((a, mid))
        stack.append((mid, b))
    return sorted(out, key=lambda t: t[0])


@dataclass(frozen=True)
class NonnegResult:
    ok: bool
    witness: QField | None = None

    def __bool__(self):
        return self.ok


def _interval_nonneg(P: list[QField], a: QField, b: QField) -> bool:
    if _negative_at(P, a) or _negative_at(P, b):
        return False
    if a == b:
        return True
    podd = odd_part(P)
    if len(podd) > 1:
        chain = sturm_chain(podd)
        if _open_count(chain, podd, a, b) > 0:
            return False
    s = QField(_nonroot_between(P, a, b))
    return p_eval(P, s).sign() > 0


def _negative_at(P, x) -> bool:
    return p_eval(P, x).sign() < 0


def _interval_witness(P: list[QField], a: QField, b: QField) -> QField:
    for x in (a, b):
        if _negative_at(P, x):
            # prefer a rational point near the offending endpoint
            other = b if x == a else a
            if x != other:
                for cand in _samples_near(P, x, other):
                    if _negative_at(P, cand):
                        return cand
            return x
    samples = []
    for lo_i, hi_i in _isolate(squarefree_part(P), a, b):
        samples.extend([lo_i, hi_i])
    if not samples:
        samples.append(QField(_nonroot_between(P, a, b)))
    for s in samples:
        if _negative_at(P, s):
            return s
    raise AssertionError("no negative sample found although f < 0 somewhere")


def _samples_near(P, x: QField, other: QField):
    # rational points approaching x from inside the interval
    step = other - x
    for k in range(1, 40):
        y = x + step / (2**k)
        yield QField(rational_between(min(x, y), max(x, y)))


def is_nonneg_on(f: CosinePoly, S) -> NonnegResult:
    """Decide exactly whether f >= 0 at every angle of the ThetaSet ``S``."""
    P = list(to_power(f).c)
    if not P:
        return NonnegResult(True)
    for x in S.points:
        if _negative_at(P, x):
            return NonnegResult(False, x)
    for a, b in S.intervals:
        if not _interval_nonneg(P, a, b):
            return NonnegResult(False, _interval_witness(P, a, b))
    return NonnegResult(True)


def _field_radicand(values) -> int:
    ds = {v.d for v in values if not v.is_rational}
    return ds.pop() if len(ds) == 1 else 1


def _refine(p, lo: QField, hi: QField, bits: int = 160):
    """Approximate the single root of ``p`` in (lo, hi) by bisection in mpmath."""
    import mpmath

    with mpmath.workprec(bits + 32):
        coeffs = [c.to_mpf() for c in p]
        a, b = lo.to_mpf(), hi.to_mpf()
        fa = mpmath.polyval(coeffs[::-1], a)
        for _ in range(bits):
            mid = (a + b) / 2
            fm = mpmath.polyval(coeffs[::-1], mid)
            if (fm < 0) == (fa < 0):
                a, fa = mid, fm
            else:
                b = mid
        return (a + b) / 2


def _recognize(p, x, d: int) -> QField | None:
    """An exact root a + b*sqrt(d) of ``p`` near ``x``, if PSLQ finds one that checks out."""
    import mpmath

    if abs(x) < mpmath.mpf(2) ** -120:
        return ZERO if not p_eval(p, ZERO) else None
    with mpmath.workprec(192):
        basis = [x, mpmath.mpf(1)] + ([mpmath.sqrt(d)] if d > 1 else [])
        rel = mpmath.pslq(basis, maxcoeff=10**8, maxsteps=10**4)
    if not rel or rel[0] == 0:
        return None
    a = Fraction(-rel[1], rel[0])
    b = Fraction(-rel[2], rel[0]) if d > 1 else Fraction(0)
    cand = QField(a, b, d if d > 1 else 0)
    return cand if not p_eval(p, cand) else None


def zeros_on(f: CosinePoly, S) -> list[QField]:
    """Exact zeros of f on ``S`` lying in the field of f and S.

    Finite points and interval endpoints are tested directly.  Interior roots
    are isolated, refined numerically and accepted only after an exact check,
    so a root outside Q(sqrt(d)) is never reported.
    """
    P = to_power(f)
    if not P.c:
        return sorted(set(S.points) | {e for iv in S.intervals for e in iv})
    cands = list(S.points) + [e for iv in S.intervals for e in iv]
    seen = []
    for x in cands:
        if not P(x) and x not in seen:
            seen.append(x)
    d = _field_radicand(list(P.c) + cands)
    sqf = squarefree_part(list(P.c))
    if len(sqf) > 1:
        for a, b in S.intervals:
            if a == b:
                continue
            for lo, hi in _isolate(sqf, a, b):
                root = _recognize(sqf, _refine(sqf, lo, hi), d)
                if root is not None and root not in seen:
                    seen.append(root)
    return sorted(seen)
