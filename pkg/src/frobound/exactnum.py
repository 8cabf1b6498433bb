"""Exact arithmetic in a real quadratic field Q(sqrt(d)).

Every value is ``a + b*sqrt(d)`` with rational ``a`` and ``b``.  Signs and
comparisons are decided with rational arithmetic only, so the ordering is
exact.  A computation for field size ``q`` works in ``d = squarefree(q)``;
pure rationals (``b == 0``) mix freely with any radicand.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from functools import total_ordering
from numbers import Rational
from typing import Union

from .errors import InvalidRadicandError, RadicandMismatchError

RationalLike = Union[int, Fraction, str]


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"not a rational: {x!r}")


def squarefree_decompose(n: int) -> tuple[int, int]:
    """Return ``(s, d)`` with ``n == s*s*d`` and ``d`` squarefree."""
    if n < 0:
        raise InvalidRadicandError(f"negative integer {n}")
    if n == 0:
        return 0, 0
    s, d, p = 1, 1, 2
    while p * p <= n:
        while n % (p * p) == 0:
            n //= p * p
            s *= p
        if n % p == 0:
            n //= p
            d *= p
        p += 1
    return s, d * n


def is_squarefree(d: int) -> bool:
    return d >= 0 and (d == 0 or squarefree_decompose(d)[0] == 1)


@total_ordering
class QField:
    """Immutable element a + b*sqrt(d) of Q(sqrt(d))."""

    __slots__ = ("_a", "_b", "_d")

    def __init__(self, a: RationalLike = 0, b: RationalLike = 0, d: int = 0):
        a, b = _frac(a), _frac(b)
        d = int(d)
        if not is_squarefree(d):
            raise InvalidRadicandError(f"radicand {d} is not a nonnegative squarefree integer")
        if d == 1:
            a, b = a + b, Fraction(0)
        elif d == 0:
            b = Fraction(0)
        object.__setattr__(self, "_a", a)
        object.__setattr__(self, "_b", b)
        object.__setattr__(self, "_d", d)

    def __setattr__(self, name, value):
        raise AttributeError("QField is immutable")

    @property
    def a(self) -> Fraction:
        return self._a

    @property
    def b(self) -> Fraction:
        return self._b

    @property
    def d(self) -> int:
        return self._d

    @property
    def is_rational(self) -> bool:
        return self._b == 0

    # -- construction helpers -------------------------------------------

    @classmethod
    def sqrt(cls, n: int) -> QField:
        """Exact square root of a nonnegative integer ``n``."""
        s, d = squarefree_decompose(n)
        if d <= 1:
            return cls(s * d)
        return cls(0, s, d)

    @classmethod
    def coerce(cls, x) -> QField:
        if isinstance(x, QField):
            return x
        return cls(_frac(x))

    def _common(self, other) -> tuple[QField, int]:
        other = QField.coerce(other)
        if self._d == other._d or other._b == 0:
            return other, self._d
        if self._b == 0:
            return other, other._d
        raise RadicandMismatchError(f"radicands {self._d} and {other._d} differ")

    # -- arithmetic -------------------------------------------------------

    def __add__(self, other):
        try:
            o, d = self._common(other)
        except TypeError:
            return NotImplemented
        return QField(self._a + o._a, self._b + o._b, d)

    __radd__ = __add__

    def __neg__(self):
        return QField(-self._a, -self._b, self._d)

    def __pos__(self):
        return self

    def __sub__(self, other):
        try:
            o, d = self._common(other)
        except TypeError:
            return NotImplemented
        return QField(self._a - o._a, self._b - o._b, d)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        try:
            o, d = self._common(other)
        except TypeError:
            return NotImplemented
        a, b = self._a, self._b
        return QField(a * o._a + d * b * o._b, a * o._b + b * o._a, d)

    __rmul__ = __mul__

    def conjugate(self) -> QField:
        return QField(self._a, -self._b, self._d)

    def norm(self) -> Fraction:
        return self._a * self._a - self._d * self._b * self._b

    def inverse(self) -> QField:
        n = self.norm()
        if n == 0:
            # for squarefree d > 1 the norm vanishes only at zero
            raise ZeroDivisionError("inverse of zero in Q(sqrt(d))")
        return QField(self._a / n, -self._b / n, self._d)

    def __truediv__(self, other):
        try:
            o = QField.coerce(other)
        except TypeError:
            return NotImplemented
        self._common(o)
        return self * o.inverse()

    def __rtruediv__(self, other):
        return QField.coerce(other) / self

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        result, base = QField(1), self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    # -- ordering ---------------------------------------------------------

    def sign(self) -> int:
        sa = (self._a > 0) - (self._a < 0)
        sb = (self._b > 0) - (self._b < 0)
        if sb == 0:
            return sa
        if sa == 0 or sa == sb:
            return sb
        lhs = self._a * self._a
        rhs = self._d * self._b * self._b
        return sa if lhs > rhs else sb

    def __eq__(self, other):
        try:
            o = QField.coerce(other)
        except TypeError:
            return NotImplemented
        if self._a != o._a or self._b != o._b:
            return False
        return self._b == 0 or self._d == o._d

    def __lt__(self, other):
        try:
            return (self - other).sign() < 0
        except TypeError:
            return NotImplemented

    def __hash__(self):
        if self._b == 0:
            return hash(self._a)
        return hash((self._a, self._b, self._d))

    def __bool__(self):
        return bool(self._a) or bool(self._b)

    def __abs__(self):
        return -self if self.sign() < 0 else self

    def floor(self) -> int:
        n = math.floor(float(self))
        while self < n:
            n -= 1
        while self >= n + 1:
            n += 1
        return n

    # -- conversions ------------------------------------------------------

    def __float__(self):
        return float(self._a) + float(self._b) * math.sqrt(self._d)

    def to_mpf(self):
        import mpmath

        return mpmath.mpf(self._a.numerator) / self._a.denominator + (
            mpmath.mpf(self._b.numerator) / self._b.denominator
        ) * mpmath.sqrt(self._d)

    def rational_bounds(self, bits: int) -> tuple[Fraction, Fraction]:
        """Rationals ``lo <= self <= hi`` whose gap is at most ``|b| * 2**-bits``."""
        if self._b == 0:
            return self._a, self._a
        scale = 1 << bits
        s = math.isqrt(self._d * scale * scale)
        lo_root = Fraction(s, scale)
        hi_root = Fraction(s + 1, scale)
        x, y = self._a + self._b * lo_root, self._a + self._b * hi_root
        return (x, y) if x <= y else (y, x)

    def to_json(self) -> dict:
        return {"a": _fstr(self._a), "b": _fstr(self._b), "d": self._d}

    @classmethod
    def from_json(cls, obj) -> QField:
        if isinstance(obj, (int, str)):
            return cls(_frac(obj))
        return cls(_frac(obj["a"]), _frac(obj.get("b", "0")), int(obj.get("d", 0)))

    def __repr__(self):
        if self._b == 0:
            return f"QField({_fstr(self._a)!r})"
        return f"QField({_fstr(self._a)!r}, {_fstr(self._b)!r}, {self._d})"

    def __str__(self):
        if self._b == 0:
            return str(self._a)
        b = abs(self._b)
        coef = "" if b == 1 else (f"{b}" if b.denominator == 1 else f"({b})")
        tail = f"{coef}√{self._d}"
        if self._a == 0:
            return tail if self._b > 0 else f"-{tail}"
        return f"{self._a} {'+' if self._b > 0 else '-'} {tail}"


def _fstr(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def qf_make(a: RationalLike, b: RationalLike, d: int) -> QField:
    return QField(a, b, d)


def qf_sign(x: QField) -> int:
    return QField.coerce(x).sign()


def rational_between(lo, hi, weight: Fraction = Fraction(1, 2)) -> Fraction:
    """A rational strictly between ``lo < hi`` near ``lo + weight*(hi - lo)``.

    The result lies within an eighth of the gap from the target point and has
    a denominator of the order of 1/gap.
    """
    lo, hi = QField.coerce(lo), QField.coerce(hi)
    if not lo < hi:
        raise ValueError("empty interval")
    bits = 16
    while True:
        lo_out = lo.rational_bounds(bits)[1]
        hi_in = hi.rational_bounds(bits)[0]
        if lo_out < hi_in:
            break
        bits *= 2
    gap = hi_in - lo_out
    target = lo_out + weight * gap
    bound = max(2, math.ceil(8 / gap))
    cand = target.limit_denominator(bound)
    if lo_out < cand < hi_in:
        return cand
    return target


_TERM = re.compile(
    r"""\s*(?P<sign>[+-])?\s*
    (?:
        (?P<coef>\d+(?:/\d+)?)?\s*\*?\s*(?:sqrt\(\s*(?P<rad>\d+)\s*\)|√(?P<rad2>\d+))(?:\s*/\s*(?P<den>\d+))?
      | (?P<rat>\d+(?:/\d+)?)
    )\s*""",
    re.VERBOSE,
)


def parse_qfield(text: str) -> QField:
    """Parse sums such as ``"1/2 - sqrt(2)/4"``, ``"3*sqrt(2)"`` or ``"-√3/2"``."""
    src = text.strip()
    if not src:
        raise ValueError("empty number")
    total, pos = QField(0), 0
    while pos < len(src):
        m = _TERM.match(src, pos)
        if not m or m.end() == pos or (pos > 0 and not m.group("sign")):
            raise ValueError(f"cannot parse {text!r} at position {pos}")
        sign = -1 if m.group("sign") == "-" else 1
        if m.group("rat") is not None:
            term = QField(Fraction(m.group("rat")))
        else:
            coef = Fraction(m.group("coef") or 1) / int(m.group("den") or 1)
            term = coef * QField.sqrt(int(m.group("rad") or m.group("rad2")))
        total = total + sign * term
        pos = m.end()
    return total
