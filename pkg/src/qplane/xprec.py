"""Double-double arithmetic: ~106-bit reals and complexes from binary64 pairs.

A DDReal stores an unevaluated sum hi + lo with |lo| <= ulp(hi)/2.  The
basic operations are built from error-free transformations (two-sum and
Dekker's two-product), so add/mul carry a relative error of at most
2^-104 / 2^-102.  Division, exp and log are Newton/Taylor based and are
oracle-grade (~2^-95): they only feed the dual-precision matrix
comparison, never the certified error bounds.
"""

from __future__ import annotations

import math

_SPLITTER = 134217729.0  # 2^27 + 1, exact in binary64


def two_sum(a: float, b: float) -> tuple[float, float]:
    """Error-free sum: s + e == a + b exactly."""
    s = a + b
    bb = s - a
    e = (a - (s - bb)) + (b - bb)
    return s, e


def quick_two_sum(a: float, b: float) -> tuple[float, float]:
    """Error-free sum assuming |a| >= |b|."""
    s = a + b
    e = b - (s - a)
    return s, e


def split(a: float) -> tuple[float, float]:
    """Dekker split into two 26/27-bit halves with ahi + alo == a."""
    c = _SPLITTER * a
    abig = c - a
    ahi = c - abig
    return ahi, a - ahi


def two_prod(a: float, b: float) -> tuple[float, float]:
    """Error-free product: p + e == a * b exactly (no FMA on this platform)."""
    p = a * b
    ahi, alo = split(a)
    bhi, blo = split(b)
    e = ((ahi * bhi - p) + ahi * blo + alo * bhi) + alo * blo
    return p, e


class DDReal:
    """hi + lo with the non-overlap invariant |lo| <= ulp(hi)/2."""

    __slots__ = ("hi", "lo")

    def __init__(self, hi: float, lo: float = 0.0):
        self.hi = float(hi)
        self.lo = float(lo)

    @staticmethod
    def from_float(a: float) -> "DDReal":
        return DDReal(float(a), 0.0)

    @staticmethod
    def from_int(a: int) -> "DDReal":
        hi = float(a)
        return DDReal(hi, float(a - int(hi)))

    def renorm(self) -> "DDReal":
        s, e = quick_two_sum(self.hi, self.lo)
        return DDReal(s, e)

    def to_float(self) -> float:
        return self.hi + self.lo

    def is_finite(self) -> bool:
        return math.isfinite(self.hi) and math.isfinite(self.lo)

    def __neg__(self) -> "DDReal":
        return DDReal(-self.hi, -self.lo)

    def __abs__(self) -> "DDReal":
        return -self if (self.hi < 0.0 or (self.hi == 0.0 and self.lo < 0.0)) else self

    @staticmethod
    def _coerce(x) -> "DDReal":
        if isinstance(x, DDReal):
            return x
        if isinstance(x, int):
            return DDReal.from_int(x)
        return DDReal.from_float(x)

    def __add__(self, other) -> "DDReal":
        o = DDReal._coerce(other)
        s, e = two_sum(self.hi, o.hi)
        t, f = two_sum(self.lo, o.lo)
        e += t
        s, e = quick_two_sum(s, e)
        e += f
        s, e = quick_two_sum(s, e)
        return DDReal(s, e)

    __radd__ = __add__

    def __sub__(self, other) -> "DDReal":
        o = DDReal._coerce(other)
        return self + DDReal(-o.hi, -o.lo)

    def __rsub__(self, other) -> "DDReal":
        return DDReal._coerce(other) - self

    def __mul__(self, other) -> "DDReal":
        o = DDReal._coerce(other)
        p, e = two_prod(self.hi, o.hi)
        e += self.hi * o.lo + self.lo * o.hi
        p, e = quick_two_sum(p, e)
        return DDReal(p, e)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "DDReal":
        o = DDReal._coerce(other)
        # long division with two Newton-style correction terms
        q1 = self.hi / o.hi
        r = self - o * DDReal(q1)
        q2 = r.hi / o.hi
        r = r - o * DDReal(q2)
        q3 = r.hi / o.hi
        s, e = quick_two_sum(q1, q2)
        return DDReal(s, e) + DDReal(q3)

    def __rtruediv__(self, other) -> "DDReal":
        return DDReal._coerce(other) / self

    def _cmp(self, other) -> int:
        o = DDReal._coerce(other)
        if self.hi != o.hi:
            return -1 if self.hi < o.hi else 1
        if self.lo != o.lo:
            return -1 if self.lo < o.lo else 1
        return 0

    def __eq__(self, other) -> bool:
        return self._cmp(other) == 0

    def __lt__(self, other) -> bool:
        return self._cmp(other) < 0

    def __le__(self, other) -> bool:
        return self._cmp(other) <= 0

    def __gt__(self, other) -> bool:
        return self._cmp(other) > 0

    def __ge__(self, other) -> bool:
        return self._cmp(other) >= 0

    def __hash__(self):
        return hash((self.hi, self.lo))

    def __repr__(self) -> str:
        return f"DDReal({self.hi!r}, {self.lo!r})"


TWO_PI = DDReal(6.283185307179586, 2.4492935982947064e-16)
PI = DDReal(3.141592653589793, 1.2246467991473532e-16)
LN2 = DDReal(0.6931471805599453, 2.3190468138462996e-17)

# exp Taylor truncation: |r| <= ln2/2 after reduction, term 26 < 2^-110
_EXP_TERMS = 26


def dd_exp(x: DDReal) -> DDReal:
    """exp(x) in double-double; |x.hi| < 700 to stay clear of overflow."""
    if x.hi > 700.0 or x.hi < -700.0:
        raise OverflowError("dd_exp argument out of range")
    k = round(x.hi / LN2.hi)
    r = x - LN2 * DDReal.from_int(k)
    # Taylor sum, smallest terms first
    term = DDReal(1.0)
    terms = [term]
    for i in range(1, _EXP_TERMS):
        term = term * r / DDReal.from_int(i)
        terms.append(term)
    acc = DDReal(0.0)
    for t in reversed(terms):
        acc = acc + t
    return acc * DDReal(math.ldexp(1.0, k))


def dd_log(x: DDReal) -> DDReal:
    """log(x) in double-double: binary64 seed + one Newton step on exp."""
    if x.hi <= 0.0:
        raise ValueError("dd_log requires a positive argument")
    y = DDReal(math.log(x.hi + x.lo))
    # y1 = y + x*exp(-y) - 1; the seed is accurate to ~2^-52 so one step lands ~2^-100
    return y + x * dd_exp(-y) - DDReal(1.0)


def dd_log1p(t: DDReal) -> DDReal:
    """log(1 + t); the dd sum 1 + t keeps enough bits for the oracle path."""
    return dd_log(DDReal(1.0) + t)


class DDComplex:
    """Complex scalar with DDReal components."""

    __slots__ = ("re", "im")

    def __init__(self, re: DDReal, im: DDReal):
        self.re = re
        self.im = im

    @staticmethod
    def from_complex(z: complex) -> "DDComplex":
        return DDComplex(DDReal.from_float(z.real), DDReal.from_float(z.imag))

    def conj(self) -> "DDComplex":
        return DDComplex(self.re, -self.im)

    def to_complex(self) -> complex:
        return complex(self.re.to_float(), self.im.to_float())

    def __add__(self, other: "DDComplex") -> "DDComplex":
        return DDComplex(self.re + other.re, self.im + other.im)

    def __sub__(self, other: "DDComplex") -> "DDComplex":
        return DDComplex(self.re - other.re, self.im - other.im)

    def __mul__(self, other: "DDComplex") -> "DDComplex":
        re = self.re * other.re - self.im * other.im
        im = self.re * other.im + self.im * other.re
        return DDComplex(re, im)

    def __repr__(self) -> str:
        return f"DDComplex({self.re!r}, {self.im!r})"


def fused_product_add(a: float, b: float, c: float) -> float:
    """round(a*b + c) up to one extra rounding, via the error-free product.

    Used where a compiler would contract a*b + c into an FMA.
    """
    p, e = two_prod(a, b)
    s, f = two_sum(p, c)
    return s + (f + e)
