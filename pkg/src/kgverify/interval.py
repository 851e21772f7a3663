"""Outward-rounded interval arithmetic on double-precision endpoints.

Directed rounding is done without touching the FPU rounding mode: every
endpoint is computed in round-to-nearest and then pushed one step outward
with ``math.nextafter`` unless an error-free transformation shows the result
was exact.  Values are immutable, so intervals are safe to share between
threads and processes.

Transcendental endpoints (``exp``, ``log``, ``sin``, ``cos``) rely on libm being
accurate to within one ulp (glibc documents this); they are padded by two.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Union

__all__ = [
    "Interval",
    "Rational",
    "IntervalError",
    "DivisionByZeroInterval",
    "NegativeDomain",
    "DomainTooWide",
    "ZeroWidth",
    "InfiniteEndpoint",
    "add",
    "sub",
    "mul",
    "div",
    "neg",
    "iabs",
    "sqr",
    "sqrt",
    "pow_int",
    "pow_rational",
    "exp",
    "log",
    "sin_enclosure",
    "cos_enclosure",
    "bisect",
    "width",
    "midpoint",
    "PI",
    "HALF_PI",
]

#: Rational exponents are plain fractions: always reduced, denominator > 0.
Rational = Fraction

_INF = math.inf
_TRANSCENDENTAL_ULPS = 2
# Veltkamp splitting overflows above this magnitude.
_SPLIT_LIMIT = 2.0**995
_SPLITTER = 134217729.0  # 2**27 + 1


class IntervalError(ArithmeticError):
    """Base class for interval-engine domain errors."""


class DivisionByZeroInterval(IntervalError, ZeroDivisionError):
    pass


class NegativeDomain(IntervalError, ValueError):
    pass


class DomainTooWide(IntervalError, ValueError):
    pass


class ZeroWidth(IntervalError, ValueError):
    pass


class InfiniteEndpoint(IntervalError, ValueError):
    pass


def _down(x: float, n: int = 1) -> float:
    for _ in range(n):
        x = math.nextafter(x, -_INF)
    return x


def _up(x: float, n: int = 1) -> float:
    for _ in range(n):
        x = math.nextafter(x, _INF)
    return x


def _two_sum(a: float, b: float) -> tuple[float, float]:
    s = a + b
    bb = s - a
    err = (a - (s - bb)) + (b - bb)
    return s, err


def _split(a: float) -> tuple[float, float]:
    t = _SPLITTER * a
    hi = t - (t - a)
    return hi, a - hi


def _two_prod(a: float, b: float) -> tuple[float, float]:
    """Dekker's product: ``a*b == p + err`` exactly (barring over/underflow)."""
    p = a * b
    ah, al = _split(a)
    bh, bl = _split(b)
    err = ((ah * bh - p) + ah * bl + al * bh) + al * bl
    return p, err


def _sum_down(a: float, b: float) -> float:
    s, err = _two_sum(a, b)
    if not math.isfinite(s):
        return s if s < 0 else _down(s)
    return _down(s) if err < 0 else s


def _sum_up(a: float, b: float) -> float:
    s, err = _two_sum(a, b)
    if not math.isfinite(s):
        return s if s > 0 else _up(s)
    return _up(s) if err > 0 else s


def _prod_err(a: float, b: float) -> tuple[float, float | None]:
    p = a * b
    if a == 0.0 or b == 0.0:
        return 0.0, 0.0
    if p == 0.0 or not math.isfinite(p) or abs(a) > _SPLIT_LIMIT or abs(b) > _SPLIT_LIMIT:
        return p, None
    if abs(p) < 1e-290:
        # error term may be subnormal-inexact
        return p, None
    return _two_prod(a, b)


def _prod_down(a: float, b: float) -> float:
    p, err = _prod_err(a, b)
    if err is None:
        if p == 0.0:
            return -5e-324 if (a < 0) != (b < 0) else 0.0
        return _down(p)
    return _down(p) if err < 0 else p


def _prod_up(a: float, b: float) -> float:
    p, err = _prod_err(a, b)
    if err is None:
        if p == 0.0:
            return 5e-324 if (a < 0) == (b < 0) else 0.0
        return _up(p)
    return _up(p) if err > 0 else p


def _quot_down(a: float, b: float) -> float:
    if a == 0.0:
        return 0.0
    q = a / b
    # a == q*b exactly  <=>  the quotient is exact
    p, err = _prod_err(q, b)
    if err is None:
        return _down(q)
    if p == a and err == 0.0:
        return q
    return _down(q)


def _quot_up(a: float, b: float) -> float:
    if a == 0.0:
        return 0.0
    q = a / b
    p, err = _prod_err(q, b)
    if err is None:
        return _up(q)
    if p == a and err == 0.0:
        return q
    return _up(q)


def _sqrt_exact(x: float, r: float) -> bool:
    p, err = _prod_err(r, r)
    return err is not None and p == x and err == 0.0


class Interval:
    """Closed interval ``[lo, hi]`` of doubles with ``lo <= hi``.

    Arithmetic operators accept plain numbers, which are treated as exact
    point values.  Comparisons are deliberately not overloaded; use the
    ``lo``/``hi`` attributes or :meth:`contains`.
    """

    __slots__ = ("lo", "hi")

    def __init__(self, lo: float, hi: float | None = None):
        lo = float(lo)
        hi = lo if hi is None else float(hi)
        if math.isnan(lo) or math.isnan(hi):
            raise ValueError("interval endpoints must not be NaN")
        if lo > hi:
            raise ValueError(f"empty interval [{lo!r}, {hi!r}]")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    def __setattr__(self, name, value):
        raise AttributeError("Interval is immutable")

    def __reduce__(self):
        return (Interval, (self.lo, self.hi))

    @classmethod
    def point(cls, x: float) -> "Interval":
        return cls(x, x)

    @classmethod
    def hull(cls, *values: "float | Interval") -> "Interval":
        los, his = [], []
        for v in values:
            v = _as_interval(v)
            los.append(v.lo)
            his.append(v.hi)
        return cls(min(los), max(his))

    @classmethod
    def from_fraction(cls, q: Fraction) -> "Interval":
        """Tightest double interval containing the rational ``q``."""
        f = float(q)
        exact = Fraction(f)
        if exact == q:
            return cls(f, f)
        if exact < q:
            return cls(f, _up(f))
        return cls(_down(f), f)

    # -- queries ------------------------------------------------------------
    def __repr__(self) -> str:
        return f"Interval({self.lo!r}, {self.hi!r})"

    def __eq__(self, other) -> bool:
        if not isinstance(other, Interval):
            return NotImplemented
        return self.lo == other.lo and self.hi == other.hi

    def __hash__(self) -> int:
        return hash((self.lo, self.hi))

    def contains(self, x) -> bool:
        """Exact membership test; ``x`` may be a float, Fraction or mpmath number."""
        if isinstance(x, Interval):
            return self.lo <= x.lo and x.hi <= self.hi
        if isinstance(x, (int, float, Fraction)):
            return self.lo <= x <= self.hi
        # mpmath and friends compare exactly against Python floats
        return bool(self.lo <= x) and bool(x <= self.hi)

    __contains__ = contains

    @property
    def width(self) -> float:
        return width(self)

    @property
    def mid(self) -> float:
        return midpoint(self)

    def is_finite(self) -> bool:
        return math.isfinite(self.lo) and math.isfinite(self.hi)

    def straddles_zero(self) -> bool:
        return self.lo <= 0.0 <= self.hi

    def clamp_nonneg(self) -> "Interval":
        """Intersect with ``[0, inf)``; only valid when the true quantity is known nonnegative."""
        if self.hi < 0:
            raise ValueError(f"{self!r} has no nonnegative part")
        return Interval(max(self.lo, 0.0), self.hi)

    # -- operator sugar -------------------------------------------------------
    def __neg__(self):
        return neg(self)

    def __pos__(self):
        return self

    def __abs__(self):
        return iabs(self)

    def __add__(self, other):
        return add(self, other)

    __radd__ = __add__

    def __sub__(self, other):
        return sub(self, other)

    def __rsub__(self, other):
        return sub(other, self)

    def __mul__(self, other):
        return mul(self, other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        return div(self, other)

    def __rtruediv__(self, other):
        return div(other, self)

    def __pow__(self, p):
        if isinstance(p, int):
            return pow_int(self, p)
        return pow_rational(self, p)


Number = Union[int, float, Fraction]


def _as_interval(x) -> Interval:
    if isinstance(x, Interval):
        return x
    if isinstance(x, Fraction):
        return Interval.from_fraction(x)
    if isinstance(x, int) and not isinstance(x, bool):
        f = float(x)
        if int(f) == x:
            return Interval(f, f)
        return Interval.from_fraction(Fraction(x))
    if isinstance(x, float):
        return Interval(x, x)
    raise TypeError(f"cannot interpret {type(x).__name__} as an Interval")


def _check_finite(*xs: Interval) -> None:
    for x in xs:
        if not (math.isfinite(x.lo) and math.isfinite(x.hi)):
            raise InfiniteEndpoint(f"arithmetic on infinite endpoint {x!r}")


def add(x, y) -> Interval:
    x, y = _as_interval(x), _as_interval(y)
    _check_finite(x, y)
    return Interval(_sum_down(x.lo, y.lo), _sum_up(x.hi, y.hi))


def sub(x, y) -> Interval:
    x, y = _as_interval(x), _as_interval(y)
    _check_finite(x, y)
    return Interval(_sum_down(x.lo, -y.hi), _sum_up(x.hi, -y.lo))


def neg(x) -> Interval:
    x = _as_interval(x)
    return Interval(-x.hi, -x.lo)


def iabs(x) -> Interval:
    x = _as_interval(x)
    if x.lo >= 0:
        return x
    if x.hi <= 0:
        return Interval(-x.hi, -x.lo)
    return Interval(0.0, max(-x.lo, x.hi))


def mul(x, y) -> Interval:
    x, y = _as_interval(x), _as_interval(y)
    _check_finite(x, y)
    a, b, c, d = x.lo, x.hi, y.lo, y.hi
    if a >= 0 and c >= 0:
        return Interval(_prod_down(a, c), _prod_up(b, d))
    pairs = ((a, c), (a, d), (b, c), (b, d))
    lo = min(_prod_down(u, v) for u, v in pairs)
    hi = max(_prod_up(u, v) for u, v in pairs)
    return Interval(lo, hi)


def sqr(x) -> Interval:
    """Range of ``t**2`` over ``x`` (tighter than ``x*x`` when ``x`` straddles 0)."""
    x = iabs(x)
    _check_finite(x)
    return Interval(_prod_down(x.lo, x.lo), _prod_up(x.hi, x.hi))


def div(x, y) -> Interval:
    x, y = _as_interval(x), _as_interval(y)
    _check_finite(x, y)
    if y.lo <= 0.0 <= y.hi:
        raise DivisionByZeroInterval(f"divisor {y!r} contains zero")
    a, b, c, d = x.lo, x.hi, y.lo, y.hi
    pairs = ((a, c), (a, d), (b, c), (b, d))
    lo = min(_quot_down(u, v) for u, v in pairs)
    hi = max(_quot_up(u, v) for u, v in pairs)
    return Interval(lo, hi)


def sqrt(x, strict: bool = False) -> Interval:
    """Square root over ``x ∩ [0, inf)``.

    A negative lower endpoint is clamped to zero unless ``strict`` is set.
    """
    x = _as_interval(x)
    _check_finite(x)
    if x.hi < 0:
        raise NegativeDomain(f"sqrt of negative interval {x!r}")
    if x.lo < 0:
        if strict:
            raise NegativeDomain(f"sqrt domain violation: {x!r}")
        x = Interval(0.0, x.hi)
    r_lo = math.sqrt(x.lo)
    if not _sqrt_exact(x.lo, r_lo):
        r_lo = _down(r_lo)
    r_hi = math.sqrt(x.hi)
    if not _sqrt_exact(x.hi, r_hi):
        r_hi = _up(r_hi)
    return Interval(max(r_lo, 0.0), r_hi)


def pow_int(x, n: int) -> Interval:
    x = _as_interval(x)
    if n == 0:
        return Interval(1.0)
    if n < 0:
        return div(1.0, pow_int(x, -n))
    if n % 2 == 0:
        base = iabs(x)
    else:
        base = x
    # odd powers and even powers of |x| are monotone on base
    lo = _pow_point(base.lo, n, down=True)
    hi = _pow_point(base.hi, n, down=False)
    return Interval(lo, hi)


def _pow_point(a: float, n: int, down: bool) -> float:
    """Directed-rounded ``a**n`` for a single endpoint (monotone use only)."""
    if n == 1:
        return a
    # enclose the point power with interval squaring, keep the wanted side
    acc = Interval(1.0)
    base = Interval(a)
    k = n
    while k:
        if k & 1:
            acc = mul(acc, base)
        k >>= 1
        if k:
            base = sqr(base) if base.lo >= 0 or base.hi <= 0 else mul(base, base)
    return acc.lo if down else acc.hi


def log(x) -> Interval:
    x = _as_interval(x)
    _check_finite(x)
    if x.lo <= 0:
        raise NegativeDomain(f"log of non-positive interval {x!r}")
    lo = math.log(x.lo)
    hi = math.log(x.hi)
    lo = lo if x.lo == 1.0 else _down(lo, _TRANSCENDENTAL_ULPS)
    hi = hi if x.hi == 1.0 else _up(hi, _TRANSCENDENTAL_ULPS)
    return Interval(lo, hi)


def exp(x) -> Interval:
    x = _as_interval(x)
    _check_finite(x)
    lo = 1.0 if x.lo == 0 else max(_down(math.exp(x.lo), _TRANSCENDENTAL_ULPS), 0.0)
    try:
        hi = 1.0 if x.hi == 0 else _up(math.exp(x.hi), _TRANSCENDENTAL_ULPS)
    except OverflowError:
        hi = _INF
    return Interval(lo, hi)


def _is_power_of_two(n: int) -> bool:
    return n > 0 and n & (n - 1) == 0


def pow_rational(x, p, method: str = "explog") -> Interval:
    """Enclosure of ``t**p`` over ``x`` for rational ``p``.

    ``method="explog"`` evaluates ``exp(p*log t)`` at the endpoints;
    ``method="dyadic"`` (denominators that are powers of two only) uses
    repeated interval square roots followed by an integer power, which is
    slower but depends on nothing beyond correctly rounded ``sqrt``.
    """
    x = _as_interval(x)
    p = Fraction(p)
    if p.denominator == 1:
        return pow_int(x, p.numerator)
    if x.lo < 0:
        raise NegativeDomain(f"non-integer power {p} of {x!r}")
    _check_finite(x)
    if method == "dyadic":
        if not _is_power_of_two(p.denominator):
            raise ValueError(f"dyadic method needs a power-of-two denominator, got {p}")
        r = x
        for _ in range(p.denominator.bit_length() - 1):
            r = sqrt(r)
        return pow_int(r, p.numerator)
    if method != "explog":
        raise ValueError(f"unknown method {method!r}")
    if p < 0 and x.lo == 0:
        raise DivisionByZeroInterval(f"negative power {p} of interval touching zero")
    pi = Interval.from_fraction(p)
    ends = [_pow_endpoint(x.lo, pi), _pow_endpoint(x.hi, pi)]
    return Interval(min(e.lo for e in ends), max(e.hi for e in ends))


def _pow_endpoint(a: float, p: Interval) -> Interval:
    if a == 0.0:
        return Interval(0.0)
    if a == 1.0:
        return Interval(1.0)
    return exp(mul(p, log(a)))


# -- trigonometry -------------------------------------------------------------

#: rigorous enclosure of pi (3.141592653589793 < pi < next double)
PI = Interval(3.141592653589793, math.nextafter(3.141592653589793, _INF))
HALF_PI = Interval(PI.lo / 2, PI.hi / 2)
_TWO_PI_HI = 2 * PI.hi


_HALF_PI_MULTIPLES = {k: mul(PI, k / 2) for k in range(-4, 5)}


def _multiple_of_half_pi(k: int) -> Interval:
    return _HALF_PI_MULTIPLES[k]


def _may_contain(x: Interval, c: Interval) -> bool:
    return x.lo <= c.hi and c.lo <= x.hi


def _sin_point(a: float, down: bool) -> float:
    if a == 0.0:
        return 0.0
    v = math.sin(a)
    v = _down(v, _TRANSCENDENTAL_ULPS) if down else _up(v, _TRANSCENDENTAL_ULPS)
    return min(max(v, -1.0), 1.0)


def _cos_point(a: float, down: bool) -> float:
    if a == 0.0:
        return 1.0
    v = math.cos(a)
    v = _down(v, _TRANSCENDENTAL_ULPS) if down else _up(v, _TRANSCENDENTAL_ULPS)
    return min(max(v, -1.0), 1.0)


def _check_trig_domain(x: Interval) -> None:
    _check_finite(x)
    if x.lo < -_TWO_PI_HI or x.hi > _TWO_PI_HI:
        raise DomainTooWide(f"trig enclosure supports [-2pi, 2pi], got {x!r}")


def sin_enclosure(x) -> Interval:
    x = _as_interval(x)
    _check_trig_domain(x)
    a = _sin_point(x.lo, True), _sin_point(x.hi, True)
    b = _sin_point(x.lo, False), _sin_point(x.hi, False)
    lo, hi = min(a), max(b)
    # maxima at pi/2 - 2pi, pi/2; minima at -pi/2, 3pi/2
    for k in (-3, 1):
        if _may_contain(x, _multiple_of_half_pi(k)):
            hi = 1.0
    for k in (-1, 3):
        if _may_contain(x, _multiple_of_half_pi(k)):
            lo = -1.0
    # sign is known exactly on [0, pi] and [-pi, 0]
    if x.lo >= 0.0 and x.hi <= PI.lo:
        lo = max(lo, 0.0)
    if x.hi <= 0.0 and x.lo >= -PI.lo:
        hi = min(hi, 0.0)
    return Interval(lo, hi)


def cos_enclosure(x) -> Interval:
    x = _as_interval(x)
    _check_trig_domain(x)
    a = _cos_point(x.lo, True), _cos_point(x.hi, True)
    b = _cos_point(x.lo, False), _cos_point(x.hi, False)
    lo, hi = min(a), max(b)
    for k in (-4, 0, 4):
        if _may_contain(x, _multiple_of_half_pi(k)):
            hi = 1.0
    for k in (-2, 2):
        if _may_contain(x, _multiple_of_half_pi(k)):
            lo = -1.0
    if x.lo >= -HALF_PI.lo and x.hi <= HALF_PI.lo:
        lo = max(lo, 0.0)
    return Interval(lo, hi)


# -- subdivision -------------------------------------------------------------

def width(x) -> float:
    """Width rounded upward."""
    x = _as_interval(x)
    return _sum_up(x.hi, -x.lo)


def midpoint(x) -> float:
    x = _as_interval(x)
    m = x.lo / 2 + x.hi / 2
    if not (x.lo <= m <= x.hi):
        m = x.lo + (x.hi - x.lo) / 2
    return m


def bisect(x) -> tuple[Interval, Interval]:
    x = _as_interval(x)
    if not x.hi > x.lo:
        raise ZeroWidth(f"cannot bisect degenerate interval {x!r}")
    m = midpoint(x)
    if m == x.lo or m == x.hi:
        raise ZeroWidth(f"interval {x!r} is too narrow to bisect")
    return Interval(x.lo, m), Interval(m, x.hi)
