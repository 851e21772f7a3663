"""Named functions of the bilinear Klein-Gordon estimates.

Every function accepts three kinds of scalar:

* point values -- Python floats or numpy arrays (double precision),
* rigorous values -- :class:`~kgverify.interval.Interval`,
* high-precision values -- ``mpmath.mpf`` (used by the test oracles).

Three coordinate systems are used throughout: the frequency ``xi``, the
normalized coordinate ``s = xi / sqrt(1 + xi**2)`` in ``[-1, 1]`` (``s = ±1``
is ``xi = ±inf``), and the angle ``theta`` with ``s = sin(theta)``.  The ``*_s``
variants take normalized coordinates and are the only way to evaluate at
infinity.

Point evaluations use cancellation-free rearrangements where the literal
formula loses digits (differences of nearly equal ``g`` values, ``1 - cos`` of a
small angle); the rigorous evaluations use the literal formulas.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction

import mpmath
import numpy as np

from . import interval as ivl
from .interval import Interval

__all__ = [
    "ScalarKind",
    "kind_of",
    "AlphaParam",
    "KGFunctionError",
    "PoleAtUnitCircle",
    "DiagonalSingularity",
    "BadExponentRange",
    "InfiniteArgument",
    "g",
    "to_s",
    "to_xi",
    "to_theta",
    "theta_to_s",
    "cosine_s",
    "jacobian",
    "jacobian_s",
    "chordal",
    "chordal_s",
    "sigma",
    "sigma_s",
    "weight_thmA",
    "weight_thm1",
    "weight_thm1_s",
    "aux_E2",
    "aux_E2_d1",
    "aux_E2_d2",
    "aux_E5",
    "aux_E5_d1",
    "aux_E5_d2",
    "prop_seed_derivative",
    "elementary_ab_ratio",
]


class KGFunctionError(ValueError):
    pass


class PoleAtUnitCircle(KGFunctionError):
    pass


class DiagonalSingularity(KGFunctionError, ZeroDivisionError):
    pass


class BadExponentRange(KGFunctionError):
    pass


class InfiniteArgument(KGFunctionError):
    pass


class ScalarKind(enum.Enum):
    POINT = "point"
    RIGOROUS = "rigorous"
    HIGH_PRECISION = "high_precision"


def kind_of(*xs) -> ScalarKind:
    if any(isinstance(x, Interval) for x in xs):
        return ScalarKind.RIGOROUS
    if any(isinstance(x, (mpmath.mpf, mpmath.mpc)) for x in xs):
        return ScalarKind.HIGH_PRECISION
    return ScalarKind.POINT


@dataclass(frozen=True)
class AlphaParam:
    """Deformation exponent of ``sigma``.

    Values outside ``[1, 2]`` are only constructible with ``certifiable=False``
    and are meant for the blow-up experiments.
    """

    value: float
    certifiable: bool = True

    def __post_init__(self):
        if not np.isfinite(self.value) or self.value <= 0:
            raise ValueError(f"alpha must be positive and finite, got {self.value}")
        if self.certifiable and not 1.0 <= self.value <= 2.0:
            raise ValueError(f"alpha must lie in [1, 2], got {self.value}")

    @classmethod
    def experimental(cls, value: float) -> "AlphaParam":
        return cls(float(value), certifiable=False)


def _alpha(alpha) -> float:
    if isinstance(alpha, AlphaParam):
        return alpha.value
    return AlphaParam(float(alpha)).value


# -- backend helpers --------------------------------------------------------

def _sqrt(x):
    if isinstance(x, Interval):
        return ivl.sqrt(x)
    if isinstance(x, mpmath.mpf):
        return mpmath.sqrt(x)
    return np.sqrt(x)


def _pow(x, p):
    if isinstance(x, Interval):
        return ivl.pow_rational(x, Fraction(p))
    if isinstance(x, mpmath.mpf):
        return mpmath.power(x, p)
    return np.power(x, p)


def _hypot1(x):
    """sqrt(1 + x**2)."""
    if isinstance(x, Interval):
        return ivl.sqrt(1.0 + ivl.sqr(x))
    if isinstance(x, mpmath.mpf):
        return mpmath.sqrt(1 + x * x)
    return np.hypot(1.0, x)


def _cos_from_s(s):
    """sqrt(1 - s**2) computed as sqrt((1 - s)(1 + s))."""
    if isinstance(s, Interval):
        return ivl.sqrt((1.0 - s) * (1.0 + s))
    if isinstance(s, mpmath.mpf):
        return mpmath.sqrt((1 - s) * (1 + s))
    return np.sqrt((1.0 - s) * (1.0 + s))


def _is_point(*xs) -> bool:
    return kind_of(*xs) is ScalarKind.POINT


def _check_finite_xi(*xs) -> None:
    for x in xs:
        if _is_point(x) and not np.all(np.isfinite(x)):
            raise InfiniteArgument("xi = ±inf must be passed in s-coordinates (s = ±1)")


def _check_s(*ss) -> None:
    for s in ss:
        if _is_point(s) and np.any(np.abs(s) > 1.0):
            raise ValueError("normalized coordinate must satisfy |s| <= 1")


def _check_off_diagonal(a, b) -> None:
    if isinstance(a, Interval) or isinstance(b, Interval):
        a_, b_ = ivl._as_interval(a), ivl._as_interval(b)
        if a_.lo <= b_.hi and b_.lo <= a_.hi:
            raise DiagonalSingularity("interval arguments may coincide")
        return
    if np.any(np.asarray(a == b)):
        raise DiagonalSingularity("weight is singular on the diagonal xi1 == xi2")


def _result(x):
    if isinstance(x, np.ndarray) and x.ndim == 0:
        return float(x)
    return x


# -- coordinates ---------------------------------------------------------------

def g(x):
    """x / sqrt(1 + x**2); strictly increasing, maps R onto (-1, 1)."""
    _check_finite_xi(x)
    if isinstance(x, Interval):
        # monotone: evaluate the endpoints rigorously
        lo = Interval(x.lo) / _hypot1(Interval(x.lo))
        hi = Interval(x.hi) / _hypot1(Interval(x.hi))
        return Interval(lo.lo, hi.hi)
    return _result(x / _hypot1(x))


to_s = g


def to_xi(s):
    _check_s(s)
    if _is_point(s) and np.any(np.abs(s) >= 1.0):
        raise PoleAtUnitCircle("to_xi is singular at s = ±1")
    if isinstance(s, Interval) and (s.lo <= -1.0 or s.hi >= 1.0):
        raise PoleAtUnitCircle("to_xi is singular at s = ±1")
    return _result(s / _cos_from_s(s))


def to_theta(xi):
    """Angle coordinate theta = arctan(xi) in [-pi/2, pi/2] (accepts ±inf)."""
    if isinstance(xi, mpmath.mpf):
        return mpmath.atan(xi)
    return _result(np.arctan(xi))


def theta_to_s(theta):
    if isinstance(theta, Interval):
        return ivl.sin_enclosure(theta)
    if isinstance(theta, mpmath.mpf):
        return mpmath.sin(theta)
    return _result(np.sin(theta))


def cosine_s(s):
    """sqrt(1 - s**2), i.e. 1/sqrt(1 + xi**2) in normalized coordinates."""
    _check_s(s)
    return _result(_cos_from_s(s))


# -- Jacobian and distances ------------------------------------------------------

def jacobian(xi1, xi2):
    """J = |g(xi1) - g(xi2)|, the Jacobian of (xi1, xi2) -> (xi1 + xi2, <xi1> + <xi2>)."""
    _check_finite_xi(xi1, xi2)
    if not _is_point(xi1, xi2):
        return abs(g(xi1) - g(xi2))
    x1 = np.asarray(xi1, dtype=float)
    x2 = np.asarray(xi2, dtype=float)
    h1, h2 = np.hypot(1.0, x1), np.hypot(1.0, x2)
    with np.errstate(invalid="ignore", divide="ignore"):
        # same sign: |xi1^2 - xi2^2| / (|xi1 h2 + xi2 h1| h1 h2) avoids cancellation
        same = np.abs(x1 - x2) * np.abs(x1 + x2) / (np.abs(x1 * h2 + x2 * h1) * h1 * h2)
    direct = np.abs(x1 / h1 - x2 / h2)
    use_same = (x1 * x2 > 0) & (x1 != x2)
    out = np.where(use_same, same, direct)
    return _result(out)


def jacobian_s(s1, s2):
    _check_s(s1, s2)
    return _result(abs(s1 - s2))


def chordal(xi1, xi2):
    """Chordal distance |xi1 - xi2| / (sqrt(1 + xi1^2) sqrt(1 + xi2^2)), at most 1."""
    _check_finite_xi(xi1, xi2)
    return _result(abs(xi1 - xi2) / (_hypot1(xi1) * _hypot1(xi2)))


def chordal_s(s1, s2):
    """|s1 c2 - s2 c1| with c = sqrt(1 - s^2)."""
    _check_s(s1, s2)
    c1, c2 = _cos_from_s(s1), _cos_from_s(s2)
    if not _is_point(s1, s2):
        return abs(s1 * c2 - s2 * c1)
    a1, a2 = np.asarray(s1, dtype=float), np.asarray(s2, dtype=float)
    cross = np.abs(a1) * c2 + np.abs(a2) * c1
    with np.errstate(invalid="ignore", divide="ignore"):
        same = np.abs(a1 - a2) * np.abs(a1 + a2) / cross
    out = np.where(a1 * a2 > 0, same, cross)
    out = np.where(a1 == a2, 0.0, out)
    return _result(out)


def sigma(alpha, xi1, xi2):
    """Deformed chordal distance |xi1 - xi2|^a / ((1+xi1^2)(1+xi2^2))^(1/2 + a/4)."""
    a = _alpha(alpha)
    _check_finite_xi(xi1, xi2)
    chi = chordal(xi1, xi2)
    damp = _hypot1(xi1) * _hypot1(xi2)
    if a == 2.0:
        return _result(chi * chi)
    return _result(_pow(chi, a) * _pow(damp, a / 2 - 1))


def sigma_s(alpha, s1, s2):
    """sigma in normalized coordinates: chordal_s^a * ((1-s1^2)(1-s2^2))^((2-a)/4)."""
    a = _alpha(alpha)
    chi = chordal_s(s1, s2)
    if a == 2.0:
        return _result(chi * chi)
    cc = _cos_from_s(s1) * _cos_from_s(s2)
    return _result(_pow(chi, a) * _pow(cc, 1 - a / 2))


def weight_thmA(xi1, xi2):
    """(1 + xi1^2)^(3/4) (1 + xi2^2)^(3/4) / |xi2 - xi1|."""
    _check_finite_xi(xi1, xi2)
    _check_off_diagonal(xi1, xi2)
    hh = _hypot1(xi1) * _hypot1(xi2)
    return _result(_pow(hh, 1.5) / abs(xi2 - xi1))


def _one_minus_cos(cos_d, chi):
    """1 - cos(d) given cos(d) and |sin(d)|; uses sin^2/(1 + cos) when cos >= 0."""
    if not _is_point(cos_d, chi):
        return 1 - cos_d
    with np.errstate(invalid="ignore", divide="ignore"):
        comp = chi * chi / (1.0 + cos_d)
    return np.where(cos_d >= 0, comp, 1.0 - cos_d)


def weight_thm1(xi1, xi2):
    """(1 - (1, xi1).(1, xi2) / (sqrt(1 + xi1^2) sqrt(1 + xi2^2)))^-1."""
    _check_finite_xi(xi1, xi2)
    _check_off_diagonal(xi1, xi2)
    cos_d = (1 + xi1 * xi2) / (_hypot1(xi1) * _hypot1(xi2))
    return _result(1 / _one_minus_cos(cos_d, chordal(xi1, xi2)))


def weight_thm1_s(s1, s2):
    """weight_thm1 in normalized coordinates; denominator 1 - s1 s2 - c1 c2."""
    _check_s(s1, s2)
    _check_off_diagonal(s1, s2)
    cos_d = s1 * s2 + _cos_from_s(s1) * _cos_from_s(s2)
    return _result(1 / _one_minus_cos(cos_d, chordal_s(s1, s2)))


# -- auxiliary one-variable functions of the convexity proofs -------------------

def aux_E2(x, xi1):
    """f(x) = <xi1>^(3/2) x <x>^(1/2) - xi1 <xi1>^(1/2) <x>^(3/2) - (x - xi1), <y> = sqrt(1+y^2)."""
    p1 = 1 + xi1 * xi1
    px = 1 + x * x
    return (_pow(p1, 0.75) * x * _pow(px, 0.25)
            - xi1 * _pow(p1, 0.25) * _pow(px, 0.75)
            - (x - xi1))


def aux_E2_d1(x, xi1):
    p1 = 1 + xi1 * xi1
    px = 1 + x * x
    return (_pow(p1, 0.75) * _pow(px, 0.25)
            + _pow(p1, 0.75) * x * x / (2 * _pow(px, 0.75))
            - 3 * xi1 * _pow(p1, 0.25) * x / (2 * _pow(px, 0.25))
            - 1)


def aux_E2_d2(x, xi1):
    p1 = 1 + xi1 * xi1
    px = 1 + x * x
    return (3 * _pow(p1, 0.25) * (x * x + 2) * (_sqrt(p1) * x - xi1 * _sqrt(px))
            / (4 * _pow(px, 1.75)))


def aux_E5(x, xi1):
    """f(x) = -<xi1><x> - xi1 <x> + <xi1> x + xi1 x + 1."""
    h1 = _sqrt(1 + xi1 * xi1)
    hx = _sqrt(1 + x * x)
    return -h1 * hx - xi1 * hx + h1 * x + xi1 * x + 1


def aux_E5_d1(x, xi1):
    h1 = _sqrt(1 + xi1 * xi1)
    hx = _sqrt(1 + x * x)
    return (h1 + xi1) * (hx - x) / hx


def aux_E5_d2(x, xi1):
    h1 = _sqrt(1 + xi1 * xi1)
    return (-h1 - xi1) / _pow(1 + x * x, 1.5)


def prop_seed_derivative(xi1, C: float, a: float):
    """C (1 + xi1^2)^(2a - 3/2) - 1: slope at xi1 of the exponent-a variant of aux_E2."""
    if not 0.5 < a < 0.75:
        raise BadExponentRange(f"exponent must lie in (1/2, 3/4), got {a}")
    if not C >= 1:
        raise ValueError(f"constant must be >= 1, got {C}")
    return _result(C * _pow(1 + xi1 * xi1, 2 * a - 1.5) - 1)


def elementary_ab_ratio(A, B):
    """|A + B| / |A sqrt(1 + B^2) + B sqrt(1 + A^2)|, at most 1 for A, B >= 0."""
    return _result(abs(A + B) / abs(A * _hypot1(B) + B * _hypot1(A)))
