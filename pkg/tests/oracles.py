"""Shared samplers and a 60-digit oracle for interval containment checks."""

from __future__ import annotations

import math
from fractions import Fraction

import mpmath
import numpy as np

from kgverify import interval as ivl
from kgverify.interval import Interval

DPS = 60


def random_float(rng, lo_exp=-8, hi_exp=8, signed=True):
    m = rng.uniform(1.0, 2.0)
    x = math.ldexp(m, int(rng.integers(lo_exp, hi_exp + 1)))
    if signed and rng.random() < 0.5:
        x = -x
    return x


def random_interval(rng, positive=False, lo_exp=-8, hi_exp=8, bound=None):
    """Mix of point, narrow, wide and zero-straddling intervals."""
    r = rng.random()
    a = random_float(rng, lo_exp, hi_exp, signed=not positive)
    if positive:
        a = abs(a)
    if bound is not None:
        a = math.copysign(min(abs(a), bound), a)
    if r < 0.2:
        b = a
    elif r < 0.6:
        b = a + abs(a) * rng.uniform(0, 1e-6)
    else:
        b = a + abs(a) * rng.uniform(0, 2)
        if not positive and rng.random() < 0.3:
            a = -rng.uniform(0, abs(b) + 1)
    if bound is not None:
        b = min(b, bound)
        a = max(a, -bound)
    lo, hi = min(a, b), max(a, b)
    if positive:
        lo = max(lo, 0.0)
    return Interval(lo, hi)


def sample_in(rng, X: Interval) -> float:
    r = rng.random()
    if r < 0.25:
        return X.lo
    if r < 0.5:
        return X.hi
    return float(X.lo + (X.hi - X.lo) * rng.random()) if X.hi > X.lo else X.lo


def contains_mp(X: Interval, v) -> bool:
    return X.lo <= v <= X.hi


# Each entry: name -> (interval op, oracle on mp values, input generator)
def _pos(rng):
    return random_interval(rng, positive=True)


def _any(rng):
    return random_interval(rng)


def _nonzero(rng):
    X = random_interval(rng, positive=True, lo_exp=-6)
    if X.lo == 0:
        X = Interval(2.0**-7, X.hi + 2.0**-7)
    return X if rng.random() < 0.5 else -X


def _positive(rng):
    X = random_interval(rng, positive=True)
    return X if X.lo > 0 else Interval(2.0**-9, X.hi + 2.0**-9)


def _trig(rng):
    return random_interval(rng, lo_exp=-4, hi_exp=2, bound=6.28)


def _expable(rng):
    return random_interval(rng, lo_exp=-6, hi_exp=5)


UNARY = {
    "neg": (ivl.neg, lambda x: -x, _any),
    "abs": (ivl.iabs, abs, _any),
    "sqr": (ivl.sqr, lambda x: x * x, _any),
    "sqrt": (ivl.sqrt, mpmath.sqrt, _pos),
    "pow_int3": (lambda X: ivl.pow_int(X, 3), lambda x: x**3, _any),
    "pow_int-2": (lambda X: ivl.pow_int(X, -2), lambda x: x**-2, _nonzero),
    "pow_3/4": (lambda X: ivl.pow_rational(X, Fraction(3, 4)),
                lambda x: mpmath.power(x, mpmath.mpf(3) / 4), _pos),
    "pow_3/4_dyadic": (lambda X: ivl.pow_rational(X, Fraction(3, 4), method="dyadic"),
                       lambda x: mpmath.power(x, mpmath.mpf(3) / 4), _pos),
    "pow_-1/4": (lambda X: ivl.pow_rational(X, Fraction(-1, 4)),
                 lambda x: mpmath.power(x, mpmath.mpf(-1) / 4), _positive),
    "exp": (ivl.exp, mpmath.exp, _expable),
    "log": (ivl.log, mpmath.log, _positive),
    "sin": (ivl.sin_enclosure, mpmath.sin, _trig),
    "cos": (ivl.cos_enclosure, mpmath.cos, _trig),
}

BINARY = {
    "add": (ivl.add, lambda x, y: x + y, _any, _any),
    "sub": (ivl.sub, lambda x, y: x - y, _any, _any),
    "mul": (ivl.mul, lambda x, y: x * y, _any, _any),
    "div": (ivl.div, lambda x, y: x / y, _any, _nonzero),
}


def containment_escapes(name: str, n: int, seed: int) -> list:
    """Run ``n`` random containment checks for one operation; return the escapes."""
    rng = np.random.default_rng(seed)
    escapes = []
    with mpmath.workdps(DPS):
        if name in UNARY:
            op, oracle, gen = UNARY[name]
            for _ in range(n):
                X = gen(rng)
                x = sample_in(rng, X)
                R = op(X)
                v = oracle(mpmath.mpf(x))
                if not contains_mp(R, v):
                    escapes.append((X, x, R))
        else:
            op, oracle, gx, gy = BINARY[name]
            for _ in range(n):
                X, Y = gx(rng), gy(rng)
                x, y = sample_in(rng, X), sample_in(rng, Y)
                R = op(X, Y)
                v = oracle(mpmath.mpf(x), mpmath.mpf(y))
                if not contains_mp(R, v):
                    escapes.append((X, Y, x, y, R))
    return escapes


OPERATIONS = sorted(UNARY) + sorted(BINARY)
