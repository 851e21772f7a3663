"""Constructive falsification and extremal-ratio traces.

For an exponent ``a`` in ``(1/2, 3/4)`` the inequality

    (xi2 - xi1) / ((1 + xi1^2)^a (1 + xi2^2)^a) <= C (g(xi2) - g(xi1))

fails for every finite ``C``: once ``C (1 + xi1^2)^(2a - 3/2) <= 1/2`` the
difference of the two sides decreases away from ``xi1``.  :func:`find_violation`
turns that argument into explicit points, and every reported point is
re-checked with a 60-digit evaluator that shares no code with the double
precision path.

The traces show that the constants 1 and 2 of the ``sigma_1`` and ``sigma_2``
bounds are approached along explicit paths, and that ``sigma_a / J`` is
unbounded near the diagonal when ``a < 1``.
"""

from __future__ import annotations

import csv
import io
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

import mpmath
import numpy as np

from . import kgfun
from .kgfun import BadExponentRange

__all__ = [
    "SearchFailed",
    "Violation",
    "RatioTrace",
    "NoViolationReport",
    "seed_point",
    "find_violation",
    "violation_grid",
    "extremal_ratio",
    "blowup_trace",
    "alpha_blowup_slope",
    "check_no_violation",
    "hp_sides",
    "violations_to_csv",
    "violations_to_jsonl",
    "trace_to_csv",
    "DEFAULT_EXPONENTS",
    "DEFAULT_CONSTANTS",
]

DEFAULT_EXPONENTS = (0.55, 0.6, 0.65, 0.7, 0.74)
DEFAULT_CONSTANTS = (1.0, 2.0, 10.0, 100.0)
HP_DIGITS = 60
VIOLATION_COLUMNS = ("a", "C", "xi1", "xi2", "lhs", "rhs", "margin")


class SearchFailed(RuntimeError):
    pass


def _check_params(a: float, C: float) -> None:
    if not 0.5 < a < 0.75:
        raise BadExponentRange(f"exponent must lie in (1/2, 3/4), got {a}")
    if not (C >= 1 and math.isfinite(C)):
        raise ValueError(f"constant must be finite and >= 1, got {C}")


# -- the two sides ---------------------------------------------------------------

def _sides(a: float, C: float, x1, x2):
    """Double-precision (lhs, rhs) for xi1 < xi2, vectorized and overflow-safe."""
    x1 = np.asarray(x1, dtype=float)
    x2 = np.asarray(x2, dtype=float)
    h1, h2 = np.hypot(1.0, x1), np.hypot(1.0, x2)
    lhs = (x2 - x1) * np.exp(-2.0 * a * (np.log(h1) + np.log(h2)))
    rhs = C * kgfun.jacobian(x1, x2)
    return lhs, rhs


def _guard_digits(*xs: float) -> int:
    big = max(1.0, *(abs(float(x)) for x in xs))
    return int(2 * math.log10(big)) + 10


def hp_sides(a: float, C: float, xi1: float, xi2: float, dps: int = HP_DIGITS):
    """(lhs, rhs) at ``dps`` significant digits, from the literal formulas.

    The difference ``g(xi2) - g(xi1)`` is formed naively; extra working digits
    cover the cancellation, so the result carries ``dps`` correct digits.
    """
    with mpmath.workdps(dps + _guard_digits(xi1, xi2)):
        x1, x2 = mpmath.mpf(xi1), mpmath.mpf(xi2)
        q1, q2 = 1 + x1 * x1, 1 + x2 * x2
        A = mpmath.mpf(a)
        lhs = (x2 - x1) / (q1**A * q2**A)
        rhs = mpmath.mpf(C) * abs(x2 / mpmath.sqrt(q2) - x1 / mpmath.sqrt(q1))
        return +lhs, +rhs


# -- violations ------------------------------------------------------------------

@dataclass(frozen=True)
class Violation:
    a: float
    C: float
    xi1: float
    xi2: float
    lhs: float
    rhs: float
    margin: float  # rhs - lhs, negative

    def hp_margin(self, dps: int = HP_DIGITS):
        lhs, rhs = hp_sides(self.a, self.C, self.xi1, self.xi2, dps)
        return rhs - lhs

    def recheck(self, rel: float = 1e-12) -> bool:
        """Margin negative at high precision and both stored sides accurate to ``rel``."""
        lhs, rhs = hp_sides(self.a, self.C, self.xi1, self.xi2)
        ok_l = abs(mpmath.mpf(self.lhs) - lhs) <= rel * abs(lhs)
        ok_r = abs(mpmath.mpf(self.rhs) - rhs) <= rel * abs(rhs)
        return bool(rhs - lhs < 0 and ok_l and ok_r)

    def to_json(self) -> dict:
        return asdict(self)


def seed_point(a: float, C: float) -> float:
    """Smallest xi1 >= 0 with C (1 + xi1^2)^(2a - 3/2) <= 1/2."""
    _check_params(a, C)
    xi1 = math.sqrt((2.0 * C) ** (1.0 / (1.5 - 2.0 * a)) - 1.0)
    # the closed form can land an ulp on the wrong side
    while kgfun.prop_seed_derivative(xi1, C, a) > -0.5:
        xi1 = math.nextafter(xi1, math.inf) * (1 + 1e-15)
    return xi1


def _needs_hp(lhs: float, rhs: float) -> bool:
    scale = max(abs(lhs), abs(rhs))
    return abs(rhs - lhs) < 1e3 * math.ulp(scale)


def find_violation(a: float, C: float, halvings: int = 200,
                   expansions: int = 64) -> Violation:
    """Explicit (xi1, xi2) where the exponent-``a`` inequality with constant ``C`` fails.

    Starts at the seed point, tries ``xi2 = xi1 + h`` with ``h`` halving from
    ``max(1, xi1)``, and doubles ``xi1`` if that gives nothing.
    """
    a, C = float(a), float(C)
    xi1 = seed_point(a, C)
    for _ in range(expansions):
        h = max(1.0, xi1)
        for _ in range(halvings):
            xi2 = xi1 + h
            if xi2 <= xi1:
                break
            lhs, rhs = (float(v) for v in _sides(a, C, xi1, xi2))
            if rhs - lhs < 0:
                v = Violation(a, C, xi1, xi2, lhs, rhs, rhs - lhs)
                if not _needs_hp(lhs, rhs) or v.hp_margin() < 0:
                    if not v.recheck():
                        raise SearchFailed(f"candidate at ({xi1!r}, {xi2!r}) failed the "
                                           "high-precision recheck")
                    return v
            h /= 2
        xi1 = 2 * xi1 if xi1 > 0 else 1.0
    raise SearchFailed(f"no violation found for a={a}, C={C}")


def _find_cell(args):
    return find_violation(*args)


def violation_grid(exponents=DEFAULT_EXPONENTS, constants=DEFAULT_CONSTANTS,
                   workers: int = 1) -> list[Violation]:
    """One violation per (a, C) cell, in row-major input order."""
    cells = [(float(a), float(C)) for a in exponents for C in constants]
    for a, C in cells:
        _check_params(a, C)
    if workers > 1 and len(cells) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(_find_cell, cells))
    return [find_violation(a, C) for a, C in cells]


# -- the valid exponent ----------------------------------------------------------

@dataclass
class NoViolationReport:
    a: float
    C: float
    samples: int
    seed: int
    hp_rechecked: int
    violations: list = field(default_factory=list)
    min_rel_margin: float = math.inf

    def to_json(self) -> dict:
        return asdict(self)


def check_no_violation(a: float = 0.75, C: float = 1.0, samples: int = 10_000_000,
                       seed: int = 0, chunk: int = 1_000_000) -> NoViolationReport:
    """Sample pairs xi1 < xi2 and report any point where the inequality fails.

    Angles are drawn uniformly, so both the bounded region and the far field
    are covered.  Points whose double-precision margin is within 1000 ulps of
    zero (or negative) are decided at 60 digits.
    """
    rng = np.random.default_rng(seed)
    report = NoViolationReport(float(a), float(C), int(samples), int(seed), 0)
    left = samples
    while left > 0:
        n = min(chunk, left)
        left -= n
        t = np.sort(rng.uniform(-np.pi / 2, np.pi / 2, size=(n, 2)), axis=1)
        x1, x2 = np.tan(t[:, 0]), np.tan(t[:, 1])
        keep = x2 > x1
        x1, x2 = x1[keep], x2[keep]
        lhs, rhs = _sides(a, C, x1, x2)
        margin = rhs - lhs
        scale = np.maximum(np.abs(lhs), np.abs(rhs))
        rel = margin / scale
        report.min_rel_margin = min(report.min_rel_margin, float(np.min(rel)))
        suspect = margin < 1e3 * np.spacing(scale)
        for i in np.flatnonzero(suspect):
            report.hp_rechecked += 1
            hl, hr = hp_sides(a, C, float(x1[i]), float(x2[i]))
            if hr - hl < 0:
                report.violations.append((float(x1[i]), float(x2[i])))
    return report


# -- ratio traces ----------------------------------------------------------------

@dataclass
class RatioTrace:
    family: str
    path: str
    samples: list[tuple[float, float]]

    @property
    def final(self) -> float:
        return self.samples[-1][1]

    def to_json(self) -> dict:
        return {"family": self.family, "path": self.path,
                "samples": [list(p) for p in self.samples]}


def extremal_ratio(family: str, n_samples: int = 6) -> RatioTrace:
    """sigma_1 / J or sigma_2 / J along the path where its sharp constant is approached.

    ``sigma1_over_J``: xi1 = 0, xi2 = 10^-k.  ``sigma2_over_J``: xi1 = 10^k,
    xi2 = 10^(3k).  The parameter recorded with each ratio is k = 1..n.
    """
    if n_samples < 1:
        raise ValueError("n_samples must be positive")
    ks = np.arange(1, n_samples + 1, dtype=float)
    if family == "sigma1_over_J":
        x1, x2, alpha = np.zeros_like(ks), 10.0 ** -ks, 1
        path = "xi1 = 0, xi2 = 10^-k"
    elif family == "sigma2_over_J":
        if n_samples > 90:
            raise ValueError("sigma2_over_J path overflows beyond k = 90")
        x1, x2, alpha = 10.0**ks, 10.0 ** (3 * ks), 2
        path = "xi1 = 10^k, xi2 = 10^(3k)"
    else:
        raise ValueError(f"unknown family {family!r}; expected sigma1_over_J or sigma2_over_J")
    ratio = kgfun.sigma(alpha, x1, x2) / kgfun.jacobian(x1, x2)
    return RatioTrace(family, path, [(float(k), float(r)) for k, r in zip(ks, ratio)])


def blowup_trace(alpha: float, xi1: float, kmin: int = 2, kmax: int = 10) -> RatioTrace:
    """sigma_alpha / J at xi2 = xi1 + 10^-k; the parameter is the realized |xi2 - xi1|."""
    if not 0 < alpha <= 1:
        raise ValueError(f"alpha must lie in (0, 1], got {alpha}")
    xi1 = float(xi1)
    x2 = xi1 + 10.0 ** -np.arange(kmin, kmax + 1, dtype=float)
    delta = x2 - xi1
    x1 = np.full_like(x2, xi1)
    ratio = kgfun.sigma(kgfun.AlphaParam.experimental(alpha), x1, x2) / kgfun.jacobian(x1, x2)
    return RatioTrace("sigmaAlpha_over_J", f"alpha = {alpha!r}, xi2 = {xi1!r} + 10^-k",
                      [(float(d), float(r)) for d, r in zip(delta, ratio)])


def alpha_blowup_slope(alpha: float, xi1: float) -> float:
    """Least-squares slope of log(sigma_alpha / J) against log|xi2 - xi1|; about alpha - 1."""
    tr = blowup_trace(alpha, xi1)
    d, r = np.array(tr.samples).T
    return float(np.polyfit(np.log(d), np.log(r), 1)[0])


# -- output ----------------------------------------------------------------------

def violations_to_csv(violations) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(VIOLATION_COLUMNS)
    for v in violations:
        w.writerow([repr(getattr(v, c)) for c in VIOLATION_COLUMNS])
    return buf.getvalue()


def violations_to_jsonl(violations) -> str:
    return "".join(json.dumps(v.to_json()) + "\n" for v in violations)


def trace_to_csv(trace: RatioTrace) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(("family", "parameter", "ratio"))
    for p, r in trace.samples:
        w.writerow((trace.family, repr(p), repr(r)))
    return buf.getvalue()
