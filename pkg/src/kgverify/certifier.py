"""Interval branch-and-bound certification of the three inequality families.

All work happens in angle coordinates ``(t1, t2)`` with ``xi = tan(t)``, so the
extended line maps onto the compact square ``[-pi/2, pi/2]^2``.  Each target
is stated for ``t2 >= t1`` (the inequalities are either stated there or are
symmetric), so the search domain is the upper triangle of that square.

Writing ``D = (t2 - t1)/2`` and ``S = (t1 + t2)/2``, every raw margin has the
form ``2 sin(D) * (...)`` and vanishes on the diagonal, where a plain
interval search stalls.  The targets below therefore certify a *factored*
margin with that common factor divided out analytically.  The factorizations
are checked numerically against the raw margins (:func:`validate_reformulation`)
before any search runs.

    E2     C J - sigma_1      factored (C^2 - 1) cos^2 S + sin^2 D (cos^2 D + cos^2 S)
    E5     C J - (1 - cos 2D) factored (C - 1) cos S + 2 sin((t1 + pi/2)/2) sin((pi/2 - t2)/2)
    Elem2  C J - sigma_2      factored C cos S - 2 sin D cos^2 D

The Elem2 margin vanishes at the two corners ``t1 = t2 = ±pi/2`` (the regime
where the constant 2 is approached).  Near them the search may replace
``cos S`` by the lower bound ``sin D`` -- which is exactly the E5 inequality --
giving ``sin D ((C - 2) + 2 sin^2 D)``.  Boxes verified this way carry status
``boundary-equality-verified`` and the certificate lists E5 as a lemma used.
"""

from __future__ import annotations

import hashlib
import json
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Callable, Optional

import numpy as np

from . import interval as ivl
from . import kgfun
from .interval import Interval

__all__ = [
    "ROOT",
    "AngleBox",
    "InequalityTarget",
    "make_target",
    "TARGET_FAMILIES",
    "CertifyConfig",
    "CertBox",
    "Certificate",
    "CertFailure",
    "InterpolatedConclusion",
    "ReformulationReport",
    "CertifierError",
    "BudgetExhausted",
    "ReformulationMismatch",
    "ReplayError",
    "TileGap",
    "TileOverlap",
    "NegativeBound",
    "certify",
    "validate_reformulation",
    "compose_interpolation",
    "replay",
    "load_certificate",
    "sample_triangle",
]

FULL_SQUARE = "full-square"
UPPER_TRIANGLE = "upper-triangle"
VERIFIED = "verified"
BOUNDARY_VERIFIED = "boundary-equality-verified"

# Smallest double above pi/2: the root box must contain the whole closed domain.
_HALF_PI_UP = ivl.HALF_PI.hi
ROOT = Interval(-_HALF_PI_UP, _HALF_PI_UP)


class CertifierError(Exception):
    pass


class BudgetExhausted(CertifierError):
    pass


class ReformulationMismatch(CertifierError):
    pass


class ReplayError(CertifierError):
    pass


class TileGap(ReplayError):
    pass


class TileOverlap(ReplayError):
    pass


class NegativeBound(ReplayError):
    pass


@dataclass(frozen=True)
class AngleBox:
    t1: Interval
    t2: Interval
    constraint: str = UPPER_TRIANGLE

    @property
    def width(self) -> float:
        return max(self.t1.width, self.t2.width)

    @property
    def key(self) -> tuple[float, float, float, float]:
        return (self.t1.lo, self.t1.hi, self.t2.lo, self.t2.hi)

    @property
    def center(self) -> tuple[float, float]:
        return (self.t1.mid, self.t2.mid)

    def below_diagonal(self) -> bool:
        """True when the box meets the domain t2 >= t1 in at most one diagonal point."""
        return self.constraint == UPPER_TRIANGLE and self.t2.hi <= self.t1.lo

    def split(self) -> tuple["AngleBox", "AngleBox"]:
        # wider side first; ties split t1
        if self.t2.width > self.t1.width:
            a, b = ivl.bisect(self.t2)
            return AngleBox(self.t1, a, self.constraint), AngleBox(self.t1, b, self.constraint)
        a, b = ivl.bisect(self.t1)
        return AngleBox(a, self.t2, self.constraint), AngleBox(b, self.t2, self.constraint)

    def contains_box(self, other: "AngleBox") -> bool:
        return (self.t1.lo <= other.t1.lo and other.t1.hi <= self.t1.hi
                and self.t2.lo <= other.t2.lo and other.t2.hi <= self.t2.hi)


def root_box(constraint: str = UPPER_TRIANGLE) -> AngleBox:
    return AngleBox(ROOT, ROOT, constraint)


# -- targets -------------------------------------------------------------------

def _half_angles(t1: Interval, t2: Interval, constraint: str):
    d = (t2 - t1) * 0.5
    if constraint == UPPER_TRIANGLE:
        # only t2 >= t1 belongs to the domain
        d = d.clamp_nonneg()
    s = (t1 + t2) * 0.5
    return d, s


def _cos_half_sum(s: Interval) -> Interval:
    # |S| <= pi/2 on the domain, so cos S >= 0 even where the box pokes past pi/2
    return ivl.cos_enclosure(s).clamp_nonneg()


def _e2_factored(C: float):
    c2m1 = C * C - 1.0

    def interval_form(t1, t2, constraint):
        d, s = _half_angles(t1, t2, constraint)
        cd, sd = ivl.cos_enclosure(d), ivl.sin_enclosure(d)
        b = ivl.sqr(_cos_half_sum(s))
        return c2m1 * b + ivl.sqr(sd) * (ivl.sqr(cd) + b)

    def point_form(t1, t2):
        d, s = (t2 - t1) / 2, (t1 + t2) / 2
        b = np.cos(s) ** 2
        return c2m1 * b + np.sin(d) ** 2 * (np.cos(d) ** 2 + b)

    def removed(t1, t2):
        d, s = (t2 - t1) / 2, (t1 + t2) / 2
        cc = np.cos(t1) * np.cos(t2)
        return 2 * np.sin(d) / (C * np.cos(s) + np.cos(d) * np.sqrt(np.maximum(cc, 0.0)))

    def raw(t1, t2):
        x1, x2 = np.tan(t1), np.tan(t2)
        return C * kgfun.jacobian(x1, x2) - kgfun.sigma(1, x1, x2)

    return interval_form, point_form, removed, raw


def _e5_factored(C: float):
    cm1 = C - 1.0

    def interval_form(t1, t2, constraint):
        _, s = _half_angles(t1, t2, constraint)
        # t1 + pi/2 >= 0 and pi/2 - t2 >= 0 on the domain
        u = (t1 + ivl.HALF_PI).clamp_nonneg() * 0.5
        v = (ivl.HALF_PI - t2).clamp_nonneg() * 0.5
        out = 2.0 * ivl.sin_enclosure(u) * ivl.sin_enclosure(v)
        if cm1 != 0.0:
            out = cm1 * _cos_half_sum(s) + out
        return out

    def point_form(t1, t2):
        s = (t1 + t2) / 2
        u, v = (t1 + np.pi / 2) / 2, (np.pi / 2 - t2) / 2
        return cm1 * np.cos(s) + 2 * np.sin(u) * np.sin(v)

    def removed(t1, t2):
        return 2 * np.sin((t2 - t1) / 2)

    def raw(t1, t2):
        x1, x2 = np.tan(t1), np.tan(t2)
        return C * kgfun.jacobian(x1, x2) - 1 / kgfun.weight_thm1(x1, x2)

    return interval_form, point_form, removed, raw


def _elem2_factored(C: float):
    def interval_form(t1, t2, constraint):
        d, s = _half_angles(t1, t2, constraint)
        sd, cd = ivl.sin_enclosure(d), ivl.cos_enclosure(d)
        return C * _cos_half_sum(s) - 2.0 * sd * ivl.sqr(cd)

    def point_form(t1, t2):
        d, s = (t2 - t1) / 2, (t1 + t2) / 2
        return C * np.cos(s) - 2 * np.sin(d) * np.cos(d) ** 2

    def removed(t1, t2):
        return 2 * np.sin((t2 - t1) / 2)

    def raw(t1, t2):
        x1, x2 = np.tan(t1), np.tan(t2)
        return C * kgfun.jacobian(x1, x2) - kgfun.sigma(2, x1, x2)

    return interval_form, point_form, removed, raw


def _elem2_substituted(C: float):
    def interval_form(t1, t2, constraint):
        d, _ = _half_angles(t1, t2, constraint)
        sd = ivl.sin_enclosure(d)
        return sd * ((C - 2.0) + 2.0 * ivl.sqr(sd))

    return interval_form


TARGET_FAMILIES = ("E2", "E5", "Elem2")
_DEFAULT_CONSTANT = {"E2": 1.0, "E5": 1.0, "Elem2": 2.0}
_STATEMENTS = {
    "E2": "sigma_1(xi1, xi2) <= {C} * J(xi1, xi2) for xi2 >= xi1",
    "E5": "1 - cos(angle between (1,xi1),(1,xi2)) <= {C} * J(xi1, xi2) for xi2 >= xi1",
    "Elem2": "sigma_2(xi1, xi2) <= {C} * J(xi1, xi2) on the extended line",
}


@dataclass(frozen=True)
class InequalityTarget:
    """One inequality instance with its raw and factored margins.

    ``margin_factored`` is evaluated on intervals by the search and on numpy
    arrays by the reformulation check; ``margin_raw`` is built from the
    :mod:`kgfun` definitions and never shares code with the factored form.
    """

    family: str
    constant: float
    margin_factored: Callable = field(repr=False, compare=False)
    margin_factored_point: Callable = field(repr=False, compare=False)
    removed_factor: Callable = field(repr=False, compare=False)
    margin_raw: Callable = field(repr=False, compare=False)
    substitution: Optional[Callable] = field(default=None, repr=False, compare=False)
    substitution_lemma: Optional[str] = None
    domain: str = UPPER_TRIANGLE

    @property
    def id(self) -> str:
        if self.constant == _DEFAULT_CONSTANT[self.family]:
            return self.family
        return f"{self.family}[C={self.constant!r}]"

    @property
    def statement(self) -> str:
        return _STATEMENTS[self.family].format(C=repr(self.constant))

    def to_json(self) -> dict:
        return {"id": self.id, "family": self.family, "constant": repr(self.constant),
                "domain": self.domain, "statement": self.statement}

    def evaluate(self, box: AngleBox, substituted: bool = False) -> Interval:
        fn = self.substitution if substituted else self.margin_factored
        if fn is None:
            raise CertifierError(f"target {self.id} has no substitution")
        return fn(box.t1, box.t2, box.constraint)


def make_target(family: str, constant: float | None = None) -> InequalityTarget:
    """Build a target by name; ``constant`` defaults to the sharp value."""
    if family not in TARGET_FAMILIES:
        raise ValueError(f"unknown target {family!r}; choose from {', '.join(TARGET_FAMILIES)}")
    C = _DEFAULT_CONSTANT[family] if constant is None else float(constant)
    if not (math.isfinite(C) and C > 0):
        raise ValueError(f"constant must be positive, got {constant!r}")
    builder = {"E2": _e2_factored, "E5": _e5_factored, "Elem2": _elem2_factored}[family]
    f_int, f_pt, removed, raw = builder(C)
    sub, lemma = None, None
    if family == "Elem2":
        sub, lemma = _elem2_substituted(C), "E5"
    return InequalityTarget(family, C, f_int, f_pt, removed, raw, sub, lemma)


def target_from_json(d: dict) -> InequalityTarget:
    return make_target(d["family"], float(d["constant"]))


# -- reformulation check ---------------------------------------------------------

@dataclass
class ReformulationReport:
    target: str
    samples: int
    max_rel_discrepancy: float
    min_removed_factor: float
    passed: bool


def sample_triangle(rng: np.random.Generator, n: int, margin: float = 1e-9):
    """Uniform interior points of {-pi/2 < t1 < t2 < pi/2}."""
    a = rng.uniform(-np.pi / 2 + margin, np.pi / 2 - margin, size=(2, n))
    t1, t2 = np.minimum(a[0], a[1]), np.maximum(a[0], a[1])
    keep = t2 > t1
    return t1[keep], t2[keep]


def validate_reformulation(target: InequalityTarget, samples: int = 100_000,
                           seed: int = 0, tol: float = 1e-10) -> ReformulationReport:
    """Check ``margin_raw == removed_factor * margin_factored`` at random interior points."""
    rng = np.random.default_rng(seed)
    t1, t2 = sample_triangle(rng, samples)
    raw = target.margin_raw(t1, t2)
    rem = target.removed_factor(t1, t2)
    fac = target.margin_factored_point(t1, t2)
    scale = np.maximum(target.constant * kgfun.jacobian(np.tan(t1), np.tan(t2)), 1e-300)
    disc = np.abs(raw - rem * fac) / scale
    max_disc = float(np.max(disc))
    min_rem = float(np.min(rem))
    passed = bool(max_disc <= tol and min_rem >= 0.0 and np.all(np.isfinite(disc)))
    report = ReformulationReport(target.id, int(t1.size), max_disc, min_rem, passed)
    if not passed:
        raise ReformulationMismatch(
            f"{target.id}: max relative discrepancy {max_disc:.3e}, "
            f"min removed factor {min_rem:.3e}")
    return report


# -- search ----------------------------------------------------------------------

@dataclass(frozen=True)
class CertifyConfig:
    max_depth: int = 40
    min_width: float = 1e-8
    box_budget: int = 10_000_000
    workers: int = 1
    # boxes narrower than this may use the target's flagged substitution
    substitution_width: float = 1e-4
    validation_samples: int = 100_000
    seed: int = 0

    def to_json(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class CertBox:
    box: AngleBox
    bound: float
    status: str = VERIFIED

    def to_json(self) -> dict:
        b = self.box
        return {"t1": [repr(b.t1.lo), repr(b.t1.hi)], "t2": [repr(b.t2.lo), repr(b.t2.hi)],
                "bound": repr(self.bound), "status": self.status}

    @classmethod
    def from_json(cls, d: dict, constraint: str) -> "CertBox":
        t1 = Interval(float(d["t1"][0]), float(d["t1"][1]))
        t2 = Interval(float(d["t2"][0]), float(d["t2"][1]))
        return cls(AngleBox(t1, t2, constraint), float(d["bound"]), d["status"])


@dataclass
class Certificate:
    target: InequalityTarget
    config: CertifyConfig
    boxes: list[CertBox]
    evaluated: int
    walltime_ms: float
    lemmas: tuple[str, ...] = ()

    @property
    def count(self) -> int:
        return len(self.boxes)

    def to_json(self) -> dict:
        return {
            "format": "kgverify-certificate/1",
            "target": self.target.to_json(),
            "config": self.config.to_json(),
            "lemmas": list(self.lemmas),
            "count": self.count,
            "evaluated": self.evaluated,
            "walltime_ms": round(self.walltime_ms, 3),
            "boxes": [b.to_json() for b in self.boxes],
        }

    def tiling_digest(self) -> str:
        """SHA-256 over the boxes, bounds and statuses (timing excluded)."""
        payload = json.dumps([b.to_json() for b in self.boxes], separators=(",", ":"))
        return hashlib.sha256(payload.encode()).hexdigest()

    def dump(self, path) -> None:
        Path(path).write_text(json.dumps(self.to_json(), indent=1) + "\n")

    @classmethod
    def from_json(cls, d: dict) -> "Certificate":
        target = target_from_json(d["target"])
        cfg_fields = CertifyConfig.__dataclass_fields__
        config = CertifyConfig(**{k: v for k, v in d["config"].items() if k in cfg_fields})
        boxes = [CertBox.from_json(b, target.domain) for b in d["boxes"]]
        return cls(target, config, boxes, int(d.get("evaluated", len(boxes))),
                   float(d.get("walltime_ms", 0.0)), tuple(d.get("lemmas", ())))


def load_certificate(path) -> Certificate:
    return Certificate.from_json(json.loads(Path(path).read_text()))


@dataclass
class CertFailure:
    """Inconclusive search: not a disproof."""

    target: InequalityTarget
    suspect: AngleBox
    bound: Interval
    depth: int
    evaluated: int
    definitely_negative: bool

    def to_json(self) -> dict:
        b = self.suspect
        return {"target": self.target.to_json(),
                "suspect": {"t1": [repr(b.t1.lo), repr(b.t1.hi)],
                            "t2": [repr(b.t2.lo), repr(b.t2.hi)]},
                "bound": [repr(self.bound.lo), repr(self.bound.hi)],
                "depth": self.depth, "evaluated": self.evaluated,
                "definitely_negative": self.definitely_negative}


def _evaluate_box(target: InequalityTarget, box: AngleBox, sub_width: float):
    m = target.evaluate(box)
    if m.lo >= 0 or target.substitution is None or box.width > sub_width:
        return m.lo, m.hi, VERIFIED
    sub = target.evaluate(box, substituted=True)
    if sub.lo >= 0:
        return sub.lo, m.hi, BOUNDARY_VERIFIED
    return m.lo, m.hi, VERIFIED


def _evaluate_chunk(args):
    family, constant, keys, constraint, sub_width = args
    target = make_target(family, constant)
    out = []
    for k in keys:
        box = AngleBox(Interval(k[0], k[1]), Interval(k[2], k[3]), constraint)
        out.append(_evaluate_box(target, box, sub_width))
    return out


def _evaluate_level(target, level, config, pool):
    if pool is None or len(level) < 64:
        return [_evaluate_box(target, b, config.substitution_width) for b in level]
    n = config.workers * 4
    size = -(-len(level) // n)
    chunks = [(target.family, target.constant, [b.key for b in level[i:i + size]],
               target.domain, config.substitution_width)
              for i in range(0, len(level), size)]
    out = []
    for part in pool.map(_evaluate_chunk, chunks):
        out.extend(part)
    return out


def certify(target: InequalityTarget, config: CertifyConfig = CertifyConfig(),
            validate: bool = True):
    """Breadth-first (widest-box-first) interval branch and bound.

    Returns a :class:`Certificate` when every leaf box has a nonnegative
    interval lower bound for the factored margin, otherwise a
    :class:`CertFailure` naming the box with the most negative upper bound
    found on the level where the search first got stuck.
    """
    if validate:
        validate_reformulation(target, config.validation_samples, seed=config.seed)
    start = time.perf_counter()
    level = [root_box(target.domain)]
    leaves: list[CertBox] = []
    evaluated = 0
    depth = 0
    pool = ProcessPoolExecutor(config.workers) if config.workers > 1 else None
    try:
        while level:
            results = _evaluate_level(target, level, config, pool)
            evaluated += len(level)
            nxt: list[AngleBox] = []
            failures = []
            for box, (lo, hi, status) in zip(level, results):
                if lo >= 0:
                    leaves.append(CertBox(box, lo, status))
                elif hi < 0 or depth >= config.max_depth or box.width < config.min_width:
                    failures.append((hi, box.key, box, Interval(lo, hi)))
                else:
                    nxt.extend(c for c in box.split() if not c.below_diagonal())
            if failures:
                hi, _, box, bound = min(failures, key=lambda f: (f[0], f[1]))
                return CertFailure(target, box, bound, depth, evaluated, hi < 0)
            if evaluated + len(nxt) > config.box_budget:
                raise BudgetExhausted(
                    f"{target.id}: {evaluated + len(nxt)} boxes exceed budget {config.box_budget}")
            nxt.sort(key=lambda b: b.key)
            level = nxt
            depth += 1
    finally:
        if pool is not None:
            pool.shutdown()
    leaves.sort(key=lambda c: c.box.key)
    lemmas = ()
    if any(c.status == BOUNDARY_VERIFIED for c in leaves):
        lemmas = (target.substitution_lemma,)
    walltime = (time.perf_counter() - start) * 1e3
    return Certificate(target, config, leaves, evaluated, walltime, lemmas)


# -- replay ------------------------------------------------------------------------

def _check_tiling(boxes: list[CertBox], constraint: str, max_depth: int) -> None:
    keys = {}
    for c in boxes:
        if c.box.key in keys:
            raise TileOverlap(f"duplicate box {c.box.key}")
        keys[c.box.key] = c
    stack = [(root_box(constraint), 0, list(keys))]
    while stack:
        node, depth, members = stack.pop()
        if node.below_diagonal():
            if members:
                raise TileOverlap(f"box {members[0]} lies outside the domain")
            continue
        if node.key in keys:
            if members != [node.key]:
                raise TileOverlap(f"box {node.key} overlaps {len(members) - 1} other boxes")
            continue
        if not members:
            raise TileGap(f"region {node.key} is not covered")
        if depth >= max_depth:
            raise TileGap(f"region {node.key} is not covered at depth {max_depth}")
        try:
            a, b = node.split()
        except ivl.ZeroWidth:
            raise TileGap(f"region {node.key} cannot be refined") from None
        ma, mb = [], []
        for k in members:
            box = keys[k].box
            if a.contains_box(box):
                ma.append(k)
            elif b.contains_box(box):
                mb.append(k)
            else:
                raise TileOverlap(f"box {k} straddles the subdivision of {node.key}")
        stack.append((b, depth + 1, mb))
        stack.append((a, depth + 1, ma))


def replay(cert: Certificate) -> bool:
    """Independently re-check a certificate.

    Raises :class:`TileGap` / :class:`TileOverlap` if the boxes do not tile the
    domain and :class:`NegativeBound` if any recorded or recomputed lower
    bound is negative.
    """
    target = cert.target
    for c in cert.boxes:
        if c.bound < 0:
            raise NegativeBound(f"recorded bound {c.bound!r} < 0 on {c.box.key}")
    _check_tiling(cert.boxes, target.domain, cert.config.max_depth)
    for c in cert.boxes:
        if c.status == BOUNDARY_VERIFIED:
            if target.substitution is None:
                raise NegativeBound(f"{target.id} allows no substitution ({c.box.key})")
            m = target.evaluate(c.box, substituted=True)
        elif c.status == VERIFIED:
            m = target.evaluate(c.box)
        else:
            raise ReplayError(f"unknown status {c.status!r}")
        if m.lo < 0:
            raise NegativeBound(f"recomputed bound {m.lo!r} < 0 on {c.box.key}")
    return True


# -- interpolation -------------------------------------------------------------------

@dataclass
class InterpolatedConclusion:
    alpha: float
    constant: float
    statement: str
    based_on: list[str]
    spot_check_samples: int
    violations: int
    max_ratio: float  # largest sampled sigma_a / (const * J); <= 1 when the conclusion holds

    def to_json(self) -> dict:
        return asdict(self)


def _require(cert: Certificate, family: str, constant: float) -> None:
    if cert.target.family != family or cert.target.constant != constant:
        raise ValueError(f"expected a {family} certificate with constant {constant}, "
                         f"got {cert.target.id}")
    if not cert.boxes or any(c.bound < 0 for c in cert.boxes):
        raise ValueError(f"{cert.target.id} certificate is not verified")


def compose_interpolation(cert1: Certificate, cert2: Certificate, alpha: float,
                          samples: int = 100_000, seed: int = 0) -> InterpolatedConclusion:
    """Conclude ``sigma_a <= 2^(a-1) J`` from the a = 1 and a = 2 certificates.

    Uses ``sigma_a = sigma_1^(2-a) sigma_2^(a-1)``; the conclusion is
    spot-checked at ``samples`` random points of the extended plane.
    """
    alpha = float(alpha)
    if not 1.0 <= alpha <= 2.0:
        raise ValueError(f"alpha must lie in [1, 2], got {alpha}")
    _require(cert1, "E2", 1.0)
    _require(cert2, "Elem2", 2.0)
    const = 2.0 ** (alpha - 1.0)
    rng = np.random.default_rng(seed)
    # closed square, endpoints included: s = ±1 is xi = ±inf
    s = np.sin(rng.uniform(-np.pi / 2, np.pi / 2, size=(2, samples)))
    s[:, : min(samples, 8)] = [[-1, 1, 1, -1, 0, 1, -1, 0.5][: min(samples, 8)],
                                 [1, -1, 1, -1, 1, 0, 0, 1][: min(samples, 8)]]
    lhs = kgfun.sigma_s(alpha, s[0], s[1])
    rhs = const * kgfun.jacobian_s(s[0], s[1])
    # one part in 1e12 absorbs double rounding in the point evaluation
    viol = int(np.count_nonzero(lhs > rhs * (1 + 1e-12) + 1e-300))
    with np.errstate(invalid="ignore", divide="ignore"):
        ratio = np.where(rhs > 0, lhs / np.where(rhs > 0, rhs, 1.0), 0.0)
    max_ratio = float(np.max(ratio))
    based = [f"{cert1.target.id}:{cert1.tiling_digest()[:16]}",
             f"{cert2.target.id}:{cert2.tiling_digest()[:16]}"]
    statement = f"sigma_{alpha!r}(xi1, xi2) <= {const!r} * J(xi1, xi2) on the extended line"
    return InterpolatedConclusion(alpha, const, statement, based, samples, viol, max_ratio)
