"""Klein-Gordon half-wave propagation and the bilinear space-time norm.

Fourier convention: ``fhat(xi) = int f(x) exp(-i x xi) dx``, so

    u(t, x) = (1/2pi) int fhat(xi) exp(i x xi + i t sqrt(1 + xi^2)) dxi.

A profile is sampled on the lattice ``xi_k = k * dxi``.  On the periodic
window ``[-L, L)`` with ``dxi = pi / L`` the sum above is evaluated exactly at
the grid points by one inverse FFT, and the discrete Plancherel identity holds
to rounding.  The space-time norm integrates ``|u1 u2|^2`` over that lattice
in ``x`` and with the trapezoid rule in ``t``, doubling ``T`` until the value
settles.  It is compared with the frequency-side expression

    4/(2pi)^2 int_{xi2 >= xi1} |F|^2 / J,   F = (f1(xi1) f2(xi2) + f1(xi2) f2(xi1)) / 2,

and with the two weighted upper bounds.
"""

from __future__ import annotations

import csv
import io
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, replace

import mpmath
import numpy as np

from . import kgfun

__all__ = [
    "BilinearError",
    "GridMismatch",
    "NotConverged",
    "SupportsOverlap",
    "FrequencyProfile",
    "SpaceTimeGrid",
    "SpacetimeResult",
    "BilinearReport",
    "WeightMap",
    "WeightOrderingReport",
    "make_grid",
    "propagate",
    "l2_norm_sq",
    "profile_l2_sq",
    "bilinear_norm_spacetime",
    "bilinear_norm_frequency",
    "bound_thmA",
    "bound_thm1",
    "refinement_slope",
    "evaluate_pair",
    "standard_pairs",
    "random_pairs",
    "weight_comparison",
    "verify_pointwise_weight_ordering",
    "DEFAULT_DXI",
]

DEFAULT_DXI = 1.0 / 64
TWO_PI = 2.0 * math.pi
_SLICE_CHUNK = 64


class BilinearError(ValueError):
    pass


class GridMismatch(BilinearError):
    pass


class NotConverged(RuntimeError):
    pass


class SupportsOverlap(BilinearError):
    pass


def _on_lattice(x: float, dxi: float, tol: float = 1e-9) -> bool:
    q = x / dxi
    return abs(q - round(q)) <= tol * max(1.0, abs(q))


# -- profiles --------------------------------------------------------------------

_ANALYTIC = ("bump", "cap", "semicircle")


@dataclass(frozen=True, eq=False)
class FrequencyProfile:
    """A compactly supported ``fhat``, either a named shape or lattice samples.

    Named shapes on ``[a, b]`` (with ``tau`` the affine map onto ``(-1, 1)``):
    ``bump`` is ``exp(-1/(1 - tau^2))``, ``cap`` is ``1 - tau^2`` and
    ``semicircle`` is ``sqrt(1 - tau^2)``.  Sampled profiles carry their own
    lattice spacing and can only be used on that lattice.
    """

    support: tuple[float, float]
    kind: str = "bump"
    amplitude: complex = 1.0
    dxi: float | None = None
    k0: int = 0
    values: np.ndarray | None = None

    def __post_init__(self):
        a, b = map(float, self.support)
        if not (math.isfinite(a) and math.isfinite(b) and a < b):
            raise BilinearError(f"bad support {self.support}")
        object.__setattr__(self, "support", (a, b))
        if self.kind == "samples":
            if self.dxi is None or self.values is None or not self.dxi > 0:
                raise BilinearError("sampled profile needs dxi > 0 and values")
        elif self.kind not in _ANALYTIC:
            raise BilinearError(f"unknown profile kind {self.kind!r}")

    # constructors

    @classmethod
    def named(cls, kind: str, a: float, b: float, amplitude: complex = 1.0):
        return cls((a, b), kind, complex(amplitude))

    @classmethod
    def from_samples(cls, xi, values, support=None, tol: float = 1e-12):
        xi = np.asarray(xi, dtype=float)
        values = np.asarray(values, dtype=complex)
        if xi.ndim != 1 or xi.size < 2 or xi.size != values.size:
            raise BilinearError("need matching 1-D arrays with at least two samples")
        steps = np.diff(xi)
        dxi = float(np.mean(steps))
        if not dxi > 0 or np.max(np.abs(steps - dxi)) > 1e-9 * dxi:
            raise GridMismatch("samples are not on a uniform increasing grid")
        if dxi > 1.0 / 8:
            raise GridMismatch(f"need at least 8 samples per unit, got spacing {dxi}")
        if not _on_lattice(xi[0], dxi):
            raise GridMismatch(f"samples are not on the lattice k * {dxi}")
        k0 = int(round(xi[0] / dxi))
        nz = np.flatnonzero(np.abs(values) > tol * max(np.max(np.abs(values)), 1e-300))
        if support is None:
            if nz.size == 0:
                raise BilinearError("profile is identically zero; declare a support")
            support = (xi[nz[0]], xi[nz[-1]])
        a, b = map(float, support)
        outside = (xi < a - 1e-9 * dxi) | (xi > b + 1e-9 * dxi)
        if np.any(np.abs(values[outside]) > tol * max(np.max(np.abs(values)), 1e-300)):
            raise BilinearError("profile has nonzero samples outside its declared support")
        return cls((a, b), "samples", 1.0, dxi, k0, values.copy())

    @classmethod
    def from_csv(cls, path, support=None):
        """Read columns ``xi, re, im`` (a header row is optional)."""
        rows = []
        with open(path, newline="") as fh:
            for row in csv.reader(fh):
                if not row or row[0].strip().startswith("#"):
                    continue
                try:
                    rows.append([float(c) for c in row[:3]])
                except ValueError:
                    if rows:
                        raise BilinearError(f"bad CSV row {row!r} in {path}")
        if not rows or any(len(r) != 3 for r in rows):
            raise BilinearError(f"{path}: expected columns xi, re, im")
        arr = np.array(rows)
        return cls.from_samples(arr[:, 0], arr[:, 1] + 1j * arr[:, 2], support)

    def scaled(self, c: complex) -> "FrequencyProfile":
        if self.kind == "samples":
            return replace(self, values=self.values * c)
        return replace(self, amplitude=self.amplitude * c)

    # evaluation

    @property
    def max_abs_xi(self) -> float:
        return max(abs(self.support[0]), abs(self.support[1]))

    def __call__(self, xi) -> np.ndarray:
        """Values at arbitrary points (analytic) or at lattice points (sampled)."""
        xi = np.asarray(xi, dtype=float)
        if self.kind == "samples":
            q = xi / self.dxi
            k = np.rint(q).astype(np.int64)
            if np.any(np.abs(q - k) > 1e-9 * np.maximum(1.0, np.abs(q))):
                raise GridMismatch("sampled profile evaluated off its lattice")
            idx = k - self.k0
            inside = (idx >= 0) & (idx < self.values.size)
            out = np.zeros(xi.shape, dtype=complex)
            out[inside] = self.values[idx[inside]]
            return out
        a, b = self.support
        tau = (2.0 * xi - a - b) / (b - a)
        inside = np.abs(tau) < 1
        r = 1.0 - tau[inside] ** 2
        out = np.zeros(xi.shape, dtype=complex)
        if self.kind == "bump":
            out[inside] = np.exp(-1.0 / r)
        elif self.kind == "cap":
            out[inside] = r
        else:
            out[inside] = np.sqrt(r)
        return out * self.amplitude

    def lattice(self, dxi: float) -> tuple[np.ndarray, np.ndarray]:
        """(k, fhat(k dxi)) over every lattice point of the support."""
        if self.kind == "samples" and abs(dxi - self.dxi) > 1e-12 * self.dxi:
            raise GridMismatch(f"sampled profile lives on spacing {self.dxi}, not {dxi}")
        a, b = self.support
        k = np.arange(math.floor(a / dxi - 1e-9), math.ceil(b / dxi + 1e-9) + 1, dtype=np.int64)
        return k, self(k * dxi)

    def describe(self) -> dict:
        d = {"kind": self.kind, "support": list(self.support)}
        if self.kind == "samples":
            d.update(dxi=self.dxi, n=int(self.values.size))
        else:
            d["amplitude"] = [self.amplitude.real, self.amplitude.imag]
        return d


def _check_disjoint(p1: FrequencyProfile, p2: FrequencyProfile) -> None:
    (a1, b1), (a2, b2) = p1.support, p2.support
    if not (b1 < a2 or b2 < a1):
        raise SupportsOverlap(f"supports {p1.support} and {p2.support} intersect")


def _common_dxi(p1, p2, dxi):
    fixed = {p.dxi for p in (p1, p2) if p.kind == "samples"}
    if len(fixed) > 1:
        raise GridMismatch(f"sampled profiles on different lattices {sorted(fixed)}")
    if fixed:
        (f,) = fixed
        if dxi is not None and abs(dxi - f) > 1e-12 * f:
            raise GridMismatch(f"requested spacing {dxi} differs from the sample spacing {f}")
        return f
    return DEFAULT_DXI if dxi is None else float(dxi)


# -- space-time grid -------------------------------------------------------------

@dataclass(frozen=True)
class SpaceTimeGrid:
    """Periodic window ``[-L, L)`` with ``n_x`` points; times ``[-T, T]`` with ``n_t`` points."""

    L: float
    n_x: int
    T: float
    n_t: int

    def __post_init__(self):
        if self.n_x < 2 or self.n_x & (self.n_x - 1):
            raise BilinearError(f"n_x must be a power of two, got {self.n_x}")
        if self.n_t < 2 or self.n_t % 2 == 0:
            raise BilinearError(f"n_t must be odd and at least 3, got {self.n_t}")
        if not (self.L > 0 and self.T > 0):
            raise BilinearError("L and T must be positive")

    @property
    def dx(self) -> float:
        return 2.0 * self.L / self.n_x

    @property
    def dxi(self) -> float:
        return math.pi / self.L

    @property
    def dt(self) -> float:
        return 2.0 * self.T / (self.n_t - 1)

    @property
    def x(self) -> np.ndarray:
        return -self.L + self.dx * np.arange(self.n_x)

    @property
    def times(self) -> np.ndarray:
        return np.linspace(-self.T, self.T, self.n_t)

    @property
    def nyquist(self) -> float:
        return math.pi / self.dx

    def to_json(self) -> dict:
        return {"L": self.L, "n_x": self.n_x, "T": self.T, "n_t": self.n_t,
                "dx": self.dx, "dt": self.dt, "dxi": self.dxi}


def make_grid(T: float, pad: float = 64.0, dx: float = 0.5, dt: float = 0.25,
              max_xi: float = 0.0) -> SpaceTimeGrid:
    """Grid with ``L = T + pad``, spacing at most ``dx`` and below the Nyquist limit of ``max_xi``."""
    L = float(T) + float(pad)
    if max_xi > 0:
        dx = min(dx, math.pi / (1.25 * max_xi))
    n_x = 1 << max(1, math.ceil(math.log2(2.0 * L / dx)))
    n_t = 2 * max(1, math.ceil(T / dt)) + 1
    return SpaceTimeGrid(L, n_x, float(T), n_t)


def _grid_for(p1, p2, T, pad, dx, dt) -> SpaceTimeGrid:
    fixed = {p.dxi for p in (p1, p2) if p.kind == "samples"}
    max_xi = max(p1.max_abs_xi, p2.max_abs_xi)
    if not fixed:
        return make_grid(T, pad, dx, dt, max_xi)
    if len(fixed) > 1:
        raise GridMismatch(f"sampled profiles on different lattices {sorted(fixed)}")
    (d,) = fixed
    L = math.pi / d
    if T + pad > L:
        raise NotConverged(f"sample spacing {d} fixes L = {L:.4g}, too small for T = {T}")
    g = make_grid(T, L - T, dx, dt, max_xi)
    return g


def _coefficients(p: FrequencyProfile, grid: SpaceTimeGrid):
    if p.max_abs_xi >= grid.nyquist:
        raise GridMismatch(f"profile reaches |xi| = {p.max_abs_xi}, beyond the grid's "
                           f"Nyquist frequency {grid.nyquist:.4g}")
    k, v = p.lattice(grid.dxi)
    if 2 * max(abs(int(k[0])), abs(int(k[-1]))) >= grid.n_x:
        raise GridMismatch("profile support does not fit the transform lattice")
    xi = k * grid.dxi
    # x_j = -L + j dx turns exp(i x_j xi_k) into (-1)^k exp(2 pi i j k / n)
    sign = np.where(k % 2 == 0, 1.0, -1.0)
    return k % grid.n_x, v * sign, np.hypot(1.0, xi)


def _propagate_many(coeffs, times, grid: SpaceTimeGrid) -> np.ndarray:
    idx, c, omega = coeffs
    a = np.zeros((len(times), grid.n_x), dtype=complex)
    a[:, idx] = c[None, :] * np.exp(1j * np.outer(times, omega))
    return np.fft.ifft(a, axis=1) * (grid.n_x * grid.dxi / TWO_PI)


def propagate(p: FrequencyProfile, t: float, grid: SpaceTimeGrid) -> np.ndarray:
    """u(t, x) at the grid points ``grid.x``."""
    return _propagate_many(_coefficients(p, grid), [float(t)], grid)[0]


def l2_norm_sq(u: np.ndarray, grid: SpaceTimeGrid) -> float:
    return float(np.sum(np.abs(u) ** 2) * grid.dx)


def profile_l2_sq(p: FrequencyProfile, dxi: float) -> float:
    """(1/2pi) sum |fhat|^2 dxi, the Plancherel partner of ``l2_norm_sq``."""
    _, v = p.lattice(dxi)
    return float(np.sum(np.abs(v) ** 2) * dxi / TWO_PI)


# -- space-time norm -------------------------------------------------------------

def _slice_values(args):
    c1, c2, times, grid = args
    u1 = _propagate_many(c1, times, grid)
    u2 = _propagate_many(c2, times, grid)
    return np.sum(np.abs(u1 * u2) ** 2, axis=1) * grid.dx


def _band_fraction(u: np.ndarray, grid: SpaceTimeGrid, band: float) -> float:
    tot = np.sum(np.abs(u) ** 2)
    if tot == 0:
        return 0.0
    edge = np.abs(grid.x) >= grid.L - band
    return float(np.sum(np.abs(u[edge]) ** 2) / tot)


def _spacetime_once(p1, p2, grid: SpaceTimeGrid, workers: int):
    c1, c2 = _coefficients(p1, grid), _coefficients(p2, grid)
    times = grid.times
    chunks = [(c1, c2, times[i:i + _SLICE_CHUNK], grid)
              for i in range(0, len(times), _SLICE_CHUNK)]
    if workers > 1 and len(chunks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_slice_values, chunks))
    else:
        parts = [_slice_values(c) for c in chunks]
    vals = np.concatenate(parts)
    w = np.full(len(times), grid.dt)
    w[0] = w[-1] = grid.dt / 2
    value = float(np.sum(w * vals))
    band = min((grid.L - grid.T) / 2, grid.L / 8)
    alias = 0.0
    for c in (c1, c2):
        ends = _propagate_many(c, [-grid.T, grid.T], grid)
        alias = max(alias, *(_band_fraction(u, grid, band) for u in ends))
    return value, alias


@dataclass
class SpacetimeResult:
    value: float
    truncation: float  # |last doubling increment|, absolute
    grid: SpaceTimeGrid
    aliasing: float
    history: list[tuple[float, float]] = field(default_factory=list)

    @property
    def relative_truncation(self) -> float:
        return self.truncation / self.value if self.value else 0.0


def bilinear_norm_spacetime(p1: FrequencyProfile, p2: FrequencyProfile,
                            grid: SpaceTimeGrid | None = None, *, T0: float = 25.0,
                            pad: float = 64.0, dx: float = 0.5, dt: float = 0.25,
                            tol: float = 0.01, max_doublings: int = 8,
                            alias_tol: float = 1e-6, workers: int = 1) -> SpacetimeResult:
    """``int int |u1 u2|^2 dx dt`` with the time window doubled until it settles.

    Doubling stops when the relative change falls below ``tol``; that last
    change is returned as the truncation estimate.  A starting ``grid`` fixes
    the first window and resolution.
    """
    if grid is None:
        grid = _grid_for(p1, p2, T0, pad, dx, dt)
    else:
        pad, dx, dt = grid.L - grid.T, grid.dx, grid.dt
    history = []
    prev = None
    for _ in range(max_doublings + 1):
        value, alias = _spacetime_once(p1, p2, grid, workers)
        if alias >= alias_tol:
            # the packets reached the window edge: widen the padding and redo
            pad *= 2
            grid = _grid_for(p1, p2, grid.T, pad, dx, dt)
            prev = None
            continue
        history.append((grid.T, value))
        if prev is not None:
            inc = abs(value - prev)
            if value == 0 or inc <= tol * abs(value):
                return SpacetimeResult(value, inc, grid, alias, history)
        elif value == 0:
            return SpacetimeResult(0.0, 0.0, grid, alias, history)
        prev = value
        grid = _grid_for(p1, p2, 2 * grid.T, pad, dx, dt)
    raise NotConverged(f"time window did not settle within {max_doublings} doublings; "
                       f"history {history}")


# -- frequency side --------------------------------------------------------------

def _rectangle(p_left, p_right, dxi):
    """Lattice tensor grid over support(p_left) x support(p_right)."""
    k1, _ = p_left.lattice(dxi)
    k2, _ = p_right.lattice(dxi)
    X, Y = np.meshgrid(k1 * dxi, k2 * dxi, indexing="ij")
    return X, Y


def bilinear_norm_frequency(p1: FrequencyProfile, p2: FrequencyProfile,
                            dxi: float | None = None) -> float:
    """Frequency-side value of the space-time norm, by the lattice trapezoid rule."""
    _check_disjoint(p1, p2)
    dxi = _common_dxi(p1, p2, dxi)
    total = 0.0
    # with disjoint supports, {xi2 >= xi1} meets exactly one of the two rectangles
    for pa, pb in ((p1, p2), (p2, p1)):
        if pa.support[1] < pb.support[0]:
            X, Y = _rectangle(pa, pb, dxi)
            F = 0.5 * (p1(X) * p2(Y) + p1(Y) * p2(X))
            total += float(np.sum(np.abs(F) ** 2 / kgfun.jacobian(X, Y)))
    return 4.0 / TWO_PI**2 * total * dxi * dxi


def _bound(p1, p2, dxi, weight):
    _check_disjoint(p1, p2)
    dxi = _common_dxi(p1, p2, dxi)
    X, Y = _rectangle(p1, p2, dxi)
    dens = np.abs(p1(X)) ** 2 * np.abs(p2(Y)) ** 2
    return float(np.sum(dens * weight(X, Y))) * dxi * dxi / TWO_PI**2


def bound_thmA(p1: FrequencyProfile, p2: FrequencyProfile, dxi: float | None = None) -> float:
    """Right side of the bound with weight <xi1>^(3/2) <xi2>^(3/2) / |xi2 - xi1|."""
    return _bound(p1, p2, dxi, kgfun.weight_thmA)


def bound_thm1(p1: FrequencyProfile, p2: FrequencyProfile, dxi: float | None = None) -> float:
    """Right side of the bound with weight (1 - cos of the angle between (1, xi1), (1, xi2))^-1."""
    return _bound(p1, p2, dxi, kgfun.weight_thm1)


def refinement_slope(fn, p1, p2, dxi: float) -> float:
    """Observed convergence order of ``fn`` under dxi -> dxi/2 -> dxi/4."""
    v = [fn(p1, p2, dxi / m) for m in (1, 2, 4)]
    return math.log2(abs(v[0] - v[1]) / abs(v[1] - v[2]))


# -- reports ---------------------------------------------------------------------

@dataclass
class BilinearReport:
    profiles: list[dict]
    spacetime: float
    frequency: float
    bound_A: float
    bound_1: float
    truncation: float
    refinement_change: float
    relative_error: float
    tolerance: float
    aliasing: float
    grid: dict
    dxi: float
    identity_ok: bool
    ordering_ok: bool

    @property
    def ok(self) -> bool:
        return self.identity_ok and self.ordering_ok

    def to_json(self) -> dict:
        d = asdict(self)
        d["ok"] = self.ok
        return d

    CSV_COLUMNS = ("spacetime", "frequency", "bound_A", "bound_1", "relative_error",
                   "truncation", "refinement_change", "identity_ok", "ordering_ok")

    def csv_row(self) -> list[str]:
        return [repr(getattr(self, c)) for c in self.CSV_COLUMNS]


def evaluate_pair(p1: FrequencyProfile, p2: FrequencyProfile, tolerance: float = 0.05,
                  dxi: float | None = None, workers: int = 1, **spacetime_kw) -> BilinearReport:
    """Run both sides of the identity and both bounds for one pair of profiles."""
    if not tolerance > 0:
        raise ValueError("tolerance must be positive")
    _check_disjoint(p1, p2)
    dxi = _common_dxi(p1, p2, dxi)
    freq = bilinear_norm_frequency(p1, p2, dxi)
    refined = freq
    if all(p.kind != "samples" for p in (p1, p2)):
        refined = bilinear_norm_frequency(p1, p2, dxi / 2)
    change = abs(refined - freq) / freq if freq else 0.0
    st = bilinear_norm_spacetime(p1, p2, workers=workers, **spacetime_kw)
    bA, b1 = bound_thmA(p1, p2, dxi), bound_thm1(p1, p2, dxi)
    rel = abs(st.value - freq) / freq if freq else abs(st.value)
    return BilinearReport(
        profiles=[p1.describe(), p2.describe()],
        spacetime=st.value, frequency=freq, bound_A=bA, bound_1=b1,
        truncation=st.relative_truncation, refinement_change=change,
        relative_error=rel, tolerance=tolerance, aliasing=st.aliasing,
        grid=st.grid.to_json(), dxi=dxi,
        identity_ok=bool(rel <= tolerance),
        ordering_ok=bool(freq <= bA and freq <= b1),
    )


def standard_pairs() -> list[tuple[FrequencyProfile, FrequencyProfile]]:
    """Three smooth bump pairs with gaps of at least 1/2."""
    supports = [((1, 2), (3, 4)), ((-2, -1), (1, 2)), ((0, 1), (1.5, 2.5))]
    return [(FrequencyProfile.named("bump", *s1), FrequencyProfile.named("bump", *s2))
            for s1, s2 in supports]


def random_pairs(n: int, seed: int = 0, gap: float = 0.5):
    """Random disjoint bump pairs: widths in [0.5, 2], gap in [gap, gap + 2], |xi| <= 6."""
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(n):
        w1, w2 = rng.uniform(0.5, 2.0, size=2)
        d = rng.uniform(gap, gap + 2.0)
        a1 = rng.uniform(-6.0, 6.0 - (w1 + d + w2))
        amp = complex(*rng.normal(size=2))
        p1 = FrequencyProfile.named("bump", a1, a1 + w1, amp)
        p2 = FrequencyProfile.named("bump", a1 + w1 + d, a1 + w1 + d + w2)
        out.append((p1, p2) if rng.random() < 0.5 else (p2, p1))
    return out


# -- pointwise weights -----------------------------------------------------------

@dataclass
class WeightMap:
    xi1: np.ndarray
    xi2: np.ndarray
    sign: np.ndarray  # sign(weight_thmA - weight_thm1); 0 on excluded near-diagonal points
    frac_A_tighter: float
    frac_1_tighter: float
    excluded: int

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(("xi1", "xi2", "sign"))
        for i, x in enumerate(self.xi1):
            for j, y in enumerate(self.xi2):
                w.writerow((repr(float(x)), repr(float(y)), int(self.sign[i, j])))
        return buf.getvalue()

    def summary(self) -> dict:
        return {"shape": list(self.sign.shape), "frac_A_tighter": self.frac_A_tighter,
                "frac_1_tighter": self.frac_1_tighter, "excluded": self.excluded}


def weight_comparison(region, resolution: int = 101, delta: float = 1e-3) -> WeightMap:
    """Where each weight is pointwise smaller on ``region = (x0, x1, y0, y1)``.

    Points within ``delta`` of the diagonal are excluded (sign 0).
    """
    x0, x1, y0, y1 = map(float, region)
    if not (x0 < x1 and y0 < y1 and resolution >= 2 and delta > 0):
        raise ValueError("need x0 < x1, y0 < y1, resolution >= 2 and delta > 0")
    xs, ys = np.linspace(x0, x1, resolution), np.linspace(y0, y1, resolution)
    X, Y = np.meshgrid(xs, ys, indexing="ij")
    keep = np.abs(X - Y) >= delta
    sign = np.zeros(X.shape, dtype=np.int8)
    wa = kgfun.weight_thmA(X[keep], Y[keep])
    w1 = kgfun.weight_thm1(X[keep], Y[keep])
    sign[keep] = np.sign(wa - w1).astype(np.int8)
    n = max(int(np.count_nonzero(keep)), 1)
    return WeightMap(xs, ys, sign, float(np.count_nonzero(sign < 0)) / n,
                     float(np.count_nonzero(sign > 0)) / n, int(np.count_nonzero(~keep)))


@dataclass
class WeightOrderingReport:
    samples: int
    seed: int
    min_product: float  # min over samples of J * min(weight_thmA, weight_thm1); >= 1 expected
    hp_rechecked: int
    violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_json(self) -> dict:
        return asdict(self)


def _hp_ordering_holds(x1: float, x2: float) -> bool:
    with mpmath.workdps(50):
        a, b = mpmath.mpf(x1), mpmath.mpf(x2)
        h1, h2 = mpmath.sqrt(1 + a * a), mpmath.sqrt(1 + b * b)
        J = abs(b / h2 - a / h1)
        wa = (h1 * h2) ** mpmath.mpf(1.5) / abs(b - a)
        w1 = 1 / (1 - (1 + a * b) / (h1 * h2))
        return bool(1 / J <= min(wa, w1))


def verify_pointwise_weight_ordering(samples: int = 1_000_000, seed: int = 0,
                                     slack: float = 1e-12) -> WeightOrderingReport:
    """Check ``1/J <= min(weight_thmA, weight_thm1)`` at random off-diagonal points.

    Angles are drawn uniformly so the far field is sampled; pairs closer than
    ``1e-6`` in angle are skipped.  Products within ``slack`` of 1 are
    decided at 50 digits.
    """
    rng = np.random.default_rng(seed)
    t = rng.uniform(-np.pi / 2, np.pi / 2, size=(2, samples))
    t = t[:, np.abs(t[0] - t[1]) > 1e-6]
    x1, x2 = np.tan(t[0]), np.tan(t[1])
    x1, x2 = x1[x1 != x2], x2[x1 != x2]
    J = kgfun.jacobian(x1, x2)
    prod = J * np.minimum(kgfun.weight_thmA(x1, x2), kgfun.weight_thm1(x1, x2))
    rep = WeightOrderingReport(int(x1.size), int(seed), float(np.min(prod)), 0)
    for i in np.flatnonzero(prod < 1 + slack):
        rep.hp_rechecked += 1
        if not _hp_ordering_holds(float(x1[i]), float(x2[i])):
            rep.violations.append((float(x1[i]), float(x2[i])))
    return rep
