import math

import mpmath
import numpy as np
import pytest

from kgverify import kgfun as kg
from kgverify.interval import Interval

SQRT_HALF = 0.7071067811865476


def mp_sides():
    """Literal 50-digit formulas, independent of the library's rearrangements."""
    def h(x):
        return mpmath.sqrt(1 + x * x)

    def J(a, b):
        return abs(a / h(a) - b / h(b))

    def chi(a, b):
        return abs(a - b) / (h(a) * h(b))

    def sigma(al, a, b):
        return abs(a - b) ** al / ((1 + a * a) * (1 + b * b)) ** (mpmath.mpf(1) / 2 + al / 4)

    def w1(a, b):
        return 1 / (1 - (1 + a * b) / (h(a) * h(b)))

    return J, chi, sigma, w1


# -- examples --------------------------------------------------------------------

def test_g_and_coordinates():
    assert kg.g(0) == 0
    assert kg.g(1) == pytest.approx(SQRT_HALF, rel=1e-15)
    assert kg.to_xi(0.6) == pytest.approx(0.75, rel=1e-15)
    with pytest.raises(kg.PoleAtUnitCircle):
        kg.to_xi(1.0)
    with pytest.raises(kg.PoleAtUnitCircle):
        kg.to_xi(Interval(0.5, 1.0))
    with pytest.raises(kg.InfiniteArgument):
        kg.g(math.inf)
    assert kg.to_theta(math.inf) == pytest.approx(math.pi / 2)


def test_jacobian_examples():
    assert kg.jacobian(3.0, 3.0) == 0
    assert kg.jacobian(0, 1) == pytest.approx(SQRT_HALF, rel=1e-15)
    assert kg.jacobian_s(-1, 1) == 2


def test_chordal_examples():
    assert kg.chordal(0, 1) == pytest.approx(SQRT_HALF, rel=1e-15)
    assert kg.chordal(2.5, 2.5) == 0
    assert kg.chordal_s(0, 1) == 1


def test_sigma_examples():
    assert kg.sigma(2, -1, 1) == pytest.approx(1.0, rel=1e-15)
    assert kg.sigma(1, 0, 1) == pytest.approx(2 ** -0.75, rel=1e-15)
    for a in (1, 1.3, 2):
        assert kg.sigma(a, 0.4, 0.4) == 0
    with pytest.raises(ValueError):
        kg.sigma(0.9, 0, 1)
    assert kg.sigma(kg.AlphaParam.experimental(0.9), 0, 1) > 0


def test_weight_examples():
    assert kg.weight_thmA(0, 1) == pytest.approx(2 ** 0.75, rel=1e-15)
    assert kg.weight_thmA(0, 2) == pytest.approx(5 ** 0.75 / 2, rel=1e-15)
    assert kg.weight_thm1(0, 1) == pytest.approx(1 / (1 - SQRT_HALF), rel=1e-14)
    # the denominator is 1 - (1 - 1)/2 = 1
    assert kg.weight_thm1(-1, 1) == pytest.approx(1.0, rel=1e-15)
    for w in (kg.weight_thmA, kg.weight_thm1):
        with pytest.raises(kg.DiagonalSingularity):
            w(1.0, 1.0)
    with pytest.raises(kg.DiagonalSingularity):
        kg.weight_thm1_s(0.3, 0.3)


def test_weight_thmA_is_inverse_sigma1():
    rng = np.random.default_rng(0)
    x1, x2 = rng.normal(scale=3, size=(2, 1000))
    np.testing.assert_allclose(kg.weight_thmA(x1, x2) * kg.sigma(1, x1, x2), 1.0, rtol=1e-13)


def test_aux_examples():
    assert kg.aux_E2(5.0, 5.0) == pytest.approx(0, abs=1e-12)
    assert kg.aux_E2_d1(3.0, 3.0) == pytest.approx(0, abs=1e-12)
    assert kg.aux_E2_d2(2.0, 1.0) > 0
    assert kg.aux_E5(2.0, 2.0) == pytest.approx(0, abs=1e-14)
    assert kg.aux_E5_d1(1.0, 1.0) == pytest.approx(SQRT_HALF, rel=1e-14)
    assert kg.aux_E5_d2(0.0, 0.0) == -1


def test_prop_seed_derivative():
    assert kg.prop_seed_derivative(0, 1, 0.7) == pytest.approx(0, abs=1e-15)
    assert kg.prop_seed_derivative(1, 1, 0.7) == pytest.approx(2 ** -0.1 - 1, rel=1e-12)
    # 2 * 101^-0.3 - 1 = -0.49912...
    assert kg.prop_seed_derivative(10, 2, 0.6) == pytest.approx(2 * 101 ** -0.3 - 1, rel=1e-12)
    assert kg.prop_seed_derivative(10, 2, 0.6) == pytest.approx(-0.49912, abs=1e-5)
    assert kg.prop_seed_derivative(1e30, 3, 0.7) == pytest.approx(-1, abs=1e-5)
    with pytest.raises(kg.BadExponentRange):
        kg.prop_seed_derivative(1, 1, 0.8)
    with pytest.raises(kg.BadExponentRange):
        kg.prop_seed_derivative(1, 1, 0.5)


def test_elementary_ab_ratio():
    rng = np.random.default_rng(1)
    A, B = np.abs(rng.standard_cauchy(size=(2, 100_000)))
    keep = (A + B) > 0
    assert np.all(kg.elementary_ab_ratio(A[keep], B[keep]) <= 1 + 1e-15)


# -- scalar kinds ----------------------------------------------------------------

def test_kind_dispatch():
    assert kg.kind_of(1.0) is kg.ScalarKind.POINT
    assert kg.kind_of(np.zeros(3)) is kg.ScalarKind.POINT
    assert kg.kind_of(Interval(1)) is kg.ScalarKind.RIGOROUS
    assert kg.kind_of(mpmath.mpf(1)) is kg.ScalarKind.HIGH_PRECISION


@pytest.mark.parametrize("fn", ["jacobian", "chordal", "sigma1", "sigma15", "sigma2",
                                "weight_thmA", "weight_thm1"])
def test_rigorous_contains_point(fn):
    f = {"jacobian": kg.jacobian, "chordal": kg.chordal,
         "sigma1": lambda a, b: kg.sigma(1, a, b),
         "sigma15": lambda a, b: kg.sigma(1.5, a, b),
         "sigma2": lambda a, b: kg.sigma(2, a, b),
         "weight_thmA": kg.weight_thmA, "weight_thm1": kg.weight_thm1}[fn]
    rng = np.random.default_rng(2)
    for _ in range(500):
        a, b = rng.normal(scale=4, size=2)
        r = f(Interval(a), Interval(b))
        p = f(a, b)
        tol = 1e-12 * abs(p)
        assert r.lo - tol <= p <= r.hi + tol


def test_high_precision_kind():
    with mpmath.workdps(40):
        v = kg.jacobian(mpmath.mpf(0), mpmath.mpf(1))
        assert abs(v - 1 / mpmath.sqrt(2)) < mpmath.mpf(10) ** -35


# -- invariants ------------------------------------------------------------------

def _angles(n, seed, gap=1e-2):
    # s = g(xi) rounds to a relative error of about eps * xi^2, which near the
    # diagonal is amplified by 1/|theta2 - theta1|; keep the pairs apart
    rng = np.random.default_rng(seed)
    t = rng.uniform(-1.5, 1.5, size=(2, n))
    t = t[:, np.abs(t[0] - t[1]) > gap]
    return np.tan(t[0]), np.tan(t[1])


@pytest.mark.parametrize("name", ["jacobian", "chordal", "sigma", "weight_thm1"])
def test_coordinate_consistency(name):
    x1, x2 = _angles(100_000, 3)
    s1, s2 = kg.g(x1), kg.g(x2)
    if name == "jacobian":
        a, b = kg.jacobian(x1, x2), kg.jacobian_s(s1, s2)
    elif name == "chordal":
        a, b = kg.chordal(x1, x2), kg.chordal_s(s1, s2)
    elif name == "sigma":
        a, b = kg.sigma(1.4, x1, x2), kg.sigma_s(1.4, s1, s2)
    else:
        a, b = kg.weight_thm1(x1, x2), kg.weight_thm1_s(s1, s2)
    assert np.max(np.abs(a - b) / np.abs(a)) < 1e-12


def test_point_forms_match_oracle():
    J, chi, sigma, w1 = mp_sides()
    rng = np.random.default_rng(4)
    with mpmath.workdps(50):
        for _ in range(500):
            a = float(np.tan(rng.uniform(-1.55, 1.55)))
            b = a + float(rng.choice([1e-9, 1e-5, 1e-2, 1.0])) * float(rng.normal())
            if a == b:
                continue
            A, B = mpmath.mpf(a), mpmath.mpf(b)
            assert abs(kg.jacobian(a, b) / J(A, B) - 1) < 1e-12
            assert abs(kg.chordal(a, b) / chi(A, B) - 1) < 1e-12
            assert abs(kg.sigma(1.5, a, b) / sigma(mpmath.mpf(1.5), A, B) - 1) < 1e-12
            assert abs(kg.weight_thm1(a, b) / w1(A, B) - 1) < 1e-9


def test_global_bounds_with_endpoints():
    rng = np.random.default_rng(5)
    s = np.sin(rng.uniform(-np.pi / 2, np.pi / 2, size=(2, 100_000)))
    s[:, :6] = [[-1, 1, 1, -1, 0, 1], [1, -1, 1, -1, 1, 0]]
    assert np.all(kg.chordal_s(s[0], s[1]) <= 1)
    assert np.all(kg.jacobian_s(s[0], s[1]) <= 2)
    for a in (1, 1.25, 1.5, 2):
        assert np.all(kg.sigma_s(a, s[0], s[1]) <= 1)


@pytest.mark.parametrize("alpha", [1.1, 1.25, 1.5, 1.9])
def test_interpolation_identity(alpha):
    x1, x2 = _angles(100_000, 6)
    s1 = kg.sigma(1, x1, x2)
    keep = s1 > 0
    lhs = kg.sigma(alpha, x1, x2)[keep]
    rhs = (s1[keep] ** (2 - alpha)) * (kg.sigma(2, x1, x2)[keep] ** (alpha - 1))
    assert np.max(np.abs(lhs / rhs - 1)) < 1e-12


def _fd(f, x, xi1, h=mpmath.mpf("1e-12")):
    with mpmath.workdps(40):
        X, X1 = mpmath.mpf(x), mpmath.mpf(xi1)
        return float((f(X + h, X1) - f(X - h, X1)) / (2 * h))


@pytest.mark.parametrize("f,df", [(kg.aux_E2, kg.aux_E2_d1), (kg.aux_E2_d1, kg.aux_E2_d2),
                                  (kg.aux_E5, kg.aux_E5_d1), (kg.aux_E5_d1, kg.aux_E5_d2)])
def test_derivatives_match_finite_differences(f, df):
    rng = np.random.default_rng(7)
    for _ in range(1000):
        x, xi1 = rng.normal(scale=3, size=2)
        fd = _fd(f, x, xi1)
        d = df(float(x), float(xi1))
        assert abs(d - fd) <= 1e-6 * max(abs(fd), 1.0)


def test_aux_sign_properties():
    rng = np.random.default_rng(8)
    xi1 = rng.normal(scale=5, size=10_000)
    x = xi1 + np.abs(rng.normal(scale=5, size=10_000))
    assert np.all(kg.aux_E2_d2(x, xi1) >= -1e-12)
    assert np.all(kg.aux_E5_d2(rng.normal(size=1000), rng.normal(size=1000)) <= 0)
    np.testing.assert_allclose(kg.aux_E5_d1(xi1, xi1), 1 / np.sqrt(1 + xi1**2), rtol=1e-10)


def test_lemma_instances_pointwise():
    rng = np.random.default_rng(9)
    t = np.sort(rng.uniform(-np.pi / 2, np.pi / 2, size=(1_000_000, 2)), axis=1)
    x1, x2 = np.tan(t[:, 0]), np.tan(t[:, 1])
    J = kg.jacobian(x1, x2)
    slack = 1e-12 * J + 1e-300
    assert np.all(kg.sigma(1, x1, x2) <= J + slack)
    assert np.all(kg.sigma(2, x1, x2) <= 2 * J + slack)
    keep = x2 > x1
    one_minus_cos = 1 / kg.weight_thm1(x1[keep], x2[keep])
    assert np.all(one_minus_cos <= J[keep] + slack[keep])


def test_g_monotone():
    x = np.sort(np.random.default_rng(10).standard_cauchy(100_000))
    assert np.all(np.diff(kg.g(x)) >= 0)


def test_to_xi_roundtrip():
    x = np.random.default_rng(11).normal(scale=10, size=10_000)
    np.testing.assert_allclose(kg.to_xi(kg.g(x)), x, rtol=1e-12)
