import dataclasses
import json
import math

import numpy as np
import pytest

from kgverify import certifier as cf
from kgverify import kgfun as kg
from kgverify.interval import Interval

P = math.pi / 2


@pytest.fixture(scope="module")
def certs():
    return {fam: cf.certify(cf.make_target(fam)) for fam in cf.TARGET_FAMILIES}


# -- targets and reformulations ---------------------------------------------------

@pytest.mark.parametrize("family", cf.TARGET_FAMILIES)
def test_reformulation_passes(family):
    rep = cf.validate_reformulation(cf.make_target(family), 100_000)
    assert rep.passed and rep.max_rel_discrepancy < 1e-10 and rep.min_removed_factor >= 0


def test_corrupted_reformulation_rejected():
    t = cf.make_target("E2")
    bad = dataclasses.replace(t, margin_factored_point=lambda a, b: 1.001 * t.margin_factored_point(a, b))
    with pytest.raises(cf.ReformulationMismatch):
        cf.validate_reformulation(bad, 10_000)
    with pytest.raises(cf.ReformulationMismatch):
        cf.certify(bad)


def test_target_registry():
    with pytest.raises(ValueError):
        cf.make_target("bogus")
    t = cf.make_target("Elem2", 1.9)
    assert t.id == "Elem2[C=1.9]"
    assert cf.target_from_json(json.loads(json.dumps(t.to_json()))).constant == 1.9


# -- search ----------------------------------------------------------------------

@pytest.mark.parametrize("family", cf.TARGET_FAMILIES)
def test_certificates_verified(certs, family):
    c = certs[family]
    assert isinstance(c, cf.Certificate)
    assert c.count <= 10**6
    assert all(b.bound >= 0 for b in c.boxes)
    assert cf.replay(c)


def test_sign_evident_targets_need_one_box(certs):
    assert certs["E2"].count == 1 and certs["E5"].count == 1


def test_elem2_uses_substitution_only_near_corners(certs):
    c = certs["Elem2"]
    assert c.lemmas == ("E5",)
    sub = [b for b in c.boxes if b.status == cf.BOUNDARY_VERIFIED]
    assert sub
    for b in sub:
        x, y = b.box.center
        assert min(math.hypot(x - P, y - P), math.hypot(x + P, y + P)) < 0.1
        assert b.box.width <= cf.CertifyConfig().substitution_width


def test_subdivision_progress():
    box = cf.root_box()
    for _ in range(30):
        a, b = box.split()
        assert a.width < box.width or a.t1.width < box.t1.width or a.t2.width < box.t2.width
        assert max(a.t1.width, a.t2.width) <= box.width
        box = b


def test_determinism_and_workers(certs):
    again = cf.certify(cf.make_target("Elem2"))
    assert again.tiling_digest() == certs["Elem2"].tiling_digest()
    par = cf.certify(cf.make_target("Elem2"), cf.CertifyConfig(workers=2))
    assert par.tiling_digest() == certs["Elem2"].tiling_digest()


def test_budget_exhausted():
    with pytest.raises(cf.BudgetExhausted):
        cf.certify(cf.make_target("Elem2"), cf.CertifyConfig(box_budget=100))


def test_e2_below_sharp_constant_fails_near_origin():
    res = cf.certify(cf.make_target("E2", 0.99))
    assert isinstance(res, cf.CertFailure)
    b = res.suspect
    assert b.t1.contains(0.0) and b.t2.contains(0.0)
    assert res.bound.hi < 0


def test_elem2_below_sharp_constant_fails_in_same_sign_far_field():
    res = cf.certify(cf.make_target("Elem2", 1.9))
    assert isinstance(res, cf.CertFailure)
    x, y = res.suspect.center
    assert x * y > 0 and min(abs(x), abs(y)) > 1.2
    # both angles approach the same end of the line
    assert abs(abs(x) - P) < 0.01


def test_failure_is_not_disproof_flag():
    res = cf.certify(cf.make_target("E2", 0.99))
    assert res.definitely_negative in (True, False)
    assert "suspect" in res.to_json()


# -- certificates on disk ----------------------------------------------------------

def test_roundtrip_and_schema(tmp_path, certs):
    c = certs["Elem2"]
    path = tmp_path / "c.json"
    c.dump(path)
    d = json.loads(path.read_text())
    for key in ("target", "config", "boxes", "count", "walltime_ms"):
        assert key in d
    b0 = d["boxes"][0]
    assert set(b0) == {"t1", "t2", "bound", "status"}
    assert all(isinstance(v, str) for v in b0["t1"])
    back = cf.load_certificate(path)
    assert back.tiling_digest() == c.tiling_digest()
    assert cf.replay(back)


def test_replay_deleted_box(certs):
    c = certs["Elem2"]
    tampered = dataclasses.replace(c, boxes=c.boxes[:10] + c.boxes[11:])
    with pytest.raises(cf.TileGap):
        cf.replay(tampered)


def test_replay_duplicated_box(certs):
    c = certs["Elem2"]
    with pytest.raises(cf.TileOverlap):
        cf.replay(dataclasses.replace(c, boxes=c.boxes + [c.boxes[3]]))


def test_replay_flipped_bound(certs):
    c = certs["Elem2"]
    boxes = list(c.boxes)
    boxes[5] = dataclasses.replace(boxes[5], bound=-abs(boxes[5].bound) - 1e-3)
    with pytest.raises(cf.NegativeBound):
        cf.replay(dataclasses.replace(c, boxes=boxes))


def test_replay_recomputes_bounds(certs):
    # claiming "verified" for a box that needed the substitution must be caught
    c = certs["Elem2"]
    boxes = list(c.boxes)
    i = next(i for i, b in enumerate(boxes) if b.status == cf.BOUNDARY_VERIFIED)
    boxes[i] = dataclasses.replace(boxes[i], status=cf.VERIFIED)
    with pytest.raises(cf.NegativeBound):
        cf.replay(dataclasses.replace(c, boxes=boxes))


def test_replay_wrong_constant(certs):
    c = certs["Elem2"]
    with pytest.raises(cf.NegativeBound):
        cf.replay(dataclasses.replace(c, target=cf.make_target("Elem2", 1.5)))


# -- soundness and special lines ---------------------------------------------------

@pytest.mark.parametrize("family", cf.TARGET_FAMILIES)
def test_certified_margin_nonnegative_at_samples(family):
    t = cf.make_target(family)
    rng = np.random.default_rng(1)
    t1, t2 = cf.sample_triangle(rng, 1_000_000)
    raw = t.margin_raw(t1, t2)
    scale = kg.jacobian(np.tan(t1), np.tan(t2))
    assert np.all(raw >= -1e-15 * np.maximum(scale, 1.0))


@pytest.mark.parametrize("alpha", [1.0, 1.25, 1.5, 1.75, 2.0])
def test_anti_diagonal_sweep(alpha):
    x = np.concatenate([np.logspace(-8, 8, 20_000), [0.0]])
    lhs = kg.sigma(alpha, -x, x)
    rhs = 2 ** (alpha - 1) * kg.jacobian(-x, x)
    assert np.all(lhs <= rhs * (1 + 1e-14))
    s = np.array([1.0])
    assert kg.sigma_s(alpha, -s, s)[0] <= 2 ** (alpha - 1) * kg.jacobian_s(-s, s)[0]


def test_reduction_inequality():
    # s^2 b^2 + t^2 / b^2 <= s^2 + t^2 whenever 1 <= b^2 <= t^2 / s^2
    rng = np.random.default_rng(2)
    s = rng.uniform(1e-3, 10, 100_000)
    t = s * rng.uniform(1, 100, 100_000)
    b2 = 1 + (t**2 / s**2 - 1) * rng.uniform(0, 1, 100_000)
    lhs = s**2 * b2 + t**2 / b2
    assert np.all(lhs <= (s**2 + t**2) * (1 + 1e-14))


# -- interpolation ----------------------------------------------------------------

def test_compose_interpolation(certs):
    for a in (1.0, 1.5, 2.0):
        c = cf.compose_interpolation(certs["E2"], certs["Elem2"], a, samples=20_000)
        assert c.violations == 0 and c.max_ratio <= 1 + 1e-12
        assert c.constant == pytest.approx(2 ** (a - 1))
    assert "1.4142135623730951" in cf.compose_interpolation(
        certs["E2"], certs["Elem2"], 1.5, samples=10).statement


def test_compose_rejects_bad_inputs(certs):
    with pytest.raises(ValueError):
        cf.compose_interpolation(certs["E2"], certs["Elem2"], 2.5)
    with pytest.raises(ValueError):
        cf.compose_interpolation(certs["Elem2"], certs["E2"], 1.5)


def test_angle_box_invariants():
    b = cf.AngleBox(Interval(0.5, 0.6), Interval(0.1, 0.2))
    assert b.below_diagonal()
    assert not cf.AngleBox(Interval(0.5, 0.6), Interval(0.1, 0.2), cf.FULL_SQUARE).below_diagonal()
    # a box meeting t2 >= t1 only at a corner point carries no area of the domain
    assert cf.AngleBox(Interval(0.0, 1.0), Interval(-1.0, 0.0)).below_diagonal()
    assert not cf.AngleBox(Interval(0.0, 1.0), Interval(-1.0, 1e-300)).below_diagonal()
