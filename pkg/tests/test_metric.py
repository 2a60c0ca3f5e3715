"""Metric validation, per-point evaluation, derivative blocks, inverse,
signature, and degeneracy detection."""

import math

import numpy as np
import pytest

from wcurv import expr as ex
from wcurv.catalog import CATALOG, build
from wcurv.metric import (CoordinateChart, DegenerateMetricError, MetricSpec,
                          det4, evaluate_metric, inv4)

RNG = np.random.default_rng(20260826)


def _spec(rows, coords=("t", "x", "y", "z"), params=None):
    chart = CoordinateChart(names=coords, parameters=params or {})
    return MetricSpec(chart, tuple(tuple(ex.parse(s) for s in r) for r in rows))


MINKOWSKI_ROWS = (("-1", "0", "0", "0"), ("0", "1", "0", "0"),
                  ("0", "0", "1", "0"), ("0", "0", "0", "1"))


# ---------------------------------------------------------------------------
# validation

def test_minkowski_validates_clean():
    report = _spec(MINKOWSKI_ROWS).validate(sample_points=[(0, 1, 2, 3)])
    assert report.ok


def test_asymmetric_metric_names_indices():
    rows = (("-1", "x", "0", "0"), ("0", "1", "0", "0"),
            ("0", "0", "1", "0"), ("0", "0", "0", "1"))
    report = _spec(rows).validate()
    assert any("(0,1)" in p for p in report.problems)


def test_unknown_symbol_named():
    rows = (("-1", "0", "0", "0"), ("0", "Q", "0", "0"),
            ("0", "0", "1", "0"), ("0", "0", "0", "1"))
    report = _spec(rows).validate()
    assert any("'Q'" in p for p in report.problems)


def test_chart_rejects_overlapping_parameter_names():
    with pytest.raises(ValueError):
        CoordinateChart(names=("t", "x", "y", "z"), parameters={"x": 1.0})


# ---------------------------------------------------------------------------
# small dense linear algebra

def test_det_and_inverse_match_numpy_on_random_matrices():
    for _ in range(50):
        m = RNG.normal(size=(4, 4))
        m = m + m.T + 4.0 * np.eye(4)
        inv, det = inv4(m)
        assert det == pytest.approx(np.linalg.det(m), rel=1e-10)
        assert det4(m) == det
        assert np.allclose(inv, np.linalg.inv(m), atol=1e-10)


def test_inverse_exact_on_diagonal():
    m = np.diag([-2.0, 4.0, 0.5, 8.0])
    inv, det = inv4(m)
    assert np.array_equal(inv, np.diag([-0.5, 0.25, 2.0, 0.125]))
    assert det == -32.0


# ---------------------------------------------------------------------------
# evaluation

def test_minkowski_evaluation():
    mv = evaluate_metric(_spec(MINKOWSKI_ROWS), (0.3, -1.0, 2.0, 5.0))
    assert np.array_equal(mv.g, np.diag([-1.0, 1.0, 1.0, 1.0]))
    assert not mv.dg.any() and not mv.d2g.any() and not mv.d3g.any()


def test_schwarzschild_components():
    bm = build(CATALOG["schwarzschild"])
    mv = evaluate_metric(bm.spec, (0.0, 4.0, math.pi / 2, 0.0))
    assert mv.g[0, 0] == pytest.approx(-0.5)
    assert mv.g[1, 1] == pytest.approx(2.0)


def test_schwarzschild_horizon_degenerate():
    bm = build(CATALOG["schwarzschild"])
    with pytest.raises((DegenerateMetricError, ex.EvalDomainError)):
        evaluate_metric(bm.spec, (0.0, 2.0, math.pi / 2, 0.0))


def _random_regular_points(name, count):
    bm = build(CATALOG[name])
    box = bm.entry.sample_box
    pts = []
    while len(pts) < count:
        p = tuple(float(RNG.uniform(*box[c])) if c in box else 0.0
                  for c in bm.spec.chart.names)
        if not bm.excluded(p):
            pts.append(p)
    return bm, pts


@pytest.mark.parametrize("name", sorted(CATALOG))
def test_inverse_identity_on_100_random_points(name):
    bm, pts = _random_regular_points(name, 100)
    for p in pts:
        mv = evaluate_metric(bm.spec, p)
        assert np.max(np.abs(mv.g @ mv.g_inv - np.eye(4))) < 1e-12


@pytest.mark.parametrize("name", sorted(CATALOG))
def test_signature_one_negative_eigenvalue(name):
    bm, pts = _random_regular_points(name, 10)
    for p in pts:
        mv = evaluate_metric(bm.spec, p)
        assert int(np.sum(np.linalg.eigvalsh(mv.g) < 0)) == 1


# ---------------------------------------------------------------------------
# derivative blocks vs finite differences

def _fd(func, point, axis, h=1e-5):
    up = list(point)
    dn = list(point)
    up[axis] += h
    dn[axis] -= h
    return (func(tuple(up)) - func(tuple(dn))) / (2 * h)


@pytest.mark.parametrize("name", ["schwarzschild", "frw_flat_powerlaw",
                                  "de_sitter_static", "reissner_nordstrom"])
def test_derivative_blocks_match_finite_differences(name):
    bm, pts = _random_regular_points(name, 3)
    spec = bm.spec
    for p in pts:
        mv = evaluate_metric(spec, p)
        for c in range(4):
            fd1 = _fd(lambda q: evaluate_metric(spec, q).g, p, c)
            scale = max(np.max(np.abs(mv.dg)), 1.0)
            assert np.max(np.abs(mv.dg[c] - fd1)) / scale < 1e-6
            fd2 = _fd(lambda q: evaluate_metric(spec, q).dg, p, c)
            scale = max(np.max(np.abs(mv.d2g)), 1.0)
            assert np.max(np.abs(mv.d2g[c] - fd2)) / scale < 1e-6
            fd3 = _fd(lambda q: evaluate_metric(spec, q).d2g, p, c)
            scale = max(np.max(np.abs(mv.d3g)), 1.0)
            assert np.max(np.abs(mv.d3g[c] - fd3)) / scale < 1e-5


def test_derivative_blocks_symmetric():
    bm, pts = _random_regular_points("schwarzschild", 5)
    for p in pts:
        mv = evaluate_metric(bm.spec, p)
        assert np.array_equal(mv.g, mv.g.T)
        assert np.array_equal(mv.dg, mv.dg.transpose(0, 2, 1))
        assert np.array_equal(mv.d2g, mv.d2g.transpose(1, 0, 2, 3))
        assert np.array_equal(mv.d3g, mv.d3g.transpose(0, 2, 1, 3, 4))
        assert np.array_equal(mv.d3g, mv.d3g.transpose(2, 1, 0, 3, 4))
