"""Stress-energy extraction, perfect-fluid recovery, kinematical
decomposition, conservation, electromagnetism, and symmetry checks."""

import math

import numpy as np
import pytest

from wcurv import expr as ex
from wcurv import matter
from wcurv.catalog import CATALOG, build
from wcurv.curvature import compute_curvature
from wcurv.metric import CoordinateChart, MetricSpec, evaluate_metric


def _setting(name, point, **params):
    bm = build(CATALOG[name], params or None)
    mv = evaluate_metric(bm.spec, point)
    cb = compute_curvature(mv)
    return bm, mv, cb


FRW_POINT = (1.0, 0.1, 0.2, 0.3)
SCHW_POINT = (0.0, 4.0, 1.1, 0.4)


# ---------------------------------------------------------------------------
# field-equation stress energy and fluid recovery

def test_frw_dust_fluid_recovery():
    """Flat FRW with a = t^(2/3) at t = 1: comoving dust with density 4/3."""
    bm, mv, cb = _setting("frw_flat_powerlaw", FRW_POINT)
    T, trace, trace_check = matter.stress_energy_from_einstein(
        cb, mv, bm.inputs.consts)
    assert trace_check < 1e-12
    state, aniso = matter.fluid_recover(T, bm.inputs.fluid, bm.spec, mv)
    assert state.mu == pytest.approx(4.0 / 3.0, abs=1e-9)
    assert state.p == pytest.approx(0.0, abs=1e-9)
    assert aniso < 1e-12


def test_frw_radiation_equation_of_state():
    """n = 1/2 gives a(t) ~ t^(1/2), the radiation era: mu = 3p."""
    bm, mv, cb = _setting("frw_flat_powerlaw", FRW_POINT, n=0.5)
    T, _, _ = matter.stress_energy_from_einstein(cb, mv, bm.inputs.consts)
    state, _ = matter.fluid_recover(T, bm.inputs.fluid, bm.spec, mv)
    assert state.mu == pytest.approx(3.0 * state.p, rel=1e-9)


def test_perfect_fluid_round_trip():
    bm, mv, _ = _setting("frw_flat_powerlaw", FRW_POINT)
    state = matter.FluidState(mu=2.5, p=0.4)
    T = matter.perfect_fluid_T(state, bm.inputs.fluid, bm.spec, mv)
    back, aniso = matter.fluid_recover(T, bm.inputs.fluid, bm.spec, mv)
    assert back.mu == pytest.approx(2.5, rel=1e-12)
    assert back.p == pytest.approx(0.4, rel=1e-12)
    assert aniso < 1e-12


def test_de_sitter_vacuum_like_state():
    """Lambda = 3H^2 makes the comoving fluid source satisfy mu = -p."""
    bm, mv, cb = _setting("de_sitter_static", (0.0, 2.0, 1.1, 0.4))
    T, _, _ = matter.stress_energy_from_einstein(cb, mv, bm.inputs.consts)
    state, _ = matter.fluid_recover(T, bm.inputs.fluid, bm.spec, mv)
    assert abs(state.mu + state.p) < 1e-9


def test_unnormalized_velocity_rejected():
    bm, mv, _ = _setting("frw_flat_powerlaw", FRW_POINT)
    bad = matter.FluidSpec(tuple(ex.parse(s) for s in ("2", "0", "0", "0")))
    with pytest.raises(matter.NormalizationError):
        matter.fluid_recover(np.zeros((4, 4)), bad, bm.spec, mv)


# ---------------------------------------------------------------------------
# kinematics

def test_frw_kinematics_pure_expansion():
    """Comoving FRW flow: theta = 3 adot/a = 2/t at n = 2/3, with zero
    shear, vorticity, and acceleration."""
    bm, mv, cb = _setting("frw_flat_powerlaw", FRW_POINT)
    kin = matter.kinematics(bm.inputs.fluid, bm.spec, mv, cb)
    assert kin.theta == pytest.approx(2.0, abs=1e-9)
    assert np.max(np.abs(kin.shear)) < 1e-9
    assert np.max(np.abs(kin.vorticity)) < 1e-9
    assert np.max(np.abs(kin.accel)) < 1e-9
    assert np.max(np.abs(kin.reconstruction_residual)) < 1e-12


def test_frw_theta_scales_as_inverse_time():
    bm = build(CATALOG["frw_flat_powerlaw"])
    for t in (0.5, 2.0, 3.0):
        mv = evaluate_metric(bm.spec, (t, 0.1, 0.2, 0.3))
        cb = compute_curvature(mv)
        kin = matter.kinematics(bm.inputs.fluid, bm.spec, mv, cb)
        assert kin.theta == pytest.approx(2.0 / t, rel=1e-10)


def test_schwarzschild_static_observer_acceleration():
    """The hovering observer at r = 4, M = 1 accelerates radially outward
    with raised component M/r^2 = 0.0625; expansion-free, shear-free."""
    bm, mv, cb = _setting("schwarzschild", SCHW_POINT)
    kin = matter.kinematics(bm.inputs.fluid, bm.spec, mv, cb)
    accel_up = mv.g_inv @ kin.accel
    assert accel_up[1] == pytest.approx(0.0625, rel=1e-10)
    assert accel_up[0] == pytest.approx(0.0, abs=1e-12)
    assert kin.theta == pytest.approx(0.0, abs=1e-12)
    assert np.max(np.abs(kin.shear)) < 1e-12
    assert np.max(np.abs(kin.vorticity)) < 1e-12


def test_projector_properties():
    bm, mv, cb = _setting("frw_flat_powerlaw", FRW_POINT)
    kin = matter.kinematics(bm.inputs.fluid, bm.spec, mv, cb)
    u_up = matter._eval_vector(bm.inputs.fluid.u, bm.spec, mv.point)
    # h annihilates u and acts as the identity on the orthogonal 3-space
    assert np.max(np.abs(kin.h @ u_up)) < 1e-12
    h_mixed = mv.g_inv @ kin.h
    assert np.max(np.abs(h_mixed @ h_mixed - h_mixed)) < 1e-12
    assert float(np.trace(h_mixed)) == pytest.approx(3.0, rel=1e-12)


def test_frw_conservation_residuals():
    """Energy equation mudot + (mu+p) theta = 0 and the force balance hold
    for the closed-form dust solution."""
    bm = build(CATALOG["frw_flat_powerlaw"])
    for t in (0.5, 1.0, 2.0):
        mv = evaluate_metric(bm.spec, (t, 0.1, 0.2, 0.3))
        cb = compute_curvature(mv)
        force, energy = matter.conservation_residuals(
            bm.inputs.mu, bm.inputs.p, bm.inputs.fluid, bm.spec, mv, cb)
        scale = max(abs(3.0 * (2.0 / 3.0) ** 2 / t**2), 1.0)
        assert abs(energy) < 1e-9 * scale
        assert np.max(np.abs(force)) < 1e-9 * scale


# ---------------------------------------------------------------------------
# electromagnetism

def test_em_stress_energy_traceless_and_matches_ricci():
    bm, mv, cb = _setting("reissner_nordstrom", SCHW_POINT)
    T, trace = matter.em_stress_energy(bm.inputs.faraday, bm.spec, mv)
    t_scale = float(np.max(np.abs(T)))
    assert abs(trace) < 1e-12 * t_scale
    # Einstein residual R_ab = k T_ab after one-point coupling fit
    idx = np.unravel_index(np.argmax(np.abs(T)), T.shape)
    k = cb.Ricci[idx] / T[idx]
    assert np.max(np.abs(cb.Ricci - k * T)) < 1e-9 * float(
        np.max(np.abs(cb.Ricci)))


def test_em_asymmetric_faraday_rejected():
    bm, mv, _ = _setting("reissner_nordstrom", SCHW_POINT)
    bad_rows = (("0", "1", "0", "0"), ("1", "0", "0", "0"),
                ("0", "0", "0", "0"), ("0", "0", "0", "0"))
    bad = matter.FaradaySpec(tuple(tuple(ex.parse(s) for s in r)
                                   for r in bad_rows))
    with pytest.raises(ValueError):
        matter.em_stress_energy(bad, bm.spec, mv)


# ---------------------------------------------------------------------------
# symmetries

def test_schwarzschild_timelike_killing_vector():
    bm, mv, cb = _setting("schwarzschild", SCHW_POINT)
    rep = matter.symmetry_check(bm.inputs.xi, bm.spec, mv, cb)
    assert rep.killing_residual < 1e-12


def test_schwarzschild_radial_vector_not_killing():
    bm, mv, cb = _setting("schwarzschild", SCHW_POINT)
    radial = matter.VectorFieldSpec(tuple(ex.parse(s)
                                          for s in ("0", "1", "0", "0")))
    rep = matter.symmetry_check(radial, bm.spec, mv, cb)
    assert rep.killing_residual > 1e-3


def test_minkowski_dilation_is_conformal():
    """xi = x^a d_a on flat space: lie_xi g = 2 g, so Omega = 1."""
    bm = build(CATALOG["minkowski"])
    mv = evaluate_metric(bm.spec, (0.3, 1.0, -2.0, 0.7))
    cb = compute_curvature(mv)
    dilation = matter.VectorFieldSpec(tuple(ex.parse(s)
                                            for s in ("t", "x", "y", "z")))
    # a T that inherits the conformal symmetry: lie_xi T = 2 Omega T needs
    # T constant along the flow with conformal weight; T = g works since
    # lie_xi g = 2 Omega g exactly and nabla T = 0
    T = mv.g.copy()
    covT = np.zeros((4, 4, 4))
    rep = matter.symmetry_check(dilation, bm.spec, mv, cb, T=T, covT=covT)
    assert rep.conformal_residual < 1e-12
    assert rep.Omega == pytest.approx(1.0, abs=1e-12)
    assert rep.inheritance_residual < 1e-12
    assert rep.killing_residual > 0.5  # a dilation is not an isometry


def test_frw_spatial_translation_is_killing():
    bm, mv, cb = _setting("frw_flat_powerlaw", FRW_POINT)
    rep = matter.symmetry_check(bm.inputs.xi, bm.spec, mv, cb)
    assert rep.killing_residual < 1e-12
