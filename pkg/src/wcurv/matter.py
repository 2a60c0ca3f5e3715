"""Matter sector: stress-energy extraction, perfect fluids, the kinematical
split of a unit timelike flow, electromagnetic stress-energy, and Lie
derivative (Killing / conformal / inheritance) checks.

Conventions: signature -+++ with u_a u^a = -1; spatial projector
h_ab = g_ab + u_a u_b (so h_ab u^b = 0); gravitational coupling k defaults
to 1 and the cosmological constant to 0.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import expr as ex
from .curvature import CurvatureBundle, rel_residual
from .metric import MetricSpec, MetricValue

__all__ = [
    "ModelConstants", "FluidSpec", "FluidState", "FaradaySpec",
    "VectorFieldSpec", "KinematicsDecomposition", "SymmetryReport",
    "NormalizationError", "stress_energy_from_einstein", "perfect_fluid_T",
    "fluid_recover", "kinematics", "conservation_residuals",
    "em_stress_energy", "symmetry_check",
]

NORMALIZATION_TOL = 1e-6


class NormalizationError(Exception):
    def __init__(self, uu: float, point):
        super().__init__(
            f"fluid velocity not unit-timelike at {tuple(point)}: u.u = {uu!r}")
        self.uu = uu
        self.point = tuple(point)


@dataclass(frozen=True)
class ModelConstants:
    Lambda: float = 0.0
    kappa: float = 1.0

    def __post_init__(self):
        if self.kappa == 0.0:
            raise ValueError("gravitational coupling must be non-zero")


@dataclass(frozen=True)
class FluidSpec:
    u: tuple[ex.Expr, ...]  # upper-index velocity components

    def __post_init__(self):
        if len(self.u) != 4:
            raise ValueError("fluid velocity needs 4 components")


@dataclass(frozen=True)
class FluidState:
    mu: float
    p: float


@dataclass(frozen=True)
class FaradaySpec:
    F: tuple[tuple[ex.Expr, ...], ...]  # antisymmetric F_ab

    def __post_init__(self):
        if len(self.F) != 4 or any(len(r) != 4 for r in self.F):
            raise ValueError("Faraday tensor must be 4x4")


@dataclass(frozen=True)
class VectorFieldSpec:
    xi: tuple[ex.Expr, ...]  # upper-index components

    def __post_init__(self):
        if len(self.xi) != 4:
            raise ValueError("vector field needs 4 components")


@dataclass(frozen=True)
class KinematicsDecomposition:
    theta: float
    accel: np.ndarray        # (4,) u-dot, lowered
    shear: np.ndarray        # (4,4)
    vorticity: np.ndarray    # (4,4)
    h: np.ndarray            # (4,4) projector g_ab + u_a u_b
    grad_u: np.ndarray       # (4,4) K[b,a] = nabla_b u_a
    reconstruction_residual: np.ndarray  # (4,4)


@dataclass(frozen=True)
class SymmetryReport:
    lie_g: np.ndarray         # (4,4)
    killing_residual: float
    Omega: float
    conformal_residual: float
    inheritance_residual: float | None = None


# ---------------------------------------------------------------------------
# expression-field evaluation helpers

def _eval_vector(exprs: Sequence[ex.Expr], spec: MetricSpec,
                 point: Sequence[float]) -> np.ndarray:
    b = spec.chart.bindings(point)
    return np.array([ex.evaluate(e, b) for e in exprs])


def _eval_vector_grad(exprs: Sequence[ex.Expr], spec: MetricSpec,
                      point: Sequence[float]) -> np.ndarray:
    """d[b,a] = d_b (component a)."""
    b = spec.chart.bindings(point)
    out = np.zeros((4, len(exprs)))
    for a, e in enumerate(exprs):
        for i, name in enumerate(spec.chart.names):
            out[i, a] = ex.evaluate(ex.simplify(ex.differentiate(e, name)), b)
    return out


def _eval_scalar_grad(e: ex.Expr, spec: MetricSpec,
                      point: Sequence[float]) -> np.ndarray:
    b = spec.chart.bindings(point)
    return np.array([ex.evaluate(ex.simplify(ex.differentiate(e, n)), b)
                     for n in spec.chart.names])


def _check_normalized(u_up: np.ndarray, mv: MetricValue) -> None:
    uu = float(u_up @ mv.g @ u_up)
    if abs(uu + 1.0) > NORMALIZATION_TOL:
        raise NormalizationError(uu, mv.point)


# ---------------------------------------------------------------------------
# stress-energy

def stress_energy_from_einstein(cb: CurvatureBundle, mv: MetricValue,
                                consts: ModelConstants
                                ) -> tuple[np.ndarray, float, float]:
    """T_bc = (R_bc - R/2 g_bc + Lambda g_bc)/k.

    Returns (T, trace, field-equation trace residual |R + k T| for
    Lambda = 0, NaN otherwise)."""
    g = mv.g
    T = (cb.Ricci - 0.5 * cb.scalar * g + consts.Lambda * g) / consts.kappa
    trace = float(np.einsum("bc,bc->", mv.g_inv, T))
    if consts.Lambda == 0.0:
        scale = max(abs(cb.scalar), abs(consts.kappa * trace))
        trace_check = rel_residual(cb.scalar + consts.kappa * trace, scale)
    else:
        trace_check = float("nan")
    return T, trace, trace_check


def cov_stress_energy_from_einstein(cb: CurvatureBundle, mv: MetricValue,
                                    consts: ModelConstants) -> np.ndarray:
    """nabla_c T_ab for the Einstein-extracted T (the Lambda term drops
    since nabla g = 0).  Layout [c,a,b]."""
    return (cb.covRicci
            - 0.5 * np.einsum("c,ab->cab", cb.gradR, mv.g)) / consts.kappa


def perfect_fluid_T(state: FluidState, fluid: FluidSpec, spec: MetricSpec,
                    mv: MetricValue) -> np.ndarray:
    u_up = _eval_vector(fluid.u, spec, mv.point)
    _check_normalized(u_up, mv)
    u = mv.g @ u_up
    return (state.mu + state.p) * np.outer(u, u) + state.p * mv.g


def fluid_recover(T: np.ndarray, fluid: FluidSpec, spec: MetricSpec,
                  mv: MetricValue) -> tuple[FluidState, float]:
    """Project T onto a perfect-fluid form along u.  Returns the recovered
    state and the max-abs anisotropy residual."""
    u_up = _eval_vector(fluid.u, spec, mv.point)
    _check_normalized(u_up, mv)
    u = mv.g @ u_up
    h_up = mv.g_inv + np.outer(u_up, u_up)
    mu = float(u_up @ T @ u_up)
    p = float(np.einsum("ab,ab->", h_up, T)) / 3.0
    residual = T - (mu + p) * np.outer(u, u) - p * mv.g
    return FluidState(mu=mu, p=p), float(np.max(np.abs(residual)))


# ---------------------------------------------------------------------------
# kinematics

def grad_u_lowered(fluid: FluidSpec, spec: MetricSpec, mv: MetricValue,
                   cb: CurvatureBundle) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Returns (u_up, u_low, K) with K[b,a] = nabla_b u_a."""
    u_up = _eval_vector(fluid.u, spec, mv.point)
    _check_normalized(u_up, mv)
    du = _eval_vector_grad(fluid.u, spec, mv.point)  # du[b,a] = d_b u^a
    u_low = mv.g @ u_up
    d_ulow = (np.einsum("bac,c->ba", mv.dg, u_up)
              + np.einsum("ac,bc->ba", mv.g, du))
    K = d_ulow - np.einsum("cba,c->ba", cb.Gamma, u_low)
    return u_up, u_low, K


def kinematics(fluid: FluidSpec, spec: MetricSpec, mv: MetricValue,
               cb: CurvatureBundle) -> KinematicsDecomposition:
    u_up, u_low, K = grad_u_lowered(fluid, spec, mv, cb)
    g, ginv = mv.g, mv.g_inv

    theta = float(np.einsum("ba,ba->", ginv, K))
    accel = np.einsum("b,ba->a", u_up, K)
    h = g + np.outer(u_low, u_low)
    h_mixed = np.einsum("cm,ma->ca", ginv, h)  # h^c_a

    # projected gradient P[a,b] = h^c_a h^d_b nabla_d u_c
    P = np.einsum("ca,db,dc->ab", h_mixed, h_mixed, K)
    sym = 0.5 * (P + P.T)
    shear = sym - (theta / 3.0) * h
    vorticity = 0.5 * (P - P.T)

    # K[b,a] = nabla_b u_a vs model_ab = theta/3 h_ab - udot_a u_b
    #          + sigma_ab + omega_ab, compared in the [b,a] layout
    model = (theta / 3.0) * h - np.outer(accel, u_low) + shear + vorticity
    recon = K - model.T

    return KinematicsDecomposition(theta=theta, accel=accel, shear=shear,
                                   vorticity=vorticity, h=h, grad_u=K,
                                   reconstruction_residual=recon)


def conservation_residuals(mu_expr: ex.Expr, p_expr: ex.Expr,
                           fluid: FluidSpec, spec: MetricSpec,
                           mv: MetricValue, cb: CurvatureBundle
                           ) -> tuple[np.ndarray, float]:
    """Force residual (mu+p) udot_a + nabla_a p - pdot u_a and energy
    residual mudot + (mu+p) theta; both vanish for conserved T."""
    kin = kinematics(fluid, spec, mv, cb)
    b = spec.chart.bindings(mv.point)
    mu = ex.evaluate(mu_expr, b)
    p = ex.evaluate(p_expr, b)
    grad_mu = _eval_scalar_grad(mu_expr, spec, mv.point)
    grad_p = _eval_scalar_grad(p_expr, spec, mv.point)
    u_up = _eval_vector(fluid.u, spec, mv.point)
    u_low = mv.g @ u_up
    mu_dot = float(u_up @ grad_mu)
    p_dot = float(u_up @ grad_p)
    force = (mu + p) * kin.accel + grad_p - p_dot * u_low
    energy = mu_dot + (mu + p) * kin.theta
    return force, energy


# ---------------------------------------------------------------------------
# electromagnetism

def em_stress_energy(far: FaradaySpec, spec: MetricSpec, mv: MetricValue
                     ) -> tuple[np.ndarray, float]:
    """T_ab = -F_a^c F_bc + (1/4) g_ab F_pq F^pq; returns (T, trace)."""
    b = spec.chart.bindings(mv.point)
    F = np.array([[ex.evaluate(e, b) for e in row] for row in far.F])
    if np.max(np.abs(F + F.T)) > 0.0:
        raise ValueError("Faraday tensor must be antisymmetric")
    ginv = mv.g_inv
    F_mixed = np.einsum("cm,am->ac", ginv, F)         # F_a^c
    F_up = np.einsum("pm,qn,mn->pq", ginv, ginv, F)   # F^pq
    invariant = float(np.einsum("pq,pq->", F, F_up))
    T = -np.einsum("ac,bc->ab", F_mixed, F) + 0.25 * invariant * mv.g
    trace = float(np.einsum("ab,ab->", ginv, T))
    return T, trace


# ---------------------------------------------------------------------------
# symmetries

def symmetry_check(vf: VectorFieldSpec, spec: MetricSpec, mv: MetricValue,
                   cb: CurvatureBundle, T: np.ndarray | None = None,
                   covT: np.ndarray | None = None) -> SymmetryReport:
    """Lie-drag of the metric along xi, conformal factor, and (when a
    stress-energy tensor with its covariant derivative is supplied) the
    symmetry-inheritance residual |lie_xi T - 2 Omega T|."""
    xi_up = _eval_vector(vf.xi, spec, mv.point)
    dxi = _eval_vector_grad(vf.xi, spec, mv.point)  # dxi[b,a] = d_b xi^a
    xi_low = mv.g @ xi_up
    d_xilow = (np.einsum("bac,c->ba", mv.dg, xi_up)
               + np.einsum("ac,bc->ba", mv.g, dxi))
    nabla_xi = d_xilow - np.einsum("cba,c->ba", cb.Gamma, xi_low)  # [a,b]=nabla_a xi_b

    lie_g = nabla_xi + nabla_xi.T
    killing_residual = float(np.max(np.abs(lie_g)))
    Omega = 0.25 * float(np.einsum("ab,ab->", mv.g_inv, nabla_xi))
    conformal_residual = float(np.max(np.abs(lie_g - 2.0 * Omega * mv.g)))

    inheritance = None
    if T is not None and covT is not None:
        nabla_xi_up = np.einsum("cb,ab->ac", mv.g_inv, nabla_xi)  # nabla_a xi^c
        lie_T = (np.einsum("c,cab->ab", xi_up, covT)
                 + np.einsum("ac,cb->ab", nabla_xi_up, T)
                 + np.einsum("bc,ac->ab", nabla_xi_up, T))
        inheritance = float(np.max(np.abs(lie_T - 2.0 * Omega * T)))

    return SymmetryReport(lie_g=lie_g, killing_residual=killing_residual,
                          Omega=Omega, conformal_residual=conformal_residual,
                          inheritance_residual=inheritance)
