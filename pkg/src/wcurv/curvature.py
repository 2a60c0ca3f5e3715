"""Standard curvature pipeline at a point.

Sign conventions, pinned by the requirement that the contraction of the
mixed Riemann tensor over its first and last slots reproduce the Ricci
tensor with the usual positivity (a static de-Sitter chart has scalar
curvature +12 H^2, dust has positive energy density):

    R^h_bcd = d_d Gamma^h_cb - d_c Gamma^h_db
              + Gamma^h_dm Gamma^m_cb - Gamma^h_cm Gamma^m_db
    R_bc    = R^h_bch
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .kernels import curvature_fields
from .metric import MetricValue

__all__ = ["CurvatureBundle", "compute_curvature", "rel_residual",
           "RESIDUAL_FLOOR"]

RESIDUAL_FLOOR = 1e-30


def rel_residual(residual: np.ndarray | float, scale: float) -> float:
    """Max-abs of `residual` relative to `scale`, floored at 1e-30."""
    r = float(np.max(np.abs(residual))) if np.ndim(residual) else abs(float(residual))
    return r / max(abs(scale), RESIDUAL_FLOOR)


@dataclass(frozen=True)
class CurvatureBundle:
    mv: MetricValue
    Gamma: np.ndarray          # (4,4,4)   Gamma^a_bc
    dGamma: np.ndarray         # (4,4,4,4) d_d Gamma^a_bc (derivative first)
    Riemann_mixed: np.ndarray  # (4,4,4,4) R^h_bcd
    Riemann_low: np.ndarray    # (4,4,4,4) R_abcd
    Ricci: np.ndarray          # (4,4)
    scalar: float
    gradR: np.ndarray          # (4,)      nabla_a R (= d_a R)
    covRicci: np.ndarray       # (4,4,4)   nabla_a R_bc
    covRiemann: np.ndarray     # (4,4,4,4,4) nabla_e R_abcd

    # ---- derived residuals & contractions ----------------------------------

    @property
    def riemann_scale(self) -> float:
        return float(np.max(np.abs(self.Riemann_low)))

    def antisym_first_pair_residual(self) -> float:
        R = self.Riemann_low
        return rel_residual(R + R.transpose(1, 0, 2, 3), self.riemann_scale)

    def antisym_last_pair_residual(self) -> float:
        R = self.Riemann_low
        return rel_residual(R + R.transpose(0, 1, 3, 2), self.riemann_scale)

    def pair_symmetry_residual(self) -> float:
        R = self.Riemann_low
        return rel_residual(R - R.transpose(2, 3, 0, 1), self.riemann_scale)

    def first_bianchi_residual(self) -> float:
        R = self.Riemann_low
        cyc = R + R.transpose(1, 2, 0, 3) + R.transpose(2, 0, 1, 3)
        return rel_residual(cyc, self.riemann_scale)

    def second_bianchi(self) -> np.ndarray:
        """nabla_e R_abcd + nabla_c R_abde + nabla_d R_abec (should vanish)."""
        C = self.covRiemann
        return (C + np.einsum("cabde->eabcd", C) + np.einsum("dabec->eabcd", C))

    def second_bianchi_residual(self) -> float:
        # scale includes the Riemann magnitude so metrics whose curvature is
        # covariantly constant (covRiemann = round-off) do not divide noise
        # by noise
        scale = max(float(np.max(np.abs(self.covRiemann))), self.riemann_scale)
        return rel_residual(self.second_bianchi(), scale)

    def codazzi_ricci_tensor(self) -> np.ndarray:
        """nabla_a R_bc - nabla_b R_ac; zero iff the Ricci tensor is of
        Codazzi type."""
        return self.covRicci - self.covRicci.transpose(1, 0, 2)

    def codazzi_ricci_residual(self) -> float:
        scale = max(float(np.max(np.abs(self.covRicci))), self.riemann_scale)
        return rel_residual(self.codazzi_ricci_tensor(), scale)

    def div_riemann(self) -> tuple[np.ndarray, np.ndarray, float]:
        """Divergence nabla_h R^h_bcd, computed two ways: directly, and as
        nabla_d R_bc - nabla_c R_bd (the once-contracted second Bianchi
        identity).  Returns (direct, formula, agreement residual)."""
        direct = np.einsum("ha,habcd->bcd", self.mv.g_inv, self.covRiemann)
        formula = (np.einsum("dbc->bcd", self.covRicci)
                   - np.einsum("cbd->bcd", self.covRicci))
        scale = max(float(np.max(np.abs(direct))),
                    float(np.max(np.abs(formula))),
                    float(np.max(np.abs(self.covRiemann))),
                    self.riemann_scale)
        return direct, formula, rel_residual(direct - formula, scale)

    def harmonic_curvature_residual(self) -> float:
        direct, _, _ = self.div_riemann()
        scale = max(float(np.max(np.abs(self.covRiemann))), self.riemann_scale)
        return rel_residual(direct, scale)

    def contracted_bianchi_residual(self) -> float:
        """Residual of nabla_b R^ab - (1/2) nabla^a R (vanishes identically
        for a Levi-Civita connection; correctness gate)."""
        ginv = self.mv.g_inv
        div_ric = np.einsum("bm,an,bmn->a", ginv, ginv, self.covRicci)
        half_grad = 0.5 * np.einsum("ab,b->a", ginv, self.gradR)
        scale = max(float(np.max(np.abs(div_ric))),
                    float(np.max(np.abs(half_grad))),
                    float(np.max(np.abs(self.covRiemann))),
                    self.riemann_scale)
        return rel_residual(div_ric - half_grad, scale)

    def metric_compatibility_residual(self) -> float:
        """max |nabla_c g_ab| (must vanish)."""
        mv = self.mv
        nabla_g = (mv.dg
                   - np.einsum("dca,db->cab", self.Gamma, mv.g)
                   - np.einsum("dcb,ad->cab", self.Gamma, mv.g))
        return float(np.max(np.abs(nabla_g)))

    def einstein_residual(self) -> float:
        """max |R_bc - (R/4) g_bc| relative to the Ricci scale."""
        res = self.Ricci - 0.25 * self.scalar * self.mv.g
        return rel_residual(res, float(np.max(np.abs(self.Ricci))))

    def kretschmann(self) -> float:
        Rup = np.einsum("am,bn,cp,dq,mnpq->abcd",
                        self.mv.g_inv, self.mv.g_inv, self.mv.g_inv,
                        self.mv.g_inv, self.Riemann_low)
        return float(np.einsum("abcd,abcd->", self.Riemann_low, Rup))


def compute_curvature(mv: MetricValue) -> CurvatureBundle:
    (Gamma, dGamma, Rmixed, Rlow, Ricci, scalar, gradR,
     covRicci, covRiemann) = curvature_fields(mv.g, mv.g_inv, mv.dg,
                                              mv.d2g, mv.d3g)
    return CurvatureBundle(mv=mv, Gamma=Gamma, dGamma=dGamma,
                           Riemann_mixed=Rmixed, Riemann_low=Rlow,
                           Ricci=Ricci, scalar=scalar, gradR=gradR,
                           covRicci=covRicci, covRiemann=covRiemann)
