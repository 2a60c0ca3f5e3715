"""The trace-adjusted curvature tensor W and its calculus.

    W_abcd  = R_abcd + (1/3)(g_ac R_bd - g_bc R_ad)
    W^h_bcd = R^h_bcd + (1/3)(delta^h_c R_bd - g_bc R^h_d)

Contractions, symmetry residuals, the Bianchi-like cyclic identity for
nabla W, and the divergence (with two independently printed forms that are
cross-checked against each other).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .curvature import CurvatureBundle, rel_residual
from .metric import MetricValue

__all__ = ["WBundle", "SymmetryProfile", "compute_w", "W_COEFF"]

W_COEFF = 1.0 / 3.0  # 1/(n-1) with the spacetime dimension n = 4 fixed

_ID4 = np.eye(4)


@dataclass(frozen=True)
class SymmetryProfile:
    first_pair_antisym: float   # must vanish
    cyclic: float               # must vanish
    last_pair_antisym: float    # generically nonzero, reported
    pair_interchange: float     # generically nonzero, reported
    tolerance: float

    @property
    def last_pair_antisym_broken(self) -> bool:
        return self.last_pair_antisym > self.tolerance

    @property
    def pair_interchange_broken(self) -> bool:
        return self.pair_interchange > self.tolerance


@dataclass(frozen=True)
class WBundle:
    W_low: np.ndarray            # (4,4,4,4) W_abcd
    W_mixed: np.ndarray          # (4,4,4,4) W^h_bcd
    W_contracted: np.ndarray     # (4,4)     W_bc from contracting W^h_bcd over (h,d)
    contraction_residual: float  # agreement with (4/3)(R_bc - R/4 g_bc)
    trace_W: float               # g^bc W_bc
    covW: np.ndarray             # (4,4,4,4,4) nabla_e W_abcd
    bianchi_like_lhs: np.ndarray     # cyclic sum nabla_a W_bcde
    bianchi_like_rhs: np.ndarray     # metric-weighted Ricci-derivative skews
    bianchi_like_residual: float     # |LHS| relative to nabla-W scale
    bianchi_identity_residual: float  # |LHS - RHS| (algebraic identity)
    divW: np.ndarray             # (4,4,4) nabla_h W^h_bcd (direct)
    divW_formula: np.ndarray     # divergence-of-Riemann form
    divW_alt: np.ndarray         # Ricci-derivative-only form
    divW_agreement: float        # max relative disagreement of the 3 routes
    w_flat_residual: float       # max|W| relative to the Riemann scale
    curvature_scale: float       # max|Riemann|, the overall curvature magnitude

    def symmetry_profile(self, tolerance: float = 1e-9) -> SymmetryProfile:
        # the curvature scale keeps the ratios meaningful when W itself is
        # round-off noise (W-flat metrics)
        W = self.W_low
        scale = max(float(np.max(np.abs(W))), self.curvature_scale, 1e-30)
        first = float(np.max(np.abs(W + W.transpose(1, 0, 2, 3)))) / scale
        cyc = W + W.transpose(1, 2, 0, 3) + W.transpose(2, 0, 1, 3)
        cyclic = float(np.max(np.abs(cyc))) / scale
        last = float(np.max(np.abs(W + W.transpose(0, 1, 3, 2)))) / scale
        pair = float(np.max(np.abs(W - W.transpose(2, 3, 0, 1)))) / scale
        return SymmetryProfile(first_pair_antisym=first, cyclic=cyclic,
                               last_pair_antisym=last, pair_interchange=pair,
                               tolerance=tolerance)


def compute_w(cb: CurvatureBundle, mv: MetricValue) -> WBundle:
    g, ginv = mv.g, mv.g_inv
    Ric = cb.Ricci
    Ric_mixed = np.einsum("hm,md->hd", ginv, Ric)  # R^h_d

    W_low = (cb.Riemann_low
             + W_COEFF * (np.einsum("ac,bd->abcd", g, Ric)
                          - np.einsum("bc,ad->abcd", g, Ric)))
    W_mixed = (cb.Riemann_mixed
               + W_COEFF * (np.einsum("hc,bd->hbcd", _ID4, Ric)
                            - np.einsum("bc,hd->hbcd", g, Ric_mixed)))

    W_bc = np.einsum("hbch->bc", W_mixed)
    W_bc_formula = (4.0 / 3.0) * (Ric - 0.25 * cb.scalar * g)
    contraction_residual = rel_residual(
        W_bc - W_bc_formula,
        max(float(np.max(np.abs(W_bc_formula))),
            float(np.max(np.abs(W_bc))), cb.riemann_scale))
    trace_W = float(np.einsum("bc,bc->", ginv, W_bc))

    # nabla W by term-wise covariant differentiation (nabla g = 0)
    covW = (cb.covRiemann
            + W_COEFF * (np.einsum("ac,ebd->eabcd", g, cb.covRicci)
                         - np.einsum("bc,ead->eabcd", g, cb.covRicci)))

    # cyclic sum nabla_a W_bcde over the first three slots
    lhs = (covW + np.einsum("bcade->abcde", covW)
           + np.einsum("cabde->abcde", covW))
    cr = cb.covRicci
    skew = cr - cr.transpose(1, 0, 2)  # skew[a,c,e] = nabla_a R_ce - nabla_c R_ae
    rhs = W_COEFF * (np.einsum("bd,ace->abcde", g, skew)
                     + np.einsum("cd,bae->abcde", g, skew)
                     + np.einsum("ad,cbe->abcde", g, skew))
    covw_scale = float(np.max(np.abs(covW)))
    bianchi_like_residual = rel_residual(lhs, max(covw_scale, cb.riemann_scale))
    id_scale = max(float(np.max(np.abs(lhs))), float(np.max(np.abs(rhs))),
                   covw_scale, cb.riemann_scale)
    bianchi_identity_residual = rel_residual(lhs - rhs, id_scale)

    # divergence, three routes:
    #  direct: contract nabla_e W^h_bcd over (e, h)
    covW_mixed_div = np.einsum("ha,habcd->bcd", ginv, covW)
    #  Riemann-divergence form; nabla_h R^h_d = (1/2) nabla_d R
    divR, _, _ = cb.div_riemann()
    # nabla_h R^h_d = (1/2) nabla_d R via the twice-contracted Bianchi identity
    div_ric_low = 0.5 * cb.gradR
    divW_formula = (divR
                    + W_COEFF * (np.einsum("cbd->bcd", cb.covRicci)
                                 - np.einsum("bc,d->bcd", g, div_ric_low)))
    #  Ricci-only form
    divW_alt = (np.einsum("dbc->bcd", cb.covRicci)
                - np.einsum("cbd->bcd", cb.covRicci)
                + W_COEFF * (np.einsum("cbd->bcd", cb.covRicci)
                             - 0.5 * np.einsum("bc,d->bcd", g, cb.gradR)))

    scale = max(float(np.max(np.abs(covW_mixed_div))),
                float(np.max(np.abs(divW_formula))),
                float(np.max(np.abs(divW_alt))),
                covw_scale, cb.riemann_scale)
    divW_agreement = max(
        rel_residual(covW_mixed_div - divW_formula, scale),
        rel_residual(covW_mixed_div - divW_alt, scale),
    )

    w_flat_residual = rel_residual(W_low, cb.riemann_scale)

    return WBundle(W_low=W_low, W_mixed=W_mixed, W_contracted=W_bc,
                   contraction_residual=contraction_residual, trace_W=trace_W,
                   covW=covW, bianchi_like_lhs=lhs, bianchi_like_rhs=rhs,
                   bianchi_like_residual=bianchi_like_residual,
                   bianchi_identity_residual=bianchi_identity_residual,
                   divW=covW_mixed_div, divW_formula=divW_formula,
                   divW_alt=divW_alt, divW_agreement=divW_agreement,
                   w_flat_residual=w_flat_residual,
                   curvature_scale=cb.riemann_scale)
