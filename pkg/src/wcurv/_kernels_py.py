"""Pure-numpy curvature kernel (fallback backend).

Index layout shared with the compiled kernel:
  dg[c,a,b]          = d_c g_ab
  d2g[d,c,a,b]       = d_d d_c g_ab
  d3g[e,d,c,a,b]     = d_e d_d d_c g_ab
  Gamma[a,b,c]       = Gamma^a_bc
  dGamma[d,a,b,c]    = d_d Gamma^a_bc
  Rmixed[h,b,c,d]    = R^h_bcd = d_d Gamma^h_cb - d_c Gamma^h_db
                       + Gamma^h_de Gamma^e_cb - Gamma^h_ce Gamma^e_db
  Rlow[a,b,c,d]      = g_ah R^h_bcd
  Ricci[b,c]         = R^h_bch          (contraction over first/last slots)
  covRicci[a,b,c]    = nabla_a R_bc
  covRiemann[e,a,b,c,d] = nabla_e R_abcd
  gradR[a]           = d_a R
"""

from __future__ import annotations

import numpy as np

BACKEND = "python"


def curvature_fields(g, ginv, dg, d2g, d3g):
    """All per-point curvature arrays from the metric and its partials.

    Returns (Gamma, dGamma, Rmixed, Rlow, Ricci, scalar, gradR,
    covRicci, covRiemann).
    """
    # derivatives of the inverse metric
    dginv = -np.einsum("am,cmn,nb->cab", ginv, dg, ginv)
    d2ginv = -(np.einsum("dam,cmn,nb->dcab", dginv, dg, ginv)
               + np.einsum("am,dcmn,nb->dcab", ginv, d2g, ginv)
               + np.einsum("am,cmn,dnb->dcab", ginv, dg, dginv))

    # S[d,b,c] = d_b g_dc + d_c g_db - d_d g_bc  and its partials
    S = (np.einsum("bdc->dbc", dg) + np.einsum("cdb->dbc", dg)
         - np.einsum("dbc->dbc", dg))
    dS = (np.einsum("ebdc->edbc", d2g) + np.einsum("ecdb->edbc", d2g)
          - np.einsum("edbc->edbc", d2g))
    d2S = (np.einsum("febdc->fedbc", d3g) + np.einsum("fecdb->fedbc", d3g)
           - np.einsum("fedbc->fedbc", d3g))

    Gamma = 0.5 * np.einsum("ad,dbc->abc", ginv, S)
    dGamma = 0.5 * (np.einsum("ead,dbc->eabc", dginv, S)
                    + np.einsum("ad,edbc->eabc", ginv, dS))
    d2Gamma = 0.5 * (np.einsum("fead,dbc->feabc", d2ginv, S)
                     + np.einsum("ead,fdbc->feabc", dginv, dS)
                     + np.einsum("fad,edbc->feabc", dginv, dS)
                     + np.einsum("ad,fedbc->feabc", ginv, d2S))

    Rmixed = (np.einsum("dhcb->hbcd", dGamma) - np.einsum("chdb->hbcd", dGamma)
              + np.einsum("hdm,mcb->hbcd", Gamma, Gamma)
              - np.einsum("hcm,mdb->hbcd", Gamma, Gamma))
    dRmixed = (np.einsum("edhcb->ehbcd", d2Gamma)
               - np.einsum("echdb->ehbcd", d2Gamma)
               + np.einsum("ehdm,mcb->ehbcd", dGamma, Gamma)
               + np.einsum("hdm,emcb->ehbcd", Gamma, dGamma)
               - np.einsum("ehcm,mdb->ehbcd", dGamma, Gamma)
               - np.einsum("hcm,emdb->ehbcd", Gamma, dGamma))

    Rlow = np.einsum("ah,hbcd->abcd", g, Rmixed)
    dRlow = (np.einsum("eah,hbcd->eabcd", dg, Rmixed)
             + np.einsum("ah,ehbcd->eabcd", g, dRmixed))

    Ricci = np.einsum("hbch->bc", Rmixed)
    dRicci = np.einsum("ehbch->ebc", dRmixed)
    scalar = float(np.einsum("bc,bc->", ginv, Ricci))
    gradR = (np.einsum("ebc,bc->e", dginv, Ricci)
             + np.einsum("bc,ebc->e", ginv, dRicci))

    covRicci = (dRicci
                - np.einsum("dab,dc->abc", Gamma, Ricci)
                - np.einsum("dac,bd->abc", Gamma, Ricci))
    covRiemann = (dRlow
                  - np.einsum("mea,mbcd->eabcd", Gamma, Rlow)
                  - np.einsum("meb,amcd->eabcd", Gamma, Rlow)
                  - np.einsum("mec,abmd->eabcd", Gamma, Rlow)
                  - np.einsum("med,abcm->eabcd", Gamma, Rlow))

    return (Gamma, dGamma, Rmixed, Rlow, Ricci, scalar, gradR,
            covRicci, covRiemann)
