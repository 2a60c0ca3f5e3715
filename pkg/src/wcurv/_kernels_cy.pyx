# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled curvature kernel.  Same contract and index layout as
wcurv._kernels_py.curvature_fields; plain nested loops over the fixed
4-dimensional index range."""

import numpy as np
cimport numpy as cnp

cnp.import_array()

BACKEND = "cython"

DEF N = 4


def curvature_fields(object g_in, object ginv_in, object dg_in,
                     object d2g_in, object d3g_in):
    cdef double[:, :] g = np.ascontiguousarray(g_in, dtype=np.float64)
    cdef double[:, :] ginv = np.ascontiguousarray(ginv_in, dtype=np.float64)
    cdef double[:, :, :] dg = np.ascontiguousarray(dg_in, dtype=np.float64)
    cdef double[:, :, :, :] d2g = np.ascontiguousarray(d2g_in, dtype=np.float64)
    cdef double[:, :, :, :, :] d3g = np.ascontiguousarray(d3g_in, dtype=np.float64)

    cdef cnp.ndarray dginv_a = np.zeros((N, N, N))
    cdef cnp.ndarray d2ginv_a = np.zeros((N, N, N, N))
    cdef cnp.ndarray S_a = np.zeros((N, N, N))
    cdef cnp.ndarray dS_a = np.zeros((N, N, N, N))
    cdef cnp.ndarray d2S_a = np.zeros((N, N, N, N, N))
    cdef cnp.ndarray Gamma_a = np.zeros((N, N, N))
    cdef cnp.ndarray dGamma_a = np.zeros((N, N, N, N))
    cdef cnp.ndarray d2Gamma_a = np.zeros((N, N, N, N, N))
    cdef cnp.ndarray Rmixed_a = np.zeros((N, N, N, N))
    cdef cnp.ndarray dRmixed_a = np.zeros((N, N, N, N, N))
    cdef cnp.ndarray Rlow_a = np.zeros((N, N, N, N))
    cdef cnp.ndarray dRlow_a = np.zeros((N, N, N, N, N))
    cdef cnp.ndarray Ricci_a = np.zeros((N, N))
    cdef cnp.ndarray dRicci_a = np.zeros((N, N, N))
    cdef cnp.ndarray gradR_a = np.zeros(N)
    cdef cnp.ndarray covRicci_a = np.zeros((N, N, N))
    cdef cnp.ndarray covRiemann_a = np.zeros((N, N, N, N, N))

    cdef double[:, :, :] dginv = dginv_a
    cdef double[:, :, :, :] d2ginv = d2ginv_a
    cdef double[:, :, :] S = S_a
    cdef double[:, :, :, :] dS = dS_a
    cdef double[:, :, :, :, :] d2S = d2S_a
    cdef double[:, :, :] Gamma = Gamma_a
    cdef double[:, :, :, :] dGamma = dGamma_a
    cdef double[:, :, :, :, :] d2Gamma = d2Gamma_a
    cdef double[:, :, :, :] Rmixed = Rmixed_a
    cdef double[:, :, :, :, :] dRmixed = dRmixed_a
    cdef double[:, :, :, :] Rlow = Rlow_a
    cdef double[:, :, :, :, :] dRlow = dRlow_a
    cdef double[:, :] Ricci = Ricci_a
    cdef double[:, :, :] dRicci = dRicci_a
    cdef double[:] gradR = gradR_a
    cdef double[:, :, :] covRicci = covRicci_a
    cdef double[:, :, :, :, :] covRiemann = covRiemann_a

    cdef int a, b, c, d, e, f, h, m, n
    cdef double acc, scalar

    # dginv[c,a,b] = -ginv[a,m] dg[c,m,n] ginv[n,b]
    for c in range(N):
        for a in range(N):
            for b in range(N):
                acc = 0.0
                for m in range(N):
                    for n in range(N):
                        acc += ginv[a, m] * dg[c, m, n] * ginv[n, b]
                dginv[c, a, b] = -acc

    # d2ginv[d,c,a,b]
    for d in range(N):
        for c in range(N):
            for a in range(N):
                for b in range(N):
                    acc = 0.0
                    for m in range(N):
                        for n in range(N):
                            acc += (dginv[d, a, m] * dg[c, m, n] * ginv[n, b]
                                    + ginv[a, m] * d2g[d, c, m, n] * ginv[n, b]
                                    + ginv[a, m] * dg[c, m, n] * dginv[d, n, b])
                    d2ginv[d, c, a, b] = -acc

    # S[d,b,c] = d_b g_dc + d_c g_db - d_d g_bc, and its partials
    for d in range(N):
        for b in range(N):
            for c in range(N):
                S[d, b, c] = dg[b, d, c] + dg[c, d, b] - dg[d, b, c]
                for e in range(N):
                    dS[e, d, b, c] = (d2g[e, b, d, c] + d2g[e, c, d, b]
                                      - d2g[e, d, b, c])
                    for f in range(N):
                        d2S[f, e, d, b, c] = (d3g[f, e, b, d, c]
                                              + d3g[f, e, c, d, b]
                                              - d3g[f, e, d, b, c])

    for a in range(N):
        for b in range(N):
            for c in range(N):
                acc = 0.0
                for d in range(N):
                    acc += ginv[a, d] * S[d, b, c]
                Gamma[a, b, c] = 0.5 * acc
                for e in range(N):
                    acc = 0.0
                    for d in range(N):
                        acc += (dginv[e, a, d] * S[d, b, c]
                                + ginv[a, d] * dS[e, d, b, c])
                    dGamma[e, a, b, c] = 0.5 * acc
                    for f in range(N):
                        acc = 0.0
                        for d in range(N):
                            acc += (d2ginv[f, e, a, d] * S[d, b, c]
                                    + dginv[e, a, d] * dS[f, d, b, c]
                                    + dginv[f, a, d] * dS[e, d, b, c]
                                    + ginv[a, d] * d2S[f, e, d, b, c])
                        d2Gamma[f, e, a, b, c] = 0.5 * acc

    # Rmixed[h,b,c,d] and its coordinate derivative
    for h in range(N):
        for b in range(N):
            for c in range(N):
                for d in range(N):
                    acc = dGamma[d, h, c, b] - dGamma[c, h, d, b]
                    for m in range(N):
                        acc += (Gamma[h, d, m] * Gamma[m, c, b]
                                - Gamma[h, c, m] * Gamma[m, d, b])
                    Rmixed[h, b, c, d] = acc
                    for e in range(N):
                        acc = d2Gamma[e, d, h, c, b] - d2Gamma[e, c, h, d, b]
                        for m in range(N):
                            acc += (dGamma[e, h, d, m] * Gamma[m, c, b]
                                    + Gamma[h, d, m] * dGamma[e, m, c, b]
                                    - dGamma[e, h, c, m] * Gamma[m, d, b]
                                    - Gamma[h, c, m] * dGamma[e, m, d, b])
                        dRmixed[e, h, b, c, d] = acc

    for a in range(N):
        for b in range(N):
            for c in range(N):
                for d in range(N):
                    acc = 0.0
                    for h in range(N):
                        acc += g[a, h] * Rmixed[h, b, c, d]
                    Rlow[a, b, c, d] = acc
                    for e in range(N):
                        acc = 0.0
                        for h in range(N):
                            acc += (dg[e, a, h] * Rmixed[h, b, c, d]
                                    + g[a, h] * dRmixed[e, h, b, c, d])
                        dRlow[e, a, b, c, d] = acc

    scalar = 0.0
    for b in range(N):
        for c in range(N):
            acc = 0.0
            for h in range(N):
                acc += Rmixed[h, b, c, h]
            Ricci[b, c] = acc
            for e in range(N):
                acc = 0.0
                for h in range(N):
                    acc += dRmixed[e, h, b, c, h]
                dRicci[e, b, c] = acc
    for b in range(N):
        for c in range(N):
            scalar += ginv[b, c] * Ricci[b, c]
    for e in range(N):
        acc = 0.0
        for b in range(N):
            for c in range(N):
                acc += (dginv[e, b, c] * Ricci[b, c]
                        + ginv[b, c] * dRicci[e, b, c])
        gradR[e] = acc

    for a in range(N):
        for b in range(N):
            for c in range(N):
                acc = dRicci[a, b, c]
                for d in range(N):
                    acc -= (Gamma[d, a, b] * Ricci[d, c]
                            + Gamma[d, a, c] * Ricci[b, d])
                covRicci[a, b, c] = acc

    for e in range(N):
        for a in range(N):
            for b in range(N):
                for c in range(N):
                    for d in range(N):
                        acc = dRlow[e, a, b, c, d]
                        for m in range(N):
                            acc -= (Gamma[m, e, a] * Rlow[m, b, c, d]
                                    + Gamma[m, e, b] * Rlow[a, m, c, d]
                                    + Gamma[m, e, c] * Rlow[a, b, m, d]
                                    + Gamma[m, e, d] * Rlow[a, b, c, m])
                        covRiemann[e, a, b, c, d] = acc

    return (Gamma_a, dGamma_a, Rmixed_a, Rlow_a, Ricci_a, float(scalar),
            gradR_a, covRicci_a, covRiemann_a)
