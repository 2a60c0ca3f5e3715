"""Metric specification and per-point evaluation.

A metric is a symmetric 4x4 array of expressions over a coordinate chart.
Evaluation produces the numeric metric, its inverse (analytic adjugate) and
all partial derivatives up to third order; derivative expressions are
computed symbolically once and cached on the spec.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from . import expr as ex

__all__ = [
    "CoordinateChart", "MetricSpec", "MetricValue", "ValidationReport",
    "DegenerateMetricError", "evaluate_metric", "det4", "inv4",
]

DIM = 4
SIGNATURES = ("-+++", "+---")


class DegenerateMetricError(Exception):
    def __init__(self, point: Sequence[float], det: float):
        super().__init__(f"metric degenerate at {tuple(point)}: det={det!r}")
        self.point = tuple(point)
        self.det = det


@dataclass(frozen=True)
class CoordinateChart:
    names: tuple[str, ...]
    parameters: Mapping[str, float] = field(default_factory=dict)

    def __post_init__(self):
        if len(self.names) != DIM:
            raise ValueError(f"need exactly {DIM} coordinates, got {self.names}")
        for n in self.names:
            if not ex.IDENT_RE.fullmatch(n):
                raise ValueError(f"bad coordinate name {n!r}")
        if set(self.names) & set(self.parameters):
            clash = set(self.names) & set(self.parameters)
            raise ValueError(f"names used as both coordinate and parameter: {clash}")

    def bindings(self, point: Sequence[float]) -> dict[str, float]:
        b = dict(self.parameters)
        b.update(zip(self.names, point))
        return b


@dataclass(frozen=True)
class ValidationReport:
    problems: tuple[str, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.problems


def det4(m: np.ndarray) -> float:
    """Determinant of a 4x4 matrix by cofactor expansion (exact for
    diagonal input, no pivoting noise)."""
    def det3(a):
        return (a[0, 0] * (a[1, 1] * a[2, 2] - a[1, 2] * a[2, 1])
                - a[0, 1] * (a[1, 0] * a[2, 2] - a[1, 2] * a[2, 0])
                + a[0, 2] * (a[1, 0] * a[2, 1] - a[1, 1] * a[2, 0]))
    total = 0.0
    rows = [1, 2, 3]
    for j in range(4):
        cols = [c for c in range(4) if c != j]
        minor = m[np.ix_(rows, cols)]
        total += ((-1.0) ** j) * m[0, j] * det3(minor)
    return total


def inv4(m: np.ndarray) -> tuple[np.ndarray, float]:
    """Inverse via adjugate/determinant.  Returns (inverse, det)."""
    det = det4(m)
    if det == 0.0:
        return np.full((4, 4), np.nan), det
    def det3(a):
        return (a[0, 0] * (a[1, 1] * a[2, 2] - a[1, 2] * a[2, 1])
                - a[0, 1] * (a[1, 0] * a[2, 2] - a[1, 2] * a[2, 0])
                + a[0, 2] * (a[1, 0] * a[2, 1] - a[1, 1] * a[2, 0]))
    adj = np.empty((4, 4))
    for i in range(4):
        rows = [r for r in range(4) if r != i]
        for j in range(4):
            cols = [c for c in range(4) if c != j]
            cof = ((-1.0) ** (i + j)) * det3(m[np.ix_(rows, cols)])
            adj[j, i] = cof
    return adj / det, det


@dataclass(frozen=True)
class MetricValue:
    point: tuple[float, ...]
    g: np.ndarray          # (4,4)
    g_inv: np.ndarray      # (4,4)
    dg: np.ndarray         # (4,4,4)   dg[c,a,b] = d_c g_ab
    d2g: np.ndarray        # (4,4,4,4) d2g[d,c,a,b] = d_d d_c g_ab
    d3g: np.ndarray        # (4,4,4,4,4)
    det: float


class MetricSpec:
    """Validated metric with a write-once cache of symbolic component
    derivatives up to third order."""

    def __init__(self, chart: CoordinateChart,
                 components: Sequence[Sequence[ex.Expr]],
                 signature: str = "-+++"):
        if signature not in SIGNATURES:
            raise ValueError(f"signature must be one of {SIGNATURES}")
        self.chart = chart
        self.components = tuple(tuple(row) for row in components)
        self.signature = signature
        # cache: (a, b, sorted derivative multi-index) -> simplified Expr
        self._deriv_cache: dict[tuple, ex.Expr] = {}

    # -- validation ---------------------------------------------------------

    def validate(self, sample_points: Sequence[Sequence[float]] = ()) -> ValidationReport:
        problems: list[str] = []
        comps = self.components
        if len(comps) != DIM or any(len(r) != DIM for r in comps):
            return ValidationReport((f"metric must be {DIM}x{DIM}",))
        for a in range(DIM):
            for b in range(a + 1, DIM):
                if comps[a][b] != comps[b][a]:
                    problems.append(
                        f"symmetry violation at indices ({a},{b}): "
                        f"'{ex.to_str(comps[a][b])}' != '{ex.to_str(comps[b][a])}'")
        allowed = set(self.chart.names) | set(self.chart.parameters)
        for a in range(DIM):
            for b in range(DIM):
                unknown = ex.free_symbols(comps[a][b]) - allowed
                for name in sorted(unknown):
                    problems.append(f"unknown symbol '{name}' in g_{a}{b}")
        if not problems:
            for p in sample_points:
                try:
                    mv = evaluate_metric(self, p)
                except (DegenerateMetricError, ex.ExprError) as err:
                    problems.append(f"evaluation failed at {tuple(p)}: {err}")
                    continue
                if not signature_matches(mv.g, self.signature):
                    problems.append(f"signature mismatch at {tuple(p)}")
        return ValidationReport(tuple(problems))

    # -- symbolic derivative cache -------------------------------------------

    def derivative(self, a: int, b: int, multi_index: tuple[int, ...]) -> ex.Expr:
        """Partial derivative of g_ab w.r.t. the (sorted) coordinate
        multi-index, |multi_index| <= 3."""
        if len(multi_index) > 3:
            raise ValueError("derivatives cached only up to order 3")
        if a > b:
            a, b = b, a
        key = (a, b, tuple(sorted(multi_index)))
        cached = self._deriv_cache.get(key)
        if cached is not None:
            return cached
        if not key[2]:
            e = ex.simplify(self.components[a][b])
        else:
            prev = self.derivative(a, b, key[2][:-1])
            e = ex.simplify(ex.differentiate(prev, self.chart.names[key[2][-1]]))
        self._deriv_cache[key] = e
        return e


def signature_matches(g: np.ndarray, signature: str) -> bool:
    eig = np.linalg.eigvalsh(0.5 * (g + g.T))
    neg = int(np.sum(eig < 0.0))
    want = 1 if signature == "-+++" else 3
    return neg == want and not np.any(eig == 0.0)


def evaluate_metric(spec: MetricSpec, point: Sequence[float]) -> MetricValue:
    point = tuple(float(x) for x in point)
    if len(point) != DIM or not all(np.isfinite(point)):
        raise ValueError(f"point must be {DIM} finite reals, got {point}")
    b = spec.chart.bindings(point)

    g = np.zeros((4, 4))
    dg = np.zeros((4, 4, 4))
    d2g = np.zeros((4, 4, 4, 4))
    d3g = np.zeros((4, 4, 4, 4, 4))
    for a in range(4):
        for c in range(a, 4):
            v = ex.evaluate(spec.derivative(a, c, ()), b)
            g[a, c] = g[c, a] = v
            for i in range(4):
                v = ex.evaluate(spec.derivative(a, c, (i,)), b)
                dg[i, a, c] = dg[i, c, a] = v
                for j in range(i, 4):
                    v = ex.evaluate(spec.derivative(a, c, (i, j)), b)
                    d2g[i, j, a, c] = d2g[i, j, c, a] = v
                    d2g[j, i, a, c] = d2g[j, i, c, a] = v
                    for k in range(j, 4):
                        v = ex.evaluate(spec.derivative(a, c, (i, j, k)), b)
                        for perm in ((i, j, k), (i, k, j), (j, i, k),
                                     (j, k, i), (k, i, j), (k, j, i)):
                            d3g[perm][a, c] = d3g[perm][c, a] = v

    g_inv, det = inv4(g)
    scale = float(np.max(np.abs(g)))
    if abs(det) < 1e-14 * max(scale, 1e-300) ** 4:
        raise DegenerateMetricError(point, det)
    return MetricValue(point=point, g=g, g_inv=g_inv,
                       dg=dg, d2g=d2g, d3g=d3g, det=det)
