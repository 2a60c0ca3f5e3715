"""Built-in metrics exercising the different classification regimes:
flat space, vacuum, constant curvature, power-law cosmology, static
cosmology with matter, and an electrovac solution."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from . import expr as ex
from .classify import Inputs
from .matter import FaradaySpec, FluidSpec, ModelConstants, VectorFieldSpec
from .metric import CoordinateChart, MetricSpec

__all__ = ["CatalogEntry", "BuiltMetric", "CATALOG", "catalog_names", "build"]

EXCLUSION_EPS = 1e-9


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    description: str
    coordinates: tuple[str, ...]
    parameters: Mapping[str, float]
    metric: tuple[tuple[str, str, str, str], ...]
    lambda_expr: str = "0"
    kappa: float = 1.0
    fluid: tuple[str, str, str, str] | None = None
    mu: str | None = None
    p: str | None = None
    xi: tuple[str, str, str, str] | None = None
    faraday: tuple[tuple[str, ...], ...] | None = None
    grid_ranges: Mapping[str, tuple[float, float, int]] = field(default_factory=dict)
    grid_fixed: Mapping[str, float] = field(default_factory=dict)
    exclusions: tuple[str, ...] = ()
    sample_box: Mapping[str, tuple[float, float]] = field(default_factory=dict)


@dataclass(frozen=True)
class BuiltMetric:
    entry: CatalogEntry
    spec: MetricSpec
    inputs: Inputs
    parameters: dict[str, float]
    exclusions: tuple[ex.Expr, ...]

    def excluded(self, point: Sequence[float]) -> bool:
        b = self.spec.chart.bindings(point)
        for e in self.exclusions:
            try:
                if abs(ex.evaluate(e, b)) <= EXCLUSION_EPS:
                    return True
            except ex.ExprError:
                return True
        return False

    def default_grid(self) -> list[tuple[float, ...]]:
        return make_grid(self, self.entry.grid_ranges, self.entry.grid_fixed)


def make_grid(built: BuiltMetric,
              ranges: Mapping[str, tuple[float, float, int]],
              fixed: Mapping[str, float]) -> list[tuple[float, ...]]:
    axes = []
    for name in built.spec.chart.names:
        if name in ranges:
            lo, hi, n = ranges[name]
            if n < 1:
                raise ValueError(f"grid count for {name} must be >= 1")
            if n == 1:
                axes.append([0.5 * (lo + hi)])
            else:
                axes.append([lo + (hi - lo) * i / (n - 1) for i in range(n)])
        else:
            axes.append([float(fixed.get(name, 0.0))])
    pts = [tuple(p) for p in itertools.product(*axes)]
    return [p for p in pts if not built.excluded(p)]


def build(entry: CatalogEntry,
          param_overrides: Mapping[str, float] | None = None) -> BuiltMetric:
    params = dict(entry.parameters)
    if param_overrides:
        unknown = set(param_overrides) - set(params)
        if unknown:
            raise KeyError(f"unknown parameter(s) for {entry.name}: {sorted(unknown)}")
        params.update({k: float(v) for k, v in param_overrides.items()})
    chart = CoordinateChart(names=entry.coordinates, parameters=params)
    comps = tuple(tuple(ex.parse(s) for s in row) for row in entry.metric)
    spec = MetricSpec(chart, comps)

    lam = ex.evaluate(ex.parse(entry.lambda_expr), dict(params))
    consts = ModelConstants(Lambda=lam, kappa=entry.kappa)
    fluid = FluidSpec(tuple(ex.parse(s) for s in entry.fluid)) if entry.fluid else None
    xi = VectorFieldSpec(tuple(ex.parse(s) for s in entry.xi)) if entry.xi else None
    faraday = (FaradaySpec(tuple(tuple(ex.parse(s) for s in row)
                                 for row in entry.faraday))
               if entry.faraday else None)
    inputs = Inputs(
        fluid=fluid,
        mu=ex.parse(entry.mu) if entry.mu else None,
        p=ex.parse(entry.p) if entry.p else None,
        xi=xi, faraday=faraday, consts=consts)
    exclusions = tuple(ex.parse(s) for s in entry.exclusions)
    return BuiltMetric(entry=entry, spec=spec, inputs=inputs,
                       parameters=params, exclusions=exclusions)


def _diag(tt: str, xx: str, yy: str, zz: str):
    return ((tt, "0", "0", "0"), ("0", xx, "0", "0"),
            ("0", "0", yy, "0"), ("0", "0", "0", zz))


_SPHERICAL_EXCLUSIONS = ("r", "sin(theta)")

CATALOG: dict[str, CatalogEntry] = {}


def _register(entry: CatalogEntry):
    CATALOG[entry.name] = entry


_register(CatalogEntry(
    name="minkowski",
    description="flat spacetime, Cartesian chart",
    coordinates=("t", "x", "y", "z"),
    parameters={},
    metric=_diag("-1", "1", "1", "1"),
    fluid=("1", "0", "0", "0"),
    mu="0", p="0",
    xi=("1", "0", "0", "0"),
    grid_ranges={"t": (0.0, 2.0, 3), "x": (-1.0, 1.0, 3)},
    grid_fixed={"y": 0.3, "z": 0.7},
    sample_box={"t": (-2, 2), "x": (-2, 2), "y": (-2, 2), "z": (-2, 2)},
))

_register(CatalogEntry(
    name="schwarzschild",
    description="vacuum black hole, exterior chart",
    coordinates=("t", "r", "theta", "phi"),
    parameters={"M": 1.0},
    metric=_diag("-(1-2*M/r)", "1/(1-2*M/r)", "r^2", "r^2*sin(theta)^2"),
    fluid=("1/sqrt(1-2*M/r)", "0", "0", "0"),
    xi=("1", "0", "0", "0"),
    grid_ranges={"r": (3.0, 10.0, 5), "theta": (0.6, 2.4, 3)},
    grid_fixed={"t": 0.0, "phi": 0.5},
    exclusions=("r-2*M",) + _SPHERICAL_EXCLUSIONS,
    sample_box={"t": (0, 10), "r": (2.5, 12.0), "theta": (0.4, 2.7),
                "phi": (0.0, 6.0)},
))

_register(CatalogEntry(
    name="de_sitter_static",
    description="constant positive curvature, static chart",
    coordinates=("t", "r", "theta", "phi"),
    parameters={"H": 0.1},
    metric=_diag("-(1-H^2*r^2)", "1/(1-H^2*r^2)", "r^2", "r^2*sin(theta)^2"),
    lambda_expr="3*H^2",
    fluid=("1/sqrt(1-H^2*r^2)", "0", "0", "0"),
    xi=("1", "0", "0", "0"),
    grid_ranges={"r": (1.0, 5.0, 5), "theta": (0.6, 2.4, 3)},
    grid_fixed={"t": 0.0, "phi": 0.5},
    exclusions=("1-H^2*r^2",) + _SPHERICAL_EXCLUSIONS,
    sample_box={"t": (0, 10), "r": (0.5, 8.0), "theta": (0.4, 2.7),
                "phi": (0.0, 6.0)},
))

_register(CatalogEntry(
    name="frw_flat_powerlaw",
    description="spatially flat power-law cosmology, scale factor t^n",
    coordinates=("t", "x", "y", "z"),
    parameters={"n": 2.0 / 3.0},
    metric=_diag("-1", "t^(2*n)", "t^(2*n)", "t^(2*n)"),
    fluid=("1", "0", "0", "0"),
    mu="3*n^2/t^2",
    p="-(n*(3*n-2))/t^2",
    xi=("0", "1", "0", "0"),  # spatial translation, an isometry
    grid_ranges={"t": (0.5, 2.0, 4), "x": (0.0, 1.0, 2)},
    grid_fixed={"y": 0.2, "z": 0.4},
    exclusions=("t",),
    sample_box={"t": (0.3, 3.0), "x": (-2, 2), "y": (-2, 2), "z": (-2, 2)},
))

_register(CatalogEntry(
    name="einstein_static",
    description="static homogeneous dust universe with cosmological constant",
    coordinates=("t", "r", "theta", "phi"),
    parameters={"R0": 2.0},
    metric=_diag("-1", "1/(1-r^2/R0^2)", "r^2", "r^2*sin(theta)^2"),
    lambda_expr="1/R0^2",
    fluid=("1", "0", "0", "0"),
    mu="2/R0^2",
    p="0",
    xi=("1", "0", "0", "0"),
    grid_ranges={"r": (0.4, 1.6, 4), "theta": (0.6, 2.4, 3)},
    grid_fixed={"t": 0.0, "phi": 0.5},
    exclusions=("1-r^2/R0^2",) + _SPHERICAL_EXCLUSIONS,
    sample_box={"t": (0, 10), "r": (0.2, 1.8), "theta": (0.4, 2.7),
                "phi": (0.0, 6.0)},
))

_register(CatalogEntry(
    name="reissner_nordstrom",
    description="charged black hole exterior with its Coulomb field",
    coordinates=("t", "r", "theta", "phi"),
    parameters={"M": 1.0, "Q": 0.5},
    metric=_diag("-(1-2*M/r+Q^2/r^2)", "1/(1-2*M/r+Q^2/r^2)",
                 "r^2", "r^2*sin(theta)^2"),
    xi=("1", "0", "0", "0"),
    faraday=(("0", "Q/r^2", "0", "0"),
             ("-(Q/r^2)", "0", "0", "0"),
             ("0", "0", "0", "0"),
             ("0", "0", "0", "0")),
    grid_ranges={"r": (3.0, 8.0, 4), "theta": (0.6, 2.4, 3)},
    grid_fixed={"t": 0.0, "phi": 0.5},
    exclusions=("r^2-2*M*r+Q^2",) + _SPHERICAL_EXCLUSIONS,
    sample_box={"t": (0, 10), "r": (2.5, 10.0), "theta": (0.4, 2.7),
                "phi": (0.0, 6.0)},
))


def catalog_names() -> list[str]:
    return sorted(CATALOG)
