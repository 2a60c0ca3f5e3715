"""Grid-level classification of a spacetime and verification of the
curvature-identity claims on concrete metrics.

Every "vanishing" check is a relative residual: max-abs of the residual
tensor divided by a characteristic scale.  The scale is the max-abs of the
parent tensor, widened by the overall curvature scale at the point so that
metrics whose parent tensor itself vanishes (flat space, vacuum, constant
curvature) do not produce 0/0 false failures.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import expr as ex
from . import matter
from .curvature import CurvatureBundle, compute_curvature, RESIDUAL_FLOOR
from .metric import MetricSpec, MetricValue, evaluate_metric
from .wtensor import WBundle, compute_w

__all__ = ["Inputs", "PointRecord", "FlagRecord", "ClaimVerdict",
           "ClassificationReport", "classify", "verify_claims",
           "frw_assessment", "FLAG_NAMES", "CLAIMS"]

FLAG_NAMES = (
    "w_flat", "einstein", "constant_scalar_curvature", "codazzi_ricci",
    "bianchi_like_W", "harmonic_curvature", "divergence_free_W", "codazzi_T",
    "vacuum_like_eos", "mu_minus_3p_constant", "radiative", "frw_kinematics",
    "spatial_constancy",
)


def _rel(residual, *scales) -> float:
    r = float(np.max(np.abs(residual))) if np.ndim(residual) else abs(float(residual))
    s = max([abs(float(x)) for x in scales] + [RESIDUAL_FLOOR])
    return r / s


@dataclass(frozen=True)
class Inputs:
    """Optional matter-sector inputs accompanying a metric."""
    fluid: matter.FluidSpec | None = None
    mu: ex.Expr | None = None
    p: ex.Expr | None = None
    xi: matter.VectorFieldSpec | None = None
    faraday: matter.FaradaySpec | None = None
    consts: matter.ModelConstants = field(default_factory=matter.ModelConstants)


@dataclass
class PointRecord:
    """Everything classification needs from one grid point."""
    point: tuple[float, ...]
    scalar: float
    riemann_scale: float
    ricci_scale: float
    kretschmann: float
    # identity gates
    second_bianchi: float
    contracted_bianchi: float
    div_riemann_agreement: float
    metric_compatibility: float
    w_contraction: float
    w_trace: float
    w_symmetry: dict
    divW_agreement: float
    # flag residuals (relative)
    w_flat: float
    einstein: float
    constant_scalar_curvature: float
    codazzi_ricci: float
    bianchi_like_W: float
    bianchi_identity: float
    harmonic_curvature: float
    divergence_free_W: float
    constant_curvature_form: float
    # matter sector (None when not applicable)
    codazzi_T: float | None = None
    mu: float | None = None
    p: float | None = None
    vacuum_like_eos: float | None = None
    radiative: float | None = None
    anisotropy: float | None = None
    theta: float | None = None
    frw_kinematics: float | None = None
    spatial_constancy: float | None = None
    energy_residual: float | None = None
    force_residual: float | None = None
    ricci_conservation: float | None = None
    killing: float | None = None
    conformal: float | None = None
    Omega: float | None = None
    inheritance: float | None = None
    em_trace: float | None = None
    em_einstein: float | None = None
    em_coupling: float | None = None
    audit: dict = field(default_factory=dict)


@dataclass(frozen=True)
class FlagRecord:
    name: str
    verdict: str                   # holds | fails | not-applicable
    worst_point: tuple[float, ...] | None
    worst_residual: float | None


@dataclass(frozen=True)
class ClaimVerdict:
    claim: str
    description: str
    status: str                    # confirmed | vacuous | violated
    hypothesis_satisfied: bool
    conclusion_satisfied: bool
    counterexample: tuple[float, ...] | None = None
    audit: dict = field(default_factory=dict)


@dataclass(frozen=True)
class ClassificationReport:
    flags: tuple[FlagRecord, ...]
    tolerance: float

    def flag(self, name: str) -> FlagRecord:
        for f in self.flags:
            if f.name == name:
                return f
        raise KeyError(name)

    def holds(self, name: str) -> bool:
        return self.flag(name).verdict == "holds"


# ---------------------------------------------------------------------------
# per-point evaluation

def evaluate_point(spec: MetricSpec, point, inputs: Inputs) -> PointRecord:
    mv = evaluate_metric(spec, point)
    cb = compute_curvature(mv)
    wb = compute_w(cb, mv)
    return _record(spec, mv, cb, wb, inputs)


def _record(spec: MetricSpec, mv: MetricValue, cb: CurvatureBundle,
            wb: WBundle, inputs: Inputs) -> PointRecord:
    rs = cb.riemann_scale
    ricci_scale = float(np.max(np.abs(cb.Ricci)))
    covR_scale = float(np.max(np.abs(cb.covRiemann)))
    covRic_scale = float(np.max(np.abs(cb.covRicci)))
    covW_scale = float(np.max(np.abs(wb.covW)))

    divR_direct, _, divR_agree = cb.div_riemann()

    # constant-curvature algebraic form: R_abcd = (R/12)(g_ad g_bc - g_ac g_bd)
    g = mv.g
    K = cb.scalar / 12.0
    cc_form = cb.Riemann_low - K * (np.einsum("ad,bc->abcd", g, g)
                                    - np.einsum("ac,bd->abcd", g, g))

    sp = wb.symmetry_profile()
    rec = PointRecord(
        point=mv.point,
        scalar=cb.scalar,
        riemann_scale=rs,
        ricci_scale=ricci_scale,
        kretschmann=cb.kretschmann(),
        second_bianchi=cb.second_bianchi_residual(),
        contracted_bianchi=cb.contracted_bianchi_residual(),
        div_riemann_agreement=divR_agree,
        metric_compatibility=cb.metric_compatibility_residual(),
        w_contraction=wb.contraction_residual,
        w_trace=_rel(wb.trace_W, float(np.max(np.abs(wb.W_contracted))), rs),
        w_symmetry={"first_pair_antisym": sp.first_pair_antisym,
                    "cyclic": sp.cyclic,
                    "last_pair_antisym": sp.last_pair_antisym,
                    "pair_interchange": sp.pair_interchange},
        divW_agreement=wb.divW_agreement,
        w_flat=_rel(wb.W_low, rs),
        einstein=_rel(cb.Ricci - 0.25 * cb.scalar * g, ricci_scale, rs),
        constant_scalar_curvature=_rel(cb.gradR, abs(cb.scalar), rs),
        codazzi_ricci=_rel(cb.codazzi_ricci_tensor(),
                           covRic_scale, covR_scale, rs),
        bianchi_like_W=_rel(wb.bianchi_like_lhs, covW_scale, rs),
        bianchi_identity=wb.bianchi_identity_residual,
        harmonic_curvature=_rel(divR_direct, covR_scale, rs),
        divergence_free_W=_rel(wb.divW, covW_scale, rs),
        constant_curvature_form=_rel(cc_form, rs),
    )

    consts = inputs.consts
    T, T_trace, _ = matter.stress_energy_from_einstein(cb, mv, consts)
    covT = matter.cov_stress_energy_from_einstein(cb, mv, consts)
    covT_scale = float(np.max(np.abs(covT)))
    rec.codazzi_T = _rel(covT - covT.transpose(1, 0, 2),
                         covT_scale, covR_scale, rs)
    rec.ricci_conservation = _rel(
        np.einsum("bm,an,bmn->a", mv.g_inv, mv.g_inv, cb.covRicci),
        covRic_scale, covR_scale, rs)

    if inputs.fluid is not None:
        state, aniso = matter.fluid_recover(T, inputs.fluid, spec, mv)
        kin = matter.kinematics(inputs.fluid, spec, mv, cb)
        fluid_scale = max(abs(state.mu), abs(state.p), rs / abs(consts.kappa))
        rec.mu, rec.p = state.mu, state.p
        rec.anisotropy = _rel(aniso, float(np.max(np.abs(T))), fluid_scale)
        rec.vacuum_like_eos = abs(state.mu + state.p) / max(fluid_scale,
                                                            RESIDUAL_FLOOR)
        rec.radiative = abs(state.mu - 3.0 * state.p) / max(fluid_scale,
                                                            RESIDUAL_FLOOR)
        rec.theta = kin.theta
        K_scale = float(np.max(np.abs(kin.grad_u)))
        rec.frw_kinematics = _rel(
            max(float(np.max(np.abs(kin.shear))),
                float(np.max(np.abs(kin.vorticity))),
                float(np.max(np.abs(kin.accel)))),
            K_scale, abs(kin.theta))
        rec.audit["kinematics_reconstruction"] = _rel(
            kin.reconstruction_residual, K_scale, abs(kin.theta))

        if inputs.mu is not None and inputs.p is not None:
            grad_mu = matter._eval_scalar_grad(inputs.mu, spec, mv.point)
            grad_p = matter._eval_scalar_grad(inputs.p, spec, mv.point)
            u_up = matter._eval_vector(inputs.fluid.u, spec, mv.point)
            u_low = mv.g @ u_up
            h_mixed = np.eye(4) + np.outer(u_up, u_low)  # h^b_a = d^b_a + u^b u_a
            proj_mu = np.einsum("ba,b->a", h_mixed, grad_mu)
            proj_p = np.einsum("ba,b->a", h_mixed, grad_p)
            grad_scale = max(float(np.max(np.abs(grad_mu))),
                             float(np.max(np.abs(grad_p))), fluid_scale)
            rec.spatial_constancy = _rel(
                max(float(np.max(np.abs(proj_mu))),
                    float(np.max(np.abs(proj_p)))), grad_scale)
            force, energy = matter.conservation_residuals(
                inputs.mu, inputs.p, inputs.fluid, spec, mv, cb)
            cons_scale = max(grad_scale, fluid_scale * max(abs(kin.theta), 1.0))
            rec.force_residual = _rel(force, cons_scale)
            rec.energy_residual = _rel(energy, cons_scale)
            # printed fluid relations kept as raw audit residuals
            mu_dot = float(u_up @ grad_mu)
            p_dot = float(u_up @ grad_p)
            m3p_dot = mu_dot - 3.0 * p_dot
            rec.audit["density_gradient_relation"] = _rel(
                (1.0 / 6.0) * m3p_dot * u_low - (1.0 / 3.0) * grad_mu,
                grad_scale)
            rec.audit["pressure_gradient_relation"] = _rel(
                1.5 * (state.mu + state.p) * kin.theta * u_low
                + (31.0 / 6.0) * p_dot * u_low - (2.0 / 3.0) * grad_p,
                grad_scale, fluid_scale * max(abs(kin.theta), 1.0))

    if inputs.xi is not None:
        sym = matter.symmetry_check(inputs.xi, spec, mv, cb, T=T, covT=covT)
        xi_scale = max(float(np.max(np.abs(sym.lie_g))),
                       float(np.max(np.abs(mv.g))))
        rec.killing = sym.killing_residual / xi_scale
        rec.conformal = sym.conformal_residual / xi_scale
        rec.Omega = sym.Omega
        rec.inheritance = (sym.inheritance_residual
                           / max(float(np.max(np.abs(T))), xi_scale))

    if inputs.faraday is not None:
        T_em, em_trace = matter.em_stress_energy(inputs.faraday, spec, mv)
        em_scale = float(np.max(np.abs(T_em)))
        rec.em_trace = _rel(em_trace, em_scale)
        # coupling fixed by matching the largest-|T| component
        idx = np.unravel_index(np.argmax(np.abs(T_em)), T_em.shape)
        if abs(T_em[idx]) > RESIDUAL_FLOOR:
            k_fit = float(cb.Ricci[idx] / T_em[idx])
            rec.em_coupling = k_fit
            rec.em_einstein = _rel(cb.Ricci - k_fit * T_em,
                                   ricci_scale, abs(k_fit) * em_scale)
        # divergence relation for an electromagnetic source, audit only:
        # div W = k (nabla_d T_bc - (2/3) nabla_c T_bd) with nabla T from the
        # field equations
        if rec.em_coupling is not None:
            covT_em = cb.covRicci / rec.em_coupling
            em_form = rec.em_coupling * (
                np.einsum("dbc->bcd", covT_em)
                - (2.0 / 3.0) * np.einsum("cbd->bcd", covT_em))
            rec.audit["em_divergence_relation"] = _rel(
                wb.divW - em_form, covW_scale, rs)

    return rec


# ---------------------------------------------------------------------------
# aggregation

def _aggregate(name: str, values: list[tuple[tuple, float | None]],
               tol: float) -> FlagRecord:
    pts = [(p, v) for p, v in values if v is not None]
    if not pts:
        return FlagRecord(name, "not-applicable", None, None)
    worst_point, worst = max(pts, key=lambda pv: pv[1])
    return FlagRecord(name, "holds" if worst < tol else "fails",
                      worst_point, worst)


def classify(spec: MetricSpec, grid, inputs: Inputs | None = None,
             tol: float = 1e-9) -> tuple[ClassificationReport, list[PointRecord]]:
    inputs = inputs or Inputs()
    records = [evaluate_point(spec, p, inputs) for p in grid]
    flags = []
    for name in FLAG_NAMES:
        if name == "mu_minus_3p_constant":
            flags.append(_constancy_flag(name, records, tol=tol))
            continue
        flags.append(_aggregate(
            name, [(r.point, getattr(r, name)) for r in records], tol))
    return ClassificationReport(flags=tuple(flags), tolerance=tol), records


def _constancy_flag(name: str, records: list[PointRecord],
                    tol: float = 1e-9) -> FlagRecord:
    vals = [(r.point, r.mu - 3.0 * r.p) for r in records if r.mu is not None]
    if not vals:
        return FlagRecord(name, "not-applicable", None, None)
    nums = [v for _, v in vals]
    spread = (max(nums) - min(nums)) / (1.0 + max(abs(v) for v in nums))
    worst_point = max(vals, key=lambda pv: abs(pv[1] - nums[0]))[0]
    return FlagRecord(name, "holds" if spread < tol else "fails",
                      worst_point, spread)


# ---------------------------------------------------------------------------
# claim verification

CLAIMS = {
    "codazzi_iff_bianchi_like":
        "Ricci of Codazzi type iff the cyclic first-slot sum of nabla W vanishes",
    "w_flat_implies_einstein":
        "a W-flat spacetime is an Einstein space with constant scalar curvature",
    "killing_iff_matter_symmetry":
        "on a W-flat spacetime, xi is Killing iff the Lie derivative of T vanishes",
    "conformal_iff_inheritance":
        "on a W-flat spacetime, xi is conformal Killing iff T inherits the symmetry",
    "w_flat_fluid_vacuum_eos":
        "a W-flat perfect-fluid spacetime obeys the vacuum-like equation of state",
    "codazzi_T_implies_conserved_ricci":
        "Codazzi stress-energy forces a divergence-free Ricci tensor",
    "codazzi_iff_harmonic":
        "Ricci of Codazzi type iff the Riemann divergence vanishes",
    "harmonic_divfree_w_implies_parallel_ricci":
        "harmonic curvature plus divergence-free W forces parallel Ricci",
    "divfree_w_parallel_ricci_implies_constant_curvature":
        "divergence-free W plus parallel Ricci forces constant curvature",
    "em_divfree_w_iff_parallel_T":
        "for an electromagnetic source, W is conserved iff T is parallel",
    "divfree_w_codazzi_T_implies_mu_minus_3p_const":
        "divergence-free W with Codazzi T makes mu - 3p constant",
    "divfree_w_implies_constant_mu_p":
        "divergence-free W makes pressure and density constant (audited)",
    "divfree_w_spatial_const_or_expansion_free":
        "divergence-free W: spatially constant mu, p or expansion-free flow (audited)",
    "divfree_w_fluid_dichotomy":
        "conserved W perfect fluid: vacuum-like state or FRW with mu - 3p constant",
    "radiative_case":
        "divergence-free W with Codazzi T and zero constant gives mu = 3p",
}


def _biconditional(claim: str, records, left, right, tol,
                   audit=None) -> ClaimVerdict:
    for r in records:
        lv, rv = left(r), right(r)
        if lv is None or rv is None:
            return ClaimVerdict(claim, CLAIMS[claim], "vacuous", False, False,
                                audit=audit or {})
        if (lv < tol) != (rv < tol):
            return ClaimVerdict(claim, CLAIMS[claim], "violated", True, False,
                                counterexample=r.point, audit=audit or {})
    return ClaimVerdict(claim, CLAIMS[claim], "confirmed", True, True,
                        audit=audit or {})


def _implication(claim: str, records, hyp, concl, tol,
                 audit=None) -> ClaimVerdict:
    hyp_points = []
    for r in records:
        h = hyp(r)
        if h is None:
            continue
        if h:
            hyp_points.append(r)
    if not hyp_points:
        return ClaimVerdict(claim, CLAIMS[claim], "vacuous", False, False,
                            audit=audit or {})
    for r in hyp_points:
        c = concl(r)
        if c is None or not c:
            return ClaimVerdict(claim, CLAIMS[claim], "violated", True, False,
                                counterexample=r.point, audit=audit or {})
    return ClaimVerdict(claim, CLAIMS[claim], "confirmed", True, True,
                        audit=audit or {})


def verify_claims(report: ClassificationReport,
                  records: list[PointRecord]) -> list[ClaimVerdict]:
    tol = report.tolerance
    out = []

    out.append(_biconditional(
        "codazzi_iff_bianchi_like", records,
        lambda r: r.codazzi_ricci, lambda r: r.bianchi_like_W, tol))

    out.append(_implication(
        "w_flat_implies_einstein", records,
        lambda r: r.w_flat < tol,
        lambda r: r.einstein < tol and r.constant_scalar_curvature < tol, tol))

    w_flat_all = report.holds("w_flat")

    def _sym_bicond(claim, left_attr):
        if not w_flat_all or any(getattr(r, left_attr) is None for r in records):
            return ClaimVerdict(claim, CLAIMS[claim], "vacuous", False, False)
        return _biconditional(claim, records,
                              lambda r: getattr(r, left_attr),
                              lambda r: r.inheritance, tol)

    out.append(_sym_bicond("killing_iff_matter_symmetry", "killing"))
    out.append(_sym_bicond("conformal_iff_inheritance", "conformal"))

    out.append(_implication(
        "w_flat_fluid_vacuum_eos", records,
        lambda r: None if r.vacuum_like_eos is None else r.w_flat < tol,
        lambda r: r.vacuum_like_eos < tol, tol))

    out.append(_implication(
        "codazzi_T_implies_conserved_ricci", records,
        lambda r: None if r.codazzi_T is None else r.codazzi_T < tol,
        lambda r: r.ricci_conservation < tol, tol))

    out.append(_biconditional(
        "codazzi_iff_harmonic", records,
        lambda r: r.codazzi_ricci, lambda r: r.harmonic_curvature, tol))

    out.append(_implication(
        "harmonic_divfree_w_implies_parallel_ricci", records,
        lambda r: r.harmonic_curvature < tol and r.divergence_free_W < tol,
        lambda r: r.codazzi_ricci < tol and r.constant_scalar_curvature < tol,
        tol))

    out.append(_implication(
        "divfree_w_parallel_ricci_implies_constant_curvature", records,
        lambda r: (r.divergence_free_W < tol and r.codazzi_ricci < tol
                   and r.constant_scalar_curvature < tol),
        lambda r: r.constant_curvature_form < tol, tol))

    em_applicable = all(r.em_einstein is not None for r in records) and records
    if em_applicable and all(r.em_einstein < tol for r in records):
        out.append(_biconditional(
            "em_divfree_w_iff_parallel_T", records,
            lambda r: r.divergence_free_W, lambda r: r.codazzi_ricci, tol,
            audit={"em_divergence_relation": max(
                r.audit.get("em_divergence_relation", 0.0) for r in records)}))
    else:
        out.append(ClaimVerdict("em_divfree_w_iff_parallel_T",
                                CLAIMS["em_divfree_w_iff_parallel_T"],
                                "vacuous", False, False))

    divfree_all = report.holds("divergence_free_W")
    fluid_present = any(r.mu is not None for r in records)

    def _grid_claim(claim, hypothesis, conclusion, audit=None):
        if not hypothesis:
            return ClaimVerdict(claim, CLAIMS[claim], "vacuous", False, False,
                                audit=audit or {})
        status = "confirmed" if conclusion else "violated"
        return ClaimVerdict(claim, CLAIMS[claim], status, True, conclusion,
                            audit=audit or {})

    codazzi_T_all = report.holds("codazzi_T")
    out.append(_grid_claim(
        "divfree_w_codazzi_T_implies_mu_minus_3p_const",
        divfree_all and codazzi_T_all and fluid_present,
        report.flag("mu_minus_3p_constant").verdict == "holds"))

    grad_audit = {"density_gradient_relation": max(
        (r.audit.get("density_gradient_relation", 0.0) for r in records),
        default=0.0)}
    out.append(_grid_claim(
        "divfree_w_implies_constant_mu_p",
        divfree_all and fluid_present
        and report.flag("spatial_constancy").verdict != "not-applicable",
        report.holds("spatial_constancy")
        and report.flag("mu_minus_3p_constant").verdict == "holds",
        audit=grad_audit))

    press_audit = {"pressure_gradient_relation": max(
        (r.audit.get("pressure_gradient_relation", 0.0) for r in records),
        default=0.0)}
    expansion_free = all(
        r.theta is not None and abs(r.theta) < tol * max(1.0, r.riemann_scale)
        for r in records) if fluid_present else False
    out.append(_grid_claim(
        "divfree_w_spatial_const_or_expansion_free",
        divfree_all and fluid_present
        and report.flag("spatial_constancy").verdict != "not-applicable",
        report.holds("spatial_constancy") or expansion_free,
        audit=press_audit))

    out.append(frw_assessment(report, records))

    out.append(_grid_claim(
        "radiative_case",
        divfree_all and codazzi_T_all and fluid_present,
        report.holds("radiative"),
        audit={"note": "tests mu = 3p directly; the integration constant "
                       "is not inferred"}))

    return out


def frw_assessment(report: ClassificationReport,
                   records: list[PointRecord]) -> ClaimVerdict:
    """Dichotomy for a perfect fluid with conserved W: either the
    vacuum-like state mu + p = 0 everywhere, or the FRW conditions
    (vanishing shear/vorticity/acceleration, spatial constancy, mu - 3p
    constant across the grid)."""
    claim = "divfree_w_fluid_dichotomy"
    fluid_present = any(r.mu is not None for r in records)
    if not (report.holds("divergence_free_W") and fluid_present):
        return ClaimVerdict(claim, CLAIMS[claim], "vacuous", False, False)
    tol = report.tolerance
    vacuum_branch = all(r.vacuum_like_eos < tol for r in records)
    frw_branch = (report.holds("frw_kinematics")
                  and report.flag("spatial_constancy").verdict == "holds"
                  and report.flag("mu_minus_3p_constant").verdict == "holds")
    branch = ("vacuum-like" if vacuum_branch
              else "frw" if frw_branch else "neither")
    status = "confirmed" if branch != "neither" else "violated"
    return ClaimVerdict(claim, CLAIMS[claim], status, True,
                        branch != "neither", audit={"branch": branch})
