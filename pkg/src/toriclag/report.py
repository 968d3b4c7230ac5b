"""Run the checks on a cone-spec document in dependency order and collect a report."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Any, Callable, Iterable, Optional

import numpy as np

from toriclag import cone as cn
from toriclag import flat_oracle as fo
from toriclag import profiles as pr
from toriclag import shrinker as sh
from toriclag.io import ConeSpecDocument, encode_rational
from toriclag.slice import SliceSpec, check_assumptions, compute_slice, default_slice
from toriclag.topology import build_glued_surface, summarize

PASS, FAIL, SKIP = "pass", "fail", "skip"


@dataclass(frozen=True)
class Tolerances:
    slag_drift: float = 1e-12
    slag_angle: float = 1e-10
    ode_error: float = 1e-9
    ode_consistency: float = 1e-6
    omega: float = 1e-9
    detector_min: float = 1e-3
    slag_mean_curvature: float = 1e-4
    shrinker_residual: float = 1e-3
    lambda_relative: float = 1e-3
    angle: float = 1e-6

    def uniform(self, tol: float) -> "Tolerances":
        """Every pass threshold set to ``tol``; the detector floor is kept."""
        return Tolerances(*([tol] * 5), self.detector_min, *([tol] * 4))


@dataclass(frozen=True)
class PipelineConfig:
    tol: Tolerances = field(default_factory=Tolerances)
    ode_step: float = 1e-3
    fd_step: float = 1e-4
    omega_step: float = 1e-5
    oracle_samples: int = 50
    slag_samples: int = 1000
    seed: int = 0


@dataclass
class CheckRecord:
    name: str
    status: str
    detail: str = ""
    values: dict = field(default_factory=dict)
    tolerances: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"name": self.name, "status": self.status, "detail": self.detail,
                "values": _jsonable(self.values), "tolerances": _jsonable(self.tolerances)}


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, Fraction):
        return encode_rational(x)
    if isinstance(x, (np.floating, np.integer)):
        return x.item()
    if isinstance(x, float) and not math.isfinite(x):
        return repr(x)
    return x


@dataclass
class Report:
    records: list[CheckRecord] = field(default_factory=list)
    context: dict = field(default_factory=dict, repr=False)

    def get(self, name: str) -> CheckRecord:
        for r in self.records:
            if r.name == name:
                return r
        raise KeyError(name)

    def __contains__(self, name):
        return any(r.name == name for r in self.records)

    @property
    def ok(self) -> bool:
        return all(r.status != FAIL for r in self.records)

    def counts(self) -> dict:
        out = {PASS: 0, FAIL: 0, SKIP: 0}
        for r in self.records:
            out[r.status] += 1
        return out

    def to_dict(self) -> dict:
        return {"checks": [r.to_dict() for r in self.records], "summary": self.counts()}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=False) + "\n"

    def to_text(self) -> str:
        lines = []
        for r in self.records:
            d = r.to_dict()
            lines.append(f"[{r.status.upper()}] {r.name}: {r.detail}".rstrip())
            for k, v in d["values"].items():
                lines.append(f"    {k} = {json.dumps(v)}")
            for k, v in d["tolerances"].items():
                lines.append(f"    tol {k} = {json.dumps(v)}")
        c = self.counts()
        lines.append(f"summary: {c[PASS]} pass, {c[FAIL]} fail, {c[SKIP]} skip")
        return "\n".join(lines) + "\n"


class Skip(Exception):
    pass


# -- individual checks ----------------------------------------------------------
# Each check receives (doc, ctx, cfg) and returns (status, detail, values, tolerances).
# ctx carries objects built by earlier checks.

def _check_validity(doc, ctx, cfg):
    cone = doc.cone()
    ctx["cone"] = cone
    sc = cn.is_strongly_convex(cone)
    if not sc:
        return FAIL, "cone is not strongly convex", {"d": cone.d}, {}
    return PASS, f"{cone.d} facets in dimension {cone.dim}", {"d": cone.d, "dim": cone.dim}, {}


def _check_goodness(doc, ctx, cfg):
    cone = ctx["cone"]
    if cone.dim > 3:
        raise Skip("face enumeration is implemented for m <= 3")
    res = cn.is_good(cone)
    values = {"good": res.good, "shortcut_good": res.shortcut}
    if res.good:
        return PASS, res.reason, values, {}
    values.update({"witness": res.witness, "divisors": res.divisors})
    return FAIL, res.reason, values, {}


def _check_calabi_yau(doc, ctx, cfg):
    cy = cn.calabi_yau_gamma(ctx["cone"])
    if not cy.exists:
        return FAIL, "no integral gamma with <gamma, lambda_i> = 1", {"exists": False}, {}
    ctx["gamma"] = cy.gamma
    values = {"exists": True, "gamma": cy.gamma}
    if doc.gamma is not None and tuple(doc.gamma) != cy.gamma:
        values["declared"] = doc.gamma
        return FAIL, "declared gamma does not solve <gamma, lambda_i> = 1", values, {}
    return PASS, "gamma found", values, {}


def _check_reeb(doc, ctx, cfg):
    cone = ctx["cone"]
    xi = doc.reeb if doc.reeb is not None else cn.conormal_sum(cone)
    ctx["xi"] = xi
    try:
        ok = cn.reeb_admissible(cone, xi)
    except NotImplementedError as exc:
        raise Skip(str(exc)) from exc
    values = {"xi": xi, "source": "declared" if doc.reeb is not None else "conormal sum"}
    return (PASS, "xi pairs positively with every extreme ray", values, {}) if ok else \
        (FAIL, "xi is not in the interior of the dual cone", values, {})


def _slice_spec(doc, ctx) -> SliceSpec:
    if doc.slice is not None:
        return SliceSpec(*doc.slice)
    return default_slice(ctx["gamma"], ctx["xi"])


def _check_slice_assumptions(doc, ctx, cfg):
    spec = _slice_spec(doc, ctx)
    ctx["spec"] = spec
    try:
        rep = check_assumptions(ctx["cone"], spec)
    except NotImplementedError as exc:
        raise Skip(str(exc)) from exc
    values = {"zeta": spec.zeta, "c": spec.c, "interior_hit": rep.interior_hit,
              "nondegenerate": rep.nondegenerate}
    if rep.witness is not None:
        values["interior_witness"] = rep.witness
    if rep.failing_face is not None:
        values["failing_face"] = rep.failing_face
    if rep:
        return PASS, "hyperplane meets the interior transversally", values, {}
    return FAIL, "; ".join(rep.messages), values, {}


def _check_slice(doc, ctx, cfg):
    cone, spec = ctx["cone"], ctx["spec"]
    if cone.dim != 3:
        raise Skip("slice polygons are built for m = 3")
    poly = compute_slice(cone, spec)
    ctx["slice"] = poly
    doubled = compute_slice(cone, spec.scaled(2))
    homog = doubled.vertices == poly.scaled_vertices(2)
    values = {"vertices": poly.vertices, "n_vertices": len(poly), "homogeneous": homog}
    if not homog:
        return FAIL, "doubling the level does not double the vertices", values, {}
    return PASS, f"{len(poly)}-gon", values, {}


def _check_topology(doc, ctx, cfg):
    surf = build_glued_surface(ctx["slice"], ctx["cone"])
    ctx["surface"] = surf
    s = summarize(surf)
    values = {"V": s.V, "E": s.E, "F": s.F, "chi": s.chi, "components": s.components,
              "orientable": s.orientable, "genus": s.genus}
    if s.components != 1 or not s.orientable:
        return FAIL, "glued surface is not a connected orientable surface", values, {}
    return PASS, f"closed orientable surface of genus {s.genus}", values, {}


def _angle_params(ctx) -> pr.AngleParams:
    spec = ctx["spec"]
    return pr.AngleParams.from_data(ctx["gamma"], spec.zeta, ctx["xi"], nu=(0.0,) * len(spec.zeta))


def _profile_name(doc):
    return doc.profile["name"] if doc.profile else None


def _check_slag(doc, ctx, cfg):
    name = _profile_name(doc)
    if name == "circle-shrinker":
        raise Skip("document profile is a shrinker")
    params = _angle_params(ctx)
    if not params.N > 0:
        raise Skip("needs N = <gamma, zeta> > 0")
    nu = (0.0,) * len(params.gamma)
    if name == "slag-line":
        p = doc.profile
        params = replace(params, theta0=float(p.get("theta0", 0)))
        prof = pr.make_slag_profile(params, float(p.get("C", 1)),
                                    (float(p.get("t_min", -1)), float(p.get("t_max", 1))), nu=nu)
        margin = 0.0
    else:
        prof = pr.sine_slag_profile(params.N, nu=nu)
        margin = 0.05
    ts = np.linspace(prof.interval[0] + margin, prof.interval[1] - margin, cfg.slag_samples + 2)[1:-1]
    q = np.array([pr.slag_conserved(prof, params, float(t)) for t in ts])
    drift = float(np.max(np.abs(q - q[0])))
    values = {"N": params.N_exact, "profile": prof.name, "conserved": float(q[0]), "drift": drift}
    tols = {"drift": cfg.tol.slag_drift}
    ok = drift <= cfg.tol.slag_drift
    if params.zeta_is_reeb:
        ang = max(pr.circ_dist(pr.angle_reeb_case(prof, params, float(t)), params.theta0) for t in ts)
        values["angle_deviation"] = ang
        tols["angle"] = cfg.tol.slag_angle
        ok = ok and ang <= cfg.tol.slag_angle
    return (PASS if ok else FAIL), "conserved quantity along the profile", values, tols


def _check_shrinker(doc, ctx, cfg):
    if _profile_name(doc) in ("sine-slag", "slag-line"):
        raise Skip("document profile is special Lagrangian")
    params = _angle_params(ctx)
    if not params.N > 0:
        raise Skip("needs N = <gamma, zeta> > 0")
    p = doc.profile or {}
    N = params.N
    sp = sh.ShrinkerParams(N, float(p.get("theta", 0)), float(p.get("A", -N)))
    t_end = float(p.get("t_end", 2 * math.pi))
    traj = sh.integrate(sh.circle_initial_state(N), sp, (0.0, t_end), cfg.ode_step)
    ctx["trajectory"] = traj
    values = {"N": params.N_exact, "A": sp.A, "step": traj.step, "samples": len(traj)}
    tols = {"consistency": cfg.tol.ode_consistency}
    cons = sh.consistency_residual(traj, sp)
    values["consistency_residual"] = cons
    values["angle_residual"] = sh.angle_equals_theta(traj, sp)
    ok = cons <= cfg.tol.ode_consistency
    if sp.A == -N and sp.theta == 0:
        exact = sh.circle_exact_trajectory(N, (0.0, t_end), traj.step)
        ec, et = sh.max_error_vs(traj, exact)
        values.update({"max_error_c": ec, "max_error_theta": et})
        tols["error"] = cfg.tol.ode_error
        ok = ok and max(ec, et) <= cfg.tol.ode_error
    return (PASS if ok else FAIL), "RK4 trajectory of the shrinker system", values, tols


def _flat_setup(doc, ctx, cfg):
    """Flat C^m model or Skip: standard-basis conormals, zeta = xi = (1, ..., 1)."""
    cone, spec = ctx["cone"], ctx["spec"]
    m = cone.dim
    basis = {tuple(int(i == j) for j in range(m)) for i in range(m)}
    ones = tuple(Fraction(1) for _ in range(m))
    if set(cone.conormals) != basis or cone.d != m:
        raise Skip("no supported flat reduction (conormals are not the standard basis)")
    if spec.zeta != ones or tuple(ctx["xi"]) != ones:
        raise Skip("flat model needs zeta = xi = (1, ..., 1)")
    if "flat" not in ctx:
        r2 = float(2 * spec.c)
        slag = fo.sine_slag_immersion(m, radius_sq=r2)
        shr = fo.circle_shrinker_immersion(m, radius_sq=r2)
        n = cfg.oracle_samples
        ctx["flat"] = {
            "m": m, "level": float(spec.c), "slag": slag, "shrinker": shr,
            "slag_pts": slag.sample_points(n, seed=cfg.seed),
            "shrinker_pts": shr.sample_points(n, seed=cfg.seed + 1),
        }
    return ctx["flat"]


def _check_oracle_lagrangian(doc, ctx, cfg):
    f = _flat_setup(doc, ctx, cfg)
    h = cfg.omega_step
    w1 = fo.max_pullback_omega(f["slag"], f["slag_pts"], h)
    w2 = fo.max_pullback_omega(f["shrinker"], f["shrinker_pts"], h)
    drift = (0.5,) + (0.0,) * (f["m"] - 1)
    det = fo.FlatImmersion.from_profile(f["shrinker"].profile, f["shrinker"].radius_sq, nu_drift=drift)
    w3 = fo.max_pullback_omega(det, f["shrinker_pts"], h)
    t = cfg.tol
    ok = w1 <= t.omega and w2 <= t.omega and w3 > t.detector_min
    values = {"omega_slag": w1, "omega_shrinker": w2, "omega_detector": w3, "step": h}
    return (PASS if ok else FAIL), "pullback of the symplectic form", values, \
        {"omega": t.omega, "detector_min": t.detector_min}


def _check_oracle_minimal(doc, ctx, cfg):
    f = _flat_setup(doc, ctx, cfg)
    rep = fo.check_self_shrinker(f["slag"], f["slag_pts"], lam=0.0, h=cfg.fd_step)
    ok = rep.max_abs_H <= cfg.tol.slag_mean_curvature
    return (PASS if ok else FAIL), "special Lagrangian is minimal", \
        {"max_abs_H": rep.max_abs_H, "fitted_lambda": rep.fitted_lambda, "step": cfg.fd_step}, \
        {"mean_curvature": cfg.tol.slag_mean_curvature}


def _check_oracle_shrinker(doc, ctx, cfg):
    f = _flat_setup(doc, ctx, cfg)
    A = -float(f["m"])
    rep = fo.check_self_shrinker(f["shrinker"], f["shrinker_pts"], A=A, level=f["level"], h=cfg.fd_step)
    t = cfg.tol
    ok = rep.max_residual <= t.shrinker_residual and rep.relative_lambda_error <= t.lambda_relative
    values = {"A": A, "level": f["level"], "predicted_lambda": rep.predicted_lambda,
              "fitted_lambda": rep.fitted_lambda, "lambda_if_level_is_radius_sq": rep.lambda_literal,
              "max_residual": rep.max_residual, "relative_lambda_error": rep.relative_lambda_error}
    return (PASS if ok else FAIL), "H = lambda F_perp with lambda = A / (2 level)", values, \
        {"residual": t.shrinker_residual, "lambda_relative": t.lambda_relative}


def _check_oracle_angle(doc, ctx, cfg):
    f = _flat_setup(doc, ctx, cfg)
    d1 = fo.angle_full_formula_check(f["slag"], f["slag_pts"], cfg.fd_step)
    d2 = fo.angle_full_formula_check(f["shrinker"], f["shrinker_pts"], cfg.fd_step)
    ok = max(d1, d2) <= cfg.tol.angle
    return (PASS if ok else FAIL), "closed-form angle against arg of the pulled-back volume form", \
        {"discrepancy_slag": d1, "discrepancy_shrinker": d2}, {"angle": cfg.tol.angle}


# name -> (function, dependency resolver)
def _slice_deps(doc):
    return ["reeb"] if doc.slice is not None else ["reeb", "calabi_yau"]


CHECKS: list[tuple[str, Callable, Callable[[ConeSpecDocument], list]]] = [
    ("validity", _check_validity, lambda d: []),
    ("goodness", _check_goodness, lambda d: ["validity"]),
    ("calabi_yau", _check_calabi_yau, lambda d: ["validity"]),
    ("reeb", _check_reeb, lambda d: ["validity"]),
    ("slice_assumptions", _check_slice_assumptions, _slice_deps),
    ("slice", _check_slice, lambda d: ["slice_assumptions"]),
    ("topology", _check_topology, lambda d: ["slice"]),
    ("slag", _check_slag, lambda d: ["calabi_yau", "slice_assumptions"]),
    ("shrinker", _check_shrinker, lambda d: ["calabi_yau", "slice_assumptions"]),
    ("oracle_lagrangian", _check_oracle_lagrangian, lambda d: ["slice_assumptions"]),
    ("oracle_minimal", _check_oracle_minimal, lambda d: ["slice_assumptions"]),
    ("oracle_shrinker", _check_oracle_shrinker, lambda d: ["slice_assumptions"]),
    ("oracle_angle", _check_oracle_angle, lambda d: ["slice_assumptions"]),
]
CHECK_NAMES = tuple(n for n, _, _ in CHECKS)

GROUPS = {
    "check": ("validity", "goodness", "calabi_yau", "reeb"),
    "slice": ("slice_assumptions", "slice"),
    "topology": ("topology",),
    "slag": ("slag",),
    "shrinker": ("shrinker",),
    "oracle": ("oracle_lagrangian", "oracle_minimal", "oracle_shrinker", "oracle_angle"),
}


def _closure(doc, which: Iterable[str]) -> set:
    table = {n: deps for n, _, deps in CHECKS}
    todo, out = list(which), set()
    while todo:
        n = todo.pop()
        if n not in table:
            raise KeyError(f"unknown check {n!r}")
        if n not in out:
            out.add(n)
            todo.extend(table[n](doc))
    return out


def run_pipeline(doc: ConeSpecDocument, which: Optional[Iterable[str]] = None,
                 config: Optional[PipelineConfig] = None) -> Report:
    """Run the requested checks plus everything they depend on.

    A check whose dependency did not pass is recorded as skipped. Exceptions
    raised inside a check are recorded as failures.
    """
    cfg = config or PipelineConfig()
    selected = _closure(doc, CHECK_NAMES if which is None else which)
    report = Report()
    status = {}
    for name, fn, deps in CHECKS:
        if name not in selected:
            continue
        blocked = [d for d in deps(doc) if status.get(d) != PASS]
        if blocked:
            rec = CheckRecord(name, SKIP, f"dependency not satisfied: {', '.join(blocked)}")
        else:
            try:
                st, detail, values, tols = fn(doc, report.context, cfg)
                rec = CheckRecord(name, st, detail, values, tols)
            except Skip as exc:
                rec = CheckRecord(name, SKIP, str(exc))
            except Exception as exc:  # a failing check must never abort the run
                rec = CheckRecord(name, FAIL, f"{type(exc).__name__}: {exc}")
        status[name] = rec.status
        report.records.append(rec)
    return report
