#!/usr/bin/env python3
"""
Command handling functionality for feffcheck.

Every subcommand reads the resolved configuration, runs one scenario,
writes `<out>/<subcommand>.json` plus CSV curve tables and prints a
human summary. Exit codes: 2 for configuration errors, 1 when a run is
flagged Inconclusive, 0 otherwise.
"""
import argparse
import logging
import math
import sys
import warnings
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional

import numpy as np

from ..config.constants import (DEFAULT_OUTPUT_DIR, EXIT_CONFIG_ERROR, EXIT_INCONCLUSIVE, EXIT_OK,
                                SUBCOMMANDS, VERSION)
from ..config.settings import refine_config, resolve_config
from ..core.counterexample import run_counterexample
from ..core.errors import (ConfigError, DimensionMismatch, FeffcheckError, NormInconclusive,
                           ParameterOutOfRange, TailBoundDominates, ZeroDenominator)
from ..core.fields import Ball, Linear, ScalarField, build_field, dilate, field_params
from ..core.growth import (CONDITION_GRID, ConditionId, GrowthFunction, check_condition,
                           default_candidates, morrey_norm, radius_grid)
from ..core.inequalities import (build_catalog, catalog_max, catalog_support, default_pairs,
                                 fefferman_morrey, fefferman_oscillation, fefferman_stummel,
                                 kernel_lemma_check, riesz_bound_check, subrepresentation_check,
                                 translated_pair)
from ..core.maximal_bmo import (MaximalSettings, SubballSampler, bmo_seminorm, check_A1,
                                check_maximal_morrey_bound, doubling_ratio, maximal_on_lattice,
                                maximal_on_ray, mean_oscillation, vanishing_order)
from ..core.quadrature import QuadratureSettings
from ..core.stummel import (Membership, StummelSettings, classify, inclusion_cross_check,
                            off_center_probe, stummel_modulus)
from ..ui.display import (Colors, print_banner, print_error, print_summary, print_warning,
                          status, table_lines)
from ..utils.reports import write_curves, write_report

logger = logging.getLogger(__name__)

FEFFERMAN_FORMS = ("morrey", "stummel", "oscillation", "all")

# Field used by each single-field subcommand unless --field is given
DEFAULT_FIELDS = {
    "morrey-norm": "V",
    "stummel": "W",
    "maximal": "f",
    "bmo": "g",
    "riesz-bound": "V",
    "subrep": "u",
    "vanishing": "w",
}


@dataclass
class RunContext:
    """Resolved configuration plus the objects every subcommand needs."""
    config: Dict[str, Any]
    field_name: Optional[str] = None
    form: str = "all"

    def __post_init__(self):
        self.n = int(self.config["dimension"])
        self.alpha = float(self.config["alpha"])
        self.p = float(self.config["p"])
        self.seed = int(self.config["seed"])
        self.refine = int(self.config["grid_refine"])
        self.params = field_params(self.n, self.alpha, self.p)
        self.settings = QuadratureSettings.from_config(self.config["quadrature"])

    def field(self, name: str) -> ScalarField:
        return build_field(self.config["fields"][name], self.n, self.params)

    def phi(self) -> GrowthFunction:
        return GrowthFunction.from_record(self.config["growth"]["phi"], self.params)

    def ball(self, record: Dict[str, Any], key: str) -> Ball:
        center = record.get("center") or (0.0,) * self.n
        try:
            return Ball(center, float(record.get("radius", 1.0)))
        except (DimensionMismatch, ParameterOutOfRange) as e:
            raise ConfigError(key, str(e))

    def e1(self) -> np.ndarray:
        out = np.zeros(self.n)
        out[0] = 1.0
        return out

    def growth_grid(self, config: Optional[Dict[str, Any]] = None) -> np.ndarray:
        g = (config or self.config)["growth"]
        return radius_grid(float(g["r_min"]), float(g["r_max"]), int(g["r_count"]))

    def refined(self) -> "RunContext":
        return RunContext(refine_config(self.config, self.refine), self.field_name, self.form)


@dataclass
class Outcome:
    report: Dict[str, Any]
    curves: Dict[str, List[Dict[str, Any]]] = field(default_factory=dict)
    lines: List[tuple] = field(default_factory=list)
    inconclusive: bool = False


def _stable(a: float, b: float, tolerance: float = 0.10) -> bool:
    return bool(math.isfinite(a) and math.isfinite(b) and abs(b - a) <= tolerance * abs(a))


def _row(r: float, value: float, divergent: bool = False, error: float = 0.0) -> Dict[str, Any]:
    return {"r": r, "value": value, "divergent_flag": divergent, "error_estimate": error}


# -- subcommands -------------------------------------------------------------------------------

def _morrey_norm(ctx: RunContext) -> Outcome:
    f = ctx.field(ctx.field_name)
    phi = ctx.phi()
    candidates = default_candidates(f, ctx.config["growth"].get("x_candidates") or ())
    try:
        result = morrey_norm(f, ctx.p, phi, candidates, ctx.growth_grid(), None, ctx.settings)
    except NormInconclusive as e:
        return Outcome({"field": ctx.field_name, "error": str(e)},
                       lines=[("norm", "inconclusive", "inconclusive")], inconclusive=True)
    report = {"field": ctx.field_name, "phi": phi.describe(), "p": ctx.p, "norm": result.to_dict()}
    lines = [
        ("norm", result.norm, "fail" if result.infinite else "pass"),
        ("witness center", list(result.witness_center), "info"),
        ("witness radius", result.witness_radius, "info"),
        ("large-r slope", result.large_r_slope, "info"),
        ("small-r slope", result.small_r_slope, "info"),
    ]
    if ctx.refine > 1:
        fine = ctx.refined()
        refined = morrey_norm(f, ctx.p, phi, candidates, fine.growth_grid(), None, fine.settings)
        stable = result.infinite == refined.infinite and (result.infinite or _stable(result.value, refined.value))
        report["refined_norm"] = refined.norm
        report["stable"] = stable
        lines.append(("refinement stable", stable, status(stable)))
    curve = [_row(a.radius, a.value, a.divergent, a.error_estimate)
             for a in result.curve(result.witness_center)]
    return Outcome(report, {"morrey_local_average": curve}, lines, result.inconclusive_cells > 0)


def _stummel(ctx: RunContext) -> Outcome:
    V = ctx.field(ctx.field_name)
    stummel_settings = StummelSettings.from_config(ctx.config["stummel"])
    result = classify(V, ctx.alpha, ctx.p, None, None, None, ctx.settings, stummel_settings)
    curve = result.curve
    report = {"field": ctx.field_name, "classification": result.to_dict(), "curve": curve.to_dict()}
    if V.poles:
        report["off_center_probe"] = off_center_probe(V, ctx.alpha, ctx.p, stummel_settings.r_max,
                                                      settings=ctx.settings)
    if 1 <= ctx.alpha <= 2:
        report["inclusion"] = inclusion_cross_check(V, ctx.alpha, ctx.p, None, ctx.settings,
                                                    stummel_settings)
    last = curve.samples[-1]
    lines = [
        ("membership", result.membership.value,
         status(None, result.membership == Membership.INCONCLUSIVE)),
        ("reason", result.reason, "info"),
        (f"eta({last.radius:g})", math.inf if last.divergent else last.value, "info"),
        ("small-r slope", curve.small_r_slope, "info"),
        ("doubling constant", curve.doubling_constant, "info"),
    ]
    rows = [_row(s.radius, s.value, s.divergent, s.error_estimate) for s in curve.samples]
    return Outcome(report, {"stummel_modulus": rows}, lines,
                   result.membership == Membership.INCONCLUSIVE)


def _check_phi(ctx: RunContext) -> Outcome:
    phi = ctx.phi()
    reports, lines = [], []
    for condition in ConditionId:
        try:
            rep = check_condition(phi, condition, ctx.n, ctx.p, ctx.alpha)
        except ParameterOutOfRange as e:
            reports.append({"condition": condition.value, "skipped": str(e)})
            lines.append((condition.value, "skipped", "info"))
            continue
        reports.append(rep.to_dict())
        lines.append((condition.value, f"K={rep.constant:.6g}", status(rep.holds)))
    t = radius_grid(*CONDITION_GRID)
    curve = [_row(float(r), float(v)) for r, v in zip(t, phi(t))]
    return Outcome({"phi": phi.describe(), "conditions": reports}, {"phi": curve}, lines)


def _maximal(ctx: RunContext) -> Outcome:
    f = ctx.field(ctx.field_name)
    section = ctx.config["maximal"]
    ms = MaximalSettings.from_config(section)
    if f.radial_center is not None and not f.is_constant:
        mf = maximal_on_ray(f, ms.ray(), ms.r_search(), None, ctx.settings)
    else:
        mf = maximal_on_lattice(f, [-2.0] * ctx.n, [2.0] * ctx.n, ms.lattice_resolution,
                                ms.r_search(), None, ctx.settings)
    dominates = bool(np.all(mf.dominates_base))
    a1 = check_A1(f, float(section["gamma"]), None, section["construction"], ms, True, None, ctx.settings)
    report = {"field": ctx.field_name, "maximal": mf.to_dict(), "dominates_base": dominates,
              "a1": a1.to_dict()}
    lines = [
        ("M(f) >= |f|", dominates, status(dominates)),
        (f"A1 constant ({a1.construction})", a1.constant, status(a1.stable)),
    ]
    try:
        bound = check_maximal_morrey_bound(ctx.field("V"), ctx.p, ctx.phi(), ms, ctx.growth_grid(),
                                           ctx.refine > 1, None, ctx.settings)
        report["morrey_bound"] = bound.to_dict()
        lines.append(("||MV|| / ||V||", bound.ratio, status(not bound.infinite and bound.stable is not False)))
    except ParameterOutOfRange as e:
        report["morrey_bound"] = {"skipped": str(e)}
        lines.append(("||MV|| / ||V||", "skipped", "info"))
    center = np.asarray(f.radial_center if f.radial_center is not None else (0.0,) * ctx.n)
    distances = np.linalg.norm(mf.points - center, axis=1)
    order = np.argsort(distances, kind="stable")
    curve = [_row(float(distances[i]), float(mf.values[i]), bool(np.isinf(mf.values[i])))
             for i in order]
    return Outcome(report, {"maximal": curve}, lines, mf.inconclusive > 0)


def _bmo(ctx: RunContext) -> Outcome:
    g = ctx.field(ctx.field_name)
    section = ctx.config["bmo"]
    ball = ctx.ball(section.get("ball") or {}, "bmo.ball")
    sampler = SubballSampler.from_config(section)
    alpha = float(section.get("alpha", 1.0))
    result = bmo_seminorm(g, ball, alpha, sampler, None, ctx.settings)
    report = {"field": ctx.field_name, "bmo": result.to_dict()}
    lines = [(f"BMO_{alpha:g} seminorm", result.value, status(None, result.inconclusive > 0)),
             ("witness", result.witness.to_dict(), "info"),
             ("sub-balls", result.subballs, "info")]
    if ctx.refine > 1:
        fine = ctx.refined()
        refined = bmo_seminorm(g, ball, alpha, SubballSampler.from_config(fine.config["bmo"]),
                               None, fine.settings)
        stable = _stable(result.value, refined.value)
        report["refined_value"] = refined.value
        report["stable"] = stable
        lines.append(("refinement stable", stable, status(stable)))
    curve = []
    for r in np.geomspace(sampler.smallest * ball.radius, ball.radius, sampler.radii):
        value, _ = mean_oscillation(g, Ball(ball.center, float(r)), alpha, None, ctx.settings)
        curve.append(_row(float(r), value))
    return Outcome(report, {"bmo_centered_oscillation": curve}, lines, result.inconclusive > 0)


def _fefferman(ctx: RunContext) -> Outcome:
    section = ctx.config["inequalities"]
    forms = ("morrey", "stummel", "oscillation") if ctx.form == "all" else (ctx.form,)
    u = ctx.field("u")
    report: Dict[str, Any] = {"forms": list(forms)}
    lines, curves, inconclusive = [], {}, False
    catalog = build_catalog(ctx.n, **section["catalog"])
    refine = ctx.refine if ctx.refine > 1 else None

    if "morrey" in forms:
        V, phi = ctx.field("V"), ctx.phi()
        estimate = morrey_norm(V, ctx.p, phi, None, ctx.growth_grid(), None, ctx.settings)
        if estimate.infinite:
            raise ParameterOutOfRange("the Morrey norm of V is infinite")
        norm = estimate.value
        base = fefferman_morrey(u, V, ctx.alpha, ctx.p, phi, norm, True, None, ctx.settings)
        family = [fefferman_morrey(dilate(u, t), V, ctx.alpha, ctx.p, phi, norm, False, None, ctx.settings)
                  for t in section["dilations"]]
        ratios = [r.ratio for r in family]
        spread = (max(ratios) - min(ratios)) / max(ratios) if max(ratios) > 0 else 0.0
        summary = catalog_max("fefferman_morrey", catalog,
                              lambda fld, s: fefferman_morrey(fld, V, ctx.alpha, ctx.p, phi, norm,
                                                              False, None, s),
                              ctx.settings, refine)
        report["morrey"] = {"instance": base.to_dict(), "dilations": [r.to_dict() for r in family],
                            "dilation_spread": spread, "catalog": summary.to_dict()}
        curves["fefferman_morrey_dilation"] = [_row(float(t), r.ratio, False, r.error_budget)
                                               for t, r in zip(section["dilations"], family)]
        inconclusive |= base.inconclusive or any(r.inconclusive for r in family + summary.reports)
        lines += [("morrey: ratio", base.ratio, status(math.isfinite(base.ratio))),
                  ("morrey: dilation spread", spread, status(spread <= 1e-3)),
                  ("morrey: catalog max", summary.max_ratio, status(summary.stable))]

    W = ctx.field("W")
    a2, p2 = float(section["stummel_alpha"]), float(section["stummel_p"])
    ball0 = ctx.ball(section.get("ball0") or {}, "inequalities.ball0")
    if "stummel" in forms:
        eta = stummel_modulus(W, a2, p2, ball0.radius, settings=ctx.settings)
        base = fefferman_stummel(u, W, a2, p2, ball0, None if eta.divergent else eta.value, None, ctx.settings)
        shift = float(section["translation"]) * ctx.e1()
        tu, tW, tball = translated_pair(u, W, ball0, shift)
        moved = fefferman_stummel(tu, tW, a2, p2, tball, None, None, ctx.settings)
        drift = abs(moved.ratio - base.ratio) / base.ratio if base.ratio else 0.0
        branch = fefferman_stummel(u, W, 1.0, 1.0, ball0, None, None, ctx.settings)
        support = catalog_support(catalog)
        eta_c = stummel_modulus(W, a2, p2, support.radius, settings=ctx.settings).value
        summary = catalog_max("fefferman_stummel", catalog,
                              lambda fld, s: fefferman_stummel(fld, W, a2, p2, support, eta_c, None, s),
                              ctx.settings, refine)
        report["stummel"] = {"instance": base.to_dict(), "translated": moved.to_dict(),
                             "translation_drift": drift, "alpha_one": branch.to_dict(),
                             "catalog": summary.to_dict()}
        inconclusive |= base.inconclusive or moved.inconclusive or branch.inconclusive
        lines += [("stummel: ratio", base.ratio, status(math.isfinite(base.ratio))),
                  ("stummel: translation drift", drift, status(drift <= 1e-3)),
                  ("stummel: alpha=1 ratio", branch.ratio, status(math.isfinite(branch.ratio))),
                  ("stummel: catalog max", summary.max_ratio, status(summary.stable))]

    if "oscillation" in forms:
        results = [fefferman_oscillation(u, W, a2, p2, ball0, None, None, ctx.settings),
                   fefferman_oscillation(Linear(ctx.n), W, a2, p2, ball0, None, None, ctx.settings)]
        report["oscillation"] = [r.to_dict() for r in results]
        inconclusive |= any(r.inconclusive for r in results)
        lines += [("oscillation: bump ratio", results[0].ratio, status(math.isfinite(results[0].ratio))),
                  ("oscillation: y1 ratio", results[1].ratio, status(math.isfinite(results[1].ratio)))]
    return Outcome(report, curves, lines, inconclusive)


def _kernel_lemma(ctx: RunContext) -> Outcome:
    section = ctx.config["inequalities"]
    alpha = float(section["kernel_alpha"])
    ball0 = ctx.ball(section.get("ball0") or {}, "inequalities.ball0")
    pairs = default_pairs(ball0, int(section["kernel_pairs"]), ctx.seed)
    result = kernel_lemma_check(ctx.n, alpha, ball0, pairs, None, None, ctx.settings)
    report = {"kernel_lemma": result.to_dict()}
    lines = [("empirical C", result.ratio, status(None, result.inconclusive))]
    if ctx.n == 3 and alpha == 2.0:
        ok = result.ratio <= 1.05 * math.pi ** 3
        lines.append(("below pi^3 + 5%", ok, status(ok)))
    if ctx.refine > 1:
        refined = kernel_lemma_check(ctx.n, alpha, ball0, pairs, None, None, ctx.refined().settings)
        stable = _stable(result.ratio, refined.ratio)
        report["refined_constant"] = refined.ratio
        report["stable"] = stable
        lines.append(("refinement stable", stable, status(stable)))
    values = sorted(result.witness["pairs"], key=lambda v: v["distance"])
    curve = [_row(v["distance"], v["normalized"], v["verdict"] == "Divergent") for v in values]
    return Outcome(report, {"kernel_lemma": curve}, lines, result.inconclusive)


def _riesz_bound(ctx: RunContext) -> Outcome:
    section = ctx.config["inequalities"]
    V = ctx.field(ctx.field_name)
    distances = [float(d) for d in section["riesz_distances"]]
    points = np.array([d * ctx.e1() for d in distances])
    ms = MaximalSettings.from_config(ctx.config["maximal"])
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", TailBoundDominates)
        result = riesz_bound_check(V, ctx.p, ctx.phi(), ctx.alpha, points, float(section["r_max"]),
                                   None, ms.r_search(), None, ctx.settings)
    tail_warnings = [w for w in caught if issubclass(w.category, TailBoundDominates)]
    for w in tail_warnings:
        print_warning(str(w.message))
    report = {"field": ctx.field_name, "riesz_bound": result.to_dict()}
    lines = [("empirical C", result.ratio, status(math.isfinite(result.ratio), result.inconclusive)),
             ("tail warnings", len(tail_warnings), status(not tail_warnings))]
    curve = [_row(d, pp["ratio"]) for d, pp in zip(distances, result.witness.get("per_point", []))]
    return Outcome(report, {"riesz_bound": curve}, lines, result.inconclusive)


def _subrep(ctx: RunContext) -> Outcome:
    section = ctx.config["inequalities"]
    u = ctx.field(ctx.field_name)
    ball = ctx.ball(section.get("ball0") or {}, "inequalities.ball0")
    result = subrepresentation_check(u, ball, None, int(section["subrep_points"]), ctx.seed,
                                     None, ctx.settings)
    report = {"field": ctx.field_name, "subrepresentation": result.to_dict()}
    lines = [("empirical C(n)", result.ratio, status(math.isfinite(result.ratio), result.inconclusive)),
             ("points", result.parameters["evaluated"], "info")]
    center = np.asarray(ball.center)
    rows = sorted(((float(np.linalg.norm(np.asarray(pp["x"]) - center)), pp["ratio"])
                   for pp in result.witness["per_point"]))
    return Outcome(report, {"subrepresentation": [_row(r, v) for r, v in rows]}, lines, result.inconclusive)


def _counterexample(ctx: RunContext) -> Outcome:
    if ctx.n < 3:
        raise ConfigError("dimension", "the counterexample needs n >= 3")
    result = run_counterexample(ctx.n, ctx.config["counterexample"], ctx.settings,
                                StummelSettings.from_config(ctx.config["stummel"]),
                                SubballSampler.from_config(ctx.config["bmo"]))
    residual, mass = result.residual, result.mass
    lines = [
        ("PDE residual (closed form)", residual["max_residual"], status(residual["passed"])),
        ("PDE residual (finite difference)", residual["max_fd_residual"], status(residual["passed"])),
        ("mass formula rel. error", mass["max_relative_error"], status(mass["passed"])),
        ("vanishing", result.vanishing.verdict, status("only" not in result.vanishing.verdict
                                                      and result.vanishing.verdict != "No")),
    ]
    if result.residual_high_dimension:
        high = result.residual_high_dimension
        lines.append((f"PDE residual (n={high['n']})", high["max_residual"], status(high["passed"])))
    lines += table_lines(result.classification, "alpha", "membership", "matches",
                         label_format="alpha={:g}", inconclusive_value=Membership.INCONCLUSIVE.value)
    vstar, blowup = result.vstar, result.blowup
    lines += [
        (f"V* Morrey (p={vstar['p']:g})", vstar["norm"]["value"], status(vstar["passed"])),
        ("BMO blow-up increasing", blowup["strictly_increasing"], status(blowup["strictly_increasing"])),
        ("doubling blows up", blowup["doubling_blows_up"], status(blowup["doubling_blows_up"])),
        ("lower-bound radius", result.lower_bound_radius, "info"),
    ]
    return Outcome(result.to_dict(), result.curves(), lines, result.inconclusive)


def _vanishing(ctx: RunContext) -> Outcome:
    section = ctx.config["vanishing"]
    w = ctx.field(ctx.field_name)
    x0 = w.radial_center if w.radial_center is not None else (0.0,) * ctx.n
    r_grid = np.geomspace(float(section["r_min"]), float(section["r_max"]), int(section["r_count"]))
    ks = tuple(range(1, int(section["k_max"]) + 1))
    result = vanishing_order(w, x0, r_grid, ks, float(section["threshold"]), None, ctx.settings)
    doubling, notes = [], []
    for r in section["doubling_radii"]:
        try:
            doubling.append({"r": float(r), "ratio": doubling_ratio(w, x0, float(r), float(section["beta"]),
                                                                    None, ctx.settings)})
        except ZeroDenominator as e:
            doubling.append({"r": float(r), "ratio": math.inf})
            notes.append(str(e))
    report = {"field": ctx.field_name, "vanishing": result.to_dict(), "doubling": doubling, "notes": notes}
    lines = [("verdict", result.verdict, status(result.vanishes_to_order is not None)),
             ("monotone in k", result.monotone_in_k, "info")]
    lines += [(f"doubling ratio r={d['r']:g}", d["ratio"], "info") for d in doubling]
    curves = {f"vanishing_k_{c.k:g}": [_row(float(r), float(v)) for r, v in zip(result.radii, c.values)]
              for c in result.curves}
    return Outcome(report, curves, lines)


COMMANDS: Dict[str, Callable[[RunContext], Outcome]] = {
    "morrey-norm": _morrey_norm,
    "stummel": _stummel,
    "check-phi": _check_phi,
    "maximal": _maximal,
    "bmo": _bmo,
    "fefferman": _fefferman,
    "kernel-lemma": _kernel_lemma,
    "riesz-bound": _riesz_bound,
    "subrep": _subrep,
    "counterexample": _counterexample,
    "vanishing": _vanishing,
}


# -- entry points --------------------------------------------------------------------------------

def run(subcommand: str, config_path: Optional[str] = None, output_dir: str = DEFAULT_OUTPUT_DIR,
        overrides: Optional[Dict[str, Any]] = None, field_name: Optional[str] = None,
        form: str = "all", show_banner: bool = False) -> int:
    """
    Run one subcommand and write its artifacts.

    Args:
        subcommand: One of SUBCOMMANDS
        config_path: JSON configuration file (defaults when None)
        output_dir: Directory for the JSON report and CSV curves
        overrides: Command-line values (n, alpha, p, tol, grid_refine)
        field_name: Key of the `fields` section to use instead of the default
        form: Fefferman form (morrey, stummel, oscillation or all)
        show_banner: Print the banner before running

    Returns:
        Exit code
    """
    if subcommand not in COMMANDS:
        print_error(f"unknown subcommand '{subcommand}' (known: {', '.join(SUBCOMMANDS)})")
        return EXIT_CONFIG_ERROR
    try:
        config = resolve_config(config_path, **(overrides or {}))
        name = field_name or DEFAULT_FIELDS.get(subcommand)
        if name is not None and name not in config["fields"]:
            raise ConfigError(f"fields.{name}", "no such field record")
    except ConfigError as e:
        print_error(str(e))
        return EXIT_CONFIG_ERROR

    if not config["ui"].get("color", True):
        Colors.disable()
    if show_banner and config["ui"].get("show_banner", True):
        print_banner(config["ui"].get("banner_font", "slant"))

    ctx = RunContext(config, name, form)
    logger.info("running %s (n=%d, alpha=%g, p=%g)", subcommand, ctx.n, ctx.alpha, ctx.p)
    try:
        outcome = COMMANDS[subcommand](ctx)
    except (ConfigError, ParameterOutOfRange, DimensionMismatch) as e:
        print_error(str(e))
        return EXIT_CONFIG_ERROR
    except FeffcheckError as e:
        print_error(str(e))
        return EXIT_INCONCLUSIVE

    outcome.report["inconclusive"] = outcome.inconclusive
    artifacts = [write_report(output_dir, subcommand, outcome.report, config)]
    artifacts += write_curves(output_dir, outcome.curves)
    title = f"feffcheck {subcommand} (n={ctx.n}, alpha={ctx.alpha:g}, p={ctx.p:g})"
    print_summary(title, outcome.lines, artifacts)
    if outcome.inconclusive:
        print_warning("some quadratures were inconclusive; results are flagged")
        return EXIT_INCONCLUSIVE
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    """
    Build the command-line parser.

    Returns:
        Parser with one subparser per subcommand
    """
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--config', type=str, default=None,
                        help='JSON configuration file')
    common.add_argument('--out', type=str, default=DEFAULT_OUTPUT_DIR,
                        help='Output directory for reports and curves')
    common.add_argument('--n', type=int, default=None,
                        help='Dimension')
    common.add_argument('--alpha', type=float, default=None,
                        help='Exponent alpha')
    common.add_argument('--p', type=float, default=None,
                        help='Exponent p')
    common.add_argument('--tol', type=float, default=None,
                        help='Relative quadrature tolerance')
    common.add_argument('--grid-refine', type=int, default=None,
                        help='Refinement multiplier for stability checks')
    common.add_argument('--field', type=str, default=None,
                        help='Field record to use (key of the fields section)')
    common.add_argument('-v', '--verbose', action='store_true',
                        help='Enable debug logging')
    common.add_argument('--no-color', action='store_true',
                        help='Disable colored output')
    common.add_argument('--no-banner', action='store_true',
                        help='Disable the banner display')

    parser = argparse.ArgumentParser(
        prog='feffcheck',
        description='Numerical checks for Morrey and Stummel classes and Fefferman-type inequalities.',
        epilog='Example: feffcheck counterexample --out results/'
    )
    parser.add_argument('--version', action='version', version=f'feffcheck {VERSION}')
    sub = parser.add_subparsers(dest='command', metavar='COMMAND')
    sub.required = True
    helps = {
        "morrey-norm": "Grid estimate of the generalized Morrey norm",
        "stummel": "Stummel modulus curve and class membership",
        "check-phi": "Check the growth-function conditions",
        "maximal": "Maximal function, A1 ratio and Morrey boundedness of M",
        "bmo": "BMO seminorm by sub-ball sampling",
        "fefferman": "Fefferman inequality harness",
        "kernel-lemma": "Two-pole kernel composition bound",
        "riesz-bound": "Riesz potential bound via the maximal function",
        "subrep": "Sub-representation inequality",
        "counterexample": "Unique continuation counterexample report",
        "vanishing": "Vanishing order and doubling ratios of a weight",
    }
    for command in SUBCOMMANDS:
        p = sub.add_parser(command, parents=[common], help=helps[command])
        if command == "fefferman":
            p.add_argument('--form', choices=FEFFERMAN_FORMS, default='all',
                           help='Which inequality form to check')
    return parser


def configure_logging(verbose: bool) -> None:
    logging.basicConfig(level=logging.DEBUG if verbose else logging.WARNING,
                        format='%(levelname)s %(name)s: %(message)s')


def main(argv: Optional[List[str]] = None) -> None:
    """
    Main entry point for the feffcheck application.
    """
    args = build_parser().parse_args(argv)
    configure_logging(args.verbose)
    if args.no_color or not sys.stdout.isatty():
        Colors.disable()

    overrides = {"n": args.n, "alpha": args.alpha, "p": args.p, "tol": args.tol,
                 "grid_refine": args.grid_refine}
    code = run(args.command, args.config, args.out, overrides, args.field,
               getattr(args, 'form', 'all'), show_banner=not args.no_banner and sys.stderr.isatty())
    sys.exit(code)


if __name__ == "__main__":
    main()
