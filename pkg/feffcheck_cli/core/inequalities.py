"""
Empirical harness for Fefferman-type inequalities.

Each check evaluates both sides of one inequality instance by quadrature
and reports LHS, the RHS factors and their ratio. Constants in these
inequalities are existential, so a check "passes" when ratios stay finite
across a test-function family, are invariant under the exact symmetries
and do not move under refinement.
"""
import logging
import math
import warnings
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from ..utils.parallel import ordered_map
from .errors import PairTooClose, ParameterOutOfRange, TailBoundDominates
from .fields import (AbsPower, Ball, Bump, GradientNorm, Product, ScalarField, Sphere, Sum,
                     as_point, constant, enclosing_ball, sphere_area, translate)
from .growth import GrowthFunction, check_all_conditions, morrey_norm
from .maximal_bmo import level_radii, maximal_function
from .quadrature import (DEFAULT_SETTINGS, QuadratureResult, QuadratureSettings,
                         ball_average, integrate_ball, integrate_singular_kernel, kernel)
from .stummel import stummel_modulus

logger = logging.getLogger(__name__)

R_MAX = 1e3
TAIL_SHARE = 0.10
STABILITY_TOLERANCE = 0.10
PAIR_RESOLUTION = 1e-3


@dataclass
class InequalityReport:
    """One inequality instance: LHS against the product of the RHS factors."""
    inequality: str
    parameters: Dict[str, Any]
    lhs: float
    rhs_factors: Dict[str, float]
    ratio: float
    witness: Dict[str, Any]
    error_budget: float = 0.0
    inconclusive: bool = False
    notes: List[str] = field(default_factory=list)

    @property
    def rhs(self) -> float:
        return float(np.prod(list(self.rhs_factors.values())))

    def to_dict(self) -> Dict[str, Any]:
        return {
            "inequality": self.inequality,
            "parameters": self.parameters,
            "lhs": self.lhs,
            "rhs_factors": self.rhs_factors,
            "rhs": self.rhs,
            "ratio": self.ratio,
            "witness": self.witness,
            "error_budget": self.error_budget,
            "inconclusive": self.inconclusive,
            "notes": self.notes,
        }


def _ratio(lhs: float, rhs: float) -> float:
    if lhs == 0.0:
        return 0.0
    if rhs == 0.0:
        return math.inf
    return lhs / rhs


def _relative(res: QuadratureResult) -> float:
    if res.value == 0:
        return 0.0
    return res.abs_error_estimate / abs(res.value)


def _domain(u: ScalarField) -> Ball:
    support = u.support_ball()
    if support is None:
        raise ParameterOutOfRange(f"{u.kind} has no bounded support; pass an explicit ball")
    return support


# -- test-function catalog ----------------------------------------------------------------

@dataclass(frozen=True)
class CatalogEntry:
    name: str
    field: ScalarField

    def describe(self) -> Dict[str, Any]:
        return {"name": self.name, **self.field.describe()}


def build_catalog(n: int, powers: Sequence[float] = (2, 3),
                  radii: Sequence[float] = (0.25, 1.0, 4.0),
                  offsets: Sequence[float] = (0.0, 1.0, -1.0)) -> List[CatalogEntry]:
    """
    Bumps for every (power, radius, center offset along e₁), plus the sum
    of the centered and the +e₁ bump for each radius at the first power.
    """
    e1 = np.zeros(n)
    e1[0] = 1.0
    catalog = []
    for m in powers:
        for r in radii:
            for s in offsets:
                catalog.append(CatalogEntry(f"bump(m={m:g},R={r:g},c={s:g}e1)",
                                            Bump(n, tuple(s * e1), r, m)))
    if len(offsets) > 1:
        m = powers[0]
        for r in radii:
            pair = Sum([Bump(n, tuple(offsets[0] * e1), r, m), Bump(n, tuple(offsets[1] * e1), r, m)])
            catalog.append(CatalogEntry(f"bump(m={m:g},R={r:g}) pair", pair))
    return catalog


# -- Morrey form ----------------------------------------------------------------------------

def _check_morrey_range(n: int, alpha: float, p: float) -> None:
    if not 1 < alpha < n:
        raise ParameterOutOfRange(f"need 1 < alpha < n, got alpha={alpha}")
    if not 1 < p < n / alpha:
        raise ParameterOutOfRange(f"need 1 < p < n/alpha, got p={p}")


def fefferman_morrey(u: ScalarField, V: ScalarField, alpha: float, p: float, phi: GrowthFunction,
                     norm: Optional[float] = None, check_phi: bool = True,
                     tol: Optional[float] = None,
                     settings: QuadratureSettings = DEFAULT_SETTINGS) -> InequalityReport:
    """
    ∫|u|^α|V| against ‖V‖_{L^{p,φ}}·∫|∇u|^α.

    Args:
        u: Compactly supported test function
        V: Potential
        alpha: Gradient exponent, 1 < α < n
        p: Morrey exponent, 1 < p < n/α
        phi: Growth function; must pass (a1)(a2)(a3) when check_phi is set
        norm: Precomputed ‖V‖ (computed with morrey_norm otherwise)

    Raises:
        ParameterOutOfRange: outside the parameter range, φ failing a
            condition or V with an infinite norm
    """
    n = V.dimension
    _check_morrey_range(n, alpha, p)
    if check_phi:
        for report in check_all_conditions(phi, n, p, alpha):
            if not report.holds:
                raise ParameterOutOfRange(f"growth function fails {report.condition.value}")
    if norm is None:
        estimate = morrey_norm(V, p, phi, tol=tol, settings=settings)
        if estimate.infinite:
            raise ParameterOutOfRange("the Morrey norm of V is infinite")
        norm = estimate.value

    params = {"n": n, "alpha": alpha, "p": p, "phi": phi.describe()}
    if u.is_constant:
        if float(u.values(np.zeros((1, n)))[0]) != 0.0:
            raise ParameterOutOfRange("a nonzero constant is not compactly supported")
        return InequalityReport("fefferman_morrey", params, 0.0,
                                {"morrey_norm": float(norm), "gradient_integral": 0.0}, 0.0, u.describe())

    domain = _domain(u)
    lhs = integrate_ball(Product([AbsPower(u, alpha), AbsPower(V, 1.0)]), domain, tol, settings)
    grad = integrate_ball(AbsPower(GradientNorm(u), alpha), domain, tol, settings)
    factors = {"morrey_norm": float(norm), "gradient_integral": grad.value}
    report = InequalityReport("fefferman_morrey", params, lhs.value, factors,
                              _ratio(lhs.value, norm * grad.value), u.describe(),
                              _relative(lhs) + _relative(grad),
                              not (lhs.convergent and grad.convergent))
    logger.debug("fefferman_morrey %s: ratio %.6g", u.kind, report.ratio)
    return report


# -- Stummel forms ---------------------------------------------------------------------------

def _check_stummel_range(n: int, alpha: float, p: float) -> None:
    if not 1 <= p:
        raise ParameterOutOfRange(f"need p >= 1, got {p}")
    if not (1 <= alpha <= 2 and alpha < n):
        raise ParameterOutOfRange(f"need 1 <= alpha <= 2 and alpha < n, got alpha={alpha}")


def _modulus(V: ScalarField, alpha: float, p: float, ball0: Ball, eta: Optional[float],
             tol, settings) -> float:
    if eta is not None:
        return float(eta)
    sample = stummel_modulus(V, alpha, p, ball0.radius, tol=tol, settings=settings)
    if sample.divergent:
        raise ParameterOutOfRange(f"Stummel modulus of V diverges at r={ball0.radius:g}")
    return sample.value


def fefferman_stummel(u: ScalarField, V: ScalarField, alpha: float, p: float,
                      ball0: Optional[Ball] = None, eta: Optional[float] = None,
                      tol: Optional[float] = None,
                      settings: QuadratureSettings = DEFAULT_SETTINGS) -> InequalityReport:
    """
    ∫_{B₀}|V|^p|u|^α against η_{α,p}V(r₀)^p·∫_{B₀}|∇u|^α for u supported in B₀.

    Raises:
        ParameterOutOfRange: outside 1 ≤ p, 1 ≤ α ≤ 2 < n, or supp u ⊄ B₀
    """
    n = V.dimension
    _check_stummel_range(n, alpha, p)
    ball0 = _domain(u) if ball0 is None else ball0
    support = u.support_ball()
    if support is None or not ball0.contains_ball(support):
        raise ParameterOutOfRange("u must be supported in B0")
    eta = _modulus(V, alpha, p, ball0, eta, tol, settings)

    lhs = integrate_ball(Product([AbsPower(V, p), AbsPower(u, alpha)]), ball0, tol, settings)
    grad = integrate_ball(AbsPower(GradientNorm(u), alpha), ball0, tol, settings)
    factors = {"eta_p": eta ** p, "gradient_integral": grad.value}
    params = {"n": n, "alpha": alpha, "p": p, "ball": ball0.to_dict()}
    return InequalityReport("fefferman_stummel", params, lhs.value, factors,
                            _ratio(lhs.value, eta ** p * grad.value), u.describe(),
                            _relative(lhs) + _relative(grad),
                            not (lhs.convergent and grad.convergent))


def fefferman_oscillation(u: ScalarField, V: ScalarField, alpha: float, p: float, ball0: Ball,
                          eta: Optional[float] = None, tol: Optional[float] = None,
                          settings: QuadratureSettings = DEFAULT_SETTINGS) -> InequalityReport:
    """
    ∫_{B₀}|u − u_{B₀}|^α|V|^p against η_{α,p}V(r₀)^p·∫_{B₀}|∇u|^α.

    u need not vanish on ∂B₀. The plain ∫_{B₀}|u|^α|V|^p is reported
    alongside for comparison.
    """
    n = V.dimension
    _check_stummel_range(n, alpha, p)
    params = {"n": n, "alpha": alpha, "p": p, "ball": ball0.to_dict()}
    if u.is_constant:
        eta = _modulus(V, alpha, p, ball0, eta, tol, settings)
        return InequalityReport("fefferman_oscillation", params, 0.0,
                                {"eta_p": eta ** p, "gradient_integral": 0.0}, 0.0, u.describe(),
                                notes=["constant u has no oscillation"])
    eta = _modulus(V, alpha, p, ball0, eta, tol, settings)

    mean = ball_average(u, ball0, tol, settings).value
    kinks = [Sphere(tuple(u.radial_center), rho) for rho in level_radii(u, mean, ball0)]
    oscillation = AbsPower(Sum([u, constant(n, mean)], [1.0, -1.0]), alpha, kinks)
    weight = AbsPower(V, p)
    lhs = integrate_ball(Product([oscillation, weight]), ball0, tol, settings)
    plain = integrate_ball(Product([AbsPower(u, alpha), weight]), ball0, tol, settings)
    grad = integrate_ball(AbsPower(GradientNorm(u), alpha), ball0, tol, settings)
    factors = {"eta_p": eta ** p, "gradient_integral": grad.value}
    notes = [f"u_B = {mean:.6g}; plain LHS = {plain.value:.6g}"]
    if lhs.value > plain.value:
        notes.append("oscillation LHS exceeds the plain LHS")
    return InequalityReport("fefferman_oscillation", params, lhs.value, factors,
                            _ratio(lhs.value, eta ** p * grad.value),
                            {**u.describe(), "ball_average": mean},
                            _relative(lhs) + _relative(grad),
                            not (lhs.convergent and grad.convergent), notes)


# -- sub-representation -----------------------------------------------------------------------

def sample_in_ball(ball: Ball, count: int, seed: int = 0, margin: float = 0.0) -> np.ndarray:
    """`count` seeded uniform points of B(c, (1 − margin)·r)."""
    rng = np.random.default_rng(seed)
    n = ball.dimension
    directions = rng.standard_normal((count, n))
    directions /= np.linalg.norm(directions, axis=1)[:, None]
    radii = (1.0 - margin) * ball.radius * rng.random(count) ** (1.0 / n)
    return np.asarray(ball.center) + radii[:, None] * directions


def subrepresentation_check(u: ScalarField, ball: Ball, sample_points=None, count: int = 20,
                            seed: int = 0, tol: Optional[float] = None,
                            settings: QuadratureSettings = DEFAULT_SETTINGS) -> InequalityReport:
    """
    Per-point |u(x) − u_B| / ∫_B |∇u(y)|/|x−y|^{n−1} dy; the max is the
    empirical C(n). Points where both sides vanish are skipped.
    """
    n = u.dimension
    points = sample_in_ball(ball, count, seed) if sample_points is None else np.atleast_2d(
        np.asarray(sample_points, dtype=float))
    mean = ball_average(u, ball, tol, settings).value
    grad = GradientNorm(u)
    per_point, skipped, inconclusive = [], 0, False
    best, witness = 0.0, None
    for x in points:
        x = as_point(x, n)
        top = abs(float(u.values(x[None, :])[0]) - mean)
        bottom = integrate_singular_kernel(grad, x, n - 1, ball, tol, settings)
        inconclusive |= bottom.inconclusive
        if top == 0.0 and bottom.value == 0.0:
            skipped += 1
            continue
        r = _ratio(top, bottom.value)
        per_point.append({"x": x.tolist(), "ratio": r})
        if r > best:
            best, witness = r, x
    params = {"n": n, "ball": ball.to_dict(), "points": len(points), "evaluated": len(per_point),
              "seed": seed}
    notes = [f"{skipped} points with 0/0 skipped"] if skipped else []
    return InequalityReport("subrepresentation", params, best, {"unit": 1.0},
                            best, {"point": None if witness is None else witness.tolist(),
                                   "per_point": per_point, "ball_average": mean},
                            inconclusive=inconclusive, notes=notes)


# -- Riesz potential bound ---------------------------------------------------------------------

def riesz_tail(V: ScalarField, R: float) -> float:
    """
    Bound on ∫_{|y|>R} |V(y)|/|x−y|^{n−1} dy for |x| ≪ R from the decay
    |V(y)| ≤ c|y|^{−a}: σ·c·R^{1−a}/(a − 1), with c read off at R·e₁.
    """
    n = V.dimension
    a = V.decay_exponent
    if a is None or a <= 1:
        return math.inf
    if math.isinf(a):
        return 0.0
    probe = np.zeros(n)
    probe[0] = R
    c = abs(float(V.values(probe[None, :])[0])) * R ** a
    return sphere_area(n) * c * R ** (1 - a) / (a - 1)


def riesz_bound_check(V: ScalarField, p: float, phi: GrowthFunction, alpha: float, x_points,
                      R_max: float = R_MAX, norm: Optional[float] = None,
                      r_search: Optional[Sequence[float]] = None,
                      tol: Optional[float] = None,
                      settings: QuadratureSettings = DEFAULT_SETTINGS) -> InequalityReport:
    """
    ∫|V(y)|/|x−y|^{n−1} dy against ‖V‖^{1/α}·M(V)(x)^{(α−1)/α}, per point.

    The left side is integrated over B(0, R_max) plus a decay-based tail
    bound; a TailBoundDominates warning is issued when the tail exceeds
    10% of the value. The Nakai-type tail ‖V‖R^{1−α} is reported too.
    """
    n = V.dimension
    _check_morrey_range(n, alpha, p)
    points = np.atleast_2d(np.asarray(x_points, dtype=float))
    if norm is None:
        estimate = morrey_norm(V, p, phi, tol=tol, settings=settings)
        if estimate.infinite:
            raise ParameterOutOfRange("the Morrey norm of V is infinite")
        norm = estimate.value
    params = {"n": n, "alpha": alpha, "p": p, "phi": phi.describe(), "R_max": R_max}
    if V.is_constant and float(V.values(points[:1])[0]) == 0.0:
        return InequalityReport("riesz_bound", params, 0.0, {"norm_factor": 0.0, "maximal_factor": 0.0},
                                0.0, {"points": points.tolist()})

    maximal = maximal_function(V, points, r_search, tol, settings)
    tail = riesz_tail(V, R_max)
    nakai_tail = norm * R_max ** (1 - alpha)
    domain = Ball((0.0,) * n, R_max)
    integrand = AbsPower(V, 1.0)

    per_point, best, witness = [], -1.0, 0
    inconclusive, notes = False, []
    for i, x in enumerate(points):
        res = integrate_singular_kernel(integrand, x, n - 1, domain, tol, settings)
        inconclusive |= not res.convergent
        lhs = res.value + (tail if math.isfinite(tail) else 0.0)
        if not math.isfinite(tail) or tail > TAIL_SHARE * res.value:
            message = f"truncation tail {tail:.3g} exceeds {TAIL_SHARE:.0%} of {res.value:.3g} at x={x.tolist()}"
            warnings.warn(message, TailBoundDominates)
            notes.append(message)
        rhs = norm ** (1.0 / alpha) * maximal.values[i] ** ((alpha - 1.0) / alpha)
        ratio = _ratio(lhs, rhs)
        per_point.append({"x": x.tolist(), "lhs": lhs, "maximal": float(maximal.values[i]),
                          "rhs": rhs, "ratio": ratio})
        if ratio > best:
            best, witness = ratio, i
    top = per_point[witness]
    factors = {"norm_factor": norm ** (1.0 / alpha),
               "maximal_factor": top["maximal"] ** ((alpha - 1.0) / alpha)}
    notes.append(f"decay tail bound {tail:.3g}; Nakai-type tail {nakai_tail:.3g}")
    return InequalityReport("riesz_bound", params, top["lhs"], factors, best,
                            {"point": top["x"], "per_point": per_point},
                            inconclusive=inconclusive, notes=notes)


# -- kernel composition --------------------------------------------------------------------------

def kernel_lemma_check(n: int, alpha: float, ball0: Ball, pairs: Sequence[Tuple[Sequence[float], Sequence[float]]],
                       resolution: Optional[float] = None, tol: Optional[float] = None,
                       settings: QuadratureSettings = DEFAULT_SETTINGS) -> InequalityReport:
    """
    I(x,z)·|x−z|^{(n−1)/(α−1) − 1} with
    I(x,z) = ∫_{B₀}|x−y|^{−(n−1)/(α−1)}|z−y|^{−(n−1)} dy.

    Raises:
        ParameterOutOfRange: α outside (1, 2], α ≥ n or a point outside B₀
        PairTooClose: |x − z| below `resolution` (default 1e-3·r₀)
    """
    if not (1 < alpha <= 2 and alpha < n):
        raise ParameterOutOfRange(f"need 1 < alpha <= 2 and alpha < n, got alpha={alpha}")
    resolution = PAIR_RESOLUTION * ball0.radius if resolution is None else resolution
    s = (n - 1) / (alpha - 1)
    values, best, witness, inconclusive = [], -1.0, None, False
    for x, z in pairs:
        x, z = as_point(x, n), as_point(z, n)
        if not (ball0.contains(x) and ball0.contains(z)):
            raise ParameterOutOfRange("kernel lemma points must lie in B0")
        distance = float(np.linalg.norm(x - z))
        if distance < resolution:
            raise PairTooClose(f"|x - z| = {distance:.3g} is below the resolution {resolution:.3g}")
        res = integrate_singular_kernel(kernel(n, z, n - 1), x, s, ball0, tol, settings)
        inconclusive |= not res.convergent
        value = res.value * distance ** (s - 1.0) if not res.divergent else math.inf
        values.append({"x": x.tolist(), "z": z.tolist(), "distance": distance,
                       "integral": res.value, "normalized": value, "verdict": res.verdict.value})
        if value > best:
            best, witness = value, values[-1]
    params = {"n": n, "alpha": alpha, "ball": ball0.to_dict(), "pairs": len(values)}
    bound = math.pi ** 3 if (n == 3 and alpha == 2) else None
    notes = [f"global bound pi^3 = {bound:.6g}"] if bound else []
    return InequalityReport("kernel_lemma", params, best, {"unit": 1.0}, best,
                            {"pair": witness, "pairs": values}, inconclusive=inconclusive, notes=notes)


def default_pairs(ball0: Ball, count: int = 12, seed: int = 0, min_distance: float = 0.05) -> List[Tuple[np.ndarray, np.ndarray]]:
    """Seeded random pairs plus one straddling the center and one near the boundary."""
    n = ball0.dimension
    center = np.asarray(ball0.center)
    e1 = np.zeros(n)
    e1[0] = ball0.radius
    pairs = [(center - 0.5 * e1, center + 0.5 * e1), (center + 0.9 * e1, center + 0.7 * e1)]
    points = sample_in_ball(ball0, 2 * count, seed)
    for x, z in zip(points[::2], points[1::2]):
        if np.linalg.norm(x - z) >= min_distance * ball0.radius:
            pairs.append((x, z))
    return pairs


# -- catalog runs ---------------------------------------------------------------------------------

@dataclass
class CatalogSummary:
    inequality: str
    reports: List[InequalityReport]
    max_ratio: float
    witness: str
    refined_max_ratio: Optional[float] = None
    stable: Optional[bool] = None

    def to_dict(self) -> Dict[str, Any]:
        return {
            "inequality": self.inequality,
            "max_ratio": self.max_ratio,
            "witness": self.witness,
            "refined_max_ratio": self.refined_max_ratio,
            "stable": self.stable,
            "reports": [r.to_dict() for r in self.reports],
        }


def catalog_max(inequality: str, catalog: Sequence[CatalogEntry],
                run: Callable[[ScalarField, QuadratureSettings], InequalityReport],
                settings: QuadratureSettings = DEFAULT_SETTINGS,
                refine: Optional[float] = None) -> CatalogSummary:
    """
    Run one inequality over the catalog; with `refine`, rerun with
    tolerances divided by the factor and flag a >10% move of the max.
    """
    reports = ordered_map(lambda entry: run(entry.field, settings), catalog)
    ratios = [r.ratio for r in reports]
    k = int(np.argmax(ratios))
    summary = CatalogSummary(inequality, reports, float(ratios[k]), catalog[k].name)
    if refine:
        refined_reports = ordered_map(lambda entry: run(entry.field, settings.refined(refine)), catalog)
        refined = max(r.ratio for r in refined_reports)
        summary.refined_max_ratio = float(refined)
        summary.stable = bool(math.isfinite(refined)
                              and abs(refined - summary.max_ratio) <= STABILITY_TOLERANCE * summary.max_ratio)
        if not summary.stable:
            logger.warning("%s catalog max moved from %.4g to %.4g under refinement",
                           inequality, summary.max_ratio, refined)
    logger.info("%s: max ratio %.6g over %d functions (%s)", inequality, summary.max_ratio,
                len(catalog), summary.witness)
    return summary


def translated_pair(u: ScalarField, V: ScalarField, ball0: Ball, shift) -> Tuple[ScalarField, ScalarField, Ball]:
    """u(· − v), V(· − v) and B₀ + v."""
    return translate(u, shift), translate(V, shift), ball0.translated(shift)


def catalog_support(catalog: Sequence[CatalogEntry]) -> Ball:
    """A ball containing the support of every catalog function."""
    return enclosing_ball([_domain(entry.field) for entry in catalog])
