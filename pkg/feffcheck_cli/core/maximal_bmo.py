"""
Hardy–Littlewood maximal functions, A₁ ratios, BMO_α seminorms and the
vanishing / doubling diagnostics for nonnegative weights.

Every sup over radii or sub-balls is a sup over a finite sample; results
record the sample so refinement checks can rerun it denser.
"""
import logging
import math
from dataclasses import dataclass, field, replace
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy import optimize

from ..utils.parallel import ordered_map
from .errors import ParameterOutOfRange, ZeroDenominator
from .fields import (AbsPower, Ball, GridField, RadialTable, ScalarField, Sphere, Sum,
                     as_point, as_points, ball_volume, constant, same_point)
from .growth import ConditionId, GrowthFunction, check_condition, morrey_norm
from .quadrature import DEFAULT_SETTINGS, QuadratureSettings, ball_average, integrate_ball

logger = logging.getLogger(__name__)

STABILITY_TOLERANCE = 0.10
VANISHING_THRESHOLD = 1e-6
LEVEL_SAMPLES = 64


@dataclass(frozen=True)
class MaximalSettings:
    """Radius search and sampling layouts for maximal functions."""
    r_min: float = 1e-3
    r_max: float = 1e2
    r_count: int = 21
    ray_min: float = 1e-2
    ray_max: float = 1e1
    ray_count: int = 10
    lattice_resolution: int = 8

    @classmethod
    def from_config(cls, section: Optional[Dict[str, Any]]) -> "MaximalSettings":
        if not section:
            return cls()
        out = cls()
        for key in ("r_min", "r_max", "ray_min", "ray_max"):
            if key in section:
                out = replace(out, **{key: float(section[key])})
        for key in ("r_count", "ray_count", "lattice_resolution"):
            if key in section:
                out = replace(out, **{key: int(section[key])})
        return out

    def refined(self, factor: int = 2) -> "MaximalSettings":
        return replace(self, r_count=(self.r_count - 1) * factor + 1,
                       ray_count=(self.ray_count - 1) * factor + 1)

    def r_search(self) -> np.ndarray:
        return np.logspace(math.log10(self.r_min), math.log10(self.r_max), self.r_count)

    def ray(self) -> np.ndarray:
        return np.logspace(math.log10(self.ray_min), math.log10(self.ray_max), self.ray_count)


DEFAULT_MAXIMAL = MaximalSettings()


@dataclass
class MaximalField:
    """Sampled M(f): per-point sup of ball averages of |f| over `r_search`."""
    base: ScalarField
    points: np.ndarray
    values: np.ndarray
    r_search: np.ndarray
    witness_radii: np.ndarray
    layout: str = "points"
    lattice: Optional[Tuple[Tuple[float, ...], Tuple[float, ...], int]] = None
    inconclusive: int = 0

    @property
    def dominates_base(self) -> np.ndarray:
        """M(f)(x) ≥ |f(x)| per point (the Lebesgue limit is part of the sup)."""
        base = np.abs(self.base.values(self.points))
        return self.values >= base * (1 - 1e-12)

    def to_field(self) -> ScalarField:
        """RadialTable for ray samples, GridField for lattice samples."""
        if self.layout == "ray":
            center = np.asarray(self.base.radial_center)
            radii = np.linalg.norm(self.points - center, axis=1)
            keep = (radii > 0) & np.isfinite(self.values)
            return RadialTable(self.base.dimension, radii[keep], self.values[keep], tuple(center))
        if self.layout == "lattice":
            lower, upper, resolution = self.lattice
            samples = self.values.reshape((resolution + 1,) * self.base.dimension)
            if not np.all(np.isfinite(samples)):
                cap = float(np.max(samples[np.isfinite(samples)]))
                logger.warning("capping infinite maximal samples at %.3g", cap)
                samples = np.where(np.isfinite(samples), samples, cap)
            return GridField(self.base.dimension, lower, upper, samples)
        raise ParameterOutOfRange("only ray or lattice samples can be turned into a field")

    def to_dict(self) -> Dict[str, Any]:
        return {
            "layout": self.layout,
            "points": self.points.tolist(),
            "values": self.values.tolist(),
            "witness_radii": self.witness_radii.tolist(),
            "r_search": self.r_search.tolist(),
            "inconclusive": self.inconclusive,
        }


def _ray_point(center, distance: float, n: int) -> Tuple[float, ...]:
    point = np.asarray(center, dtype=float).copy()
    point[0] += distance
    return tuple(point)


def _reduce_points(f: ScalarField, points: np.ndarray) -> Tuple[List[Tuple[float, ...]], List[int]]:
    """Map points of a radial field onto its +e₁ ray; return unique points and the index map."""
    center = f.radial_center
    if center is None or f.is_constant:
        keys = [tuple(p) for p in points]
    else:
        distances = np.linalg.norm(points - np.asarray(center), axis=1)
        keys = [_ray_point(center, float(d), f.dimension) for d in np.round(distances, 14)]
    unique: List[Tuple[float, ...]] = []
    index: Dict[Tuple[float, ...], int] = {}
    mapping = []
    for key in keys:
        if key not in index:
            index[key] = len(unique)
            unique.append(key)
        mapping.append(index[key])
    return unique, mapping


def maximal_function(f: ScalarField, x_grid, r_search: Optional[Sequence[float]] = None,
                     tol: Optional[float] = None,
                     settings: QuadratureSettings = DEFAULT_SETTINGS,
                     workers: Optional[int] = None) -> MaximalField:
    """
    M(f)(x) = sup_r |B(x,r)|^{−1}∫_{B(x,r)}|f| over the sampled radii,
    together with the Lebesgue limit |f(x)|.

    Points that are poles of f, or whose ball average diverges, get +∞.
    """
    points = as_points(x_grid, f.dimension)
    radii = np.asarray(DEFAULT_MAXIMAL.r_search() if r_search is None else r_search, dtype=float)
    if radii.size == 0 or np.any(radii <= 0):
        raise ParameterOutOfRange("r_search must be a non-empty list of positive radii")
    integrand = AbsPower(f, 1.0)
    unique, mapping = _reduce_points(f, points)
    cells = [(x, float(r)) for x in unique for r in radii]

    def evaluate(cell):
        x, r = cell
        return ball_average(integrand, Ball(x, r), tol, settings)

    results = ordered_map(evaluate, cells, workers)
    width = radii.size
    best = np.empty(len(unique))
    witness = np.empty(len(unique))
    inconclusive = 0
    for i, x in enumerate(unique):
        block = results[i * width:(i + 1) * width]
        inconclusive += sum(1 for res in block if res.inconclusive)
        averages = np.array([math.inf if res.divergent else res.value for res in block])
        k = int(np.argmax(averages))
        best[i], witness[i] = averages[k], radii[k]
        if any(same_point(p.point, x) for p in f.poles):
            best[i], witness[i] = math.inf, 0.0
            continue
        local = abs(float(f.values(np.asarray(x)[None, :])[0]))
        if local > best[i]:
            best[i], witness[i] = local, 0.0

    return MaximalField(f, points, best[mapping], radii, witness[mapping], "points",
                        inconclusive=inconclusive)


def maximal_on_ray(f: ScalarField, distances: Optional[Sequence[float]] = None,
                   r_search: Optional[Sequence[float]] = None,
                   tol: Optional[float] = None,
                   settings: QuadratureSettings = DEFAULT_SETTINGS,
                   workers: Optional[int] = None) -> MaximalField:
    """M(f) for a radial f, sampled at center + d·e₁."""
    center = f.radial_center
    if center is None:
        raise ParameterOutOfRange("ray sampling needs a radial field")
    distances = DEFAULT_MAXIMAL.ray() if distances is None else distances
    points = np.array([_ray_point(center, float(d), f.dimension) for d in distances])
    out = maximal_function(f, points, r_search, tol, settings, workers)
    out.layout = "ray"
    return out


def maximal_on_lattice(f: ScalarField, lower, upper, resolution: int,
                       r_search: Optional[Sequence[float]] = None,
                       tol: Optional[float] = None,
                       settings: QuadratureSettings = DEFAULT_SETTINGS,
                       workers: Optional[int] = None) -> MaximalField:
    """M(f) on a (resolution+1)^n lattice of the box [lower, upper]."""
    n = f.dimension
    lower = as_point(lower, n)
    upper = as_point(upper, n)
    axes = [np.linspace(lo, hi, resolution + 1) for lo, hi in zip(lower, upper)]
    mesh = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, n)
    out = maximal_function(f, mesh, r_search, tol, settings, workers)
    out.layout = "lattice"
    out.lattice = (tuple(lower), tuple(upper), int(resolution))
    return out


def maximal_as_field(f: ScalarField, maximal: MaximalSettings = DEFAULT_MAXIMAL,
                     box: float = 2.0, tol: Optional[float] = None,
                     settings: QuadratureSettings = DEFAULT_SETTINGS,
                     workers: Optional[int] = None) -> ScalarField:
    """M(f) as a field: a radial table for radial f, else a grid on [−box, box]^n."""
    if f.radial_center is not None and not f.is_constant:
        return maximal_on_ray(f, maximal.ray(), maximal.r_search(), tol, settings, workers).to_field()
    if f.is_constant:
        return AbsPower(f, 1.0)
    n = f.dimension
    return maximal_on_lattice(f, [-box] * n, [box] * n, maximal.lattice_resolution,
                              maximal.r_search(), tol, settings, workers).to_field()


# -- A1 ------------------------------------------------------------------------------

@dataclass
class A1Report:
    gamma: float
    construction: str
    constant: float
    witness: Tuple[float, ...]
    refined_constant: Optional[float] = None
    stable: Optional[bool] = None
    ratios: List[float] = field(default_factory=list)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "gamma": self.gamma,
            "construction": self.construction,
            "constant": self.constant,
            "witness": list(self.witness),
            "refined_constant": self.refined_constant,
            "stable": self.stable,
            "ratios": self.ratios,
        }


A1_CONSTRUCTIONS = ("power_maximal", "maximal_power")


def _a1_weight(f: ScalarField, gamma: float, construction: str, maximal: MaximalSettings,
               tol, settings, workers) -> ScalarField:
    if construction == "power_maximal":
        # w = [M(|f|^γ)]^{1/γ}
        return AbsPower(maximal_as_field(AbsPower(f, gamma), maximal, tol=tol,
                                         settings=settings, workers=workers), 1.0 / gamma)
    # w = [M(f)]^γ
    return AbsPower(maximal_as_field(f, maximal, tol=tol, settings=settings, workers=workers), gamma)


def _a1_constant(f: ScalarField, gamma: float, construction: str, x_grid, maximal: MaximalSettings,
                 tol, settings, workers) -> Tuple[float, Tuple[float, ...], List[float]]:
    w = _a1_weight(f, gamma, construction, maximal, tol, settings, workers)
    mw = maximal_function(w, x_grid, maximal.r_search(), tol, settings, workers)
    base = np.abs(w.values(mw.points))
    with np.errstate(divide="ignore", invalid="ignore"):
        ratios = np.where(base > 0, mw.values / base, np.nan)
    finite = np.isfinite(ratios)
    if not finite.any():
        return math.nan, (), ratios.tolist()
    k = int(np.nanargmax(np.where(finite, ratios, -np.inf)))
    return float(ratios[k]), tuple(mw.points[k]), ratios.tolist()


def check_A1(f: ScalarField, gamma: float, x_grid=None, construction: str = "power_maximal",
             maximal: MaximalSettings = DEFAULT_MAXIMAL, refine: bool = True,
             tol: Optional[float] = None, settings: QuadratureSettings = DEFAULT_SETTINGS,
             workers: Optional[int] = None) -> A1Report:
    """
    sup_x M(w)(x)/w(x) for the weight built from f with exponent γ ∈ (0,1).

    Args:
        f: Base function
        gamma: Exponent in (0, 1)
        x_grid: Evaluation points (default: the ray of `maximal` for radial f)
        construction: "power_maximal" for [M(|f|^γ)]^{1/γ} or "maximal_power" for [M(f)]^γ
        maximal: Radius search and sampling layout
        refine: Rerun on a refined layout and report stability

    Returns:
        A1Report with the empirical constant and its stability
    """
    if not 0 < gamma < 1:
        raise ParameterOutOfRange(f"gamma must lie in (0, 1), got {gamma}")
    if construction not in A1_CONSTRUCTIONS:
        raise ParameterOutOfRange(f"unknown A1 construction '{construction}'")
    if x_grid is None:
        center = f.radial_center if f.radial_center is not None else (0.0,) * f.dimension
        distances = np.logspace(math.log10(maximal.ray_min), 0.0, 5)
        x_grid = [_ray_point(center, float(d), f.dimension) for d in distances]

    constant_, witness, ratios = _a1_constant(f, gamma, construction, x_grid, maximal,
                                              tol, settings, workers)
    report = A1Report(gamma, construction, constant_, witness, ratios=ratios)
    if refine:
        refined, _, _ = _a1_constant(f, gamma, construction, x_grid, maximal.refined(),
                                     tol, settings, workers)
        report.refined_constant = refined
        report.stable = bool(math.isfinite(constant_) and math.isfinite(refined)
                             and abs(refined - constant_) <= STABILITY_TOLERANCE * constant_)
        if not report.stable:
            logger.warning("A1 constant moved from %.4g to %.4g under refinement", constant_, refined)
    logger.info("A1 (%s, gamma=%g): C=%.6g", construction, gamma, constant_)
    return report


# -- Morrey boundedness of M ------------------------------------------------------------

@dataclass
class MaximalMorreyReport:
    ratio: float
    norm_f: float
    norm_maximal: float
    infinite: bool
    refined_ratio: Optional[float] = None
    stable: Optional[bool] = None
    notes: List[str] = field(default_factory=list)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "ratio": self.ratio,
            "norm_f": self.norm_f,
            "norm_maximal": self.norm_maximal,
            "infinite": self.infinite,
            "refined_ratio": self.refined_ratio,
            "stable": self.stable,
            "notes": self.notes,
        }


def _maximal_morrey_ratio(f, p, phi, maximal, r_grid, tol, settings, workers):
    mf = maximal_as_field(f, maximal, tol=tol, settings=settings, workers=workers)
    norm_f = morrey_norm(f, p, phi, None, r_grid, tol, settings, workers)
    norm_m = morrey_norm(mf, p, phi, None, r_grid, tol, settings, workers)
    infinite = norm_f.infinite or norm_m.infinite
    if norm_f.value == 0:
        return (0.0 if norm_m.value == 0 else math.inf), norm_f, norm_m, infinite
    return norm_m.value / norm_f.value, norm_f, norm_m, infinite


def check_maximal_morrey_bound(f: ScalarField, p: float, phi: GrowthFunction,
                               maximal: MaximalSettings = DEFAULT_MAXIMAL,
                               r_grid: Optional[Sequence[float]] = None, refine: bool = False,
                               tol: Optional[float] = None,
                               settings: QuadratureSettings = DEFAULT_SETTINGS,
                               workers: Optional[int] = None) -> MaximalMorreyReport:
    """
    ‖M(f)‖/‖f‖ in L^{p,φ}, with M(f) sampled into a field.

    Raises:
        ParameterOutOfRange: φ fails (a1) or (a2) on the sampled grid
    """
    n = f.dimension
    for condition in (ConditionId.ALMOST_INCREASING, ConditionId.ALMOST_DECREASING_RATIO):
        if not check_condition(phi, condition, n).holds:
            raise ParameterOutOfRange(f"growth function {phi.describe()} fails {condition.value}")
    ratio, norm_f, norm_m, infinite = _maximal_morrey_ratio(f, p, phi, maximal, r_grid,
                                                            tol, settings, workers)
    report = MaximalMorreyReport(ratio, norm_f.value, norm_m.value, infinite,
                                 notes=norm_f.notes + norm_m.notes)
    if refine:
        refined, _, _, _ = _maximal_morrey_ratio(f, p, phi, maximal.refined(), r_grid,
                                                 tol, settings, workers)
        report.refined_ratio = refined
        report.stable = bool(math.isfinite(ratio) and math.isfinite(refined)
                             and abs(refined - ratio) <= STABILITY_TOLERANCE * ratio)
    logger.info("||Mf||/||f|| = %.6g", ratio)
    return report


# -- BMO ---------------------------------------------------------------------------------

@dataclass(frozen=True)
class SubballSampler:
    """Lattice of sub-ball centers times a geometric radius grid."""
    centers_per_axis: int = 5
    radii: int = 12
    smallest: float = 0.05
    spread: float = 0.8

    @classmethod
    def from_config(cls, section: Optional[Dict[str, Any]]) -> "SubballSampler":
        if not section:
            return cls()
        return cls(int(section.get("centers_per_axis", cls.centers_per_axis)),
                   int(section.get("radii", cls.radii)),
                   float(section.get("smallest", cls.smallest)),
                   float(section.get("spread", cls.spread)))

    def subballs(self, ball: Ball, radial: bool = False) -> List[Ball]:
        """Sub-balls B' ⊆ B, starting with B itself; radial fields use the +e₁ ray only."""
        n = ball.dimension
        center = np.asarray(ball.center)
        if radial:
            offsets = np.zeros((self.centers_per_axis, n))
            offsets[:, 0] = np.linspace(0.0, self.spread, self.centers_per_axis)
        else:
            axis = np.linspace(-self.spread, self.spread, self.centers_per_axis)
            offsets = np.stack(np.meshgrid(*([axis] * n), indexing="ij"), axis=-1).reshape(-1, n)
        out = [ball]
        for offset in offsets:
            distance = float(np.linalg.norm(offset)) * ball.radius
            room = ball.radius - distance
            if room <= 0:
                continue
            c = tuple(center + offset * ball.radius)
            for r in np.geomspace(self.smallest * room, room, self.radii):
                sub = Ball(c, float(r))
                if not (same_point(c, ball.center) and abs(r - ball.radius) <= 1e-12 * ball.radius):
                    out.append(sub)
        return out


@dataclass
class BMOResult:
    ball: Ball
    alpha: float
    value: float
    witness: Ball
    subballs: int
    inconclusive: int = 0

    def to_dict(self) -> Dict[str, Any]:
        return {
            "ball": self.ball.to_dict(),
            "alpha": self.alpha,
            "value": self.value,
            "witness": self.witness.to_dict(),
            "subballs": self.subballs,
            "inconclusive": self.inconclusive,
        }


def level_radii(f: ScalarField, level: float, sub: Ball) -> List[float]:
    """Radii ρ about f's radial center with f = level, within reach of `sub`."""
    center = f.radial_center
    if center is None or f.is_constant:
        return []
    gap = float(np.linalg.norm(np.asarray(sub.center) - np.asarray(center)))
    lo = max(gap - sub.radius, 1e-9 * sub.radius)
    hi = gap + sub.radius
    t = np.geomspace(lo, hi, LEVEL_SAMPLES)

    def g(s):
        return float(f.values(np.asarray(_ray_point(center, s, f.dimension))[None, :])[0]) - level

    vals = np.array([g(s) for s in t])
    roots = []
    for a, b, ga, gb in zip(t[:-1], t[1:], vals[:-1], vals[1:]):
        if not (math.isfinite(ga) and math.isfinite(gb)):
            continue
        if ga == 0.0:
            roots.append(float(a))
        elif ga * gb < 0:
            roots.append(float(optimize.brentq(g, a, b, xtol=1e-14 * b)))
    return roots


def mean_oscillation(f: ScalarField, sub: Ball, alpha: float = 1.0, tol: Optional[float] = None,
                     settings: QuadratureSettings = DEFAULT_SETTINGS) -> Tuple[float, bool]:
    """(|B'|^{−1}∫_{B'}|f − f_{B'}|^α)^{1/α} and whether either average was inconclusive."""
    mean = ball_average(f, sub, tol, settings)
    shifted = Sum([f, constant(f.dimension, mean.value)], [1.0, -1.0])
    center = f.radial_center
    kinks = []
    if center is not None:
        kinks = [Sphere(tuple(center), rho) for rho in level_radii(f, mean.value, sub)]
    osc = ball_average(AbsPower(shifted, alpha, kinks), sub, tol, settings)
    value = max(osc.value, 0.0) ** (1.0 / alpha)
    return value, mean.inconclusive or osc.inconclusive


def bmo_seminorm(f: ScalarField, ball: Ball, alpha: float = 1.0,
                 sampler: SubballSampler = SubballSampler(),
                 tol: Optional[float] = None,
                 settings: QuadratureSettings = DEFAULT_SETTINGS,
                 workers: Optional[int] = None) -> BMOResult:
    """
    max over sampled B' ⊆ B of (|B'|^{−1}∫_{B'}|f − f_{B'}|^α)^{1/α}.

    Level sets of radial f are passed to the quadrature as kinks.
    """
    if not alpha > 0:
        raise ParameterOutOfRange(f"alpha must be positive, got {alpha}")
    if f.is_constant:
        return BMOResult(ball, alpha, 0.0, ball, 1)
    radial = f.radial_center is not None and same_point(f.radial_center, ball.center)
    subballs = sampler.subballs(ball, radial)

    def evaluate(sub):
        return mean_oscillation(f, sub, alpha, tol, settings)

    results = ordered_map(evaluate, subballs, workers)
    values = np.array([v for v, _ in results])
    k = int(np.argmax(values))
    inconclusive = sum(1 for _, flag in results if flag)
    result = BMOResult(ball, alpha, float(values[k]), subballs[k], len(subballs), inconclusive)
    logger.info("BMO_%g seminorm on %s: %.6g", alpha, ball.to_dict(), result.value)
    return result


# -- vanishing and doubling --------------------------------------------------------------

@dataclass
class VanishingCurve:
    k: float
    values: List[float]
    vanishes: bool

    def to_dict(self) -> Dict[str, Any]:
        return {"k": self.k, "values": self.values, "vanishes": self.vanishes}


@dataclass
class VanishingReport:
    center: Tuple[float, ...]
    radii: List[float]
    masses: List[float]
    curves: List[VanishingCurve]
    threshold: float
    monotone_in_k: bool = True

    @property
    def vanishes_to_order(self) -> Optional[float]:
        """Largest tested k such that every curve up to k vanishes; None if k_min fails."""
        order = None
        for curve in sorted(self.curves, key=lambda c: c.k):
            if not curve.vanishes:
                break
            order = curve.k
        return order

    @property
    def verdict(self) -> str:
        order = self.vanishes_to_order
        if order is None:
            return "No"
        if order == max(c.k for c in self.curves):
            return f"VanishesToOrder({order:g})"
        return f"VanishesToOrder({order:g}) only"

    def curve(self, k: float) -> VanishingCurve:
        return next(c for c in self.curves if c.k == k)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "center": list(self.center),
            "radii": self.radii,
            "masses": self.masses,
            "threshold": self.threshold,
            "verdict": self.verdict,
            "monotone_in_k": self.monotone_in_k,
            "curves": [c.to_dict() for c in self.curves],
        }


def vanishing_order(w: ScalarField, x0, r_grid: Sequence[float],
                    k_range: Sequence[float] = tuple(range(1, 11)),
                    threshold: float = VANISHING_THRESHOLD,
                    tol: Optional[float] = None,
                    settings: QuadratureSettings = DEFAULT_SETTINGS,
                    workers: Optional[int] = None) -> VanishingReport:
    """
    Curves r ↦ |B(x₀,r)|^{−k}∫_{B(x₀,r)}w for each k.

    A curve vanishes when it is nonincreasing toward small r across the
    smallest decade of `r_grid` and ends below `threshold`. Each mass is
    integrated once and shared by every k.
    """
    center = tuple(as_point(x0, w.dimension))
    radii = np.sort(np.asarray(r_grid, dtype=float))
    if radii.size < 2 or radii[0] <= 0:
        raise ParameterOutOfRange("vanishing check needs at least two positive radii")

    def evaluate(r):
        return integrate_ball(w, Ball(center, float(r)), tol, settings)

    masses = np.array([res.value for res in ordered_map(evaluate, radii, workers)])
    volumes = ball_volume(w.dimension, 1.0) * radii ** w.dimension
    last = radii <= radii[0] * 10.0 * (1 + 1e-12)

    curves = []
    for k in k_range:
        with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
            values = masses / volumes ** k
        tail = values[last]
        monotone = bool(np.all(np.diff(tail) >= -1e-12 * np.abs(tail[1:])))
        vanishes = monotone and bool(np.isfinite(values[0])) and abs(values[0]) < threshold
        curves.append(VanishingCurve(float(k), values.tolist(), vanishes))

    small = volumes < 1.0
    ordered = sorted(curves, key=lambda c: c.k)
    monotone_in_k = all(
        np.all(np.asarray(b.values)[small] >= np.asarray(a.values)[small] * (1 - 1e-9))
        for a, b in zip(ordered[:-1], ordered[1:])
    )
    report = VanishingReport(center, radii.tolist(), masses.tolist(), curves, threshold,
                             bool(monotone_in_k))
    logger.info("vanishing at %s: %s", center, report.verdict)
    return report


def doubling_ratio(w: ScalarField, x0, r: float, beta: float = 1.0,
                   tol: Optional[float] = None,
                   settings: QuadratureSettings = DEFAULT_SETTINGS) -> float:
    """
    ∫_{B(x₀,r)} w^β / ∫_{B(x₀,r/2)} w^β.

    Raises:
        ParameterOutOfRange: β outside (0, 1]
        ZeroDenominator: the inner integral is below the smallest normal float
    """
    if not 0 < beta <= 1:
        raise ParameterOutOfRange(f"beta must lie in (0, 1], got {beta}")
    center = tuple(as_point(x0, w.dimension))
    integrand = w if beta == 1.0 else AbsPower(w, beta)
    outer = integrate_ball(integrand, Ball(center, r), tol, settings)
    inner = integrate_ball(integrand, Ball(center, r / 2.0), tol, settings)
    if not abs(inner.value) > np.finfo(float).tiny:
        raise ZeroDenominator(f"mass of B({center}, {r / 2:g}) is {inner.value:.3g}")
    return outer.value / inner.value
