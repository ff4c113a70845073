"""
Integration of scalar fields over balls in R^n.

Co-centered radial integrands reduce to one-dimensional adaptive quadrature.
Everything else is integrated in polar coordinates around anchor points:
the ball is split into the Voronoi cells of the singular points it contains
(or a single cell around its center), each cell is swept by rays from its
anchor, the angular variable uses a product rule on the sphere and the
radial variable a mesh graded geometrically toward the anchor with a
Gauss–Jacobi innermost segment matched to the local power behavior.
Non-integrable poles switch to a cutoff series whose growth is fitted.
"""
import logging
import math
import warnings
from dataclasses import dataclass, replace
from enum import Enum
from functools import lru_cache
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy import integrate
from scipy.special import roots_jacobi, roots_legendre

from .errors import DimensionMismatch, ParameterOutOfRange
from .fields import Ball, Product, RadialPower, ScalarField, Sphere, as_point, same_point, sphere_area
from .fitting import fit_power_law

logger = logging.getLogger(__name__)

TOL_SMOOTH = 1e-6
TOL_SINGULAR = 1e-4
ABS_FLOOR = 1e-13
DIVERGENCE_SLOPE = -0.05
DIVERGENCE_RESIDUAL = 0.10
CUTOFF_DECADES = (2, 8)
GRADING_RATIO = 0.2
QUAD_LIMIT = 200
MAX_NODES = 4_000_000
CHUNK_POINTS = 200_000
MAX_STRETCH = 40
SIGN_SAMPLES = 33


# (Jacobi nodes per hemisphere, Gauss points per segment, graded levels)
LEVELS = (
    (4, 6, 8),
    (6, 8, 12),
    (8, 12, 16),
    (12, 16, 20),
    (16, 20, 24),
    (24, 24, 28),
)


class Verdict(str, Enum):
    CONVERGENT = "Convergent"
    DIVERGENT = "Divergent"
    INCONCLUSIVE = "Inconclusive"


@dataclass
class QuadratureResult:
    value: float
    abs_error_estimate: float
    verdict: Verdict
    evaluations: int = 0
    growth_exponent: Optional[float] = None
    logarithmic: bool = False

    @property
    def convergent(self) -> bool:
        return self.verdict == Verdict.CONVERGENT

    @property
    def divergent(self) -> bool:
        return self.verdict == Verdict.DIVERGENT

    @property
    def inconclusive(self) -> bool:
        return self.verdict == Verdict.INCONCLUSIVE

    def scaled(self, factor: float) -> "QuadratureResult":
        return replace(self, value=self.value * factor,
                       abs_error_estimate=self.abs_error_estimate * abs(factor))

    def to_dict(self) -> Dict[str, Any]:
        return {
            "value": self.value,
            "abs_error_estimate": self.abs_error_estimate,
            "verdict": self.verdict.value,
            "evaluations": self.evaluations,
            "growth_exponent": self.growth_exponent,
            "logarithmic": self.logarithmic,
        }


@dataclass(frozen=True)
class QuadratureSettings:
    tol_smooth: float = TOL_SMOOTH
    tol_singular: float = TOL_SINGULAR
    abs_floor: float = ABS_FLOOR
    divergence_slope: float = DIVERGENCE_SLOPE
    divergence_residual: float = DIVERGENCE_RESIDUAL
    cutoff_decades: Tuple[int, int] = CUTOFF_DECADES
    grading_ratio: float = GRADING_RATIO
    quad_limit: int = QUAD_LIMIT
    max_nodes: int = MAX_NODES

    @classmethod
    def from_config(cls, section: Optional[Dict[str, Any]]) -> "QuadratureSettings":
        if not section:
            return cls()
        known = {f for f in cls.__dataclass_fields__}
        kwargs = {k: v for k, v in section.items() if k in known}
        if "cutoff_decades" in kwargs:
            kwargs["cutoff_decades"] = tuple(int(k) for k in kwargs["cutoff_decades"])
        return cls(**kwargs)

    def refined(self, factor: float) -> "QuadratureSettings":
        return replace(self, tol_smooth=self.tol_smooth / factor,
                       tol_singular=self.tol_singular / factor)

    @property
    def cutoff_exponents(self) -> List[int]:
        lo, hi = self.cutoff_decades
        return list(range(lo, hi + 1))


DEFAULT_SETTINGS = QuadratureSettings()


@dataclass(frozen=True)
class RadialProfile:
    """A radial integrand g(|y − center|): ∫_{B(c,r)} g = σ_{n−1}∫₀^r g(t)t^{n−1} dt."""
    profile: Callable[[float], float]
    dimension: int
    breakpoints: Tuple[float, ...] = ()

    def integrate(self, radius: float, tol: float = TOL_SMOOTH, lower: float = 0.0,
                  settings: QuadratureSettings = DEFAULT_SETTINGS) -> QuadratureResult:
        return _radial_quad(self.profile, self.dimension, lower, radius,
                            self.breakpoints, tol, settings)


def _accepts(value: float, error: float, tol: float, settings: QuadratureSettings) -> bool:
    return error <= max(tol * abs(value), settings.abs_floor)


def _radial_edges(lower: float, upper: float, breakpoints: Sequence[float]) -> List[float]:
    """Segment ends: one per decade when lower > 0, plus the profile's breakpoints."""
    edges = {float(lower), float(upper)}
    if lower > 0:
        decades = int(math.ceil(math.log10(upper / lower)))
        if decades > 1:
            edges.update(float(e) for e in np.geomspace(lower, upper, decades + 1)[1:-1])
    edges.update(float(b) for b in breakpoints if lower < b < upper)
    return sorted(edges)


def _sign_of_profile(g: Callable[[float], float], lower: float, upper: float) -> int:
    """+1 or -1 when g keeps one sign on SIGN_SAMPLES log-spaced radii, else 0."""
    start = lower if lower > 0 else upper * 1e-12
    samples = np.array([g(t) for t in np.geomspace(start, upper, SIGN_SAMPLES)])
    samples = samples[np.isfinite(samples)]
    if samples.size and np.all(samples >= 0):
        return 1
    if samples.size and np.all(samples <= 0):
        return -1
    return 0


def _radial_quad(g: Callable[[float], float], n: int, lower: float, upper: float,
                 breakpoints: Sequence[float], tol: float,
                 settings: QuadratureSettings) -> QuadratureResult:
    sigma = sphere_area(n)

    def integrand(t):
        return g(t) * t ** (n - 1)

    value, error, evaluations = 0.0, 0.0, 0
    edges = _radial_edges(lower, upper, breakpoints)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        for a, b in zip(edges[:-1], edges[1:]):
            out = integrate.quad(integrand, a, b, epsabs=0.0, epsrel=tol,
                                 limit=settings.quad_limit, full_output=1)
            if len(out) > 3:
                logger.debug("radial quadrature on [%g, %g]: %s", a, b, out[3])
            value += out[0]
            error += out[1]
            evaluations += int(out[2].get("neval", 0))
    value *= sigma
    error *= sigma
    if not math.isfinite(value):
        return QuadratureResult(value, math.inf, Verdict.INCONCLUSIVE, evaluations)
    if value != 0.0:
        sign = _sign_of_profile(g, lower, upper)
        evaluations += SIGN_SAMPLES
        if sign * value < 0:
            logger.debug("radial quadrature on [%g, %g] has the wrong sign: %g", lower, upper, value)
            return QuadratureResult(float(value), math.inf, Verdict.INCONCLUSIVE, evaluations)
    verdict = Verdict.CONVERGENT if _accepts(value, error, tol, settings) else Verdict.INCONCLUSIVE
    return QuadratureResult(float(value), float(error), verdict, evaluations)


# -- node tables ---------------------------------------------------------------

@lru_cache(maxsize=None)
def sphere_rule(n: int, m: int) -> Tuple[np.ndarray, np.ndarray]:
    """
    Product rule on the unit sphere S^{n−1}.

    S¹ uses 4m equispaced angles offset by half a step, exact for
    trigonometric polynomials of degree below 4m and never touching the
    axes. For n ≥ 3 the first coordinate x carries the weight
    (1 − x²)^{(n−3)/2}; each hemisphere x ≷ 0 gets its own m-point
    Gauss–Jacobi rule so integrands with a kink on x = 0 keep full order,
    and the rest recurses on S^{n−2}.

    Returns:
        (directions of shape (k, n), weights of shape (k,)) with weights
        summing to the sphere area
    """
    if n == 1:
        dirs = np.array([[1.0], [-1.0]])
        weights = np.array([1.0, 1.0])
    elif n == 2:
        count = 4 * m
        theta = (np.arange(count) + 0.5) * (2.0 * math.pi / count)
        dirs = np.column_stack([np.cos(theta), np.sin(theta)])
        weights = np.full(count, 2.0 * math.pi / count)
    else:
        a = (n - 3) / 2.0
        xi, w = roots_jacobi(m, a, 0.0)
        x = (1.0 + xi) / 2.0
        wx = w * 2.0 ** (-a - 1.0) * (1.0 + x) ** a
        x = np.concatenate([-x[::-1], x])
        wx = np.concatenate([wx[::-1], wx])
        sub_dirs, sub_weights = sphere_rule(n - 1, m)
        s = np.sqrt(np.clip(1.0 - x ** 2, 0.0, None))
        first = np.repeat(x, len(sub_weights))
        rest = (s[:, None, None] * sub_dirs[None, :, :]).reshape(-1, n - 1)
        dirs = np.column_stack([first, rest])
        weights = np.outer(wx, sub_weights).ravel()
    dirs.setflags(write=False)
    weights.setflags(write=False)
    return dirs, weights


@lru_cache(maxsize=None)
def _legendre(q: int) -> Tuple[np.ndarray, np.ndarray]:
    return roots_legendre(q)


@lru_cache(maxsize=None)
def _jacobi_inner(q: int, beta: float) -> Tuple[np.ndarray, np.ndarray]:
    """Nodes u on (0,1) and weights ŵ with ∫₀¹ u^β g(u) du ≈ Σ ŵ_i g(u_i)."""
    xi, w = roots_jacobi(q, 0.0, beta)
    return (1.0 + xi) / 2.0, w / 2.0 ** (beta + 1.0)


# -- polar integration ------------------------------------------------------------

@dataclass(frozen=True)
class _Site:
    point: np.ndarray
    exponent: float
    graded: bool
    cutoff: float = 0.0


def _cell_rule(ball: Ball, sites: Sequence[_Site], k: int, spheres: Sequence[Sphere],
               m: int, q: int, levels: int, ratio: float) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Directions, radial nodes and combined weights for the cell of site k."""
    site = sites[k]
    a = site.point
    n = a.size
    dirs, omega = sphere_rule(n, m)
    center = np.asarray(ball.center)

    ac = a - center
    b = dirs @ ac
    d = ac @ ac - ball.radius ** 2
    rho = -b + np.sqrt(np.clip(b * b - d, 0.0, None))
    for j, other in enumerate(sites):
        if j == k:
            continue
        v = other.point - a
        denom = dirs @ v
        with np.errstate(divide="ignore"):
            plane = np.where(denom > 0, (v @ v) / (2.0 * np.where(denom > 0, denom, 1.0)), np.inf)
        rho = np.minimum(rho, plane)
    rho = np.clip(rho, 0.0, None)

    columns = []
    for sphere in spheres:
        sc = a - np.asarray(sphere.center)
        bs = dirs @ sc
        disc = bs * bs - (sc @ sc - sphere.radius ** 2)
        root = np.sqrt(np.clip(disc, 0.0, None))
        for t in (-bs - root, -bs + root):
            valid = (disc > 0) & (t > 0) & (t < rho)
            columns.append(np.where(valid, t, rho))
    breaks = np.column_stack(columns) if columns else np.empty((rho.size, 0))
    first = np.min(np.column_stack([breaks, rho]), axis=1)

    eps = site.cutoff
    if site.graded:
        count = levels
        if eps > 0:
            span = max(float(first.max()), eps) / eps
            count = max(levels, int(math.ceil(math.log(span) / math.log(1.0 / ratio))) + 1)
        graded = first[:, None] * ratio ** np.arange(1, count + 1)[None, :]
    else:
        graded = np.empty((rho.size, 0))

    # long outer rays (global integrals) get geometric breakpoints as well
    reach = rho[rho > 0] / np.maximum(first[rho > 0], np.finfo(float).tiny)
    span = float(reach.max()) if reach.size else 1.0
    stretch = 0
    if span > 1.0 / ratio:
        stretch = min(MAX_STRETCH, int(math.ceil(math.log(span) / math.log(1.0 / ratio))))
    stretched = np.minimum(first[:, None] * ratio ** -np.arange(1, stretch + 1)[None, :], rho[:, None])

    ends = np.sort(np.column_stack([graded, breaks, stretched, rho]), axis=1)
    if eps > 0:
        ends = np.maximum(ends, eps)

    x, w = _legendre(q)
    lo, hi = ends[:, :-1], ends[:, 1:]
    half = (hi - lo) / 2.0
    t_outer = lo[..., None] + half[..., None] * (x + 1.0)
    w_outer = half[..., None] * w * t_outer ** (n - 1)

    h = ends[:, 0]
    if eps > 0:
        half0 = (h - eps) / 2.0
        t_inner = eps + half0[:, None] * (x + 1.0)
        w_inner = half0[:, None] * w * t_inner ** (n - 1)
    else:
        beta = n - 1 - site.exponent
        u, wu = _jacobi_inner(q, float(beta))
        t_inner = h[:, None] * u
        with np.errstate(divide="ignore", invalid="ignore"):
            w_inner = h[:, None] ** (beta + 1.0) * wu * t_inner ** (n - 1 - beta)
        w_inner = np.nan_to_num(w_inner, nan=0.0, posinf=0.0)

    radii = np.concatenate([t_inner, t_outer.reshape(rho.size, -1)], axis=1)
    weights = np.concatenate([w_inner, w_outer.reshape(rho.size, -1)], axis=1) * omega[:, None]
    return dirs, radii, weights


def _polar_level(f: ScalarField, ball: Ball, sites: Sequence[_Site], spheres: Sequence[Sphere],
                 m: int, q: int, levels: int, ratio: float) -> Tuple[float, int, bool]:
    total = 0.0
    count = 0
    for k, site in enumerate(sites):
        dirs, radii, weights = _cell_rule(ball, sites, k, spheres, m, q, levels, ratio)
        per_ray = radii.shape[1]
        chunk = max(1, CHUNK_POINTS // max(per_ray, 1))
        for start in range(0, dirs.shape[0], chunk):
            d = dirs[start:start + chunk]
            t = radii[start:start + chunk]
            w = weights[start:start + chunk]
            mask = w > 0
            if not mask.any():
                continue
            points = site.point + t[..., None] * d[:, None, :]
            vals = f.values(points[mask])
            count += vals.size
            if not np.all(np.isfinite(vals)):
                return math.nan, count, False
            total += float(np.dot(w[mask], vals))
    return total, count, True


def _estimate_nodes(n: int, sites: Sequence[_Site], spheres: Sequence[Sphere],
                    m: int, q: int, levels: int) -> int:
    rays = sphere_rule(n, m)[1].size
    return len(sites) * rays * q * (levels + 2 * len(spheres) + 2)


def _polar(f: ScalarField, ball: Ball, sites: Sequence[_Site], spheres: Sequence[Sphere],
           tol: float, settings: QuadratureSettings) -> QuadratureResult:
    n = ball.dimension
    previous = None
    error = math.inf
    evaluations = 0
    for m, q, levels in LEVELS:
        if _estimate_nodes(n, sites, spheres, m, q, levels) > settings.max_nodes:
            logger.debug("node cap reached before level (%d, %d, %d)", m, q, levels)
            break
        value, count, finite = _polar_level(f, ball, sites, spheres, m, q, levels,
                                            settings.grading_ratio)
        evaluations += count
        if not finite:
            logger.debug("non-finite integrand values on %s", ball)
            return QuadratureResult(math.nan, math.inf, Verdict.INCONCLUSIVE, evaluations)
        if previous is not None:
            error = abs(value - previous)
            if _accepts(value, error, tol, settings):
                return QuadratureResult(value, error, Verdict.CONVERGENT, evaluations)
            logger.debug("level (%d, %d, %d): value %.10g, change %.3g", m, q, levels, value, error)
        previous = value
    value = previous if previous is not None else math.nan
    return QuadratureResult(value, error, Verdict.INCONCLUSIVE, evaluations)


# -- dispatch -----------------------------------------------------------------------

def _check_ball(f: ScalarField, ball: Ball) -> None:
    if ball.dimension != f.dimension:
        raise DimensionMismatch(f.dimension, ball.dimension, what="ball")


def _active_poles(f: ScalarField, ball: Ball):
    return [p for p in f.poles if ball.contains(p.point)]


def _co_centered_radii(f: ScalarField, ball: Ball) -> List[float]:
    return [s.radius for s in f.spheres if same_point(s.center, ball.center)]


def _radial_profile(f: ScalarField, ball: Ball) -> Callable[[float], float]:
    center = np.asarray(ball.center)
    direction = np.zeros(ball.dimension)
    direction[0] = 1.0

    def g(t):
        return float(f.values((center + t * direction)[None, :])[0])

    return g


def _sites(f: ScalarField, ball: Ball, cutoffs: Optional[Dict[int, float]] = None) -> List[_Site]:
    poles = _active_poles(f, ball)
    if not poles:
        return [_Site(np.asarray(ball.center), 0.0, graded=False)]
    cutoffs = cutoffs or {}
    return [_Site(np.asarray(p.point, dtype=float), max(p.exponent, 0.0), True, cutoffs.get(i, 0.0))
            for i, p in enumerate(poles)]


def _divergent_indices(f: ScalarField, ball: Ball) -> List[int]:
    n = ball.dimension
    return [i for i, p in enumerate(_active_poles(f, ball)) if p.exponent >= n - 1e-12]


def _cutoff_integral(f: ScalarField, ball: Ball, eps: float, tol: float,
                     settings: QuadratureSettings, excluded: Sequence[int]) -> QuadratureResult:
    """∫ over the ball minus B(pole, eps) for each excluded active pole."""
    poles = _active_poles(f, ball)
    if (len(poles) == 1 and f.is_radial_about(ball.center)
            and same_point(poles[0].point, ball.center)):
        return _radial_quad(_radial_profile(f, ball), ball.dimension, eps, ball.radius,
                            _co_centered_radii(f, ball), tol, settings)
    spheres = [s for s in f.spheres if ball.meets_sphere(s)]
    sites = _sites(f, ball, {i: eps for i in excluded})
    return _polar(f, ball, sites, spheres, tol, settings)


def _reverses(steps: np.ndarray) -> bool:
    """True when some increment outgrows every earlier one with the opposite sign."""
    for k in range(1, steps.size):
        before = steps[:k]
        if (np.all(before > 0) or np.all(before < 0)) and steps[k] * before[0] < 0 \
                and abs(steps[k]) > np.max(np.abs(before)):
            return True
    return False


def classify_cutoff_series(cutoffs: Sequence[float], values: Sequence[float], tol: float,
                           settings: QuadratureSettings = DEFAULT_SETTINGS,
                           evaluations: int = 0) -> QuadratureResult:
    """
    Decide convergence of I(ε) as ε → 0 from samples at decreasing cutoffs.

    A series whose increments jump against their own direction is
    Inconclusive. Convergent when the two smallest cutoffs agree within
    tol. Otherwise the increments must keep one sign and their rate per
    unit of log(1/ε) is fitted as A·ε^g. A slope g below the divergence
    threshold is a power divergence, |g| within it a logarithmic one, and
    g above it a convergent tail I(ε) = L − Cε^g whose extrapolated limit
    is accepted when its error is within tol.
    """
    eps = np.asarray(cutoffs, dtype=float)
    vals = np.asarray(values, dtype=float)
    order = np.argsort(eps)[::-1]
    eps, vals = eps[order], vals[order]
    last, prev = float(vals[-1]), float(vals[-2])
    if not np.all(np.isfinite(vals)):
        return QuadratureResult(last, math.inf, Verdict.INCONCLUSIVE, evaluations)
    steps = np.diff(vals)
    inconclusive = QuadratureResult(last, abs(last - prev), Verdict.INCONCLUSIVE, evaluations)
    if _reverses(steps):
        logger.debug("cutoff series reverses direction: %s", vals.tolist())
        return inconclusive
    if _accepts(last, abs(last - prev), tol, settings):
        return QuadratureResult(last, abs(last - prev), Verdict.CONVERGENT, evaluations)

    if not (np.all(steps > 0) or np.all(steps < 0)):
        return inconclusive
    sign = 1.0 if steps[0] > 0 else -1.0
    rates = np.abs(steps) / np.log(eps[:-1] / eps[1:])
    fit = fit_power_law(np.sqrt(eps[:-1] * eps[1:]), rates)
    if not math.isfinite(fit.slope) or fit.residual >= settings.divergence_residual:
        return inconclusive

    g = fit.slope
    if g < settings.divergence_slope:
        return QuadratureResult(sign * math.inf, math.inf, Verdict.DIVERGENT, evaluations,
                                growth_exponent=-g)
    if g <= -settings.divergence_slope:
        return QuadratureResult(sign * math.inf, math.inf, Verdict.DIVERGENT, evaluations,
                                growth_exponent=0.0, logarithmic=True)

    # I(ε) = L − Cε^g, C taken from the last increment
    scale = float(steps[-1]) / (eps[-2] ** g - eps[-1] ** g)
    tail = scale * eps[-1] ** g
    limit = last + tail
    error = abs(tail) * max(fit.residual, tol)
    if _accepts(limit, error, tol, settings):
        return QuadratureResult(limit, error, Verdict.CONVERGENT, evaluations)
    return QuadratureResult(limit, error, Verdict.INCONCLUSIVE, evaluations)


def _default_tol(f: ScalarField, ball: Ball, settings: QuadratureSettings) -> float:
    return settings.tol_singular if _active_poles(f, ball) else settings.tol_smooth


def divergence_probe(f: ScalarField, ball: Ball, cutoffs: Optional[Sequence[float]] = None,
                     tol: Optional[float] = None,
                     settings: QuadratureSettings = DEFAULT_SETTINGS) -> QuadratureResult:
    """
    Integrate `f` over the ball with a hole of radius ε around its singular
    points, for each ε in `cutoffs`, and classify the series.

    Args:
        f: Integrand
        ball: Integration ball
        cutoffs: Decreasing ε list (default radius·10^{−k}, k from the settings)
        tol: Relative tolerance of each cutoff integral and of the Cauchy test

    Returns:
        QuadratureResult with a Convergent, Divergent or Inconclusive verdict
    """
    _check_ball(f, ball)
    if cutoffs is None:
        cutoffs = [ball.radius * 10.0 ** (-k) for k in settings.cutoff_exponents]
    cutoffs = sorted((float(c) for c in cutoffs), reverse=True)
    if len(cutoffs) < 4 or math.log10(cutoffs[0] / cutoffs[-1]) < 3 - 1e-9:
        raise ParameterOutOfRange("divergence probe needs >= 4 cutoffs spanning >= 3 decades")
    tol = settings.tol_singular if tol is None else tol

    excluded = list(range(len(_active_poles(f, ball))))
    if not excluded:
        return integrate_ball(f, ball, tol, settings)

    values, evaluations = [], 0
    for eps in cutoffs:
        result = _cutoff_integral(f, ball, eps, tol, settings, excluded)
        values.append(result.value)
        evaluations += result.evaluations
    verdict = classify_cutoff_series(cutoffs, values, tol, settings, evaluations)
    logger.debug("cutoff series on %s: %s", ball, verdict.verdict.value)
    return verdict


def integrate_ball(f: ScalarField, ball: Ball, tol: Optional[float] = None,
                   settings: QuadratureSettings = DEFAULT_SETTINGS) -> QuadratureResult:
    """
    ∫_B f(y) dy with an error estimate and a convergence verdict.

    Never raises on non-convergence: the verdict is Inconclusive instead.
    """
    _check_ball(f, ball)
    support = f.support_ball()
    if support is not None:
        gap = float(np.linalg.norm(np.asarray(support.center) - np.asarray(ball.center)))
        if gap >= support.radius + ball.radius:
            return QuadratureResult(0.0, 0.0, Verdict.CONVERGENT, 0)
        if ball.contains_ball(support) and support.radius < ball.radius:
            ball = support

    if f.is_constant:
        value = float(f.values(np.asarray(ball.center)[None, :])[0]) * ball.volume
        return QuadratureResult(value, 0.0, Verdict.CONVERGENT, 1)

    tol = _default_tol(f, ball, settings) if tol is None else tol
    divergent = _divergent_indices(f, ball)
    if divergent:
        cutoffs = [ball.radius * 10.0 ** (-k) for k in settings.cutoff_exponents]
        values, evaluations = [], 0
        for eps in cutoffs:
            result = _cutoff_integral(f, ball, eps, tol, settings, divergent)
            values.append(result.value)
            evaluations += result.evaluations
        return classify_cutoff_series(cutoffs, values, tol, settings, evaluations)

    if f.is_radial_about(ball.center):
        return _radial_quad(_radial_profile(f, ball), ball.dimension, 0.0, ball.radius,
                            _co_centered_radii(f, ball), tol, settings)

    spheres = [s for s in f.spheres if ball.meets_sphere(s)]
    return _polar(f, ball, _sites(f, ball), spheres, tol, settings)


def kernel(n: int, pole, s: float) -> RadialPower:
    """|pole − y|^{−s}."""
    return RadialPower(n, 1.0, s, pole)


def integrate_singular_kernel(f: ScalarField, pole, s: float, ball: Ball,
                              tol: Optional[float] = None,
                              settings: QuadratureSettings = DEFAULT_SETTINGS) -> QuadratureResult:
    """∫_B f(y)/|pole − y|^s dy; the kernel pole joins the integrand's poles."""
    _check_ball(f, ball)
    if not math.isfinite(s):
        raise ParameterOutOfRange(f"kernel exponent must be finite, got {s}")
    point = as_point(pole, f.dimension)
    integrand = Product([f, kernel(f.dimension, point, s)])
    if tol is None:
        tol = settings.tol_singular
    return integrate_ball(integrand, ball, tol, settings)


def ball_average(f: ScalarField, ball: Ball, tol: Optional[float] = None,
                 settings: QuadratureSettings = DEFAULT_SETTINGS) -> QuadratureResult:
    """|B|^{−1}∫_B f."""
    return integrate_ball(f, ball, tol, settings).scaled(1.0 / ball.volume)
