"""
Stummel p-moduli η_{α,p}V(r) = sup_x (∫_{B(x,r)} |V(y)|^p |x−y|^{α−n} dy)^{1/p},
modulus curves and membership in the classes S̃_{α,p} ⊃ S_{α,p}.
"""
import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from ..utils.parallel import ordered_map
from .errors import ParameterOutOfRange
from .fields import AbsPower, Ball, ScalarField, as_point
from .fitting import fit_power_law
from .growth import default_candidates
from .quadrature import (DEFAULT_SETTINGS, QuadratureResult, QuadratureSettings,
                         integrate_singular_kernel)

logger = logging.getLogger(__name__)

RELATIVE_DROP = 1e-3
FIT_RESIDUAL = 0.10
MONOTONE_SLACK = 1e-6


def dyadic_grid(r_min: float = 1e-4, r_max: float = 1.0) -> np.ndarray:
    """r_max·2^{−k} for k = 0, 1, ... down to r_min, ascending."""
    if not 0 < r_min < r_max:
        raise ParameterOutOfRange(f"invalid dyadic grid ({r_min}, {r_max})")
    count = int(math.floor(math.log2(r_max / r_min) + 1e-9)) + 1
    return r_max * 2.0 ** -np.arange(count)[::-1]


class Membership(str, Enum):
    IN_S = "InS"
    IN_S_TILDE_ONLY = "InSTildeOnly"
    NOT_IN_S_TILDE = "NotInSTilde"
    INCONCLUSIVE = "Inconclusive"


@dataclass(frozen=True)
class StummelSettings:
    relative_drop: float = RELATIVE_DROP
    fit_residual: float = FIT_RESIDUAL
    r_min: float = 1e-4
    r_max: float = 1.0

    @classmethod
    def from_config(cls, section: Optional[Dict[str, Any]]) -> "StummelSettings":
        if not section:
            return cls()
        keys = ("relative_drop", "fit_residual", "r_min", "r_max")
        return cls(**{k: float(section[k]) for k in keys if k in section})

    def grid(self) -> np.ndarray:
        return dyadic_grid(self.r_min, self.r_max)


@dataclass
class ModulusSample:
    radius: float
    value: float
    divergent: bool = False
    inconclusive: bool = False
    witness: Tuple[float, ...] = ()
    error_estimate: float = 0.0
    growth_exponent: Optional[float] = None
    logarithmic: bool = False

    def to_dict(self) -> Dict[str, Any]:
        return {
            "r": self.radius,
            "value": self.value,
            "divergent": self.divergent,
            "inconclusive": self.inconclusive,
            "witness": list(self.witness),
            "error_estimate": self.error_estimate,
            "growth_exponent": self.growth_exponent,
            "logarithmic": self.logarithmic,
        }


@dataclass
class ModulusCurve:
    alpha: float
    p: float
    dimension: int
    samples: List[ModulusSample]
    doubling_constant: Optional[float] = None
    small_r_slope: Optional[float] = None
    slope_residual: Optional[float] = None
    monotone: bool = True

    @property
    def radii(self) -> np.ndarray:
        return np.array([s.radius for s in self.samples])

    @property
    def values(self) -> np.ndarray:
        return np.array([s.value for s in self.samples])

    @property
    def divergent(self) -> bool:
        return any(s.divergent for s in self.samples)

    @property
    def all_divergent(self) -> bool:
        return all(s.divergent for s in self.samples)

    @property
    def inconclusive(self) -> bool:
        return any(s.inconclusive for s in self.samples)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "alpha": self.alpha,
            "p": self.p,
            "dimension": self.dimension,
            "divergent": self.divergent,
            "all_divergent": self.all_divergent,
            "doubling_constant": self.doubling_constant,
            "small_r_slope": self.small_r_slope,
            "slope_residual": self.slope_residual,
            "monotone": self.monotone,
            "samples": [s.to_dict() for s in self.samples],
        }


def _check_parameters(alpha: float, p: float) -> None:
    if not alpha > 0:
        raise ParameterOutOfRange(f"alpha must be positive, got {alpha}")
    if not p >= 1:
        raise ParameterOutOfRange(f"p must be >= 1, got {p}")


def _kernel_integral(V: ScalarField, alpha: float, p: float, x, r: float,
                     tol: Optional[float], settings: QuadratureSettings) -> QuadratureResult:
    integrand = AbsPower(V, p)
    n = V.dimension
    return integrate_singular_kernel(integrand, x, n - alpha, Ball(tuple(x), r), tol, settings)


def _reduce(r: float, p: float, cells: Sequence[Tuple[Tuple[float, ...], QuadratureResult]]) -> ModulusSample:
    for x, res in cells:
        if res.divergent:
            return ModulusSample(r, math.inf, True, False, x, math.inf,
                                 res.growth_exponent, res.logarithmic)
    x, best = max(cells, key=lambda c: c[1].value)
    mass = max(best.value, 0.0)
    value = mass ** (1.0 / p)
    error = value * (best.abs_error_estimate / mass) / p if mass > 0 else 0.0
    inconclusive = any(res.inconclusive and res.value + res.abs_error_estimate >= best.value
                       for _, res in cells)
    return ModulusSample(r, value, False, inconclusive, x, error)


def stummel_modulus(V: ScalarField, alpha: float, p: float, r: float,
                    x_candidates: Optional[Sequence[Sequence[float]]] = None,
                    tol: Optional[float] = None,
                    settings: QuadratureSettings = DEFAULT_SETTINGS,
                    workers: Optional[int] = None) -> ModulusSample:
    """
    η_{α,p}V(r) as a sup over candidate centers.

    The singular points of V are always candidates. A divergent cell makes
    the whole sample divergent; its cutoff growth exponent (or the
    logarithmic flag) is carried over.

    Raises:
        ParameterOutOfRange: α ≤ 0, p < 1 or r ≤ 0
    """
    _check_parameters(alpha, p)
    if not r > 0:
        raise ParameterOutOfRange(f"radius must be positive, got {r}")
    candidates = default_candidates(V, x_candidates or ())

    def evaluate(x):
        return _kernel_integral(V, alpha, p, x, r, tol, settings)

    results = ordered_map(evaluate, candidates, workers)
    sample = _reduce(float(r), p, list(zip(candidates, results)))
    logger.debug("eta_{%g,%g}(%g) = %s", alpha, p, r, "divergent" if sample.divergent else sample.value)
    return sample


def _doubling_estimate(radii: np.ndarray, values: np.ndarray) -> Optional[float]:
    """Largest (η_{k+1}/η_k)^{log 2 / log(r_{k+1}/r_k)} over adjacent finite samples."""
    best = None
    for k in range(len(radii) - 1):
        lo, hi = values[k], values[k + 1]
        if not (math.isfinite(lo) and math.isfinite(hi)) or lo <= 0:
            continue
        estimate = (hi / lo) ** (math.log(2.0) / math.log(radii[k + 1] / radii[k]))
        best = estimate if best is None else max(best, estimate)
    return best


def modulus_curve(V: ScalarField, alpha: float, p: float,
                  r_grid: Optional[Sequence[float]] = None,
                  x_candidates: Optional[Sequence[Sequence[float]]] = None,
                  tol: Optional[float] = None,
                  settings: QuadratureSettings = DEFAULT_SETTINGS,
                  workers: Optional[int] = None) -> ModulusCurve:
    """
    Sample r ↦ η_{α,p}V(r) and summarize it.

    The small-r slope is fitted on the first decade of the grid; the
    doubling constant is the worst adjacent-pair ratio rescaled to a
    factor-2 step.
    """
    _check_parameters(alpha, p)
    radii = np.sort(np.asarray(dyadic_grid() if r_grid is None else r_grid, dtype=float))
    candidates = default_candidates(V, x_candidates or ())
    cells = [(x, float(r)) for r in radii for x in candidates]

    def evaluate(cell):
        x, r = cell
        return _kernel_integral(V, alpha, p, x, r, tol, settings)

    results = ordered_map(evaluate, cells, workers)
    width = len(candidates)
    samples = []
    for i, r in enumerate(radii):
        block = list(zip(candidates, results[i * width:(i + 1) * width]))
        samples.append(_reduce(float(r), p, block))

    curve = ModulusCurve(float(alpha), float(p), V.dimension, samples)
    values = curve.values
    finite = np.isfinite(values)
    if finite.any():
        curve.doubling_constant = _doubling_estimate(radii, values)
        first = finite & (radii <= radii[0] * 10.0 * (1 + 1e-12))
        fit = fit_power_law(radii[first], values[first])
        if fit.points >= 2:
            curve.small_r_slope = fit.slope
            curve.slope_residual = fit.residual
        fv = values[finite]
        curve.monotone = bool(np.all(np.diff(fv) >= -MONOTONE_SLACK * np.maximum(np.abs(fv[:-1]), 1.0)))
    if curve.all_divergent:
        logger.info("modulus curve (alpha=%g, p=%g) diverges at every radius", alpha, p)
    return curve


@dataclass
class Classification:
    membership: Membership
    curve: ModulusCurve
    reason: str
    logarithmic: bool = False
    notes: List[str] = field(default_factory=list)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "membership": self.membership.value,
            "reason": self.reason,
            "logarithmic": self.logarithmic,
            "alpha": self.curve.alpha,
            "p": self.curve.p,
            "small_r_slope": self.curve.small_r_slope,
            "doubling_constant": self.curve.doubling_constant,
            "notes": self.notes,
        }


def classify_curve(curve: ModulusCurve, settings: StummelSettings = StummelSettings()) -> Classification:
    """Membership verdict for a computed curve."""
    if curve.divergent:
        first = next(s for s in curve.samples if s.divergent)
        reason = f"kernel integral diverges at r={first.radius:g}"
        if first.logarithmic:
            reason += " (logarithmically)"
        elif first.growth_exponent is not None:
            reason += f" (like eps^-{first.growth_exponent:.3g})"
        return Classification(Membership.NOT_IN_S_TILDE, curve, reason, first.logarithmic)
    if curve.inconclusive:
        return Classification(Membership.INCONCLUSIVE, curve, "unresolved quadrature cell")

    values = curve.values
    top = values[-1]
    notes = [] if curve.monotone else ["sampled curve is not monotone in r"]
    if top == 0:
        return Classification(Membership.IN_S, curve, "modulus vanishes identically", notes=notes)
    dropped = values[0] <= settings.relative_drop * top
    slope = curve.small_r_slope
    if dropped:
        if slope is None or curve.slope_residual is None or curve.slope_residual >= settings.fit_residual:
            return Classification(Membership.INCONCLUSIVE, curve,
                                  "small-r power fit residual above threshold", notes=notes)
        if slope > 0:
            return Classification(Membership.IN_S, curve,
                                  f"eta(r) ~ r^{slope:.3f} as r -> 0", notes=notes)
    return Classification(Membership.IN_S_TILDE_ONLY, curve,
                          f"finite modulus; eta(r_min)/eta(r_max) = {values[0] / top:.3g}", notes=notes)


def classify(V: ScalarField, alpha: float, p: float, r_grid: Optional[Sequence[float]] = None,
             x_candidates: Optional[Sequence[Sequence[float]]] = None,
             tol: Optional[float] = None,
             settings: QuadratureSettings = DEFAULT_SETTINGS,
             stummel_settings: StummelSettings = StummelSettings(),
             workers: Optional[int] = None) -> Classification:
    """Compute the modulus curve of V and classify it (InS, InS̃ only, not in S̃)."""
    if r_grid is None:
        r_grid = stummel_settings.grid()
    curve = modulus_curve(V, alpha, p, r_grid, x_candidates, tol, settings, workers)
    result = classify_curve(curve, stummel_settings)
    logger.info("alpha=%g, p=%g: %s (%s)", alpha, p, result.membership.value, result.reason)
    return result


def off_center_probe(V: ScalarField, alpha: float, p: float, r: float,
                     distances: Sequence[float] = (0.25, 0.5),
                     tol: Optional[float] = None,
                     settings: QuadratureSettings = DEFAULT_SETTINGS) -> List[Dict[str, Any]]:
    """
    Kernel integrals centered at pole + d·r·e₁ for each relative distance d.

    Each ball still contains the pole, so a potential whose own local
    exponent reaches n diverges at every such center.
    """
    _check_parameters(alpha, p)
    out = []
    poles = V.poles or ()
    anchor = np.asarray(poles[0].point if poles else (0.0,) * V.dimension, dtype=float)
    for d in distances:
        x = anchor.copy()
        x[0] += d * r
        x = tuple(as_point(x, V.dimension))
        res = _kernel_integral(V, alpha, p, x, r, tol, settings)
        out.append({"center": list(x), "radius": r, **res.to_dict()})
    return out


def inclusion_cross_check(V: ScalarField, alpha: float, p: float = 1.0,
                          r_grid: Optional[Sequence[float]] = None,
                          settings: QuadratureSettings = DEFAULT_SETTINGS,
                          stummel_settings: StummelSettings = StummelSettings(),
                          workers: Optional[int] = None) -> Dict[str, Any]:
    """
    Compare the classifications at α and at 2 for 1 ≤ α ≤ 2.

    Membership in S̃_α should imply membership in S̃_2; the outcome is
    reported, not asserted.
    """
    if not 1 <= alpha <= 2:
        raise ParameterOutOfRange(f"inclusion cross-check needs 1 <= alpha <= 2, got {alpha}")
    at_alpha = classify(V, alpha, p, r_grid, None, None, settings, stummel_settings, workers)
    at_two = classify(V, 2.0, p, r_grid, None, None, settings, stummel_settings, workers)
    finite = (Membership.IN_S, Membership.IN_S_TILDE_ONLY)
    consistent = not (at_alpha.membership in finite and at_two.membership not in finite)
    if not consistent:
        logger.warning("S~_%g membership without S~_2 membership observed", alpha)
    return {
        "alpha": alpha,
        "at_alpha": at_alpha.to_dict(),
        "at_two": at_two.to_dict(),
        "consistent": consistent,
    }
