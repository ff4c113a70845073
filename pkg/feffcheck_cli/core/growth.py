"""
Growth functions φ, their structural conditions and the generalized
Morrey norm ‖f‖ = sup_{x,r} (φ(r)^{−1}∫_{B(x,r)}|f|^p)^{1/p}.

The sup over x and r is taken over a finite candidate set and a
log-spaced radius grid, so every norm here is a lower-bound estimate;
divergence in r is inferred from power fits at the ends of the grid.
"""
import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy import integrate

from ..utils.parallel import ordered_map
from .errors import ConfigError, NormInconclusive, ParameterOutOfRange
from .fields import AbsPower, Ball, ScalarField, as_point
from .fitting import fit_power_law
from .quadrature import DEFAULT_SETTINGS, QuadratureSettings, Verdict, integrate_ball

logger = logging.getLogger(__name__)

R_MIN = 1e-3
R_MAX = 1e2
R_COUNT = 25

CONDITION_GRID = (1e-3, 1e3, 61)
EXTENDED_CONDITION_GRID = (1e-4, 1e4, 81)
STABILITY_TOLERANCE = 0.10


def radius_grid(r_min: float = R_MIN, r_max: float = R_MAX, count: int = R_COUNT) -> np.ndarray:
    """Log-spaced radii from r_min to r_max inclusive."""
    if not 0 < r_min < r_max or count < 2:
        raise ParameterOutOfRange(f"invalid radius grid ({r_min}, {r_max}, {count})")
    return np.logspace(math.log10(r_min), math.log10(r_max), int(count))


class GrowthFunction:
    """φ: (0, ∞) → (0, ∞)."""

    KINDS = ("Power", "LogPower", "Constant", "Tabulated")

    def __init__(self, kind: str, exponent: float = 0.0,
                 radii: Optional[Sequence[float]] = None,
                 values: Optional[Sequence[float]] = None):
        if kind not in self.KINDS:
            raise ParameterOutOfRange(f"unknown growth function kind '{kind}'")
        self.kind = kind
        self.exponent = float(exponent)
        if kind == "LogPower" and self.exponent <= 0:
            raise ParameterOutOfRange("LogPower needs a positive exponent")
        if kind == "Tabulated":
            radii = np.asarray(radii, dtype=float)
            values = np.asarray(values, dtype=float)
            if radii.size < 2 or radii.shape != values.shape:
                raise ParameterOutOfRange("Tabulated φ needs matching knot lists")
            if np.any(radii <= 0) or np.any(np.diff(radii) <= 0) or np.any(values <= 0):
                raise ParameterOutOfRange("Tabulated φ needs positive increasing radii and positive values")
            self._log_r = np.log(radii)
            self._log_v = np.log(values)
            self._slopes = np.diff(self._log_v) / np.diff(self._log_r)

    @classmethod
    def power(cls, exponent: float) -> "GrowthFunction":
        return cls("Power", exponent)

    @classmethod
    def log_power(cls, exponent: float) -> "GrowthFunction":
        return cls("LogPower", exponent)

    @classmethod
    def constant(cls) -> "GrowthFunction":
        return cls("Constant")

    @classmethod
    def tabulated(cls, radii, values) -> "GrowthFunction":
        return cls("Tabulated", radii=radii, values=values)

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        if self.kind == "Power":
            out = t ** self.exponent
        elif self.kind == "LogPower":
            out = np.log1p(t ** self.exponent)
        elif self.kind == "Constant":
            out = np.ones_like(t)
        else:
            out = np.exp(self.log_value(np.log(t)))
        return float(out) if out.ndim == 0 else out

    def log_value(self, log_t):
        """log φ(e^s) at s = log_t, without forming e^s."""
        s = np.asarray(log_t, dtype=float)
        if self.kind == "Power":
            out = self.exponent * s
        elif self.kind == "LogPower":
            out = np.log(np.logaddexp(0.0, self.exponent * s))
        elif self.kind == "Constant":
            out = np.zeros_like(s)
        else:
            out = np.interp(s, self._log_r, self._log_v)
            out = np.where(s < self._log_r[0], self._log_v[0] + self._slopes[0] * (s - self._log_r[0]), out)
            out = np.where(s > self._log_r[-1], self._log_v[-1] + self._slopes[-1] * (s - self._log_r[-1]), out)
        return float(out) if out.ndim == 0 else out

    @property
    def tail_exponent(self) -> Tuple[float, bool]:
        """(λ, logarithmic) with φ(t) ~ t^λ (times log t when flagged) as t → ∞."""
        if self.kind == "Power":
            return self.exponent, False
        if self.kind == "LogPower":
            return 0.0, True
        if self.kind == "Constant":
            return 0.0, False
        return float(self._slopes[-1]), False

    def describe(self) -> Dict[str, Any]:
        out: Dict[str, Any] = {"kind": self.kind}
        if self.kind in ("Power", "LogPower"):
            out["exponent"] = self.exponent
        if self.kind == "Tabulated":
            out["radii"] = np.exp(self._log_r).tolist()
            out["values"] = np.exp(self._log_v).tolist()
        return out

    def __repr__(self) -> str:
        return f"GrowthFunction({self.describe()})"

    @classmethod
    def from_record(cls, record: Dict[str, Any], params: Dict[str, float]) -> "GrowthFunction":
        """Build φ from {"kind": ..., "exponent": number or token}."""
        kind = record.get("kind", "Power")
        exponent = record.get("exponent", "n_minus_alpha_p")
        if isinstance(exponent, str):
            if exponent not in params:
                raise ConfigError("growth.phi.exponent", f"unknown parameter token '{exponent}'")
            exponent = params[exponent]
        try:
            return cls(kind, float(exponent), record.get("radii"), record.get("values"))
        except ParameterOutOfRange as e:
            raise ConfigError("growth.phi", str(e))


class ConditionId(str, Enum):
    ALMOST_INCREASING = "AlmostIncreasing"
    ALMOST_DECREASING_RATIO = "AlmostDecreasingRatio"
    NAKAI = "Nakai"


@dataclass
class ConditionReport:
    """
    Empirical check of one structural condition.

    `constant` is reported as an almost-monotonicity constant K ≥ 1
    (sup of the violated ratio); `stated_constant` is the C of the
    condition as usually written. "holds" means finite on the grid and
    within 10% of the value on a grid extended one decade per side.
    """
    condition: ConditionId
    holds: bool
    constant: float
    witness: Tuple[float, ...]
    extended_constant: float
    stated_constant: float
    notes: List[str] = field(default_factory=list)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "condition": self.condition.value,
            "holds": self.holds,
            "constant": self.constant,
            "witness": list(self.witness),
            "extended_constant": self.extended_constant,
            "stated_constant": self.stated_constant,
            "notes": self.notes,
        }


def _pair_sup(ratio: np.ndarray, t: np.ndarray) -> Tuple[float, Tuple[float, float]]:
    """max over i ≤ j of ratio[i, j]."""
    masked = np.where(np.triu(np.ones_like(ratio, dtype=bool)), ratio, -np.inf)
    i, j = np.unravel_index(int(np.argmax(masked)), masked.shape)
    return float(masked[i, j]), (float(t[i]), float(t[j]))


def _almost_increasing(phi: GrowthFunction, t: np.ndarray):
    values = phi(t)
    return _pair_sup(values[:, None] / values[None, :], t)


def _almost_decreasing_ratio(phi: GrowthFunction, t: np.ndarray, n: int):
    psi = phi(t) / t ** n
    return _pair_sup(psi[None, :] / psi[:, None], t)


def nakai_tail(phi: GrowthFunction, delta: float, n: int, p: float, alpha: float,
               tol: float = 1e-10) -> float:
    """∫_δ^∞ φ(t)/t^{(n+1) − (p/2)(α+1)} dt, integrated in log t."""
    e = (n + 1) - 0.5 * p * (alpha + 1)
    lam, _ = phi.tail_exponent
    if lam + 1 - e >= 0:
        return math.inf

    # exponent tends to -inf as u grows, so np.exp underflows to 0 instead of overflowing
    def integrand(u):
        return float(np.exp(phi.log_value(u) + u * (1 - e)))

    value, _ = integrate.quad(integrand, math.log(delta), math.inf, epsabs=0.0, epsrel=tol, limit=200)
    return float(value)


def _nakai(phi: GrowthFunction, t: np.ndarray, n: int, p: float, alpha: float):
    target = 0.5 * p * (1 - alpha)
    ratios = np.array([nakai_tail(phi, d, n, p, alpha) / d ** target for d in t])
    k = int(np.argmax(ratios))
    return float(ratios[k]), (float(t[k]),)


def _check_nakai_range(n: int, p: float, alpha: float) -> None:
    if not 1 < alpha < n:
        raise ParameterOutOfRange(f"Nakai's condition needs 1 < alpha < n, got alpha={alpha}, n={n}")
    if not 1 < p < n / alpha:
        raise ParameterOutOfRange(f"Nakai's condition needs 1 < p < n/alpha, got p={p}")


def check_condition(phi: GrowthFunction, condition, n: int, p: Optional[float] = None,
                    alpha: Optional[float] = None,
                    grid: Tuple[float, float, int] = CONDITION_GRID,
                    extended_grid: Tuple[float, float, int] = EXTENDED_CONDITION_GRID) -> ConditionReport:
    """
    Check (a1) almost increasing, (a2) almost decreasing φ(t)/tⁿ, or
    (a3) Nakai's tail condition on a log grid and on an extended grid.

    Raises:
        ParameterOutOfRange: Nakai's condition outside 1 < α < n, 1 < p < n/α
    """
    condition = ConditionId(condition)
    base = radius_grid(*grid)
    extended = radius_grid(*extended_grid)

    if condition == ConditionId.ALMOST_INCREASING:
        constant, witness = _almost_increasing(phi, base)
        extended_constant, _ = _almost_increasing(phi, extended)
    elif condition == ConditionId.ALMOST_DECREASING_RATIO:
        constant, witness = _almost_decreasing_ratio(phi, base, n)
        extended_constant, _ = _almost_decreasing_ratio(phi, extended, n)
    else:
        if p is None or alpha is None:
            raise ParameterOutOfRange("Nakai's condition needs p and alpha")
        _check_nakai_range(n, p, alpha)
        constant, witness = _nakai(phi, base, n, p, alpha)
        extended_constant, _ = _nakai(phi, extended, n, p, alpha)

    finite = math.isfinite(constant) and math.isfinite(extended_constant)
    stable = finite and abs(extended_constant - constant) <= STABILITY_TOLERANCE * constant
    notes = ["constants are empirical sups over the sampled grid"]
    if finite and not stable:
        notes.append(f"constant moved from {constant:.4g} to {extended_constant:.4g} on the extended grid")
    stated_constant = constant
    if condition == ConditionId.ALMOST_DECREASING_RATIO and finite and constant > 0:
        stated_constant = 1.0 / constant
    report = ConditionReport(condition, bool(stable), constant, witness, extended_constant,
                             stated_constant, notes)
    logger.info("%s for %s: holds=%s, K=%.6g", condition.value, phi.describe(), report.holds, constant)
    return report


def check_all_conditions(phi: GrowthFunction, n: int, p: float, alpha: float, **grids) -> List[ConditionReport]:
    return [check_condition(phi, c, n, p, alpha, **grids) for c in ConditionId]


# -- Morrey norm ------------------------------------------------------------------

@dataclass
class LocalAverage:
    center: Tuple[float, ...]
    radius: float
    value: float
    divergent: bool
    error_estimate: float
    verdict: str

    def to_dict(self) -> Dict[str, Any]:
        return {"center": list(self.center), "radius": self.radius, "value": self.value,
                "divergent": self.divergent, "error_estimate": self.error_estimate,
                "verdict": self.verdict}


@dataclass
class MorreyNormResult:
    value: float
    infinite: bool
    witness_center: Tuple[float, ...]
    witness_radius: float
    cells: List[LocalAverage]
    large_r_slope: Optional[float] = None
    small_r_slope: Optional[float] = None
    inconclusive_cells: int = 0
    notes: List[str] = field(default_factory=list)

    @property
    def norm(self) -> float:
        return math.inf if self.infinite else self.value

    def curve(self, center) -> List[LocalAverage]:
        c = tuple(float(v) for v in center)
        return [cell for cell in self.cells if np.allclose(cell.center, c)]

    @property
    def centers(self) -> List[Tuple[float, ...]]:
        seen: List[Tuple[float, ...]] = []
        for cell in self.cells:
            if cell.center not in seen:
                seen.append(cell.center)
        return seen

    def to_dict(self) -> Dict[str, Any]:
        return {
            "value": self.value,
            "infinite": self.infinite,
            "witness": {"center": list(self.witness_center), "radius": self.witness_radius},
            "large_r_slope": self.large_r_slope,
            "small_r_slope": self.small_r_slope,
            "inconclusive_cells": self.inconclusive_cells,
            "notes": self.notes,
        }


def default_candidates(f: ScalarField, extra: Sequence[Sequence[float]] = ()) -> List[Tuple[float, ...]]:
    """The field's singular points (or its radial center, or the origin) plus `extra`."""
    out: List[Tuple[float, ...]] = [tuple(p.point) for p in f.poles]
    if not out:
        center = f.radial_center if f.radial_center is not None else (0.0,) * f.dimension
        out.append(tuple(center))
    for x in extra:
        x = tuple(float(v) for v in as_point(x, f.dimension))
        if not any(np.allclose(x, c) for c in out):
            out.append(x)
    return out


def lattice_candidates(center: Sequence[float], spacing: float, count: int) -> List[Tuple[float, ...]]:
    """(2·count+1)^n lattice points around `center`."""
    center = np.asarray(center, dtype=float)
    offsets = np.arange(-count, count + 1) * spacing
    mesh = np.stack(np.meshgrid(*([offsets] * center.size), indexing="ij"), axis=-1).reshape(-1, center.size)
    return [tuple(center + o) for o in mesh]


def ray_candidates(center: Sequence[float], distances: Sequence[float]) -> List[Tuple[float, ...]]:
    """Points center + d·e₁; enough for the sup over x of a radial field."""
    center = np.asarray(center, dtype=float)
    e1 = np.zeros(center.size)
    e1[0] = 1.0
    return [tuple(center + d * e1) for d in distances]


def _end_slope(radii: np.ndarray, values: np.ndarray, upper: bool) -> Optional[float]:
    if upper:
        keep = radii >= radii[-1] / 10.0 * (1 - 1e-12)
    else:
        keep = radii <= radii[0] * 10.0 * (1 + 1e-12)
    keep &= np.isfinite(values) & (values > 0)
    if keep.sum() < 2:
        return None
    fit = fit_power_law(radii[keep], values[keep])
    return fit.slope if fit.residual < 0.10 else None


def morrey_norm(f: ScalarField, p: float, phi: GrowthFunction,
                x_candidates: Optional[Sequence[Sequence[float]]] = None,
                r_grid: Optional[Sequence[float]] = None, tol: Optional[float] = None,
                settings: QuadratureSettings = DEFAULT_SETTINGS,
                workers: Optional[int] = None) -> MorreyNormResult:
    """
    Grid estimate of the generalized Morrey norm of `f`.

    Args:
        f: Field
        p: Integrability exponent (> 0)
        phi: Growth function
        x_candidates: Centers; the field's singular points are always added
        r_grid: Radii (default 25 log-spaced radii in [1e-3, 1e2])
        tol: Relative quadrature tolerance per cell

    Returns:
        MorreyNormResult; `infinite` is set when a cell diverges or the
        local averages of some center keep growing at either end of the grid

    Raises:
        NormInconclusive: an unresolved cell could exceed the reported sup
    """
    if not p > 0:
        raise ParameterOutOfRange(f"p must be positive, got {p}")
    radii = np.asarray(radius_grid() if r_grid is None else r_grid, dtype=float)
    candidates = default_candidates(f, x_candidates or ())
    integrand = AbsPower(f, p)
    cells = [(x, float(r)) for x in candidates for r in radii]

    def evaluate(cell):
        x, r = cell
        return integrate_ball(integrand, Ball(x, r), tol, settings)

    results = ordered_map(evaluate, cells, workers)

    averages: List[LocalAverage] = []
    for (x, r), res in zip(cells, results):
        scale = float(phi(r))
        if res.divergent:
            averages.append(LocalAverage(x, r, math.inf, True, math.inf, res.verdict.value))
            continue
        mass = max(res.value, 0.0)
        value = (mass / scale) ** (1.0 / p)
        rel = res.abs_error_estimate / mass if mass > 0 else 0.0
        averages.append(LocalAverage(x, r, value, False, value * rel / p, res.verdict.value))

    finite = [a for a in averages if not a.divergent and math.isfinite(a.value)]
    best = max(finite, key=lambda a: a.value) if finite else averages[0]
    value = best.value if finite else 0.0

    inconclusive = [a for a, res in zip(averages, results) if res.inconclusive]
    for a in inconclusive:
        if not math.isfinite(a.value) or a.value + a.error_estimate > value * (1 + 1e-9) and a is not best:
            raise NormInconclusive(a.center, a.radius, a.error_estimate)

    infinite = any(a.divergent for a in averages)
    notes = ["sup over a finite candidate set and radius grid (lower-bound estimate)"]
    if infinite:
        divergent = next(a for a in averages if a.divergent)
        best = divergent
        notes.append(f"local integral diverges at center {divergent.center}, r={divergent.radius:g}")

    large_slope = small_slope = None
    for x in candidates:
        curve = [a for a in averages if a.center == x]
        r = np.array([a.radius for a in curve])
        v = np.array([a.value for a in curve])
        up = _end_slope(r, v, upper=True)
        down = _end_slope(r, v, upper=False)
        if x == best.center:
            large_slope, small_slope = up, down
        if up is not None and up > -settings.divergence_slope:
            infinite = True
            notes.append(f"local averages at {x} grow like r^{up:.3f} at large r")
        if down is not None and down < settings.divergence_slope:
            infinite = True
            notes.append(f"local averages at {x} grow like r^{down:.3f} as r -> 0")

    result = MorreyNormResult(value, infinite, best.center, best.radius, averages,
                              large_slope, small_slope, len(inconclusive), notes)
    logger.info("Morrey norm estimate %.6g (infinite=%s) at %s, r=%g",
                value, infinite, best.center, best.radius)
    return result
