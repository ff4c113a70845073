"""
Scalar fields on R^n with declared singularities.

Every field evaluates on batches of points (`values`, `gradients`,
`laplacians` take an (m, n) array) and publishes the structure the
quadrature needs up front: power-type local exponents at points (poles
and zeros), spheres across which it is not smooth, and whether it is
radial about a point.
"""
import logging
import math
from dataclasses import dataclass
from typing import Any, Dict, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np
from scipy.interpolate import RegularGridInterpolator
from scipy.special import gamma as gamma_fn

from .errors import (
    BoundaryPoint,
    ConfigError,
    DimensionMismatch,
    ParameterOutOfRange,
    SingularPoint,
)

logger = logging.getLogger(__name__)

# Points closer than this are treated as the same pole
POINT_MATCH = 1e-12

# Default finite-difference steps for kinds without closed-form derivatives
FD_GRADIENT_STEP = 1e-6
FD_LAPLACIAN_STEP = 1e-4


def sphere_area(n: int) -> float:
    """Surface area σ_{n−1} of the unit sphere in R^n."""
    return float(2.0 * math.pi ** (n / 2.0) / gamma_fn(n / 2.0))


def ball_volume(n: int, radius: float = 1.0) -> float:
    """Volume of B(x, radius) in R^n."""
    return sphere_area(n) * radius ** n / n


def as_point(y, dimension: int) -> np.ndarray:
    point = np.asarray(y, dtype=float).reshape(-1)
    if point.size != dimension:
        raise DimensionMismatch(dimension, point.size)
    return point


def as_points(points, dimension: int) -> np.ndarray:
    arr = np.asarray(points, dtype=float)
    if arr.ndim == 1:
        arr = arr.reshape(1, -1)
    if arr.shape[-1] != dimension:
        raise DimensionMismatch(dimension, arr.shape[-1])
    return arr


def same_point(a, b, scale: float = 1.0) -> bool:
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    return bool(np.linalg.norm(a - b) <= POINT_MATCH * max(1.0, scale, float(np.linalg.norm(a))))


def _origin(dimension: int) -> Tuple[float, ...]:
    return (0.0,) * dimension


def _as_center(center, dimension: int) -> Tuple[float, ...]:
    if center is None:
        return _origin(dimension)
    return tuple(float(c) for c in as_point(center, dimension))


@dataclass(frozen=True)
class Pole:
    """Local power behavior |f(y)| ~ |y − point|^{−exponent}.

    Negative exponents describe power-type zeros. `logarithmic` marks an
    extra log factor (exponent 0 with logarithmic=True is a pure log pole).
    """
    point: Tuple[float, ...]
    exponent: float
    logarithmic: bool = False

    @property
    def singular(self) -> bool:
        return self.exponent > 0 or self.logarithmic


class Sphere(NamedTuple):
    center: Tuple[float, ...]
    radius: float


@dataclass(frozen=True)
class Ball:
    center: Tuple[float, ...]
    radius: float

    def __post_init__(self):
        object.__setattr__(self, "center", tuple(float(c) for c in self.center))
        object.__setattr__(self, "radius", float(self.radius))
        if not self.radius > 0 or not math.isfinite(self.radius):
            raise ParameterOutOfRange(f"ball radius must be positive, got {self.radius}")

    @property
    def dimension(self) -> int:
        return len(self.center)

    @property
    def volume(self) -> float:
        return ball_volume(self.dimension, self.radius)

    def contains(self, point, closed: bool = True) -> bool:
        distance = float(np.linalg.norm(np.asarray(point, dtype=float) - np.asarray(self.center)))
        slack = POINT_MATCH * max(1.0, self.radius)
        if closed:
            return distance <= self.radius + slack
        return distance < self.radius - slack

    def contains_ball(self, other: "Ball") -> bool:
        distance = float(np.linalg.norm(np.asarray(other.center) - np.asarray(self.center)))
        return distance + other.radius <= self.radius * (1 + 1e-12)

    def meets_sphere(self, sphere: Sphere) -> bool:
        """True if `sphere` passes through the interior of this ball."""
        distance = float(np.linalg.norm(np.asarray(sphere.center) - np.asarray(self.center)))
        return abs(distance - sphere.radius) < self.radius

    def translated(self, shift) -> "Ball":
        return Ball(tuple(np.asarray(self.center) + np.asarray(shift, dtype=float)), self.radius)

    def to_dict(self) -> Dict[str, Any]:
        return {"center": list(self.center), "radius": self.radius}


def enclosing_ball(balls: Sequence[Ball]) -> Ball:
    """A ball containing every ball in `balls` (not necessarily the smallest)."""
    centers = np.array([b.center for b in balls])
    center = centers.mean(axis=0)
    radius = max(float(np.linalg.norm(np.asarray(b.center) - center)) + b.radius for b in balls)
    return Ball(tuple(center), radius)


def _merge_spheres(groups: Sequence[Sequence[Sphere]]) -> Tuple[Sphere, ...]:
    merged: List[Sphere] = []
    for group in groups:
        for sphere in group:
            if not any(abs(s.radius - sphere.radius) <= POINT_MATCH * max(1.0, s.radius)
                       and same_point(s.center, sphere.center) for s in merged):
                merged.append(Sphere(tuple(sphere.center), float(sphere.radius)))
    return tuple(merged)


def _group_by_point(poles: Sequence[Pole]) -> List[Tuple[Tuple[float, ...], List[Pole]]]:
    groups: List[Tuple[Tuple[float, ...], List[Pole]]] = []
    for pole in poles:
        for point, members in groups:
            if same_point(point, pole.point):
                members.append(pole)
                break
        else:
            groups.append((pole.point, [pole]))
    return groups


class ScalarField:
    """Base class for the field catalog."""

    kind = "ScalarField"

    def __init__(self, dimension: int):
        if int(dimension) < 1:
            raise ParameterOutOfRange(f"dimension must be positive, got {dimension}")
        self.dimension = int(dimension)

    # -- structure ---------------------------------------------------------

    @property
    def local_exponents(self) -> Tuple[Pole, ...]:
        return ()

    @property
    def poles(self) -> Tuple[Pole, ...]:
        return tuple(p for p in self.local_exponents if p.singular)

    @property
    def spheres(self) -> Tuple[Sphere, ...]:
        """Spheres across which the field is not smooth."""
        return ()

    @property
    def zero_spheres(self) -> Tuple[Sphere, ...]:
        """Spheres on which the field changes sign (kinks of |f|)."""
        return ()

    @property
    def is_constant(self) -> bool:
        return False

    @property
    def has_constant_gradient(self) -> bool:
        return self.is_constant

    @property
    def radial_center(self) -> Optional[Tuple[float, ...]]:
        return None

    def is_radial_about(self, center) -> bool:
        if self.is_constant:
            return True
        c = self.radial_center
        return c is not None and same_point(c, center)

    def support_ball(self) -> Optional[Ball]:
        return None

    @property
    def decay_exponent(self) -> Optional[float]:
        """d such that |f(y)| = O(|y|^{−d}) at infinity; None if unknown."""
        return None

    @property
    def derivative_singularities(self) -> Tuple[Tuple[float, ...], ...]:
        return tuple(p.point for p in self.local_exponents)

    def describe(self) -> Dict[str, Any]:
        return {"kind": self.kind, "dimension": self.dimension}

    # -- evaluation ----------------------------------------------------------

    def values(self, points: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def gradients(self, points: np.ndarray) -> np.ndarray:
        points = as_points(points, self.dimension)
        h = FD_GRADIENT_STEP * np.maximum(1.0, np.linalg.norm(points, axis=1))[:, None]
        grads = np.empty_like(points)
        for i in range(self.dimension):
            step = np.zeros_like(points)
            step[:, i] = h[:, 0]
            grads[:, i] = (self.values(points + step) - self.values(points - step)) / (2 * h[:, 0])
        return grads

    def laplacians(self, points: np.ndarray) -> np.ndarray:
        points = as_points(points, self.dimension)
        h = FD_LAPLACIAN_STEP
        center = self.values(points)
        total = np.zeros(points.shape[0])
        for i in range(self.dimension):
            step = np.zeros_like(points)
            step[:, i] = h
            total += self.values(points + step) + self.values(points - step) - 2 * center
        return total / h ** 2

    def _check_pole(self, point: np.ndarray) -> None:
        for pole in self.poles:
            if same_point(pole.point, point):
                raise SingularPoint(point, pole.exponent)

    def _check_derivative_point(self, point: np.ndarray) -> None:
        self._check_pole(point)
        for singular in self.derivative_singularities:
            if same_point(singular, point):
                raise SingularPoint(point)

    def eval(self, y) -> float:
        point = as_point(y, self.dimension)
        self._check_pole(point)
        return float(self.values(point[None, :])[0])

    def gradient(self, y) -> np.ndarray:
        point = as_point(y, self.dimension)
        self._check_derivative_point(point)
        return self.gradients(point[None, :])[0]

    def laplacian(self, y) -> float:
        point = as_point(y, self.dimension)
        self._check_derivative_point(point)
        return float(self.laplacians(point[None, :])[0])

    # -- algebra -------------------------------------------------------------

    def __add__(self, other: "ScalarField") -> "Sum":
        return Sum([self, other])

    def __sub__(self, other: "ScalarField") -> "Sum":
        return Sum([self, other], [1.0, -1.0])

    def __mul__(self, other):
        if isinstance(other, ScalarField):
            return Product([self, other])
        return Sum([self], [float(other)])

    __rmul__ = __mul__

    def __repr__(self) -> str:
        details = ", ".join(f"{k}={v}" for k, v in self.describe().items() if k != "kind")
        return f"{self.kind}({details})"


def finite_difference_gradient(f: ScalarField, y, h: float) -> np.ndarray:
    """Central-difference gradient of `f` at `y` with step `h`."""
    point = as_point(y, f.dimension)
    steps = np.eye(f.dimension) * h
    vals = f.values(np.vstack([point + steps, point - steps]))
    return (vals[:f.dimension] - vals[f.dimension:]) / (2 * h)


def finite_difference_laplacian(f: ScalarField, y, h: float) -> float:
    """Second-order central-difference Laplacian of `f` at `y` with step `h`."""
    point = as_point(y, f.dimension)
    steps = np.eye(f.dimension) * h
    vals = f.values(np.vstack([point[None, :], point + steps, point - steps]))
    n = f.dimension
    return float((vals[1:n + 1].sum() + vals[n + 1:].sum() - 2 * n * vals[0]) / h ** 2)


class RadialPower(ScalarField):
    """c·|y − x₀|^{−a}; exponent 0 is the constant c."""

    kind = "RadialPower"

    def __init__(self, dimension: int, coefficient: float = 1.0, exponent: float = 0.0,
                 center=None):
        super().__init__(dimension)
        self.coefficient = float(coefficient)
        self.exponent = float(exponent)
        self.center = _as_center(center, self.dimension)

    @property
    def is_constant(self) -> bool:
        return self.exponent == 0.0 or self.coefficient == 0.0

    @property
    def local_exponents(self) -> Tuple[Pole, ...]:
        if self.is_constant:
            return ()
        return (Pole(self.center, self.exponent),)

    @property
    def derivative_singularities(self):
        a = self.exponent
        smooth = self.is_constant or (a < 0 and float(a).is_integer() and int(a) % 2 == 0)
        return () if smooth else (self.center,)

    @property
    def radial_center(self):
        return self.center

    @property
    def decay_exponent(self) -> Optional[float]:
        if self.coefficient == 0.0:
            return math.inf
        return self.exponent

    def describe(self):
        return {"kind": self.kind, "coefficient": self.coefficient,
                "exponent": self.exponent, "center": list(self.center)}

    def _radius(self, points):
        return np.linalg.norm(as_points(points, self.dimension) - np.asarray(self.center), axis=1)

    def values(self, points):
        r = self._radius(points)
        if self.is_constant:
            return np.full(r.shape, self.coefficient)
        with np.errstate(divide="ignore"):
            return self.coefficient * r ** (-self.exponent)

    def gradients(self, points):
        points = as_points(points, self.dimension)
        if self.is_constant:
            return np.zeros_like(points)
        diff = points - np.asarray(self.center)
        r = np.linalg.norm(diff, axis=1)
        with np.errstate(divide="ignore", invalid="ignore"):
            scale = -self.exponent * self.coefficient * r ** (-self.exponent - 2)
        return scale[:, None] * diff

    def laplacians(self, points):
        r = self._radius(points)
        if self.is_constant:
            return np.zeros(r.shape)
        a, n = self.exponent, self.dimension
        with np.errstate(divide="ignore", invalid="ignore"):
            return self.coefficient * a * (a + 2 - n) * r ** (-a - 2)


def constant(dimension: int, value: float) -> RadialPower:
    return RadialPower(dimension, coefficient=value, exponent=0.0)


class ExampleW(ScalarField):
    """w(x) = exp(−|x|^{−1})|x|^{−(n+1)}, with the point value w(0) = 1."""

    kind = "ExampleW"

    @property
    def radial_center(self):
        return _origin(self.dimension)

    @property
    def decay_exponent(self):
        return float(self.dimension + 1)

    @property
    def derivative_singularities(self):
        return (_origin(self.dimension),)

    def _radius(self, points):
        return np.linalg.norm(as_points(points, self.dimension), axis=1)

    def values(self, points):
        t = self._radius(points)
        out = np.ones_like(t)
        inside = t > 0
        ti = t[inside]
        out[inside] = np.exp(-1.0 / ti - (self.dimension + 1) * np.log(ti))
        return out

    def _radial_factor(self, t):
        """∂w/∂x_i = w·h(t)·x_i."""
        return -(self.dimension + 1) * t ** -2 + t ** -3

    def gradients(self, points):
        points = as_points(points, self.dimension)
        t = np.linalg.norm(points, axis=1)
        with np.errstate(divide="ignore", invalid="ignore"):
            scale = self.values(points) * self._radial_factor(t)
        return scale[:, None] * points

    def laplacians(self, points):
        points = as_points(points, self.dimension)
        t = np.linalg.norm(points, axis=1)
        n = self.dimension
        with np.errstate(divide="ignore", invalid="ignore"):
            factor = 3 * (n + 1) * t ** -2 - (n + 5) * t ** -3 + t ** -4
        return self.values(points) * factor

    def hessian_diagonal(self, y) -> np.ndarray:
        """∂²w/∂x_i² at `y`, computed coordinate by coordinate."""
        point = as_point(y, self.dimension)
        self._check_derivative_point(point)
        n = self.dimension
        t = float(np.linalg.norm(point))
        g = (-(n + 1) * t ** -2 + t ** -3
             + ((n + 1) ** 2 + 2 * (n + 1)) * t ** -4 * point ** 2
             - (2 * n + 5) * t ** -5 * point ** 2
             + t ** -6 * point ** 2)
        return self.values(point[None, :])[0] * g


class ExampleV(ScalarField):
    """V(x) = 3(n+1)|x|^{−2} − (n+5)|x|^{−3} + |x|^{−4}, with V(0) = 0."""

    kind = "ExampleV"

    @property
    def local_exponents(self):
        return (Pole(_origin(self.dimension), 4.0),)

    @property
    def radial_center(self):
        return _origin(self.dimension)

    @property
    def decay_exponent(self):
        return 2.0

    @property
    def sign_change_radii(self) -> Tuple[float, float]:
        """Roots of 3(n+1)t² − (n+5)t + 1."""
        n = self.dimension
        disc = math.sqrt(n * n - 2 * n + 13)
        return ((n + 5 - disc) / (6 * (n + 1)), (n + 5 + disc) / (6 * (n + 1)))

    @property
    def zero_spheres(self):
        return tuple(Sphere(_origin(self.dimension), r) for r in self.sign_change_radii)

    @property
    def lower_bound_radius(self) -> float:
        """V ≥ 3(n+1)|x|^{−2} holds for |x| ≤ this radius."""
        return 1.0 / (self.dimension + 5)

    def profile(self, t):
        n = self.dimension
        t = np.asarray(t, dtype=float)
        with np.errstate(divide="ignore", invalid="ignore"):
            return t ** -4 * (3 * (n + 1) * t ** 2 - (n + 5) * t + 1)

    def majorant(self, t):
        """3(n+1)t^{−2} + (n+5)t^{−3} + t^{−4} ≥ |V|."""
        n = self.dimension
        t = np.asarray(t, dtype=float)
        return 3 * (n + 1) * t ** -2 + (n + 5) * t ** -3 + t ** -4

    def unit_ball_majorant(self, t):
        """(4n+9)t^{−4}, which dominates |V| for 0 < t ≤ 1."""
        return (4 * self.dimension + 9) * np.asarray(t, dtype=float) ** -4

    def values(self, points):
        t = np.linalg.norm(as_points(points, self.dimension), axis=1)
        out = np.zeros_like(t)
        inside = t > 0
        out[inside] = self.profile(t[inside])
        return out

    def gradients(self, points):
        points = as_points(points, self.dimension)
        t = np.linalg.norm(points, axis=1)
        n = self.dimension
        with np.errstate(divide="ignore", invalid="ignore"):
            dv = -6 * (n + 1) * t ** -3 + 3 * (n + 5) * t ** -4 - 4 * t ** -5
            return (dv / t)[:, None] * points

    def laplacians(self, points):
        t = np.linalg.norm(as_points(points, self.dimension), axis=1)
        n = self.dimension
        with np.errstate(divide="ignore", invalid="ignore"):
            return (6 * (n + 1) * (4 - n) * t ** -4
                    - 3 * (n + 5) * (5 - n) * t ** -5
                    + 4 * (6 - n) * t ** -6)


def make_example_pair(n: int) -> Tuple[ExampleW, ExampleV]:
    """The solution w of −Δw + Vw = 0 on B(0,1) and its potential V."""
    if n < 3:
        raise ParameterOutOfRange(f"the example pair needs n >= 3, got {n}")
    return ExampleW(n), ExampleV(n)


class Bump(ScalarField):
    """(max(0, 1 − |y−c|²/R²))^m with m ≥ 2."""

    kind = "Bump"

    def __init__(self, dimension: int, center=None, radius: float = 1.0, power: float = 2):
        super().__init__(dimension)
        if power < 2:
            raise ParameterOutOfRange(f"bump power must be >= 2, got {power}")
        if not radius > 0:
            raise ParameterOutOfRange(f"bump radius must be positive, got {radius}")
        self.center = _as_center(center, self.dimension)
        self.radius = float(radius)
        self.power = float(power)

    @property
    def radial_center(self):
        return self.center

    @property
    def spheres(self):
        return (Sphere(self.center, self.radius),)

    def support_ball(self):
        return Ball(self.center, self.radius)

    @property
    def decay_exponent(self):
        return math.inf

    @property
    def derivative_singularities(self):
        return ()

    def describe(self):
        return {"kind": self.kind, "center": list(self.center),
                "radius": self.radius, "power": self.power}

    def _s(self, points):
        diff = as_points(points, self.dimension) - np.asarray(self.center)
        rho2 = np.einsum("ij,ij->i", diff, diff)
        return diff, rho2, 1.0 - rho2 / self.radius ** 2

    def values(self, points):
        _, _, s = self._s(points)
        return np.clip(s, 0.0, None) ** self.power

    def gradients(self, points):
        diff, _, s = self._s(points)
        m, R = self.power, self.radius
        scale = np.where(s > 0, -2 * m * np.clip(s, 0.0, None) ** (m - 1) / R ** 2, 0.0)
        return scale[:, None] * diff

    def laplacians(self, points):
        _, rho2, s = self._s(points)
        m, R, n = self.power, self.radius, self.dimension
        sp = np.clip(s, 0.0, None)
        with np.errstate(divide="ignore", invalid="ignore"):
            lap = (4 * m * (m - 1) * sp ** (m - 2) * rho2 / R ** 4
                   - 2 * m * n * sp ** (m - 1) / R ** 2)
        return np.where(s > 0, lap, 0.0)


class Linear(ScalarField):
    """u(y) = a·y + b."""

    kind = "Linear"

    def __init__(self, dimension: int, slope=None, offset: float = 0.0):
        super().__init__(dimension)
        if slope is None:
            slope = np.eye(self.dimension)[0]
        self.slope = as_point(slope, self.dimension)
        self.offset = float(offset)

    @property
    def is_constant(self):
        return not np.any(self.slope)

    @property
    def has_constant_gradient(self):
        return True

    @property
    def radial_center(self):
        return _origin(self.dimension) if self.is_constant else None

    @property
    def decay_exponent(self):
        if self.is_constant:
            return math.inf if self.offset == 0.0 else 0.0
        return None

    def describe(self):
        return {"kind": self.kind, "slope": self.slope.tolist(), "offset": self.offset}

    def values(self, points):
        return as_points(points, self.dimension) @ self.slope + self.offset

    def gradients(self, points):
        points = as_points(points, self.dimension)
        return np.tile(self.slope, (points.shape[0], 1))

    def laplacians(self, points):
        return np.zeros(as_points(points, self.dimension).shape[0])


def _check_dimensions(fields: Sequence[ScalarField]) -> int:
    if not fields:
        raise ParameterOutOfRange("composite field needs at least one term")
    n = fields[0].dimension
    for f in fields[1:]:
        if f.dimension != n:
            raise DimensionMismatch(n, f.dimension, what="field")
    return n


def _common_radial_center(fields: Sequence[ScalarField]) -> Optional[Tuple[float, ...]]:
    centers = [f.radial_center for f in fields if not f.is_constant]
    if not centers:
        return _origin(fields[0].dimension)
    if any(c is None for c in centers):
        return None
    first = centers[0]
    return first if all(same_point(first, c) for c in centers[1:]) else None


class Sum(ScalarField):
    """Σ weight_i · f_i."""

    kind = "Sum"

    def __init__(self, terms: Sequence[ScalarField], weights: Optional[Sequence[float]] = None):
        super().__init__(_check_dimensions(terms))
        self.terms = list(terms)
        self.weights = [1.0] * len(self.terms) if weights is None else [float(w) for w in weights]
        if len(self.weights) != len(self.terms):
            raise ParameterOutOfRange("Sum needs one weight per term")

    def _active(self):
        return [t for t, w in zip(self.terms, self.weights) if w != 0.0]

    @property
    def is_constant(self):
        return all(t.is_constant for t in self._active())

    @property
    def has_constant_gradient(self):
        return all(t.has_constant_gradient for t in self._active())

    @property
    def local_exponents(self):
        active = self._active()
        merged = []
        for point, members in _group_by_point([p for t in active for p in t.local_exponents]):
            top = max(members, key=lambda p: (p.exponent, p.logarithmic))
            if top.singular:
                merged.append(Pole(point, top.exponent,
                                   any(p.logarithmic for p in members if p.exponent == top.exponent)))
            elif len(members) == len(active):
                merged.append(Pole(point, top.exponent))
        return tuple(merged)

    @property
    def spheres(self):
        return _merge_spheres([t.spheres for t in self._active()])

    @property
    def zero_spheres(self):
        active = self._active()
        return active[0].zero_spheres if len(active) == 1 else ()

    @property
    def radial_center(self):
        active = self._active()
        return _common_radial_center(active) if active else _origin(self.dimension)

    def support_ball(self):
        balls = [t.support_ball() for t in self._active()]
        if not balls or any(b is None for b in balls):
            return None
        return balls[0] if len(balls) == 1 else enclosing_ball(balls)

    @property
    def decay_exponent(self):
        decays = [t.decay_exponent for t in self._active()]
        if not decays:
            return math.inf
        return None if any(d is None for d in decays) else min(decays)

    def describe(self):
        return {"kind": self.kind, "weights": self.weights,
                "terms": [t.describe() for t in self.terms]}

    def values(self, points):
        points = as_points(points, self.dimension)
        total = np.zeros(points.shape[0])
        for t, w in zip(self.terms, self.weights):
            if w != 0.0:
                total += w * t.values(points)
        return total

    def gradients(self, points):
        points = as_points(points, self.dimension)
        total = np.zeros_like(points)
        for t, w in zip(self.terms, self.weights):
            if w != 0.0:
                total += w * t.gradients(points)
        return total

    def laplacians(self, points):
        points = as_points(points, self.dimension)
        total = np.zeros(points.shape[0])
        for t, w in zip(self.terms, self.weights):
            if w != 0.0:
                total += w * t.laplacians(points)
        return total


class Product(ScalarField):
    """Π f_i; local exponents add at shared points."""

    kind = "Product"

    def __init__(self, factors: Sequence[ScalarField]):
        super().__init__(_check_dimensions(factors))
        self.factors = list(factors)

    @property
    def is_constant(self):
        return all(f.is_constant for f in self.factors)

    @property
    def local_exponents(self):
        merged = []
        for point, members in _group_by_point([p for f in self.factors for p in f.local_exponents]):
            exponent = float(sum(p.exponent for p in members))
            logarithmic = any(p.logarithmic for p in members)
            if exponent != 0.0 or logarithmic:
                merged.append(Pole(point, exponent, logarithmic))
        return tuple(merged)

    @property
    def spheres(self):
        return _merge_spheres([f.spheres for f in self.factors])

    @property
    def zero_spheres(self):
        return _merge_spheres([f.zero_spheres for f in self.factors])

    @property
    def radial_center(self):
        return _common_radial_center(self.factors)

    def support_ball(self):
        balls = [b for b in (f.support_ball() for f in self.factors) if b is not None]
        return min(balls, key=lambda b: b.radius) if balls else None

    @property
    def decay_exponent(self):
        decays = [f.decay_exponent for f in self.factors]
        if any(d == math.inf for d in decays):
            return math.inf
        if any(d is None for d in decays):
            return None
        return float(sum(decays))

    def describe(self):
        return {"kind": self.kind, "factors": [f.describe() for f in self.factors]}

    def values(self, points):
        points = as_points(points, self.dimension)
        out = np.ones(points.shape[0])
        for f in self.factors:
            out = out * f.values(points)
        return out

    def _others(self, vals: List[np.ndarray], skip: Sequence[int]) -> np.ndarray:
        out = np.ones_like(vals[0])
        for j, v in enumerate(vals):
            if j not in skip:
                out = out * v
        return out

    def gradients(self, points):
        points = as_points(points, self.dimension)
        vals = [f.values(points) for f in self.factors]
        total = np.zeros_like(points)
        for i, f in enumerate(self.factors):
            total += self._others(vals, (i,))[:, None] * f.gradients(points)
        return total

    def laplacians(self, points):
        points = as_points(points, self.dimension)
        vals = [f.values(points) for f in self.factors]
        grads = [f.gradients(points) for f in self.factors]
        total = np.zeros(points.shape[0])
        for i, f in enumerate(self.factors):
            total += self._others(vals, (i,)) * f.laplacians(points)
            for j in range(i + 1, len(self.factors)):
                cross = np.einsum("ij,ij->i", grads[i], grads[j])
                total += 2 * self._others(vals, (i, j)) * cross
        return total


class AbsPower(ScalarField):
    """|f|^q; sign changes of f become kinks."""

    kind = "AbsPower"

    def __init__(self, base: ScalarField, q: float, kinks: Sequence[Sphere] = ()):
        super().__init__(base.dimension)
        if not q > 0:
            raise ParameterOutOfRange(f"power must be positive, got {q}")
        self.base = base
        self.q = float(q)
        self.kinks = tuple(Sphere(tuple(k[0]), float(k[1])) for k in kinks)

    @property
    def is_constant(self):
        return self.base.is_constant

    @property
    def local_exponents(self):
        return tuple(Pole(p.point, p.exponent * self.q, p.logarithmic)
                     for p in self.base.local_exponents)

    @property
    def spheres(self):
        return _merge_spheres([self.base.spheres, self.base.zero_spheres, self.kinks])

    @property
    def radial_center(self):
        return self.base.radial_center

    def support_ball(self):
        return self.base.support_ball()

    @property
    def decay_exponent(self):
        d = self.base.decay_exponent
        return None if d is None else d * self.q

    def describe(self):
        return {"kind": self.kind, "q": self.q, "base": self.base.describe()}

    def values(self, points):
        return np.abs(self.base.values(points)) ** self.q

    def gradients(self, points):
        points = as_points(points, self.dimension)
        f = self.base.values(points)
        with np.errstate(divide="ignore", invalid="ignore"):
            scale = self.q * np.abs(f) ** (self.q - 1) * np.sign(f)
        return scale[:, None] * self.base.gradients(points)

    def laplacians(self, points):
        points = as_points(points, self.dimension)
        f = self.base.values(points)
        q = self.q
        with np.errstate(divide="ignore", invalid="ignore"):
            out = q * np.abs(f) ** (q - 1) * np.sign(f) * self.base.laplacians(points)
            if q != 1.0:
                grads = self.base.gradients(points)
                grad2 = np.einsum("ij,ij->i", grads, grads)
                out = out + q * (q - 1) * np.abs(f) ** (q - 2) * grad2
        return out


class GradientNorm(ScalarField):
    """|∇f|."""

    kind = "GradientNorm"

    def __init__(self, base: ScalarField):
        super().__init__(base.dimension)
        self.base = base

    @property
    def is_constant(self):
        return self.base.has_constant_gradient

    @property
    def local_exponents(self):
        shifted = []
        for p in self.base.local_exponents:
            exponent = p.exponent + 1.0
            if exponent != 0.0:
                shifted.append(Pole(p.point, exponent))
        return tuple(shifted)

    @property
    def spheres(self):
        return self.base.spheres

    @property
    def radial_center(self):
        return self.base.radial_center

    def support_ball(self):
        return self.base.support_ball()

    @property
    def decay_exponent(self):
        d = self.base.decay_exponent
        return None if d is None else d + 1.0

    def describe(self):
        return {"kind": self.kind, "base": self.base.describe()}

    def values(self, points):
        return np.linalg.norm(self.base.gradients(points), axis=1)


class LogOf(ScalarField):
    """log(f + δ); poles and zeros of f become logarithmic poles."""

    kind = "LogOf"

    def __init__(self, base: ScalarField, delta: float = 0.0, extra_poles: Sequence[Pole] = ()):
        super().__init__(base.dimension)
        if delta < 0:
            raise ParameterOutOfRange(f"delta must be non-negative, got {delta}")
        self.base = base
        self.delta = float(delta)
        self.extra_poles = tuple(extra_poles)

    @property
    def local_exponents(self):
        logs = [Pole(p.point, 0.0, True) for p in self.base.local_exponents
                if p.singular or self.delta == 0.0]
        logs.extend(self.extra_poles)
        merged = []
        for point, members in _group_by_point(logs):
            top = max(members, key=lambda p: p.exponent)
            merged.append(Pole(point, max(top.exponent, 0.0), True))
        return tuple(merged)

    @property
    def spheres(self):
        return self.base.spheres

    @property
    def radial_center(self):
        return self.base.radial_center

    def describe(self):
        return {"kind": self.kind, "delta": self.delta, "base": self.base.describe()}

    def values(self, points):
        with np.errstate(divide="ignore", invalid="ignore"):
            return np.log(self.base.values(points) + self.delta)

    def gradients(self, points):
        points = as_points(points, self.dimension)
        shifted = self.base.values(points) + self.delta
        return self.base.gradients(points) / shifted[:, None]

    def laplacians(self, points):
        points = as_points(points, self.dimension)
        shifted = self.base.values(points) + self.delta
        grads = self.base.gradients(points)
        grad2 = np.einsum("ij,ij->i", grads, grads)
        return self.base.laplacians(points) / shifted - grad2 / shifted ** 2


def log_radius(dimension: int, center=None) -> LogOf:
    """log|y − center|."""
    return LogOf(RadialPower(dimension, 1.0, -1.0, center))


class Affine(ScalarField):
    """g(y) = f((y − shift)/scale): dilation by `scale`, then translation."""

    kind = "Affine"

    def __init__(self, base: ScalarField, scale: float = 1.0, shift=None):
        super().__init__(base.dimension)
        if not scale > 0:
            raise ParameterOutOfRange(f"dilation scale must be positive, got {scale}")
        self.base = base
        self.scale = float(scale)
        self.shift = np.zeros(self.dimension) if shift is None else as_point(shift, self.dimension)

    def _forward(self, point) -> Tuple[float, ...]:
        return tuple(np.asarray(point, dtype=float) * self.scale + self.shift)

    def _pullback(self, points):
        return (as_points(points, self.dimension) - self.shift) / self.scale

    @property
    def is_constant(self):
        return self.base.is_constant

    @property
    def has_constant_gradient(self):
        return self.base.has_constant_gradient

    @property
    def local_exponents(self):
        return tuple(Pole(self._forward(p.point), p.exponent, p.logarithmic)
                     for p in self.base.local_exponents)

    @property
    def derivative_singularities(self):
        return tuple(self._forward(p) for p in self.base.derivative_singularities)

    @property
    def spheres(self):
        return tuple(Sphere(self._forward(s.center), s.radius * self.scale)
                     for s in self.base.spheres)

    @property
    def zero_spheres(self):
        return tuple(Sphere(self._forward(s.center), s.radius * self.scale)
                     for s in self.base.zero_spheres)

    @property
    def radial_center(self):
        c = self.base.radial_center
        return None if c is None else self._forward(c)

    def support_ball(self):
        b = self.base.support_ball()
        return None if b is None else Ball(self._forward(b.center), b.radius * self.scale)

    @property
    def decay_exponent(self):
        return self.base.decay_exponent

    def describe(self):
        return {"kind": self.kind, "scale": self.scale, "shift": self.shift.tolist(),
                "base": self.base.describe()}

    def values(self, points):
        return self.base.values(self._pullback(points))

    def gradients(self, points):
        return self.base.gradients(self._pullback(points)) / self.scale

    def laplacians(self, points):
        return self.base.laplacians(self._pullback(points)) / self.scale ** 2


def dilate(f: ScalarField, t: float) -> Affine:
    """f_t(y) = f(y/t)."""
    return Affine(f, scale=t)


def translate(f: ScalarField, v) -> Affine:
    """f(· − v)."""
    return Affine(f, shift=v)


class Truncation(ScalarField):
    """f·χ_Ω for a ball Ω."""

    kind = "Truncation"

    def __init__(self, base: ScalarField, region: Ball):
        super().__init__(base.dimension)
        if region.dimension != base.dimension:
            raise DimensionMismatch(base.dimension, region.dimension, what="region")
        self.base = base
        self.region = region

    def _inside(self, points):
        diff = as_points(points, self.dimension) - np.asarray(self.region.center)
        return np.linalg.norm(diff, axis=1) <= self.region.radius

    @property
    def local_exponents(self):
        return tuple(p for p in self.base.local_exponents if self.region.contains(p.point))

    @property
    def spheres(self):
        return _merge_spheres([self.base.spheres,
                               [Sphere(self.region.center, self.region.radius)]])

    @property
    def zero_spheres(self):
        return self.base.zero_spheres

    @property
    def radial_center(self):
        if self.base.is_radial_about(self.region.center):
            return self.region.center
        return None

    def support_ball(self):
        inner = self.base.support_ball()
        if inner is not None and inner.radius < self.region.radius:
            return inner
        return self.region

    @property
    def decay_exponent(self):
        return math.inf

    def describe(self):
        return {"kind": self.kind, "region": self.region.to_dict(), "base": self.base.describe()}

    def values(self, points):
        points = as_points(points, self.dimension)
        inside = self._inside(points)
        out = np.zeros(points.shape[0])
        if inside.any():
            out[inside] = self.base.values(points[inside])
        return out

    def gradients(self, points):
        points = as_points(points, self.dimension)
        inside = self._inside(points)
        out = np.zeros_like(points)
        if inside.any():
            out[inside] = self.base.gradients(points[inside])
        return out

    def laplacians(self, points):
        points = as_points(points, self.dimension)
        inside = self._inside(points)
        out = np.zeros(points.shape[0])
        if inside.any():
            out[inside] = self.base.laplacians(points[inside])
        return out


class GridField(ScalarField):
    """Samples on a box, multilinear interpolation, zero outside the box."""

    kind = "GridField"

    def __init__(self, dimension: int, lower, upper, samples, step: Optional[float] = None):
        super().__init__(dimension)
        self.lower = as_point(lower, self.dimension)
        self.upper = as_point(upper, self.dimension)
        if np.any(self.upper <= self.lower):
            raise ParameterOutOfRange("grid box must have positive width on every axis")
        samples = np.asarray(samples, dtype=float)
        if samples.ndim != self.dimension or len(set(samples.shape)) != 1 or samples.shape[0] < 2:
            raise ParameterOutOfRange(f"expected a cubic sample array of rank {self.dimension}")
        if not np.all(np.isfinite(samples)):
            raise ParameterOutOfRange("grid samples must be finite")
        self.samples = samples
        self.resolution = samples.shape[0] - 1
        axes = [np.linspace(lo, hi, self.resolution + 1) for lo, hi in zip(self.lower, self.upper)]
        self._interp = RegularGridInterpolator(axes, samples, method="linear",
                                               bounds_error=False, fill_value=0.0)
        width = float(np.min(self.upper - self.lower))
        self.step = float(step) if step else width / (4 * self.resolution)

    @classmethod
    def from_field(cls, field: ScalarField, lower, upper, resolution: int,
                   step: Optional[float] = None) -> "GridField":
        """Sample `field` on a (resolution+1)^n lattice; non-finite samples are capped."""
        n = field.dimension
        lower = as_point(lower, n)
        upper = as_point(upper, n)
        axes = [np.linspace(lo, hi, resolution + 1) for lo, hi in zip(lower, upper)]
        mesh = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, n)
        vals = field.values(mesh)
        bad = ~np.isfinite(vals)
        if bad.any():
            cap = float(np.max(np.abs(vals[~bad]))) if (~bad).any() else 0.0
            logger.warning("capping %d non-finite grid samples at %.3g", int(bad.sum()), cap)
            vals = np.where(bad, cap, vals)
        return cls(n, lower, upper, vals.reshape((resolution + 1,) * n), step)

    def support_ball(self):
        center = (self.lower + self.upper) / 2
        return Ball(tuple(center), float(np.linalg.norm(self.upper - center)))

    @property
    def decay_exponent(self):
        return math.inf

    @property
    def derivative_singularities(self):
        return ()

    def describe(self):
        return {"kind": self.kind, "lower": self.lower.tolist(), "upper": self.upper.tolist(),
                "resolution": self.resolution, "step": self.step}

    def values(self, points):
        return self._interp(as_points(points, self.dimension))

    def _check_stencil(self, points):
        h = self.step
        outside = np.any(points - h < self.lower, axis=1) | np.any(points + h > self.upper, axis=1)
        if outside.any():
            bad = points[np.argmax(outside)]
            raise BoundaryPoint(f"stencil of step {h:g} at {tuple(bad)} leaves the grid box")

    def gradients(self, points):
        points = as_points(points, self.dimension)
        self._check_stencil(points)
        h = self.step
        grads = np.empty_like(points)
        for i in range(self.dimension):
            step = np.zeros_like(points)
            step[:, i] = h
            grads[:, i] = (self.values(points + step) - self.values(points - step)) / (2 * h)
        return grads

    def laplacians(self, points):
        points = as_points(points, self.dimension)
        self._check_stencil(points)
        h = self.step
        center = self.values(points)
        total = np.zeros(points.shape[0])
        for i in range(self.dimension):
            step = np.zeros_like(points)
            step[:, i] = h
            total += self.values(points + step) + self.values(points - step) - 2 * center
        return total / h ** 2


class RadialTable(ScalarField):
    """Tabulated radial profile, log–log interpolated, power-extended past the knots."""

    kind = "RadialTable"

    def __init__(self, dimension: int, radii, values, center=None):
        super().__init__(dimension)
        radii = np.asarray(radii, dtype=float)
        vals = np.asarray(values, dtype=float)
        if radii.ndim != 1 or radii.size < 2 or radii.shape != vals.shape:
            raise ParameterOutOfRange("radial table needs matching radius and value lists")
        if np.any(radii <= 0) or np.any(np.diff(radii) <= 0):
            raise ParameterOutOfRange("table radii must be positive and increasing")
        if np.any(vals < 0) or not np.all(np.isfinite(vals)):
            raise ParameterOutOfRange("table values must be finite and non-negative")
        floor = np.finfo(float).tiny
        self.radii = radii
        self.table = vals
        self.center = _as_center(center, self.dimension)
        self._log_r = np.log(radii)
        self._log_v = np.log(np.maximum(vals, floor))
        slopes = np.diff(self._log_v) / np.diff(self._log_r)
        self.inner_slope = float(slopes[0])
        self.outer_slope = float(slopes[-1])

    @property
    def is_constant(self):
        return bool(np.all(self.table == self.table[0]))

    @property
    def local_exponents(self):
        if self.is_constant or self.inner_slope == 0.0:
            return ()
        return (Pole(self.center, -self.inner_slope),)

    @property
    def spheres(self):
        return tuple(Sphere(self.center, float(r)) for r in self.radii[1:-1])

    @property
    def radial_center(self):
        return self.center

    @property
    def decay_exponent(self):
        return -self.outer_slope

    def describe(self):
        return {"kind": self.kind, "center": list(self.center),
                "radii": self.radii.tolist(), "values": self.table.tolist()}

    def profile(self, t):
        t = np.asarray(t, dtype=float)
        out = np.empty_like(t)
        with np.errstate(divide="ignore"):
            lt = np.log(t)
        low = t < self.radii[0]
        high = t > self.radii[-1]
        mid = ~(low | high)
        out[mid] = np.exp(np.interp(lt[mid], self._log_r, self._log_v))
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            out[low] = np.exp(self._log_v[0] + self.inner_slope * (lt[low] - self._log_r[0]))
            out[high] = np.exp(self._log_v[-1] + self.outer_slope * (lt[high] - self._log_r[-1]))
        return out

    def values(self, points):
        diff = as_points(points, self.dimension) - np.asarray(self.center)
        return self.profile(np.linalg.norm(diff, axis=1))

    def gradients(self, points):
        diff = as_points(points, self.dimension) - np.asarray(self.center)
        t = np.linalg.norm(diff, axis=1)
        lt = np.log(t)
        idx = np.clip(np.searchsorted(self._log_r, lt) - 1, 0, self.radii.size - 2)
        slopes = np.diff(self._log_v) / np.diff(self._log_r)
        slope = slopes[idx]
        with np.errstate(divide="ignore", invalid="ignore"):
            scale = self.profile(t) * slope / t ** 2
        return scale[:, None] * diff


# -- construction from config records ----------------------------------------

def _number(record: Dict[str, Any], key: str, params: Dict[str, float], default=None) -> float:
    value = record.get(key, default)
    if value is None:
        raise ConfigError(f"fields.{key}", f"missing required parameter for {record.get('kind')}")
    if isinstance(value, str):
        if value not in params:
            raise ConfigError(f"fields.{key}", f"unknown parameter token '{value}'")
        return float(params[value])
    return float(value)


def _center(record: Dict[str, Any], key: str, n: int):
    value = record.get(key, "origin")
    if value in (None, "origin"):
        return _origin(n)
    try:
        return _as_center(value, n)
    except DimensionMismatch as e:
        raise ConfigError(f"fields.{key}", str(e))


def field_params(n: int, alpha: float, p: float) -> Dict[str, float]:
    """Named tokens usable in place of numbers inside field records."""
    return {
        "alpha": alpha,
        "p": p,
        "inv_p": 1.0 / p,
        "alpha_p": alpha * p,
        "n_minus_alpha_p": n - alpha * p,
        "n": float(n),
    }


FIELD_KINDS = (
    "RadialPower", "Constant", "Zero", "ExampleW", "ExampleV", "Bump", "Linear", "Sum",
    "Product", "AbsPower", "GradientNorm", "LogOf", "LogRadius", "Affine", "Truncation",
    "GridField", "RadialTable",
)


def build_field(record: Dict[str, Any], n: int, params: Optional[Dict[str, float]] = None) -> ScalarField:
    """
    Build a field from a declarative record such as
    {"kind": "RadialPower", "coefficient": 1, "exponent": "alpha"}.

    Args:
        record: Field record with a `kind` key
        n: Dimension
        params: Token values for string parameters (see `field_params`)

    Returns:
        The constructed field

    Raises:
        ConfigError: Unknown kind, missing or malformed parameter
    """
    params = params or {}
    if not isinstance(record, dict) or "kind" not in record:
        raise ConfigError("fields", f"field record must be an object with a kind: {record!r}")
    kind = record["kind"]

    def sub(key):
        if key not in record:
            raise ConfigError(f"fields.{key}", f"{kind} needs a nested '{key}' record")
        return build_field(record[key], n, params)

    try:
        if kind == "RadialPower":
            return RadialPower(n, _number(record, "coefficient", params, 1.0),
                               _number(record, "exponent", params, 0.0), _center(record, "center", n))
        if kind == "Constant":
            return constant(n, _number(record, "value", params, 1.0))
        if kind == "Zero":
            return constant(n, 0.0)
        if kind == "ExampleW":
            return ExampleW(n)
        if kind == "ExampleV":
            return ExampleV(n)
        if kind == "Bump":
            return Bump(n, _center(record, "center", n), _number(record, "radius", params, 1.0),
                        _number(record, "power", params, 2))
        if kind == "Linear":
            slope = record.get("slope")
            return Linear(n, None if slope is None else _as_center(slope, n),
                          _number(record, "offset", params, 0.0))
        if kind in ("Sum", "Product"):
            members = record.get("terms") or record.get("factors") or []
            fields = [build_field(r, n, params) for r in members]
            if not fields:
                raise ConfigError("fields.terms", f"{kind} needs at least one member")
            if kind == "Product":
                return Product(fields)
            return Sum(fields, record.get("weights"))
        if kind == "AbsPower":
            return AbsPower(sub("of"), _number(record, "q", params, 1.0))
        if kind == "GradientNorm":
            return GradientNorm(sub("of"))
        if kind == "LogOf":
            return LogOf(sub("of"), _number(record, "delta", params, 0.0))
        if kind == "LogRadius":
            return log_radius(n, _center(record, "center", n))
        if kind == "Affine":
            shift = record.get("shift")
            return Affine(sub("of"), _number(record, "scale", params, 1.0),
                          None if shift is None else _as_center(shift, n))
        if kind == "Truncation":
            region = Ball(_center(record, "center", n), _number(record, "radius", params, 1.0))
            return Truncation(sub("of"), region)
        if kind == "GridField":
            lower = record.get("lower", [-1.0] * n)
            upper = record.get("upper", [1.0] * n)
            return GridField.from_field(sub("of"), lower, upper, int(record.get("resolution", 8)))
        if kind == "RadialTable":
            return RadialTable(n, record.get("radii", []), record.get("values", []),
                               _center(record, "center", n))
    except (ParameterOutOfRange, DimensionMismatch) as e:
        raise ConfigError(f"fields.{kind}", str(e))

    raise ConfigError("fields.kind", f"unknown field kind '{kind}' (known: {', '.join(FIELD_KINDS)})")
