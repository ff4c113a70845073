#!/usr/bin/env python3
"""
Configuration loading, validation and overrides for feffcheck.
"""
import copy
import json
import logging
import math
import os
from typing import Any, Dict, Optional, Sequence

from ..core.errors import ConfigError
from ..core.fields import build_field, field_params
from ..core.growth import GrowthFunction
from ..core.maximal_bmo import A1_CONSTRUCTIONS
from ..utils.env_loader import get_env
from .constants import default_config

logger = logging.getLogger(__name__)

MAX_DIMENSION = 6


def merge_config(config: Dict, user_config: Dict) -> Dict:
    """
    Merge a user configuration into `config` in place.

    Nested dictionaries are updated key by key, everything else replaced.
    """
    for key, value in user_config.items():
        if key in config and isinstance(config[key], dict) and isinstance(value, dict):
            config[key].update(value)
        else:
            config[key] = value
    return config


def get_config_path(path: Optional[str] = None) -> Optional[str]:
    """The explicit path, else FEFFCHECK_CONFIG from the environment or .env."""
    return path or get_env("FEFFCHECK_CONFIG")


def load_config(path: Optional[str] = None) -> Dict:
    """
    Load configuration from file

    Args:
        path: JSON file; without one the defaults are returned

    Returns:
        Dictionary containing the merged configuration

    Raises:
        ConfigError: The file is missing or is not a JSON object
    """
    config = default_config()
    path = get_config_path(path)
    if not path:
        return config

    if not os.path.exists(path):
        raise ConfigError("config", f"file not found: {path}")
    try:
        with open(path, 'r') as f:
            user_config = json.load(f)
    except (json.JSONDecodeError, IOError) as e:
        raise ConfigError("config", f"cannot read {path}: {e}")
    if not isinstance(user_config, dict):
        raise ConfigError("config", "top level must be an object")

    logger.debug("loaded configuration from %s", path)
    return merge_config(config, user_config)


def apply_overrides(config: Dict, n: Optional[int] = None, alpha: Optional[float] = None,
                    p: Optional[float] = None, tol: Optional[float] = None,
                    grid_refine: Optional[int] = None) -> Dict:
    """Return a copy of `config` with command-line values applied."""
    config = copy.deepcopy(config)
    if n is not None:
        config["dimension"] = n
    if alpha is not None:
        config["alpha"] = alpha
    if p is not None:
        config["p"] = p
    if tol is not None:
        config["quadrature"]["tol_smooth"] = tol
        config["quadrature"]["tol_singular"] = tol
    if grid_refine is not None:
        config["grid_refine"] = grid_refine
    return config


def refine_config(config: Dict, factor: int) -> Dict:
    """Grid counts multiplied by `factor`, tolerances divided by it."""
    config = copy.deepcopy(config)
    if factor <= 1:
        return config
    quad = config["quadrature"]
    quad["tol_smooth"] = quad["tol_smooth"] / factor
    quad["tol_singular"] = quad["tol_singular"] / factor
    for section, key in (("growth", "r_count"), ("maximal", "r_count"), ("maximal", "ray_count")):
        config[section][key] = (int(config[section][key]) - 1) * factor + 1
    config["bmo"]["radii"] = int(config["bmo"]["radii"]) * factor
    return config


def _require(condition: bool, key: str, message: str) -> None:
    if not condition:
        raise ConfigError(key, message)


def _positive_numbers(values: Any, key: str) -> Sequence[float]:
    _require(isinstance(values, (list, tuple)) and len(values) > 0, key, "must be a non-empty list")
    try:
        out = [float(v) for v in values]
    except (TypeError, ValueError):
        raise ConfigError(key, "must contain numbers")
    _require(all(v > 0 and math.isfinite(v) for v in out), key, "entries must be positive")
    return out


def _range(section: Dict, prefix: str, count_key: Optional[str] = "r_count",
           lo: str = "r_min", hi: str = "r_max") -> None:
    try:
        r_min, r_max = float(section[lo]), float(section[hi])
    except (KeyError, TypeError, ValueError):
        raise ConfigError(f"{prefix}.{lo}", f"{lo} and {hi} must be numbers")
    _require(0 < r_min < r_max, f"{prefix}.{lo}", f"need 0 < {lo} < {hi}, got {r_min}, {r_max}")
    if count_key is not None:
        _require(int(section.get(count_key, 0)) >= 2, f"{prefix}.{count_key}", "need at least 2 radii")


def validate_config(config: Dict) -> Dict:
    """
    Check a merged configuration

    Args:
        config: Merged configuration

    Returns:
        The same configuration

    Raises:
        ConfigError: The first failing key with a message
    """
    n = config.get("dimension")
    _require(isinstance(n, int) and not isinstance(n, bool) and 1 <= n <= MAX_DIMENSION,
             "dimension", f"must be an integer in [1, {MAX_DIMENSION}], got {n!r}")
    for key in ("alpha", "p"):
        value = config.get(key)
        _require(isinstance(value, (int, float)) and value > 0, key, f"must be positive, got {value!r}")
    refine = config.get("grid_refine")
    _require(isinstance(refine, int) and refine >= 1, "grid_refine", f"must be an integer >= 1, got {refine!r}")

    quad = config["quadrature"]
    for key in ("tol_smooth", "tol_singular"):
        value = quad.get(key)
        _require(isinstance(value, (int, float)) and 0 < value < 1, f"quadrature.{key}",
                 f"must lie in (0, 1), got {value!r}")

    _range(config["growth"], "growth")
    _range(config["stummel"], "stummel", count_key=None)
    _range(config["maximal"], "maximal")
    _range(config["maximal"], "maximal", "ray_count", "ray_min", "ray_max")
    _require(config["maximal"].get("construction") in A1_CONSTRUCTIONS, "maximal.construction",
             f"must be one of {', '.join(A1_CONSTRUCTIONS)}")

    bmo = config["bmo"]
    _require(int(bmo.get("centers_per_axis", 0)) >= 1 and int(bmo.get("radii", 0)) >= 1,
             "bmo", "sampler needs at least one center and one radius")
    _require(0 < float(bmo.get("smallest", 0)) <= 1, "bmo.smallest", "must lie in (0, 1]")

    catalog = config["inequalities"].get("catalog") or {}
    for key in ("powers", "radii", "offsets"):
        values = catalog.get(key)
        _require(isinstance(values, (list, tuple)) and len(values) > 0, f"inequalities.catalog.{key}",
                 "test-function catalog must not be empty")
    powers = _positive_numbers(catalog["powers"], "inequalities.catalog.powers")
    _require(all(m >= 2 for m in powers), "inequalities.catalog.powers", "bump powers must be >= 2")
    _positive_numbers(catalog["radii"], "inequalities.catalog.radii")

    vanishing = config["vanishing"]
    _range(vanishing, "vanishing")
    _require(int(vanishing.get("k_max", 0)) >= 1, "vanishing.k_max", "must be at least 1")
    _positive_numbers(vanishing.get("doubling_radii"), "vanishing.doubling_radii")

    ce = config["counterexample"]
    _positive_numbers(ce.get("alphas"), "counterexample.alphas")
    radii = _positive_numbers(ce.get("mass_radii"), "counterexample.mass_radii")
    _require(all(r < 1 for r in radii), "counterexample.mass_radii", "radii must lie in (0, 1)")
    deltas = _positive_numbers(ce.get("deltas"), "counterexample.deltas")
    _require(all(b < a for a, b in zip(deltas, deltas[1:])), "counterexample.deltas",
             "must be strictly decreasing")

    params = field_params(n, float(config["alpha"]), float(config["p"]))
    GrowthFunction.from_record(config["growth"].get("phi") or {}, params)
    fields = config.get("fields") or {}
    for name in ("V", "W", "u", "f", "g", "w"):
        _require(name in fields, f"fields.{name}", "missing field record")
        build_field(fields[name], n, params)
    return config


def resolve_config(path: Optional[str] = None, **overrides) -> Dict:
    """load_config, apply_overrides and validate_config in one step."""
    config = apply_overrides(load_config(path), **overrides)
    return validate_config(config)
