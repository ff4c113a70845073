"""
Constants and default configuration for feffcheck.
"""

import os
import copy

try:
    from ..utils.env_loader import get_version
    VERSION = get_version()
except ImportError:
    VERSION = os.environ.get("FEFFCHECK_VERSION", "0.3.0")

DEFAULT_OUTPUT_DIR = "feffcheck-out"

SUBCOMMANDS = (
    "morrey-norm", "stummel", "check-phi", "maximal", "bmo", "fefferman",
    "kernel-lemma", "riesz-bound", "subrep", "counterexample", "vanishing",
)

# Exit codes
EXIT_OK = 0
EXIT_INCONCLUSIVE = 1
EXIT_CONFIG_ERROR = 2

CSV_COLUMNS = ("r", "value", "divergent_flag", "error_estimate")

# String values inside field and phi records are tokens resolved against
# the top-level parameters (see core.fields.field_params).
DEFAULT_CONFIG = {
    "dimension": 3,
    "alpha": 1.5,
    "p": 1.5,
    "seed": 0,
    "grid_refine": 1,
    "quadrature": {
        "tol_smooth": 1e-6,
        "tol_singular": 1e-4,
        "abs_floor": 1e-13,
        "divergence_slope": -0.05,
        "divergence_residual": 0.10,
        "cutoff_decades": [2, 8],
        "grading_ratio": 0.2,
        "quad_limit": 200,
        "max_nodes": 4000000,
    },
    "growth": {
        "phi": {"kind": "Power", "exponent": "n_minus_alpha_p"},
        "r_min": 1e-3,
        "r_max": 1e2,
        "r_count": 25,
        "x_candidates": [],
    },
    "stummel": {
        "relative_drop": 1e-3,
        "fit_residual": 0.10,
        "r_min": 1e-4,
        "r_max": 1.0,
    },
    "maximal": {
        "r_min": 1e-3,
        "r_max": 1e2,
        "r_count": 21,
        "ray_min": 1e-2,
        "ray_max": 1e1,
        "ray_count": 10,
        "lattice_resolution": 8,
        "gamma": 0.9,
        "construction": "power_maximal",
    },
    "bmo": {
        "centers_per_axis": 5,
        "radii": 12,
        "smallest": 0.05,
        "spread": 0.8,
        "alpha": 1.0,
        "ball": {"center": None, "radius": 1.0},
    },
    "inequalities": {
        "catalog": {"powers": [2, 3], "radii": [0.25, 1.0, 4.0], "offsets": [0.0, 1.0, -1.0]},
        "ball0": {"center": None, "radius": 1.0},
        "stummel_alpha": 1.5,
        "stummel_p": 1.5,
        "dilations": [0.5, 1.0, 2.0],
        "translation": 0.5,
        "r_max": 1e3,
        "riesz_distances": [0.25, 0.5, 1.0, 2.0],
        "kernel_alpha": 2.0,
        "kernel_pairs": 12,
        "subrep_points": 20,
    },
    "counterexample": {
        "alphas": [1.0, 1.5, 2.0, 3.0, 4.0, 5.0, 6.0],
        "p": 1.0,
        "vstar_p": 0.7,
        "mass_radii": [0.05, 0.1, 0.3, 0.5, 0.9],
        "k_max": 10,
        "deltas": [1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6],
        "residual_points": 50,
        "extra_dimension": 4,
        "probe_radius": 0.1,
    },
    "vanishing": {
        "r_min": 1e-3,
        "r_max": 0.2,
        "r_count": 24,
        "k_max": 10,
        "threshold": 1e-6,
        "doubling_radii": [0.2, 0.1, 0.05],
        "beta": 1.0,
    },
    # V: Morrey-class potential, W: Stummel-class potential, u: test function,
    # f: maximal-function input, g: BMO input, w: weight for vanishing
    "fields": {
        "V": {"kind": "RadialPower", "coefficient": 1.0, "exponent": "alpha"},
        "W": {"kind": "RadialPower", "coefficient": 1.0, "exponent": "inv_p"},
        "u": {"kind": "Bump", "radius": 1.0, "power": 2},
        "f": {"kind": "RadialPower", "coefficient": 1.0, "exponent": "inv_p"},
        "g": {"kind": "LogRadius"},
        "w": {"kind": "ExampleW"},
    },
    "ui": {
        "show_banner": True,
        "banner_font": "slant",
        "color": True,
    },
}


def default_config() -> dict:
    """A fresh deep copy of DEFAULT_CONFIG."""
    return copy.deepcopy(DEFAULT_CONFIG)
