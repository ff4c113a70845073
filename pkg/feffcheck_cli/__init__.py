"""
feffcheck - numerical checks for generalized Morrey and Stummel classes,
Fefferman-type inequalities and a unique continuation counterexample.
"""

try:
    from .utils.env_loader import get_version
    __version__ = get_version()
except ImportError:
    __version__ = "0.3.0"

from .commands.handler import main, run
from .config.settings import load_config, validate_config
from .core.errors import (FeffcheckError, SingularPoint, DimensionMismatch, BoundaryPoint,
                          ParameterOutOfRange, NormInconclusive, ZeroDenominator, PairTooClose,
                          ConfigError, TailBoundDominates)
from .core.fields import (Ball, ScalarField, RadialPower, ExampleW, ExampleV, Bump, Linear, Sum,
                          Truncation, GridField, build_field, make_example_pair)
from .core.growth import GrowthFunction, check_condition, morrey_norm
from .core.stummel import Membership, classify, modulus_curve, stummel_modulus
from .core.maximal_bmo import (bmo_seminorm, check_A1, doubling_ratio, maximal_function,
                               vanishing_order)
from .core.inequalities import (fefferman_morrey, fefferman_oscillation, fefferman_stummel,
                                kernel_lemma_check, riesz_bound_check, subrepresentation_check)
from .core.counterexample import run_counterexample
