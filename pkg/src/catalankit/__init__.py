"""Integral representations of Catalan's constant, derived and checked numerically."""

__version__ = "0.1.0"

from .cdf import SymmetricCdf, make_builtin, moment_check, validate
from .constants import CATALAN, catalan_partial_sum, catalan_reference, zeta3_reference
from .lerch import LerchClosedForm, RationalPoly, derive_closed_form, eval_closed_form, lerch_series
from .quadrature import (
    EngineConfig,
    Integrand,
    QuadratureResult,
    integrate_1d,
    integrate_qmc,
    integrate_tensor,
)
from .representations import (
    RepresentationSpec,
    VerificationCase,
    double_integral,
    multi_integral,
    run_registry,
    single_integral,
)
