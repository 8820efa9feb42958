"""Exact verification engine for principal bundles over finite spaces.

Finite group actions, their function-algebra coactions, the universal
differential calculus, connections, curvature, and gauge maps, all over
Gaussian rationals with every identity checked at exact equality.
"""

__version__ = "0.1.0"

from .bundle import BundleSpec, make_product
from .document import SpecDocument, SpecError, parse_spec
from .groups import FiniteGroup, RightAction, cyclic, direct_product, symmetric
from .report import CheckResult, Report
from .runner import ConfigError, RunReport, emit_report, run_checks
from .scalars import Scalar, parse_scalar

__all__ = [
    "__version__",
    "BundleSpec",
    "make_product",
    "SpecDocument",
    "SpecError",
    "parse_spec",
    "FiniteGroup",
    "RightAction",
    "cyclic",
    "direct_product",
    "symmetric",
    "CheckResult",
    "Report",
    "ConfigError",
    "RunReport",
    "emit_report",
    "run_checks",
    "Scalar",
    "parse_scalar",
]
