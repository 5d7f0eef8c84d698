"""Real roots of random (Kac) polynomials: certified counting, theory curves and experiments."""
from importlib.metadata import PackageNotFoundError, version

from .laws import CoefficientLaw, ConfigurationError, parse_law, seeded_stream
from .poly import CertifiedValue, PolynomialSample, evaluate, sample_polynomial, variance_profile
from .roots import Interval, RootCountResult, Unresolved, count_roots, descartes_count, sturm_count
from .theory import expected_count, kac_density

try:
    __version__ = version("artifact")
except PackageNotFoundError:  # running from a source tree
    __version__ = "0.1.0"

__all__ = [
    "CertifiedValue",
    "CoefficientLaw",
    "ConfigurationError",
    "Interval",
    "PolynomialSample",
    "RootCountResult",
    "Unresolved",
    "count_roots",
    "descartes_count",
    "evaluate",
    "expected_count",
    "kac_density",
    "parse_law",
    "sample_polynomial",
    "seeded_stream",
    "sturm_count",
    "variance_profile",
]
