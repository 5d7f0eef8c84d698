"""Real-root counting: exact Sturm oracle and certified Descartes subdivision."""
from .counting import FALLBACK_MAX_DEGREE, STURM_MAX_DEGREE, RootSession, count_roots, double_root_witness, pairing_defect
from .descartes import RootCounter, descartes_count
from .interval import Budget, Interval, RootCountResult, Unresolved
from .sturm import SturmOracle, sturm_count

__all__ = [
    "Budget",
    "Interval",
    "RootCountResult",
    "RootCounter",
    "RootSession",
    "SturmOracle",
    "Unresolved",
    "count_roots",
    "descartes_count",
    "double_root_witness",
    "pairing_defect",
    "sturm_count",
    "STURM_MAX_DEGREE",
    "FALLBACK_MAX_DEGREE",
]
