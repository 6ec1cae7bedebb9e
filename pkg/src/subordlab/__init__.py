"""Numerical toolkit for differential subordination of Briot-Bouquet type."""
from .briot_bouquet import BBParams, bb_operator, bb_solve_from_target, check_inequalities, check_thm21, odl_closed_form
from .config import Config, config_override, get_config, set_config
from .dominants import DominantSpec, boundary_curve, dominant_series, evaluate_dominant, geometry_checks
from .integral_ops import OperatorParams, bernardi_general, bernardi_power, existence_operator, two_function_operator
from .power_series import TaylorSeries, ValuedSeries, blaschke_schwarz, compose, schwarz_sample
from .subordination import SubordinationVerdict, is_subordinate, make_subordinate

__version__ = "0.1.0"

__all__ = [
    "BBParams",
    "Config",
    "DominantSpec",
    "OperatorParams",
    "SubordinationVerdict",
    "TaylorSeries",
    "ValuedSeries",
    "bb_operator",
    "bb_solve_from_target",
    "bernardi_general",
    "bernardi_power",
    "blaschke_schwarz",
    "boundary_curve",
    "check_inequalities",
    "check_thm21",
    "compose",
    "config_override",
    "dominant_series",
    "evaluate_dominant",
    "existence_operator",
    "geometry_checks",
    "get_config",
    "is_subordinate",
    "make_subordinate",
    "odl_closed_form",
    "schwarz_sample",
    "set_config",
    "two_function_operator",
]
