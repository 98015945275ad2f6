"""Algebraic degrees of generalized Nash equilibrium problems."""

from .degrees import (
    GnepShape,
    PreconditionError,
    gnep_degree_fixed,
    gnep_degree_total,
    lambda_active_sets,
    nep_degree_total,
    unconstrained_degree,
)
from .fjsys import GnepInstance, build, export_cas, export_json, import_json
from .poly import parse_poly, format_poly

__version__ = "0.1.0"
