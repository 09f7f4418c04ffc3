"""Filtrations of Newton nondegenerate surface singularities, computed exactly."""
from .cone import cone_contains, cone_sample
from .filtration import Filtrations
from .newton import Diagram
from .poly import LaurentPoly, parse_polynomial
from .suspension import Suspension

__all__ = ["Diagram", "Filtrations", "LaurentPoly", "Suspension", "cone_contains",
           "cone_sample", "parse_polynomial"]
__version__ = "0.1.0"
