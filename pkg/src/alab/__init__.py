"""Mahler measures, unitary varieties, homoclinic points and periodic-point growth
for principal algebraic Z^d-actions defined by integer Laurent polynomials."""

from .laurent import LaurentPoly, PolySyntaxError, parse_laurent
from .lattice import SubgroupLattice, TorsionPoint
from .mahler import InfiniteEntropyError, mahler_quadrature, riemann_sum_log

__version__ = "0.1.0"

__all__ = ["LaurentPoly", "PolySyntaxError", "parse_laurent", "SubgroupLattice",
           "TorsionPoint", "InfiniteEntropyError", "mahler_quadrature", "riemann_sum_log"]
