"""Periodic-point statistics: Fix-component dimension and growth of log component counts.

For a finite-index subgroup Gamma, the torsion points Omega_Gamma split into
exact zeros of f (each adds one torus dimension to the identity component
of the Gamma-periodic points) and the rest, whose log |f| values sum to the
asymptotic log of the number of components.
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass


from . import cyclo
from .laurent import LaurentPoly
from .lattice import SubgroupLattice, lattice_norm
from .mahler import DEFAULT_GRID, DegenerateSumError, mahler_quadrature, riemann_terms
from .variety import classify_atoral


def fix_component_dim(f: LaurentPoly, gamma: SubgroupLattice, chunk: int = 1 << 16) -> int:
    """Number of omega in Omega_Gamma with f(omega) = 0 exactly."""
    if f.is_zero():
        raise ValueError("f must be nonzero")
    if gamma.dims != f.dims:
        raise ValueError("lattice and polynomial dimensions differ")
    zeros = 0
    for lo in range(0, gamma.index, chunk):
        A, e = gamma.dual_numerators(lo, lo + chunk)
        zeros += int(cyclo.exact_zero_mask(f, A, e).sum())
    return zeros


def _log_count(f: LaurentPoly, gamma: SubgroupLattice) -> tuple[float, int]:
    if f.is_zero():
        raise ValueError("f must be nonzero")
    parts, zeros = riemann_terms(f, gamma)
    if zeros == gamma.index:
        raise DegenerateSumError(f"f vanishes on all of Omega_Gamma ({gamma.descriptor()})")
    return math.fsum(parts), zeros


def fix_log_count(f: LaurentPoly, gamma: SubgroupLattice) -> float:
    """Sum of log|f(omega)| over omega in Omega_Gamma off U(f).

    This is the log of the product formula for the number of connected
    components of the Gamma-periodic points; it is correct only up to a
    subexponential factor when U(f) meets Omega_Gamma.
    """
    return _log_count(f, gamma)[0]


@dataclass(frozen=True)
class GrowthRow:
    descriptor: str
    index: int
    excluded_zeros: int
    log_count: float
    rate: float
    lattice_norm: int


@dataclass(frozen=True)
class GrowthTable:
    rows: tuple[GrowthRow, ...]
    target: float
    target_resolution: str
    empirical_only: bool = False      # set for toral f: convergence is not known there
    verdict_note: str = ""

    def __post_init__(self):
        if not all(math.isfinite(r.rate) for r in self.rows):
            raise ValueError("every growth rate must be finite")

    @property
    def final_error(self) -> float:
        return abs(self.rows[-1].rate - self.target)

    def errors(self) -> list[float]:
        return [abs(r.rate - self.target) for r in self.rows]

    def fluctuation(self, rows: slice) -> float:
        """Max minus min rate over the selected rows."""
        rates = [r.rate for r in self.rows[rows]]
        return max(rates) - min(rates)

    def trend_ok(self) -> bool:
        """Final error below first error and tail fluctuation below head fluctuation."""
        if len(self.rows) < 6:
            return self.errors()[-1] < self.errors()[0]
        return (self.errors()[-1] < self.errors()[0]
                and self.fluctuation(slice(-3, None)) < self.fluctuation(slice(0, 3)))

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["gamma", "index", "norm", "excluded_zeros", "log_count", "rate", "abs_error"])
        for r in self.rows:
            w.writerow([r.descriptor, r.index, r.lattice_norm, r.excluded_zeros,
                        f"{r.log_count:.15g}", f"{r.rate:.15g}", f"{abs(r.rate - self.target):.15g}"])
        return buf.getvalue()


def growth_series(f: LaurentPoly, gammas: list[SubgroupLattice], target_grid: int | None = None,
                  check_atoral: bool = True) -> GrowthTable:
    """Normalized log component counts along a sequence of lattices of increasing norm."""
    if not gammas:
        raise ValueError("empty lattice sequence")
    if f.is_zero():
        raise ValueError("f must be nonzero")
    norms = [lattice_norm(g) for g in gammas]
    if any(b <= a for a, b in zip(norms, norms[1:])):
        raise ValueError("lattice norms must be strictly increasing")
    rows = []
    for g, nrm in zip(gammas, norms):
        total, zeros = _log_count(f, g)
        rows.append(GrowthRow(g.descriptor(), g.index, zeros, total, total / g.index, nrm))
    N = target_grid or DEFAULT_GRID.get(f.dims, 64)
    target = mahler_quadrature(f, N)
    empirical, note = False, ""
    if check_atoral and f.dims >= 2:
        v = classify_atoral(f)
        if v.verdict != "atoral":
            empirical = True
            note = f"f classified {v.verdict}: convergence of the rates is not known here"
    return GrowthTable(tuple(rows), target.value, target.resolution, empirical, note)
