"""Logarithmic Mahler measure and entropy of principal actions.

Three routes to the same number:

* ``mahler_quadrature``: midpoint rule on a half-step offset N^d grid;
* ``riemann_sum_log``: the average of log|f| over a dual group Omega_Gamma,
  with exact zeros left out;
* ``resultant_growth``: the d = 1 Riemann sum computed exactly from integer
  resultants.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from . import cyclo
from .laurent import LaurentPoly
from .lattice import SubgroupLattice
from .reduce import block_sums

DEFAULT_GRID = {1: 4096, 2: 512, 3: 128}
SKIP_REL = 1e-14


class InfiniteEntropyError(ValueError):
    """The zero polynomial: the action has infinite entropy."""

    def __init__(self, msg: str = "infinite entropy: f = 0"):
        super().__init__(msg)


class DegenerateSumError(ValueError):
    """f vanishes at every point of Omega_Gamma."""


@dataclass(frozen=True)
class MahlerEstimate:
    value: float
    method: str
    resolution: str
    excluded_zeros: int = 0
    skipped_nodes: int = 0

    def __post_init__(self):
        if not math.isfinite(self.value):
            raise ValueError("Mahler estimate must be finite")
        if self.method == "quadrature" and self.excluded_zeros:
            raise ValueError("quadrature never excludes exact zeros")


def _require_nonzero(f: LaurentPoly) -> None:
    if f.is_zero():
        raise InfiniteEntropyError()


def grid_slabs(f: LaurentPoly, N: int, offset=0.5, slab: int | None = None
               ) -> Iterator[np.ndarray]:
    """Values of f on the grid t_k = (k + offset)/N, streamed along axis 0.

    ``offset`` is a scalar or one offset per axis.
    Each yielded array has shape (b, N, ..., N).  The grid values are an
    inverse DFT of the exponent-wrapped coefficients, which is exact for
    trigonometric polynomials of any degree.
    """
    d = f.dims
    exps, coefs = f.arrays()
    offs = np.broadcast_to(np.asarray(offset, dtype=float), (d,))
    t0 = (np.arange(N) + offs[0]) / N
    if d == 1:
        phase = np.outer(t0, exps[:, 0].astype(float))
        phase -= np.floor(phase)
        yield (np.exp(2j * np.pi * phase) @ coefs)
        return
    groups: dict[int, list[int]] = {}
    for r, m0 in enumerate(exps[:, 0]):
        groups.setdefault(int(m0), []).append(r)
    keys = sorted(groups)
    rest_shape = (N,) * (d - 1)
    G = np.empty((len(keys), N ** (d - 1)), dtype=complex)
    for gi, m0 in enumerate(keys):
        A = np.zeros(rest_shape, dtype=complex)
        for r in groups[m0]:
            m = exps[r, 1:]
            twist = np.exp(2j * np.pi * ((m * offs[1:]) % N) / N).prod()
            np.add.at(A, tuple(int(x) % N for x in m), coefs[r] * twist)
        G[gi] = (np.fft.ifftn(A) * N ** (d - 1)).ravel()
    m0s = np.array(keys, dtype=float)
    if slab is None:
        slab = max(1, (1 << 21) // N ** (d - 1))
    for lo in range(0, N, slab):
        ph = np.outer(t0[lo:lo + slab], m0s)
        ph -= np.floor(ph)
        E = np.exp(2j * np.pi * ph)
        yield (E @ G).reshape((-1,) + rest_shape)


def mahler_quadrature(f: LaurentPoly, N: int) -> MahlerEstimate:
    """Midpoint-rule mean of log|f| over the torus.

    Nodes with |f| below 1e-14 * ||f||_1 are skipped and counted; the mean is
    taken over all N^d nodes so a skipped node contributes zero.
    """
    _require_nonzero(f)
    if N < 2:
        raise ValueError("grid size must be >= 2")
    floor = SKIP_REL * f.l1_norm()
    parts: list[float] = []
    skipped = 0
    for vals in grid_slabs(f, N):
        a = np.abs(vals)
        bad = a < floor
        skipped += int(bad.sum())
        parts.extend(block_sums(np.log(np.where(bad, 1.0, a))))
    value = math.fsum(parts) / N ** f.dims
    return MahlerEstimate(value, "quadrature", f"grid {N}^{f.dims}", 0, skipped)


def riemann_terms(f: LaurentPoly, gamma: SubgroupLattice, chunk: int = 1 << 16
                  ) -> tuple[list[float], int]:
    """Block sums of log|f(omega)| over non-zero omega in Omega_Gamma, and the zero count."""
    if gamma.dims != f.dims:
        raise ValueError("lattice and polynomial dimensions differ")
    parts: list[float] = []
    zeros = 0
    for lo in range(0, gamma.index, chunk):
        A, e = gamma.dual_numerators(lo, lo + chunk)
        vals = f.evaluate(A / e)
        zmask = cyclo.exact_zero_mask(f, A, e, vals)
        zeros += int(zmask.sum())
        logs = np.log(np.abs(np.where(zmask, 1.0, vals)))
        parts.extend(block_sums(logs))
    return parts, zeros


def riemann_sum_log(f: LaurentPoly, gamma: SubgroupLattice) -> MahlerEstimate:
    """(1/|Omega_Gamma|) * sum of log|f(omega)| over omega not on U(f)."""
    _require_nonzero(f)
    parts, zeros = riemann_terms(f, gamma)
    if zeros == gamma.index:
        raise DegenerateSumError(f"f vanishes on all of Omega_Gamma ({gamma.descriptor()})")
    return MahlerEstimate(math.fsum(parts) / gamma.index, "riemann", gamma.descriptor(), zeros)


def _dense_univariate(f: LaurentPoly) -> list[int]:
    """Coefficients (low first) of the polynomial u^{-v} f, v the lowest exponent."""
    lo, hi = f.support_box()
    out = [0] * (hi[0] - lo[0] + 1)
    for (e,), c in f.terms.items():
        out[e - lo[0]] = c
    return out


def _resultant_with_cyclotomic(p: list[int], N: int) -> int:
    """prod over primitive N-th roots zeta of p(zeta), an exact integer."""
    import sympy

    x = sympy.Symbol("x")
    P = sympy.Poly(list(reversed(p)), x, domain="ZZ")
    Phi = sympy.Poly(list(reversed(cyclo.cyclotomic(N))), x, domain="ZZ")
    # Res(Phi, P) = prod_{Phi(zeta)=0} P(zeta) because Phi is monic.
    return int(sympy.resultant(Phi, P))


def exact_root_of_unity_product(f: LaurentPoly, n: int) -> tuple[int, int]:
    """(|prod over omega^n = 1, f(omega) != 0 of f(omega)|, number of zero factors)."""
    if f.dims != 1:
        raise ValueError("exact resultant route needs a univariate polynomial")
    _require_nonzero(f)
    p = _dense_univariate(f)
    prod = 1
    zeros = 0
    for e in cyclo._divisors(n):
        phi = cyclo.cyclotomic(e)
        if len(p) >= len(phi) and not any(cyclo.poly_rem(p, phi)):
            zeros += len(phi) - 1
            continue
        prod *= _resultant_with_cyclotomic(p, e)
    return abs(prod), zeros


def resultant_growth(f: LaurentPoly, n: int) -> float:
    """(1/n) log prod |f(omega)| over n-th roots of unity, zero factors left out."""
    prod, _ = exact_root_of_unity_product(f, n)
    return math.log(prod) / n


def entropy_principal(f: LaurentPoly, N: int | None = None) -> float:
    """Entropy of the principal action defined by f, equal to its Mahler measure."""
    _require_nonzero(f)
    N = N or DEFAULT_GRID.get(f.dims, 64)
    return mahler_quadrature(f, N).value
