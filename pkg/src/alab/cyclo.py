"""Exact evaluation of integer Laurent polynomials at torsion points.

f(omega) with omega of order N lives in Z[zeta_N].  Substituting
u_j -> x^{a_j} and reducing mod x^N - 1 gives an integer residue r(x);
f(omega) = 0 exactly when the cyclotomic polynomial Phi_N divides r.
"""
from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from functools import reduce

import numpy as np

from .laurent import LaurentPoly, eval_at_angles
from .lattice import TorsionPoint

MAX_ORDER = 100_000
ZERO_REL = 1e-6

_PHI: dict[int, tuple[int, ...]] = {}
_PHI_LOCK = threading.Lock()


def _divisors(n: int) -> list[int]:
    small = [d for d in range(1, math.isqrt(n) + 1) if n % d == 0]
    return sorted(set(small + [n // d for d in small]))


def _exact_div(num: list[int], den: tuple[int, ...]) -> list[int]:
    """Exact quotient of integer polynomials (coefficient lists, low degree first)."""
    num = list(num)
    dn = len(den) - 1
    lead = den[-1]
    q = [0] * (len(num) - dn)
    for k in range(len(q) - 1, -1, -1):
        c = num[k + dn]
        if c % lead:
            raise ArithmeticError("division is not exact")
        c //= lead
        q[k] = c
        if c:
            for i, b in enumerate(den):
                num[k + i] -= c * b
    if any(num[:dn]):
        raise ArithmeticError("division is not exact")
    return q


def cyclotomic(N: int) -> tuple[int, ...]:
    """Coefficients of Phi_N, lowest degree first."""
    if N < 1:
        raise ValueError("N must be >= 1")
    if N > MAX_ORDER:
        raise ValueError(f"order {N} exceeds the configured cap {MAX_ORDER}")
    hit = _PHI.get(N)
    if hit is not None:
        return hit
    num = [-1] + [0] * (N - 1) + [1]
    for e in _divisors(N)[:-1]:
        num = _exact_div(num, cyclotomic(e))
    phi = tuple(num)
    with _PHI_LOCK:
        _PHI.setdefault(N, phi)
    return _PHI[N]


def poly_rem(num: list[int], den: tuple[int, ...]) -> list[int]:
    """Remainder of integer polynomial division by a monic divisor."""
    num = list(num)
    dn = len(den) - 1
    if den[-1] != 1:
        raise ValueError("divisor must be monic")
    for k in range(len(num) - 1, dn - 1, -1):
        c = num[k]
        if c:
            base = k - dn
            for i, b in enumerate(den):
                num[base + i] -= c * b
    return num[:dn]


@dataclass(frozen=True)
class CycloValue:
    """f(omega) held exactly in Z[x]/(x^N - 1) together with its numeric image."""

    order: int
    residue: tuple[int, ...]
    exact_zero: bool
    approx: complex


def residue_at(f: LaurentPoly, omega: TorsionPoint) -> tuple[int, tuple[int, ...]]:
    N = omega.order
    a = omega.numerators()
    res = [0] * N
    for m, c in f.terms.items():
        res[sum(x * y for x, y in zip(m, a)) % N] += c
    return N, tuple(res)


def residue_is_zero(residue: tuple[int, ...] | list[int], N: int) -> bool:
    """True iff sum_k residue[k] zeta_N^k = 0."""
    if not any(residue):
        return True
    return not any(poly_rem(list(residue), cyclotomic(N)))


def torsion_eval(f: LaurentPoly, omega: TorsionPoint) -> CycloValue:
    if omega.dims != f.dims:
        raise ValueError("dimension mismatch between polynomial and torsion point")
    N, res = residue_at(f, omega)
    zero = residue_is_zero(res, N)
    approx = eval_at_angles(f, omega.angles)
    return CycloValue(N, res, zero, approx)


def is_exact_zero(f: LaurentPoly, omega: TorsionPoint) -> bool:
    N, res = residue_at(f, omega)
    return residue_is_zero(res, N)


def zero_prefilter(f: LaurentPoly) -> float:
    """Numeric magnitude below which an exact test is required.

    An exact zero evaluates in double precision to well under this bound, so
    points above it can be classified nonzero without the exact test.
    """
    return ZERO_REL * (1.0 + f.l1_norm())


def exact_zero_mask(f: LaurentPoly, numerators: np.ndarray, denom: int,
                    values: np.ndarray | None = None) -> np.ndarray:
    """Exact-zero flags for torsion points numerators / denom (rows).

    ``values`` are the numeric f-values at those points if already known.
    """
    numerators = np.asarray(numerators, dtype=np.int64)
    if values is None:
        values = f.evaluate(numerators / denom)
    mask = np.zeros(numerators.shape[0], dtype=bool)
    cand = np.flatnonzero(np.abs(values) < zero_prefilter(f))
    for r in cand:
        omega = TorsionPoint.from_numerators(numerators[r], denom)
        mask[r] = is_exact_zero(f, omega)
    return mask


def lcm_all(values) -> int:
    return reduce(math.lcm, values, 1)
