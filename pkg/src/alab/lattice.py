"""Finite-index subgroups of Z^d, their dual torsion groups, and slice counts.

A subgroup is given by a nonsingular integer matrix whose columns generate
it.  Everything exact goes through the Smith normal form ``S @ B @ T = D``
computed over Python integers.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, reduce
from typing import Iterator, Sequence

import numpy as np

Matrix = list[list[int]]


def _identity(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def smith_normal_form(A: Sequence[Sequence[int]]) -> tuple[Matrix, Matrix, Matrix]:
    """Return (S, D, T) with S @ A @ T = D, S and T unimodular.

    D is diagonal with nonnegative entries, each dividing the next.
    """
    A = [[int(x) for x in row] for row in A]
    n, m = len(A), len(A[0])
    S, T = _identity(n), _identity(m)

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        S[i], S[j] = S[j], S[i]

    def swap_cols(i, j):
        for M in (A, T):
            for row in M:
                row[i], row[j] = row[j], row[i]

    def add_row(dst, src, q):  # row_dst += q * row_src
        for M in (A, S):
            M[dst] = [a + q * b for a, b in zip(M[dst], M[src])]

    def add_col(dst, src, q):
        for M in (A, T):
            for row in M:
                row[dst] += q * row[src]

    for k in range(min(n, m)):
        while True:
            entries = [(abs(A[i][j]), i, j) for i in range(k, n) for j in range(k, m) if A[i][j]]
            if not entries:
                break
            _, pi, pj = min(entries)
            if pi != k:
                swap_rows(k, pi)
            if pj != k:
                swap_cols(k, pj)
            p = A[k][k]
            dirty = False
            for i in range(k + 1, n):
                if A[i][k]:
                    add_row(i, k, -(A[i][k] // p))
                    dirty |= A[i][k] != 0
            for j in range(k + 1, m):
                if A[k][j]:
                    add_col(j, k, -(A[k][j] // p))
                    dirty |= A[k][j] != 0
            if dirty:
                continue
            bad = next(((i, j) for i in range(k + 1, n) for j in range(k + 1, m) if A[i][j] % p), None)
            if bad is None:
                break
            add_row(k, bad[0], 1)
        if A[k][k] < 0:
            A[k] = [-a for a in A[k]]
            S[k] = [-a for a in S[k]]
    return S, A, T


def hermite_normal_form(B: Sequence[Sequence[int]]) -> Matrix:
    """Column-style HNF of a nonsingular square matrix (same column lattice).

    The result H is lower triangular with positive diagonal and entries left
    of each diagonal entry reduced into [0, H[i][i]).
    """
    n = len(B)
    cols = [[int(B[i][j]) for i in range(n)] for j in range(n)]  # list of column vectors
    for i in range(n):
        # gcd-reduce row i over columns i..n-1
        while True:
            nz = [j for j in range(i, n) if cols[j][i]]
            if not nz:
                raise ValueError("singular basis")
            piv = min(nz, key=lambda j: abs(cols[j][i]))
            cols[i], cols[piv] = cols[piv], cols[i]
            done = True
            for j in range(i + 1, n):
                if cols[j][i]:
                    q = cols[j][i] // cols[i][i]
                    cols[j] = [a - q * b for a, b in zip(cols[j], cols[i])]
                    done &= cols[j][i] == 0
            if done:
                break
        if cols[i][i] < 0:
            cols[i] = [-a for a in cols[i]]
    for i in range(n):
        for j in range(i):
            q = cols[j][i] // cols[i][i]
            cols[j] = [a - q * b for a, b in zip(cols[j], cols[i])]
    return [[cols[j][i] for j in range(n)] for i in range(n)]


def _det(M: Sequence[Sequence[int]]) -> int:
    n = len(M)
    A = [[Fraction(x) for x in row] for row in M]
    det = Fraction(1)
    for k in range(n):
        piv = next((i for i in range(k, n) if A[i][k] != 0), None)
        if piv is None:
            return 0
        if piv != k:
            A[k], A[piv] = A[piv], A[k]
            det = -det
        det *= A[k][k]
        for i in range(k + 1, n):
            r = A[i][k] / A[k][k]
            if r:
                A[i] = [a - r * b for a, b in zip(A[i], A[k])]
    return int(det)


@dataclass(frozen=True)
class TorsionPoint:
    """A point of the torus with rational angles, omega = exp(2 pi i angles)."""

    angles: tuple[Fraction, ...]

    def __post_init__(self):
        reduced = tuple(Fraction(a) - math.floor(Fraction(a)) for a in self.angles)
        object.__setattr__(self, "angles", reduced)

    @classmethod
    def from_numerators(cls, nums: Sequence[int], denom: int) -> "TorsionPoint":
        return cls(tuple(Fraction(int(a) % denom, denom) for a in nums))

    @property
    def dims(self) -> int:
        return len(self.angles)

    @property
    def order(self) -> int:
        return reduce(math.lcm, (a.denominator for a in self.angles), 1)

    def numerators(self) -> tuple[int, ...]:
        """Integer a with angles = a / order."""
        N = self.order
        return tuple(int(a * N) for a in self.angles)

    def conjugate(self) -> "TorsionPoint":
        return TorsionPoint(tuple(-a for a in self.angles))

    def as_float(self) -> np.ndarray:
        return np.array([float(a) for a in self.angles])

    def __str__(self):
        return "(" + ", ".join(str(a) for a in self.angles) + ")"


@dataclass(frozen=True)
class Subtorus:
    """H_m = {s in S^d : s^m = 1} for a nonzero integer vector m."""

    m: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "m", tuple(int(x) for x in self.m))
        if not any(self.m):
            raise ValueError("subtorus vector m must be nonzero")


@dataclass(frozen=True)
class ShortestVector:
    norm: int
    vector: tuple[int, ...]
    search_radius: int


@dataclass(frozen=True, eq=False)
class SubgroupLattice:
    """Finite-index subgroup of Z^d generated by the columns of ``basis``."""

    basis: tuple[tuple[int, ...], ...]
    label: str = field(default="", compare=False)

    def __post_init__(self):
        B = tuple(tuple(int(x) for x in row) for row in self.basis)
        if not B or any(len(row) != len(B) for row in B):
            raise ValueError("basis must be a square integer matrix")
        object.__setattr__(self, "basis", B)
        if self.index == 0:
            raise ValueError("singular basis: subgroup has infinite index")

    @classmethod
    def diagonal(cls, ns: Sequence[int]) -> "SubgroupLattice":
        d = len(ns)
        return cls(tuple(tuple(int(ns[i]) if i == j else 0 for j in range(d)) for i in range(d)),
                   label="diag:" + ",".join(str(n) for n in ns))

    @classmethod
    def scaled(cls, n: int, dims: int) -> "SubgroupLattice":
        """n Z^d."""
        return cls.diagonal([n] * dims)

    @classmethod
    def from_columns(cls, cols: Sequence[Sequence[int]]) -> "SubgroupLattice":
        d = len(cols)
        return cls(tuple(tuple(int(cols[j][i]) for j in range(d)) for i in range(d)))

    @property
    def dims(self) -> int:
        return len(self.basis)

    def columns(self) -> list[tuple[int, ...]]:
        return [tuple(row[j] for row in self.basis) for j in range(self.dims)]

    @cached_property
    def index(self) -> int:
        """|Z^d / Gamma| = |det basis|."""
        return abs(_det(self.basis))

    @cached_property
    def _snf(self):
        return smith_normal_form(self.basis)

    @property
    def invariant_factors(self) -> tuple[int, ...]:
        _, D, _ = self._snf
        return tuple(D[i][i] for i in range(self.dims))

    @cached_property
    def hnf(self) -> tuple[tuple[int, ...], ...]:
        return tuple(tuple(r) for r in hermite_normal_form(self.basis))

    def __eq__(self, other):
        if not isinstance(other, SubgroupLattice):
            return NotImplemented
        return self.dims == other.dims and self.hnf == other.hnf

    def __hash__(self):
        return hash(self.hnf)

    def descriptor(self) -> str:
        if self.label:
            return self.label
        return "mat:" + ";".join(",".join(str(x) for x in row) for row in self.basis)

    def contains(self, v: Sequence[int]) -> bool:
        return self.order_of(v) == 1

    def order_of(self, v: Sequence[int]) -> int:
        """Order of v in Z^d / Gamma."""
        S, _, _ = self._snf
        Sv = [sum(a * int(b) for a, b in zip(row, v)) for row in S]
        k = 1
        for dii, x in zip(self.invariant_factors, Sv):
            k = math.lcm(k, dii // math.gcd(dii, x))
        return k

    def dual_numerators(self, start: int = 0, stop: int | None = None) -> tuple[np.ndarray, int]:
        """Omega_Gamma as integer numerators over the group exponent e.

        Returns (A, e) where row r of A gives the angles A[r] / e.  Rows are in
        lexicographic order of the Smith coordinates; ``start``/``stop`` select
        a contiguous range of that order.
        """
        S, _, _ = self._snf
        D = self.invariant_factors
        e = D[-1]
        stop = self.index if stop is None else min(stop, self.index)
        idx = np.arange(start, stop, dtype=np.int64)
        # mixed radix digits, last coordinate fastest
        ks = np.empty((idx.size, self.dims), dtype=np.int64)
        rem = idx.copy()
        for i in range(self.dims - 1, -1, -1):
            ks[:, i] = rem % D[i]
            rem //= D[i]
        scale = np.array([e // dii for dii in D], dtype=np.int64)
        ST = np.array(S, dtype=object).T
        small = all(abs(int(x)) < 2**20 for x in ST.flat) and e < 2**20
        if small:
            A = (ks * scale) @ ST.astype(np.int64).T
        else:
            A = ((ks * scale).astype(object) @ ST.T)
        return np.mod(A, e).astype(np.int64), e

    def dual_angles(self) -> np.ndarray:
        A, e = self.dual_numerators()
        return A / e


def enumerate_dual(gamma: SubgroupLattice, start: int = 0, stop: int | None = None,
                   chunk: int = 1 << 14) -> Iterator[TorsionPoint]:
    """Stream the |det| points of Omega_Gamma in Smith-coordinate order."""
    stop = gamma.index if stop is None else min(stop, gamma.index)
    for lo in range(start, stop, chunk):
        A, e = gamma.dual_numerators(lo, min(lo + chunk, stop))
        for row in A:
            yield TorsionPoint.from_numerators(row, e)


def shortest_vector(gamma: SubgroupLattice) -> ShortestVector:
    """Exhaustive search for a sup-norm shortest nonzero vector of Gamma.

    Any basis column is a lattice vector, so the minimum lies in the box of
    radius min(||column||_inf); every integer point of that box is tested.
    """
    cand = gamma.columns() + [tuple(row[j] for row in gamma.hnf) for j in range(gamma.dims)]
    R = min(max(abs(x) for x in c) for c in cand)
    S, _, _ = gamma._snf
    D = np.array(gamma.invariant_factors, dtype=np.int64)
    S = np.array(S, dtype=np.int64)
    d = gamma.dims
    best = None
    axis = np.arange(-R, R + 1, dtype=np.int64)
    if d == 1:
        rest = np.zeros((1, 0), dtype=np.int64)
    else:
        rest = np.array(list(itertools.product(axis, repeat=d - 1)), dtype=np.int64)
    for x0 in axis:
        V = np.hstack([np.full((rest.shape[0], 1), x0), rest])
        member = np.all((V @ S.T) % D == 0, axis=1)
        norms = np.abs(V).max(axis=1)
        ok = member & (norms > 0)
        if ok.any():
            i = int(np.argmin(np.where(ok, norms, R + 1)))
            if best is None or norms[i] < best[0]:
                best = (int(norms[i]), tuple(int(v) for v in V[i]))
    return ShortestVector(best[0], best[1], R)


def lattice_norm(gamma: SubgroupLattice) -> int:
    """<Gamma> = min sup-norm of a nonzero vector of Gamma."""
    return shortest_vector(gamma).norm


def slice_count(gamma: SubgroupLattice, H: Subtorus | Sequence[int]) -> int:
    """|Omega_Gamma intersected with H_m| = |Omega_Gamma| / (order of m mod Gamma)."""
    if not isinstance(H, Subtorus):
        H = Subtorus(tuple(H))
    return gamma.index // gamma.order_of(H.m)


def parse_lattice(text: str, dims: int | None = None) -> SubgroupLattice:
    """``diag:n1,...,nd``, ``diag:n`` (with dims), or ``mat:a11,a12;a21,a22`` row-major."""
    kind, _, body = text.partition(":")
    kind = kind.strip()
    if kind == "diag":
        ns = [int(x) for x in body.split(",") if x.strip()]
        if len(ns) == 1 and dims:
            ns = ns * dims
        return SubgroupLattice.diagonal(ns)
    if kind == "mat":
        rows = [[int(x) for x in r.split(",")] for r in body.split(";")]
        return SubgroupLattice(tuple(tuple(r) for r in rows), label=text.strip())
    raise ValueError(f"unknown lattice syntax {text!r}")


def parse_lattice_sequence(text: str, dims: int) -> list[SubgroupLattice]:
    """Semicolon-free list syntax: ``diag-range:a:b:step`` (inclusive) or
    whitespace/``|``-separated lattice descriptors."""
    text = text.strip()
    if text.startswith("diag-range:"):
        parts = [int(x) for x in text.split(":")[1:]]
        a, b = parts[0], parts[1]
        step = parts[2] if len(parts) > 2 else 1
        return [SubgroupLattice.scaled(n, dims) for n in range(a, b + 1, step)]
    return [parse_lattice(p, dims) for p in text.replace("|", " ").split()]
