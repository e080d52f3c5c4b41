"""Diophantine experiments: Gelfond-type scans, the counting ratio, and the atoral lift."""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass

import mpmath

from . import cyclo
from .laurent import LaurentPoly
from .lattice import SubgroupLattice
from .variety import VarietySample, proximity_counts

UNIT_TOL = 1e-12        # |1 - |lambda|| below this: on the circle
UNIT_WARN = 1e-8        # between UNIT_TOL and this: reported as borderline
DPS = 40


class NoUnitaryRootError(ValueError):
    """The polynomial has no root on the unit circle."""


def _dense(f: LaurentPoly) -> list[int]:
    lo, hi = f.support_box()
    out = [0] * (hi[0] - lo[0] + 1)
    for (e,), c in f.terms.items():
        out[e - lo[0]] = c
    return out


def _torsion_orders(p: list[int]) -> list[int]:
    """Orders N with Phi_N dividing p (p low degree first)."""
    deg = len(p) - 1
    # phi(N) >= sqrt(N/2), so Phi_N of degree <= deg needs N <= 2 deg^2
    out = []
    for N in range(1, 2 * deg * deg + 3):
        phi = cyclo.cyclotomic(N)
        if len(phi) <= len(p) and not any(cyclo.poly_rem(p, phi)):
            out.append(N)
    return out


@dataclass(frozen=True)
class UnitaryRoot:
    value: complex
    angle: float            # arg / 2 pi in [0, 1)
    modulus_defect: float   # |1 - |lambda||
    torsion_order: int      # 0 when lambda is not a root of unity
    borderline: bool = False


def unitary_roots(f: LaurentPoly, dps: int = DPS) -> tuple[list[UnitaryRoot], list[UnitaryRoot]]:
    """Roots on the unit circle, split into (non-torsion, torsion)."""
    if f.dims != 1:
        raise ValueError("Gelfond scan needs a univariate polynomial")
    if f.is_zero():
        raise ValueError("f must be nonzero")
    p = _dense(f)
    while p and p[0] == 0:
        p.pop(0)
    if len(p) < 2:
        raise NoUnitaryRootError("f is a monomial: no roots")
    orders = _torsion_orders(p)
    with mpmath.workdps(dps):
        roots = mpmath.polyroots(list(reversed(p)), maxsteps=200, extraprec=4 * dps)
        free, torsion = [], []
        for z in roots:
            defect = float(abs(1 - abs(z)))
            if defect >= UNIT_WARN:
                continue
            ang = float(mpmath.arg(z) / (2 * mpmath.pi)) % 1.0
            order = 0
            for N in orders:
                if abs(mpmath.power(z, N) - 1) < mpmath.mpf(10) ** (-dps // 2):
                    order = N
                    break
            r = UnitaryRoot(complex(z), ang, defect, order, defect >= UNIT_TOL)
            (torsion if order else free).append(r)
    if not free and not torsion:
        raise NoUnitaryRootError("no roots on the unit circle")
    return free, torsion


@dataclass(frozen=True)
class GelfondRow:
    root: int
    n: int
    gap: float          # |lambda^n - 1|
    dist: float         # distance from lambda to the nearest n-th root of unity
    bound: float        # exp(-eps n)
    violation: bool


@dataclass(frozen=True)
class GelfondTable:
    roots: tuple[UnitaryRoot, ...]
    degenerate: tuple[UnitaryRoot, ...]
    rows: tuple[GelfondRow, ...]
    eps: float

    @property
    def violations(self) -> int:
        return sum(r.violation for r in self.rows)

    @property
    def last_violation(self) -> int:
        """Largest n with a violation (0 if none): the bound is asymptotic in n."""
        return max((r.n for r in self.rows if r.violation), default=0)

    @property
    def min_margin(self) -> float:
        """min over rows of log(gap) + eps n; positive means no violation."""
        return min(math.log(r.gap) + self.eps * r.n for r in self.rows) if self.rows else math.inf

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["root", "angle", "n", "gap", "dist", "bound", "violation"])
        for r in self.rows:
            w.writerow([r.root, f"{self.roots[r.root].angle:.15g}", r.n, f"{r.gap:.15g}",
                        f"{r.dist:.15g}", f"{r.bound:.15g}", int(r.violation)])
        return buf.getvalue()


def gelfond_table(f: LaurentPoly, n_max: int, eps: float, dps: int = DPS) -> GelfondTable:
    """|lambda^n - 1| against exp(-eps n) for each non-torsion unitary root, n = 1..n_max.

    Torsion roots are reported as degenerate and not scanned.  The powers are
    taken in ``dps``-digit arithmetic so gaps far below double precision are
    still resolved.
    """
    if eps <= 0:
        raise ValueError("eps must be positive")
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    free, torsion = unitary_roots(f, dps)
    rows = []
    with mpmath.workdps(dps):
        coeffs = list(reversed(_dense(f)))
        for i, r in enumerate(free):
            lam = mpmath.findroot(lambda z: mpmath.polyval(coeffs, z), mpmath.mpc(r.value))
            lam = lam / abs(lam)
            theta = mpmath.arg(lam) / (2 * mpmath.pi)
            pw = mpmath.mpf(1)
            for n in range(1, n_max + 1):
                pw = pw * lam
                gap = abs(pw - 1)
                if gap == 0:
                    raise ArithmeticError(f"lambda^{n} = 1 for a root classified non-torsion")
                frac = n * theta - mpmath.nint(n * theta)
                dist = 2 * abs(mpmath.sin(mpmath.pi * frac / n))
                bound = math.exp(-eps * n)
                rows.append(GelfondRow(i, n, float(gap), float(dist), bound, float(gap) <= bound))
    return GelfondTable(tuple(free), tuple(torsion), tuple(rows), eps)


@dataclass(frozen=True)
class RatioSeries:
    descriptors: tuple[str, ...]
    radii: tuple[float, ...]
    M: tuple[int, ...]
    ratios: tuple[float, ...]
    verdict: str        # "decreasing", "zero", or "not-decreasing"

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["gamma", "r", "M", "ratio"])
        for row in zip(self.descriptors, self.radii, self.M, self.ratios):
            w.writerow([row[0], f"{row[1]:.15g}", row[2], f"{row[3]:.15g}"])
        return buf.getvalue()


def _trend(values: list[float]) -> str:
    if all(v == 0 for v in values):
        return "zero"
    tail = values[len(values) - max(2, len(values) // 3):]
    ok = values[-1] < values[0] and all(b <= a for a, b in zip(tail, tail[1:]))
    return "decreasing" if ok else "not-decreasing"


def quantitative_ratio(f: LaurentPoly, gammas: list[SubgroupLattice], radii: list[float],
                       sample: VarietySample) -> RatioSeries:
    """M_f(Omega_Gamma_n, r_n) log(1/r_n) / |Omega_Gamma_n| along the sequence."""
    if len(gammas) != len(radii):
        raise ValueError("lattice and radius sequences differ in length")
    if not gammas:
        raise ValueError("empty sequence")
    if any(not 0 < r < 1 for r in radii):
        raise ValueError("radii must lie in (0, 1)")
    Ms, ratios = [], []
    for g, r in zip(gammas, radii):
        pc = proximity_counts(f, g, r, sample)
        Ms.append(pc.M)
        ratios.append(pc.M * math.log(1 / r) / g.index)
    return RatioSeries(tuple(g.descriptor() for g in gammas), tuple(float(r) for r in radii),
                       tuple(Ms), tuple(ratios), _trend(ratios))


def lift_to_atoral(f: LaurentPoly) -> LaurentPoly:
    """h = f f* + (s - 1)(s^-1 - 1) in d + 1 variables; U(h) = U(f) x {1}."""
    if f.is_zero():
        raise ValueError("f must be nonzero")
    d = f.dims + 1
    F = f.embed(d)
    s = LaurentPoly.variable(d, d)
    return F * F.adjoint() + (s - 1) * (s.adjoint() - 1)


def psi_lattice(gamma: SubgroupLattice, psi_k: int) -> SubgroupLattice:
    """The lattice generated by Gamma x {0} and (0, ..., 0, psi_k)."""
    if psi_k < 1:
        raise ValueError("psi(k) must be a positive integer")
    d = gamma.dims
    cols = [tuple(c) + (0,) for c in gamma.columns()] + [(0,) * d + (psi_k,)]
    return SubgroupLattice.from_columns(cols)
