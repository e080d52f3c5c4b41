"""Homoclinic points from Fourier coefficients of g^k / f*.

Orientation convention used throughout: ``coeffs[n]`` is the coefficient of
u^n in the Laurent expansion of g^k / f* on the torus, i.e.

    coeffs[n] = integral of g(e(t))^k / f*(e(t)) * exp(-2 pi i n.t) dt.

With this convention the defining identity reads f* * coeffs = g^k
(convolution), and the homoclinic point itself is coeffs reduced mod 1.
"""
from __future__ import annotations

import csv
import io
import itertools
import math
from dataclasses import dataclass, field

import numpy as np
import scipy.fft

from .laurent import LaurentPoly, essential_symmetry
from .mahler import grid_slabs
from .variety import VarietySample

WORKERS = 1
# increments of the l1 partial sums must fall like r^-1.25 or faster
SUMMABLE_RATIO = 4.0 ** 1.25


class GridZeroError(ValueError):
    """f* vanishes (numerically) at a node of the DFT grid."""

    def __init__(self, node):
        super().__init__(f"f* vanishes at grid node {tuple(int(x) for x in node)}; "
                         "enlarge or re-offset the grid")
        self.node = tuple(int(x) for x in node)


@dataclass(frozen=True)
class HomoclinicWindow:
    """Coefficients of g^k / f* on the box ||n||_inf <= radius.

    ``coeffs`` is a (2R+1)^d array; the coefficient of u^n sits at index
    n + R along every axis.
    """

    f: LaurentPoly
    g: LaurentPoly
    k: int
    radius: int
    coeffs: np.ndarray = field(repr=False)
    grid_n: int
    offsets: tuple[float, ...] = ()
    aliasing: float = float("nan")
    extrapolated: bool = False

    def __post_init__(self):
        if self.grid_n <= 2 * self.radius:
            raise ValueError("grid_n must exceed 2 * window radius")
        if self.coeffs.shape != (2 * self.radius + 1,) * self.f.dims:
            raise ValueError("coefficient array does not cover the window box")

    @property
    def dims(self) -> int:
        return self.f.dims

    def coeff(self, n) -> complex:
        n = (n,) if np.isscalar(n) else tuple(n)
        if max(abs(x) for x in n) > self.radius:
            raise IndexError(f"{n} outside window of radius {self.radius}")
        return complex(self.coeffs[tuple(x + self.radius for x in n)])

    def indices(self) -> np.ndarray:
        """Integer vectors of the window, in array (C) order."""
        R = self.radius
        return np.indices(self.coeffs.shape).reshape(self.dims, -1).T - R

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow([f"n{j + 1}" for j in range(self.dims)] + ["re", "im"])
        for n, c in zip(self.indices(), self.coeffs.ravel()):
            w.writerow([int(x) for x in n] + [f"{c.real:.15g}", f"{c.imag:.15g}"])
        return buf.getvalue()


def default_offsets(d: int) -> tuple[float, ...]:
    """Grid offsets (1/2, 0, ..., 0).

    Half-step offsets on every axis resonate with point zeros of f* whose
    gradient direction has coordinate sum even (2 - u1 - u2 is the basic
    case) and leave an O(1) bias in every coefficient; this choice keeps
    the quadrature error at O(N^-1/2) there.
    """
    return (0.5,) + (0.0,) * (d - 1)


def _ratio_grid(f: LaurentPoly, g: LaurentPoly, k: int, N: int, offsets) -> np.ndarray:
    fs = f.adjoint()
    floor = 1e-14 * f.l1_norm()
    parts = []
    done = 0
    for den, num in zip(grid_slabs(fs, N, offsets), grid_slabs(g, N, offsets)):
        small = np.abs(den) < floor
        if small.any():
            node = np.argwhere(small)[0]
            node[0] += done
            raise GridZeroError(node)
        done += den.shape[0]
        parts.append(num ** k / den)
    return np.concatenate(parts, axis=0)


def _probe_indices(R: int, d: int, count: int = 16) -> np.ndarray:
    """Deterministic probe set spread over the window."""
    rng = np.random.default_rng(12345)
    probes = {(0,) * d, (-R,) * d, (R,) * d}
    while len(probes) < min(count, (2 * R + 1) ** d):
        probes.add(tuple(int(x) for x in rng.integers(-R, R + 1, size=d)))
    return np.array(sorted(probes), dtype=np.int64)


def _coefficients_at(values: np.ndarray, N: int, offsets, probes: np.ndarray) -> np.ndarray:
    """Discrete Fourier coefficients at the probe indices from grid values."""
    d = values.ndim
    out = np.empty(len(probes), dtype=complex)
    for p, n in enumerate(probes):
        acc = values
        for axis in range(d - 1, -1, -1):
            ph = n[axis] * (np.arange(N) + offsets[axis]) / N
            acc = acc @ np.exp(-2j * np.pi * (ph - np.floor(ph)))
        out[p] = acc / N ** d
    return out


def _window_coeffs(f: LaurentPoly, g: LaurentPoly, k: int, R: int, N: int, offs) -> np.ndarray:
    d = f.dims
    vals = _ratio_grid(f, g, k, N, offs)
    spectrum = scipy.fft.fftn(vals, workers=WORKERS, overwrite_x=True) / N ** d
    del vals
    idx = np.arange(-R, R + 1)
    sub = spectrum[np.ix_(*([idx % N] * d))]
    del spectrum
    for axis in range(d):
        shape = [1] * d
        shape[axis] = -1
        sub = sub * np.exp(-2j * np.pi * idx * offs[axis] / N).reshape(shape)
    return np.ascontiguousarray(sub)


def fourier_window(f: LaurentPoly, g: LaurentPoly, k: int, R: int, grid_n: int,
                   aliasing_check: bool = True, offsets=None,
                   extrapolate: bool = False) -> HomoclinicWindow:
    """Windowed Fourier coefficients of g^k / f* from an offset-grid DFT.

    The aliasing estimate is the largest change at 16 probe indices when the
    grid is doubled; the doubled grid is assembled from 2^d shifted copies of
    the original so memory stays at one grid.

    With ``extrapolate`` the grid-N and grid-N/2 results are combined by one
    Richardson step in N^-1/2.  That is the leading error term of the
    midpoint rule at an isolated zero of f* with a quadratic transverse
    direction (2 - u1 - u2 at the origin), where the plain error only falls
    by sqrt 2 per doubling.  For smooth 1/f* both grids are already exact
    and the step only scales round-off by about 6.
    """
    if f.is_zero():
        raise ValueError("f must be nonzero")
    if g.dims != f.dims:
        raise ValueError("f and g have different dims")
    if k < 1:
        raise ValueError("power k must be positive")
    if grid_n <= 2 * R or (extrapolate and grid_n // 2 <= 2 * R):
        raise ValueError("grid_n must exceed 2R (4R with extrapolation)")
    d, N = f.dims, grid_n
    offs = tuple(float(o) for o in (offsets if offsets is not None else default_offsets(d)))
    if len(offs) != d:
        raise ValueError("need one grid offset per axis")
    coeffs = _window_coeffs(f, g, k, R, N, offs)
    aliasing = float("nan")
    if aliasing_check:
        probes = _probe_indices(R, d)
        here = coeffs[tuple((probes + R).T)]
        doubled = np.zeros(len(probes), dtype=complex)
        for bits in itertools.product((0, 1), repeat=d):
            # nodes (2j + b + o) / 2N of the doubled grid, i.e. offset (b + o) / 2
            sub_offs = tuple((b + o) / 2 for b, o in zip(bits, offs))
            v = _ratio_grid(f, g, k, N, sub_offs)
            doubled += _coefficients_at(v, N, sub_offs, probes)
        doubled /= 2 ** d
        aliasing = float(np.max(np.abs(doubled - here)))
    if extrapolate:
        s = math.sqrt(2.0)
        coeffs = (s * coeffs - _window_coeffs(f, g, k, R, N // 2, offs)) / (s - 1)
    return HomoclinicWindow(f, g, k, R, coeffs, grid_n, offs, aliasing, extrapolate)


def harmonic_coefficient(n) -> float:
    """Coefficient of u^n in 1/f* for f = 2 - u1 - u2."""
    a, b = -int(n[0]), -int(n[1])
    if a < 0 or b < 0:
        return 0.0
    return math.comb(a + b, b) / 2.0 ** (a + b + 1)


def fibonacci_coefficient(n) -> float:
    """Coefficient of u^n in 1/f* for f = u^2 - u - 1."""
    n = int(n[0]) if not np.isscalar(n) else int(n)
    s5 = math.sqrt(5.0)
    lam, mu = (1 + s5) / 2, (1 - s5) / 2
    root = mu if n >= 1 else lam
    return -root ** (n - 1) / s5


ORACLES = {"harmonic": (2, harmonic_coefficient), "fibonacci": (1, fibonacci_coefficient)}


def closed_form_oracle(name: str, n) -> float:
    """Closed-form homoclinic coefficients for the two expansive/harmonic fixtures."""
    if name not in ORACLES:
        raise ValueError(f"unknown oracle {name!r}")
    arity, fn = ORACLES[name]
    n = (n,) if np.isscalar(n) else tuple(n)
    if len(n) != arity:
        raise ValueError(f"{name} takes a {arity}-vector index")
    return fn(n)


@dataclass(frozen=True)
class SummabilityReport:
    l1_partial_sums: tuple[float, ...]     # over boxes ||n||_inf <= r, r = 0..R
    tail_increments: tuple[float, ...]     # S(r) - S(r-1), r = 1..R
    decay_exponent: float                  # slope of log|coeff| vs log r along the diagonals
    shell_exponent: float                  # same fit for the max |coeff| on each shell
    exponential_rate: float                # slope of log(shell max) vs r
    exponential_preferred: bool
    tail_ratio: float                      # increment at R/4 over increment at R

    @property
    def increment_exponent(self) -> float:
        """p with increments ~ r^-p over the last two box doublings."""
        if math.isinf(self.tail_ratio):
            return math.inf
        return math.log(self.tail_ratio) / math.log(4.0)

    def passes(self, min_ratio: float | None = None) -> bool:
        return self.tail_ratio >= (SUMMABLE_RATIO if min_ratio is None else min_ratio)


def _fit(x: np.ndarray, y: np.ndarray) -> tuple[float, float]:
    """Least-squares slope and R^2."""
    if len(x) < 2:
        return float("nan"), 0.0
    A = np.vstack([x, np.ones_like(x)]).T
    coef, *_ = np.linalg.lstsq(A, y, rcond=None)
    resid = float(np.sum((A @ coef - y) ** 2))
    ss = float(np.sum((y - y.mean()) ** 2))
    return float(coef[0]), (1.0 - resid / ss) if ss > 0 else 1.0


def summability_report(w: HomoclinicWindow, fit_from: int = 2) -> SummabilityReport:
    R, d = w.radius, w.dims
    if R < 4:
        raise ValueError("summability diagnostics need window radius >= 4")
    idx = w.indices()
    shell = np.abs(idx).max(axis=1)
    mag = np.abs(w.coeffs.ravel())
    per_shell = np.bincount(shell, weights=mag, minlength=R + 1)
    shell_max = np.zeros(R + 1)
    np.maximum.at(shell_max, shell, mag)
    partial = np.cumsum(per_shell)
    inc = per_shell[1:]
    r = np.arange(R + 1, dtype=float)
    diag = np.zeros(R + 1)
    for signs in itertools.product((1, -1), repeat=d):
        sel = tuple(R + np.array(signs)[j] * np.arange(R + 1) for j in range(d))
        diag = np.maximum(diag, np.abs(w.coeffs[sel]))
    tiny = 1e-12 * max(float(shell_max.max()), 1e-300)

    def loglog(v):
        ok = v[fit_from:] > tiny
        return _fit(np.log(r[fit_from:][ok]), np.log(v[fit_from:][ok]))

    d_slope, _ = loglog(diag)
    p_slope, p_r2 = loglog(shell_max)
    ok = shell_max[fit_from:] > tiny
    e_slope, e_r2 = _fit(r[fit_from:][ok], np.log(shell_max[fit_from:][ok]))
    a, b = inc[R // 4 - 1], inc[R - 1]
    # increments at round-off level count as converged
    ratio = math.inf if b <= 1e-12 * max(partial[-1], 1e-300) else float(a / b)
    return SummabilityReport(tuple(partial.tolist()), tuple(inc.tolist()), d_slope, p_slope,
                             e_slope, e_r2 > p_r2, ratio)


@dataclass(frozen=True)
class HomoclinicResidual:
    max_deviation: float        # |f* * coeffs - g^k| on the interior
    max_integer_deviation: float
    interior_size: int

    def ok(self, tol: float = 1e-6) -> bool:
        return self.max_deviation <= tol


def verify_homoclinic(w: HomoclinicWindow) -> HomoclinicResidual:
    """Check f* * coeffs = g^k on the part of the window where the convolution is complete."""
    d, R = w.dims, w.radius
    fs = w.f.adjoint()
    lo, hi = fs.support_box()
    target = w.g ** w.k
    # interior indices n with n - m inside the window for all m in supp f*
    lo_n = [-R + hi[j] for j in range(d)]
    hi_n = [R + lo[j] for j in range(d)]
    if any(a > b for a, b in zip(lo_n, hi_n)):
        raise ValueError("window too small for the support of f")
    if not target.is_zero():
        tlo, thi = target.support_box()
        if any(tlo[j] < lo_n[j] or thi[j] > hi_n[j] for j in range(d)):
            raise ValueError("window too small: g^k support leaves the interior")
    shape = tuple(b - a + 1 for a, b in zip(lo_n, hi_n))
    conv = np.zeros(shape, dtype=complex)
    for m, c in fs.terms.items():
        sl = tuple(slice(lo_n[j] - m[j] + R, hi_n[j] - m[j] + R + 1) for j in range(d))
        conv += c * w.coeffs[sl]
    expect = np.zeros(shape)
    for m, c in target.terms.items():
        expect[tuple(m[j] - lo_n[j] for j in range(d))] = c
    dev = float(np.max(np.abs(conv - expect)))
    intdev = float(np.max(np.abs(conv - np.round(conv.real))))
    return HomoclinicResidual(dev, intdev, int(np.prod(shape)))


@dataclass(frozen=True)
class MultiplierResult:
    g: LaurentPoly
    k: int
    template: str
    summability: SummabilityReport | None
    residual: HomoclinicResidual | None


def _phi_factor(order: int, j: int, d: int) -> LaurentPoly:
    from .cyclo import cyclotomic
    return LaurentPoly(d, {tuple(e if i == j else 0 for i in range(d)): c
                           for e, c in enumerate(cyclotomic(order)) if c})


def multiplier_templates(f: LaurentPoly, sample: VarietySample) -> list[tuple[str, LaurentPoly]]:
    """The finite candidate family, in search order."""
    from .variety import torsion_scan
    d = f.dims
    out: list[tuple[str, LaurentPoly]] = []
    zeros = torsion_scan(f, 12) if not sample.is_empty() else []
    orders = sorted({(j, a.denominator) for z in zeros for j, a in enumerate(z.angles)})
    singles = [(f"Phi_{N}(u{j + 1})", _phi_factor(N, j, d)) for j, N in orders]
    out.extend(singles)
    if d >= 2:
        u = [LaurentPoly.variable(j + 1, d) for j in range(d)]
        pairs = list(itertools.combinations(range(d), 2))
        prod_sum = LaurentPoly.constant(1, d)
        prod_diff = LaurentPoly.constant(1, d)
        for i, j in pairs:
            prod_sum = prod_sum * (u[i] + u[j])
            prod_diff = prod_diff * (u[i] - u[j])
        out.append(("prod(u_i + u_j)", prod_sum))
        out.append(("prod(u_i - u_j)", prod_diff))
    per_axis: dict[int, LaurentPoly] = {}
    for name, p in singles:
        j = int(name.split("(u")[1][:-1]) - 1
        per_axis[j] = per_axis.get(j, LaurentPoly.constant(1, d)) * p
    if len(per_axis) > 1:
        prod = LaurentPoly.constant(1, d)
        for j in sorted(per_axis):
            prod = prod * per_axis[j]
        out.append(("prod Phi(u_j)", prod))
    lo, hi = f.support_box()
    out.append(("u^m f*", f.adjoint().shift(tuple(a + b for a, b in zip(lo, hi)))))
    for j in range(1, d + 1):
        out.append((f"d f/d u{j}", f.partial(j)))
    return out


def _is_unit_multiple(g: LaurentPoly, f: LaurentPoly) -> bool:
    if len(g.terms) != len(f.terms) or g.is_zero():
        return False
    (e0, c0), = [next(iter(g.terms.items()))]
    (e1, c1), = [next(iter(f.terms.items()))]
    if abs(c0) != abs(c1):
        return False
    shift = tuple(a - b for a, b in zip(e0, e1))
    sign = 1 if c0 == c1 else -1
    return g == f.shift(shift) * sign


def vanishes_on(g: LaurentPoly, sample: VarietySample, rel_tol: float = 1e-6) -> bool:
    if sample.is_empty():
        return True
    if g.is_zero():
        return True
    return float(np.max(np.abs(g.evaluate(sample.points)))) <= rel_tol * (1 + g.l1_norm())


def multiplier_search(f: LaurentPoly, sample: VarietySample, max_power: int = 4,
                      R: int = 16, grid_n: int | None = None,
                      min_ratio: float = SUMMABLE_RATIO) -> MultiplierResult | None:
    """Look for (g, k) with g vanishing on U(f), g outside (f), and g^k / f* summable.

    Candidates come from :func:`multiplier_templates`; for each, the least
    k <= max_power whose window passes the tail-decay heuristic and the
    defining-identity check is returned.  None when the family is exhausted.
    """
    d = f.dims
    grid_n = grid_n or {1: 1024, 2: 512, 3: 96}.get(d, 32)
    one = LaurentPoly.constant(1, d)
    if sample.is_empty():
        w = fourier_window(f, one, 1, R, grid_n, aliasing_check=False)
        return MultiplierResult(one, 1, "1", summability_report(w), verify_homoclinic(w))
    sym = essential_symmetry(f)
    for name, g in multiplier_templates(f, sample):
        if g.is_zero() or len(g.terms) == 1:
            continue
        if _is_unit_multiple(g, f) or _is_unit_multiple(g, f.adjoint()):
            continue
        if sym.is_essentially_symmetric and name == "u^m f*":
            continue
        if not vanishes_on(g, sample):
            continue
        for k in range(1, max_power + 1):
            try:
                w = fourier_window(f, g, k, R, grid_n, aliasing_check=False)
                rep = summability_report(w)
                if rep.tail_ratio < min_ratio:
                    continue
                res = verify_homoclinic(w)
            except (GridZeroError, ValueError):
                break
            if res.ok():
                return MultiplierResult(g, k, name, rep, res)
    return None


def cover_image(w: HomoclinicWindow, v: dict | np.ndarray) -> np.ndarray:
    """xi(v)_n = sum_m v_m x_{n-m} mod 1 on the window box, x = Re(coeffs) mod 1.

    ``v`` maps integer vectors to integers (or is a window-shaped integer
    array centred like ``coeffs``).  Coordinates of x outside the window are
    treated as 0.
    """
    d, R = w.dims, w.radius
    x = np.mod(w.coeffs.real, 1.0)
    if isinstance(v, np.ndarray):
        items = [(tuple(int(a) for a in n), int(c)) for n, c in zip(w.indices(), v.ravel()) if c]
    else:
        items = [((m,) if np.isscalar(m) else tuple(m), int(c)) for m, c in v.items() if c]
    out = np.zeros_like(x)
    size = 2 * R + 1
    for m, c in items:
        src, dst = [], []
        for j in range(d):
            s = m[j]
            lo, hi = max(0, s), min(size, size + s)
            if lo >= hi:
                break
            dst.append(slice(lo, hi))
            src.append(slice(lo - s, hi - s))
        else:
            out[tuple(dst)] += c * x[tuple(src)]
    return np.mod(out, 1.0)
