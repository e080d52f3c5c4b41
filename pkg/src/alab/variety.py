"""The unitary variety U(f) = V(f) intersected with the torus.

U(f) is sampled numerically on the angle torus [0,1)^d: a coarse grid scan
picks nodes where |f| is small enough that a zero may be nearby, and a
damped Gauss-Newton iteration on (Re f, Im f) projects them onto U(f).
Dimension is then read off locally by principal components.  Torsion points
on U(f) are found exactly (via :mod:`alab.cyclo`).
"""
from __future__ import annotations

import csv
import io
import math
from collections import Counter
from dataclasses import dataclass, field

import numpy as np
from scipy.spatial import cKDTree
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from . import cyclo
from .laurent import LaurentPoly, essential_symmetry
from .lattice import SubgroupLattice, TorsionPoint
from .mahler import grid_slabs

DEFAULT_SCAN = {1: 256, 2: 64, 3: 32}
PCA_REL = 0.15          # spread threshold, as a fraction of the PCA radius
VOTE_CONFIDENCE = 0.6   # minimum share of the majority local dimension
RANK_REL = 1e-6         # Jacobian singular values below RANK_REL * K count as zero


class EmptySampleError(ValueError):
    pass


@dataclass(frozen=True)
class VarietySample:
    """Refined points of U(f) with their residuals |f(e^{2 pi i t})|."""

    points: np.ndarray = field(repr=False)
    residuals: np.ndarray = field(repr=False)
    grid_n: int
    tol: float
    refined: bool = True

    def __len__(self):
        return len(self.points)

    @property
    def dims(self) -> int:
        return self.points.shape[1]

    def is_empty(self) -> bool:
        return len(self.points) == 0

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow([f"t{j + 1}" for j in range(self.dims)] + ["residual"])
        for p, r in zip(self.points, self.residuals):
            w.writerow([f"{x:.15g}" for x in p] + [f"{r:.15g}"])
        return buf.getvalue()


def _wrap(delta: np.ndarray) -> np.ndarray:
    """Representative of an angle difference in [-1/2, 1/2)."""
    return delta - np.floor(delta + 0.5)


def _gauss_newton(f: LaurentPoly, pts: np.ndarray, steps: int) -> tuple[np.ndarray, np.ndarray]:
    t = pts.copy()
    val, _ = f.evaluate_with_gradient(t)
    res = np.abs(val)
    for _ in range(steps):
        val, grad = f.evaluate_with_gradient(t)
        F = np.stack([val.real, val.imag], axis=-1)[..., None]           # (P, 2, 1)
        J = np.stack([grad.real, grad.imag], axis=1)                      # (P, 2, d)
        step = -(np.linalg.pinv(J, rcond=1e-10) @ F)[..., 0]             # min-norm step
        step = np.clip(step, -0.05, 0.05)
        res = np.abs(val)
        lam = np.ones(len(t))
        new = t + step
        new_res = np.abs(f.evaluate(new))
        for _ in range(6):
            worse = new_res > res
            if not worse.any():
                break
            lam[worse] *= 0.5
            new[worse] = t[worse] + lam[worse, None] * step[worse]
            new_res[worse] = np.abs(f.evaluate(new[worse]))
        keep = new_res <= res
        t[keep] = new[keep]
        res = np.where(keep, new_res, res)
    t = np.mod(t, 1.0)
    t[t >= 1.0] = 0.0
    return t, res


def sample_variety(f: LaurentPoly, grid_n: int | None = None, refine_steps: int = 60,
                   tol: float | None = None) -> VarietySample:
    """Sample U(f) by a coarse scan at resolution grid_n plus Gauss-Newton refinement.

    A node is a seed when |f| <= K / (2 grid_n), K the sup-norm Lipschitz
    constant, so every point of U(f) has a seed within half a grid step.
    """
    if f.is_zero():
        raise ValueError("U(0) is the whole torus")
    d = f.dims
    grid_n = grid_n or DEFAULT_SCAN.get(d, 16)
    tol = 1e-9 * (1.0 + f.l1_norm()) if tol is None else tol
    K = f.lipschitz_constant()
    if K == 0:   # constant polynomial
        return VarietySample(np.zeros((0, d)), np.zeros(0), grid_n, tol)
    seed_level = K / (2 * grid_n)
    seeds = []
    row = 0
    for vals in grid_slabs(f, grid_n, offset=0.0):
        idx = np.argwhere(np.abs(vals) <= seed_level)
        if idx.size:
            idx[:, 0] += row
            seeds.append(idx)
        row += vals.shape[0]
    if not seeds:
        return VarietySample(np.zeros((0, d)), np.zeros(0), grid_n, tol)
    start = np.concatenate(seeds).astype(float) / grid_n
    pts, res = _gauss_newton(f, start, refine_steps)
    ok = res <= tol
    pts, res = pts[ok], res[ok]
    if len(pts):
        q = 4 * grid_n
        keys = np.mod(np.round(pts * q).astype(np.int64), q)
        _, first = np.unique(keys, axis=0, return_index=True)
        first.sort()
        pts, res = pts[first], res[first]
    return VarietySample(pts, res, grid_n, tol)


@dataclass(frozen=True)
class ClusterDim:
    size: int
    dim: int
    confidence: float


@dataclass(frozen=True)
class DimensionReport:
    """Heuristic dimension of a sampled variety (-1 encodes the empty set)."""

    dim: int
    clusters: tuple[ClusterDim, ...]
    heuristic: bool = True

    @property
    def confident(self) -> bool:
        top = [c for c in self.clusters if c.dim == self.dim]
        return all(c.confidence >= VOTE_CONFIDENCE for c in top)


def dimension_report(sample: VarietySample, f: LaurentPoly | None = None) -> DimensionReport:
    """Local dimension votes per point, majority per cluster, max over clusters.

    With ``f`` given, the implicit function theorem settles smooth points:
    Jacobian rank 2 of (Re f, Im f) gives local dimension d - 2, and rank 1
    gives d - 1 when f is essentially symmetric (then f is real up to a unit
    phase, so one equation is redundant).  The PCA spread of neighbours
    within 4/grid_n decides everywhere else.
    """
    if sample.is_empty():
        return DimensionReport(-1, ())
    pts = sample.points
    d = pts.shape[1]
    h = 1.0 / sample.grid_n
    tree = cKDTree(pts, boxsize=1.0)
    pairs = tree.query_pairs(2 * h, output_type="ndarray")
    n = len(pts)
    adj = coo_matrix((np.ones(len(pairs)), (pairs[:, 0], pairs[:, 1])), shape=(n, n)) \
        if len(pairs) else coo_matrix((n, n))
    ncomp, labels = connected_components(adj, directed=False)
    rank = np.zeros(n, dtype=int)
    if f is not None and f.lipschitz_constant() > 0:
        _, grad = f.evaluate_with_gradient(pts)
        J = np.stack([grad.real, grad.imag], axis=1)
        sv = np.linalg.svd(J, compute_uv=False)
        rank = np.sum(sv > RANK_REL * f.lipschitz_constant(), axis=1)
        if not essential_symmetry(f).is_essentially_symmetric:
            rank[rank == 1] = 0
    radius = 4 * h
    neigh = tree.query_ball_point(pts, radius)
    local = np.zeros(n, dtype=int)
    for i, nb in enumerate(neigh):
        if rank[i]:
            local[i] = d - rank[i]
            continue
        if len(nb) < 2:
            continue
        diff = _wrap(pts[nb] - pts[i])
        diff -= diff.mean(axis=0)
        sv = np.linalg.svd(diff, compute_uv=False) / math.sqrt(len(nb))
        local[i] = int(np.sum(sv > PCA_REL * radius))
    clusters = []
    for c in range(ncomp):
        votes = Counter(local[labels == c].tolist())
        size = int((labels == c).sum())
        dim, count = max(votes.items(), key=lambda kv: (kv[1], kv[0]))
        clusters.append(ClusterDim(size, dim, count / size))
    clusters.sort(key=lambda c: (-c.dim, -c.size))
    return DimensionReport(max(c.dim for c in clusters), tuple(clusters))


def dimension_estimate(sample: VarietySample, f: LaurentPoly | None = None) -> int:
    return dimension_report(sample, f).dim


@dataclass(frozen=True)
class AtoralVerdict:
    verdict: str            # atoral | toral | unknown
    reason: str             # empty_variety | asymmetric | dimension_le_d_minus_2 | dimension_d_minus_1 | inconclusive
    dim_estimate: int | None

    def __post_init__(self):
        if self.verdict == "atoral" and self.reason not in (
                "empty_variety", "asymmetric", "dimension_le_d_minus_2"):
            raise ValueError(f"atoral verdict cannot rest on {self.reason}")


def classify_atoral(f: LaurentPoly, grid_n: int | None = None,
                    sample: VarietySample | None = None) -> AtoralVerdict:
    """Atoral/toral decision for an (assumed irreducible) f.

    Order of tests: empty sampled variety, then absence of essential
    symmetry (f* then vanishes on U(f) without lying in (f)), then the
    estimated dimension against d - 2.
    """
    if f.is_zero():
        raise ValueError("classification is undefined for f = 0")
    d = f.dims
    sample = sample if sample is not None else sample_variety(f, grid_n)
    if sample.is_empty():
        return AtoralVerdict("atoral", "empty_variety", -1)
    rep = dimension_report(sample, f)
    if not essential_symmetry(f).is_essentially_symmetric:
        return AtoralVerdict("atoral", "asymmetric", rep.dim)
    if rep.confident and rep.dim <= d - 2:
        return AtoralVerdict("atoral", "dimension_le_d_minus_2", rep.dim)
    if rep.confident and rep.dim == d - 1:
        return AtoralVerdict("toral", "dimension_d_minus_1", rep.dim)
    return AtoralVerdict("unknown", "inconclusive", rep.dim)


def _points_of_exact_order(N: int, d: int) -> np.ndarray:
    grid = np.indices((N,) * d).reshape(d, -1).T.astype(np.int64)
    g = np.gcd.reduce(np.concatenate([grid, np.full((len(grid), 1), N)], axis=1), axis=1)
    return grid[g == 1]


def torsion_scan(f: LaurentPoly, max_order: int) -> list[TorsionPoint]:
    """All torsion points of order <= max_order on U(f), confirmed exactly."""
    if f.is_zero():
        raise ValueError("every torsion point is a zero of f = 0")
    if max_order > cyclo.MAX_ORDER:
        raise ValueError("max_order exceeds the cyclotomic cap")
    hits = []
    for N in range(1, max_order + 1):
        A = _points_of_exact_order(N, f.dims)
        if not len(A):
            continue
        for lo in range(0, len(A), 1 << 16):
            block = A[lo:lo + (1 << 16)]
            mask = cyclo.exact_zero_mask(f, block, N)
            hits.extend(TorsionPoint.from_numerators(r, N) for r in block[mask])
    return hits


def _embed(angles: np.ndarray) -> np.ndarray:
    """Torus points in R^{2d}; Euclidean distance there is the chordal distance."""
    ang = 2 * np.pi * angles
    return np.concatenate([np.cos(ang), np.sin(ang)], axis=-1)


def chordal_distance(s: np.ndarray, t: np.ndarray) -> np.ndarray:
    return np.sqrt(np.sum((2 * np.sin(np.pi * _wrap(np.asarray(s) - np.asarray(t)))) ** 2, axis=-1))


@dataclass(frozen=True)
class ProximityCounts:
    M: int
    N: int
    r: float
    lipschitz: float


def _nonzero_dual(f: LaurentPoly, gamma: SubgroupLattice):
    A, e = gamma.dual_numerators()
    vals = f.evaluate(A / e)
    zero = cyclo.exact_zero_mask(f, A, e, vals)
    return A[~zero] / e, vals[~zero]


def count_small_values(f: LaurentPoly, gamma: SubgroupLattice, r: float) -> int:
    """N_f(Omega_Gamma, r): points with 0 < |f(omega)| < r."""
    _, vals = _nonzero_dual(f, gamma)
    return int(np.sum(np.abs(vals) < r))


def distance_to_variety(f: LaurentPoly, pts: np.ndarray, sample: VarietySample,
                        within: float = math.inf) -> np.ndarray:
    """Chordal distance from each point to U(f), as sampled.

    The distance to the nearest sample point overestimates the true distance
    by up to the sample spacing, so points within ``within`` plus that
    spacing are also projected onto U(f) by min-norm Gauss-Newton; the
    smaller of the two (both upper bounds) is returned.
    """
    if sample.is_empty():
        return np.full(len(pts), math.inf)
    dist, _ = cKDTree(_embed(sample.points)).query(_embed(pts))
    slack = 2 * np.pi * math.sqrt(f.dims) / sample.grid_n
    cand = np.flatnonzero(dist < within + slack)
    if len(cand):
        proj, res = _gauss_newton(f, pts[cand], 40)
        ok = res <= sample.tol
        dp = chordal_distance(proj, pts[cand])
        dist[cand[ok]] = np.minimum(dist[cand[ok]], dp[ok])
    return dist


def proximity_counts(f: LaurentPoly, gamma: SubgroupLattice, r: float,
                     sample: VarietySample) -> ProximityCounts:
    """M_f and N_f at radius r, with U(f) represented by ``sample``."""
    if r <= 0:
        raise ValueError("radius must be positive")
    pts, vals = _nonzero_dual(f, gamma)
    N = int(np.sum(np.abs(vals) < r))
    if sample.is_empty() or not len(pts):
        M = 0
    else:
        dist = distance_to_variety(f, pts, sample, r)
        M = int(np.sum((dist > 0) & (dist < r)))
    return ProximityCounts(M, N, r, f.lipschitz_constant())


@dataclass(frozen=True)
class DistanceReport:
    distance: float
    bound: float
    eps: float
    omega_count: int

    @property
    def exceeds_bound(self) -> bool:
        return self.distance > self.bound


def min_distance_to_variety(gamma: SubgroupLattice, f: LaurentPoly, sample: VarietySample,
                            eps: float = 0.5) -> DistanceReport:
    """min over omega in Omega_Gamma off U(f) of the chordal distance to the sample.

    Reported next to exp(-eps |Omega_Gamma|).
    """
    if sample.is_empty():
        raise EmptySampleError("variety sample is empty")
    pts, _ = _nonzero_dual(f, gamma)
    if not len(pts):
        raise EmptySampleError("every point of Omega_Gamma lies on U(f)")
    dist = distance_to_variety(f, pts, sample, 0.0)
    return DistanceReport(float(dist.min()), math.exp(-eps * gamma.index), eps, gamma.index)
