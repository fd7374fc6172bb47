"""Point-pattern statistics and design-criterion evaluation.

F (empty space), G (nearest neighbour), and Ripley's K classify a pattern on
the unit hypercube as regular, completely random, or clustered: regular
patterns push F above G and K below the Poisson reference, clustered ones do
the opposite.  Distances here are always Euclidean, whatever kernel produced
the design.  The module also carries the closed-form occupancy moments of
Latin hypercube sampling, whose negative cell covariance is what places LHS
among the regular patterns.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy.spatial.distance import cdist

from .dpp_sampler import dpp_log_pmf


@dataclass
class PointPatternSummary:
    """F/G/K curves of one pattern plus the grids they were evaluated on."""

    h_grid: np.ndarray
    f_hat: np.ndarray
    g_hat: np.ndarray
    r_grid: np.ndarray
    k_hat: np.ndarray
    n: int
    d: int
    region: str = "unit cube"


def default_reference_grid(n, d):
    """Regular grid of ceil(sqrt(n)) cell centers per dimension."""
    q = math.ceil(math.sqrt(n))
    axis = (np.arange(q) + 0.5) / q
    mesh = np.meshgrid(*([axis] * d), indexing="ij")
    return np.stack([m.ravel() for m in mesh], axis=1)


def f_function(points, reference, h_grid):
    """Empty-space function: fraction of reference locations with a design
    point within distance h."""
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    ref = np.atleast_2d(np.asarray(reference, dtype=float))
    if pts.shape[0] < 1:
        raise ValueError("design must be nonempty")
    if ref.shape[0] < 1:
        raise ValueError("reference grid must be nonempty")
    dmin = cdist(ref, pts).min(axis=1)
    h = np.asarray(h_grid, dtype=float)
    return (dmin[None, :] <= h[:, None]).mean(axis=1)


def g_function(points, h_grid):
    """Nearest-neighbour function: fraction of design points with another
    design point within distance h."""
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    if pts.shape[0] < 2:
        raise ValueError("nearest-neighbour statistic needs n >= 2 points")
    D = cdist(pts, pts)
    np.fill_diagonal(D, np.inf)
    dnn = D.min(axis=1)
    h = np.asarray(h_grid, dtype=float)
    return (dnn[None, :] <= h[:, None]).mean(axis=1)


def ripley_k(points, area, r_grid, translation_correction=False):
    """Ripley's K estimate on a rectangular window of the given area.

    Uncorrected form: K(r) = area / (n (n-1)) * #{ordered pairs within r}.
    With translation_correction each pair is upweighted by the reciprocal
    overlap volume prod_k (1 - |h_k|) of the unit window with its shifted
    copy, the standard correction for pairs near the boundary.
    """
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    n = pts.shape[0]
    if n < 2:
        raise ValueError("Ripley's K needs n >= 2 points")
    D = cdist(pts, pts)
    iu = np.triu_indices(n, k=1)
    dists = D[iu]
    if translation_correction:
        overlap = np.ones_like(dists)
        for k in range(pts.shape[1]):
            h = np.abs(pts[:, k][:, None] - pts[:, k][None, :])[iu]
            overlap *= np.maximum(1.0 - h, 1e-12)
        weights = 1.0 / overlap
    else:
        weights = np.ones_like(dists)
    r = np.asarray(r_grid, dtype=float)
    counts = ((dists[None, :] <= r[:, None]) * weights[None, :]).sum(axis=1)
    return 2.0 * counts * area / (n * (n - 1))


def csr_k(r_grid, d=2):
    """Poisson reference curve: volume of the d-ball of radius r."""
    r = np.asarray(r_grid, dtype=float)
    unit_ball = math.pi ** (d / 2.0) / math.gamma(d / 2.0 + 1.0)
    return unit_ball * r ** d


def entropy_criterion(K, design):
    """Log determinant of the selected principal minor; the design criterion.

    Accepts a Design or a plain index array; indices are row positions of K,
    exactly as in dpp_log_pmf.  Singular minors report -inf.
    """
    indices = getattr(design, "indices", design)
    return dpp_log_pmf(K, indices)


def lhs_intensity_check(n, d):
    """Closed-form occupancy moments of an LHS over its n^d cell lattice.

    A hypercube sample with n points occupies n of the n^d cells; every cell
    is occupied with probability ez = n / n^d, and a uniformly chosen ordered
    pair of distinct cells is jointly occupied with probability
    ezz = n (n-1) / (n^d (n^d - 1)) (pairs sharing a one-dimensional
    projection contribute zero, which this all-pairs average absorbs).  The
    resulting cell covariance ezz - ez^2 is strictly negative, the defining
    repulsion signature.
    """
    if n < 2:
        raise ValueError("need n >= 2")
    if d < 2:
        raise ValueError("d must be at least 2; with d = 1 every cell is "
                         "occupied and the moments degenerate")
    cells = n ** d
    ez = n / cells
    ezz = (n * (n - 1)) / (cells * (cells - 1))
    cov = ezz - ez * ez
    return {"ez": ez, "ezz": ezz, "cov": cov, "cov_sign": int(np.sign(cov))}


def summarize_pattern(points, h_grid=None, r_grid=None, reference=None):
    """Bundle F, G, and K of one pattern into a PointPatternSummary."""
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    n, d = pts.shape
    if h_grid is None:
        h_grid = np.linspace(0.0, 0.5, 51)
    if r_grid is None:
        r_grid = np.linspace(0.0, 0.3, 31)
    if reference is None:
        reference = default_reference_grid(n, d)
    return PointPatternSummary(
        h_grid=np.asarray(h_grid, dtype=float),
        f_hat=f_function(pts, reference, h_grid),
        g_hat=g_function(pts, h_grid),
        r_grid=np.asarray(r_grid, dtype=float),
        k_hat=ripley_k(pts, 1.0, r_grid),
        n=n, d=d)
