"""Kernel matrices over candidate sets, their spectra, and Schur conditioning.

Two stationary correlation families are supported on [0, 1]^d:

    gaussian_iso      c(x, x') = rho ** squared_euclidean(x, x')
    exponential_l1    c(x, x') = rho ** manhattan(x, x')

with rho in (0, 1) and an optional nugget added to the diagonal.  Everything
downstream (subset probabilities, design emulation) consumes either the matrix
itself or its symmetric eigendecomposition, so both live here, together with
the Schur complement update used to condition a kernel on already selected
points.
"""

from dataclasses import dataclass

import numpy as np
from scipy.linalg import cho_factor, cho_solve, eigh
from scipy.spatial.distance import cdist

KERNEL_FAMILIES = ("gaussian_iso", "exponential_l1")

# eigenvalues in [EIG_CLAMP, 0) are treated as rounding noise and set to zero
EIG_CLAMP = -1e-8
# diagonal jitter ladder for inverting the selected-minor in condition_kernel
SCHUR_JITTERS = (0.0, 1e-12, 1e-10)


class KernelError(ValueError):
    """Domain or numerical failure in kernel construction or conditioning."""


def _duplicate_pair(pts):
    # lexicographic sort brings exact duplicates next to each other
    order = np.lexsort(pts.T)
    same = np.all(pts[order[1:]] == pts[order[:-1]], axis=1)
    hits = np.flatnonzero(same)
    if hits.size:
        i, j = int(order[hits[0]]), int(order[hits[0] + 1])
        return min(i, j), max(i, j)
    return None


@dataclass
class CandidateSet:
    """N candidate points in [0, 1]^d, stored as an (N, d) array.

    Points must be pairwise distinct; duplicates would make every kernel
    matrix built from the set singular, so they are rejected here with the
    offending index pair.
    """

    points: np.ndarray

    def __post_init__(self):
        pts = np.atleast_2d(np.asarray(self.points, dtype=float))
        if pts.ndim != 2:
            raise ValueError("points must form an (N, d) array")
        if pts.shape[0] < 1 or pts.shape[1] < 1:
            raise ValueError("candidate set needs N >= 1 points and d >= 1")
        if not np.all(np.isfinite(pts)):
            raise ValueError("candidate coordinates must be finite")
        dup = _duplicate_pair(pts)
        if dup is not None:
            raise KernelError(
                "duplicate candidate points at indices %d and %d" % dup)
        self.points = pts

    @property
    def n_points(self):
        return self.points.shape[0]

    @property
    def dim(self):
        return self.points.shape[1]


@dataclass
class KernelSpec:
    """Correlation family, its rho parameter, and an optional nugget."""

    family: str
    rho: float
    nugget: float = 0.0

    def __post_init__(self):
        if self.family not in KERNEL_FAMILIES:
            raise ValueError("unknown kernel family %r; expected one of %s"
                             % (self.family, ", ".join(KERNEL_FAMILIES)))
        if not 0.0 < self.rho < 1.0:
            raise ValueError("rho must lie strictly inside (0, 1), got %r"
                             % (self.rho,))
        if self.nugget < 0.0:
            raise ValueError("nugget must be nonnegative, got %r"
                             % (self.nugget,))


@dataclass
class KernelMatrix:
    """A symmetric kernel matrix tied to the candidate set it came from.

    candidate_ids maps matrix rows to indices of the originating CandidateSet;
    after Schur conditioning the matrix covers a subset of the candidates and
    the ids record which ones survived.  Freshly built matrices have diagonal
    1 + nugget; conditioned ones have smaller diagonals by construction.
    """

    entries: np.ndarray
    spec: KernelSpec
    candidate_ids: np.ndarray
    candidates: CandidateSet

    @property
    def size(self):
        return self.entries.shape[0]


@dataclass
class EigenSystem:
    """Descending eigenvalues with matching orthonormal eigenvector columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def build_kernel_matrix(candidates, spec):
    """Evaluate the correlation of every candidate pair.

    Returns a KernelMatrix with unit diagonal plus nugget.  The log-domain
    power avoids rho ** large_distance underflowing to subnormals one entry
    at a time.
    """
    pts = candidates.points
    if spec.family == "gaussian_iso":
        dist = cdist(pts, pts, "sqeuclidean")
    else:
        dist = cdist(pts, pts, "cityblock")
    K = np.exp(np.log(spec.rho) * dist)
    K = 0.5 * (K + K.T)
    np.fill_diagonal(K, 1.0 + spec.nugget)
    ids = np.arange(candidates.n_points)
    return KernelMatrix(K, spec, ids, candidates)


def eigendecompose(K):
    """Symmetric eigendecomposition, eigenvalues sorted descending.

    Negative eigenvalues above EIG_CLAMP are clamped to zero; anything more
    negative means the matrix is genuinely not PSD and raises.
    """
    A = K.entries
    if np.max(np.abs(A - A.T)) > 1e-12:
        raise KernelError("kernel matrix is not symmetric")
    lam, vec = eigh(A)
    lam = lam[::-1].copy()
    vec = vec[:, ::-1].copy()
    if lam[-1] < EIG_CLAMP:
        raise KernelError("kernel not PSD: eigenvalue %.6g below tolerance %g"
                          % (lam[-1], EIG_CLAMP))
    lam[lam < 0.0] = 0.0
    return EigenSystem(lam, vec)


def _positions(candidate_ids, wanted):
    lookup = {int(g): i for i, g in enumerate(candidate_ids)}
    pos = np.empty(len(wanted), dtype=int)
    for k, g in enumerate(wanted):
        try:
            pos[k] = lookup[int(g)]
        except KeyError:
            raise KernelError("candidate id %d not present in this kernel"
                              % int(g)) from None
    return pos


def condition_kernel(K, selected):
    """Schur complement of K with respect to the selected candidates.

    selected is a list of candidate ids (indices into the originating
    CandidateSet).  The result covers the remaining candidates in their
    original order and assigns the selected ones zero mass downstream, since
    their rows are gone.  The selected minor is inverted through a Cholesky
    factorization with an escalating jitter ladder; if the ladder runs out the
    minor is reported as numerically singular.
    """
    sel = np.asarray(selected, dtype=int)
    if sel.size == 0:
        return KernelMatrix(K.entries.copy(), K.spec,
                            K.candidate_ids.copy(), K.candidates)
    if np.unique(sel).size != sel.size:
        raise ValueError("selected ids must be distinct")
    pos = _positions(K.candidate_ids, sel)
    keep = np.setdiff1d(np.arange(K.size), pos)
    if keep.size == 0:
        raise KernelError("conditioning on every candidate leaves an empty kernel")
    A = K.entries
    Kss = A[np.ix_(pos, pos)]
    Ksr = A[np.ix_(pos, keep)]
    Krr = A[np.ix_(keep, keep)]
    factor = None
    for jit in SCHUR_JITTERS:
        try:
            factor = cho_factor(Kss + jit * np.eye(pos.size), lower=True)
            break
        except np.linalg.LinAlgError:
            factor = None
    if factor is None:
        raise KernelError("conditioning failure: selected minor stayed "
                          "singular after jitter %g" % SCHUR_JITTERS[-1])
    S = Krr - Ksr.T @ cho_solve(factor, Ksr)
    S = 0.5 * (S + S.T)
    return KernelMatrix(S, K.spec, K.candidate_ids[keep], K.candidates)
