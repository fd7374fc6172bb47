"""Fixed-rank determinantal sampling over a discrete candidate set.

The size-n law P(design) proportional to det K[design, design] factors through
the spectrum of K: first draw an eigenvalue subset S with |S| = n and
probability proportional to prod(lambda_k, k in S), which is a conditional
Bernoulli distribution, then run the projection-kernel sampler on the
eigenvector columns indexed by S.

The conditional Bernoulli stage needs ratios of elementary symmetric
polynomials e_k over suffix sets of the eigenvalue list.  Those are tabulated
once per (lambda, n) in the log domain with the subtraction-free recurrence

    e_k(j..) = e_k(j+1..) + lambda_j * e_{k-1}(j+1..)

which stays stable at any N, unlike the alternating Newton-identity form that
cancels catastrophically once N grows past a few dozen.
"""

from dataclasses import dataclass, field

import numpy as np

from .kernel_spectral import eigendecompose


class SamplerError(RuntimeError):
    """Numerical degeneracy inside the projection sampler."""


@dataclass
class CBTables:
    """Log-domain suffix tables for the conditional Bernoulli walk.

    log_esp[k, j] = log e_k(lambdas[j:]), shape (n + 1, N + 1), with
    log e_0 = 0 everywhere and log e_k(empty) = -inf for k >= 1.
    """

    lambdas: np.ndarray
    n: int
    log_esp: np.ndarray
    log_lambdas: np.ndarray


@dataclass
class Design:
    """An ordered set of n distinct candidate indices with their coordinates."""

    indices: np.ndarray
    coords: np.ndarray
    n: int
    provenance: str
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.indices = np.asarray(self.indices, dtype=int)
        self.coords = np.asarray(self.coords, dtype=float)
        if self.indices.size != self.n or self.coords.shape[0] != self.n:
            raise ValueError("design cardinality is inconsistent")
        if np.unique(self.indices).size != self.indices.size:
            raise ValueError("design indices must be distinct")


def build_cb_tables(lambdas, n):
    """Tabulate log e_k over all suffixes of the eigenvalue list."""
    lam = np.asarray(lambdas, dtype=float)
    N = lam.size
    if np.any(lam < 0.0):
        raise ValueError("eigenvalue weights must be nonnegative")
    n = int(n)
    if not 0 <= n <= N:
        raise ValueError("target cardinality n=%d outside 0..%d" % (n, N))
    with np.errstate(divide="ignore"):
        log_lam = np.log(lam)
    E = np.full((n + 1, N + 1), -np.inf)
    E[0, :] = 0.0
    for j in range(N - 1, -1, -1):
        kmax = min(n, N - j)
        if kmax >= 1:
            E[1:kmax + 1, j] = np.logaddexp(
                E[1:kmax + 1, j + 1], log_lam[j] + E[0:kmax, j + 1])
    if n >= 1 and np.isneginf(E[n, 0]):
        raise ValueError("fewer than n=%d strictly positive eigenvalues" % n)
    return CBTables(lam, n, E, log_lam)


def sample_conditional_bernoulli(tables, rng):
    """Draw an index set S with |S| = n and P(S) proportional to prod lambda_S.

    Walks the items once; at item j with r already picked, the inclusion
    probability is lambda_j * e_{n-r-1}(suffix after j) / e_{n-r}(suffix from
    j), evaluated in the log domain.  Forced steps (remaining items equal
    remaining slots) come out exactly 1 because log e_{n-r} of the short
    suffix is -inf and logaddexp collapses.
    """
    E = tables.log_esp
    n = tables.n
    N = tables.lambdas.size
    picked = []
    r = 0
    for j in range(N):
        if r == n:
            break
        need = n - r
        if N - j == need:
            p = 1.0
        else:
            log_p = tables.log_lambdas[j] + E[need - 1, j + 1] - E[need, j]
            p = float(np.exp(min(log_p, 0.0)))
        if rng.random() < p:
            picked.append(j)
            r += 1
    if r != n:
        raise SamplerError("conditional Bernoulli walk ended %d short of n=%d"
                           % (n - r, n))
    return np.array(picked, dtype=int)


def _mgs(W):
    """Modified Gram-Schmidt orthonormalization of the columns of W, in place."""
    for k in range(W.shape[1]):
        v = W[:, k]
        for l in range(k):
            v -= (W[:, l] @ v) * W[:, l]
        nrm = np.linalg.norm(v)
        if nrm < 1e-12:
            raise SamplerError("projection basis degenerated during elimination")
        W[:, k] = v / nrm
    return W


def _eliminate(V, i):
    """Remove the coordinate direction of row i from the span of V.

    Pivots on the largest entry of row i, subtracts the pivot column scaled to
    zero out the row, drops that column, and reorthonormalizes the survivors.
    """
    c = int(np.argmax(np.abs(V[i])))
    W = V - np.outer(V[:, c], V[i] / V[i, c])
    W = np.delete(W, c, axis=1)
    return _mgs(W)


def _projection_loop(V, pick, forbid=None):
    """Select one point per column of the orthonormal basis V.

    pick(w) maps the normalized weight vector to a row index.  forbid(i),
    when given, returns a boolean mask of rows to exclude from later steps on
    top of the automatic exclusion of chosen rows.  Returns the chosen row
    indices in selection order and the pre-normalization weight totals (which
    equal 1 up to rounding whenever nothing is masked).
    """
    V = np.array(V, dtype=float)
    m = V.shape[0]
    banned = np.zeros(m, dtype=bool)
    chosen = []
    totals = []
    for step in range(V.shape[1], 0, -1):
        w = np.einsum("ij,ij->i", V, V) / step
        w[banned] = 0.0
        np.maximum(w, 0.0, out=w)
        tot = float(w.sum())
        totals.append(tot)
        if not np.isfinite(tot) or tot < 1e-12:
            raise SamplerError("projection sampler: no candidate carries weight")
        w /= tot
        i = int(pick(w))
        chosen.append(i)
        if forbid is not None:
            banned |= forbid(i)
        banned[i] = True
        if step > 1:
            V = _eliminate(V, i)
    return np.array(chosen, dtype=int), np.array(totals)


def sample_projection_dpp(eig, S, candidates, rng, candidate_ids=None):
    """Draw a point pattern from the projection kernel sum of phi_k phi_k^T.

    S indexes eigenvector columns of eig; the columns must be orthonormal.
    candidate_ids maps basis rows to indices of the candidate set (identity
    when omitted), so the sampler also works on Schur-conditioned kernels
    whose rows cover a candidate subset.
    """
    S = np.asarray(S, dtype=int)
    if S.size < 1:
        raise ValueError("projection sampling needs at least one eigenvector")
    V = eig.eigenvectors[:, S]
    gram = V.T @ V
    if np.max(np.abs(gram - np.eye(S.size))) > 1e-8:
        raise ValueError("eigenvectors indexed by S are not orthonormal")
    chosen, _ = _projection_loop(V, lambda w: rng.choice(w.size, p=w))
    if candidate_ids is None:
        ids = chosen
    else:
        ids = np.asarray(candidate_ids, dtype=int)[chosen]
    return Design(ids, candidates.points[ids], int(S.size), "sampled")


def sample_fixed_rank_dpp(K, n, rng):
    """Draw an exactly-n-point design with P proportional to det K[., .].

    Composition: eigendecompose, conditional Bernoulli over eigenvalues,
    projection sampling on the chosen eigenvectors.  Deterministic given
    (K, n, rng state).
    """
    eig = eigendecompose(K)
    tables = build_cb_tables(eig.eigenvalues, n)
    S = sample_conditional_bernoulli(tables, rng)
    return sample_projection_dpp(eig, S, K.candidates, rng,
                                 candidate_ids=K.candidate_ids)


def dpp_log_pmf(K, indices):
    """Log determinant of the principal minor K[indices, indices].

    indices are row positions of this kernel matrix.  Returns -inf when the
    minor is numerically singular or has nonpositive determinant, which flags
    a zero-probability (degenerate) subset.
    """
    idx = np.asarray(indices, dtype=int)
    if idx.size and (idx.min() < 0 or idx.max() >= K.entries.shape[0]):
        raise IndexError("design index outside the kernel matrix")
    if np.unique(idx).size != idx.size:
        raise ValueError("design indices must be distinct")
    minor = K.entries[np.ix_(idx, idx)]
    sign, logdet = np.linalg.slogdet(minor)
    if sign <= 0:
        return -np.inf
    return float(logdet)
