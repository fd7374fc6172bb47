"""Classical comparators: Latin hypercube, exchange optimization, random,
and clustered point generators.

These produce the reference point patterns the determinantal designs are
measured against: LHS for marginal stratification, the exchange algorithm for
direct determinant maximization, uniform subsets for complete spatial
randomness, and truncated-normal clouds for clustering.
"""

from dataclasses import dataclass

import numpy as np

from .dpp_sampler import Design, dpp_log_pmf


@dataclass
class LhsDesign:
    """Latin hypercube: every column of bins is a permutation of 1..n."""

    bins: np.ndarray
    points: np.ndarray


def lhs_design(n, d, placement="centroid", rng=None):
    """Latin hypercube sample of n points in [0, 1]^d.

    Each margin is split into n equal bins and each column of bin indices is
    an independent random permutation, so every one-dimensional projection
    hits every bin exactly once.  centroid placement puts points at bin
    centers (bin - 0.5) / n; uniform placement draws within the bin.
    """
    if placement not in ("centroid", "uniform"):
        raise ValueError("placement must be 'centroid' or 'uniform'")
    if n < 1 or d < 1:
        raise ValueError("need n >= 1 and d >= 1")
    if rng is None:
        raise ValueError("an explicit rng is required")
    bins = np.stack([rng.permutation(n) + 1 for _ in range(d)], axis=1)
    if placement == "centroid":
        pts = (bins - 0.5) / n
    else:
        pts = (bins - rng.random((n, d))) / n
    return LhsDesign(bins, pts)


def fedorov_exchange(K, n, iters, rng):
    """One-at-a-time exchange maximization of det K[design, design].

    Starts from a uniform random n-subset; every iteration proposes swapping
    one random design slot against one random outside candidate and accepts
    only on strict determinant increase, so the log-det trace (stored in the
    design metadata) is nondecreasing.  Determinants are recomputed from
    scratch per proposal, which is fine at the n <= 64 scale this is used at.
    """
    N = K.size
    n = int(n)
    if not 1 <= n <= N:
        raise ValueError("design size n=%d outside 1..%d" % (n, N))
    if iters < 0:
        raise ValueError("iters must be nonnegative")
    idx = rng.choice(N, size=n, replace=False)
    in_design = np.zeros(N, dtype=bool)
    in_design[idx] = True
    cur = dpp_log_pmf(K, idx)
    trace = np.empty(iters + 1)
    trace[0] = cur
    for t in range(1, iters + 1):
        slot = int(rng.integers(n))
        cand = int(rng.integers(N))
        while in_design[cand]:
            cand = int(rng.integers(N))
        prop = idx.copy()
        prop[slot] = cand
        ld = dpp_log_pmf(K, prop)
        if ld > cur:
            in_design[idx[slot]] = False
            in_design[cand] = True
            idx = prop
            cur = ld
        trace[t] = cur
    order = np.sort(idx)
    ids = K.candidate_ids[order]
    return Design(ids, K.candidates.points[ids], n, "exchange",
                  meta={"log_det": cur, "trace": trace})


def random_design(candidates, n, rng):
    """Uniform random n-subset of the candidates."""
    N = candidates.n_points
    if not 1 <= n <= N:
        raise ValueError("design size n=%d outside 1..%d" % (n, N))
    idx = np.sort(rng.choice(N, size=n, replace=False))
    return Design(idx, candidates.points[idx], int(n), "random")


def clustered_design(n, d, mean=0.5, sd=0.125, rng=None):
    """n i.i.d. normal points rejected into [0, 1]^d, returned as an array."""
    if n < 1 or d < 1:
        raise ValueError("need n >= 1 and d >= 1")
    if rng is None:
        raise ValueError("an explicit rng is required")
    out = np.empty((n, d))
    filled = 0
    while filled < n:
        draw = rng.normal(mean, sd, size=(n, d))
        ok = draw[((draw >= 0.0) & (draw <= 1.0)).all(axis=1)]
        take = min(ok.shape[0], n - filled)
        out[filled:filled + take] = ok[:take]
        filled += take
    return out
