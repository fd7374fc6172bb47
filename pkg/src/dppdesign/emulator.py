"""Greedy mode extraction for the fixed-rank law, and batch-sequential designs.

The fixed-rank law of dpp_sampler has a convenient mode structure: the
eigenvalue-subset stage is maximized by the top-n eigenvalues (the subset law
is proportional to the product of chosen eigenvalues, and the spectrum is
sorted), and replacing the random point-location stage with an argmax walk
yields a deterministic design whose determinant sits far above typical random
draws.  That argmax walk is the design emulator.

Sequential extension: batches are added one at a time against a kernel that
is Schur-conditioned on everything already excluded, with the correlation
parameter rho free to change between batches (small rho early for coarse
space-filling, larger rho later for local refinement).  An optional
non-collapsing rule additionally excludes every candidate that shares a
coordinate value with a selected point in any single dimension, so the final
design has distinct one-dimensional projections.
"""

from dataclasses import dataclass, field

import numpy as np

from .kernel_spectral import KernelSpec, build_kernel_matrix, condition_kernel, \
    eigendecompose
from .dpp_sampler import Design, _projection_loop, dpp_log_pmf

# coordinates closer than this are treated as one shared projection value
COORD_TOL = 1e-9


def select_mode_subset(eig, n):
    """Indices of the n largest eigenvalues under the stable descending order."""
    n = int(n)
    N = eig.eigenvalues.size
    if not 0 <= n <= N:
        raise ValueError("subset size n=%d outside 0..%d" % (n, N))
    return np.arange(n)


def _greedy_pick(tie_rng=None, tol=1e-12):
    """argmax over weights; ties within tol go to the lowest index, or to
    tie_rng when one is supplied."""
    def pick(w):
        ties = np.flatnonzero(w >= w.max() - tol)
        if tie_rng is None or ties.size == 1:
            return int(ties[0])
        return int(tie_rng.choice(ties))
    return pick


def _greedy_positions(K, n, tie_rng=None, collapse_guard_points=None):
    """Greedy projection walk on the top-n eigenvectors of K, returning row
    positions.  collapse_guard_points, when given, holds the coordinates of
    K's rows; after each pick all rows sharing a coordinate with the picked
    point are masked out of later steps."""
    eig = eigendecompose(K)
    S = select_mode_subset(eig, n)
    V = eig.eigenvectors[:, S]
    forbid = None
    if collapse_guard_points is not None:
        pts = collapse_guard_points

        def forbid(i):
            return (np.abs(pts - pts[i]) <= COORD_TOL).any(axis=1)

    chosen, _ = _projection_loop(V, _greedy_pick(tie_rng), forbid)
    return chosen


def emulate_design(K, n, tie_rng=None):
    """Deterministic n-point design from the greedy projection walk.

    Each step picks the candidate with the largest projection weight;
    already chosen candidates carry weight zero.  The log determinant of the
    selected minor is recorded in the design metadata.
    """
    chosen = _greedy_positions(K, n, tie_rng)
    ids = K.candidate_ids[chosen]
    log_det = dpp_log_pmf(K, chosen)
    return Design(ids, K.candidates.points[ids], int(n), "emulated",
                  meta={"log_det": log_det})


def violating_set(candidates, design, tol=COORD_TOL):
    """Unselected candidates sharing a coordinate value with any design point.

    One pass per dimension, N x n comparisons each, so the cost is O(N n d).
    """
    if design is None or design.n == 0:
        return np.array([], dtype=int)
    pts = candidates.points
    mask = np.zeros(pts.shape[0], dtype=bool)
    for k in range(pts.shape[1]):
        diff = np.abs(pts[:, k][:, None] - design.coords[:, k][None, :])
        mask |= (diff <= tol).any(axis=1)
    mask[design.indices] = False
    return np.flatnonzero(mask)


@dataclass
class SequentialState:
    """Progress marker for batch-sequential design construction.

    existing may be a Design, an array of candidate ids, or None.  excluded
    holds candidate ids barred from future batches; it always includes the
    ids of the existing design.  rho_schedule and batch_sizes pair up, one
    entry per remaining batch.
    """

    existing: object = None
    excluded: np.ndarray = field(default_factory=lambda: np.array([], dtype=int))
    rho_schedule: tuple = ()
    batch_sizes: tuple = ()

    def __post_init__(self):
        ids = getattr(self.existing, "indices", self.existing)
        self.existing = (np.array([], dtype=int) if ids is None
                         else np.asarray(ids, dtype=int))
        self.excluded = np.asarray(self.excluded, dtype=int)
        if len(self.rho_schedule) != len(self.batch_sizes):
            raise ValueError("rho_schedule and batch_sizes must pair up "
                             "(%d vs %d entries)" % (len(self.rho_schedule),
                                                     len(self.batch_sizes)))
        if any(int(b) < 1 for b in self.batch_sizes):
            raise ValueError("batch sizes must be positive")
        if self.existing.size > 0:
            self.excluded = np.union1d(self.excluded, self.existing)


def sequential_design(K, state, enforce_projection=True, tie_rng=None):
    """Grow a design batch by batch with per-batch rho and exclusion rules.

    For every batch the kernel is rebuilt over the full candidate set at the
    scheduled rho and Schur-conditioned on the exclusion set S: the selected
    points, any ids preset in state.excluded, and, when enforce_projection is
    set, the projection-violating candidates of the current design.  The
    batch itself comes from the greedy walk; under enforce_projection the walk
    also masks within-batch coordinate clashes, so the non-collapsing property
    holds across the whole design, not just between batches.

    The returned design is the union of the new batches in selection order;
    points of state.existing condition every batch but are not repeated in
    the output.
    """
    cand = K.candidates
    base = K.spec
    selected = [int(i) for i in state.existing]
    preset = np.setdiff1d(state.excluded, np.asarray(selected, dtype=int))
    new_ids = []
    batch_log_dets = []
    for b, (rho_b, nb) in enumerate(zip(state.rho_schedule, state.batch_sizes)):
        nb = int(nb)
        spec_b = KernelSpec(base.family, float(rho_b), base.nugget)
        Kb = build_kernel_matrix(cand, spec_b)
        current = _as_design(cand, selected)
        exclusion = set(int(i) for i in preset)
        exclusion.update(selected)
        if enforce_projection and current is not None:
            exclusion.update(int(i) for i in violating_set(cand, current))
        exclusion = np.array(sorted(exclusion), dtype=int)
        remaining = cand.n_points - exclusion.size
        if remaining < nb:
            raise ValueError("batch %d needs %d candidates but only %d remain "
                             "after exclusions" % (b, nb, remaining))
        Kc = condition_kernel(Kb, exclusion) if exclusion.size else Kb
        guard = cand.points[Kc.candidate_ids] if enforce_projection else None
        pos = _greedy_positions(Kc, nb, tie_rng, collapse_guard_points=guard)
        batch_log_dets.append(dpp_log_pmf(Kc, pos))
        batch_ids = [int(i) for i in Kc.candidate_ids[pos]]
        selected.extend(batch_ids)
        new_ids.extend(batch_ids)
    ids = np.array(new_ids, dtype=int)
    final_rho = float(state.rho_schedule[-1]) if state.rho_schedule else base.rho
    K_final = build_kernel_matrix(cand, KernelSpec(base.family, final_rho,
                                                   base.nugget))
    meta = {
        "rho_schedule": [float(r) for r in state.rho_schedule],
        "batch_sizes": [int(b) for b in state.batch_sizes],
        "batch_log_dets": batch_log_dets,
        "log_det": dpp_log_pmf(K_final, ids),
        "enforce_projection": bool(enforce_projection),
    }
    return Design(ids, cand.points[ids], ids.size, "sequential", meta=meta)


def _as_design(cand, selected):
    if not selected:
        return None
    ids = np.array(selected, dtype=int)
    return Design(ids, cand.points[ids], ids.size, "sequential")
