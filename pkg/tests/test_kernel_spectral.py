import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from dppdesign.kernel_spectral import (CandidateSet, KernelError, KernelMatrix,
                                       KernelSpec, build_kernel_matrix,
                                       condition_kernel, eigendecompose)


def _cand(pts):
    return CandidateSet(np.asarray(pts, dtype=float))


def _random_psd_kernel(rng, N):
    # random PSD matrix wrapped as a KernelMatrix; coords are irrelevant to
    # the conditioning math but must be distinct
    A = rng.standard_normal((N, N))
    M = A @ A.T / N + 0.1 * np.eye(N)
    cand = _cand(rng.random((N, 3)))
    return KernelMatrix(M, KernelSpec("gaussian_iso", 0.5), np.arange(N), cand)


# ---------------------------------------------------------------- building

def test_gaussian_off_diagonal_is_rho_to_squared_distance():
    cand = _cand([[0.0], [1.0]])
    K = build_kernel_matrix(cand, KernelSpec("gaussian_iso", 0.01))
    assert K.entries[0, 1] == pytest.approx(0.01, abs=1e-15)


def test_diagonal_is_one_plus_nugget():
    cand = _cand([[0.1, 0.2], [0.7, 0.9]])
    K = build_kernel_matrix(cand, KernelSpec("gaussian_iso", 0.3))
    assert np.allclose(np.diag(K.entries), 1.0)
    K = build_kernel_matrix(cand, KernelSpec("gaussian_iso", 0.3, nugget=1e-6))
    assert np.allclose(np.diag(K.entries), 1.0 + 1e-6)


def test_exponential_l1_distance_one():
    cand = _cand([[0.0, 0.0], [0.5, 0.5]])
    K = build_kernel_matrix(cand, KernelSpec("exponential_l1", 0.45))
    assert K.entries[0, 1] == pytest.approx(0.45, abs=1e-15)


def test_duplicate_candidates_rejected_with_index_pair():
    with pytest.raises(KernelError, match="indices 0 and 2"):
        _cand([[0.1, 0.1], [0.5, 0.5], [0.1, 0.1]])


def test_spec_validation():
    with pytest.raises(ValueError):
        KernelSpec("gaussian_iso", 1.0)
    with pytest.raises(ValueError):
        KernelSpec("gaussian_iso", 0.0)
    with pytest.raises(ValueError):
        KernelSpec("matern", 0.5)
    with pytest.raises(ValueError):
        KernelSpec("gaussian_iso", 0.5, nugget=-1e-9)


def test_symmetry_error_below_tolerance():
    rng = np.random.default_rng(0)
    cand = _cand(rng.random((40, 3)))
    for family in ("gaussian_iso", "exponential_l1"):
        K = build_kernel_matrix(cand, KernelSpec(family, 0.2))
        assert np.max(np.abs(K.entries - K.entries.T)) < 1e-12


# ----------------------------------------------------------- decomposition

def test_identity_eigenvalues():
    K = KernelMatrix(np.eye(3), KernelSpec("gaussian_iso", 0.5),
                     np.arange(3), _cand([[0.0], [0.5], [1.0]]))
    eig = eigendecompose(K)
    assert np.allclose(eig.eigenvalues, 1.0)


def test_two_by_two_closed_form():
    rho = 0.37
    cand = _cand([[0.0], [1.0]])
    K = build_kernel_matrix(cand, KernelSpec("gaussian_iso", rho))
    eig = eigendecompose(K)
    assert eig.eigenvalues == pytest.approx([1 + rho, 1 - rho], abs=1e-12)


def test_reconstruction_from_spectrum():
    rng = np.random.default_rng(1)
    cand = _cand(rng.random((6, 2)))
    K = build_kernel_matrix(cand, KernelSpec("gaussian_iso", 0.4))
    eig = eigendecompose(K)
    recon = (eig.eigenvectors * eig.eigenvalues) @ eig.eigenvectors.T
    assert np.linalg.norm(recon - K.entries) < 1e-8 * 6


def test_descending_order_and_orthonormal_vectors():
    rng = np.random.default_rng(2)
    cand = _cand(rng.random((12, 2)))
    K = build_kernel_matrix(cand, KernelSpec("exponential_l1", 0.3))
    eig = eigendecompose(K)
    assert np.all(np.diff(eig.eigenvalues) <= 0)
    gram = eig.eigenvectors.T @ eig.eigenvectors
    assert np.max(np.abs(gram - np.eye(12))) < 1e-10


def test_non_psd_matrix_raises_with_value():
    bad = np.array([[1.0, 2.0], [2.0, 1.0]])
    K = KernelMatrix(bad, KernelSpec("gaussian_iso", 0.5),
                     np.arange(2), _cand([[0.0], [1.0]]))
    with pytest.raises(KernelError, match="not PSD"):
        eigendecompose(K)


def test_small_negative_eigenvalues_clamped():
    A = np.diag([1.0, 1.0, -5e-9])
    K = KernelMatrix(A, KernelSpec("gaussian_iso", 0.5),
                     np.arange(3), _cand([[0.0], [0.5], [1.0]]))
    eig = eigendecompose(K)
    assert eig.eigenvalues[-1] == 0.0


def test_eigendecompose_deterministic():
    rng = np.random.default_rng(3)
    cand = _cand(rng.random((10, 2)))
    K = build_kernel_matrix(cand, KernelSpec("gaussian_iso", 0.25))
    a = eigendecompose(K)
    b = eigendecompose(K)
    assert np.array_equal(a.eigenvalues, b.eigenvalues)
    assert np.array_equal(a.eigenvectors, b.eigenvectors)


# ------------------------------------------------------------ conditioning

def test_condition_on_empty_set_is_identity():
    rng = np.random.default_rng(4)
    K = _random_psd_kernel(rng, 5)
    out = condition_kernel(K, [])
    assert np.array_equal(out.entries, K.entries)
    assert np.array_equal(out.candidate_ids, K.candidate_ids)


def test_two_by_two_schur_closed_form():
    A = np.array([[1.0, 0.5], [0.5, 1.0]])
    K = KernelMatrix(A, KernelSpec("gaussian_iso", 0.5),
                     np.arange(2), _cand([[0.0], [1.0]]))
    out = condition_kernel(K, [0])
    assert out.entries == pytest.approx(np.array([[0.75]]))
    assert np.array_equal(out.candidate_ids, [1])


def test_sequential_equals_joint_conditioning():
    rng = np.random.default_rng(5)
    for _ in range(100):
        N = int(rng.integers(3, 9))
        K = _random_psd_kernel(rng, N)
        ids = rng.choice(N, size=2, replace=False)
        a, b = int(ids[0]), int(ids[1])
        step = condition_kernel(condition_kernel(K, [a]), [b])
        joint = condition_kernel(K, [a, b])
        assert np.max(np.abs(step.entries - joint.entries)) < 1e-10
        assert np.array_equal(step.candidate_ids, joint.candidate_ids)


def test_conditioned_kernel_stays_psd():
    rng = np.random.default_rng(6)
    cand = _cand(rng.random((30, 2)))
    K = build_kernel_matrix(cand, KernelSpec("gaussian_iso", 0.05))
    out = condition_kernel(K, [0, 7, 19])
    assert np.linalg.eigvalsh(out.entries).min() > -1e-8


def test_remaining_ids_preserve_original_order():
    rng = np.random.default_rng(7)
    K = _random_psd_kernel(rng, 6)
    out = condition_kernel(K, [4, 1])
    assert np.array_equal(out.candidate_ids, [0, 2, 3, 5])


def test_condition_on_unknown_id_raises():
    rng = np.random.default_rng(8)
    K = _random_psd_kernel(rng, 4)
    with pytest.raises(KernelError, match="not present"):
        condition_kernel(K, [9])


def test_condition_singular_minor_fails_after_jitter():
    # an indefinite minor defeats every jitter in the ladder; an exactly
    # singular PSD minor would instead be rescued by the jitter, by design
    A = np.array([[1.0, 2.0, 0.1],
                  [2.0, 1.0, 0.1],
                  [0.1, 0.1, 1.0]])
    K = KernelMatrix(A, KernelSpec("gaussian_iso", 0.5), np.arange(3),
                     _cand([[0.0], [0.5], [1.0]]))
    with pytest.raises(KernelError, match="conditioning failure"):
        condition_kernel(K, [0, 1])


def test_condition_rescues_exactly_singular_psd_minor():
    A = np.array([[1.0, 1.0, 0.2],
                  [1.0, 1.0, 0.2],
                  [0.2, 0.2, 1.0]])
    K = KernelMatrix(A, KernelSpec("gaussian_iso", 0.5), np.arange(3),
                     _cand([[0.0], [0.5], [1.0]]))
    out = condition_kernel(K, [0, 1])
    assert out.entries.shape == (1, 1)
    assert np.isfinite(out.entries).all()


# -------------------------------------------------------------- properties

@settings(max_examples=40, deadline=None)
@given(st.integers(2, 12), st.floats(0.02, 0.95), st.integers(0, 10_000))
def test_kernel_matrix_invariants(N, rho, seed):
    rng = np.random.default_rng(seed)
    cand = _cand(rng.random((N, 2)))
    family = "gaussian_iso" if seed % 2 == 0 else "exponential_l1"
    K = build_kernel_matrix(cand, KernelSpec(family, rho))
    assert np.max(np.abs(K.entries - K.entries.T)) < 1e-12
    assert np.all(K.entries >= 0) and np.all(K.entries <= 1 + 1e-12)
    eig = eigendecompose(K)
    assert np.all(eig.eigenvalues >= 0)
    recon = (eig.eigenvectors * eig.eigenvalues) @ eig.eigenvectors.T
    assert np.linalg.norm(recon - K.entries) < 1e-8 * N
