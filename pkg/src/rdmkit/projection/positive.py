"""Nearest positive semidefinite matrices, with and without a trace constraint."""
import numpy as np


def _hermitian(matrix):
    matrix = np.asarray(matrix)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise ValueError(f'expected a square matrix, got shape {matrix.shape}')
    return 0.5 * (matrix + matrix.conj().T)


def psd_project(matrix):
    """Clip negative eigenvalues to zero (Frobenius-nearest PSD matrix)."""
    evals, vecs = np.linalg.eigh(_hermitian(matrix))
    out = (vecs * np.clip(evals, 0.0, None)) @ vecs.conj().T
    return 0.5 * (out + out.conj().T)


def water_fill(evals, target, tol=1e-12, max_iter=200):
    """
    Shift ``mu`` with sum(max(evals - mu, 0)) = target.

    Bisection locates the active set; mu is then solved exactly on it.
    """
    evals = np.asarray(evals, dtype=float)
    if target < 0:
        raise ValueError(f'target trace must be non-negative, got {target}')
    if target == 0:
        return float(evals.max()), np.zeros_like(evals)
    lo = evals.min() - target / len(evals) - 1.0
    hi = evals.max()

    def excess(mu):
        return np.clip(evals - mu, 0.0, None).sum() - target

    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        if excess(mid) > 0:
            lo = mid
        else:
            hi = mid
        if hi - lo < tol * max(1.0, abs(hi)):
            break
    active = evals > hi
    if not active.any():
        active = evals >= evals.max()
    mu = (evals[active].sum() - target) / active.sum()
    # the exact mu can move an eigenvalue across the threshold; settle it
    for _ in range(len(evals)):
        new_active = evals > mu
        if np.array_equal(new_active, active) or not new_active.any():
            break
        active = new_active
        mu = (evals[active].sum() - target) / active.sum()
    return float(mu), np.clip(evals - mu, 0.0, None)


def psd_project_fixed_trace(matrix, target_trace):
    """
    Frobenius-nearest PSD matrix with trace ``target_trace``: eigenvalues are
    shifted by a common mu and clipped at zero.
    """
    if target_trace < 0:
        raise ValueError(f'target trace must be non-negative, got {target_trace}')
    evals, vecs = np.linalg.eigh(_hermitian(matrix))
    _, lam = water_fill(evals, target_trace)
    out = (vecs * lam) @ vecs.conj().T
    return 0.5 * (out + out.conj().T)
