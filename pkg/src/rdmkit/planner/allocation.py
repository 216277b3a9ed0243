"""Shot allocation across the Pauli terms of an observable."""
from dataclasses import dataclass, field

import numpy as np

from ..fermion.operators import QubitOperatorSum


def _non_identity(terms):
    if isinstance(terms, (QubitOperatorSum,)) or hasattr(terms, 'terms'):
        items = terms.terms.items()
    elif isinstance(terms, dict):
        items = terms.items()
    else:
        return [(i, c) for i, c in enumerate(np.atleast_1d(terms))]
    return [(w, c) for w, c in items if len(w)]


def lambda_norm(terms):
    """
    Sum of absolute coefficients, identity term excluded.

    :param terms: operator sum, ``{word: coeff}`` dict or plain coefficient sequence
    """
    return float(sum(abs(c) for _, c in _non_identity(terms)))


@dataclass
class MeasurementPlan:
    labels: list
    weights: np.ndarray
    sigma: np.ndarray
    shots: np.ndarray
    epsilon: float
    lambda_mult: float
    Lambda: float = field(init=False)

    def __post_init__(self):
        self.Lambda = float(np.abs(self.weights).sum())

    @property
    def total_shots(self):
        return float(self.shots.sum())

    def predicted_error(self, shots=None):
        """Standard error sqrt(sum w^2 sigma^2 / M) for a given allocation."""
        shots = self.shots if shots is None else np.asarray(shots, dtype=float)
        var = np.abs(self.weights) ** 2 * self.sigma ** 2
        live = var > 0
        return float(np.sqrt(np.sum(var[live] / shots[live])))

    def rounded(self):
        return np.ceil(self.shots - 1e-9).astype(np.int64)


def allocate_shots(terms, epsilon, sigma=None):
    """
    Optimal shots M_l = sqrt(lambda) |w_l| sigma_l reaching standard error ``epsilon``.

    The total is (sum |w_l| sigma_l)^2 / epsilon^2.

    :param sigma: per-term standard deviations, default 1
    """
    if epsilon <= 0:
        raise ValueError(f'epsilon must be positive, got {epsilon}')
    items = _non_identity(terms)
    labels = [w for w, _ in items]
    w = np.array([c for _, c in items], dtype=complex)
    if np.all(np.isreal(w)):
        w = w.real
    sig = np.ones(len(w)) if sigma is None else np.asarray(sigma, dtype=float)
    if sig.shape != (len(w),):
        raise ValueError(f'sigma has shape {sig.shape}, expected ({len(w)},)')
    if np.any(sig < 0) or np.any(sig > 1 + 1e-12):
        raise ValueError('sigma entries must lie in [0, 1]')
    weighted = np.abs(w) * sig
    sqrt_lam = weighted.sum() / epsilon ** 2
    return MeasurementPlan(labels, w, sig, sqrt_lam * weighted, float(epsilon), float(sqrt_lam ** 2))


def sigma_from_state(qubit_op, state):
    """
    sigma_l = sqrt(1 - <H_l>^2) for each non-identity Pauli string of ``qubit_op``
    in a qubit state vector (qubit 0 the most significant bit).
    """
    state = np.asarray(state)
    n_qubits = int(round(np.log2(len(state))))
    out = []
    for word, _ in _non_identity(qubit_op):
        mat = QubitOperatorSum({word: 1.0}).to_matrix(n_qubits)
        ev = float(np.real(np.vdot(state, mat @ state)))
        out.append(np.sqrt(max(0.0, 1.0 - ev ** 2)))
    return np.array(out)
