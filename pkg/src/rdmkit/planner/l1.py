"""Coefficient 1-norm minimization over constraint multipliers."""
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
from scipy.optimize import linprog

from ..fermion.operators import FermionOperatorSum
from .constraints import unvectorize, vectorize


class LPFailure(RuntimeError):
    pass


@dataclass
class RewrittenHamiltonian:
    """w_tilde = v_H - C^T beta over the vectorized columns (column 0 is the identity)."""
    beta: np.ndarray
    coefficients: np.ndarray
    Lambda: float
    Lambda_tilde: float
    status: str = 'optimal'
    n_modes: int = None

    @property
    def ratio(self):
        return self.Lambda_tilde / self.Lambda if self.Lambda else 1.0

    def operator(self, tol=1e-12):
        return unvectorize(self.coefficients, self.n_modes, tol)


def l1_norm(v):
    """1-norm of a vectorized operator without its identity column."""
    return float(np.abs(np.asarray(v)[1:]).sum())


def minimize_l1(v_h, C, n_modes=None, time_limit=None):
    """
    Choose beta minimizing sum_{l>0} |v_H - C^T beta|_l.

    Solved as the linear program min 1^T (u+ + u-) with
    C^T beta + u+ - u- = v_H on every non-identity column.

    :param v_h: vectorized Hamiltonian (real)
    :param C: K x L constraint matrix, or a :class:`ConstraintSystem`
    """
    if hasattr(C, 'C'):
        n_modes = C.n_modes if n_modes is None else n_modes
        C = C.C
    v_h = np.asarray(v_h)
    if np.iscomplexobj(v_h):
        if np.abs(v_h.imag).max() > 1e-12:
            raise ValueError('minimize_l1 expects real coefficients')
        v_h = v_h.real
    C = sp.csr_matrix(C, dtype=float)
    K, L = C.shape
    if v_h.shape != (L,):
        raise ValueError(f'v_H has length {v_h.shape[0]}, constraint matrix has {L} columns')
    lam = l1_norm(v_h)
    if K == 0 or C.nnz == 0:
        return RewrittenHamiltonian(np.zeros(K), v_h.copy(), lam, lam, 'trivial', n_modes)

    ct = C.T.tocsr()[1:]
    eye = sp.identity(L - 1, format='csr')
    a_eq = sp.hstack([ct, eye, -eye], format='csc')
    cost = np.concatenate([np.zeros(K), np.ones(2 * (L - 1))])
    bounds = [(None, None)] * K + [(0, None)] * (2 * (L - 1))
    options = {'presolve': True}
    if time_limit:
        options['time_limit'] = time_limit
    res = linprog(cost, A_eq=a_eq, b_eq=v_h[1:], bounds=bounds, method='highs',
                  options=options)
    if res.x is None:
        raise LPFailure(f'LP solver failed: {res.message}')
    beta = res.x[:K]
    w = v_h - C.T @ beta
    lam_t = l1_norm(w)
    status = 'optimal' if res.status == 0 else f'stopped: {res.message}'
    if lam_t > lam:
        # beta = 0 is always feasible; never hand back something worse
        beta, w, lam_t, status = np.zeros(K), v_h.copy(), lam, status + ' (fell back to beta=0)'
    return RewrittenHamiltonian(beta, w, lam, lam_t, status, n_modes)


def hermitize(terms, n_modes=None):
    """
    H* = (H + H^dagger) / 2.

    Accepts a :class:`FermionOperatorSum`, a :class:`RewrittenHamiltonian` or a
    coefficient vector, and returns the same kind.
    """
    if isinstance(terms, FermionOperatorSum):
        return ((terms + terms.dagger()) * 0.5).normal_ordered()
    if isinstance(terms, RewrittenHamiltonian):
        w = hermitize(terms.coefficients, terms.n_modes)
        return RewrittenHamiltonian(terms.beta, w, terms.Lambda, l1_norm(w), terms.status,
                                    terms.n_modes)
    if n_modes is None:
        raise ValueError('n_modes is required for a coefficient vector')
    op = hermitize(unvectorize(terms, n_modes, tol=0.0))
    out = vectorize(op, n_modes)
    return out.real if np.iscomplexobj(out) and np.abs(out.imag).max() < 1e-14 else out
