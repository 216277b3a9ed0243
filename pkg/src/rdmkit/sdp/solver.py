"""
Boundary-point (augmented Lagrangian) method for block-diagonal SDPs.

Each outer iteration, with penalty sigma and current (X, Z)::

    A A^T y = A(C - Z) + (b - A(X)) / sigma
    W       = A^T y - C + X / sigma
    Z       = (-W)_+ ,   X = sigma W_+

so X and Z stay complementary and the iteration drives the primal residual
A(X) - b and the dual residual C - A^T y - Z to zero together.
"""
from dataclasses import dataclass, field
import warnings

import numpy as np
import scipy.linalg as sla
import scipy.sparse as sp
import scipy.sparse.linalg as spla

DENSE_LIMIT = 6000


class SingularConstraintsWarning(UserWarning):
    pass


def split_projection(W):
    """Spectral split W = W_+ + W_- into positive and negative semidefinite parts."""
    W = np.asarray(W)
    W = 0.5 * (W + W.conj().T)
    evals, vecs = np.linalg.eigh(W)
    pos = np.clip(evals, 0.0, None)
    w_plus = (vecs * pos) @ vecs.conj().T
    w_plus = 0.5 * (w_plus + w_plus.conj().T)
    return w_plus, W - w_plus


@dataclass
class FactorHandle:
    """Reusable solver for (A A^T) y = rhs."""
    kind: str
    m: int
    singular: bool = False
    _solve: object = field(default=None, repr=False)
    _gram: object = field(default=None, repr=False)
    n_solves: int = 0

    def solve(self, rhs, tol=1e-12):
        self.n_solves += 1
        if self.kind == 'cg':
            y, _ = spla.cg(self._gram, rhs, rtol=tol, atol=0.0, maxiter=10 * self.m)
            return y
        return self._solve(rhs)

    def residual(self, y, rhs):
        return float(np.linalg.norm(self._gram @ y - rhs))


def factor_constraints(A, dense_limit=DENSE_LIMIT, pivot_tol=1e-10):
    """
    Factor A A^T once for the whole solve.

    Dense Cholesky for m <= ``dense_limit``, sparse LU above.  A rank-deficient
    A A^T is flagged (``singular``) and handled by conjugate gradients.
    """
    A = sp.csr_matrix(A)
    m = A.shape[0]
    gram = (A @ A.T).tocsc()
    if m == 0:
        return FactorHandle('empty', 0, False, lambda r: np.zeros(0), gram)
    scale = max(abs(gram.diagonal()).max(), 1e-300)
    if m <= dense_limit:
        dense = gram.toarray()
        try:
            cf = sla.cho_factor(dense, lower=True, check_finite=False)
            piv = np.abs(np.diag(cf[0])) ** 2
            if piv.min() > pivot_tol * scale:
                return FactorHandle('cholesky', m, False,
                                    lambda r: sla.cho_solve(cf, r, check_finite=False), gram)
        except np.linalg.LinAlgError:
            pass
    else:
        try:
            lu = spla.splu(gram, permc_spec='MMD_AT_PLUS_A')
            diag = np.abs(lu.U.diagonal())
            if diag.min() > pivot_tol * scale:
                return FactorHandle('sparse-lu', m, False, lu.solve, gram)
        except RuntimeError:
            pass
    warnings.warn('A A^T is singular; falling back to conjugate gradients',
                  SingularConstraintsWarning, stacklevel=2)
    return FactorHandle('cg', m, True, None, gram)


@dataclass
class SolverConfig:
    eps_outer: float = 1e-8
    eps_dual: float = 1e-8
    eps_inner: float = 1e-10
    max_outer: int = 5000
    sigma_0: float = 0.1
    adapt_sigma: bool = True
    sigma_factor: float = 1.1
    sigma_min: float = 1e-4
    sigma_max: float = 1e6
    sigma_window: int = 10
    stagnation_window: int = 50
    stagnation_ratio: float = 0.98
    dominance: float = 10.0
    inner_mode: str = 'auto'
    dense_limit: int = DENSE_LIMIT

    def __post_init__(self):
        if self.inner_mode not in ('auto', 'cholesky-backsolve', 'conjugate-gradient'):
            raise ValueError(f'unknown inner mode {self.inner_mode!r}')
        if self.inner_mode == 'conjugate-gradient' and self.eps_inner >= self.eps_outer:
            raise ValueError('eps_inner must be below eps_outer in conjugate-gradient mode')


@dataclass
class SDPSolution:
    X: list
    y: np.ndarray
    S: list
    primal_residual: float
    dual_residual: float
    iterations: int
    converged: bool
    objective: float
    dual_objective: float
    sigma: float
    history: list = field(default_factory=list, repr=False)
    factor_kind: str = ''

    @property
    def gap(self):
        return abs(self.objective - self.dual_objective) / (1.0 + abs(self.objective))

    def complementarity(self):
        m = max(len(self.y), 1)
        return float(sum(np.sum(x * s) for x, s in zip(self.X, self.S)) / m)


def _update_sigma(sigma, history, cfg, b_norm, c_norm):
    """
    Residual balancing.  A larger sigma weights dual feasibility more, so sigma
    grows when the relative dual residual dominates the primal one by
    ``dominance`` and shrinks in the opposite case.  When neither dominates but
    the primal residual has stalled over ``stagnation_window`` iterations,
    sigma shrinks as well.
    """
    p, d, _ = history[-1]
    p, d = p / b_norm, d / c_norm
    if d > cfg.dominance * p:
        sigma *= cfg.sigma_factor
    elif p > cfg.dominance * d:
        sigma /= cfg.sigma_factor
    elif len(history) > cfg.stagnation_window:
        old = history[-cfg.stagnation_window - 1][0] / b_norm
        if p > cfg.stagnation_ratio * old:
            sigma /= cfg.sigma_factor
    return float(np.clip(sigma, cfg.sigma_min, cfg.sigma_max))


def _project_blocks(problem, w):
    plus, minus = [], []
    for blk in problem.blocks(w):
        p, n = split_projection(blk)
        plus.append(p.ravel())
        minus.append(n.ravel())
    return np.concatenate(plus), np.concatenate(minus)


def solve(problem, config=None, x0=None, factor=None):
    """
    Boundary-point method.  Stops when ||A(X) - b||_2 <= eps_outer and the
    dual residual ||C - A^T y - Z||_2 <= eps_dual * (1 + ||C||), or at ``max_outer``.

    :param factor: optional :class:`FactorHandle` from :func:`factor_constraints`
    """
    cfg = config or SolverConfig()
    A, b, C = problem.A, problem.b, problem.C
    if factor is None:
        if cfg.inner_mode == 'conjugate-gradient':
            factor = FactorHandle('cg', problem.m, False, None, (A @ A.T).tocsc())
        else:
            factor = factor_constraints(A, cfg.dense_limit)
    At = A.T.tocsr()
    x = np.zeros(problem.n_vars) if x0 is None else np.asarray(x0, dtype=float).copy()
    z = np.zeros(problem.n_vars)
    y = np.zeros(problem.m)
    sigma = cfg.sigma_0
    c_norm = 1.0 + np.linalg.norm(C)
    b_norm = 1.0 + np.linalg.norm(b)
    history = []
    p_res = d_res = np.inf
    it = 0
    converged = False
    for it in range(1, cfg.max_outer + 1):
        rhs = A @ (C - z) + (b - A @ x) / sigma
        y = factor.solve(rhs, tol=cfg.eps_inner)
        w = At @ y - C + x / sigma
        w_plus, w_minus = _project_blocks(problem, w)
        z = -w_minus
        x = sigma * w_plus
        p_res = float(np.linalg.norm(A @ x - b))
        d_res = float(np.linalg.norm(C - At @ y - z))
        history.append((p_res, d_res, sigma))
        if p_res <= cfg.eps_outer and d_res <= cfg.eps_dual * c_norm:
            converged = True
            break
        if cfg.adapt_sigma and it % cfg.sigma_window == 0:
            sigma = _update_sigma(sigma, history, cfg, b_norm, c_norm)
    X = problem.blocks(x)
    S = problem.blocks(z)
    return SDPSolution(X, y, S, p_res, d_res, it, converged, float(C @ x), float(b @ y),
                       sigma, history, factor.kind)
