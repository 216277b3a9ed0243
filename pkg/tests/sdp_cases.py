"""Random block SDPs with strictly feasible primal and dual points."""
import numpy as np

from rdmkit.sdp import SDPProblem, symmetric_problem


def _pd(rng, d):
    g = rng.standard_normal((d, d))
    return g @ g.T + 0.1 * np.eye(d)


def random_sdp(seed, n_blocks=3):
    rng = np.random.default_rng(seed)
    dims = tuple(int(d) for d in rng.integers(2, 6, size=n_blocks))
    n = sum(d * d for d in dims)
    m = int(rng.integers(3, 8))
    p = symmetric_problem([np.zeros((d, d)) for d in dims], rng.standard_normal((m, n)),
                          np.zeros(m), dims)
    x0 = np.concatenate([_pd(rng, d).ravel() for d in dims])
    y0 = rng.standard_normal(m)
    z0 = np.concatenate([_pd(rng, d).ravel() for d in dims])
    return SDPProblem(p.A.T @ y0 + z0, p.A, p.A @ x0, dims)


def complementary_sdp(seed):
    """
    SDP whose optimum is known: X* and S* share an eigenbasis with
    complementary supports, so <C, X*> = b.y* is optimal by weak duality.
    """
    rng = np.random.default_rng(seed)
    dims = (3, 4)
    n = sum(d * d for d in dims)
    xs, ss = [], []
    for d in dims:
        q, _ = np.linalg.qr(rng.standard_normal((d, d)))
        k = d // 2
        lx = np.r_[rng.uniform(0.5, 2, k), np.zeros(d - k)]
        ls = np.r_[np.zeros(k), rng.uniform(0.5, 2, d - k)]
        xs.append((q * lx) @ q.T)
        ss.append((q * ls) @ q.T)
    m = 10
    p = symmetric_problem([np.zeros((d, d)) for d in dims], rng.standard_normal((m, n)),
                          np.zeros(m), dims)
    x = np.concatenate([a.ravel() for a in xs])
    y = rng.standard_normal(m)
    C = p.A.T @ y + np.concatenate([a.ravel() for a in ss])
    return SDPProblem(C, p.A, p.A @ x, dims), float(C @ x)


def cvxpy_optimum(problem):
    import cvxpy as cp
    xs = [cp.Variable((d, d), symmetric=True) for d in problem.block_dims]
    x = cp.hstack([cp.vec(X, order='C') for X in xs])
    prob = cp.Problem(cp.Minimize(problem.C @ x),
                      [problem.A @ x == problem.b] + [X >> 0 for X in xs])
    prob.solve(solver='CLARABEL', tol_gap_abs=1e-12, tol_gap_rel=1e-12, tol_feas=1e-12)
    return prob.value
