"""Sector Hamiltonians, ground states and reduced density matrices of exact states."""
import numpy as np
import scipy.sparse as sp

from .fock import SectorBasis, annihilation_words, apply_word, word_images

DENSE_LIMIT = 2000


class ConvergenceError(RuntimeError):
    pass


def ladder_tensor(sector, words):
    """T[K, J, w] = <K| word_w |J> over the determinants K reachable from the sector."""
    src = sector.mask_array
    applied = [apply_word(src, w) for w in words]
    target = np.unique(np.concatenate([m[s != 0] for m, s in applied] + [np.zeros(0, np.int64)]))
    t = np.zeros((len(target), sector.dim, len(words)))
    cols = np.arange(sector.dim)
    for w, (new, sgn) in enumerate(applied):
        keep = sgn != 0
        t[np.searchsorted(target, new[keep]), cols[keep], w] = sgn[keep]
    return target, t


def build_hamiltonian(ints, sector, ordering='interleaved'):
    """
    Sparse symmetric Hamiltonian (including the core energy) of an
    :class:`IntegralSet` restricted to the determinants of ``sector``.
    """
    h, v = ints.spin_orbital(ordering)
    return hamiltonian_from_tensors(h, v, sector, ints.e_core)


def hamiltonian_from_tensors(h, v, sector, constant=0.0):
    r = h.shape[0]
    out = constant * np.eye(sector.dim)
    _, t1 = ladder_tensor(sector, annihilation_words(r, 1))
    if t1.size:
        out = out + np.einsum('kip,pq,kjq->ij', t1, h, t1)
    _, t2 = ladder_tensor(sector, annihilation_words(r, 2))
    if t2.size:
        vmat = v.reshape(r * r, r * r)
        out = out + 0.5 * np.einsum('kip,pq,kjq->ij', t2, vmat, t2, optimize=True)
    return sp.csr_matrix(out)


def _fix_sign(vec):
    nz = np.flatnonzero(np.abs(vec) > 1e-12)
    if len(nz):
        vec = vec * (np.abs(vec[nz[0]]) / vec[nz[0]])
    return vec


def lanczos(matrix, v0=None, max_iter=500, tol=1e-10, seed=0):
    """
    Lowest eigenpair by Lanczos with full reorthogonalization.

    The Krylov basis is kept in memory, which is fine for the few-thousand
    dimensional sectors used here.
    """
    n = matrix.shape[0]
    rng = np.random.default_rng(seed)
    v = rng.standard_normal(n) if v0 is None else np.asarray(v0, dtype=float).copy()
    v /= np.linalg.norm(v)
    basis = [v]
    alphas, betas = [], []
    theta, y = None, None
    for it in range(min(max_iter, n)):
        w = matrix @ basis[-1]
        alphas.append(float(np.real(np.vdot(basis[-1], w))))
        q = np.array(basis)
        w = w - q.T @ (q.conj() @ w)
        w = w - q.T @ (q.conj() @ w)
        tri = np.diag(alphas) + np.diag(betas, 1) + np.diag(betas, -1)
        evals, evecs = np.linalg.eigh(tri)
        theta, y = evals[0], evecs[:, 0]
        beta = np.linalg.norm(w)
        if abs(beta * y[-1]) < tol or beta < 1e-14 or it == n - 1:
            vec = q.T @ y
            return theta, vec / np.linalg.norm(vec)
        betas.append(beta)
        basis.append(w / beta)
    raise ConvergenceError(f'Lanczos did not converge in {max_iter} iterations')


def ground_state(matrix, method='auto', tol=1e-9):
    """
    Lowest eigenvalue and eigenvector of a symmetric matrix.

    Dense diagonalization up to ``DENSE_LIMIT``, Lanczos above.  The returned
    vector has its first non-zero amplitude real and positive.
    """
    n = matrix.shape[0]
    if n < 1:
        raise ValueError('empty matrix')
    if method == 'auto':
        method = 'dense' if n <= DENSE_LIMIT else 'lanczos'
    if method == 'dense':
        dense = matrix.toarray() if sp.issparse(matrix) else np.asarray(matrix)
        evals, evecs = np.linalg.eigh(dense)
        e, vec = evals[0], evecs[:, 0]
    elif method == 'lanczos':
        e, vec = lanczos(matrix, tol=tol * 1e-2)
    else:
        raise ValueError(f'unknown method {method!r}')
    vec = _fix_sign(vec)
    resid = np.linalg.norm(matrix @ vec - e * vec)
    if resid > tol * max(1.0, abs(e)):
        raise ConvergenceError(f'eigenvector residual {resid:.2e} above {tol:.0e}')
    return float(e), vec


def _pure_components(state, tol=1e-13):
    state = np.asarray(state)
    if state.ndim == 1:
        norm = np.vdot(state, state).real
        if abs(norm - 1.0) > 1e-8:
            raise ValueError(f'state is not normalized (norm^2 = {norm:.3e})')
        return [(1.0, state)]
    if abs(np.trace(state) - 1.0) > 1e-8:
        raise ValueError(f'density matrix trace {np.trace(state):.3e} is not 1')
    w, vecs = np.linalg.eigh(0.5 * (state + state.conj().T))
    return [(wi, vecs[:, i]) for i, wi in enumerate(w) if wi > tol]


def measure_rdm(state, sector, order):
    """
    k-RDM <a_{p1}^ ... a_{pk}^ a_{sk} ... a_{s1}> of a state vector or density
    matrix over ``sector``, as a tensor with k upper then k lower axes.
    """
    r = sector.r
    words = annihilation_words(r, order)
    out = 0.0
    for w, psi in _pure_components(state):
        _, phi = word_images(psi, sector, words)
        out = out + w * (phi.conj().T @ phi)
    if np.isscalar(out):
        out = np.zeros((r ** order, r ** order))
    return np.asarray(out).reshape((r,) * (2 * order))


def measure_rdms(state, sector):
    """(d1, d2) of a normalized state vector or density matrix."""
    return measure_rdm(state, sector, 1), measure_rdm(state, sector, 2)


def measure_hole_rdms(state, sector):
    """(q1, q2, g2) measured directly from ladder-operator images (no maps)."""
    r = sector.r
    q1 = q2 = g2 = 0.0
    cre1 = [((i, 1),) for i in range(r)]
    cre2 = [((l, 1), (k, 1)) for k in range(r) for l in range(r)]
    ph = [((x, 1), (y, 0)) for x in range(r) for y in range(r)]
    for w, psi in _pure_components(state):
        _, c1 = word_images(psi, sector, cre1)
        q1 = q1 + w * (c1.conj().T @ c1)       # <a_i a_j^>
        _, c2 = word_images(psi, sector, cre2)
        q2 = q2 + w * (c2.conj().T @ c2)       # <a_i a_j a_l^ a_k^>
        _, g = word_images(psi, sector, ph)    # column (x, y) = a_x^ a_y |psi>
        gram = (g.conj().T @ g).reshape(r, r, r, r)   # [j, i, l, k]
        g2 = g2 + w * gram.transpose(1, 0, 3, 2)
    return (np.asarray(q1).reshape(r, r), np.asarray(q2).reshape((r,) * 4),
            np.asarray(g2).reshape((r,) * 4))
