"""Haar-random states and the averaged marginals they concentrate around."""
import numpy as np


def _rng(seed):
    return seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)


def sample_haar_state(dim, seed=None):
    """
    Unit vector drawn uniformly from the complex sphere in ``dim`` dimensions.

    :param seed: integer seed or a ``numpy.random.Generator``
    """
    if dim < 1:
        raise ValueError('dimension must be at least 1')
    rng = _rng(seed)
    z = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return z / np.linalg.norm(z)


def average_rdm_analytic(m, n=None):
    """
    Haar averages of (d1, d2) on ``m`` modes.

    With ``n=None`` the average runs over the whole Fock space, otherwise over
    the ``n``-particle sector.  d2 uses the <a^ a^ a a> normalization, so the
    unrestricted (i, j; i, j) element is 1/4 (1/8 once halved).
    """
    if m < 2:
        raise ValueError('need at least two modes')
    eye = np.eye(m)
    pair = (np.einsum('ik,jl->ijkl', eye, eye) - np.einsum('il,jk->ijkl', eye, eye))
    if n is None:
        return 0.5 * eye, 0.25 * pair
    if not 0 <= n <= m:
        raise ValueError(f'particle number {n} outside 0..{m}')
    return n / m * eye, n * (n - 1) / (m * (m - 1)) * pair
