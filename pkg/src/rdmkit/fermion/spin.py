"""Sz block structure of the two-particle marginals in a spin-orbital basis."""
from itertools import combinations

import numpy as np

from .rdms import _check_four


def same_spin_pairs(r_s):
    return list(combinations(range(r_s), 2))


def spin_blocks(d2, basis):
    """
    Split an Sz-conserving, antisymmetric 2-RDM into its unique spin blocks.

    Returns a dict with ``'aa'`` and ``'bb'`` (pairs p < q, linear size
    C(r_s, 2)) and ``'ab'`` (pairs (p_alpha, q_beta), linear size r_s^2).  The
    beta-alpha block is the ab block with both index pairs swapped.
    """
    basis.require_spin()
    d2 = _check_four(d2, basis.r, 'd2')
    a, b = basis.alpha_modes, basis.beta_modes
    pairs = same_spin_pairs(basis.r_s)
    blocks = {}
    for name, modes in (('aa', a), ('bb', b)):
        idx = [(modes[p], modes[q]) for p, q in pairs]
        blocks[name] = np.array([[d2[p, q, r, s] for r, s in idx] for p, q in idx],
                                dtype=d2.dtype).reshape(len(idx), len(idx))
    r_s = basis.r_s
    blocks['ab'] = d2[np.ix_(a, b, a, b)].reshape(r_s * r_s, r_s * r_s)
    return blocks


def reassemble(blocks, basis):
    """Inverse of :func:`spin_blocks` for antisymmetric, Sz-blocked input."""
    basis.require_spin()
    r, r_s = basis.r, basis.r_s
    a, b = basis.alpha_modes, basis.beta_modes
    dtype = np.result_type(*blocks.values())
    d2 = np.zeros((r,) * 4, dtype=dtype)
    pairs = same_spin_pairs(r_s)
    for name, modes in (('aa', a), ('bb', b)):
        blk = blocks[name]
        for x, (p, q) in enumerate(pairs):
            for y, (s, t) in enumerate(pairs):
                val = blk[x, y]
                p_, q_, s_, t_ = modes[p], modes[q], modes[s], modes[t]
                d2[p_, q_, s_, t_] = val
                d2[q_, p_, s_, t_] = -val
                d2[p_, q_, t_, s_] = -val
                d2[q_, p_, t_, s_] = val
    ab = np.asarray(blocks['ab']).reshape(r_s, r_s, r_s, r_s)
    for p, q, s, t in np.ndindex(ab.shape):
        val = ab[p, q, s, t]
        d2[a[p], b[q], a[s], b[t]] = val
        d2[b[q], a[p], b[t], a[s]] = val
        d2[a[p], b[q], b[t], a[s]] = -val
        d2[b[q], a[p], a[s], b[t]] = -val
    return d2


def block_sizes(r_s):
    n_pairs = r_s * (r_s - 1) // 2
    return {'aa': n_pairs, 'bb': n_pairs, 'ab': r_s * r_s}
