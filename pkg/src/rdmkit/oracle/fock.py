"""
Occupation-number bases and ladder-operator action on determinants.

A determinant is an integer bitmask with bit k set when mode k is occupied.
Creation and annihilation carry the Jordan-Wigner sign (-1)^(number of
occupied modes below k).  ``SectorBasis.full(r)`` orders its masks so that
basis index i is the computational-basis state |i> with qubit 0 as the most
significant bit, matching :meth:`QubitOperatorSum.to_matrix`.
"""
from dataclasses import dataclass
from itertools import combinations, product
from math import comb

import numpy as np
import scipy.sparse as sp


def popcount(x):
    x = np.asarray(x, dtype=np.int64)
    return np.bitwise_count(x).astype(np.int64)


def masks_with(modes, count):
    return [sum(1 << m for m in occ) for occ in combinations(modes, count)]


@dataclass(frozen=True)
class SectorBasis:
    r: int
    masks: tuple
    label: str = ''

    @classmethod
    def number_sector(cls, r, n):
        return cls(r, tuple(sorted(masks_with(range(r), n))), f'n={n}')

    @classmethod
    def spin_sector(cls, basis, n_alpha, n_beta):
        """Determinants with fixed (n_alpha, n_beta); dimension C(r_s, n_a) C(r_s, n_b)."""
        a = masks_with(basis.alpha_modes.tolist(), n_alpha)
        b = masks_with(basis.beta_modes.tolist(), n_beta)
        masks = sorted(x | y for x, y in product(a, b))
        return cls(basis.r, tuple(masks), f'na={n_alpha},nb={n_beta}')

    @classmethod
    def full(cls, r):
        masks = []
        for i in range(2 ** r):
            masks.append(sum(1 << k for k in range(r) if (i >> (r - 1 - k)) & 1))
        return cls(r, tuple(masks), 'fock')

    @property
    def dim(self):
        return len(self.masks)

    @property
    def mask_array(self):
        return np.array(self.masks, dtype=np.int64)

    def index(self, mask):
        return self.masks.index(mask)

    def basis_state(self, mask):
        v = np.zeros(self.dim, dtype=complex)
        v[self.index(mask)] = 1.0
        return v


def sector_dimension(r_s, n_alpha, n_beta):
    return comb(r_s, n_alpha) * comb(r_s, n_beta)


def apply_word(masks, word):
    """
    Apply a ladder word (rightmost operator first) to an array of determinants.

    Returns ``(new_masks, signs)``; ``signs`` is 0 where the word annihilates
    the determinant.
    """
    masks = np.array(masks, dtype=np.int64)
    signs = np.ones(masks.shape, dtype=np.int64)
    for mode, action in reversed(word):
        bit = np.int64(1) << mode
        occupied = (masks & bit) != 0
        ok = ~occupied if action == 1 else occupied
        below = popcount(masks & (bit - 1))
        signs = np.where(ok, signs * (1 - 2 * (below % 2)), 0)
        masks = masks ^ bit
    return masks, signs


def word_images(state, sector, words):
    """
    Vectors O|state> for every word in ``words``, as columns of a matrix over
    a common target set of determinants.  Returns ``(target_masks, images)``.
    """
    src = sector.mask_array
    state = np.asarray(state)
    results = []
    targets = set()
    for word in words:
        new, sgn = apply_word(src, word)
        keep = sgn != 0
        results.append((new[keep], sgn[keep] * state[keep]))
        targets.update(new[keep].tolist())
    target = np.array(sorted(targets), dtype=np.int64)
    images = np.zeros((len(target), len(words)), dtype=np.result_type(state, float))
    for col, (new, amp) in enumerate(results):
        if len(new):
            images[np.searchsorted(target, new), col] = amp
    return target, images


def operator_matrix(op, src, dst=None):
    """Sparse matrix of a :class:`FermionOperatorSum` between two sectors."""
    dst = src if dst is None else dst
    lookup = {m: i for i, m in enumerate(dst.masks)}
    masks = src.mask_array
    rows, cols, vals = [], [], []
    col_idx = np.arange(src.dim)
    for word, coeff in op.terms.items():
        new, sgn = apply_word(masks, word)
        for c, m, s in zip(col_idx[sgn != 0], new[sgn != 0], sgn[sgn != 0]):
            row = lookup.get(int(m))
            if row is not None:
                rows.append(row)
                cols.append(c)
                vals.append(coeff * s)
    dtype = complex if np.iscomplexobj(np.array(vals)) else float
    return sp.csr_matrix((np.array(vals, dtype=dtype), (rows, cols)), shape=(dst.dim, src.dim))


def annihilation_words(r, k):
    """Words a_{i_k} ... a_{i_1} for every ordered tuple (i_1, ..., i_k)."""
    return [tuple((m, 0) for m in reversed(idx)) for idx in product(range(r), repeat=k)]
