"""
Isometries onto the subspaces in which the marginals are block diagonal.

A layout lists, for one marginal, a set of column-orthonormal matrices P_b
with the full matrix recovered as sum_b P_b X_b P_b^T.  Two-particle and
two-hole matrices live on the antisymmetric pair space spanned by
(e_pq - e_qp)/sqrt(2), p < q, so antisymmetry holds by construction.
"""
from dataclasses import dataclass
from itertools import combinations, product

import numpy as np
import scipy.sparse as sp


@dataclass
class Layout:
    name: str
    full_dim: int
    isometries: list
    labels: tuple = ()

    @property
    def sizes(self):
        return [p.shape[1] for p in self.isometries]

    def compress(self, full):
        """Blocks P_b^T F P_b of a full matrix."""
        return [p.T @ full @ p for p in self.isometries]

    def expand(self, blocks):
        out = np.zeros((self.full_dim, self.full_dim))
        for p, x in zip(self.isometries, blocks):
            out += p @ x @ p.T
        return out

    def kron_stack(self):
        """Sparse map from concatenated block vectors to vec(full), both row-major."""
        mats = [sp.kron(sp.csr_matrix(p), sp.csr_matrix(p)) for p in self.isometries]
        return sp.hstack(mats, format='csr')


def unit_isometry(dim, indices):
    p = np.zeros((dim, len(indices)))
    p[list(indices), np.arange(len(indices))] = 1.0
    return p


def pair_isometry(r, pairs):
    """Columns (e_pq - e_qp)/sqrt(2) in the r^2 composite space."""
    p = np.zeros((r * r, len(pairs)))
    for c, (a, b) in enumerate(pairs):
        p[a * r + b, c] = 1 / np.sqrt(2)
        p[b * r + a, c] = -1 / np.sqrt(2)
    return p


def one_body_layout(name, basis, spin_adapted):
    r = basis.r
    if not spin_adapted:
        return Layout(name, r, [np.eye(r)], ('all',))
    return Layout(name, r, [unit_isometry(r, basis.alpha_modes), unit_isometry(r, basis.beta_modes)],
                  ('a', 'b'))


def pair_layout(name, basis, spin_adapted):
    r = basis.r
    if not spin_adapted:
        return Layout(name, r * r, [pair_isometry(r, list(combinations(range(r), 2)))], ('all',))
    a, b = basis.alpha_modes.tolist(), basis.beta_modes.tolist()
    aa = list(combinations(a, 2))
    bb = list(combinations(b, 2))
    ab = list(product(a, b))
    return Layout(name, r * r, [pair_isometry(r, aa), pair_isometry(r, bb), pair_isometry(r, ab)],
                  ('aa', 'bb', 'ab'))


def particle_hole_layout(name, basis, spin_adapted):
    r = basis.r
    if not spin_adapted:
        return Layout(name, r * r, [np.eye(r * r)], ('all',))
    a, b = basis.alpha_modes.tolist(), basis.beta_modes.tolist()
    same = [i * r + j for i, j in product(a, a)] + [i * r + j for i, j in product(b, b)]
    ab = [i * r + j for i, j in product(a, b)]
    ba = [i * r + j for i, j in product(b, a)]
    return Layout(name, r * r, [unit_isometry(r * r, same), unit_isometry(r * r, ab),
                                unit_isometry(r * r, ba)], ('aa+bb', 'ab', 'ba'))


def spin_adapted_sizes(r_s):
    """Linear block sizes of (d1, d2 / q2, g2) when spin adapted."""
    return {'d1': [r_s, r_s], 'd2': [r_s * (r_s - 1) // 2, r_s * (r_s - 1) // 2, r_s * r_s],
            'g2': [2 * r_s * r_s, r_s * r_s, r_s * r_s]}
