"""
Grassmann wedge products and cumulant reconstruction of 3- and 4-RDMs.

A k-particle tensor has 2k axes: k upper indices followed by k lower
indices.  The wedge product antisymmetrizes the tensor product over upper and
lower indices separately with weight (1/N!)^2, N being the total number of
upper indices.

Cumulant expansions hold for marginals normalized by 1/k!, so the routines
below divide d_k = <a^ ... a> by k! on the way in and multiply back on the
way out.  In that normalization a single determinant has d2/2 = d1 ^ d1.
"""
from dataclasses import dataclass
from itertools import permutations
from math import factorial
from typing import Optional

import numpy as np

from .rdms import contract_d2_to_d1


def _parity(perm):
    perm = list(perm)
    sign = 1
    for i in range(len(perm)):
        while perm[i] != i:
            j = perm[i]
            perm[i], perm[j] = perm[j], perm[i]
            sign = -sign
    return sign


def _grade(tensor):
    if tensor.ndim % 2:
        raise ValueError(f'tensor with {tensor.ndim} axes has no (upper, lower) grading')
    return tensor.ndim // 2


def antisymmetrize_grade(tensor):
    """Project onto tensors antisymmetric in the upper and in the lower indices."""
    k = _grade(tensor)
    if k < 2:
        return tensor.copy()
    perms = [(p, _parity(p)) for p in permutations(range(k))]
    upper = sum(s * tensor.transpose(p + tuple(range(k, 2 * k))) for p, s in perms)
    lower = sum(s * upper.transpose(tuple(range(k)) + tuple(k + i for i in p))
                for p, s in perms)
    return lower / factorial(k) ** 2


def wedge(a, b):
    """Grassmann wedge product of two graded tensors."""
    a = np.asarray(a)
    b = np.asarray(b)
    ka, kb = _grade(a), _grade(b)
    if len(set(a.shape) | set(b.shape)) != 1:
        raise ValueError(f'mode dimensions differ: {a.shape} vs {b.shape}')
    t = np.multiply.outer(a, b)
    # (ua, la, ub, lb) -> (ua, ub, la, lb)
    order = (tuple(range(ka)) + tuple(range(2 * ka, 2 * ka + kb))
             + tuple(range(ka, 2 * ka)) + tuple(range(2 * ka + kb, 2 * ka + 2 * kb)))
    return antisymmetrize_grade(t.transpose(order))


@dataclass
class CumulantSet:
    """Connected parts of the marginals, normalized by 1/k!."""
    d1: np.ndarray
    d2: np.ndarray
    d3: Optional[np.ndarray] = None
    d4: Optional[np.ndarray] = None


def cumulant_decompose(d2, n, d1=None):
    """Split (d1, d2) into the one- and two-body cumulants."""
    if d1 is None:
        d1 = contract_d2_to_d1(d2, n)
    delta1 = np.asarray(d1)
    delta2 = np.asarray(d2) / 2.0 - wedge(delta1, delta1)
    return CumulantSet(delta1, delta2)


def cumulant_reconstruct(d2, n, max_order=4, d1=None):
    """
    Approximate the 3-RDM (and 4-RDM) from the 2-RDM by zeroing the three-
    and four-body cumulants.

    Returns ``(d3, d4)`` in the <a^ a^ a^ a a a> normalization (trace
    n(n-1)(n-2), resp. n(n-1)(n-2)(n-3)); ``d4`` is None when ``max_order=3``.
    """
    if max_order not in (3, 4):
        raise ValueError('only 3- and 4-RDM reconstructions are supported')
    if n < 3:
        raise ValueError(f'a 3-RDM needs at least three particles, got n={n}')
    if max_order == 4 and n < 4:
        raise ValueError(f'a 4-RDM needs at least four particles, got n={n}')
    cum = cumulant_decompose(d2, n, d1)
    l1, l2 = cum.d1, cum.d2
    l11 = wedge(l1, l1)
    l111 = wedge(l11, l1)
    d3 = 6.0 * (3.0 * wedge(l2, l1) + l111)
    if max_order == 3:
        return d3, None
    u4 = (3.0 * wedge(l2, l2) + 6.0 * wedge(wedge(l2, l1), l1) + wedge(l111, l1))
    return d3, 24.0 * u4


def contract_down(dk, n):
    """Contract a k-RDM (k >= 2) over its last upper/lower pair to the (k-1)-RDM."""
    k = _grade(dk)
    if n < k:
        raise ValueError(f'cannot contract a {k}-RDM of {n} particles')
    return np.trace(dk, axis1=k - 1, axis2=2 * k - 1) / (n - k + 1)
