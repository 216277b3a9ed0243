"""
Linear equality n-representability constraints over vectorized fermionic terms.

Column layout for N modes (L = 1 + N^2 + N^4 columns)::

    0                                   identity
    1 + p + q N                         a_p^ a_q
    1 + N^2 + p + q N + r N^2 + s N^3   a_p^ a_q^ a_r a_s

Each row c_k of the constraint matrix satisfies sum_l c_kl <O_l> = 0 for every
n-particle state, the identity column carrying the constant offsets.
Hermiticity rows equate <O> with <O^dagger>, which holds for real states.
"""
from collections import Counter
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from ..fermion.operators import FermionOperatorSum

CATEGORIES = ('trace-1', 'hermiticity-1', 'trace-2', 'hermiticity-2', 'antisymmetry',
              'contraction', 'D-Q', 'D-G')


def n_columns(n_modes):
    return 1 + n_modes ** 2 + n_modes ** 4


def column_of(word, n_modes):
    """Column index of a normal-ordered word with one or two creators."""
    N = n_modes
    if len(word) == 0:
        return 0
    acts = tuple(a for _, a in word)
    m = [x for x, _ in word]
    if acts == (1, 0):
        return 1 + m[0] + m[1] * N
    if acts == (1, 1, 0, 0):
        return 1 + N * N + m[0] + m[1] * N + m[2] * N ** 2 + m[3] * N ** 3
    raise ValueError(f'word {word} is not a normal-ordered one- or two-body term')


def word_of(col, n_modes):
    N = n_modes
    if col == 0:
        return ()
    if col <= N * N:
        p, q = (col - 1) % N, (col - 1) // N
        return ((p, 1), (q, 0))
    x = col - 1 - N * N
    p, q, r, s = x % N, (x // N) % N, (x // N ** 2) % N, x // N ** 3
    return ((p, 1), (q, 1), (r, 0), (s, 0))


def vectorize(op, n_modes):
    """Dense coefficient vector of an operator; normal orders first."""
    v = np.zeros(n_columns(n_modes), dtype=complex)
    for word, c in op.normal_ordered().terms.items():
        v[column_of(word, n_modes)] += c
    return v.real if np.allclose(v.imag, 0.0) else v


def unvectorize(v, n_modes, tol=1e-12):
    return FermionOperatorSum({word_of(i, n_modes): c for i, c in enumerate(v) if abs(c) > tol})


def rdm_vector(d1, d2):
    """Expectation values of all columns: 1, d1[p, q], <a_p^ a_q^ a_r a_s> = d2[p, q, s, r]."""
    d1 = np.asarray(d1)
    d2 = np.asarray(d2)
    return np.concatenate([[1.0], d1.reshape(-1, order='F'),
                           d2.transpose(0, 1, 3, 2).reshape(-1, order='F')])


@dataclass
class ConstraintSystem:
    C: sp.csr_matrix
    labels: np.ndarray
    n_modes: int
    n_particles: int

    @property
    def K(self):
        return self.C.shape[0]

    @property
    def L(self):
        return self.C.shape[1]

    def counts(self):
        c = Counter(self.labels.tolist())
        return {k: c[k] for k in CATEGORIES if c[k]}

    def residuals(self, x):
        return self.C @ np.asarray(x)

    def subset(self, categories):
        keep = np.isin(self.labels, list(categories))
        return ConstraintSystem(self.C[keep], self.labels[keep], self.n_modes, self.n_particles)

    def row_operator(self, k):
        return unvectorize(self.C.getrow(k).toarray().ravel(), self.n_modes)


class _Rows:
    def __init__(self, n_modes):
        self.N = n_modes
        self.rows, self.cols, self.vals, self.labels = [], [], [], []

    def add(self, entries, label):
        merged = Counter()
        for col, val in entries:
            merged[col] += val
        merged = {c: v for c, v in merged.items() if abs(v) > 1e-14}
        if not merged:
            return
        k = len(self.labels)
        for col, val in merged.items():
            self.rows.append(k)
            self.cols.append(col)
            self.vals.append(val)
        self.labels.append(label)

    def add_operator(self, op, label):
        v = vectorize(op, self.N)
        self.add([(i, v[i]) for i in np.flatnonzero(v)], label)

    def build(self, n):
        C = sp.csr_matrix((np.real(self.vals), (self.rows, self.cols)),
                          shape=(len(self.labels), n_columns(self.N)))
        return ConstraintSystem(C, np.array(self.labels, dtype=object), self.N, n)


def generate_constraints(basis, n=None, categories=CATEGORIES):
    """
    Equality constraints obeyed by every real n-particle state.

    :param basis: :class:`SpinOrbitalBasis` or a mode count
    :param n: particle count (taken from ``basis`` when omitted)
    :param categories: subset of ``CATEGORIES`` to emit
    """
    N = getattr(basis, 'r', basis)
    n = getattr(basis, 'n', None) if n is None else n
    if n is None or n < 2:
        raise ValueError(f'constraint generation needs n >= 2, got {n}')
    eta = N - n
    unknown = set(categories) - set(CATEGORIES)
    if unknown:
        raise ValueError(f'unknown constraint categories {sorted(unknown)}')
    out = _Rows(N)
    one = lambda p, q: 1 + p + q * N
    two = lambda p, q, r, s: 1 + N * N + p + q * N + r * N ** 2 + s * N ** 3
    pairs = [(p, q) for p in range(N) for q in range(N)]
    F = FermionOperatorSum

    if 'trace-1' in categories:
        out.add([(0, -n)] + [(one(p, p), 1.0) for p in range(N)], 'trace-1')
    if 'hermiticity-1' in categories:
        for p, q in pairs:
            if p < q:
                out.add([(one(p, q), 1.0), (one(q, p), -1.0)], 'hermiticity-1')
    if 'trace-2' in categories:
        # Tr d2 = sum <a_p^ a_q^ a_q a_p>
        out.add([(0, -n * (n - 1))] + [(two(p, q, q, p), 1.0) for p, q in pairs], 'trace-2')
    if 'hermiticity-2' in categories:
        for p, q, r, s in np.ndindex(N, N, N, N):
            a, b = two(p, q, r, s), two(s, r, q, p)
            if a < b:
                out.add([(a, 1.0), (b, -1.0)], 'hermiticity-2')
    if 'antisymmetry' in categories:
        for p, q, r, s in np.ndindex(N, N, N, N):
            a = two(p, q, r, s)
            for b in (two(q, p, r, s), two(p, q, s, r)):
                if a < b:
                    out.add([(a, 1.0), (b, 1.0)], 'antisymmetry')
                elif a == b:
                    out.add([(a, 1.0)], 'antisymmetry')
    if 'contraction' in categories:
        # sum_k <a_i^ a_k^ a_k a_j> = (n - 1) <a_i^ a_j>
        for i, j in pairs:
            out.add([(two(i, k, k, j), 1.0) for k in range(N)] + [(one(i, j), -(n - 1))],
                    'contraction')
    if 'D-Q' in categories:
        out.add_operator(F({((p, 0), (p, 1)): 1.0 for p in range(N)}) - eta, 'D-Q')
        out.add_operator(F({((p, 0), (q, 0), (q, 1), (p, 1)): 1.0 for p, q in pairs})
                         - eta * (eta - 1), 'D-Q')
        for i, j in pairs:
            # sum_k <a_i a_k a_k^ a_j^> = (eta - 1) <a_i a_j^>
            op = F({((i, 0), (k, 0), (k, 1), (j, 1)): 1.0 for k in range(N)})
            op = op - F({((i, 0), (j, 1)): float(eta - 1)})
            out.add_operator(op, 'D-Q')
    if 'D-G' in categories:
        out.add_operator(F({((p, 1), (q, 0), (q, 1), (p, 0)): 1.0 for p, q in pairs})
                         - n * (eta + 1), 'D-G')
        for i, k in pairs:
            # sum_j <a_i^ a_j a_j^ a_k> = (eta + 1) <a_i^ a_k>
            op = F({((i, 1), (j, 0), (j, 1), (k, 0)): 1.0 for j in range(N)})
            op = op - F({((i, 1), (k, 0)): float(eta + 1)})
            out.add_operator(op, 'D-G')
    return out.build(n)
