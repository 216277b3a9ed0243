"""
Weighted sums of fermionic ladder words and of Pauli strings.

A ladder word is a tuple of ``(mode, action)`` pairs read left to right, with
``action`` 1 for a creation operator and 0 for an annihilation operator, so
``((2, 1), (0, 0))`` is a_2^ a_0.  A Pauli word is a tuple of ``(qubit, 'X'|'Y'|'Z')``
pairs sorted by qubit; the empty tuple is the identity in both cases.
"""
from collections import defaultdict
import numbers

import numpy as np

COEFF_TOL = 1e-14


def _clean(terms, tol=COEFF_TOL):
    return {k: v for k, v in terms.items() if abs(v) > tol}


class FermionOperatorSum:
    """Linear combination of fermionic ladder words."""

    def __init__(self, terms=None):
        self.terms = {}
        if terms is None:
            return
        if isinstance(terms, tuple):
            terms = {terms: 1.0}
        for word, coeff in dict(terms).items():
            word = tuple((int(m), int(a)) for m, a in word)
            for m, a in word:
                if m < 0 or a not in (0, 1):
                    raise ValueError(f'bad ladder operator {(m, a)}')
            self.terms[word] = self.terms.get(word, 0.0) + coeff

    @classmethod
    def identity(cls, coeff=1.0):
        return cls({(): coeff})

    @classmethod
    def from_integrals(cls, h, v, constant=0.0, tol=0.0):
        """H = constant + sum h_pq a_p^ a_q + 1/2 sum v_pqrs a_p^ a_q^ a_s a_r."""
        terms = {}
        if constant:
            terms[()] = constant
        for (p, q) in zip(*np.nonzero(np.abs(h) > tol)):
            terms[((p, 1), (q, 0))] = h[p, q]
        for (p, q, r, s) in zip(*np.nonzero(np.abs(v) > tol)):
            word = ((p, 1), (q, 1), (s, 0), (r, 0))
            terms[word] = terms.get(word, 0.0) + 0.5 * v[p, q, r, s]
        return cls(terms)

    @property
    def n_modes(self):
        modes = [m for word in self.terms for m, _ in word]
        return max(modes) + 1 if modes else 0

    def __repr__(self):
        return f'FermionOperatorSum({len(self.terms)} terms)'

    def __iter__(self):
        return iter(self.terms.items())

    def __len__(self):
        return len(self.terms)

    def copy(self):
        return FermionOperatorSum(dict(self.terms))

    def __add__(self, other):
        if isinstance(other, numbers.Number):
            other = FermionOperatorSum.identity(other)
        out = dict(self.terms)
        for word, coeff in other.terms.items():
            out[word] = out.get(word, 0.0) + coeff
        return FermionOperatorSum(out)

    __radd__ = __add__

    def __neg__(self):
        return self * -1.0

    def __sub__(self, other):
        return self + (-other if not isinstance(other, numbers.Number) else -other)

    def __rsub__(self, other):
        return -self + other

    def __mul__(self, other):
        if isinstance(other, numbers.Number):
            return FermionOperatorSum({w: c * other for w, c in self.terms.items()})
        out = defaultdict(complex)
        for w1, c1 in self.terms.items():
            for w2, c2 in other.terms.items():
                out[w1 + w2] += c1 * c2
        return FermionOperatorSum(dict(out))

    def __rmul__(self, other):
        return self * other

    def dagger(self):
        return FermionOperatorSum({
            tuple((m, 1 - a) for m, a in reversed(word)): np.conj(c)
            for word, c in self.terms.items()})

    def is_hermitian(self, tol=1e-12):
        diff = (self - self.dagger()).canonical()
        return all(abs(c) <= tol for c in diff.terms.values())

    def normal_ordered(self):
        """Move creators left of annihilators, keeping their relative order."""
        out = defaultdict(complex)
        for word, coeff in self.terms.items():
            for w, sign in _normal_order_word(word):
                out[w] += sign * coeff
        return FermionOperatorSum(_clean(dict(out)))

    def canonical(self):
        """Normal order, then sort creators and annihilators by descending mode."""
        out = defaultdict(complex)
        for word, coeff in self.normal_ordered().terms.items():
            n_create = sum(a for _, a in word)
            cre, sgn_c = _sort_desc([m for m, _ in word[:n_create]])
            ann, sgn_a = _sort_desc([m for m, _ in word[n_create:]])
            if cre is None or ann is None:
                continue
            w = tuple((m, 1) for m in cre) + tuple((m, 0) for m in ann)
            out[w] += sgn_c * sgn_a * coeff
        return FermionOperatorSum(_clean(dict(out)))


def _sort_desc(modes):
    modes = list(modes)
    if len(set(modes)) != len(modes):
        return None, 0
    sign = 1
    # bubble sort keeps track of transposition parity
    for i in range(len(modes)):
        for j in range(len(modes) - 1 - i):
            if modes[j] < modes[j + 1]:
                modes[j], modes[j + 1] = modes[j + 1], modes[j]
                sign = -sign
    return modes, sign


def _normal_order_word(word):
    """Expand a ladder word into normal-ordered words with signs."""
    stack = [(tuple(word), 1)]
    done = []
    while stack:
        w, sign = stack.pop()
        for i in range(len(w) - 1):
            (m1, a1), (m2, a2) = w[i], w[i + 1]
            if a1 == 0 and a2 == 1:
                swapped = w[:i] + (w[i + 1], w[i]) + w[i + 2:]
                stack.append((swapped, -sign))
                if m1 == m2:
                    stack.append((w[:i] + w[i + 2:], sign))
                break
        else:
            n_create = sum(a for _, a in w)
            cre = [m for m, _ in w[:n_create]]
            ann = [m for m, _ in w[n_create:]]
            if len(set(cre)) == len(cre) and len(set(ann)) == len(ann):
                done.append((w, sign))
    return done


_PAULI_PRODUCT = {
    ('X', 'X'): (1, None), ('Y', 'Y'): (1, None), ('Z', 'Z'): (1, None),
    ('X', 'Y'): (1j, 'Z'), ('Y', 'X'): (-1j, 'Z'),
    ('Y', 'Z'): (1j, 'X'), ('Z', 'Y'): (-1j, 'X'),
    ('Z', 'X'): (1j, 'Y'), ('X', 'Z'): (-1j, 'Y'),
}

_PAULI_MATRIX = {
    'I': np.eye(2),
    'X': np.array([[0, 1], [1, 0]], dtype=complex),
    'Y': np.array([[0, -1j], [1j, 0]], dtype=complex),
    'Z': np.array([[1, 0], [0, -1]], dtype=complex),
}


def _multiply_pauli_words(w1, w2):
    ops = dict(w1)
    phase = 1
    for q, p in w2:
        if q in ops:
            f, res = _PAULI_PRODUCT[(ops[q], p)]
            phase *= f
            if res is None:
                del ops[q]
            else:
                ops[q] = res
        else:
            ops[q] = p
    return tuple(sorted(ops.items())), phase


class QubitOperatorSum:
    """Linear combination of Pauli strings; every string squares to the identity."""

    def __init__(self, terms=None):
        self.terms = {}
        for word, coeff in dict(terms or {}).items():
            word = tuple(sorted((int(q), str(p)) for q, p in word))
            for _, p in word:
                if p not in 'XYZ':
                    raise ValueError(f'unknown Pauli {p!r}')
            self.terms[word] = self.terms.get(word, 0.0) + coeff

    def __repr__(self):
        return f'QubitOperatorSum({len(self.terms)} terms)'

    def __len__(self):
        return len(self.terms)

    def __add__(self, other):
        if isinstance(other, numbers.Number):
            other = QubitOperatorSum({(): other})
        out = dict(self.terms)
        for w, c in other.terms.items():
            out[w] = out.get(w, 0.0) + c
        return QubitOperatorSum(_clean(out))

    __radd__ = __add__

    def __sub__(self, other):
        return self + other * -1.0

    def __mul__(self, other):
        if isinstance(other, numbers.Number):
            return QubitOperatorSum({w: c * other for w, c in self.terms.items()})
        out = defaultdict(complex)
        for w1, c1 in self.terms.items():
            for w2, c2 in other.terms.items():
                w, phase = _multiply_pauli_words(w1, w2)
                out[w] += phase * c1 * c2
        return QubitOperatorSum(_clean(dict(out)))

    def __rmul__(self, other):
        return self * other

    @property
    def n_qubits(self):
        qs = [q for w in self.terms for q, _ in w]
        return max(qs) + 1 if qs else 0

    def is_hermitian(self, tol=1e-12):
        return all(abs(np.imag(c)) <= tol for c in self.terms.values())

    def real(self, tol=1e-10):
        """Same operator with real coefficients; raises if any imaginary part exceeds tol."""
        bad = [c for c in self.terms.values() if abs(np.imag(c)) > tol]
        if bad:
            raise ValueError(f'non-Hermitian Pauli sum (imaginary coefficient {bad[0]})')
        return QubitOperatorSum({w: float(np.real(c)) for w, c in self.terms.items()})

    def to_matrix(self, n_qubits=None):
        """Dense matrix with qubit 0 as the leftmost tensor factor."""
        n_qubits = self.n_qubits if n_qubits is None else n_qubits
        out = np.zeros((2 ** n_qubits, 2 ** n_qubits), dtype=complex)
        for word, coeff in self.terms.items():
            ops = dict(word)
            mat = np.ones((1, 1))
            for q in range(n_qubits):
                mat = np.kron(mat, _PAULI_MATRIX[ops.get(q, 'I')])
            out += coeff * mat
        return out


def jordan_wigner(op):
    """Map a fermionic operator to Pauli strings; mode k lives on qubit k.

    a_k  -> Z_0 ... Z_{k-1} (X_k + i Y_k) / 2, with |1> the occupied state.
    """
    cache = {}

    def ladder(mode, action):
        key = (mode, action)
        if key not in cache:
            z = tuple((j, 'Z') for j in range(mode))
            sign = -0.5j if action == 1 else 0.5j
            cache[key] = QubitOperatorSum({z + ((mode, 'X'),): 0.5,
                                           z + ((mode, 'Y'),): sign})
        return cache[key]

    out = defaultdict(complex)
    for word, coeff in op.terms.items():
        term = QubitOperatorSum({(): coeff})
        for mode, action in word:
            term = term * ladder(mode, action)
        for w, c in term.terms.items():
            out[w] += c
    return QubitOperatorSum(_clean(dict(out)))
