"""
Block-diagonal semidefinite programs in equality form::

    min <C, X>  s.t.  A(X) = b,  X = diag(X_1, ..., X_B) >= 0

Each block is stored as its row-major vectorization; the concatenation of all
block vectors is the variable vector x, so A(X) = A @ x.  Rows of A act on
symmetric matrices and are kept symmetric (a_ij = a_ji within each block).
"""
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp


@dataclass
class SDPProblem:
    C: np.ndarray
    A: sp.csr_matrix
    b: np.ndarray
    block_dims: tuple

    def __post_init__(self):
        self.block_dims = tuple(int(d) for d in self.block_dims)
        self.A = sp.csr_matrix(self.A, dtype=float)
        self.b = np.asarray(self.b, dtype=float)
        self.C = np.asarray(self.C, dtype=float)
        n = self.n_vars
        if self.C.shape != (n,):
            raise ValueError(f'C has length {self.C.shape}, blocks need {n}')
        if self.A.shape[1] != n:
            raise ValueError(f'A has {self.A.shape[1]} columns, blocks need {n}')
        if self.b.shape != (self.A.shape[0],):
            raise ValueError(f'b has length {self.b.shape[0]}, A has {self.A.shape[0]} rows')

    @property
    def n_vars(self):
        return sum(d * d for d in self.block_dims)

    @property
    def m(self):
        return self.A.shape[0]

    @property
    def offsets(self):
        return np.cumsum([0] + [d * d for d in self.block_dims])

    def blocks(self, x):
        off = self.offsets
        return [x[off[i]:off[i + 1]].reshape(d, d) for i, d in enumerate(self.block_dims)]

    def stack(self, blocks):
        return np.concatenate([np.asarray(b).ravel() for b in blocks])

    def cost_blocks(self):
        return self.blocks(self.C)

    def symmetry_defect(self):
        """Largest |a_ij - a_ji| over all rows and blocks, and the same for C."""
        perm = self._transpose_index()
        dA = self.A - self.A[:, perm]
        a = abs(dA).max() if dA.nnz else 0.0
        return float(a), float(np.abs(self.C - self.C[perm]).max(initial=0.0))

    def _transpose_index(self):
        idx = []
        for off, d in zip(self.offsets, self.block_dims):
            idx.append(off + np.arange(d * d).reshape(d, d).T.ravel())
        return np.concatenate(idx) if idx else np.zeros(0, dtype=int)


def symmetric_problem(C_blocks, rows, b, block_dims):
    """
    Build an :class:`SDPProblem`, symmetrizing every row and the cost.

    :param rows: sparse matrix or array with one (not necessarily symmetric) row per constraint
    """
    dims = tuple(block_dims)
    tmp = SDPProblem(np.zeros(sum(d * d for d in dims)), sp.csr_matrix((len(b), sum(d * d for d in dims))),
                     np.asarray(b, dtype=float), dims)
    perm = tmp._transpose_index()
    A = sp.csr_matrix(rows, dtype=float)
    A = 0.5 * (A + A[:, perm])
    A.eliminate_zeros()
    C = np.concatenate([np.asarray(c, dtype=float).ravel() for c in C_blocks])
    C = 0.5 * (C + C[perm])
    return SDPProblem(C, A, b, dims)


def dump_problem(path, problem):
    """
    Sparse text format::

        blocks <d_1> ... <d_B>
        constraints <m>
        C <block> <i> <j> <value>       (1-based, upper triangle)
        A <row> <block> <i> <j> <value> (1-based, upper triangle)
        b <row> <value>
    """
    off = problem.offsets
    with open(path, 'w') as f:
        f.write('blocks ' + ' '.join(map(str, problem.block_dims)) + '\n')
        f.write(f'constraints {problem.m}\n')
        for bi, blk in enumerate(problem.cost_blocks()):
            for i, j in zip(*np.nonzero(np.triu(blk))):
                f.write(f'C {bi + 1} {i + 1} {j + 1} {float(blk[i, j])!r}\n')
        coo = problem.A.tocoo()
        for row, col, val in zip(coo.row, coo.col, coo.data):
            bi = int(np.searchsorted(off, col, side='right') - 1)
            d = problem.block_dims[bi]
            i, j = divmod(int(col - off[bi]), d)
            if i <= j:
                f.write(f'A {row + 1} {bi + 1} {i + 1} {j + 1} {float(val)!r}\n')
        for row, val in enumerate(problem.b):
            if val:
                f.write(f'b {row + 1} {float(val)!r}\n')


def load_problem(path):
    dims, m = None, None
    c_entries, a_entries, b_entries = [], [], []
    with open(path) as f:
        for lineno, line in enumerate(f, start=1):
            parts = line.split()
            if not parts:
                continue
            key = parts[0]
            try:
                if key == 'blocks':
                    dims = [int(x) for x in parts[1:]]
                elif key == 'constraints':
                    m = int(parts[1])
                elif key == 'C':
                    c_entries.append((int(parts[1]) - 1, int(parts[2]) - 1, int(parts[3]) - 1,
                                      float(parts[4])))
                elif key == 'A':
                    a_entries.append((int(parts[1]) - 1, int(parts[2]) - 1, int(parts[3]) - 1,
                                      int(parts[4]) - 1, float(parts[5])))
                elif key == 'b':
                    b_entries.append((int(parts[1]) - 1, float(parts[2])))
                else:
                    raise ValueError(key)
            except (ValueError, IndexError):
                raise ValueError(f'line {lineno}: cannot parse {line.strip()!r}') from None
    if dims is None or m is None:
        raise ValueError('missing "blocks" or "constraints" line')
    off = np.cumsum([0] + [d * d for d in dims])
    C = np.zeros(off[-1])
    for bi, i, j, v in c_entries:
        d = dims[bi]
        C[off[bi] + i * d + j] = v
        C[off[bi] + j * d + i] = v
    rows, cols, vals = [], [], []
    for row, bi, i, j, v in a_entries:
        d = dims[bi]
        rows += [row, row] if i != j else [row]
        cols += [off[bi] + i * d + j, off[bi] + j * d + i] if i != j else [off[bi] + i * d + j]
        vals += [v, v] if i != j else [v]
    A = sp.csr_matrix((vals, (rows, cols)), shape=(m, off[-1]))
    b = np.zeros(m)
    for row, v in b_entries:
        b[row] = v
    return SDPProblem(C, A, b, dims)
