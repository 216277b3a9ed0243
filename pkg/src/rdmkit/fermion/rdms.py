"""
Fermionic marginals and the linear maps between them.

Conventions (spin-orbital basis of r modes, n particles, eta = r - n holes)::

    d1[i, j]       = <a_i^ a_j>
    q1[i, j]       = <a_i a_j^>
    d2[p, q, r, s] = <a_p^ a_q^ a_s a_r>
    q2[i, j, k, l] = <a_i a_j a_l^ a_k^>
    g2[i, j, k, l] = <a_i^ a_j a_l^ a_k>

With this normalization Tr[d2] = n(n - 1), Tr[q2] = eta(eta - 1) and
Tr[g2] = n(eta + 1).  The matrix view of a rank-4 tensor uses composite
indices (p * r + q, r * r + s), i.e. a plain C-order reshape.
"""
import numpy as np


class RDMShapeError(ValueError):
    pass


def _check_square(mat, name='matrix'):
    mat = np.asarray(mat)
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
        raise RDMShapeError(f'{name} must be square, got shape {mat.shape}')
    return mat


def _check_four(tensor, r=None, name='tensor'):
    tensor = np.asarray(tensor)
    if tensor.ndim == 2:
        dim = int(round(np.sqrt(tensor.shape[0])))
        if tensor.shape != (dim * dim, dim * dim):
            raise RDMShapeError(f'{name} matrix view has bad shape {tensor.shape}')
        tensor = tensor.reshape((dim,) * 4)
    if tensor.ndim != 4 or len(set(tensor.shape)) != 1:
        raise RDMShapeError(f'{name} must be a rank-4 tensor with equal axes, '
                            f'got shape {tensor.shape}')
    if r is not None and tensor.shape[0] != r:
        raise RDMShapeError(f'{name} has {tensor.shape[0]} modes, expected {r}')
    return tensor


def four_to_matrix(tensor):
    """Matrix view of a rank-4 tensor over composite indices."""
    tensor = np.asarray(tensor)
    r = tensor.shape[0]
    return tensor.reshape(r * r, r * r)


def matrix_to_four(matrix):
    matrix = np.asarray(matrix)
    r = int(round(np.sqrt(matrix.shape[0])))
    if matrix.shape != (r * r, r * r):
        raise RDMShapeError(f'cannot view shape {matrix.shape} as a rank-4 tensor')
    return matrix.reshape(r, r, r, r)


def hermitize(matrix):
    """Average a square matrix (or a rank-4 tensor's matrix view) with its adjoint."""
    matrix = np.asarray(matrix)
    if matrix.ndim == 4:
        return matrix_to_four(hermitize(four_to_matrix(matrix)))
    return 0.5 * (matrix + matrix.conj().T)


def antisymmetrize(d2):
    """Average over the four index swaps allowed by fermionic antisymmetry."""
    d2 = _check_four(d2)
    return 0.25 * (d2 - d2.transpose(1, 0, 2, 3) - d2.transpose(0, 1, 3, 2)
                   + d2.transpose(1, 0, 3, 2))


def map_d1_to_q1(d1):
    d1 = _check_square(d1, 'd1')
    return np.eye(d1.shape[0]) - d1.T


def map_q1_to_d1(q1):
    q1 = _check_square(q1, 'q1')
    return np.eye(q1.shape[0]) - q1.T


def contract_d2_to_d1(d2, n):
    """1-RDM from the 2-RDM: d1[i, j] = sum_k d2[i, k, j, k] / (n - 1)."""
    if n < 2:
        raise ValueError(f'contraction needs at least two particles, got n={n}')
    d2 = _check_four(d2, name='d2')
    return np.einsum('ikjk->ij', d2) / (n - 1)


def contract_q2_to_q1(q2, eta):
    if eta < 2:
        raise ValueError(f'hole contraction needs at least two holes, got eta={eta}')
    q2 = _check_four(q2, name='q2')
    return np.einsum('ikjk->ij', q2) / (eta - 1)


def contract_g2_to_d1(g2, eta):
    """Recover d1 from the particle-hole matrix: sum_j g2[i, j, k, j] = (eta + 1) d1[i, k]."""
    g2 = _check_four(g2, name='g2')
    return np.einsum('ijkj->ik', g2) / (eta + 1)


def _q2_shift(d1):
    # every term of q2 that is not the transposed d2
    r = d1.shape[0]
    eye = np.eye(r)
    shift = np.einsum('ik,jl->ijkl', eye, eye) - np.einsum('il,jk->ijkl', eye, eye)
    shift -= np.einsum('jl,ki->ijkl', eye, d1)
    shift += np.einsum('il,kj->ijkl', eye, d1)
    shift += np.einsum('jk,li->ijkl', eye, d1)
    shift -= np.einsum('ik,lj->ijkl', eye, d1)
    return shift


def map_d2_to_q2(d2, d1):
    """Two-hole RDM from (d2, d1) by anticommuting the ladder operators."""
    d1 = _check_square(d1, 'd1')
    d2 = _check_four(d2, d1.shape[0], 'd2')
    return _q2_shift(d1) + d2.transpose(2, 3, 0, 1)


def map_q2_to_d2(q2, d1):
    d1 = _check_square(d1, 'd1')
    q2 = _check_four(q2, d1.shape[0], 'q2')
    return (q2 - _q2_shift(d1)).transpose(2, 3, 0, 1)


def map_d2_to_g2(d2, d1):
    """Particle-hole RDM: g2[i, j, k, l] = delta_jl d1[i, k] - d2[i, l, k, j]."""
    d1 = _check_square(d1, 'd1')
    d2 = _check_four(d2, d1.shape[0], 'd2')
    eye = np.eye(d1.shape[0])
    return np.einsum('jl,ik->ijkl', eye, d1) - np.einsum('ilkj->ijkl', d2)


def map_g2_to_d2(g2, d1):
    d1 = _check_square(d1, 'd1')
    g2 = _check_four(g2, d1.shape[0], 'g2')
    eye = np.eye(d1.shape[0])
    x = np.einsum('jl,ik->ijkl', eye, d1) - g2
    return np.einsum('adcb->abcd', x)


def trace2(tensor):
    """Trace of the matrix view of a rank-4 tensor."""
    tensor = _check_four(tensor)
    return np.einsum('pqpq->', tensor)


def trace_distance(a, b):
    """Half the nuclear norm of the Hermitian part of a - b (matrix views)."""
    a = np.asarray(a)
    b = np.asarray(b)
    diff = a - b
    if diff.ndim == 4:
        diff = four_to_matrix(diff)
    return 0.5 * np.abs(np.linalg.eigvalsh(hermitize(diff))).sum()
