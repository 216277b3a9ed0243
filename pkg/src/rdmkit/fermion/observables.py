"""Expectation values that are linear functionals of (d1, d2)."""
import numpy as np

IMAG_TOL = 1e-10


class ComplexExpectationError(ValueError):
    """A quantity that must be real picked up an imaginary part."""


def _real(value, what):
    value = complex(value)
    scale = max(1.0, abs(value.real))
    if abs(value.imag) > IMAG_TOL * scale:
        raise ComplexExpectationError(
            f'{what} has imaginary part {value.imag:.3e}; inputs are not Hermitian')
    return value.real


def compute_energy(h, v, d1, d2, constant=0.0):
    """
    <H> = constant + sum_ij h_ij d1[i, j] + 1/2 sum_pqrs v_pqrs d2[p, q, r, s]

    ``v`` follows the physicist ordering matched to ``d2``:
    H = sum h_ij a_i^ a_j + 1/2 sum v_pqrs a_p^ a_q^ a_s a_r.
    """
    h = np.asarray(h)
    v = np.asarray(v)
    d1 = np.asarray(d1)
    d2 = np.asarray(d2)
    r = d1.shape[0]
    if h.shape != (r, r) or v.shape != (r,) * 4 or d2.shape != (r,) * 4:
        raise ValueError(f'dimension mismatch: h {h.shape}, v {v.shape}, '
                         f'd1 {d1.shape}, d2 {d2.shape}')
    e = constant + np.einsum('ij,ij->', h, d1) + 0.5 * np.einsum('pqrs,pqrs->', v, d2)
    return _real(e, 'energy')


def compute_number(d1):
    return _real(np.trace(d1), '<n>')


def compute_sz(d1, basis):
    basis.require_spin()
    return _real(0.5 * np.dot(basis.spin_signs, np.diag(d1)), '<Sz>')


def number_pair_correlation(d1, d2):
    """<n_p n_q> = delta_pq d1[p, p] + d2[p, q, p, q]."""
    return np.diag(np.diag(d1)) + np.einsum('pqpq->pq', d2)


def compute_s2(d1, d2, basis):
    """<S^2> = <S- S+> + <Sz^2> + <Sz>."""
    basis.require_spin()
    a = basis.alpha_modes
    b = basis.beta_modes
    # S- S+ = sum_i n_ib - sum_ij a_ib^ a_ja^ a_ia a_jb
    sminus_splus = np.trace(d1[np.ix_(b, b)])
    sminus_splus -= np.einsum('ijji->', d2[np.ix_(b, a, b, a)])
    s = basis.spin_signs
    sz_sq = 0.25 * s @ number_pair_correlation(d1, d2) @ s
    sz = 0.5 * np.dot(s, np.diag(d1))
    return _real(sminus_splus + sz_sq + sz, '<S^2>')
