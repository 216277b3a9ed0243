"""
Uniform single-qubit Kraus channels on the Jordan-Wigner image of a
fermionic state, and the variational channel-state model.

Qubit k carries mode k with |1> = occupied.  Parameterization with elapsed
fraction f = t/T2 and T1 = t1_ratio * T2::

    dephasing            p = (1 - exp(-f)) / 2          {sqrt(1-p) I, sqrt(p) Z}
    amplitude damping    g = 1 - exp(-f / t1_ratio)     {[[1,0],[0,sqrt(1-g)]], [[0,sqrt(g)],[0,0]]}
    depolarizing         p = 1 - exp(-f)                {sqrt(1-p) I, sqrt(p/3) X, Y, Z}

The combined channel applies amplitude damping and then dephasing.
"""
from dataclasses import dataclass

import numpy as np

from ..oracle.fock import SectorBasis
from ..oracle.hamiltonian import _fix_sign, hamiltonian_from_tensors

KINDS = ('dephasing', 'amplitude-damping-plus-dephasing', 'depolarizing')

_I = np.eye(2)
_X = np.array([[0.0, 1.0], [1.0, 0.0]])
_Y = np.array([[0.0, -1j], [1j, 0.0]])
_Z = np.diag([1.0, -1.0])


def _dephasing(f):
    p = (1 - np.exp(-f)) / 2
    return [np.sqrt(1 - p) * _I, np.sqrt(p) * _Z]


def _amplitude_damping(gamma):
    return [np.array([[1.0, 0.0], [0.0, np.sqrt(1 - gamma)]]),
            np.array([[0.0, np.sqrt(gamma)], [0.0, 0.0]])]


@dataclass(frozen=True)
class ChannelModel:
    kind: str
    elapsed_fraction: float = 0.05
    t1_ratio: float = 1.0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f'unknown channel {self.kind!r}; choose from {", ".join(KINDS)}')
        if self.elapsed_fraction < 0:
            raise ValueError('elapsed_fraction must be non-negative')
        if self.t1_ratio <= 0:
            raise ValueError('t1_ratio must be positive')

    def kraus(self):
        """Single-qubit Kraus operators."""
        f = self.elapsed_fraction
        if self.kind == 'dephasing':
            return _dephasing(f)
        if self.kind == 'depolarizing':
            p = 1 - np.exp(-f)
            return [np.sqrt(1 - p) * _I] + [np.sqrt(p / 3) * s for s in (_X, _Y, _Z)]
        damp = _amplitude_damping(1 - np.exp(-f / self.t1_ratio))
        return [d @ a for d in _dephasing(f) for a in damp]

    def completeness_defect(self):
        s = sum(k.conj().T @ k for k in self.kraus())
        return float(np.abs(s - _I).max())


def _on_each_qubit(rho, ops, adjoint=False):
    n_q = int(round(np.log2(rho.shape[0])))
    if 2 ** n_q != rho.shape[0]:
        raise ValueError(f'dimension {rho.shape[0]} is not a power of two')
    t = rho.reshape((2,) * (2 * n_q)).astype(complex)
    for q in range(n_q):
        out = 0
        for k in ops:
            a = k.conj().T if adjoint else k
            # a on the ket index of qubit q, a^dagger on its bra index
            x = np.tensordot(a, t, axes=([1], [q]))
            x = np.moveaxis(x, 0, q)
            x = np.tensordot(x, a.conj(), axes=([n_q + q], [1]))
            out = out + np.moveaxis(x, -1, n_q + q)
        t = out
    return t.reshape(rho.shape)


def apply_channel(rho, channel):
    """rho -> sum_i K_i rho K_i^dagger on every qubit of a 2^r density matrix."""
    rho = np.asarray(rho)
    tr = np.trace(rho)
    if abs(tr - 1) > 1e-10:
        raise ValueError(f'density matrix trace {tr.real:.6g} is not 1')
    return _on_each_qubit(rho, channel.kraus())


def adjoint_channel(op, channel):
    """Heisenberg picture: O -> sum_i K_i^dagger O K_i on every qubit."""
    return _on_each_qubit(np.asarray(op), channel.kraus(), adjoint=True)


@dataclass
class ChannelState:
    psi: np.ndarray
    rho: np.ndarray
    energy: float
    sector: SectorBasis


def variational_channel_state(ints, channel, n=None):
    """
    Pure n-particle state whose image under the channel has the lowest
    energy, i.e. the lowest eigenvector of P_n Phi^dagger(H) P_n, together
    with that image on the full Fock space.
    """
    h, v = ints.spin_orbital()
    r = h.shape[0]
    n = ints.n_electrons if n is None else n
    full = SectorBasis.full(r)
    ham = hamiltonian_from_tensors(h, v, full, ints.e_core).toarray()
    heff = adjoint_channel(ham, channel)
    keep = [i for i, m in enumerate(full.masks) if bin(m).count('1') == n]
    sub = heff[np.ix_(keep, keep)]
    evals, vecs = np.linalg.eigh(0.5 * (sub + sub.conj().T))
    psi = np.zeros(full.dim, dtype=complex)
    # the lowest level can be degenerate (a triplet at long bonds); any member
    # is a valid minimizer and LAPACK's first vector is taken
    psi[keep] = _fix_sign(vecs[:, 0])
    rho = apply_channel(np.outer(psi, psi.conj()), channel)
    energy = float(np.real(np.trace(ham @ rho)))
    return ChannelState(psi, rho, energy, full)
