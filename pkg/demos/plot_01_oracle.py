"""
Exact marginals of small molecules
==================================

Diagonalize H2 and the H4 chain in their spin sectors, read off the 1- and
2-RDMs and check the identities every physical 2-RDM obeys.
"""
import numpy as np

from rdmkit.datasets import system_path
from rdmkit.fermion import (check_2positivity, compute_energy, compute_s2, map_d2_to_g2,
                            map_d2_to_q2, trace2)
from rdmkit.oracle import SectorBasis, build_hamiltonian, ground_state, measure_rdms, read_fcidump

# Load integrals and build the (n_alpha, n_beta) sector Hamiltonian
ints = read_fcidump(system_path('h2'))
basis = ints.basis()
sector = SectorBasis.spin_sector(basis, ints.n_alpha, ints.n_beta)
energy, psi = ground_state(build_hamiltonian(ints, sector))
print(f'H2 0.75 A: {sector.dim} determinants, E = {energy:.10f} Ha')

# The energy is a linear functional of (d1, d2)
d1, d2 = measure_rdms(psi, sector)
h, v = ints.spin_orbital()
print('energy from the RDMs:', compute_energy(h, v, d1, d2, ints.e_core))
print(f'<S^2> = {compute_s2(d1, d2, basis):.1e}')

# Traces of the particle, hole and particle-hole marginals
for name in ('h2', 'h4-chain'):
    ints = read_fcidump(system_path(name))
    b = ints.basis()
    sec = SectorBasis.spin_sector(b, ints.n_alpha, ints.n_beta)
    _, psi = ground_state(build_hamiltonian(ints, sec))
    d1, d2 = measure_rdms(psi, sec)
    d1, d2 = np.real(d1), np.real(d2)
    n, eta = b.n, b.eta
    print(f'{name}: Tr D = {trace2(d2):.6f} (n(n-1) = {n * (n - 1)}), '
          f'Tr Q = {trace2(map_d2_to_q2(d2, d1)):.6f} (eta(eta-1) = {eta * (eta - 1)}), '
          f'Tr G = {trace2(map_d2_to_g2(d2, d1)):.6f} (n(eta+1) = {n * (eta + 1)})')
    rep = check_2positivity(d1, d2, b)
    print('   smallest eigenvalues:', {k: f'{x:.1e}' for k, x in rep.min_eigenvalues.items()})
