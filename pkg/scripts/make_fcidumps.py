"""Regenerate the FCIDUMP files bundled in src/rdmkit/data.

Requires pyscf (not a runtime dependency of rdmkit).  STO-3G, RHF molecular
orbitals, no frozen core.  Run from the repository root:

    python scripts/make_fcidumps.py
"""
import os

import numpy as np
from pyscf import gto, scf
from pyscf.tools import fcidump

OUT = os.path.join(os.path.dirname(__file__), '..', 'src', 'rdmkit', 'data')


def write(name, atoms):
    mol = gto.M(atom=atoms, basis='sto-3g', unit='Angstrom', verbose=0)
    mf = scf.RHF(mol)
    mf.conv_tol = 1e-12
    mf.kernel()
    path = os.path.join(OUT, name + '.fcidump')
    fcidump.from_scf(mf, path, tol=1e-15)
    print(f'{path}: E_rhf = {mf.e_tot:.10f}')


def h2(r):
    return [('H', (0, 0, 0)), ('H', (0, 0, r))]


def h4_chain(r):
    return [('H', (0, 0, k * r)) for k in range(4)]


def h4_ring(r):
    return [('H', (0, 0, 0)), ('H', (r, 0, 0)), ('H', (r, r, 0)), ('H', (0, r, 0))]


if __name__ == '__main__':
    write('h2_0.75', h2(0.75))
    for r in np.linspace(0.3, 3.0, 10):
        write(f'h2_{r:.2f}', h2(r))
    write('h4_chain_0.75', h4_chain(0.75))
    write('h4_ring_0.7414', h4_ring(0.7414))
