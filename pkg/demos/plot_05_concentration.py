"""
Random states have boring marginals
===================================

Haar-random states on M modes give 1-RDMs that cluster around their
average, (1/2) I over the whole Fock space or (n/M) I in an n-particle
sector.  The spread shrinks as the Hilbert space grows.
"""
from rdmkit.noise import run_concentration_study

rep = run_concentration_study(modes=(2, 3, 4, 5, 6), samples=1000, seed=0)
print(' M   dim   mean d1[0,0]      spread')
for row in rep.rows:
    print(f'{row["modes"]:2d} {row["dim"]:5d}   {row["mean_diag"]:.4f} +- {row["se_diag"]:.4f}   '
          f'{row["spread"]:.4f}')

for m, n in ((4, 2), (6, 2), (6, 3)):
    row = run_concentration_study(modes=(m,), n=n, samples=1000, seed=0).row(m)
    print(f'M={m} n={n}: mean {row["mean_diag"]:.4f} +- {row["se_diag"]:.4f} '
          f'(n/M = {n / m:.4f}), spread {row["spread"]:.4f}')
