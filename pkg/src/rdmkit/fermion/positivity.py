"""2-positivity check: {d1, q1, d2, q2, g2} must all be positive semidefinite."""
from dataclasses import dataclass, field

import numpy as np

from .rdms import (four_to_matrix, hermitize, map_d1_to_q1, map_d2_to_g2,
                   map_d2_to_q2)


@dataclass
class PositivityReport:
    min_eigenvalues: dict
    tol: float
    passed: bool = field(init=False)

    def __post_init__(self):
        self.passed = all(v >= -self.tol for v in self.min_eigenvalues.values())

    @property
    def floor(self):
        return min(self.min_eigenvalues.values())

    def __str__(self):
        vals = ', '.join(f'{k}={v:.3e}' for k, v in self.min_eigenvalues.items())
        return f"{'PASS' if self.passed else 'FAIL'} ({vals})"


def min_eigenvalue(matrix):
    matrix = np.asarray(matrix)
    if matrix.ndim == 4:
        matrix = four_to_matrix(matrix)
    return float(np.linalg.eigvalsh(hermitize(matrix))[0])


def check_2positivity(d1, d2, basis=None, tol=1e-10):
    """Minimum eigenvalues of the five 2-positive matrices, with pass/fail at ``-tol``."""
    q1 = map_d1_to_q1(d1)
    q2 = map_d2_to_q2(d2, d1)
    g2 = map_d2_to_g2(d2, d1)
    mins = {name: min_eigenvalue(m) for name, m in
            (('d1', d1), ('q1', q1), ('d2', d2), ('q2', q2), ('g2', g2))}
    return PositivityReport(mins, tol)
