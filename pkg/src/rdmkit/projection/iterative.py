"""Alternating fixed-trace positive projections over the D, Q and G marginals."""
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from ..fermion.rdms import (contract_d2_to_d1, contract_g2_to_d1, contract_q2_to_q1,
                            four_to_matrix, map_d2_to_g2, map_d2_to_q2, map_g2_to_d2,
                            map_q1_to_d1, map_q2_to_d2, matrix_to_four)
from .blocks import pair_isometry
from .config import ProjectionConfig
from .positive import psd_project_fixed_trace


@dataclass
class IterativeDiagnostics:
    sweeps: int
    floor: float
    converged: bool
    floors: list = field(default_factory=list, repr=False)


def _antisymmetric_projection(mat, p, trace):
    # project within the antisymmetric pair space, where the trace is unchanged
    x = p.T @ (0.5 * (mat + mat.T)) @ p
    return p @ psd_project_fixed_trace(x, trace) @ p.T


def _d1_of(d2, n):
    return contract_d2_to_d1(d2, n) if n >= 2 else np.zeros(d2.shape[:2])


def marginal_floor(d2, n, eta):
    """Smallest eigenvalue among D, Q and G built from ``d2``."""
    d1 = _d1_of(d2, n)
    floors = []
    for m in (d2, map_d2_to_q2(d2, d1), map_d2_to_g2(d2, d1)):
        mat = four_to_matrix(m)
        floors.append(np.linalg.eigvalsh(0.5 * (mat + mat.T))[0])
    return float(min(floors))


def project_iterative_2pos(d2_measured, basis, config=None):
    """
    Sweep D -> Q -> G -> D, Hermitizing and projecting each marginal onto the
    PSD matrices of trace n(n-1), eta(eta-1) and n(eta+1).

    Between nodes the marginals are converted with the ladder-operator maps,
    taking the 1-RDM from the contraction of the current node.  Stops when
    all three minimum eigenvalues exceed ``-eig_tol`` or after ``max_sweeps``.
    Real symmetric inputs are assumed.

    :returns: (d2, :class:`IterativeDiagnostics`)
    """
    cfg = config or ProjectionConfig(method='iterative-2pos')
    r, n, eta = basis.r, basis.n, basis.eta
    d2 = np.real(np.asarray(d2_measured)).reshape((r,) * 4)
    pairs = pair_isometry(r, list(combinations(range(r), 2)))
    floors = []
    best = (np.inf, d2)
    for sweep in range(1, cfg.max_sweeps + 1):
        dmat = _antisymmetric_projection(four_to_matrix(d2), pairs, n * (n - 1))
        d2 = matrix_to_four(dmat)
        d1 = _d1_of(d2, n)
        q2 = map_d2_to_q2(d2, d1)
        qmat = _antisymmetric_projection(four_to_matrix(q2), pairs, eta * (eta - 1))
        q2 = matrix_to_four(qmat)
        d1 = map_q1_to_d1(contract_q2_to_q1(q2, eta)) if eta >= 2 else d1
        d2 = map_q2_to_d2(q2, d1)
        g2 = map_d2_to_g2(d2, _d1_of(d2, n))
        gmat = psd_project_fixed_trace(four_to_matrix(g2), n * (eta + 1))
        g2 = matrix_to_four(gmat)
        d2 = map_g2_to_d2(g2, contract_g2_to_d1(g2, eta))
        # the G-node output need not be antisymmetric; measure it as the next
        # D-node will see it
        dmat = four_to_matrix(d2)
        dtest = matrix_to_four(pairs @ (pairs.T @ (0.5 * (dmat + dmat.T)) @ pairs) @ pairs.T)
        floor = marginal_floor(dtest, n, eta)
        floors.append(floor)
        if -floor < best[0]:
            best = (-floor, dtest)
        if floor > -cfg.eig_tol:
            return dtest, IterativeDiagnostics(sweep, floor, True, floors)
    return best[1], IterativeDiagnostics(cfg.max_sweeps, -best[0], False, floors)
