"""One entry point for all four projection procedures."""
from dataclasses import dataclass, field

import numpy as np

from ..fermion.rdms import contract_d2_to_d1, four_to_matrix, matrix_to_four
from .config import ProjectionConfig
from .iterative import project_iterative_2pos
from .positive import psd_project, psd_project_fixed_trace
from .sdp_reconstruction import project_sdp


@dataclass
class ProjectionResult:
    d1: np.ndarray
    d2: np.ndarray
    method: str
    converged: bool = True
    diagnostics: object = field(default=None, repr=False)


def _d1(d2, n):
    return contract_d2_to_d1(d2, n) if n >= 2 else np.zeros(d2.shape[:2])


def project(d2_measured, basis, config=None):
    """
    Purify a measured 2-RDM with the method named in ``config``.

    The returned 1-RDM is the contraction of the projected 2-RDM, except for
    the SDP, which carries its own 1-RDM block.
    """
    cfg = config or ProjectionConfig()
    n = basis.n
    d2 = np.real(np.asarray(d2_measured)).reshape((basis.r,) * 4)
    if cfg.method == 'positive':
        out = matrix_to_four(psd_project(four_to_matrix(d2)))
        return ProjectionResult(_d1(out, n), out, cfg.method)
    if cfg.method == 'positive-fixed-trace':
        out = matrix_to_four(psd_project_fixed_trace(four_to_matrix(d2), n * (n - 1)))
        return ProjectionResult(_d1(out, n), out, cfg.method)
    if cfg.method == 'iterative-2pos':
        out, diag = project_iterative_2pos(d2, basis, cfg)
        return ProjectionResult(_d1(out, n), out, cfg.method, diag.converged, diag)
    d1, out, diag = project_sdp(d2, basis, cfg, return_d1=True)
    return ProjectionResult(d1, out, cfg.method, diag.converged, diag)
