"""Purification of noisy two-particle marginals."""
from .config import METHODS, ProjectionConfig, SpinTargetError
from .iterative import IterativeDiagnostics, marginal_floor, project_iterative_2pos
from .positive import psd_project, psd_project_fixed_trace, water_fill
from .sdp_reconstruction import (SchurReconstruction, SDPDiagnostics, SDPReconstruction,
                                 build_sdp_reconstruction, project_sdp)
from .dispatch import ProjectionResult, project
from .rdmfile import RDMFileError, read_rdm, write_rdm
