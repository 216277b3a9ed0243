from dataclasses import dataclass, field
from typing import Optional

from ..sdp.solver import SolverConfig

METHODS = ('positive', 'positive-fixed-trace', 'iterative-2pos', 'sdp')
ALIASES = {'fixed-trace': 'positive-fixed-trace', 'iterative': 'iterative-2pos'}


class SpinTargetError(ValueError):
    pass


@dataclass
class ProjectionConfig:
    """
    Settings shared by the projection procedures.

    Spin targets default to a singlet (Sz = 0, S^2 = 0) when the matching
    ``fix_*`` flag is on; ``n_target`` defaults to the basis particle count.
    """
    method: str = 'sdp'
    eig_tol: float = 1e-7
    max_sweeps: int = 500
    spin_adapted: bool = True
    fix_n: bool = False
    fix_sz: bool = False
    fix_s2: bool = False
    n_target: Optional[float] = None
    sz_target: float = 0.0
    s2_target: float = 0.0
    solver: SolverConfig = field(default_factory=SolverConfig)

    def __post_init__(self):
        self.method = ALIASES.get(self.method, self.method)
        if self.method not in METHODS:
            raise ValueError(f'unknown projection method {self.method!r}; '
                             f'choose from {", ".join(METHODS)}')
        if self.eig_tol <= 0:
            raise ValueError('eig_tol must be positive')
        if self.max_sweeps < 1:
            raise ValueError('max_sweeps must be at least 1')

    @classmethod
    def with_spin(cls, **kw):
        kw.setdefault('fix_n', True)
        kw.setdefault('fix_sz', True)
        kw.setdefault('fix_s2', True)
        return cls(**kw)

    def check_spin_targets(self, basis):
        n = basis.n
        if self.fix_n and self.n_target is not None and abs(self.n_target - n) > 1e-12:
            raise SpinTargetError(f'<n> = {self.n_target} conflicts with the {n}-particle basis')
        sz = self.sz_target
        if self.fix_sz:
            if abs(2 * sz - round(2 * sz)) > 1e-12 or (round(2 * sz) - n) % 2:
                raise SpinTargetError(f'Sz = {sz} is unreachable with {n} particles')
            if abs(sz) > min(n, basis.r - n) / 2 + 1e-12:
                raise SpinTargetError(f'|Sz| = {abs(sz)} exceeds what {n} particles allow')
        if self.fix_s2:
            s = (-1 + (1 + 4 * self.s2_target) ** 0.5) / 2
            if abs(2 * s - round(2 * s)) > 1e-9 or (round(2 * s) - n) % 2:
                raise SpinTargetError(f'S^2 = {self.s2_target} is not s(s+1) for an '
                                      f'allowed s with {n} particles')
            if self.fix_sz and abs(sz) > s + 1e-9:
                raise SpinTargetError(f'Sz = {sz} is incompatible with S^2 = {self.s2_target}')
