"""Spin-orbital bookkeeping shared by every marginal routine."""
from dataclasses import dataclass

import numpy as np

INTERLEAVED = 'interleaved'
BLOCKED = 'blocked'


@dataclass(frozen=True)
class SpinOrbitalBasis:
    """Spin-orbital basis of ``r`` modes holding ``n`` fermions.

    ``interleaved`` ordering puts alpha on even modes and beta on odd modes;
    ``blocked`` ordering puts all alpha modes first.
    """
    r: int
    n: int
    ordering: str = INTERLEAVED

    def __post_init__(self):
        if self.r < 0 or self.n < 0:
            raise ValueError('mode and particle counts must be non-negative')
        if self.n > self.r:
            raise ValueError(f'{self.n} particles do not fit in {self.r} modes')
        if self.ordering not in (INTERLEAVED, BLOCKED):
            raise ValueError(f'unknown ordering {self.ordering!r}')

    @classmethod
    def from_spatial(cls, r_s, n, ordering=INTERLEAVED):
        return cls(2 * r_s, n, ordering)

    @property
    def eta(self):
        """Number of holes."""
        return self.r - self.n

    @property
    def r_s(self):
        self.require_spin()
        return self.r // 2

    def require_spin(self):
        if self.r % 2:
            raise ValueError(f'an odd mode count ({self.r}) carries no spin labels')

    def alpha(self, i):
        """Spin-orbital index of spatial orbital ``i`` with alpha spin."""
        return 2 * i if self.ordering == INTERLEAVED else i

    def beta(self, i):
        return 2 * i + 1 if self.ordering == INTERLEAVED else self.r_s + i

    @property
    def alpha_modes(self):
        return np.array([self.alpha(i) for i in range(self.r_s)], dtype=int)

    @property
    def beta_modes(self):
        return np.array([self.beta(i) for i in range(self.r_s)], dtype=int)

    @property
    def spin_signs(self):
        """+1 for alpha modes, -1 for beta modes (twice the Sz eigenvalue)."""
        s = np.empty(self.r)
        s[self.alpha_modes] = 1.0
        s[self.beta_modes] = -1.0
        return s
