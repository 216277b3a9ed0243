"""Additive i.i.d. Gaussian corruption of 2-RDM elements."""
from dataclasses import dataclass
from typing import Optional

import numpy as np


@dataclass(frozen=True)
class GaussianNoiseModel:
    """Each element gets independent N(0, epsilon^2) noise."""
    epsilon: float
    seed: Optional[int] = None

    def __post_init__(self):
        if not self.epsilon >= 0:
            raise ValueError(f'epsilon must be non-negative, got {self.epsilon}')


def corrupt_gaussian(d2, model, rng=None):
    """
    Add noise to every element of ``d2``, symmetry partners included, so the
    result is in general neither Hermitian nor antisymmetric.

    :param rng: generator to draw from; defaults to one seeded by ``model.seed``
    """
    d2 = np.asarray(d2, dtype=float)
    if model.epsilon == 0:
        return d2.copy()
    rng = np.random.default_rng(model.seed) if rng is None else rng
    return d2 + model.epsilon * rng.standard_normal(d2.shape)
