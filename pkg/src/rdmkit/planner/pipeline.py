"""Observable -> constraint rewrite -> shot allocation, in one call."""
from dataclasses import dataclass

import numpy as np

from ..fermion.operators import jordan_wigner
from .allocation import allocate_shots, lambda_norm
from .constraints import CATEGORIES, generate_constraints, unvectorize, vectorize, word_of
from .l1 import hermitize, minimize_l1


def word_label(word):
    return ' '.join(f'{m}^' if a else str(m) for m, a in word) or 'I'


@dataclass
class PlanResult:
    v_h: np.ndarray
    rewritten: object
    plan: object
    columns: np.ndarray
    n_constraints: int
    n_modes: int

    @property
    def Lambda(self):
        return self.rewritten.Lambda

    @property
    def Lambda_tilde(self):
        return self.rewritten.Lambda_tilde

    def pauli_lambdas(self):
        """
        Lambda and Lambda_tilde over Pauli coefficients: the original operator
        and the Hermitized rewrite H* after Jordan-Wigner, identity excluded.
        """
        h = jordan_wigner(unvectorize(self.v_h, self.n_modes, tol=0.0))
        h_star = jordan_wigner(hermitize(self.rewritten.operator(tol=0.0)))
        return lambda_norm(h), lambda_norm(h_star)

    def rows(self):
        """(term, w, w_tilde, shots) for every column touched by either operator."""
        shots = dict(zip(self.plan.labels, self.plan.shots))
        w_t = self.rewritten.coefficients
        for col in self.columns:
            word = word_of(col, self.n_modes)
            yield (word_label(word), self.v_h[col], w_t[col],
                   int(np.ceil(shots.get(word, 0.0) - 1e-9)))

    def summary(self):
        pl, plt = self.pauli_lambdas()
        return {'pauli_Lambda': pl, 'pauli_Lambda_tilde': plt,
                'n_modes': self.n_modes, 'constraints': self.n_constraints, 'K': self.n_constraints,
                'L': len(self.v_h),
                'Lambda': self.Lambda, 'Lambda_tilde': self.Lambda_tilde,
                'ratio_sq': self.rewritten.ratio ** 2, 'epsilon': self.plan.epsilon,
                'total_shots': self.plan.total_shots, 'lp_status': self.rewritten.status}


def plan_observable(op, basis, epsilon=1.6e-3, constraints=True, categories=CATEGORIES):
    """
    Rewrite ``op`` with RDM equality constraints to shrink its coefficient
    1-norm, then allocate shots over the rewritten terms (sigma = 1).

    :param constraints: ``False`` skips the rewrite, so Lambda_tilde = Lambda
    """
    r = basis.r
    v_h = np.real_if_close(vectorize(op, r))
    if np.iscomplexobj(v_h):
        raise ValueError('planning needs real operator coefficients')
    if constraints:
        system = generate_constraints(basis, categories=categories)
        rew = minimize_l1(v_h, system)
        k = system.K
    else:
        rew = minimize_l1(v_h, np.zeros((0, len(v_h))), n_modes=r)
        k = 0
    cols = np.flatnonzero((np.abs(v_h) > 1e-12) | (np.abs(rew.coefficients) > 1e-12))
    cols = cols[cols > 0]
    live = [c for c in cols if abs(rew.coefficients[c]) > 1e-12]
    weights = {word_of(c, r): rew.coefficients[c] for c in live}
    plan = allocate_shots(weights, epsilon)
    return PlanResult(v_h, rew, plan, cols, k, r)
