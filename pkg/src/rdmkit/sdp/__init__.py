"""Block-diagonal SDPs and the boundary-point method."""
from .problem import SDPProblem, dump_problem, load_problem, symmetric_problem
from .solver import (FactorHandle, SDPSolution, SingularConstraintsWarning, SolverConfig,
                     factor_constraints, solve, split_projection)
