"""Shot allocation and constraint-based 1-norm reduction of observables."""
from .allocation import MeasurementPlan, allocate_shots, lambda_norm, sigma_from_state
from .constraints import (CATEGORIES, ConstraintSystem, column_of, generate_constraints,
                          n_columns, rdm_vector, unvectorize, vectorize, word_of)
from .io import (TermListError, format_term_list, parse_term_list, pauli_label,
                 read_term_list, write_plan_csv, write_summary_json, write_term_list)
from .l1 import LPFailure, RewrittenHamiltonian, hermitize, l1_norm, minimize_l1
from .pipeline import PlanResult, plan_observable, word_label
