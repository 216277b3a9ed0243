"""Fermionic marginals, their mappings, observables and operator algebra."""
from .basis import BLOCKED, INTERLEAVED, SpinOrbitalBasis
from .cumulants import (CumulantSet, antisymmetrize_grade, contract_down,
                        cumulant_decompose, cumulant_reconstruct, wedge)
from .observables import (ComplexExpectationError, compute_energy, compute_number,
                          compute_s2, compute_sz, number_pair_correlation)
from .operators import FermionOperatorSum, QubitOperatorSum, jordan_wigner
from .positivity import PositivityReport, check_2positivity, min_eigenvalue
from .rdms import (RDMShapeError, antisymmetrize, contract_d2_to_d1, contract_g2_to_d1,
                   contract_q2_to_q1, four_to_matrix, hermitize, map_d1_to_q1,
                   map_d2_to_g2, map_d2_to_q2, map_g2_to_d2, map_q1_to_d1,
                   map_q2_to_d2, matrix_to_four, trace2, trace_distance)
from .spin import block_sizes, reassemble, same_spin_pairs, spin_blocks
