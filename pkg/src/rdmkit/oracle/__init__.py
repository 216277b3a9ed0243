"""Exact diagonalization in fixed-particle sectors and random-state sampling."""
from .fcidump import FCIDumpError, IntegralSet, read_fcidump, write_fcidump
from .fock import (SectorBasis, annihilation_words, apply_word, operator_matrix,
                   sector_dimension, word_images)
from .hamiltonian import (ConvergenceError, build_hamiltonian, ground_state,
                          hamiltonian_from_tensors, lanczos, measure_hole_rdms,
                          measure_rdm, measure_rdms)
from .random_states import average_rdm_analytic, sample_haar_state
