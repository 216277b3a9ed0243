import itertools
import json

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from rdmkit.fermion import FermionOperatorSum, jordan_wigner
from rdmkit.oracle import SectorBasis, measure_rdms, operator_matrix, sample_haar_state
from rdmkit.planner import (CATEGORIES, TermListError, allocate_shots, column_of,
                            format_term_list, generate_constraints, hermitize, lambda_norm,
                            minimize_l1, n_columns, parse_term_list, plan_observable,
                            rdm_vector, sigma_from_state, unvectorize, vectorize, word_of,
                            write_plan_csv, write_summary_json)

from conftest import hamiltonian_op

PAULI = {'I': np.eye(2), 'X': np.array([[0, 1], [1, 0]]),
         'Y': np.array([[0, -1j], [1j, 0]]), 'Z': np.diag([1.0, -1.0])}


def pauli_coefficients(mat, n_qubits):
    """Coefficients Tr(P H) / 2^n for every Pauli string, qubit 0 leftmost."""
    out = {}
    for labels in itertools.product('IXYZ', repeat=n_qubits):
        p = PAULI[labels[0]]
        for l in labels[1:]:
            p = np.kron(p, PAULI[l])
        c = np.trace(p @ mat) / 2 ** n_qubits
        if abs(c) > 1e-12:
            out[labels] = c
    return out


# lambda norm

def test_lambda_of_two_terms():
    assert lambda_norm([3, -1]) == 4


def test_lambda_of_empty():
    assert lambda_norm([]) == 0


def test_lambda_excludes_identity():
    assert lambda_norm({(): 5.0, ((0, 'Z'),): -0.5}) == 0.5


def test_h2_pauli_lambda(h2):
    q = jordan_wigner(hamiltonian_op(h2)).real()
    lam = lambda_norm(q)
    # independent route: trace decomposition of the dense Fock-space matrix
    ref = pauli_coefficients(q.to_matrix(4), 4)
    assert lam == pytest.approx(sum(abs(c) for k, c in ref.items() if set(k) != {'I'}), abs=1e-12)
    assert len([t for t in q.terms if t]) == len([k for k in ref if set(k) != {'I'}]) == 14
    # frozen regression baseline
    assert lam == pytest.approx(1.872523978453096, abs=1e-12)


# shot allocation

def test_three_to_one_allocation():
    eps = 1e-2
    plan = allocate_shots([3.0, 1.0], eps, sigma=[1.0, 1.0])
    assert plan.shots[0] / plan.shots[1] == pytest.approx(3.0, rel=1e-15)
    assert plan.total_shots == pytest.approx((4 / eps) ** 2, rel=1e-15)
    assert plan.predicted_error() == pytest.approx(eps, rel=1e-12)


def test_single_term():
    plan = allocate_shots([1.0], 0.1)
    assert plan.shots[0] == pytest.approx(100.0)


def test_deterministic_term_gets_no_shots():
    plan = allocate_shots([2.0, 1.0], 0.1, sigma=[0.0, 1.0])
    assert plan.shots[0] == 0.0 and plan.shots[1] > 0


def test_epsilon_must_be_positive():
    with pytest.raises(ValueError):
        allocate_shots([1.0], 0.0)


@settings(max_examples=30, deadline=None)
@given(st.lists(st.floats(0.01, 5), min_size=2, max_size=6),
       st.lists(st.floats(0.05, 1), min_size=6, max_size=6),
       st.integers(0, 5), st.integers(0, 5))
def test_allocation_is_locally_optimal(w, sig, i, j):
    k = len(w)
    sig = sig[:k]
    plan = allocate_shots(w, 1e-2, sigma=sig)
    assert plan.total_shots <= lambda_norm(w) ** 2 / 1e-4 * (1 + 1e-12)
    i, j = i % k, j % k
    if i == j:
        return
    for frac in (0.05, -0.05):
        shots = plan.shots.copy()
        delta = frac * shots[i]
        shots[i] += delta
        shots[j] -= delta
        if shots[j] > 0:
            assert plan.predicted_error(shots) >= plan.epsilon * (1 - 1e-12)


def test_sigma_from_state():
    q = jordan_wigner(FermionOperatorSum({((0, 1), (0, 0)): 1.0}))
    zero = np.zeros(2)
    zero[0] = 1.0
    # |0> with qubit 0 empty is a Z eigenstate, so sigma = 0
    assert sigma_from_state(q, zero) == pytest.approx([0.0])


# vectorization

def test_column_layout():
    assert column_of(((2, 1), (3, 0)), 4) == 1 + 2 + 3 * 4
    assert column_of(((0, 1), (1, 1), (2, 0), (3, 0)), 4) == 1 + 16 + 0 + 4 + 2 * 16 + 3 * 64
    for col in range(n_columns(3)):
        assert column_of(word_of(col, 3), 3) == col


def test_vectorize_round_trip(h2):
    op = hamiltonian_op(h2)
    v = vectorize(op, 4)
    back = vectorize(unvectorize(v, 4), 4)
    assert np.array_equal(v, back)


def test_rdm_vector_gives_expectations(h2):
    v = vectorize(hamiltonian_op(h2), 4)
    assert v @ rdm_vector(h2.d1, h2.d2) == pytest.approx(h2.energy, abs=1e-10)


# constraints

def test_trace_row_on_oracle(h2):
    cons = generate_constraints(h2.basis).subset(['trace-2'])
    assert cons.K == 1
    x = rdm_vector(h2.d1, h2.d2)
    assert abs(cons.residuals(x)[0]) < 1e-12
    # the constant column carries -n(n-1)
    assert cons.C[0, 0] == -2.0


def test_hermiticity_rows_on_hermitian_rdm():
    rng = np.random.default_rng(0)
    a = rng.standard_normal((4, 4))
    b = rng.standard_normal((16, 16))
    d1, d2 = a + a.T, (b + b.T).reshape((4,) * 4)
    cons = generate_constraints(4, 2, categories=['hermiticity-1', 'hermiticity-2'])
    assert np.abs(cons.residuals(rdm_vector(d1, d2))).max() < 1e-12


@pytest.mark.parametrize('name', ['h2', 'h4_chain', 'h4_ring'])
def test_rows_annihilate_oracle_states(request, name):
    t = request.getfixturevalue(name)
    cons = generate_constraints(t.basis)
    assert set(cons.counts()) == set(CATEGORIES)
    assert np.abs(cons.residuals(rdm_vector(t.d1, t.d2))).max() <= 1e-10


def test_rows_detect_corruption(h2):
    cons = generate_constraints(h2.basis)
    rng = np.random.default_rng(2)
    d1 = h2.d1 + 1e-3 * rng.standard_normal(h2.d1.shape)
    d2 = h2.d2 + 1e-3 * rng.standard_normal(h2.d2.shape)
    assert np.all(np.abs(cons.residuals(rdm_vector(d1, d2))) > 0)


def test_constraints_need_two_particles():
    with pytest.raises(ValueError):
        generate_constraints(4, 1)


@pytest.mark.parametrize('n', [2, 3])
def test_rows_hold_on_random_real_states(n):
    sec = SectorBasis.number_sector(5, n)
    cons = generate_constraints(5, n)
    rng = np.random.default_rng(n)
    for _ in range(5):
        psi = rng.standard_normal(sec.dim)
        d1, d2 = measure_rdms(psi / np.linalg.norm(psi), sec)
        assert np.abs(cons.residuals(rdm_vector(d1, d2))).max() < 1e-12


# L1 minimization

def test_exact_cancellation():
    # identity column first, then the two terms of the example
    res = minimize_l1(np.array([0.0, 1.0, 1.0]), np.array([[0.0, 0.0, 1.0]]))
    assert res.beta == pytest.approx([1.0])
    assert res.Lambda == 2.0 and res.Lambda_tilde == pytest.approx(1.0)


def test_zero_constraints():
    v = np.array([0.5, 1.0, -2.0])
    res = minimize_l1(v, np.zeros((1, 3)))
    assert np.array_equal(res.beta, [0.0])
    assert res.Lambda_tilde == res.Lambda == 3.0


def test_l1_shape_mismatch():
    with pytest.raises(ValueError):
        minimize_l1(np.ones(3), np.ones((1, 4)))


@pytest.fixture(scope='module')
def chain_plan(h4_chain):
    return plan_observable(hamiltonian_op(h4_chain), h4_chain.basis)


def test_lambda_tilde_never_exceeds_lambda(chain_plan):
    assert chain_plan.Lambda_tilde <= chain_plan.Lambda


def test_more_rows_never_hurt(h2):
    op = hamiltonian_op(h2)
    full = plan_observable(op, h2.basis).Lambda_tilde
    part = plan_observable(op, h2.basis, categories=['trace-1', 'trace-2']).Lambda_tilde
    assert full <= part + 1e-9
    assert part <= plan_observable(op, h2.basis, constraints=False).Lambda_tilde + 1e-9


def test_h2_regression(h2):
    res = plan_observable(hamiltonian_op(h2), h2.basis)
    # frozen from the first run of the LP
    assert res.Lambda == pytest.approx(8.5643, abs=5e-4)
    assert res.Lambda_tilde == pytest.approx(2.6456, abs=5e-4)


def test_constraints_off_keeps_lambda(h2):
    res = plan_observable(hamiltonian_op(h2), h2.basis, constraints=False)
    assert res.Lambda_tilde == res.Lambda and res.n_constraints == 0


def test_expectation_invariance(h4_chain, chain_plan):
    sec = SectorBasis.number_sector(8, 4)
    rng = np.random.default_rng(7)
    for _ in range(20):
        psi = rng.standard_normal(sec.dim)
        x = rdm_vector(*measure_rdms(psi / np.linalg.norm(psi), sec))
        e, e_t = chain_plan.v_h @ x, chain_plan.rewritten.coefficients @ x
        assert abs(e - e_t) <= 1e-8 * max(1.0, abs(e))


def test_isospectral_in_fixed_sector(h4_chain, chain_plan):
    sec = SectorBasis.number_sector(8, 4)
    h_star = hermitize(chain_plan.rewritten.operator(tol=0.0))
    a = np.linalg.eigvalsh(operator_matrix(hamiltonian_op(h4_chain), sec).toarray())
    mat = operator_matrix(h_star, sec).toarray()
    assert np.abs(mat - mat.T.conj()).max() < 1e-12
    b = np.linalg.eigvalsh(mat)
    assert np.abs(a - b).max() <= 1e-8
    assert b[0] == pytest.approx(h4_chain.energy, abs=1e-8)


def test_pauli_lambdas(h2):
    res = plan_observable(hamiltonian_op(h2), h2.basis)
    pl, plt = res.pauli_lambdas()
    assert pl == pytest.approx(1.872523978453096, abs=1e-12)
    assert plt <= pl
    unplanned = plan_observable(hamiltonian_op(h2), h2.basis, constraints=False)
    assert unplanned.pauli_lambdas()[1] == pytest.approx(pl, abs=1e-12)


def test_hermitize_hermitian_input(h2):
    op = hamiltonian_op(h2).normal_ordered()
    assert np.allclose(vectorize(hermitize(op), 4), vectorize(op, 4), atol=1e-15)


def test_hermitize_removes_anti_hermitian_part():
    t = FermionOperatorSum({((0, 1), (1, 0)): 1.0})
    anti = t - t.dagger()
    assert not hermitize(anti).terms or max(abs(c) for c in hermitize(anti).terms.values()) < 1e-15


def test_hermitize_vector_needs_modes():
    with pytest.raises(ValueError):
        hermitize(np.zeros(21))


# text formats

def test_term_list_round_trip(h2):
    op = hamiltonian_op(h2)
    back = parse_term_list(format_term_list(op))
    assert np.allclose(vectorize(back, 4), vectorize(op, 4), atol=1e-15)


def test_term_list_errors():
    with pytest.raises(TermListError, match='line 2'):
        parse_term_list('1.0 0^ 0\nabc 0^\n')
    with pytest.raises(TermListError):
        parse_term_list('1.0 x^\n')


def test_plan_outputs(tmp_path, h2):
    res = plan_observable(hamiltonian_op(h2), h2.basis)
    write_plan_csv(tmp_path / 'plan.csv', res.rows())
    write_summary_json(tmp_path / 's.json', res.summary())
    lines = (tmp_path / 'plan.csv').read_text().splitlines()
    assert lines[0] == 'term,w,w_tilde,shots'
    summary = json.loads((tmp_path / 's.json').read_text())
    assert {'Lambda', 'Lambda_tilde', 'K', 'L', 'epsilon'} <= set(summary)
    assert summary['total_shots'] == pytest.approx((res.Lambda_tilde / 1.6e-3) ** 2, rel=1e-12)
