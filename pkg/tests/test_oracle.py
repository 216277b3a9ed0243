from math import comb

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from rdmkit.datasets import H2_GRID, SYSTEMS, h2_grid_path, system_path
from rdmkit.fermion import (SpinOrbitalBasis, compute_energy, contract_d2_to_d1, trace2)
from rdmkit.oracle import (ConvergenceError, FCIDumpError, IntegralSet, SectorBasis,
                           average_rdm_analytic, build_hamiltonian, ground_state,
                           hamiltonian_from_tensors, lanczos, measure_rdms, read_fcidump,
                           sample_haar_state, sector_dimension, write_fcidump)
from rdmkit.planner import generate_constraints, rdm_vector


# FCIDUMP

def test_bundled_h2_header():
    ints = read_fcidump(system_path('h2'))
    assert (ints.norb, ints.n_electrons, ints.n_alpha, ints.n_beta) == (2, 2, 1, 1)


def test_bundled_h4_chain_header():
    ints = read_fcidump(system_path('h4-chain'))
    assert (ints.norb, ints.n_electrons) == (4, 4)


def test_eight_fold_symmetry_expanded():
    eri = read_fcidump(system_path('h4-ring')).eri
    for perm in ((1, 0, 2, 3), (0, 1, 3, 2), (2, 3, 0, 1)):
        assert np.array_equal(eri, eri.transpose(perm))


def test_round_trip(tmp_path):
    ints = read_fcidump(system_path('h4-chain'))
    path = tmp_path / 'copy.fcidump'
    write_fcidump(path, ints)
    back = read_fcidump(path)
    assert np.allclose(back.h, ints.h, atol=1e-14)
    assert np.allclose(back.eri, ints.eri, atol=1e-14)
    assert back.e_core == pytest.approx(ints.e_core)


def _corrupt(tmp_path, old, new):
    text = open(system_path('h2')).read()
    lines = text.splitlines()
    end = next(i for i, l in enumerate(lines) if '&END' in l.upper())
    lines[end + old] = new
    path = tmp_path / 'bad.fcidump'
    path.write_text('\n'.join(lines) + '\n')
    return path, end + old + 1


def test_corrupted_line_reports_line_number(tmp_path):
    path, lineno = _corrupt(tmp_path, 2, '0.5 1 x 1 1')
    with pytest.raises(FCIDumpError) as err:
        read_fcidump(path)
    assert err.value.lineno == lineno
    assert f'line {lineno}' in str(err.value)


def test_index_out_of_range(tmp_path):
    path, _ = _corrupt(tmp_path, 2, '0.5 3 1 1 1')
    with pytest.raises(FCIDumpError, match='out of range'):
        read_fcidump(path)


def test_symmetry_violation(tmp_path):
    ints = read_fcidump(system_path('h2'))
    path = tmp_path / 'sym.fcidump'
    write_fcidump(path, ints)
    with open(path, 'a') as f:
        f.write(f'{float(ints.eri[0, 1, 0, 1]) + 1e-3!r} 2 1 2 1\n')
    with pytest.raises(FCIDumpError, match='symmetry'):
        read_fcidump(path)


def test_missing_header(tmp_path):
    path = tmp_path / 'nohdr.fcidump'
    path.write_text('0.5 1 1 1 1\n')
    with pytest.raises(FCIDumpError):
        read_fcidump(path)


def test_spin_orbital_expansion_two_orbitals():
    # hand expansion: v[p,q,r,s] = (p r | q s) when spins of p,r and q,s match
    rng = np.random.default_rng(3)
    h = rng.standard_normal((2, 2))
    h = h + h.T
    eri = np.zeros((2,) * 4)
    vals = {(0, 0, 0, 0): 0.7, (1, 1, 1, 1): 0.6, (0, 0, 1, 1): 0.5, (0, 1, 0, 1): 0.2,
            (0, 0, 0, 1): 0.1, (0, 1, 1, 1): 0.05}
    for (i, j, k, l), x in vals.items():
        for idx in {(i, j, k, l), (j, i, k, l), (i, j, l, k), (j, i, l, k),
                    (k, l, i, j), (l, k, i, j), (k, l, j, i), (l, k, j, i)}:
            eri[idx] = x
    ints = IntegralSet(h, eri, 0.0, 2, 0, {})
    hs, v = ints.spin_orbital()
    # mode 2i is alpha, 2i+1 beta
    assert hs[0, 2] == h[0, 1] and hs[0, 1] == 0 and hs[1, 3] == h[0, 1]
    assert v[0, 1, 0, 1] == eri[0, 0, 0, 0]     # a0 b0 | a0 b0
    assert v[0, 3, 0, 3] == eri[0, 0, 1, 1]     # a0 b1 -> (00|11)
    assert v[0, 2, 2, 0] == eri[0, 1, 1, 0]     # exchange-like (01|10)
    assert v[0, 1, 1, 0] == 0.0                 # spin flip forbidden


# sector bases and Hamiltonians

@settings(max_examples=25, deadline=None)
@given(st.integers(1, 5), st.data())
def test_sector_dimension_by_enumeration(r_s, data):
    na = data.draw(st.integers(0, r_s))
    nb = data.draw(st.integers(0, r_s))
    sec = SectorBasis.spin_sector(SpinOrbitalBasis(2 * r_s, na + nb), na, nb)
    assert sec.dim == sector_dimension(r_s, na, nb) == comb(r_s, na) * comb(r_s, nb)
    assert list(sec.masks) == sorted(sec.masks)


def test_diagonal_one_body_hamiltonian():
    h = np.diag([1.0, 2.0, 3.0, 4.0])
    sec = SectorBasis.number_sector(4, 2)
    mat = hamiltonian_from_tensors(h, np.zeros((4,) * 4), sec).toarray()
    occ = [sum(h[k, k] for k in range(4) if m >> k & 1) for m in sec.masks]
    assert np.array_equal(mat, np.diag(occ))


def test_h2_sector_hamiltonian(h2):
    sec = SectorBasis.spin_sector(h2.basis, 1, 1)
    mat = build_hamiltonian(h2.ints, sec).toarray()
    assert mat.shape == (4, 4)
    assert np.abs(mat - mat.T).max() == 0.0
    assert np.linalg.eigvalsh(mat)[0] == pytest.approx(h2.energy, abs=1e-12)


def test_sector_matches_full_fock_block(h4_chain):
    full = SectorBasis.full(8)
    sec = SectorBasis.spin_sector(h4_chain.basis, 2, 2)
    big = build_hamiltonian(h4_chain.ints, full).toarray()
    idx = [full.index(m) for m in sec.masks]
    small = build_hamiltonian(h4_chain.ints, sec).toarray()
    assert np.abs(big[np.ix_(idx, idx)] - small).max() < 1e-13


@pytest.mark.parametrize('system, energy', [('h2', -1.137117067346), ('h4-chain', -2.145110647186),
                                            ('h4-ring', -1.630762081287)])
def test_fci_energies(system, energy):
    # regression values; the dense eigensolver is the oracle below
    from rdmkit.noise import ground_truth
    assert ground_truth(system_path(system)).energy == pytest.approx(energy, abs=1e-10)


# ground states

def test_one_by_one():
    e, v = ground_state(np.array([[2.5]]))
    assert e == 2.5 and v.tolist() == [1.0]


def test_identity_tie_break():
    e, v = ground_state(np.eye(3))
    assert e == pytest.approx(1.0)
    first = v[np.flatnonzero(np.abs(v) > 1e-12)[0]]
    assert first > 0


def test_sign_convention(h2):
    sec = SectorBasis.spin_sector(h2.basis, 1, 1)
    _, v = ground_state(build_hamiltonian(h2.ints, sec))
    assert v[np.flatnonzero(np.abs(v) > 1e-12)[0]] > 0


def test_lanczos_matches_dense(h4_chain):
    mat = build_hamiltonian(h4_chain.ints, SectorBasis.number_sector(8, 4))
    e_dense, _ = ground_state(mat, method='dense')
    e_lanc, v = ground_state(mat, method='lanczos')
    assert e_lanc == pytest.approx(e_dense, abs=1e-10)
    assert np.linalg.norm(mat @ v - e_lanc * v) <= 1e-9


def test_lanczos_random_matrix():
    rng = np.random.default_rng(4)
    a = rng.standard_normal((200, 200))
    a = a + a.T
    e, _ = lanczos(a)
    assert e == pytest.approx(np.linalg.eigvalsh(a)[0], abs=1e-9)


def test_nonconvergence_raises():
    mat = np.diag([0.0, 1.0])
    with pytest.raises(ConvergenceError):
        ground_state(mat, tol=-1.0)


# RDMs of exact states

def test_single_determinant_d1():
    sec = SectorBasis.full(4)
    d1, _ = measure_rdms(sec.basis_state(0b0011), sec)
    assert np.array_equal(np.real(d1), np.diag([1.0, 1.0, 0.0, 0.0]))


def test_h2_two_rdm_trace(h2):
    assert trace2(h2.d2) == pytest.approx(2.0, abs=1e-12)


def test_unnormalized_state_rejected():
    sec = SectorBasis.number_sector(4, 2)
    with pytest.raises(ValueError):
        measure_rdms(2 * sec.basis_state(sec.masks[0]), sec)


@pytest.mark.parametrize('name', ['h2', 'h4_chain', 'h4_ring'])
def test_oracle_closure(request, name):
    t = request.getfixturevalue(name)
    h, v = t.ints.spin_orbital()
    assert compute_energy(h, v, t.d1, t.d2, t.ints.e_core) == pytest.approx(t.energy, abs=1e-9)
    cons = generate_constraints(t.basis)
    assert np.abs(cons.residuals(rdm_vector(t.d1, t.d2))).max() <= 1e-10


def test_mixed_state_rdms_are_averages():
    sec = SectorBasis.number_sector(4, 2)
    a, b = sec.basis_state(sec.masks[0]), sec.basis_state(sec.masks[3])
    rho = 0.25 * np.outer(a, a) + 0.75 * np.outer(b, b)
    d1, d2 = measure_rdms(rho, sec)
    da, db = measure_rdms(a, sec), measure_rdms(b, sec)
    assert np.allclose(d1, 0.25 * da[0] + 0.75 * db[0])
    assert np.allclose(d2, 0.25 * da[1] + 0.75 * db[1])


# Haar sampling

def test_haar_dimension_one():
    v = sample_haar_state(1, seed=5)
    assert abs(abs(v[0]) - 1.0) < 1e-15


def test_haar_reproducible():
    assert np.array_equal(sample_haar_state(7, 11), sample_haar_state(7, 11))


def test_haar_mean_weight():
    rng = np.random.default_rng(0)
    w = np.array([np.abs(sample_haar_state(5, rng)) ** 2 for _ in range(4000)])
    se = w.std(axis=0, ddof=1) / np.sqrt(len(w))
    assert np.all(np.abs(w.mean(axis=0) - 0.2) < 5 * se)


def test_haar_unitary_invariance():
    # first moment of |<0|U psi>|^2 is unchanged by a fixed unitary U
    rng = np.random.default_rng(1)
    q, _ = np.linalg.qr(rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4)))
    samples = [sample_haar_state(4, rng) for _ in range(4000)]
    a = np.array([abs(s[0]) ** 2 for s in samples])
    b = np.array([abs((q @ s)[0]) ** 2 for s in samples])
    se = np.hypot(a.std(), b.std()) / np.sqrt(len(a))
    assert abs(a.mean() - b.mean()) < 5 * se


def test_haar_rejects_zero_dimension():
    with pytest.raises(ValueError):
        sample_haar_state(0)


def test_analytic_unrestricted():
    d1, d2 = average_rdm_analytic(4)
    assert np.array_equal(np.diag(d1), [0.5] * 4)
    # element of the halved 2-RDM
    assert d2[0, 1, 0, 1] / 2 == 0.125
    assert d2[0, 0, 0, 0] == 0.0


def test_analytic_restricted():
    d1, _ = average_rdm_analytic(6, 2)
    assert np.allclose(np.diag(d1), 1 / 3)


def test_analytic_matches_enumeration():
    # the Haar average of |psi><psi| is I/d, so the averaged RDMs are RDMs of the maximally mixed state
    for n in (None, 2):
        sec = SectorBasis.full(4) if n is None else SectorBasis.number_sector(4, n)
        d1, d2 = measure_rdms(np.eye(sec.dim) / sec.dim, sec)
        a1, a2 = average_rdm_analytic(4, n)
        assert np.allclose(d1, a1, atol=1e-14) and np.allclose(d2, a2, atol=1e-14)


def test_analytic_rejects_small_m():
    with pytest.raises(ValueError):
        average_rdm_analytic(1)


def test_bundled_grid_files_exist():
    assert len(H2_GRID) == 10
    for bond in H2_GRID:
        assert read_fcidump(h2_grid_path(bond)).norb == 2
    assert set(SYSTEMS) == {'h2', 'h4-chain', 'h4-ring'}
