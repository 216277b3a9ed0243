"""Gaussian-noise MSE study, channel energy curves and Haar concentration."""
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
import csv
import os

import numpy as np

from ..datasets import H2_GRID, h2_grid_path, system_path
from ..fermion.observables import compute_energy, compute_number, compute_s2, compute_sz
from ..fermion.rdms import contract_d2_to_d1, trace_distance
from ..oracle.fcidump import read_fcidump
from ..oracle.fock import SectorBasis
from ..oracle.hamiltonian import build_hamiltonian, ground_state, measure_rdms
from ..oracle.random_states import average_rdm_analytic, sample_haar_state
from ..projection.config import ProjectionConfig
from ..projection.dispatch import project
from .channels import KINDS, ChannelModel, variational_channel_state
from .gaussian import GaussianNoiseModel, corrupt_gaussian
from .reports import ExperimentReport, mse_decomposition

OBSERVABLES = ('energy', 'n', 'sz', 's2')
MSE_METHODS = ('measured', 'positive', 'positive-fixed-trace', 'iterative-2pos', 'sdp', 'sdp-spin')
WORKERS_ENV = 'RDMKIT_WORKERS'


def method_config(method, solver=None):
    """ProjectionConfig for a method label; ``sdp-spin`` fixes <n>, <Sz> and <S^2>."""
    kw = {} if solver is None else {'solver': solver}
    if method == 'sdp-spin':
        return ProjectionConfig.with_spin(method='sdp', **kw)
    return ProjectionConfig(method=method, **kw)


def default_workers():
    try:
        return max(1, int(os.environ.get(WORKERS_ENV, '1')))
    except ValueError:
        return 1


@dataclass
class GroundTruth:
    ints: object
    basis: object
    energy: float
    d1: np.ndarray
    d2: np.ndarray


def ground_truth(path):
    """FCI ground state of the (n_alpha, n_beta) sector named by an FCIDUMP header."""
    ints = read_fcidump(path)
    basis = ints.basis()
    sector = SectorBasis.spin_sector(basis, ints.n_alpha, ints.n_beta)
    energy, vec = ground_state(build_hamiltonian(ints, sector))
    d1, d2 = measure_rdms(vec, sector)
    return GroundTruth(ints, basis, energy, np.real(d1), np.real(d2))


def observables(ints, basis, d1, d2):
    h, v = ints.spin_orbital()
    return {'energy': compute_energy(h, v, d1, d2, ints.e_core),
            'n': compute_number(d1),
            'sz': compute_sz(d1, basis),
            's2': compute_s2(d1, d2, basis)}


def _sample_seed(seed, i_eps, i_sample):
    return int(np.random.SeedSequence([seed, i_eps, i_sample]).generate_state(1)[0])


def _one_sample(task):
    truth, eps, sample_seed, methods, solver = task
    noisy = corrupt_gaussian(truth.d2, GaussianNoiseModel(eps, sample_seed))
    n = truth.basis.n
    out = {}
    for method in methods:
        try:
            if method == 'measured':
                d1, d2, ok = contract_d2_to_d1(noisy, n), noisy, True
            else:
                res = project(noisy, truth.basis, method_config(method, solver))
                d1, d2, ok = res.d1, res.d2, res.converged
            vals = observables(truth.ints, truth.basis, d1, d2)
            vals['trace_distance'] = trace_distance(d2, truth.d2)
            vals['converged'] = ok
            out[method] = vals
        except (ValueError, ArithmeticError, np.linalg.LinAlgError) as exc:
            out[method] = {'error': f'{type(exc).__name__}: {exc}'}
    return out


def run_mse_experiment(system='h2', epsilons=(1e-4, 1e-3, 1e-2), methods=MSE_METHODS,
                       samples=100, seed=0, workers=None, solver=None):
    """
    Corrupt the exact 2-RDM ``samples`` times per noise level and estimate
    <H>, <n>, <Sz>, <S^2> and the trace distance to the truth for each method.
    Every method sees the same corrupted samples.

    :param system: bundled system key or FCIDUMP path
    :param workers: process count; defaults to the ``RDMKIT_WORKERS`` variable
    """
    truth = ground_truth(system_path(system))
    true_obs = observables(truth.ints, truth.basis, truth.d1, truth.d2)
    report = ExperimentReport(str(system), 'epsilon', truth=true_obs)
    workers = default_workers() if workers is None else workers
    for i_eps, eps in enumerate(epsilons):
        seeds = [_sample_seed(seed, i_eps, i) for i in range(samples)]
        report.seeds.append((eps, seeds))
        tasks = [(truth, eps, s, tuple(methods), solver) for s in seeds]
        if workers > 1:
            with ProcessPoolExecutor(workers) as pool:
                results = list(pool.map(_one_sample, tasks))
        else:
            results = [_one_sample(t) for t in tasks]
        for method in methods:
            per = {k: [] for k in OBSERVABLES + ('trace_distance',)}
            per['sample'] = []
            failed = 0
            for idx, res in enumerate(results):
                vals = res[method]
                if 'error' in vals:
                    report.failures.append((method, eps, idx, vals['error']))
                    failed += 1
                    continue
                if not vals['converged']:
                    report.failures.append((method, eps, idx, 'not converged'))
                for k in per:
                    if k != 'sample':
                        per[k].append(vals[k])
                per['sample'].append(idx)
            report.samples[(method, eps)] = per
            td = float(np.mean(per['trace_distance'])) if per['trace_distance'] else np.nan
            for obs in OBSERVABLES:
                mse, b2, var = mse_decomposition(per[obs], true_obs[obs])
                report.rows.append({'system': report.system, 'method': method,
                                    'parameter': 'epsilon', 'value': eps, 'observable': obs,
                                    'mse': mse, 'bias2': b2, 'variance': var,
                                    'trace_distance': td, 'samples': len(per[obs]),
                                    'failures': failed})
    return report


@dataclass
class ChannelCurveReport:
    bonds: tuple
    exact: np.ndarray
    channel_energy: dict
    projected_energy: dict
    constraints: dict
    converged: dict
    errors: dict = field(default_factory=dict)

    @staticmethod
    def max_jump(curve):
        """Largest |E(R_k+1) - E(R_k)| between neighbouring grid points."""
        return float(np.max(np.abs(np.diff(curve))))

    def jumps(self, kind):
        return (self.max_jump(self.channel_energy[kind]),
                self.max_jump(self.projected_energy[kind]))

    def deviation_jumps(self, kind):
        """Max adjacent jump of E - E_exact, which isolates kinks from the curve's slope."""
        return (self.max_jump(self.channel_energy[kind] - self.exact),
                self.max_jump(self.projected_energy[kind] - self.exact))

    def constraint_violation(self, kind):
        """Largest |<n> - n|, |<Sz>|, |<S^2>| of the projected curve."""
        return float(np.max(np.abs(self.constraints[kind])))

    def write_csv(self, path):
        with open(path, 'w', newline='') as fh:
            w = csv.writer(fh)
            w.writerow(['channel', 'bond', 'exact', 'channel_energy', 'projected_energy',
                        'n_error', 'sz', 's2', 'converged'])
            for kind in self.channel_energy:
                for i, bond in enumerate(self.bonds):
                    c = self.constraints[kind][i]
                    w.writerow([kind, bond, self.exact[i], self.channel_energy[kind][i],
                                self.projected_energy[kind][i], c[0], c[1], c[2],
                                self.converged[kind][i]])


def run_channel_curve(bonds=H2_GRID, channels=KINDS, config=None, elapsed_fraction=0.05,
                      t1_ratio=1.0, paths=None):
    """
    H2 energy along a bond grid: exact, under each channel (variational
    channel-state model), and after SDP projection of the channel 2-RDM.

    :param config: projection settings; default is the SDP with <n>, <Sz>, <S^2> fixed
    :param paths: FCIDUMP per bond; defaults to the bundled grid
    """
    cfg = config or ProjectionConfig.with_spin(method='sdp')
    paths = paths or [h2_grid_path(b) for b in bonds]
    exact = []
    chan = {k: [] for k in channels}
    proj = {k: [] for k in channels}
    cons = {k: [] for k in channels}
    conv = {k: [] for k in channels}
    errors = {}
    for bond, path in zip(bonds, paths):
        truth = ground_truth(path)
        exact.append(truth.energy)
        n = truth.basis.n
        for kind in channels:
            st = variational_channel_state(truth.ints, ChannelModel(kind, elapsed_fraction, t1_ratio))
            _, d2 = measure_rdms(st.rho, st.sector)
            chan[kind].append(st.energy)
            try:
                res = project(np.real(d2), truth.basis, cfg)
            except (ValueError, ArithmeticError, np.linalg.LinAlgError) as exc:
                errors[(kind, bond)] = str(exc)
                proj[kind].append(np.nan)
                cons[kind].append((np.nan,) * 3)
                conv[kind].append(False)
                continue
            vals = observables(truth.ints, truth.basis, res.d1, res.d2)
            proj[kind].append(vals['energy'])
            cons[kind].append((vals['n'] - n, vals['sz'] - cfg.sz_target, vals['s2'] - cfg.s2_target))
            conv[kind].append(res.converged)
    arr = {k: np.array(v) for k, v in chan.items()}
    return ChannelCurveReport(tuple(bonds), np.array(exact), arr,
                              {k: np.array(v) for k, v in proj.items()},
                              {k: np.array(v) for k, v in cons.items()}, conv, errors)


@dataclass
class ConcentrationReport:
    rows: list

    def row(self, m):
        return next(r for r in self.rows if r['modes'] == m)

    def write_csv(self, path):
        fields = list(self.rows[0])
        with open(path, 'w', newline='') as fh:
            w = csv.DictWriter(fh, fieldnames=fields)
            w.writeheader()
            w.writerows(self.rows)


def run_concentration_study(modes=(4, 6), n=None, samples=1000, seed=0):
    """
    Haar-random states on ``m`` modes (whole Fock space, or the ``n``-particle
    sector when ``n`` is given): empirical 1-RDM diagonal and 2-RDM
    (0, 1; 0, 1) element against their analytic averages.

    Statistics refer to the element d1[0, 0]; averaging over the diagonal
    would be exact in the n-particle sector, where the trace is fixed.
    ``spread`` is its standard deviation over the samples and shrinks as the
    Hilbert space grows.
    """
    rows = []
    for i_m, m in enumerate(modes):
        if n is not None and not 0 <= n <= m:
            raise ValueError(f'{n} particles do not fit in {m} modes')
        sector = SectorBasis.full(m) if n is None else SectorBasis.number_sector(m, n)
        rng = np.random.default_rng([seed, i_m])
        diag, pair = [], []
        for _ in range(samples):
            d1, d2 = measure_rdms(sample_haar_state(sector.dim, rng), sector)
            diag.append(np.real(np.diag(d1)))
            pair.append(np.real(d2[0, 1, 0, 1]))
        diag = np.array(diag)
        a1, a2 = average_rdm_analytic(m, n)
        mean_diag = float(diag[:, 0].mean())
        rows.append({'modes': m, 'particles': '' if n is None else n, 'dim': sector.dim,
                     'samples': samples, 'mean_diag': mean_diag,
                     'se_diag': float(diag[:, 0].std(ddof=1) / np.sqrt(samples)),
                     'analytic_diag': float(a1[0, 0]),
                     'spread': float(diag[:, 0].std(ddof=1)),
                     'mean_pair': float(np.mean(pair)),
                     'se_pair': float(np.std(pair, ddof=1) / np.sqrt(samples)),
                     'analytic_pair': float(a2[0, 1, 0, 1])})
    return ConcentrationReport(rows)
