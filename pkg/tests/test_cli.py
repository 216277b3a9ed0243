import json
import subprocess
import sys

import numpy as np
import pytest

from rdmkit.cli import ExperimentManifest, load_manifest, main, InputError
from rdmkit.datasets import system_path
from rdmkit.fermion import SpinOrbitalBasis
from rdmkit.noise import GaussianNoiseModel, corrupt_gaussian
from rdmkit.projection import read_rdm, write_rdm


def run(*argv):
    return main([str(a) for a in argv])


def test_oracle_h2(tmp_path, capsys):
    assert run('oracle', system_path('h2'), '--out-dir', tmp_path) == 0
    assert 'E = -1.137117067346' in capsys.readouterr().out
    report = json.loads((tmp_path / 'h2_0.75.oracle.json').read_text())
    assert report['energy'] == pytest.approx(-1.137117067346, abs=1e-11)
    assert report['manifest'] == 'oracle.manifest.json'
    man = json.loads((tmp_path / 'oracle.manifest.json').read_text())
    assert set(man['outputs']) == {'h2_0.75.rdm', 'h2_0.75.oracle.json'}
    assert '# manifest: oracle.manifest.json' in (tmp_path / 'h2_0.75.rdm').read_text()


def test_oracle_missing_file(tmp_path, capsys):
    assert run('oracle', tmp_path / 'nope.fcidump', '--out-dir', tmp_path) == 2
    assert 'no such file' in capsys.readouterr().err


def test_oracle_malformed_file(tmp_path, capsys):
    bad = tmp_path / 'bad.fcidump'
    bad.write_text(' &FCI NORB=2,NELEC=2,MS2=0,\n &END\n0.5 1 1 1\n')
    assert run('oracle', bad, '--out-dir', tmp_path) == 2
    assert 'line 3' in capsys.readouterr().err


def test_plan_with_and_without_constraints(tmp_path):
    assert run('plan', system_path('h2'), '--out-dir', tmp_path / 'on') == 0
    on = json.loads((tmp_path / 'on' / 'plan_summary.json').read_text())
    assert on['Lambda_tilde'] <= on['Lambda'] and on['epsilon'] == 1.6e-3
    assert run('plan', system_path('h2'), '--constraints', 'off', '--out-dir', tmp_path / 'off') == 0
    off = json.loads((tmp_path / 'off' / 'plan_summary.json').read_text())
    assert off['Lambda_tilde'] == off['Lambda']
    header = (tmp_path / 'on' / 'plan.csv').read_text().splitlines()[0]
    assert header == 'term,w,w_tilde,shots'


def test_plan_term_list(tmp_path):
    terms = tmp_path / 'h.terms'
    terms.write_text('0.5\n1.0 0^ 0\n1.0 1^ 1\n-0.25 0^ 1^ 1 0\n')
    assert run('plan', terms, '--particles', '2', '--modes', '4', '--epsilon', '0.01',
               '--out-dir', tmp_path) == 0
    s = json.loads((tmp_path / 'plan_summary.json').read_text())
    assert s['n_modes'] == 4 and s['epsilon'] == 0.01
    assert run('plan', terms, '--out-dir', tmp_path) == 2


def test_plan_bad_epsilon(tmp_path):
    assert run('plan', system_path('h2'), '--epsilon', '0', '--out-dir', tmp_path) == 2


@pytest.fixture
def rdm_files(tmp_path, h2):
    clean = tmp_path / 'clean.rdm'
    noisy = tmp_path / 'noisy.rdm'
    write_rdm(clean, h2.d2, h2.basis)
    write_rdm(noisy, corrupt_gaussian(h2.d2, GaussianNoiseModel(1e-2, 0)), h2.basis)
    return clean, noisy


@pytest.mark.parametrize('method', ['positive', 'fixed-trace', 'iterative', 'sdp'])
def test_project_oracle_is_near_identity(tmp_path, rdm_files, method):
    assert run('project', rdm_files[0], '--method', method, '--out-dir', tmp_path) == 0
    full = {'fixed-trace': 'positive-fixed-trace', 'iterative': 'iterative-2pos'}.get(method, method)
    out, _ = read_rdm(tmp_path / f'clean.{full}.rdm')
    ref, _ = read_rdm(rdm_files[0])
    assert np.abs(out - ref).max() <= 1e-6


def test_project_fix_spin(tmp_path, rdm_files):
    assert run('project', rdm_files[1], '--fix-spin', '--out-dir', tmp_path) == 0
    diag = json.loads((tmp_path / 'noisy.sdp.json').read_text())
    assert diag['converged']
    assert abs(diag['s2']) <= 1e-6 and abs(diag['sz']) <= 1e-6 and abs(diag['n'] - 2) <= 1e-6
    assert min(diag['min_eigenvalues'].values()) >= -1e-6


def test_project_bad_method(tmp_path, rdm_files):
    with pytest.raises(SystemExit) as exc:
        run('project', rdm_files[0], '--method', 'magic')
    assert exc.value.code == 2


def test_fix_spin_needs_sdp(tmp_path, rdm_files):
    assert run('project', rdm_files[0], '--method', 'positive', '--fix-spin',
               '--out-dir', tmp_path) == 2


def test_fix_spin_odd_particles(tmp_path):
    path = tmp_path / 'odd.rdm'
    write_rdm(path, np.zeros((4,) * 4), SpinOrbitalBasis(4, 3))
    assert run('project', path, '--fix-spin', '--out-dir', tmp_path) == 2


def test_project_unreadable_rdm(tmp_path):
    path = tmp_path / 'x.rdm'
    path.write_text('r 2\n')
    assert run('project', path, '--out-dir', tmp_path) == 2


def test_experiment_concentration(tmp_path):
    assert run('experiment', 'concentration', '--samples', '20', '--out-dir', tmp_path) == 0
    lines = (tmp_path / 'concentration.csv').read_text().splitlines()
    assert lines[0] == '# manifest: experiment-concentration.manifest.json'
    assert len(lines) == 2 + 4
    man = json.loads((tmp_path / 'experiment-concentration.manifest.json').read_text())
    assert man['config']['samples'] == 20 and man['seeds'] == {'seed': 0}


def test_experiment_mse_is_deterministic(tmp_path):
    for d in ('a', 'b'):
        assert run('experiment', 'mse-h2', '--samples', '3', '--epsilon', '1e-2',
                   '--out-dir', tmp_path / d) == 0
    assert (tmp_path / 'a' / 'mse-h2.csv').read_text() == (tmp_path / 'b' / 'mse-h2.csv').read_text()


def test_experiment_channel_manifest(tmp_path):
    conf = {'experiment': 'channel-curve', 'name': 'short', 'bonds': [0.75, 1.5],
            'channels': ['dephasing']}
    path = tmp_path / 'short.json'
    path.write_text(json.dumps(conf))
    assert run('experiment', path, '--out-dir', tmp_path) == 0
    summary = json.loads((tmp_path / 'short.json').read_text())
    assert summary['dephasing']['constraint_violation'] <= 1e-6


def test_unknown_manifest(tmp_path):
    assert run('experiment', 'nothing', '--out-dir', tmp_path) == 2
    bad = tmp_path / 'bad.json'
    bad.write_text('{"experiment": "fusion"}')
    assert run('experiment', bad, '--out-dir', tmp_path) == 2


def test_bundled_manifests_load():
    for name in ('mse-h2', 'channel-curve', 'concentration'):
        assert 'experiment' in load_manifest(name)


def test_manifest_write(tmp_path):
    man = ExperimentManifest('demo', ['in.txt'], seeds={'seed': 1})
    path = man.write(tmp_path)
    data = json.loads(path.read_text())
    assert data['command'] == 'demo' and data['finished']


def test_console_entry_point(tmp_path):
    out = subprocess.run([sys.executable, '-m', 'rdmkit.cli', 'oracle', system_path('h2'),
                          '--out-dir', str(tmp_path)], capture_output=True, text=True)
    assert out.returncode == 0 and 'E = ' in out.stdout
    out = subprocess.run([sys.executable, '-m', 'rdmkit.cli', '--help'], capture_output=True, text=True)
    assert out.returncode == 0 and 'experiment' in out.stdout
