"""
``rdmkit`` command line.

    rdmkit oracle FCIDUMP              exact energy and 2-RDM
    rdmkit plan FCIDUMP|TERMS          constraint rewrite and shot plan
    rdmkit project RDM --method M      purify a 2-RDM file
    rdmkit experiment MANIFEST|NAME    noise experiments (mse-h2, channel-curve, concentration)

Exit status is 0 on success, 1 when a numerical method did not converge
(results are still written and flagged) and 2 for bad input.
"""
import argparse
from dataclasses import asdict, dataclass, field
from datetime import datetime, timezone
from importlib.resources import files
import json
from pathlib import Path
import sys

import numpy as np

from . import __version__
from .fermion.basis import SpinOrbitalBasis
from .fermion.observables import compute_s2, compute_sz
from .fermion.operators import FermionOperatorSum
from .fermion.positivity import check_2positivity
from .fermion.rdms import trace_distance
from .noise.experiments import (MSE_METHODS, WORKERS_ENV, ground_truth, observables, run_channel_curve,
                                run_concentration_study, run_mse_experiment)
from .noise.channels import KINDS
from .oracle.fcidump import FCIDumpError, read_fcidump
from .oracle.hamiltonian import ConvergenceError
from .planner.io import TermListError, read_term_list, write_plan_csv, write_summary_json
from .planner.l1 import LPFailure
from .planner.pipeline import plan_observable
from .projection.config import ProjectionConfig, SpinTargetError
from .projection.dispatch import project
from .projection.rdmfile import RDMFileError, read_rdm, write_rdm

EXIT_OK, EXIT_NOT_CONVERGED, EXIT_INPUT = 0, 1, 2
METHOD_CHOICES = ('positive', 'fixed-trace', 'iterative', 'sdp')
CHEMICAL_ACCURACY = 1.6e-3
BUNDLED_MANIFESTS = ('mse-h2', 'channel-curve', 'concentration')


class InputError(Exception):
    pass


def _now():
    return datetime.now(timezone.utc).isoformat(timespec='seconds')


@dataclass
class ExperimentManifest:
    """Provenance record written next to every command's outputs."""
    command: str
    inputs: list
    seeds: dict = field(default_factory=dict)
    config: dict = field(default_factory=dict)
    version: str = __version__
    started: str = field(default_factory=_now)
    finished: str = ''
    outputs: list = field(default_factory=list)
    status: str = 'ok'

    def write(self, out_dir):
        self.finished = _now()
        path = Path(out_dir) / f'{self.command}.manifest.json'
        path.write_text(json.dumps(asdict(self), indent=2, default=str) + '\n')
        return path

    @property
    def filename(self):
        return f'{self.command}.manifest.json'


def _out_dir(args):
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _write_json(path, data, manifest):
    data = dict(data, manifest=manifest.filename)
    write_summary_json(path, data)
    manifest.outputs.append(Path(path).name)


def _csv_with_manifest(writer, path, manifest):
    writer(path)
    text = Path(path).read_text()
    Path(path).write_text(f'# manifest: {manifest.filename}\n' + text)
    manifest.outputs.append(Path(path).name)


def _read_integrals(path):
    if not Path(path).is_file():
        raise InputError(f'no such file: {path}')
    try:
        return read_fcidump(path)
    except FCIDumpError as exc:
        raise InputError(f'{path}: {exc}') from exc


def _is_fcidump(path):
    try:
        with open(path) as fh:
            return fh.read(256).lstrip().upper().startswith('&FCI')
    except OSError as exc:
        raise InputError(f'cannot read {path}: {exc.strerror}') from exc


def cmd_oracle(args):
    ints = _read_integrals(args.fcidump)
    out = _out_dir(args)
    man = ExperimentManifest('oracle', [str(args.fcidump)])
    truth = ground_truth(args.fcidump)
    obs = observables(truth.ints, truth.basis, truth.d1, truth.d2)
    stem = Path(args.fcidump).stem
    rdm_path = out / f'{stem}.rdm'
    write_rdm(rdm_path, truth.d2, truth.basis, comment=f'manifest: {man.filename}')
    man.outputs.append(rdm_path.name)
    report = {'energy': truth.energy, 'n': obs['n'], 'sz': obs['sz'], 's2': obs['s2'],
              'n_alpha': ints.n_alpha, 'n_beta': ints.n_beta, 'modes': truth.basis.r,
              'rdm_energy': obs['energy']}
    _write_json(out / f'{stem}.oracle.json', report, man)
    man.write(out)
    print(f'E = {truth.energy:.12f} Ha  <S^2> = {obs["s2"]:.1e}  -> {rdm_path}')
    return EXIT_OK


def cmd_plan(args):
    src = args.source
    if not Path(src).is_file():
        raise InputError(f'no such file: {src}')
    constraints = args.constraints == 'on'
    if _is_fcidump(src):
        ints = _read_integrals(src)
        h, v = ints.spin_orbital()
        op = FermionOperatorSum.from_integrals(h, v, ints.e_core)
        basis = ints.basis()
    else:
        try:
            op = read_term_list(src)
        except TermListError as exc:
            raise InputError(f'{src}: {exc}') from exc
        if args.particles is None:
            raise InputError('a term list needs --particles')
        r = args.modes or op.n_modes
        basis = SpinOrbitalBasis(r, args.particles)
    if args.epsilon <= 0:
        raise InputError('--epsilon must be positive')
    out = _out_dir(args)
    man = ExperimentManifest('plan', [str(src)], config={'epsilon': args.epsilon,
                                                          'constraints': constraints})
    try:
        result = plan_observable(op, basis, args.epsilon, constraints)
    except LPFailure as exc:
        man.status = f'LP failure: {exc}'
        man.write(out)
        print(f'error: {exc}', file=sys.stderr)
        return EXIT_NOT_CONVERGED
    write_plan_csv(out / 'plan.csv', result.rows())
    man.outputs.append('plan.csv')
    _write_json(out / 'plan_summary.json', result.summary(), man)
    man.write(out)
    s = result.summary()
    print(f'Lambda = {s["Lambda"]:.6f}  Lambda~ = {s["Lambda_tilde"]:.6f}  '
          f'(ratio^2 = {s["ratio_sq"]:.4f})  shots = {s["total_shots"]:.4g} at eps = {args.epsilon:g}')
    return EXIT_OK


def cmd_project(args):
    try:
        d2, basis = read_rdm(args.rdm)
    except RDMFileError as exc:
        raise InputError(f'{args.rdm}: {exc}') from exc
    if args.fix_spin and args.method != 'sdp':
        raise InputError('--fix-spin needs --method sdp')
    cfg = (ProjectionConfig.with_spin(method=args.method) if args.fix_spin
           else ProjectionConfig(method=args.method))
    try:
        cfg.check_spin_targets(basis)
    except SpinTargetError as exc:
        raise InputError(str(exc)) from exc
    out = _out_dir(args)
    man = ExperimentManifest('project', [str(args.rdm)],
                             config={'method': cfg.method, 'fix_spin': args.fix_spin})
    res = project(d2, basis, cfg)
    pos = check_2positivity(res.d1, res.d2, basis, tol=1e-6)
    diag = {'method': cfg.method, 'converged': bool(res.converged),
            'trace_distance_to_input': trace_distance(res.d2, d2),
            'trace': float(np.einsum('pqpq->', res.d2)), 'n': float(np.trace(res.d1)),
            'min_eigenvalues': {k: float(v) for k, v in pos.min_eigenvalues.items()}}
    if basis.r % 2 == 0:
        diag['sz'] = compute_sz(res.d1, basis)
        diag['s2'] = compute_s2(res.d1, res.d2, basis)
    stem = Path(args.rdm).stem
    rdm_path = out / f'{stem}.{cfg.method}.rdm'
    write_rdm(rdm_path, res.d2, basis, comment=f'manifest: {man.filename}')
    man.outputs.append(rdm_path.name)
    _write_json(out / f'{stem}.{cfg.method}.json', diag, man)
    if not res.converged:
        man.status = 'not converged'
    man.write(out)
    print(f'{cfg.method}: converged={res.converged} '
          f'distance to input = {diag["trace_distance_to_input"]:.3e} -> {rdm_path}')
    return EXIT_OK if res.converged else EXIT_NOT_CONVERGED


def load_manifest(name_or_path):
    """Bundled manifest by name, or a JSON file path."""
    if name_or_path in BUNDLED_MANIFESTS:
        text = (files('rdmkit') / 'manifests' / f'{name_or_path}.json').read_text()
    else:
        path = Path(name_or_path)
        if not path.is_file():
            raise InputError(f'no manifest {name_or_path!r}; bundled: {", ".join(BUNDLED_MANIFESTS)}')
        text = path.read_text()
    try:
        conf = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f'{name_or_path}: {exc}') from exc
    if conf.get('experiment') not in ('mse', 'channel-curve', 'concentration'):
        raise InputError(f'{name_or_path}: unknown experiment {conf.get("experiment")!r}')
    return conf


def cmd_experiment(args):
    conf = load_manifest(args.manifest)
    if args.samples is not None:
        conf['samples'] = args.samples
    if args.seed is not None:
        conf['seed'] = args.seed
    if args.epsilon is not None:
        conf['epsilons'] = [args.epsilon]
    out = _out_dir(args)
    kind = conf['experiment']
    name = conf.get('name', kind)
    man = ExperimentManifest(f'experiment-{name}', [str(args.manifest)], config=conf,
                             seeds={'seed': conf.get('seed', 0)})
    status = EXIT_OK
    if kind == 'mse':
        rep = run_mse_experiment(conf.get('system', 'h2'), tuple(conf.get('epsilons', (1e-4, 1e-3, 1e-2))),
                                 tuple(conf.get('methods', MSE_METHODS)),
                                 conf.get('samples', 100), conf.get('seed', 0))
        _csv_with_manifest(rep.write_csv, out / f'{name}.csv', man)
        if rep.failures:
            man.status = f'{len(rep.failures)} sample failures'
            status = EXIT_NOT_CONVERGED
        print(f'{name}: {len(rep.rows)} rows, {len(rep.failures)} failures')
    elif kind == 'channel-curve':
        cfg = ProjectionConfig.with_spin(method='sdp') if conf.get('fix_spin', True) \
            else ProjectionConfig(method='sdp')
        bonds = tuple(conf['bonds']) if 'bonds' in conf else None
        kw = {'bonds': bonds} if bonds else {}
        rep = run_channel_curve(channels=tuple(conf.get('channels', KINDS)), config=cfg,
                                elapsed_fraction=conf.get('elapsed_fraction', 0.05),
                                t1_ratio=conf.get('t1_ratio', 1.0), **kw)
        _csv_with_manifest(rep.write_csv, out / f'{name}.csv', man)
        summary = {k: {'max_jump_channel': rep.jumps(k)[0], 'max_jump_projected': rep.jumps(k)[1],
                       'max_deviation_jump_channel': rep.deviation_jumps(k)[0],
                       'max_deviation_jump_projected': rep.deviation_jumps(k)[1],
                       'constraint_violation': rep.constraint_violation(k)}
                   for k in rep.channel_energy}
        _write_json(out / f'{name}.json', summary, man)
        if rep.errors or not all(all(v) for v in rep.converged.values()):
            man.status = 'some points failed or did not converge'
            status = EXIT_NOT_CONVERGED
        print(f'{name}: {len(rep.bonds)} geometries x {len(rep.channel_energy)} channels')
    else:
        rows = []
        for run in conf.get('runs', [{'modes': [4, 6]}]):
            rep = run_concentration_study(tuple(run['modes']), run.get('particles'),
                                          conf.get('samples', 1000), conf.get('seed', 0))
            rows.extend(rep.rows)
        rep.rows = rows
        _csv_with_manifest(rep.write_csv, out / f'{name}.csv', man)
        print(f'{name}: {len(rows)} rows')
    man.write(out)
    return status


def build_parser():
    p = argparse.ArgumentParser(prog='rdmkit', description=__doc__.split('\n\n')[0].strip(),
                                epilog=f'Experiment worker processes: set {WORKERS_ENV}.')
    p.add_argument('--version', action='version', version=f'rdmkit {__version__}')
    sub = p.add_subparsers(dest='command', required=True)

    def common(sp):
        sp.add_argument('--out-dir', default='.', help='output directory (default: .)')

    sp = sub.add_parser('oracle', help='exact ground state energy and 2-RDM')
    sp.add_argument('fcidump')
    common(sp)
    sp.set_defaults(func=cmd_oracle)

    sp = sub.add_parser('plan', help='shot allocation with constraint rewriting')
    sp.add_argument('source', help='FCIDUMP or term-list file')
    sp.add_argument('--epsilon', type=float, default=CHEMICAL_ACCURACY,
                    help='target standard error in Hartree (default 1.6e-3)')
    sp.add_argument('--constraints', choices=('on', 'off'), default='on')
    sp.add_argument('--particles', type=int, help='particle number for a term list')
    sp.add_argument('--modes', type=int, help='mode count for a term list (default: highest index + 1)')
    common(sp)
    sp.set_defaults(func=cmd_plan)

    sp = sub.add_parser('project', help='purify a 2-RDM file')
    sp.add_argument('rdm')
    sp.add_argument('--method', choices=METHOD_CHOICES, default='sdp')
    sp.add_argument('--fix-spin', action='store_true',
                    help='fix <n>, <Sz> = 0 and <S^2> = 0 (sdp only)')
    common(sp)
    sp.set_defaults(func=cmd_project)

    sp = sub.add_parser('experiment', help='run a manifest: ' + ', '.join(BUNDLED_MANIFESTS))
    sp.add_argument('manifest')
    sp.add_argument('--samples', type=int)
    sp.add_argument('--seed', type=int)
    sp.add_argument('--epsilon', type=float, help='single noise level (mse experiments)')
    common(sp)
    sp.set_defaults(func=cmd_experiment)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        print(f'rdmkit: error: {exc}', file=sys.stderr)
        return EXIT_INPUT
    except ConvergenceError as exc:
        print(f'rdmkit: not converged: {exc}', file=sys.stderr)
        return EXIT_NOT_CONVERGED


if __name__ == '__main__':
    sys.exit(main())
