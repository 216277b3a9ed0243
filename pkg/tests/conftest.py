import numpy as np
import pytest

from rdmkit.datasets import system_path
from rdmkit.fermion import FermionOperatorSum
from rdmkit.noise import ground_truth


@pytest.fixture(scope='session')
def h2():
    return ground_truth(system_path('h2'))


@pytest.fixture(scope='session')
def h4_chain():
    return ground_truth(system_path('h4-chain'))


@pytest.fixture(scope='session')
def h4_ring():
    return ground_truth(system_path('h4-ring'))


def hamiltonian_op(truth):
    h, v = truth.ints.spin_orbital()
    return FermionOperatorSum.from_integrals(h, v, truth.ints.e_core)


def random_symmetric(rng, n):
    a = rng.standard_normal((n, n))
    return 0.5 * (a + a.T)


ACCEPTANCE = {}


def record(key, title, passed, detail=''):
    """Log one acceptance line; printed live and again in the terminal summary."""
    line = f'criterion {key:<3} {"PASS" if passed else "FAIL"}  {title}'
    if detail:
        line += f'  [{detail}]'
    ACCEPTANCE[key] = line
    print(line)
    return passed


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section('acceptance criteria')
    for key in sorted(ACCEPTANCE, key=lambda k: (int(''.join(c for c in k if c.isdigit())), k)):
        terminalreporter.write_line(ACCEPTANCE[key])
