"""Bundled STO-3G integral files."""
from importlib.resources import files

H2_GRID = (0.3, 0.6, 0.9, 1.2, 1.5, 1.8, 2.1, 2.4, 2.7, 3.0)
SYSTEMS = {'h2': 'h2_0.75.fcidump', 'h4-chain': 'h4_chain_0.75.fcidump',
           'h4-ring': 'h4_ring_0.7414.fcidump'}


def data_path(name):
    """Path of a bundled file, e.g. ``data_path('h2_0.75.fcidump')``."""
    path = files('rdmkit') / 'data' / name
    if not path.is_file():
        raise FileNotFoundError(f'no bundled file {name!r}')
    return str(path)


def system_path(system):
    """Path for a system key (``h2``, ``h4-chain``, ``h4-ring``) or a file path."""
    return data_path(SYSTEMS[system]) if system in SYSTEMS else str(system)


def h2_grid_path(bond):
    return data_path(f'h2_{bond:.2f}.fcidump')
