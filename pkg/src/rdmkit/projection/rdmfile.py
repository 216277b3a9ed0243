"""
Plain-text container for 2-RDMs.

Layout::

    # optional comments
    r 4
    n 2
    ordering interleaved
    normalization n(n-1)
    <r^4 values, row-major over (p, q, r, s), whitespace separated>

``normalization`` records the trace convention, n(n-1) here.  Files with any
other normalization are rejected rather than rescaled silently.
"""
from pathlib import Path

import numpy as np

from ..fermion.basis import INTERLEAVED, SpinOrbitalBasis

NORMALIZATION = 'n(n-1)'
HEADER_KEYS = ('r', 'n', 'ordering', 'normalization')


class RDMFileError(ValueError):
    pass


def write_rdm(path, d2, basis, comment=None):
    d2 = np.real(np.asarray(d2))
    if d2.shape != (basis.r,) * 4:
        raise RDMFileError(f'2-RDM shape {d2.shape} does not match r = {basis.r}')
    lines = []
    if comment:
        lines += [f'# {c}' for c in str(comment).splitlines()]
    lines += [f'r {basis.r}', f'n {basis.n}', f'ordering {basis.ordering}',
              f'normalization {NORMALIZATION}']
    flat = d2.ravel()
    for start in range(0, flat.size, basis.r):
        lines.append(' '.join(f'{x:.17g}' for x in flat[start:start + basis.r]))
    Path(path).write_text('\n'.join(lines) + '\n')


def read_rdm(path):
    """:returns: (d2, :class:`SpinOrbitalBasis`)"""
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise RDMFileError(f'cannot read {path}: {exc.strerror}') from exc
    header, values = {}, []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split('#', 1)[0].strip()
        if not line:
            continue
        key = line.split()[0]
        if key in HEADER_KEYS:
            if values:
                raise RDMFileError(f'line {lineno}: header entry after data')
            header[key] = line.split(None, 1)[1].strip() if len(line.split()) > 1 else ''
            continue
        try:
            values.extend(float(x) for x in line.split())
        except ValueError as exc:
            raise RDMFileError(f'line {lineno}: {exc}') from exc
    missing = [k for k in HEADER_KEYS if k not in header]
    if missing:
        raise RDMFileError(f'missing header entries: {", ".join(missing)}')
    if header['normalization'] != NORMALIZATION:
        raise RDMFileError(f'unsupported normalization {header["normalization"]!r}')
    try:
        r, n = int(header['r']), int(header['n'])
    except ValueError as exc:
        raise RDMFileError(f'bad header value: {exc}') from exc
    if len(values) != r ** 4:
        raise RDMFileError(f'expected {r ** 4} elements for r = {r}, found {len(values)}')
    try:
        basis = SpinOrbitalBasis(r, n, header['ordering'] or INTERLEAVED)
    except ValueError as exc:
        raise RDMFileError(str(exc)) from exc
    return np.array(values).reshape((r,) * 4), basis
