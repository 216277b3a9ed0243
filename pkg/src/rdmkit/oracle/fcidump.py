"""Reader and writer for FCIDUMP integral files."""
from dataclasses import dataclass, field
import re

import numpy as np

from ..fermion.basis import INTERLEAVED, SpinOrbitalBasis


class FCIDumpError(ValueError):
    def __init__(self, msg, lineno=None):
        self.lineno = lineno
        if lineno is not None:
            msg = f'line {lineno}: {msg}'
        super().__init__(msg)


@dataclass
class IntegralSet:
    """Spatial-orbital integrals in Hartree.

    ``eri`` is in chemist notation, eri[i, j, k, l] = (ij|kl).
    """
    h: np.ndarray
    eri: np.ndarray
    e_core: float = 0.0
    n_electrons: int = 0
    ms2: int = 0
    header: dict = field(default_factory=dict)

    @property
    def norb(self):
        return self.h.shape[0]

    @property
    def n_alpha(self):
        return (self.n_electrons + self.ms2) // 2

    @property
    def n_beta(self):
        return (self.n_electrons - self.ms2) // 2

    def basis(self, ordering=INTERLEAVED):
        return SpinOrbitalBasis.from_spatial(self.norb, self.n_electrons, ordering)

    def spin_orbital(self, ordering=INTERLEAVED):
        """
        Spin-orbital one-body h and physicist two-body v with
        H = e_core + sum h_pq a_p^ a_q + 1/2 sum v_pqrs a_p^ a_q^ a_s a_r,
        v_pqrs = (pr|qs) when the spins of (p, r) and of (q, s) match.
        """
        basis = self.basis(ordering)
        r_s, r = self.norb, basis.r
        h = np.zeros((r, r))
        v = np.zeros((r, r, r, r))
        phys = self.eri.transpose(0, 2, 1, 3)  # <pq|rs> = (pr|qs)
        for spins in ((basis.alpha_modes, basis.alpha_modes),
                      (basis.alpha_modes, basis.beta_modes),
                      (basis.beta_modes, basis.alpha_modes),
                      (basis.beta_modes, basis.beta_modes)):
            s1, s2 = spins
            v[np.ix_(s1, s2, s1, s2)] = phys
        for modes in (basis.alpha_modes, basis.beta_modes):
            h[np.ix_(modes, modes)] = self.h
        assert h.shape == (2 * r_s, 2 * r_s)
        return h, v


def _parse_header(text):
    body = re.sub(r'&FCI|&END', ' ', text, flags=re.IGNORECASE).replace('/', ' ')
    keys = list(re.finditer(r'([A-Za-z_]\w*)\s*=', body))
    values = {}
    for m, nxt in zip(keys, keys[1:] + [None]):
        raw = body[m.end():nxt.start() if nxt else len(body)]
        values[m.group(1).upper()] = [x for x in re.split(r'[,\s]+', raw) if x]
    return values


def read_fcidump(path, sym_tol=1e-8):
    """
    Parse an FCIDUMP file.

    Two-electron lines carry (ij|kl) with 1-based indices; ``value i j 0 0``
    is h_ij and ``value 0 0 0 0`` the core energy.  Lines with only ``i``
    non-zero (orbital energies) are ignored.  Returns an :class:`IntegralSet`.
    """
    with open(path) as f:
        lines = f.read().splitlines()
    header_lines = []
    start = None
    for lineno, line in enumerate(lines):
        header_lines.append(line)
        if re.search(r'&END|^\s*/\s*$', line, re.IGNORECASE):
            start = lineno + 1
            break
    if start is None or not re.match(r'\s*&FCI', header_lines[0], re.IGNORECASE):
        raise FCIDumpError('missing &FCI ... &END header', 1)
    header = _parse_header('\n'.join(header_lines))
    try:
        norb = int(header['NORB'][0])
        nelec = int(header['NELEC'][0])
    except (KeyError, IndexError, ValueError):
        raise FCIDumpError('header must define NORB and NELEC', 1) from None
    ms2 = int(header.get('MS2', ['0'])[0])
    if norb <= 0 or nelec < 0 or nelec > 2 * norb or (nelec + ms2) % 2:
        raise FCIDumpError(f'inconsistent header NORB={norb} NELEC={nelec} MS2={ms2}', 1)

    h = np.full((norb, norb), np.nan)
    eri = np.full((norb,) * 4, np.nan)
    e_core = 0.0

    def store(arr, idx_list, val, lineno):
        for idx in idx_list:
            old = arr[idx]
            if not np.isnan(old) and abs(old - val) > sym_tol:
                raise FCIDumpError(f'integral {tuple(i + 1 for i in idx)} given as '
                                   f'{float(old)!r} and {val!r} (symmetry violation)', lineno)
            arr[idx] = val

    for lineno, line in enumerate(lines[start:], start=start + 1):
        parts = line.split()
        if not parts:
            continue
        if len(parts) != 5:
            raise FCIDumpError(f'expected "value i j k l", got {line.strip()!r}', lineno)
        try:
            val = float(parts[0].replace('D', 'E').replace('d', 'e'))
            i, j, k, l = (int(x) for x in parts[1:])
        except ValueError:
            raise FCIDumpError(f'cannot parse {line.strip()!r}', lineno) from None
        if not all(0 <= x <= norb for x in (i, j, k, l)):
            raise FCIDumpError(f'index out of range 0..{norb} in {line.strip()!r}', lineno)
        if i and j and k and l:
            i, j, k, l = i - 1, j - 1, k - 1, l - 1
            perms = {(i, j, k, l), (j, i, k, l), (i, j, l, k), (j, i, l, k),
                     (k, l, i, j), (l, k, i, j), (k, l, j, i), (l, k, j, i)}
            store(eri, perms, val, lineno)
        elif i and j and not k and not l:
            store(h, {(i - 1, j - 1), (j - 1, i - 1)}, val, lineno)
        elif not (i or j or k or l):
            e_core = val
        elif i and not (j or k or l):
            continue
        else:
            raise FCIDumpError(f'unrecognized index pattern in {line.strip()!r}', lineno)

    h = np.nan_to_num(h, nan=0.0)
    eri = np.nan_to_num(eri, nan=0.0)
    return IntegralSet(h, eri, e_core, nelec, ms2, header)


def write_fcidump(path, ints, tol=1e-14):
    """Write unique integrals (8-fold symmetry) in FCIDUMP format."""
    n = ints.norb
    with open(path, 'w') as f:
        f.write(f' &FCI NORB={n:4d},NELEC={ints.n_electrons:2d},MS2={ints.ms2},\n')
        f.write('  ORBSYM=' + '1,' * n + '\n  ISYM=1,\n &END\n')
        for i in range(n):
            for j in range(i + 1):
                for k in range(n):
                    for l in range(k + 1):
                        if i * (i + 1) // 2 + j < k * (k + 1) // 2 + l:
                            continue
                        val = ints.eri[i, j, k, l]
                        if abs(val) > tol:
                            f.write(f'{val:.16e} {i + 1:4d} {j + 1:4d} {k + 1:4d} {l + 1:4d}\n')
        for i in range(n):
            for j in range(i + 1):
                if abs(ints.h[i, j]) > tol:
                    f.write(f'{ints.h[i, j]:.16e} {i + 1:4d} {j + 1:4d}    0    0\n')
        f.write(f'{ints.e_core:.16e}    0    0    0    0\n')
