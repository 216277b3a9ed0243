"""
Least-squares reconstruction of a 2-RDM over the 2-positive set as an SDP.

Variables are the blocks of d1, q1, d2, q2, g2 and, per d2 block, a Schur
matrix M = [[I, E], [E^T, F]] with E = d2 - d2_measured.  M >= 0 forces
F >= E^T E, so minimizing Tr F minimizes ||d2 - d2_measured||_F^2.  The
linear maps tie q1, q2 and g2 to (d1, d2), d1 to the contraction of d2, and
fix Tr d2 = n(n - 1).  Optional rows fix <Sz> and <S^2>; <n> is implied by
the trace and contraction rows and is checked rather than imposed.

A singlet target (S^2 = 0) leaves no interior point: S+ psi, S- psi and
Sz psi all vanish, so sum_i e(i_b, i_a), sum_i e(i_a, i_b) and
sum_p s_p e(p, p) lie in the kernel of the particle-hole matrix.  The G blocks
are then restricted to the complement of these vectors, and G w = 0 enters as
rows (facial reduction); the S^2 and Sz rows they imply are dropped.
"""
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg as sla
import scipy.sparse as sp

from ..fermion.observables import compute_s2, compute_sz
from ..fermion.rdms import (contract_d2_to_d1, four_to_matrix, map_d1_to_q1, map_d2_to_g2,
                            map_d2_to_q2, matrix_to_four, trace2)
from ..sdp.problem import symmetric_problem
from ..sdp.solver import solve
from .blocks import Layout, one_body_layout, pair_layout, particle_hole_layout
from .config import ProjectionConfig

MARGINALS = ('d1', 'q1', 'd2', 'q2', 'g2')


@dataclass
class SchurReconstruction:
    E: list
    F: list
    M: list

    @property
    def error_norm_sq(self):
        return float(sum(np.sum(e ** 2) for e in self.E))

    @property
    def trace_f(self):
        return float(sum(np.trace(f) for f in self.F))


@dataclass
class SDPReconstruction:
    """An :class:`SDPProblem` together with the bookkeeping to read RDMs back."""
    problem: object
    basis: object
    layouts: dict
    measured_blocks: list
    var_blocks: list
    row_counts: dict
    config: ProjectionConfig

    def block_slices(self):
        return {key: i for i, key in enumerate(self.var_blocks)}

    def marginal(self, X, name):
        idx = self.block_slices()
        lay = self.layouts[name]
        blocks = [X[idx[(name, b)]] for b in range(len(lay.isometries))]
        full = lay.expand(blocks)
        return full if lay.full_dim == self.basis.r else matrix_to_four(full)

    def schur(self, X):
        idx = self.block_slices()
        E, F, M = [], [], []
        for b, meas in enumerate(self.measured_blocks):
            m = X[idx[('M', b)]]
            d = meas.shape[0]
            M.append(m)
            E.append(m[:d, d:])
            F.append(m[d:, d:])
        return SchurReconstruction(E, F, M)


class _RowBuilder:
    def __init__(self, offsets, dims):
        self.offsets, self.dims = offsets, dims
        self.rows, self.cols, self.vals, self.b = [], [], [], []
        self.counts = {}

    def var(self, key, i, j):
        return self.offsets[key] + i * self.dims[key] + j

    def new_row(self, entries, rhs, label):
        k = len(self.b)
        for col, val in entries:
            self.rows.append(k)
            self.cols.append(col)
            self.vals.append(val)
        self.b.append(rhs)
        self.counts[label] = self.counts.get(label, 0) + 1

    def matrix(self, n_vars):
        return sp.csr_matrix((self.vals, (self.rows, self.cols)), shape=(len(self.b), n_vars))


def _unit_inputs(lay):
    """(block, a, c, full matrix) for every entry of every block of a layout."""
    for bi, p in enumerate(lay.isometries):
        d = p.shape[1]
        for a in range(d):
            for c in range(d):
                yield bi, a, c, np.outer(p[:, a], p[:, c])


def _as_input(full, r):
    return full if full.shape[0] == r else matrix_to_four(full)


def _as_output(x):
    return x if x.ndim == 2 else four_to_matrix(x)


def _affine_family(builder, target, lay_t, sources, fn, layouts, r, label):
    """
    Rows  x_target - compress(fn(sources)) = compress(fn(0))  on upper triangles.

    ``fn`` receives one full input per source marginal.
    """
    zeros = {s: np.zeros((layouts[s].full_dim,) * 2) for s in sources}
    const = _as_output(fn(**{s: _as_input(z, r) for s, z in zeros.items()}))
    const_c = lay_t.compress(const)
    row_entries = {}
    for tb, blk in enumerate(const_c):
        d = blk.shape[0]
        for i in range(d):
            for j in range(i, d):
                row_entries[(tb, i, j)] = [(builder.var((target, tb), i, j), 1.0)]
    for s in sources:
        for sb, a, c, unit in _unit_inputs(layouts[s]):
            args = {k: _as_input(z, r) for k, z in zeros.items()}
            args[s] = _as_input(unit, r)
            out = lay_t.compress(_as_output(fn(**args)) - const)
            for tb, blk in enumerate(out):
                ii, jj = np.nonzero(np.abs(np.triu(blk)) > 1e-14)
                for i, j in zip(ii, jj):
                    row_entries[(tb, i, j)].append((builder.var((s, sb), a, c), -blk[i, j]))
    for (tb, i, j), entries in row_entries.items():
        builder.new_row(entries, const_c[tb][i, j], label)


def _scalar_rows(builder, funcs, lay, r, offsets, dims):
    """
    Rows f(d2) = target for vector-valued affine functionals of d2, keeping a
    linearly independent subset; inconsistent dependent rows raise.
    """
    dense, rhs, labels = [], [], []
    zero = np.zeros((r,) * 4)
    units = list(_unit_inputs(lay))
    cols = [builder.var(('d2', sb), a, c) for sb, a, c, _ in units]
    where = {(sb, a, c): k for k, (sb, a, c, _) in enumerate(units)}
    swap = [where[(sb, c, a)] for sb, a, c, _ in units]
    for fn, targets, label in funcs:
        const = fn(zero)
        jac = np.array([fn(matrix_to_four(u)) - const for _, _, _, u in units]).T
        # rows only ever see symmetric blocks
        jac = 0.5 * (jac + jac[:, swap])
        dense.append(jac)
        rhs.append(np.asarray(targets, dtype=float) - const)
        labels += [label] * len(const)
    dense = np.vstack(dense)
    rhs = np.concatenate(rhs)
    live = np.abs(dense).max(axis=1) > 1e-12
    if np.any(np.abs(rhs[~live]) > 1e-9):
        raise ValueError('a constraint target is unreachable (row vanishes identically)')
    idx = np.flatnonzero(live)
    keep = idx[_independent(dense[idx])]
    aug = np.column_stack([dense[idx], rhs[idx]])
    if np.linalg.matrix_rank(aug, tol=1e-8) != len(keep):
        raise ValueError('spin and trace targets are mutually inconsistent')
    for k in keep:
        nz = np.flatnonzero(np.abs(dense[k]) > 1e-14)
        builder.new_row([(cols[j], dense[k, j]) for j in nz], rhs[k], labels[k])


def _singlet_kernel(basis):
    """Full-space vectors that annihilate the particle-hole matrix of a singlet."""
    r = basis.r
    raising = np.zeros(r * r)
    lowering = np.zeros(r * r)
    for a, b in zip(basis.alpha_modes, basis.beta_modes):
        raising[b * r + a] = 1.0
        lowering[a * r + b] = 1.0
    sz = np.zeros(r * r)
    for p, s in enumerate(basis.spin_signs):
        sz[p * r + p] = s
    return [w / np.linalg.norm(w) for w in (raising, lowering, sz)]


def _reduce_layout(lay, kernel):
    """Restrict every block to the orthogonal complement of the kernel vectors."""
    isos = []
    for p in lay.isometries:
        k = np.array([p.T @ w for w in kernel])
        k = k[np.linalg.norm(k, axis=1) > 1e-12]
        if len(k):
            null = sla.null_space(k)
            p = p @ null
        isos.append(p)
    return Layout(lay.name, lay.full_dim, isos, lay.labels)


def _independent(rows_dense, tol=1e-9):
    """Indices of a maximal linearly independent subset of rows (pivoted QR)."""
    if not len(rows_dense):
        return []
    _, rr, piv = sla.qr(rows_dense.T, mode='economic', pivoting=True)
    diag = np.abs(np.diag(rr))
    rank = int(np.sum(diag > tol * max(diag.max(), 1e-300)))
    return sorted(piv[:rank].tolist())


def build_sdp_reconstruction(d2_measured, basis, config=None):
    """
    Assemble the reconstruction SDP for a measured (possibly noisy) 2-RDM.

    :param d2_measured: rank-4 tensor or its r^2 x r^2 matrix view
    :param config: :class:`ProjectionConfig`; spin adaptation and spin rows are read from it
    """
    cfg = config or ProjectionConfig()
    cfg.check_spin_targets(basis)
    r, n, eta = basis.r, basis.n, basis.eta
    if n < 2:
        raise ValueError('reconstruction needs at least two particles')
    meas = np.real(_as_output(np.asarray(d2_measured)))
    if meas.shape != (r * r, r * r):
        raise ValueError(f'measured 2-RDM has shape {meas.shape}, expected {(r * r, r * r)}')
    meas = 0.5 * (meas + meas.T)
    sa = cfg.spin_adapted
    layouts = {'d1': one_body_layout('d1', basis, sa), 'q1': one_body_layout('q1', basis, sa),
               'd2': pair_layout('d2', basis, sa), 'q2': pair_layout('q2', basis, sa),
               'g2': particle_hole_layout('g2', basis, sa)}
    singlet = cfg.fix_s2 and abs(cfg.s2_target) < 1e-12
    kernel = _singlet_kernel(basis) if singlet else []
    if singlet:
        layouts['g2'] = _reduce_layout(layouts['g2'], kernel)
    measured_blocks = layouts['d2'].compress(meas)

    var_blocks, dims = [], {}
    for name in MARGINALS:
        for b, size in enumerate(layouts[name].sizes):
            var_blocks.append((name, b))
            dims[(name, b)] = size
    for b, mb in enumerate(measured_blocks):
        var_blocks.append(('M', b))
        dims[('M', b)] = 2 * mb.shape[0]
    offsets, acc = {}, 0
    for key in var_blocks:
        offsets[key] = acc
        acc += dims[key] ** 2
    rows = _RowBuilder(offsets, dims)

    _affine_family(rows, 'd1', layouts['d1'], ['d2'],
                   lambda d2: contract_d2_to_d1(d2, n), layouts, r, 'contraction')
    _affine_family(rows, 'q1', layouts['q1'], ['d1'], lambda d1: map_d1_to_q1(d1),
                   layouts, r, 'D1-Q1')
    _affine_family(rows, 'q2', layouts['q2'], ['d2', 'd1'], lambda d2, d1: map_d2_to_q2(d2, d1),
                   layouts, r, 'D2-Q2')
    _affine_family(rows, 'g2', layouts['g2'], ['d2', 'd1'], lambda d2, d1: map_d2_to_g2(d2, d1),
                   layouts, r, 'D2-G2')
    # scalar rows, written over d2 alone (d1 = contraction of d2); any that
    # depend on the others are dropped after a rank check
    d1_of = lambda d2: contract_d2_to_d1(d2, n)
    funcs = [(lambda d2: np.array([trace2(d2)]), [n * (n - 1)], 'trace')]
    if cfg.fix_sz and not singlet:
        funcs.append((lambda d2: np.array([compute_sz(d1_of(d2), basis)]), [cfg.sz_target], 'Sz'))
    if cfg.fix_s2 and not singlet:
        funcs.append((lambda d2: np.array([compute_s2(d1_of(d2), d2, basis)]), [cfg.s2_target],
                      'S2'))
    if kernel:
        kmat = np.array(kernel).T
        funcs.append((lambda d2: (four_to_matrix(map_d2_to_g2(d2, d1_of(d2))) @ kmat).ravel(),
                      np.zeros(r * r * len(kernel)), 'singlet-kernel'))
    _scalar_rows(rows, funcs, layouts['d2'], r, offsets, dims)
    for b, mb in enumerate(measured_blocks):
        d = mb.shape[0]
        key = ('M', b)
        for i in range(d):
            for j in range(i, d):
                rows.new_row([(rows.var(key, i, j), 1.0)], float(i == j), 'schur-identity')
        for i in range(d):
            for j in range(d):
                rows.new_row([(rows.var(key, i, d + j), 1.0), (rows.var(('d2', b), i, j), -1.0)],
                             -mb[i, j], 'schur-error')

    cost = []
    for key in var_blocks:
        c = np.zeros((dims[key], dims[key]))
        if key[0] == 'M':
            d = dims[key] // 2
            c[d:, d:] = np.eye(d)
        cost.append(c)
    problem = symmetric_problem(cost, rows.matrix(acc), np.array(rows.b),
                                [dims[k] for k in var_blocks])
    return SDPReconstruction(problem, basis, layouts, measured_blocks, var_blocks, rows.counts, cfg)


@dataclass
class SDPDiagnostics:
    converged: bool
    iterations: int
    primal_residual: float
    dual_residual: float
    objective: float
    error_norm_sq: float
    n_constraints: int
    row_counts: dict
    block_dims: tuple
    solution: object = field(default=None, repr=False)
    schur: object = field(default=None, repr=False)


def project_sdp(d2_measured, basis, config=None, return_d1=False):
    """
    Closest 2-positive 2-RDM (Frobenius norm on the antisymmetric pair space).

    :returns: (d2, :class:`SDPDiagnostics`), or (d1, d2, diagnostics) with ``return_d1``
    """
    cfg = config or ProjectionConfig()
    rec = build_sdp_reconstruction(d2_measured, basis, cfg)
    sol = solve(rec.problem, cfg.solver)
    d2 = rec.marginal(sol.X, 'd2')
    d1 = rec.marginal(sol.X, 'd1')
    schur = rec.schur(sol.X)
    diag = SDPDiagnostics(sol.converged, sol.iterations, sol.primal_residual, sol.dual_residual,
                          sol.objective, schur.error_norm_sq, rec.problem.m, rec.row_counts,
                          rec.problem.block_dims, sol, schur)
    return (d1, d2, diag) if return_d1 else (d2, diag)
