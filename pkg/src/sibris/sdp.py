"""Dense Hermitian semidefinite programming via two-block ADMM.

Solves   maximize Tr(C X)   over Hermitian X >= 0
subject to Tr(A_i X) = b_i and Tr(B_k X) <= c_k.

The splitting alternates a projection onto the affine constraint set
(through a cached least-squares factorization of the stacked constraint
rows) with a projection onto the PSD cone (eigendecomposition), plus
scaled dual updates, over-relaxation, and residual balancing on the
penalty parameter.  Inequalities carry explicit slack variables that are
clipped nonnegative in the cone step.  Everything is deterministic: same
problem, tolerance, and budget give bitwise-identical output.

Matrices, vectors and scalars all live in one real vector through the
isometric vectorization svec/smat, so inner products and norms carry
over unchanged.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

OPTIMAL = "optimal"
MAX_ITERS = "max_iters"
INFEASIBLE = "infeasible"

_SQRT2 = np.sqrt(2.0)
_IDX = {}
_LAYOUTS = {}


def _triu(n):
    if n not in _IDX:
        _IDX[n] = np.triu_indices(n, 1)
    return _IDX[n]


def svec(x):
    """Isometric real vectorization of a Hermitian matrix, length n^2."""
    n = x.shape[0]
    iu, ju = _triu(n)
    off = x[iu, ju]
    return np.concatenate([x.diagonal().real, _SQRT2 * off.real, _SQRT2 * off.imag])


def smat(v, n):
    """Inverse of svec."""
    iu, ju = _triu(n)
    m = n * (n - 1) // 2
    x = np.zeros((n, n), dtype=complex)
    x[np.arange(n), np.arange(n)] = v[:n]
    off = (v[n:n + m] + 1j * v[n + m:]) / _SQRT2
    x[iu, ju] = off
    x[ju, iu] = off.conj()
    return x


def max_eigpair(x):
    """Largest eigenvalue and a unit eigenvector of a Hermitian matrix."""
    lam, vecs = np.linalg.eigh(x)
    return float(lam[-1]), vecs[:, -1]


@dataclass
class SdpProblem:
    """maximize Tr(objective @ X), X Hermitian PSD of size dim.

    eq_constraints:   list of (A, b) with Tr(A X) == b
    ineq_constraints: list of (B, c) with Tr(B X) <= c
    blocks: optional diagonal block sizes (sum == dim).  Declaring blocks
      asserts that the objective and every constraint matrix are
      block-diagonal with these sizes; the solver then projects onto the
      cone block by block and iterates never leave the block-diagonal
      subspace.
    """

    dim: int
    objective: np.ndarray
    eq_constraints: list = field(default_factory=list)
    ineq_constraints: list = field(default_factory=list)
    blocks: list | None = None


@dataclass
class SdpSolution:
    X: np.ndarray
    objective_value: float
    primal_residual: float  # max absolute constraint violation
    psd_residual: float     # most negative eigenvalue, clamped to >= 0
    status: str
    iterations: int = 0
    warm: tuple | None = None  # opaque restart state (z, lam, rho)


def _layout(n, blocks):
    """Precomputed svec gather/scatter maps for blockwise cone projection.

    Blocks of equal size are grouped so one batched eigendecomposition
    covers them all.  Only coordinates inside the declared blocks are
    touched; cross-block coordinates pass through unchanged (they stay
    identically zero for block-diagonal problem data).
    """
    key = (n, tuple(blocks))
    if key in _LAYOUTS:
        return _LAYOUTS[key]
    m = n * (n - 1) // 2

    def tri_pos(i, j):  # row-major offset of (i, j), i < j, in triu order
        return i * n - i * (i + 1) // 2 + (j - i - 1)

    groups = {}
    ones = []
    ofs = 0
    for b in blocks:
        if b == 1:
            ones.append(ofs)
        else:
            groups.setdefault(b, []).append(ofs)
        ofs += b
    built = []
    for b, offs in sorted(groups.items()):
        diag_idx = np.array([[o + i for i in range(b)] for o in offs])
        iu, ju = np.triu_indices(b, 1)
        pos = np.array([[tri_pos(o + i, o + j) for i, j in zip(iu, ju)]
                        for o in offs])
        built.append((b, diag_idx, iu, ju, n + pos, n + m + pos))
    layout = (np.array(ones, dtype=int), built)
    _LAYOUTS[key] = layout
    return layout


def _proj_cone(v, nv, layout):
    """Project the matrix part onto PSD (blockwise) and slacks onto >= 0."""
    ones_idx, groups = layout
    out = v.copy()
    if ones_idx.size:
        out[ones_idx] = np.maximum(v[ones_idx], 0.0)
    for b, diag_idx, iu, ju, re_idx, im_idx in groups:
        nb = diag_idx.shape[0]
        sub = np.zeros((nb, b, b), dtype=complex)
        rng_b = np.arange(b)
        sub[:, rng_b, rng_b] = v[diag_idx]
        off = (v[re_idx] + 1j * v[im_idx]) / _SQRT2
        sub[:, iu, ju] = off
        sub[:, ju, iu] = off.conj()
        lam, vecs = np.linalg.eigh(sub)
        if np.all(lam >= 0.0):
            continue
        np.maximum(lam, 0.0, out=lam)
        blk = (vecs * lam[:, None, :]) @ vecs.conj().transpose(0, 2, 1)
        out[diag_idx] = blk[:, rng_b, rng_b].real
        proj_off = blk[:, iu, ju]
        out[re_idx] = _SQRT2 * proj_off.real
        out[im_idx] = _SQRT2 * proj_off.imag
    np.maximum(out[nv:], 0.0, out=out[nv:])
    return out


def _psd_residual(x, blocks):
    worst = 0.0
    ofs = 0
    for b in blocks:
        sub = x[ofs:ofs + b, ofs:ofs + b]
        lam_min = sub[0, 0].real if b == 1 else np.linalg.eigvalsh(sub)[0]
        worst = min(worst, float(lam_min))
        ofs += b
    return max(0.0, -worst)


def _block_coord_ids(n, blocks):
    """Block index of every svec coordinate; -1 for cross-block coordinates
    (identically zero under block-diagonal data)."""
    m = n * (n - 1) // 2
    ids = np.full(n * n, -1, dtype=int)
    bid = np.empty(n, dtype=int)
    ofs = 0
    for bi, b in enumerate(blocks):
        bid[ofs:ofs + b] = bi
        ofs += b
    ids[:n] = bid
    iu, ju = _triu(n)
    off_ids = np.where(bid[iu] == bid[ju], bid[iu], -1)
    ids[n:n + m] = off_ids
    ids[n + m:] = off_ids
    return ids


def solve_sdp(problem, tol=1e-7, max_iters=20000, warm_start=None):
    """Run the splitting until residuals pass tol, stagnate, or budget runs out.

    Rows are normalized by max(||A||_F, |rhs|) and the variable space is
    equilibrated (one scalar per PSD block — uniform scaling commutes with
    the cone — plus one per slack column) so badly mixed data scales do
    not skew the iteration; violations are reported in original units and
    the warm-start state is carried in original units too, so it survives
    data-dependent rescaling between calls.
    """
    n = problem.dim
    blocks = list(problem.blocks) if problem.blocks else [n]
    layout = _layout(n, blocks)
    nv = n * n
    n_eq = len(problem.eq_constraints)
    n_in = len(problem.ineq_constraints)
    n_rows = n_eq + n_in
    n_var = nv + n_in

    rows = np.zeros((n_rows, n_var))
    rhs = np.zeros(n_rows)
    scale = np.ones(n_rows)
    for r, (a, b) in enumerate(problem.eq_constraints):
        va = svec(a)
        s = max(np.linalg.norm(va), abs(b), 1e-12)
        rows[r, :nv] = va / s
        rhs[r] = b / s
        scale[r] = s
    for kk, (a, c) in enumerate(problem.ineq_constraints):
        r = n_eq + kk
        va = svec(a)
        s = max(np.linalg.norm(va), abs(c), 1e-12)
        rows[r, :nv] = va / s
        rows[r, nv + kk] = 1.0
        rhs[r] = c / s
        scale[r] = s

    ids = _block_coord_ids(n, blocks)
    col_d = np.ones(n_var)
    for _ in range(2 if n_rows else 0):
        cm = np.abs(rows).max(axis=0)
        d = np.ones(n_var)
        for bi in range(len(blocks)):
            sel = ids == bi
            mx = cm[:nv][sel]
            mx = mx[mx > 1e-11]
            if mx.size:
                d[:nv][sel] = 1.0 / np.sqrt(np.exp(np.mean(np.log(mx))))
        d[nv:] = 1.0 / np.sqrt(np.maximum(cm[nv:], 1e-12))
        rows *= d
        col_d *= d
        rn = np.maximum(np.linalg.norm(rows, axis=1), 1e-12)
        rows /= rn[:, None]
        rhs /= rn
        scale *= rn

    gram = rows @ rows.T
    gram_inv = np.linalg.pinv(gram, rcond=1e-12, hermitian=True) if n_rows else gram
    proj_t = rows.T @ gram_inv if n_rows else rows.T

    def proj_affine(v):
        if n_rows == 0:
            return v
        return v - proj_t @ (rows @ v - rhs)

    is_eq = np.zeros(n_rows, dtype=bool)
    is_eq[:n_eq] = True

    def violation(xvec):
        if n_rows == 0:
            return 0.0
        g = rows[:, :nv] @ xvec - rhs
        v = np.where(is_eq, np.abs(g), np.maximum(g, 0.0))
        return float(np.max(scale * v))

    # inconsistent equalities surface as an irreducible least-squares residual
    if n_rows:
        v0 = proj_affine(np.zeros(n_var))
        if np.max(np.abs(rows @ v0 - rhs)) > max(100.0 * tol, 1e-9):
            x0 = np.zeros((n, n), dtype=complex)
            return SdpSolution(x0, 0.0, violation(svec(x0)), 0.0, INFEASIBLE, 0, None)

    cobj = svec(problem.objective)
    cvec = np.zeros(n_var)
    cvec[:nv] = -cobj * col_d[:nv]  # minimize the negated objective
    cvec /= max(np.linalg.norm(cvec), 1e-12)

    z = np.zeros(n_var)
    lam = np.zeros(n_var)
    rho = 1.0
    if warm_start is not None and warm_start[0].shape == (n_var,):
        z = warm_start[0] / col_d
        lam = warm_start[1] / col_d
        rho = warm_start[2]

    over = 1.6
    status = MAX_ITERS
    best = np.inf
    stall = 0
    it = 0
    while it < max_iters:
        it += 1
        u = proj_affine(z - lam - cvec / rho)
        ur = over * u + (1.0 - over) * z
        znew = _proj_cone(ur + lam, nv, layout)
        lam += ur - znew
        r_prim = np.linalg.norm(u - znew)
        r_dual = rho * np.linalg.norm(znew - z)
        z = znew
        if it % 50 == 0:  # residual balancing
            if r_prim > 10.0 * r_dual:
                rho *= 2.0
                lam *= 0.5
            elif r_dual > 10.0 * r_prim:
                rho *= 0.5
                lam *= 2.0
        if it % 25 == 0 or it == max_iters:
            viol = violation(z[:nv])
            nz = max(1.0, float(np.linalg.norm(z)))
            if viol <= tol * nz and r_prim <= tol * nz and r_dual <= tol * nz:
                status = OPTIMAL
                break
            if viol < best * (1.0 - 1e-3):
                best = viol
                stall = 0
            else:
                # Degenerate contact between the cone and the affine set
                # makes the violation plateau; once it stops moving, either
                # declare infeasibility (plateau far above tolerance) or
                # hand back the near-feasible iterate instead of grinding.
                stall += 25
                if stall >= 2000:
                    status = INFEASIBLE if best > 100.0 * tol * nz else MAX_ITERS
                    break

    x = smat(z[:nv] * col_d[:nv], n)
    obj = float(np.real(np.trace(problem.objective @ x)))
    return SdpSolution(
        X=x,
        objective_value=obj,
        primal_residual=violation(z[:nv]),
        psd_residual=_psd_residual(x, blocks),
        status=status,
        iterations=it,
        warm=(z * col_d, lam * col_d, rho),
    )
