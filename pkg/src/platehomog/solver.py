"""Jacobi-preconditioned conjugate gradients for several right-hand sides.

Each column is an independent CG run with its own step lengths. By default
all columns advance in lockstep through one sparse-times-dense product per
iteration; with ``threads > 1`` each column runs in its own worker instead.
Either way the columns share only the read-only matrix and preconditioner.
"""

from __future__ import annotations

import logging
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from platehomog.assembly import GlobalSystem

log = logging.getLogger(__name__)


class ConvergenceError(RuntimeError):
    def __init__(self, message: str, residuals: np.ndarray):
        super().__init__(message)
        self.residuals = np.asarray(residuals)


class SingularPreconditionerError(ValueError):
    pass


@dataclass(frozen=True)
class SolveResult:
    u: np.ndarray  # (total_dofs, n_cases), zeros at anchored / unused DOFs
    iterations: np.ndarray  # per column
    residuals: np.ndarray  # true relative residual ||K u - f|| / ||f|| per column


def _col_norms(x: np.ndarray) -> np.ndarray:
    return np.sqrt(np.einsum("ij,ij->j", x, x))


def _pcg_lockstep(a: sp.csr_matrix, b: np.ndarray, inv_diag: np.ndarray, tol: float,
                  maxiter: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    n, m = b.shape
    bnorm = _col_norms(b)
    x = np.zeros((n, m))
    iters = np.zeros(m, dtype=int)
    target = tol * bnorm
    budget = maxiter
    r = b.copy()
    while True:
        done = _col_norms(r) <= target
        if done.all() or budget <= 0:
            break
        used = _pcg_run(a, x, r, inv_diag, target, budget, done, iters)
        budget -= used
        # replace the recursively updated residual by the true one before re-testing
        r = b - a @ x
    return x, iters, _col_norms(b - a @ x) / np.where(bnorm > 0, bnorm, 1.0)


def _pcg_run(a, x, r, inv_diag, target, budget, done, iters) -> int:
    """Advance the not-yet-converged columns in place; return iterations used."""
    live = np.flatnonzero(~done)
    z = inv_diag[:, None] * r[:, live]
    p = z.copy()
    rz = np.einsum("ij,ij->j", r[:, live], z)
    for it in range(1, budget + 1):
        ap = a @ p
        alpha = rz / np.einsum("ij,ij->j", p, ap)
        x[:, live] += alpha * p
        r_live = r[:, live] - alpha * ap
        r[:, live] = r_live
        iters[live] += 1
        conv = _col_norms(r_live) <= target[live]
        if conv.all():
            return it
        if conv.any():
            keep = ~conv
            live, p, r_live, rz = live[keep], p[:, keep], r_live[:, keep], rz[keep]
        z = inv_diag[:, None] * r_live
        rz_new = np.einsum("ij,ij->j", r_live, z)
        p = z + (rz_new / rz) * p
        rz = rz_new
    return budget


def jacobi_inverse(a: sp.csr_matrix, labels: np.ndarray | None = None) -> np.ndarray:
    diag = a.diagonal()
    bad = np.flatnonzero(~(diag > 0))
    if bad.size:
        dof = int(labels[bad[0]]) if labels is not None else int(bad[0])
        raise SingularPreconditionerError(
            f"singular preconditioner: non-positive diagonal {diag[bad[0]]!r} at DOF {dof}"
        )
    return 1.0 / diag


def pcg(a: sp.csr_matrix, b: np.ndarray, tol: float = 1e-6, maxiter: int = 5000,
        threads: int | None = None, labels: np.ndarray | None = None):
    """Solve ``a x = b`` column by column; returns (x, iterations, relative residuals)."""
    if not tol > 0:
        raise ValueError("tol must be positive")
    b = np.asarray(b, dtype=float)
    squeeze = b.ndim == 1
    if squeeze:
        b = b[:, None]
    a = sp.csr_matrix(a)
    inv_diag = jacobi_inverse(a, labels)
    threads = resolve_threads(threads)
    if threads > 1 and b.shape[1] > 1:
        with ThreadPoolExecutor(max_workers=min(threads, b.shape[1])) as pool:
            parts = list(pool.map(
                lambda c: _pcg_lockstep(a, b[:, c:c + 1], inv_diag, tol, maxiter), range(b.shape[1])
            ))
        x = np.hstack([p[0] for p in parts])
        iters = np.concatenate([p[1] for p in parts])
        res = np.concatenate([p[2] for p in parts])
    else:
        x, iters, res = _pcg_lockstep(a, b, inv_diag, tol, maxiter)
    if squeeze:
        return x[:, 0], iters, res
    return x, iters, res


def resolve_threads(threads: int | None) -> int:
    if threads is None:
        threads = int(os.environ.get("HOMOG_THREADS", "1") or 1)
    return max(1, int(threads))


def solve_multi_rhs(system: GlobalSystem, tol: float = 1e-6, maxiter: int = 5000,
                    threads: int | None = None) -> SolveResult:
    """Solve the anchored system for every load column.

    Raises ConvergenceError when any column misses ``tol`` within ``maxiter``
    iterations; the error carries the final relative residual of each column.
    """
    act = system.active_dofs
    k_aa = system.k[act][:, act]
    f_a = np.ascontiguousarray(system.f[act])
    x, iters, res = pcg(k_aa, f_a, tol, maxiter, threads, labels=act)
    log.info("PCG: %d DOFs, iterations %s, residuals %s", len(act), iters.tolist(),
             " ".join(f"{r:.2e}" for r in res))
    if np.any(res > tol):
        raise ConvergenceError(
            f"PCG did not reach tol={tol:g} within {maxiter} iterations; residuals {res.tolist()}", res
        )
    u = np.zeros((system.k.shape[0], system.f.shape[1]))
    u[act] = x
    return SolveResult(u, iters, res)
