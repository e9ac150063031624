"""Inner solvers for the proximal-gradient weight update.

Both routines approximately minimize

    (L/2) * ||W - P||_F^2 + lam * ||W||_tr

where ``||.||_tr`` is the tensor trace norm (average of the nuclear norms of
the mode unfoldings).  For matrices this subproblem has the closed-form
solution ``svt(P, lam / L)``; for order three and higher the modes couple and
an iterative splitting scheme is needed.

``solve_dr`` runs Douglas-Rachford splitting in the (N+1)-fold product space:
one component carries the quadratic, each remaining component carries one
mode's nuclear norm, and the consensus (all components equal) plays the role
of the second function.  ``solve_adm`` runs ADMM on the equivalent
formulation with one auxiliary tensor per mode tied to W by equality
constraints.

The proximal scale `gamma` (DR) and the penalty `beta` (ADM) only affect the
convergence speed, not the limit.  The defaults suit problems where L is very
large (1e9-ish); for generic L, ``gamma ~ 1/L`` and ``beta ~ L`` are good
choices.
"""

from typing import NamedTuple

import numpy as np

from .prox import mode_svt, prox_quadratic

__all__ = ["InnerResult", "solve_dr", "solve_adm"]

DEFAULT_GAMMA = 1e-7
DEFAULT_BETA = 1e7
DEFAULT_TOL = 1e-8
DEFAULT_MAX_ITER = 500


class InnerResult(NamedTuple):
    """Outcome of an inner solve: the minimizer estimate, whether the
    stopping rule fired, iterations used, and the final residual (relative
    change for DR, max primal residual for ADM)."""

    w: np.ndarray
    converged: bool
    iterations: int
    residual: float


def solve_dr(p, lipschitz, lam, gamma=DEFAULT_GAMMA, tol=DEFAULT_TOL,
             max_iter=DEFAULT_MAX_ITER):
    """Douglas-Rachford splitting for the trace-norm proximal subproblem.

    Parameters
    ----------
    p : ndarray
        Gradient-step point P.
    lipschitz : float
        Quadratic curvature L > 0.
    lam : float
        Trace-norm weight, >= 0.
    gamma : float
        Proximal scale, > 0.
    tol : float
        Stop when the consensus average moves by less than
        ``tol * (||avg|| + 1)`` between sweeps.
    max_iter : int
        Iteration cap; on hitting it the best average is returned with
        ``converged=False``.
    """
    p = np.asarray(p, dtype=float)
    if lipschitz <= 0:
        raise ValueError(f"lipschitz must be positive, got {lipschitz}")
    if lam < 0:
        raise ValueError(f"lam must be nonnegative, got {lam}")
    if gamma <= 0:
        raise ValueError(f"gamma must be positive, got {gamma}")
    n = p.ndim
    eps_svt = lam * (n + 1) * gamma / n
    comps = [p.copy() for _ in range(n + 1)]
    w_hat = p.copy()
    rel = np.inf
    for k in range(1, max_iter + 1):
        # one Jacobi sweep: every reflection uses the same consensus average
        comps[0] += prox_quadratic(2.0 * w_hat - comps[0], p, lipschitz, gamma, n) - w_hat
        for i in range(1, n + 1):
            comps[i] += mode_svt(2.0 * w_hat - comps[i], i - 1, eps_svt) - w_hat
        new_hat = comps[0].copy()
        for c in comps[1:]:
            new_hat += c
        new_hat /= n + 1
        rel = float(np.linalg.norm(new_hat - w_hat) / (np.linalg.norm(w_hat) + 1.0))
        w_hat = new_hat
        if rel < tol:
            return InnerResult(w_hat, True, k, rel)
    return InnerResult(w_hat, False, max_iter, rel)


def solve_adm(p, lipschitz, lam, beta=DEFAULT_BETA, tol=DEFAULT_TOL,
              max_iter=DEFAULT_MAX_ITER):
    """ADMM for the trace-norm proximal subproblem.

    One auxiliary tensor Y_i per mode is constrained to equal W; each sweep
    updates W in closed form, the Y_i by mode-wise singular value
    thresholding with threshold ``lam / (beta * N)``, then the multipliers.
    Converged when every primal residual ``||W - Y_i||_F`` is at most
    ``tol * (1 + ||W||_F)`` *and* W's relative change has dropped below
    `tol` (the primal residuals alone can be small while the iterate still
    drifts).
    """
    p = np.asarray(p, dtype=float)
    if lipschitz <= 0:
        raise ValueError(f"lipschitz must be positive, got {lipschitz}")
    if lam < 0:
        raise ValueError(f"lam must be nonnegative, got {lam}")
    if beta <= 0:
        raise ValueError(f"beta must be positive, got {beta}")
    n = p.ndim
    eps_svt = lam / (beta * n)
    w = p.copy()
    ys = [p.copy() for _ in range(n)]
    us = [np.zeros_like(p) for _ in range(n)]
    resid = np.inf
    for k in range(1, max_iter + 1):
        acc = lipschitz * p
        for y, u in zip(ys, us):
            acc += beta * y + u
        w_new = acc / (lipschitz + beta * n)
        for i in range(n):
            ys[i] = mode_svt(w_new - us[i] / beta, i, eps_svt)
            us[i] -= beta * (w_new - ys[i])
        resid = max(float(np.linalg.norm(w_new - y)) for y in ys)
        rel = float(np.linalg.norm(w_new - w) / (np.linalg.norm(w) + 1.0))
        w = w_new
        if resid <= tol * (1.0 + float(np.linalg.norm(w))) and rel < tol:
            return InnerResult(w, True, k, resid)
    return InnerResult(w, False, max_iter, resid)
