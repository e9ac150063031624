"""Streaming trainer driven by sufficient statistics.

Instead of revisiting samples, the trainer folds each incoming sample (or
mini-batch) into five accumulators from which the squared-loss gradient and
the bias refit over *everything seen so far* are exactly reconstructable:

    A = sum_i y_i X_i                (weight-label correlation)
    B = sum_i X_i (x) X_i            (Kronecker second moment, squared dims)
    c = sum_i y_i
    D = sum_i X_i
    L = 2 * prod(dims) * sum_i ||X_i||_F^2   (running step-size constant)

After each update the accelerated proximal-gradient loop is re-run from the
previous solution (warm restart), with the gradient evaluated from the
statistics and the bias refit interleaved into every iteration.

B is the memory hog: it holds prod(dims)^2 values (10^6 for a 10x10x10
stream), and each sample update costs a full Kronecker product.
"""

import math
from typing import Iterable, Tuple

import numpy as np

from .batch import ApgConfig, ClassifierModel
from .tensor_ops import grid_tr, inner, kronecker

__all__ = ["SufficientStats", "fit_online"]


class SufficientStats:
    """Running accumulators for squared-loss tensor regression."""

    def __init__(self, dims):
        dims = tuple(int(d) for d in dims)
        if not dims or any(d < 1 for d in dims):
            raise ValueError(f"invalid dims {dims}")
        self.dims = dims
        self.a = np.zeros(dims)
        self.b_kron = np.zeros(tuple(d * d for d in dims))
        self.c = 0.0
        self.d = np.zeros(dims)
        self.l = 0.0
        self.t = 0

    def update(self, batch):
        """Fold samples into the accumulators, strictly in the given order
        (so a mini-batch equals the same singletons applied sequentially,
        bit for bit).  Returns self."""
        size = math.prod(self.dims)
        for x, y in batch:
            x = np.asarray(x, dtype=float)
            if x.shape != self.dims:
                raise ValueError(f"sample dims {x.shape} do not match {self.dims}")
            y = float(y)
            self.a += y * x
            self.b_kron += kronecker(x, x)
            self.c += y
            self.d += x
            self.l += 2.0 * size * float(np.dot(x.ravel(), x.ravel()))
            self.t += 1
        return self

    def gradient(self, z, b):
        """Squared-loss gradient at ``(z, b)`` over all accumulated samples:
        ``-2 * (A - grid_tr(z, B) - b * D)``."""
        if self.t == 0:
            raise ValueError("no samples accumulated")
        z = np.asarray(z, dtype=float)
        if z.shape != self.dims:
            raise ValueError(f"weight dims {z.shape} do not match {self.dims}")
        return -2.0 * (self.a - grid_tr(z, self.b_kron) - b * self.d)

    def bias(self, w):
        """Residual-mean bias over all accumulated samples:
        ``(c - <w, D>) / t``."""
        if self.t == 0:
            raise ValueError("no samples accumulated")
        return (self.c - inner(w, self.d)) / self.t


def _refit(stats, w0, b0, cfg):
    """Accelerated proximal-gradient loop on the accumulated objective,
    warm-started at ``(w0, b0)``, with the bias refit inside every
    iteration.  Stops when both relative changes drop below the
    tolerances."""
    lipschitz = stats.l
    if lipschitz == 0.0:
        raise ValueError("all accumulated samples are zero; step-size constant is zero")
    w = w0.copy()
    z = w0.copy()
    b = b0
    alpha = 1.0
    for k in range(1, cfg.max_outer + 1):
        p = z - stats.gradient(z, b) / lipschitz
        res = cfg.solve_inner(p, lipschitz)
        w_new = res.w
        if not np.all(np.isfinite(w_new)):
            raise RuntimeError(
                f"inner solver ({cfg.solver}) produced non-finite weights "
                f"(inner iterations {res.iterations}, residual {res.residual})"
            )
        alpha_next = (1.0 + math.sqrt(1.0 + 4.0 * alpha * alpha)) / 2.0
        z = w_new + ((alpha - 1.0) / alpha_next) * (w_new - w)
        b_new = stats.bias(w_new) if cfg.fit_bias else b
        w_rel = float(np.linalg.norm(w_new - w) / (np.linalg.norm(w) + 1.0))
        b_rel = abs(b_new - b) / (abs(b) + 1.0)
        w = w_new
        b = b_new
        alpha = alpha_next
        if w_rel < cfg.eps1 and b_rel < cfg.eps2:
            return w, b, k, True
    return w, b, cfg.max_outer, False


def fit_online(stream, dims, cfg, mu=1, t_max=1000, callback=None):
    """Train from a sample stream.

    Parameters
    ----------
    stream : iterable of (tensor, label) pairs
        Consumed lazily; ``mu`` samples are drawn per step.
    dims : tuple
        Tensor shape (needed up front so an empty stream still yields a
        well-formed zero model).
    cfg : ApgConfig
        Tolerances, trace-norm weight and inner-solver choice; ``max_outer``
        caps each per-step refit.
    mu : int
        Mini-batch size per step.
    t_max : int
        Number of steps.
    callback : callable, optional
        ``callback(step, samples_seen, refit_iters, w, b)`` after each step.

    Returns the model after the last step.  If the stream runs dry early the
    partial batch (if any) is still folded in and the model is returned with
    ``stream_exhausted=True`` and ``converged=False``.
    """
    if mu < 1:
        raise ValueError(f"mu must be at least 1, got {mu}")
    if t_max < 0:
        raise ValueError(f"t_max must be nonnegative, got {t_max}")
    stats = SufficientStats(dims)
    w = np.zeros(stats.dims)
    b = 0.0
    it = iter(stream)
    exhausted = False
    total_iters = 0
    last_converged = False
    steps = 0
    for _ in range(t_max):
        batch = []
        for _ in range(mu):
            try:
                batch.append(next(it))
            except StopIteration:
                exhausted = True
                break
        if not batch:
            break
        stats.update(batch)
        w, b, iters, last_converged = _refit(stats, w, b, cfg)
        total_iters += iters
        steps += 1
        if callback is not None:
            callback(steps, stats.t, iters, w, b)
        if exhausted:
            break
    converged = last_converged and steps == t_max and not exhausted
    return ClassifierModel(w=w, b=b, lam=cfg.lam, converged=converged,
                           iterations=total_iters, stream_exhausted=exhausted)
