"""Scalar, matrix and tensor-mode proximal / thresholding operators."""

import numpy as np

from .tensor_ops import refold, unfold

__all__ = ["soft_threshold", "svt", "mode_svt", "prox_quadratic"]


def soft_threshold(x, eps):
    """Soft-thresholding (shrink toward zero by `eps`).

    Scalars map to ``x - eps`` when ``x > eps``, ``x + eps`` when
    ``x < -eps`` and 0 otherwise (ties at ``|x| == eps`` land on 0).
    Arrays are thresholded elementwise.
    """
    if eps < 0:
        raise ValueError(f"threshold must be nonnegative, got {eps}")
    arr = np.asarray(x, dtype=float)
    out = np.sign(arr) * np.maximum(np.abs(arr) - eps, 0.0)
    return float(out) if out.ndim == 0 else out


def svt(m, eps):
    """Singular value thresholding: shrink the singular values of a matrix
    by `eps` (flooring at zero) and reconstruct.

    Solves ``min_Y eps * ||Y||_nuc + 0.5 * ||Y - m||_F^2``.  Uses the economy
    SVD, so only ``min(rows, cols)`` singular values are touched.
    """
    if eps < 0:
        raise ValueError(f"threshold must be nonnegative, got {eps}")
    m = np.asarray(m, dtype=float)
    if eps == 0:
        return m.copy()
    u, s, vt = np.linalg.svd(m, full_matrices=False)
    return (u * np.maximum(s - eps, 0.0)) @ vt


def mode_svt(t, mode, eps):
    """Singular value thresholding applied to the mode-`mode` unfolding.

    Solves ``min_Y eps * ||unfold(Y, mode)||_nuc + 0.5 * ||Y - t||_F^2``.
    """
    t = np.asarray(t, dtype=float)
    return refold(svt(unfold(t, mode), eps), mode, t.shape)


def prox_quadratic(y0, p, lipschitz, gamma, n_modes):
    """Proximal map of the quadratic ``(L/2) * ||W - p||_F^2`` evaluated at
    `y0` with proximal weight ``(n_modes + 1) * gamma``.

    Returns the unique minimizer of
    ``(L/2) * ||W - p||^2 + c * ||W - y0||^2`` with
    ``c = 1 / (2 * (n_modes + 1) * gamma)``, which is the convex combination
    ``(L/2 * p + c * y0) / (L/2 + c)``.
    """
    if lipschitz <= 0:
        raise ValueError(f"lipschitz must be positive, got {lipschitz}")
    if gamma <= 0:
        raise ValueError(f"gamma must be positive, got {gamma}")
    y0 = np.asarray(y0, dtype=float)
    p = np.asarray(p, dtype=float)
    if y0.shape != p.shape:
        raise ValueError(f"shape mismatch: {y0.shape} vs {p.shape}")
    half_l = 0.5 * lipschitz
    c = 1.0 / (2.0 * (n_modes + 1) * gamma)
    return (half_l * p + c * y0) / (half_l + c)
