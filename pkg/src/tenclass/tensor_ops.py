"""Dense N-way tensor primitives.

Tensors are plain numpy ndarrays of float64; the order of a tensor is its
``ndim`` and modes are counted from 0.  A tensor is "linearized" with the
first index varying fastest (Fortran order), which is the layout used by the
text file formats and which makes the mode-0 unfolding a pure reshape.
"""

import math
from functools import reduce

import numpy as np

__all__ = [
    "unfold",
    "refold",
    "inner",
    "frobenius_norm",
    "nuclear_norm",
    "tensor_trace_norm",
    "kronecker",
    "grid_tr",
    "rank_one",
    "from_linear",
    "to_linear",
]


def _as_tensor(t):
    t = np.asarray(t, dtype=float)
    if t.ndim < 1:
        t = t.reshape(1)
    return t


def _check_mode(t, mode):
    if not 0 <= mode < t.ndim:
        raise ValueError(f"mode {mode} out of range for order-{t.ndim} tensor")


def unfold(t, mode):
    """Mode-`mode` unfolding (matricization) of a tensor.

    Rows are indexed by the `mode` index; the remaining indices enumerate the
    columns with the earliest mode varying fastest.  The result has shape
    ``(I_mode, prod of the other dims)``.
    """
    t = _as_tensor(t)
    _check_mode(t, mode)
    return np.reshape(np.moveaxis(t, mode, 0), (t.shape[mode], -1), order="F")


def refold(mat, mode, dims):
    """Inverse of :func:`unfold`: fold a mode-`mode` unfolding back into a
    tensor of shape `dims`."""
    mat = np.asarray(mat, dtype=float)
    dims = tuple(int(d) for d in dims)
    if not 0 <= mode < len(dims):
        raise ValueError(f"mode {mode} out of range for dims {dims}")
    rest = dims[:mode] + dims[mode + 1 :]
    if mat.shape != (dims[mode], int(np.prod(rest, dtype=np.int64))):
        raise ValueError(
            f"matrix shape {mat.shape} inconsistent with dims {dims} mode {mode}"
        )
    return np.moveaxis(np.reshape(mat, (dims[mode],) + rest, order="F"), 0, mode)


def inner(a, b):
    """Inner product of two same-shape tensors (sum of elementwise products)."""
    a = _as_tensor(a)
    b = _as_tensor(b)
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch: {a.shape} vs {b.shape}")
    return float(np.dot(a.ravel(), b.ravel()))


def frobenius_norm(t):
    """Frobenius norm, the square root of the tensor's inner product with itself."""
    return float(np.linalg.norm(_as_tensor(t).ravel()))


def nuclear_norm(m):
    """Sum of the singular values of a matrix."""
    return float(np.linalg.svd(np.asarray(m, dtype=float), compute_uv=False).sum())


def tensor_trace_norm(t):
    """Tensor trace norm: the average over modes of the nuclear norms of the
    unfoldings.  For matrices this is the ordinary nuclear norm."""
    t = _as_tensor(t)
    return sum(nuclear_norm(unfold(t, m)) for m in range(t.ndim)) / t.ndim


def kronecker(a, b):
    """Kronecker product of two equal-order tensors.

    The result has dims ``I_m * J_m`` and is laid out in blocks of b's shape:
    the ``(i_1, ..., i_N)``-th block equals ``a[i_1, ..., i_N] * b``.
    """
    a = _as_tensor(a)
    b = _as_tensor(b)
    if a.ndim != b.ndim:
        raise ValueError(f"order mismatch: {a.ndim} vs {b.ndim}")
    a_exp = a.reshape([d for i in a.shape for d in (i, 1)])
    b_exp = b.reshape([d for j in b.shape for d in (1, j)])
    return (a_exp * b_exp).reshape([i * j for i, j in zip(a.shape, b.shape)])


def grid_tr(w, b):
    """Block-wise contraction of `w` against a Kronecker-structured tensor.

    `b` must have dims equal to the elementwise squares of `w`'s dims, i.e. a
    grid of w-shaped blocks.  Output element ``(i_1, ..., i_N)`` is the inner
    product of `w` with the ``(i_1, ..., i_N)``-th block of `b`.  Satisfies
    ``grid_tr(w, kronecker(x, x)) == inner(w, x) * x``.
    """
    w = _as_tensor(w)
    b = _as_tensor(b)
    if b.ndim != w.ndim or b.shape != tuple(d * d for d in w.shape):
        raise ValueError(
            f"block structure mismatch: w dims {w.shape} require b dims "
            f"{tuple(d * d for d in w.shape)}, got {b.shape}"
        )
    n = w.ndim
    # split each axis I*I into (block index, within-block index)
    b_split = b.reshape([d for i in w.shape for d in (i, i)])
    block_axes = list(range(0, 2 * n, 2))
    within_axes = list(range(1, 2 * n, 2))
    return np.einsum(b_split, list(range(2 * n)), w, within_axes, block_axes)


def rank_one(vectors):
    """Outer product of N vectors: element ``(i_1, ..., i_N)`` is the product
    of the vector entries ``v_k[i_k]``.  Every unfolding has rank at most 1."""
    vs = [np.asarray(v, dtype=float).ravel() for v in vectors]
    if not vs:
        raise ValueError("rank_one requires at least one vector")
    return reduce(np.multiply.outer, vs)


def from_linear(dims, values):
    """Build a tensor from its linearized values (first index fastest)."""
    dims = tuple(int(d) for d in dims)
    values = np.asarray(values, dtype=float).ravel()
    if values.size != int(np.prod(dims, dtype=np.int64)):
        raise ValueError(
            f"{values.size} values cannot fill dims {dims} "
            f"({math.prod(dims)} elements)"
        )
    return values.reshape(dims, order="F")


def to_linear(t):
    """Linearized values of a tensor, first index varying fastest."""
    return _as_tensor(t).ravel(order="F")
