"""Batch trainer: accelerated proximal gradient on the weight tensor with
interleaved closed-form bias updates.

The model is the affine score ``<W, X> + b`` fit by squared loss plus
``lam * ||W||_tr``.  The gradient of the smooth part has the explicit
Lipschitz constant ``L = 2 * prod(dims) * sum_i ||X_i||_F^2``, so a fixed
step ``1/L`` needs no line search.  Each accelerated step solves

    min_W (L/2) * ||W - P||_F^2 + lam * ||W||_tr,   P = Z - (1/L) grad

with the configured inner solver (Douglas-Rachford or ADMM), and the bias is
refit to the residual mean after each converged weight sweep.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .solvers import solve_adm, solve_dr
from .tensor_ops import tensor_trace_norm

__all__ = [
    "ApgConfig",
    "ClassifierModel",
    "LabeledDataset",
    "lipschitz_constant",
    "gradient",
    "objective",
    "update_bias",
    "predict",
    "fit_batch",
]


class LabeledDataset:
    """Samples ``(X_i, y_i)`` with a shared tensor shape.

    Stores the tensors stacked in one ``(s, *dims)`` array; the flattened
    ``(s, prod(dims))`` design matrix is cached on first use.
    """

    def __init__(self, tensors, labels):
        tensors = list(tensors)
        if not tensors:
            raise ValueError("dataset must be nonempty")
        dims = np.asarray(tensors[0], dtype=float).shape
        for t in tensors[1:]:
            if np.asarray(t).shape != dims:
                raise ValueError(
                    f"sample dims mismatch: {np.asarray(t).shape} vs {dims}"
                )
        self.x = np.stack([np.asarray(t, dtype=float) for t in tensors])
        self.y = np.asarray(labels, dtype=float).ravel()
        if self.y.size != self.x.shape[0]:
            raise ValueError(
                f"{self.x.shape[0]} tensors but {self.y.size} labels"
            )
        self._design = None

    @classmethod
    def from_stacked(cls, x, y):
        """Build from an already-stacked ``(s, *dims)`` array and labels."""
        ds = cls.__new__(cls)
        ds.x = np.asarray(x, dtype=float)
        if ds.x.ndim < 2 or ds.x.shape[0] < 1:
            raise ValueError("stacked array must be (s, *dims) with s >= 1")
        ds.y = np.asarray(y, dtype=float).ravel()
        if ds.y.size != ds.x.shape[0]:
            raise ValueError(f"{ds.x.shape[0]} tensors but {ds.y.size} labels")
        ds._design = None
        return ds

    @property
    def dims(self):
        return self.x.shape[1:]

    @property
    def design_matrix(self):
        if self._design is None:
            self._design = self.x.reshape(self.x.shape[0], -1)
        return self._design

    def subset(self, indices):
        return LabeledDataset.from_stacked(self.x[indices], self.y[indices])

    def __len__(self):
        return self.x.shape[0]

    def __iter__(self):
        return zip(self.x, self.y)


@dataclass
class ApgConfig:
    """Training hyperparameters.

    ``lam`` weights the trace norm; ``eps1``/``eps2`` are the relative-change
    stopping tolerances for the weights and the bias; ``max_outer`` caps the
    accelerated iterations of one weight sweep (and, for the online trainer,
    of each per-step refit); ``max_alternations`` caps the weight/bias
    alternation.  ``solver`` picks the inner routine ("dr" or "adm") with its
    scale parameter (``gamma`` or ``beta``) and stopping rule.
    ``tight_lipschitz`` drops the ``prod(dims)`` inflation from the step-size
    constant (off by default).  ``fit_bias=False`` pins the bias at zero.
    """

    lam: float = 1.0
    eps1: float = 1e-10
    eps2: float = 1e-10
    max_outer: int = 1000
    max_alternations: int = 20
    solver: str = "dr"
    gamma: float = 1e-7
    beta: float = 1e7
    inner_tol: float = 1e-8
    inner_max_iter: int = 500
    tight_lipschitz: bool = False
    fit_bias: bool = True

    def __post_init__(self):
        if self.lam < 0:
            raise ValueError(f"lam must be nonnegative, got {self.lam}")
        if self.eps1 <= 0 or self.eps2 <= 0:
            raise ValueError("stopping tolerances must be positive")
        if self.max_outer < 1 or self.max_alternations < 1:
            raise ValueError("iteration caps must be at least 1")
        if self.solver not in ("dr", "adm"):
            raise ValueError(f"solver must be 'dr' or 'adm', got {self.solver!r}")

    def solve_inner(self, p, lipschitz):
        if self.solver == "dr":
            return solve_dr(p, lipschitz, self.lam, gamma=self.gamma,
                            tol=self.inner_tol, max_iter=self.inner_max_iter)
        return solve_adm(p, lipschitz, self.lam, beta=self.beta,
                         tol=self.inner_tol, max_iter=self.inner_max_iter)


@dataclass
class ClassifierModel:
    """Learned weight tensor and bias, plus run provenance."""

    w: np.ndarray
    b: float
    lam: float
    converged: bool = True
    iterations: int = 0
    stream_exhausted: bool = False

    def predict(self, x):
        return predict(self, x)


def lipschitz_constant(data, tight=False):
    """Step-size constant for the squared-loss gradient.

    Default is ``2 * prod(dims) * sum_i ||X_i||_F^2``; with ``tight=True``
    the ``prod(dims)`` factor (a worst-case l1/l2 inflation) is dropped,
    giving the Cauchy-Schwarz bound ``2 * sum_i ||X_i||_F^2``.
    """
    if len(data) == 0:
        raise ValueError("dataset must be nonempty")
    sq = float(np.sum(data.design_matrix ** 2))
    if tight:
        return 2.0 * sq
    return 2.0 * math.prod(data.dims) * sq


def gradient(w, b, data):
    """Gradient of the squared loss with respect to the weight tensor:
    ``-2 * sum_i (y_i - <W, X_i> - b) * X_i``."""
    w = np.asarray(w, dtype=float)
    if w.shape != data.dims:
        raise ValueError(f"weight dims {w.shape} do not match data dims {data.dims}")
    resid = data.y - data.design_matrix @ w.ravel() - b
    return (-2.0 * (resid @ data.design_matrix)).reshape(data.dims)


def objective(w, b, data, lam):
    """Regularized empirical cost: sum of squared residuals plus
    ``lam * ||W||_tr``."""
    w = np.asarray(w, dtype=float)
    if w.shape != data.dims:
        raise ValueError(f"weight dims {w.shape} do not match data dims {data.dims}")
    resid = data.y - data.design_matrix @ w.ravel() - b
    return float(resid @ resid) + lam * tensor_trace_norm(w)


def update_bias(w, data):
    """Residual-mean bias refit: ``mean_i (y_i - <W, X_i>)``."""
    if len(data) == 0:
        raise ValueError("dataset must be nonempty")
    w = np.asarray(w, dtype=float)
    return float(np.mean(data.y - data.design_matrix @ w.ravel()))


def predict(model, x):
    """Affine score ``<W, x> + b``."""
    x = np.asarray(x, dtype=float)
    if x.shape != model.w.shape:
        raise ValueError(f"input dims {x.shape} do not match model dims {model.w.shape}")
    return float(np.dot(model.w.ravel(), x.ravel()) + model.b)


def _apg_sweep(w0, b, data, lipschitz, cfg, on_iteration=None, iter_offset=0):
    """Accelerated proximal-gradient loop on W with the bias held fixed.

    Returns ``(w, converged, iterations)``; converged means the relative
    weight change dropped below ``cfg.eps1``.
    """
    w = w0.copy()
    z = w0.copy()
    alpha = 1.0
    for k in range(1, cfg.max_outer + 1):
        p = z - gradient(z, b, data) / lipschitz
        res = cfg.solve_inner(p, lipschitz)
        w_new = res.w
        if not np.all(np.isfinite(w_new)):
            raise RuntimeError(
                f"inner solver ({cfg.solver}) produced non-finite weights at "
                f"outer iteration {k} (inner iterations {res.iterations}, "
                f"residual {res.residual})"
            )
        alpha_next = (1.0 + math.sqrt(1.0 + 4.0 * alpha * alpha)) / 2.0
        z = w_new + ((alpha - 1.0) / alpha_next) * (w_new - w)
        rel = float(np.linalg.norm(w_new - w) / (np.linalg.norm(w) + 1.0))
        w = w_new
        alpha = alpha_next
        if on_iteration is not None:
            on_iteration(iter_offset + k, w, b)
        if rel < cfg.eps1:
            return w, True, k
    return w, False, cfg.max_outer


def fit_batch(data, cfg, callback=None):
    """Train on a full dataset.

    Alternates full accelerated weight sweeps (bias fixed) with closed-form
    bias refits until neither the weights nor the bias move by more than the
    relative tolerances, or the alternation cap is hit.  ``callback(k, w, b)``
    is invoked after every accelerated iteration with the cumulative
    iteration index.

    Raises ``ValueError`` when every sample is zero (the step-size constant
    would vanish).
    """
    lipschitz = lipschitz_constant(data, tight=cfg.tight_lipschitz)
    if lipschitz == 0.0:
        raise ValueError("all samples are zero; step-size constant is zero")
    w = np.zeros(data.dims)
    b = float(np.mean(data.y)) if cfg.fit_bias else 0.0
    prev_w = w.copy()
    prev_b = b
    total_iters = 0
    converged = False
    for _ in range(cfg.max_alternations):
        w, _, iters = _apg_sweep(w, b, data, lipschitz, cfg,
                                 on_iteration=callback, iter_offset=total_iters)
        total_iters += iters
        if cfg.fit_bias:
            b = update_bias(w, data)
        w_rel = float(np.linalg.norm(w - prev_w) / (np.linalg.norm(prev_w) + 1.0))
        b_rel = abs(b - prev_b) / (abs(prev_b) + 1.0)
        if w_rel < cfg.eps1 and b_rel < cfg.eps2:
            converged = True
            break
        prev_w = w.copy()
        prev_b = b
    return ClassifierModel(w=w, b=b, lam=cfg.lam, converged=converged,
                           iterations=total_iters)
