"""Trace-norm regularized linear classification of dense N-way tensors.

Batch training runs accelerated proximal gradient with an explicit step-size
constant; the per-step trace-norm proximal subproblem is solved by
Douglas-Rachford splitting or ADMM.  Online training folds streamed samples
into sufficient statistics and refits from a warm start after every
mini-batch.
"""

from .batch import (
    ApgConfig,
    ClassifierModel,
    LabeledDataset,
    fit_batch,
    gradient,
    lipschitz_constant,
    objective,
    predict,
    update_bias,
)
from .dataio import read_dataset, read_model, write_dataset, write_model
from .datagen import DatasetSpec, gen_dataset, gen_rank_r
from .metrics import accuracy, mse
from .online import SufficientStats, fit_online
from .prox import mode_svt, prox_quadratic, soft_threshold, svt
from .solvers import InnerResult, solve_adm, solve_dr
from .tensor_ops import (
    frobenius_norm,
    from_linear,
    grid_tr,
    inner,
    kronecker,
    nuclear_norm,
    rank_one,
    refold,
    tensor_trace_norm,
    to_linear,
    unfold,
)

__version__ = "0.1.0"

__all__ = [
    "ApgConfig",
    "ClassifierModel",
    "DatasetSpec",
    "InnerResult",
    "LabeledDataset",
    "SufficientStats",
    "accuracy",
    "fit_batch",
    "fit_online",
    "frobenius_norm",
    "from_linear",
    "gen_dataset",
    "gen_rank_r",
    "gradient",
    "grid_tr",
    "inner",
    "kronecker",
    "lipschitz_constant",
    "mode_svt",
    "mse",
    "nuclear_norm",
    "objective",
    "predict",
    "prox_quadratic",
    "rank_one",
    "read_dataset",
    "read_model",
    "refold",
    "soft_threshold",
    "solve_adm",
    "solve_dr",
    "svt",
    "tensor_trace_norm",
    "to_linear",
    "unfold",
    "update_bias",
    "write_dataset",
    "write_model",
]
