"""Synthetic labeled tensors: sums of random rank-one terms, labeled by the
number of terms.

Factor entries are i.i.d. uniform on the open interval (0, 1) (zero draws
are redrawn), so every element of a rank-r tensor lies strictly inside
(0, r).  Generation is a pure function of the seed; the generator is numpy's
``default_rng`` (PCG64).
"""

from dataclasses import dataclass

import numpy as np

from .batch import LabeledDataset
from .tensor_ops import rank_one

__all__ = ["DatasetSpec", "gen_rank_r", "gen_dataset"]


@dataclass
class DatasetSpec:
    """Recipe for a reproducible dataset: shape, rank range (labels are the
    ranks), sample count and seed."""

    dims: tuple
    rank_min: int
    rank_max: int
    count: int
    seed: int

    def __post_init__(self):
        self.dims = tuple(int(d) for d in self.dims)
        if not self.dims or any(d < 1 for d in self.dims):
            raise ValueError(f"invalid dims {self.dims}")
        if not 1 <= self.rank_min <= self.rank_max:
            raise ValueError(
                f"need 1 <= rank_min <= rank_max, got {self.rank_min}..{self.rank_max}"
            )
        if self.count < 1:
            raise ValueError(f"count must be at least 1, got {self.count}")


def _open_uniform(rng, size):
    # U(0,1) on the *open* interval: redraw the (measure-zero) exact zeros
    v = rng.random(size)
    while True:
        zeros = v == 0.0
        if not zeros.any():
            return v
        v[zeros] = rng.random(int(zeros.sum()))


def gen_rank_r(dims, r, rng):
    """Sum of `r` rank-one tensors with U(0,1) factor entries."""
    if r < 1:
        raise ValueError(f"rank must be at least 1, got {r}")
    dims = tuple(int(d) for d in dims)
    t = np.zeros(dims)
    for _ in range(r):
        t += rank_one([_open_uniform(rng, d) for d in dims])
    return t


def gen_dataset(spec):
    """Materialize a :class:`DatasetSpec`: ranks drawn uniformly from the
    range, labels equal to the rank as a float."""
    rng = np.random.default_rng(spec.seed)
    ranks = rng.integers(spec.rank_min, spec.rank_max + 1, size=spec.count)
    tensors = [gen_rank_r(spec.dims, int(r), rng) for r in ranks]
    return LabeledDataset(tensors, ranks.astype(float))
