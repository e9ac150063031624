"""Text file formats for datasets and models.

Both formats store tensor values in linearized order (first index fastest)
with 17 significant digits, which round-trips float64 exactly.

Dataset ("TDS1")::

    TDS1
    count <n>
    order <N>
    <I1> <I2> ... <IN>
    y <label>
    <prod(dims) values, whitespace separated>
    ... one record per sample ...

Model ("TCM1")::

    TCM1
    order <N>
    <I1> <I2> ... <IN>
    b <value>
    lambda <value>
    <prod(dims) weight values, whitespace separated>
"""

import math

import numpy as np

from .batch import ClassifierModel, LabeledDataset
from .tensor_ops import from_linear, to_linear

__all__ = ["write_dataset", "read_dataset", "write_model", "read_model"]

_VALUES_PER_LINE = 8


def _fmt(v):
    return format(float(v), ".17g")


def _write_values(f, values):
    values = np.asarray(values, dtype=float).ravel()
    for start in range(0, values.size, _VALUES_PER_LINE):
        f.write(" ".join(_fmt(v) for v in values[start:start + _VALUES_PER_LINE]))
        f.write("\n")


class _Tokens:
    """Whitespace-token cursor over a file body, with context in errors."""

    def __init__(self, text, what):
        self._toks = text.split()
        self._pos = 0
        self._what = what

    def next(self, expect=None):
        if self._pos >= len(self._toks):
            raise ValueError(f"{self._what}: truncated file")
        tok = self._toks[self._pos]
        self._pos += 1
        if expect is not None and tok != expect:
            raise ValueError(f"{self._what}: expected {expect!r}, found {tok!r}")
        return tok

    def next_int(self):
        tok = self.next()
        try:
            return int(tok)
        except ValueError:
            raise ValueError(f"{self._what}: expected integer, found {tok!r}") from None

    def next_float(self):
        tok = self.next()
        try:
            return float(tok)
        except ValueError:
            raise ValueError(f"{self._what}: expected number, found {tok!r}") from None

    def next_floats(self, n):
        return np.array([self.next_float() for _ in range(n)])

    def expect_end(self):
        if self._pos != len(self._toks):
            raise ValueError(f"{self._what}: trailing data after last record")


def _read_magic(path, magic):
    with open(path, "r", encoding="ascii") as f:
        first = f.readline().strip()
        if first != magic:
            raise ValueError(f"{path}: not a {magic} file (first line {first!r})")
        return f.read()


def write_dataset(path, data):
    with open(path, "w", encoding="ascii") as f:
        f.write("TDS1\n")
        f.write(f"count {len(data)}\n")
        f.write(f"order {len(data.dims)}\n")
        f.write(" ".join(str(d) for d in data.dims) + "\n")
        for x, y in data:
            f.write(f"y {_fmt(y)}\n")
            _write_values(f, to_linear(x))


def read_dataset(path):
    toks = _Tokens(_read_magic(path, "TDS1"), str(path))
    toks.next("count")
    count = toks.next_int()
    toks.next("order")
    order = toks.next_int()
    if count < 1 or order < 1:
        raise ValueError(f"{path}: bad count/order ({count}, {order})")
    dims = tuple(toks.next_int() for _ in range(order))
    if any(d < 1 for d in dims):
        raise ValueError(f"{path}: bad dims {dims}")
    size = math.prod(dims)
    tensors = []
    labels = []
    for _ in range(count):
        toks.next("y")
        labels.append(toks.next_float())
        tensors.append(from_linear(dims, toks.next_floats(size)))
    toks.expect_end()
    return LabeledDataset(tensors, labels)


def write_model(path, model):
    dims = model.w.shape
    with open(path, "w", encoding="ascii") as f:
        f.write("TCM1\n")
        f.write(f"order {len(dims)}\n")
        f.write(" ".join(str(d) for d in dims) + "\n")
        f.write(f"b {_fmt(model.b)}\n")
        f.write(f"lambda {_fmt(model.lam)}\n")
        _write_values(f, to_linear(model.w))


def read_model(path):
    """Load a model file.  Only the weights, bias and trace-norm weight are
    stored; run provenance (convergence flag, iteration count) is not."""
    toks = _Tokens(_read_magic(path, "TCM1"), str(path))
    toks.next("order")
    order = toks.next_int()
    if order < 1:
        raise ValueError(f"{path}: bad order {order}")
    dims = tuple(toks.next_int() for _ in range(order))
    if any(d < 1 for d in dims):
        raise ValueError(f"{path}: bad dims {dims}")
    toks.next("b")
    b = toks.next_float()
    toks.next("lambda")
    lam = toks.next_float()
    w = from_linear(dims, toks.next_floats(math.prod(dims)))
    toks.expect_end()
    return ClassifierModel(w=w, b=b, lam=lam)
