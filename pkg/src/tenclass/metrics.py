"""Prediction-quality metrics for rank regression."""

import numpy as np

__all__ = ["mse", "accuracy"]


def _check_pair(preds, labels):
    preds = np.asarray(preds, dtype=float).ravel()
    labels = np.asarray(labels, dtype=float).ravel()
    if preds.size == 0:
        raise ValueError("empty prediction list")
    if preds.size != labels.size:
        raise ValueError(f"length mismatch: {preds.size} vs {labels.size}")
    return preds, labels


def mse(preds, labels):
    """Mean squared prediction error."""
    preds, labels = _check_pair(preds, labels)
    d = preds - labels
    return float(d @ d) / preds.size


def accuracy(preds, labels, eta):
    """Fraction of predictions strictly within `eta` of their label
    (``|pred - label| == eta`` counts as wrong)."""
    if eta <= 0:
        raise ValueError(f"eta must be positive, got {eta}")
    preds, labels = _check_pair(preds, labels)
    return float(np.mean(np.abs(preds - labels) < eta))
