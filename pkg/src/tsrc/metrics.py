"""Evaluation metrics: NMSE, NRMSE, symbol error rate, word error rate."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


@dataclass
class MetricReport:
    name: str  # NMSE | NRMSE | SER | WER
    value: float
    n: int
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.name not in ("NMSE", "NRMSE", "SER", "WER"):
            raise ValueError(f"unknown metric name {self.name!r}")
        if self.n < 1:
            raise ValueError(f"sample count must be >= 1, got {self.n}")
        if self.value < 0:
            raise ValueError(f"metric value must be non-negative, got {self.value}")
        if self.name in ("SER", "WER") and self.value > 1:
            raise ValueError(f"{self.name} must lie in [0, 1], got {self.value}")

    def to_dict(self) -> dict:
        return {"name": self.name, "value": self.value, "n": self.n, "extra": dict(self.extra)}


def _as_pair(predicted, expected, min_len: int):
    predicted = np.asarray(predicted, dtype=np.float64).ravel()
    expected = np.asarray(expected, dtype=np.float64).ravel()
    if predicted.shape != expected.shape:
        raise ValueError(f"length mismatch: {predicted.shape[0]} vs {expected.shape[0]}")
    if predicted.shape[0] < min_len:
        raise ValueError(f"need at least {min_len} samples, got {predicted.shape[0]}")
    return predicted, expected


def nmse(predicted, expected) -> float:
    """Mean squared error divided by the population variance of the expected series.

    0 means perfect prediction; 1 is the level of the constant mean predictor.
    """
    predicted, expected = _as_pair(predicted, expected, min_len=2)
    variance = expected.var()
    if variance <= 0:
        raise ValueError("expected sequence has zero variance; NMSE is undefined")
    return float(np.mean((predicted - expected) ** 2) / variance)


def nrmse(predicted, expected) -> float:
    """sqrt of nmse."""
    return float(np.sqrt(nmse(predicted, expected)))


def quantize_to_alphabet(values, alphabet) -> np.ndarray:
    """Map each value to the nearest alphabet symbol; ties go to the smaller symbol."""
    values = np.asarray(values, dtype=np.float64).ravel()
    alphabet = np.asarray(alphabet, dtype=np.float64).ravel()
    if alphabet.size == 0:
        raise ValueError("alphabet must be non-empty")
    if np.any(np.diff(alphabet) <= 0):
        raise ValueError("alphabet must be sorted strictly increasing")
    midpoints = (alphabet[:-1] + alphabet[1:]) / 2.0
    # side="left": a value equal to a midpoint falls into the lower bin.
    return alphabet[np.searchsorted(midpoints, values, side="left")]


def ser(predicted_values, true_symbols, alphabet) -> float:
    """Symbol error rate after quantizing predictions to the alphabet."""
    predicted, expected = _as_pair(predicted_values, true_symbols, min_len=1)
    decided = quantize_to_alphabet(predicted, alphabet)
    return float(np.mean(decided != expected))


def wer(predicted_labels, true_labels) -> float:
    """Fraction of mismatched labels (isolated-word error rate)."""
    predicted = np.asarray(predicted_labels).ravel()
    expected = np.asarray(true_labels).ravel()
    if predicted.shape != expected.shape:
        raise ValueError(f"length mismatch: {predicted.shape[0]} vs {expected.shape[0]}")
    if predicted.shape[0] < 1:
        raise ValueError("need at least one label")
    return float(np.mean(predicted != expected))
