"""Trained linear output layer over reservoir states.

The readout is an affine map ``output(n) = weights @ states(n) + bias`` fitted
by ridge regression.  The bias is excluded from the ridge penalty: the fit
appends a constant-one column to the state matrix and only the state columns
are penalized.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .errors import NumericError


@dataclass
class ReadoutModel:
    weights: np.ndarray  # (output_channels, node_count)
    bias: np.ndarray  # (output_channels,)
    ridge_lambda: float

    def __post_init__(self):
        self.weights = np.atleast_2d(np.asarray(self.weights, dtype=np.float64))
        self.bias = np.atleast_1d(np.asarray(self.bias, dtype=np.float64))
        if self.weights.shape[0] != self.bias.shape[0]:
            raise ValueError(
                f"weights rows ({self.weights.shape[0]}) must match bias length ({self.bias.shape[0]})"
            )
        if not (np.isfinite(self.weights).all() and np.isfinite(self.bias).all()):
            raise ValueError("weights and bias must be finite")

    @property
    def channels(self) -> int:
        return self.weights.shape[0]

    @property
    def node_count(self) -> int:
        return self.weights.shape[1]

    def to_json(self) -> str:
        return json.dumps(
            {
                "channels": self.channels,
                "nodes": self.node_count,
                "lambda": self.ridge_lambda,
                "weights": self.weights.tolist(),
                "bias": self.bias.tolist(),
            }
        )

    @classmethod
    def from_json(cls, text: str) -> "ReadoutModel":
        doc = json.loads(text)
        model = cls(
            weights=np.asarray(doc["weights"], dtype=np.float64),
            bias=np.asarray(doc["bias"], dtype=np.float64),
            ridge_lambda=float(doc["lambda"]),
        )
        if model.channels != doc["channels"] or model.node_count != doc["nodes"]:
            raise ValueError("serialized shape fields disagree with weight matrix")
        return model


def train_readout(
    states: np.ndarray,
    targets: np.ndarray,
    ridge_lambda: float = 1e-6,
    step_mask: np.ndarray | None = None,
) -> ReadoutModel:
    """Fit output weights by ridge-regularized least squares.

    Minimizes ``||S @ W.T + b - T||^2 + ridge_lambda * ||W||^2`` over the rows
    selected by ``step_mask`` (all rows when omitted); the bias is not
    penalized.  ``targets`` may be 1-D (one output channel) or
    (steps, channels).  Solved through an SVD-backed least-squares problem;
    with ``ridge_lambda = 0`` a rank-deficient system is an error rather than
    silently producing one of many minimizers.
    """
    states = np.asarray(states, dtype=np.float64)
    targets = np.asarray(targets, dtype=np.float64)
    if states.ndim != 2:
        raise ValueError(f"states must be 2-D (steps, nodes), got shape {states.shape}")
    if targets.ndim == 1:
        targets = targets[:, None]
    if targets.ndim != 2 or targets.shape[0] != states.shape[0]:
        raise ValueError(
            f"targets must have {states.shape[0]} rows, got shape {targets.shape}"
        )
    if ridge_lambda < 0 or not np.isfinite(ridge_lambda):
        raise ValueError(f"ridge_lambda must be finite and >= 0, got {ridge_lambda}")

    if step_mask is not None:
        step_mask = np.asarray(step_mask, dtype=bool)
        if step_mask.shape != (states.shape[0],):
            raise ValueError(
                f"step_mask must have shape ({states.shape[0]},), got {step_mask.shape}"
            )
        states = states[step_mask]
        targets = targets[step_mask]
    if states.shape[0] < 1:
        raise ValueError("no rows left to train on after masking")

    nodes = states.shape[1]
    design = np.hstack([states, np.ones((states.shape[0], 1))])
    if ridge_lambda == 0.0:
        solution, _, rank, _ = np.linalg.lstsq(design, targets, rcond=None)
        if rank < design.shape[1]:
            raise NumericError(
                "normal system is singular with ridge_lambda=0; set ridge_lambda > 0"
            )
    else:
        # Penalty rows sqrt(lambda)*I on the state columns only, so the
        # constant column's weight (the bias) escapes the penalty.
        penalty = np.hstack([np.sqrt(ridge_lambda) * np.eye(nodes), np.zeros((nodes, 1))])
        design = np.vstack([design, penalty])
        stacked_targets = np.vstack([targets, np.zeros((nodes, targets.shape[1]))])
        solution, _, _, _ = np.linalg.lstsq(design, stacked_targets, rcond=None)

    return ReadoutModel(
        weights=solution[:-1].T, bias=solution[-1], ridge_lambda=float(ridge_lambda)
    )


def predict(states: np.ndarray, model: ReadoutModel) -> np.ndarray:
    """Row-wise affine map: returns (steps, output_channels)."""
    states = np.asarray(states, dtype=np.float64)
    if states.ndim != 2 or states.shape[1] != model.node_count:
        raise ValueError(
            f"states must have shape (steps, {model.node_count}), got {states.shape}"
        )
    return states @ model.weights.T + model.bias


def classify_winner_take_all(
    outputs: np.ndarray, utterance_boundaries: list[tuple[int, int]]
) -> np.ndarray:
    """Label each utterance by the channel with the largest mean output.

    ``utterance_boundaries`` holds half-open frame ranges (start, stop).  Ties
    go to the lowest channel index.
    """
    outputs = np.asarray(outputs, dtype=np.float64)
    if outputs.ndim != 2:
        raise ValueError(f"outputs must be 2-D (frames, channels), got shape {outputs.shape}")
    labels = np.empty(len(utterance_boundaries), dtype=np.int64)
    for position, (start, stop) in enumerate(utterance_boundaries):
        if not (0 <= start < stop <= outputs.shape[0]):
            raise ValueError(
                f"utterance range ({start}, {stop}) is empty or outside 0..{outputs.shape[0]}"
            )
        labels[position] = int(np.argmax(outputs[start:stop].mean(axis=0)))
    return labels
