"""Linear classification readout over pooled graph embeddings.

The only trained part of any model here.  Embeddings get a constant-1
feature appended (readout bias), targets are the -1/+1 encodings from the
data module, and the weights come out of the closed-form ridge solution.
Binary tasks use a single output decoded by sign; multi-class tasks use
one output per class decoded by argmax.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .data import TargetEncoding
from .numerics import ridge_solve_sweep


@dataclass(frozen=True, eq=False)
class Readout:
    """Trained readout; `weights` is (output_dim, hidden_units + 1) with
    the bias in the last column."""

    weights: np.ndarray
    num_classes: int
    beta: float

    def __post_init__(self):
        weights = np.asarray(self.weights, dtype=np.float64)
        if weights.ndim != 2:
            raise ValueError("readout weights must be 2-D")
        expected = 1 if self.num_classes == 2 else self.num_classes
        if weights.shape[0] != expected:
            raise ValueError(
                f"{self.num_classes}-class readout needs {expected} output "
                f"row(s), got {weights.shape[0]}"
            )
        if not np.all(np.isfinite(weights)):
            raise ValueError("readout weights must be finite")
        object.__setattr__(self, "weights", weights)

    @property
    def hidden_units(self) -> int:
        return self.weights.shape[1] - 1

    @property
    def output_dim(self) -> int:
        return self.weights.shape[0]


def train_readout_sweep(
    embeddings: np.ndarray, targets: TargetEncoding, betas
) -> list[Readout]:
    """Fit one readout per regularizer value on shared embeddings.

    The bias-augmented design matrix is factorized once, so sweeping the
    whole regularizer grid costs barely more than a single fit.  The bias
    row is regularized together with the weights.
    """
    embeddings = np.asarray(embeddings, dtype=np.float64)
    if embeddings.ndim != 2 or embeddings.shape[0] == 0:
        raise ValueError(
            f"embeddings must be (num_graphs, hidden_units) and non-empty, "
            f"got shape {embeddings.shape}"
        )
    if embeddings.shape[0] != targets.vectors.shape[0]:
        raise ValueError(
            f"{embeddings.shape[0]} embeddings vs "
            f"{targets.vectors.shape[0]} targets"
        )
    betas = [float(b) for b in betas]
    design = np.vstack([embeddings.T, np.ones((1, embeddings.shape[0]))])
    stacked = ridge_solve_sweep(design, targets.vectors.T, betas)
    return [
        Readout(weights=stacked[j], num_classes=targets.num_classes, beta=beta)
        for j, beta in enumerate(betas)
    ]


def train_readout(
    embeddings: np.ndarray, targets: TargetEncoding, beta: float
) -> Readout:
    """Fit the readout on (num_graphs, hidden_units) embeddings."""
    return train_readout_sweep(embeddings, targets, (beta,))[0]


def predict_scores(readout: Readout, embedding: np.ndarray) -> np.ndarray:
    """Score one embedding: weights @ [embedding; 1]."""
    embedding = np.asarray(embedding, dtype=np.float64)
    if embedding.shape != (readout.hidden_units,):
        raise ValueError(
            f"embedding shape {embedding.shape}, expected "
            f"({readout.hidden_units},)"
        )
    return readout.weights[:, :-1] @ embedding + readout.weights[:, -1]


def decode(readout: Readout, scores: np.ndarray) -> int:
    """Turn scores into a class index.

    Binary: sign rule with 0 mapping to class 1.  Multi-class: argmax,
    ties broken toward the lowest index.
    """
    scores = np.asarray(scores, dtype=np.float64)
    if scores.shape != (readout.output_dim,):
        raise ValueError(
            f"scores shape {scores.shape}, expected ({readout.output_dim},)"
        )
    if readout.num_classes == 2:
        return 1 if scores[0] >= 0 else 0
    return int(np.argmax(scores))


def predict_classes(readout: Readout, embeddings: np.ndarray) -> np.ndarray:
    """Decode many embeddings at once; rows are embeddings."""
    embeddings = np.asarray(embeddings, dtype=np.float64)
    if embeddings.ndim != 2 or embeddings.shape[1] != readout.hidden_units:
        raise ValueError(
            f"embeddings shape {embeddings.shape}, expected "
            f"(num_graphs, {readout.hidden_units})"
        )
    scores = embeddings @ readout.weights[:, :-1].T + readout.weights[:, -1]
    if readout.num_classes == 2:
        return np.where(scores[:, 0] >= 0, 1, 0).astype(np.int64)
    return np.argmax(scores, axis=1).astype(np.int64)
