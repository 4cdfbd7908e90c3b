"""Collapse a label matrix into one training label per point."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .data import Dataset
from .errors import InputError, NoTrainingDataError
from .lf import ABSTAIN, LabelMatrix


@dataclass(frozen=True)
class AggregatedLabels:
    """Per-point labels in {0, 1, -1}; -1 means no decision."""

    labels: np.ndarray

    @property
    def labeled_count(self) -> int:
        return int(np.count_nonzero(self.labels != ABSTAIN))


def majority_vote(mat: LabelMatrix) -> AggregatedLabels:
    """Strict majority among non-abstaining LFs; ties and no-votes abstain."""
    e = mat.entries
    ones = (e == 1).sum(axis=1)
    zeros = (e == 0).sum(axis=1)
    labels = np.full(mat.k, ABSTAIN, dtype=np.int8)
    labels[ones > zeros] = 1
    labels[zeros > ones] = 0
    return AggregatedLabels(labels=labels)


def training_set(agg: AggregatedLabels, d: Dataset) -> tuple[np.ndarray, np.ndarray]:
    """Features and labels of the decided points, in point-id order."""
    if len(agg.labels) != len(d):
        raise InputError("aggregated labels and dataset disagree on k")
    mask = agg.labels != ABSTAIN
    if not mask.any():
        raise NoTrainingDataError(
            "no point received a label; cannot train an end model"
        )
    features = d.model_features()[mask]
    return features, agg.labels[mask].astype(np.int8)
