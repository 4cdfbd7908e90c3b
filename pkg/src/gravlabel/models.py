"""End classifiers trained on aggregated weak labels.

Three models close the loop: an L2-regularized logistic regression fit by
gradient descent with backtracking line search, a k-nearest-neighbors
voter, and naive Bayes (Gaussian on numeric features, Bernoulli on token
presence for text). All are deterministic given their inputs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateTrainingError, InputError

_TIE_EPS = 1e-12  # distance floor for knn's weighted tie-break


@dataclass(frozen=True)
class Metrics:
    accuracy: float
    precision: float
    recall: float
    f1: float

    def as_dict(self) -> dict:
        return {
            "accuracy": self.accuracy,
            "precision": self.precision,
            "recall": self.recall,
            "f1": self.f1,
        }


@dataclass(frozen=True)
class ModelSpec:
    """Which end model to train, and its hyperparameters."""

    kind: str = "logreg"
    c: float = 1000.0          # inverse regularization strength
    max_iter: int = 2000
    tol: float = 1e-6
    k: int = 5                 # neighbors (odd avoids binary ties)
    var_smoothing: float = 1e-9
    nb_variant: str = "gaussian"  # or "bernoulli" (token presence)

    def __post_init__(self):
        if self.kind not in ("logreg", "knn", "naive_bayes"):
            raise InputError(f"unknown end model {self.kind!r}")
        if self.c <= 0:
            raise InputError("C must be positive")
        if self.k < 1:
            raise InputError("k must be >= 1")
        if self.var_smoothing <= 0:
            raise InputError("var_smoothing must be positive")
        if self.nb_variant not in ("gaussian", "bernoulli"):
            raise InputError(f"unknown naive Bayes variant {self.nb_variant!r}")


def _check_two_classes(y: np.ndarray) -> None:
    if len(np.unique(y)) < 2:
        raise DegenerateTrainingError(
            "training set contains a single class; the end model cannot fit"
        )


def logreg_loss_and_grad(params: np.ndarray, X: np.ndarray, y: np.ndarray,
                         c: float) -> tuple[float, np.ndarray]:
    """Negative log-likelihood plus |w|^2/(2C); bias is unregularized.

    ``params`` stacks [w, b]. Exposed as a plain function so the gradient
    can be checked against finite differences.
    """
    w, b = params[:-1], params[-1]
    z = X @ w + b
    s = 2.0 * y - 1.0
    loss = float(np.logaddexp(0.0, -s * z).sum() + (w @ w) / (2.0 * c))
    residual = 1.0 / (1.0 + np.exp(-z)) - y
    grad = np.concatenate([X.T @ residual + w / c, [residual.sum()]])
    return loss, grad


class LogisticRegressionGD:
    """Binary logistic regression minimized by monotone gradient descent."""

    def __init__(self, c: float = 1000.0, max_iter: int = 2000,
                 tol: float = 1e-6):
        self.c = c
        self.max_iter = max_iter
        self.tol = tol
        self.w = None
        self.b = 0.0
        self.n_iter_ = 0
        self.converged_ = False
        self.loss_path_: list[float] = []

    def fit(self, X: np.ndarray, y: np.ndarray) -> "LogisticRegressionGD":
        X = np.asarray(X, dtype=np.float64)
        y = np.asarray(y, dtype=np.float64)
        _check_two_classes(y)
        params = np.zeros(X.shape[1] + 1)
        loss, grad = logreg_loss_and_grad(params, X, y, self.c)
        self.loss_path_ = [loss]
        step = 1.0 / max(1.0, float(np.abs(X).sum(axis=1).max()))
        for it in range(self.max_iter):
            if float(np.max(np.abs(grad))) < self.tol:
                self.converged_ = True
                break
            gsq = float(grad @ grad)
            while True:
                candidate = params - step * grad
                new_loss, new_grad = logreg_loss_and_grad(candidate, X, y, self.c)
                if new_loss <= loss - 1e-4 * step * gsq:
                    break
                step *= 0.5
                if step < 1e-18:
                    candidate, new_loss, new_grad = params, loss, grad
                    break
            params, loss, grad = candidate, new_loss, new_grad
            self.loss_path_.append(loss)
            step *= 2.0
            self.n_iter_ = it + 1
        self.w = params[:-1]
        self.b = float(params[-1])
        return self

    def decision_function(self, X: np.ndarray) -> np.ndarray:
        X = np.asarray(X, dtype=np.float64)
        if X.shape[1] != len(self.w):
            raise InputError("feature dimensionality differs from training")
        return X @ self.w + self.b

    def predict(self, X: np.ndarray) -> np.ndarray:
        # probability >= 0.5  <=>  z >= 0, so a zero model predicts class 1
        return (self.decision_function(X) >= 0.0).astype(np.int8)


class KNeighbors:
    """k-nearest-neighbors with a deterministic tie policy.

    Neighbor selection orders by (distance, training index); a tied vote
    goes to class 1 iff its inverse-distance weight is at least class 0's.
    """

    def __init__(self, k: int = 5):
        self.k = k
        self.X = None
        self.y = None

    def fit(self, X: np.ndarray, y: np.ndarray) -> "KNeighbors":
        X = np.asarray(X, dtype=np.float64)
        y = np.asarray(y, dtype=np.int8)
        if len(X) < self.k:
            raise DegenerateTrainingError(
                f"knn needs at least k={self.k} training points, got {len(X)}"
            )
        self.X = X
        self.y = y
        return self

    def predict(self, X: np.ndarray) -> np.ndarray:
        X = np.asarray(X, dtype=np.float64)
        if X.shape[1] != self.X.shape[1]:
            raise InputError("feature dimensionality differs from training")
        out = np.empty(len(X), dtype=np.int8)
        train_idx = np.arange(len(self.X))
        for i, x in enumerate(X):
            dist = np.sqrt(((self.X - x) ** 2).sum(axis=1))
            order = np.lexsort((train_idx, dist))[: self.k]
            votes = self.y[order]
            ones = int((votes == 1).sum())
            zeros = self.k - ones
            if ones != zeros:
                out[i] = 1 if ones > zeros else 0
            else:
                weights = 1.0 / np.maximum(dist[order], _TIE_EPS)
                w1 = float(weights[votes == 1].sum())
                w0 = float(weights[votes == 0].sum())
                out[i] = 1 if w1 >= w0 else 0
        return out


class NaiveBayes:
    """Gaussian naive Bayes, or Bernoulli over token presence for text."""

    def __init__(self, variant: str = "gaussian", var_smoothing: float = 1e-9):
        self.variant = variant
        self.var_smoothing = var_smoothing
        self.log_prior = None
        self.theta = None     # gaussian: means;    bernoulli: log P(t|c)
        self.sigma2 = None    # gaussian: variances; bernoulli: log(1 - P(t|c))

    def fit(self, X: np.ndarray, y: np.ndarray) -> "NaiveBayes":
        X = np.asarray(X, dtype=np.float64)
        y = np.asarray(y, dtype=np.int8)
        _check_two_classes(y)
        counts = np.array([(y == 0).sum(), (y == 1).sum()], dtype=np.float64)
        self.log_prior = np.log(counts / counts.sum())
        if self.variant == "gaussian":
            eps = self.var_smoothing * float(np.var(X, axis=0).max())
            self.theta = np.stack([X[y == c].mean(axis=0) for c in (0, 1)])
            self.sigma2 = np.stack([X[y == c].var(axis=0) + eps for c in (0, 1)])
        else:
            present = (X > 0).astype(np.float64)
            rates = np.stack([
                (present[y == c].sum(axis=0) + 1.0) / (counts[c] + 2.0)
                for c in (0, 1)
            ])  # add-one smoothing on document presence
            self.theta = np.log(rates)
            self.sigma2 = np.log1p(-rates)
        return self

    def _log_joint(self, X: np.ndarray) -> np.ndarray:
        X = np.asarray(X, dtype=np.float64)
        if X.shape[1] != self.theta.shape[1]:
            raise InputError("feature dimensionality differs from training")
        if self.variant == "gaussian":
            scores = []
            for c in (0, 1):
                ll = -0.5 * (np.log(2.0 * math.pi * self.sigma2[c])
                             + (X - self.theta[c]) ** 2 / self.sigma2[c]).sum(axis=1)
                scores.append(ll + self.log_prior[c])
            return np.stack(scores, axis=1)
        present = (X > 0).astype(np.float64)
        scores = []
        for c in (0, 1):
            ll = present @ self.theta[c] + (1.0 - present) @ self.sigma2[c]
            scores.append(ll + self.log_prior[c])
        return np.stack(scores, axis=1)

    def predict(self, X: np.ndarray) -> np.ndarray:
        joint = self._log_joint(X)
        return (joint[:, 1] >= joint[:, 0]).astype(np.int8)


def train(spec: ModelSpec, features: np.ndarray, labels: np.ndarray):
    """Fit the end model named by ``spec`` on a weakly-labeled training set."""
    if len(features) != len(labels):
        raise InputError("features and labels disagree on length")
    if spec.kind == "logreg":
        return LogisticRegressionGD(c=spec.c, max_iter=spec.max_iter,
                                    tol=spec.tol).fit(features, labels)
    if spec.kind == "knn":
        return KNeighbors(k=spec.k).fit(features, labels)
    return NaiveBayes(variant=spec.nb_variant,
                      var_smoothing=spec.var_smoothing).fit(features, labels)


def predict(model, features: np.ndarray) -> np.ndarray:
    return model.predict(features)


def evaluate(predictions: np.ndarray, truth: np.ndarray) -> Metrics:
    """Accuracy/precision/recall/F1 with class 1 as positive.

    Conventions for empty denominators: precision 0 without positive
    predictions, recall 0 without positive truth, F1 0 when both are 0.
    """
    predictions = np.asarray(predictions)
    truth = np.asarray(truth)
    if len(predictions) != len(truth):
        raise InputError("predictions and truth disagree on length")
    if len(truth) == 0:
        raise InputError("cannot evaluate on an empty set")
    tp = int(((predictions == 1) & (truth == 1)).sum())
    fp = int(((predictions == 1) & (truth == 0)).sum())
    fn = int(((predictions == 0) & (truth == 1)).sum())
    accuracy = float((predictions == truth).mean())
    precision = tp / (tp + fp) if tp + fp else 0.0
    recall = tp / (tp + fn) if tp + fn else 0.0
    f1 = (2.0 * precision * recall / (precision + recall)
          if precision + recall else 0.0)
    return Metrics(accuracy=accuracy, precision=float(precision),
                   recall=float(recall), f1=float(f1))
