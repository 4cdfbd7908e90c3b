"""Dataset ingestion, normalization, text vectorization, and splitting.

Numeric datasets come from CSV files with a header row; every feature is
min-max scaled to [0, 1] before labeling functions see it. Text datasets
keep the raw strings (keyword rules match on them) and are vectorized
against a vocabulary built from the training split only.
"""

from __future__ import annotations

import csv
import math
import re
import warnings
from dataclasses import dataclass, replace

import numpy as np

from .errors import InputError, SchemaError

_TOKEN_RE = re.compile(r"[a-z0-9]+")

# Fraction of features a row may miss before it is dropped at load time.
_MAX_MISSING_FRACTION = 0.5


@dataclass(frozen=True)
class FeatureVector:
    """One data point, as seen by labeling functions and metrics.

    ``values`` is always dense; for text points it is the one-hot encoding
    (possibly empty before vectorization) and ``text`` carries the raw string.
    ``missing[j]`` is True when feature j was absent in the source file.
    """

    values: np.ndarray
    missing: np.ndarray | None = None
    text: str | None = None
    names: tuple[str, ...] | None = None

    def feature(self, name: str) -> tuple[float, bool]:
        """Value of a named feature and whether it was present."""
        if self.names is None or name not in self.names:
            raise SchemaError(f"unknown feature {name!r}")
        j = self.names.index(name)
        absent = bool(self.missing[j]) if self.missing is not None else False
        return float(self.values[j]), not absent


@dataclass(frozen=True)
class Vocabulary:
    """Token -> column index map built from a training corpus."""

    index: dict[str, int]

    def __len__(self) -> int:
        return len(self.index)

    @property
    def tokens(self) -> tuple[str, ...]:
        ordered = sorted(self.index, key=self.index.__getitem__)
        return tuple(ordered)


@dataclass(frozen=True)
class Dataset:
    """An immutable collection of points with parallel per-point arrays.

    ``X`` holds the dense feature matrix used for distance computation
    (normalized numerics, or one-hot token presence for text). ``counts``
    is only present for vectorized text datasets and feeds the end models.
    ``point_ids`` are the row indices in the originally loaded file; splits
    keep them, so a (train, test) pair partitions the parent's ids.
    """

    kind: str  # "numeric" | "text"
    feature_names: tuple[str, ...]
    X: np.ndarray
    point_ids: np.ndarray
    truth: np.ndarray | None = None
    missing: np.ndarray | None = None
    texts: tuple[str, ...] | None = None
    counts: np.ndarray | None = None
    vocab: Vocabulary | None = None

    def __post_init__(self):
        if self.kind not in ("numeric", "text"):
            raise InputError(f"unknown dataset kind {self.kind!r}")
        if not np.all(np.isfinite(self.X)):
            raise InputError("feature matrix contains NaN or infinite entries")
        if len(self.point_ids) != len(self.X):
            raise InputError("point_ids and X disagree on the number of points")
        if self.truth is not None and not np.isin(self.truth, (0, 1)).all():
            raise InputError("truth labels must be 0 or 1")

    def __len__(self) -> int:
        return len(self.X)

    @property
    def n_features(self) -> int:
        return self.X.shape[1]

    def feature_index(self, name: str) -> int:
        try:
            return self.feature_names.index(name)
        except ValueError:
            raise SchemaError(f"unknown feature {name!r}") from None

    def point(self, i: int) -> FeatureVector:
        return FeatureVector(
            values=self.X[i],
            missing=None if self.missing is None else self.missing[i],
            text=None if self.texts is None else self.texts[i],
            names=self.feature_names,
        )

    def model_features(self) -> np.ndarray:
        """Feature matrix for the end models (token counts for text)."""
        if self.kind == "text":
            if self.counts is None:
                raise InputError("text dataset has not been vectorized")
            return self.counts
        return self.X

    def take(self, idx: np.ndarray) -> "Dataset":
        """Row subset; all parallel arrays are sliced together."""
        return replace(
            self,
            X=self.X[idx],
            point_ids=self.point_ids[idx],
            truth=None if self.truth is None else self.truth[idx],
            missing=None if self.missing is None else self.missing[idx],
            texts=None if self.texts is None else tuple(self.texts[i] for i in idx),
            counts=None if self.counts is None else self.counts[idx],
        )


def _parse_cell(raw: str, column: str, line_no: int) -> float:
    text = raw.strip()
    if text == "" or text.upper() in ("NA", "NAN", "NULL"):
        return math.nan
    try:
        return float(text)
    except ValueError:
        raise InputError(
            f"line {line_no}: cannot parse {column}={raw!r} as a number"
        ) from None


def load_tabular(
    path,
    feature_columns: list[str] | None = None,
    truth_column: str | None = None,
    truth_transform=None,
) -> Dataset:
    """Load a comma-separated numeric dataset.

    ``feature_columns`` defaults to every column except the truth column.
    Missing cells (empty/NA) are marked absent and imputed with the column
    median; rows missing more than half their features are dropped with a
    warning. ``truth_transform`` maps raw truth cells to {0, 1} (e.g. the
    wine-quality rule); without it the truth column must already be 0/1.
    """
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise InputError(f"{path}: empty file, expected a header row") from None
        header = [h.strip() for h in header]
        if feature_columns is None:
            feature_columns = [c for c in header if c != truth_column]
        for col in feature_columns:
            if col not in header:
                raise SchemaError(f"{path}: missing feature column {col!r}")
        if truth_column is not None and truth_column not in header:
            raise SchemaError(f"{path}: missing truth column {truth_column!r}")
        feat_pos = [header.index(c) for c in feature_columns]
        truth_pos = header.index(truth_column) if truth_column else None

        rows, truths, dropped = [], [], 0
        for line_no, record in enumerate(reader, start=2):
            if not record or all(cell.strip() == "" for cell in record):
                continue
            if len(record) < len(header):
                raise InputError(
                    f"{path} line {line_no}: {len(record)} cells, "
                    f"expected {len(header)}"
                )
            values = [_parse_cell(record[p], header[p], line_no) for p in feat_pos]
            n_missing = sum(math.isnan(v) for v in values)
            if n_missing > _MAX_MISSING_FRACTION * len(values):
                dropped += 1
                continue
            if truth_pos is not None:
                raw = record[truth_pos].strip()
                try:
                    label = (truth_transform(raw) if truth_transform
                             else int(float(raw)))
                except (ValueError, TypeError):
                    raise InputError(
                        f"{path} line {line_no}: cannot parse truth value "
                        f"{raw!r}"
                    ) from None
                if label not in (0, 1):
                    raise InputError(
                        f"{path} line {line_no}: truth value {raw!r} is not 0/1"
                    )
                truths.append(label)
            rows.append(values)

    if dropped:
        warnings.warn(
            f"{path}: dropped {dropped} rows missing more than "
            f"{_MAX_MISSING_FRACTION:.0%} of their features"
        )

    X = np.asarray(rows, dtype=np.float64).reshape(len(rows), len(feature_columns))
    missing = np.isnan(X)
    if len(rows):
        for j in range(X.shape[1]):
            col = X[:, j]
            observed = col[~np.isnan(col)]
            if observed.size == 0:
                warnings.warn(f"{path}: column {feature_columns[j]!r} is fully missing")
                fill = 0.0
            else:
                fill = float(np.median(observed))
            col[np.isnan(col)] = fill
    return Dataset(
        kind="numeric",
        feature_names=tuple(feature_columns),
        X=X,
        point_ids=np.arange(len(rows), dtype=np.int64),
        truth=np.asarray(truths, dtype=np.int8) if truth_column else None,
        missing=missing,
    )


def save_tabular(d: Dataset, path, truth_column: str | None = None) -> None:
    """Re-export a numeric dataset to the CSV schema it was loaded from."""
    if d.kind != "numeric":
        raise InputError("only numeric datasets can be exported to CSV")
    header = list(d.feature_names)
    if truth_column is not None and d.truth is not None:
        header.append(truth_column)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for i in range(len(d)):
            row = [repr(float(v)) for v in d.X[i]]
            if truth_column is not None and d.truth is not None:
                row.append(str(int(d.truth[i])))
            writer.writerow(row)


def minmax_normalize(d: Dataset) -> Dataset:
    """Scale every feature to [0, 1]; constant features collapse to 0."""
    if d.kind != "numeric":
        raise InputError("minmax_normalize applies to numeric datasets")
    if len(d) == 0:
        raise InputError("cannot normalize an empty dataset")
    lo = d.X.min(axis=0)
    hi = d.X.max(axis=0)
    span = hi - lo
    scaled = np.where(span > 0, (d.X - lo) / np.where(span > 0, span, 1.0), 0.0)
    return replace(d, X=scaled)


def label_wine_truth(quality: int) -> int:
    """Binary wine label: good (1) strictly above quality 5, else bad (0)."""
    quality = int(quality)
    if not 0 <= quality <= 10:
        raise InputError(f"wine quality {quality} outside 0..10")
    return 1 if quality > 5 else 0


def wine_truth_from_cell(raw: str) -> int:
    return label_wine_truth(int(float(raw)))


def tokenize(text: str) -> list[str]:
    """Lowercase tokens split on non-alphanumeric runs; empties dropped."""
    return _TOKEN_RE.findall(text.lower())


def build_vocabulary(texts) -> Vocabulary:
    """Vocabulary over all tokens of a corpus, indexed in sorted order."""
    seen = set()
    for text in texts:
        seen.update(tokenize(text))
    return Vocabulary(index={tok: i for i, tok in enumerate(sorted(seen))})


def vectorize(tokens: list[str], vocab: Vocabulary, mode: str = "counts") -> dict[int, int]:
    """Sparse token vector: column -> count (or presence for ``onehot``)."""
    if mode not in ("onehot", "counts"):
        raise InputError(f"unknown vectorize mode {mode!r}")
    vec: dict[int, int] = {}
    for tok in tokens:
        col = vocab.index.get(tok)
        if col is None:
            continue  # out-of-vocabulary tokens are ignored
        vec[col] = 1 if mode == "onehot" else vec.get(col, 0) + 1
    return vec


def load_text_table(path, text_column: str, truth_column: str | None = None) -> Dataset:
    """Load a text corpus from a CSV column (not yet vectorized)."""
    texts, truths = [], []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = [h.strip() for h in next(reader)]
        except StopIteration:
            raise InputError(f"{path}: empty file, expected a header row") from None
        if text_column not in header:
            raise SchemaError(f"{path}: missing text column {text_column!r}")
        if truth_column is not None and truth_column not in header:
            raise SchemaError(f"{path}: missing truth column {truth_column!r}")
        text_pos = header.index(text_column)
        truth_pos = header.index(truth_column) if truth_column else None
        for line_no, record in enumerate(reader, start=2):
            if not record:
                continue
            texts.append(record[text_pos])
            if truth_pos is not None:
                raw = record[truth_pos].strip()
                if raw not in ("0", "1"):
                    raise InputError(
                        f"{path} line {line_no}: truth value {raw!r} is not 0/1"
                    )
                truths.append(int(raw))
    k = len(texts)
    return Dataset(
        kind="text",
        feature_names=(),
        X=np.zeros((k, 0), dtype=np.float64),
        point_ids=np.arange(k, dtype=np.int64),
        truth=np.asarray(truths, dtype=np.int8) if truth_column else None,
        texts=tuple(texts),
    )


def load_text_lines(path) -> Dataset:
    """Load a one-record-per-line text corpus (no truth labels)."""
    with open(path, encoding="utf-8") as fh:
        texts = [line.rstrip("\n") for line in fh if line.strip()]
    return Dataset(
        kind="text",
        feature_names=(),
        X=np.zeros((len(texts), 0), dtype=np.float64),
        point_ids=np.arange(len(texts), dtype=np.int64),
        texts=tuple(texts),
    )


def vectorize_dataset(d: Dataset, vocab: Vocabulary) -> Dataset:
    """Attach one-hot (distances) and count (end models) matrices to a corpus."""
    if d.kind != "text":
        raise InputError("vectorize_dataset applies to text datasets")
    k, v = len(d), len(vocab)
    counts = np.zeros((k, v), dtype=np.float64)
    for i, text in enumerate(d.texts):
        for col, c in vectorize(tokenize(text), vocab, mode="counts").items():
            counts[i, col] = c
    onehot = (counts > 0).astype(np.float64)
    return replace(
        d,
        X=onehot,
        counts=counts,
        vocab=vocab,
        feature_names=vocab.tokens,
    )


def split(d: Dataset, train_fraction: float, seed: int) -> tuple[Dataset, Dataset]:
    """Deterministic shuffled partition into (train, test).

    The train side gets floor(k * fraction) points (with a tiny epsilon so
    exact products like 10 * 0.3 do not round down); truth labels and all
    other per-point data travel with their points.
    """
    if not 0.0 < train_fraction < 1.0:
        raise InputError(f"train_fraction {train_fraction} outside (0, 1)")
    k = len(d)
    if k < 2:
        raise InputError("need at least 2 points to split")
    n_train = int(math.floor(k * train_fraction + 1e-9))
    n_train = min(max(n_train, 1), k - 1)
    order = np.random.default_rng(seed).permutation(k)
    return d.take(np.sort(order[:n_train])), d.take(np.sort(order[n_train:]))
