import json
from pathlib import Path

import numpy as np
import pytest

from gravlabel.data import Dataset

REPO = Path(__file__).resolve().parent.parent
FIXTURES = REPO / "fixtures"
LFS = REPO / "lfs"
DATA = REPO / "data"  # real datasets, populated by scripts/fetch_datasets.py

FIXTURE_DATASETS = {
    "redwine": {
        "path": FIXTURES / "redwine_sample.csv",
        "kind": "numeric",
        "lf": LFS / "redwine.lf",
        "truth_column": "quality",
        "truth_rule": "wine_quality",
    },
    "whitewine": {
        "path": FIXTURES / "whitewine_sample.csv",
        "kind": "numeric",
        "lf": LFS / "whitewine.lf",
        "truth_column": "quality",
        "truth_rule": "wine_quality",
    },
    "weather": {
        "path": FIXTURES / "weather_sample.csv",
        "kind": "numeric",
        "lf": LFS / "weather.lf",
        "truth_column": "RainTomorrow",
        "truth_rule": "binary",
    },
    "youtube": {
        "path": FIXTURES / "youtube_sample.csv",
        "kind": "text",
        "lf": LFS / "youtube_keywords.lf",
        "text_column": "CONTENT",
        "truth_column": "CLASS",
        "truth_rule": "binary",
    },
}


def numeric_dataset(X, truth=None, names=None):
    X = np.asarray(X, dtype=np.float64)
    return Dataset(
        kind="numeric",
        feature_names=tuple(names or (f"f{j}" for j in range(X.shape[1]))),
        X=X,
        point_ids=np.arange(len(X), dtype=np.int64),
        truth=None if truth is None else np.asarray(truth, dtype=np.int8),
    )


@pytest.fixture
def golden_trace():
    with open(FIXTURES / "golden_trace.json", encoding="utf-8") as fh:
        return json.load(fh)


def write_config(path: Path, body: str) -> Path:
    path.write_text(body, encoding="utf-8")
    return path


def assert_augmented_matches(result, want_matrix, exact: bool):
    """Augmented matrices must agree cell-for-cell.

    Strict boundary comparisons are summation-order sensitive when a
    cell's effect mathematically equals a boundary, so backends that
    reorder sums (BLAS) may flip exactly those cells. With ``exact``
    False, a mismatched cell is accepted only if it is such a tie: its
    effect sits within 1e-9 (relative) of a boundary.
    """
    got = result.matrix.entries
    mismatched = np.argwhere(got != np.asarray(want_matrix, dtype=np.int8))
    if exact:
        assert mismatched.size == 0, f"cells differ: {mismatched.tolist()}"
        return
    bounds = (result.boundaries if isinstance(result.boundaries, list)
              else [result.boundaries] * got.shape[1])
    scale = max(1.0, float(np.abs(result.effects).max()))
    for i, l in mismatched:
        eff = result.effects[i, l]
        gap = min(abs(eff - bounds[l].b_neg), abs(eff - bounds[l].b_pos))
        assert gap <= 1e-9 * scale, (
            f"cell ({i},{l}) differs but is not a boundary tie "
            f"(effect {eff!r}, gap {gap!r})")
