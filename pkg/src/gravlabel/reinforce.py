"""Gravitation-based label augmentation of a label matrix.

For every cell where an LF abstained, every point that the same LF did
label pulls on it with a signed force beta / distance**alpha (positive
pull toward class 1, negative toward class 0), ignoring points at or
beyond the distance cutoff eps_d. The per-cell sums form the effect
matrix. Cells whose aggregated effect falls outside a boundary pair get
the corresponding label; everything else keeps its abstain.

Boundaries come from one of three modes:

* ``fixed_epsilon``: symmetric (-epsilon, +epsilon) around zero.
* ``iqr_factor``:    (Q1 - IQR*h, Q3 + IQR*h) of the effect distribution.
* ``auto_iqr``:      same, with h = xi * sum(coverage) * sum(overlaps)
                     * sum(conflicts) computed from the pre-augmentation
                     LF statistics.

Quartiles use linear interpolation between closest ranks. By default the
quartile population is the aggregated effects of abstain cells only,
pooled over all LFs; both choices are switchable (``iqr_population``,
``iqr_scope``). All threshold comparisons are strict, so a degenerate
all-equal effect distribution fires nothing.

Two distinct points at distance zero (duplicate rows) would make the
force singular; their contribution is capped at beta / d_min**alpha,
where d_min is the smallest nonzero distance among the pairs the
aggregation actually examines (beta alone if there is none).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import backend as _backend
from .data import Dataset
from .distances import METRIC_CODES, MetricSpec, pairwise_matrix
from .errors import InputError
from .lf import ABSTAIN, LabelMatrix, LFStats, lf_stats

MODES = ("fixed_epsilon", "iqr_factor", "auto_iqr")
IQR_SCOPES = ("global", "per_lf")
IQR_POPULATIONS = ("abstain_only", "all_cells")

_ROW_BLOCK = 512  # row-block size for the vectorized backend


@dataclass(frozen=True)
class ReinforceParams:
    """Everything that parametrizes one augmentation pass."""

    metric: MetricSpec = field(default_factory=MetricSpec)
    alpha: float = 1.0
    beta: float = 1.0
    epsilon_d: float = math.inf
    mode: str = "auto_iqr"
    epsilon: float | None = None
    h_iqr: float | None = None
    xi: float = 0.35
    iqr_scope: str = "global"
    iqr_population: str = "abstain_only"

    def __post_init__(self):
        if self.alpha <= 0 or self.beta <= 0:
            raise InputError("alpha and beta must be positive")
        if self.epsilon_d <= 0:
            raise InputError("epsilon_d must be positive")
        if self.mode not in MODES:
            raise InputError(f"unknown mode {self.mode!r}")
        if self.mode == "fixed_epsilon":
            if self.epsilon is None or self.epsilon < 0:
                raise InputError("fixed_epsilon mode needs epsilon >= 0")
        if self.mode == "iqr_factor":
            if self.h_iqr is None or self.h_iqr < 0:
                raise InputError("iqr_factor mode needs h_iqr >= 0")
        if self.xi <= 0:
            raise InputError("xi must be positive")
        if self.iqr_scope not in IQR_SCOPES:
            raise InputError(f"unknown iqr_scope {self.iqr_scope!r}")
        if self.iqr_population not in IQR_POPULATIONS:
            raise InputError(f"unknown iqr_population {self.iqr_population!r}")


@dataclass(frozen=True)
class Boundaries:
    """Effect thresholds: augment to 0 below b_neg, to 1 above b_pos."""

    b_neg: float
    b_pos: float

    def __post_init__(self):
        if self.b_neg > self.b_pos:
            raise InputError("b_neg must not exceed b_pos")


@dataclass(frozen=True)
class ReinforceResult:
    matrix: LabelMatrix
    effects: np.ndarray
    boundaries: Boundaries | list[Boundaries]
    diagnostics: dict


def effect(label: int, dist: float, p: ReinforceParams,
           min_nonzero_dist: float | None = None) -> float:
    """Signed pull of one labeled point on one abstain cell.

    Zero magnitude at or beyond the cutoff (strictly: only dist < eps_d
    attracts). A zero distance is capped with ``min_nonzero_dist`` as
    described in the module docstring.
    """
    if label not in (0, 1):
        raise InputError(f"label must be 0 or 1, got {label}")
    if dist < 0:
        raise InputError("distance must be non-negative")
    if dist >= p.epsilon_d:
        return 0.0
    if dist == 0.0:
        magnitude = (p.beta / min_nonzero_dist ** p.alpha
                     if min_nonzero_dist is not None else p.beta)
    else:
        magnitude = p.beta / dist ** p.alpha
    return magnitude if label == 1 else -magnitude


def _aggregate_python(entries: np.ndarray, X: np.ndarray,
                      p: ReinforceParams) -> tuple[np.ndarray, float | None]:
    k = len(X)
    D = pairwise_matrix(p.metric, X)
    abst = entries == ABSTAIN
    lab = ~abst

    # Pairs (i, j) the aggregation examines: i abstains for some LF that
    # labels j. d_min (the duplicate cap) is defined over exactly these.
    need = (abst.astype(np.float32) @ lab.astype(np.float32).T) > 0
    np.fill_diagonal(need, False)
    dmin = math.inf
    for a in range(0, k, _ROW_BLOCK):
        b = min(a + _ROW_BLOCK, k)
        block = D[a:b][need[a:b] & (D[a:b] > 0)]
        if block.size:
            dmin = min(dmin, float(block.min()))
    has_dmin = math.isfinite(dmin)
    cap = p.beta / dmin ** p.alpha if has_dmin else p.beta

    signs = np.zeros(entries.shape, dtype=np.float64)
    signs[entries == 1] = 1.0
    signs[entries == 0] = -1.0

    effects = np.zeros(entries.shape, dtype=np.float64)
    for a in range(0, k, _ROW_BLOCK):
        b = min(a + _ROW_BLOCK, k)
        block = D[a:b]
        with np.errstate(divide="ignore"):
            W = np.where(block > 0, p.beta / block ** p.alpha, cap)
        W[block >= p.epsilon_d] = 0.0
        for i in range(a, b):  # self-pairs never contribute
            W[i - a, i] = 0.0
        effects[a:b] = W @ signs
    effects[~abst] = 0.0
    return effects, (dmin if has_dmin else None)


def _aggregate_cython(entries: np.ndarray, X: np.ndarray,
                      p: ReinforceParams) -> tuple[np.ndarray, float | None]:
    from . import _gravity

    inv_cov = p.metric.inv_cov
    if p.metric.kind == "mahalanobis" and inv_cov is None:
        raise InputError("mahalanobis needs a precomputed inv_cov")
    effects, dmin, _ = _gravity.aggregate(
        np.ascontiguousarray(X, dtype=np.float64),
        np.ascontiguousarray(entries, dtype=np.int8),
        METRIC_CODES[p.metric.kind],
        float(p.metric.p),
        None if inv_cov is None else np.ascontiguousarray(inv_cov),
        float(p.alpha), float(p.beta), float(p.epsilon_d),
    )
    return effects, dmin


def aggregate_effects(mat: LabelMatrix, d: Dataset, p: ReinforceParams,
                      backend: str | None = None) -> np.ndarray:
    """Aggregated effect per cell (0 where the LF already labeled)."""
    effects, _ = _aggregate_with_dmin(mat, d, p, backend)
    return effects


def _aggregate_with_dmin(mat, d, p, backend=None):
    if mat.k != len(d):
        raise InputError("label matrix and dataset disagree on k")
    name = _backend.resolve_backend(backend)
    if name == "cython":
        return _aggregate_cython(mat.entries, d.X, p)
    return _aggregate_python(mat.entries, d.X, p)


def _bounds_from(values: np.ndarray, h: float) -> Boundaries:
    if values.size == 0:
        return Boundaries(0.0, 0.0)
    q1, q3 = np.percentile(values, [25.0, 75.0])
    iqr = q3 - q1
    return Boundaries(float(q1 - iqr * h), float(q3 + iqr * h))


def iqr_boundaries(effects: np.ndarray, mat: LabelMatrix, h: float,
                   scope: str = "global",
                   population: str = "abstain_only"):
    """Quartile-based boundaries of the effect distribution.

    ``global`` pools one population and returns a single pair; ``per_lf``
    returns one pair per LF column. ``abstain_only`` restricts the
    population to cells the LF abstained on (the structural zeros of
    labeled cells otherwise dominate the quartiles).
    """
    if h < 0:
        raise InputError("IQR factor h must be >= 0")
    if scope not in IQR_SCOPES:
        raise InputError(f"unknown iqr scope {scope!r}")
    if population not in IQR_POPULATIONS:
        raise InputError(f"unknown iqr population {population!r}")
    abst = mat.entries == ABSTAIN
    if scope == "global":
        vals = effects[abst] if population == "abstain_only" else effects.ravel()
        return _bounds_from(vals, h)
    out = []
    for l in range(mat.m):
        col = effects[:, l]
        vals = col[abst[:, l]] if population == "abstain_only" else col
        out.append(_bounds_from(vals, h))
    return out


def auto_h_iqr(stats: LFStats, xi: float = 0.35) -> float:
    """IQR factor from LF statistics: xi * sum_cov * sum_ov * sum_conf."""
    return float(xi * stats.sum_coverage * stats.sum_overlaps
                 * stats.sum_conflicts)


def augment(mat: LabelMatrix, effects: np.ndarray,
            boundaries) -> LabelMatrix:
    """New matrix with abstains relabeled strictly outside the boundaries."""
    if effects.shape != mat.entries.shape:
        raise InputError("effects and label matrix shapes disagree")
    if isinstance(boundaries, Boundaries):
        b_neg = np.full(mat.m, boundaries.b_neg)
        b_pos = np.full(mat.m, boundaries.b_pos)
    else:
        if len(boundaries) != mat.m:
            raise InputError("need one boundary pair per LF")
        b_neg = np.array([b.b_neg for b in boundaries])
        b_pos = np.array([b.b_pos for b in boundaries])
    out = mat.entries.copy()
    abst = out == ABSTAIN
    out[abst & (effects < b_neg)] = 0
    out[abst & (effects > b_pos)] = 1
    return LabelMatrix(entries=out, lf_names=mat.lf_names)


def _effect_quartiles(effects: np.ndarray, mat: LabelMatrix) -> list:
    rows = []
    abst = mat.entries == ABSTAIN
    for l in range(mat.m):
        vals = effects[abst[:, l], l]
        if vals.size == 0:
            rows.append(None)
        else:
            q = np.percentile(vals, [25.0, 50.0, 75.0])
            rows.append([float(v) for v in q])
    return rows


def reinforce(mat: LabelMatrix, d: Dataset, p: ReinforceParams,
              backend: str | None = None) -> ReinforceResult:
    """Full augmentation pass: stats -> effects -> boundaries -> new matrix."""
    from .aggregate import majority_vote  # local import, no cycle

    stats_pre = lf_stats(mat)
    effects, dmin = _aggregate_with_dmin(mat, d, p, backend)

    h = None
    if p.mode == "fixed_epsilon":
        boundaries = Boundaries(-p.epsilon, p.epsilon)
    else:
        h = p.h_iqr if p.mode == "iqr_factor" else auto_h_iqr(stats_pre, p.xi)
        boundaries = iqr_boundaries(effects, mat, h,
                                    scope=p.iqr_scope,
                                    population=p.iqr_population)
    augmented = augment(mat, effects, boundaries)
    stats_post = lf_stats(augmented)

    mv_pre = majority_vote(mat)
    mv_post = majority_vote(augmented)
    bpairs = (boundaries if isinstance(boundaries, list) else [boundaries])
    diagnostics = {
        "backend": _backend.resolve_backend(backend),
        "mode": p.mode,
        "h_iqr": h,
        "h_iqr_zero_band": (h == 0.0) if h is not None else False,
        "epsilon": p.epsilon if p.mode == "fixed_epsilon" else None,
        "epsilon_d": p.epsilon_d,
        "boundaries": [[b.b_neg, b.b_pos] for b in bpairs],
        "iqr_scope": p.iqr_scope,
        "iqr_population": p.iqr_population,
        "stats_pre": stats_pre.as_dict(),
        "stats_post": stats_post.as_dict(),
        "labeled_points_pre": mv_pre.labeled_count,
        "labeled_points_post": mv_post.labeled_count,
        "augmented_cells": int(np.count_nonzero(augmented.entries
                                                != mat.entries)),
        "effect_quartiles_per_lf": _effect_quartiles(effects, mat),
        "min_nonzero_distance": dmin,
    }
    return ReinforceResult(matrix=augmented, effects=effects,
                           boundaries=boundaries, diagnostics=diagnostics)
