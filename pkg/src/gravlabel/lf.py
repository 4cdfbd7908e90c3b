"""Declarative labeling functions, matrix fill, and LF statistics.

A labeling function (LF) maps a point to 0, 1, or ABSTAIN (-1). Rules are
declarative (thresholds and keyword matches read from a spec file) rather
than arbitrary callables, so a labeled run is fully described by its
config. Applying a set of m LFs to k points yields the k x m label matrix
that the reinforcement stage densifies.
"""

from __future__ import annotations

import configparser
from dataclasses import dataclass
from typing import Union

import numpy as np

from .data import Dataset, FeatureVector
from .errors import InputError, SchemaError

ABSTAIN = -1

_OPS = ("<", ">", "<=", ">=")


def _compare(op: str, value, threshold):
    if op == "<":
        return value < threshold
    if op == ">":
        return value > threshold
    if op == "<=":
        return value <= threshold
    if op == ">=":
        return value >= threshold
    raise InputError(f"unknown comparator {op!r}")


@dataclass(frozen=True)
class NumericRule:
    """Single-threshold rule: emit when ``feature op threshold`` holds."""

    feature: str
    op: str
    threshold: float
    emit: int


@dataclass(frozen=True)
class NumericBandRule:
    """Ordered (op, threshold, emit) branches; first match wins, else abstain."""

    feature: str
    branches: tuple[tuple[str, float, int], ...]


@dataclass(frozen=True)
class KeywordRule:
    """Case-insensitive substring match on the raw text."""

    phrase: str
    emit: int


@dataclass(frozen=True)
class AbsentRule:
    """Placeholder rule that always abstains (named after a feature)."""

    feature: str


Rule = Union[NumericRule, NumericBandRule, KeywordRule, AbsentRule]


@dataclass(frozen=True)
class LabelingFunction:
    name: str
    rule: Rule

    def __post_init__(self):
        emits = []
        if isinstance(self.rule, NumericRule):
            emits = [self.rule.emit]
            if self.rule.op not in _OPS:
                raise InputError(f"{self.name}: bad comparator {self.rule.op!r}")
        elif isinstance(self.rule, NumericBandRule):
            emits = [e for _, _, e in self.rule.branches]
            for op, _, _ in self.rule.branches:
                if op not in _OPS:
                    raise InputError(f"{self.name}: bad comparator {op!r}")
            if not self.rule.branches:
                raise InputError(f"{self.name}: band rule needs branches")
        elif isinstance(self.rule, KeywordRule):
            emits = [self.rule.emit]
        if any(e not in (0, 1) for e in emits):
            raise InputError(f"{self.name}: emitted labels must be 0 or 1")


@dataclass(frozen=True)
class LabelMatrix:
    """k x m matrix of LF outputs; -1 marks an abstain."""

    entries: np.ndarray
    lf_names: tuple[str, ...]

    def __post_init__(self):
        if self.entries.ndim != 2 or self.entries.shape[1] != len(self.lf_names):
            raise InputError("label matrix shape does not match the LF set")
        if not np.isin(self.entries, (-1, 0, 1)).all():
            raise InputError("label matrix entries must be -1, 0, or 1")

    @property
    def k(self) -> int:
        return self.entries.shape[0]

    @property
    def m(self) -> int:
        return self.entries.shape[1]


@dataclass(frozen=True)
class LFStats:
    """Per-LF coverage/overlap/conflict fractions plus their means and sums."""

    coverage: np.ndarray
    overlaps: np.ndarray
    conflicts: np.ndarray

    @property
    def mean_coverage(self) -> float:
        return float(self.coverage.mean())

    @property
    def mean_overlaps(self) -> float:
        return float(self.overlaps.mean())

    @property
    def mean_conflicts(self) -> float:
        return float(self.conflicts.mean())

    @property
    def sum_coverage(self) -> float:
        return float(self.coverage.sum())

    @property
    def sum_overlaps(self) -> float:
        return float(self.overlaps.sum())

    @property
    def sum_conflicts(self) -> float:
        return float(self.conflicts.sum())

    def as_dict(self) -> dict:
        return {
            "coverage": [float(v) for v in self.coverage],
            "overlaps": [float(v) for v in self.overlaps],
            "conflicts": [float(v) for v in self.conflicts],
            "mean_coverage": self.mean_coverage,
            "mean_overlaps": self.mean_overlaps,
            "mean_conflicts": self.mean_conflicts,
            "sum_coverage": self.sum_coverage,
            "sum_overlaps": self.sum_overlaps,
            "sum_conflicts": self.sum_conflicts,
        }


def _parse_branch(line: str, name: str) -> tuple[str, float, int]:
    # e.g. "> 0.75 -> 1"
    head, sep, emit = line.partition("->")
    if not sep:
        raise InputError(f"{name}: branch {line!r} missing '-> emit'")
    parts = head.split()
    if len(parts) != 2:
        raise InputError(f"{name}: branch {line!r} must be 'op threshold -> emit'")
    op, threshold = parts
    if op not in _OPS:
        raise InputError(f"{name}: bad comparator {op!r}")
    try:
        return op, float(threshold), int(emit.strip())
    except ValueError:
        raise InputError(f"{name}: cannot parse branch {line!r}") from None


def parse_lf_set(path, feature_names=None) -> list[LabelingFunction]:
    """Read an LF spec file (one INI section per LF, declaration order).

    When ``feature_names`` is given, numeric rules are validated against it
    immediately; otherwise validation happens when the LFs are applied.
    """
    parser = configparser.ConfigParser()
    parser.optionxform = str  # keep case in phrases and names
    try:
        with open(path, encoding="utf-8") as fh:
            parser.read_file(fh)
    except configparser.DuplicateSectionError as exc:
        raise InputError(f"{path}: duplicate LF name {exc.section!r}") from None
    except configparser.Error as exc:
        raise InputError(f"{path}: {exc}") from None

    lfs = []
    for name in parser.sections():
        section = parser[name]
        kind = section.get("type", "").strip()
        if kind in ("numeric", "band", "absent"):
            feature = section.get("feature", "").strip()
            if not feature:
                raise InputError(f"{path}: LF {name!r} needs a feature")
            if feature_names is not None and feature not in feature_names:
                raise SchemaError(f"{path}: LF {name!r} references unknown "
                                  f"feature {feature!r}")
        if kind == "numeric":
            op = section.get("op", "").strip()
            rule = NumericRule(feature, op, float(section["threshold"]),
                               int(section["emit"]))
        elif kind == "band":
            lines = [ln.strip() for ln in section.get("branches", "").splitlines()
                     if ln.strip()]
            rule = NumericBandRule(feature,
                                   tuple(_parse_branch(ln, name) for ln in lines))
        elif kind == "keyword":
            rule = KeywordRule(section.get("phrase", ""), int(section["emit"]))
        elif kind == "absent":
            rule = AbsentRule(feature)
        else:
            raise InputError(f"{path}: LF {name!r} has unknown type {kind!r}")
        lfs.append(LabelingFunction(name, rule))
    return lfs


def apply_lf(lf: LabelingFunction, x: FeatureVector) -> int:
    """Label one point: 0, 1, or ABSTAIN."""
    rule = lf.rule
    if isinstance(rule, AbsentRule):
        return ABSTAIN
    if isinstance(rule, KeywordRule):
        if x.text is None:
            raise SchemaError(f"{lf.name}: keyword rule on a point without text")
        return rule.emit if rule.phrase.lower() in x.text.lower() else ABSTAIN
    value, present = x.feature(rule.feature)
    if not present:
        return ABSTAIN
    if isinstance(rule, NumericRule):
        return rule.emit if _compare(rule.op, value, rule.threshold) else ABSTAIN
    for op, threshold, emit in rule.branches:
        if _compare(op, value, threshold):
            return emit
    return ABSTAIN


def _apply_column(lf: LabelingFunction, d: Dataset) -> np.ndarray:
    rule = lf.rule
    k = len(d)
    out = np.full(k, ABSTAIN, dtype=np.int8)
    if isinstance(rule, AbsentRule):
        return out
    if isinstance(rule, KeywordRule):
        if d.texts is None:
            raise SchemaError(f"{lf.name}: keyword rule on a non-text dataset")
        phrase = rule.phrase.lower()
        for i, text in enumerate(d.texts):
            if phrase in text.lower():
                out[i] = rule.emit
        return out
    j = d.feature_index(rule.feature)
    col = d.X[:, j]
    present = np.ones(k, dtype=bool) if d.missing is None else ~d.missing[:, j]
    if isinstance(rule, NumericRule):
        fire = present & _compare(rule.op, col, rule.threshold)
        out[fire] = rule.emit
        return out
    undecided = present.copy()
    for op, threshold, emit in rule.branches:
        fire = undecided & _compare(op, col, threshold)
        out[fire] = emit
        undecided &= ~fire
    return out


def apply_all(lfs: list[LabelingFunction], d: Dataset) -> LabelMatrix:
    """Fill the k x m label matrix column by column."""
    if not lfs:
        raise InputError("need at least one labeling function")
    if len(d) == 0:
        raise InputError("cannot label an empty dataset")
    names = [lf.name for lf in lfs]
    if len(set(names)) != len(names):
        raise InputError("LF names must be unique")
    entries = np.stack([_apply_column(lf, d) for lf in lfs], axis=1)
    return LabelMatrix(entries=entries, lf_names=tuple(names))


def lf_stats(mat: LabelMatrix) -> LFStats:
    """Coverage, overlap, and conflict fractions for every LF.

    coverage_l  : fraction of points the LF labels.
    overlaps_l  : fraction labeled by the LF and by at least one other LF.
    conflicts_l : fraction labeled by the LF while some other LF disagrees.
    """
    e = mat.entries
    k = max(mat.k, 1)
    nonabst = e != ABSTAIN
    coverage = nonabst.sum(axis=0) / k

    others = nonabst.sum(axis=1, keepdims=True) - nonabst
    overlaps = (nonabst & (others > 0)).sum(axis=0) / k

    ones = (e == 1).sum(axis=1, keepdims=True)
    zeros = (e == 0).sum(axis=1, keepdims=True)
    disagree = np.where(e == 1, zeros, np.where(e == 0, ones, 0))
    conflicts = (nonabst & (disagree > 0)).sum(axis=0) / k

    return LFStats(coverage=coverage, overlaps=overlaps, conflicts=conflicts)
