"""Pipeline configuration: an INI file with one section per stage.

Sections: [dataset], [lfs], [reinforce], [model], [run]. Relative paths
are resolved against the config file's directory, so configs can ship
with the repository. See the README for the full key reference.
"""

from __future__ import annotations

import configparser
import math
from dataclasses import dataclass, field, replace
from pathlib import Path

from .errors import ConfigError

ARMS = ("baseline", "reinforced", "supervised")
TRUTH_RULES = ("binary", "wine_quality")


@dataclass(frozen=True)
class DatasetConfig:
    path: str
    kind: str = "numeric"
    truth_column: str | None = None
    truth_rule: str = "binary"
    feature_columns: tuple[str, ...] | None = None
    text_column: str | None = None


@dataclass(frozen=True)
class LFConfig:
    path: str
    use_first: int | None = None


@dataclass(frozen=True)
class ReinforceConfig:
    metric: str = "euclidean"
    minkowski_p: float = 3.0
    mahalanobis_ridge: float = 1e-6
    alpha: float = 1.0
    beta: float = 1.0
    epsilon_d: float = math.inf
    mode: str = "auto_iqr"
    epsilon: float | None = None
    h_iqr: float | None = None
    xi: float = 0.35
    iqr_scope: str = "global"
    iqr_population: str = "abstain_only"


@dataclass(frozen=True)
class ModelConfig:
    kind: str = "logreg"
    c: float = 1000.0
    max_iter: int = 2000
    tol: float = 1e-6
    k: int = 5
    var_smoothing: float = 1e-9


@dataclass(frozen=True)
class RunConfig:
    arm: str = "reinforced"
    gold_fraction: float = 0.3
    seed: int = 0
    repeats: int = 1
    backend: str = "auto"
    out: str | None = None


@dataclass(frozen=True)
class PipelineConfig:
    dataset: DatasetConfig
    lfs: LFConfig | None
    reinforce: ReinforceConfig = field(default_factory=ReinforceConfig)
    model: ModelConfig = field(default_factory=ModelConfig)
    run: RunConfig = field(default_factory=RunConfig)
    source: str | None = None  # config file path, echoed into reports

    def echo(self) -> dict:
        """JSON-ready copy of every setting (reports must reproduce runs)."""
        d = {
            "source": self.source,
            "dataset": vars(self.dataset).copy(),
            "lfs": None if self.lfs is None else vars(self.lfs).copy(),
            "reinforce": vars(self.reinforce).copy(),
            "model": vars(self.model).copy(),
            "run": vars(self.run).copy(),
        }
        if d["dataset"]["feature_columns"] is not None:
            d["dataset"]["feature_columns"] = list(d["dataset"]["feature_columns"])
        if math.isinf(d["reinforce"]["epsilon_d"]):
            d["reinforce"]["epsilon_d"] = "inf"
        return d


def _get(section, key, cast, default):
    if section is None or key not in section:
        return default
    raw = section[key].strip()
    try:
        return cast(raw)
    except ValueError:
        raise ConfigError(f"cannot parse {key} = {raw!r}") from None


def _float_or_inf(raw: str) -> float:
    return math.inf if raw.lower() in ("inf", "infinity") else float(raw)


def load_config(path, overrides: dict | None = None) -> PipelineConfig:
    """Read and validate a pipeline config.

    ``overrides`` maps dotted keys (e.g. ``"run.seed"``) to replacement
    values; the CLI uses it for --seed/--repeats style flags.
    """
    path = Path(path)
    if not path.is_file():
        raise ConfigError(f"config file not found: {path}")
    parser = configparser.ConfigParser(inline_comment_prefixes=(";", "#"))
    try:
        parser.read(path, encoding="utf-8")
    except configparser.Error as exc:
        raise ConfigError(f"{path}: {exc}") from None
    base = path.parent

    if "dataset" not in parser:
        raise ConfigError(f"{path}: missing [dataset] section")
    ds = parser["dataset"]
    if "path" not in ds:
        raise ConfigError(f"{path}: [dataset] needs a path")
    feature_columns = None
    if "feature_columns" in ds:
        feature_columns = tuple(
            c.strip() for c in ds["feature_columns"].split(",") if c.strip()
        )
    dataset = DatasetConfig(
        path=str((base / ds["path"]).resolve()),
        kind=_get(ds, "kind", str, "numeric"),
        truth_column=_get(ds, "truth_column", str, None),
        truth_rule=_get(ds, "truth_rule", str, "binary"),
        feature_columns=feature_columns,
        text_column=_get(ds, "text_column", str, None),
    )

    lfs = None
    if "lfs" in parser and "path" in parser["lfs"]:
        sec = parser["lfs"]
        lfs = LFConfig(
            path=str((base / sec["path"]).resolve()),
            use_first=_get(sec, "use_first", int, None),
        )

    rf = parser["reinforce"] if "reinforce" in parser else None
    reinforce = ReinforceConfig(
        metric=_get(rf, "metric", str, "euclidean"),
        minkowski_p=_get(rf, "minkowski_p", float, 3.0),
        mahalanobis_ridge=_get(rf, "mahalanobis_ridge", float, 1e-6),
        alpha=_get(rf, "alpha", float, 1.0),
        beta=_get(rf, "beta", float, 1.0),
        epsilon_d=_get(rf, "epsilon_d", _float_or_inf, math.inf),
        mode=_get(rf, "mode", str, "auto_iqr"),
        epsilon=_get(rf, "epsilon", float, None),
        h_iqr=_get(rf, "h_iqr", float, None),
        xi=_get(rf, "xi", float, 0.35),
        iqr_scope=_get(rf, "iqr_scope", str, "global"),
        iqr_population=_get(rf, "iqr_population", str, "abstain_only"),
    )

    md = parser["model"] if "model" in parser else None
    model = ModelConfig(
        kind=_get(md, "kind", str, "logreg"),
        c=_get(md, "c", float, 1000.0),
        max_iter=_get(md, "max_iter", int, 2000),
        tol=_get(md, "tol", float, 1e-6),
        k=_get(md, "k", int, 5),
        var_smoothing=_get(md, "var_smoothing", float, 1e-9),
    )

    rn = parser["run"] if "run" in parser else None
    out = _get(rn, "out", str, None)
    run = RunConfig(
        arm=_get(rn, "arm", str, "reinforced"),
        gold_fraction=_get(rn, "gold_fraction", float, 0.3),
        seed=_get(rn, "seed", int, 0),
        repeats=_get(rn, "repeats", int, 1),
        backend=_get(rn, "backend", str, "auto"),
        out=None if out is None else str((base / out).resolve()),
    )

    cfg = PipelineConfig(dataset=dataset, lfs=lfs, reinforce=reinforce,
                         model=model, run=run, source=str(path))
    if overrides:
        cfg = apply_overrides(cfg, overrides)
    validate_config(cfg)
    return cfg


def apply_overrides(cfg: PipelineConfig, overrides: dict) -> PipelineConfig:
    sections = {"dataset": cfg.dataset, "lfs": cfg.lfs,
                "reinforce": cfg.reinforce, "model": cfg.model, "run": cfg.run}
    for dotted, value in overrides.items():
        section, _, key = dotted.partition(".")
        if section not in sections or not key:
            raise ConfigError(f"unknown override {dotted!r}")
        target = sections[section]
        if target is None or key not in vars(target):
            raise ConfigError(f"unknown override {dotted!r}")
        sections[section] = replace(target, **{key: value})
    return replace(cfg, dataset=sections["dataset"], lfs=sections["lfs"],
                   reinforce=sections["reinforce"], model=sections["model"],
                   run=sections["run"])


def validate_config(cfg: PipelineConfig) -> None:
    if cfg.run.arm not in ARMS:
        raise ConfigError(f"unknown arm {cfg.run.arm!r}")
    if not Path(cfg.dataset.path).is_file():
        raise ConfigError(f"dataset file not found: {cfg.dataset.path}")
    if cfg.dataset.kind not in ("numeric", "text"):
        raise ConfigError(f"unknown dataset kind {cfg.dataset.kind!r}")
    if (cfg.dataset.kind == "text" and not cfg.dataset.text_column
            and cfg.dataset.truth_column):
        raise ConfigError("a text dataset with truth labels needs a "
                          "text_column (line corpora carry no labels)")
    if cfg.dataset.truth_rule not in TRUTH_RULES:
        raise ConfigError(f"unknown truth_rule {cfg.dataset.truth_rule!r}")
    if cfg.run.arm == "supervised" and cfg.dataset.truth_column is None:
        raise ConfigError("the supervised arm needs a truth column")
    if cfg.run.arm != "supervised":
        if cfg.lfs is None:
            raise ConfigError(f"arm {cfg.run.arm!r} needs an [lfs] section")
        if not Path(cfg.lfs.path).is_file():
            raise ConfigError(f"LF file not found: {cfg.lfs.path}")
        if cfg.lfs.use_first is not None and cfg.lfs.use_first < 1:
            raise ConfigError("use_first must be >= 1")
    if not 0.0 < cfg.run.gold_fraction < 1.0:
        raise ConfigError("gold_fraction must be in (0, 1)")
    if cfg.run.repeats < 1:
        raise ConfigError("repeats must be >= 1")
