"""End-to-end runs: split, label, reinforce, aggregate, train, evaluate.

Protocol: the dataset is split into a gold fraction (default 30%) and an
unlabeled pool. Weak arms (baseline, reinforced) apply LFs to the pool,
train the end model on the majority-vote labels, and are evaluated on the
gold split's ground truth. The supervised arm trains on the gold split
and is evaluated on the pool; for corpora whose pool has no truth it
trains and tests on the same gold split (that leakage is flagged in the
report). Numeric features are min-max normalized over the whole dataset
before splitting, so LF thresholds refer to unit-scaled values.
"""

from __future__ import annotations

import time
from dataclasses import replace

from . import backend as _backend
from .aggregate import majority_vote, training_set
from .config import PipelineConfig
from .data import (
    Dataset,
    build_vocabulary,
    load_tabular,
    load_text_lines,
    load_text_table,
    minmax_normalize,
    split,
    vectorize_dataset,
    wine_truth_from_cell,
)
from .distances import MetricSpec, mahalanobis_precompute
from .errors import (
    ConfigError,
    DegenerateTrainingError,
    GravlabelError,
    NoTrainingDataError,
)
from .lf import apply_all, lf_stats, parse_lf_set
from .models import ModelSpec, evaluate, train
from .reinforce import ReinforceParams, reinforce

SWEEP_PARAMS = ("num_lfs", "h_iqr", "epsilon", "metric")


def load_dataset(cfg: PipelineConfig) -> Dataset:
    ds = cfg.dataset
    if ds.kind == "text":
        if ds.text_column is None:  # one record per line, no labels
            return load_text_lines(ds.path)
        return load_text_table(ds.path, ds.text_column, ds.truth_column)
    transform = wine_truth_from_cell if ds.truth_rule == "wine_quality" else None
    raw = load_tabular(
        ds.path,
        feature_columns=list(ds.feature_columns) if ds.feature_columns else None,
        truth_column=ds.truth_column,
        truth_transform=transform,
    )
    return minmax_normalize(raw)


def build_lfs(cfg: PipelineConfig, d: Dataset):
    lfs = parse_lf_set(cfg.lfs.path,
                       feature_names=d.feature_names if d.kind == "numeric"
                       else None)
    if cfg.lfs.use_first is not None:
        lfs = lfs[: cfg.lfs.use_first]
    return lfs


def build_metric(cfg: PipelineConfig, pool: Dataset) -> MetricSpec:
    rc = cfg.reinforce
    inv_cov = None
    if rc.metric == "mahalanobis":
        inv_cov = mahalanobis_precompute(pool.X, ridge=rc.mahalanobis_ridge)
    return MetricSpec(kind=rc.metric, p=rc.minkowski_p, inv_cov=inv_cov)


def build_params(cfg: PipelineConfig, metric: MetricSpec) -> ReinforceParams:
    rc = cfg.reinforce
    return ReinforceParams(
        metric=metric,
        alpha=rc.alpha,
        beta=rc.beta,
        epsilon_d=rc.epsilon_d,
        mode=rc.mode,
        epsilon=rc.epsilon,
        h_iqr=rc.h_iqr,
        xi=rc.xi,
        iqr_scope=rc.iqr_scope,
        iqr_population=rc.iqr_population,
    )


def build_model_spec(cfg: PipelineConfig, kind: str) -> ModelSpec:
    mc = cfg.model
    return ModelSpec(
        kind=mc.kind,
        c=mc.c,
        max_iter=mc.max_iter,
        tol=mc.tol,
        k=mc.k,
        var_smoothing=mc.var_smoothing,
        nb_variant="bernoulli" if kind == "text" else "gaussian",
    )


def effective_backend(cfg: PipelineConfig, sequential: bool = False) -> str:
    if sequential:
        return "cython" if _backend.compiled_available() else "python"
    return _backend.resolve_backend(cfg.run.backend)


def prepare_split(cfg: PipelineConfig, d: Dataset, seed: int):
    """(gold, pool) with text vectorization tied to the training side."""
    gold, pool = split(d, cfg.run.gold_fraction, seed)
    if d.kind == "text":
        source = gold if cfg.run.arm == "supervised" else pool
        vocab = build_vocabulary(source.texts)
        gold = vectorize_dataset(gold, vocab)
        pool = vectorize_dataset(pool, vocab)
    return gold, pool


def _weak_labels(cfg, pool, backend):
    """Label matrix work shared by the labeling subcommands and run_once."""
    lfs = build_lfs(cfg, pool)
    mat = apply_all(lfs, pool)
    out = {"matrix_pre": mat, "stats_pre": lf_stats(mat).as_dict()}
    if cfg.run.arm == "reinforced":
        params = build_params(cfg, build_metric(cfg, pool))
        result = reinforce(mat, pool, params, backend=backend)
        out["matrix"] = result.matrix
        out["reinforce"] = result.diagnostics
    else:
        out["matrix"] = mat
        out["reinforce"] = None
    return out


def run_once(cfg: PipelineConfig, dataset: Dataset, seed: int,
             backend: str | None = None) -> dict:
    """One seeded pipeline execution; failures become structured rows."""
    backend = backend or effective_backend(cfg)
    timings: dict[str, float] = {}
    row = {
        "seed": seed,
        "arm": cfg.run.arm,
        "status": "ok",
        "failure": None,
        "metrics": None,
        "labeled_count": None,
        "train_size": None,
        "eval_size": None,
        "eval_on": None,
        "lf_stats_pre": None,
        "lf_stats_post": None,
        "reinforce": None,
        "timings": timings,
    }

    def fail(stage, exc):
        row["status"] = "failed"
        row["failure"] = {
            "stage": stage,
            "error": type(exc).__name__,
            "message": str(exc),
        }
        return row

    t0 = time.perf_counter()
    gold, pool = prepare_split(cfg, dataset, seed)
    timings["split"] = time.perf_counter() - t0

    if cfg.run.arm == "supervised":
        if gold.truth is None:
            return fail("train", ConfigError("supervised arm needs truth labels"))
        spec = build_model_spec(cfg, dataset.kind)
        t0 = time.perf_counter()
        try:
            model = train(spec, gold.model_features(), gold.truth)
        except DegenerateTrainingError as exc:
            return fail("train", exc)
        timings["train"] = time.perf_counter() - t0
        if pool.truth is not None:
            eval_set, row["eval_on"] = pool, "pool"
        else:
            eval_set, row["eval_on"] = gold, "gold(leakage)"
        t0 = time.perf_counter()
        preds = model.predict(eval_set.model_features())
        row["metrics"] = evaluate(preds, eval_set.truth).as_dict()
        timings["evaluate"] = time.perf_counter() - t0
        row["train_size"] = len(gold)
        row["eval_size"] = len(eval_set)
        return row

    if gold.truth is None:
        return fail("evaluate",
                    ConfigError("weak arms need truth labels on the gold "
                                "split for evaluation"))

    t0 = time.perf_counter()
    try:
        work = _weak_labels(cfg, pool, backend)
    except GravlabelError as exc:
        return fail("label", exc)
    timings["label"] = time.perf_counter() - t0
    row["lf_stats_pre"] = work["stats_pre"]
    if work["reinforce"] is not None:
        row["reinforce"] = work["reinforce"]
        row["lf_stats_post"] = work["reinforce"]["stats_post"]

    t0 = time.perf_counter()
    agg = majority_vote(work["matrix"])
    row["labeled_count"] = agg.labeled_count
    try:
        features, labels = training_set(agg, pool)
    except NoTrainingDataError as exc:
        return fail("aggregate", exc)
    timings["aggregate"] = time.perf_counter() - t0

    spec = build_model_spec(cfg, dataset.kind)
    t0 = time.perf_counter()
    try:
        model = train(spec, features, labels)
    except DegenerateTrainingError as exc:
        return fail("train", exc)
    timings["train"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    preds = model.predict(gold.model_features())
    row["metrics"] = evaluate(preds, gold.truth).as_dict()
    timings["evaluate"] = time.perf_counter() - t0
    row["train_size"] = len(features)
    row["eval_size"] = len(gold)
    row["eval_on"] = "gold"
    return row


def _mean_over(rows, picker):
    values = [picker(r) for r in rows if r["status"] == "ok"]
    values = [v for v in values if v is not None]
    return (sum(values) / len(values)) if values else None


def run_pipeline(cfg: PipelineConfig, sequential: bool = False) -> dict:
    """Repeated runs (seed, seed+1, ...) with averaged metrics."""
    backend = effective_backend(cfg, sequential)
    t_load = time.perf_counter()
    dataset = load_dataset(cfg)
    t_load = time.perf_counter() - t_load

    rows = [run_once(cfg, dataset, cfg.run.seed + i, backend=backend)
            for i in range(cfg.run.repeats)]
    ok_rows = [r for r in rows if r["status"] == "ok"]

    mean_metrics = None
    if ok_rows:
        mean_metrics = {
            key: _mean_over(rows, lambda r, key=key: r["metrics"][key])
            for key in ("accuracy", "precision", "recall", "f1")
        }
    mean_labeled = _mean_over(rows, lambda r: r["labeled_count"])
    report = {
        "config": cfg.echo(),
        "arm": cfg.run.arm,
        "backend": backend,
        "dataset": {
            "path": cfg.dataset.path,
            "kind": dataset.kind,
            "points": len(dataset),
            "features": dataset.n_features,
        },
        "runs": rows,
        "mean_metrics": mean_metrics,
        "mean_labeled_count": mean_labeled,
        "summary": {
            "dataset": cfg.dataset.path,
            "arm": cfg.run.arm,
            "end_model": cfg.model.kind,
            **{key: (mean_metrics or {}).get(key)
               for key in ("accuracy", "precision", "recall", "f1")},
            "labeled_count": mean_labeled,
        },
        "status": ("ok" if len(ok_rows) == len(rows)
                   else "partial" if ok_rows else "failed"),
        "timings": {"load": t_load},
    }
    # wall-clock lives only under "timings" keys, never in the stable body
    for row in rows:
        row_t = row.pop("timings")
        report["timings"][f"run_seed_{row['seed']}"] = row_t
    return report


def sweep_configs(cfg: PipelineConfig, param: str, values):
    """Derived configs for a one-parameter sweep."""
    if param not in SWEEP_PARAMS:
        raise ConfigError(f"unknown sweep parameter {param!r}; "
                          f"expected one of {SWEEP_PARAMS}")
    out = []
    for value in values:
        if param == "num_lfs":
            if cfg.lfs is None:
                raise ConfigError("num_lfs sweep needs an [lfs] section")
            derived = replace(cfg, lfs=replace(cfg.lfs, use_first=int(value)))
        elif param == "h_iqr":
            derived = replace(cfg, reinforce=replace(
                cfg.reinforce, mode="iqr_factor", h_iqr=float(value)))
        elif param == "epsilon":
            derived = replace(cfg, reinforce=replace(
                cfg.reinforce, mode="fixed_epsilon", epsilon=float(value)))
        else:
            derived = replace(cfg, reinforce=replace(
                cfg.reinforce, metric=str(value)))
        out.append((value, derived))
    return out


def run_sweep(cfg: PipelineConfig, param: str, values,
              sequential: bool = False) -> tuple[dict, list[dict]]:
    """One pipeline per value; failing cells are recorded, not fatal."""
    if not values:
        raise ConfigError("sweep needs at least one value")
    rows, plot_rows = [], []
    for value, derived in sweep_configs(cfg, param, values):
        try:
            report = run_pipeline(derived, sequential=sequential)
            status = report["status"]
        except GravlabelError as exc:
            report = {"status": "failed",
                      "error": {"type": type(exc).__name__, "message": str(exc)}}
            status = "failed"
        rows.append({"param": param, "value": value, "status": status,
                     "report": report})
        plot = {"param": param, "value": value, "status": status}
        if status != "failed" and report.get("mean_metrics"):
            plot.update({k: report["mean_metrics"][k]
                         for k in ("accuracy", "precision", "recall", "f1")})
            plot["labeled_count"] = report.get("mean_labeled_count")
            ok = [r for r in report["runs"] if r["status"] == "ok"]
            stats = [r["lf_stats_post"] or r["lf_stats_pre"] for r in ok]
            stats = [s for s in stats if s]
            if stats:
                for key in ("mean_coverage", "mean_overlaps", "mean_conflicts"):
                    plot[key] = sum(s[key] for s in stats) / len(stats)
        plot_rows.append(plot)
    return {"param": param, "values": list(values), "rows": rows}, plot_rows
