"""Command-line interface.

Every subcommand reads one INI config (see configs/ for examples) and
writes its artifacts into the output directory:

  run        full pipeline -> report.json
  apply-lfs  label matrix -> label_matrix.csv, lf_stats.json
  reinforce  augmented matrix -> augmented_matrix.csv, reinforce.json
  aggregate  majority-vote labels -> labels.csv
  train      end model -> model.pkl, training.json
  evaluate   metrics of a trained model -> metrics.json
  stats      LF statistics table -> stdout + lf_stats.json
  sweep      one-parameter sweep -> sweep.json, plot_data.csv
"""

from __future__ import annotations

import argparse
import pickle
import sys
from pathlib import Path

from .aggregate import majority_vote, training_set
from .config import load_config
from .errors import ConfigError, GravlabelError
from .models import evaluate as evaluate_metrics
from .models import train as train_model
from .pipeline import (
    _weak_labels,
    build_model_spec,
    effective_backend,
    load_dataset,
    prepare_split,
    run_pipeline,
    run_sweep,
)
from .reporting import (
    load_matrix_csv,
    save_labels_csv,
    save_matrix_csv,
    write_plot_data,
    write_report,
)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gravlabel",
        description="Weak supervision with gravitation-based label augmentation",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", required=True, help="pipeline config (INI)")
        p.add_argument("--out", help="output directory")
        p.add_argument("--seed", type=int, help="override [run] seed")
        p.add_argument("--repeats", type=int, help="override [run] repeats")
        p.add_argument("--backend", choices=("auto", "python", "cython"),
                       help="override [run] backend")
        p.add_argument("--sequential", action="store_true",
                       help="pin the effect summation order for exact "
                            "reproducibility")

    common(sub.add_parser("run", help="full pipeline with repeats"))
    common(sub.add_parser("apply-lfs", help="label matrix and LF statistics"))
    common(sub.add_parser("reinforce", help="augment the label matrix"))
    p = sub.add_parser("aggregate", help="majority-vote labels")
    common(p)
    p.add_argument("--matrix", help="aggregate an existing matrix file "
                                    "instead of recomputing it")
    common(sub.add_parser("train", help="train the end model"))
    p = sub.add_parser("evaluate", help="evaluate a trained model")
    common(p)
    p.add_argument("--model", help="model file (default <out>/model.pkl)")
    common(sub.add_parser("stats", help="print LF statistics"))
    p = sub.add_parser("sweep", help="vary one parameter")
    common(p)
    p.add_argument("--param", required=True,
                   choices=("num_lfs", "h_iqr", "epsilon", "metric"))
    p.add_argument("--values", required=True,
                   help="comma-separated sweep values")
    return parser


def _config_from_args(args) -> tuple:
    overrides = {}
    if args.seed is not None:
        overrides["run.seed"] = args.seed
    if args.repeats is not None:
        overrides["run.repeats"] = args.repeats
    if args.backend is not None:
        overrides["run.backend"] = args.backend
    cfg = load_config(args.config, overrides)
    out = Path(args.out) if args.out else (
        Path(cfg.run.out) if cfg.run.out
        else Path("runs") / Path(args.config).stem
    )
    out.mkdir(parents=True, exist_ok=True)
    return cfg, out


def _pool_work(cfg, sequential):
    """Dataset, (gold, pool), and the weak-label matrices for one seed."""
    if cfg.run.arm == "supervised":
        raise ConfigError("this subcommand needs a weak arm "
                          "(baseline or reinforced)")
    if cfg.lfs is None:
        raise ConfigError("this subcommand needs an [lfs] section")
    dataset = load_dataset(cfg)
    gold, pool = prepare_split(cfg, dataset, cfg.run.seed)
    backend = effective_backend(cfg, sequential)
    return dataset, gold, pool, _weak_labels(cfg, pool, backend)


def _cmd_run(args) -> int:
    cfg, out = _config_from_args(args)
    report = run_pipeline(cfg, sequential=args.sequential)
    write_report(out / "report.json", report)
    mm = report["mean_metrics"]
    if mm:
        print(f"{cfg.run.arm}: status={report['status']} "
              f"acc={mm['accuracy']:.3f} f1={mm['f1']:.3f} "
              f"labeled={report['mean_labeled_count']}")
    else:
        failure = report["runs"][0]["failure"]
        print(f"{cfg.run.arm}: status={report['status']} "
              f"({failure['stage']}: {failure['message']})")
    print(f"report: {out / 'report.json'}")
    return 0 if report["status"] != "failed" else 1


def _cmd_apply_lfs(args) -> int:
    cfg, out = _config_from_args(args)
    _, _, pool, work = _pool_work(cfg, args.sequential)
    save_matrix_csv(out / "label_matrix.csv", work["matrix_pre"], pool.point_ids)
    write_report(out / "lf_stats.json", work["stats_pre"])
    cov = work["stats_pre"]["mean_coverage"]
    print(f"matrix: {pool.point_ids.size} points x "
          f"{len(work['matrix_pre'].lf_names)} LFs, mean coverage {cov:.3f}")
    print(f"wrote {out / 'label_matrix.csv'}")
    return 0


def _cmd_reinforce(args) -> int:
    cfg, out = _config_from_args(args)
    if cfg.run.arm != "reinforced":
        raise ConfigError("the reinforce subcommand needs arm = reinforced")
    _, _, pool, work = _pool_work(cfg, args.sequential)
    save_matrix_csv(out / "label_matrix.csv", work["matrix_pre"], pool.point_ids)
    save_matrix_csv(out / "augmented_matrix.csv", work["matrix"], pool.point_ids)
    write_report(out / "reinforce.json", work["reinforce"])
    diag = work["reinforce"]
    print(f"augmented {diag['augmented_cells']} cells; labeled points "
          f"{diag['labeled_points_pre']} -> {diag['labeled_points_post']}")
    print(f"wrote {out / 'augmented_matrix.csv'}")
    return 0


def _cmd_aggregate(args) -> int:
    cfg, out = _config_from_args(args)
    if args.matrix:
        mat, point_ids = load_matrix_csv(args.matrix)
    else:
        _, _, pool, work = _pool_work(cfg, args.sequential)
        mat, point_ids = work["matrix"], pool.point_ids
    agg = majority_vote(mat)
    save_labels_csv(out / "labels.csv", point_ids, agg.labels)
    print(f"labeled {agg.labeled_count} of {mat.k} points")
    print(f"wrote {out / 'labels.csv'}")
    return 0


def _cmd_train(args) -> int:
    cfg, out = _config_from_args(args)
    dataset = load_dataset(cfg)
    if cfg.run.arm == "supervised":
        gold, _ = prepare_split(cfg, dataset, cfg.run.seed)
        if gold.truth is None:
            raise ConfigError("supervised arm needs truth labels")
        features, labels = gold.model_features(), gold.truth
    else:
        _, _, pool, work = _pool_work(cfg, args.sequential)
        features, labels = training_set(majority_vote(work["matrix"]), pool)
    spec = build_model_spec(cfg, dataset.kind)
    model = train_model(spec, features, labels)
    with open(out / "model.pkl", "wb") as fh:
        pickle.dump({"spec": spec, "model": model, "arm": cfg.run.arm,
                     "seed": cfg.run.seed}, fh)
    write_report(out / "training.json", {
        "arm": cfg.run.arm, "model": spec.kind, "train_size": int(len(labels)),
        "seed": cfg.run.seed,
    })
    print(f"trained {spec.kind} on {len(labels)} points")
    print(f"wrote {out / 'model.pkl'}")
    return 0


def _cmd_evaluate(args) -> int:
    cfg, out = _config_from_args(args)
    model_path = Path(args.model) if args.model else out / "model.pkl"
    if not model_path.is_file():
        raise ConfigError(f"model file not found: {model_path} (run train first)")
    with open(model_path, "rb") as fh:
        bundle = pickle.load(fh)
    dataset = load_dataset(cfg)
    gold, pool = prepare_split(cfg, dataset, cfg.run.seed)
    if cfg.run.arm == "supervised":
        eval_set = pool if pool.truth is not None else gold
    else:
        eval_set = gold
    if eval_set.truth is None:
        raise ConfigError("evaluation split has no truth labels")
    metrics = evaluate_metrics(bundle["model"].predict(eval_set.model_features()),
                               eval_set.truth)
    write_report(out / "metrics.json", metrics.as_dict())
    print(f"acc={metrics.accuracy:.3f} prec={metrics.precision:.3f} "
          f"rec={metrics.recall:.3f} f1={metrics.f1:.3f}")
    print(f"wrote {out / 'metrics.json'}")
    return 0


def _cmd_stats(args) -> int:
    cfg, out = _config_from_args(args)
    _, _, pool, work = _pool_work(cfg, args.sequential)
    stats = work["stats_pre"]
    names = work["matrix_pre"].lf_names
    write_report(out / "lf_stats.json", stats)
    width = max(len(n) for n in names)
    print(f"{'LF':<{width}}  coverage  overlaps  conflicts")
    for i, name in enumerate(names):
        print(f"{name:<{width}}  {stats['coverage'][i]:8.4f}  "
              f"{stats['overlaps'][i]:8.4f}  {stats['conflicts'][i]:9.4f}")
    print(f"{'(mean)':<{width}}  {stats['mean_coverage']:8.4f}  "
          f"{stats['mean_overlaps']:8.4f}  {stats['mean_conflicts']:9.4f}")
    return 0


def _parse_sweep_values(param: str, raw: str) -> list:
    values = [v.strip() for v in raw.split(",") if v.strip()]
    if not values:
        raise ConfigError("sweep needs at least one value")
    if param == "num_lfs":
        return [int(v) for v in values]
    if param in ("h_iqr", "epsilon"):
        return [float(v) for v in values]
    return values


def _cmd_sweep(args) -> int:
    cfg, out = _config_from_args(args)
    values = _parse_sweep_values(args.param, args.values)
    report, plot_rows = run_sweep(cfg, args.param, values,
                                  sequential=args.sequential)
    write_report(out / "sweep.json", report)
    write_plot_data(out / "plot_data.csv", plot_rows)
    for row in plot_rows:
        detail = (f"f1={row['f1']:.3f} labeled={row['labeled_count']}"
                  if row["status"] != "failed" and "f1" in row
                  else row["status"])
        print(f"{args.param}={row['value']}: {detail}")
    print(f"wrote {out / 'sweep.json'} and {out / 'plot_data.csv'}")
    return 0


_COMMANDS = {
    "run": _cmd_run,
    "apply-lfs": _cmd_apply_lfs,
    "reinforce": _cmd_reinforce,
    "aggregate": _cmd_aggregate,
    "train": _cmd_train,
    "evaluate": _cmd_evaluate,
    "stats": _cmd_stats,
    "sweep": _cmd_sweep,
}


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except GravlabelError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
