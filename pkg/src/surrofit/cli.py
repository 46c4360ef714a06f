"""Command-line interface for the surrogate-model pipeline.

Subcommands mirror the pipeline stages: synth, correlate, reduce, pca,
tune, train, evaluate, report. Every random decision flows from --seed.
Exit codes: 0 success, 1 validation error, 2 I/O error.
"""

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from .dataset import load_dataset, save_dataset, split_holdout
from .featsel import (correlation_map, select_features, write_correlation_csv,
                      write_correlation_long_csv)
from .harness import (cases_filename, dataset_digest, evaluate_holdout,
                      make_report, report_filename, train_from_report,
                      write_cases_csv, FinalReport, ModelBundle)
from .manifest import save_manifest
from .pca import PcaTransform
from .pipeline import PcaConfig
from .preprocessing import Standardizer
from .search import default_space
from .synthetic import (DEFAULT_NOISE_SIGMA, SyntheticSpec, generate_synthetic)
from .tuning import CvReport, nested_cv
from .validation import ValidationError

CLI_MODEL_KINDS = {"rfr": "forest", "mlp": "mlp"}


def _data_paths(data_dir):
    data_dir = Path(data_dir)
    return data_dir / "dataset.csv", data_dir / "manifest.json"


def _load(data_dir):
    csv_path, manifest_path = _data_paths(data_dir)
    return load_dataset(csv_path, manifest_path), csv_path


def _train_rows(dataset):
    train, _ = split_holdout(dataset)
    return train


def _group_targets(dataset, group):
    dataset.manifest.group_columns(group)  # validates the name
    return dataset.Y[group], dataset.manifest.group_columns(group)


def cmd_synth(args):
    dead = frozenset(int(i) for i in args.dead.split(",")) if args.dead else frozenset()
    spec = SyntheticSpec(n_records=args.n, seed=args.seed,
                         dead_features=dead, noise_sigma=args.noise)
    dataset = generate_synthetic(spec)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    save_dataset(dataset, out / "dataset.csv")
    save_manifest(dataset.manifest, out / "manifest.json")
    print(f"wrote {dataset.n_records} records to {out / 'dataset.csv'}")


def cmd_correlate(args):
    dataset, _ = _load(args.data)
    train = _train_rows(dataset)
    targets, target_names = _group_targets(train, args.group)
    cmap = correlation_map(train.X, targets,
                           feature_names=dataset.manifest.feature_names,
                           target_names=target_names)
    out = Path(args.out)
    write_correlation_csv(cmap, out)
    long_out = out.with_name(out.stem + "_long" + out.suffix)
    write_correlation_long_csv(cmap, long_out, mask_threshold=args.threshold)
    print(f"wrote {out} and {long_out}")


def cmd_reduce(args):
    dataset, _ = _load(args.data)
    train = _train_rows(dataset)
    targets, target_names = _group_targets(train, args.group)
    cmap = correlation_map(train.X, targets,
                           feature_names=dataset.manifest.feature_names,
                           target_names=target_names)
    selection = select_features(cmap, threshold=args.threshold)
    with open(args.out, "w", encoding="utf-8") as fh:
        json.dump(selection.to_dict(), fh, indent=2)
        fh.write("\n")
    dropped = [dataset.manifest.feature_names[i] for i in selection.dropped]
    print(f"kept {len(selection.kept)} features, "
          f"dropped {dropped or 'none'} -> {args.out}")


def cmd_pca(args):
    dataset, _ = _load(args.data)
    train = _train_rows(dataset)
    scaled = Standardizer().fit(train.X).transform(train.X)
    transform = PcaTransform(n_components=args.components).fit(scaled)
    with open(args.out, "w", encoding="utf-8") as fh:
        json.dump(transform.to_dict(), fh, indent=2)
        fh.write("\n")
    ev = ", ".join("%.4g" % v for v in transform.explained_variance_)
    print(f"explained variances: {ev} -> {args.out}")


def _build_features(args, dataset, train):
    if args.features == "all":
        return None
    if args.features == "pca":
        return PcaConfig(n_components=args.components)
    targets, target_names = _group_targets(train, args.group)
    cmap = correlation_map(train.X, targets,
                           feature_names=dataset.manifest.feature_names,
                           target_names=target_names)
    return select_features(cmap, threshold=args.threshold)


def cmd_tune(args):
    dataset, _ = _load(args.data)
    train = _train_rows(dataset)
    features = _build_features(args, dataset, train)
    space = default_space(CLI_MODEL_KINDS[args.model])
    report = nested_cv(space, args.iters, train, args.group,
                       features=features, seed=args.seed)
    report.save(args.out)
    print(f"{args.model}/{args.group}/{args.features}: "
          f"mean MSE {report.mean_mse:.6g} (std {report.std_mse:.3g}), "
          f"{report.wall_seconds:.1f}s -> {args.out}")


def cmd_train(args):
    dataset, csv_path = _load(args.data)
    train = _train_rows(dataset)
    report = CvReport.load(args.cv_report)
    bundle = train_from_report(report, train, digest=dataset_digest(csv_path))
    bundle.save(args.out)
    print(f"trained {bundle.model_kind}/{bundle.target_group} in "
          f"{bundle.train_seconds:.2f}s -> {args.out}")


def cmd_evaluate(args):
    dataset, csv_path = _load(args.data)
    _, test = split_holdout(dataset)
    bundle = ModelBundle.load(args.model_file)
    digest = dataset_digest(csv_path)
    if bundle.dataset_digest and bundle.dataset_digest != digest:
        raise ValidationError(
            "dataset digest mismatch: the model was trained on different data"
        )
    report = evaluate_holdout(bundle, test)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    report.save(out / report_filename(report))
    if report.cases is not None:
        write_cases_csv(report, out / cases_filename(report))
    print(f"hold-out MSE {report.holdout_mse:.6g} "
          f"(baseline {report.baseline_mse:.6g}) -> {out}")


def cmd_report(args):
    in_dir = Path(args.in_dir)
    paths = sorted(in_dir.glob("final_*.json"))
    if not paths:
        raise ValidationError(f"no final_*.json reports found in {in_dir}")
    reports = [FinalReport.load(p) for p in paths]
    written = make_report(reports, Path(args.out))
    print(f"wrote {len(written)} files to {args.out}")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="surrofit",
        description="Surrogate-model development pipeline.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synth", help="generate a synthetic dataset")
    p.add_argument("--n", type=int, required=True, help="number of records")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--dead", default="7,8",
                   help="comma-separated dead feature indices ('' for none)")
    p.add_argument("--noise", type=float, default=DEFAULT_NOISE_SIGMA)
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("correlate", help="feature/target correlation maps")
    p.add_argument("--data", required=True)
    p.add_argument("--group", required=True, choices=["current", "powers"])
    p.add_argument("--threshold", type=float, default=0.1,
                   help="display mask threshold for the long-format file")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_correlate)

    p = sub.add_parser("reduce", help="correlation-threshold feature selection")
    p.add_argument("--data", required=True)
    p.add_argument("--group", required=True, choices=["current", "powers"])
    p.add_argument("--threshold", type=float, default=0.1)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("pca", help="fit a PCA feature transform")
    p.add_argument("--data", required=True)
    p.add_argument("-k", "--components", type=int, default=5)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_pca)

    p = sub.add_parser("tune", help="nested CV with randomized search")
    p.add_argument("--data", required=True)
    p.add_argument("--model", required=True, choices=sorted(CLI_MODEL_KINDS))
    p.add_argument("--group", required=True, choices=["current", "powers"])
    p.add_argument("--features", default="all",
                   choices=["all", "reduced", "pca"])
    p.add_argument("--threshold", type=float, default=0.1,
                   help="selection threshold for --features reduced")
    p.add_argument("-k", "--components", type=int, default=5,
                   help="component count for --features pca")
    p.add_argument("--iters", type=int, default=20)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_tune)

    p = sub.add_parser("train", help="train the best candidate on all folds")
    p.add_argument("--data", required=True)
    p.add_argument("--cv-report", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("evaluate", help="score a trained model on hold-out")
    p.add_argument("--data", required=True)
    p.add_argument("--model-file", required=True)
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("report", help="summarize evaluations into tables")
    p.add_argument("--in", dest="in_dir", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_report)

    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        args.func(args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
