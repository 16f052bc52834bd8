"""Command-line interface.

Subcommands cover the stages of the pipeline separately and end to end:

- ``train-aecs``: train the autoencoder, write model + latent matrix
- ``cluster``: cluster a latent matrix under one or more measures
- ``select``: cluster, score with the Hubert statistic, pick the best measure
- ``run``: full pipeline (``run-raw``: same but on raw flattened series)
- ``bench``: run a manifest of datasets and tabulate results

Exit codes: 0 success, 2 configuration error, 3 data error, 4 numeric
instability.  Dataset paths can be given relative to ``--data-root`` (or the
``AECS_DATA_ROOT`` environment variable); with ``--name`` alone, a UCR-style
``<name>_TRAIN``/``<name>_TEST`` pair is looked up under the data root.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .autoencoder import save_model
from .data import ucr_paths
from .distances import MEASURES
from .errors import ConfigurationError, DataError, NumericInstabilityError
from .pipeline import (
    RunConfig,
    benchmark,
    cluster_rows,
    compute_latents,
    evaluate,
    load_input,
    read_labels_csv,
    read_latent_csv,
    run_hc_aecs,
    run_hc_raw,
    write_clusters_csv,
    write_dendrogram_text,
    write_labels_csv,
    write_latent_csv,
)

DATA_ROOT_ENV = "AECS_DATA_ROOT"


def _add_data_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--train", help="training split file")
    p.add_argument("--test", help="optional test split file, merged with the training split")
    p.add_argument("--format", default="ucr_tsv", choices=["ucr_tsv", "csv_long"],
                   help="input file format (default: ucr_tsv)")
    p.add_argument("--name", help="dataset name; with no --train, resolves "
                                  "<name>_TRAIN/<name>_TEST under the data root")
    p.add_argument("--data-root", default=os.environ.get(DATA_ROOT_ENV),
                   help=f"base directory for relative data paths (default: ${DATA_ROOT_ENV})")


def _add_train_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--h1", type=int, default=16, dest="hidden1",
                   help="first hidden layer width (default: 16)")
    p.add_argument("--h2", type=int, default=12, dest="hidden2",
                   help="second hidden layer / latent width (default: 12)")
    p.add_argument("--epochs", type=int, default=30, help="training epochs (default: 30)")
    p.add_argument("--batch", type=int, default=32, dest="batch_size",
                   help="minibatch size (default: 32)")
    p.add_argument("--lr", type=float, default=0.004, dest="learning_rate",
                   help="learning rate (default: 0.004)")
    p.add_argument("--momentum", type=float, default=0.0, help="momentum (default: 0)")
    p.add_argument("--clip-norm", type=float, default=None,
                   help="global gradient norm clip (default: off)")
    p.add_argument("--seed", type=int, default=0, help="random seed (default: 0)")
    p.add_argument("--no-cache", action="store_true", help="ignore and skip the model cache")
    p.add_argument("--cache-dir", help="model cache directory (default: <out>/cache)")


def _add_cluster_args(p: argparse.ArgumentParser, k_required: bool) -> None:
    p.add_argument("--k", type=int, required=k_required, dest="n_clusters",
                   help="number of flat clusters" + ("" if k_required else
                        " (default: number of label classes)"))
    p.add_argument("--measures", default=",".join(MEASURES),
                   help="comma-separated distance measures; full names or CH,MA,ML "
                        "(default: all three)")
    p.add_argument("--ridge", type=float, default=None,
                   help="absolute ridge for the Mahalanobis covariance fit")


def _parse_measures(text: str) -> tuple[str, ...]:
    parts = tuple(p for p in (s.strip() for s in text.split(",")) if p)
    if not parts:
        raise ConfigurationError("empty --measures")
    return parts


def _resolve_paths(args) -> tuple[Path, Path | None]:
    root = Path(args.data_root) if args.data_root else None
    if args.train:
        train = Path(args.train)
        if not train.is_absolute() and root is not None and not train.is_file():
            train = root / train
        test = None
        if args.test:
            test = Path(args.test)
            if not test.is_absolute() and root is not None and not test.is_file():
                test = root / test
        return train, test
    if args.name:
        if root is None:
            raise ConfigurationError(
                f"--name without --train needs --data-root or ${DATA_ROOT_ENV}"
            )
        return ucr_paths(root, args.name)
    raise ConfigurationError("either --train or --name is required")


def _run_config(args, need_out: bool = False) -> RunConfig:
    train, test = _resolve_paths(args)
    if need_out and not args.out:
        raise ConfigurationError("--out is required")
    return RunConfig(
        train_path=train,
        test_path=test,
        fmt=args.format,
        name=args.name,
        hidden1=getattr(args, "hidden1", 16),
        hidden2=getattr(args, "hidden2", 12),
        epochs=getattr(args, "epochs", 30),
        batch_size=getattr(args, "batch_size", 32),
        learning_rate=getattr(args, "learning_rate", 0.004),
        momentum=getattr(args, "momentum", 0.0),
        clip_norm=getattr(args, "clip_norm", None),
        seed=getattr(args, "seed", 0),
        n_clusters=args.n_clusters,
        measures=_parse_measures(args.measures),
        ridge=args.ridge,
        output_dir=args.out,
        cache_dir=getattr(args, "cache_dir", None),
        use_cache=not getattr(args, "no_cache", False),
    )


def _print_report(report) -> None:
    ds = report.dataset
    print(f"dataset {ds['name']}: {ds['n_series']} series x {ds['n_timesteps']} steps "
          f"x {ds['n_dims']} dims, {ds['n_clusters']} clusters [{report.mode}]")
    for measure, res in report.selection.results.items():
        line = f"  {measure:<12} hubert={res.hubert.value:.6g}"
        if res.rand_index is not None:
            line += f"  rand_index={res.rand_index:.4f}  nmi={res.nmi:.4f}"
        print(line)
    print(f"best measure(s): {', '.join(report.selection.best_measures)}")
    t = report.timings
    print(f"time: autoencoder {t['autoencoder']:.2f}s, clustering {t['clustering']:.2f}s, "
          f"validation {t['validation']:.2f}s, total {t['total']:.2f}s"
          + ("  (cached model)" if report.cache_hit else ""))


def _cmd_train_aecs(args) -> int:
    config = _run_config(args, need_out=True)
    ds = load_input(config)
    model, latent, trace, cache_hit = compute_latents(config, ds)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    save_model(model, out / "model.npz")
    write_latent_csv(out / "latent.csv", latent.values)
    if ds.labels is not None:
        write_labels_csv(out / "labels.csv", ds.labels, ds.label_names)
    if trace is not None:
        (out / "train_trace.json").write_text(
            json.dumps(trace.to_dict(), indent=2) + "\n", encoding="utf-8"
        )
        print(f"trained {config.epochs} epochs: loss {trace.epoch_losses[0]:.6g} -> "
              f"{trace.epoch_losses[-1]:.6g}")
    else:
        print("reused cached model")
    print(f"latent matrix: {latent.values.shape[0]} x {latent.values.shape[1]} "
          f"(model {model.fingerprint})")
    return 0


def _cmd_cluster(args) -> int:
    rows = read_latent_csv(args.latent)
    measures = _parse_measures(args.measures)
    clusterings, _ = cluster_rows(rows, measures, args.n_clusters, ridge=args.ridge)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for measure, (dendrogram, flat) in clusterings.items():
        write_dendrogram_text(out / f"dendrogram_{measure}.txt", dendrogram)
        write_clusters_csv(out / f"clusters_{measure}.csv", flat)
        sizes = [int((flat.assignments == c).sum()) for c in range(flat.n_clusters)]
        print(f"{measure}: {flat.n_clusters} clusters, sizes {sizes}")
    return 0


def _cmd_select(args) -> int:
    rows = read_latent_csv(args.latent)
    labels = read_labels_csv(args.labels) if args.labels else None
    if labels is not None and labels.shape[0] != rows.shape[0]:
        raise ConfigurationError(
            f"labels cover {labels.shape[0]} series but the latent matrix has {rows.shape[0]}"
        )
    measures = _parse_measures(args.measures)
    clusterings, cov = cluster_rows(rows, measures, args.n_clusters, ridge=args.ridge)
    report = evaluate(rows, clusterings, cov, labels=labels)
    for measure, res in report.results.items():
        line = f"{measure:<12} hubert={res.hubert.value:.6g}"
        if res.rand_index is not None:
            line += f"  rand_index={res.rand_index:.4f}  nmi={res.nmi:.4f}"
        print(line)
    print(f"best measure(s): {', '.join(report.best_measures)}")
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        (out / "selection.json").write_text(
            json.dumps(report.to_dict(), indent=2) + "\n", encoding="utf-8"
        )
        for measure, (dendrogram, flat) in clusterings.items():
            write_dendrogram_text(out / f"dendrogram_{measure}.txt", dendrogram)
            write_clusters_csv(out / f"clusters_{measure}.csv", flat)
    return 0


def _cmd_run(args, mode: str) -> int:
    config = _run_config(args)
    report = run_hc_aecs(config) if mode == "hc_aecs" else run_hc_raw(config)
    _print_report(report)
    if args.out:
        print(f"artifacts written to {args.out}")
    return 0


def _cmd_bench(args) -> int:
    rows = benchmark(args.manifest, output_dir=args.out, data_root=args.data_root)
    failures = 0
    for row in rows:
        if row["status"] == "ok":
            extra = ""
            best = row["best_measures"].split(";")[0] if row["best_measures"] else ""
            ri = row.get(f"rand_index_{best}", "")
            if ri != "":
                extra = f", rand_index {ri:.4f}"
            print(f"{row['name']}: ok, best {row['best_measures']}{extra}, "
                  f"{row['t_total']:.1f}s")
        else:
            failures += 1
            print(f"{row['name']}: {row['status']}")
    if args.out:
        print(f"results table: {Path(args.out) / 'bench_results.csv'}")
    print(f"{len(rows) - failures}/{len(rows)} datasets succeeded")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="aecs",
        description="Time-series clustering on auto-encoded compact sequences.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("train-aecs", help="train the autoencoder and write the latent matrix")
    _add_data_args(p)
    _add_train_args(p)
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(func=_cmd_train_aecs, n_clusters=None, measures=",".join(MEASURES),
                   ridge=None)

    p = sub.add_parser("cluster", help="cluster a latent matrix")
    p.add_argument("--latent", required=True, help="latent CSV from train-aecs")
    _add_cluster_args(p, k_required=True)
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(func=_cmd_cluster)

    p = sub.add_parser("select", help="cluster a latent matrix and pick the best measure")
    p.add_argument("--latent", required=True, help="latent CSV from train-aecs")
    p.add_argument("--labels", help="optional series_id,label CSV for external validation")
    _add_cluster_args(p, k_required=True)
    p.add_argument("--out", help="optional output directory")
    p.set_defaults(func=_cmd_select)

    for cmd, mode, blurb in (
        ("run", "hc_aecs", "full pipeline on learned latent codes"),
        ("run-raw", "hc_raw", "pipeline on raw flattened series (no autoencoder)"),
    ):
        p = sub.add_parser(cmd, help=blurb)
        _add_data_args(p)
        if mode == "hc_aecs":
            _add_train_args(p)
        else:
            p.set_defaults(seed=0)
        _add_cluster_args(p, k_required=False)
        p.add_argument("--out", help="optional artifact directory")
        p.set_defaults(func=lambda a, m=mode: _cmd_run(a, m))

    p = sub.add_parser("bench", help="run every dataset in a manifest")
    p.add_argument("--manifest", required=True, help="JSON manifest of datasets")
    p.add_argument("--out", help="output directory for the results table and artifacts")
    p.add_argument("--data-root", default=os.environ.get(DATA_ROOT_ENV),
                   help=f"base directory for dataset paths (default: ${DATA_ROOT_ENV})")
    p.set_defaults(func=_cmd_bench)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigurationError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    except DataError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return 3
    except NumericInstabilityError as exc:
        print(f"numeric error: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
