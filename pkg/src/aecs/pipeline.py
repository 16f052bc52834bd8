"""End-to-end runs: data -> latent codes -> clusterings -> selection report.

``run_hc_aecs`` is the main entry point: it loads a dataset (merging a test
split if given), z-normalizes it, trains the autoencoder (or reuses a cached
model for the same data and hyperparameters), extracts the latent matrix,
clusters it under every requested distance measure, scores each clustering
with the Hubert statistic, picks the best measure and, when ground-truth
labels exist, attaches Rand index and NMI.  ``run_hc_raw`` is the ablation
that clusters the raw flattened series instead.  ``benchmark`` repeats runs
over a manifest of datasets and tabulates the results.

Timings are split into the three stages (autoencoder, clustering,
validation) so representation cost and clustering cost stay distinguishable.
"""

from __future__ import annotations

import csv
import hashlib
import json
import platform
import time
from dataclasses import asdict, dataclass, replace
from pathlib import Path

import numpy as np
from sklearn.base import BaseEstimator, ClusterMixin

from .autoencoder import (
    AutoencoderModel,
    LatentMatrix,
    TrainConfig,
    TrainTrace,
    extract_aecs,
    init_model,
    load_model,
    save_model,
    train,
)
from .cluster import Dendrogram, FlatClustering, agglomerate, cut
from .data import TimeSeriesDataset, as_dataset, load_dataset, merge, ucr_paths, z_normalize
from .distances import MEASURES, CovarianceModel, canonical_measure, distance_matrix, fit_covariance
from .errors import ConfigurationError, DataError, ParseError
from .selection import MeasureResult, SelectionReport, best_cluster, hubert_statistic, nmi, rand_index

REPORT_FORMAT_VERSION = 1

#: JSON schema the run report validates against.
REPORT_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": [
        "format_version", "mode", "dataset", "config",
        "selection", "timings", "environment", "cache_hit",
    ],
    "properties": {
        "format_version": {"const": REPORT_FORMAT_VERSION},
        "mode": {"enum": ["hc_aecs", "hc_raw"]},
        "dataset": {
            "type": "object",
            "required": ["name", "n_series", "n_timesteps", "n_dims", "n_clusters"],
            "properties": {
                "name": {"type": "string"},
                "n_series": {"type": "integer", "minimum": 2},
                "n_timesteps": {"type": "integer", "minimum": 2},
                "n_dims": {"type": "integer", "minimum": 1},
                "n_classes": {"type": ["integer", "null"]},
                "n_clusters": {"type": "integer", "minimum": 1},
            },
        },
        "config": {"type": "object"},
        "selection": {
            "type": "object",
            "required": ["best_measures", "measures"],
            "properties": {
                "best_measures": {
                    "type": "array",
                    "items": {"enum": list(MEASURES)},
                    "minItems": 1,
                },
                "measures": {
                    "type": "object",
                    "additionalProperties": {
                        "type": "object",
                        "required": ["hubert", "n_clusters", "cluster_sizes"],
                        "properties": {
                            "hubert": {"type": "number"},
                            "covariance_fingerprint": {"type": "string"},
                            "n_clusters": {"type": "integer"},
                            "cluster_sizes": {"type": "array", "items": {"type": "integer"}},
                            "rand_index": {"type": ["number", "null"]},
                            "nmi": {"type": ["number", "null"]},
                        },
                    },
                },
            },
        },
        "timings": {
            "type": "object",
            "required": ["autoencoder", "clustering", "validation", "total"],
            "additionalProperties": {"type": "number"},
        },
        "environment": {"type": "object"},
        "train_trace": {"type": ["object", "null"]},
        "cache_hit": {"type": "boolean"},
        "model_fingerprint": {"type": ["string", "null"]},
    },
}


@dataclass
class RunConfig:
    """Configuration of one end-to-end run.

    ``n_clusters`` defaults to the number of label classes in the data; for
    unlabeled data it must be given.  ``name`` overrides the dataset name
    used in reports and file names.
    """

    train_path: str | Path | None = None
    test_path: str | Path | None = None
    fmt: str = "ucr_tsv"
    name: str | None = None
    hidden1: int = 16
    hidden2: int = 12
    epochs: int = 30
    batch_size: int = 32
    learning_rate: float = 0.004
    momentum: float = 0.0
    clip_norm: float | None = None
    seed: int = 0
    n_clusters: int | None = None
    measures: tuple[str, ...] = MEASURES
    ridge: float | None = None
    output_dir: str | Path | None = None
    cache_dir: str | Path | None = None
    use_cache: bool = True

    def __post_init__(self):
        seen: list[str] = []
        for m in self.measures:
            c = canonical_measure(m)
            if c not in seen:
                seen.append(c)
        if not seen:
            raise ConfigurationError("at least one distance measure is required")
        self.measures = tuple(sorted(seen, key=MEASURES.index))
        if self.n_clusters is not None and self.n_clusters < 1:
            raise ConfigurationError(f"n_clusters must be >= 1, got {self.n_clusters}")

    def train_config(self) -> TrainConfig:
        return TrainConfig(
            epochs=self.epochs,
            batch_size=self.batch_size,
            learning_rate=self.learning_rate,
            momentum=self.momentum,
            seed=self.seed,
            clip_norm=self.clip_norm,
        )

    def public_dict(self) -> dict:
        out = asdict(self)
        for key in ("train_path", "test_path", "output_dir", "cache_dir"):
            if out[key] is not None:
                out[key] = str(out[key])
        out["measures"] = list(out["measures"])
        return out


@dataclass(frozen=True)
class RunReport:
    """Everything a run produced, minus the bulky artifacts."""

    mode: str
    dataset: dict
    config: dict
    selection: SelectionReport
    timings: dict
    environment: dict
    train_trace: TrainTrace | None
    cache_hit: bool
    model_fingerprint: str | None

    def to_dict(self) -> dict:
        return {
            "format_version": REPORT_FORMAT_VERSION,
            "mode": self.mode,
            "dataset": self.dataset,
            "config": self.config,
            "selection": self.selection.to_dict(),
            "timings": self.timings,
            "environment": self.environment,
            "train_trace": None if self.train_trace is None else self.train_trace.to_dict(),
            "cache_hit": self.cache_hit,
            "model_fingerprint": self.model_fingerprint,
        }

    def save(self, path) -> None:
        Path(path).write_text(json.dumps(self.to_dict(), indent=2) + "\n", encoding="utf-8")


def _environment() -> dict:
    return {
        "python": platform.python_version(),
        "numpy": np.__version__,
        "platform": platform.platform(),
    }


def load_input(config: RunConfig) -> TimeSeriesDataset:
    """Load the train file, merge the optional test file, z-normalize."""
    if config.train_path is None:
        raise ConfigurationError("no train path configured")
    ds = load_dataset(config.train_path, fmt=config.fmt)
    if config.test_path is not None:
        ds = merge(ds, load_dataset(config.test_path, fmt=config.fmt))
    ds = z_normalize(ds)
    if config.name:
        ds = replace(ds, name=config.name)
    return ds


def _resolve_clusters(config: RunConfig, ds: TimeSeriesDataset) -> int:
    if config.n_clusters is not None:
        return config.n_clusters
    if ds.n_classes is not None:
        return int(ds.n_classes)
    raise ConfigurationError("n_clusters is required when the data has no labels")


def flatten_series(ds: TimeSeriesDataset) -> np.ndarray:
    """Raw representation: each padded series flattened to one row."""
    return ds.values.reshape(ds.n_series, -1)


def cluster_rows(rows: np.ndarray, measures: tuple[str, ...], n_clusters: int,
                 ridge: float | None = None):
    """Cluster a row matrix under each measure.

    Returns ``(per-measure dict of (Dendrogram, FlatClustering), covariance)``.
    The covariance is fitted once on ``rows`` and shared by the Mahalanobis
    measure and the Hubert statistic.
    """
    cov = fit_covariance(rows, ridge=ridge)
    out: dict[str, tuple[Dendrogram, FlatClustering]] = {}
    for measure in measures:
        measure = canonical_measure(measure)
        dist = distance_matrix(rows, measure, cov=cov if measure == "mahalanobis" else None)
        dendrogram = agglomerate(dist)
        flat = replace(cut(dendrogram, n_clusters), measure=measure)
        out[measure] = (dendrogram, flat)
    return out, cov


def evaluate(rows: np.ndarray, clusterings: dict[str, tuple[Dendrogram, FlatClustering]],
             cov: CovarianceModel, labels=None) -> SelectionReport:
    """Score each clustering with the Hubert statistic and pick the best.

    When ``labels`` is given, Rand index and NMI against it are attached to
    every measure's result.
    """
    results: dict[str, MeasureResult] = {}
    for measure, (_, flat) in clusterings.items():
        score = hubert_statistic(rows, flat, cov=cov)
        ri = value = None
        if labels is not None:
            ri = rand_index(labels, flat.assignments)
            value = nmi(labels, flat.assignments)
        results[measure] = MeasureResult(clustering=flat, hubert=score, rand_index=ri, nmi=value)
    return best_cluster(results)


def dataset_fingerprint(ds: TimeSeriesDataset) -> str:
    h = hashlib.sha256()
    h.update(repr(ds.values.shape).encode())
    h.update(ds.values.tobytes())
    h.update(ds.lengths.tobytes())
    return h.hexdigest()[:16]


def _cache_key(config: RunConfig, ds: TimeSeriesDataset) -> str:
    material = repr((
        dataset_fingerprint(ds),
        config.hidden1, config.hidden2, config.epochs, config.batch_size,
        config.learning_rate, config.momentum, config.clip_norm, config.seed,
    ))
    return hashlib.sha256(material.encode()).hexdigest()[:16]


def _cache_dir(config: RunConfig) -> Path | None:
    if config.cache_dir is not None:
        return Path(config.cache_dir)
    if config.output_dir is not None:
        return Path(config.output_dir) / "cache"
    return None


def compute_latents(config: RunConfig, ds: TimeSeriesDataset):
    """Train or load the model; returns (model, latent, trace, cache_hit).

    With caching enabled, a checkpoint keyed by the dataset fingerprint and
    every training hyperparameter is reused when present: the model is loaded
    and only the (cheap, deterministic) latent extraction reruns.
    """
    cache_dir = _cache_dir(config) if config.use_cache else None
    cache_file = None
    if cache_dir is not None:
        cache_file = cache_dir / f"aecs-model-{_cache_key(config, ds)}.npz"
        if cache_file.is_file():
            model = load_model(cache_file)
            return model, extract_aecs(model, ds), None, True
    model = init_model(ds.n_dims, hidden1=config.hidden1, hidden2=config.hidden2,
                       seed=config.seed)
    model, trace = train(model, ds, config.train_config())
    if cache_file is not None:
        cache_file.parent.mkdir(parents=True, exist_ok=True)
        save_model(model, cache_file)
    return model, extract_aecs(model, ds), trace, False


# ---------------------------------------------------------------------------
# Artifact files


def _format_float(x: float) -> str:
    return repr(float(x))


def write_latent_csv(path, latent: np.ndarray) -> None:
    """Latent matrix as CSV: ``series_id,z0,...``; values round-trip exactly."""
    latent = np.asarray(latent)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["series_id"] + [f"z{j}" for j in range(latent.shape[1])])
        for i, row in enumerate(latent):
            writer.writerow([i] + [_format_float(v) for v in row])


def read_latent_csv(path) -> np.ndarray:
    path = Path(path)
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ParseError(f"{path}: empty file") from None
        width = len(header) - 1
        if header[0] != "series_id" or width < 1 or header[1:] != [f"z{j}" for j in range(width)]:
            raise ParseError(f"{path}:1: expected header 'series_id,z0,...'")
        rows = []
        for lineno, row in enumerate(reader, 2):
            if not row:
                continue
            if len(row) != width + 1:
                raise ParseError(f"{path}:{lineno}: expected {width + 1} fields")
            try:
                sid = int(row[0])
                values = [float(v) for v in row[1:]]
            except ValueError:
                raise ParseError(f"{path}:{lineno}: malformed row") from None
            if sid != len(rows):
                raise ParseError(f"{path}:{lineno}: series_id values must be 0,1,2,...")
            rows.append(values)
    if len(rows) < 2:
        raise ParseError(f"{path}: need at least 2 rows")
    return np.array(rows, dtype=np.float64)


def write_clusters_csv(path, flat: FlatClustering) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["series_id", "cluster"])
        for i, cid in enumerate(flat.assignments):
            writer.writerow([i, int(cid)])


def write_labels_csv(path, labels: np.ndarray, label_names: tuple[str, ...]) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["series_id", "label"])
        for i, lab in enumerate(labels):
            writer.writerow([i, label_names[int(lab)]])


def read_labels_csv(path) -> np.ndarray:
    """Read a ``series_id,label`` file into contiguous integer ids."""
    path = Path(path)
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or [h.strip() for h in header] != ["series_id", "label"]:
            raise ParseError(f"{path}:1: expected header 'series_id,label'")
        tokens: list[str] = []
        for lineno, row in enumerate(reader, 2):
            if not row:
                continue
            if len(row) != 2:
                raise ParseError(f"{path}:{lineno}: expected 2 fields")
            try:
                sid = int(row[0])
            except ValueError:
                raise ParseError(f"{path}:{lineno}: malformed series_id") from None
            if sid != len(tokens):
                raise ParseError(f"{path}:{lineno}: series_id values must be 0,1,2,...")
            tokens.append(row[1])
    if not tokens:
        raise ParseError(f"{path}: no data rows")
    order: dict[str, int] = {}
    for t in tokens:
        order.setdefault(t, len(order))
    return np.array([order[t] for t in tokens], dtype=np.int64)


def write_dendrogram_text(path, dendrogram: Dendrogram) -> None:
    """One merge per line: ``merge_index,a,b,distance,size``."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("merge_index,a,b,distance,size\n")
        for t in range(dendrogram.n_merges):
            a, b = dendrogram.pairs[t]
            fh.write(
                f"{t},{int(a)},{int(b)},{_format_float(dendrogram.heights[t])},"
                f"{int(dendrogram.sizes[t])}\n"
            )


def _write_run_artifacts(config: RunConfig, report: RunReport, ds: TimeSeriesDataset,
                         clusterings, latent: LatentMatrix | None,
                         model: AutoencoderModel | None, trace: TrainTrace | None) -> None:
    out = Path(config.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    report.save(out / "report.json")
    (out / "report_schema.json").write_text(
        json.dumps(REPORT_SCHEMA, indent=2) + "\n", encoding="utf-8"
    )
    if latent is not None:
        write_latent_csv(out / "latent.csv", latent.values)
    if model is not None:
        save_model(model, out / "model.npz")
    if trace is not None:
        (out / "train_trace.json").write_text(
            json.dumps(trace.to_dict(), indent=2) + "\n", encoding="utf-8"
        )
    if ds.labels is not None:
        write_labels_csv(out / "labels.csv", ds.labels, ds.label_names)
    for measure, (dendrogram, flat) in clusterings.items():
        write_dendrogram_text(out / f"dendrogram_{measure}.txt", dendrogram)
        write_clusters_csv(out / f"clusters_{measure}.csv", flat)


# ---------------------------------------------------------------------------
# End-to-end runs


def _run(config: RunConfig, mode: str) -> RunReport:
    t_start = time.perf_counter()
    ds = load_input(config)
    n_clusters = _resolve_clusters(config, ds)

    model = latent = trace = None
    cache_hit = False
    t0 = time.perf_counter()
    if mode == "hc_aecs":
        model, latent, trace, cache_hit = compute_latents(config, ds)
        rows = latent.values
    else:
        rows = flatten_series(ds)
    t_autoencoder = time.perf_counter() - t0

    t0 = time.perf_counter()
    clusterings, cov = cluster_rows(rows, config.measures, n_clusters, ridge=config.ridge)
    t_clustering = time.perf_counter() - t0

    t0 = time.perf_counter()
    selection = evaluate(rows, clusterings, cov, labels=ds.labels)
    t_validation = time.perf_counter() - t0

    report = RunReport(
        mode=mode,
        dataset={
            "name": ds.name,
            "n_series": ds.n_series,
            "n_timesteps": ds.n_timesteps,
            "n_dims": ds.n_dims,
            "n_classes": ds.n_classes,
            "n_clusters": n_clusters,
        },
        config=config.public_dict(),
        selection=selection,
        timings={
            "autoencoder": t_autoencoder,
            "clustering": t_clustering,
            "validation": t_validation,
            "total": time.perf_counter() - t_start,
        },
        environment=_environment(),
        train_trace=trace,
        cache_hit=cache_hit,
        model_fingerprint=None if model is None else model.fingerprint,
    )
    if config.output_dir is not None:
        _write_run_artifacts(config, report, ds, clusterings, latent, model, trace)
    return report


def run_hc_aecs(config: RunConfig) -> RunReport:
    """Full pipeline on the learned latent representation."""
    return _run(config, "hc_aecs")


def run_hc_raw(config: RunConfig) -> RunReport:
    """Ablation: the same clustering and selection on raw flattened series."""
    return _run(config, "hc_raw")


# ---------------------------------------------------------------------------
# Benchmark harness

_MANIFEST_KEYS = {
    "name", "train", "test", "format", "mode", "n_clusters", "measures",
    "hidden1", "hidden2", "epochs", "batch_size", "learning_rate",
    "momentum", "clip_norm", "seed", "ridge",
}

_BENCH_COLUMNS = [
    "name", "mode", "status", "n_series", "n_timesteps", "n_dims", "n_clusters",
    "best_measures",
    "hubert_chebyshev", "hubert_manhattan", "hubert_mahalanobis",
    "rand_index_chebyshev", "rand_index_manhattan", "rand_index_mahalanobis",
    "nmi_chebyshev", "nmi_manhattan", "nmi_mahalanobis",
    "t_autoencoder", "t_clustering", "t_validation", "t_total",
]


def _bench_row(name: str, mode: str, report: RunReport | None, error: str | None) -> dict:
    row = {col: "" for col in _BENCH_COLUMNS}
    row["name"] = name
    row["mode"] = mode
    if error is not None:
        row["status"] = f"error: {error}"
        return row
    row["status"] = "ok"
    row["n_series"] = report.dataset["n_series"]
    row["n_timesteps"] = report.dataset["n_timesteps"]
    row["n_dims"] = report.dataset["n_dims"]
    row["n_clusters"] = report.dataset["n_clusters"]
    row["best_measures"] = ";".join(report.selection.best_measures)
    for measure, res in report.selection.results.items():
        row[f"hubert_{measure}"] = res.hubert.value
        if res.rand_index is not None:
            row[f"rand_index_{measure}"] = res.rand_index
        if res.nmi is not None:
            row[f"nmi_{measure}"] = res.nmi
    row["t_autoencoder"] = report.timings["autoencoder"]
    row["t_clustering"] = report.timings["clustering"]
    row["t_validation"] = report.timings["validation"]
    row["t_total"] = report.timings["total"]
    return row


def benchmark(manifest_path, output_dir=None, data_root=None) -> list[dict]:
    """Run every dataset in a manifest; one failure does not stop the rest.

    The manifest is JSON: ``{"defaults": {...}, "datasets": [{...}, ...]}``.
    Each dataset entry may name explicit ``train``/``test`` files or just a
    ``name`` resolved as a train/test pair under the data root.  Returns one
    result row per entry and, when ``output_dir`` is given, writes
    ``bench_results.csv`` plus per-dataset artifact directories.
    """
    manifest_path = Path(manifest_path)
    if not manifest_path.is_file():
        raise DataError(f"no such manifest: {manifest_path}")
    try:
        manifest = json.loads(manifest_path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ParseError(f"{manifest_path}: invalid JSON ({exc})") from None
    if not isinstance(manifest, dict) or not isinstance(manifest.get("datasets"), list):
        raise ConfigurationError(f"{manifest_path}: manifest must contain a 'datasets' list")
    defaults = manifest.get("defaults", {})
    if not isinstance(defaults, dict):
        raise ConfigurationError(f"{manifest_path}: 'defaults' must be an object")
    root = Path(data_root or manifest.get("data_root") or manifest_path.parent)

    rows = []
    for i, entry in enumerate(manifest["datasets"]):
        if not isinstance(entry, dict):
            raise ConfigurationError(f"{manifest_path}: dataset entry {i} must be an object")
        spec = {**defaults, **entry}
        unknown = set(spec) - _MANIFEST_KEYS
        if unknown:
            raise ConfigurationError(
                f"{manifest_path}: dataset entry {i} has unknown keys {sorted(unknown)}"
            )
        name = spec.get("name") or f"dataset{i}"
        mode = spec.get("mode", "hc_aecs")
        if mode not in ("hc_aecs", "hc_raw"):
            raise ConfigurationError(f"{manifest_path}: unknown mode {mode!r} for {name}")
        try:
            if "train" in spec:
                train_path = root / spec["train"]
                test_path = root / spec["test"] if "test" in spec else None
            else:
                train_path, test_path = ucr_paths(root, name)
            config = RunConfig(
                train_path=train_path,
                test_path=test_path,
                fmt=spec.get("format", "ucr_tsv"),
                name=name,
                n_clusters=spec.get("n_clusters"),
                measures=tuple(spec.get("measures", MEASURES)),
                output_dir=None if output_dir is None else Path(output_dir) / name,
                **{k: spec[k] for k in (
                    "hidden1", "hidden2", "epochs", "batch_size", "learning_rate",
                    "momentum", "clip_norm", "seed", "ridge",
                ) if k in spec},
            )
            report = run_hc_aecs(config) if mode == "hc_aecs" else run_hc_raw(config)
            rows.append(_bench_row(name, mode, report, None))
        except Exception as exc:  # noqa: BLE001 - one bad dataset must not stop the sweep
            rows.append(_bench_row(name, mode, None, str(exc)))
    if output_dir is not None:
        out = Path(output_dir)
        out.mkdir(parents=True, exist_ok=True)
        with open(out / "bench_results.csv", "w", newline="", encoding="utf-8") as fh:
            writer = csv.DictWriter(fh, fieldnames=_BENCH_COLUMNS)
            writer.writeheader()
            writer.writerows(rows)
    return rows


# ---------------------------------------------------------------------------
# Estimator facade


class CompactSequenceClustering(BaseEstimator, ClusterMixin):
    """One-stop estimator: autoencode (optional), cluster, select.

    ``fit(X)`` accepts a TimeSeriesDataset or a padded array; ``y`` is only
    used for external validation scores in ``report_``.  After fitting,
    ``labels_`` holds the clustering of the automatically selected measure.

    Parameters
    ----------
    n_clusters : int or None
        Flat clusters to cut; None uses the label count from a
        TimeSeriesDataset input or from ``y``.
    representation : {"latent", "raw"}
        Cluster learned latent codes or raw flattened series.
    measures : tuple of str
        Distance measures to try.
    Remaining parameters mirror the autoencoder hyperparameters.

    Attributes
    ----------
    labels_ : ndarray
    best_measure_ : str
    report_ : SelectionReport
    latent_ : ndarray or None
    autoencoder_ : AutoencoderModel or None
    dendrograms_ : dict of measure -> Dendrogram
    """

    def __init__(self, n_clusters: int | None = None, representation: str = "latent",
                 measures: tuple[str, ...] = MEASURES, hidden1: int = 16, hidden2: int = 12,
                 epochs: int = 30, batch_size: int = 32, learning_rate: float = 0.004,
                 momentum: float = 0.0, clip_norm: float | None = None,
                 ridge: float | None = None, seed: int = 0):
        self.n_clusters = n_clusters
        self.representation = representation
        self.measures = measures
        self.hidden1 = hidden1
        self.hidden2 = hidden2
        self.epochs = epochs
        self.batch_size = batch_size
        self.learning_rate = learning_rate
        self.momentum = momentum
        self.clip_norm = clip_norm
        self.ridge = ridge
        self.seed = seed

    def fit(self, X, y=None, lengths=None):
        if self.representation not in ("latent", "raw"):
            raise ConfigurationError(
                f"representation must be 'latent' or 'raw', got {self.representation!r}"
            )
        ds = z_normalize(as_dataset(X, lengths=lengths))
        labels = ds.labels if y is None else np.asarray(y)
        n_clusters = self.n_clusters
        if n_clusters is None:
            if labels is None:
                raise ConfigurationError("n_clusters is required when no labels are available")
            n_clusters = len(np.unique(labels))

        self.autoencoder_ = None
        self.latent_ = None
        if self.representation == "latent":
            model = init_model(ds.n_dims, hidden1=self.hidden1, hidden2=self.hidden2,
                               seed=self.seed)
            config = TrainConfig(
                epochs=self.epochs, batch_size=self.batch_size,
                learning_rate=self.learning_rate, momentum=self.momentum,
                seed=self.seed, clip_norm=self.clip_norm,
            )
            self.autoencoder_, self.trace_ = train(model, ds, config)
            rows = extract_aecs(self.autoencoder_, ds).values
            self.latent_ = rows
        else:
            rows = flatten_series(ds)

        measures = tuple(canonical_measure(m) for m in self.measures)
        clusterings, cov = cluster_rows(rows, measures, n_clusters, ridge=self.ridge)
        self.report_ = evaluate(rows, clusterings, cov, labels=labels)
        self.dendrograms_ = {m: dg for m, (dg, _) in clusterings.items()}
        self.best_measure_ = self.report_.best
        self.labels_ = self.report_.results[self.best_measure_].clustering.assignments.copy()
        return self
