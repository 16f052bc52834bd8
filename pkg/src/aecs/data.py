"""Loading, validation and normalization of time-series datasets.

Two on-disk formats are supported:

``ucr_tsv``
    One series per line: ``label\\tv1\\tv2...``.  The label column holds an
    integer class id.  All rows must have the same number of columns; a
    trailing run of NaN values in a row is treated as padding for shorter
    series.  Univariate only (d = 1).

``csv_long``
    Long-format CSV with header ``series_id,dim,t,value`` and an optional
    trailing ``label`` column.  Rows may appear in any order; the set of
    timesteps present for a series defines its length, and every
    ``(dim, t)`` pair below that length must be present exactly once.

Both loaders produce a :class:`TimeSeriesDataset` whose ``values`` array is
zero-padded to the longest series and accompanied by a boolean observation
mask.  Class labels are remapped to contiguous ids ``0..n_classes-1`` in
order of first appearance; the original tokens are kept in ``label_names``
so that datasets loaded from separate files (e.g. train/test splits) can be
merged without scrambling the ground truth.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import ConfigurationError, DataError, ParseError, ShapeError

FORMATS = ("ucr_tsv", "csv_long")

_CSV_LONG_HEADER = ["series_id", "dim", "t", "value"]


@dataclass(frozen=True)
class TimeSeriesDataset:
    """A batch of (possibly variable-length) multivariate time series.

    Attributes
    ----------
    values : ndarray of shape (n_series, n_timesteps, n_dims)
        Float64 values, zero-padded past each series' observed length.
    lengths : ndarray of shape (n_series,)
        Observed length of each series; every entry is in ``[2, n_timesteps]``.
    labels : ndarray of shape (n_series,) or None
        Integer class ids ``0..n_classes-1``, or None for unlabeled data.
    label_names : tuple of str or None
        Original label token for each class id.
    mask : ndarray of shape (n_series, n_timesteps)
        Boolean observation mask; ``mask[i, k]`` is ``k < lengths[i]``.
    name : str
        Free-form dataset name used in reports and file names.
    """

    values: np.ndarray
    lengths: np.ndarray
    labels: np.ndarray | None = None
    label_names: tuple[str, ...] | None = None
    mask: np.ndarray = field(default=None)  # type: ignore[assignment]
    name: str = ""

    def __post_init__(self):
        values = np.ascontiguousarray(np.asarray(self.values, dtype=np.float64))
        if values.ndim != 3:
            raise ShapeError(
                f"values must be 3-d (n_series, n_timesteps, n_dims), got shape {values.shape}"
            )
        m, n_max, d = values.shape
        if m < 2:
            raise ShapeError(f"need at least 2 series, got {m}")
        if d < 1:
            raise ShapeError("need at least one dimension per series")

        lengths = np.asarray(self.lengths, dtype=np.int64)
        if lengths.shape != (m,):
            raise ShapeError(f"lengths must have shape ({m},), got {lengths.shape}")
        if lengths.min(initial=n_max) < 2 or lengths.max(initial=0) > n_max:
            raise ShapeError(
                f"every series length must lie in [2, {n_max}], got range "
                f"[{lengths.min()}, {lengths.max()}]"
            )

        mask = np.arange(n_max)[None, :] < lengths[:, None]
        if self.mask is not None:
            given = np.asarray(self.mask, dtype=bool)
            if given.shape != mask.shape or not np.array_equal(given, mask):
                raise ShapeError("mask is inconsistent with lengths")
        # Zero out anything past the observed length so padded positions are
        # exactly 0 regardless of what the caller put there.
        values = values * mask[:, :, None]

        labels = self.labels
        label_names = self.label_names
        if labels is not None:
            labels = np.asarray(labels, dtype=np.int64)
            if labels.shape != (m,):
                raise ShapeError(f"labels must have shape ({m},), got {labels.shape}")
            present = np.unique(labels)
            n_classes = int(labels.max()) + 1 if labels.size else 0
            if labels.min(initial=0) < 0 or not np.array_equal(
                present, np.arange(n_classes)
            ):
                raise ShapeError(
                    "labels must be contiguous integers 0..n_classes-1 with every id used"
                )
            if label_names is None:
                label_names = tuple(str(i) for i in range(n_classes))
            else:
                label_names = tuple(str(t) for t in label_names)
                if len(label_names) != n_classes:
                    raise ShapeError(
                        f"label_names has {len(label_names)} entries for {n_classes} classes"
                    )
        else:
            label_names = None

        for arr in (values, lengths, mask) + ((labels,) if labels is not None else ()):
            arr.setflags(write=False)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "lengths", lengths)
        object.__setattr__(self, "mask", mask)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "label_names", label_names)

    @property
    def n_series(self) -> int:
        return self.values.shape[0]

    @property
    def n_timesteps(self) -> int:
        return self.values.shape[1]

    @property
    def n_dims(self) -> int:
        return self.values.shape[2]

    @property
    def n_classes(self) -> int | None:
        return None if self.labels is None else len(self.label_names)


def _canon_label(token: str, where: str) -> str:
    """Normalize a label token; integer-valued numerics become plain ints."""
    token = token.strip()
    if not token:
        raise ParseError(f"{where}: empty label")
    try:
        v = float(token)
    except ValueError:
        return token
    if not np.isfinite(v) or abs(v - round(v)) > 1e-9:
        raise ParseError(f"{where}: label {token!r} is not an integer class id")
    return str(int(round(v)))


def _map_labels(tokens: list[str]) -> tuple[np.ndarray, tuple[str, ...]]:
    """Map raw label tokens to contiguous ids in order of first appearance."""
    order: dict[str, int] = {}
    for t in tokens:
        if t not in order:
            order[t] = len(order)
    ids = np.array([order[t] for t in tokens], dtype=np.int64)
    return ids, tuple(order.keys())


def _parse_ucr_tsv(path: Path) -> TimeSeriesDataset:
    rows: list[np.ndarray] = []
    tokens: list[str] = []
    lengths: list[int] = []
    n_cols = None
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.rstrip("\r\n")
            if not line.strip():
                continue
            parts = line.split("\t") if "\t" in line else line.split()
            if n_cols is None:
                n_cols = len(parts)
                if n_cols < 3:
                    raise ParseError(
                        f"{path}:{lineno}: need a label and at least 2 values per row"
                    )
            elif len(parts) != n_cols:
                raise ParseError(
                    f"{path}:{lineno}: expected {n_cols} columns, found {len(parts)}"
                )
            tokens.append(_canon_label(parts[0], f"{path}:{lineno}"))
            try:
                vals = np.array([float(p) for p in parts[1:]], dtype=np.float64)
            except ValueError:
                raise ParseError(f"{path}:{lineno}: non-numeric value") from None
            if np.isinf(vals).any():
                raise ParseError(f"{path}:{lineno}: non-finite value")
            # Trailing NaNs mark padding for shorter series; NaN anywhere else
            # would need imputation, which is out of scope.
            finite = np.isfinite(vals)
            length = int(finite.nonzero()[0][-1]) + 1 if finite.any() else 0
            if not finite[:length].all():
                raise ParseError(f"{path}:{lineno}: NaN inside the observed range")
            vals = vals.copy()
            vals[length:] = 0.0
            rows.append(vals)
            lengths.append(length)
    if not rows:
        raise ParseError(f"{path}: no data rows")
    values = np.stack(rows)[:, :, None]
    labels, names = _map_labels(tokens)
    return TimeSeriesDataset(
        values=values,
        lengths=np.array(lengths, dtype=np.int64),
        labels=labels,
        label_names=names,
        name=path.stem,
    )


def _parse_csv_long(path: Path) -> TimeSeriesDataset:
    per_series: dict[int, dict[int, dict[int, float]]] = {}
    label_tokens: dict[int, str] = {}
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ParseError(f"{path}: empty file") from None
        header = [h.strip() for h in header]
        has_label = header == _CSV_LONG_HEADER + ["label"]
        if not has_label and header != _CSV_LONG_HEADER:
            raise ParseError(
                f"{path}:1: header must be 'series_id,dim,t,value[,label]', got {','.join(header)}"
            )
        width = len(header)
        for lineno, row in enumerate(reader, 2):
            if not row or (len(row) == 1 and not row[0].strip()):
                continue
            if len(row) != width:
                raise ParseError(
                    f"{path}:{lineno}: expected {width} fields, found {len(row)}"
                )
            try:
                sid, dim, t = int(row[0]), int(row[1]), int(row[2])
                value = float(row[3])
            except ValueError:
                raise ParseError(f"{path}:{lineno}: malformed row") from None
            if sid < 0 or dim < 0 or t < 0:
                raise ParseError(f"{path}:{lineno}: negative series_id, dim or t")
            if not np.isfinite(value):
                raise ParseError(f"{path}:{lineno}: non-finite value")
            cell = per_series.setdefault(sid, {}).setdefault(dim, {})
            if t in cell:
                raise ParseError(
                    f"{path}:{lineno}: duplicate entry for series {sid}, dim {dim}, t {t}"
                )
            cell[t] = value
            if has_label:
                token = _canon_label(row[4], f"{path}:{lineno}")
                if label_tokens.setdefault(sid, token) != token:
                    raise ParseError(
                        f"{path}:{lineno}: conflicting labels for series {sid}"
                    )
    if not per_series:
        raise ParseError(f"{path}: no data rows")

    sids = sorted(per_series)
    m = len(sids)
    if sids != list(range(m)):
        raise ParseError(f"{path}: series_id values must cover 0..{m - 1} contiguously")
    d = max(max(dims) for dims in per_series.values()) + 1
    lengths = np.zeros(m, dtype=np.int64)
    for sid in sids:
        dims = per_series[sid]
        if sorted(dims) != list(range(d)):
            raise ParseError(f"{path}: series {sid} is missing dimensions (expected {d})")
        length = max(max(cell) for cell in dims.values()) + 1
        for dim in range(d):
            if sorted(dims[dim]) != list(range(length)):
                raise ParseError(
                    f"{path}: series {sid}, dim {dim} has gaps (expected t = 0..{length - 1})"
                )
        lengths[sid] = length

    n_max = int(lengths.max())
    values = np.zeros((m, n_max, d), dtype=np.float64)
    for sid in sids:
        for dim, cell in per_series[sid].items():
            for t, v in cell.items():
                values[sid, t, dim] = v

    labels = names = None
    if label_tokens:
        ids, names = _map_labels([label_tokens[sid] for sid in sids])
        labels = ids
    return TimeSeriesDataset(
        values=values,
        lengths=lengths,
        labels=labels,
        label_names=names,
        name=path.stem,
    )


def load_dataset(path, fmt: str = "ucr_tsv") -> TimeSeriesDataset:
    """Load a dataset file in one of the supported formats.

    Parameters
    ----------
    path : str or Path
    fmt : {"ucr_tsv", "csv_long"}
    """
    if fmt not in FORMATS:
        raise ConfigurationError(f"unknown format {fmt!r}; expected one of {FORMATS}")
    path = Path(path)
    if not path.is_file():
        raise DataError(f"no such data file: {path}")
    if fmt == "ucr_tsv":
        return _parse_ucr_tsv(path)
    return _parse_csv_long(path)


def save_dataset(ds: TimeSeriesDataset, path) -> None:
    """Write a dataset as csv_long.  Values round-trip bit-exactly."""
    path = Path(path)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(_CSV_LONG_HEADER + (["label"] if ds.labels is not None else []))
        for i in range(ds.n_series):
            tail = [ds.label_names[ds.labels[i]]] if ds.labels is not None else []
            for dim in range(ds.n_dims):
                for t in range(int(ds.lengths[i])):
                    writer.writerow([i, dim, t, repr(float(ds.values[i, t, dim]))] + tail)


def merge(a: TimeSeriesDataset, b: TimeSeriesDataset) -> TimeSeriesDataset:
    """Concatenate two datasets (e.g. a train/test split) into one.

    Label vocabularies are reconciled by token: classes keep ``a``'s ids and
    any class seen only in ``b`` is appended.  If either side is unlabeled the
    result is unlabeled.
    """
    if a.n_dims != b.n_dims:
        raise ShapeError(
            f"cannot merge: {a.n_dims} vs {b.n_dims} dimensions per series"
        )
    n_max = max(a.n_timesteps, b.n_timesteps)

    def pad(v: np.ndarray) -> np.ndarray:
        if v.shape[1] == n_max:
            return v
        out = np.zeros((v.shape[0], n_max, v.shape[2]), dtype=np.float64)
        out[:, : v.shape[1], :] = v
        return out

    values = np.concatenate([pad(a.values), pad(b.values)])
    lengths = np.concatenate([a.lengths, b.lengths])

    labels = names = None
    if a.labels is not None and b.labels is not None:
        merged = list(a.label_names)
        index = {t: i for i, t in enumerate(merged)}
        for t in b.label_names:
            if t not in index:
                index[t] = len(merged)
                merged.append(t)
        remap = np.array([index[t] for t in b.label_names], dtype=np.int64)
        labels = np.concatenate([a.labels, remap[b.labels]])
        names = tuple(merged)

    name = a.name if a.name == b.name else "+".join(n for n in (a.name, b.name) if n)
    return TimeSeriesDataset(
        values=values, lengths=lengths, labels=labels, label_names=names, name=name
    )


def z_normalize(ds: TimeSeriesDataset, eps: float = 1e-8) -> TimeSeriesDataset:
    """Normalize each series-dimension slice to zero mean and unit variance.

    Statistics are computed over the observed timesteps of each individual
    series (population variance).  Slices whose standard deviation is at most
    ``eps`` are only centered.  Padded positions stay zero.
    """
    counts = ds.lengths[:, None].astype(np.float64)
    mask3 = ds.mask[:, :, None]
    means = ds.values.sum(axis=1) / counts
    centered = (ds.values - means[:, None, :]) * mask3
    std = np.sqrt((centered**2).sum(axis=1) / counts)
    scale = np.where(std > eps, std, 1.0)
    return TimeSeriesDataset(
        values=centered / scale[:, None, :],
        lengths=ds.lengths,
        labels=ds.labels,
        label_names=ds.label_names,
        name=ds.name,
    )


def as_dataset(x, lengths=None, labels=None, name: str = "") -> TimeSeriesDataset:
    """Coerce an array into a :class:`TimeSeriesDataset`.

    Accepts ``(n_series, n_timesteps)`` or ``(n_series, n_timesteps, n_dims)``
    arrays.  When ``lengths`` is omitted, a trailing run of NaNs in a series
    marks padding; otherwise series are taken at full length.
    """
    if isinstance(x, TimeSeriesDataset):
        return x
    arr = np.asarray(x, dtype=np.float64)
    if arr.ndim == 2:
        arr = arr[:, :, None]
    if arr.ndim != 3:
        raise ShapeError(f"expected a 2-d or 3-d array, got shape {arr.shape}")
    if lengths is None:
        observed = np.isfinite(arr).all(axis=2)
        rev = observed[:, ::-1]
        lengths = arr.shape[1] - rev.argmax(axis=1)
        lengths = np.where(observed.any(axis=1), lengths, 0)
    lengths = np.asarray(lengths, dtype=np.int64)
    mask = np.arange(arr.shape[1])[None, :] < lengths[:, None]
    arr = np.where(mask[:, :, None], arr, 0.0)
    if not np.isfinite(arr).all():
        raise DataError("non-finite values inside the observed range")
    return TimeSeriesDataset(values=arr, lengths=lengths, labels=labels, name=name)


def ucr_paths(root, name: str) -> tuple[Path, Path | None]:
    """Locate ``<name>_TRAIN`` / ``<name>_TEST`` files under a data root.

    Looks in ``root/name/`` first, then directly in ``root``, trying ``.tsv``
    and ``.txt`` suffixes.  The test file is optional.
    """
    root = Path(root)
    for base in (root / name, root):
        for suffix in (".tsv", ".txt"):
            train = base / f"{name}_TRAIN{suffix}"
            if train.is_file():
                test = base / f"{name}_TEST{suffix}"
                return train, (test if test.is_file() else None)
    raise DataError(f"could not find {name}_TRAIN under {root}")
