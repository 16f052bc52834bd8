"""Clustering quality scores and automatic selection of the best measure.

Internal validation uses the modified Hubert statistic: the mean, over all
unordered item pairs, of the product between the items' Mahalanobis distance
and the Mahalanobis distance between their clusters' centers.  Larger values
mean better-separated clusterings, and the measure(s) attaining the maximum
are selected.  External validation against ground-truth labels uses the Rand
index and normalized mutual information.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .cluster import FlatClustering
from .distances import MEASURES, CovarianceModel, canonical_measure, fit_covariance
from .errors import ConfigurationError, ShapeError

# Scratch-size cap for the blockwise pair sums (~160 MB of float64).
_BLOCK_BUDGET = 20_000_000

# Hubert values are compared after rounding to this many significant digits,
# so float noise cannot hide a genuine tie between measures.
_TIE_DIGITS = 12


@dataclass(frozen=True)
class HubertScore:
    """Modified Hubert statistic of one clustering.

    ``covariance_fingerprint`` identifies the covariance model used, so
    scores are only comparable when their fingerprints match.
    """

    value: float
    measure: str | None
    covariance_fingerprint: str


@dataclass(frozen=True)
class MeasureResult:
    """Everything computed for a single distance measure."""

    clustering: FlatClustering
    hubert: HubertScore
    rand_index: float | None = None
    nmi: float | None = None


@dataclass(frozen=True)
class SelectionReport:
    """Per-measure results plus the measure(s) with the best Hubert score."""

    results: dict[str, MeasureResult]
    best_measures: tuple[str, ...]

    @property
    def best(self) -> str:
        return self.best_measures[0]

    def to_dict(self) -> dict:
        out: dict = {"best_measures": list(self.best_measures), "measures": {}}
        for name, res in self.results.items():
            out["measures"][name] = {
                "hubert": res.hubert.value,
                "covariance_fingerprint": res.hubert.covariance_fingerprint,
                "n_clusters": res.clustering.n_clusters,
                "cluster_sizes": np.bincount(
                    res.clustering.assignments, minlength=res.clustering.n_clusters
                ).tolist(),
                "rand_index": res.rand_index,
                "nmi": res.nmi,
            }
        return out


def _assignments(clustering) -> tuple[np.ndarray, int, str | None]:
    if isinstance(clustering, FlatClustering):
        return clustering.assignments, clustering.n_clusters, clustering.measure
    arr = np.asarray(clustering).ravel()
    if arr.size == 0:
        raise ShapeError("empty clustering")
    _, inverse = np.unique(arr, return_inverse=True)
    return inverse.astype(np.int64), int(inverse.max()) + 1, None


def hubert_statistic(rows, clustering, cov: CovarianceModel | None = None) -> HubertScore:
    """Modified Hubert statistic of a clustering over a row collection.

    Both the item-to-item distances and the center-to-center distances are
    Mahalanobis under ``cov`` (fitted on ``rows`` when omitted), regardless of
    which measure produced the clustering.  A single cluster scores exactly 0.
    """
    rows = np.asarray(rows, dtype=np.float64)
    if rows.ndim != 2:
        raise ShapeError(f"rows must be 2-d, got shape {rows.shape}")
    m = rows.shape[0]
    if m < 2:
        raise ShapeError("need at least 2 rows")
    assign, n_clusters, measure = _assignments(clustering)
    if assign.shape[0] != m:
        raise ShapeError(
            f"clustering covers {assign.shape[0]} items but there are {m} rows"
        )
    if cov is None:
        cov = fit_covariance(rows)
    if cov.dim != rows.shape[1]:
        raise ShapeError(
            f"rows have {rows.shape[1]} coordinates but covariance is {cov.dim}-dimensional"
        )
    if n_clusters == 1:
        return HubertScore(value=0.0, measure=measure, covariance_fingerprint=cov.fingerprint)

    onehot = np.zeros((m, n_clusters), dtype=np.float64)
    onehot[np.arange(m), assign] = 1.0
    counts = onehot.sum(axis=0)
    centers = (onehot.T @ rows) / counts[:, None]

    white = rows @ cov.whitener.T
    white_centers = centers @ cov.whitener.T
    diff = white_centers[:, None, :] - white_centers[None, :, :]
    center_dist = np.sqrt(np.einsum("ijk,ijk->ij", diff, diff))

    # Sum item-pair distances into a clusters-by-clusters table blockwise, so
    # the full m-by-m distance matrix never has to exist at once.
    pair_sums = np.zeros((n_clusters, n_clusters), dtype=np.float64)
    step = max(1, min(m, _BLOCK_BUDGET // max(1, m * white.shape[1])))
    for start in range(0, m, step):
        stop = min(start + step, m)
        block = white[start:stop, None, :] - white[None, :, :]
        dists = np.sqrt(np.einsum("ijk,ijk->ij", block, block))
        pair_sums += onehot[start:stop].T @ (dists @ onehot)

    # pair_sums counts ordered pairs and the zero diagonal kills within-pair
    # terms, so the mean over unordered pairs is the total over m*(m-1).
    value = float((pair_sums * center_dist).sum() / (m * (m - 1)))
    return HubertScore(value=value, measure=measure, covariance_fingerprint=cov.fingerprint)


def _round_significant(x: float, digits: int = _TIE_DIGITS) -> float:
    if x == 0.0 or not math.isfinite(x):
        return x
    return round(x, digits - 1 - math.floor(math.log10(abs(x))))


def best_cluster(results: dict[str, MeasureResult]) -> SelectionReport:
    """Select the measure(s) whose clustering maximizes the Hubert statistic.

    Scores are compared after rounding to 12 significant digits so that exact
    ties are reported as ties.  The returned tuple lists every winning
    measure in canonical order (chebyshev, manhattan, mahalanobis).
    """
    if not results:
        raise ConfigurationError("no per-measure results to select from")
    canon: dict[str, MeasureResult] = {}
    for name, res in results.items():
        canon[canonical_measure(name)] = res
    ordered = sorted(canon, key=lambda n: (MEASURES.index(n) if n in MEASURES else len(MEASURES), n))
    rounded = {n: _round_significant(canon[n].hubert.value) for n in ordered}
    top = max(rounded.values())
    best = tuple(n for n in ordered if rounded[n] == top)
    return SelectionReport(results={n: canon[n] for n in ordered}, best_measures=best)


def _contingency(truth, predicted) -> np.ndarray:
    truth = np.asarray(truth).ravel()
    predicted = np.asarray(predicted).ravel()
    if truth.shape != predicted.shape:
        raise ShapeError(
            f"partitions differ in length: {truth.shape[0]} vs {predicted.shape[0]}"
        )
    if truth.shape[0] < 2:
        raise ShapeError("need at least 2 items to compare partitions")
    _, ti = np.unique(truth, return_inverse=True)
    _, pi = np.unique(predicted, return_inverse=True)
    kt = int(ti.max()) + 1
    kp = int(pi.max()) + 1
    table = np.bincount(ti * kp + pi, minlength=kt * kp).reshape(kt, kp)
    return table


def rand_index(truth, predicted) -> float:
    """Fraction of item pairs on which two partitions agree (exactly)."""
    table = _contingency(truth, predicted)
    n = int(table.sum())

    def pairs(counts) -> int:
        counts = np.asarray(counts, dtype=np.int64)
        return int((counts * (counts - 1) // 2).sum())

    total = n * (n - 1) // 2
    same_both = pairs(table)
    same_truth = pairs(table.sum(axis=1))
    same_pred = pairs(table.sum(axis=0))
    agreements = total + 2 * same_both - same_truth - same_pred
    return agreements / total


def nmi(truth, predicted) -> float:
    """Mutual information normalized by the mean of the marginal entropies.

    Natural logarithms; returns 0 when either partition has zero entropy and
    clamps tiny float excursions into [0, 1].
    """
    table = _contingency(truth, predicted)
    n = float(table.sum())
    joint = table / n
    p_truth = joint.sum(axis=1)
    p_pred = joint.sum(axis=0)
    h_truth = float(-(p_truth * np.log(p_truth)).sum())
    h_pred = float(-(p_pred * np.log(p_pred)).sum())
    if h_truth == 0.0 or h_pred == 0.0:
        return 0.0
    nz = joint > 0
    outer = p_truth[:, None] * p_pred[None, :]
    mi = float((joint[nz] * np.log(joint[nz] / outer[nz])).sum())
    return min(1.0, max(0.0, mi / (0.5 * (h_truth + h_pred))))
