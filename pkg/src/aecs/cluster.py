"""Agglomerative hierarchical clustering with average linkage.

Starting from singletons, the pair of clusters with the smallest average
inter-cluster distance is merged until one cluster remains.  Cluster averages
are maintained with the Lance-Williams update, with a nearest-neighbor list
per active cluster so a full merge pass costs far less than rescanning the
whole matrix each step.

Ties are broken deterministically: among all pairs at the minimal distance,
the pair whose (smallest member id, then partner's smallest member id) is
lexicographically least merges first.  Merged clusters take ids following
scipy's convention: leaves are ``0..M-1`` and the cluster created by merge
``t`` is ``M + t``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from sklearn.base import BaseEstimator, ClusterMixin

from .distances import canonical_measure, distance_matrix, fit_covariance
from .errors import ConfigurationError, ShapeError


@dataclass(frozen=True)
class Dendrogram:
    """Full merge history of an agglomerative run.

    ``pairs[t]`` holds the ids of the two clusters joined by merge ``t``
    (ordered by their smallest member), ``heights[t]`` the average linkage
    distance at which they joined and ``sizes[t]`` the size of the cluster
    created, whose id is ``n_leaves + t``.
    """

    pairs: np.ndarray
    heights: np.ndarray
    sizes: np.ndarray
    n_leaves: int

    def __post_init__(self):
        pairs = np.asarray(self.pairs, dtype=np.int64).reshape(-1, 2)
        heights = np.asarray(self.heights, dtype=np.float64).ravel()
        sizes = np.asarray(self.sizes, dtype=np.int64).ravel()
        if not (len(pairs) == len(heights) == len(sizes) == self.n_leaves - 1):
            raise ShapeError("merge arrays must all have n_leaves - 1 entries")
        for arr in (pairs, heights, sizes):
            arr.setflags(write=False)
        object.__setattr__(self, "pairs", pairs)
        object.__setattr__(self, "heights", heights)
        object.__setattr__(self, "sizes", sizes)

    @property
    def n_merges(self) -> int:
        return self.n_leaves - 1

    def to_linkage(self) -> np.ndarray:
        """Return a scipy-compatible ``(n_leaves-1, 4)`` linkage matrix."""
        out = np.empty((self.n_merges, 4), dtype=np.float64)
        out[:, :2] = self.pairs
        out[:, 2] = self.heights
        out[:, 3] = self.sizes
        return out

    def cut(self, n_clusters: int) -> "FlatClustering":
        return cut(self, n_clusters)


@dataclass(frozen=True)
class FlatClustering:
    """A hard partition of ``len(assignments)`` items into contiguous ids.

    Cluster ids are ordered by each cluster's smallest member, so the item
    with index 0 is always in cluster 0.
    """

    assignments: np.ndarray
    n_clusters: int
    measure: str | None = None

    def __post_init__(self):
        assignments = np.asarray(self.assignments, dtype=np.int64).ravel()
        if assignments.size == 0:
            raise ShapeError("empty clustering")
        present = np.unique(assignments)
        if not np.array_equal(present, np.arange(self.n_clusters)):
            raise ShapeError(
                f"assignments must use every cluster id 0..{self.n_clusters - 1}"
            )
        assignments.setflags(write=False)
        object.__setattr__(self, "assignments", assignments)
        if self.measure is not None:
            object.__setattr__(self, "measure", canonical_measure(self.measure))

    @property
    def n_items(self) -> int:
        return self.assignments.shape[0]


def average_linkage(dist, members_a, members_b) -> float:
    """Average distance over all cross pairs of two disjoint clusters."""
    dist = np.asarray(dist, dtype=np.float64)
    a = np.asarray(members_a, dtype=np.int64).ravel()
    b = np.asarray(members_b, dtype=np.int64).ravel()
    if a.size == 0 or b.size == 0:
        raise ShapeError("clusters must be non-empty")
    m = dist.shape[0]
    if dist.ndim != 2 or dist.shape != (m, m):
        raise ShapeError(f"distance matrix must be square, got shape {dist.shape}")
    if a.min() < 0 or b.min() < 0 or a.max() >= m or b.max() >= m:
        raise ShapeError("member index out of range")
    if np.intersect1d(a, b).size:
        raise ShapeError("clusters overlap")
    return float(dist[np.ix_(a, b)].mean())


def _check_distance_matrix(dist) -> np.ndarray:
    dist = np.asarray(dist, dtype=np.float64)
    if dist.ndim != 2 or dist.shape[0] != dist.shape[1]:
        raise ShapeError(f"distance matrix must be square, got shape {dist.shape}")
    if dist.shape[0] < 2:
        raise ShapeError("need at least 2 items to cluster")
    if not np.isfinite(dist).all():
        raise ShapeError("distance matrix contains non-finite values")
    if not np.allclose(dist, dist.T, rtol=1e-10, atol=1e-12):
        raise ShapeError("distance matrix is not symmetric")
    if np.abs(np.diag(dist)).max() > 1e-12:
        raise ShapeError("distance matrix diagonal is not zero")
    return dist


def agglomerate(dist) -> Dendrogram:
    """Run average-linkage agglomeration over a full distance matrix."""
    dist = _check_distance_matrix(dist)
    m = dist.shape[0]
    work = dist.astype(np.float64, copy=True)
    np.fill_diagonal(work, np.inf)

    active = np.ones(m, dtype=bool)
    sizes = np.ones(m, dtype=np.int64)
    reps = np.arange(m, dtype=np.int64)  # smallest member id per slot
    public = np.arange(m, dtype=np.int64)

    nn_idx = work.argmin(axis=1)
    nn_dist = work[np.arange(m), nn_idx]

    out_pairs = np.empty((m - 1, 2), dtype=np.int64)
    out_heights = np.empty(m - 1, dtype=np.float64)
    out_sizes = np.empty(m - 1, dtype=np.int64)

    for step in range(m - 1):
        best = nn_dist[active].min()
        # Gather every pair attaining the minimum, then apply the tie rule.
        pair = None
        pair_key = None
        for r in np.flatnonzero(active & (nn_dist == best)):
            for c in np.flatnonzero(work[r] == best):
                key = (min(reps[r], reps[c]), max(reps[r], reps[c]))
                if pair_key is None or key < pair_key:
                    pair_key = key
                    pair = (r, c) if reps[r] <= reps[c] else (c, r)
        if pair is None:
            # nn entries are kept as exact row minima, so this cannot happen;
            # guard anyway rather than merge garbage on an inconsistency.
            raise AssertionError("nearest-neighbor list lost the minimum")
        keep, dead = pair
        size_a, size_b = sizes[keep], sizes[dead]
        merged_size = int(size_a + size_b)

        out_pairs[step] = (public[keep], public[dead])
        out_heights[step] = best
        out_sizes[step] = merged_size

        # Lance-Williams for average linkage: the new cluster's distance to k
        # is the size-weighted mean of the two old distances.
        updated = (size_a * work[keep] + size_b * work[dead]) / merged_size
        work[keep, :] = updated
        work[:, keep] = updated
        work[keep, keep] = np.inf
        work[dead, :] = np.inf
        work[:, dead] = np.inf

        active[dead] = False
        sizes[keep] = merged_size
        reps[keep] = min(reps[keep], reps[dead])
        public[keep] = m + step
        if step == m - 2:
            break

        # Repair nearest-neighbor entries.  Rows whose neighbor was one of the
        # merged slots are rescanned; everyone else can only improve via the
        # rewritten column.
        others = active.copy()
        others[keep] = False
        col = work[others, keep]
        improved = col < nn_dist[others]
        rows = np.flatnonzero(others)
        nn_dist[rows[improved]] = col[improved]
        nn_idx[rows[improved]] = keep

        stale = active & ((nn_idx == keep) | (nn_idx == dead))
        stale[keep] = True
        stale_rows = np.flatnonzero(stale)
        sub = work[stale_rows]
        sub_idx = sub.argmin(axis=1)
        nn_idx[stale_rows] = sub_idx
        nn_dist[stale_rows] = sub[np.arange(len(stale_rows)), sub_idx]

    return Dendrogram(pairs=out_pairs, heights=out_heights, sizes=out_sizes, n_leaves=m)


def cut(dendrogram: Dendrogram, n_clusters: int) -> FlatClustering:
    """Flatten a dendrogram into ``n_clusters`` clusters.

    Replays the first ``n_leaves - n_clusters`` merges, so the result is the
    partition the agglomeration passed through on its way up.
    """
    m = dendrogram.n_leaves
    if not 1 <= n_clusters <= m:
        raise ConfigurationError(f"n_clusters must be in [1, {m}], got {n_clusters}")
    members: dict[int, list[int]] = {i: [i] for i in range(m)}
    for t in range(m - n_clusters):
        a, b = dendrogram.pairs[t]
        members[m + t] = members.pop(int(a)) + members.pop(int(b))
    assignments = np.empty(m, dtype=np.int64)
    clusters = sorted(members.values(), key=min)
    for cid, leaf_list in enumerate(clusters):
        assignments[leaf_list] = cid
    return FlatClustering(assignments=assignments, n_clusters=n_clusters)


class AverageLinkageClustering(BaseEstimator, ClusterMixin):
    """Scikit-learn style wrapper around :func:`agglomerate` and :func:`cut`.

    Parameters
    ----------
    n_clusters : int
        Number of flat clusters to cut from the dendrogram.
    measure : str
        Distance measure: "chebyshev", "manhattan" or "mahalanobis"
        (aliases CH, MA, ML are accepted).
    ridge : float, optional
        Absolute ridge for the Mahalanobis covariance fit.

    Attributes
    ----------
    labels_ : ndarray of shape (n_samples,)
    dendrogram_ : Dendrogram
    covariance_ : CovarianceModel or None
        Fitted covariance when the measure is Mahalanobis.
    """

    def __init__(self, n_clusters: int = 2, measure: str = "manhattan", ridge=None):
        self.n_clusters = n_clusters
        self.measure = measure
        self.ridge = ridge

    def fit(self, X, y=None):
        rows = np.asarray(X, dtype=np.float64)
        measure = canonical_measure(self.measure)
        cov = None
        if measure == "mahalanobis":
            cov = fit_covariance(rows, ridge=self.ridge)
        dist = distance_matrix(rows, measure, cov=cov)
        self.covariance_ = cov
        self.dendrogram_ = agglomerate(dist)
        flat = cut(self.dendrogram_, self.n_clusters)
        self.labels_ = flat.assignments.copy()
        return self
