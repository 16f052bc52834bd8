import numpy as np
import pytest
from sklearn.base import clone

import aecs
from oracles import naive_average_linkage


def random_distance_matrix(rng, m):
    pts = rng.normal(size=(m, 3))
    dist = np.sqrt(((pts[:, None, :] - pts[None, :, :]) ** 2).sum(-1))
    np.fill_diagonal(dist, 0.0)
    return dist


def line_points_matrix():
    # Four points on a line at 0, 1, 10, 11 under the Manhattan distance.
    pts = np.array([0.0, 1.0, 10.0, 11.0])
    return np.abs(pts[:, None] - pts[None, :])


class TestAverageLinkage:
    def test_mean_of_cross_distances(self):
        dist = np.zeros((4, 4))
        dist[0, 2] = dist[2, 0] = 2.0
        dist[0, 3] = dist[3, 0] = 4.0
        dist[1, 2] = dist[2, 1] = 6.0
        dist[1, 3] = dist[3, 1] = 8.0
        assert aecs.average_linkage(dist, [0, 1], [2, 3]) == 5.0
        assert aecs.average_linkage(dist, [0], [2, 3]) == 3.0

    def test_overlap_rejected(self):
        dist = np.zeros((3, 3))
        with pytest.raises(aecs.ShapeError):
            aecs.average_linkage(dist, [0, 1], [1, 2])

    def test_out_of_range_rejected(self):
        with pytest.raises(aecs.ShapeError):
            aecs.average_linkage(np.zeros((3, 3)), [0], [5])


class TestAgglomerate:
    def test_line_example_merge_order_and_heights(self):
        dendrogram = aecs.agglomerate(line_points_matrix())
        # Tie at height 1 between {0,1} and {2,3}: the pair containing item 0
        # goes first.  The final merge is at the average cross distance 10.
        assert dendrogram.pairs.tolist() == [[0, 1], [2, 3], [4, 5]]
        assert dendrogram.heights.tolist() == [1.0, 1.0, 10.0]
        assert dendrogram.sizes.tolist() == [2, 2, 4]

    def test_matches_naive_oracle_quick(self, rng):
        for _ in range(40):
            m = int(rng.integers(2, 13))
            dist = random_distance_matrix(rng, m)
            dendrogram = aecs.agglomerate(dist)
            expected = naive_average_linkage(dist)
            got = [
                (int(a), int(b), float(h), int(s))
                for (a, b), h, s in zip(dendrogram.pairs, dendrogram.heights, dendrogram.sizes)
            ]
            for (ga, gb, gh, gs), (ea, eb, eh, es) in zip(got, expected):
                assert (ga, gb, gs) == (ea, eb, es)
                assert gh == pytest.approx(eh, rel=1e-9, abs=1e-12)

    def test_permuting_rows_relabels_only(self, rng):
        m = 15
        dist = random_distance_matrix(rng, m)
        perm = rng.permutation(m)
        permuted = dist[np.ix_(perm, perm)]
        k = 4
        flat_a = aecs.cut(aecs.agglomerate(dist), k)
        flat_b = aecs.cut(aecs.agglomerate(permuted), k)
        aligned = np.empty(m, dtype=int)
        aligned[perm] = flat_b.assignments
        assert aecs.rand_index(flat_a.assignments, aligned) == 1.0

    def test_input_validation(self):
        with pytest.raises(aecs.ShapeError):
            aecs.agglomerate(np.zeros((3, 4)))
        bad = np.array([[0.0, 1.0], [2.0, 0.0]])
        with pytest.raises(aecs.ShapeError):
            aecs.agglomerate(bad)
        nan = np.array([[0.0, np.nan], [np.nan, 0.0]])
        with pytest.raises(aecs.ShapeError):
            aecs.agglomerate(nan)
        diag = np.array([[1.0, 2.0], [2.0, 1.0]])
        with pytest.raises(aecs.ShapeError):
            aecs.agglomerate(diag)
        with pytest.raises(aecs.ShapeError):
            aecs.agglomerate(np.zeros((1, 1)))

    def test_heights_monotone(self, rng):
        dist = random_distance_matrix(rng, 20)
        dendrogram = aecs.agglomerate(dist)
        assert np.all(np.diff(dendrogram.heights) >= -1e-12)

    def test_to_linkage_shape(self, rng):
        dendrogram = aecs.agglomerate(random_distance_matrix(rng, 6))
        linkage = dendrogram.to_linkage()
        assert linkage.shape == (5, 4)
        assert linkage[:, 3].tolist() == dendrogram.sizes.tolist()


class TestCut:
    def test_two_clusters_on_line_example(self):
        dendrogram = aecs.agglomerate(line_points_matrix())
        flat = aecs.cut(dendrogram, 2)
        assert flat.assignments.tolist() == [0, 0, 1, 1]
        assert flat.n_clusters == 2

    def test_extremes(self):
        dendrogram = aecs.agglomerate(line_points_matrix())
        assert aecs.cut(dendrogram, 1).assignments.tolist() == [0, 0, 0, 0]
        assert aecs.cut(dendrogram, 4).assignments.tolist() == [0, 1, 2, 3]

    def test_ids_ordered_by_first_member(self, rng):
        dendrogram = aecs.agglomerate(random_distance_matrix(rng, 10))
        for k in (2, 3, 5):
            flat = aecs.cut(dendrogram, k)
            assert flat.assignments[0] == 0
            firsts = [np.flatnonzero(flat.assignments == c)[0] for c in range(k)]
            assert firsts == sorted(firsts)

    def test_bounds(self):
        dendrogram = aecs.agglomerate(line_points_matrix())
        with pytest.raises(aecs.ConfigurationError):
            aecs.cut(dendrogram, 0)
        with pytest.raises(aecs.ConfigurationError):
            aecs.cut(dendrogram, 5)

    def test_method_delegates(self):
        dendrogram = aecs.agglomerate(line_points_matrix())
        assert dendrogram.cut(2).assignments.tolist() == [0, 0, 1, 1]


class TestFlatClustering:
    def test_contiguity_enforced(self):
        with pytest.raises(aecs.ShapeError):
            aecs.FlatClustering(assignments=np.array([0, 2, 2]), n_clusters=3)

    def test_measure_canonicalized(self):
        flat = aecs.FlatClustering(assignments=np.array([0, 1]), n_clusters=2, measure="ML")
        assert flat.measure == "mahalanobis"


class TestEstimator:
    def test_fit_predict_matches_functions(self, rng):
        rows = rng.normal(size=(20, 4))
        est = aecs.AverageLinkageClustering(n_clusters=3, measure="manhattan")
        labels = est.fit_predict(rows)
        dist = aecs.distance_matrix(rows, "manhattan")
        expected = aecs.cut(aecs.agglomerate(dist), 3)
        assert labels.tolist() == expected.assignments.tolist()

    def test_mahalanobis_uses_fitted_covariance(self, rng):
        rows = rng.normal(size=(15, 3))
        est = aecs.AverageLinkageClustering(n_clusters=2, measure="ML").fit(rows)
        assert est.covariance_ is not None
        assert est.covariance_.dim == 3

    def test_sklearn_clone_round_trip(self):
        est = aecs.AverageLinkageClustering(n_clusters=4, measure="chebyshev", ridge=0.1)
        cloned = clone(est)
        assert cloned.get_params() == est.get_params()
