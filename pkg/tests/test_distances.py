import numpy as np
import pytest

import aecs


class TestScalarKernels:
    def test_hand_values(self):
        x = np.array([0.0, 3.0, -1.0])
        y = np.array([2.0, 1.0, 1.0])
        assert aecs.chebyshev(x, y) == 2.0
        assert aecs.manhattan(x, y) == 6.0

    def test_symmetry_and_identity(self, rng):
        for _ in range(50):
            x = rng.normal(size=6)
            y = rng.normal(size=6)
            for fn in (aecs.chebyshev, aecs.manhattan):
                assert fn(x, y) == fn(y, x)
                assert fn(x, x) == 0.0
                assert fn(x, y) >= 0.0

    def test_length_mismatch(self):
        with pytest.raises(aecs.ShapeError):
            aecs.chebyshev(np.ones(3), np.ones(4))

    def test_measure_aliases(self):
        assert aecs.canonical_measure("CH") == "chebyshev"
        assert aecs.canonical_measure("ma") == "manhattan"
        assert aecs.canonical_measure("ML") == "mahalanobis"
        assert aecs.canonical_measure("Manhattan") == "manhattan"
        with pytest.raises(aecs.ConfigurationError):
            aecs.canonical_measure("euclidean")


class TestCovariance:
    def test_two_point_example(self):
        rows = np.array([[0.0, 0.0], [2.0, 0.0]])
        cov = aecs.fit_covariance(rows, ridge=1e-6)
        assert np.allclose(cov.matrix, [[2.0, 0.0], [0.0, 0.0]])
        assert not cov.used_pseudoinverse
        assert np.isfinite(cov.inverse).all()

    def test_default_ridge_scales_with_variance(self, rng):
        rows = rng.normal(size=(20, 3))
        big = aecs.fit_covariance(rows * 100.0)
        small = aecs.fit_covariance(rows)
        assert big.ridge == pytest.approx(small.ridge * 1e4)
        assert small.ridge == pytest.approx(1e-6 * np.diag(small.matrix).mean())

    def test_explicit_ridge_is_absolute(self, rng):
        rows = rng.normal(size=(10, 2))
        cov = aecs.fit_covariance(rows, ridge=0.5)
        assert cov.ridge == 0.5

    def test_singular_falls_back_to_pseudoinverse(self):
        # Identical rows give a zero covariance; with ridge 0 that has no
        # inverse, so the pseudoinverse path must engage and stay finite.
        rows = np.ones((5, 3))
        cov = aecs.fit_covariance(rows, ridge=0.0)
        assert cov.used_pseudoinverse
        assert np.isfinite(cov.inverse).all()
        assert np.isfinite(cov.whitener).all()

    def test_whitener_consistent_with_inverse(self, rng):
        rows = rng.normal(size=(30, 4))
        cov = aecs.fit_covariance(rows)
        assert np.allclose(cov.whitener.T @ cov.whitener, cov.inverse, atol=1e-10)

    def test_fingerprint_distinguishes_ridge(self, rng):
        rows = rng.normal(size=(10, 2))
        a = aecs.fit_covariance(rows, ridge=0.1)
        b = aecs.fit_covariance(rows, ridge=0.2)
        assert a.fingerprint != b.fingerprint

    def test_from_matrix_identity(self):
        cov = aecs.CovarianceModel.from_matrix(np.eye(2))
        x = np.array([1.0, 0.0])
        y = np.array([0.0, 1.0])
        assert aecs.mahalanobis(x, y, cov) == pytest.approx(np.sqrt(2.0))

    def test_from_matrix_rejects_asymmetric(self):
        with pytest.raises(aecs.ShapeError):
            aecs.CovarianceModel.from_matrix(np.array([[1.0, 0.5], [0.0, 1.0]]))

    def test_needs_two_rows(self):
        with pytest.raises(aecs.ShapeError):
            aecs.fit_covariance(np.ones((1, 3)))


class TestMahalanobis:
    def test_scaled_identity_equals_scaled_euclidean(self, rng):
        sigma2 = 4.0
        cov = aecs.CovarianceModel.from_matrix(sigma2 * np.eye(5))
        for _ in range(20):
            x = rng.normal(size=5)
            y = rng.normal(size=5)
            expected = np.linalg.norm(x - y) / np.sqrt(sigma2)
            assert aecs.mahalanobis(x, y, cov) == pytest.approx(expected, rel=1e-10)

    def test_self_distance_zero(self, rng):
        rows = rng.normal(size=(10, 3))
        cov = aecs.fit_covariance(rows)
        for row in rows:
            assert aecs.mahalanobis(row, row, cov) == 0.0

    def test_dimension_mismatch(self, rng):
        cov = aecs.fit_covariance(rng.normal(size=(5, 3)))
        with pytest.raises(aecs.ShapeError):
            aecs.mahalanobis(np.ones(4), np.zeros(4), cov)


class TestDistanceMatrix:
    def test_matches_scalar_kernels_bitwise(self, rng):
        rows = rng.normal(size=(17, 9))
        for measure, kernel in (("chebyshev", aecs.chebyshev), ("manhattan", aecs.manhattan)):
            mat = aecs.distance_matrix(rows, measure)
            for i in range(len(rows)):
                for j in range(len(rows)):
                    assert mat[i, j] == kernel(rows[i], rows[j])

    def test_mahalanobis_matches_quadratic_form(self, rng):
        rows = rng.normal(size=(15, 4))
        cov = aecs.fit_covariance(rows)
        mat = aecs.distance_matrix(rows, "mahalanobis", cov=cov)
        for i in range(len(rows)):
            for j in range(len(rows)):
                naive = aecs.mahalanobis(rows[i], rows[j], cov)
                assert mat[i, j] == pytest.approx(naive, rel=1e-12, abs=1e-12)

    def test_duplicated_rows_give_exact_zero(self, rng):
        base = rng.normal(size=(6, 5))
        rows = np.vstack([base, base[2]])
        for measure in aecs.MEASURES:
            mat = aecs.distance_matrix(rows, measure)
            assert mat[2, 6] == 0.0
            assert mat[6, 2] == 0.0

    def test_symmetric_zero_diagonal(self, rng):
        rows = rng.normal(size=(12, 6))
        for measure in aecs.MEASURES:
            mat = aecs.distance_matrix(rows, measure)
            assert np.array_equal(mat, mat.T)
            assert np.all(np.diag(mat) == 0.0)

    def test_blocking_does_not_change_values(self, rng, monkeypatch):
        from aecs import distances

        rows = rng.normal(size=(23, 7))
        full = {m: aecs.distance_matrix(rows, m) for m in aecs.MEASURES}
        monkeypatch.setattr(distances, "_BLOCK_BUDGET", 100)
        for measure in aecs.MEASURES:
            small = aecs.distance_matrix(rows, measure)
            assert np.array_equal(small, full[measure])

    def test_fitted_on_rows_when_cov_omitted(self, rng):
        rows = rng.normal(size=(10, 3))
        cov = aecs.fit_covariance(rows)
        implicit = aecs.distance_matrix(rows, "mahalanobis")
        explicit = aecs.distance_matrix(rows, "mahalanobis", cov=cov)
        assert np.array_equal(implicit, explicit)

    def test_rejects_nonfinite(self):
        rows = np.array([[1.0, 2.0], [np.nan, 0.0]])
        with pytest.raises(aecs.ShapeError):
            aecs.distance_matrix(rows, "manhattan")
