"""Distance measures between fixed-length vectors.

Three measures are supported: Chebyshev (max coordinate difference),
Manhattan (sum of coordinate differences) and Mahalanobis.  The Mahalanobis
measure needs a covariance model fitted on the row collection being compared;
:func:`fit_covariance` builds one with a small ridge for invertibility and
falls back to a pseudoinverse when the matrix is numerically singular.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError, ShapeError

MEASURES = ("chebyshev", "manhattan", "mahalanobis")

_ALIASES = {
    "chebyshev": "chebyshev",
    "ch": "chebyshev",
    "manhattan": "manhattan",
    "ma": "manhattan",
    "mahalanobis": "mahalanobis",
    "ml": "mahalanobis",
}

# Above this condition number the ridged covariance is treated as singular
# and inverted via eigenvalue pseudoinverse instead.
_COND_LIMIT = 1e12

# Cap on scratch elements per block when building pairwise matrices (~160 MB).
_BLOCK_BUDGET = 20_000_000


def canonical_measure(name: str) -> str:
    """Resolve a measure name or short alias (CH/MA/ML) to its full name."""
    key = str(name).strip().lower()
    if key not in _ALIASES:
        raise ConfigurationError(
            f"unknown distance measure {name!r}; expected one of {MEASURES} "
            "or aliases CH, MA, ML"
        )
    return _ALIASES[key]


def _pair(x, y) -> tuple[np.ndarray, np.ndarray]:
    x = np.asarray(x, dtype=np.float64).ravel()
    y = np.asarray(y, dtype=np.float64).ravel()
    if x.shape != y.shape:
        raise ShapeError(f"vectors differ in length: {x.shape[0]} vs {y.shape[0]}")
    return x, y


def chebyshev(x, y) -> float:
    """Largest absolute coordinate difference."""
    x, y = _pair(x, y)
    return float(np.abs(x - y).max())


def manhattan(x, y) -> float:
    """Sum of absolute coordinate differences."""
    x, y = _pair(x, y)
    return float(np.abs(x - y).sum())


@dataclass(frozen=True)
class CovarianceModel:
    """Sample covariance of a row collection plus its (pseudo)inverse.

    ``whitener`` satisfies ``whitener.T @ whitener == inverse`` up to float
    error, so Mahalanobis distances equal Euclidean distances between
    whitened rows.
    """

    matrix: np.ndarray
    inverse: np.ndarray
    whitener: np.ndarray
    ridge: float
    used_pseudoinverse: bool

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def fingerprint(self) -> str:
        h = hashlib.sha256()
        h.update(np.ascontiguousarray(self.matrix).tobytes())
        h.update(repr((self.ridge, self.used_pseudoinverse)).encode())
        return h.hexdigest()[:16]

    @classmethod
    def from_matrix(cls, matrix, ridge: float = 0.0) -> "CovarianceModel":
        """Build a model from an explicit covariance matrix."""
        matrix = np.asarray(matrix, dtype=np.float64)
        if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
            raise ShapeError(f"covariance must be square, got shape {matrix.shape}")
        if not np.allclose(matrix, matrix.T, rtol=1e-10, atol=1e-10):
            raise ShapeError("covariance must be symmetric")
        return _invert(0.5 * (matrix + matrix.T), float(ridge))


def _invert(matrix: np.ndarray, ridge: float) -> CovarianceModel:
    ridged = matrix + ridge * np.eye(matrix.shape[0])
    eigvals, eigvecs = np.linalg.eigh(ridged)
    largest = float(eigvals.max())
    smallest = float(eigvals.min())
    singular = (
        largest <= 0.0
        or smallest <= 0.0
        or not np.isfinite(eigvals).all()
        or largest / smallest > _COND_LIMIT
    )
    if singular:
        cutoff = max(largest, 0.0) * 1e-12
        inv_eig = np.zeros_like(eigvals)
        usable = eigvals > cutoff
        inv_eig[usable] = 1.0 / eigvals[usable]
    else:
        inv_eig = 1.0 / eigvals
    inverse = (eigvecs * inv_eig) @ eigvecs.T
    inverse = 0.5 * (inverse + inverse.T)
    whitener = (eigvecs * np.sqrt(inv_eig)).T
    return CovarianceModel(
        matrix=matrix,
        inverse=inverse,
        whitener=whitener,
        ridge=ridge,
        used_pseudoinverse=singular,
    )


def fit_covariance(rows, ridge: float | None = None) -> CovarianceModel:
    """Fit the sample covariance (ddof=1) of a 2-d row collection.

    ``ridge`` is an absolute value added to the diagonal; by default it is
    ``1e-6`` times the mean diagonal variance, which keeps typical matrices
    comfortably invertible without noticeably distorting distances.
    """
    rows = np.asarray(rows, dtype=np.float64)
    if rows.ndim != 2:
        raise ShapeError(f"rows must be 2-d, got shape {rows.shape}")
    if rows.shape[0] < 2:
        raise ShapeError("need at least 2 rows to fit a covariance")
    matrix = np.atleast_2d(np.cov(rows, rowvar=False, ddof=1))
    matrix = 0.5 * (matrix + matrix.T)
    if ridge is None:
        ridge = 1e-6 * float(np.mean(np.diag(matrix)))
    return _invert(matrix, float(ridge))


def mahalanobis(x, y, cov: CovarianceModel) -> float:
    """Mahalanobis distance under a fitted covariance model."""
    x, y = _pair(x, y)
    if x.shape[0] != cov.dim:
        raise ShapeError(
            f"vectors have {x.shape[0]} coordinates but covariance is {cov.dim}-dimensional"
        )
    diff = x - y
    return float(np.sqrt(max(float(diff @ cov.inverse @ diff), 0.0)))


def _block_size(m: int, width: int) -> int:
    return max(1, min(m, _BLOCK_BUDGET // max(1, m * width)))


def _pairwise_abs(rows: np.ndarray, reduce: str) -> np.ndarray:
    m, width = rows.shape
    out = np.empty((m, m), dtype=np.float64)
    step = _block_size(m, width)
    for start in range(0, m, step):
        stop = min(start + step, m)
        diff = np.abs(rows[start:stop, None, :] - rows[None, :, :])
        out[start:stop] = diff.max(axis=2) if reduce == "max" else diff.sum(axis=2)
    return out


def _pairwise_euclidean(rows: np.ndarray) -> np.ndarray:
    # Explicit differences instead of the usual gram-matrix expansion: a bit
    # slower, but identical rows come out at exactly 0.
    m, width = rows.shape
    out = np.empty((m, m), dtype=np.float64)
    step = _block_size(m, width)
    for start in range(0, m, step):
        stop = min(start + step, m)
        diff = rows[start:stop, None, :] - rows[None, :, :]
        out[start:stop] = np.sqrt(np.einsum("ijk,ijk->ij", diff, diff))
    return out


def distance_matrix(rows, measure: str, cov: CovarianceModel | None = None) -> np.ndarray:
    """Full pairwise distance matrix of a 2-d row collection.

    For the Mahalanobis measure a covariance model may be passed in; when
    omitted, one is fitted on ``rows``.  Rows are whitened once so the full
    matrix costs one pass of Euclidean distances instead of a quadratic form
    per pair.
    """
    rows = np.asarray(rows, dtype=np.float64)
    if rows.ndim != 2:
        raise ShapeError(f"rows must be 2-d, got shape {rows.shape}")
    if rows.shape[0] < 2:
        raise ShapeError("need at least 2 rows")
    if not np.isfinite(rows).all():
        raise ShapeError("rows contain non-finite values")
    measure = canonical_measure(measure)
    if measure == "chebyshev":
        return _pairwise_abs(rows, "max")
    if measure == "manhattan":
        return _pairwise_abs(rows, "sum")
    if cov is None:
        cov = fit_covariance(rows)
    elif cov.dim != rows.shape[1]:
        raise ShapeError(
            f"rows have {rows.shape[1]} coordinates but covariance is {cov.dim}-dimensional"
        )
    return _pairwise_euclidean(rows @ cov.whitener.T)
