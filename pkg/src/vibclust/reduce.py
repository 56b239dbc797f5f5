import logging
import numpy as np
from typing import Tuple

from .exceptions import InvalidParameterError, DimensionMismatchError
from .features import FeatureMatrix, ColumnMeta

def jacobi_eigh(
    matrix : np.ndarray,
    tol : float = 1e-15,
    max_sweeps : int = 100
    ) -> Tuple[np.ndarray,np.ndarray]:
    """
    Eigendecomposition of a symmetric matrix by cyclic Jacobi rotations

    Parameters:
    -----------
    matrix : np.ndarray
        Symmetric square matrix

    tol : float = 1e-15
        Stop when the off-diagonal norm falls below tol times the Frobenius norm

    max_sweeps : int = 100

    Returns:
    --------
    (eigenvalues, eigenvectors) : eigenvalues sorted non-increasing, eigenvectors as columns
    """
    a = np.array(matrix, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise InvalidParameterError("jacobi_eigh: matrix must be square")
    if not np.allclose(a, a.T, rtol=1e-10, atol=1e-12):
        raise InvalidParameterError("jacobi_eigh: matrix must be symmetric")
    a = (a + a.T) / 2
    n = a.shape[0]
    v = np.eye(n)
    scale = max(np.linalg.norm(a), np.finfo(float).tiny)
    for sweep in range(max_sweeps):
        off = np.sqrt(np.sum(a ** 2) - np.sum(np.diag(a) ** 2))
        if off <= tol * scale:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                if a[p, q] == 0:
                    continue
                theta = (a[q, q] - a[p, p]) / (2 * a[p, q])
                if abs(theta) > 1e150:
                    t = 1 / (2 * theta)
                else:
                    t = (1.0 if theta >= 0 else -1.0) / (abs(theta) + np.sqrt(theta ** 2 + 1))
                c = 1 / np.sqrt(t ** 2 + 1)
                s = t * c
                column_p = a[:, p].copy()
                column_q = a[:, q].copy()
                a[:, p] = c * column_p - s * column_q
                a[:, q] = s * column_p + c * column_q
                row_p = a[p, :].copy()
                row_q = a[q, :].copy()
                a[p, :] = c * row_p - s * row_q
                a[q, :] = s * row_p + c * row_q
                a[p, q] = a[q, p] = 0.0
                vector_p = v[:, p].copy()
                vector_q = v[:, q].copy()
                v[:, p] = c * vector_p - s * vector_q
                v[:, q] = s * vector_p + c * vector_q
    else:
        logging.warning("jacobi_eigh: no convergence after %i sweeps" % max_sweeps)
    eigenvalues = np.diag(a).copy()
    order = np.argsort(-eigenvalues, kind="stable")
    return eigenvalues[order], v[:, order]

class PcaModel:
    """Principal components of a feature matrix"""

    @property
    def mean_vector(self) -> np.ndarray:
        return self._mean_vector

    @property
    def component_matrix(self) -> np.ndarray:
        """Orthonormal rows, shape (num_components, num_features)"""
        return self._component_matrix

    @property
    def explained_variance(self) -> np.ndarray:
        """Eigenvalues of the sample covariance matching each component, non-increasing"""
        return self._explained_variance

    @property
    def total_variance(self) -> float:
        """Trace of the sample covariance"""
        return self._total_variance

    @property
    def num_components(self) -> int:
        return self._component_matrix.shape[0]

    @property
    def num_features(self) -> int:
        return self._component_matrix.shape[1]

    def __init__(
        self,
        mean_vector : np.ndarray,
        component_matrix : np.ndarray,
        explained_variance : np.ndarray,
        total_variance : float = None
        ):
        self._mean_vector = np.asarray(mean_vector, dtype=float)
        self._component_matrix = np.atleast_2d(np.asarray(component_matrix, dtype=float))
        self._explained_variance = np.asarray(explained_variance, dtype=float)
        self._total_variance = float(total_variance) if total_variance is not None else float(self._explained_variance.sum())

    def transform(
        self,
        values : np.ndarray
        ) -> np.ndarray:
        """Centered projection onto the component rows"""
        values = np.asarray(values, dtype=float)
        if values.ndim != 2 or values.shape[1] != self.num_features:
            raise DimensionMismatchError("Expected %i features, got shape %s" % (self.num_features, values.shape))
        return (values - self._mean_vector) @ self._component_matrix.T

    def inverseTransform(
        self,
        scores : np.ndarray
        ) -> np.ndarray:
        """Map component scores back to feature space"""
        scores = np.asarray(scores, dtype=float)
        if scores.ndim != 2 or scores.shape[1] != self.num_components:
            raise DimensionMismatchError("Expected %i components, got shape %s" % (self.num_components, scores.shape))
        return scores @ self._component_matrix + self._mean_vector

    def explainedVarianceRatio(self) -> np.ndarray:
        if self._total_variance <= 0:
            return np.zeros_like(self._explained_variance)
        return self._explained_variance / self._total_variance

    def toDict(self) -> dict:
        return {
            "mean_vector": self._mean_vector.tolist(),
            "component_matrix": self._component_matrix.tolist(),
            "explained_variance": self._explained_variance.tolist(),
            "total_variance": self._total_variance
        }

def pca_fit(
    features : FeatureMatrix,
    num_components : int
    ) -> PcaModel:
    """
    Fit PCA on the sample covariance (ddof 1) of the feature columns

    The sign of every component is fixed so that its largest magnitude entry is positive

    Parameters:
    -----------
    features : FeatureMatrix

    num_components : int
        1 <= num_components <= num_features

    Returns:
    --------
    PcaModel

    Raises:
    -------
    InvalidParameterError : if num_components is out of range or there are fewer than 2 windows
    """
    values = features.values
    num_features = values.shape[1]
    if not 1 <= num_components <= num_features:
        raise InvalidParameterError("num_components must lie in [1, %i], got %s" % (num_features, num_components))
    if values.shape[0] < 2:
        raise InvalidParameterError("pca_fit: covariance needs at least 2 windows")
    mean_vector = values.mean(axis=0)
    centered = values - mean_vector
    covariance = centered.T @ centered / (values.shape[0] - 1)
    eigenvalues, eigenvectors = jacobi_eigh(covariance)
    components = eigenvectors[:, :num_components].T.copy()
    for i in range(num_components):
        if components[i, np.argmax(np.abs(components[i]))] < 0:
            components[i] = -components[i]
    return PcaModel(
        mean_vector,
        components,
        np.maximum(eigenvalues[:num_components], 0.0),
        float(np.trace(covariance)))

def pca_transform(
    model : PcaModel,
    features : FeatureMatrix
    ) -> FeatureMatrix:
    """
    Project features onto the model components. Columns become PC1..PCk

    Raises:
    -------
    DimensionMismatchError : if the feature count does not match the model
    """
    if features.num_columns != model.num_features:
        raise DimensionMismatchError("pca_transform: model has %i features, matrix has %i" % (model.num_features, features.num_columns))
    return FeatureMatrix(
        model.transform(features.values),
        [ColumnMeta("PC", component=i) for i in range(model.num_components)],
        features.labels,
        name = features.name)
