import logging
import numpy as np
from typing import List, Tuple

from .assignment import ClusterAssignment
from .clustering_function import ClusteringFunction, check_points
from .clustering_parameter import ClusteringParameter
from .kmeans import kmeans_plusplus, squared_distances

_EPS = 10 * np.finfo(float).eps

def logsumexp(
    values : np.ndarray,
    axis : int = -1
    ) -> np.ndarray:
    maxv = np.max(values, axis=axis, keepdims=True)
    maxv[~np.isfinite(maxv)] = 0
    return np.squeeze(maxv, axis=axis) + np.log(np.sum(np.exp(values - maxv), axis=axis))

class GmmModel:
    """Gaussian mixture with diagonal covariances"""

    @property
    def weights(self) -> np.ndarray:
        """Mixture weights, a simplex vector of length k"""
        return self._weights

    @property
    def means(self) -> np.ndarray:
        """Array of shape (k, num_dimensions)"""
        return self._means

    @property
    def covariances(self) -> np.ndarray:
        """Diagonal covariance entries, shape (k, num_dimensions), all >= covariance_floor"""
        return self._covariances

    @property
    def num_components(self) -> int:
        return len(self._weights)

    def __init__(
        self,
        weights : np.ndarray,
        means : np.ndarray,
        covariances : np.ndarray,
        log_likelihood : float,
        seed : int,
        converged : bool = True,
        iterations_run : int = 0,
        log_likelihood_history : List[float] = None,
        covariance_floor : float = 1e-6
        ):
        self._weights = np.asarray(weights, dtype=float)
        self._means = np.asarray(means, dtype=float)
        self._covariances = np.asarray(covariances, dtype=float)
        self.log_likelihood = float(log_likelihood)
        """Total log likelihood of the fitted points"""
        self.seed = int(seed)
        self.converged = bool(converged)
        """False when max_iter was reached before the tolerance"""
        self.iterations_run = int(iterations_run)
        self.log_likelihood_history = list(log_likelihood_history) if log_likelihood_history is not None else [self.log_likelihood]
        """Log likelihood at each E step"""
        self.covariance_floor = float(covariance_floor)

    def toDict(self) -> dict:
        return {
            "weights": self._weights.tolist(),
            "means": self._means.tolist(),
            "covariances": self._covariances.tolist(),
            "log_likelihood": self.log_likelihood,
            "seed": self.seed,
            "converged": self.converged,
            "iterations_run": self.iterations_run
        }

    def summary(self) -> dict:
        return {
            "log_likelihood": self.log_likelihood,
            "converged": self.converged,
            "iterations_run": self.iterations_run
        }

def _logProbabilities(
    points : np.ndarray,
    weights : np.ndarray,
    means : np.ndarray,
    covariances : np.ndarray
    ) -> np.ndarray:
    """log(weight_k * N(x | mean_k, diag(covariance_k))), shape (num_points, k)"""
    diff2 = (points[:, np.newaxis, :] - means[np.newaxis, :, :]) ** 2
    log_density = -0.5 * (np.sum(np.log(2 * np.pi * covariances), axis=1)[np.newaxis, :] + np.sum(diff2 / covariances[np.newaxis, :, :], axis=2))
    return np.log(weights)[np.newaxis, :] + log_density

def _estep(
    points : np.ndarray,
    weights : np.ndarray,
    means : np.ndarray,
    covariances : np.ndarray
    ) -> Tuple[float,np.ndarray]:
    log_prob = _logProbabilities(points, weights, means, covariances)
    log_norm = logsumexp(log_prob, axis=1)
    return float(log_norm.sum()), np.exp(log_prob - log_norm[:, np.newaxis])

def _mstep(
    points : np.ndarray,
    responsibilities : np.ndarray,
    covariance_floor : float
    ) -> Tuple[np.ndarray,np.ndarray,np.ndarray]:
    nk = responsibilities.sum(axis=0) + _EPS
    weights = nk / nk.sum()
    means = responsibilities.T @ points / nk[:, np.newaxis]
    diff2 = (points[:, np.newaxis, :] - means[np.newaxis, :, :]) ** 2
    covariances = np.sum(responsibilities[:, :, np.newaxis] * diff2, axis=0) / nk[:, np.newaxis]
    return weights, means, np.maximum(covariances, covariance_floor)

def gmm_responsibilities(
    model : GmmModel,
    points : np.ndarray
    ) -> np.ndarray:
    """Posterior component probabilities, shape (num_points, k). Rows sum to 1"""
    return _estep(check_points(points), model.weights, model.means, model.covariances)[1]

def gmm_fit(
    points : np.ndarray,
    k : int,
    seed : int,
    max_iter : int = 200,
    tol : float = 1e-6,
    covariance_floor : float = 1e-6
    ) -> Tuple[GmmModel,ClusterAssignment]:
    """
    Expectation maximization of a diagonal covariance gaussian mixture

    The first M step uses the hard assignment of every point to the nearest k-means++ seed

    Parameters:
    -----------
    points : np.ndarray
        Array of shape (num_points, num_dimensions)

    k : int
        1 <= k <= num_points

    seed : int

    max_iter : int = 200

    tol : float = 1e-6
        Stop when the log likelihood change per point is lower than tol

    covariance_floor : float = 1e-6
        Lower bound of every covariance entry

    Returns:
    --------
    (GmmModel, ClusterAssignment) : assignment is the argmax of the responsibilities. If max_iter is reached the best state is returned with converged=False
    """
    points = check_points(points, k)
    n = points.shape[0]
    seeds = points[kmeans_plusplus(points, k, np.random.default_rng(seed))]
    nearest = np.argmin(squared_distances(points, seeds), axis=1)
    weights, means, covariances = _mstep(points, np.eye(k)[nearest], covariance_floor)
    history = []
    best = None
    converged = False
    iterations = 0
    for iteration in range(max_iter):
        log_likelihood, responsibilities = _estep(points, weights, means, covariances)
        history.append(log_likelihood)
        iterations = iteration + 1
        if best is None or log_likelihood > best[0]:
            best = (log_likelihood, weights, means, covariances, responsibilities)
        if iteration > 0 and abs(history[-1] - history[-2]) / n < tol:
            converged = True
            break
        weights, means, covariances = _mstep(points, responsibilities, covariance_floor)
    if not converged:
        logging.warning("gmm: no convergence after %i iterations (k=%i, seed=%i), keeping the best state" % (max_iter, k, seed))
    log_likelihood, weights, means, covariances, responsibilities = best
    model = GmmModel(weights, means, covariances, log_likelihood, seed, converged, iterations, history, covariance_floor)
    return model, ClusterAssignment(np.argmax(responsibilities, axis=1), k, "GMM")

class GMMClusteringFunction(ClusteringFunction):
    """Gaussian mixture (diagonal covariances) fitted by EM"""

    algorithm_tag = "GMM"

    _parameters = [
        ClusteringParameter("max_iter", 200, (1, None), integer=True),
        ClusteringParameter("tol", 1e-6, (0, None)),
        ClusteringParameter("covariance_floor", 1e-6, (1e-300, None))
    ]

    def run(
        self,
        points : np.ndarray,
        num_clusters : int,
        seed : int
        ) -> Tuple[GmmModel,ClusterAssignment]:
        return gmm_fit(points, num_clusters, seed, self.parameters["max_iter"], self.parameters["tol"], self.parameters["covariance_floor"])
