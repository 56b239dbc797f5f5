import logging
import numpy as np
from typing import List, Tuple, Sequence

from .assignment import ClusterAssignment
from .clustering_function import ClusteringFunction, check_points
from .clustering_parameter import ClusteringParameter
from ..exceptions import InvalidParameterError

def squared_distances(
    points : np.ndarray,
    centroids : np.ndarray
    ) -> np.ndarray:
    """Matrix of shape (num_points, num_centroids)"""
    return ((points[:, np.newaxis, :] - centroids[np.newaxis, :, :]) ** 2).sum(axis=-1)

def kmeans_plusplus(
    points : np.ndarray,
    k : int,
    rng : np.random.Generator
    ) -> np.ndarray:
    """
    k-means++ seeding: first center uniform, next ones drawn with probability proportional to the squared distance to the closest chosen center. When every distance is 0 the next center is drawn uniformly among the points not chosen yet

    Returns:
    --------
    np.ndarray : indices of the k chosen points
    """
    n = points.shape[0]
    chosen = [int(rng.integers(n))]
    d2 = squared_distances(points, points[chosen])[:, 0]
    for _ in range(1, k):
        total = d2.sum()
        if total > 0:
            index = int(rng.choice(n, p=d2 / total))
        else:
            remaining = np.setdiff1d(np.arange(n), chosen)
            index = int(rng.choice(remaining))
        chosen.append(index)
        d2 = np.minimum(d2, squared_distances(points, points[[index]])[:, 0])
    return np.array(chosen)

class KMeansModel:
    """Fitted K-means centroids"""

    @property
    def centroids(self) -> np.ndarray:
        """Array of shape (k, num_dimensions)"""
        return self._centroids

    @property
    def wcss_history(self) -> List[float]:
        """WCSS after each assignment step, the last one being the final assignment"""
        return self._wcss_history

    def __init__(
        self,
        centroids : np.ndarray,
        wcss : float,
        iterations_run : int,
        seed : int,
        wcss_history : List[float] = None
        ):
        self._centroids = np.asarray(centroids, dtype=float)
        self.wcss = float(wcss)
        """Sum over points of the squared distance to the nearest centroid"""
        self.iterations_run = int(iterations_run)
        self.seed = int(seed)
        self._wcss_history = list(wcss_history) if wcss_history is not None else [self.wcss]

    def predict(
        self,
        points : np.ndarray
        ) -> np.ndarray:
        """Index of the nearest centroid, ties to the lowest index"""
        return np.argmin(squared_distances(check_points(points), self._centroids), axis=1)

    def toDict(self) -> dict:
        return {
            "centroids": self._centroids.tolist(),
            "wcss": self.wcss,
            "iterations_run": self.iterations_run,
            "seed": self.seed
        }

    def summary(self) -> dict:
        return {
            "wcss": self.wcss,
            "iterations_run": self.iterations_run
        }

def kmeans_fit(
    points : np.ndarray,
    k : int,
    seed : int,
    max_iter : int = 300,
    tol : float = 1e-6,
    initial_centroids : np.ndarray = None
    ) -> Tuple[KMeansModel,ClusterAssignment]:
    """
    Lloyd iterations from k-means++ seeding

    Parameters:
    -----------
    points : np.ndarray
        Array of shape (num_points, num_dimensions)

    k : int
        1 <= k <= num_points

    seed : int
        Seed of the k-means++ draw

    max_iter : int = 300

    tol : float = 1e-6
        Stop when no centroid moves more than tol

    initial_centroids : np.ndarray = None
        Skip seeding and start from these centroids

    Returns:
    --------
    (KMeansModel, ClusterAssignment)

    Raises:
    -------
    InvalidParameterError : if k is out of range or points are not finite
    """
    points = check_points(points, k)
    if initial_centroids is not None:
        centroids = np.array(initial_centroids, dtype=float).reshape(k, points.shape[1])
    else:
        centroids = points[kmeans_plusplus(points, k, np.random.default_rng(seed))].copy()
    history = []
    iterations = 0
    for iteration in range(max_iter):
        d2 = squared_distances(points, centroids)
        labels = np.argmin(d2, axis=1)
        nearest = d2[np.arange(len(points)), labels]
        history.append(float(nearest.sum()))
        updated = centroids.copy()
        counts = np.bincount(labels, minlength=k)
        for j in np.flatnonzero(counts):
            updated[j] = points[labels == j].mean(axis=0)
        empty = np.flatnonzero(counts == 0)
        if len(empty):
            # farthest points from their centroids take the empty clusters
            far = np.argsort(-nearest, kind="stable")
            for j, index in zip(empty, far):
                updated[j] = points[index]
            logging.debug("kmeans: reseeded %i empty cluster(s) at iteration %i" % (len(empty), iteration))
        shift = np.sqrt(((updated - centroids) ** 2).sum(axis=1)).max()
        centroids = updated
        iterations = iteration + 1
        if shift < tol:
            break
    d2 = squared_distances(points, centroids)
    labels = np.argmin(d2, axis=1)
    wcss = float(d2[np.arange(len(points)), labels].sum())
    history.append(wcss)
    model = KMeansModel(centroids, wcss, iterations, seed, history)
    return model, ClusterAssignment(labels, k, "KMeans")

def elbow_from_curve(wcss : Sequence[float]) -> int:
    """
    Cluster count of maximum perpendicular distance to the chord from (1, wcss[0]) to (k_max, wcss[-1]). Ties go to the smallest k

    Parameters:
    -----------
    wcss : sequence of float
        WCSS for k = 1..k_max (k_max >= 3)

    Returns:
    --------
    int : the selected k (1-based)
    """
    wcss = np.asarray(wcss, dtype=float)
    k_max = len(wcss)
    if k_max < 3:
        raise InvalidParameterError("elbow: k_max must be >= 3, got %i" % k_max)
    k = np.arange(1, k_max + 1, dtype=float)
    dy = wcss[-1] - wcss[0]
    dx = k_max - 1.0
    distance = np.abs(dy * (k - 1) - dx * (wcss - wcss[0])) / np.hypot(dx, dy)
    best = distance.max()
    return int(np.flatnonzero(distance >= best - 1e-12 * max(1.0, best))[0]) + 1

def elbow_curve(
    points : np.ndarray,
    k_max : int,
    seed : int,
    max_iter : int = 300,
    tol : float = 1e-6
    ) -> List[float]:
    """WCSS of kmeans_fit for k = 1..k_max, every fit using the same seed"""
    return [kmeans_fit(points, k, seed, max_iter, tol)[0].wcss for k in range(1, k_max + 1)]

def elbow_select(
    points : np.ndarray,
    k_max : int,
    seed : int,
    max_iter : int = 300,
    tol : float = 1e-6
    ) -> int:
    """
    Choose the number of clusters with the elbow method

    k_max is clamped to the number of points

    Raises:
    -------
    InvalidParameterError : if k_max < 3 or there are fewer than 3 points
    """
    points = check_points(points)
    if k_max < 3:
        raise InvalidParameterError("elbow: k_max must be >= 3, got %i" % k_max)
    if k_max > points.shape[0]:
        logging.warning("elbow: k_max %i clamped to the number of points %i" % (k_max, points.shape[0]))
        k_max = points.shape[0]
    return elbow_from_curve(elbow_curve(points, k_max, seed, max_iter, tol))

class KMeansClusteringFunction(ClusteringFunction):
    """K-means with k-means++ seeding"""

    algorithm_tag = "KMeans"

    _parameters = [
        ClusteringParameter("max_iter", 300, (1, None), integer=True),
        ClusteringParameter("tol", 1e-6, (0, None))
    ]

    def run(
        self,
        points : np.ndarray,
        num_clusters : int,
        seed : int
        ) -> Tuple[KMeansModel,ClusterAssignment]:
        return kmeans_fit(points, num_clusters, seed, self.parameters["max_iter"], self.parameters["tol"])

    def selectClusterCount(
        self,
        points : np.ndarray,
        k_max : int,
        seed : int
        ) -> int:
        """Elbow method with this function's parameters"""
        return elbow_select(points, k_max, seed, self.parameters["max_iter"], self.parameters["tol"])
