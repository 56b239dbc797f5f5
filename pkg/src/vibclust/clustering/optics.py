import logging
import numpy as np
from typing import Tuple

from .assignment import ClusterAssignment, NOISE
from .clustering_function import ClusteringFunction, check_points
from .clustering_parameter import ClusteringParameter
from .kmeans import squared_distances
from ..exceptions import InvalidParameterError

def distance_matrix(points : np.ndarray) -> np.ndarray:
    return np.sqrt(squared_distances(points, points))

def _finiteOrNone(values : np.ndarray) -> list:
    return [float(v) if np.isfinite(v) else None for v in values]

class OpticsResult:
    """Cluster ordering of OPTICS: processing order, reachability and core distance of every point"""

    @property
    def ordering(self) -> np.ndarray:
        """Point indices in processing order"""
        return self._ordering

    @property
    def reachability(self) -> np.ndarray:
        """Reachability distance per point index. Infinite for the first point of every connected component"""
        return self._reachability

    @property
    def core_distance(self) -> np.ndarray:
        """Distance to the min_samples-th nearest neighbour (the point itself counts), infinite beyond max_eps"""
        return self._core_distance

    @property
    def points(self) -> np.ndarray:
        return self._points

    def __init__(
        self,
        ordering : np.ndarray,
        reachability : np.ndarray,
        core_distance : np.ndarray,
        min_samples : int,
        max_eps : float,
        points : np.ndarray
        ):
        self._ordering = np.asarray(ordering, dtype=int)
        self._reachability = np.asarray(reachability, dtype=float)
        self._core_distance = np.asarray(core_distance, dtype=float)
        self.min_samples = int(min_samples)
        self.max_eps = float(max_eps)
        self._points = np.asarray(points, dtype=float)
        self.eps_prime = None
        """Extraction radius used by OPTICSClusteringFunction, if any"""

    def reachabilityPlot(self) -> np.ndarray:
        """Reachability values in processing order"""
        return self._reachability[self._ordering]

    def toDict(self) -> dict:
        return {
            "ordering": self._ordering.tolist(),
            "reachability": _finiteOrNone(self._reachability),
            "core_distance": _finiteOrNone(self._core_distance),
            "min_samples": self.min_samples,
            "max_eps": self.max_eps if np.isfinite(self.max_eps) else None
        }

    def summary(self) -> dict:
        return {
            "min_samples": self.min_samples,
            "max_eps": self.max_eps if np.isfinite(self.max_eps) else None,
            "eps_prime": self.eps_prime
        }

def optics_order(
    points : np.ndarray,
    min_samples : int = 5,
    max_eps : float = np.inf
    ) -> OpticsResult:
    """
    Compute the OPTICS cluster ordering

    The next point is the unprocessed one with the smallest finite reachability (ties to the lowest index). When there is none, a new component starts at the lowest unprocessed index. Only core points update reachabilities

    Parameters:
    -----------
    points : np.ndarray
        Array of shape (num_points, num_dimensions)

    min_samples : int = 5
        Neighbourhood size of a core point, the point itself included

    max_eps : float = inf
        Neighbourhood radius

    Returns:
    --------
    OpticsResult

    Raises:
    -------
    InvalidParameterError : if min_samples > num_points
    """
    points = check_points(points)
    n = points.shape[0]
    if not 1 <= min_samples <= n:
        raise InvalidParameterError("min_samples must lie in [1, %i], got %i" % (n, min_samples))
    if not max_eps > 0:
        raise InvalidParameterError("max_eps must be > 0")
    distances = distance_matrix(points)
    core_distance = np.sort(distances, axis=1)[:, min_samples - 1]
    core_distance[core_distance > max_eps] = np.inf
    reachability = np.full(n, np.inf)
    processed = np.zeros(n, dtype=bool)
    ordering = []
    for _ in range(n):
        seeds = np.flatnonzero(~processed & np.isfinite(reachability))
        if len(seeds):
            p = int(seeds[np.argmin(reachability[seeds])])
        else:
            p = int(np.flatnonzero(~processed)[0])
        processed[p] = True
        ordering.append(p)
        if not np.isfinite(core_distance[p]):
            continue
        neighbors = ~processed & (distances[p] <= max_eps)
        candidate = np.maximum(core_distance[p], distances[p])
        update = neighbors & (candidate < reachability)
        reachability[update] = candidate[update]
    return OpticsResult(np.array(ordering), reachability, core_distance, min_samples, max_eps, points)

def optics_extract(
    result : OpticsResult,
    eps_prime : float
    ) -> ClusterAssignment:
    """
    DBSCAN(eps_prime, min_samples) clusters from the ordering

    Walking the ordering, a point with reachability > eps_prime starts a new cluster if its core distance is <= eps_prime, else it is NOISE. Other points join the current cluster. Noise points lying within eps_prime of a core point are then attached to the cluster of the nearest one, so core, border and noise points match DBSCAN

    Raises:
    -------
    InvalidParameterError : if eps_prime <= 0
    """
    if not eps_prime > 0:
        raise InvalidParameterError("eps_prime must be > 0, got %s" % eps_prime)
    reachability = result.reachability
    core = result.core_distance <= eps_prime
    labels = np.full(len(reachability), NOISE)
    cluster = -1
    for p in result.ordering:
        if reachability[p] > eps_prime:
            if core[p]:
                cluster += 1
                labels[p] = cluster
        else:
            labels[p] = cluster
    noise = np.flatnonzero(labels == NOISE)
    core_points = np.flatnonzero(core)
    if len(noise) and len(core_points):
        distances = np.sqrt(squared_distances(result.points[noise], result.points[core_points]))
        nearest = np.argmin(distances, axis=1)
        border = distances[np.arange(len(noise)), nearest] <= eps_prime
        labels[noise[border]] = labels[core_points[nearest[border]]]
    return ClusterAssignment(labels, cluster + 1, "OPTICS")

def default_eps_prime(
    result : OpticsResult,
    percentile : float = 90
    ) -> float:
    """Percentile of the finite reachability values, falling back to the smallest positive finite distance recorded and then to 1"""
    finite = result.reachability[np.isfinite(result.reachability)]
    if len(finite):
        value = float(np.percentile(finite, percentile))
        if value > 0:
            return value
    recorded = np.concatenate([finite, result.core_distance[np.isfinite(result.core_distance)]])
    positive = recorded[recorded > 0]
    if len(positive):
        logging.debug("optics: reachability percentile is 0, using the smallest positive distance")
        return float(positive.min())
    return 1.0

class OPTICSClusteringFunction(ClusteringFunction):
    """OPTICS ordering followed by DBSCAN-equivalent extraction. The requested number of clusters and the seed are ignored"""

    algorithm_tag = "OPTICS"

    uses_cluster_count = False

    _parameters = [
        ClusteringParameter("min_samples", 5, (1, None), integer=True),
        ClusteringParameter("max_eps", np.inf, (0, None)),
        ClusteringParameter("eps_percentile", 90, (0, 100)),
        ClusteringParameter("eps_prime", None, (0, None))
    ]

    def run(
        self,
        points : np.ndarray,
        num_clusters : int = None,
        seed : int = None
        ) -> Tuple[OpticsResult,ClusterAssignment]:
        result = optics_order(points, self.parameters["min_samples"], self.parameters["max_eps"])
        eps_prime = self.parameters["eps_prime"] if self.parameters["eps_prime"] is not None else default_eps_prime(result, self.parameters["eps_percentile"])
        result.eps_prime = float(eps_prime)
        logging.debug("optics: eps_prime %s" % eps_prime)
        return result, optics_extract(result, eps_prime)
