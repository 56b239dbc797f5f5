import numpy as np
from typing import List, Tuple, Any

from .assignment import ClusterAssignment
from .clustering_parameter import ClusteringParameter
from ..exceptions import InvalidParameterError

class ClusteringFunction:
    """
    Abstract clustering algorithm. Subclasses set _parameters (list of ClusteringParameter) and implement .run(points, num_clusters, seed), which returns the fitted model and a ClusterAssignment
    """

    _parameters : List[ClusteringParameter] = []
    """Parameter constraints and defaults"""

    uses_cluster_count = True
    """False for density based algorithms, which ignore the requested number of clusters"""

    algorithm_tag = None

    def __init__(
        self,
        parameters : dict = {}
        ):
        """
        Parameters:
        -----------
        parameters : dict

            Parameter values by name. Missing values take the defaults, unknown names are ignored

        Raises:
        -------
        InvalidParameterError : if a value violates its constraints
        """
        parameters = dict(parameters) if parameters is not None else {}
        self.parameters = {p.name: p.check(parameters.get(p.name)) for p in self._parameters}

    def run(
        self,
        points : np.ndarray,
        num_clusters : int,
        seed : int
        ) -> Tuple[Any,ClusterAssignment]:
        """To be overwritten in subclasses

        Parameters:
        -----------
        points : np.ndarray
            Array of shape (num_points, num_dimensions)

        num_clusters : int

        seed : int

        Returns:
        --------
        2-tuple : fitted model, ClusterAssignment"""
        raise NotImplementedError("run() not implemented for %s" % type(self).__name__)

    def toDict(self) -> dict:
        return {
            "type": type(self).__name__,
            "parameters": {k: (str(v) if isinstance(v, float) and np.isinf(v) else v) for k, v in self.parameters.items()}
        }

def check_points(
    points : np.ndarray,
    k : int = None
    ) -> np.ndarray:
    """Coerce to a finite 2d float array with at least k rows"""
    points = np.asarray(points, dtype=float)
    if points.ndim == 1:
        points = points[:, np.newaxis]
    if points.ndim != 2 or points.shape[0] == 0:
        raise InvalidParameterError("points must be a non-empty 2d array")
    if not np.all(np.isfinite(points)):
        raise InvalidParameterError("points must be finite")
    if k is not None:
        if k < 1:
            raise InvalidParameterError("number of clusters must be >= 1, got %s" % k)
        if k > points.shape[0]:
            raise InvalidParameterError("number of clusters (%i) exceeds number of points (%i)" % (k, points.shape[0]))
    return points
