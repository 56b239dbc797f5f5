import numpy as np
from typing import List, Union

from ..descriptors.int_descriptor import IntDescriptor
from ..descriptors.string_descriptor import StringDescriptor

NOISE = -1
"""Cluster index of points no density cluster claims (OPTICS only)"""

ALGORITHM_TAGS = ("KMeans", "GMM", "OPTICS")

class ClusterAssignment:
    """Cluster index per point. NOISE appears only for OPTICS, whose num_clusters may be 0 when every point is noise"""

    num_clusters = IntDescriptor(min_value=0)
    """Number of clusters the algorithm produced (or was asked for)"""

    algorithm_tag = StringDescriptor(ALGORITHM_TAGS)

    @property
    def assignments(self) -> np.ndarray:
        return self._assignments

    @property
    def num_points(self) -> int:
        return len(self._assignments)

    @property
    def noise_fraction(self) -> float:
        return float(np.mean(self._assignments == NOISE))

    @property
    def effective_clusters(self) -> int:
        """Number of non-empty clusters, NOISE excluded"""
        return int(len(np.unique(self._assignments[self._assignments != NOISE])))

    def __init__(
        self,
        assignments : Union[List[int],np.ndarray],
        num_clusters : int,
        algorithm_tag : str
        ):
        """
        Raises:
        -------
        ValueError : if an index lies outside [0, num_clusters) or NOISE is used by an algorithm other than OPTICS
        """
        assignments = np.array(assignments, dtype=int)
        self.num_clusters = num_clusters
        self.algorithm_tag = algorithm_tag
        if self.algorithm_tag != "OPTICS" and self.num_clusters < 1:
            raise ValueError("num_clusters must be >= 1 for %s" % self.algorithm_tag)
        noise = assignments == NOISE
        if noise.any() and self.algorithm_tag != "OPTICS":
            raise ValueError("NOISE assignments are only valid for OPTICS")
        clustered = assignments[~noise]
        if len(clustered) and (clustered.min() < 0 or clustered.max() >= self.num_clusters):
            raise ValueError("cluster indices must lie in [0, %i)" % self.num_clusters)
        assignments.setflags(write=False)
        self._assignments = assignments

    def toDict(self) -> dict:
        return {
            "assignments": self._assignments.tolist(),
            "num_clusters": self.num_clusters,
            "algorithm_tag": self.algorithm_tag
        }
