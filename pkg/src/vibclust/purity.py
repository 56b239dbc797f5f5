import numpy as np
from typing import Union, List

from .clustering.assignment import ClusterAssignment
from .exceptions import InvalidParameterError

def _asArrays(
    assignment : Union[ClusterAssignment,List[int],np.ndarray],
    labels : Union[List[int],np.ndarray]
    ):
    clusters = assignment.assignments if isinstance(assignment, ClusterAssignment) else np.asarray(assignment, dtype=int)
    labels = np.asarray(labels, dtype=int)
    if len(clusters) == 0:
        raise InvalidParameterError("purity: empty input")
    if len(clusters) != len(labels):
        raise InvalidParameterError("purity: %i assignments but %i labels" % (len(clusters), len(labels)))
    return clusters, labels

def majority_counts(
    assignment : Union[ClusterAssignment,List[int],np.ndarray],
    labels : Union[List[int],np.ndarray]
    ) -> np.ndarray:
    """Size of the majority class of every cluster (NOISE pooled into one pseudo-cluster), in cluster order"""
    clusters, labels = _asArrays(assignment, labels)
    _, cluster_index = np.unique(clusters, return_inverse=True)
    _, label_index = np.unique(labels, return_inverse=True)
    counts = np.zeros((cluster_index.max() + 1, label_index.max() + 1), dtype=int)
    np.add.at(counts, (cluster_index, label_index), 1)
    return counts.max(axis=1)

def purity(
    assignment : Union[ClusterAssignment,List[int],np.ndarray],
    labels : Union[List[int],np.ndarray]
    ) -> float:
    """
    Fraction of points belonging to the majority class of their cluster

    NOISE points are first merged into a single pseudo-cluster

    Parameters:
    -----------
    assignment : ClusterAssignment or sequence of cluster indices

    labels : sequence of class indices

    Returns:
    --------
    float in [0, 1]

    Raises:
    -------
    InvalidParameterError : if input is empty or lengths differ
    """
    clusters, labels = _asArrays(assignment, labels)
    return float(majority_counts(clusters, labels).sum() / len(labels))
