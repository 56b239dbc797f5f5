from .assignment import ClusterAssignment, NOISE, ALGORITHM_TAGS
from .clustering_function import ClusteringFunction
from .kmeans import KMeansClusteringFunction, KMeansModel, kmeans_fit, elbow_select, elbow_from_curve
from .gmm import GMMClusteringFunction, GmmModel, gmm_fit, gmm_responsibilities
from .optics import OPTICSClusteringFunction, OpticsResult, optics_order, optics_extract, default_eps_prime

clusteringFunctionDict = {
    "KMeans": KMeansClusteringFunction,
    "GMM": GMMClusteringFunction,
    "OPTICS": OPTICSClusteringFunction
}
