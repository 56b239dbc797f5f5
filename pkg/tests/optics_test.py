import unittest
import numpy as np
from sklearn.cluster import DBSCAN

from vibclust.clustering import OPTICSClusteringFunction, OpticsResult, optics_order, optics_extract, default_eps_prime, NOISE
from vibclust.clustering.optics import distance_matrix
from vibclust.exceptions import InvalidParameterError

def partition(labels, members):
    """Set of frozensets grouping members by label"""
    groups = {}
    for i in members:
        groups.setdefault(labels[i], set()).add(i)
    return {frozenset(g) for g in groups.values()}

class Test_OpticsOrder(unittest.TestCase):

    def test_ordering_is_permutation(self):
        points = np.random.default_rng(0).normal(size=(40, 2))
        result = optics_order(points, 4)
        self.assertEqual(sorted(result.ordering.tolist()), list(range(40)))
        self.assertEqual(result.ordering[0], 0)
        self.assertTrue(np.isinf(result.reachability[0]))

    def test_core_distance(self):
        points = np.array([[0.0], [1.0], [3.0], [10.0]])
        result = optics_order(points, 2)
        np.testing.assert_allclose(result.core_distance, [1.0, 1.0, 2.0, 7.0])

    def test_max_eps(self):
        points = np.array([[0.0], [1.0], [10.0]])
        result = optics_order(points, 2, max_eps=2.0)
        self.assertTrue(np.isinf(result.core_distance[2]))
        self.assertTrue(np.isinf(result.reachability[2]))
        self.assertIsNone(result.toDict()["core_distance"][2])

    def test_reachability_plot(self):
        result = optics_order(np.random.default_rng(1).normal(size=(10, 2)), 3)
        np.testing.assert_array_equal(result.reachabilityPlot(), result.reachability[result.ordering])

    def test_invariant_under_relabeling(self):
        # the walk starts at index 0, so relabelings keep that point first
        points = np.random.default_rng(5).normal(size=(30, 2))
        original = optics_order(points, 2)
        rng = np.random.default_rng(6)
        for _ in range(5):
            permutation = np.concatenate([[0], 1 + rng.permutation(29)])
            relabeled = optics_order(points[permutation], 2)
            position = np.argsort(permutation)
            np.testing.assert_array_equal(relabeled.ordering, position[original.ordering])
            np.testing.assert_allclose(relabeled.reachability, original.reachability[permutation], rtol=1e-12)
            np.testing.assert_allclose(relabeled.reachabilityPlot(), original.reachabilityPlot(), rtol=1e-12)

    def test_two_blobs_single_infinite_jump(self):
        rng = np.random.default_rng(7)
        points = np.vstack([rng.normal(scale=0.5, size=(12, 2)), 100.0 + rng.normal(scale=0.5, size=(12, 2))])
        plot = optics_order(points, 3, max_eps=5.0).reachabilityPlot()
        self.assertEqual(np.flatnonzero(np.isinf(plot)).tolist(), [0, 12])
        self.assertTrue(np.all(plot[1:12] < 5.0))
        self.assertTrue(np.all(plot[13:] < 5.0))

    def test_invalid_min_samples(self):
        with self.assertRaises(InvalidParameterError):
            optics_order(np.zeros((3, 2)), 4)

    def test_distance_matrix(self):
        d = distance_matrix(np.array([[0.0, 0.0], [3.0, 4.0]]))
        np.testing.assert_allclose(d, [[0.0, 5.0], [5.0, 0.0]])

class Test_OpticsExtract(unittest.TestCase):

    def test_matches_dbscan(self):
        rng = np.random.default_rng(2)
        for instance in range(50):
            n = int(rng.integers(10, 60))
            centers = rng.uniform(0, 10, size=(3, 2))
            points = centers[rng.integers(3, size=n)] + rng.normal(scale=rng.uniform(0.3, 2.0), size=(n, 2))
            min_samples = int(rng.integers(2, 7))
            eps = float(rng.uniform(0.3, 2.5))
            result = optics_order(points, min_samples)
            ours = optics_extract(result, eps).assignments
            reference = DBSCAN(eps=eps, min_samples=min_samples, algorithm="brute").fit(points)
            expected = reference.labels_
            core = np.zeros(n, dtype=bool)
            core[reference.core_sample_indices_] = True
            message = "instance %i" % instance
            np.testing.assert_array_equal(result.core_distance <= eps, core, message)
            np.testing.assert_array_equal(ours == NOISE, expected == -1, message)
            self.assertEqual(partition(ours, np.flatnonzero(core)), partition(expected, np.flatnonzero(core)), message)
            # border points belong to a cluster holding a core point within eps
            distances = distance_matrix(points)
            for i in np.flatnonzero(~core & (ours != NOISE)):
                neighbours = np.flatnonzero(core & (distances[i] <= eps))
                self.assertIn(ours[i], ours[neighbours].tolist(), message)

    def test_all_noise(self):
        points = np.array([[0.0], [10.0], [20.0], [30.0]])
        result = optics_order(points, 2)
        assignment = optics_extract(result, 1.0)
        self.assertEqual(assignment.num_clusters, 0)
        self.assertEqual(assignment.noise_fraction, 1.0)
        self.assertEqual(assignment.effective_clusters, 0)

    def test_two_groups(self):
        points = np.array([[0.0], [0.1], [0.2], [5.0], [5.1], [5.2], [20.0]])
        assignment = optics_extract(optics_order(points, 2), 0.5)
        labels = assignment.assignments
        self.assertEqual(assignment.num_clusters, 2)
        self.assertEqual(len(set(labels[:3])), 1)
        self.assertEqual(len(set(labels[3:6])), 1)
        self.assertNotEqual(labels[0], labels[3])
        self.assertEqual(labels[6], NOISE)

    def test_invalid_eps(self):
        result = optics_order(np.zeros((3, 1)), 2)
        with self.assertRaises(InvalidParameterError):
            optics_extract(result, 0)

class Test_DefaultEpsPrime(unittest.TestCase):

    def test_percentile(self):
        result = OpticsResult([0, 1, 2, 3], [np.inf, 1.0, 2.0, 3.0], [1.0, 1.0, 1.0, 1.0], 2, np.inf, np.zeros((4, 1)))
        self.assertAlmostEqual(default_eps_prime(result, 50), 2.0)

    def test_identical_points(self):
        result = optics_order(np.zeros((4, 2)), 2)
        self.assertEqual(default_eps_prime(result), 1.0)

class Test_OPTICSClusteringFunction(unittest.TestCase):

    def test_run_records_eps_prime(self):
        points = np.random.default_rng(3).normal(size=(30, 2))
        result, assignment = OPTICSClusteringFunction({"min_samples": 3, "eps_prime": 0.8}).run(points, 4, 0)
        self.assertEqual(result.summary(), {"min_samples": 3, "max_eps": None, "eps_prime": 0.8})
        self.assertEqual(assignment.algorithm_tag, "OPTICS")

    def test_cluster_count_ignored(self):
        self.assertFalse(OPTICSClusteringFunction.uses_cluster_count)
        points = np.random.default_rng(4).normal(size=(30, 2))
        a = OPTICSClusteringFunction().run(points, 2, 0)[1]
        b = OPTICSClusteringFunction().run(points, 9, 5)[1]
        np.testing.assert_array_equal(a.assignments, b.assignments)

    def test_parameter_serialization(self):
        self.assertEqual(OPTICSClusteringFunction().toDict()["parameters"]["max_eps"], "inf")
