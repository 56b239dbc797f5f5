import unittest
import numpy as np

from vibclust.reduce import jacobi_eigh, pca_fit, pca_transform, PcaModel
from vibclust.features import FeatureMatrix, ColumnMeta
from vibclust.exceptions import InvalidParameterError, DimensionMismatchError

def feature_matrix(values):
    values = np.asarray(values, dtype=float)
    return FeatureMatrix(values, [ColumnMeta("Std", "TD", c) for c in range(values.shape[1])], [0] * values.shape[0])

def power_iteration(matrix, iterations=20000):
    v = np.ones(matrix.shape[0]) / np.sqrt(matrix.shape[0])
    for _ in range(iterations):
        v = matrix @ v
        v /= np.linalg.norm(v)
    return v @ matrix @ v, v

class Test_JacobiEigh(unittest.TestCase):

    def test_diagonal(self):
        eigenvalues, eigenvectors = jacobi_eigh(np.diag([1.0, 3.0, 2.0]))
        np.testing.assert_allclose(eigenvalues, [3.0, 2.0, 1.0])
        np.testing.assert_allclose(np.abs(eigenvectors[:, 0]), [0, 1, 0])

    def test_reconstruction(self):
        rng = np.random.default_rng(0)
        for n in (2, 5, 9):
            a = rng.normal(size=(n, n))
            a = a + a.T
            eigenvalues, eigenvectors = jacobi_eigh(a)
            self.assertTrue(np.all(np.diff(eigenvalues) <= 1e-12))
            np.testing.assert_allclose(eigenvectors.T @ eigenvectors, np.eye(n), atol=1e-10)
            np.testing.assert_allclose(eigenvectors @ np.diag(eigenvalues) @ eigenvectors.T, a, atol=1e-9)

    def test_not_symmetric(self):
        with self.assertRaises(InvalidParameterError):
            jacobi_eigh(np.array([[1.0, 2.0], [0.0, 1.0]]))

    def test_not_square(self):
        with self.assertRaises(InvalidParameterError):
            jacobi_eigh(np.zeros((2, 3)))

class Test_Pca(unittest.TestCase):

    def sample(self, seed=1, n=200, d=6):
        rng = np.random.default_rng(seed)
        return rng.normal(size=(n, d)) @ rng.normal(size=(d, d))

    def test_orthonormal_and_ordered(self):
        model = pca_fit(feature_matrix(self.sample()), 4)
        np.testing.assert_allclose(model.component_matrix @ model.component_matrix.T, np.eye(4), atol=1e-10)
        self.assertTrue(np.all(np.diff(model.explained_variance) <= 1e-12))
        self.assertEqual((model.num_components, model.num_features), (4, 6))

    def test_first_component_matches_power_iteration(self):
        values = self.sample(2)
        centered = values - values.mean(axis=0)
        covariance = centered.T @ centered / (len(values) - 1)
        eigenvalue, vector = power_iteration(covariance)
        model = pca_fit(feature_matrix(values), 1)
        self.assertAlmostEqual(model.explained_variance[0], eigenvalue, delta=1e-8 * eigenvalue)
        self.assertAlmostEqual(abs(model.component_matrix[0] @ vector), 1.0, delta=1e-8)

    def separated_sample(self, seed=9, n=200):
        """Sample whose covariance eigenvalues are well apart (about 36, 25, 16, 9, 4, 1)"""
        rng = np.random.default_rng(seed)
        rotation, _ = np.linalg.qr(rng.normal(size=(6, 6)))
        return (rng.normal(size=(n, 6)) * np.arange(6, 0, -1)) @ rotation.T + rng.normal(size=6)

    def test_all_eigenvalues_match_power_iteration(self):
        values = self.separated_sample()
        centered = values - values.mean(axis=0)
        deflated = centered.T @ centered / (len(values) - 1)
        expected = []
        for _ in range(6):
            eigenvalue, vector = power_iteration(deflated, 5000)
            expected.append(eigenvalue)
            deflated = deflated - eigenvalue * np.outer(vector, vector)
        model = pca_fit(feature_matrix(values), 6)
        np.testing.assert_allclose(model.explained_variance, expected, rtol=0, atol=1e-8 * expected[0])

    def test_projected_columns_uncorrelated(self):
        values = self.sample(10)
        scores = pca_fit(feature_matrix(values), 6).transform(values)
        covariance = np.cov(scores, rowvar=False)
        off_diagonal = covariance - np.diag(np.diag(covariance))
        self.assertLess(np.abs(off_diagonal).max(), 1e-8)

    def test_explained_variance_sums_to_trace(self):
        values = self.sample(11)
        covariance = np.cov(values, rowvar=False)
        model = pca_fit(feature_matrix(values), 6)
        self.assertAlmostEqual(model.explained_variance.sum(), np.trace(covariance), delta=1e-8)

    def test_sign_convention(self):
        model = pca_fit(feature_matrix(self.sample(3)), 6)
        for row in model.component_matrix:
            self.assertGreater(row[np.argmax(np.abs(row))], 0)

    def test_projection_variance(self):
        values = self.sample(4)
        model = pca_fit(feature_matrix(values), 3)
        scores = model.transform(values)
        np.testing.assert_allclose(scores.mean(axis=0), np.zeros(3), atol=1e-9)
        np.testing.assert_allclose(scores.var(axis=0, ddof=1), model.explained_variance, rtol=1e-8)

    def test_full_rank_inverse_transform(self):
        values = self.sample(5)
        model = pca_fit(feature_matrix(values), 6)
        np.testing.assert_allclose(model.inverseTransform(model.transform(values)), values, atol=1e-8 * np.abs(values).max())
        self.assertAlmostEqual(model.explainedVarianceRatio().sum(), 1.0, places=9)

    def test_transform_feature_matrix(self):
        matrix = feature_matrix(self.sample(6))
        reduced = pca_transform(pca_fit(matrix, 2), matrix)
        self.assertEqual(reduced.column_names, ["PC1", "PC2"])
        np.testing.assert_array_equal(reduced.labels, matrix.labels)

    def test_components_out_of_range(self):
        matrix = feature_matrix(self.sample(7))
        for k in (0, 7):
            with self.assertRaises(InvalidParameterError):
                pca_fit(matrix, k)

    def test_too_few_windows(self):
        with self.assertRaises(InvalidParameterError):
            pca_fit(feature_matrix([[1.0, 2.0]]), 1)

    def test_dimension_mismatch(self):
        model = pca_fit(feature_matrix(self.sample(8)), 2)
        with self.assertRaises(DimensionMismatchError):
            pca_transform(model, feature_matrix(np.zeros((3, 4))))
        with self.assertRaises(DimensionMismatchError):
            model.inverseTransform(np.zeros((3, 5)))

    def test_constant_features(self):
        model = pca_fit(feature_matrix(np.ones((5, 3))), 2)
        np.testing.assert_array_equal(model.explained_variance, [0.0, 0.0])
        np.testing.assert_array_equal(model.explainedVarianceRatio(), [0.0, 0.0])

    def test_to_dict(self):
        model = PcaModel([0.0, 1.0], [[1.0, 0.0]], [2.0], 3.0)
        self.assertEqual(model.toDict()["total_variance"], 3.0)
        self.assertAlmostEqual(model.explainedVarianceRatio()[0], 2.0 / 3.0)
