import unittest
import numpy as np
import pandas

from vibclust.grid import GridConfig, top_features, feature_combinations, expand_grid, run_grid, baseline_ledger, COMBINATION_LABELS
from vibclust.catalog import DatasetCatalog
from vibclust.dataio import SyntheticSpec, generate_synthetic, synthetic_suite
from vibclust.features import FeatureRef, FEATURE_KINDS, DOMAINS
from vibclust.trial import TrialSpec, TrialResult
from vibclust.exceptions import MissingBaselineError, InvalidParameterError

def q1_ledger(scores):
    """Ledger of q1 rows: scores maps algorithm to {feature_set: purity}"""
    return pandas.DataFrame([
        {"experiment": "q1", "algorithm": algorithm, "feature_set": feature_set, "status": "ok", "purity": purity}
        for algorithm, values in scores.items()
        for feature_set, purity in values.items()
    ])

def full_baseline():
    rng = np.random.default_rng(0)
    return q1_ledger({
        algorithm: {"%s/%s" % (kind, domain): float(rng.uniform()) for kind in FEATURE_KINDS for domain in DOMAINS}
        for algorithm in ("KMeans", "GMM", "OPTICS")
    })

class Test_TopFeatures(unittest.TestCase):

    def test_best_first(self):
        ledger = q1_ledger({"KMeans": {"Std/TD": 0.9, "AbsMean/TD": 0.7, "IQR/FD": 0.8, "AbsKurt/FD": 0.2}})
        self.assertEqual(top_features(ledger, "KMeans"), [FeatureRef("Std", "TD"), FeatureRef("IQR", "FD"), FeatureRef("AbsMean", "TD")])

    def test_alphabetical_tie_break(self):
        ledger = q1_ledger({"GMM": {"Std/TD": 0.5, "AbsMean/TD": 0.5, "IQR/FD": 0.5, "AbsKurt/FD": 0.5}})
        self.assertEqual([str(f) for f in top_features(ledger, "GMM")], ["AbsKurt/FD", "AbsMean/TD", "IQR/FD"])

    def test_mean_over_runs_skips_failures(self):
        ledger = pandas.concat([
            q1_ledger({"KMeans": {"Std/TD": 0.6, "AbsMean/TD": 0.5, "IQR/FD": 0.4}}),
            q1_ledger({"KMeans": {"Std/TD": 0.0, "AbsMean/TD": 0.5, "IQR/FD": 0.4}}),
            pandas.DataFrame([{"experiment": "q1", "algorithm": "KMeans", "feature_set": "IQR/FD", "status": "failed", "purity": np.nan}])
        ])
        self.assertEqual([str(f) for f in top_features(ledger, "KMeans")], ["AbsMean/TD", "IQR/FD", "Std/TD"])

    def test_missing(self):
        with self.assertRaises(MissingBaselineError):
            top_features(None, "KMeans")
        with self.assertRaises(MissingBaselineError):
            top_features(q1_ledger({"KMeans": {"Std/TD": 0.6}}), "KMeans")
        with self.assertRaises(MissingBaselineError):
            top_features(q1_ledger({"OPTICS": {"Std/TD": 0.6, "IQR/TD": 0.5, "IQR/FD": 0.4}}), "GMM")

class Test_FeatureCombinations(unittest.TestCase):

    def test_labels(self):
        a, b, c = FeatureRef("Std", "TD"), FeatureRef("IQR", "FD"), FeatureRef("AbsMean", "TD")
        combos = feature_combinations([a, b, c])
        self.assertEqual(list(combos.keys()), list(COMBINATION_LABELS))
        self.assertEqual(combos["CA"], [c, a])
        self.assertEqual(combos["ABC"], [a, b, c])

    def test_needs_three(self):
        with self.assertRaises(InvalidParameterError):
            feature_combinations([FeatureRef("Std", "TD")])

class Test_ExpandGrid(unittest.TestCase):

    grid_config = GridConfig(["d1", "d2", "d3"], runs_per_setting=3)

    def test_counts(self):
        baseline = full_baseline()
        counts = {experiment: len(expand_grid(experiment, self.grid_config, baseline)) for experiment in ("q1", "q2", "q3", "q4", "q5")}
        self.assertEqual(counts, {"q1": 324, "q2": 0, "q3": 126, "q4": 90, "q5": 108})

    def test_q1_order(self):
        specs = expand_grid("q1", self.grid_config)
        self.assertEqual(specs[0].key, "q1:d1:KMeans:AbsMean/TD:pca=None:k=n:run=1")
        self.assertEqual([s.run_index for s in specs[:3]], [1, 2, 3])
        self.assertEqual(specs[3].dataset_id, "d2")
        self.assertEqual(specs[9].feature_set, "AbsMean/FD")
        self.assertEqual([s.algorithm_tag for s in specs[::108]], ["KMeans", "OPTICS", "GMM"])

    def test_unique_seeds(self):
        specs = expand_grid("q1", self.grid_config)
        self.assertEqual(len({s.seed for s in specs}), len(specs))

    def test_pure_function(self):
        baseline = full_baseline()
        self.assertEqual(expand_grid("q4", self.grid_config, baseline), expand_grid("q4", self.grid_config, baseline))

    def test_followups_use_two_algorithms(self):
        specs = expand_grid("q3", self.grid_config, full_baseline())
        self.assertEqual({s.algorithm_tag for s in specs}, {"KMeans", "GMM"})

    def test_q4_settings(self):
        specs = expand_grid("q4", GridConfig(["d"], runs_per_setting=1), full_baseline())
        self.assertEqual([s.pca_components for s in specs[:5]], [None, 6, 4, 2, 1])
        self.assertTrue(all(len(s.features) == 3 for s in specs))

    def test_q5_rules(self):
        specs = expand_grid("q5", GridConfig(["d"], runs_per_setting=1), full_baseline())
        self.assertEqual([str(s.cluster_count_rule) for s in specs[:6]], ["elbow", "n", "1.25n", "1.5n", "1.75n", "2n"])

    def test_salt_changes_seeds(self):
        a = expand_grid("q1", GridConfig(["d"], runs_per_setting=1))
        b = expand_grid("q1", GridConfig(["d"], runs_per_setting=1, seed_salt="other"))
        self.assertTrue(all(x.seed != y.seed for x, y in zip(a, b)))

    def test_missing_baseline(self):
        for experiment in ("q3", "q4", "q5"):
            with self.assertRaises(MissingBaselineError):
                expand_grid(experiment, self.grid_config)

    def test_unknown_experiment(self):
        with self.assertRaises(InvalidParameterError):
            expand_grid("q9", self.grid_config)

class Test_RunGrid(unittest.TestCase):

    @classmethod
    def setUpClass(cls):
        spec = SyntheticSpec(
            num_classes = 2,
            windows_per_class = 10,
            window_length = 64,
            class_profiles = [{"amplitude_scale": 1.0, "dominant_frequency_bin": 3, "noise_std": 0.1}, {"amplitude_scale": 4.0, "dominant_frequency_bin": 9, "noise_std": 0.4}],
            seed = 3,
            name = "small")
        cls.catalog = DatasetCatalog([generate_synthetic(spec)])
        cls.specs = [TrialSpec("q1", "small", algorithm, [feature]) for algorithm in ("KMeans", "GMM") for feature in ("AbsMean/TD", "Std/FD")]

    def test_serial(self):
        results = run_grid(self.specs, self.catalog)
        self.assertEqual([r.spec for r in results], self.specs)
        self.assertTrue(all(r.ok for r in results))

    def test_workers_match_serial(self):
        serial = run_grid(self.specs, self.catalog, jobs=1)
        parallel = run_grid(self.specs, self.catalog, jobs=2)
        self.assertEqual([r.toDict() for r in serial], [r.toDict() for r in parallel])

    def test_failures_are_kept(self):
        specs = self.specs[:1] + [TrialSpec("q1", "absent", "KMeans", ["Std/TD"])]
        results = run_grid(specs, self.catalog)
        self.assertEqual([r.status for r in results], ["ok", "failed"])

    def test_invalid_jobs(self):
        with self.assertRaises(InvalidParameterError):
            run_grid(self.specs, self.catalog, jobs=0)

    def test_baseline_ledger(self):
        ledger = baseline_ledger(run_grid(self.specs, self.catalog))
        self.assertEqual(list(ledger.columns), ["experiment", "algorithm", "feature_set", "status", "purity"])
        self.assertEqual(len(ledger), 4)
        self.assertIs(baseline_ledger(ledger), ledger)

    def test_empty_ledger(self):
        self.assertEqual(len(baseline_ledger([])), 0)
        result = TrialResult(TrialSpec("q1", "small", "GMM", ["Std/TD"]), purity=1.0)
        self.assertEqual(baseline_ledger([result])["purity"].tolist(), [1.0])

class Test_SyntheticSuiteTrends(unittest.TestCase):
    """Algorithm and cluster count trends on the bundled synthetic suite"""

    @classmethod
    def setUpClass(cls):
        suite = synthetic_suite()
        cls.catalog = DatasetCatalog([generate_synthetic(s) for s in suite])
        cls.grid_config = GridConfig([s.name for s in suite], runs_per_setting=1)
        cls.q1 = run_grid(expand_grid("q1", cls.grid_config), cls.catalog)

    def meanPurity(self, results, **where):
        values = [r.purity for r in results if r.ok and all(getattr(r.spec, k) == v for k, v in where.items())]
        self.assertTrue(len(values))
        return float(np.mean(values))

    def test_density_clustering_ranks_last(self):
        self.assertTrue(all(r.ok for r in self.q1))
        optics = self.meanPurity(self.q1, algorithm_tag="OPTICS")
        self.assertLess(optics, self.meanPurity(self.q1, algorithm_tag="KMeans"))
        self.assertLess(optics, self.meanPurity(self.q1, algorithm_tag="GMM"))

    def test_kmeans_overclustering(self):
        q5 = expand_grid("q5", self.grid_config, baseline_ledger(self.q1))
        specs = [s for s in q5 if s.algorithm_tag == "KMeans" and str(s.cluster_count_rule) in ("n", "1.5n", "2n")]
        results = run_grid(specs, self.catalog)
        by_rule = {
            rule: float(np.mean([r.purity for r in results if str(r.spec.cluster_count_rule) == rule]))
            for rule in ("n", "1.5n", "2n")
        }
        self.assertGreaterEqual(by_rule["1.5n"], by_rule["n"])
        self.assertLessEqual(by_rule["2n"] - by_rule["1.5n"], 0.05)
