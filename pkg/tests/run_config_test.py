import os
import unittest
import numpy as np
from jsonschema.exceptions import ValidationError

from vibclust.run_config import RunConfig
from vibclust.catalog import DatasetCatalog
from vibclust.dataio import WindowedDataset
from vibclust.exceptions import InvalidParameterError, DatasetFileNotFoundError

sample_dir = os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))), "sample_data", "configs")

class Test_RunConfig(unittest.TestCase):

    def test_defaults(self):
        run_config = RunConfig(synthetic_suite=True)
        self.assertEqual(run_config.experiments, ["q1", "q2", "q3", "q4", "q5"])
        self.assertEqual(run_config.runs_per_setting, 3)
        self.assertEqual(run_config.preprocess, {"savgol_window": 9, "savgol_order": 7, "normalize_scope": "dataset"})
        self.assertTrue(run_config.standardize)
        self.assertEqual(run_config.algorithmParameters()["GMM"]["covariance_floor"], 1e-6)

    def test_no_dataset(self):
        with self.assertRaises(InvalidParameterError):
            RunConfig()

    def test_schema(self):
        with self.assertRaises(ValidationError):
            RunConfig(synthetic_suite=True, experiment="q7")
        with self.assertRaises(ValidationError):
            RunConfig(synthetic_suite=True, kmeans={"n_init": 3})
        with self.assertRaises(ValidationError):
            RunConfig(synthetic_suite={"windows_per_class": 0})

    def test_sections_merge_over_defaults(self):
        run_config = RunConfig(synthetic_suite=True, optics={"min_samples": 3}, preprocess={"normalize_scope": "window"})
        self.assertEqual(run_config.optics["min_samples"], 3)
        self.assertEqual(run_config.optics["eps_percentile"], 90)
        self.assertEqual(run_config.preprocess["savgol_window"], 9)
        self.assertEqual(run_config.buildCatalog().normalize_scope, "window")

    def test_override(self):
        run_config = RunConfig(synthetic_suite=True).override(experiment="q3", runs_per_setting=None, savgol_window=11, jobs=2)
        self.assertEqual(run_config.experiments, ["q3"])
        self.assertEqual(run_config.runs_per_setting, 3)
        self.assertEqual(run_config.savgolParams().window_size, 11)
        self.assertEqual(run_config.jobs, 2)
        with self.assertRaises(InvalidParameterError):
            run_config.override(colour="red")

    def test_snapshot_skips_execution_fields(self):
        snapshot = RunConfig(synthetic_suite=True, output_dir="x", jobs=4).snapshot()
        self.assertNotIn("output_dir", snapshot)
        self.assertNotIn("jobs", snapshot)
        self.assertIn("seed_salt", snapshot)

    def test_synthetic_suite_options(self):
        specs = RunConfig(synthetic_suite={"windows_per_class": 4, "seed": 9}).syntheticSpecs()
        self.assertEqual([s.windows_per_class for s in specs], [4, 4, 4])
        self.assertEqual(specs[0].seed, 9)

    def test_grid_config(self):
        grid_config = RunConfig(synthetic_suite=True, runs_per_setting=2, seed_salt="s").gridConfig(["a"])
        self.assertEqual((grid_config.runs_per_setting, grid_config.seed_salt), (2, "s"))
        self.assertEqual(grid_config.pca_components, [6, 4, 2, 1])

    def test_load_missing(self):
        with self.assertRaises(DatasetFileNotFoundError):
            RunConfig.load("/nonexistent/run.yml")

    def test_sample_configs(self):
        for name in ("synthetic_suite.yml", "quick.yml", "from_csv.yml"):
            RunConfig.load(os.path.join(sample_dir, name))

    def test_sample_csv_dataset(self):
        catalog = RunConfig.load(os.path.join(sample_dir, "from_csv.yml")).buildCatalog()
        self.assertEqual(catalog.dataset_ids, ["demo_bench", "two_tones"])
        demo = catalog.getDataset("demo_bench")
        self.assertEqual(demo.classCounts(), {0: 6, 1: 6, 2: 6})
        self.assertEqual(demo.windows.shape[1:], (2, 64))
        self.assertEqual(catalog.numClasses("two_tones"), 2)

class Test_DatasetCatalog(unittest.TestCase):

    def dataset(self, name="d"):
        windows = np.random.default_rng(0).normal(size=(6, 2, 32)) * np.array([1, 1, 1, 3, 3, 3])[:, None, None]
        return WindowedDataset(windows, [0, 0, 0, 1, 1, 1], 100.0, 2, name)

    def test_duplicate_names(self):
        with self.assertRaises(InvalidParameterError):
            DatasetCatalog([self.dataset(), self.dataset()])

    def test_empty(self):
        with self.assertRaises(InvalidParameterError):
            DatasetCatalog([])

    def test_unknown_dataset(self):
        catalog = DatasetCatalog([self.dataset()])
        self.assertNotIn("e", catalog)
        with self.assertRaises(KeyError):
            catalog.getDataset("e")

    def test_feature_cache(self):
        catalog = DatasetCatalog([self.dataset()])
        self.assertIs(catalog.featureMatrix("d", "Std/TD"), catalog.featureMatrix("d", "Std/TimeDomain"))
        self.assertIs(catalog.preprocessed("d"), catalog.preprocessed("d"))

    def test_combined(self):
        catalog = DatasetCatalog([self.dataset()])
        combined = catalog.combinedFeatures("d", ["Std/TD", "IQR/FD"])
        self.assertEqual(combined.column_names, ["Std_TD_ch0", "Std_TD_ch1", "IQR_FD_ch0", "IQR_FD_ch1"])
        with self.assertRaises(InvalidParameterError):
            catalog.combinedFeatures("d", [])

    def test_pickle_drops_caches(self):
        catalog = DatasetCatalog([self.dataset()])
        catalog.preprocessed("d")
        state = catalog.__getstate__()
        self.assertEqual(state["_preprocessed"], {})
        self.assertEqual(len(catalog._preprocessed), 1)

    def test_to_dict(self):
        info = DatasetCatalog([self.dataset()], standardize=False).toDict()
        self.assertEqual(info["datasets"][0]["class_counts"], {"0": 3, "1": 3})
        self.assertFalse(info["standardize"])
        self.assertEqual(info["normalize_scope"], "dataset")
