import os
import json
import tempfile
import unittest
import yaml
import pandas
from click.testing import CliRunner

from vibclust import cli

def small_synthetic(name="small", window_length=64):
    return {
        "name": name,
        "num_classes": 2,
        "windows_per_class": 8,
        "window_length": window_length,
        "num_channels": 1,
        "class_profiles": [
            {"amplitude_scale": 1.0, "dominant_frequency_bin": 2, "noise_std": 0.1},
            {"amplitude_scale": 4.0, "dominant_frequency_bin": 3, "noise_std": 0.4}
        ],
        "seed": 5
    }

def write_config(directory, **params):
    path = os.path.join(directory, "run.yml")
    with open(path, "w") as f:
        yaml.safe_dump(params, f)
    return path

class Test_Cli(unittest.TestCase):

    def setUp(self):
        self.runner = CliRunner()
        self.tmp = tempfile.TemporaryDirectory()
        self.dir = self.tmp.name
        self.config = write_config(self.dir, datasets=[{"synthetic": small_synthetic()}], runs_per_setting=1)

    def tearDown(self):
        self.tmp.cleanup()

    def invoke(self, *args):
        return self.runner.invoke(cli, list(args))

    def test_version(self):
        result = self.invoke("--version")
        self.assertEqual(result.exit_code, 0)
        self.assertIn("0.1.0", result.output)

    def test_synth_then_features_from_manifest(self):
        data_dir = os.path.join(self.dir, "data")
        result = self.invoke("synth", "-c", self.config, "-o", data_dir, "-q")
        self.assertEqual(result.exit_code, 0, result.output)
        self.assertTrue(os.path.exists(os.path.join(data_dir, "small.csv")))
        manifest_config = write_config(self.dir, datasets=[{"manifest": "data/small.json"}])
        out = os.path.join(self.dir, "features")
        result = self.invoke("features", "-c", manifest_config, "-o", out, "-q")
        self.assertEqual(result.exit_code, 0, result.output)
        for domain in ("TD", "FD"):
            data = pandas.read_csv(os.path.join(out, "features_small_%s.csv" % domain))
            self.assertEqual(data.shape, (16, 7))
            self.assertEqual(data.columns[0], "AbsMean_%s_ch0" % domain)
            self.assertTrue(os.path.exists(os.path.join(out, "summary_small_%s.csv" % domain)))

    def test_features_missing_manifest(self):
        config = write_config(self.dir, datasets=[{"manifest": "nowhere.json"}])
        result = self.invoke("features", "-c", config, "-o", os.path.join(self.dir, "out"), "-q")
        self.assertEqual(result.exit_code, 2)

    def test_features_window_shorter_than_smoothing(self):
        config = write_config(self.dir, datasets=[{"synthetic": small_synthetic(window_length=8)}])
        result = self.invoke("features", "-c", config, "-o", os.path.join(self.dir, "out"), "-q")
        self.assertEqual(result.exit_code, 2)
        self.assertIn("shorter than the savgol window", result.output)

    def test_missing_config_file(self):
        result = self.invoke("experiment", "-c", os.path.join(self.dir, "absent.yml"), "-q")
        self.assertEqual(result.exit_code, 2)

    def test_invalid_config(self):
        config = write_config(self.dir, datasets=[{"synthetic": small_synthetic()}], runs_per_setting=0)
        result = self.invoke("experiment", "-c", config, "-q")
        self.assertEqual(result.exit_code, 2)

    def test_q1_then_q3_then_report(self):
        out = os.path.join(self.dir, "out")
        result = self.invoke("experiment", "-c", self.config, "-w", "q1", "-o", out, "-q")
        self.assertEqual(result.exit_code, 0, result.output)
        with open(os.path.join(out, "report.json")) as f:
            ledger = json.load(f)["ledger"]
        self.assertEqual(len(ledger), 36)
        result = self.invoke("experiment", "-c", self.config, "-w", "q3", "-o", out, "-q")
        self.assertEqual(result.exit_code, 0, result.output)
        with open(os.path.join(out, "report.json")) as f:
            data = json.load(f)
        experiments = [row["experiment"] for row in data["ledger"]]
        self.assertEqual((experiments.count("q1"), experiments.count("q3")), (36, 14))
        self.assertTrue(any("OPTICS" in note for note in data["notes"]))
        for name in ("aggregate_q1.csv", "aggregate_q3.csv", "ranking_q1.csv", "ranking_q3.csv", "generalization_q2.csv", "timings.csv"):
            self.assertTrue(os.path.exists(os.path.join(out, name)), name)
        result = self.invoke("report", "-o", out, "-w", "q3")
        self.assertEqual(result.exit_code, 0, result.output)
        self.assertIn("Average purity, q3", result.output)

    def test_followup_without_q1(self):
        result = self.invoke("experiment", "-c", self.config, "-w", "q4", "-o", os.path.join(self.dir, "out"), "-q")
        self.assertEqual(result.exit_code, 2)

    def test_q2_without_q1(self):
        result = self.invoke("experiment", "-c", self.config, "-w", "q2", "-o", os.path.join(self.dir, "out"), "-q")
        self.assertEqual(result.exit_code, 2)

    def test_identical_runs_write_identical_reports(self):
        reports = []
        for name in ("a", "b"):
            out = os.path.join(self.dir, name)
            result = self.invoke("experiment", "-c", self.config, "-w", "q1", "-o", out, "-q")
            self.assertEqual(result.exit_code, 0, result.output)
            with open(os.path.join(out, "report.json"), "rb") as f:
                reports.append(f.read())
        self.assertEqual(reports[0], reports[1])

    def test_seed_salt_changes_seeds(self):
        out = os.path.join(self.dir, "salted")
        result = self.invoke("experiment", "-c", self.config, "-w", "q1", "-o", out, "-s", "other", "-q")
        self.assertEqual(result.exit_code, 0, result.output)
        with open(os.path.join(out, "report.json")) as f:
            ledger = json.load(f)["ledger"]
        self.assertTrue(all(row["seed_salt"] == "other" for row in ledger))

    def test_all_trials_failed(self):
        # windows shorter than the smoothing window fail every trial
        config = write_config(self.dir, datasets=[{"synthetic": small_synthetic(window_length=8)}], runs_per_setting=1)
        result = self.invoke("experiment", "-c", config, "-w", "q1", "-o", os.path.join(self.dir, "out"), "-q")
        self.assertEqual(result.exit_code, 1)

    def test_report_missing(self):
        result = self.invoke("report", "-o", os.path.join(self.dir, "empty"), "-q")
        self.assertEqual(result.exit_code, 2)
