import os
import json
import math
import logging
import numpy as np
import pandas
from typing import List, Dict, Any

from .trial import TrialResult, EXPERIMENTS
from .grid import ALGORITHM_SET_NOTE, ELBOW_NOTE

LEDGER_COLUMNS = [
    "experiment",
    "dataset",
    "algorithm",
    "feature_set",
    "domain",
    "cluster_rule",
    "pca",
    "run_index",
    "seed",
    "status",
    "purity",
    "effective_clusters",
    "noise_fraction",
    "num_clusters_requested",
    "pca_effective_components",
    "error"
]

AGGREGATE_KEYS = ["experiment", "algorithm", "feature_set", "domain", "dataset", "cluster_rule", "pca"]

RANKING_VARIABLES = {
    "q1": "feature_set",
    "q3": "feature_set",
    "q4": "pca",
    "q5": "cluster_rule"
}
"""Experiment variable ranked by each headline table"""

def _ledgerRow(result : TrialResult) -> dict:
    spec = result.spec
    return {
        "experiment": spec.experiment,
        "dataset": spec.dataset_id,
        "algorithm": spec.algorithm_tag,
        "feature_set": spec.feature_set,
        "domain": spec.domain if spec.domain is not None else "mixed",
        "cluster_rule": str(spec.cluster_count_rule),
        "pca": str(spec.pca_components) if spec.pca_components is not None else "none",
        "run_index": spec.run_index,
        "seed": spec.seed,
        "status": result.status,
        "purity": result.purity,
        "effective_clusters": result.effective_clusters,
        "noise_fraction": result.noise_fraction,
        "num_clusters_requested": result.num_clusters_requested,
        "pca_effective_components": result.pca_effective_components,
        "error": result.error
    }

def _countFailed(status : pandas.Series) -> int:
    return int((status == "failed").sum())

def _populationStd(values : pandas.Series) -> float:
    return values.std(ddof=0)

def _summarize(
    rows : pandas.DataFrame,
    keys : List[str]
    ) -> pandas.DataFrame:
    """mean, std (population), min, max of purity per group, NaN purities of failed trials skipped"""
    columns = keys + ["mean", "std", "min", "max", "runs", "failed"]
    if not len(rows):
        return pandas.DataFrame(columns=columns)
    return rows.groupby(keys, sort=False).agg(
        mean = ("purity", "mean"),
        std = ("purity", _populationStd),
        min = ("purity", "min"),
        max = ("purity", "max"),
        runs = ("purity", "size"),
        failed = ("status", _countFailed)
    ).reset_index()[columns]

def ranking_table(
    ledger : pandas.DataFrame,
    experiment : str
    ) -> pandas.DataFrame:
    """
    Average purity per value of the experiment variable (feature set, PCA setting or cluster rule) per algorithm, with the rank of each value within its algorithm (1 = best)
    """
    variable = RANKING_VARIABLES[experiment]
    table = _summarize(ledger[ledger["experiment"] == experiment], ["algorithm", variable])
    if not len(table):
        return pandas.DataFrame(columns=["algorithm", variable, "mean", "std", "runs", "failed", "rank"])
    table = table.drop(columns=["min", "max"])
    table["rank"] = table.groupby("algorithm")["mean"].rank(ascending=False, method="min")
    return table.sort_values(["algorithm", "rank", variable], kind="stable").reset_index(drop=True)

def generalization_table(ledger : pandas.DataFrame) -> pandas.DataFrame:
    """
    Mean q1 purity of every (algorithm, feature) per dataset, the rank of the feature within its algorithm on each dataset, and the spread (max - min) of those ranks
    """
    rows = ledger[(ledger["experiment"] == "q1")]
    if not len(rows):
        return pandas.DataFrame(columns=["algorithm", "feature_set", "rank_spread"])
    datasets = list(dict.fromkeys(rows["dataset"]))
    table = rows.groupby(["algorithm", "feature_set", "dataset"], sort=False)["purity"].mean().unstack("dataset")[datasets]
    ranks = table.groupby(level="algorithm").rank(ascending=False, method="min")
    ranks.columns = ["rank_%s" % d for d in datasets]
    table = pandas.concat([table, ranks], axis=1)
    table["rank_spread"] = ranks.max(axis=1) - ranks.min(axis=1)
    return table.reset_index().sort_values(["algorithm", "feature_set"], kind="stable").reset_index(drop=True)

def _jsonSafe(value : Any) -> Any:
    """Plain python values for json: NaN becomes None, infinities become "inf"/"-inf" """
    if isinstance(value, dict):
        return {str(k): _jsonSafe(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonSafe(v) for v in value]
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        if math.isnan(value):
            return None
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return value
    if value is pandas.NA or value is pandas.NaT:
        return None
    return value

def _records(data : pandas.DataFrame) -> List[dict]:
    return _jsonSafe(data.to_dict(orient="records"))

class GridReport:
    """Trial ledger of a run with its aggregates, ranking tables, notes and provenance"""

    @property
    def results(self) -> List[TrialResult]:
        """Trial results in grid order"""
        return self._results

    @property
    def ledger(self) -> pandas.DataFrame:
        """One row per trial, columns LEDGER_COLUMNS"""
        return self._ledger

    @property
    def aggregate(self) -> pandas.DataFrame:
        """Purity statistics per (experiment, algorithm, feature_set, domain, dataset, cluster_rule, pca)"""
        return self._aggregate

    @property
    def rankings(self) -> Dict[str,pandas.DataFrame]:
        """Headline tables by experiment (q1, q3, q4, q5) plus the q2 generalization table"""
        return self._rankings

    @property
    def experiments(self) -> List[str]:
        """Experiments present in the ledger"""
        present = set(self._ledger["experiment"])
        return [e for e in EXPERIMENTS if e in present]

    def __init__(
        self,
        results : List[TrialResult],
        notes : List[str] = None,
        provenance : dict = None
        ):
        self._results = list(results)
        self.notes = list(notes) if notes is not None else []
        """Interpretation choices and discrepancies, written to the report header"""
        self.provenance = dict(provenance) if provenance is not None else {}
        """Configuration snapshot, pinned defaults and version"""
        self._ledger = pandas.DataFrame([_ledgerRow(r) for r in self._results], columns=LEDGER_COLUMNS)
        self._aggregate = _summarize(self._ledger, AGGREGATE_KEYS)
        self._rankings = {}
        for experiment in self.experiments:
            if experiment in RANKING_VARIABLES:
                self._rankings[experiment] = ranking_table(self._ledger, experiment)
            if experiment == "q1":
                self._rankings["q2"] = generalization_table(self._ledger)

    def aggregateOf(
        self,
        experiment : str
        ) -> pandas.DataFrame:
        return self._aggregate[self._aggregate["experiment"] == experiment].reset_index(drop=True)

    def headlineTables(self) -> Dict[str,pandas.DataFrame]:
        """Average purity pivoted as variable x algorithm, per experiment"""
        tables = {}
        for experiment, table in self._rankings.items():
            if experiment == "q2" or not len(table):
                continue
            variable = RANKING_VARIABLES[experiment]
            tables[experiment] = table.pivot(index=variable, columns="algorithm", values="mean")
        return tables

    def toDict(self) -> dict:
        """Report content without wall times, so equal runs serialize identically"""
        return _jsonSafe({
            "provenance": self.provenance,
            "notes": self.notes,
            "ledger": [r.toDict() for r in self._results],
            "aggregates": _records(self._aggregate),
            "rankings": {k: _records(v) for k, v in self._rankings.items()}
        })

    def toJson(self) -> str:
        return json.dumps(self.toDict(), indent=2, ensure_ascii=False, allow_nan=False)

    def save(
        self,
        output_dir : str,
        timings : bool = True
        ) -> List[str]:
        """
        Write report.json, aggregate_<experiment>.csv and ranking_<experiment>.csv (q2: generalization) and, if timings, timings.csv with the wall time of every trial

        Returns:
        --------
        list of str : written paths
        """
        os.makedirs(output_dir, exist_ok=True)
        written = []
        path = os.path.join(output_dir, "report.json")
        with open(path, "w", encoding="utf-8") as f:
            f.write(self.toJson())
            f.write("\n")
        written.append(path)
        for experiment in self.experiments:
            path = os.path.join(output_dir, "aggregate_%s.csv" % experiment)
            self.aggregateOf(experiment).to_csv(path, index=False)
            written.append(path)
        for experiment, table in self._rankings.items():
            path = os.path.join(output_dir, ("generalization_%s.csv" if experiment == "q2" else "ranking_%s.csv") % experiment)
            table.to_csv(path, index=False)
            written.append(path)
        if timings and len(self._results):
            path = os.path.join(output_dir, "timings.csv")
            timing = self._ledger[["experiment", "dataset", "algorithm", "feature_set", "cluster_rule", "pca", "run_index", "status"]].copy()
            timing["wall_time"] = [r.wall_time for r in self._results]
            timing.to_csv(path, index=False)
            written.append(path)
        logging.info("Report saved to %s" % output_dir)
        return written

    @classmethod
    def load(
        cls,
        path : str
        ) -> "GridReport":
        """Rebuild a report from report.json (a file or the directory holding it)"""
        if os.path.isdir(path):
            path = os.path.join(path, "report.json")
        with open(path, encoding="utf-8") as f:
            data = json.load(f)
        return cls(
            [TrialResult.fromDict(r) for r in data.get("ledger", [])],
            data.get("notes"),
            data.get("provenance"))

def merge_results(
    previous : List[TrialResult],
    current : List[TrialResult]
    ) -> List[TrialResult]:
    """Replace the experiments of current in previous, ordered by experiment (grid order within each)"""
    replaced = {r.spec.experiment for r in current}
    kept = [r for r in previous if r.spec.experiment not in replaced]
    merged = kept + list(current)
    return sorted(merged, key=lambda r: EXPERIMENTS.index(r.spec.experiment))

def aggregate_report(
    results : List[TrialResult],
    notes : List[str] = None,
    provenance : dict = None
    ) -> GridReport:
    """
    Build the GridReport of a list of trial results

    Failed trials count in "runs" and "failed" but not in the purity statistics. Notes on the algorithm set of q3-q5 and the cluster rules of q5 are added when those experiments are present

    Parameters:
    -----------
    results : list of TrialResult

    notes : list of str = None

    provenance : dict = None

    Returns:
    --------
    GridReport
    """
    notes = list(notes) if notes is not None else []
    experiments = {r.spec.experiment for r in results}
    if experiments & {"q3", "q4", "q5"} and ALGORITHM_SET_NOTE not in notes:
        notes.append(ALGORITHM_SET_NOTE)
    if "q5" in experiments and ELBOW_NOTE not in notes:
        notes.append(ELBOW_NOTE)
    for note in notes:
        logging.info("Note: %s" % note)
    return GridReport(results, notes, provenance)
