import logging
import pandas
from concurrent.futures import ProcessPoolExecutor
from itertools import combinations
from typing import List, Dict, Union

from .catalog import DatasetCatalog
from .features import FeatureRef, FEATURE_KINDS, DOMAINS
from .trial import TrialSpec, TrialResult, ClusterCountRule, run_trial, EXPERIMENTS
from .descriptors.int_descriptor import IntDescriptor
from .descriptors.list_descriptor import ListDescriptor
from .exceptions import InvalidParameterError, MissingBaselineError
from .config import config

Q1_ALGORITHMS = ("KMeans", "OPTICS", "GMM")

FOLLOWUP_ALGORITHMS = ("KMeans", "GMM")
"""Algorithms of q3, q4 and q5. OPTICS is dropped after q1"""

COMBINATION_LABELS = ("A", "B", "C", "AB", "BC", "CA", "ABC")

ALGORITHM_SET_NOTE = "q3 names three algorithms but its trial count (126 = 2 x 7 x 3 x 3) only fits two; OPTICS is discarded after q1, so q3, q4 and q5 run KMeans and GMM"

ELBOW_NOTE = "q5 cluster count rules: elbow (k_max = 2n + 2), n, 1.25n, 1.5n, 1.75n and 2n, fractional counts rounded half-up"

class GridConfig:
    """Grid settings: datasets, repetitions and the value sets of the experiment variables"""

    runs_per_setting = IntDescriptor(min_value=1)
    """Repetitions of every setting, differing only by seed"""

    dataset_ids = ListDescriptor(str, min_length=1)

    scaled_factors = ListDescriptor(float)
    """Cluster count factors of q5 besides n"""

    pca_components = ListDescriptor(int)
    """PCA settings of q4 besides no PCA"""

    def __init__(
        self,
        dataset_ids : List[str],
        runs_per_setting : int = None,
        scaled_factors : List[float] = None,
        pca_components : List[int] = None,
        seed_salt : str = ""
        ):
        self.dataset_ids = dataset_ids
        self.runs_per_setting = runs_per_setting if runs_per_setting is not None else config["grid"]["runs_per_setting"]
        self.scaled_factors = scaled_factors if scaled_factors is not None else config["grid"]["scaled_factors"]
        self.pca_components = pca_components if pca_components is not None else config["grid"]["pca_components"]
        self.seed_salt = str(seed_salt) if seed_salt is not None else ""
        """Mixed into every trial seed"""

    def toDict(self) -> dict:
        return {
            "dataset_ids": self.dataset_ids,
            "runs_per_setting": self.runs_per_setting,
            "scaled_factors": self.scaled_factors,
            "pca_components": self.pca_components,
            "seed_salt": self.seed_salt
        }

def top_features(
    ledger : pandas.DataFrame,
    algorithm_tag : str,
    count : int = 3
    ) -> List[FeatureRef]:
    """
    Best single feature families of an algorithm in q1

    Ranked by mean purity over datasets and runs (failed trials skipped), ties broken alphabetically on Kind/Domain

    Parameters:
    -----------
    ledger : pandas.DataFrame
        Trial ledger with columns experiment, algorithm, feature_set, status, purity

    algorithm_tag : str

    count : int = 3

    Returns:
    --------
    list of FeatureRef, best first

    Raises:
    -------
    MissingBaselineError : if the ledger holds fewer than count successful q1 feature families for the algorithm
    """
    if ledger is None or not len(ledger):
        raise MissingBaselineError("No q1 results available. Run experiment q1 first")
    rows = ledger[(ledger["experiment"] == "q1") & (ledger["algorithm"] == algorithm_tag) & (ledger["status"] == "ok")]
    means = rows.groupby("feature_set")["purity"].mean()
    if len(means) < count:
        raise MissingBaselineError("q1 results hold %i successful feature(s) for %s, %i needed. Run experiment q1 first" % (len(means), algorithm_tag, count))
    ranking = sorted(means.items(), key=lambda item: (-item[1], item[0]))
    return [FeatureRef.fromString(name) for name, _ in ranking[:count]]

def feature_combinations(features : List[FeatureRef]) -> Dict[str,List[FeatureRef]]:
    """The seven combinations A, B, C, AB, BC, CA, ABC of three features, by label"""
    if len(features) != 3:
        raise InvalidParameterError("feature_combinations needs exactly 3 features, got %i" % len(features))
    named = dict(zip("ABC", features))
    return {label: [named[letter] for letter in label] for label in COMBINATION_LABELS}

def expand_grid(
    experiment : str,
    grid_config : GridConfig,
    baseline : pandas.DataFrame = None
    ) -> List[TrialSpec]:
    """
    Trial specs of an experiment, in a fixed order (outer to inner loop: algorithm, setting, dataset, run)

    - q1: {KMeans, OPTICS, GMM} x 6 features x 2 domains x datasets x runs
    - q2: no trials (a view of q1 results)
    - q3: {KMeans, GMM} x 7 combinations of the algorithm's top 3 q1 features x datasets x runs
    - q4: {KMeans, GMM} x {no PCA, 6, 4, 2, 1 components} on the ABC combination x datasets x runs
    - q5: {KMeans, GMM} x {elbow, n, 1.25n, 1.5n, 1.75n, 2n} on the ABC combination x datasets x runs

    Parameters:
    -----------
    experiment : str
        q1..q5

    grid_config : GridConfig

    baseline : pandas.DataFrame = None
        Ledger holding q1 results. Required by q3, q4 and q5

    Returns:
    --------
    list of TrialSpec

    Raises:
    -------
    InvalidParameterError : unknown experiment

    MissingBaselineError : q3, q4 or q5 without q1 results
    """
    experiment = str(experiment).lower()
    if experiment not in EXPERIMENTS:
        raise InvalidParameterError("Invalid experiment %s. Must be one of %s" % (experiment, ", ".join(EXPERIMENTS)))

    def specs(algorithm_tag, features, pca_components=None, rule="n"):
        return [
            TrialSpec(experiment, dataset_id, algorithm_tag, features, pca_components, rule, run_index, grid_config.seed_salt)
            for dataset_id in grid_config.dataset_ids
            for run_index in range(1, grid_config.runs_per_setting + 1)
        ]

    result = []
    if experiment == "q1":
        for algorithm_tag in Q1_ALGORITHMS:
            for kind in FEATURE_KINDS:
                for domain in DOMAINS:
                    result.extend(specs(algorithm_tag, [FeatureRef(kind, domain)]))
    elif experiment == "q2":
        pass
    else:
        for algorithm_tag in FOLLOWUP_ALGORITHMS:
            combos = feature_combinations(top_features(baseline, algorithm_tag))
            if experiment == "q3":
                for label in COMBINATION_LABELS:
                    result.extend(specs(algorithm_tag, combos[label]))
            elif experiment == "q4":
                for pca_components in [None] + list(grid_config.pca_components):
                    result.extend(specs(algorithm_tag, combos["ABC"], pca_components))
            else:
                rules = [ClusterCountRule("ElbowMethod"), ClusterCountRule("Conditions")] + [ClusterCountRule("Scaled", f) for f in grid_config.scaled_factors]
                for rule in rules:
                    result.extend(specs(algorithm_tag, combos["ABC"], rule=rule))
    logging.debug("expand_grid %s: %i trials" % (experiment, len(result)))
    return result

_worker_catalog = None
_worker_options = None

def _initWorker(
    catalog : DatasetCatalog,
    options : dict
    ) -> None:
    global _worker_catalog, _worker_options
    _worker_catalog = catalog
    _worker_options = options

def _runInWorker(spec : TrialSpec) -> TrialResult:
    return run_trial(spec, _worker_catalog, **_worker_options)

def run_grid(
    specs : List[TrialSpec],
    catalog : DatasetCatalog,
    jobs : int = 1,
    algorithm_parameters : Dict[str,dict] = None,
    elbow_extra_clusters : int = None
    ) -> List[TrialResult]:
    """
    Run every trial. Results come back in spec order whatever the number of workers

    Parameters:
    -----------
    specs : list of TrialSpec

    catalog : DatasetCatalog

    jobs : int = 1
        Parallel worker processes. 1 runs serially in this process

    algorithm_parameters : dict = None
        Parameters per algorithm tag, passed to run_trial

    elbow_extra_clusters : int = None
        Passed to run_trial

    Returns:
    --------
    list of TrialResult
    """
    if jobs < 1:
        raise InvalidParameterError("jobs must be >= 1, got %s" % jobs)
    options = {"algorithm_parameters": algorithm_parameters, "elbow_extra_clusters": elbow_extra_clusters}
    results = []
    if jobs == 1 or len(specs) <= 1:
        for i, spec in enumerate(specs):
            results.append(run_trial(spec, catalog, **options))
            if (i + 1) % 50 == 0:
                logging.info("Ran %i of %i trials" % (i + 1, len(specs)))
    else:
        with ProcessPoolExecutor(max_workers=jobs, initializer=_initWorker, initargs=(catalog, options)) as executor:
            for result in executor.map(_runInWorker, specs, chunksize=max(1, len(specs) // (4 * jobs))):
                results.append(result)
    failed = sum(1 for r in results if not r.ok)
    logging.info("Ran %i trials, %i failed" % (len(results), failed))
    return results

def baseline_ledger(results : Union[List[TrialResult],pandas.DataFrame]) -> pandas.DataFrame:
    """Ledger columns needed by top_features, from results or an existing ledger"""
    if isinstance(results, pandas.DataFrame):
        return results
    return pandas.DataFrame([{
        "experiment": r.spec.experiment,
        "algorithm": r.spec.algorithm_tag,
        "feature_set": r.spec.feature_set,
        "status": r.status,
        "purity": r.purity
    } for r in results], columns=["experiment", "algorithm", "feature_set", "status", "purity"])
