import json
import time
import hashlib
import logging
from typing import List, Union, Optional, Dict

from .catalog import DatasetCatalog
from .features import FeatureRef
from .reduce import pca_fit, pca_transform
from .purity import purity
from .clustering import clusteringFunctionDict, ALGORITHM_TAGS
from .dataio import round_half_up
from .descriptors.int_descriptor import IntDescriptor
from .descriptors.string_descriptor import StringDescriptor
from .exceptions import InvalidParameterError
from .config import config

EXPERIMENTS = ("q1", "q2", "q3", "q4", "q5")

CLUSTER_COUNT_RULES = ("Conditions", "Scaled", "ElbowMethod")

SCALED_FACTORS = (1.0, 1.25, 1.5, 1.75, 2.0)

class ClusterCountRule:
    """How the number of clusters derives from the number of operating conditions n of a dataset

    - Conditions: n
    - Scaled: round half-up of factor * n
    - ElbowMethod: elbow of the K-means WCSS curve for k = 1..2n+2
    """

    kind = StringDescriptor(CLUSTER_COUNT_RULES)

    def __init__(
        self,
        kind : str = "Conditions",
        factor : float = None
        ):
        """
        Raises:
        -------
        InvalidParameterError : if a Scaled rule has no factor or the factor is not one of SCALED_FACTORS
        """
        self.kind = kind
        if self.kind == "Scaled":
            if factor is None or float(factor) not in SCALED_FACTORS:
                raise InvalidParameterError("Scaled factor must be one of %s, got %s" % (", ".join(str(f) for f in SCALED_FACTORS), factor))
            self.factor = float(factor)
        else:
            self.factor = None

    @classmethod
    def fromString(
        cls,
        value : Union[str,"ClusterCountRule"]
        ) -> "ClusterCountRule":
        """Parse "n", "1.5n", "elbow" (the labels returned by str())"""
        if isinstance(value, ClusterCountRule):
            return value
        value = str(value).strip()
        if value in ("n", "Conditions"):
            return cls("Conditions")
        if value in ("elbow", "ElbowMethod"):
            return cls("ElbowMethod")
        if value.endswith("n"):
            try:
                return cls("Scaled", float(value[:-1]))
            except ValueError:
                pass
        raise InvalidParameterError("Invalid cluster count rule %s" % value)

    def __str__(self) -> str:
        if self.kind == "Conditions":
            return "n"
        if self.kind == "ElbowMethod":
            return "elbow"
        return "%gn" % self.factor

    def __repr__(self) -> str:
        return "ClusterCountRule(%s)" % str(self)

    def __eq__(self, other) -> bool:
        return isinstance(other, ClusterCountRule) and str(self) == str(other)

    def __hash__(self) -> int:
        return hash(str(self))

    def resolve(
        self,
        num_conditions : int
        ) -> Optional[int]:
        """Cluster count for n conditions. None for ElbowMethod, which needs the data"""
        if self.kind == "Conditions":
            return num_conditions
        if self.kind == "Scaled":
            return round_half_up(self.factor * num_conditions)
        return None

class TrialSpec:
    """One clustering trial: dataset, algorithm, feature families, optional PCA and cluster count rule.

    The seed is a content hash of every other field plus a run-wide salt"""

    experiment = StringDescriptor(EXPERIMENTS)
    """Experiment the trial belongs to (q1..q5)"""

    dataset_id = StringDescriptor()

    algorithm_tag = StringDescriptor(ALGORITHM_TAGS)

    pca_components = IntDescriptor(min_value=1)
    """None for no PCA"""

    run_index = IntDescriptor(min_value=1)
    """1..runs_per_setting"""

    @property
    def features(self) -> List[FeatureRef]:
        return self._features

    @property
    def cluster_count_rule(self) -> ClusterCountRule:
        return self._cluster_count_rule

    @property
    def feature_kinds(self) -> List[str]:
        return [f.kind for f in self._features]

    @property
    def domain(self) -> Optional[str]:
        """Common domain of the features, None when mixed"""
        domains = {f.domain for f in self._features}
        return domains.pop() if len(domains) == 1 else None

    @property
    def feature_set(self) -> str:
        """Feature families joined by +, e.g. AbsMean/TD+Std/FD"""
        return "+".join(str(f) for f in self._features)

    @property
    def seed(self) -> int:
        return self._seed

    @property
    def key(self) -> str:
        """Short readable identifier"""
        return "%s:%s:%s:%s:pca=%s:k=%s:run=%i" % (self.experiment, self.dataset_id, self.algorithm_tag, self.feature_set, self.pca_components, self._cluster_count_rule, self.run_index)

    def __init__(
        self,
        experiment : str,
        dataset_id : str,
        algorithm_tag : str,
        features : List[Union[FeatureRef,str]],
        pca_components : int = None,
        cluster_count_rule : Union[ClusterCountRule,str] = "n",
        run_index : int = 1,
        seed_salt : str = ""
        ):
        """
        Parameters:
        -----------
        experiment : str
            q1..q5

        dataset_id : str
            Name of a dataset of the catalog

        algorithm_tag : str
            KMeans, GMM or OPTICS

        features : list of FeatureRef or str (Kind/Domain)
            At least one feature family

        pca_components : int = None

        cluster_count_rule : ClusterCountRule or str = "n"

        run_index : int = 1

        seed_salt : str = ""
            Mixed into the seed hash
        """
        self.experiment = experiment
        self.dataset_id = dataset_id
        self.algorithm_tag = algorithm_tag
        if not len(features):
            raise InvalidParameterError("TrialSpec: at least one feature is required")
        self._features = [FeatureRef.fromString(f) for f in features]
        self.pca_components = pca_components
        self._cluster_count_rule = ClusterCountRule.fromString(cluster_count_rule)
        self.run_index = run_index
        self.seed_salt = str(seed_salt)
        self._seed = self.contentSeed()

    def _identity(self) -> dict:
        return {
            "experiment": self.experiment,
            "dataset_id": self.dataset_id,
            "algorithm_tag": self.algorithm_tag,
            "features": [str(f) for f in self._features],
            "pca_components": self.pca_components,
            "cluster_count_rule": str(self._cluster_count_rule),
            "run_index": self.run_index
        }

    def contentSeed(self) -> int:
        """First 60 bits of the sha256 of the canonical json of the identifying fields and the salt"""
        canonical = json.dumps(self._identity(), sort_keys=True, separators=(",", ":"))
        digest = hashlib.sha256((canonical + "|" + self.seed_salt).encode("utf-8")).hexdigest()
        return int(digest[:15], 16)

    def __eq__(self, other) -> bool:
        return isinstance(other, TrialSpec) and self.toDict() == other.toDict()

    def __repr__(self) -> str:
        return "TrialSpec(%s)" % self.key

    def toDict(self) -> dict:
        return {
            **self._identity(),
            "seed_salt": self.seed_salt,
            "seed": self._seed
        }

    @classmethod
    def fromDict(
        cls,
        params : dict
        ) -> "TrialSpec":
        return cls(
            params["experiment"],
            params["dataset_id"],
            params["algorithm_tag"],
            params["features"],
            params.get("pca_components"),
            params.get("cluster_count_rule", "n"),
            params.get("run_index", 1),
            params.get("seed_salt", ""))

class TrialResult:
    """Outcome of run_trial. Failed trials have status "failed", an error message and purity NaN"""

    status = StringDescriptor(("ok", "failed"))

    def __init__(
        self,
        spec : TrialSpec,
        status : str = "ok",
        purity : float = float("nan"),
        effective_clusters : int = None,
        noise_fraction : float = None,
        wall_time : float = 0.0,
        num_clusters_requested : int = None,
        pca_effective_components : int = None,
        model_summary : dict = None,
        error : str = None
        ):
        self.spec = spec
        self.status = status
        self.purity = float(purity) if purity is not None else float("nan")
        """Fraction in [0, 1], NaN when failed"""
        self.effective_clusters = effective_clusters
        """Distinct non-noise clusters in the assignment"""
        self.noise_fraction = noise_fraction
        """Fraction of NOISE points (OPTICS only, else 0)"""
        self.wall_time = float(wall_time)
        """Seconds. Not part of report.json"""
        self.num_clusters_requested = num_clusters_requested
        """Resolved cluster count, None for OPTICS"""
        self.pca_effective_components = pca_effective_components
        """PCA components actually used after clamping to the feature count"""
        self.model_summary = model_summary if model_summary is not None else {}
        self.error = error

    @property
    def ok(self) -> bool:
        return self.status == "ok"

    def toDict(
        self,
        include_wall_time : bool = False
        ) -> dict:
        result = {
            **self.spec.toDict(),
            "status": self.status,
            "purity": self.purity if self.ok else None,
            "effective_clusters": self.effective_clusters,
            "noise_fraction": self.noise_fraction,
            "num_clusters_requested": self.num_clusters_requested,
            "pca_effective_components": self.pca_effective_components,
            "model_summary": self.model_summary,
            "error": self.error
        }
        if include_wall_time:
            result["wall_time"] = self.wall_time
        return result

    @classmethod
    def fromDict(
        cls,
        params : dict
        ) -> "TrialResult":
        purity_value = params.get("purity")
        return cls(
            TrialSpec.fromDict(params),
            params.get("status", "ok"),
            purity_value if purity_value is not None else float("nan"),
            params.get("effective_clusters"),
            params.get("noise_fraction"),
            params.get("wall_time", 0.0),
            params.get("num_clusters_requested"),
            params.get("pca_effective_components"),
            params.get("model_summary"),
            params.get("error"))

def default_algorithm_parameters() -> Dict[str,dict]:
    """Clustering parameters per algorithm tag from the configuration"""
    return {
        "KMeans": dict(config["kmeans"]),
        "GMM": dict(config["gmm"]),
        "OPTICS": dict(config["optics"])
    }

def run_trial(
    spec : TrialSpec,
    catalog : DatasetCatalog,
    algorithm_parameters : Dict[str,dict] = None,
    elbow_extra_clusters : int = None
    ) -> TrialResult:
    """
    Execute a trial: features of the preprocessed dataset, optional PCA, cluster count resolution, fit and purity

    Any failure is caught, logged and returned as a failed TrialResult

    Parameters:
    -----------
    spec : TrialSpec

    catalog : DatasetCatalog
        Must contain spec.dataset_id

    algorithm_parameters : dict = None
        Parameters per algorithm tag. Defaults to the configuration

    elbow_extra_clusters : int = None
        The elbow search runs k = 1..2n+elbow_extra_clusters. Defaults to the configuration (2)

    Returns:
    --------
    TrialResult
    """
    algorithm_parameters = algorithm_parameters if algorithm_parameters is not None else default_algorithm_parameters()
    elbow_extra_clusters = elbow_extra_clusters if elbow_extra_clusters is not None else config["grid"]["elbow_extra_clusters"]
    start = time.perf_counter()
    try:
        features = catalog.combinedFeatures(spec.dataset_id, spec.features)
        pca_effective = None
        if spec.pca_components is not None:
            pca_effective = min(spec.pca_components, features.num_columns)
            if pca_effective < spec.pca_components:
                logging.warning("Trial %s: %i PCA components requested but only %i features available, clamped" % (spec.key, spec.pca_components, features.num_columns))
            features = pca_transform(pca_fit(features, pca_effective), features)
        function = clusteringFunctionDict[spec.algorithm_tag](algorithm_parameters.get(spec.algorithm_tag, {}))
        num_clusters = None
        if function.uses_cluster_count:
            n = catalog.numClasses(spec.dataset_id)
            num_clusters = spec.cluster_count_rule.resolve(n)
            if num_clusters is None:
                # the elbow curve is a K-means WCSS curve for every algorithm
                kmeans = clusteringFunctionDict["KMeans"](algorithm_parameters.get("KMeans", {}))
                num_clusters = kmeans.selectClusterCount(features.values, 2 * n + elbow_extra_clusters, spec.seed)
                logging.debug("Trial %s: elbow selected k=%i" % (spec.key, num_clusters))
        model, assignment = function.run(features.values, num_clusters, spec.seed)
        result = TrialResult(
            spec,
            "ok",
            purity(assignment, features.labels),
            assignment.effective_clusters,
            assignment.noise_fraction,
            time.perf_counter() - start,
            num_clusters,
            pca_effective,
            model.summary())
        logging.debug("Trial %s: purity %.4f" % (spec.key, result.purity))
        return result
    except Exception as e:
        logging.error("Trial %s (seed %i) failed: %s" % (spec.key, spec.seed, str(e)))
        return TrialResult(
            spec,
            "failed",
            wall_time = time.perf_counter() - start,
            error = "%s: %s" % (type(e).__name__, str(e)))
