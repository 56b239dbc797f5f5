import os
import copy
import logging
import yaml
from typing import List, Union, Dict

from .dataio import DatasetManifest, SyntheticSpec, WindowedDataset, load_dataset, generate_synthetic, synthetic_suite
from .preprocess import SavGolParams
from .catalog import DatasetCatalog
from .grid import GridConfig
from .trial import EXPERIMENTS
from .descriptors.int_descriptor import IntDescriptor
from .descriptors.string_descriptor import StringDescriptor
from .validation import getSchemaAndValidate
from .exceptions import InvalidParameterError, DatasetFileNotFoundError
from .types.run_config_dict import RunConfigDict, DatasetEntryDict, SyntheticSuiteDict
from .config import config, yamlLoader

class RunConfig:
    """Datasets and settings of a run, read from a yaml or json file and overridable from the command line

    Unset sections (preprocess, kmeans, gmm, optics) take the packaged defaults"""

    experiment = StringDescriptor(EXPERIMENTS + ("all",))
    """q1..q5 or all"""

    runs_per_setting = IntDescriptor(min_value=1)

    output_dir = StringDescriptor()

    seed_salt = StringDescriptor()

    jobs = IntDescriptor(min_value=1)
    """Parallel worker processes"""

    verbosity = StringDescriptor(("quiet", "normal", "verbose"))

    def __init__(
        self,
        datasets : List[DatasetEntryDict] = [],
        synthetic_suite : Union[bool,SyntheticSuiteDict] = False,
        standardize : bool = None,
        experiment : str = "all",
        runs_per_setting : int = None,
        output_dir : str = "output",
        seed_salt : str = "",
        jobs : int = 1,
        verbosity : str = "normal",
        preprocess : dict = None,
        kmeans : dict = None,
        gmm : dict = None,
        optics : dict = None,
        base_dir : str = None
        ):
        """
        Parameters:
        -----------
        datasets : list of dict
            Each item holds either "manifest" (path of a DatasetManifest file, relative to base_dir) or "synthetic" (SyntheticSpec)

        synthetic_suite : bool or dict = False
            Append the three synthetic stand-in datasets. A dict may set windows_per_class and seed

        standardize : bool = None
            Standardize feature columns. Defaults to the configuration (true)

        experiment : str = "all"

        runs_per_setting : int = None
            Defaults to the configuration (3)

        output_dir : str = "output"

        seed_salt : str = ""

        jobs : int = 1

        verbosity : str = "normal"
            quiet, normal or verbose

        preprocess : dict = None
            savgol_window, savgol_order, normalize_scope

        kmeans : dict = None
            max_iter, tol

        gmm : dict = None
            max_iter, tol, covariance_floor

        optics : dict = None
            min_samples, max_eps, eps_percentile

        base_dir : str = None
            Directory relative manifest paths are resolved against. Defaults to the working directory

        Raises:
        -------
        jsonschema.exceptions.ValidationError : if the configuration does not match the RunConfig schema

        InvalidParameterError : if no dataset is configured
        """
        getSchemaAndValidate(
            dict(
                datasets = list(datasets),
                synthetic_suite = synthetic_suite,
                standardize = standardize,
                experiment = experiment,
                runs_per_setting = runs_per_setting,
                output_dir = output_dir,
                seed_salt = seed_salt,
                jobs = jobs,
                verbosity = verbosity,
                preprocess = preprocess,
                kmeans = kmeans,
                gmm = gmm,
                optics = optics),
            "RunConfig")
        self.datasets = copy.deepcopy(list(datasets))
        """Dataset entries"""
        self.synthetic_suite = synthetic_suite
        self.standardize = bool(standardize) if standardize is not None else bool(config["features"]["standardize"])
        self.experiment = experiment
        self.runs_per_setting = runs_per_setting if runs_per_setting is not None else config["grid"]["runs_per_setting"]
        self.output_dir = output_dir
        self.seed_salt = seed_salt
        self.jobs = jobs
        self.verbosity = verbosity
        self.preprocess = dict(config["preprocess"], **(preprocess or {}))
        self.kmeans = dict(config["kmeans"], **(kmeans or {}))
        self.gmm = dict(config["gmm"], **(gmm or {}))
        self.optics = dict(config["optics"], **(optics or {}))
        self.base_dir = base_dir if base_dir is not None else os.getcwd()
        if not len(self.datasets) and not self.synthetic_suite:
            raise InvalidParameterError("At least one dataset must be configured (datasets or synthetic_suite)")

    @classmethod
    def load(
        cls,
        path : str
        ) -> "RunConfig":
        """Read a yaml or json run configuration. Relative manifest paths are resolved against its directory"""
        if not os.path.exists(path):
            raise DatasetFileNotFoundError(path)
        with open(path) as config_file:
            params = yaml.load(config_file, yamlLoader())
        if not isinstance(params, dict):
            raise InvalidParameterError("Invalid run configuration %s: expected a mapping" % path)
        logging.debug("Run configuration read from %s" % path)
        return cls(**params, base_dir=os.path.dirname(os.path.abspath(path)))

    def override(self, **kwargs) -> "RunConfig":
        """Set the given fields, skipping None values. Keys savgol_window and savgol_order go to the preprocess section"""
        for key, value in kwargs.items():
            if value is None:
                continue
            if key in ("savgol_window", "savgol_order", "normalize_scope"):
                self.preprocess[key] = value
            elif key in ("experiment", "runs_per_setting", "output_dir", "seed_salt", "jobs", "verbosity"):
                setattr(self, key, value)
            else:
                raise InvalidParameterError("Unknown run configuration field %s" % key)
        return self

    @property
    def experiments(self) -> List[str]:
        return list(EXPERIMENTS) if self.experiment == "all" else [self.experiment]

    def syntheticSpecs(self) -> List[SyntheticSpec]:
        """Synthetic specs of the configuration: inline ones first, then the suite"""
        specs = [SyntheticSpec.fromDict(entry["synthetic"]) for entry in self.datasets if "synthetic" in entry]
        if self.synthetic_suite:
            options = self.synthetic_suite if isinstance(self.synthetic_suite, dict) else {}
            specs.extend(synthetic_suite(**options))
        return specs

    def loadDatasets(self) -> List[WindowedDataset]:
        """
        Raw datasets in configuration order: entries of datasets, then the synthetic suite

        Raises:
        -------
        DatasetError : if a manifest or its csv file can't be read
        """
        result = []
        for entry in self.datasets:
            if "manifest" in entry:
                path = entry["manifest"] if os.path.isabs(entry["manifest"]) else os.path.join(self.base_dir, entry["manifest"])
                result.append(load_dataset(DatasetManifest.load(path)))
            else:
                result.append(generate_synthetic(SyntheticSpec.fromDict(entry["synthetic"])))
        if self.synthetic_suite:
            options = self.synthetic_suite if isinstance(self.synthetic_suite, dict) else {}
            result.extend(generate_synthetic(spec) for spec in synthetic_suite(**options))
        return result

    def savgolParams(self) -> SavGolParams:
        return SavGolParams(self.preprocess["savgol_window"], self.preprocess["savgol_order"])

    def algorithmParameters(self) -> Dict[str,dict]:
        """Clustering parameters by algorithm tag"""
        return {
            "KMeans": dict(self.kmeans),
            "GMM": dict(self.gmm),
            "OPTICS": dict(self.optics)
        }

    def buildCatalog(self) -> DatasetCatalog:
        return DatasetCatalog(
            self.loadDatasets(),
            self.savgolParams(),
            self.preprocess["normalize_scope"],
            self.standardize)

    def gridConfig(
        self,
        dataset_ids : List[str]
        ) -> GridConfig:
        return GridConfig(
            dataset_ids,
            self.runs_per_setting,
            config["grid"]["scaled_factors"],
            config["grid"]["pca_components"],
            self.seed_salt)

    def toDict(self) -> RunConfigDict:
        return {
            "datasets": copy.deepcopy(self.datasets),
            "synthetic_suite": self.synthetic_suite,
            "standardize": self.standardize,
            "experiment": self.experiment,
            "runs_per_setting": self.runs_per_setting,
            "output_dir": self.output_dir,
            "seed_salt": self.seed_salt,
            "jobs": self.jobs,
            "verbosity": self.verbosity,
            "preprocess": dict(self.preprocess),
            "kmeans": dict(self.kmeans),
            "gmm": dict(self.gmm),
            "optics": dict(self.optics)
        }

    def snapshot(self) -> dict:
        """toDict without the fields that don't affect results (output_dir, jobs, verbosity)"""
        return {k: v for k, v in self.toDict().items() if k not in ("output_dir", "jobs", "verbosity")}
