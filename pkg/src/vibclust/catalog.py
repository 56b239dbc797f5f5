import logging
from typing import Dict, List, Tuple, Union

from .dataio import WindowedDataset
from .preprocess import SavGolParams, preprocess_pipeline, NORMALIZE_SCOPES
from .features import FeatureRef, FeatureMatrix, extract_features, combine_features
from .descriptors.string_descriptor import StringDescriptor
from .exceptions import InvalidParameterError

class DatasetCatalog:
    """Datasets of a run, addressed by name, with their preprocessing settings.

    Preprocessed datasets and single feature families are computed on first request and cached. Column standardization is applied per column, so a combination of cached families equals the extraction of all of them at once"""

    normalize_scope = StringDescriptor(NORMALIZE_SCOPES)
    """Normalization scope of preprocess_pipeline"""

    @property
    def dataset_ids(self) -> List[str]:
        """Dataset names in configuration order"""
        return list(self._datasets.keys())

    @property
    def savgol(self) -> SavGolParams:
        return self._savgol

    def __init__(
        self,
        datasets : List[WindowedDataset],
        savgol : SavGolParams = None,
        normalize_scope : str = "dataset",
        standardize : bool = True
        ):
        """
        Parameters:
        -----------
        datasets : list of WindowedDataset
            Raw (not preprocessed) datasets. Names must be unique

        savgol : SavGolParams = None
            Defaults to window 9, order 7

        normalize_scope : str = "dataset"
            "window" or "dataset"

        standardize : bool = True
            Standardize feature columns

        Raises:
        -------
        InvalidParameterError : if there are no datasets or names repeat
        """
        if not len(datasets):
            raise InvalidParameterError("At least one dataset must be configured")
        self._datasets : Dict[str,WindowedDataset] = {}
        for dataset in datasets:
            if dataset.name in self._datasets:
                raise InvalidParameterError("Duplicate dataset name %s" % dataset.name)
            self._datasets[dataset.name] = dataset
        self._savgol = savgol if savgol is not None else SavGolParams()
        self.normalize_scope = normalize_scope
        self.standardize = bool(standardize)
        """Standardize feature columns to zero mean and unit std"""
        self._preprocessed : Dict[str,WindowedDataset] = {}
        self._features : Dict[Tuple[str,str,str],FeatureMatrix] = {}

    def __contains__(self, dataset_id : str) -> bool:
        return dataset_id in self._datasets

    def __getstate__(self) -> dict:
        # workers rebuild their own caches
        state = self.__dict__.copy()
        state["_preprocessed"] = {}
        state["_features"] = {}
        return state

    def getDataset(
        self,
        dataset_id : str
        ) -> WindowedDataset:
        """
        Raises:
        -------
        KeyError : if dataset_id is not in the catalog
        """
        if dataset_id not in self._datasets:
            raise KeyError("Dataset %s not found in catalog. Available: %s" % (dataset_id, ", ".join(self._datasets.keys())))
        return self._datasets[dataset_id]

    def numClasses(
        self,
        dataset_id : str
        ) -> int:
        return self.getDataset(dataset_id).num_classes

    def preprocessed(
        self,
        dataset_id : str
        ) -> WindowedDataset:
        if dataset_id not in self._preprocessed:
            logging.debug("Preprocessing dataset %s (scope: %s, savgol: %s)" % (dataset_id, self.normalize_scope, self._savgol.toDict()))
            self._preprocessed[dataset_id] = preprocess_pipeline(self.getDataset(dataset_id), self._savgol, self.normalize_scope)
        return self._preprocessed[dataset_id]

    def featureMatrix(
        self,
        dataset_id : str,
        feature : Union[FeatureRef,str]
        ) -> FeatureMatrix:
        """Columns of one feature family (one per channel)"""
        feature = FeatureRef.fromString(feature)
        key = (dataset_id, feature.kind, feature.domain)
        if key not in self._features:
            self._features[key] = extract_features(self.preprocessed(dataset_id), [feature.kind], feature.domain, self.standardize)
        return self._features[key]

    def combinedFeatures(
        self,
        dataset_id : str,
        features : List[Union[FeatureRef,str]]
        ) -> FeatureMatrix:
        """Columns of every listed feature family, in the given order"""
        if not len(features):
            raise InvalidParameterError("At least one feature is required")
        matrices = [self.featureMatrix(dataset_id, f) for f in features]
        return matrices[0] if len(matrices) == 1 else combine_features(matrices)

    def toDict(self) -> dict:
        return {
            "datasets": [
                {
                    "name": d.name,
                    "num_windows": d.num_windows,
                    "num_channels": d.num_channels,
                    "window_length": d.window_length,
                    "num_classes": d.num_classes,
                    "sample_rate": d.sample_rate,
                    "class_counts": {str(c): n for c, n in d.classCounts().items()}
                } for d in self._datasets.values()
            ],
            "savgol": self._savgol.toDict(),
            "normalize_scope": self.normalize_scope,
            "standardize": self.standardize
        }
