import logging
import numpy as np
import pandas
from typing import List, Union, Sequence, Callable, Dict

from .descriptors.string_descriptor import StringDescriptor
from .descriptors.int_descriptor import IntDescriptor
from .exceptions import InvalidParameterError, FeatureMismatchError
from .dataio import WindowedDataset
from .spectral import magnitude_spectra

FEATURE_KINDS = ("AbsMean", "AbsMedian", "Std", "IQR", "AbsSkew", "AbsKurt")
"""The six statistical features, in report order"""

DOMAINS = ("TD", "FD")
"""Time domain, frequency domain"""

DOMAIN_ALIASES = {
    "TD": "TD",
    "FD": "FD",
    "TimeDomain": "TD",
    "FrequencyDomain": "FD"
}

_TINY = np.finfo(float).tiny

def _scalar(value : np.ndarray) -> Union[float,np.ndarray]:
    return float(value) if np.ndim(value) == 0 else value

def domain_code(domain : str) -> str:
    """Map TD, FD, TimeDomain or FrequencyDomain to TD or FD"""
    if domain not in DOMAIN_ALIASES:
        raise InvalidParameterError("Invalid domain %s. Must be one of %s" % (domain, ", ".join(DOMAIN_ALIASES.keys())))
    return DOMAIN_ALIASES[domain]

def _checkLength(
    x : np.ndarray,
    axis : int,
    min_length : int,
    name : str
    ) -> None:
    if x.ndim == 0 or x.shape[axis] < min_length:
        raise InvalidParameterError("%s: input length must be >= %i" % (name, min_length))

def abs_mean(
    x : Union[Sequence[float],np.ndarray],
    axis : int = -1
    ) -> Union[float,np.ndarray]:
    """Arithmetic mean of absolute values"""
    x = np.asarray(x, dtype=float)
    _checkLength(x, axis, 1, "abs_mean")
    return np.abs(x).mean(axis=axis)

def abs_median(
    x : Union[Sequence[float],np.ndarray],
    axis : int = -1
    ) -> Union[float,np.ndarray]:
    """Median of absolute values. Even lengths take the midpoint of the central order statistics"""
    x = np.asarray(x, dtype=float)
    _checkLength(x, axis, 1, "abs_median")
    return np.median(np.abs(x), axis=axis)

def std(
    x : Union[Sequence[float],np.ndarray],
    axis : int = -1
    ) -> Union[float,np.ndarray]:
    """Population standard deviation"""
    x = np.asarray(x, dtype=float)
    _checkLength(x, axis, 2, "std")
    return x.std(axis=axis)

def iqr(
    x : Union[Sequence[float],np.ndarray],
    axis : int = -1
    ) -> Union[float,np.ndarray]:
    """Q3 - Q1, quartiles linearly interpolated at positions (n-1)*q"""
    x = np.asarray(x, dtype=float)
    _checkLength(x, axis, 2, "iqr")
    q1, q3 = np.percentile(x, [25, 75], axis=axis)
    return q3 - q1

def _absMoments(
    x : np.ndarray,
    axis : int,
    order : int
    ):
    a = np.abs(x)
    mean = a.mean(axis=axis, keepdims=True)
    d = a - mean
    m2 = (d ** 2).mean(axis=axis)
    mk = (d ** order).mean(axis=axis)
    degenerate = np.sqrt(m2) <= 1e-12 * np.maximum(np.abs(np.squeeze(mean, axis=axis)), _TINY)
    return m2, mk, degenerate

def abs_moment_degenerate(
    x : Union[Sequence[float],np.ndarray],
    axis : int = -1
    ) -> Union[bool,np.ndarray]:
    """True where |x| has (numerically) zero variance, so AbsSkew and AbsKurt are undefined"""
    return _absMoments(np.asarray(x, dtype=float), axis, 2)[2]

def abs_skew(
    x : Union[Sequence[float],np.ndarray],
    axis : int = -1
    ) -> Union[float,np.ndarray]:
    """
    Skewness of absolute values, moment estimator m3 / m2^1.5

    Zero variance of |x| gives 0 (see abs_moment_degenerate)
    """
    x = np.asarray(x, dtype=float)
    _checkLength(x, axis, 3, "abs_skew")
    m2, m3, degenerate = _absMoments(x, axis, 3)
    if np.ndim(degenerate) == 0 and degenerate:
        logging.debug("abs_skew: zero variance of absolute values, returning 0")
    return _scalar(np.where(degenerate, 0.0, m3 / np.where(degenerate, 1.0, m2) ** 1.5))

def abs_kurt(
    x : Union[Sequence[float],np.ndarray],
    axis : int = -1
    ) -> Union[float,np.ndarray]:
    """
    Excess kurtosis of absolute values, moment estimator m4 / m2^2 - 3

    Zero variance of |x| gives 0 (see abs_moment_degenerate)
    """
    x = np.asarray(x, dtype=float)
    _checkLength(x, axis, 4, "abs_kurt")
    m2, m4, degenerate = _absMoments(x, axis, 4)
    if np.ndim(degenerate) == 0 and degenerate:
        logging.debug("abs_kurt: zero variance of absolute values, returning 0")
    return _scalar(np.where(degenerate, 0.0, m4 / np.where(degenerate, 1.0, m2) ** 2 - 3))

featureFunctionDict : Dict[str,Callable] = {
    "AbsMean": abs_mean,
    "AbsMedian": abs_median,
    "Std": std,
    "IQR": iqr,
    "AbsSkew": abs_skew,
    "AbsKurt": abs_kurt
}

class FeatureRef:
    """A feature family: statistical feature kind in a domain. String form is Kind/Domain, e.g. AbsMean/TD"""

    kind = StringDescriptor(FEATURE_KINDS)

    domain = StringDescriptor(DOMAINS)

    def __init__(
        self,
        kind : str,
        domain : str
        ):
        self.kind = kind
        self.domain = domain_code(domain)

    @classmethod
    def fromString(
        cls,
        value : Union[str,"FeatureRef"]
        ) -> "FeatureRef":
        if isinstance(value, FeatureRef):
            return value
        parts = str(value).split("/")
        if len(parts) != 2:
            raise InvalidParameterError("Invalid feature reference %s. Expected Kind/Domain" % value)
        return cls(parts[0], parts[1])

    def __str__(self) -> str:
        return "%s/%s" % (self.kind, self.domain)

    def __repr__(self) -> str:
        return "FeatureRef(%s)" % str(self)

    def __eq__(self, other) -> bool:
        return isinstance(other, FeatureRef) and str(self) == str(other)

    def __lt__(self, other : "FeatureRef") -> bool:
        return str(self) < str(other)

    def __hash__(self) -> int:
        return hash(str(self))

class ColumnMeta:
    """Provenance of a feature matrix column. Principal component columns have kind "PC" and a component index"""

    kind = StringDescriptor()

    domain = StringDescriptor()

    channel = IntDescriptor(min_value=0)

    component = IntDescriptor(min_value=0)

    @property
    def name(self) -> str:
        if self.kind == "PC":
            return "PC%i" % (self.component + 1)
        return "%s_%s_ch%i" % (self.kind, self.domain, self.channel)

    def __init__(
        self,
        kind : str,
        domain : str = None,
        channel : int = None,
        component : int = None
        ):
        self.kind = kind
        self.domain = domain
        self.channel = channel
        self.component = component

    def __eq__(self, other) -> bool:
        return isinstance(other, ColumnMeta) and self.toDict() == other.toDict()

    def __repr__(self) -> str:
        return "ColumnMeta(%s)" % self.name

    def toDict(self) -> dict:
        return {
            "kind": self.kind,
            "domain": self.domain,
            "channel": self.channel,
            "component": self.component
        }

class FeatureMatrix:
    """Feature values of a dataset: one row per window, one column per (kind, domain, channel)"""

    name = StringDescriptor()
    """Dataset identifier"""

    @property
    def values(self) -> np.ndarray:
        """Array of shape (num_windows, num_columns)"""
        return self._values

    @property
    def labels(self) -> np.ndarray:
        return self._labels

    @property
    def column_meta(self) -> List[ColumnMeta]:
        return self._column_meta

    @property
    def degenerate_counts(self) -> List[int]:
        """Windows per column where AbsSkew or AbsKurt was undefined and set to 0"""
        return self._degenerate_counts

    @property
    def num_windows(self) -> int:
        return self._values.shape[0]

    @property
    def num_columns(self) -> int:
        return self._values.shape[1]

    @property
    def column_names(self) -> List[str]:
        return [c.name for c in self._column_meta]

    def __init__(
        self,
        values : np.ndarray,
        column_meta : List[ColumnMeta],
        labels : Union[List[int],np.ndarray],
        degenerate_counts : List[int] = None,
        name : str = "dataset"
        ):
        """
        Raises:
        -------
        ValueError : if column_meta or labels don't match the shape of values, or values are not finite
        """
        values = np.array(values, dtype=float)
        if values.ndim != 2:
            raise ValueError("values must be a 2d array")
        if len(column_meta) != values.shape[1]:
            raise ValueError("column_meta length (%i) must equal the number of columns (%i)" % (len(column_meta), values.shape[1]))
        labels = np.array(labels, dtype=int)
        if len(labels) != values.shape[0]:
            raise ValueError("labels length (%i) must equal the number of rows (%i)" % (len(labels), values.shape[0]))
        if not np.all(np.isfinite(values)):
            raise ValueError("Feature matrix %s contains non-finite values" % name)
        values.setflags(write=False)
        labels.setflags(write=False)
        self._values = values
        self._labels = labels
        self._column_meta = list(column_meta)
        self._degenerate_counts = list(degenerate_counts) if degenerate_counts is not None else [0] * values.shape[1]
        self.name = name

    def toDataFrame(self) -> pandas.DataFrame:
        data = pandas.DataFrame(self._values, columns=self.column_names)
        data["label"] = self._labels
        return data

    def saveCsv(
        self,
        path : str
        ) -> None:
        """Header row: <Kind>_<TD|FD>_ch<channel> per column, then label"""
        self.toDataFrame().to_csv(path, index=False)

    def classSummary(self) -> pandas.DataFrame:
        """Per class mean and std (population) of every column"""
        grouped = self.toDataFrame().groupby("label")
        return pandas.concat({"mean": grouped.mean(), "std": grouped.std(ddof=0)}, axis=1)

def _standardize(values : np.ndarray) -> np.ndarray:
    mean = values.mean(axis=0)
    deviation = values.std(axis=0)
    constant = deviation <= 1e-12 * np.maximum(np.abs(mean), _TINY)
    return np.where(constant, 0.0, (values - mean) / np.where(constant, 1.0, deviation))

def extract_features(
    dataset : WindowedDataset,
    kinds : List[str],
    domain : str,
    standardize : bool = True
    ) -> FeatureMatrix:
    """
    Compute one column per (kind, channel)

    Parameters:
    -----------
    dataset : WindowedDataset
        Preprocessed dataset

    kinds : list of str
        Feature kinds, from FEATURE_KINDS

    domain : str
        TD: statistics of the window amplitudes. FD: statistics of the one-sided magnitude spectrum, DC bin excluded

    standardize : bool = True
        Scale every column to zero mean and unit population std across windows. Constant columns become zeros

    Returns:
    --------
    FeatureMatrix
    """
    if not len(kinds):
        raise InvalidParameterError("extract_features: kinds must not be empty")
    for kind in kinds:
        if kind not in featureFunctionDict:
            raise InvalidParameterError("Invalid feature kind %s. Must be one of %s" % (kind, ", ".join(FEATURE_KINDS)))
    domain = domain_code(domain)
    signals = dataset.windows if domain == "TD" else magnitude_spectra(dataset.windows)[..., 1:]
    columns = []
    column_meta = []
    degenerate_counts = []
    for kind in kinds:
        values = featureFunctionDict[kind](signals, axis=-1)
        if kind in ("AbsSkew", "AbsKurt"):
            counts = abs_moment_degenerate(signals, axis=-1).sum(axis=0)
        else:
            counts = np.zeros(dataset.num_channels, dtype=int)
        for channel in range(dataset.num_channels):
            columns.append(values[:, channel])
            column_meta.append(ColumnMeta(kind, domain, channel))
            degenerate_counts.append(int(counts[channel]))
            if counts[channel]:
                logging.warning("Dataset %s: %s_%s_ch%i undefined (zero variance) on %i windows, set to 0" % (dataset.name, kind, domain, channel, counts[channel]))
    values = np.column_stack(columns)
    if standardize:
        values = _standardize(values)
    return FeatureMatrix(values, column_meta, dataset.labels, degenerate_counts, dataset.name)

def combine_features(matrices : List[FeatureMatrix]) -> FeatureMatrix:
    """
    Concatenate columns, keeping column_meta order

    Raises:
    -------
    FeatureMismatchError : if window counts or labels differ
    """
    if not len(matrices):
        raise FeatureMismatchError("combine_features: nothing to combine")
    first = matrices[0]
    for matrix in matrices[1:]:
        if matrix.num_windows != first.num_windows:
            raise FeatureMismatchError("combine_features: window counts differ (%i, %i)" % (first.num_windows, matrix.num_windows))
        if not np.array_equal(matrix.labels, first.labels):
            raise FeatureMismatchError("combine_features: labels differ")
    return FeatureMatrix(
        np.hstack([m.values for m in matrices]),
        [c for m in matrices for c in m.column_meta],
        first.labels,
        [d for m in matrices for d in m.degenerate_counts],
        first.name)
