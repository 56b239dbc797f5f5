import os
import json
import math
import logging
import yaml
import numpy as np
import pandas
from numpy.lib.stride_tricks import sliding_window_view
from typing import List, Union, Dict

from .descriptors.int_descriptor import IntDescriptor
from .descriptors.float_descriptor import FloatDescriptor
from .descriptors.string_descriptor import StringDescriptor
from .descriptors.list_descriptor import ListDescriptor
from .validation import getSchemaAndValidate
from .config import yamlLoader
from .exceptions import InvalidParameterError, DatasetFileNotFoundError, MissingColumnError, NonNumericCellError, LabelOutOfRangeError, EmptyDatasetError
from .types.dataset_manifest_dict import DatasetManifestDict
from .types.class_profile_dict import ClassProfileDict
from .types.synthetic_spec_dict import SyntheticSpecDict

def round_half_up(value : float) -> int:
    return int(math.floor(value + 0.5))

def _readonly(array : np.ndarray) -> np.ndarray:
    array = np.array(array, copy=True)
    array.setflags(write=False)
    return array

class DatasetManifest:
    """Describes how to read and window one csv dataset"""

    name = StringDescriptor()
    """Dataset identifier"""

    csv_path = StringDescriptor()
    """Path of the csv file"""

    channel_columns = ListDescriptor(str, min_length=1)
    """Signal columns, one per channel"""

    label_column = StringDescriptor()
    """Integer class label column"""

    sample_rate = FloatDescriptor(min_value=0, min_exclusive=True, allow_inf=False)
    """Sampling rate in Hz"""

    window_length = IntDescriptor(min_value=8)
    """Window length in samples"""

    window_stride = IntDescriptor(min_value=1)
    """Distance between window starts in samples"""

    num_classes = IntDescriptor(min_value=2)
    """Number of classes after discarding labels"""

    subset_fraction = FloatDescriptor(min_value=0, max_value=1, min_exclusive=True)
    """Fraction of the windows of each class kept after shuffling"""

    shuffle_seed = IntDescriptor()
    """Seed of the subset shuffle"""

    discard_labels = ListDescriptor(float)
    """Raw label values whose windows are dropped"""

    def __init__(
        self,
        name : str,
        csv_path : str,
        channel_columns : List[str],
        label_column : str,
        sample_rate : float,
        num_classes : int,
        window_length : int = 512,
        window_stride : int = 512,
        subset_fraction : float = 0.25,
        shuffle_seed : int = 0,
        discard_labels : List[float] = []
        ):
        """
        Parameters:
        -----------
        name : str
            Dataset identifier, used in reports and output file names

        csv_path : str
            Path of the csv file (header row, one sample per row)

        channel_columns : List[str]
            Names of the numeric signal columns

        label_column : str
            Name of the integer label column

        sample_rate : float
            Sampling rate in Hz

        num_classes : int
            Number of classes (>= 2)

        window_length : int = 512

        window_stride : int = 512

        subset_fraction : float = 0.25
            Fraction of the windows of each class to keep. 1 keeps every window in file order

        shuffle_seed : int = 0

        discard_labels : List[float] = []
            Raw labels whose windows are dropped before remapping labels to 0..num_classes-1
        """
        getSchemaAndValidate(
            dict(
                name = name,
                csv_path = csv_path,
                channel_columns = list(channel_columns),
                label_column = label_column,
                sample_rate = sample_rate,
                num_classes = num_classes,
                window_length = window_length,
                window_stride = window_stride,
                subset_fraction = subset_fraction,
                shuffle_seed = shuffle_seed,
                discard_labels = list(discard_labels)),
            "DatasetManifest")
        self.name = name
        self.csv_path = csv_path
        self.channel_columns = channel_columns
        self.label_column = label_column
        self.sample_rate = sample_rate
        self.num_classes = num_classes
        self.window_length = window_length
        self.window_stride = window_stride
        self.subset_fraction = subset_fraction
        self.shuffle_seed = shuffle_seed
        self.discard_labels = discard_labels

    @classmethod
    def load(
        cls,
        path : str
        ) -> "DatasetManifest":
        """Read manifest from a json (or yaml) file. A relative csv_path is resolved against the manifest directory"""
        if not os.path.exists(path):
            raise DatasetFileNotFoundError(path)
        with open(path) as manifest_file:
            params = yaml.load(manifest_file, yamlLoader())
        if not isinstance(params, dict):
            raise ValueError("Invalid manifest file %s: expected a mapping" % path)
        if "csv_path" in params and not os.path.isabs(str(params["csv_path"])):
            params["csv_path"] = os.path.join(os.path.dirname(os.path.abspath(path)), params["csv_path"])
        return cls(**params)

    def toDict(self) -> DatasetManifestDict:
        return {
            "name": self.name,
            "csv_path": self.csv_path,
            "channel_columns": list(self.channel_columns),
            "label_column": self.label_column,
            "sample_rate": self.sample_rate,
            "window_length": self.window_length,
            "window_stride": self.window_stride,
            "num_classes": self.num_classes,
            "subset_fraction": self.subset_fraction,
            "shuffle_seed": self.shuffle_seed,
            "discard_labels": list(self.discard_labels)
        }

    def save(
        self,
        path : str
        ) -> None:
        """Write manifest as json"""
        with open(path, "w") as manifest_file:
            json.dump(self.toDict(), manifest_file, indent=4)

class WindowedDataset:
    """Fixed length multi-channel signal windows with class labels. Arrays are read-only, so instances can be shared between workers"""

    name = StringDescriptor()
    """Dataset identifier"""

    sample_rate = FloatDescriptor(min_value=0, min_exclusive=True, allow_inf=False)
    """Sampling rate in Hz"""

    num_classes = IntDescriptor(min_value=1)
    """Number of classes"""

    @property
    def windows(self) -> np.ndarray:
        """Array of shape (num_windows, num_channels, window_length)"""
        return self._windows

    @property
    def labels(self) -> np.ndarray:
        """Class index per window, in [0, num_classes)"""
        return self._labels

    @property
    def num_windows(self) -> int:
        return self._windows.shape[0]

    @property
    def num_channels(self) -> int:
        return self._windows.shape[1]

    @property
    def window_length(self) -> int:
        return self._windows.shape[2]

    def __init__(
        self,
        windows : np.ndarray,
        labels : Union[List[int],np.ndarray],
        sample_rate : float,
        num_classes : int,
        name : str = "dataset"
        ):
        """
        Parameters:
        -----------
        windows : np.ndarray
            Array of shape (num_windows, num_channels, window_length). A 2d array is taken as single channel

        labels : list or array of int
            Class index of each window

        sample_rate : float

        num_classes : int

        name : str = "dataset"

        Raises:
        -------
        EmptyDatasetError : if there are no windows

        ValueError : if shapes don't match or labels are out of range
        """
        windows = np.asarray(windows, dtype=float)
        if windows.ndim == 2:
            windows = windows[:, np.newaxis, :]
        if windows.ndim != 3:
            raise ValueError("windows must have shape (num_windows, num_channels, window_length)")
        if windows.shape[0] == 0:
            raise EmptyDatasetError("Dataset %s has no windows" % name)
        labels = np.asarray(labels)
        if labels.ndim != 1 or len(labels) != windows.shape[0]:
            raise ValueError("labels length (%i) must equal the number of windows (%i)" % (labels.size, windows.shape[0]))
        if not np.all(np.equal(np.mod(labels, 1), 0)):
            raise LabelOutOfRangeError("labels must be integral")
        labels = labels.astype(int)
        self.num_classes = num_classes
        if labels.min() < 0 or labels.max() >= self.num_classes:
            raise LabelOutOfRangeError("labels must lie in [0, %i)" % self.num_classes)
        self._windows = _readonly(windows)
        self._labels = _readonly(labels)
        self.sample_rate = sample_rate
        self.name = name

    def classCounts(self) -> Dict[int,int]:
        """Number of windows per class, for every class index"""
        counts = np.bincount(self._labels, minlength=self.num_classes)
        return {c: int(counts[c]) for c in range(self.num_classes)}

    def withWindows(
        self,
        windows : np.ndarray
        ) -> "WindowedDataset":
        """Copy of this dataset with replaced windows (same labels and metadata)"""
        return WindowedDataset(windows, self._labels, self.sample_rate, self.num_classes, self.name)

    def toDataFrame(
        self,
        channel_columns : List[str] = None,
        label_column : str = "label"
        ) -> pandas.DataFrame:
        """Contiguous rows: window after window, one sample per row"""
        channel_columns = channel_columns if channel_columns is not None else ["ch%i" % i for i in range(self.num_channels)]
        if len(channel_columns) != self.num_channels:
            raise ValueError("channel_columns length must equal num_channels (%i)" % self.num_channels)
        samples = self._windows.transpose(0, 2, 1).reshape(-1, self.num_channels)
        data = pandas.DataFrame(samples, columns=channel_columns)
        data[label_column] = np.repeat(self._labels, self.window_length)
        return data

    def saveCsv(
        self,
        path : str,
        channel_columns : List[str] = None,
        label_column : str = "label"
        ) -> None:
        """Write windows to csv. Reloading with the manifest returned by toManifest reproduces windows and labels exactly"""
        self.toDataFrame(channel_columns, label_column).to_csv(path, index=False)

    def toManifest(
        self,
        csv_path : str,
        channel_columns : List[str] = None,
        label_column : str = "label"
        ) -> DatasetManifest:
        """Manifest matching a csv written by saveCsv"""
        return DatasetManifest(
            name = self.name,
            csv_path = csv_path,
            channel_columns = channel_columns if channel_columns is not None else ["ch%i" % i for i in range(self.num_channels)],
            label_column = label_column,
            sample_rate = self.sample_rate,
            num_classes = max(self.num_classes, 2),
            window_length = self.window_length,
            window_stride = self.window_length,
            subset_fraction = 1.0
        )

def _readCsv(manifest : DatasetManifest) -> pandas.DataFrame:
    path = manifest.csv_path
    if not os.path.exists(path):
        raise DatasetFileNotFoundError(path)
    header = pandas.read_csv(path, nrows=0).columns
    columns = list(manifest.channel_columns) + [manifest.label_column]
    missing = [c for c in columns if c not in header]
    if len(missing):
        raise MissingColumnError(path, missing)
    data = pandas.read_csv(path, usecols=columns, float_precision="round_trip")
    for column in columns:
        if pandas.api.types.is_numeric_dtype(data[column]) and not data[column].isna().any():
            continue
        numeric = pandas.to_numeric(data[column], errors="coerce")
        bad = np.flatnonzero(numeric.isna().to_numpy())
        if not len(bad):
            data[column] = numeric
            continue
        row = int(bad[0])
        value = data[column].iloc[row]
        # line number in the file (header is line 1)
        raise NonNumericCellError(path, column, row + 2, "" if pandas.isna(value) else value)
    return data

def _selectSubset(
    labels : np.ndarray,
    num_classes : int,
    fraction : float,
    seed : int
    ) -> np.ndarray:
    rng = np.random.default_rng(seed)
    selected = []
    for c in range(num_classes):
        index = np.flatnonzero(labels == c)
        if not len(index):
            continue
        rng.shuffle(index)
        selected.append(index[:max(1, round_half_up(fraction * len(index)))])
    return np.concatenate(selected)

def load_dataset(manifest : DatasetManifest) -> WindowedDataset:
    """
    Read csv, cut windows on the grid 0, stride, 2*stride... and keep those whose rows share a single label

    Parameters:
    -----------
    manifest : DatasetManifest

    Returns:
    --------
    WindowedDataset

    Raises:
    -------
    DatasetFileNotFoundError, MissingColumnError, NonNumericCellError, LabelOutOfRangeError, EmptyDatasetError
    """
    data = _readCsv(manifest)
    raw_labels = data[manifest.label_column].to_numpy(dtype=float)
    if not np.all(np.equal(np.mod(raw_labels, 1), 0)):
        row = int(np.flatnonzero(np.mod(raw_labels, 1) != 0)[0])
        raise LabelOutOfRangeError("Non-integral label %s at row %i of %s" % (raw_labels[row], row + 2, manifest.csv_path))
    signal = data[list(manifest.channel_columns)].to_numpy(dtype=float)
    num_rows = signal.shape[0]
    length = manifest.window_length
    if num_rows < length:
        raise EmptyDatasetError("Dataset %s: %i rows are fewer than window_length %i" % (manifest.name, num_rows, length))
    starts = np.arange(0, num_rows - length + 1, manifest.window_stride)
    # number of label changes up to each row
    changes = np.concatenate([[0], np.cumsum(raw_labels[1:] != raw_labels[:-1])])
    pure = changes[starts + length - 1] == changes[starts]
    logging.debug("Dataset %s: %i of %i windows straddle a label change" % (manifest.name, int((~pure).sum()), len(starts)))
    keep = pure
    if len(manifest.discard_labels):
        discarded = np.isin(raw_labels[starts], np.asarray(manifest.discard_labels, dtype=float))
        logging.info("Dataset %s: discarding %i windows of labels %s" % (manifest.name, int((discarded & pure).sum()), manifest.discard_labels))
        keep = keep & ~discarded
    starts = starts[keep]
    if not len(starts):
        raise EmptyDatasetError("Dataset %s: no window left after cutting" % manifest.name)
    window_labels = raw_labels[starts]
    distinct = np.unique(window_labels)
    if len(distinct) > manifest.num_classes:
        raise LabelOutOfRangeError("Dataset %s: %i distinct labels %s exceed num_classes=%i" % (manifest.name, len(distinct), distinct.tolist(), manifest.num_classes))
    if len(distinct) < manifest.num_classes:
        logging.warning("Dataset %s: only %i of %i classes present" % (manifest.name, len(distinct), manifest.num_classes))
    if distinct[0] >= 0 and distinct[-1] < manifest.num_classes:
        # raw labels already are class indices, an absent class keeps its index
        labels = window_labels.astype(int)
    else:
        labels = np.searchsorted(distinct, window_labels)
    # (num_rows - length + 1, channels, length)
    windows = sliding_window_view(signal, length, axis=0)[starts]
    if manifest.subset_fraction < 1:
        selected = _selectSubset(labels, manifest.num_classes, manifest.subset_fraction, manifest.shuffle_seed)
        windows = windows[selected]
        labels = labels[selected]
    dataset = WindowedDataset(windows, labels, manifest.sample_rate, manifest.num_classes, manifest.name)
    logging.info("Dataset %s: %i windows, class counts %s" % (manifest.name, dataset.num_windows, dataset.classCounts()))
    return dataset

class ClassProfile:
    """Signal of one synthetic class: amplitude_scale * sin(2 pi bin t / window_length) plus gaussian noise"""

    amplitude_scale = FloatDescriptor(min_value=0, min_exclusive=True, allow_inf=False)

    dominant_frequency_bin = IntDescriptor(min_value=0)
    """Cycles per window"""

    noise_std = FloatDescriptor(min_value=0, allow_inf=False)

    def __init__(
        self,
        amplitude_scale : float,
        dominant_frequency_bin : int,
        noise_std : float
        ):
        self.amplitude_scale = amplitude_scale
        self.dominant_frequency_bin = dominant_frequency_bin
        self.noise_std = noise_std

    def toDict(self) -> ClassProfileDict:
        return {
            "amplitude_scale": self.amplitude_scale,
            "dominant_frequency_bin": self.dominant_frequency_bin,
            "noise_std": self.noise_std
        }

class SyntheticSpec:
    """Parameters of a generated stand-in dataset"""

    name = StringDescriptor()

    num_classes = IntDescriptor(min_value=1)

    windows_per_class = IntDescriptor(min_value=1)

    window_length = IntDescriptor(min_value=2)

    num_channels = IntDescriptor(min_value=1)

    sample_rate = FloatDescriptor(min_value=0, min_exclusive=True, allow_inf=False)

    seed = IntDescriptor()

    @property
    def class_profiles(self) -> List[ClassProfile]:
        """One profile per class"""
        return self._class_profiles
    @class_profiles.setter
    def class_profiles(
        self,
        class_profiles : List[Union[ClassProfile,ClassProfileDict]]
        ) -> None:
        self._class_profiles = [p if isinstance(p, ClassProfile) else ClassProfile(**p) for p in class_profiles]

    def __init__(
        self,
        num_classes : int,
        windows_per_class : int,
        window_length : int,
        class_profiles : List[Union[ClassProfile,ClassProfileDict]],
        seed : int,
        num_channels : int = 1,
        sample_rate : float = 1.0,
        name : str = "synthetic"
        ):
        """
        Raises:
        -------
        InvalidParameterError : if class_profiles length differs from num_classes or a dominant_frequency_bin is not lower than window_length / 2
        """
        self.name = name
        self.num_classes = num_classes
        self.windows_per_class = windows_per_class
        self.window_length = window_length
        self.num_channels = num_channels
        self.sample_rate = sample_rate
        self.seed = seed
        self.class_profiles = class_profiles
        if len(self.class_profiles) != self.num_classes:
            raise InvalidParameterError("class_profiles length (%i) must equal num_classes (%i)" % (len(self.class_profiles), self.num_classes))
        for profile in self.class_profiles:
            if not profile.dominant_frequency_bin < self.window_length / 2:
                raise InvalidParameterError("dominant_frequency_bin %i must be lower than window_length / 2" % profile.dominant_frequency_bin)

    @classmethod
    def fromDict(
        cls,
        params : SyntheticSpecDict
        ) -> "SyntheticSpec":
        """Validate against the SyntheticSpec schema and instantiate"""
        getSchemaAndValidate(params, "SyntheticSpec")
        return cls(**params)

    def toDict(self) -> SyntheticSpecDict:
        return {
            "name": self.name,
            "num_classes": self.num_classes,
            "windows_per_class": self.windows_per_class,
            "window_length": self.window_length,
            "num_channels": self.num_channels,
            "sample_rate": self.sample_rate,
            "class_profiles": [p.toDict() for p in self.class_profiles],
            "seed": self.seed
        }

def generate_synthetic(spec : SyntheticSpec) -> WindowedDataset:
    """Generate windows class after class. Deterministic for a fixed seed"""
    rng = np.random.default_rng(spec.seed)
    t = np.arange(spec.window_length)
    shape = (spec.windows_per_class, spec.num_channels, spec.window_length)
    windows = []
    labels = []
    for c, profile in enumerate(spec.class_profiles):
        base = profile.amplitude_scale * np.sin(2 * np.pi * profile.dominant_frequency_bin * t / spec.window_length)
        windows.append(base + rng.normal(0.0, profile.noise_std, size=shape))
        labels.append(np.full(spec.windows_per_class, c))
    return WindowedDataset(np.concatenate(windows), np.concatenate(labels), spec.sample_rate, spec.num_classes, spec.name)

def _amplitudeLadder(
    num_classes : int,
    ratio : float,
    noise_ratio : float,
    first_bin : int,
    bin_step : int
    ) -> List[ClassProfileDict]:
    """Class c: amplitude ratio**c, noise_std noise_ratio * amplitude, odd dominant bin first_bin + c * bin_step"""
    profiles = []
    for c in range(num_classes):
        amplitude = round(ratio ** c, 4)
        profiles.append({
            "amplitude_scale": amplitude,
            "dominant_frequency_bin": first_bin + c * bin_step,
            "noise_std": round(noise_ratio * amplitude, 6)
        })
    return profiles

def synthetic_suite(
    windows_per_class : int = 30,
    seed : int = 0
    ) -> List[SyntheticSpec]:
    """
    Three stand-ins shaped like the benchmark datasets: 6 conditions x 3 axes, 5 conditions x 3 sensors and 3 conditions x 2 channels, 512 samples per window

    Conditions of a dataset are severity grades: the amplitude grows by a fixed ratio from one condition to the next, the noise level stays proportional to the amplitude and the dominant bins are odd (every window holds the same set of sine phases). Averaging and variance features in the time domain separate the grades, the spectral floor statistics (AbsMedian/FD, IQR/FD) overlap between neighbouring grades and the shape features carry no grade information
    """
    return [
        SyntheticSpec(
            name = "synthetic_1",
            num_classes = 6,
            windows_per_class = windows_per_class,
            window_length = 512,
            num_channels = 3,
            sample_rate = 6644.0,
            class_profiles = _amplitudeLadder(6, 1.12, 0.1, 5, 4),
            seed = seed),
        SyntheticSpec(
            name = "synthetic_2",
            num_classes = 5,
            windows_per_class = windows_per_class,
            window_length = 512,
            num_channels = 3,
            sample_rate = 4096.0,
            class_profiles = _amplitudeLadder(5, 1.12, 0.15, 3, 4),
            seed = seed + 1),
        SyntheticSpec(
            name = "synthetic_3",
            num_classes = 3,
            windows_per_class = windows_per_class,
            window_length = 512,
            num_channels = 2,
            sample_rate = 1.0,
            class_profiles = _amplitudeLadder(3, 1.1, 0.2, 5, 6),
            seed = seed + 2)
    ]
