from typing import TypedDict, List, Union
from .synthetic_spec_dict import SyntheticSpecDict

class SyntheticSuiteDict(TypedDict, total=False):
    windows_per_class : int
    seed : int

class DatasetEntryDict(TypedDict, total=False):
    manifest : str
    synthetic : SyntheticSpecDict

class SavGolConfigDict(TypedDict, total=False):
    savgol_window : int
    savgol_order : int
    normalize_scope : str

class OpticsConfigDict(TypedDict, total=False):
    min_samples : int
    max_eps : Union[float,str]
    eps_percentile : float

class RunConfigDict(TypedDict, total=False):
    datasets : List[DatasetEntryDict]
    synthetic_suite : Union[bool,SyntheticSuiteDict]
    standardize : bool
    experiment : str
    runs_per_setting : int
    output_dir : str
    seed_salt : str
    jobs : int
    verbosity : str
    preprocess : SavGolConfigDict
    kmeans : dict
    gmm : dict
    optics : OpticsConfigDict
