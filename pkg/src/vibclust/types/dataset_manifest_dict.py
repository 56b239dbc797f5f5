from typing import TypedDict, List

class DatasetManifestDict(TypedDict):
    name : str
    csv_path : str
    channel_columns : List[str]
    label_column : str
    sample_rate : float
    window_length : int
    window_stride : int
    num_classes : int
    subset_fraction : float
    shuffle_seed : int
    discard_labels : List[float]
