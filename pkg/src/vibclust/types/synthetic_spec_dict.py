from typing import TypedDict, List
from .class_profile_dict import ClassProfileDict

class SyntheticSpecDict(TypedDict):
    name : str
    num_classes : int
    windows_per_class : int
    window_length : int
    num_channels : int
    sample_rate : float
    class_profiles : List[ClassProfileDict]
    seed : int
