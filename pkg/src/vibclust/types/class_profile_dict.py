from typing import TypedDict

class ClassProfileDict(TypedDict):
    amplitude_scale : float
    dominant_frequency_bin : int
    noise_std : float
