import logging
import numpy as np
from numpy.lib.stride_tricks import sliding_window_view
from typing import Union, Sequence

from .descriptors.int_descriptor import IntDescriptor
from .exceptions import InvalidParameterError
from .dataio import WindowedDataset

NORMALIZE_SCOPES = ("window", "dataset")

def _degenerate(std : np.ndarray, mean : np.ndarray) -> np.ndarray:
    return (std == 0) | (std <= 1e-12 * np.abs(mean))

class SavGolParams:
    """Savitzky-Golay smoothing parameters"""

    window_size = IntDescriptor(min_value=1)
    """Odd number of samples of the fitting window"""

    poly_order = IntDescriptor(min_value=0)
    """Degree of the fitted polynomial, lower than window_size"""

    @property
    def half_width(self) -> int:
        return self.window_size // 2

    def __init__(
        self,
        window_size : int = 9,
        poly_order : int = 7
        ):
        """
        Raises:
        -------
        InvalidParameterError : if window_size is even or poly_order >= window_size
        """
        self.window_size = window_size
        self.poly_order = poly_order
        if self.window_size % 2 == 0:
            raise InvalidParameterError("savgol window_size must be odd, got %i" % self.window_size)
        if self.poly_order >= self.window_size:
            raise InvalidParameterError("savgol poly_order (%i) must be lower than window_size (%i)" % (self.poly_order, self.window_size))

    def toDict(self) -> dict:
        return {
            "window_size": self.window_size,
            "poly_order": self.poly_order
        }

def remove_dc(
    signal : Union[Sequence[float],np.ndarray],
    axis : int = -1
    ) -> np.ndarray:
    """Subtract the mean along axis"""
    x = np.asarray(signal, dtype=float)
    if x.size == 0 or x.shape[axis] == 0:
        raise InvalidParameterError("remove_dc: empty input")
    return x - x.mean(axis=axis, keepdims=True)

def normalize(
    signal : Union[Sequence[float],np.ndarray],
    axis : int = -1
    ) -> np.ndarray:
    """Z-score along axis: zero mean, unit population standard deviation. Constant input gives zeros"""
    x = np.asarray(signal, dtype=float)
    if x.ndim == 0 or x.shape[axis] < 2:
        raise InvalidParameterError("normalize: input length must be >= 2")
    mean = x.mean(axis=axis, keepdims=True)
    std = x.std(axis=axis, keepdims=True)
    degenerate = _degenerate(std, mean)
    return np.where(degenerate, 0.0, (x - mean) / np.where(degenerate, 1.0, std))

def _hatMatrix(params : SavGolParams) -> np.ndarray:
    """Least squares fit of the window evaluated at every window position, in offsets scaled to [-1, 1]"""
    m = params.half_width
    offsets = np.arange(-m, m + 1, dtype=float) / max(m, 1)
    vandermonde = np.vander(offsets, params.poly_order + 1, increasing=True)
    return vandermonde @ np.linalg.pinv(vandermonde)

def savgol_coefficients(params : SavGolParams) -> np.ndarray:
    """
    Smoothing kernel of the central point

    Parameters:
    -----------
    params : SavGolParams

    Returns:
    --------
    np.ndarray : window_size coefficients, symmetric, summing to 1
    """
    central = _hatMatrix(params)[params.half_width]
    return (central + central[::-1]) / 2

def savgol_edge_coefficients(params : SavGolParams) -> np.ndarray:
    """
    Kernels of the boundary positions. Row i evaluates the fit of the first (last) window at offset i - half_width

    Returns:
    --------
    np.ndarray of shape (window_size, window_size). Rows before half_width apply to the leading samples, rows after it to the trailing ones
    """
    return _hatMatrix(params)

def savgol_filter(
    signal : Union[Sequence[float],np.ndarray],
    params : SavGolParams = None,
    axis : int = -1
    ) -> np.ndarray:
    """
    Savitzky-Golay smoothing along axis, length preserving

    Interior samples are the convolution with savgol_coefficients. The first and last half_width samples are the polynomial fit of the first and last full window evaluated at their own offsets

    Parameters:
    -----------
    signal : sequence or array

    params : SavGolParams = None
        Defaults to window 9, order 7

    axis : int = -1

    Raises:
    -------
    InvalidParameterError : if the signal is shorter than the window
    """
    params = params if params is not None else SavGolParams()
    x = np.moveaxis(np.asarray(signal, dtype=float), axis, -1)
    w = params.window_size
    m = params.half_width
    if x.ndim == 0 or x.shape[-1] < w:
        raise InvalidParameterError("savgol_filter: signal length must be >= window_size (%i)" % w)
    hat = savgol_edge_coefficients(params)
    interior = sliding_window_view(x, w, axis=-1) @ savgol_coefficients(params)
    head = x[..., :w] @ hat[:m].T
    tail = x[..., -w:] @ hat[m + 1:].T
    return np.moveaxis(np.concatenate([head, interior, tail], axis=-1), -1, axis)

def preprocess_pipeline(
    dataset : WindowedDataset,
    params : SavGolParams = None,
    scope : str = "window"
    ) -> WindowedDataset:
    """
    Remove DC, normalize and smooth every window of every channel. Labels are untouched

    Parameters:
    -----------
    dataset : WindowedDataset

    params : SavGolParams = None
        Defaults to window 9, order 7

    scope : str = "window"
        "window": z-score each window separately
        "dataset": after removing each window's DC, z-score each channel with its standard deviation pooled over all windows, so amplitude differences between windows survive

    Returns:
    --------
    WindowedDataset
    """
    params = params if params is not None else SavGolParams()
    if scope not in NORMALIZE_SCOPES:
        raise InvalidParameterError("normalize scope must be one of %s, got %s" % (", ".join(NORMALIZE_SCOPES), scope))
    if dataset.window_length < params.window_size:
        raise InvalidParameterError("window_length (%i) is shorter than the savgol window (%i)" % (dataset.window_length, params.window_size))
    windows = dataset.windows
    # constant windows are zeroed exactly, rounding residue of the mean must not be scaled up
    constant = _degenerate(windows.std(axis=-1, keepdims=True), windows.mean(axis=-1, keepdims=True))
    centered = np.where(constant, 0.0, remove_dc(windows))
    if scope == "window":
        normalized = normalize(centered)
    else:
        mean = centered.mean(axis=(0, 2), keepdims=True)
        std = centered.std(axis=(0, 2), keepdims=True)
        degenerate = std == 0
        if degenerate.any():
            logging.debug("Dataset %s: constant channel(s) %s normalized to zeros" % (dataset.name, np.flatnonzero(degenerate.ravel()).tolist()))
        normalized = np.where(degenerate, 0.0, (centered - mean) / np.where(degenerate, 1.0, std))
    return dataset.withWindows(savgol_filter(normalized, params))
