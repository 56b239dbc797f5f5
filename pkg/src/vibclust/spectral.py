import numpy as np
from typing import Union, Sequence

from .descriptors.float_descriptor import FloatDescriptor
from .exceptions import InvalidParameterError

def next_power_of_two(n : int) -> int:
    return 1 << max(int(n) - 1, 0).bit_length()

def bit_reversal_permutation(n : int) -> np.ndarray:
    """Index permutation of the decimation in time input ordering. n must be a power of two"""
    bits = n.bit_length() - 1
    index = np.arange(n)
    reversed_index = np.zeros(n, dtype=int)
    for b in range(bits):
        reversed_index |= ((index >> b) & 1) << (bits - 1 - b)
    return reversed_index

def radix2_fft(x : Union[Sequence[complex],np.ndarray]) -> np.ndarray:
    """
    Iterative radix-2 decimation in time FFT along the last axis

    Parameters:
    -----------
    x : array whose last axis length is a power of two

    Returns:
    --------
    np.ndarray of complex, same shape as x
    """
    x = np.asarray(x, dtype=complex)
    n = x.shape[-1]
    if n < 1 or n & (n - 1):
        raise InvalidParameterError("radix2_fft: length must be a power of two, got %i" % n)
    lead = x.shape[:-1]
    y = x[..., bit_reversal_permutation(n)]
    size = 2
    while size <= n:
        half = size // 2
        twiddle = np.exp(-2j * np.pi * np.arange(half) / size)
        blocks = y.reshape(*lead, n // size, size)
        even = blocks[..., :half]
        odd = blocks[..., half:] * twiddle
        y = np.concatenate([even + odd, even - odd], axis=-1).reshape(*lead, n)
        size *= 2
    return y

def magnitude_spectra(windows : np.ndarray) -> np.ndarray:
    """
    One-sided amplitude spectra along the last axis, zero padded to the next power of two N

    Bins are scaled by 2/N, except DC and Nyquist scaled by 1/N, so that a sinusoid of amplitude A peaks at A

    Returns:
    --------
    np.ndarray of shape (..., N // 2 + 1)
    """
    x = np.asarray(windows, dtype=float)
    if x.ndim == 0 or x.shape[-1] < 2:
        raise InvalidParameterError("fft_magnitude: signal length must be >= 2")
    n = next_power_of_two(x.shape[-1])
    if n > x.shape[-1]:
        pad = [(0, 0)] * (x.ndim - 1) + [(0, n - x.shape[-1])]
        x = np.pad(x, pad)
    magnitudes = np.abs(radix2_fft(x)[..., :n // 2 + 1]) * (2.0 / n)
    magnitudes[..., 0] /= 2
    magnitudes[..., -1] /= 2
    return magnitudes

class MagnitudeSpectrum:
    """One-sided magnitude spectrum of a real signal"""

    bin_resolution = FloatDescriptor(min_value=0, min_exclusive=True, allow_inf=False)
    """Hz per bin"""

    @property
    def magnitudes(self) -> np.ndarray:
        """floor(N/2)+1 non-negative values"""
        return self._magnitudes

    @property
    def transform_length(self) -> int:
        """N, the padded transform length"""
        return 2 * (len(self._magnitudes) - 1)

    def __init__(
        self,
        magnitudes : np.ndarray,
        bin_resolution : float
        ):
        magnitudes = np.array(magnitudes, dtype=float)
        magnitudes.setflags(write=False)
        self._magnitudes = magnitudes
        self.bin_resolution = bin_resolution

    def frequencies(self) -> np.ndarray:
        """Bin frequencies in Hz"""
        return np.arange(len(self._magnitudes)) * self.bin_resolution

    def energy(self) -> float:
        """Sum of squared time samples, recovered from the one-sided scaling (Parseval)"""
        m = self._magnitudes
        return self.transform_length * (m[0] ** 2 + m[-1] ** 2 + 0.5 * np.sum(m[1:-1] ** 2))

    def toDict(self) -> dict:
        return {
            "magnitudes": self._magnitudes.tolist(),
            "bin_resolution": self.bin_resolution
        }

def fft_magnitude(
    signal : Union[Sequence[float],np.ndarray],
    sample_rate : float
    ) -> MagnitudeSpectrum:
    """
    Parameters:
    -----------
    signal : sequence of float (length >= 2)

    sample_rate : float
        Hz

    Returns:
    --------
    MagnitudeSpectrum
    """
    x = np.asarray(signal, dtype=float)
    if x.ndim != 1:
        raise InvalidParameterError("fft_magnitude: signal must be one dimensional")
    magnitudes = magnitude_spectra(x)
    return MagnitudeSpectrum(magnitudes, sample_rate / next_power_of_two(len(x)))
