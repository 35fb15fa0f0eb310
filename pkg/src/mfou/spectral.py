"""Length-N DFT contract and circular convolution.

Convention: the forward transform is unnormalized, the inverse carries 1/N.
Real signals are stored through their non-negative-frequency half
(``rfft`` layout); the full complex coefficient array is rebuilt on demand.
"""

from __future__ import annotations

import numpy as np

HERMITIAN_RTOL = 1e-10


class Spectrum:
    """DFT coefficients of a real array of length ``n``."""

    __slots__ = ("half", "n")

    def __init__(self, half, n: int):
        half = np.asarray(half, dtype=np.complex128)
        if half.shape != (n // 2 + 1,):
            raise ValueError(f"half spectrum of length {half.size} does not match n={n}")
        self.half = half
        self.n = int(n)

    @classmethod
    def from_coeffs(cls, coeffs, rtol: float = HERMITIAN_RTOL) -> "Spectrum":
        """Build from a full complex coefficient array, checking Hermitian symmetry."""
        coeffs = np.asarray(coeffs, dtype=np.complex128)
        n = coeffs.size
        mirror = np.conj(coeffs[(-np.arange(n)) % n])
        scale = max(np.max(np.abs(coeffs)), np.finfo(float).tiny)
        defect = np.max(np.abs(coeffs - mirror)) / scale
        if defect > rtol:
            raise ArithmeticError(f"spectrum is not Hermitian (relative defect {defect:.3e})")
        half = coeffs[: n // 2 + 1].copy()
        # pin the self-conjugate bins to the real axis
        half[0] = half[0].real
        if n % 2 == 0:
            half[-1] = half[-1].real
        return cls(half, n)

    @property
    def coeffs(self) -> np.ndarray:
        n = self.n
        full = np.empty(n, dtype=np.complex128)
        full[: n // 2 + 1] = self.half
        k = np.arange(n // 2 + 1, n)
        full[k] = np.conj(self.half[n - k])
        return full

    def __mul__(self, other):
        if isinstance(other, Spectrum):
            _check_len(self.n, other.n)
            return Spectrum(self.half * other.half, self.n)
        return Spectrum(self.half * other, self.n)

    __rmul__ = __mul__

    def __len__(self):
        return self.n

    def __repr__(self):
        return f"Spectrum(n={self.n})"


def _check_len(a: int, b: int):
    if a != b:
        raise ValueError(f"length mismatch: {a} != {b}")


def _as_real(x) -> np.ndarray:
    x = np.asarray(x)
    if np.iscomplexobj(x):
        raise TypeError("expected a real array")
    x = x.astype(np.float64, copy=False)
    if x.ndim != 1:
        raise ValueError("expected a one-dimensional array")
    return x


def dft(x, n: int | None = None) -> Spectrum:
    """Unnormalized DFT of a real array. ``n`` optionally pins the expected length."""
    x = _as_real(x)
    if n is not None:
        _check_len(x.size, n)
    return Spectrum(np.fft.rfft(x), x.size)


def idft(s: Spectrum | np.ndarray) -> np.ndarray:
    """Inverse DFT (with the 1/N factor) of a Hermitian spectrum; returns a real array.

    A raw full-length complex array is accepted and checked for Hermitian
    symmetry, raising ``ArithmeticError`` beyond a 1e-10 relative defect.
    """
    if not isinstance(s, Spectrum):
        s = Spectrum.from_coeffs(s)
    return np.fft.irfft(s.half, n=s.n)


def circular_convolve(x, y) -> np.ndarray:
    """z[t] = sum_s x[s] y[(t - s) mod N], computed spectrally."""
    x = _as_real(x)
    y = _as_real(y)
    _check_len(x.size, y.size)
    return np.fft.irfft(np.fft.rfft(x) * np.fft.rfft(y), n=x.size)
