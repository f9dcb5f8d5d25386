"""Discrete Fourier analysis between waveforms and detuning spectra.

Conventions: the forward transform carries dt and the backward df, so
discrete sums approximate continuous integrals and Parseval holds in
physical units,

    E(delta_k) = sum_n e(t_n) exp(-i 2 pi delta_k t_n) dt,
    e(t_n)     = sum_k E(delta_k) exp(+i 2 pi delta_k t_n) df.

A channel phase exp(-i Phi) with dPhi/ddelta > 0 then delays the envelope,
consistent with the shift theorem.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import NumericError, ValidationError
from .signal import LN2, SamplingGrid, Waveform

_TWO_PI = 2.0 * math.pi


@dataclass(frozen=True, eq=False)
class Spectrum:
    """Complex amplitude per detuning bin; the carrier (0 Hz) bin is at n//2."""

    grid: SamplingGrid
    samples: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        arr = np.array(self.samples, dtype=np.complex128)
        if arr.shape != (self.grid.n,):
            raise ValidationError(
                f"spectrum has {arr.shape} bins, grid expects ({self.grid.n},)"
            )
        arr.setflags(write=False)
        object.__setattr__(self, "samples", arr)

    def detunings(self) -> np.ndarray:
        return self.grid.detunings()

    def energy(self) -> float:
        """Sum of |E|^2 * df; equals the waveform energy by Parseval."""
        return float(np.sum(np.abs(self.samples) ** 2) * self.grid.df)


def dft(w: Waveform) -> Spectrum:
    """Forward transform of a waveform onto its grid's detuning lattice."""
    grid = w.grid
    raw = np.fft.fftshift(np.fft.fft(w.samples))
    phase = np.exp(-1j * _TWO_PI * grid.detunings() * grid.t_start)
    return Spectrum(grid, grid.dt * phase * raw)


def idft(s: Spectrum) -> Waveform:
    """Inverse transform; exact inverse of dft up to float rounding."""
    grid = s.grid
    unphased = s.samples * np.exp(1j * _TWO_PI * grid.detunings() * grid.t_start)
    return Waveform(grid, np.fft.ifft(np.fft.ifftshift(unphased)) / grid.dt)


def intensity_spectrum(s: Spectrum) -> np.ndarray:
    """|E(delta)|^2 per bin; phase information is discarded."""
    return np.abs(s.samples) ** 2


def amg_spectrum_closed_form(t0: float, mod_depth: float, mod_freq: float, delta):
    """Three-Gaussian intensity spectrum of an AMG pulse, carrier peak = 1.

    Evaluates i1(delta) + (A^2/4) [i1(delta - f) + i1(delta + f)] where i1 is
    the intensity spectrum of the Gaussian pulse, a Gaussian of half-width
    ln2/(2 pi t0) (FWHM ln2/(pi t0)).  Cross terms are neglected, valid when
    the modulation frequency far exceeds the spectral width.
    """
    if not t0 > 0:
        raise ValidationError(f"t0 must be positive, got {t0}")
    if not 0.0 <= mod_depth <= 1.0:
        raise ValidationError(f"mod_depth must lie in [0, 1], got {mod_depth}")
    if not mod_freq > 0:
        raise ValidationError(f"mod_freq must be positive, got {mod_freq}")
    d = np.asarray(delta, dtype=np.float64)
    half_width = LN2 / (_TWO_PI * t0)

    def i1(x):
        return np.exp(-LN2 * x**2 / half_width**2)

    ratio = mod_depth**2 / 4.0
    return i1(d) + ratio * (i1(d - mod_freq) + i1(d + mod_freq))


def band_extract(s: Spectrum, lo: float, hi: float) -> Spectrum:
    """Copy of the spectrum with every bin outside [lo, hi) zeroed."""
    if not lo < hi:
        raise ValidationError(f"band bounds must satisfy lo < hi, got [{lo}, {hi})")
    deltas = s.detunings()
    keep = (deltas >= lo) & (deltas < hi)
    return Spectrum(s.grid, np.where(keep, s.samples, 0.0))


def fwhm(axis: np.ndarray, values: np.ndarray, baseline: float = 0.0) -> float:
    """Full width at half maximum of a peaked curve over an ordered axis.

    The half level is (peak + baseline)/2, so curves sitting on a pedestal
    are measured above it.  Crossings adjacent to the global maximum are
    located by linear interpolation between bracketing samples.
    """
    axis = np.asarray(axis, dtype=np.float64)
    values = np.asarray(values, dtype=np.float64)
    if axis.shape != values.shape or axis.ndim != 1 or axis.size < 3:
        raise ValidationError("fwhm needs matching 1-d axis/values with >= 3 samples")
    i_peak = int(np.argmax(values))
    half = 0.5 * (values[i_peak] + baseline)

    def crossing(step: int) -> float:
        i = i_peak
        while 0 <= i + step < values.size:
            j = i + step
            if values[j] < half:
                # linear interpolation between samples i (>= half) and j (< half)
                frac = (values[i] - half) / (values[i] - values[j])
                return float(axis[i] + frac * (axis[j] - axis[i]))
            i = j
        raise NumericError(
            "no half-maximum crossing found on one side of the peak "
            "(curve truncated by the window)"
        )

    return crossing(+1) - crossing(-1)


def peak_location(axis: np.ndarray, values: np.ndarray) -> float:
    """Position of the global maximum, refined by 3-point parabolic interpolation."""
    axis = np.asarray(axis, dtype=np.float64)
    values = np.asarray(values, dtype=np.float64)
    if axis.shape != values.shape or axis.ndim != 1 or axis.size == 0:
        raise ValidationError("peak_location needs matching nonempty 1-d axis/values")
    i = int(np.argmax(values))
    if i == 0 or i == values.size - 1:
        return float(axis[i])
    denom = values[i - 1] - 2.0 * values[i] + values[i + 1]
    if denom == 0.0:
        return float(axis[i])
    offset = 0.5 * (values[i - 1] - values[i + 1]) / denom
    offset = min(0.5, max(-0.5, offset))
    return float(axis[i] + offset * 0.5 * (axis[i + 1] - axis[i - 1]))
