"""CSV serialization for waveforms, spectra, transmission tables, and gains.

All writers emit a header row and shortest round-trip float formatting, so
write -> read -> write is byte-identical for files this package produced.
Readers validate uniform axis spacing to 1e-6 relative and snap the spacing
to the exact float the writer used when one reproduces every axis value.
"""

from __future__ import annotations

import math
from pathlib import Path

import numpy as np

from .errors import ValidationError
from .medium import MeasuredTransmission
from .signal import IntensityTrace, SamplingGrid, Waveform
from .spectral import Spectrum

FIELD_HEADER = "time_s,field"
INTENSITY_HEADER = "time_s,intensity"
# generic header accepted on input and read as field amplitude
GENERIC_TIMESERIES_HEADER = "time_s,value"
SPECTRUM_HEADER = "detuning_hz,re,im"
INTENSITY_SPECTRUM_HEADER = "detuning_hz,intensity"
TRANSMISSION_HEADER = "detuning_hz,transmission"
GAIN_HEADER = "detuning_hz,intensity_gain"


def _fmt(x: float) -> str:
    return repr(float(x))


def _write_csv(path, header: str, columns) -> None:
    rows = zip(*columns)
    lines = [header]
    lines.extend(",".join(_fmt(v) for v in row) for row in rows)
    Path(path).write_text("\n".join(lines) + "\n", encoding="ascii")


def _read_csv(path, expected_headers) -> tuple[str, np.ndarray]:
    text = Path(path).read_text(encoding="ascii")
    lines = text.splitlines()
    if not lines:
        raise ValidationError(f"{path}: empty file")
    header = lines[0].strip()
    if header not in expected_headers:
        raise ValidationError(
            f"{path}: header {header!r} not one of {sorted(expected_headers)}"
        )
    n_cols = header.count(",") + 1
    try:
        data = np.array(
            [[float(v) for v in line.split(",")] for line in lines[1:] if line],
            dtype=np.float64,
        )
    except ValueError as exc:
        raise ValidationError(f"{path}: malformed numeric row ({exc})") from exc
    if data.ndim != 2 or data.shape[1] != n_cols:
        raise ValidationError(f"{path}: expected {n_cols} columns throughout")
    if data.shape[0] < 2:
        raise ValidationError(f"{path}: need at least 2 data rows")
    return header, data


def _recover_spacing(axis: np.ndarray, what: str) -> float:
    """Spacing of a uniform axis, snapped to the writer's exact float.

    The mean spacing is only accurate to rounding, so axis regeneration as
    axis[0] + k*spacing would drift by ulps; probing a few neighboring floats
    finds the exact spacing whenever the axis was generated that way.
    """
    n = axis.size
    base = (axis[-1] - axis[0]) / (n - 1)
    if not base > 0:
        raise ValidationError(f"{what}: axis must be strictly increasing")
    k = np.arange(n)
    for candidate in (base, np.nextafter(base, 0.0), np.nextafter(base, math.inf),
                      np.nextafter(np.nextafter(base, 0.0), 0.0),
                      np.nextafter(np.nextafter(base, math.inf), math.inf)):
        if np.array_equal(axis[0] + k * candidate, axis):
            return float(candidate)
    deviation = np.max(np.abs(np.diff(axis) - base))
    if deviation > 1e-6 * base:
        raise ValidationError(
            f"{what}: axis spacing varies by {deviation:.3e} (> 1e-6 relative)"
        )
    return float(base)


def _grid_from_times(times: np.ndarray, path) -> SamplingGrid:
    dt = _recover_spacing(times, f"{path}: time axis")
    try:
        return SamplingGrid(n=times.size, dt=dt, t_start=float(times[0]))
    except ValidationError as exc:
        raise ValidationError(f"{path}: {exc}") from exc


def write_waveform_csv(path, w: Waveform) -> None:
    """Write a real waveform as time_s,field rows."""
    if np.max(np.abs(w.samples.imag)) > 1e-9 * max(np.max(np.abs(w.samples)), 1e-300):
        raise ValidationError(
            "waveform has a significant imaginary part; write its intensity instead"
        )
    _write_csv(path, FIELD_HEADER, (w.grid.times(), w.samples.real))


def write_intensity_csv(path, trace: IntensityTrace) -> None:
    _write_csv(path, INTENSITY_HEADER, (trace.grid.times(), trace.samples))


def read_timeseries_csv(path) -> Waveform | IntensityTrace:
    """Read a time_s,field file as a Waveform or time_s,intensity as an IntensityTrace.

    The generic header time_s,value is also accepted and read as field
    amplitude (externally recorded traces follow the E = sqrt(I) convention).
    """
    header, data = _read_csv(
        path, {FIELD_HEADER, INTENSITY_HEADER, GENERIC_TIMESERIES_HEADER}
    )
    grid = _grid_from_times(data[:, 0], path)
    if header != INTENSITY_HEADER:
        return Waveform(grid, data[:, 1])
    try:
        return IntensityTrace(grid, data[:, 1])
    except ValidationError as exc:
        raise ValidationError(f"{path}: {exc}") from exc


def write_spectrum_csv(path, s: Spectrum) -> None:
    _write_csv(path, SPECTRUM_HEADER, (s.detunings(), s.samples.real, s.samples.imag))


def read_spectrum_csv(path, t_start: float | None = None) -> Spectrum:
    """Read a complex spectrum; the time origin is not stored in the file.

    Pass t_start of the originating grid to place the inverse transform on
    absolute times; the default centers the window on t = 0.
    """
    _, data = _read_csv(path, {SPECTRUM_HEADER})
    deltas = data[:, 0]
    n = deltas.size
    df = _recover_spacing(deltas, f"{path}: detuning axis")
    if abs(deltas[0] + (n // 2) * df) > 1e-6 * df * n:
        raise ValidationError(f"{path}: detuning axis is not centered on 0 Hz")
    dt = 1.0 / (n * df)
    if t_start is None:
        t_start = -0.5 * n * dt
    try:
        grid = SamplingGrid(n=n, dt=dt, t_start=t_start)
    except ValidationError as exc:
        raise ValidationError(f"{path}: {exc}") from exc
    return Spectrum(grid, data[:, 1] + 1j * data[:, 2])


def write_intensity_spectrum_csv(path, detunings: np.ndarray, values: np.ndarray) -> None:
    _write_csv(path, INTENSITY_SPECTRUM_HEADER, (detunings, values))


def write_gain_csv(path, detunings: np.ndarray, gain: np.ndarray) -> None:
    _write_csv(path, GAIN_HEADER, (detunings, gain))


def read_detuning_series_csv(path) -> tuple[np.ndarray, np.ndarray]:
    """Read any two-column detuning-indexed series (intensity or gain)."""
    _, data = _read_csv(path, {INTENSITY_SPECTRUM_HEADER, GAIN_HEADER})
    return data[:, 0], data[:, 1]


def write_transmission_csv(path, table: MeasuredTransmission) -> None:
    _write_csv(path, TRANSMISSION_HEADER, (table.detunings, table.transmissions))


def read_transmission_csv(path, extrapolation_value: float | None = None) -> MeasuredTransmission:
    """Load a tabulated transmission spectrum.

    extrapolation_value defaults to the mean of the two endpoint
    transmissions (the far-detuned background level).
    """
    _, data = _read_csv(path, {TRANSMISSION_HEADER})
    detunings, transmissions = data[:, 0], data[:, 1]
    if extrapolation_value is None:
        extrapolation_value = 0.5 * float(transmissions[0] + transmissions[-1])
    try:
        return MeasuredTransmission(detunings, transmissions, extrapolation_value)
    except ValidationError as exc:
        raise ValidationError(f"{path}: {exc}") from exc
