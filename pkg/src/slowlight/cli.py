"""Command-line front end.

Each subcommand wraps one library operation and speaks the package's CSV
formats.  Exit codes: 0 ok, 2 validation error, 3 numeric guard, 4 I/O error.
"""

from __future__ import annotations

import argparse
import math
import sys
import warnings
from pathlib import Path

import numpy as np

from . import io as sio
from .analysis import (
    MEASURED,
    MODEL,
    CompensationConfig,
    compensate_intensity_spectrum,
    decompose_components,
    export_gain_spectrum,
    measure_metrics,
    recover_waveform,
)
from .errors import NumericError, ValidationError
from .medium import (
    EitMedium,
    calibrate_from_transmission,
    intensity_transmission,
    transmission_lookup,
)
from .propagation import Channel, EdgeEnergyWarning, propagate_spectrum, warn_if_wrapped
from .scenario import BUNDLED_SCENARIOS, load_scenario, run_scenario
from .signal import (
    AMG,
    GAUSSIAN,
    IntensityTrace,
    PulseSpec,
    SamplingGrid,
    Waveform,
    amplitude_from_intensity,
    default_grid,
    intensity_of,
    synth,
)
from .spectral import Spectrum, dft, idft, intensity_spectrum

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_NUMERIC = 3
EXIT_IO = 4


def _add_medium_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--gamma-khz", type=float, help="EIT half-linewidth in kHz")
    p.add_argument("--z", type=float, help="normalized propagation length")
    p.add_argument("--scale", type=float, default=1.0, help="peak intensity transmission")
    p.add_argument("--peak", type=float, help="window peak transmission (calibration)")
    p.add_argument("--background", type=float, help="window background transmission")
    p.add_argument("--fwhm-khz", type=float, help="window FWHM in kHz (calibration)")


def _medium_from_args(args: argparse.Namespace) -> EitMedium:
    if args.gamma_khz is not None:
        if args.z is None:
            raise ValidationError("--gamma-khz needs --z")
        return EitMedium(gamma_eit=args.gamma_khz * 1e3, z=args.z, scale=args.scale)
    if args.peak is not None or args.background is not None or args.fwhm_khz is not None:
        if None in (args.peak, args.background, args.fwhm_khz):
            raise ValidationError("calibration needs --peak, --background and --fwhm-khz")
        return calibrate_from_transmission(args.peak, args.background, args.fwhm_khz * 1e3)
    raise ValidationError("specify a medium: --gamma-khz/--z or --peak/--background/--fwhm-khz")


def _load_waveform(path) -> Waveform:
    loaded = sio.read_timeseries_csv(path)
    if isinstance(loaded, IntensityTrace):
        return amplitude_from_intensity(loaded)
    return loaded


def _spectrum_on_grid(path, ref_grid: SamplingGrid) -> Spectrum:
    """Load a spectrum and pin it to a reference grid.

    A spectrum file stores only the detuning lattice; reconstructing dt from
    it can drift by an ulp, so the reference grid is used verbatim after
    checking the lattices agree.
    """
    s = sio.read_spectrum_csv(path)
    if s.grid.n != ref_grid.n or not math.isclose(s.grid.df, ref_grid.df, rel_tol=1e-9):
        raise ValidationError(
            f"{path}: spectrum lattice (n={s.grid.n}, df={s.grid.df:.6g} Hz) does "
            f"not match the reference grid (n={ref_grid.n}, df={ref_grid.df:.6g} Hz)"
        )
    return Spectrum(ref_grid, s.samples)


def _print_kv(key: str, value: float) -> None:
    print(f"{key} = {value!r}")


def _cmd_synth(args: argparse.Namespace) -> int:
    kind = args.kind
    t0 = args.t0_us * 1e-6 if args.t0_us is not None else None
    if args.intensity_fwhm_us is not None:
        if t0 is not None:
            raise ValidationError("give either --t0-us or --intensity-fwhm-us, not both")
        t0 = args.intensity_fwhm_us * 1e-6 / 2.0
    if t0 is None:
        raise ValidationError("give --t0-us or --intensity-fwhm-us")
    spec = PulseSpec(
        kind=kind,
        t0=t0,
        mod_depth=args.depth,
        mod_freq=args.mod_khz * 1e3,
        center=args.center_us * 1e-6,
    )
    if args.n is not None or args.window_us is not None:
        if args.n is None or args.window_us is None:
            raise ValidationError("grid overrides need both --n and --window-us")
        window = args.window_us * 1e-6
        grid = SamplingGrid(n=args.n, dt=window / args.n, t_start=spec.center - window / 2)
    else:
        grid = default_grid(spec)
    w = synth(spec, grid)
    sio.write_waveform_csv(args.out, w)
    if args.spectrum_out:
        sio.write_spectrum_csv(args.spectrum_out, dft(w))
    return EXIT_OK


def _cmd_calibrate(args: argparse.Namespace) -> int:
    medium = calibrate_from_transmission(args.peak, args.background, args.fwhm_khz * 1e3)
    _print_kv("gamma_khz", medium.gamma_eit / 1e3)
    _print_kv("z", medium.z)
    _print_kv("scale", medium.scale)
    return EXIT_OK


def _cmd_propagate(args: argparse.Namespace) -> int:
    w = _load_waveform(args.input)
    medium = _medium_from_args(args)
    if args.transmission_file:
        table = sio.read_transmission_csv(args.transmission_file)
        channel = Channel.hybrid(table, medium)
    else:
        channel = Channel.analytic(medium)
    s_out = propagate_spectrum(dft(w), channel)
    out = idft(s_out)
    warn_if_wrapped(out)
    sio.write_intensity_csv(args.out, intensity_of(out))
    if args.spectrum_out:
        sio.write_spectrum_csv(args.spectrum_out, s_out)
    return EXIT_OK


def _transmission_for(args: argparse.Namespace, deltas: np.ndarray) -> np.ndarray:
    if args.transmission_file:
        table = sio.read_transmission_csv(args.transmission_file)
        return np.asarray(transmission_lookup(table, deltas))
    medium = _medium_from_args(args)
    return np.asarray(intensity_transmission(medium, deltas))


def _cmd_compensate(args: argparse.Namespace) -> int:
    if args.time_ref:
        s_out = _spectrum_on_grid(args.spectrum, _load_waveform(args.time_ref).grid)
    else:
        s_out = sio.read_spectrum_csv(args.spectrum)
    deltas = s_out.detunings()
    transmission = _transmission_for(args, deltas)
    source = MEASURED if args.transmission_file else MODEL
    cfg = CompensationConfig(floor=args.floor, source=source)
    recovered = recover_waveform(s_out, transmission, cfg)
    sio.write_intensity_csv(args.out, intensity_of(recovered))
    if args.compensated_spectrum_out:
        compensated = compensate_intensity_spectrum(intensity_spectrum(s_out), transmission, cfg)
        sio.write_intensity_spectrum_csv(args.compensated_spectrum_out, deltas, compensated)
    if args.gain_out:
        sio.write_gain_csv(args.gain_out, deltas, export_gain_spectrum(transmission, cfg))
    return EXIT_OK


def _cmd_decompose(args: argparse.Namespace) -> int:
    w_in = _load_waveform(args.input)
    s_in = dft(w_in)
    s_out = _spectrum_on_grid(args.spectrum, w_in.grid)
    parts = decompose_components(s_out, s_in, args.mod_khz * 1e3)
    outdir = Path(args.out_dir)
    outdir.mkdir(parents=True, exist_ok=True)
    for label, w in (
        ("carrier", parts.carrier),
        ("left", parts.left),
        ("right", parts.right),
        ("reference", parts.reference),
    ):
        sio.write_intensity_csv(outdir / f"component_{label}.csv", intensity_of(w))
    _print_kv("carrier_delay_s", parts.carrier_delay)
    _print_kv("left_delay_s", parts.left_delay)
    _print_kv("right_delay_s", parts.right_delay)
    return EXIT_OK


def _cmd_metrics(args: argparse.Namespace) -> int:
    out = _load_waveform(args.out_file)
    ref = _load_waveform(args.in_file)
    m = measure_metrics(out, ref)
    _print_kv("delay_s", m.delay)
    _print_kv("loss", m.loss)
    _print_kv("nrmse", m.nrmse)
    _print_kv("fwhm_s", m.fwhm_time)
    return EXIT_OK


def _cmd_run(args: argparse.Namespace) -> int:
    if args.out_dir is not None and len(args.scenario) > 1:
        raise ValidationError("--out-dir applies to a single scenario only")
    for name in args.scenario:
        sc = load_scenario(name, out_dir=args.out_dir)
        summary = run_scenario(sc)
        print(f"# scenario {sc.name} -> {sc.out_dir}")
        for key, value in summary.items():
            _print_kv(key, value)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="slowlight",
        description="Spectral-domain slow-light simulator and compensation toolkit",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synth", help="synthesize a probe pulse to CSV")
    p.add_argument("--kind", choices=(GAUSSIAN, AMG), required=True)
    p.add_argument("--t0-us", type=float, help="Gaussian width parameter in microseconds")
    p.add_argument("--intensity-fwhm-us", type=float,
                   help="alternative width: intensity FWHM (= 2*t0) in microseconds")
    p.add_argument("--depth", type=float, default=0.0, help="modulation depth A")
    p.add_argument("--mod-khz", type=float, default=0.0, help="modulation frequency in kHz")
    p.add_argument("--center-us", type=float, default=0.0, help="pulse center in microseconds")
    p.add_argument("--n", type=int, help="grid size override (power of two)")
    p.add_argument("--window-us", type=float, help="grid window override in microseconds")
    p.add_argument("--out", required=True, help="output waveform CSV")
    p.add_argument("--spectrum-out", help="also write the pulse spectrum CSV")
    p.set_defaults(func=_cmd_synth)

    p = sub.add_parser("calibrate", help="fit a medium to a transmission window")
    p.add_argument("--peak", type=float, required=True)
    p.add_argument("--background", type=float, required=True)
    p.add_argument("--fwhm-khz", type=float, required=True)
    p.set_defaults(func=_cmd_calibrate)

    p = sub.add_parser("propagate", help="apply a channel to a waveform")
    p.add_argument("--input", required=True, help="input waveform CSV")
    _add_medium_args(p)
    p.add_argument("--transmission-file", help="measured transmission CSV (hybrid channel)")
    p.add_argument("--out", required=True, help="output intensity CSV")
    p.add_argument("--spectrum-out", help="also write the output spectrum CSV")
    p.set_defaults(func=_cmd_propagate)

    p = sub.add_parser("compensate", help="divide out the transmission and recover the pulse")
    p.add_argument("--spectrum", required=True, help="output spectrum CSV to compensate")
    _add_medium_args(p)
    p.add_argument("--transmission-file", help="measured transmission CSV")
    p.add_argument("--floor", type=float, default=1e-3)
    p.add_argument("--time-ref", help="waveform CSV fixing the time origin")
    p.add_argument("--out", required=True, help="recovered intensity CSV")
    p.add_argument("--compensated-spectrum-out")
    p.add_argument("--gain-out", help="write the required intensity gain spectrum")
    p.set_defaults(func=_cmd_compensate)

    p = sub.add_parser("decompose", help="split an output AMG spectrum into components")
    p.add_argument("--input", required=True, help="input waveform CSV (defines the grid)")
    p.add_argument("--spectrum", required=True, help="output spectrum CSV")
    p.add_argument("--mod-khz", type=float, required=True)
    p.add_argument("--out-dir", required=True)
    p.set_defaults(func=_cmd_decompose)

    p = sub.add_parser("metrics", help="delay/loss/shape metrics of one trace vs another")
    p.add_argument("--out", dest="out_file", required=True, help="measured output CSV")
    p.add_argument("--in", dest="in_file", required=True, help="reference input CSV")
    p.set_defaults(func=_cmd_metrics)

    p = sub.add_parser("run", help="run scenario files end to end")
    p.add_argument("scenario", nargs="+",
                   help=f"scenario file path or bundled name ({', '.join(BUNDLED_SCENARIOS)})")
    p.add_argument("--out-dir", help="output directory override (single scenario only)")
    p.set_defaults(func=_cmd_run)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        with warnings.catch_warnings():
            # a wrapped pulse invalidates results; fail loudly from the CLI
            warnings.simplefilter("error", EdgeEnergyWarning)
            try:
                return args.func(args)
            except EdgeEnergyWarning as warning:
                raise NumericError(str(warning)) from warning
    except ValidationError as exc:
        print(f"slowlight: error[validation]: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except NumericError as exc:
        print(f"slowlight: error[numeric]: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except OSError as exc:
        print(f"slowlight: error[io]: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
