"""Command-line interface.

Subcommands:

  point     P at one wavelength, or band-averaged P, for one wire
  sweep     CSV sweeps over radius / wavelength / temperature, with
            presets ``figure1`` (single-wavelength polarization versus
            size parameter) and ``figure4`` (band average versus
            diameter at three temperatures)
  compare   computed band averages against measured values (bundled
            reference set by default)
  polsim    end-to-end polarimeter simulation, writing scan files
  material  inspect the material database

Units at the interface: microns, kelvin, degrees.  Exit codes: 0 ok,
1 usage error, 2 numerical failure, 3 I/O error.  Every command is
deterministic given its flags (and seed); floats are printed with
shortest round-trip precision so outputs are byte-reproducible.
"""

from __future__ import annotations

import argparse
import math
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import __version__
from .errors import WirepolError
from .materials import (
    FITTED_RANGE_UM,
    load_database,
    model_for_temperature,
    permittivity,
    refraction_index,
    vacuum_model,
)
from .polarimetry import (
    SourceModel,
    extract_polarization,
    fit_cos_squared,
    simulate_scan,
    write_scan,
)
from .scattering import emissivity_pair
from .spectral import (
    BandFilter,
    COMPUTED_BAND,
    QuadratureConfig,
    band_averaged_polarization,
)

# Bundled reference measurements: (diameter_um, P_measured, standard error)
# for incandescent tungsten wires observed through the 0.45-0.75 micron
# filter stack.
DEFAULT_MEASUREMENTS = (
    (5.0, 0.241, 0.005),
    (17.0, 0.221, 0.003),
    (35.0, 0.208, 0.003),
    (100.0, 0.199, 0.004),
)


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on usage errors; this tool reserves 2 for
    # numerical failures
    def error(self, message):
        raise _UsageError(message)


def _fmt(value) -> str:
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _read_config(path):
    settings = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            text = line.split("#", 1)[0].strip()
            if not text:
                continue
            if "=" not in text:
                raise _UsageError(f"{path}:{lineno}: expected key = value")
            key, _, value = text.partition("=")
            settings[key.strip().replace("-", "_")] = value.strip()
    return settings


def _coerce_config_value(current, value: str):
    """Give a config-file string the type the flag would have produced."""
    if isinstance(current, bool):
        return value.lower() in ("1", "true", "yes", "on")
    if isinstance(current, int):
        return int(value)
    if isinstance(current, float):
        return float(value)
    if current is None:
        for cast in (int, float):
            try:
                return cast(value)
            except ValueError:
                pass
    return value


def _parse_band(text) -> BandFilter:
    try:
        lo, _, hi = str(text).partition(":")
        return BandFilter(float(lo), float(hi))
    except (ValueError, WirepolError) as exc:
        raise _UsageError(f"bad band {text!r} (expected lo:hi in microns): {exc}")


def _resolve_model(args):
    material = getattr(args, "material", "tungsten")
    if material == "vacuum":
        return vacuum_model()
    db = load_database(getattr(args, "material_db", None))
    return model_for_temperature(db, float(args.temp_k),
                                 include_tentative=bool(getattr(args, "include_tentative", False)))


def _radius_from(args) -> float:
    if getattr(args, "radius_um", None) is not None and getattr(args, "diameter_um", None) is not None:
        raise _UsageError("give either --radius-um or --diameter-um, not both")
    if getattr(args, "radius_um", None) is not None:
        return float(args.radius_um)
    if getattr(args, "diameter_um", None) is not None:
        return float(args.diameter_um) / 2.0
    raise _UsageError("a wire size is required (--radius-um or --diameter-um)")


def _warn_outside_fit(lambdas):
    lo, hi = FITTED_RANGE_UM
    out = [lam for lam in lambdas if not (lo <= lam <= hi)]
    if out:
        print(f"warning: {len(out)} wavelength(s) outside the fitted optical "
              f"range [{lo}, {hi}] micron; the analytic model is extrapolated",
              file=sys.stderr)


# ----------------------------------------------------------------- point

def _cmd_point(args) -> int:
    radius = _radius_from(args)
    model = _resolve_model(args)
    if (args.wavelength_um is None) == (args.band is None):
        raise _UsageError("give exactly one of --wavelength-um or --band")
    if args.wavelength_um is not None:
        lam = float(args.wavelength_um)
        _warn_outside_fit([lam])
        n = refraction_index(permittivity(model, lam))
        pair = emissivity_pair(2.0 * math.pi / lam, radius, n, tol=args.tol)
        total = pair.e_te + pair.e_tm
        if total < 1e-15:
            raise WirepolError("both emissivities vanish; polarization undefined")
        print(f"p = {_fmt((pair.e_te - pair.e_tm) / total)}")
        print(f"e_te = {_fmt(pair.e_te)}")
        print(f"e_tm = {_fmt(pair.e_tm)}")
        print(f"terms_used = {pair.terms_used}")
        print(f"truncation_error = {_fmt(pair.truncation_error_estimate)}")
    else:
        band = _parse_band(args.band)
        _warn_outside_fit([band.lambda_lo_um, band.lambda_hi_um])
        result = band_averaged_polarization(
            radius, float(args.temp_k), band, model,
            QuadratureConfig(nodes=args.nodes, check_nodes=2 * args.nodes))
        print(f"p_avg = {_fmt(result.p_avg)}")
        print(f"e_te_bar = {_fmt(result.e_te_bar)}")
        print(f"e_tm_bar = {_fmt(result.e_tm_bar)}")
        print(f"quadrature_nodes = {result.quadrature_nodes}")
        print(f"quadrature_error = {_fmt(result.est_quadrature_error)}")
    return 0


# ----------------------------------------------------------------- sweep

def _grid(lo: float, hi: float, points: int, spacing: str) -> np.ndarray:
    if points < 2 or not lo < hi:
        raise _UsageError("sweep needs lo < hi and points >= 2")
    if spacing == "log":
        if lo <= 0:
            raise _UsageError("log spacing requires lo > 0")
        return np.geomspace(lo, hi, points)
    return np.linspace(lo, hi, points)


def _write_csv(path, meta_lines, header, rows):
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            for line in meta_lines:
                fh.write(f"# {line}\n")
            fh.write(",".join(header) + "\n")
            for row in rows:
                fh.write(",".join(_fmt(v) for v in row) + "\n")
    except OSError:
        raise


def _sweep_rows(points, evaluate, threads):
    if threads and threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(evaluate, points))
    return [evaluate(p) for p in points]


def _cmd_sweep(args) -> int:
    if not args.output:
        raise _UsageError("sweep needs an output path (-o/--output)")
    meta = [f"command: {' '.join(args._argv)}", f"wirepol {__version__}"]
    threads = args.threads

    if args.preset == "figure1":
        lam = 0.5
        db = load_database(args.material_db)
        model = model_for_temperature(db, 2400.0, args.include_tentative)
        n = refraction_index(permittivity(model, lam))
        logs = np.linspace(-2.0, 3.0, args.points or 200)
        meta.append(f"material: {model.element} {model.temperature_k:g} K, lambda = {lam} um")

        def evaluate(log_size):
            radius = float(lam * 10.0 ** log_size / (2.0 * math.pi))
            pair = emissivity_pair(2.0 * math.pi / lam, radius, n, tol=args.tol)
            p = (pair.e_te - pair.e_tm) / (pair.e_te + pair.e_tm)
            return (float(log_size), radius, p, pair.e_te, pair.e_tm)

        rows = _sweep_rows(logs, evaluate, threads)
        _write_csv(args.output, meta,
                   ["log10_2pi_a_over_lambda", "radius_um", "p", "e_te", "e_tm"], rows)
        return 0

    if args.preset == "figure4":
        band = COMPUTED_BAND
        db = load_database(args.material_db)
        temps = (298.0, 1600.0, 2400.0)
        models = [model_for_temperature(db, t, args.include_tentative) for t in temps]
        diameters = np.geomspace(0.5, 120.0, args.points or 61)
        meta.append(f"band: [{band.lambda_lo_um}, {band.lambda_hi_um}] um; "
                    f"temperatures: {', '.join(f'{t:g} K' for t in temps)}")

        def evaluate(diameter):
            values = [band_averaged_polarization(diameter / 2.0, t, band, m).p_avg
                      for t, m in zip(temps, models)]
            return (float(diameter), *values)

        rows = _sweep_rows(diameters, evaluate, threads)
        _write_csv(args.output, meta,
                   ["diameter_um"] + [f"p_avg_{t:g}K" for t in temps], rows)
        return 0

    if args.preset == "table2":
        band = COMPUTED_BAND
        db = load_database(args.material_db)
        model = model_for_temperature(db, 2400.0, args.include_tentative)
        meta.append(f"band: [{band.lambda_lo_um}, {band.lambda_hi_um}] um; "
                    f"material: {model.element} {model.temperature_k:g} K")
        diameters = [m[0] for m in DEFAULT_MEASUREMENTS]

        def evaluate(diameter):
            res = band_averaged_polarization(diameter / 2.0, 2400.0, band, model)
            return (float(diameter), res.p_avg, res.e_te_bar, res.e_tm_bar,
                    res.est_quadrature_error)

        rows = _sweep_rows(diameters, evaluate, threads)
        _write_csv(args.output, meta,
                   ["diameter_um", "p_avg", "e_te_bar", "e_tm_bar",
                    "quadrature_error"], rows)
        return 0

    if args.variable is None:
        raise _UsageError("either --preset or --variable is required")
    model = _resolve_model(args)
    grid = _grid(args.lo, args.hi, args.points or 50, args.spacing)
    band = _parse_band(args.band) if args.band else None

    if args.variable == "radius":
        if band is None and args.wavelength_um is None:
            raise _UsageError("radius sweep needs --wavelength-um or --band")
        if band is None:
            lam = float(args.wavelength_um)
            n = refraction_index(permittivity(model, lam))

            def evaluate(radius):
                pair = emissivity_pair(2.0 * math.pi / lam, radius, n, tol=args.tol)
                p = (pair.e_te - pair.e_tm) / (pair.e_te + pair.e_tm)
                return (float(radius), p, pair.e_te, pair.e_tm,
                        pair.terms_used, pair.truncation_error_estimate)

            header = ["radius_um", "p", "e_te", "e_tm", "terms_used", "truncation_error"]
        else:
            def evaluate(radius):
                res = band_averaged_polarization(float(radius), float(args.temp_k),
                                                 band, model)
                return (float(radius), res.p_avg, res.e_te_bar, res.e_tm_bar,
                        res.est_quadrature_error)

            header = ["radius_um", "p_avg", "e_te_bar", "e_tm_bar", "quadrature_error"]
    elif args.variable == "wavelength":
        radius = _radius_from(args)

        def evaluate(lam):
            n = refraction_index(permittivity(model, float(lam)))
            pair = emissivity_pair(2.0 * math.pi / float(lam), radius, n, tol=args.tol)
            p = (pair.e_te - pair.e_tm) / (pair.e_te + pair.e_tm)
            return (float(lam), p, pair.e_te, pair.e_tm,
                    pair.terms_used, pair.truncation_error_estimate)

        header = ["wavelength_um", "p", "e_te", "e_tm", "terms_used", "truncation_error"]
    else:  # temperature
        radius = _radius_from(args)
        if band is None:
            raise _UsageError("temperature sweep needs --band")
        db = load_database(args.material_db)

        def evaluate(temp):
            mdl = model_for_temperature(db, float(temp), args.include_tentative)
            res = band_averaged_polarization(radius, float(temp), band, mdl)
            return (float(temp), mdl.temperature_k, res.p_avg,
                    res.e_te_bar, res.e_tm_bar)

        header = ["temperature_K", "model_temperature_K", "p_avg", "e_te_bar", "e_tm_bar"]

    meta.append(f"material: {model.element}, model T = {model.temperature_k:g} K")
    rows = _sweep_rows(grid, evaluate, threads)
    _write_csv(args.output, meta, header, rows)
    return 0


# --------------------------------------------------------------- compare

def _read_measurements(path):
    rows = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            text = line.split("#", 1)[0].strip()
            if not text:
                continue
            parts = [p for p in text.replace(",", " ").split() if p]
            if len(parts) != 3:
                raise _UsageError(
                    f"{path}:{lineno}: expected 'diameter_um p error', got {len(parts)} fields")
            try:
                rows.append(tuple(float(p) for p in parts))
            except ValueError as exc:
                raise _UsageError(f"{path}:{lineno}: {exc}")
    return rows


def _cmd_compare(args) -> int:
    measurements = (_read_measurements(args.measurements)
                    if args.measurements else list(DEFAULT_MEASUREMENTS))
    db = load_database(args.material_db)
    model = model_for_temperature(db, float(args.temp_k), args.include_tentative)
    band = _parse_band(args.band) if args.band else COMPUTED_BAND
    header = ["diameter_um", "p_measured", "error", "p_computed", "deviation_sigma"]
    print(",".join(header))
    rows = []
    for diameter, p_meas, err in measurements:
        res = band_averaged_polarization(diameter / 2.0, float(args.temp_k), band, model)
        dev = abs(p_meas - res.p_avg) / err
        row = (diameter, p_meas, err, res.p_avg, dev)
        rows.append(row)
        print(",".join(_fmt(v) for v in row))
    if args.output:
        _write_csv(args.output, [f"command: {' '.join(args._argv)}",
                                 f"model T = {model.temperature_k:g} K"], header, rows)
    return 0


# ---------------------------------------------------------------- polsim

def _cmd_polsim(args) -> int:
    if args.p_true is not None:
        if not (0.0 <= args.p_true <= 1.0):
            raise _UsageError("--p-true must be in [0, 1]")
        source = SourceModel(args.p_true, 1.0 - args.p_true,
                             args.axis_deg, args.background)
    else:
        source = SourceModel(args.i_polarized, args.i_unpolarized,
                             args.axis_deg, args.background)
    step1 = simulate_scan(source, step_deg=args.step_deg,
                          noise_rms=args.noise_rms, seed=args.seed)
    fit1 = fit_cos_squared(step1)
    theta_star = fit1.phase_deg
    scan_a = simulate_scan(source, polarizer_angle_deg=theta_star,
                           step_deg=args.step_deg, noise_rms=args.noise_rms,
                           seed=args.seed + 1)
    scan_b = simulate_scan(source, polarizer_angle_deg=theta_star + 90.0,
                           step_deg=args.step_deg, noise_rms=args.noise_rms,
                           seed=args.seed + 2)
    result = extract_polarization(scan_a, scan_b, theta_star_deg=theta_star)
    if args.output_prefix:
        write_scan(f"{args.output_prefix}.step1.dat", step1,
                   header="analyzer-only scan")
        write_scan(f"{args.output_prefix}.step2a.dat", scan_a,
                   header=f"polarizer at {theta_star!r} deg")
        write_scan(f"{args.output_prefix}.step2b.dat", scan_b,
                   header=f"polarizer at {theta_star + 90.0!r} deg")
    print(f"p_true = {_fmt(source.polarization)}")
    print(f"p_extracted = {_fmt(result.p)}")
    print(f"theta_star_deg = {_fmt(theta_star)}")
    print(f"amplitude_a = {_fmt(result.fit_a.amplitude)}")
    print(f"amplitude_b = {_fmt(result.fit_b.amplitude)}")
    for warning in result.warnings:
        print(f"warning: {warning}", file=sys.stderr)
    return 0


# -------------------------------------------------------------- material

def _cmd_material(args) -> int:
    db = load_database(args.material_db)
    if args.action == "list":
        for rec in db.records:
            print(f"{rec.element} {rec.temperature_k:g} K  "
                  f"({len(rec.bound_terms)} bound, {len(rec.free_terms)} free terms)")
        return 0
    model = model_for_temperature(db, float(args.temp_k), args.include_tentative)
    print(f"element = {model.element}")
    print(f"temperature_K = {_fmt(model.temperature_k)}")
    for t in model.bound_terms:
        print(f"bound: K0 = {_fmt(t.k0)}, lambda_s_um = {_fmt(t.lambda_s_um)}, "
              f"delta = {_fmt(t.delta)}")
    for t in model.free_terms:
        flags = "".join([" tentative" if t.tentative else "",
                         " estimated" if t.estimated else ""])
        print(f"free: sigma = {_fmt(t.sigma)}, lambda_r_um = {_fmt(t.lambda_r_um)}{flags}")
    if model.sigma0 is not None:
        print(f"sigma0 = {_fmt(model.sigma0)}")
    if model.note:
        print(f"note = {model.note}")
    return 0


# ----------------------------------------------------------------- main

def _add_common(parser):
    parser.add_argument("--material-db", default=None,
                        help="material database path (default: bundled table, "
                             "or WIREPOL_MATERIAL_DB)")
    parser.add_argument("--include-tentative", action="store_true",
                        help="include conduction terms whose relaxation "
                             "wavelength is only an upper bound")
    parser.add_argument("--config", default=None,
                        help="key = value file mirroring the flags; flags override")


def build_parser() -> _Parser:
    parser = _Parser(prog="wirepol",
                     description="Polarized thermal emission of thin metal wires")
    parser.add_argument("--version", action="version", version=f"wirepol {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("point", help="P at a point (single wavelength or band)")
    p.add_argument("--radius-um", type=float)
    p.add_argument("--diameter-um", type=float)
    p.add_argument("--wavelength-um", type=float)
    p.add_argument("--band", help="lo:hi in microns")
    p.add_argument("--temp-k", type=float, default=2400.0)
    p.add_argument("--material", choices=("tungsten", "vacuum"), default="tungsten")
    p.add_argument("--tol", type=float, default=1e-10)
    p.add_argument("--nodes", type=int, default=64)
    _add_common(p)
    p.set_defaults(func=_cmd_point)

    p = sub.add_parser("sweep", help="write a CSV sweep")
    p.add_argument("--preset", choices=("figure1", "figure4", "table2"))
    p.add_argument("--variable", choices=("radius", "wavelength", "temperature"))
    p.add_argument("--lo", type=float)
    p.add_argument("--hi", type=float)
    p.add_argument("--points", type=int)
    p.add_argument("--spacing", choices=("linear", "log"), default="linear")
    p.add_argument("--radius-um", type=float)
    p.add_argument("--diameter-um", type=float)
    p.add_argument("--wavelength-um", type=float)
    p.add_argument("--band", help="lo:hi in microns")
    p.add_argument("--temp-k", type=float, default=2400.0)
    p.add_argument("--material", choices=("tungsten", "vacuum"), default="tungsten")
    p.add_argument("--tol", type=float, default=1e-10)
    p.add_argument("--threads", type=int, default=1,
                   help="parallel evaluation; output is independent of N")
    p.add_argument("-o", "--output", default=None)
    _add_common(p)
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("compare", help="computed vs measured band averages")
    p.add_argument("--measurements", default=None,
                   help="CSV of diameter_um, p, error (default: bundled set)")
    p.add_argument("--temp-k", type=float, default=2400.0)
    p.add_argument("--band", help="lo:hi in microns (default 0.5:0.75)")
    p.add_argument("-o", "--output", default=None)
    _add_common(p)
    p.set_defaults(func=_cmd_compare)

    p = sub.add_parser("polsim", help="simulate the two-step polarimeter protocol")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--p-true", type=float)
    group.add_argument("--i-polarized", type=float)
    p.add_argument("--i-unpolarized", type=float, default=1.0)
    p.add_argument("--axis-deg", type=float, default=30.0)
    p.add_argument("--background", type=float, default=0.0)
    p.add_argument("--noise-rms", type=float, default=0.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--step-deg", type=float, default=0.5)
    p.add_argument("-o", "--output-prefix", default=None)
    _add_common(p)
    p.set_defaults(func=_cmd_polsim)

    p = sub.add_parser("material", help="inspect the material database")
    p.add_argument("action", choices=("list", "show"))
    p.add_argument("--temp-k", type=float, default=2400.0)
    _add_common(p)
    p.set_defaults(func=_cmd_material)

    return parser


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if getattr(args, "config", None):
            settings = _read_config(args.config)
            # flags given on the command line win over the config file
            given = {a.split("=", 1)[0].lstrip("-").replace("-", "_")
                     for a in argv if a.startswith("--")}
            for key, value in settings.items():
                if key in given or not hasattr(args, key):
                    continue
                setattr(args, key, _coerce_config_value(getattr(args, key), value))
        # --threads changes scheduling only, never results, so keep it out
        # of the recorded command line: outputs stay byte-identical
        recorded = []
        skip = False
        for token in argv:
            if skip:
                skip = False
                continue
            if token == "--threads":
                skip = True
                continue
            if token.startswith("--threads="):
                continue
            recorded.append(token)
        args._argv = ["wirepol"] + recorded
        return args.func(args)
    except _UsageError as exc:
        print(f"wirepol: error: {exc}", file=sys.stderr)
        return 1
    except WirepolError as exc:
        print(f"wirepol: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"wirepol: i/o error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
