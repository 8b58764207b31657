"""Command-line interface tying the trap, spectroscopy, and loss models together.

Every physical input carries an explicit unit suffix (650nm, 9mW, 90kHz,
13uK, 108us, 107au, 90deg); bare numbers are rejected so quantities can
never be misread. Results are written as a JSON envelope (command, config
echo, data, provenance with a hash of the constants table) or as CSV with
the same metadata in comment lines. Exit codes: 1 usage, 2 bad data,
3 numerical nonconvergence.
"""

import argparse
import hashlib
import json
import math
import os
import re
import sys
import warnings
from fractions import Fraction

import numpy as np
from scipy.special import lpmv, gammaln

from . import __version__
from .constants import CM1_TO_MHZ, H, constants_hash
from .angular import (Term, HalfInt, angular_table, reference_m, wigner_3j,
                      UnsupportedTermError, TABLE_TERMS)
from .beam import (TweezerBeam, decompose, TensorField, brute_force_average,
                   QuadratureConvergenceError, ParaxialValidityWarning)
from .radial import RadialGrid, numerov_radial
from . import potential
from .potential import RydbergState, SPECIES_PRESETS
from . import spectroscopy
from .spectroscopy import FitConvergenceError
from . import loss as loss_mod
from .coherence import DephasingScenario, ramsey_contrast, echo_contrast

EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_NONCONVERGENCE = 3

_UNIT_SCALES = {
    "length": {"nm": 1e-9, "um": 1e-6, "mm": 1e-3, "m": 1.0},
    "power": {"uW": 1e-6, "mW": 1e-3, "W": 1.0},
    "frequency": {"Hz": 1.0, "kHz": 1e3, "MHz": 1e6, "GHz": 1e9},
    "temperature": {"uK": 1e-6, "mK": 1e-3, "K": 1.0},
    "time": {"ns": 1e-9, "us": 1e-6, "ms": 1e-3, "s": 1.0},
    "polarizability": {"au": 1.0},
    "angle": {"deg": 1.0},
}

_QUANTITY_RE = re.compile(r"^([+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)([a-zA-Z]+)$")


def unit_quantity(kind):
    """argparse type: number with a mandatory unit suffix of the given kind."""
    scales = _UNIT_SCALES[kind]

    def parse(text):
        match = _QUANTITY_RE.match(text.strip())
        if not match:
            raise argparse.ArgumentTypeError(
                "%r is not a number with a unit; expected e.g. %s" % (
                    text, " or ".join("1%s" % u for u in scales)))
        value, unit = match.groups()
        if unit not in scales:
            raise argparse.ArgumentTypeError(
                "unknown %s unit %r (valid: %s)" % (kind, unit,
                                                    ", ".join(scales)))
        return float(value) * scales[unit]

    parse.__name__ = kind
    return parse


def time_range(text):
    """start:stop:step with time units, stop inclusive; bare 0 allowed."""
    parts = text.split(":")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(
            "%r is not a start:stop:step time range" % text)

    def one(part):
        if part.strip() in ("0", "0.0"):
            return 0.0
        return unit_quantity("time")(part)

    start, stop, step = (one(p) for p in parts)
    if step <= 0 or stop <= start:
        raise argparse.ArgumentTypeError("empty or backwards time range %r" % text)
    count = int(round((stop - start) / step)) + 1
    return start + step * np.arange(count)


def n_range(text):
    """Inclusive integer range a:b."""
    parts = text.split(":")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError("%r is not an n range like 35:80" % text)
    try:
        lo, hi = int(parts[0]), int(parts[1])
    except ValueError:
        raise argparse.ArgumentTypeError("non-integer bounds in %r" % text)
    if hi < lo:
        raise argparse.ArgumentTypeError("backwards range %r" % text)
    return lo, hi


def term_type(text):
    try:
        return Term(text)
    except UnsupportedTermError as exc:
        raise argparse.ArgumentTypeError(str(exc))


def m_type(text):
    """Magnetic quantum number, integer or half-integer like '-3/2'."""
    try:
        return HalfInt(Fraction(text))
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError("bad sublevel %r" % text)


def pair_channel(text):
    """Parse '80 3S1 + 80 3S1 -> 80 3P2 + 79 3P2' into two state pairs."""
    sides = text.split("->")
    if len(sides) != 2:
        raise argparse.ArgumentTypeError("channel needs exactly one '->'")

    def side(chunk):
        parts = chunk.split("+")
        if len(parts) != 2:
            raise argparse.ArgumentTypeError(
                "each channel side needs exactly two states joined by '+'")
        states = []
        for part in parts:
            tokens = part.split()
            if len(tokens) != 2:
                raise argparse.ArgumentTypeError(
                    "state %r must be 'n TERM' like '80 3S1'" % part.strip())
            try:
                n = int(tokens[0])
            except ValueError:
                raise argparse.ArgumentTypeError("bad n in %r" % part.strip())
            states.append((n, term_type(tokens[1])))
        return states

    return side(sides[0]), side(sides[1])


class _Parser(argparse.ArgumentParser):
    """ArgumentParser that exits with the documented usage code."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, "%s: error: %s\n" % (self.prog, message))


def _add_output_args(parser, default_format):
    parser.add_argument("--output", metavar="PATH",
                        help="write the result here instead of stdout")
    parser.add_argument("--format", choices=("csv", "json"),
                        default=default_format,
                        help="output format (default %(default)s)")


def _add_beam_args(parser, power=True):
    parser.add_argument("--wavelength", type=unit_quantity("length"),
                        default=532e-9, metavar="L[nm]",
                        help="trap wavelength (default 532nm)")
    parser.add_argument("--waist", type=unit_quantity("length"),
                        default=650e-9, metavar="W[nm]",
                        help="beam 1/e^2 waist radius (default 650nm)")
    if power:
        group = parser.add_mutually_exclusive_group(required=True)
        group.add_argument("--power", type=unit_quantity("power"),
                           metavar="P[mW]", help="beam power")
        group.add_argument("--ground-depth", type=unit_quantity("frequency"),
                           metavar="F[MHz]",
                           help="choose the power giving this model "
                                "ground-state trap depth")


def _add_species_args(parser):
    parser.add_argument("--species", choices=sorted(SPECIES_PRESETS),
                        default="yb174", help="species preset (default yb174)")
    parser.add_argument("--alpha-core", type=unit_quantity("polarizability"),
                        metavar="A[au]", help="override core polarizability")
    parser.add_argument("--alpha-ground", type=unit_quantity("polarizability"),
                        metavar="A[au]",
                        help="override ground-state polarizability")


def _species_from_args(args):
    species = SPECIES_PRESETS[args.species]()
    if getattr(args, "alpha_core", None) is not None:
        species.alpha_core_au = args.alpha_core
    if getattr(args, "alpha_ground", None) is not None:
        species.alpha_ground_au = args.alpha_ground
    return species


def _beam_from_args(args, species=None):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", ParaxialValidityWarning)
        beam = TweezerBeam(args.wavelength, args.waist, 1.0)
    power = getattr(args, "power", None)
    if power is None:
        depth = getattr(args, "ground_depth", None)
        if depth is None:
            raise ValueError("either --power or --ground-depth is required")
        power = potential.power_for_ground_depth(species, beam, depth)
    return beam.with_power(power)


def _grid_for(n_max):
    npoints = max(4000, 40 * (n_max + 3))
    return RadialGrid.default(n_max + 3, npoints=npoints)


def _field_for(beam, n_max, k_max, args):
    """Decompose the beam about the focus, with optional on-disk caching."""
    grid = _grid_for(n_max)
    cache_dir = getattr(args, "cache_dir", None) \
        or os.environ.get("RYDTRAP_CACHE_DIR")
    path = None
    if cache_dir:
        blob = json.dumps([beam.descriptor(), len(grid.points),
                           grid.points[0], grid.points[-1], k_max],
                          sort_keys=True)
        digest = hashlib.sha256(blob.encode()).hexdigest()[:24]
        path = os.path.join(cache_dir, "field_%s.json" % digest)
        if os.path.exists(path):
            with open(path) as fh:
                return TensorField.from_json(fh.read())
    field = decompose(beam, (0.0, 0.0, 0.0), grid, k_max=k_max)
    if path:
        os.makedirs(cache_dir, exist_ok=True)
        with open(path, "w") as fh:
            fh.write(field.to_json())
    return field


def _envelope(command, config, data):
    return {
        "command": command,
        "config": config,
        "data": data,
        "provenance": {"package": "rydtrap", "version": __version__,
                       "constants_sha256": constants_hash()},
    }


def _emit(args, envelope, header=None, rows=None):
    """Write JSON envelope or CSV (with metadata comments) per --format."""
    stream = open(args.output, "w") if args.output else sys.stdout
    try:
        if args.format == "json" or rows is None:
            json.dump(envelope, stream, indent=2)
            stream.write("\n")
        else:
            stream.write("# command: %s\n" % envelope["command"])
            stream.write("# config: %s\n" % json.dumps(envelope["config"],
                                                       sort_keys=True))
            prov = envelope["provenance"]
            stream.write("# provenance: %s %s constants=%s\n"
                         % (prov["package"], prov["version"],
                            prov["constants_sha256"][:16]))
            stream.write(",".join(header) + "\n")
            for row in rows:
                stream.write(",".join(_cell(value) for value in row) + "\n")
    finally:
        if stream is not sys.stdout:
            stream.close()


def _cell(value):
    if isinstance(value, float):
        return "%.10g" % value
    return str(value)


# ---------------------------------------------------------------- commands

def _cmd_angular_table(args):
    rows = []
    for label, factors in angular_table(tuple(args.terms), tuple(args.ranks)):
        m_ref = reference_m(label)
        rows.append([label, str(m_ref)] + [str(f) for f in factors])
    header = ["term", "M"] + ["k%d" % k for k in args.ranks]
    data = {"ranks": list(args.ranks),
            "rows": [{"term": r[0], "M": r[1],
                      **{"k%d" % k: r[2 + i]
                         for i, k in enumerate(args.ranks)}} for r in rows]}
    _emit(args, _envelope("angular-table", {"terms": list(args.terms),
                                            "ranks": list(args.ranks)}, data),
          header, rows)


def _cmd_trap_depth(args):
    species = _species_from_args(args)
    beam = _beam_from_args(args, species)
    if args.n is not None:
        n_values = [args.n]
    else:
        if args.n_min is None or args.n_max is None:
            raise ValueError("pass --n or both --n-min and --n-max")
        n_values = list(range(args.n_min, args.n_max + 1))
    field = _field_for(beam, max(n_values), args.k_max, args)
    header = ["n", "n_star", "u_core_hz", "u_pond_hz", "u_total_hz",
              "depth_hz", "ratio_to_ground"]
    rows = []
    for n in n_values:
        state = RydbergState(species, n, args.series, args.m)
        breakdown = potential.potential_breakdown(state, field,
                                                  args.axis_angle)
        depth_hz = -breakdown.u_total_hz
        rows.append([n, state.n_star, breakdown.u_core_hz,
                     sum(breakdown.u_pond_by_k_hz.values()),
                     breakdown.u_total_hz, depth_hz,
                     depth_hz / breakdown.ground_depth_hz])
    config = {"species": args.species, "series": args.series.label,
              "power_w": beam.power, "waist_m": beam.waist,
              "wavelength_m": beam.wavelength,
              "axis_angle_deg": args.axis_angle,
              "alpha_core_au": species.alpha_core_au,
              "alpha_ground_au": species.alpha_ground_au}
    data = {"rows": [dict(zip(header, row)) for row in rows]}
    _emit(args, _envelope("trap-depth", config, data), header, rows)


def _cmd_tensor_shift(args):
    species = _species_from_args(args)
    beam = _beam_from_args(args, species)
    field = _field_for(beam, args.n, args.k_max, args)
    shifts = potential.tensor_splitting(species, args.n, args.series, field,
                                        args.axis_angle)
    header = ["M", "shift_hz"]
    rows = [[str(m), shift] for m, shift in
            sorted(shifts.items(), key=lambda kv: kv[0].twice)]
    config = {"species": args.species, "series": args.series.label,
              "n": args.n, "power_w": beam.power,
              "axis_angle_deg": args.axis_angle}
    spread = max(shifts.values()) - min(shifts.values())
    data = {"shifts_hz": {str(m): v for m, v in shifts.items()},
            "spread_hz": spread}
    _emit(args, _envelope("tensor-shift", config, data), header, rows)


def _cmd_magic_scan(args):
    species = _species_from_args(args)
    beam = _beam_from_args(args, species)
    n_lo, n_hi = args.n_range
    field = _field_for(beam, n_hi, args.k_max, args)
    header = ["n_a", "n_b", "n_star_a", "n_star_b", "differential_hz"]
    rows = []
    for n in range(n_lo, n_hi + 1):
        n_b = n + args.offset
        state_a = RydbergState(species, n, args.series_a)
        state_b = RydbergState(species, n_b, args.series_b)
        diff = potential.differential_shift(state_a, state_b, field,
                                            args.axis_angle)
        rows.append([n, n_b, state_a.n_star, state_b.n_star, diff])
    config = {"species": args.species, "series_a": args.series_a.label,
              "series_b": args.series_b.label, "offset": args.offset,
              "power_w": beam.power}
    data = {"rows": [dict(zip(header, row)) for row in rows]}
    _emit(args, _envelope("magic-scan", config, data), header, rows)


def _cmd_ritz_fit(args):
    species = SPECIES_PRESETS[args.species]()
    e_i = args.ionization_cm1 if args.ionization_cm1 is not None \
        else species.ionization_cm1
    ry = args.rydberg_cm1 if args.rydberg_cm1 is not None \
        else species.rydberg_cm1
    path = args.input or spectroscopy.bundled_energy_path()
    records = spectroscopy.load_energy_csv(path)
    model = spectroscopy.fit_ritz(records, order=args.order,
                                  fit_range=args.range, ionization_cm1=e_i,
                                  rydberg_cm1=ry)
    unc = model.uncertainties
    data = {
        "parameters": list(model.params),
        "parameter_names": ["d%d" % (2 * i) for i in range(len(model.params))],
        "uncertainties": None if unc is None else list(unc),
        "rms_residual_mhz": model.rms_residual_mhz(),
        "residuals_mhz": {int(n): float(r) for n, r in
                          zip(model.record_n, model.residuals_mhz)},
        "ionization_cm1": e_i,
        "rydberg_cm1": ry,
    }
    config = {"input": path, "order": args.order,
              "range": list(args.range) if args.range else None}
    _emit(args, _envelope("ritz-fit", config, data))


def _cmd_threshold_fit(args):
    species = SPECIES_PRESETS[args.species]()
    ry = args.rydberg_cm1 if args.rydberg_cm1 is not None \
        else species.rydberg_cm1
    path = args.input or spectroscopy.bundled_energy_path()
    records = spectroscopy.load_energy_csv(path)
    model = spectroscopy.fit_threshold(records, fit_range=args.range,
                                       rydberg_cm1=ry)
    sigma_mhz = None if model.threshold_sigma_cm1 is None \
        else model.threshold_sigma_cm1 * CM1_TO_MHZ
    data = {"ionization_cm1": model.ionization_cm1,
            "ionization_sigma_mhz": sigma_mhz,
            "delta0": float(model.params[0]),
            "rms_residual_mhz": model.rms_residual_mhz(),
            "rydberg_cm1": ry}
    config = {"input": path,
              "range": list(args.range) if args.range else None}
    _emit(args, _envelope("threshold-fit", config, data))


def _cmd_forster(args):
    species = _species_from_args(args)
    pair_in, pair_out = args.channel
    states_in = [RydbergState(species, n, term) for n, term in pair_in]
    states_out = [RydbergState(species, n, term) for n, term in pair_out]
    defect_mhz = spectroscopy.forster_defect(states_in, states_out)
    data = {
        "defect_mhz": defect_mhz,
        "in_states": [{"n": s.n, "term": s.term.label, "n_star": s.n_star,
                       "energy_cm1": s.energy_cm1()} for s in states_in],
        "out_states": [{"n": s.n, "term": s.term.label, "n_star": s.n_star,
                        "energy_cm1": s.energy_cm1()} for s in states_out],
    }
    config = {"species": args.species,
              "channel": "%s + %s -> %s + %s" % tuple(
                  "%d %s" % (s.n, s.term.label)
                  for s in states_in + states_out)}
    _emit(args, _envelope("forster", config, data))


def _cmd_pi_fit(args):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", ParaxialValidityWarning)
        beam = TweezerBeam(args.wavelength, args.waist, 1.0)
    records = loss_mod.load_lifetime_csv(args.input)
    fit = loss_mod.fit_photoionization(records, beam)
    reductions = {}
    for power in args.at_power:
        reductions["%g" % (power * 1e3)] = \
            loss_mod.trapped_lifetime_reduction(fit, power)
    data = {
        "gamma0_per_s": fit.gamma0, "gamma0_sigma_per_s": fit.gamma0_sigma,
        "gamma_pi_per_s_per_w": fit.gamma_pi,
        "gamma_pi_sigma_per_s_per_w": fit.gamma_pi_sigma,
        "sigma_pi_m2": fit.sigma_pi_m2,
        "sigma_pi_sigma_m2": fit.sigma_pi_sigma_m2,
        "zero_power_lifetime_us": fit.zero_power_lifetime_s * 1e6,
        "reduction_at_power_mw": reductions,
    }
    config = {"input": args.input, "waist_m": beam.waist,
              "wavelength_m": beam.wavelength}
    _emit(args, _envelope("pi-fit", config, data))


def _cmd_autoion(args):
    species = _species_from_args(args)
    beam = _beam_from_args(args, species)
    state = RydbergState(species, args.n, args.series)
    core_depth = args.core_depth
    rate = loss_mod.autoionization_rate(state, beam, core_depth)
    coeff = loss_mod.autoionization_coefficient(species, beam, core_depth)
    data = {"rate_per_s": rate,
            "lifetime_s": math.inf if rate == 0 else 1.0 / rate,
            "coefficient_per_s": coeff, "n_star": state.n_star}
    config = {"species": args.species, "n": args.n,
              "series": args.series.label, "power_w": beam.power}
    _emit(args, _envelope("autoion", config, data))


def _scenario_from_args(args, need_frequencies):
    species = SPECIES_PRESETS[args.species]()
    frequencies = None
    if args.trap_freq_radial is not None or args.trap_freq_axial is not None:
        if args.trap_freq_radial is None or args.trap_freq_axial is None:
            raise ValueError("pass both --trap-freq-radial and --trap-freq-axial")
        frequencies = (args.trap_freq_radial, args.trap_freq_radial,
                       args.trap_freq_axial)
    beam = None
    if frequencies is None and need_frequencies:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", ParaxialValidityWarning)
            beam = TweezerBeam(args.wavelength, args.waist, 1.0)
    return DephasingScenario(
        dnu0_hz=args.dnu, temperature_k=args.temp, depth_hz=args.depth,
        t1_s=args.t1, n_atoms=args.n, seed=args.seed,
        trap_frequencies_hz=frequencies, beam=beam,
        mass_kg=species.mass_kg)


def _emit_contrast(args, command, curve, scenario):
    header = ["time_us", "contrast"]
    rows = [[t * 1e6, c] for t, c in zip(curve.times_s, curve.contrast)]
    t_e = curve.one_over_e_time_s
    config = {"dnu0_hz": scenario.dnu0_hz,
              "temperature_k": scenario.temperature_k,
              "depth_hz": scenario.depth_hz, "t1_s": scenario.t1_s,
              "n_atoms": scenario.n_atoms, "seed": scenario.seed}
    data = {"one_over_e_time_us": None if t_e is None else t_e * 1e6,
            "times_us": [t * 1e6 for t in curve.times_s],
            "contrast": list(curve.contrast)}
    _emit(args, _envelope(command, config, data), header, rows)


def _cmd_ramsey_sim(args):
    scenario = _scenario_from_args(args, need_frequencies=False)
    curve = ramsey_contrast(scenario, args.times)
    _emit_contrast(args, "ramsey-sim", curve, scenario)


def _cmd_echo_sim(args):
    scenario = _scenario_from_args(args, need_frequencies=True)
    curve = echo_contrast(scenario, args.times)
    _emit_contrast(args, "echo-sim", curve, scenario)


def _term_angular_density(term, m):
    """Angular density of an LS-coupled |term, M> as a callable of (ct, phi).

    Decomposes |J M> over |L mL>|S mS> with squared Clebsch-Gordan weights;
    the result is phi independent.
    """
    weights = []
    for m_l in range(-term.L, term.L + 1):
        twice_ms = m.twice - 2 * m_l
        if abs(twice_ms) > term.S.twice or (twice_ms + term.S.twice) % 2:
            continue
        m_s = HalfInt.from_twice(twice_ms)
        w3 = wigner_3j(term.L, term.S, term.J, m_l, m_s, -m)
        cg2 = (term.J.twice + 1) * w3 * w3
        if cg2 > 0:
            weights.append((m_l, cg2))

    def density(cos_theta, phi):
        total = np.zeros_like(np.asarray(cos_theta, dtype=float))
        for m_l, cg2 in weights:
            am = abs(m_l)
            lognorm = (np.log((2 * term.L + 1) / (4.0 * np.pi))
                       + gammaln(term.L - am + 1) - gammaln(term.L + am + 1))
            p = lpmv(am, term.L, cos_theta)
            total = total + cg2 * np.exp(lognorm) * p * p
        return total * np.ones_like(np.asarray(phi, dtype=float))

    return density


def oracle_compare(species, n, term, m, beam, k_max=4):
    """Tensor-path shift vs direct 3D quadrature for one state, in Hz."""
    state = RydbergState(species, n, term, m)
    field = _field_for(beam, n, k_max, argparse.Namespace(cache_dir=None))
    tensor_hz, _ = potential.ponderomotive_shift(state, field)
    wf = numerov_radial(state.n_star, state.term.L, field.grid)
    density = _term_angular_density(state.term, state.M)
    avg_intensity = brute_force_average(beam, wf, field.position,
                                       angular_density=density)
    omega = beam.angular_frequency
    brute_hz = potential.pond_prefactor(omega) * avg_intensity / H
    return tensor_hz, brute_hz


def _cmd_oracle_check(args):
    species = _species_from_args(args)
    beam = _beam_from_args(args, species)
    results = []
    for n in args.n:
        state = RydbergState(species, n, args.series)
        tensor_hz, brute_hz = oracle_compare(species, n, args.series,
                                             state.M, beam, args.k_max)
        results.append({"n": n, "tensor_hz": tensor_hz, "brute_hz": brute_hz,
                        "relative_difference": abs(tensor_hz - brute_hz)
                        / abs(brute_hz)})
    config = {"species": args.species, "series": args.series.label,
              "power_w": beam.power}
    _emit(args, _envelope("oracle-check", config, {"comparisons": results}))


# ---------------------------------------------------------------- wiring

def build_parser():
    parser = _Parser(prog="rydtrap",
                     description="Rydberg tweezer trapping, spectroscopy, "
                                 "loss, and coherence calculations")
    parser.add_argument("--version", action="version",
                        version="rydtrap %s" % __version__)
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    def add(name, func, help_text, default_format):
        p = sub.add_parser(name, help=help_text, description=help_text)
        p.set_defaults(func=func)
        _add_output_args(p, default_format)
        p.add_argument("--threads", type=int, default=None, metavar="N",
                       help="reserved; computations currently run in a "
                            "single process")
        p.add_argument("--cache-dir", metavar="DIR",
                       help="cache intensity decompositions here "
                            "(default: RYDTRAP_CACHE_DIR)")
        return p

    p = add("angular-table", _cmd_angular_table,
            "exact angular factors per term and rank", "csv")
    p.add_argument("--terms", nargs="+", default=list(TABLE_TERMS))
    p.add_argument("--ranks", nargs="+", type=int, default=[0, 2, 4])

    p = add("trap-depth", _cmd_trap_depth,
            "total Rydberg trap depth and its ratio to the ground state", "csv")
    _add_species_args(p)
    _add_beam_args(p)
    p.add_argument("--series", type=term_type, default=Term("3S1"))
    p.add_argument("--n", type=int, help="single principal quantum number")
    p.add_argument("--n-min", type=int)
    p.add_argument("--n-max", type=int)
    p.add_argument("--m", type=m_type, default=None,
                   help="magnetic sublevel (default: 0 or 1/2)")
    p.add_argument("--axis-angle", type=unit_quantity("angle"), default=0.0,
                   metavar="A[deg]",
                   help="quantization axis tilt from the beam axis")
    p.add_argument("--k-max", type=int, default=4)

    p = add("tensor-shift", _cmd_tensor_shift,
            "per-M light shifts relative to the M average", "csv")
    _add_species_args(p)
    _add_beam_args(p)
    p.add_argument("--series", type=term_type, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--axis-angle", type=unit_quantity("angle"), default=0.0,
                   metavar="A[deg]")
    p.add_argument("--k-max", type=int, default=4)

    p = add("magic-scan", _cmd_magic_scan,
            "differential shift between two series versus n", "csv")
    _add_species_args(p)
    _add_beam_args(p)
    p.add_argument("--series-a", type=term_type, default=Term("3S1"))
    p.add_argument("--series-b", type=term_type, default=Term("3P0"))
    p.add_argument("--offset", type=int, default=-1,
                   help="n_b = n_a + offset (default -1)")
    p.add_argument("--n-range", type=n_range, required=True, metavar="A:B")
    p.add_argument("--axis-angle", type=unit_quantity("angle"), default=0.0,
                   metavar="A[deg]")
    p.add_argument("--k-max", type=int, default=4)

    p = add("ritz-fit", _cmd_ritz_fit,
            "fit the extended Ritz defect expansion to series energies",
            "json")
    p.add_argument("--species", choices=sorted(SPECIES_PRESETS),
                   default="yb174")
    p.add_argument("--input", metavar="CSV",
                   help="energy table (default: bundled series data)")
    p.add_argument("--range", type=n_range, default=None, metavar="A:B")
    p.add_argument("--order", type=int, default=8)
    p.add_argument("--ionization-cm1", type=float, default=None)
    p.add_argument("--rydberg-cm1", type=float, default=None)

    p = add("threshold-fit", _cmd_threshold_fit,
            "joint ionization-threshold and flat-defect fit", "json")
    p.add_argument("--species", choices=sorted(SPECIES_PRESETS),
                   default="yb174")
    p.add_argument("--input", metavar="CSV")
    p.add_argument("--range", type=n_range, default=None, metavar="A:B")
    p.add_argument("--rydberg-cm1", type=float, default=None)

    p = add("forster", _cmd_forster,
            "pair-channel energy mismatch from the defect models", "json")
    _add_species_args(p)
    p.add_argument("--channel", type=pair_channel, required=True,
                   metavar="'n T + n T -> n T + n T'")

    p = add("pi-fit", _cmd_pi_fit,
            "photoionization fit of lifetime versus trap power", "json")
    p.add_argument("--input", required=True, metavar="CSV")
    p.add_argument("--wavelength", type=unit_quantity("length"),
                   default=532e-9, metavar="L[nm]")
    p.add_argument("--waist", type=unit_quantity("length"), default=650e-9,
                   metavar="W[nm]")
    p.add_argument("--at-power", type=unit_quantity("power"), nargs="*",
                   default=[9e-3], metavar="P[mW]",
                   help="report lifetime reduction at these powers")

    p = add("autoion", _cmd_autoion,
            "isolated-core autoionization rate estimate", "json")
    _add_species_args(p)
    _add_beam_args(p)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--series", type=term_type, default=Term("3S1"))
    p.add_argument("--core-depth", type=unit_quantity("frequency"),
                   default=None, metavar="F[MHz]",
                   help="override the core trap depth")

    for name, func, help_text in [
            ("ramsey-sim", _cmd_ramsey_sim,
             "Monte Carlo Ramsey contrast of a trapped thermal ensemble"),
            ("echo-sim", _cmd_echo_sim,
             "Monte Carlo Hahn-echo contrast with orbital dynamics")]:
        p = add(name, func, help_text, "csv")
        p.add_argument("--dnu", type=unit_quantity("frequency"), required=True,
                       metavar="F[kHz]", help="peak differential shift")
        p.add_argument("--temp", type=unit_quantity("temperature"),
                       required=True, metavar="T[uK]")
        p.add_argument("--depth", type=unit_quantity("frequency"),
                       required=True, metavar="F[MHz]", help="trap depth")
        p.add_argument("--t1", type=unit_quantity("time"), required=True,
                       metavar="T[us]")
        p.add_argument("--n", type=int, default=100000, help="ensemble size")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--times", type=time_range, default=time_range("0:60us:1us"),
                       metavar="START:STOP:STEP")
        p.add_argument("--species", choices=sorted(SPECIES_PRESETS),
                       default="yb174", help="species preset for the mass")
        p.add_argument("--wavelength", type=unit_quantity("length"),
                       default=532e-9, metavar="L[nm]")
        p.add_argument("--waist", type=unit_quantity("length"),
                       default=650e-9, metavar="W[nm]")
        p.add_argument("--trap-freq-radial", type=unit_quantity("frequency"),
                       default=None, metavar="F[kHz]")
        p.add_argument("--trap-freq-axial", type=unit_quantity("frequency"),
                       default=None, metavar="F[kHz]")

    p = add("oracle-check", _cmd_oracle_check,
            "compare the tensor-expansion shift with direct 3D quadrature",
            "json")
    _add_species_args(p)
    _add_beam_args(p)
    p.add_argument("--series", type=term_type, default=Term("3S1"))
    p.add_argument("--n", type=int, nargs="+", required=True)
    p.add_argument("--k-max", type=int, default=4)

    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args.func(args)
    except (QuadratureConvergenceError, FitConvergenceError) as exc:
        print("error: %s" % exc, file=sys.stderr)
        return EXIT_NONCONVERGENCE
    except (ValueError, KeyError, OSError, UnsupportedTermError,
            loss_mod.InsufficientDataError) as exc:
        print("error: %s" % exc, file=sys.stderr)
        return EXIT_DATA
    return 0


if __name__ == "__main__":
    sys.exit(main())
