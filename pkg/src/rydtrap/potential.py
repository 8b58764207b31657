"""Trapping potentials for Rydberg states in a red-detuned tweezer.

The total potential of a Rydberg atom is the sum of two pieces acting on
different charges: the polarizability shift of the ion core,
U_core = -alpha_core I / (2 eps0 c) (attractive for red detuning), and the
ponderomotive energy of the nearly free Rydberg electron, which is the
intensity expectation over its wavefunction (repulsive). The latter is
assembled per tensor rank k from exact angular factors and radial
elements of the intensity decomposition, so state dependence enters only
through (term, M) geometry and the effective quantum number n*.

Energies cross the interface in h*Hz; a positive trap depth means the
state is trapped at the focus.
"""

import math
import warnings

import numpy as np
from scipy.special import eval_legendre

from .constants import (AU_POLARIZABILITY, C, E_CHARGE, EPS0, H, M_E, AMU,
                        SPECIES_DATA)
from .angular import Term, HalfInt, angular_factor, reference_m
from .beam import TweezerBeam, ParaxialValidityWarning
from .radial import interpolated_reduced_element
from .spectroscopy import ritz_delta


class TruncationError(ValueError):
    """Field k_max below the highest rank the state couples to."""


class AtomicSpecies:
    """Trap-relevant atomic data: polarizabilities, series constants, defects.

    Quantum-defect models are keyed by term label; a model is either a flat
    defect or a Ritz coefficient list [d0, d2, ...] evaluated at each n.
    """

    def __init__(self, name, mass_kg, alpha_core_au, alpha_ground_au,
                 rydberg_cm1, ionization_cm1, defects, core_lines=(),
                 alpha_ratio_3p1=None, measured_ground_depth=None):
        if alpha_core_au <= 0:
            raise ValueError("alpha_core must be positive (red-detuned regime)")
        self.name = name
        self.mass_kg = float(mass_kg)
        self.alpha_core_au = float(alpha_core_au)
        self.alpha_ground_au = None if alpha_ground_au is None else float(alpha_ground_au)
        self.rydberg_cm1 = float(rydberg_cm1)
        self.ionization_cm1 = float(ionization_cm1)
        self.defects = dict(defects)
        self.core_lines = tuple(core_lines)
        self.alpha_ratio_3p1 = alpha_ratio_3p1
        self.measured_ground_depth = measured_ground_depth

    def has_defect(self, term):
        return _term_label(term) in self.defects

    def defect(self, term, n):
        """Quantum defect delta(term, n) from the stored model."""
        label = _term_label(term)
        try:
            model = self.defects[label]
        except KeyError:
            raise KeyError("no quantum-defect model for term %s in species %s"
                           % (label, self.name)) from None
        if isinstance(model, dict):
            return float(ritz_delta(model["ritz"], n))
        return float(model)

    def n_star(self, term, n):
        return n - self.defect(term, n)

    def __repr__(self):
        return "AtomicSpecies(%r, alpha_core=%g au)" % (self.name,
                                                        self.alpha_core_au)


def _term_label(term):
    return term.label if isinstance(term, Term) else str(term)


def _build_species(data, alpha_core, alpha_ground):
    if alpha_core is None:
        alpha_core = data["alpha_core_default"]
    try:
        core = data["alpha_core_au"][alpha_core]
    except KeyError:
        raise ValueError("unknown alpha_core profile %r (have %s)"
                         % (alpha_core, sorted(data["alpha_core_au"]))) from None
    ground = data["alpha_ground_au"]
    if ground:
        if alpha_ground is None:
            alpha_ground = data["alpha_ground_default"]
        try:
            ground = ground[alpha_ground]
        except KeyError:
            raise ValueError("unknown alpha_ground profile %r (have %s)"
                             % (alpha_ground, sorted(data["alpha_ground_au"]))) from None
    else:
        ground = None
    return AtomicSpecies(
        name=data["name"], mass_kg=data["mass_u"] * AMU,
        alpha_core_au=core, alpha_ground_au=ground,
        rydberg_cm1=data["rydberg_cm1"], ionization_cm1=data["ionization_cm1"],
        defects=data["defects"], core_lines=data.get("core_lines", ()),
        alpha_ratio_3p1=data.get("alpha_ratio_3p1"),
        measured_ground_depth=data.get("measured_ground_depth"))


def yb174(alpha_core=None, alpha_ground=None):
    """Yb-174 preset; alpha_core profiles: fitted (107 au), calculated (96 au)."""
    return _build_species(SPECIES_DATA["yb174"], alpha_core, alpha_ground)


def rb87(alpha_core=None, alpha_ground=None):
    """Rb-87 preset, alkali single-electron terms."""
    return _build_species(SPECIES_DATA["rb87"], alpha_core, alpha_ground)


SPECIES_PRESETS = {"yb174": yb174, "rb87": rb87}


class RydbergState:
    """One |n, term, M> level of a species with its derived n*."""

    def __init__(self, species, n, term, M=None):
        self.species = species
        self.n = int(n)
        self.term = term if isinstance(term, Term) else Term(term)
        if M is None:
            M = reference_m(self.term)
        self.M = M if isinstance(M, HalfInt) else HalfInt(M)
        if (self.M.twice - self.term.J.twice) % 2 != 0 \
                or abs(self.M.twice) > self.term.J.twice:
            raise ValueError("M=%s invalid for J=%s" % (self.M, self.term.J))
        n_star = species.n_star(self.term, self.n)
        if n_star <= self.term.L:
            raise ValueError(
                "n=%d gives n*=%.3f <= L=%d for term %s; below the first "
                "physical member of the series" % (self.n, n_star,
                                                   self.term.L, self.term.label))
        self.n_star = n_star

    @property
    def l(self):
        return self.term.L

    def energy_cm1(self):
        """Level energy E_I - Ry/n*^2."""
        return self.species.ionization_cm1 \
            - self.species.rydberg_cm1 / self.n_star ** 2

    def __repr__(self):
        return "RydbergState(%s, n=%d, %s, M=%s)" % (
            self.species.name, self.n, self.term.label, self.M)


def pond_prefactor(omega):
    """Ponderomotive energy per unit intensity, e^2/(2 eps0 c m_e w^2), J/(W/m^2)."""
    if omega <= 0:
        raise ValueError("omega must be positive")
    return E_CHARGE ** 2 / (2.0 * EPS0 * C * M_E * omega ** 2)


def polarizability_shift_hz(alpha_au, intensity):
    """Shift -alpha I/(2 eps0 c) in Hz for a polarizability in atomic units."""
    return -alpha_au * AU_POLARIZABILITY * intensity / (2.0 * EPS0 * C) / H


def core_shift(species, beam, point=(0.0, 0.0, 0.0)):
    """Ion-core polarizability shift at a lab-frame point, h*Hz (negative)."""
    return polarizability_shift_hz(species.alpha_core_au,
                                   beam.intensity(np.asarray(point, dtype=float)))


def ground_shift(species, beam, point=(0.0, 0.0, 0.0)):
    """Ground-state polarizability shift at a point, h*Hz (negative)."""
    if species.alpha_ground_au is None:
        raise ValueError("species %s has no ground-state polarizability"
                         % species.name)
    return polarizability_shift_hz(species.alpha_ground_au,
                                   beam.intensity(np.asarray(point, dtype=float)))


def ground_depth(species, beam):
    """Ground-state trap depth U(inf) - U(focus) in Hz (positive = trapping)."""
    if species.alpha_ground_au is None:
        raise ValueError("species %s has no ground-state polarizability"
                         % species.name)
    return -polarizability_shift_hz(species.alpha_ground_au, beam.peak_intensity)


def power_for_ground_depth(species, beam, depth_hz):
    """Power at which the model ground-state depth equals depth_hz (linear)."""
    per_watt = ground_depth(species, beam.with_power(1.0))
    return depth_hz / per_watt


def _beam_from_field(field):
    desc = field.beam_descriptor
    if not desc:
        raise ValueError("field carries no beam descriptor")
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", ParaxialValidityWarning)
        return TweezerBeam(desc["wavelength_m"], desc["waist_m"],
                           desc["power_w"], desc.get("focus_m", (0, 0, 0)))


def ponderomotive_shift(state, field, axis_angle_deg=0.0,
                        allow_truncation=False):
    """Ponderomotive expectation for a state, total and per rank, h*Hz.

    U_pond[k] = pref * A_k(term, M) * P_k(cos beta) * e_k(n*, L), where
    pref is the free-electron energy per intensity, A_k the exact angular
    factor, e_k the interpolated radial element of the rank-k intensity
    profile, and beta the angle of the quantization axis against the beam
    axis (the P_k factor rotates the axially symmetric q=0 component onto
    the diagonal of a tilted basis).
    """
    term = state.term
    needed = min(term.J.twice, 2 * term.L)
    needed -= needed % 2
    if field.k_max < needed and not allow_truncation:
        raise TruncationError(
            "state couples to rank %d but field holds k <= %d; decompose "
            "with a larger k_max or pass allow_truncation=True"
            % (needed, field.k_max))
    omega = 2.0 * np.pi * C / field.beam_descriptor["wavelength_m"]
    pref = pond_prefactor(omega)
    cos_beta = math.cos(math.radians(axis_angle_deg))
    by_k = {}
    for k in range(0, min(field.k_max, needed) + 1, 2):
        a_k = angular_factor(term, k, state.M)
        if a_k == 0.0 and k > 0:
            by_k[k] = 0.0
            continue
        e_k = interpolated_reduced_element(state.n_star, term.L, k, field)
        by_k[k] = pref * a_k * eval_legendre(k, cos_beta) * e_k / H
    total = float(sum(by_k.values()))
    return total, by_k


class PotentialBreakdown:
    """Per-term decomposition of the total potential at one configuration."""

    def __init__(self, u_core_hz, u_pond_by_k_hz, ground_depth_hz=None):
        self.u_core_hz = float(u_core_hz)
        self.u_pond_by_k_hz = dict(u_pond_by_k_hz)
        self.u_total_hz = self.u_core_hz + float(sum(u_pond_by_k_hz.values()))
        self.ground_depth_hz = ground_depth_hz


def potential_breakdown(state, field, axis_angle_deg=0.0,
                        allow_truncation=False):
    """Core + per-rank ponderomotive contributions at the field's nucleus."""
    beam = _beam_from_field(field)
    _, by_k = ponderomotive_shift(state, field, axis_angle_deg,
                                  allow_truncation)
    u_core = core_shift(state.species, beam, field.position)
    gdepth = None
    if state.species.alpha_ground_au is not None:
        gdepth = ground_depth(state.species, beam)
    return PotentialBreakdown(u_core, by_k, gdepth)


def trap_depth(state, field, axis_angle_deg=0.0, allow_truncation=False):
    """Rydberg trap depth U(inf) - U(nucleus) and its ratio to the ground depth.

    Positive depth means trapping. The ratio is taken against the
    ground-state depth of the same beam (same power and waist).
    """
    breakdown = potential_breakdown(state, field, axis_angle_deg,
                                    allow_truncation)
    depth_hz = -breakdown.u_total_hz
    if breakdown.ground_depth_hz is None:
        raise ValueError("species %s has no ground-state polarizability"
                         % state.species.name)
    return depth_hz, depth_hz / breakdown.ground_depth_hz


def power_for_rydberg_depth(state, field, depth_hz, axis_angle_deg=0.0):
    """Power at which this state's trap depth equals depth_hz (linear in P)."""
    current, _ = trap_depth(state, field, axis_angle_deg)
    power = field.beam_descriptor["power_w"]
    if current == 0.0:
        raise ValueError("state has zero depth; no power can reach the target")
    return power * depth_hz / current


def tensor_splitting(species, n, term, field, axis_angle_deg=0.0,
                     allow_truncation=False):
    """Per-M shifts relative to the M-average for one (n, term) manifold, Hz.

    The M-average removes the scalar (k=0) part, leaving the rank k >= 2
    light shift with its M^2 pattern; shift(M) = shift(-M) exactly.
    """
    term = term if isinstance(term, Term) else Term(term)
    twice_ms = range(-term.J.twice, term.J.twice + 1, 2)
    totals = {}
    for twice_m in twice_ms:
        m = HalfInt.from_twice(twice_m)
        state = RydbergState(species, n, term, m)
        total, _ = ponderomotive_shift(state, field, axis_angle_deg,
                                       allow_truncation)
        totals[m] = total
    avg = sum(totals.values()) / len(totals)
    return {m: total - avg for m, total in totals.items()}


def differential_shift(a, b, field, axis_angle_deg=0.0,
                       allow_truncation=False):
    """Total-potential difference U(a) - U(b) between two states, Hz.

    The core polarizability does not depend on the Rydberg electron's
    state, so it cancels exactly and only the ponderomotive parts enter.
    """
    if a.species is not b.species and a.species.name != b.species.name:
        raise ValueError("states belong to different species (%s vs %s)"
                         % (a.species.name, b.species.name))
    total_a, _ = ponderomotive_shift(a, field, axis_angle_deg, allow_truncation)
    total_b, _ = ponderomotive_shift(b, field, axis_angle_deg, allow_truncation)
    return total_a - total_b
