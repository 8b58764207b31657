"""Thermal dephasing of a two-level superposition in an optical trap.

A trapped atom at finite temperature samples the trap's intensity profile,
so a differential light shift between the two levels becomes a
motional-energy-dependent detuning. In the harmonic approximation the
orbit-averaged shift is linear in the per-axis energies,

    dnu(E) = dnu0 * (1 - sum_i E_i / (2 U0)),

which dephases a Ramsey sequence; an echo refocuses the static part and
is limited by trajectory evolution between the pulses and by T1. The
ensemble is sampled with a counter-based generator so results are
reproducible and independent of evaluation order.
"""

import math

import numpy as np

from .constants import KB, H


class ContrastCurve:
    """Sampled contrast versus time with its interpolated 1/e decay time."""

    def __init__(self, times_s, contrast):
        self.times_s = np.asarray(times_s, dtype=float)
        self.contrast = np.asarray(contrast, dtype=float)
        if self.times_s.shape != self.contrast.shape:
            raise ValueError("times and contrast must have equal length")

    @property
    def one_over_e_time_s(self):
        """First crossing of 1/e by linear interpolation; None if not reached."""
        target = 1.0 / math.e
        c = self.contrast
        below = np.nonzero(c < target)[0]
        if not len(below):
            return None
        j = below[0]
        if j == 0:
            return float(self.times_s[0])
        t0, t1 = self.times_s[j - 1], self.times_s[j]
        c0, c1 = c[j - 1], c[j]
        return float(t0 + (c0 - target) * (t1 - t0) / (c0 - c1))


class DephasingScenario:
    """Inputs of a dephasing simulation.

    trap_frequencies_hz is (radial, radial, axial); when omitted it is
    derived from the depth and the beam geometry as
    nu_r = sqrt(4 U0/(m w0^2))/2pi and nu_z = sqrt(2 U0/(m zR^2))/2pi.
    """

    def __init__(self, dnu0_hz, temperature_k, depth_hz, t1_s,
                 n_atoms=100000, seed=0, trap_frequencies_hz=None,
                 beam=None, mass_kg=None):
        if temperature_k < 0:
            raise ValueError("temperature must be nonnegative")
        if depth_hz <= 0:
            raise ValueError("depth must be positive")
        if n_atoms < 1:
            raise ValueError("need at least one atom")
        if t1_s <= 0:
            raise ValueError("T1 must be positive (math.inf allowed)")
        self.dnu0_hz = float(dnu0_hz)
        self.temperature_k = float(temperature_k)
        self.depth_hz = float(depth_hz)
        self.t1_s = float(t1_s)
        self.n_atoms = int(n_atoms)
        self.seed = int(seed)
        self.beam = beam
        self.mass_kg = mass_kg
        if trap_frequencies_hz is not None:
            freqs = tuple(float(f) for f in trap_frequencies_hz)
            if len(freqs) != 3 or any(f <= 0 for f in freqs):
                raise ValueError("trap_frequencies_hz must be 3 positive values")
            self.trap_frequencies_hz = freqs
        else:
            self.trap_frequencies_hz = None

    def frequencies_hz(self):
        """Trap frequencies, deriving them from beam geometry if needed."""
        if self.trap_frequencies_hz is not None:
            return self.trap_frequencies_hz
        if self.beam is None or self.mass_kg is None:
            raise ValueError("provide trap_frequencies_hz or beam and mass_kg")
        u0 = H * self.depth_hz
        w0 = self.beam.waist
        zr = self.beam.rayleigh_range
        nu_r = math.sqrt(4.0 * u0 / (self.mass_kg * w0 ** 2)) / (2 * math.pi)
        nu_z = math.sqrt(2.0 * u0 / (self.mass_kg * zr ** 2)) / (2 * math.pi)
        return (nu_r, nu_r, nu_z)

    def _rng(self):
        return np.random.Generator(np.random.Philox(key=self.seed))

    def sample_energies(self):
        """Per-axis motional energies, shape (n_atoms, 3), in joules.

        Each axis is an independent 1D harmonic Boltzmann energy
        (exponential with mean k_B T).
        """
        rng = self._rng()
        if self.temperature_k == 0.0:
            return np.zeros((self.n_atoms, 3))
        return rng.exponential(KB * self.temperature_k, size=(self.n_atoms, 3))

    def sample_energies_and_phases(self):
        """Energies as above plus uniform orbital phases, both (n_atoms, 3)."""
        rng = self._rng()
        if self.temperature_k == 0.0:
            energies = np.zeros((self.n_atoms, 3))
        else:
            energies = rng.exponential(KB * self.temperature_k,
                                       size=(self.n_atoms, 3))
        phases = rng.uniform(0.0, 2.0 * np.pi, size=(self.n_atoms, 3))
        return energies, phases


def _t1_envelope(times, t1_s):
    with np.errstate(invalid="ignore"):
        env = np.exp(-np.asarray(times, dtype=float) / t1_s)
    return env


def orbit_averaged_shift_hz(scenario, energies):
    """dnu for per-axis energies (J): dnu0 (1 - sum E_i/(2 U0))."""
    u0 = H * scenario.depth_hz
    return scenario.dnu0_hz * (1.0 - np.sum(energies, axis=-1) / (2.0 * u0))


def ramsey_contrast(scenario, times_s):
    """Ramsey fringe contrast at each time.

    Each atom accrues phase from its orbit-averaged shift; the ensemble
    coherence magnitude times the T1 envelope gives the contrast. The
    shift offset common to all atoms does not reduce contrast; only the
    energy spread does.
    """
    times = np.asarray(times_s, dtype=float)
    energies = scenario.sample_energies()
    dnu = orbit_averaged_shift_hz(scenario, energies)
    phase = 2.0 * np.pi * dnu[:, None] * times[None, :]
    coherence = np.abs(np.mean(np.exp(1j * phase), axis=0))
    return ContrastCurve(times, coherence * _t1_envelope(times, scenario.t1_s))


def ramsey_contrast_analytic(scenario, times_s):
    """Closed form of the same model for exponential per-axis energies.

    |<exp(i phi)>| = (1 + (2 pi dnu0 kBT t / (2 U0))^2)^(-3/2); used as a
    cross-check for the Monte Carlo path.
    """
    times = np.asarray(times_s, dtype=float)
    u0 = H * scenario.depth_hz
    s = 2.0 * np.pi * scenario.dnu0_hz * KB * scenario.temperature_k \
        / (2.0 * u0) * times
    mag = (1.0 + s ** 2) ** -1.5
    return ContrastCurve(times, mag * _t1_envelope(times, scenario.t1_s))


def echo_contrast(scenario, times_s):
    """Hahn-echo contrast at each total sequence time 2 tau.

    Along a harmonic trajectory x_i(t) = A_i cos(w_i t + phi_i) the
    instantaneous shift of axis i is -(dnu0 E_i/(2 U0)) (1 + cos(2 w_i t
    + 2 phi_i)); integrating + tau then - tau leaves the net echo phase

        -2 pi dnu0 (E_i/(2 U0)) [2 S(tau) - S(2 tau)] / (2 w_i),
        S(t) = sin(2 w_i t + 2 phi_i) - sin(2 phi_i).

    Static dephasing cancels exactly; both the frozen (w -> 0) and the
    fast-orbit (w -> infinity) limits refocus fully.
    """
    times = np.asarray(times_s, dtype=float)
    energies, phases = scenario.sample_energies_and_phases()
    u0 = H * scenario.depth_hz
    omega = 2.0 * np.pi * np.asarray(scenario.frequencies_hz())
    weight = energies / (2.0 * u0)                     # (atoms, 3)
    tau = times / 2.0
    total_phase = np.zeros((energies.shape[0], len(times)))
    for i in range(3):
        wt = omega[i] * tau[None, :]
        ph = phases[:, i][:, None]
        s_tau = np.sin(2.0 * wt + 2.0 * ph) - np.sin(2.0 * ph)
        s_2tau = np.sin(4.0 * wt + 2.0 * ph) - np.sin(2.0 * ph)
        total_phase += -2.0 * np.pi * scenario.dnu0_hz \
            * weight[:, i][:, None] * (2.0 * s_tau - s_2tau) / (2.0 * omega[i])
    coherence = np.abs(np.mean(np.exp(1j * total_phase), axis=0))
    return ContrastCurve(times, coherence * _t1_envelope(times, scenario.t1_s))


def thermal_shift_distribution(scenario):
    """Mean and standard deviation of the orbit-averaged shift, in Hz.

    For exponential per-axis energies: mean = dnu0 (1 - 3 kBT/(2 U0)),
    std = |dnu0| sqrt(3) kBT/(2 U0).
    """
    u0 = H * scenario.depth_hz
    x = KB * scenario.temperature_k / (2.0 * u0)
    return (scenario.dnu0_hz * (1.0 - 3.0 * x),
            abs(scenario.dnu0_hz) * math.sqrt(3.0) * x)
