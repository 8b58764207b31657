"""Trap-induced loss models: photoionization fits and autoionization rates.

Photoionization by the trap light adds a decay rate linear in power,
Gamma = Gamma0 + gamma_PI * P; fitting measured lifetimes versus power
separates the zero-power lifetime from the trap-induced part and converts
the slope to a cross section through the focal intensity per watt.

Autoionization of a doubly excited core happens when the trap light
couples the ion-core transition: in the isolated-core approximation the
loss rate is the core transition linewidth gamma' scaled by n*^-3, the
admixture set by the core trap depth over the detuning from each core
line, summed over lines.
"""

import csv

import numpy as np

from .constants import C, HBAR


class InsufficientDataError(ValueError):
    """Too few or degenerate records for the requested fit."""


class LifetimeRecord:
    """One lifetime measurement at a trap power."""

    __slots__ = ("power_w", "lifetime_s", "sigma_s")

    def __init__(self, power_w, lifetime_s, sigma_s=None):
        if power_w < 0 or lifetime_s <= 0:
            raise ValueError("power must be >= 0 and lifetime > 0")
        if sigma_s is not None and sigma_s <= 0:
            raise ValueError("sigma must be positive")
        self.power_w = float(power_w)
        self.lifetime_s = float(lifetime_s)
        self.sigma_s = None if sigma_s is None else float(sigma_s)

    def __repr__(self):
        return "LifetimeRecord(power_w=%g, lifetime_s=%g, sigma_s=%s)" % (
            self.power_w, self.lifetime_s, self.sigma_s)


def load_lifetime_csv(source):
    """Read records from CSV with header power_mw,lifetime_us[,sigma_us]."""
    if hasattr(source, "read"):
        stream = source
    else:
        stream = open(source, newline="")
    try:
        reader = csv.reader(row for row in stream if not row.startswith("#"))
        header = next(reader, None)
        if header is None:
            raise ValueError("empty lifetime file")
        header = [h.strip() for h in header]
        if header[:2] != ["power_mw", "lifetime_us"]:
            raise ValueError("expected header power_mw,lifetime_us[,sigma_us], "
                             "got %r" % ",".join(header))
        has_sigma = len(header) > 2 and header[2] == "sigma_us"
        records = []
        for row in reader:
            if not row or not "".join(row).strip():
                continue
            sigma = float(row[2]) * 1e-6 if has_sigma and len(row) > 2 else None
            records.append(LifetimeRecord(float(row[0]) * 1e-3,
                                          float(row[1]) * 1e-6, sigma))
        if not records:
            raise ValueError("lifetime file has no data rows")
        return records
    finally:
        if stream is not source:
            stream.close()


class PhotoionizationFit:
    """Linear decay model Gamma0 + gamma_pi * P with fit uncertainties."""

    def __init__(self, gamma0, gamma0_sigma, gamma_pi, gamma_pi_sigma,
                 sigma_pi_m2, sigma_pi_sigma_m2):
        self.gamma0 = gamma0
        self.gamma0_sigma = gamma0_sigma
        self.gamma_pi = gamma_pi
        self.gamma_pi_sigma = gamma_pi_sigma
        self.sigma_pi_m2 = sigma_pi_m2
        self.sigma_pi_sigma_m2 = sigma_pi_sigma_m2

    @property
    def zero_power_lifetime_s(self):
        return 1.0 / self.gamma0

    def rate(self, power_w):
        return self.gamma0 + self.gamma_pi * power_w


def fit_photoionization(records, beam, intensity_factor=1.0):
    """Weighted linear fit of decay rate versus power; slope to cross section.

    Rates are Gamma_i = 1/tau_i with standard errors propagated from the
    lifetime errors (uniform weights when none are given). The cross
    section assumes the atom samples the focal peak intensity; pass
    intensity_factor < 1 to apply a thermal-averaging correction.
    """
    if len(records) < 3:
        raise InsufficientDataError("need at least 3 records, have %d"
                                    % len(records))
    powers = np.array([rec.power_w for rec in records])
    if len(np.unique(powers)) < 3:
        raise InsufficientDataError("need at least 3 distinct powers")
    tau = np.array([rec.lifetime_s for rec in records])
    gamma = 1.0 / tau
    if all(rec.sigma_s is not None for rec in records):
        sig_tau = np.array([rec.sigma_s for rec in records])
        sig_gamma = sig_tau / tau ** 2
    else:
        sig_gamma = np.ones_like(gamma)
    w = 1.0 / sig_gamma ** 2

    # closed-form weighted straight line gamma = a + b P
    sw = np.sum(w)
    swp = np.sum(w * powers)
    swpp = np.sum(w * powers ** 2)
    swg = np.sum(w * gamma)
    swpg = np.sum(w * powers * gamma)
    det = sw * swpp - swp ** 2
    if det <= 0:
        raise InsufficientDataError("degenerate power values")
    a = (swpp * swg - swp * swpg) / det
    b = (sw * swpg - swp * swg) / det
    var_a = swpp / det
    var_b = sw / det
    if not all(rec.sigma_s is not None for rec in records):
        # scale unit-weight covariance by the residual variance
        resid = gamma - (a + b * powers)
        dof = max(len(records) - 2, 1)
        s2 = float(np.sum(w * resid ** 2) / dof)
        var_a *= s2
        var_b *= s2

    # gamma_pi P = sigma_pi I0/(hbar w): I0/P = 2 intensity_factor/(pi w0^2)
    omega = beam.angular_frequency
    per_watt = 2.0 * intensity_factor / (np.pi * beam.waist ** 2)
    to_sigma = HBAR * omega / per_watt
    return PhotoionizationFit(a, np.sqrt(var_a), b, np.sqrt(var_b),
                              b * to_sigma, np.sqrt(var_b) * to_sigma)


def trapped_lifetime_reduction(fit, power_w):
    """Fractional lifetime reduction 1 - tau(P)/tau(0) at a trap power."""
    total = fit.gamma0 + fit.gamma_pi * power_w
    return 1.0 - fit.gamma0 / total


def default_core_depth_hz(species, power_w):
    """Core trap depth anchored to the species' measured ground depth.

    The measured ground-state depth at its reference power is scaled by
    the core-to-ground polarizability ratio and linearly in power; this
    matches how the trap is calibrated in practice (the model peak
    intensity overstates the measured depth).
    """
    anchor = species.measured_ground_depth
    if anchor is None:
        raise ValueError("species %s has no measured ground-depth anchor"
                         % species.name)
    if species.alpha_ground_au is None:
        raise ValueError("species %s has no ground-state polarizability"
                         % species.name)
    ratio = species.alpha_core_au / species.alpha_ground_au
    return anchor["depth_hz"] * ratio * power_w / anchor["power_w"]


def autoionization_coefficient(species, beam, core_depth_hz=None):
    """n*-independent autoionization prefactor: rate = coefficient * n*^-3.

    coefficient = U_core/h * sum_j gamma'_j / Delta_nu_j over the stored
    core transitions, with detunings taken from the trap frequency.
    """
    if not species.core_lines:
        raise ValueError("species %s has no core transition lines"
                         % species.name)
    if core_depth_hz is None:
        core_depth_hz = default_core_depth_hz(species, beam.power)
    nu_trap = C / beam.wavelength
    total = 0.0
    for wavelength_m, gamma_prime in species.core_lines:
        detuning_hz = abs(nu_trap - C / wavelength_m)
        total += gamma_prime / detuning_hz
    return core_depth_hz * total


def autoionization_rate(state, beam, core_depth_hz=None):
    """Autoionization loss rate of a state in the trap light, s^-1."""
    coeff = autoionization_coefficient(state.species, beam, core_depth_hz)
    return coeff / state.n_star ** 3
