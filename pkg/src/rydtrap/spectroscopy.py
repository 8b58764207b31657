"""Rydberg-series spectroscopy: quantum-defect fits and pair-state energetics.

Measured series energies follow E(n) = E_I - Ry/(n - delta(n))^2 with the
defect expanded in the extended Ritz form
delta(n) = d0 + d2/(n-d0)^2 + d4/(n-d0)^4 + ..., the d0 inside the
denominators kept self-consistent with the leading coefficient. Fits are
weighted Levenberg-Marquardt with an analytic Jacobian in the expansion
coefficients; the ionization threshold can be fit jointly on a high-n
window. Pair-state Foerster defects come from the same energy model.
"""

import csv

import numpy as np
from scipy.optimize import least_squares

from .constants import CM1_TO_MHZ

DEFAULT_SIGMA_MHZ = 4.0


class FitConvergenceError(RuntimeError):
    """Least-squares fit failed to converge."""


class EnergyRecord:
    """One measured level: principal quantum number, energy, uncertainty."""

    __slots__ = ("n", "energy_cm1", "sigma_mhz")

    def __init__(self, n, energy_cm1, sigma_mhz=DEFAULT_SIGMA_MHZ):
        self.n = int(n)
        self.energy_cm1 = float(energy_cm1)
        self.sigma_mhz = float(sigma_mhz)
        if self.n < 1:
            raise ValueError("n must be positive")
        if self.sigma_mhz <= 0:
            raise ValueError("sigma must be positive")

    def __repr__(self):
        return "EnergyRecord(n=%d, energy_cm1=%.4f, sigma_mhz=%g)" % (
            self.n, self.energy_cm1, self.sigma_mhz)


def load_energy_csv(source):
    """Read records from CSV with header n,energy_cm1[,sigma_mhz]."""
    if hasattr(source, "read"):
        stream = source
    else:
        stream = open(source, newline="")
    try:
        reader = csv.reader(row for row in stream if not row.startswith("#"))
        header = next(reader, None)
        if header is None:
            raise ValueError("empty energy file")
        header = [h.strip() for h in header]
        if header[:2] != ["n", "energy_cm1"]:
            raise ValueError("expected header n,energy_cm1[,sigma_mhz], got %r"
                             % ",".join(header))
        has_sigma = len(header) > 2 and header[2] == "sigma_mhz"
        records = []
        seen = set()
        for row in reader:
            if not row or not "".join(row).strip():
                continue
            n = int(row[0])
            if n in seen:
                raise ValueError("duplicate n=%d in energy file" % n)
            seen.add(n)
            sigma = float(row[2]) if has_sigma and len(row) > 2 else DEFAULT_SIGMA_MHZ
            records.append(EnergyRecord(n, float(row[1]), sigma))
        if not records:
            raise ValueError("energy file has no data rows")
        records.sort(key=lambda rec: rec.n)
        return records
    finally:
        if stream is not source:
            stream.close()


def bundled_energy_path(name="yb174_3s1_energies.csv"):
    """Filesystem path of a data table shipped with the package."""
    from importlib.resources import files
    return str(files("rydtrap.data").joinpath(name))


def ritz_delta(params, n):
    """delta(n) for Ritz coefficients [d0, d2, d4, ...]; vectorized in n."""
    params = np.asarray(params, dtype=float)
    n = np.asarray(n, dtype=float)
    x = 1.0 / (n - params[0]) ** 2
    delta = np.full_like(n, params[0])
    pw = np.ones_like(n)
    for coeff in params[1:]:
        pw = pw * x
        delta = delta + coeff * pw
    return delta if delta.ndim else float(delta)


def defect_from_energy(record, ionization_cm1, rydberg_cm1):
    """delta = n - sqrt(Ry/(E_I - E)); requires the level be bound."""
    gap = ionization_cm1 - record.energy_cm1
    if gap <= 0:
        raise ValueError("energy %.4f cm-1 at or above threshold %.4f cm-1"
                         % (record.energy_cm1, ionization_cm1))
    return record.n - np.sqrt(rydberg_cm1 / gap)


class RitzModel:
    """Fitted Ritz expansion with its threshold and series constants."""

    def __init__(self, params, ionization_cm1, rydberg_cm1, fit_range=None,
                 covariance=None, residuals_mhz=None, record_n=None):
        self.params = np.asarray(params, dtype=float)
        self.ionization_cm1 = float(ionization_cm1)
        self.rydberg_cm1 = float(rydberg_cm1)
        self.fit_range = fit_range
        self.covariance = covariance
        self.residuals_mhz = residuals_mhz
        self.record_n = record_n

    @property
    def uncertainties(self):
        if self.covariance is None:
            return None
        return np.sqrt(np.diag(self.covariance))

    def delta(self, n):
        return ritz_delta(self.params, n)

    def energy_cm1(self, n):
        n = np.asarray(n, dtype=float)
        e = self.ionization_cm1 - self.rydberg_cm1 / (n - self.delta(n)) ** 2
        return e if e.ndim else float(e)

    def rms_residual_mhz(self):
        if self.residuals_mhz is None:
            return None
        return float(np.sqrt(np.mean(np.square(self.residuals_mhz))))


def _model_energy(params, n, ionization_cm1, rydberg_cm1):
    return ionization_cm1 - rydberg_cm1 / (n - ritz_delta(params, n)) ** 2


def _select(records, fit_range):
    if fit_range is None:
        return list(records)
    lo, hi = fit_range
    return [rec for rec in records if lo <= rec.n <= hi]


def fit_ritz(records, order=8, fit_range=None, ionization_cm1=None,
             rydberg_cm1=None):
    """Weighted fit of the Ritz expansion at fixed ionization threshold.

    order is the highest inverse power retained (order=8 keeps d0..d8,
    five coefficients). The Jacobian is analytic in d2..d8; the d0 column
    is a central difference because d0 also enters every denominator.
    """
    if order < 0 or order % 2:
        raise ValueError("order must be a nonnegative even integer")
    if ionization_cm1 is None or rydberg_cm1 is None:
        raise ValueError("ionization_cm1 and rydberg_cm1 are required")
    used = _select(records, fit_range)
    n_params = 1 + order // 2
    if len(used) < n_params + 1:
        raise ValueError("need at least %d records in range, have %d"
                         % (n_params + 1, len(used)))
    n = np.array([rec.n for rec in used], dtype=float)
    energy = np.array([rec.energy_cm1 for rec in used])
    sigma = np.array([rec.sigma_mhz for rec in used])

    def residuals(params):
        model = _model_energy(params, n, ionization_cm1, rydberg_cm1)
        return (model - energy) * CM1_TO_MHZ / sigma

    def jacobian(params):
        cols = np.empty((len(n), len(params)))
        delta = ritz_delta(params, n)
        dE_ddelta = -2.0 * rydberg_cm1 / (n - delta) ** 3
        step = 1e-7
        p_hi = params.copy(); p_hi[0] += step
        p_lo = params.copy(); p_lo[0] -= step
        cols[:, 0] = (_model_energy(p_hi, n, ionization_cm1, rydberg_cm1)
                      - _model_energy(p_lo, n, ionization_cm1, rydberg_cm1)) \
            / (2 * step)
        for i in range(1, len(params)):
            cols[:, i] = dE_ddelta / (n - params[0]) ** (2 * i)
        return cols * (CM1_TO_MHZ / sigma)[:, None]

    d0_init = defect_from_energy(max(used, key=lambda rec: rec.n),
                                 ionization_cm1, rydberg_cm1)
    x0 = np.zeros(n_params)
    x0[0] = d0_init
    result = least_squares(residuals, x0, jac=jacobian, method="lm",
                           xtol=1e-14, ftol=1e-14, gtol=1e-14)
    if not result.success:
        raise FitConvergenceError("Ritz fit did not converge: %s" % result.message)
    jac = jacobian(result.x)
    try:
        cov = np.linalg.inv(jac.T @ jac)
    except np.linalg.LinAlgError:
        cov = None
    res_mhz = (_model_energy(result.x, n, ionization_cm1, rydberg_cm1)
               - energy) * CM1_TO_MHZ
    return RitzModel(result.x, ionization_cm1, rydberg_cm1, fit_range=fit_range,
                     covariance=cov, residuals_mhz=res_mhz, record_n=n.astype(int))


def fit_threshold(records, fit_range=None, rydberg_cm1=None,
                  ionization_guess_cm1=None):
    """Joint (E_I, flat delta) fit on a window where the defect is constant.

    Returns a RitzModel whose threshold is the fitted E_I; its parameter
    covariance covers (E_I, d0) and the E_I uncertainty is exposed as
    threshold_sigma_cm1 on the model.
    """
    if rydberg_cm1 is None:
        raise ValueError("rydberg_cm1 is required")
    used = _select(records, fit_range)
    if len(used) < 3:
        raise ValueError("need at least 3 records in range, have %d" % len(used))
    n = np.array([rec.n for rec in used], dtype=float)
    energy = np.array([rec.energy_cm1 for rec in used])
    sigma = np.array([rec.sigma_mhz for rec in used])
    if ionization_guess_cm1 is None:
        ionization_guess_cm1 = np.max(energy) + rydberg_cm1 / np.max(n) ** 2

    def residuals(x):
        e_i, d0 = x
        model = e_i - rydberg_cm1 / (n - d0) ** 2
        return (model - energy) * CM1_TO_MHZ / sigma

    def jacobian(x):
        _, d0 = x
        cols = np.empty((len(n), 2))
        cols[:, 0] = 1.0
        cols[:, 1] = -2.0 * rydberg_cm1 / (n - d0) ** 3
        return cols * (CM1_TO_MHZ / sigma)[:, None]

    d0_init = defect_from_energy(max(used, key=lambda rec: rec.n),
                                 ionization_guess_cm1, rydberg_cm1)
    result = least_squares(residuals, np.array([ionization_guess_cm1, d0_init]),
                           jac=jacobian, method="lm",
                           xtol=1e-14, ftol=1e-14, gtol=1e-14)
    if not result.success:
        raise FitConvergenceError("threshold fit did not converge: %s"
                                  % result.message)
    jac = jacobian(result.x)
    try:
        cov = np.linalg.inv(jac.T @ jac)
    except np.linalg.LinAlgError:
        cov = None
    e_i, d0 = result.x
    res_mhz = (e_i - rydberg_cm1 / (n - d0) ** 2 - energy) * CM1_TO_MHZ
    model = RitzModel([d0], e_i, rydberg_cm1, fit_range=fit_range,
                      covariance=None, residuals_mhz=res_mhz,
                      record_n=n.astype(int))
    model.joint_covariance = cov
    model.threshold_sigma_cm1 = None if cov is None else float(np.sqrt(cov[0, 0]))
    return model


def energy_of(model, n):
    """Series energy at n from a RitzModel (cm-1)."""
    return model.energy_cm1(n)


def forster_defect(pair_in, pair_out):
    """Pair-channel energy mismatch E(in) - E(out) in MHz.

    Negative values mean the outgoing pair lies above the incoming one;
    the sign convention makes the channel that dominates an attractive
    van der Waals interaction come out negative. States only need an
    energy_cm1() method. Antisymmetric under exchanging the pairs.
    """
    e_in = sum(state.energy_cm1() for state in pair_in)
    e_out = sum(state.energy_cm1() for state in pair_out)
    return (e_in - e_out) * CM1_TO_MHZ
