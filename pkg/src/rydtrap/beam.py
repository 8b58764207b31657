"""Gaussian tweezer intensity and its spherical-tensor decomposition.

The trap light is the paraxial Gaussian solution propagating along z. For a
nucleus at position R the intensity around it is expanded as

    I(R + r) = sum_kq f_kq(r; R) C^k_q(rhat),

with C^k_q the normalized (Racah) spherical harmonics; diagonal matrix
elements only ever consume the q = 0 profiles, but all |q| <= k are
computed so the on-axis q != 0 vanishing can be verified. Real spherical
harmonics are used internally: the intensity is real.

The expansion coefficients are evaluated by angular quadrature
(Gauss-Legendre in cos(theta) x trapezoid in phi) at every grid radius,
with an automatic refinement check. brute_force_average is the independent
oracle: the direct 3D quadrature of the wavefunction-averaged intensity.
"""

import json
import warnings

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy.special import lpmv, gammaln

from .constants import C
from .radial import RadialGrid, GridMismatchError


class ParaxialValidityWarning(UserWarning):
    """Waist within ~2 wavelengths: the paraxial profile is approximate."""


class QuadratureConvergenceError(RuntimeError):
    """Refining the angular rule moved a profile by more than tolerance."""


class TweezerBeam:
    """Focused Gaussian beam: wavelength, 1/e^2 waist, power, focus."""

    def __init__(self, wavelength, waist, power, focus=(0.0, 0.0, 0.0)):
        if wavelength <= 0 or waist <= 0:
            raise ValueError("wavelength and waist must be positive")
        if power < 0:
            raise ValueError("power must be nonnegative")
        self.wavelength = float(wavelength)
        self.waist = float(waist)
        self.power = float(power)
        self.focus = np.asarray(focus, dtype=float)
        if waist < 2 * wavelength:
            warnings.warn(
                "waist %.3g m is within two wavelengths of %.3g m; the "
                "paraxial Gaussian profile is approximate at this focusing"
                % (waist, wavelength), ParaxialValidityWarning, stacklevel=2)

    @property
    def rayleigh_range(self):
        return np.pi * self.waist**2 / self.wavelength

    @property
    def peak_intensity(self):
        return 2.0 * self.power / (np.pi * self.waist**2)

    @property
    def angular_frequency(self):
        return 2.0 * np.pi * C / self.wavelength

    def with_power(self, power):
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", ParaxialValidityWarning)
            return TweezerBeam(self.wavelength, self.waist, power, self.focus)

    def intensity(self, points):
        """Paraxial intensity at lab-frame points, shape (..., 3) in m."""
        points = np.asarray(points, dtype=float)
        rel = points - self.focus
        rho2 = rel[..., 0]**2 + rel[..., 1]**2
        z = rel[..., 2]
        w2 = self.waist**2 * (1.0 + (z / self.rayleigh_range)**2)
        return (2.0 * self.power / (np.pi * w2)) * np.exp(-2.0 * rho2 / w2)

    def descriptor(self):
        return {"wavelength_m": self.wavelength, "waist_m": self.waist,
                "power_w": self.power, "focus_m": self.focus.tolist()}


def real_sph_harm(k, q, cos_theta, phi):
    """Orthonormal real spherical harmonic Y~_kq(theta, phi).

    q = 0 is the usual zonal harmonic; q > 0 carries cos(q phi), q < 0
    carries sin(|q| phi), both with the sqrt(2) real-basis normalization.
    Signs follow the real-basis convention (no Condon-Shortley phase), so
    Y~_11 is positive along +x.
    """
    aq = abs(q)
    lognorm = 0.5 * (np.log((2 * k + 1) / (4.0 * np.pi))
                     + gammaln(k - aq + 1) - gammaln(k + aq + 1))
    # lpmv builds in the Condon-Shortley (-1)^q; cancel it
    cs = -1.0 if aq % 2 else 1.0
    base = cs * np.exp(lognorm) * lpmv(aq, k, cos_theta)
    if q == 0:
        return base * np.ones_like(phi)
    if q > 0:
        return np.sqrt(2.0) * base * np.cos(aq * phi)
    return np.sqrt(2.0) * base * np.sin(aq * phi)


class TensorField:
    """Radial profiles f_kq(r; R) of the intensity about a nucleus at R.

    Profiles use the real-harmonic convention
    I(R + r) = sum f_kq(r) * sqrt(4 pi/(2k+1)) * Y~_kq(rhat), which for
    q = 0 reduces to the Legendre form I = sum f_k0 P_k(cos theta).
    """

    def __init__(self, position, grid, k_max, profiles, beam_descriptor=None):
        self.position = np.asarray(position, dtype=float)
        self.grid = grid
        self.k_max = int(k_max)
        self.profiles_by_kq = profiles
        self.beam_descriptor = beam_descriptor or {}
        self.element_cache = {}

    def profile(self, k, q=0):
        return self.profiles_by_kq[(int(k), int(q))]

    def reconstruct(self, r_index, cos_theta, phi):
        """Reconstruction of I(R + r nhat) from the truncated expansion."""
        cos_theta = np.asarray(cos_theta, dtype=float)
        phi = np.asarray(phi, dtype=float)
        total = np.zeros(np.broadcast(cos_theta, phi).shape)
        for (k, q), prof in self.profiles_by_kq.items():
            scale = np.sqrt(4.0 * np.pi / (2 * k + 1))
            total += prof[r_index] * scale * real_sph_harm(k, q, cos_theta, phi)
        return total

    def to_json(self):
        return json.dumps({
            "position_m": self.position.tolist(),
            "grid_a0": self.grid.points.tolist(),
            "grid_scheme": self.grid.scheme,
            "k_max": self.k_max,
            "beam": self.beam_descriptor,
            "profiles": {"%d,%d" % kq: prof.tolist()
                         for kq, prof in self.profiles_by_kq.items()},
        })

    @classmethod
    def from_json(cls, text):
        raw = json.loads(text)
        grid = RadialGrid(np.asarray(raw["grid_a0"]), raw.get("grid_scheme", "custom"))
        profiles = {}
        for key, values in raw["profiles"].items():
            k, q = (int(p) for p in key.split(","))
            profiles[(k, q)] = np.asarray(values, dtype=float)
        return cls(np.asarray(raw["position_m"]), grid, raw["k_max"], profiles,
                   raw.get("beam", {}))

    def write_csv(self, stream):
        """Profiles as CSV: radius column then one column per (k, q)."""
        keys = sorted(self.profiles_by_kq)
        header = ["r_a0"] + ["f_%d_%d" % kq for kq in keys]
        stream.write(",".join(header) + "\n")
        cols = [self.grid.points] + [self.profiles_by_kq[kq] for kq in keys]
        for row in zip(*cols):
            stream.write(",".join("%.10e" % v for v in row) + "\n")


def _angular_nodes(k_max, n_theta, n_phi):
    cos_theta, w_theta = leggauss(n_theta)
    phi = 2.0 * np.pi * np.arange(n_phi) / n_phi
    w_phi = 2.0 * np.pi / n_phi
    ct = np.repeat(cos_theta, n_phi)
    ph = np.tile(phi, n_theta)
    weights = np.repeat(w_theta, n_phi) * w_phi
    st = np.sqrt(np.clip(1.0 - ct * ct, 0.0, None))
    nhat = np.stack([st * np.cos(ph), st * np.sin(ph), ct], axis=-1)
    return ct, ph, weights, nhat


def _decompose_once(beam, position, grid, k_max, n_theta, n_phi, a0_m):
    ct, ph, weights, nhat = _angular_nodes(k_max, n_theta, n_phi)
    # rows: one weighted real harmonic per (k, q), scaled so that the
    # angular sum gives f_kq directly
    kq_list = [(k, q) for k in range(k_max + 1) for q in range(-k, k + 1)]
    wmat = np.empty((len(kq_list), len(ct)))
    for i, (k, q) in enumerate(kq_list):
        scale = np.sqrt((2 * k + 1) / (4.0 * np.pi))
        wmat[i] = scale * real_sph_harm(k, q, ct, ph) * weights
    profiles = {kq: np.empty(len(grid)) for kq in kq_list}
    chunk = max(1, int(2e6 // len(ct)))
    r_m = grid.points * a0_m
    for start in range(0, len(grid), chunk):
        r_chunk = r_m[start:start + chunk]
        pts = position[None, None, :] + r_chunk[:, None, None] * nhat[None, :, :]
        ivals = beam.intensity(pts)
        block = ivals @ wmat.T
        for i, kq in enumerate(kq_list):
            profiles[kq][start:start + chunk] = block[:, i]
    return profiles


def decompose(beam, position, grid, k_max=4, n_theta=None, n_phi=None,
              check=True, tol=1e-6, a0_m=None):
    """Expand the intensity about `position` into radial tensor profiles.

    The angular quadrature is exact for harmonics up to the rule order;
    with check=True the rule is refined once and the result must move by
    less than tol * I0 or QuadratureConvergenceError is raised. Radii on
    the grid are in Bohr radii; a0_m overrides the Bohr-to-meter scale.
    """
    if a0_m is None:
        from .constants import A0
        a0_m = A0
    k_max = int(k_max)
    if k_max < 0 or k_max > 12:
        raise ValueError("k_max must be in [0, 12]")
    if n_theta is None:
        n_theta = max(2 * k_max + 2, 32)
    if n_phi is None:
        n_phi = max(4 * k_max, 32)
    position = np.asarray(position, dtype=float)

    coarse = _decompose_once(beam, position, grid, k_max, n_theta, n_phi, a0_m)
    fine = _decompose_once(beam, position, grid, k_max,
                           n_theta + 16, n_phi + 16, a0_m)
    if check:
        scale = max(beam.peak_intensity, 1e-300)
        worst = max(np.max(np.abs(fine[kq] - coarse[kq])) for kq in fine)
        if worst > tol * scale:
            raise QuadratureConvergenceError(
                "angular quadrature not converged: refinement moved a "
                "profile by %.3g of peak intensity (tol %.3g)"
                % (worst / scale, tol))
    return TensorField(position, grid, k_max, fine, beam.descriptor())


def brute_force_average(beam, wf, position, m=None, angular_density=None,
                        n_theta=96, n_phi=96, check=True, tol=2e-4, a0_m=None):
    """Direct 3D quadrature of the wavefunction-averaged intensity.

    Computes Int |psi|^2 I(r + R) d3r for psi = R_nl(r) Y_lm, without any
    tensor expansion; this is the oracle for the decomposed path. Pass m
    for the sampled wavefunction's l (uniform s-state density when l=0),
    or a callable angular_density(cos_theta, phi) normalized to integrate
    to 1 over the sphere.
    """
    if a0_m is None:
        from .constants import A0
        a0_m = A0
    position = np.asarray(position, dtype=float)

    def density_fn(ct, ph):
        if angular_density is not None:
            return angular_density(ct, ph)
        l = wf.l
        mm = 0 if m is None else int(m)
        if abs(mm) > l:
            raise ValueError("|m| > l")
        y = real_sph_harm(l, abs(mm), ct, ph)
        if mm == 0:
            return y * y
        # |Y_lm|^2 is phi independent; the real harmonic squared needs the
        # cos^2 -> 1/2 average restored
        lognorm = gammaln(l - abs(mm) + 1) - gammaln(l + abs(mm) + 1)
        norm = (2 * l + 1) / (4.0 * np.pi) * np.exp(lognorm)
        p = lpmv(abs(mm), l, ct)
        return norm * p * p * np.ones_like(ph)

    def run_full(nt, np_):
        ct, ph, weights, nhat = _angular_nodes(0, nt, np_)
        dens = density_fn(ct, ph)
        r_m = wf.grid.points * a0_m
        angular_avg = np.empty(len(wf.grid))
        chunk = max(1, int(2e6 // len(ct)))
        for start in range(0, len(wf.grid), chunk):
            pts = position[None, None, :] \
                + r_m[start:start + chunk, None, None] * nhat[None, :, :]
            ivals = beam.intensity(pts)
            angular_avg[start:start + chunk] = ivals @ (dens * weights)
        return wf.grid.integrate(wf.density() * angular_avg)

    coarse = run_full(n_theta, n_phi)
    fine = run_full(n_theta + 32, n_phi + 32)
    if check:
        scale = max(abs(fine), beam.peak_intensity * 1e-12, 1e-300)
        if abs(fine - coarse) > tol * scale:
            raise QuadratureConvergenceError(
                "3D quadrature not converged: refinement moved the average "
                "by %.3g relative" % (abs(fine - coarse) / scale))
    return fine
