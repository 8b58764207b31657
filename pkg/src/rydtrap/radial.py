"""Hydrogenic radial wavefunctions, grids, and radial integrals.

Integer-n wavefunctions are evaluated from the closed-form generalized
Laguerre representation with a dynamically rescaled three-term recurrence
(everything assembled in log space), which is stable to n well above 100.
Fractional effective quantum numbers n* are handled two ways: the production
path interpolates the radial integrals across integer n (they vary slowly
with n), and a Numerov integrator for the radial equation at arbitrary n*
serves as the independent oracle.

All radii are in Bohr radii (a0) and the wavefunctions satisfy
Int r^2 R_nl(r)^2 dr = 1.
"""

import numpy as np
from scipy.integrate import simpson

_HUGE = 1e150
_LOG_HUGE = np.log(_HUGE)


class GridMismatchError(ValueError):
    """Raised when a radial profile does not live on the wavefunction's grid."""


class RadialGrid:
    """Monotone radial grid in Bohr radii with a named spacing scheme."""

    def __init__(self, points, scheme="custom"):
        points = np.asarray(points, dtype=float)
        if points.ndim != 1 or len(points) < 8:
            raise ValueError("grid needs at least 8 points")
        if np.any(np.diff(points) <= 0):
            raise ValueError("grid points must be strictly increasing")
        if points[0] < 0:
            raise ValueError("radii must be nonnegative")
        self.points = points
        self.scheme = scheme

    @classmethod
    def default(cls, n_max, npoints=4000, r_min=1e-3):
        """Square-root-spaced grid from r_min to the 2.5 n_max^2 outer bound.

        Square-root spacing equidistributes the radial oscillations of
        high-n states, so a fixed point count resolves both the inner
        oscillations and the outer turning point.
        """
        r_max = 2.5 * n_max**2
        u = np.linspace(np.sqrt(r_min), np.sqrt(r_max), npoints)
        return cls(u * u, scheme="sqrt")

    @property
    def r_max(self):
        return self.points[-1]

    def covers(self, n):
        # tolerate float roundoff of the squared outer bound
        return self.r_max >= 2.5 * n * n * (1.0 - 1e-12)

    def integrate(self, values):
        """Composite Simpson quadrature of samples against this grid."""
        return simpson(values, x=self.points)

    def __len__(self):
        return len(self.points)

    def __eq__(self, other):
        if not isinstance(other, RadialGrid):
            return NotImplemented
        return self.points.shape == other.points.shape and np.array_equal(
            self.points, other.points)

    def __hash__(self):
        return hash((len(self.points), self.points[0], self.points[-1]))


class RadialWavefunction:
    """Sampled radial wavefunction R(r) with its quantum numbers."""

    def __init__(self, n, l, n_star, samples, grid):
        self.n = n
        self.l = l
        self.n_star = n_star
        self.samples = samples
        self.grid = grid

    def density(self):
        """Radial probability density r^2 R^2 on the grid."""
        return self.grid.points**2 * self.samples**2

    def norm(self):
        return self.grid.integrate(self.density())

    def node_count(self):
        """Sign changes of R(r), ignoring the numerically dead outer tail."""
        s = self.samples
        scale = np.max(np.abs(s))
        live = np.abs(s) > 1e-12 * scale
        signs = np.sign(s[live])
        return int(np.sum(signs[1:] * signs[:-1] < 0))


def _laguerre_log(k, alpha, x):
    """log|L_k^alpha(x)| and sign, vectorized over x, via rescaled recurrence.

    The three-term recurrence in the degree overflows for the k ~ n seen
    here, so each point carries a log-scale offset that absorbs large
    magnitudes as they appear.
    """
    x = np.asarray(x, dtype=float)
    prev = np.ones_like(x)                     # L_0
    offset = np.zeros_like(x)
    if k == 0:
        return np.zeros_like(x), np.ones_like(x)
    cur = 1.0 + alpha - x                      # L_1
    for m in range(1, k):
        nxt = ((2 * m + 1 + alpha - x) * cur - (m + alpha) * prev) / (m + 1)
        big = np.abs(nxt) > _HUGE
        if np.any(big):
            cur = np.where(big, cur / _HUGE, cur)
            nxt = np.where(big, nxt / _HUGE, nxt)
            offset = np.where(big, offset + _LOG_HUGE, offset)
        prev, cur = cur, nxt
    sign = np.where(cur >= 0, 1.0, -1.0)
    mag = np.abs(cur)
    logmag = np.where(mag > 0, np.log(np.where(mag > 0, mag, 1.0)), -np.inf)
    return logmag + offset, sign


def hydrogen_radial(n, l, grid):
    """Normalized hydrogen R_nl sampled on grid (atomic units).

    Stable at high n: the Laguerre polynomial, the r^l power and the
    exponential are combined in log space point by point.
    """
    from scipy.special import gammaln

    n, l = int(n), int(l)
    if not 1 <= n <= 150:
        raise ValueError("n out of supported range [1, 150]")
    if not 0 <= l < n:
        raise ValueError("require 0 <= l < n, got l=%d n=%d" % (l, n))

    r = grid.points
    rho = 2.0 * r / n
    lognorm = 0.5 * (3 * np.log(2.0 / n) + gammaln(n - l) - np.log(2.0 * n)
                     - gammaln(n + l + 1))
    loglag, sign = _laguerre_log(n - l - 1, 2 * l + 1, rho)
    with np.errstate(divide="ignore", invalid="ignore"):
        logpow = l * np.log(rho) if l > 0 else np.zeros_like(rho)
        logpow = np.where(rho > 0, logpow, -np.inf if l > 0 else 0.0)
    logR = lognorm + logpow - rho / 2.0 + loglag
    samples = sign * np.exp(logR)
    samples = np.where(np.isfinite(samples), samples, 0.0)
    return RadialWavefunction(n, l, float(n), samples, grid)


def numerov_radial(n_star, l, grid):
    """Coulomb-potential radial wavefunction at fractional n* via Numerov.

    Solves u'' = f(r) u for u = r R with E = -1/(2 n*^2), transformed to
    x = sqrt(r) where the grid is uniform: v'' = G(x) v with u = sqrt(x) v
    and G = 4 x^2 f(x^2) + 3/(4 x^2). Integration runs inward from the
    classically forbidden outer region. For non-integer n* the solution is
    irregular at the origin; it is cut inside half the inner turning point,
    where the density r^2 R^2 is negligible for the states of interest.
    """
    n_star = float(n_star)
    l = int(l)
    if n_star <= l:
        raise ValueError("require n* > l")
    x = np.sqrt(grid.points)
    dx = np.diff(x)
    if grid.scheme != "sqrt" and not np.allclose(dx, dx[0], rtol=1e-8):
        raise GridMismatchError("Numerov integration needs a sqrt-spaced grid")
    h = dx[0]
    r = grid.points

    with np.errstate(divide="ignore"):
        f = l * (l + 1) / r**2 - 2.0 / r + 1.0 / n_star**2
        g = 4.0 * r * f + 3.0 / (4.0 * r)      # G(x) with r = x^2

    npts = len(x)
    v = np.zeros(npts)
    v[-1] = 0.0
    v[-2] = 1e-12
    w = 1.0 - (h * h / 12.0) * g
    # Numerov: v_{i-1} = ((12 - 10 w_i) v_i - w_{i+1} v_{i+1}) / w_{i-1}
    for i in range(npts - 2, 0, -1):
        v[i - 1] = ((12.0 - 10.0 * w[i]) * v[i] - w[i + 1] * v[i + 1]) / w[i - 1]
        if abs(v[i - 1]) > _HUGE:
            # rescale the whole array so finished outer samples stay on the
            # same scale as the still-running inner ones
            v /= _HUGE
    u = np.sqrt(x) * v
    with np.errstate(divide="ignore", invalid="ignore"):
        R = np.where(r > 0, u / r, 0.0)

    # Inward integration amplifies the irregular solution near the origin,
    # and the uniform-in-x step cannot resolve the centrifugal 1/x^2 term
    # there (h^2 G >> 1). Cut the unresolved inner region and, for
    # non-integer n*, everything inside half the inner turning point; the
    # density r^2 R^2 is negligible in both for the high-n states used here.
    r_cut = 0.0
    unresolved = np.nonzero(h * h * np.abs(g) > 0.3)[0]
    if len(unresolved) and unresolved[0] == 0:
        last = np.nonzero(np.diff(unresolved) > 1)[0]
        stop = unresolved[-1] if not len(last) else unresolved[last[0]]
        r_cut = r[stop + 1]
    if abs(n_star - round(n_star)) > 1e-9 and l > 0:
        # inner turning point r- = n*^2 (1 - sqrt(1 - l(l+1)/n*^2))
        arg = 1.0 - l * (l + 1) / n_star**2
        r_in = n_star**2 * (1.0 - np.sqrt(max(arg, 0.0)))
        r_cut = max(r_cut, 0.5 * r_in)
    if r_cut > 0.0:
        R = np.where(r < r_cut, 0.0, R)

    norm = grid.integrate(r**2 * R**2)
    R = R / np.sqrt(norm)
    return RadialWavefunction(None, l, n_star, R, grid)


def expectation_radius(n, l):
    """Analytic hydrogen <r> = (3 n^2 - l(l+1))/2 in Bohr radii."""
    n, l = int(n), int(l)
    if not (n >= 1 and 0 <= l < n):
        raise ValueError("invalid (n, l)")
    return (3.0 * n * n - l * (l + 1)) / 2.0


def radial_integral(wf, profile, profile_grid=None):
    """Int r^2 R(r)^2 f(r) dr for a diagonal wavefunction.

    The profile must be sampled on the wavefunction's own grid (pass
    profile_grid to have that checked); radial profiles from an intensity
    decomposition already carry the grid they were built on.
    """
    profile = np.asarray(profile, dtype=float)
    if profile_grid is not None and profile_grid != wf.grid:
        raise GridMismatchError("profile grid does not match wavefunction grid")
    if profile.shape != wf.samples.shape:
        raise GridMismatchError("profile length %d != grid length %d"
                                % (len(profile), len(wf.samples)))
    return wf.grid.integrate(wf.density() * profile)


def _element_at_integer_n(n, l, k, field):
    cache = field.element_cache
    key = (n, l, k)
    if key not in cache:
        wf_key = (n, l)
        wf = cache.get(wf_key)
        if wf is None:
            wf = hydrogen_radial(n, l, field.grid)
            cache[wf_key] = wf
        cache[key] = radial_integral(wf, field.profile(k, 0))
    return cache[key]


def interpolated_reduced_element(n_star, l, k, field):
    """Radial integral e_k at fractional n*, interpolated across integer n.

    The integer-n integrals vary slowly with n, so a cubic through the four
    surrounding integer-n values (two on each side) reproduces the
    fractional-n* element; integer n* returns the integer-n value exactly.
    """
    n_star = float(n_star)
    l = int(l)
    if n_star <= l:
        raise ValueError("require n* > l")
    if abs(n_star - round(n_star)) < 1e-9:
        n = int(round(n_star))
        if not field.grid.covers(n):
            raise ValueError("field grid does not cover n=%d" % n)
        return _element_at_integer_n(n, l, k, field)

    n_lo = int(np.floor(n_star))
    bracket = [n_lo - 1, n_lo, n_lo + 1, n_lo + 2]
    if bracket[0] < l + 1:
        raise ValueError("n* = %.3f too low for a 4-point bracket at l=%d"
                         % (n_star, l))
    if not field.grid.covers(bracket[-1]):
        raise ValueError("field grid does not cover the n=%d bracket"
                         % bracket[-1])
    values = [_element_at_integer_n(n, l, k, field) for n in bracket]
    # cubic Lagrange interpolation through the four bracket points
    coeffs = np.polyfit(bracket, values, 3)
    return float(np.polyval(coeffs, n_star))
