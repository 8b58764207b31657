"""Gaussian beam optics and the spherical-tensor intensity decomposition."""

import io
import json
import warnings

import numpy as np
import pytest
from scipy.integrate import quad

from rydtrap.beam import (ParaxialValidityWarning, QuadratureConvergenceError,
                          TensorField, TweezerBeam, brute_force_average,
                          decompose, real_sph_harm)
from rydtrap.constants import A0, C
from rydtrap.radial import RadialGrid, hydrogen_radial, radial_integral

from conftest import POWER, WAIST, WAVELENGTH


class TestTweezerBeam:
    def test_peak_intensity(self, beam9):
        want = 2.0 * POWER / (np.pi * WAIST**2)
        assert beam9.peak_intensity == pytest.approx(want, rel=1e-12)
        assert beam9.peak_intensity == pytest.approx(1.35611e10, rel=1e-4)

    def test_rayleigh_range(self, beam9):
        want = np.pi * WAIST**2 / WAVELENGTH
        assert beam9.rayleigh_range == pytest.approx(want, rel=1e-12)
        assert beam9.rayleigh_range == pytest.approx(2.49497e-6, rel=1e-4)

    def test_angular_frequency(self, beam9):
        assert beam9.angular_frequency == pytest.approx(
            2.0 * np.pi * C / WAVELENGTH, rel=1e-12)

    def test_radial_profile_at_focus(self, beam9):
        i0 = beam9.peak_intensity
        assert beam9.intensity((0.0, 0.0, 0.0)) == pytest.approx(i0)
        assert beam9.intensity((WAIST, 0.0, 0.0)) == pytest.approx(
            i0 * np.exp(-2.0), rel=1e-12)

    def test_axial_profile(self, beam9):
        i0 = beam9.peak_intensity
        zr = beam9.rayleigh_range
        assert beam9.intensity((0.0, 0.0, zr)) == pytest.approx(
            i0 / 2.0, rel=1e-12)
        assert beam9.intensity((0.0, 0.0, -3 * zr)) == pytest.approx(
            i0 / 10.0, rel=1e-12)

    def test_vectorized_points(self, beam9):
        pts = np.zeros((4, 7, 3))
        pts[..., 2] = np.linspace(0, 1e-6, 28).reshape(4, 7)
        vals = beam9.intensity(pts)
        assert vals.shape == (4, 7)
        assert vals[0, 0] == pytest.approx(beam9.peak_intensity)

    def test_power_scaling(self, beam9):
        double = beam9.with_power(2 * POWER)
        pt = (0.3e-6, -0.2e-6, 0.9e-6)
        assert double.intensity(pt) == pytest.approx(
            2.0 * beam9.intensity(pt), rel=1e-12)

    def test_tight_focus_warns(self):
        with pytest.warns(ParaxialValidityWarning):
            TweezerBeam(532e-9, 650e-9, 1e-3)
        with warnings.catch_warnings():
            warnings.simplefilter("error")
            TweezerBeam(532e-9, 1500e-9, 1e-3)  # w0 > 2 lambda: no warning

    def test_validation(self):
        with pytest.raises(ValueError):
            TweezerBeam(-1e-9, 650e-9, 1e-3)
        with pytest.raises(ValueError):
            TweezerBeam(532e-9, 650e-9, -2e-3)

    def test_descriptor_round_trip(self, beam9):
        desc = beam9.descriptor()
        assert desc["wavelength_m"] == WAVELENGTH
        assert desc["waist_m"] == WAIST
        assert desc["power_w"] == POWER


class TestRealSphHarm:
    def test_orthonormality(self):
        from numpy.polynomial.legendre import leggauss
        ct, w_ct = leggauss(24)
        phi = 2.0 * np.pi * np.arange(48) / 48
        w_phi = 2.0 * np.pi / 48
        pairs = [(0, 0), (1, 0), (1, 1), (2, -1), (2, 2), (3, -3), (4, 0)]
        for i, (k1, q1) in enumerate(pairs):
            for k2, q2 in pairs[i:]:
                total = 0.0
                for c, wc in zip(ct, w_ct):
                    y1 = real_sph_harm(k1, q1, c, phi)
                    y2 = real_sph_harm(k2, q2, c, phi)
                    total += wc * w_phi * np.sum(y1 * y2)
                want = 1.0 if (k1, q1) == (k2, q2) else 0.0
                assert total == pytest.approx(want, abs=1e-12)

    def test_explicit_low_orders(self):
        ct = np.array([0.3, -0.8])
        phi = np.array([0.4, 2.0])
        assert real_sph_harm(0, 0, ct, phi) == pytest.approx(
            np.full(2, 1.0 / np.sqrt(4 * np.pi)))
        assert real_sph_harm(1, 0, ct, phi) == pytest.approx(
            np.sqrt(3 / (4 * np.pi)) * ct)
        st = np.sqrt(1 - ct**2)
        assert real_sph_harm(1, 1, ct, phi) == pytest.approx(
            np.sqrt(3 / (4 * np.pi)) * st * np.cos(phi))
        assert real_sph_harm(1, -1, ct, phi) == pytest.approx(
            np.sqrt(3 / (4 * np.pi)) * st * np.sin(phi))


class TestDecompose:
    def test_monopole_limit_at_origin(self, beam9, field9):
        # f_00 at vanishing radius is the on-axis peak intensity
        assert field9.profile(0, 0)[0] == pytest.approx(
            beam9.peak_intensity, rel=1e-6)

    def test_axisymmetric_q_terms_vanish(self, beam9, field9):
        i0 = beam9.peak_intensity
        for (k, q), prof in field9.profiles_by_kq.items():
            if q != 0:
                assert np.max(np.abs(prof)) < 1e-12 * i0, (k, q)

    def test_reconstruction_matches_direct_intensity(self, beam9, field9):
        # mid-radius sample points, angles off the symmetry axes
        idx = len(field9.grid) // 3
        r_m = field9.grid.points[idx] * A0
        ct = np.array([0.9, 0.5, 0.1, -0.4, -0.95])
        phi = np.array([0.3, 1.2, 2.5, 4.0, 5.5])
        got = field9.reconstruct(idx, ct, phi)
        st = np.sqrt(1 - ct**2)
        pts = np.stack([r_m * st * np.cos(phi), r_m * st * np.sin(phi),
                        r_m * ct], axis=-1)
        want = beam9.intensity(pts)
        # rank-4 truncation; agreement to a few permille of peak
        assert np.max(np.abs(got - want)) < 5e-3 * beam9.peak_intensity

    def test_f00_against_1d_quadrature(self, beam9):
        # f_00(r) = (1/2) Int_-1^1 I(r, ct) d ct for the axisymmetric beam
        grid = RadialGrid.default(20, npoints=400)
        field = decompose(beam9, (0.0, 0.0, 0.0), grid, k_max=2)
        for idx in (50, 200, 350):
            r_m = grid.points[idx] * A0

            def slice_intensity(ct):
                st = np.sqrt(1 - ct * ct)
                return beam9.intensity((r_m * st, 0.0, r_m * ct))

            want, _ = quad(slice_intensity, -1.0, 1.0, limit=100)
            assert field.profile(0, 0)[idx] == pytest.approx(
                0.5 * want, rel=1e-8)

    def test_power_linearity(self, beam9, grid80, field9):
        field2 = decompose(beam9.with_power(2 * POWER), (0.0, 0.0, 0.0),
                           grid80, k_max=4)
        f1 = field9.profile(2, 0)
        f2 = field2.profile(2, 0)
        assert f2 == pytest.approx(2.0 * f1, rel=1e-12)

    def test_convergence_guard_raises(self, beam9):
        grid = RadialGrid.default(10, npoints=100)
        with pytest.raises(QuadratureConvergenceError):
            decompose(beam9, (0.0, 0.0, 0.0), grid, k_max=4, tol=1e-18)

    def test_kmax_validation(self, beam9):
        grid = RadialGrid.default(10, npoints=100)
        with pytest.raises(ValueError):
            decompose(beam9, (0.0, 0.0, 0.0), grid, k_max=13)

    def test_off_focus_position_has_odd_ranks(self, beam9):
        # nucleus displaced along the axis: odd-k terms appear
        grid = RadialGrid.default(15, npoints=200)
        field = decompose(beam9, (0.0, 0.0, 0.4e-6), grid, k_max=3)
        i0 = beam9.peak_intensity
        assert np.max(np.abs(field.profile(1, 0))) > 1e-3 * i0


class TestSerialization:
    def test_json_round_trip(self, field9):
        clone = TensorField.from_json(field9.to_json())
        assert clone.k_max == field9.k_max
        assert clone.grid == field9.grid
        assert np.array_equal(clone.profile(2, 0), field9.profile(2, 0))
        assert clone.beam_descriptor["power_w"] == pytest.approx(POWER)

    def test_csv_layout(self, beam9):
        grid = RadialGrid.default(10, npoints=100)
        field = decompose(beam9, (0.0, 0.0, 0.0), grid, k_max=2)
        buf = io.StringIO()
        field.write_csv(buf)
        lines = buf.getvalue().strip().splitlines()
        header = lines[0].split(",")
        assert header[0] == "r_a0"
        assert "f_0_0" in header and "f_2_0" in header
        assert len(lines) == 1 + len(grid)
        # numeric, dot-decimal cells
        float(lines[1].split(",")[1])


class TestBruteForceAverage:
    def test_matches_tensor_element_for_s_state(self, beam9, field9):
        wf = hydrogen_radial(71, 0, field9.grid)
        direct = brute_force_average(beam9, wf, (0.0, 0.0, 0.0))
        via_tensor = radial_integral(wf, field9.profile(0, 0))
        assert direct == pytest.approx(via_tensor, rel=1e-9)

    def test_m_dependence_for_p_state(self, beam9, field9):
        from rydtrap.angular import angular_factor
        wf = hydrogen_radial(60, 1, field9.grid)
        avg0 = brute_force_average(beam9, wf, (0.0, 0.0, 0.0), m=0)
        avg1 = brute_force_average(beam9, wf, (0.0, 0.0, 0.0), m=1)
        e0 = radial_integral(wf, field9.profile(0, 0))
        e2 = radial_integral(wf, field9.profile(2, 0))
        # |l=1 m> averages pick up the single-orbital rank-2 factors -+ 2/5
        assert avg0 == pytest.approx(e0 + 0.4 * e2, rel=1e-9)
        assert avg1 == pytest.approx(e0 - 0.2 * e2, rel=1e-9)

    def test_invalid_m_raises(self, beam9, field9):
        wf = hydrogen_radial(20, 1, field9.grid)
        with pytest.raises(ValueError):
            brute_force_average(beam9, wf, (0.0, 0.0, 0.0), m=2)
