"""Core plus ponderomotive trapping potentials and their state dependence."""

import numpy as np
import pytest

from rydtrap.angular import HalfInt, Term
from rydtrap.beam import decompose
from rydtrap.constants import AU_POLARIZABILITY, EPS0, C, H
from rydtrap.potential import (RydbergState, TruncationError,
                               core_shift, differential_shift, ground_depth,
                               ground_shift, polarizability_shift_hz,
                               pond_prefactor, ponderomotive_shift,
                               potential_breakdown, power_for_ground_depth,
                               power_for_rydberg_depth, rb87,
                               tensor_splitting, trap_depth, yb174)
from rydtrap.radial import RadialGrid

from conftest import MEASURED_GROUND_DEPTH_HZ, POWER


class TestSpeciesPresets:
    def test_yb_polarizability_profiles(self):
        assert yb174().alpha_core_au == 107.0
        assert yb174(alpha_core="calculated").alpha_core_au == 96.0
        assert yb174().alpha_ground_au == 275.0
        assert yb174(alpha_ground="alternative").alpha_ground_au == 226.0

    def test_unknown_profile_raises(self):
        with pytest.raises(ValueError):
            yb174(alpha_core="bogus")

    def test_defect_models(self, species):
        # series with a Ritz model evaluates n-dependently
        assert species.defect("3S1", 75) == pytest.approx(4.43881, abs=2e-5)
        assert species.defect("3S1", 40) != species.defect("3S1", 80)
        # flat presets
        assert species.defect("3P2", 74) == 3.923
        assert species.defect("3P0", 74) == 3.44
        with pytest.raises(KeyError):
            species.defect("3F4", 50)

    def test_rb_preset_defects(self):
        rb = rb87()
        assert rb.defect("2S1/2", 60) == pytest.approx(3.1311807, abs=1e-6)

    def test_alpha_core_must_be_positive(self):
        with pytest.raises(ValueError):
            yb174().__class__("x", 1e-25, -5.0, 100.0, 109737.0, 50443.0, {})


class TestRydbergState:
    def test_effective_quantum_number(self, species):
        state = RydbergState(species, 75, "3S1")
        assert state.n_star == pytest.approx(70.56119, abs=2e-5)
        assert state.l == 0
        assert state.M == HalfInt(0)

    def test_energy_against_bundled_table(self, species):
        state = RydbergState(species, 75, "3S1")
        assert state.energy_cm1() == pytest.approx(50421.0303, abs=2e-4)

    def test_m_validation(self, species):
        with pytest.raises(ValueError):
            RydbergState(species, 75, "3S1", HalfInt(2))
        with pytest.raises(ValueError):
            RydbergState(species, 75, "3S1", HalfInt.from_twice(1))

    def test_low_n_star_rejected(self, species):
        with pytest.raises(ValueError):
            RydbergState(species, 3, "1D2")


class TestScalarShifts:
    def test_pond_prefactor_value(self, beam9):
        assert pond_prefactor(beam9.angular_frequency) == pytest.approx(
            4.234035e-37, rel=1e-5)

    def test_polarizability_shift_formula(self):
        alpha_au, intensity = 50.0, 3e9
        want = -alpha_au * AU_POLARIZABILITY * intensity / (2 * EPS0 * C) / H
        assert polarizability_shift_hz(alpha_au, intensity) == pytest.approx(
            want, rel=1e-12)

    def test_core_and_ground_shift_depths(self, species, beam9):
        core = core_shift(species, beam9)
        ground = ground_shift(species, beam9)
        assert core == pytest.approx(-6.8012e6, rel=1e-4)
        assert ground == pytest.approx(-17.4797e6, rel=1e-4)
        # both red shifts; ratio is the polarizability ratio
        assert core / ground == pytest.approx(107.0 / 275.0, rel=1e-12)
        assert ground_depth(species, beam9) == pytest.approx(-ground)

    def test_operating_power(self, operating_power):
        assert operating_power == pytest.approx(6.1786e-3, rel=1e-4)

    def test_power_for_ground_depth_closed_loop(self, species, beam9,
                                                operating_power):
        reached = ground_depth(species, beam9.with_power(operating_power))
        assert reached == pytest.approx(MEASURED_GROUND_DEPTH_HZ, rel=1e-12)


class TestPonderomotiveShift:
    def test_75_3s1_total(self, species, field9):
        state = RydbergState(species, 75, "3S1")
        total, by_k = ponderomotive_shift(state, field9)
        assert total == pytest.approx(5.352893e6, rel=1e-5)
        assert set(by_k) == {0}

    def test_rank_content_follows_term(self, species, field9):
        state = RydbergState(species, 70, "1D2")
        total, by_k = ponderomotive_shift(state, field9)
        assert set(by_k) == {0, 2, 4}
        assert total == pytest.approx(sum(by_k.values()))

    def test_truncation_error_and_override(self, species, beam9):
        grid = RadialGrid.default(73, npoints=1500)
        low_field = decompose(beam9, (0.0, 0.0, 0.0), grid, k_max=2)
        state = RydbergState(species, 70, "1D2")
        with pytest.raises(TruncationError):
            ponderomotive_shift(state, low_field)
        total, by_k = ponderomotive_shift(state, low_field,
                                          allow_truncation=True)
        assert set(by_k) == {0, 2}

    def test_axis_angle_scales_rank2_by_legendre(self, species, field9):
        state = RydbergState(species, 70, "1D2", HalfInt(0))
        _, upright = ponderomotive_shift(state, field9, axis_angle_deg=0.0)
        _, tilted = ponderomotive_shift(state, field9, axis_angle_deg=90.0)
        assert tilted[0] == pytest.approx(upright[0], rel=1e-12)
        assert tilted[2] == pytest.approx(-0.5 * upright[2], rel=1e-12)
        assert tilted[4] == pytest.approx(0.375 * upright[4], rel=1e-12)

    def test_breakdown_identity(self, species, field9):
        state = RydbergState(species, 75, "3S1")
        bd = potential_breakdown(state, field9)
        assert bd.u_total_hz == pytest.approx(
            bd.u_core_hz + sum(bd.u_pond_by_k_hz.values()), rel=1e-12)
        assert bd.ground_depth_hz == pytest.approx(17.4797e6, rel=1e-4)


class TestTrapDepth:
    def test_75_3s1_depth_and_ratio(self, species, field9):
        depth, ratio = trap_depth(RydbergState(species, 75, "3S1"), field9)
        assert depth == pytest.approx(1.44832e6, rel=1e-4)
        assert ratio == pytest.approx(0.082857, rel=1e-4)

    def test_power_for_rydberg_depth_closed_loop(self, species, beam9,
                                                 grid80, field9):
        state = RydbergState(species, 75, "3S1")
        power = power_for_rydberg_depth(state, field9, 1.4e6)
        field = decompose(beam9.with_power(power), (0.0, 0.0, 0.0), grid80,
                          k_max=4)
        depth, _ = trap_depth(state, field)
        assert depth == pytest.approx(1.4e6, rel=1e-9)
        assert power == pytest.approx(8.700e-3, rel=1e-3)


class TestTensorSplitting:
    def test_74_3p2_spread_at_operating_point(self, species, field_op):
        shifts = tensor_splitting(species, 74, "3P2", field_op,
                                  axis_angle_deg=90.0)
        spread = max(shifts.values()) - min(shifts.values())
        assert spread == pytest.approx(356.52e3, rel=1e-3)

    def test_m_squared_pattern_and_zero_sum(self, species, field_op):
        shifts = tensor_splitting(species, 74, "3P2", field_op,
                                  axis_angle_deg=90.0)
        assert sum(shifts.values()) == pytest.approx(0.0, abs=1e-6)
        for m, value in shifts.items():
            assert value == pytest.approx(shifts[-m], rel=1e-12)
        # shift must be linear in M^2 for a rank-2 dominated manifold
        m2 = {abs(m.twice) // 2: v for m, v in shifts.items()}
        slope = (m2[2] - m2[1]) / (4 - 1)
        assert m2[1] - m2[0] == pytest.approx(slope, rel=1e-6)

    def test_scalar_term_has_no_splitting(self, species, field_op):
        shifts = tensor_splitting(species, 75, "3S1", field_op)
        assert all(v == pytest.approx(0.0, abs=1e-9) for v in shifts.values())


class TestDifferentialShift:
    def test_antisymmetry_and_self(self, species, field_op):
        a = RydbergState(species, 75, "3S1")
        b = RydbergState(species, 74, "3P0")
        dab = differential_shift(a, b, field_op)
        dba = differential_shift(b, a, field_op)
        assert dab == pytest.approx(-dba, rel=1e-12)
        assert differential_shift(a, a, field_op) == 0.0

    def test_magic_pair_value(self, species, field_op):
        a = RydbergState(species, 75, "3S1")
        b = RydbergState(species, 74, "3P0")
        assert differential_shift(a, b, field_op) == pytest.approx(
            -492.8, rel=2e-3)

    def test_core_term_cancels_in_differential(self, beam9, grid80):
        # any core polarizability gives the same differential
        field = decompose(beam9, (0.0, 0.0, 0.0), grid80, k_max=4)
        values = []
        for alpha in ("fitted", "calculated"):
            sp = yb174(alpha_core=alpha)
            a = RydbergState(sp, 75, "3S1")
            b = RydbergState(sp, 74, "3S1")
            values.append(differential_shift(a, b, field))
        assert values[0] == pytest.approx(values[1], rel=1e-12)

    def test_species_mismatch_raises(self, species, field_op):
        a = RydbergState(species, 75, "3S1")
        b = RydbergState(rb87(), 75, "2S1/2")
        with pytest.raises(ValueError):
            differential_shift(a, b, field_op)
