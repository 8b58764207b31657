"""Series-energy ingestion, defect fits, threshold fit, pair-channel defects."""

import io

import numpy as np
import pytest

from rydtrap.constants import CM1_TO_MHZ
from rydtrap.potential import RydbergState, yb174
from rydtrap.spectroscopy import (EnergyRecord, RitzModel,
                                  bundled_energy_path, defect_from_energy,
                                  fit_ritz, fit_threshold, forster_defect,
                                  load_energy_csv, ritz_delta)

RY_CM1 = 109736.96959
EI_CM1 = 50443.07074


@pytest.fixture(scope="module")
def records():
    return load_energy_csv(bundled_energy_path())


class TestLoading:
    def test_bundled_table_shape(self, records):
        ns = [r.n for r in records]
        assert ns[0] == 28 and ns[-1] == 100
        assert ns == sorted(ns)
        assert len(set(ns)) == len(ns)
        energies = [r.energy_cm1 for r in records]
        assert all(b > a for a, b in zip(energies, energies[1:]))
        assert all(r.sigma_mhz == 4.0 for r in records)

    def test_known_rows(self, records):
        table = {r.n: r.energy_cm1 for r in records}
        assert table[49] == pytest.approx(50387.8079, abs=1e-6)
        assert table[75] == pytest.approx(50421.0303, abs=1e-6)
        assert table[100] == pytest.approx(50431.0545, abs=1e-6)

    def test_stream_input_with_comments(self):
        text = "# comment\nn,energy_cm1\n50,50390.0\n40,50350.0\n"
        recs = load_energy_csv(io.StringIO(text))
        assert [r.n for r in recs] == [40, 50]

    def test_duplicate_n_rejected(self):
        text = "n,energy_cm1\n50,50390.0\n50,50390.1\n"
        with pytest.raises(ValueError):
            load_energy_csv(io.StringIO(text))

    def test_bad_header_rejected(self):
        with pytest.raises(ValueError):
            load_energy_csv(io.StringIO("level,value\n50,50390.0\n"))


class TestDefectEvaluation:
    def test_defect_from_energy_reference_point(self):
        rec = EnergyRecord(75, 50421.0303)
        delta = defect_from_energy(rec, EI_CM1, RY_CM1)
        assert delta == pytest.approx(4.4388, abs=2e-4)

    def test_hydrogenic_zero_defect(self):
        energy = EI_CM1 - RY_CM1 / 60.0**2
        # cancellation in n - sqrt(Ry/(E_I - E)) leaves ~1e-12 of roundoff
        assert defect_from_energy(EnergyRecord(60, energy), EI_CM1, RY_CM1) \
            == pytest.approx(0.0, abs=1e-10)

    def test_energy_above_threshold_rejected(self):
        with pytest.raises(ValueError):
            defect_from_energy(EnergyRecord(60, EI_CM1 + 1.0), EI_CM1, RY_CM1)

    def test_ritz_delta_vectorized(self):
        params = [4.4382, 6.0, -1.8e4]
        n = np.array([40, 75, 100])
        vals = ritz_delta(params, n)
        assert vals.shape == (3,)
        single = ritz_delta(params, 75)
        assert single == pytest.approx(vals[1])
        denom = (75.0 - 4.4382) ** 2
        want = 4.4382 + 6.0 / denom - 1.8e4 / denom**2
        assert single == pytest.approx(want, rel=1e-12)


class TestRitzFit:
    def test_synthetic_exact_recovery(self):
        true = [4.44, 5.0, -1.5e4]
        ns = np.arange(35, 81)
        deltas = ritz_delta(true, ns)
        recs = [EnergyRecord(int(n), EI_CM1 - RY_CM1 / (n - d) ** 2)
                for n, d in zip(ns, deltas)]
        model = fit_ritz(recs, order=4, ionization_cm1=EI_CM1,
                         rydberg_cm1=RY_CM1)
        assert model.params[0] == pytest.approx(true[0], abs=1e-8)
        assert model.params[1] == pytest.approx(true[1], rel=1e-6)
        assert model.rms_residual_mhz() < 1e-6

    def test_bundled_fit_window(self, records):
        model = fit_ritz(records, fit_range=(35, 80), ionization_cm1=EI_CM1,
                         rydberg_cm1=RY_CM1)
        assert model.params[0] == pytest.approx(4.4384, abs=3e-4)
        assert model.rms_residual_mhz() < 2.0
        unc = model.uncertainties
        assert unc is not None and 0 < unc[0] < 1e-3

    def test_model_energy_round_trip(self, records):
        model = fit_ritz(records, fit_range=(35, 80), ionization_cm1=EI_CM1,
                         rydberg_cm1=RY_CM1)
        by_n = {r.n: r.energy_cm1 for r in records}
        for n in (40, 60, 75):
            dev_mhz = (model.energy_cm1(n) - by_n[n]) * CM1_TO_MHZ
            assert abs(dev_mhz) < 4.0

    def test_noisy_recovery_within_uncertainty(self, records):
        rng = np.random.default_rng(3)
        noisy = [EnergyRecord(r.n, r.energy_cm1
                              + rng.normal(0.0, 4.0) / CM1_TO_MHZ)
                 for r in records]
        clean = fit_ritz(records, fit_range=(35, 80), ionization_cm1=EI_CM1,
                         rydberg_cm1=RY_CM1)
        pert = fit_ritz(noisy, fit_range=(35, 80), ionization_cm1=EI_CM1,
                        rydberg_cm1=RY_CM1)
        pull = abs(pert.params[0] - clean.params[0]) / pert.uncertainties[0]
        assert pull < 5.0

    def test_insufficient_data_rejected(self):
        recs = [EnergyRecord(50, 50390.0), EnergyRecord(51, 50391.0)]
        with pytest.raises(ValueError):
            fit_ritz(recs, order=8, ionization_cm1=EI_CM1, rydberg_cm1=RY_CM1)


class TestThresholdFit:
    def test_flat_window_recovers_threshold(self, records):
        model = fit_threshold(records, fit_range=(60, 80), rydberg_cm1=RY_CM1)
        off_mhz = (model.ionization_cm1 - EI_CM1) * CM1_TO_MHZ
        assert abs(off_mhz) < 5.0
        assert model.threshold_sigma_cm1 * CM1_TO_MHZ < 10.0
        assert model.params[0] == pytest.approx(4.4388, abs=5e-4)

    def test_offset_invariance(self, records):
        shift = 0.5  # cm^-1 applied to every level
        shifted = [EnergyRecord(r.n, r.energy_cm1 + shift) for r in records]
        base = fit_threshold(records, fit_range=(60, 80), rydberg_cm1=RY_CM1)
        moved = fit_threshold(shifted, fit_range=(60, 80), rydberg_cm1=RY_CM1)
        assert moved.ionization_cm1 - base.ionization_cm1 == pytest.approx(
            shift, abs=1e-9)
        assert moved.params[0] == pytest.approx(base.params[0], abs=1e-9)


class TestForsterDefect:
    def test_reference_channel(self, species):
        pair_in = [RydbergState(species, 80, "3S1")] * 2
        pair_out = [RydbergState(species, 80, "3P2"),
                    RydbergState(species, 79, "3P2")]
        defect = forster_defect(pair_in, pair_out)
        assert defect == pytest.approx(-330.2, rel=1e-3)

    def test_antisymmetry_and_identity(self, species):
        pair_in = [RydbergState(species, 80, "3S1")] * 2
        pair_out = [RydbergState(species, 80, "3P2"),
                    RydbergState(species, 79, "3P2")]
        assert forster_defect(pair_in, pair_out) == pytest.approx(
            -forster_defect(pair_out, pair_in), rel=1e-12)
        assert forster_defect(pair_in, pair_in) == 0.0

    def test_hydrogenic_closed_form(self):
        from rydtrap.potential import AtomicSpecies
        hyd = AtomicSpecies(name="test", mass_kg=1e-25, alpha_core_au=1.0,
                            alpha_ground_au=None, rydberg_cm1=RY_CM1,
                            ionization_cm1=EI_CM1, defects={"2S1/2": 0.0})
        n = 60
        states = {m: RydbergState(hyd, m, "2S1/2") for m in (n - 1, n, n + 1)}
        got = forster_defect([states[n]] * 2,
                             [states[n + 1], states[n - 1]])
        want = RY_CM1 * (1.0 / (n + 1) ** 2 + 1.0 / (n - 1) ** 2
                         - 2.0 / n**2) * CM1_TO_MHZ
        # small difference of ~5e4 cm^-1 energies: ~1e-11 relative floor
        assert got == pytest.approx(want, rel=1e-9)
