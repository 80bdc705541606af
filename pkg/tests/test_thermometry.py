import math

import numpy as np
import pytest

from qthermo.qcore import InvalidInputError
from qthermo.thermometry import (ProbeSpectrum, cramer_rao, optimal_probe,
                                 qfi_curve, qfi_harmonic_d, qfi_oscillator,
                                 qfi_qubit, qfi_thermal, thermal_populations)


def finite_difference_qfi(energies, temperature, h=None):
    """Independent oracle: sum |dT p_n|^2 / p_n by central differences."""
    if h is None:
        h = 1e-5 * temperature
    spec = ProbeSpectrum(np.asarray(energies, dtype=float))
    p_plus = thermal_populations(spec, temperature + h)
    p_minus = thermal_populations(spec, temperature - h)
    p = thermal_populations(spec, temperature)
    dp = (p_plus - p_minus) / (2 * h)
    return float(np.sum(dp**2 / p))


class TestQfiThermal:
    def test_qubit_closed_form(self):
        for delta, t in [(1.0, 0.5), (2.5, 1.0), (0.3, 0.07)]:
            assert qfi_thermal([0.0, delta], t) == pytest.approx(
                qfi_qubit(delta, t), rel=1e-12)

    def test_oscillator_closed_form_truncated_ladder(self):
        delta, t = 1.0, 0.4
        # tail population below 1e-12 at this cutoff
        n_levels = int(np.ceil(-np.log(1e-14) * t / delta)) + 2
        ladder = delta * np.arange(n_levels)
        assert qfi_thermal(ladder, t) == pytest.approx(
            qfi_oscillator(delta, t), rel=1e-8)

    def test_low_temperature_limit(self):
        assert qfi_thermal([0.0, 1.0, 2.3], 1e-2) < 1e-30

    def test_finite_difference_consistency(self, rng):
        for _ in range(10):
            energies = np.sort(rng.uniform(0.0, 3.0, size=5))
            energies[0] = 0.0
            t = rng.uniform(0.3, 2.0)
            f = qfi_thermal(energies, t)
            assert f == pytest.approx(finite_difference_qfi(energies, t), rel=1e-6)

    def test_rejects_nonpositive_temperature(self):
        with pytest.raises(InvalidInputError):
            qfi_thermal([0.0, 1.0], 0.0)


class TestHarmonicD:
    def test_d2_reduces_to_qubit(self):
        for t in (0.2, 1.0, 4.0):
            assert qfi_harmonic_d(1.0, t, 2) == pytest.approx(
                qfi_qubit(1.0, t), rel=1e-12)

    def test_matches_ladder_evaluation(self):
        for d in (3, 5, 8):
            for t in (0.3, 1.0):
                ladder = 1.0 * np.arange(d)
                assert qfi_harmonic_d(1.0, t, d) == pytest.approx(
                    qfi_thermal(ladder, t), rel=1e-10)

    def test_large_d_approaches_oscillator(self):
        t = 1.0
        f_d = qfi_harmonic_d(1.0, t, 10_000)
        assert f_d == pytest.approx(qfi_oscillator(1.0, t), rel=1e-6)

    def test_low_temperature_collapse_across_d(self):
        # all dimensions confined to the two lowest levels at low k_B T / Delta;
        # the 1% pairwise spread boundary sits at k_B T ~ 0.167 Delta
        for t in (0.05, 0.1, 0.16):
            ref = qfi_harmonic_d(1.0, t, 2)
            for d in (3, 8):
                assert qfi_harmonic_d(1.0, t, d) == pytest.approx(ref, rel=1e-2)
        spread_02 = qfi_harmonic_d(1.0, 0.2, 8) / qfi_harmonic_d(1.0, 0.2, 2) - 1.0
        assert 0.02 < spread_02 < 0.035

    def test_rejects_small_d(self):
        with pytest.raises(InvalidInputError):
            qfi_harmonic_d(1.0, 1.0, 1)


class TestCramerRao:
    def test_doubling_measurements_halves_bound(self):
        assert cramer_rao(2.0, 50) == pytest.approx(0.5 * cramer_rao(2.0, 25))

    def test_arithmetic(self):
        assert cramer_rao(4.0, 25) == pytest.approx(0.01)

    def test_unbounded_at_zero_fisher(self):
        assert math.isinf(cramer_rao(0.0, 10))

    def test_bound_minimum_at_qfi_peak(self):
        ts = np.linspace(0.05, 5.0, 400)
        curve = qfi_curve([0.0, 1.0], ts)
        bounds = np.array([cramer_rao(f, 1) for f in curve.values])
        assert ts[np.argmin(bounds)] == pytest.approx(curve.t_star)


class TestQfiCurveShape:
    def test_vanishes_at_both_ends(self):
        ts = np.geomspace(1e-2, 1e3, 200)
        curve = qfi_curve([0.0, 1.0, 1.9], ts)
        assert curve.values[0] < 1e-12 * curve.f_max
        assert curve.values[-1] < 1e-6 * curve.f_max

    def test_single_interior_maximum_two_level(self):
        ts = np.linspace(0.05, 10.0, 800)
        vals = np.array([qfi_qubit(1.0, t) for t in ts])
        rising = np.diff(vals) > 0
        # one contiguous rising stretch followed by one falling stretch
        switches = np.count_nonzero(np.diff(rising.astype(int)))
        assert switches == 1

    def test_gap_shift_moves_peak(self):
        ts = np.linspace(0.02, 20.0, 2000)
        peaks = []
        for delta in (0.5, 1.0, 2.0):
            vals = [qfi_qubit(delta, t) for t in ts]
            peaks.append(ts[int(np.argmax(vals))])
        assert peaks[0] < peaks[1] < peaks[2]


class TestOptimalProbe:
    def test_n2_matches_plain_qubit_scan(self):
        t = 1.0
        res = optimal_probe(2, t)
        gaps = np.geomspace(1e-2, 1e2, 4000)
        brute = max(qfi_qubit(g, t) for g in gaps)
        assert res.f_max >= brute * (1 - 1e-8)

    def test_precision_grows_with_dimension(self):
        t = 1.0
        assert optimal_probe(8, t).f_max > optimal_probe(2, t).f_max

    def test_beats_random_spectra_dim3(self, rng):
        t = 1.0
        best = optimal_probe(3, t).f_max
        for _ in range(10_000):
            energies = np.sort(rng.uniform(0.0, 20.0, size=3))
            energies -= energies[0]
            assert qfi_thermal(energies, t) <= best * (1 + 1e-9)
