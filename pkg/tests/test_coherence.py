"""Coherence functions and Mach-Zehnder fringe tests."""

import math

import numpy as np
import pytest

from mzbell import (CoherenceMoments, DegenerateStateError, ModeSystem,
                    analytic_visibility, apply_phase, basis_state,
                    coherent_state, compute_moments, fringe_scan, g1, g2,
                    incoherent_anticorrelated, make_mixed, make_pure,
                    split_input, split_single_photon, thermal_state,
                    titulaer_glauber_margin, visibility)

from oracle import brute_expect, random_density, random_pure

PHASES_64 = [2 * math.pi * k / 64 for k in range(64)]


class TestMoments:
    def test_split_photon_frozen_values(self):
        m = compute_moments(split_single_photon())
        assert abs(m.m12 - 0.5j) < 1e-14
        assert abs(m.anom) < 1e-14
        assert abs(m.n1 - 0.5) < 1e-14
        assert abs(m.n2 - 0.5) < 1e-14
        assert abs(m.n1n2) < 1e-14

    def test_split_photon_vs_brute_force(self):
        state = split_single_photon()
        m = compute_moments(state)
        assert abs(m.m12 - brute_expect(state, [(1, 0), (0, 1)])) < 1e-14
        assert abs(m.n1n2 - brute_expect(state, [(1, 1), (1, 1)]).real) < 1e-14

    def test_vacuum_moments_zero(self):
        m = compute_moments(basis_state(ModeSystem((1, 1)), (0, 0)))
        assert m.m12 == 0 and m.anom == 0
        assert m.n1 == m.n2 == m.n1n2 == 0

    def test_two_photons(self):
        state = basis_state(ModeSystem((1, 1)), (1, 1))
        m = compute_moments(state)
        assert abs(m.m12) < 1e-14
        assert abs(m.n1 - 1) < 1e-14 and abs(m.n2 - 1) < 1e-14
        assert abs(m.n1n2 - 1) < 1e-14

    def test_invariant_validation(self):
        with pytest.raises(ValueError, match="Cauchy-Schwarz"):
            CoherenceMoments(m12=1.0, anom=0.0, n1=0.1, n2=0.1, n1n2=0.0)
        with pytest.raises(ValueError, match="negative"):
            CoherenceMoments(m12=0.0, anom=0.0, n1=-0.1, n2=0.1, n1n2=0.0)

    def test_needs_two_modes(self):
        with pytest.raises(ValueError):
            compute_moments(coherent_state(0.3))


class TestCoherenceFunctions:
    def test_split_photon(self):
        m = compute_moments(split_single_photon())
        assert abs(abs(g1(m)) - 1.0) < 1e-14
        assert abs(g2(m)) < 1e-14
        assert abs(titulaer_glauber_margin(m) + 1.0) < 1e-14

    def test_incoherent_mixture_no_coherence(self):
        m = compute_moments(incoherent_anticorrelated(0.5))
        assert abs(g1(m)) < 1e-14
        assert abs(g2(m)) < 1e-14

    def test_split_coherent(self):
        m = compute_moments(split_input(coherent_state(0.7, 1e-13)))
        assert abs(abs(g1(m)) - 1.0) < 1e-11
        assert abs(g2(m) - 1.0) < 1e-10
        assert abs(titulaer_glauber_margin(m)) < 1e-10

    def test_split_thermal(self):
        m = compute_moments(split_input(thermal_state(1.0, 1e-12)))
        assert abs(abs(g1(m)) - 1.0) < 1e-9
        assert abs(g2(m) - 2.0) < 1e-8
        assert abs(titulaer_glauber_margin(m) - 1.0) < 1e-8

    def test_degenerate_channel(self):
        m = compute_moments(incoherent_anticorrelated(1.0))
        with pytest.raises(DegenerateStateError):
            g1(m)
        with pytest.raises(DegenerateStateError):
            g2(m)

    def test_cauchy_schwarz_bound_random(self):
        rng = np.random.default_rng(21)
        for _ in range(50):
            state = random_density(rng, (2, 2)) if rng.random() < 0.5 \
                else random_pure(rng, (2, 2))
            m = compute_moments(state)
            assert abs(g1(m)) <= 1.0 + 1e-10

    def test_g2_invariant_under_phase(self):
        rng = np.random.default_rng(22)
        state = random_pure(rng, (2, 3))
        base = g2(compute_moments(state))
        for mode, phi in ((0, 0.9), (1, 2.2)):
            shifted = apply_phase(state, mode, phi)
            assert abs(g2(compute_moments(shifted)) - base) < 1e-12


class TestFringeScan:
    def test_intensity_sum_constant(self):
        records = fringe_scan(split_single_photon(), [0.0, math.pi / 2, math.pi])
        for r in records:
            assert abs(r.intensity_c + r.intensity_d - 1.0) < 1e-12

    def test_incoherent_mixture_flat(self):
        records = fringe_scan(incoherent_anticorrelated(0.5), PHASES_64)
        values = [r.intensity_c for r in records]
        assert max(values) - min(values) < 1e-12

    def test_split_photon_full_contrast(self):
        records = fringe_scan(split_single_photon(), PHASES_64)
        assert min(r.intensity_c for r in records) < 1e-10
        # single photon never coincides with itself
        assert max(abs(r.coincidence) for r in records) < 1e-12

    def test_two_mode_required(self):
        with pytest.raises(ValueError):
            fringe_scan(coherent_state(0.3), PHASES_64)


def _partially_coherent_state(w):
    """Mixture of the split photon with an incoherent anticorrelated
    background: balanced channels with |g1| = w exactly."""
    return make_mixed([(w, split_single_photon()),
                       (1.0 - w, incoherent_anticorrelated(0.5))])


class TestVisibility:
    def test_split_photon_unity(self):
        records = fringe_scan(split_single_photon(), PHASES_64)
        assert abs(visibility(records) - 1.0) < 1e-9

    def test_incoherent_mixture_zero(self):
        records = fringe_scan(incoherent_anticorrelated(0.5), PHASES_64)
        assert visibility(records) < 1e-12

    def test_moment_matched_visibility(self):
        state = _partially_coherent_state(0.98)
        m = compute_moments(state)
        assert abs(abs(g1(m)) - 0.98) < 1e-14
        records = fringe_scan(state, PHASES_64)
        assert abs(visibility(records) - 0.98) < 1e-6

    def test_balanced_matches_g1(self):
        rng = np.random.default_rng(23)
        for _ in range(5):
            inp = random_pure(rng, (3,))
            state = split_input(inp)
            records = fringe_scan(state, PHASES_64)
            m = compute_moments(state)
            assert abs(m.n1 - m.n2) < 1e-12
            assert abs(visibility(records) - abs(g1(m))) < 1e-8

    def test_unbalanced_reports_both(self):
        state = make_pure(ModeSystem((1, 1)),
                          [0, 0.6j, 0.8, 0])  # 0.8|10> + 0.6i|01>
        m = compute_moments(state)
        records = fringe_scan(state, PHASES_64)
        fitted = visibility(records)
        analytic = analytic_visibility(m)
        assert abs(fitted - analytic) < 1e-10
        assert abs(analytic - 2 * 0.48 / 1.0) < 1e-12
        assert abs(abs(g1(m)) - 1.0) < 1e-12  # pure state stays coherent

    def test_fit_preconditions(self):
        records = fringe_scan(split_single_photon(), PHASES_64)
        with pytest.raises(ValueError):
            visibility(records[:2])
        with pytest.raises(ValueError):
            visibility(records[:5])  # span too small
        vac_records = fringe_scan(
            basis_state(ModeSystem((1, 1)), (0, 0)), PHASES_64)
        with pytest.raises(DegenerateStateError):
            visibility(vac_records)
