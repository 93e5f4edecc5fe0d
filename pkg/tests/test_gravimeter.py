import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from gravphase.errors import ConfigError, UnidentifiableError
from gravphase.gravimeter import (
    ep_sweep, fit_fringe_scan, invert_g, linearized_phase_sigma, monte_carlo_fit,
    sensitivity_ratio, synthetic_phase_scan, trial_rng, wrap_phase,
)
from gravphase.phase import closed_form_mz_phase
from gravphase.scenario import MZScenario
from gravphase.species import AtomSpecies

from conftest import CS_MASS, KAPPA


@pytest.fixture
def scenario(cesium):
    return MZScenario(species=cesium, kappa=KAPPA, n_steps=64)


@given(st.floats(0.1, 30.0), st.floats(1e-3, 1.0), st.floats(0.5, 1.5))
def test_invert_round_trip(g, T, eta):
    phase = closed_form_mz_phase(KAPPA, g, T, eta)
    assert float(invert_g(phase, KAPPA, T, eta).g_hat) == pytest.approx(g, rel=1e-13)


def test_invert_edge_cases():
    assert invert_g(0.0, KAPPA, 0.1).g_hat == 0.0
    with pytest.raises(UnidentifiableError):
        invert_g(1.0, KAPPA, 0.0)
    with pytest.raises(UnidentifiableError):
        invert_g(1.0, KAPPA, 0.1, eta=0.0)


def test_integrated_phase_inverts_to_g(scenario):
    est = invert_g(scenario.breakdown().gravity_phase, KAPPA, 0.1)
    assert float(est.g_hat) == pytest.approx(9.8, rel=1e-9)


def test_wrap_phase():
    assert wrap_phase(math.pi) == math.pi
    assert wrap_phase(-math.pi) == math.pi
    assert wrap_phase(3 * math.pi / 2) == pytest.approx(-math.pi / 2)


def test_noiseless_fit(scenario):
    scan = synthetic_phase_scan(scenario)
    est = fit_fringe_scan(scan, KAPPA, 0.1, g_prior=9.8 + 1.5e-5)
    assert float(est.g_hat) == pytest.approx(9.8, rel=1e-9)
    assert est.rms < 1e-9  # each scan point carries ~1e-10 rad rounding on a 1.4e6 rad phase
    assert -math.pi < est.phase <= math.pi
    # the scan fixes g only modulo one fringe, 2 pi / (kappa T^2)
    fringe = 2 * math.pi / (KAPPA * 0.01)
    other = fit_fringe_scan(scan, KAPPA, 0.1, g_prior=9.8 + fringe)
    assert float(other.g_hat) == pytest.approx(9.8 + fringe, rel=1e-9)
    assert other.fringe_order == est.fringe_order - 1


def test_fit_free_contrast(scenario):
    scan = [(p.value, 0.5 * (1 - 0.8 * math.cos(p.phase))) for p in synthetic_phase_scan(scenario)]
    est = fit_fringe_scan(scan, KAPPA, 0.1, g_prior=9.8, free_contrast=True)
    assert est.contrast == pytest.approx(0.8, rel=1e-9)
    assert float(est.g_hat) == pytest.approx(9.8, rel=1e-9)


def test_fit_invariant_to_laser_offset(scenario):
    ref = fit_fringe_scan(synthetic_phase_scan(scenario), KAPPA, 0.1, g_prior=9.8)
    shifted = scenario.with_(phases=(0.0, 0.3, 0.0))
    est = fit_fringe_scan(synthetic_phase_scan(shifted), KAPPA, 0.1, g_prior=9.8)
    # a known phase on the mirror pulse moves the fringe by -2 * 0.3
    assert wrap_phase(est.phase - ref.phase) == pytest.approx(-0.6, abs=1e-9)


def test_degenerate_scans(scenario):
    flat = [(x, 0.5) for x in np.linspace(0, 2 * math.pi, 10)]
    with pytest.raises(UnidentifiableError):
        fit_fringe_scan(flat, KAPPA, 0.1)
    with pytest.raises(UnidentifiableError):
        fit_fringe_scan(synthetic_phase_scan(scenario)[:4], KAPPA, 0.1)
    narrow = [(x, 0.5 * (1 - math.cos(x))) for x in np.linspace(0, 1, 10)]
    with pytest.raises(UnidentifiableError):
        fit_fringe_scan(narrow, KAPPA, 0.1)


def test_monte_carlo_matches_linearised_noise(scenario):
    summary = monte_carlo_fit(scenario, 1e-3, 100, seed=7)
    assert 0.5 <= summary.ratio <= 2.0
    assert abs(summary.mean_error) < 3 * summary.predicted_sigma


def test_monte_carlo_reproducible(scenario):
    a = monte_carlo_fit(scenario, 1e-3, 5, seed=3)
    b = monte_carlo_fit(scenario, 1e-3, 5, seed=3)
    assert a.rows == b.rows
    assert monte_carlo_fit(scenario, 1e-3, 5, seed=4).rows != a.rows
    with pytest.raises(ConfigError):
        monte_carlo_fit(scenario, 1e-3, 0)


def test_trial_streams_independent_of_order():
    first = trial_rng(11, 3).normal(size=4)
    trial_rng(11, 0).normal(size=100)
    np.testing.assert_array_equal(trial_rng(11, 3).normal(size=4), first)


def test_linearised_sigma_uniform_grid():
    grid = np.linspace(0, 2 * math.pi, 32, endpoint=False)
    # sum of sin^2 over a full uniform period is N/2
    assert linearized_phase_sigma(grid, 0.4, 1e-3) == pytest.approx(1e-3 / math.sqrt(32 / 8), rel=1e-12)


def test_sensitivity_ratio():
    cs = AtomSpecies("cs", CS_MASS)
    r = sensitivity_ratio(cs, 3.52e14)
    assert float(r.ratio) == pytest.approx(85044267746.0868, rel=1e-12)
    assert 1e9 <= r.ratio <= 1e11
    neutron = AtomSpecies("n", 1.675e-27)
    assert float(sensitivity_ratio(neutron, 5e14).ratio) == pytest.approx(454391484.0334643, rel=1e-9)
    with pytest.raises(ConfigError):
        sensitivity_ratio(cs, 0.0)


def test_ep_sweep(scenario):
    sweep = ep_sweep(scenario, np.linspace(0.9, 1.1, 5))
    assert sweep.expected_slope == pytest.approx(-1445304.0, rel=1e-15)
    assert sweep.slope_deviation <= 1e-9
    assert abs(sweep.intercept) <= 1e-6
    with pytest.raises(ConfigError):
        ep_sweep(scenario, [])
