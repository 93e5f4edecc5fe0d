"""Acceptance gate: one test per criterion, each at its stated tolerance.

Run ``pytest tests/test_acceptance.py`` and read the "acceptance criteria"
section at the end of the report for one PASS/FAIL line per criterion.
"""

import itertools
import math
import time
from pathlib import Path

import numpy as np
import pytest

from gravphase.cli import main
from gravphase.clocks import time_dilation
from gravphase.gravimeter import fit_fringe_scan, monte_carlo_fit, sensitivity_ratio, synthetic_phase_scan
from gravphase.gravity import GravityEnvironment
from gravphase.interferometer import spatial_fringes
from gravphase.phase import (
    ClosedFormInputs, closed_form_mz_phase, closed_form_phase_eq7, mz_phase_breakdown,
    parallel_section_phase, relative_deviation, verify_equivalence_chain,
)
from gravphase.quantities import CODATA2018, compton_wavelength
from gravphase.scenario import MZScenario
from gravphase.sequence import recoil_velocity
from gravphase.species import AtomSpecies

CS_MASS = 2.207e-25
CS_HFS = 9.1926e9
KAPPA = 1.4748e7
T = 0.1
G = 9.8
KGT2 = 1445304.0  # kappa g T^2, evaluated independently with mpmath
CONFIGS = Path(__file__).resolve().parent.parent / "configs"


@pytest.fixture
def cesium():
    return AtomSpecies("cesium", CS_MASS, hyperfine=CS_HFS)


@pytest.fixture
def earth():
    return GravityEnvironment.uniform(G)


@pytest.mark.criterion(1, "equivalence chain agrees pairwise to 1e-9 in under 1 s")
def test_equivalence_chain(cesium, earth):
    start = time.perf_counter()
    bd = mz_phase_breakdown(cesium, earth, KAPPA, T)
    ci = ClosedFormInputs.from_mz(cesium, G, KAPPA, T)
    forms = {
        "numeric": float(bd.differential.potential),
        "de_broglie": float(closed_form_phase_eq7(G, T, ci.lambda_dB)),
        "gravimeter": float(closed_form_mz_phase(KAPPA, G, T)),
        "with_eta": float(closed_form_mz_phase(KAPPA, G, T, cesium.eta)),
        "parallel_section": float(parallel_section_phase(ci.m_g, G, ci.l, T)),
    }
    report = verify_equivalence_chain(cesium, earth, KAPPA, T)
    elapsed = time.perf_counter() - start
    for a, b in itertools.combinations(forms, 2):
        assert relative_deviation(forms[a], forms[b]) <= 1e-9, (a, b)
    assert forms["numeric"] == pytest.approx(-KGT2, rel=1e-9)
    assert report.passed, report.failures
    assert elapsed < 1.0


@pytest.mark.criterion(2, "phase linear in eta with slope -kappa g T^2; eta = 0 gives 0")
def test_ep_dependence(cesium, earth):
    etas = np.linspace(0.9, 1.1, 11)
    phases = np.array([mz_phase_breakdown(cesium.with_eta(e), earth, KAPPA, T).gravity_phase
                       for e in etas])
    for e, p in zip(etas, phases):
        assert p == pytest.approx(-e * KGT2, rel=1e-9)
    slope = np.polyfit(etas, phases, 1)[0]
    assert slope == pytest.approx(-KGT2, rel=1e-9)
    zero = mz_phase_breakdown(cesium.with_eta(0.0), earth, KAPPA, T).gravity_phase
    assert abs(zero) <= 1e-12


@pytest.mark.criterion(3, "propagation phase cancels; laser channel equals potential channel")
def test_propagation_gauge(cesium, earth):
    for eta in (0.9, 1.0, 1.1):
        d = mz_phase_breakdown(cesium.with_eta(eta), earth, KAPPA, T).differential
        assert abs(d.kinetic + d.potential) <= 1e-9
        assert d.laser == pytest.approx(-eta * KGT2, rel=1e-9)
        assert d.potential == pytest.approx(-eta * KGT2, rel=1e-9)


@pytest.mark.criterion(4, "internal-state swap cancels the internal phase")
def test_internal_cancellation(cesium, earth):
    # fountain launch: both arms hold the excited state at the same mean height
    fountain = dict(x0=0.0, v0=G * T)
    on = mz_phase_breakdown(cesium, earth, KAPPA, T, **fountain).differential
    off = mz_phase_breakdown(cesium, earth, KAPPA, T, internal_swap=False, **fountain).differential
    assert abs(on.internal) <= 1e-12
    assert abs(off.internal) > 1e3 * 1e-12
    ratio = (cesium.hyperfine_energy() / CODATA2018.c ** 2) / cesium.mass
    assert 1e-16 <= ratio <= 1e-14


@pytest.mark.criterion(5, "fringe spacing is 2 pi / kappa and dwarfs the Compton wavelength")
def test_fringe_discriminator(cesium):
    vr = float(recoil_velocity(cesium, KAPPA))
    expected = 2 * math.pi / KAPPA
    pat = spatial_fringes(cesium, vr, 0.0, 40 * expected, 4001)
    assert pat.spacing == pytest.approx(expected, rel=1e-3)
    lam_c = float(compton_wavelength(cesium.mass))
    assert pat.spacing / lam_c > 1e9
    assert 1e-8 <= pat.spacing <= 1e-6
    assert 1e-18 <= lam_c <= 1e-16


@pytest.mark.criterion(6, "clock dilation g l / c^2, antisymmetry and chaining")
def test_clock_dilation():
    env = GravityEnvironment.uniform(9.81)
    dT = float(time_dilation(env, 1.0, 0.0, 1.0))
    assert dT == pytest.approx(9.81 * 1.0 / CODATA2018.c ** 2, rel=1e-12)
    assert dT == pytest.approx(1.0915097049885997e-16, rel=1e-12)
    rng = np.random.default_rng(20240601)
    for x1, x2, x3 in rng.uniform(-1e3, 1e3, size=(1000, 3)):
        ab = float(time_dilation(env, x1, x2, 1.0))
        assert ab == -float(time_dilation(env, x2, x1, 1.0))
        chained = ab + float(time_dilation(env, x2, x3, 1.0))
        direct = float(time_dilation(env, x1, x3, 1.0))
        scale = 9.81 * (abs(x1) + 2 * abs(x2) + abs(x3)) / CODATA2018.c ** 2
        assert abs(chained - direct) <= 1e-12 * scale


@pytest.mark.criterion(7, "matter over optical sensitivity lies in [1e9, 1e11]")
def test_sensitivity_band(cesium):
    ratio = float(sensitivity_ratio(cesium, CODATA2018.c / 852e-9).ratio)
    assert 1e9 <= ratio <= 1e11


@pytest.mark.criterion(8, "fringe fit recovers g; Monte-Carlo error matches linearised noise")
def test_gravimeter_round_trip(cesium, earth):
    sc = MZScenario(species=cesium, env=earth, kappa=KAPPA, T=T)
    est = fit_fringe_scan(synthetic_phase_scan(sc), KAPPA, T, g_prior=G)
    assert float(est.g_hat) == pytest.approx(G, rel=1e-9)
    mc = monte_carlo_fit(sc, sigma=1e-3, trials=100, seed=0)
    assert 0.5 <= mc.ratio <= 2.0


@pytest.mark.criterion(9, "gravity phase independent of launch height and velocity")
def test_launch_state(cesium, earth):
    ref = mz_phase_breakdown(cesium, earth, KAPPA, T).differential
    for x0, v0 in itertools.product((0.0, 1.0), (0.0, 0.1, -0.1)):
        d = mz_phase_breakdown(cesium, earth, KAPPA, T, x0=x0, v0=v0).differential
        assert abs(d.potential - ref.potential) <= 1e-9
        assert abs(d.laser - ref.laser) <= 1e-9


@pytest.mark.criterion(10, "verify output is byte-identical across runs")
def test_determinism(tmp_path, monkeypatch):
    monkeypatch.delenv("SOURCE_DATE_EPOCH", raising=False)
    outs = []
    for name in ("first", "second"):
        assert main(["verify", "--config", str(CONFIGS / "verify.toml"), "--out", str(tmp_path / name)]) == 0
        outs.append((tmp_path / name / "verify.json").read_bytes())
    assert outs[0] == outs[1]
