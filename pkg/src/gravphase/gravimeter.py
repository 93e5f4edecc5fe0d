"""Gravimeter inversion, fringe fitting, matter/optical sensitivity and EP sweeps."""

import math
from dataclasses import asdict, dataclass

import numpy as np

from .errors import ConfigError, FitFailure, UnidentifiableError
from .interferometer import fringe_scan
from .quantities import CODATA2018, Dimensionless, Frequency, GravAccel, Mass, Phase, as_quantity

__all__ = [
    "GravimeterEstimate", "SensitivityReport", "EtaSweep", "MonteCarloSummary",
    "invert_g", "fit_fringe_scan", "sensitivity_ratio", "ep_sweep",
    "linearized_phase_sigma", "synthetic_phase_scan", "monte_carlo_fit", "wrap_phase",
    "trial_rng",
]


@dataclass(frozen=True)
class GravimeterEstimate:
    """``phase`` is the fitted phase in (-pi, pi]; the unwrapped phase is
    ``phase + 2 pi fringe_order``."""

    g_hat: float
    residual: float
    iterations: int
    phase: float = 0.0
    fringe_order: int = 0
    contrast: float = 1.0
    rms: float = 0.0

    def to_dict(self):
        return asdict(self)


def wrap_phase(phase):
    """Reduce to (-pi, pi]."""
    w = math.remainder(float(phase), 2.0 * math.pi)
    return math.pi if w == -math.pi else w


def _scale(kappa, T, eta):
    s = float(eta) * float(kappa) * float(T) ** 2
    if s == 0 or not math.isfinite(s):
        raise UnidentifiableError("eta * kappa * T^2 is zero; g cannot be recovered from the phase")
    return s


def invert_g(delta_phase, kappa, T, eta=1.0):
    """Exact inverse of ``-eta kappa g T^2``."""
    d = float(as_quantity(Phase, delta_phase, "delta_phase"))
    g_hat = -d / _scale(kappa, T, eta)
    return GravimeterEstimate(GravAccel(g_hat), 0.0, 0, phase=d)


def _scan_arrays(scan):
    phi, p = [], []
    for item in scan:
        if hasattr(item, "populations"):
            phi.append(item.value)
            p.append(item.populations.P_e)
        else:
            phi.append(item[0])
            p.append(item[1])
    return np.asarray(phi, dtype=float), np.asarray(p, dtype=float)


def fit_fringe_scan(scan, kappa, T, eta=1.0, g_prior=None, free_contrast=False,
                    tol=1e-10, max_iter=100):
    """Fit ``P_e = (1 - C cos(dphi + phi_L)) / 2`` to a laser-phase scan and invert for g.

    ``scan`` holds ``(phi_L, P_e)`` pairs or :class:`ScanPoint` objects.  The
    contrast ``C`` is 1 unless ``free_contrast``.  The fit only sees the phase
    modulo 2 pi; ``g_prior`` picks the fringe order closest to it.
    """
    phi, p = _scan_arrays(scan)
    scale = _scale(kappa, T, eta)
    if phi.size < 5:
        raise UnidentifiableError(f"need at least 5 scan points, got {phi.size}")
    if np.ptp(phi) < math.pi:
        raise UnidentifiableError("scan must span at least half a fringe (pi rad)")
    if np.ptp(p) == 0:
        raise UnidentifiableError("all scan populations are equal; phase is undetermined")

    # linear start: 1 - 2P = C cos(d) cos(phi) - C sin(d) sin(phi)
    design = np.column_stack([np.cos(phi), np.sin(phi)])
    (a, b), *_ = np.linalg.lstsq(design, 1.0 - 2.0 * p, rcond=None)
    d = math.atan2(-b, a)
    c = math.hypot(a, b) if free_contrast else 1.0

    step = math.inf
    for it in range(1, max_iter + 1):
        arg = d + phi
        model = 0.5 * (1.0 - c * np.cos(arg))
        r = p - model
        if free_contrast:
            jac = np.column_stack([0.5 * c * np.sin(arg), -0.5 * np.cos(arg)])
            delta, *_ = np.linalg.lstsq(jac, r, rcond=None)
            d += delta[0]
            c += delta[1]
            step = abs(delta[0])
        else:
            j = 0.5 * np.sin(arg)
            jj = float(j @ j)
            if jj == 0:
                raise UnidentifiableError("scan has no phase sensitivity")
            delta = float(j @ r) / jj
            d += delta
            step = abs(delta)
        if step < tol:
            break
    else:
        raise FitFailure(f"fringe fit did not converge in {max_iter} iterations",
                         {"last_step": step, "phase": d, "contrast": c})

    rms = float(np.sqrt(np.mean((p - 0.5 * (1.0 - c * np.cos(d + phi))) ** 2)))
    wrapped = wrap_phase(d)
    order = 0
    if g_prior is not None:
        order = int(round((-scale * float(g_prior) - wrapped) / (2.0 * math.pi)))
    unwrapped = wrapped + 2.0 * math.pi * order
    return GravimeterEstimate(GravAccel(-unwrapped / scale), step, it, wrapped, order, c, rms)


def linearized_phase_sigma(phi_grid, phase, sigma):
    """Standard deviation of the fitted phase for population noise ``sigma``."""
    j = 0.5 * np.sin(float(phase) + np.asarray(phi_grid, dtype=float))
    return float(sigma) / math.sqrt(float(j @ j))


@dataclass(frozen=True)
class SensitivityReport:
    matter_coupling: float
    optical_coupling: float
    ratio: float

    def to_dict(self):
        return asdict(self)


def sensitivity_ratio(species, optical_nu, const=CODATA2018):
    """Atom mass against the equivalent mass ``h nu / c^2`` of an optical photon."""
    nu = as_quantity(Frequency, optical_nu, "optical_nu")
    if nu <= 0:
        raise ConfigError("optical frequency must be positive", field="sensitivity.optical_frequency")
    optical = Mass(const.h * nu / const.c2)
    m = species.mass
    return SensitivityReport(m, optical, Dimensionless(m * const.c2 / (const.h * nu)))


@dataclass(frozen=True)
class EtaSweep:
    rows: list
    slope: float
    intercept: float
    expected_slope: float

    @property
    def slope_deviation(self):
        if self.expected_slope == 0:
            return abs(self.slope)
        return abs(self.slope - self.expected_slope) / abs(self.expected_slope)


def ep_sweep(scenario, etas):
    """Numeric gravity phase for each ``eta`` and its least-squares slope."""
    etas = np.asarray(etas, dtype=float).ravel()
    if etas.size == 0 or not np.all(np.isfinite(etas)):
        raise ConfigError("eta grid must be non-empty and finite", field="sweep.eta")
    rows = []
    for eta in etas:
        bd = scenario.with_(eta=float(eta)).breakdown()
        rows.append((float(eta), float(bd.gravity_phase)))
    x = np.array([r[0] for r in rows])
    y = np.array([r[1] for r in rows])
    if x.size > 1 and np.ptp(x) > 0:
        xc = x - x.mean()
        slope = float(xc @ (y - y.mean()) / (xc @ xc))
        intercept = float(y.mean() - slope * x.mean())
    else:
        slope, intercept = math.nan, math.nan
    expected = -float(scenario.kappa) * scenario.g * float(scenario.T) ** 2
    return EtaSweep(rows, slope, intercept, expected)


def trial_rng(seed, trial):
    """Counter-based stream for one trial, independent of execution order."""
    ss = np.random.SeedSequence(int(seed), spawn_key=(int(trial),))
    return np.random.Generator(np.random.Philox(ss))


def synthetic_phase_scan(scenario, n_points=32):
    grid = np.linspace(0.0, 2.0 * math.pi, int(n_points), endpoint=False)
    return fringe_scan(scenario, "phi_L", grid)


@dataclass(frozen=True)
class MonteCarloSummary:
    rows: list
    g_true: float
    mean_error: float
    rms_error: float
    predicted_sigma: float

    @property
    def ratio(self):
        return self.rms_error / self.predicted_sigma

    def to_dict(self):
        return {"g_true": self.g_true, "mean_error": self.mean_error, "rms_error": self.rms_error,
                "predicted_sigma": self.predicted_sigma, "ratio": self.ratio,
                "trials": len(self.rows)}


def monte_carlo_fit(scenario, sigma, trials, seed=0, n_points=32, free_contrast=False):
    """Refit a noisy laser-phase scan many times; rows are ``(trial, g_hat, error)``."""
    if int(trials) < 1:
        raise ConfigError("trials must be positive", field="invert.trials")
    scan = synthetic_phase_scan(scenario, n_points)
    phi, p_clean = _scan_arrays(scan)
    kappa, T, eta, g = scenario.kappa, scenario.T, scenario.eta, scenario.g
    rows = []
    for trial in range(int(trials)):
        noise = trial_rng(seed, trial).normal(0.0, float(sigma), size=p_clean.size)
        est = fit_fringe_scan(list(zip(phi, p_clean + noise)), kappa, T, eta, g_prior=g,
                              free_contrast=free_contrast)
        rows.append((trial, float(est.g_hat), float(est.g_hat) - g))
    err = np.array([r[2] for r in rows])
    true_phase = scan[0].phase - phi[0]
    sig_phase = linearized_phase_sigma(phi, true_phase, sigma)
    return MonteCarloSummary(rows, g, float(err.mean()), float(np.sqrt(np.mean(err ** 2))),
                             sig_phase / _scale(kappa, T, eta))
