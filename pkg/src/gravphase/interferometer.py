"""Observables: exit-port populations, fringe scans and spatial fringe patterns.

Readout convention: ``P_e = (1 - cos dphi) / 2`` so a vanishing differential
phase sends every atom back to the ground port.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, ResolutionError
from .quantities import CODATA2018, Dimensionless, Length, Phase, Velocity, as_quantity

__all__ = [
    "PortPopulations", "FringePattern", "ScanPoint", "FallReport", "port_population",
    "fringe_scan", "spatial_fringes", "fringe_fall_check", "MIN_SAMPLES_PER_FRINGE",
    "SCAN_VARIABLES",
]

MIN_SAMPLES_PER_FRINGE = 16
SCAN_VARIABLES = ("T", "g", "phi_L")


@dataclass(frozen=True)
class PortPopulations:
    P_e: float
    P_g: float


def port_population(delta_phase):
    d = float(as_quantity(Phase, delta_phase, "delta_phase"))
    p_e = 0.5 * (1.0 - math.cos(d))
    return PortPopulations(Dimensionless(p_e), Dimensionless(1.0 - p_e))


@dataclass(frozen=True)
class ScanPoint:
    value: float
    phase: float
    populations: PortPopulations

    def as_row(self):
        return (self.value, self.populations.P_e, self.populations.P_g)


def _check_grid(grid):
    grid = np.asarray(grid, dtype=float).ravel()
    if grid.size == 0:
        raise ConfigError("scan grid is empty", field="scan.grid")
    if not np.all(np.isfinite(grid)):
        raise ConfigError("scan grid must be finite", field="scan.grid")
    if grid.size > 1:
        step = np.diff(grid)
        if not (np.all(step > 0) or np.all(step < 0)):
            raise ConfigError("scan grid must be strictly monotone", field="scan.grid")
    return grid


def fringe_scan(scenario, scan_variable, grid):
    """Exit-port populations as one scenario parameter is stepped.

    ``scan_variable`` is ``"T"``, ``"g"`` or ``"phi_L"`` (optical phase of the
    final pulse).  Every point runs the full phase integrator.
    """
    if scan_variable not in SCAN_VARIABLES:
        raise ConfigError(f"cannot scan {scan_variable!r}; choose one of {SCAN_VARIABLES}",
                          field="scan.variable")
    grid = _check_grid(grid)
    if scan_variable == "T" and np.any(grid < 0):
        raise ConfigError("T must be non-negative", field="scan.grid")
    out = []
    for value in grid:
        phase = scenario.with_(**{scan_variable: float(value)}).observable_phase()
        out.append(ScanPoint(float(value), float(phase), port_population(phase)))
    return out


@dataclass(frozen=True)
class FringePattern:
    x: np.ndarray
    intensity: np.ndarray
    spacing: float
    expected_spacing: float
    peaks: np.ndarray

    def rows(self):
        return list(zip(self.x.tolist(), self.intensity.tolist()))


def _peak_positions(x, y):
    interior = (y[1:-1] >= y[:-2]) & (y[1:-1] > y[2:])
    idx = np.nonzero(interior)[0] + 1
    # three-point parabola through each sampled maximum
    y0, y1, y2 = y[idx - 1], y[idx], y[idx + 1]
    denom = y0 - 2.0 * y1 + y2
    shift = np.where(denom != 0, 0.5 * (y0 - y2) / np.where(denom != 0, denom, 1.0), 0.0)
    dx = x[1] - x[0]
    return x[idx] + shift * dx


def spatial_fringes(species, v1, v2, window, n, offset=0.0, const=CODATA2018):
    """Density of two equal-amplitude plane matter waves with velocities ``v1``, ``v2``.

    The grid spans ``[-window/2, window/2]`` with ``n`` samples.  ``offset`` is
    a relative phase between the two waves.  The fringe spacing is measured
    as the mean distance between successive maxima.
    """
    v1 = float(as_quantity(Velocity, v1, "v1"))
    v2 = float(as_quantity(Velocity, v2, "v2"))
    window = float(as_quantity(Length, window, "window"))
    n = int(n)
    if v1 == v2:
        raise ConfigError("spatial fringes need two distinct velocities", field="fringes.v2")
    if window <= 0 or n < 3:
        raise ConfigError("window must be positive and n >= 3", field="fringes.n")
    m = float(species.mass)
    k1, k2 = m * v1 / const.hbar, m * v2 / const.hbar
    expected = 2.0 * math.pi / abs(k1 - k2)
    per_fringe = (n - 1) * expected / window
    if per_fringe < MIN_SAMPLES_PER_FRINGE:
        raise ResolutionError(
            f"{per_fringe:.2f} samples per fringe; need at least {MIN_SAMPLES_PER_FRINGE}")
    x = np.linspace(-0.5 * window, 0.5 * window, n)
    psi = (np.exp(1j * (k1 * x + 0.5 * offset)) + np.exp(1j * (k2 * x - 0.5 * offset))) / math.sqrt(2.0)
    intensity = np.abs(psi) ** 2
    peaks = _peak_positions(x, intensity)
    if peaks.size < 2:
        raise ResolutionError("window holds fewer than two fringe maxima")
    spacing = (peaks[-1] - peaks[0]) / (peaks.size - 1)
    return FringePattern(x, intensity, float(spacing), expected, peaks)


@dataclass(frozen=True)
class FallReport:
    fall_distance: float
    lambda_dB: float
    phase: float
    kappa_g_T2: float
    deviation: float
    passed: bool

    def to_dict(self):
        return dict(self.__dict__)


def fringe_fall_check(species, kappa, g, T, tol=1e-12):
    """Fringes falling ``2 g T^2`` over ``2T``, counted in units of half the relative
    de Broglie wavelength, reproduce the gravimeter phase magnitude ``kappa g T^2``.
    """
    kappa, g, T = float(kappa), float(g), float(T)
    fall = 2.0 * g * T * T
    lam = 2.0 * math.pi / kappa
    phase = 2.0 * math.pi * fall / (2.0 * lam)
    target = kappa * g * T * T
    scale = max(abs(phase), abs(target))
    dev = 0.0 if scale == 0 else abs(phase - target) / scale
    return FallReport(fall, lam, phase, target, dev, dev <= tol)
