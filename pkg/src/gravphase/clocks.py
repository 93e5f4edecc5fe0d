"""Gravitational time dilation of clocks and redshift of light between stations.

Weak-field, first order in phi/c^2.  Sign conventions:

* ``time_dilation(env, x1, x2, T)`` is positive when ``x1`` sits at the
  higher potential, i.e. the clock at ``x1`` gains ``dT`` on the one at ``x2``.
* ``photon_redshift`` returns the frequency counted by the receiving clock;
  light climbing the potential arrives red-shifted.
"""

import math
from dataclasses import dataclass

from .errors import DomainError
from .quantities import (
    CODATA2018, Dimensionless, Frequency, Length, Phase, Time, as_quantity,
)

__all__ = [
    "ClockStation", "time_dilation", "fractional_rate", "photon_redshift",
    "fractional_redshift", "clock_phase_deficit", "resolvable_time_dilation",
    "compare_clocks",
]


@dataclass(frozen=True)
class ClockStation:
    x: float
    nu: float
    T: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "x", as_quantity(Length, self.x, "x"))
        object.__setattr__(self, "nu", as_quantity(Frequency, self.nu, "nu"))
        object.__setattr__(self, "T", as_quantity(Time, self.T, "T"))
        if self.nu <= 0:
            raise DomainError("clock frequency must be positive")
        if self.T < 0:
            raise DomainError("elapsed duration must be non-negative")


def fractional_rate(env, x1, x2, const=CODATA2018):
    """``(phi(x1) - phi(x2)) / c^2``."""
    x1 = as_quantity(Length, x1, "x1")
    x2 = as_quantity(Length, x2, "x2")
    return Dimensionless(env.dphi(float(x1), float(x2)) / const.c2)


def time_dilation(env, x1, x2, T, const=CODATA2018):
    T = as_quantity(Time, T, "T")
    return Time(T * fractional_rate(env, x1, x2, const))


def fractional_redshift(env, x_emit, x_receive, const=CODATA2018):
    return fractional_rate(env, x_emit, x_receive, const)


def photon_redshift(env, x_emit, x_receive, nu, const=CODATA2018):
    nu = as_quantity(Frequency, nu, "nu")
    if nu <= 0:
        raise DomainError("photon frequency must be positive")
    return Frequency(nu * (1.0 + fractional_redshift(env, x_emit, x_receive, const)))


def clock_phase_deficit(nu, deltaT):
    """Phase ``2 pi nu dT`` accumulated by a clock of frequency ``nu`` over ``dT``."""
    nu = as_quantity(Frequency, nu, "nu")
    deltaT = as_quantity(Time, deltaT, "deltaT")
    if nu <= 0:
        raise DomainError("clock frequency must be positive")
    return Phase(2.0 * math.pi * nu * deltaT)


def resolvable_time_dilation(phase, nu):
    """Smallest time offset ``phase / omega`` a clock of frequency ``nu`` resolves."""
    phase = as_quantity(Phase, phase, "phase")
    nu = as_quantity(Frequency, nu, "nu")
    if nu <= 0:
        raise DomainError("clock frequency must be positive")
    return Time(phase / (2.0 * math.pi * nu))


def compare_clocks(env, positions, reference, T, nu, const=CODATA2018):
    """One table row per position, compared against a clock at ``reference``."""
    rows = []
    for x in positions:
        dT = time_dilation(env, x, reference, T, const)
        rows.append({
            "x": float(x),
            "reference": float(reference),
            "potential_difference": float(env.dphi(float(x), float(reference))),
            "duration": float(T),
            "time_dilation": float(dT),
            "fractional_rate": float(fractional_rate(env, x, reference, const)),
            "clock_phase": float(clock_phase_deficit(nu, dT)),
            "received_frequency_at_x": float(photon_redshift(env, reference, x, nu, const)),
            "redshift_up": float(fractional_redshift(env, reference, x, const)),
        })
    return rows
