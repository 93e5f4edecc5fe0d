"""Gravitational environments and the universal coupling energy.

The vertical axis points up and the potential grows upward.  In the uniform
model ``phi(x) = g x + offset`` where ``offset`` is a gauge constant (zero by
default); in the point-mass model ``phi(r) = -GM/r`` with ``r = r0 + x``.
"""

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, DomainError
from .quantities import (
    CODATA2018, Energy, GravAccel, GravPotential, Length, Mass, as_quantity,
)

__all__ = [
    "GravityEnvironment", "CouplingEnergy", "potential_at", "potential_difference",
    "coupling_energy", "massive_coupling_energy", "photon_coupling_energy",
]

UNIFORM = "uniform"
POINT_MASS = "point-mass"


@dataclass(frozen=True)
class GravityEnvironment:
    model: str = UNIFORM
    g: float = 9.80665
    GM: float = 3.986004418e14
    r0: float = 0.0
    offset: float = 0.0

    def __post_init__(self):
        if self.model not in (UNIFORM, POINT_MASS):
            raise ConfigError(f"unknown gravity model {self.model!r}", field="environment.model")
        object.__setattr__(self, "g", as_quantity(GravAccel, self.g, "g"))
        object.__setattr__(self, "r0", as_quantity(Length, self.r0, "r0"))
        object.__setattr__(self, "offset", as_quantity(GravPotential, self.offset, "offset"))
        if self.model == POINT_MASS and not self.GM > 0:
            raise ConfigError("GM must be positive", field="environment.GM")

    @classmethod
    def uniform(cls, g, offset=0.0):
        return cls(model=UNIFORM, g=g, offset=offset)

    @classmethod
    def point_mass(cls, GM, r0=0.0, offset=0.0):
        return cls(model=POINT_MASS, GM=GM, r0=r0, offset=offset)

    @property
    def is_uniform(self):
        return self.model == UNIFORM

    def with_gauge(self, offset):
        """Same field, potential shifted by a constant."""
        return GravityEnvironment(self.model, self.g, self.GM, self.r0, offset)

    def phi(self, x):
        """Vectorised potential for float or ndarray heights."""
        x = np.asarray(x, dtype=float)
        if self.model == UNIFORM:
            out = self.g * x + self.offset
        else:
            r = self.r0 + x
            if np.any(r <= 0):
                raise DomainError("point-mass potential needs r > 0")
            out = -self.GM / r + self.offset
        return out if out.ndim else float(out)

    def dphi(self, x1, x2):
        """``phi(x1) - phi(x2)``, computed without the gauge constant."""
        if self.model == UNIFORM:
            return self.g * (np.asarray(x1, dtype=float) - np.asarray(x2, dtype=float))
        return self.phi(x1) - self.phi(x2)


def potential_at(env, x):
    x = as_quantity(Length, x, "x")
    return GravPotential(env.phi(float(x)))


def potential_difference(env, x1, x2):
    x1 = as_quantity(Length, x1, "x1")
    x2 = as_quantity(Length, x2, "x2")
    return GravPotential(env.dphi(float(x1), float(x2)))


@dataclass(frozen=True)
class CouplingEnergy:
    value: Energy
    source: str  # "rest-mass", "internal-state" or "photon"


def coupling_energy(E_total, phi, const=CODATA2018):
    """Weak-field coupling ``-E phi / c^2`` of a system with total energy ``E``."""
    E_total = as_quantity(Energy, E_total, "E_total")
    phi = as_quantity(GravPotential, phi, "phi")
    return Energy(-E_total * phi / const.c2)


def photon_coupling_energy(nu, phi, const=CODATA2018):
    return CouplingEnergy(coupling_energy(Energy(const.h * nu), phi, const), "photon")


def massive_coupling_energy(species, internal, phi, const=CODATA2018):
    """``-(m_g + E_i/c^2) phi`` with ``m_g = eta m_i``."""
    internal = as_quantity(Energy, internal, "internal")
    phi = as_quantity(GravPotential, phi, "phi")
    # eta applied last so the rest-mass term is exactly linear in eta
    return Energy(-(species.eta * (species.mass * phi)) - (internal / const.c2) * phi)


def equivalent_mass(E, const=CODATA2018):
    """``E / c^2``."""
    return Mass(abs(as_quantity(Energy, E, "E")) / const.c2)
