"""Atomic species and the built-in presets."""

import math
from dataclasses import dataclass, replace

from .errors import ConfigError
from .quantities import (
    CODATA2018, Dimensionless, Energy, Frequency, Length, Mass, Velocity,
    Wavenumber, as_quantity, compton_frequency, compton_wavelength,
    de_broglie_wavelength,
)

__all__ = ["AtomSpecies", "PRESETS", "get_species", "CESIUM_133", "RUBIDIUM_87"]


@dataclass(frozen=True)
class AtomSpecies:
    """An atom with an explicit gravitational-to-inertial mass ratio ``eta``.

    ``hyperfine`` is the ground-state clock splitting in Hz and
    ``optical_wavelength`` the wavelength of the transition driven by the
    interferometer beams.
    """

    name: str
    mass: float
    eta: float = 1.0
    hyperfine: float = 0.0
    optical_wavelength: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "mass", as_quantity(Mass, self.mass, "mass"))
        object.__setattr__(self, "eta", as_quantity(Dimensionless, self.eta, "eta"))
        object.__setattr__(self, "hyperfine", as_quantity(Frequency, self.hyperfine, "hyperfine"))
        object.__setattr__(self, "optical_wavelength",
                           as_quantity(Length, self.optical_wavelength, "optical_wavelength"))
        if self.mass <= 0:
            raise ConfigError("species mass must be positive", field="species.mass")
        if self.hyperfine < 0:
            raise ConfigError("hyperfine splitting must be non-negative", field="species.hyperfine")
        if self.optical_wavelength < 0:
            raise ConfigError("optical wavelength must be non-negative",
                              field="species.optical_wavelength")

    @property
    def gravitational_mass(self):
        return Mass(self.eta * self.mass)

    def hyperfine_energy(self, const=CODATA2018):
        return Energy(const.h * self.hyperfine)

    def optical_frequency(self, const=CODATA2018):
        if self.optical_wavelength == 0:
            raise ConfigError("species has no optical wavelength", field="species.optical_wavelength")
        return Frequency(const.c / self.optical_wavelength)

    def two_photon_wavenumber(self, order=2):
        """Effective wavenumber ``order * 2 pi / lambda`` of counter-propagating beams."""
        if self.optical_wavelength == 0:
            raise ConfigError("species has no optical wavelength", field="species.optical_wavelength")
        return Wavenumber(order * 2.0 * math.pi / self.optical_wavelength)

    def compton_frequency(self, const=CODATA2018):
        return compton_frequency(self.mass, const)

    def compton_wavelength(self, const=CODATA2018):
        return compton_wavelength(self.mass, const)

    def de_broglie_wavelength(self, v, const=CODATA2018):
        return de_broglie_wavelength(self.mass, as_quantity(Velocity, v), const)

    def with_eta(self, eta):
        return replace(self, eta=eta)


CESIUM_133 = AtomSpecies(
    name="cesium-133",
    mass=2.2069469500e-25,
    hyperfine=9.192631770e9,
    optical_wavelength=852.34727582e-9,
)

RUBIDIUM_87 = AtomSpecies(
    name="rubidium-87",
    mass=1.4431606480e-25,
    hyperfine=6.834682610904e9,
    optical_wavelength=780.241209686e-9,
)

PRESETS = {
    "cesium-133": CESIUM_133,
    "cesium": CESIUM_133,
    "cs133": CESIUM_133,
    "rubidium-87": RUBIDIUM_87,
    "rubidium": RUBIDIUM_87,
    "rb87": RUBIDIUM_87,
}


def get_species(name):
    try:
        return PRESETS[name.lower()]
    except KeyError:
        known = ", ".join(sorted({s.name for s in PRESETS.values()}))
        raise ConfigError(f"unknown species {name!r} (known: {known})", field="species.name") from None
