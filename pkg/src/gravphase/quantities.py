"""Physical constants, unit-typed scalars and mass/frequency/wavelength conversions.

Every quantity is a ``float`` subclass, so it drops straight into numpy and
``math`` code, but the kind is checked whenever a value enters one of the
package's public functions: passing a :class:`Length` where a :class:`Mass`
is expected raises :class:`~gravphase.errors.UnitError`.  Plain floats are
accepted and interpreted in SI units.
"""

import math
from dataclasses import dataclass

from .errors import InfiniteWavelengthError, InvalidQuantityError, UnitError

__all__ = [
    "Constants", "CODATA2018",
    "Quantity", "Dimensionless", "Mass", "Length", "Time", "Velocity",
    "Frequency", "AngularFrequency", "Phase", "Energy", "Wavenumber",
    "GravAccel", "GravPotential",
    "as_quantity", "compton_frequency", "mass_from_compton_frequency",
    "mass_frequency_roundtrip", "compton_wavelength", "de_broglie_wavelength",
]


@dataclass(frozen=True)
class Constants:
    """Fundamental constants in SI units."""

    c: float
    h: float
    name: str = "custom"

    @property
    def hbar(self):
        return self.h / (2.0 * math.pi)

    @property
    def c2(self):
        return self.c * self.c

    def scaled(self, c_factor=1.0, h_factor=1.0):
        """Copy with rescaled constants, for hypothetical-universe checks."""
        return Constants(self.c * c_factor, self.h * h_factor, name=f"{self.name}*scaled")


# Exact SI-2019 / CODATA-2018 values; the single source of truth for the package.
CODATA2018 = Constants(c=299792458.0, h=6.62607015e-34, name="CODATA-2018")


class Quantity(float):
    """Finite real scalar with a fixed physical kind."""

    unit = ""
    nonnegative = False

    def __new__(cls, value=0.0):
        if isinstance(value, Quantity) and not isinstance(value, cls):
            raise UnitError(f"cannot build {cls.__name__} from {type(value).__name__}")
        v = float(value)
        if not math.isfinite(v):
            raise InvalidQuantityError(f"{cls.__name__} must be finite, got {v!r}")
        if cls.nonnegative and v < 0:
            raise InvalidQuantityError(f"{cls.__name__} must be non-negative, got {v!r}")
        return super().__new__(cls, v)

    def __repr__(self):
        return f"{type(self).__name__}({float(self)!r})"

    def __str__(self):
        return f"{float(self):.10g} {self.unit}".rstrip()


class Dimensionless(Quantity):
    unit = ""


class Mass(Quantity):
    unit = "kg"
    nonnegative = True


class Length(Quantity):
    unit = "m"


class Time(Quantity):
    unit = "s"


class Velocity(Quantity):
    unit = "m/s"


class Frequency(Quantity):
    """Cyclic frequency in Hz."""

    unit = "Hz"


class AngularFrequency(Quantity):
    """Angular frequency in rad/s."""

    unit = "rad/s"


class Phase(Quantity):
    """Phase in radians, never reduced modulo 2 pi."""

    unit = "rad"


class Energy(Quantity):
    unit = "J"


class Wavenumber(Quantity):
    unit = "rad/m"


class GravAccel(Quantity):
    unit = "m/s^2"


class GravPotential(Quantity):
    unit = "m^2/s^2"


def as_quantity(kind, value, name=None):
    """Coerce ``value`` to ``kind``, refusing quantities of another kind."""
    if isinstance(value, kind):
        return value
    if isinstance(value, Quantity):
        label = f"{name}: " if name else ""
        raise UnitError(f"{label}expected {kind.__name__}, got {type(value).__name__}")
    return kind(value)


def compton_frequency(m, const=CODATA2018):
    """Angular Compton frequency ``m c^2 / hbar`` of a mass."""
    m = as_quantity(Mass, m, "m")
    return AngularFrequency(m * (const.c2 / const.hbar))


def mass_from_compton_frequency(omega, const=CODATA2018):
    """Inverse of :func:`compton_frequency`."""
    omega = as_quantity(AngularFrequency, omega, "omega")
    return Mass(omega / (const.c2 / const.hbar))


def mass_frequency_roundtrip(m, const=CODATA2018):
    return mass_from_compton_frequency(compton_frequency(m, const), const)


def compton_wavelength(m, const=CODATA2018):
    """``h / (m c)``; a unit conversion of the mass, not an observable wave."""
    m = as_quantity(Mass, m, "m")
    if m == 0:
        raise InfiniteWavelengthError("Compton wavelength of a massless particle is undefined")
    return Length(const.h / (m * const.c))


def de_broglie_wavelength(m, v, const=CODATA2018):
    """``h / (m |v|)``.

    Raises :class:`InfiniteWavelengthError` for a particle at rest.
    """
    m = as_quantity(Mass, m, "m")
    v = as_quantity(Velocity, v, "v")
    if m == 0:
        raise InvalidQuantityError("de Broglie wavelength needs a positive mass")
    if v == 0:
        raise InfiniteWavelengthError("particle at rest has an infinite de Broglie wavelength")
    return Length(const.h / (m * abs(v)))
