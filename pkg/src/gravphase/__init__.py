"""Gravitational phase of matter waves, clocks and light.

Numeric path-phase integration for light-pulse atom interferometers with an
explicit gravitational-to-inertial mass ratio, the closed-form phase
expressions it is checked against, clock time dilation and redshift, and a
gravimeter inversion toolkit.
"""

__version__ = "0.1.0"

from .errors import (  # noqa: E402
    ConfigError, DomainError, FitFailure, GravPhaseError, InfiniteWavelengthError,
    InvalidQuantityError, RangeError, ResolutionError, UnidentifiableError, UnitError,
    UnsupportedSequenceError,
)
from .quantities import CODATA2018, Constants  # noqa: E402
from .species import CESIUM_133, RUBIDIUM_87, AtomSpecies, get_species  # noqa: E402
from .gravity import GravityEnvironment  # noqa: E402
from .scenario import MZScenario, default_cesium_scenario  # noqa: E402
