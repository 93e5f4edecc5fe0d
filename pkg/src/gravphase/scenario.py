"""A complete Mach-Zehnder gravimeter scenario as one immutable value."""

from dataclasses import dataclass, field, replace

from .gravity import GravityEnvironment
from .phase import DEFAULT_N_STEPS, mz_phase_breakdown
from .quantities import CODATA2018, Phase
from .species import CESIUM_133, AtomSpecies

__all__ = ["MZScenario", "DEFAULT_KAPPA", "default_cesium_scenario"]

DEFAULT_KAPPA = 1.4748e7


@dataclass(frozen=True)
class MZScenario:
    species: AtomSpecies = CESIUM_133
    env: GravityEnvironment = field(default_factory=lambda: GravityEnvironment.uniform(9.8))
    kappa: float = DEFAULT_KAPPA
    T: float = 0.1
    x0: float = 0.0
    v0: float = 0.0
    phases: tuple = (0.0, 0.0, 0.0)
    n_steps: int = DEFAULT_N_STEPS
    internal_swap: bool = True
    const: object = field(default=CODATA2018, repr=False)

    @property
    def eta(self):
        return float(self.species.eta)

    @property
    def g(self):
        return float(self.env.g)

    def breakdown(self):
        return mz_phase_breakdown(
            self.species, self.env, self.kappa, self.T, x0=self.x0, v0=self.v0,
            phases=self.phases, n_steps=self.n_steps, internal_swap=self.internal_swap,
            const=self.const)

    def observable_phase(self):
        """Total differential phase that sets the exit-port populations."""
        if self.T == 0:
            p1, p2, p3 = self.phases
            return Phase(p1 - 2.0 * p2 + p3)
        return self.breakdown().total

    def with_(self, **changes):
        if "g" in changes:
            changes["env"] = replace(self.env, g=changes.pop("g"))
        if "eta" in changes:
            changes["species"] = self.species.with_eta(changes.pop("eta"))
        if "phi_L" in changes:
            p1, p2, _ = self.phases
            changes["phases"] = (p1, p2, changes.pop("phi_L"))
        return replace(self, **changes)


def default_cesium_scenario(**changes):
    return MZScenario().with_(**changes)
