"""Quantum phase along the interferometer arms, numeric and closed form.

Phase conventions
-----------------
The gravitational phase of a path is ``Delta_g = (1/hbar) * integral E_g dt``
with ``E_g = -m_g phi(x)``; a Mach-Zehnder differential phase is arm A minus
arm B.  Channels tracked per arm:

``potential``  ``-(eta m_i / hbar) * integral phi(x(t)) dt`` (the model the
               gravimeter inverts; equals the potential part of the Lagrangian
               action)
``kinetic``    ``(m_i / 2 hbar) * integral v(t)^2 dt``
``laser``      ``sum of sign * (kappa x(t_p) + phi_L)`` over the laser
               interactions of the arm
``internal``   ``-(1/hbar) * integral E_i(t) (1 + phi(x(t))/c^2) dt``, which
               also carries the gravitational coupling of the internal energy

Kinetic plus potential is the free propagation phase; for a closed
interferometer in a uniform field its difference vanishes and the laser
channel alone carries ``-eta kappa g T^2``, the same value the potential
channel gives on its own.

Differences between arms are integrated pointwise from the kick ramps, never
by subtracting two large per-arm totals, so the launch height and velocity
cancel exactly.
"""

import json
import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .errors import ConfigError, DomainError
from .quadrature import simpson, simpson_nodes
from .quantities import (
    CODATA2018, AngularFrequency, Dimensionless, Energy, GravPotential, Length,
    Mass, Phase, Time, Velocity, Wavenumber, as_quantity,
)
from .sequence import EXCITED, GROUND, PulseSequence, build_mz_arms

__all__ = [
    "DEFAULT_N_STEPS", "EQ3_PREFACTOR", "EQ4_PREFACTOR",
    "ChannelPhases", "PhaseBreakdown", "ClosedFormInputs", "EquivalenceReport",
    "integrate_arm_phase", "integrate_mz", "mz_phase_breakdown",
    "closed_form_phase_eq2", "closed_form_phase_eq3", "closed_form_phase_eq4",
    "compton_form_phase", "compton_form_phase_ep", "closed_form_phase_eq7",
    "closed_form_mz_phase", "parallel_section_phase", "verify_equivalence_chain",
    "relative_deviation",
]

DEFAULT_N_STEPS = 1000

# Printed with the de Broglie wavelength, the third and fourth forms of the
# per-path phase are off from the first by 2 pi in opposite directions; both
# are exact with the reduced wavelength lambda_dB / 2 pi.  These factors
# restore that.  tests/test_phase.py recovers them from random inputs.
EQ3_PREFACTOR = 1.0 / (2.0 * math.pi)
EQ4_PREFACTOR = 2.0 * math.pi


@dataclass(frozen=True)
class ChannelPhases:
    potential: float = 0.0
    kinetic: float = 0.0
    laser: float = 0.0
    internal_rest: float = 0.0
    internal_gravity: float = 0.0

    @property
    def internal(self):
        return Phase(self.internal_rest + self.internal_gravity)

    @property
    def propagation(self):
        """Kinetic plus potential: the Lagrangian action over hbar."""
        return Phase(self.kinetic + self.potential)

    @property
    def total(self):
        return Phase(math.fsum([self.potential, self.kinetic, self.laser,
                                self.internal_rest, self.internal_gravity]))

    def to_dict(self):
        d = asdict(self)
        d.update(internal=float(self.internal), propagation=float(self.propagation),
                 total=float(self.total))
        return d


@dataclass(frozen=True)
class PhaseBreakdown:
    arm_a: ChannelPhases
    arm_b: ChannelPhases
    differential: ChannelPhases
    n_steps: int = DEFAULT_N_STEPS

    @property
    def gravity_phase(self):
        """Differential potential channel, the gravimeter observable."""
        return Phase(self.differential.potential)

    @property
    def total(self):
        return self.differential.total

    def to_dict(self):
        return {
            "arm_A": self.arm_a.to_dict(),
            "arm_B": self.arm_b.to_dict(),
            "differential": self.differential.to_dict(),
            "n_steps": self.n_steps,
        }


def _internal_energies(species, internal_energies, const):
    if internal_energies is None:
        return {GROUND: 0.0, EXCITED: float(species.hyperfine_energy(const))}
    if isinstance(internal_energies, dict):
        return {GROUND: float(internal_energies.get(GROUND, 0.0)),
                EXCITED: float(internal_energies.get(EXCITED, 0.0))}
    e_g, e_e = internal_energies
    return {GROUND: float(e_g), EXCITED: float(e_e)}


def _segment_state(arm, t0):
    return arm.state_at(t0)


def integrate_arm_phase(arm, species, env, internal_energies=None, n_steps=DEFAULT_N_STEPS,
                        const=CODATA2018):
    """Integrate every phase channel along one arm with per-segment Simpson."""
    if int(n_steps) < 2:
        raise ConfigError(f"n_steps must be at least 2, got {n_steps}", field="run.n_steps")
    energies = _internal_energies(species, internal_energies, const)
    hbar = const.hbar
    m = float(species.mass)
    eta = float(species.eta)
    pot, kin, rest, grav = [], [], [], []
    for i, (t0, t1) in enumerate(zip(arm.breaks, arm.breaks[1:])):
        t, h = simpson_nodes(t0, t1, n_steps)
        phi = env.phi(arm.position(t))
        v = arm.segment_velocity(t, i)
        e_int = energies[_segment_state(arm, t0)]
        pot.append(-(eta * m / hbar) * simpson(phi, h))
        kin.append((0.5 * m / hbar) * simpson(v * v, h))
        rest.append(-(e_int / hbar) * simpson(np.ones_like(t), h))
        grav.append(-(e_int / (hbar * const.c2)) * simpson(phi, h))
    laser = math.fsum(sign * (arm.kappa * arm.position(tp) + ph) for tp, sign, ph in arm.couplings)
    return ChannelPhases(
        potential=math.fsum(pot), kinetic=math.fsum(kin), laser=laser,
        internal_rest=math.fsum(rest), internal_gravity=math.fsum(grav),
    )


def _differential(arm_a, arm_b, species, env, energies, n_steps, const):
    if (arm_a.x0, arm_a.v0, arm_a.accel, arm_a.breaks) != (arm_b.x0, arm_b.v0, arm_b.accel, arm_b.breaks):
        raise ConfigError("arms must share launch state, acceleration and pulse times")
    hbar = const.hbar
    m = float(species.mass)
    eta = float(species.eta)
    pot, kin, grav = [], [], []
    for i, (t0, t1) in enumerate(zip(arm_a.breaks, arm_a.breaks[1:])):
        t, h = simpson_nodes(t0, t1, n_steps)
        # separation from kick ramps only; free fall is common to both arms
        sep = arm_a.displacement(t) - arm_b.displacement(t)
        dphi = env.dphi(sep, 0.0)
        ka = arm_a.segment_kick_velocity(i)
        kb = arm_b.segment_kick_velocity(i)
        v_common = arm_a.v0 + arm_a.accel * t
        v_sum = 2.0 * v_common + ka + kb
        ea = energies[_segment_state(arm_a, t0)]
        eb = energies[_segment_state(arm_b, t0)]
        phi_a = env.phi(arm_a.position(t))
        phi_b = env.phi(arm_b.position(t))
        pot.append(-(eta * m / hbar) * simpson(dphi, h))
        kin.append((0.5 * m / hbar) * (ka - kb) * simpson(v_sum, h))
        grav.append(-(1.0 / (hbar * const.c2)) * simpson(ea * phi_a - eb * phi_b, h))
    return math.fsum(pot), math.fsum(kin), math.fsum(grav)


def integrate_mz(arm_a, arm_b, species, env, internal_energies=None, n_steps=DEFAULT_N_STEPS,
                 const=CODATA2018):
    """Per-arm and differential phases for a pair of arms from :func:`build_mz_arms`."""
    if int(n_steps) < 2:
        raise ConfigError(f"n_steps must be at least 2, got {n_steps}", field="run.n_steps")
    energies = _internal_energies(species, internal_energies, const)
    a = integrate_arm_phase(arm_a, species, env, energies, n_steps, const)
    b = integrate_arm_phase(arm_b, species, env, energies, n_steps, const)
    pot, kin, grav = _differential(arm_a, arm_b, species, env, energies, n_steps, const)
    # both arms interact with the laser as often up as down, so x0 drops out
    laser_terms = [sign * (arm_a.kappa * arm_a.relative_position(tp) + ph)
                   for tp, sign, ph in arm_a.couplings]
    laser_terms += [-sign * (arm_b.kappa * arm_b.relative_position(tp) + ph)
                    for tp, sign, ph in arm_b.couplings]
    diff = ChannelPhases(
        potential=pot, kinetic=kin, laser=math.fsum(laser_terms),
        internal_rest=a.internal_rest - b.internal_rest, internal_gravity=grav,
    )
    return PhaseBreakdown(a, b, diff, int(n_steps))


def mz_phase_breakdown(species, env, kappa, T, x0=0.0, v0=0.0, phases=(0.0, 0.0, 0.0),
                       n_steps=DEFAULT_N_STEPS, internal_swap=True, internal_energies=None,
                       const=CODATA2018):
    """Build the canonical arms and integrate them in one call."""
    seq = PulseSequence.mach_zehnder(kappa, T, phases)
    arm_a, arm_b = build_mz_arms(species, env, seq, x0, v0, internal_swap, const)
    return integrate_mz(arm_a, arm_b, species, env, internal_energies, n_steps, const)


@dataclass(frozen=True)
class ClosedFormInputs:
    """Every symbol of the closed-form phase expressions, mutually consistent.

    ``phi_g`` is the potential the phase is evaluated in; for the
    Mach-Zehnder mapping it is the potential difference ``delta_phi = g l``
    between the two parallel path sections.
    """

    m_g: float
    m_i: float
    eta: float
    phi_g: float
    delta_phi: float
    l: float
    v: float
    lambda_dB: float
    E_kin: float
    kappa: float
    T: float
    omega_c: float
    const: object = field(default=CODATA2018, repr=False, compare=False)

    def __post_init__(self):
        typed = dict(m_g=Mass, m_i=Mass, eta=Dimensionless, phi_g=GravPotential,
                     delta_phi=GravPotential, l=Length, v=Velocity, lambda_dB=Length,
                     E_kin=Energy, kappa=Wavenumber, T=Time, omega_c=AngularFrequency)
        for name, kind in typed.items():
            object.__setattr__(self, name, as_quantity(kind, getattr(self, name), name))
        c = self.const
        checks = {
            "eta": (self.m_g, self.eta * self.m_i),
            "lambda_dB": (self.lambda_dB, 2.0 * math.pi * c.hbar / (self.m_i * abs(self.v))),
            "E_kin": (self.E_kin, 0.5 * self.m_i * self.v * self.v),
            "omega_c": (self.omega_c, self.m_i * c.c2 / c.hbar),
        }
        for name, (have, want) in checks.items():
            if not math.isclose(have, want, rel_tol=1e-12, abs_tol=0.0):
                raise ConfigError(f"inconsistent closed-form input {name}: {have!r} vs {want!r}")

    @classmethod
    def build(cls, m_i, eta, phi_g, l, v, T, delta_phi=None, kappa=None, const=CODATA2018):
        if v == 0:
            raise DomainError("closed-form inputs need a moving particle (v != 0)")
        lam = 2.0 * math.pi * const.hbar / (m_i * abs(v))
        return cls(
            m_g=eta * m_i, m_i=m_i, eta=eta, phi_g=phi_g,
            delta_phi=phi_g if delta_phi is None else delta_phi, l=l, v=v,
            lambda_dB=lam, E_kin=0.5 * m_i * v * v,
            kappa=(2.0 * math.pi / lam) if kappa is None else kappa, T=T,
            omega_c=m_i * const.c2 / const.hbar, const=const,
        )

    @classmethod
    def from_mz(cls, species, g, kappa, T, eta=None, const=CODATA2018):
        """Parallel-section picture: arms separated by ``l = v_r T`` for a time ``T``."""
        eta = float(species.eta if eta is None else eta)
        m = float(species.mass)
        vr = const.hbar * float(kappa) / m
        l = vr * float(T)
        dphi = float(g) * l
        return cls.build(m, eta, dphi, l, vr, T, delta_phi=dphi, kappa=kappa, const=const)

    @property
    def g(self):
        return self.delta_phi / self.l if self.l else 0.0


def closed_form_phase_eq2(inputs):
    """``-m_g phi_g l / (v hbar)``: potential energy times time of flight ``l / v``."""
    if inputs.v == 0:
        raise DomainError("eq2 needs v != 0")
    return Phase(-inputs.m_g * inputs.phi_g * inputs.l / (inputs.v * inputs.const.hbar))


def closed_form_phase_eq3(inputs, prefactor=EQ3_PREFACTOR):
    """``-m_g phi_g l m_i lambda_dB / hbar^2``, scaled by ``prefactor``."""
    hbar = inputs.const.hbar
    return Phase(-prefactor * inputs.m_g * inputs.phi_g * inputs.l * inputs.m_i
                 * inputs.lambda_dB / (hbar * hbar))


def closed_form_phase_eq4(inputs, prefactor=EQ4_PREFACTOR):
    """``-(m_g/m_i) (E_g / 2 E_kin) (l / lambda_dB)`` with ``E_g = m_i phi_g``.

    Pass ``prefactor=1`` for the expression exactly as usually printed.
    """
    if inputs.E_kin <= 0 or inputs.lambda_dB <= 0:
        raise DomainError("eq4 needs positive kinetic energy and wavelength")
    e_grav = inputs.m_i * inputs.phi_g
    return Phase(-prefactor * (inputs.m_g / inputs.m_i) * (e_grav / (2.0 * inputs.E_kin))
                 * (inputs.l / inputs.lambda_dB))


def compton_form_phase(inputs, T=None):
    """``-(m_g/m_i) omega_c phi_g T / c^2``: mass rewritten as Compton frequency."""
    T = inputs.T if T is None else as_quantity(Time, T, "T")
    return Phase(-inputs.eta * inputs.omega_c * inputs.phi_g * T / inputs.const.c2)


def compton_form_phase_ep(inputs, T=None):
    """Same with the equivalence principle assumed (``m_g = m_i``)."""
    T = inputs.T if T is None else as_quantity(Time, T, "T")
    return Phase(-inputs.omega_c * inputs.phi_g * T / inputs.const.c2)


def closed_form_phase_eq7(g, T, lambda_dB):
    """``-2 pi g T^2 / lambda_dB`` with the relative de Broglie wavelength."""
    return Phase(-2.0 * math.pi * float(g) * float(T) ** 2 / float(lambda_dB))


def closed_form_mz_phase(kappa, g, T, eta=1.0):
    """Gravimeter phase ``-eta kappa g T^2``."""
    T = as_quantity(Time, T, "T")
    if T < 0:
        raise DomainError("T must be non-negative")
    return Phase(-float(eta) * float(kappa) * float(g) * T * T)


def parallel_section_phase(m_g, g, l, T, const=CODATA2018):
    """``-m_g g l T / hbar`` for two path sections ``l`` apart held for ``T``."""
    return Phase(-float(m_g) * float(g) * float(l) * float(T) / const.hbar)


def relative_deviation(a, b):
    scale = max(abs(a), abs(b))
    return 0.0 if scale == 0 else abs(a - b) / scale


# forms that silently assume m_g = m_i
_EP_ASSUMED = ("eq5", "eq7", "eq8")


@dataclass
class EquivalenceReport:
    values: dict
    deviations: dict
    checked: list
    failures: list
    tolerance: float
    scenario: dict

    @property
    def passed(self):
        return not self.failures

    def to_dict(self):
        return {
            "values": self.values,
            "deviations": self.deviations,
            "checked": self.checked,
            "failures": self.failures,
            "tolerance": self.tolerance,
            "passed": self.passed,
            "scenario": self.scenario,
        }

    def to_json(self):
        return json.dumps(self.to_dict(), sort_keys=True, indent=2)


def verify_equivalence_chain(species, env, kappa, T, eta=None, n_steps=DEFAULT_N_STEPS,
                             x0=0.0, v0=0.0, tol=1e-9, const=CODATA2018):
    """Cross-check the numeric differential phase against every closed form.

    Never raises on disagreement; mismatches land in ``report.failures``.
    Forms that presume ``m_g = m_i`` are checked only when ``eta == 1``.
    """
    eta = float(species.eta if eta is None else eta)
    sp = species.with_eta(eta)
    g = float(env.g)
    bd = mz_phase_breakdown(sp, env, kappa, T, x0=x0, v0=v0, n_steps=n_steps, const=const)
    ci = ClosedFormInputs.from_mz(sp, g, kappa, T, eta, const)
    values = {
        "numeric": float(bd.differential.potential),
        "eq2": float(closed_form_phase_eq2(ci)),
        "eq3": float(closed_form_phase_eq3(ci)),
        "eq4": float(closed_form_phase_eq4(ci)),
        "eq5": float(compton_form_phase_ep(ci)),
        "eq6": float(compton_form_phase(ci)),
        "eq7": float(closed_form_phase_eq7(g, T, ci.lambda_dB)),
        "eq8": float(closed_form_mz_phase(kappa, g, T, 1.0)),
        "eq9": float(closed_form_mz_phase(kappa, g, T, eta)),
        "parallel_section": float(parallel_section_phase(ci.m_g, g, ci.l, T, const)),
    }
    names = sorted(values)
    deviations = {}
    for i, a in enumerate(names):
        for b in names[i + 1:]:
            deviations[f"{a}|{b}"] = relative_deviation(values[a], values[b])
    active = [n for n in names if eta == 1.0 or n not in _EP_ASSUMED]
    checked, failures = [], []
    for i, a in enumerate(active):
        for b in active[i + 1:]:
            key = f"{a}|{b}"
            checked.append(key)
            if not deviations[key] <= tol:
                failures.append(key)
    scenario = {"species": sp.name, "mass": float(sp.mass), "eta": eta, "g": g,
                "kappa": float(kappa), "T": float(T), "x0": float(x0), "v0": float(v0),
                "n_steps": int(n_steps)}
    return EquivalenceReport(values, deviations, checked, failures, tol, scenario)
