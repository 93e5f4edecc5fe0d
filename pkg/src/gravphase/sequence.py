"""Light-pulse sequences and the classical world lines of the two interferometer arms.

Pulses are instantaneous.  Between pulses each arm falls freely with
acceleration ``-eta g``; a pulse changes the arm velocity by ``+-hbar kappa / m_i``.
An arm's position is kept as free fall of the launch state plus the sum of
the kick ramps, ``x(t) = x0 + v0 t - eta g t^2 / 2 + sum_k dv_k (t - t_k)_+``,
so that the separation between arms never involves the launch state.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import RangeError, UnsupportedSequenceError
from .quantities import (
    CODATA2018, Length, Phase, Time, Velocity, Wavenumber, as_quantity,
)

__all__ = [
    "BEAMSPLITTER", "MIRROR", "LaserPulse", "PulseSequence", "Segment",
    "ArmTrajectory", "build_mz_arms", "arm_position", "recoil_velocity",
    "sample_arms",
]

BEAMSPLITTER = "pi/2"
MIRROR = "pi"
GROUND = "g"
EXCITED = "e"


@dataclass(frozen=True)
class LaserPulse:
    t: float
    kappa: float
    kind: str = BEAMSPLITTER
    phase: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "t", as_quantity(Time, self.t, "t"))
        object.__setattr__(self, "kappa", as_quantity(Wavenumber, self.kappa, "kappa"))
        object.__setattr__(self, "phase", as_quantity(Phase, self.phase, "phase"))
        if self.kind not in (BEAMSPLITTER, MIRROR):
            raise UnsupportedSequenceError(f"unknown pulse kind {self.kind!r}")


@dataclass(frozen=True)
class PulseSequence:
    pulses: tuple

    def __post_init__(self):
        pulses = tuple(self.pulses)
        object.__setattr__(self, "pulses", pulses)
        times = [p.t for p in pulses]
        if any(b <= a for a, b in zip(times, times[1:])):
            raise UnsupportedSequenceError("pulses must be strictly time-ordered")
        if len({float(p.kappa) for p in pulses}) > 1:
            raise UnsupportedSequenceError("all pulses of a sequence must share kappa")

    @classmethod
    def mach_zehnder(cls, kappa, T, phases=(0.0, 0.0, 0.0)):
        """pi/2 at 0, pi at T, pi/2 at 2T."""
        T = as_quantity(Time, T, "T")
        if T <= 0:
            raise UnsupportedSequenceError("pulse separation T must be positive")
        kinds = (BEAMSPLITTER, MIRROR, BEAMSPLITTER)
        times = (0.0, float(T), 2.0 * T)
        return cls(tuple(LaserPulse(t, kappa, k, ph) for t, k, ph in zip(times, kinds, phases)))

    @property
    def kappa(self):
        return self.pulses[0].kappa

    @property
    def T(self):
        return Time(self.pulses[1].t - self.pulses[0].t)

    @property
    def phases(self):
        return tuple(float(p.phase) for p in self.pulses)

    def is_canonical(self):
        if len(self.pulses) != 3:
            return False
        p1, p2, p3 = self.pulses
        if (p1.kind, p2.kind, p3.kind) != (BEAMSPLITTER, MIRROR, BEAMSPLITTER):
            return False
        if p1.t != 0:
            return False
        T = p2.t - p1.t
        return math.isclose(p3.t - p2.t, T, rel_tol=1e-12, abs_tol=0.0)


@dataclass(frozen=True)
class Segment:
    t_start: float
    t_end: float
    x_start: float
    v_start: float
    state: str


@dataclass(frozen=True)
class ArmTrajectory:
    """World line of one arm.

    ``kicks`` holds ``(t, dv)`` pairs that act on the trajectory.  ``couplings``
    holds every laser interaction as ``(t, sign, optical_phase)``, including the
    readout pulse at the end which changes momentum but is not propagated.
    ``states`` lists ``(t_start, t_end, label)`` internal-state intervals.
    """

    label: str
    x0: float
    v0: float
    accel: float
    t_end: float
    kicks: tuple = ()
    couplings: tuple = ()
    states: tuple = ()
    kappa: float = 0.0
    recoil: float = 0.0
    breaks: tuple = field(default=())

    @property
    def t_start(self):
        return 0.0

    def _check_span(self, t):
        t = np.asarray(t, dtype=float)
        if np.any(t < 0) or np.any(t > self.t_end):
            raise RangeError(f"t outside trajectory span [0, {self.t_end}]")
        return t

    def free_fall(self, t):
        t = np.asarray(t, dtype=float)
        return self.x0 + self.v0 * t + 0.5 * self.accel * t * t

    def relative_position(self, t):
        """Position measured from the launch height ``x0``."""
        t = self._check_span(t)
        x = self.v0 * t + 0.5 * self.accel * t * t + self.displacement(t)
        return x if x.ndim else float(x)

    def displacement(self, t):
        """Sum of kick ramps: position relative to the unkicked free fall."""
        t = np.asarray(t, dtype=float)
        out = np.zeros_like(t)
        for tk, dv in self.kicks:
            out = out + dv * np.maximum(t - tk, 0.0)
        return out

    def kick_velocity(self, t):
        t = np.asarray(t, dtype=float)
        out = np.zeros_like(t)
        for tk, dv in self.kicks:
            out = out + np.where(t >= tk, dv, 0.0)
        return out

    def position(self, t):
        t = self._check_span(t)
        x = self.free_fall(t) + self.displacement(t)
        return x if x.ndim else float(x)

    def velocity(self, t):
        """Right-continuous velocity (post-kick at pulse times)."""
        t = self._check_span(t)
        v = self.v0 + self.accel * t + self.kick_velocity(t)
        return v if v.ndim else float(v)

    def segment_velocity(self, t, index):
        """Velocity on segment ``index`` (constant kick part for the whole piece)."""
        t_s = self.breaks[index]
        kick = sum(dv for tk, dv in self.kicks if tk <= t_s)
        return self.v0 + self.accel * np.asarray(t, dtype=float) + kick

    def segment_kick_velocity(self, index):
        t_s = self.breaks[index]
        return sum(dv for tk, dv in self.kicks if tk <= t_s)

    def state_at(self, t):
        for t0, t1, label in self.states:
            if t0 <= t < t1:
                return label
        return self.states[-1][2]

    @property
    def segments(self):
        out = []
        for i, (t0, t1) in enumerate(zip(self.breaks, self.breaks[1:])):
            out.append(Segment(t0, t1, float(self.position(t0)),
                               float(self.segment_velocity(t0, i)), self.state_at(t0)))
        return out

    @property
    def net_kick(self):
        return sum(sign for _, sign, _ in self.couplings) * self.recoil


def recoil_velocity(species, kappa, const=CODATA2018):
    """``hbar kappa / m_i``."""
    kappa = as_quantity(Wavenumber, kappa, "kappa")
    return Velocity(const.hbar * kappa / species.mass)


def build_mz_arms(species, env, seq, x0=0.0, v0=0.0, internal_swap=True, const=CODATA2018):
    """World lines of the two arms of a pi/2 - pi - pi/2 interferometer.

    Arm A takes the first kick (and the excited state) at t=0 and is kicked
    back at the mirror pulse; arm B is kicked up at the mirror pulse and kicked
    back by the final beamsplitter into the detected port.  With
    ``internal_swap=False`` the mirror pulse leaves the state labels alone.
    """
    if not seq.is_canonical():
        raise UnsupportedSequenceError("only the canonical pi/2 - pi - pi/2 sequence is supported")
    if not env.is_uniform:
        raise UnsupportedSequenceError("interferometer arms need a uniform gravity environment")
    x0 = float(as_quantity(Length, x0, "x0"))
    v0 = float(as_quantity(Velocity, v0, "v0"))
    t1, t2, t3 = (float(p.t) for p in seq.pulses)
    ph1, ph2, ph3 = seq.phases
    vr = float(recoil_velocity(species, seq.kappa, const))
    accel = -float(species.eta) * float(env.g)
    breaks = (t1, t2, t3)
    if internal_swap:
        states_a = ((t1, t2, EXCITED), (t2, t3, GROUND))
        states_b = ((t1, t2, GROUND), (t2, t3, EXCITED))
    else:
        states_a = ((t1, t3, EXCITED),)
        states_b = ((t1, t3, GROUND),)
    common = dict(x0=x0, v0=v0, accel=accel, t_end=t3, kappa=float(seq.kappa),
                  recoil=vr, breaks=breaks)
    arm_a = ArmTrajectory(
        "A", kicks=((t1, vr), (t2, -vr)),
        couplings=((t1, +1, ph1), (t2, -1, ph2)),
        states=states_a, **common)
    arm_b = ArmTrajectory(
        "B", kicks=((t2, vr),),
        couplings=((t2, +1, ph2), (t3, -1, ph3)),
        states=states_b, **common)
    return arm_a, arm_b


def arm_position(arm, t):
    t = as_quantity(Time, t, "t")
    return Length(arm.position(float(t)))


def sample_arms(arm_a, arm_b, dt):
    """Rows ``(t, x_A, x_B, state_A, state_B)`` every ``dt`` including both ends."""
    dt = float(as_quantity(Time, dt, "dt"))
    if dt <= 0:
        raise RangeError("sampling step must be positive")
    n = int(math.floor(arm_a.t_end / dt + 1e-9))
    t = np.arange(n + 1) * dt
    if t[-1] < arm_a.t_end:
        t = np.append(t, arm_a.t_end)
    t = np.minimum(t, arm_a.t_end)
    xa = arm_a.position(t)
    xb = arm_b.position(t)
    return [(float(ti), float(a), float(b), arm_a.state_at(ti), arm_b.state_at(ti))
            for ti, a, b in zip(t, xa, xb)]
