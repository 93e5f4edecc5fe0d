"""Scenario configuration: TOML in, validated dataclasses out, and back to a dict.

Numbers are SI.  Every section is optional except where a command needs it;
``sequence.T`` has no default.  ``ScenarioConfig.to_dict()`` is the scenario
echo written into every result and parses back to an equal config.
"""

import hashlib
import json
import math
from dataclasses import asdict, dataclass, field, fields, replace

try:
    import tomllib
except ModuleNotFoundError:  # Python 3.10
    import tomli as tomllib

from .errors import ConfigError
from .gravity import GravityEnvironment
from .phase import DEFAULT_N_STEPS
from .scenario import MZScenario
from .species import AtomSpecies, get_species

__all__ = ["ScenarioConfig", "load_config", "parse_config", "scenario_hash"]


def _num(section, key, value, positive=False, nonnegative=False):
    name = f"{section}.{key}"
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{name} must be a number, got {value!r}", field=name)
    value = float(value)
    if not math.isfinite(value):
        raise ConfigError(f"{name} must be finite", field=name)
    if positive and value <= 0:
        raise ConfigError(f"{name} must be positive", field=name)
    if nonnegative and value < 0:
        raise ConfigError(f"{name} must be non-negative", field=name)
    return value


def _int(section, key, value, minimum=None):
    name = f"{section}.{key}"
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(f"{name} must be an integer, got {value!r}", field=name)
    if minimum is not None and value < minimum:
        raise ConfigError(f"{name} must be >= {minimum}", field=name)
    return value


def _bool(section, key, value):
    if not isinstance(value, bool):
        raise ConfigError(f"{section}.{key} must be true or false", field=f"{section}.{key}")
    return value


def _nums(section, key, value):
    if not isinstance(value, (list, tuple)):
        raise ConfigError(f"{section}.{key} must be a list of numbers", field=f"{section}.{key}")
    return [_num(section, f"{key}[{i}]", v) for i, v in enumerate(value)]


def _unknown(section, raw, allowed):
    extra = sorted(set(raw) - set(allowed))
    if extra:
        raise ConfigError(f"unknown key {section}.{extra[0]}", field=f"{section}.{extra[0]}")


@dataclass(frozen=True)
class SpeciesConfig:
    name: str = "cesium-133"
    mass: float = 0.0
    eta: float = 1.0
    hyperfine: float = 0.0
    optical_wavelength: float = 0.0

    @classmethod
    def parse(cls, raw):
        _unknown("species", raw, [f.name for f in fields(cls)])
        name = raw.get("name", cls.name)
        if not isinstance(name, str):
            raise ConfigError("species.name must be a string", field="species.name")
        try:
            base = get_species(name)
        except ConfigError:
            if "mass" not in raw:
                raise
            base = AtomSpecies(name, _num("species", "mass", raw["mass"], positive=True))
        return cls(
            name=name,
            mass=_num("species", "mass", raw.get("mass", float(base.mass)), positive=True),
            eta=_num("species", "eta", raw.get("eta", 1.0), nonnegative=True),
            hyperfine=_num("species", "hyperfine", raw.get("hyperfine", float(base.hyperfine)),
                           nonnegative=True),
            optical_wavelength=_num("species", "optical_wavelength",
                                    raw.get("optical_wavelength", float(base.optical_wavelength)),
                                    nonnegative=True),
        )

    def build(self):
        return AtomSpecies(self.name, self.mass, self.eta, self.hyperfine, self.optical_wavelength)


@dataclass(frozen=True)
class EnvironmentConfig:
    model: str = "uniform"
    g: float = 9.8
    GM: float = 3.986004418e14
    r0: float = 0.0
    offset: float = 0.0

    @classmethod
    def parse(cls, raw):
        _unknown("environment", raw, [f.name for f in fields(cls)])
        model = raw.get("model", cls.model)
        if model not in ("uniform", "point-mass"):
            raise ConfigError("environment.model must be 'uniform' or 'point-mass'",
                              field="environment.model")
        return cls(
            model=model,
            g=_num("environment", "g", raw.get("g", cls.g), nonnegative=True),
            GM=_num("environment", "GM", raw.get("GM", cls.GM), positive=True),
            r0=_num("environment", "r0", raw.get("r0", cls.r0), nonnegative=True),
            offset=_num("environment", "offset", raw.get("offset", cls.offset)),
        )

    def build(self):
        return GravityEnvironment(self.model, self.g, self.GM, self.r0, self.offset)


@dataclass(frozen=True)
class SequenceConfig:
    T: float
    kappa: float
    optical_wavelength: float = 0.0
    order: int = 2
    phases: tuple = (0.0, 0.0, 0.0)
    internal_swap: bool = True

    @classmethod
    def parse(cls, raw, species):
        _unknown("sequence", raw, [f.name for f in fields(cls)])
        if "T" not in raw:
            raise ConfigError("missing required field sequence.T", field="sequence.T")
        T = _num("sequence", "T", raw["T"], positive=True)
        order = _int("sequence", "order", raw.get("order", 2), minimum=1)
        lam = _num("sequence", "optical_wavelength", raw.get("optical_wavelength", 0.0), nonnegative=True)
        if "kappa" in raw:
            kappa = _num("sequence", "kappa", raw["kappa"], nonnegative=True)
        else:
            lam = lam or species.optical_wavelength
            if lam <= 0:
                raise ConfigError("give sequence.kappa or an optical wavelength", field="sequence.kappa")
            kappa = order * 2.0 * math.pi / lam
        phases = tuple(_nums("sequence", "phases", raw.get("phases", [0.0, 0.0, 0.0])))
        if len(phases) != 3:
            raise ConfigError("sequence.phases needs three entries", field="sequence.phases")
        swap = _bool("sequence", "internal_swap", raw.get("internal_swap", True))
        return cls(T, kappa, lam, order, phases, swap)


@dataclass(frozen=True)
class RunConfig:
    n_steps: int = DEFAULT_N_STEPS
    seed: int = 0
    tolerance: float = 1e-9
    trajectory_dt: float = 0.0

    @classmethod
    def parse(cls, raw):
        _unknown("run", raw, [f.name for f in fields(cls)])
        return cls(
            n_steps=_int("run", "n_steps", raw.get("n_steps", cls.n_steps), minimum=2),
            seed=_int("run", "seed", raw.get("seed", cls.seed), minimum=0),
            tolerance=_num("run", "tolerance", raw.get("tolerance", cls.tolerance), positive=True),
            trajectory_dt=_num("run", "trajectory_dt", raw.get("trajectory_dt", 0.0), nonnegative=True),
        )


# free-form command sections: allowed keys and their kinds
_COMMAND_SECTIONS = {
    "fringes": {"v1": "num", "v2": "num", "window": "num", "n": "int"},
    "scan": {"variable": "str", "start": "num", "stop": "num", "num": "int", "grid": "list"},
    "clocks": {"positions": "list", "reference": "num", "duration": "num", "frequency": "num"},
    "invert": {"phase": "num", "sigma": "num", "trials": "int", "n_points": "int",
               "free_contrast": "bool", "g_prior": "num"},
    "sweep": {"eta": "list", "start": "num", "stop": "num", "num": "int"},
    "sensitivity": {"optical_frequency": "num", "optical_wavelength": "num"},
}


def _parse_command_section(name, raw):
    allowed = _COMMAND_SECTIONS[name]
    if not isinstance(raw, dict):
        raise ConfigError(f"[{name}] must be a table", field=name)
    _unknown(name, raw, allowed)
    out = {}
    for key, value in raw.items():
        kind = allowed[key]
        if kind == "num":
            out[key] = _num(name, key, value)
        elif kind == "int":
            out[key] = _int(name, key, value, minimum=0)
        elif kind == "bool":
            out[key] = _bool(name, key, value)
        elif kind == "list":
            out[key] = _nums(name, key, value)
        else:
            if not isinstance(value, str):
                raise ConfigError(f"{name}.{key} must be a string", field=f"{name}.{key}")
            out[key] = value
    return out


@dataclass(frozen=True)
class ScenarioConfig:
    species: SpeciesConfig = field(default_factory=SpeciesConfig)
    environment: EnvironmentConfig = field(default_factory=EnvironmentConfig)
    sequence: SequenceConfig = None
    x0: float = 0.0
    v0: float = 0.0
    run: RunConfig = field(default_factory=RunConfig)
    sections: dict = field(default_factory=dict)

    @classmethod
    def from_dict(cls, raw):
        if not isinstance(raw, dict):
            raise ConfigError("configuration must be a table of sections")
        known = {"species", "environment", "sequence", "initial", "run", *_COMMAND_SECTIONS}
        _unknown("config", raw, known)
        for key in known:
            if key in raw and not isinstance(raw[key], dict):
                raise ConfigError(f"[{key}] must be a table", field=key)
        species = SpeciesConfig.parse(raw.get("species", {}))
        env = EnvironmentConfig.parse(raw.get("environment", {}))
        seq = SequenceConfig.parse(raw["sequence"], species) if "sequence" in raw else None
        initial = raw.get("initial", {})
        _unknown("initial", initial, ["x0", "v0"])
        sections = {k: _parse_command_section(k, raw[k]) for k in _COMMAND_SECTIONS if k in raw}
        return cls(
            species=species, environment=env, sequence=seq,
            x0=_num("initial", "x0", initial.get("x0", 0.0)),
            v0=_num("initial", "v0", initial.get("v0", 0.0)),
            run=RunConfig.parse(raw.get("run", {})),
            sections=sections,
        )

    def to_dict(self):
        out = {
            "species": asdict(self.species),
            "environment": asdict(self.environment),
            "initial": {"x0": self.x0, "v0": self.v0},
            "run": asdict(self.run),
        }
        if self.sequence is not None:
            seq = asdict(self.sequence)
            seq["phases"] = list(seq["phases"])
            out["sequence"] = seq
        for key, value in self.sections.items():
            out[key] = dict(value)
        return out

    def section(self, name):
        return self.sections.get(name, {})

    def with_seed(self, seed):
        return replace(self, run=replace(self.run, seed=int(seed)))

    def mz_scenario(self):
        if self.sequence is None:
            raise ConfigError("missing required field sequence.T", field="sequence.T")
        env = self.environment.build()
        if not env.is_uniform:
            raise ConfigError("interferometer commands need environment.model = 'uniform'",
                              field="environment.model")
        s = self.sequence
        return MZScenario(
            species=self.species.build(), env=env, kappa=s.kappa, T=s.T,
            x0=self.x0, v0=self.v0, phases=tuple(s.phases), n_steps=self.run.n_steps,
            internal_swap=s.internal_swap,
        )


def parse_config(text):
    try:
        raw = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"cannot parse configuration: {exc}") from None
    return ScenarioConfig.from_dict(raw)


def load_config(path):
    try:
        with open(path, "rb") as fh:
            data = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror}", field="--config") from None
    return parse_config(data.decode("utf-8"))


def scenario_hash(config):
    blob = json.dumps(config.to_dict(), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode("utf-8")).hexdigest()
