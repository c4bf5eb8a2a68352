"""Scenario and sweep configuration: schema, defaults, validation, hashing.

The on-disk format is YAML with four sections -- `scenario`, `sweep`,
`output`, `constants` -- and a frozen schema: unknown keys are rejected with
their source line. All physical quantities are linear SI (powers in watts,
lengths in meters); defaults follow the simulation setup of the reference
scenario (23 dBm per UE, -94 dBm noise, 1 km^2 area, 100 m UAVs).
"""

import hashlib
import math
from dataclasses import dataclass, field, fields, replace

import yaml

from .errors import ConfigurationError
from .scenario.environments import ENVIRONMENTS, Environment

__all__ = [
    "SystemConfig",
    "SweepSpec",
    "OutputSpec",
    "ConfigFile",
    "load_config",
    "canonical_yaml",
    "config_hash",
    "AXES",
    "SCHEMES",
]

AXES = ("antennas_fixed_ratio", "ratio_lm", "num_uavs", "height", "num_ues", "pilot_reuse")
SCHEMES = ("fc", "oneshot_empirical", "oneshot_asymptotic", "small_cell")

DBM_23 = 10.0 ** ((23.0 - 30.0) / 10.0)     # 23 dBm in W
DBM_M94 = 10.0 ** ((-94.0 - 30.0) / 10.0)   # -94 dBm in W


@dataclass
class SystemConfig:
    """All scalar parameters of one scenario point."""

    L: int = 4              # AP-UAVs
    M: int = 8              # antennas per AP-UAV
    K: int = 4              # UEs
    N: int = 2              # antennas per UE
    tau_c: int = 200        # channel uses per coherence block
    tau_p: int = None       # pilot length; default N*ceil(K/pilot_reuse)
    sigma2: float = DBM_M94  # noise power (W)
    p_k: float = DBM_23     # per-UE max transmit power (W)
    uav_height: float = 100.0   # m
    ue_height: float = 1.5      # m
    area_side: float = 1000.0   # m
    environment: str = "urban"
    kappa: float = 2.0      # Rician factor, linear (3 dB)
    asd_deg: float = 15.0   # angular standard deviation (deg)
    pilot_reuse: int = 1    # UEs per pilot matrix
    seed: int = 0
    env: Environment = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        if self.tau_p is None:
            self.tau_p = self.N * math.ceil(self.K / max(self.pilot_reuse, 1))
        if self.env is None:
            self.env = ENVIRONMENTS.get(self.environment)

    @property
    def n_tot(self) -> int:
        return self.K * self.N

    @property
    def m_tot(self) -> int:
        return self.L * self.M

    @property
    def prelog(self) -> float:
        return 1.0 - self.tau_p / self.tau_c

    def with_updates(self, **kwargs) -> "SystemConfig":
        """Copy with updated fields; tau_p re-derives unless set explicitly."""
        if ("tau_p" not in kwargs) and any(k in kwargs for k in ("K", "N", "pilot_reuse")):
            kwargs.setdefault("tau_p", None)
        cfg = replace(self, **kwargs)
        if cfg.tau_p is None:
            cfg.tau_p = cfg.N * math.ceil(cfg.K / max(cfg.pilot_reuse, 1))
        return cfg

    def violations(self) -> list:
        """Every broken invariant, one human-readable line each."""
        out = []
        for name in ("L", "M", "K", "N"):
            if getattr(self, name) < 1:
                out.append(f"scenario.{name}: must be >= 1 (got {getattr(self, name)})")
        if self.tau_p > self.tau_c:
            out.append(f"scenario.tau_p: pilot length {self.tau_p} exceeds coherence block tau_c={self.tau_c}")
        if self.tau_p < self.N:
            out.append(f"scenario.tau_p: pilot length {self.tau_p} shorter than N={self.N}, no orthogonal pilot fits")
        if self.pilot_reuse < 1:
            out.append(f"scenario.pilot_reuse: must be >= 1 (got {self.pilot_reuse})")
        else:
            books = self.tau_p // self.N
            needed = math.ceil(self.K / self.pilot_reuse)
            if books < needed:
                out.append(
                    f"scenario.tau_p: pilot capacity violated: floor(tau_p/N)={books} pilot matrices "
                    f"< ceil(K/pilot_reuse)={needed} required"
                )
        if not self.sigma2 > 0:
            out.append(f"scenario.sigma2: must be > 0 (got {self.sigma2})")
        if not self.p_k > 0:
            out.append(f"scenario.p_k: must be > 0 (got {self.p_k})")
        if self.kappa < 0:
            out.append(f"scenario.kappa: must be >= 0 (got {self.kappa})")
        if not self.asd_deg > 0:
            out.append(f"scenario.asd_deg: must be > 0 (got {self.asd_deg})")
        if not self.area_side > 0:
            out.append(f"scenario.area_side: must be > 0 (got {self.area_side})")
        if self.uav_height <= self.ue_height:
            out.append(
                f"scenario.uav_height: UAVs ({self.uav_height} m) must fly above UEs ({self.ue_height} m)"
            )
        if self.environment not in ENVIRONMENTS:
            out.append(
                f"scenario.environment: unknown environment {self.environment!r}; "
                f"choose one of {sorted(ENVIRONMENTS)}"
            )
        return out


@dataclass
class SweepSpec:
    """One experiment: an axis, its points, trial count and scheme set."""

    axis: str = "height"
    points: list = field(default_factory=lambda: [40.0, 60.0, 80.0, 100.0, 120.0, 140.0, 160.0])
    trials: int = 2000
    schemes: list = field(default_factory=lambda: ["fc", "oneshot_empirical", "oneshot_asymptotic", "small_cell"])
    environments: list = field(default_factory=lambda: ["suburban", "urban", "dense_urban"])
    m_tot: int = None           # constraint for ratio_lm / num_uavs axes
    antenna_ratio: int = 2      # M = ratio * N for antennas_fixed_ratio
    deployments_per_point: int = 1

    def violations(self) -> list:
        out = []
        if self.axis not in AXES:
            out.append(f"sweep.axis: unknown axis {self.axis!r}; choose one of {list(AXES)}")
        if not self.points and self.axis not in ("ratio_lm", "num_uavs"):
            out.append("sweep.points: must list at least one point "
                       "(only the fixed-M_tot axes auto-enumerate divisors)")
        if self.trials < 1:
            out.append(f"sweep.trials: must be >= 1 (got {self.trials})")
        for s in self.schemes:
            if s not in SCHEMES:
                out.append(f"sweep.schemes: unknown scheme {s!r}; choose from {list(SCHEMES)}")
        for e in self.environments:
            if e not in ENVIRONMENTS:
                out.append(f"sweep.environments: unknown environment {e!r}")
        if self.axis in ("ratio_lm", "num_uavs") and not self.m_tot:
            out.append(f"sweep.m_tot: required for axis {self.axis!r} (fixed total antenna constraint)")
        if self.antenna_ratio < 1:
            out.append(f"sweep.antenna_ratio: must be >= 1 (got {self.antenna_ratio})")
        if self.deployments_per_point < 1:
            out.append(f"sweep.deployments_per_point: must be >= 1 (got {self.deployments_per_point})")
        return out


@dataclass
class OutputSpec:
    directory: str = "out"
    prefix: str = "sweep"


@dataclass
class ConfigFile:
    scenario: SystemConfig
    sweep: SweepSpec
    output: OutputSpec
    constants: dict     # environment name -> Environment (after overrides)

    def violations(self) -> list:
        return self.scenario.violations() + self.sweep.violations()


def _check_keys(section_name, mapping, allowed, lines):
    for key in mapping:
        if key not in allowed:
            loc = f" (line {lines.get((section_name, key), '?')})" if lines else ""
            raise ConfigurationError(
                f"unknown key {section_name}.{key}{loc}; allowed keys: {sorted(allowed)}"
            )


def _key_lines(text):
    """Map (section, key) -> 1-based source line, via the YAML node tree."""
    lines = {}
    try:
        root = yaml.compose(text)
    except yaml.YAMLError:
        return lines
    if root is None or not hasattr(root, "value"):
        return lines
    for sec_key, sec_val in getattr(root, "value", []):
        lines[(sec_key.value, None)] = sec_key.start_mark.line + 1
        if hasattr(sec_val, "value") and isinstance(sec_val.value, list):
            for item in sec_val.value:
                if isinstance(item, tuple) and len(item) == 2:
                    k, _ = item
                    if hasattr(k, "value"):
                        lines[(sec_key.value, k.value)] = k.start_mark.line + 1
    return lines


_SCENARIO_KEYS = {f.name for f in fields(SystemConfig)} - {"env"}
_SWEEP_KEYS = {f.name for f in fields(SweepSpec)}
_OUTPUT_KEYS = {f.name for f in fields(OutputSpec)}
_ENV_KEYS = {"a", "b", "excess_los_db", "excess_nlos_db"}


def parse_config(text: str) -> ConfigFile:
    try:
        raw = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        where = f" at line {mark.line + 1}" if mark is not None else ""
        raise ConfigurationError(f"config parse failure{where}: {exc}") from exc
    if raw is None:
        raw = {}
    if not isinstance(raw, dict):
        raise ConfigurationError("config root must be a mapping of sections")
    lines = _key_lines(text)

    known_sections = {"scenario", "sweep", "output", "constants"}
    for sec in raw:
        if sec not in known_sections:
            loc = lines.get((sec, None))
            raise ConfigurationError(
                f"unknown section {sec!r}" + (f" (line {loc})" if loc else "")
                + f"; allowed: {sorted(known_sections)}"
            )

    constants = dict(ENVIRONMENTS)
    const_raw = raw.get("constants") or {}
    for env_name, overrides in const_raw.items():
        if env_name not in constants:
            raise ConfigurationError(f"constants.{env_name}: unknown environment")
        _check_keys(f"constants.{env_name}", overrides, _ENV_KEYS, {})
        constants[env_name] = constants[env_name].replace(**overrides)

    scen_raw = dict(raw.get("scenario") or {})
    _check_keys("scenario", scen_raw, _SCENARIO_KEYS, lines)
    scenario = SystemConfig(**scen_raw)
    scenario.env = constants.get(scenario.environment)

    sweep_raw = dict(raw.get("sweep") or {})
    _check_keys("sweep", sweep_raw, _SWEEP_KEYS, lines)
    sweep = SweepSpec(**sweep_raw)

    out_raw = dict(raw.get("output") or {})
    _check_keys("output", out_raw, _OUTPUT_KEYS, lines)
    output = OutputSpec(**out_raw)

    return ConfigFile(scenario=scenario, sweep=sweep, output=output, constants=constants)


def load_config(path) -> ConfigFile:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_config(fh.read())


def _as_dict(cfg: ConfigFile) -> dict:
    scen = {f.name: getattr(cfg.scenario, f.name) for f in fields(SystemConfig) if f.name != "env"}
    sweep = {f.name: getattr(cfg.sweep, f.name) for f in fields(SweepSpec)}
    out = {f.name: getattr(cfg.output, f.name) for f in fields(OutputSpec)}
    consts = {
        name: {
            "a": env.a, "b": env.b,
            "excess_los_db": env.excess_los_db, "excess_nlos_db": env.excess_nlos_db,
        }
        for name, env in sorted(cfg.constants.items())
    }
    return {"scenario": scen, "sweep": sweep, "output": out, "constants": consts}


def canonical_yaml(cfg: ConfigFile) -> str:
    """Deterministic serialization; parse(canonical_yaml(c)) == c."""
    return yaml.safe_dump(_as_dict(cfg), sort_keys=True, default_flow_style=False)


def config_hash(cfg: ConfigFile) -> str:
    return hashlib.sha256(canonical_yaml(cfg).encode("utf-8")).hexdigest()[:16]
