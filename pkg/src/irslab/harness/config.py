"""Scenario documents: one JSON object per scenario, strict keys, explicit units.

Physical quantities may be given as plain numbers (linear / SI) or as strings
with a unit suffix, e.g. ``"50 mW"``, ``"-90 dBm"``, ``"-30 dB"``. Everything
is converted to linear units on load.
"""

from __future__ import annotations

import dataclasses
import json
import re
from dataclasses import dataclass, field
from pathlib import Path

from ..beamforming.solution import INIT_POLICIES, AoOptions
from ..channel import FADING_KINDS


class ConfigError(ValueError):
    """Invalid scenario document; the message names the offending field."""


_QUANTITY = re.compile(r"^\s*([-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?)\s*([A-Za-z]*)\s*$")
_POWER_UNITS = {"": 1.0, "W": 1.0, "mW": 1e-3, "uW": 1e-6}


def dbm_to_watts(x: float) -> float:
    return 10 ** ((x - 30) / 10)


def db_to_linear(x: float) -> float:
    return 10 ** (x / 10)


def parse_power(value, name: str) -> float:
    """Watts from a number or a ``W``/``mW``/``dBm``/``dBW`` string."""
    if isinstance(value, bool):
        raise ConfigError(f"{name}: expected a power, got {value!r}")
    if isinstance(value, (int, float)):
        return float(value)
    if not isinstance(value, str) or not (m := _QUANTITY.match(value)):
        raise ConfigError(f"{name}: cannot parse power {value!r}")
    num, unit = float(m.group(1)), m.group(2)
    if unit == "dBm":
        return dbm_to_watts(num)
    if unit == "dBW":
        return db_to_linear(num)
    if unit in _POWER_UNITS:
        return num * _POWER_UNITS[unit]
    raise ConfigError(f"{name}: unknown power unit {unit!r}")


def parse_gain(value, name: str) -> float:
    """Linear ratio from a number or a ``dB`` string."""
    if isinstance(value, bool):
        raise ConfigError(f"{name}: expected a ratio, got {value!r}")
    if isinstance(value, (int, float)):
        return float(value)
    if not isinstance(value, str) or not (m := _QUANTITY.match(value)):
        raise ConfigError(f"{name}: cannot parse ratio {value!r}")
    num, unit = float(m.group(1)), m.group(2)
    if unit == "dB":
        return db_to_linear(num)
    if unit == "":
        return num
    raise ConfigError(f"{name}: unknown ratio unit {unit!r}")


def _check_keys(doc, allowed, where: str):
    if not isinstance(doc, dict):
        raise ConfigError(f"{where}: expected an object, got {type(doc).__name__}")
    unknown = sorted(set(doc) - set(allowed))
    if unknown:
        raise ConfigError(f"{where}: unknown key(s) {', '.join(unknown)}")


def _positive(x, name: str):
    if not (isinstance(x, (int, float)) and not isinstance(x, bool)) or not x > 0:
        raise ConfigError(f"{name}: must be positive, got {x!r}")
    return x


def _count(x, name: str, minimum: int = 1):
    if isinstance(x, bool) or not isinstance(x, int) or x < minimum:
        raise ConfigError(f"{name}: must be an integer >= {minimum}, got {x!r}")
    return x


# --------------------------------------------------------------------------
@dataclass(frozen=True)
class LinkConfig:
    kind: str = "rayleigh"
    exponent: float = 2.0
    rician_k: float = 0.0
    aoa_deg: float = 0.0
    aod_deg: float = 0.0

    @classmethod
    def from_doc(cls, doc, where: str) -> "LinkConfig":
        _check_keys(doc, {f.name for f in dataclasses.fields(cls)}, where)
        kind = doc.get("kind", "rayleigh")
        if kind not in FADING_KINDS:
            raise ConfigError(f"{where}.kind: expected one of {FADING_KINDS}, got {kind!r}")
        exponent = doc.get("exponent", 2.0)
        if isinstance(exponent, bool) or not isinstance(exponent, (int, float)) or exponent < 0:
            raise ConfigError(f"{where}.exponent: must be non-negative, got {exponent!r}")
        k = parse_gain(doc.get("rician_k", 0.0), f"{where}.rician_k")
        if k < 0:
            raise ConfigError(f"{where}.rician_k: must be non-negative")
        return cls(kind, float(exponent), k, float(doc.get("aoa_deg", 0.0)), float(doc.get("aod_deg", 0.0)))


GEOMETRY_KEYS = ("ap_irs", "vertical", "ap_user", "irs_user", "D", "H", "d", "user_distances")
LINK_NAMES = ("direct", "ap_irs", "irs_user")


@dataclass(frozen=True)
class OfdmConfig:
    num_subcarriers: int = 64
    cp_length: int = 16
    taps_direct: int = 1
    taps_ap_irs: int = 1
    taps_irs_user: int = 1

    @classmethod
    def from_doc(cls, doc) -> "OfdmConfig":
        _check_keys(doc, {f.name for f in dataclasses.fields(cls)}, "ofdm")
        vals = {k: _count(v, f"ofdm.{k}") for k, v in doc.items()}
        cfg = cls(**vals)
        delay = max(cfg.taps_direct, cfg.taps_ap_irs + cfg.taps_irs_user - 1)
        if cfg.cp_length < delay:
            raise ConfigError(f"ofdm.cp_length: {cfg.cp_length} is shorter than the delay spread {delay}")
        if cfg.num_subcarriers < delay:
            raise ConfigError(f"ofdm.num_subcarriers: {cfg.num_subcarriers} is below the delay spread {delay}")
        return cfg


@dataclass(frozen=True)
class Scenario:
    """Validated scenario; every physical quantity is linear (W, m, ratio)."""

    name: str = ""
    trials: int = 100
    seed: int = 0
    P_t: float = 1.0
    sigma2: float = 1.0
    c0: float = 1e-3
    N: int = 0
    tx_antennas: int = 1
    rx_antennas: int = 1
    sweep: tuple = ()
    geometry: dict = field(default_factory=dict)
    links: dict = field(default_factory=dict)
    ofdm: OfdmConfig | None = None
    ao: AoOptions = AoOptions()
    options: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        """Plain JSON-ready document (linear units) that parses back to an equal scenario."""
        doc = {
            "name": self.name, "trials": self.trials, "seed": self.seed,
            "P_t": self.P_t, "sigma2": self.sigma2, "c0": self.c0,
            "N": self.N, "tx_antennas": self.tx_antennas, "rx_antennas": self.rx_antennas,
            "sweep": list(self.sweep), "geometry": dict(self.geometry),
            "links": {k: dataclasses.asdict(v) for k, v in self.links.items()},
            "ao": {"max_sweeps": self.ao.max_sweeps, "tol": self.ao.tol, "phase_grid": self.ao.phase_grid,
                   "init_policy": self.ao.init_policy, "init_seed": self.ao.init_seed,
                   "phase_update": self.ao.phase_update},
            "options": self.options,
        }
        if self.ofdm is not None:
            doc["ofdm"] = dataclasses.asdict(self.ofdm)
        return doc

    def digest(self) -> str:
        import hashlib

        blob = json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()[:16]


TOP_KEYS = {f.name for f in dataclasses.fields(Scenario)}


def scenario_from_dict(doc: dict) -> Scenario:
    _check_keys(doc, TOP_KEYS, "scenario")
    kw = {}
    if "name" in doc:
        if not isinstance(doc["name"], str):
            raise ConfigError("name: must be a string")
        kw["name"] = doc["name"]
    if "trials" in doc:
        kw["trials"] = _count(doc["trials"], "trials")
    if "seed" in doc:
        kw["seed"] = _count(doc["seed"], "seed", minimum=0)
    for key in ("P_t", "sigma2"):
        if key in doc:
            kw[key] = _positive(parse_power(doc[key], key), key)
    if "c0" in doc:
        kw["c0"] = _positive(parse_gain(doc["c0"], "c0"), "c0")
    if "N" in doc:
        kw["N"] = _count(doc["N"], "N", minimum=0)
    for key in ("tx_antennas", "rx_antennas"):
        if key in doc:
            kw[key] = _count(doc[key], key)
    if "sweep" in doc:
        sw = doc["sweep"]
        if not isinstance(sw, list) or not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in sw):
            raise ConfigError("sweep: must be a list of numbers")
        kw["sweep"] = tuple(sw)
    if "geometry" in doc:
        geo = doc["geometry"]
        _check_keys(geo, GEOMETRY_KEYS, "geometry")
        out = {}
        for k, v in geo.items():
            if k == "user_distances":
                if not isinstance(v, list) or not v:
                    raise ConfigError("geometry.user_distances: must be a non-empty list")
                out[k] = [_positive(x, f"geometry.user_distances[{i}]") for i, x in enumerate(v)]
            elif k == "d":
                if isinstance(v, bool) or not isinstance(v, (int, float)) or v < 0:
                    raise ConfigError("geometry.d: must be non-negative")
                out[k] = v
            else:
                out[k] = _positive(v, f"geometry.{k}")
        if {"d", "D"} <= out.keys() and out["d"] > out["D"]:
            raise ConfigError("geometry.d: must not exceed geometry.D")
        kw["geometry"] = out
    if "links" in doc:
        _check_keys(doc["links"], LINK_NAMES, "links")
        kw["links"] = {k: LinkConfig.from_doc(v, f"links.{k}") for k, v in doc["links"].items()}
    if doc.get("ofdm") is not None:
        kw["ofdm"] = OfdmConfig.from_doc(doc["ofdm"])
    if "ao" in doc:
        ao = doc["ao"]
        _check_keys(ao, ("max_sweeps", "tol", "phase_grid", "init_policy", "init_seed", "phase_update"), "ao")
        if "init_policy" in ao and ao["init_policy"] not in INIT_POLICIES:
            raise ConfigError(f"ao.init_policy: expected one of {INIT_POLICIES}")
        try:
            kw["ao"] = AoOptions(**ao)
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"ao: {exc}") from exc
    if "options" in doc:
        if not isinstance(doc["options"], dict):
            raise ConfigError("options: must be an object")
        kw["options"] = doc["options"]
    return Scenario(**kw)


def parse_scenario(source) -> Scenario:
    """Parse a scenario from a path, a JSON string, or an already-decoded dict."""
    if isinstance(source, dict):
        return scenario_from_dict(source)
    if hasattr(source, "read_text") or (isinstance(source, str) and not source.lstrip().startswith("{")):
        path = source if hasattr(source, "read_text") else Path(source)
        try:
            text = path.read_text(encoding="utf-8")
        except OSError as exc:
            raise ConfigError(f"cannot read {path}: {exc}") from exc
    else:
        text = source
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"JSON parse error at line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    return scenario_from_dict(doc)
