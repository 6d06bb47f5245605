"""Run configuration parsing and CSV / JSON emission.

A run configuration is one JSON document::

    {
      "system": {"num": [1], "den": [375, 162.5, 22.5, 1]},
      "T0": [2, 4, 6, 8, 10, 12],
      "hold": "zoh",
      "Td": 0,
      "inputs": "step",
      "tolerance": 1e-8
    }

``system`` may instead be ``{"path": "sys.json"}``. Exactly one of
``schedule`` and ``T0`` must be given. ``schedule`` is ``{"instants": [...]}``,
``{"periods": [...], "t0": 0}``, ``{"path": ...}``, ``{"T0": 2, "K": 20}`` for a
constant schedule, or ``{"random": {"K": 50, "seed": 1, "T_range": [0.1, 1.5]}}``.
``inputs`` is a list, ``{"path": "u.csv"}``, ``"impulse"``, ``"step"``,
``"zero"`` or ``{"random": seed}``. Relative paths are resolved against the
directory of the configuration file.
"""

from __future__ import annotations

import csv
import io as _io
import json
import math
import os
from dataclasses import dataclass, field, replace
from typing import Optional

import numpy as np

from ._thresholds import DEFAULT_THRESHOLDS, Thresholds
from .aperiodic import HOLDS, SamplingSchedule
from .exceptions import ConfigError, InvalidScheduleError, InvalidSystemError
from .lti_core import TransferFunction, spectrum

__all__ = [
    "RunConfig",
    "load_config",
    "parse_config",
    "fmt",
    "to_jsonable",
    "dumps_json",
    "write_csv",
]

FORMATS = ("csv", "json")
_KEYS = {"system", "schedule", "T0", "hold", "Td", "inputs", "format", "tolerance",
         "thresholds", "seed", "K"}


@dataclass(frozen=True)
class RunConfig:
    system: TransferFunction
    schedule: Optional[SamplingSchedule] = None
    T0: Optional[tuple] = None
    hold: str = "zoh"
    Td: float = 0.0
    inputs: object = "impulse"
    format: str = "csv"
    tolerance: float = 1e-8
    thresholds: Thresholds = DEFAULT_THRESHOLDS
    seed: Optional[int] = None
    K: Optional[int] = None
    schedule_doc: dict = field(default=None, compare=False)

    @property
    def periodic(self) -> bool:
        return self.T0 is not None

    def with_overrides(self, **kw) -> "RunConfig":
        return replace(self, **{k: v for k, v in kw.items() if v is not None})

    def schedule_for(self, T0=None) -> SamplingSchedule:
        """The explicit schedule, or a constant one built from ``T0`` and the input length."""
        if self.schedule_doc and "random" in self.schedule_doc:
            return _random_schedule(self)
        if self.schedule is not None:
            return self.schedule
        T0 = self.T0[0] if T0 is None else T0
        K = self.K if self.K is not None else _input_length(self.inputs)
        if K is None:
            raise ConfigError("periodic runs need 'K' or explicit inputs to size the schedule")
        return SamplingSchedule.constant(T0, K - 1)

    def input_vector(self, length: int) -> np.ndarray:
        source = self.inputs
        if isinstance(source, str):
            if source == "impulse":
                u = np.zeros(length)
                u[0] = 1.0
                return u
            if source == "step":
                return np.ones(length)
            if source == "zero":
                return np.zeros(length)
            raise ConfigError(f"unknown input generator {source!r}")
        if isinstance(source, dict) and "random" in source:
            seed = self.seed if self.seed is not None else int(source["random"])
            return np.random.default_rng(seed).normal(size=length)
        u = np.asarray(source, dtype=float)
        if u.size != length:
            raise ConfigError(f"{u.size} inputs given for {length} sampling instants")
        return u


def _input_length(source):
    if isinstance(source, (str, dict)):
        return None
    return len(source)


def _random_schedule(cfg):
    from .validation import random_admissible_schedule

    doc = cfg.schedule_doc["random"]
    seed = cfg.seed if cfg.seed is not None else doc.get("seed", 0)
    sched, _ = random_admissible_schedule(
        spectrum(cfg.system), int(doc["K"]), seed,
        tuple(doc.get("T_range", (0.1, 1.5))), float(doc.get("t0", 0.0)),
        thresholds=cfg.thresholds)
    return sched


def _resolve(path, base):
    full = path if os.path.isabs(path) else os.path.join(base, path)
    if not os.path.isfile(full):
        raise ConfigError(f"referenced file does not exist: {path}")
    return full


def _read_json(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON ({exc})") from exc


def _read_vector(path):
    if path.endswith(".json"):
        return [float(v) for v in _read_json(path)]
    out = []
    with open(path, newline="", encoding="utf-8") as fh:
        for row in csv.reader(fh):
            if not row:
                continue
            try:
                out.append(float(row[-1]))
            except ValueError:
                if out:
                    raise ConfigError(f"{path}: non-numeric value {row[-1]!r}")
                # header row
    return out


def parse_config(doc: dict, base: str = ".") -> RunConfig:
    """Build a :class:`RunConfig` from a parsed document."""
    if not isinstance(doc, dict):
        raise ConfigError("configuration must be a JSON object")
    unknown = set(doc) - _KEYS
    if unknown:
        raise ConfigError(f"unknown configuration keys: {sorted(unknown)}")
    if "system" not in doc:
        raise ConfigError("configuration needs a 'system'")
    sys_doc = doc["system"]
    if isinstance(sys_doc, dict) and "path" in sys_doc:
        sys_doc = _read_json(_resolve(sys_doc["path"], base))
    try:
        system = TransferFunction.from_dict(sys_doc)
    except InvalidSystemError as exc:
        raise ConfigError(str(exc)) from exc

    if ("schedule" in doc) == ("T0" in doc):
        raise ConfigError("give exactly one of 'schedule' and 'T0'")
    schedule = T0 = sched_doc = None
    try:
        if "schedule" in doc:
            sched_doc = doc["schedule"]
            if not isinstance(sched_doc, dict):
                raise ConfigError("'schedule' must be an object")
            if "path" in sched_doc:
                sched_doc = _read_json(_resolve(sched_doc["path"], base))
            if "random" in sched_doc:
                # drawn lazily so that --seed can override
                if "K" not in sched_doc["random"]:
                    raise ConfigError("random schedule needs 'K'")
            elif "T0" in sched_doc:
                schedule = SamplingSchedule.constant(float(sched_doc["T0"]), int(sched_doc["K"]))
            else:
                schedule = SamplingSchedule.from_dict(sched_doc)
        else:
            T0 = doc["T0"]
            T0 = tuple(float(v) for v in (T0 if isinstance(T0, list) else [T0]))
            if not T0 or any(not (v > 0 and math.isfinite(v)) for v in T0):
                raise ConfigError("'T0' must be a positive number or a nonempty list of them")
    except (InvalidScheduleError, KeyError, TypeError) as exc:
        raise ConfigError(f"bad schedule: {exc}") from exc

    hold = doc.get("hold", "zoh")
    if hold not in HOLDS:
        raise ConfigError(f"'hold' must be one of {HOLDS}")
    fmt_ = doc.get("format", "csv")
    if fmt_ not in FORMATS:
        raise ConfigError(f"'format' must be one of {FORMATS}")
    inputs = doc.get("inputs", "impulse")
    if isinstance(inputs, dict) and "path" in inputs:
        inputs = _read_vector(_resolve(inputs["path"], base))
    thresholds = Thresholds(**doc["thresholds"]) if "thresholds" in doc else DEFAULT_THRESHOLDS
    seed = doc.get("seed")
    try:
        Td = float(doc.get("Td", 0.0))
        tol = float(doc.get("tolerance", 1e-8))
        K = int(doc["K"]) if "K" in doc else None
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"bad numeric field: {exc}") from exc
    if Td < 0:
        raise ConfigError("'Td' must be nonnegative")
    return RunConfig(system=system, schedule=schedule, T0=T0, hold=hold, Td=Td,
                     inputs=inputs, format=fmt_, tolerance=tol, thresholds=thresholds,
                     seed=int(seed) if seed is not None else None, K=K, schedule_doc=sched_doc)


def load_config(path: str) -> RunConfig:
    if not os.path.isfile(path):
        raise ConfigError(f"configuration file not found: {path}")
    return parse_config(_read_json(path), os.path.dirname(os.path.abspath(path)))


# --------------------------------------------------------------------------
# emission


def fmt(x) -> str:
    """17 significant digits, enough to round-trip any double."""
    if isinstance(x, (int, np.integer)) and not isinstance(x, bool):
        return str(int(x))
    if isinstance(x, str):
        return x
    return format(float(x), ".17g")


def to_jsonable(obj):
    """Replace arrays and non-finite floats so the result is standard JSON."""
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [to_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if math.isnan(x):
            return None
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return x
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    return obj


def dumps_json(obj) -> str:
    # json writes the shortest repr, which parses back to the identical double
    return json.dumps(to_jsonable(obj), indent=2, sort_keys=True) + "\n"


def write_csv(header, rows) -> str:
    buf = _io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([fmt(v) for v in row])
    return buf.getvalue()
