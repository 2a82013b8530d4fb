"""Experiment configuration: YAML loading, validation, defaults and digest.

Keys carry their units (``_m``, ``_db``, ``_dbm``, ``_bps_hz``). Every key is
checked against a schema; unknown keys are rejected, missing optional keys
get recorded defaults, and the filled tree is hashed into a digest.
"""

from __future__ import annotations

import copy
import hashlib
import json
import math
from dataclasses import dataclass
from pathlib import Path

import yaml

from .errors import ConfigParseError, ConfigValidationError, UnknownKeyError

KINDS = ("secrecy-curve", "covert-prob", "covert-amplitudes", "est-rho")

SWEEP_VARIABLE = {
    "secrecy-curve": "n_elements",
    "covert-prob": "n_elements",
    "covert-amplitudes": "epsilon",
    "est-rho": "rho",
}

# nodes each kind needs besides Alice, Bob and the IRS
REQUIRED_NODES = {
    "secrecy-curve": ("eve",),
    "covert-prob": ("willie",),
    "covert-amplitudes": ("willie",),
    "est-rho": ("eve",),
}

_REQUIRED = object()

SCENARIO_DEFAULTS = {
    "alice_m": _REQUIRED,
    "bob_m": _REQUIRED,
    "irs_m": _REQUIRED,
    "eve_m": None,
    "willie_m": None,
    "n_elements": 0,
    "k_factor_db": _REQUIRED,
    "path_loss": {"exponent_direct": 3.5, "exponent_irs": 2.2, "ref_gain_db": -30.0},
    "tx_power_dbm": 30.0,
    "noise_power_dbm": -90.0,
    "wavelength_m": 0.1,
}

KIND_DEFAULTS = {
    "secrecy-curve": {
        "optimizer": {"restarts": 8, "grid_points": 256, "grid_sweeps": 1, "tol": 1e-6,
                      "max_sweeps": 200, "phase_bits": None, "beta": None},
    },
    "covert-prob": {
        "irs_positions_m": None,
    },
    "covert-amplitudes": {
        "target_rate_bps_hz": 0.2,
        "blocklength": 100,
        "residual_rho": 0.95,
        "method": "auto",
        "grids": {"beta_levels": [round(0.1 * i, 12) for i in range(11)], "theta_points": 32,
                  "power_min_dbm": -30.0, "power_max_dbm": 10.0, "power_points": 16},
    },
    "est-rho": {
        "rate_b_bps_hz": 4.0,
        "rate_s_bps_hz": 1.0,
        "eve_csi_public": False,
    },
}


@dataclass(frozen=True)
class ExperimentConfig:
    """A validated configuration tree with every default filled in."""

    tree: dict

    @property
    def kind(self) -> str:
        return self.tree["kind"]

    @property
    def scenario(self) -> dict:
        return self.tree["scenario"]

    @property
    def sweep_values(self) -> list:
        return list(self.tree["sweep"]["values"])

    @property
    def trials(self) -> int:
        return int(self.tree["montecarlo"]["trials"])

    @property
    def root_seed(self) -> int:
        return int(self.tree["montecarlo"]["root_seed"])

    @property
    def params(self) -> dict:
        return self.tree["experiment"]

    def digest(self) -> str:
        return config_digest(self.tree)

    def with_overrides(self, *, seed=None, trials=None) -> "ExperimentConfig":
        tree = copy.deepcopy(self.tree)
        if seed is not None:
            tree["montecarlo"]["root_seed"] = seed
        if trials is not None:
            tree["montecarlo"]["trials"] = trials
        return validate(tree)


def config_digest(tree: dict) -> str:
    """SHA-256 of the canonical JSON form (sorted keys, no whitespace)."""
    text = json.dumps(tree, sort_keys=True, separators=(",", ":"), allow_nan=False)
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


def _fill(section: str, given, defaults: dict) -> dict:
    if given is None:
        given = {}
    if not isinstance(given, dict):
        raise ConfigValidationError(section, "expected a mapping")
    for key in given:
        if key not in defaults:
            raise UnknownKeyError(f"{section}.{key}" if section else key)
    out = {}
    for key, default in defaults.items():
        name = f"{section}.{key}" if section else key
        if key in given:
            value = given[key]
            if isinstance(default, dict):
                value = _fill(name, value, default)
            out[key] = value
        elif default is _REQUIRED:
            raise ConfigValidationError(name, "required field is missing")
        else:
            out[key] = copy.deepcopy(default)
    return out


def _number(name, value, *, integer=False, low=None, high=None, low_open=False):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigValidationError(name, f"expected a number, got {value!r}")
    if integer and int(value) != value:
        raise ConfigValidationError(name, f"expected an integer, got {value!r}")
    if not math.isfinite(value):
        raise ConfigValidationError(name, "must be finite")
    if low is not None and (value < low or (low_open and value == low)):
        raise ConfigValidationError(name, f"must be {'>' if low_open else '>='} {low}")
    if high is not None and value > high:
        raise ConfigValidationError(name, f"must be <= {high}")
    return int(value) if integer else float(value)


def _position(name, value):
    if value is None:
        return None
    if not isinstance(value, (list, tuple)) or len(value) != 2:
        raise ConfigValidationError(name, "expected [x, y] in meters")
    return [_number(name, value[0]), _number(name, value[1])]


def validate(tree) -> ExperimentConfig:
    """Check a raw tree, fill defaults and return the config."""
    if not isinstance(tree, dict):
        raise ConfigValidationError("<root>", "expected a mapping at the top level")
    for key in tree:
        if key not in ("kind", "scenario", "sweep", "montecarlo", "experiment"):
            raise UnknownKeyError(key)
    kind = tree.get("kind")
    if kind not in KINDS:
        raise ConfigValidationError("kind", f"expected one of {', '.join(KINDS)}, got {kind!r}")

    sc = _fill("scenario", tree.get("scenario"), SCENARIO_DEFAULTS)
    for node in ("alice", "bob", "irs", "eve", "willie"):
        sc[node + "_m"] = _position(f"scenario.{node}_m", sc[node + "_m"])
    for node in REQUIRED_NODES[kind]:
        if sc[node + "_m"] is None:
            raise ConfigValidationError(f"scenario.{node}_m", f"kind '{kind}' needs a {node} position")
    sc["n_elements"] = _number("scenario.n_elements", sc["n_elements"], integer=True, low=0)
    sc["k_factor_db"] = _number("scenario.k_factor_db", sc["k_factor_db"])
    pl = sc["path_loss"]
    pl["exponent_direct"] = _number("scenario.path_loss.exponent_direct", pl["exponent_direct"], low=0, low_open=True)
    pl["exponent_irs"] = _number("scenario.path_loss.exponent_irs", pl["exponent_irs"], low=0, low_open=True)
    pl["ref_gain_db"] = _number("scenario.path_loss.ref_gain_db", pl["ref_gain_db"])
    sc["tx_power_dbm"] = _number("scenario.tx_power_dbm", sc["tx_power_dbm"])
    sc["noise_power_dbm"] = _number("scenario.noise_power_dbm", sc["noise_power_dbm"])
    sc["wavelength_m"] = _number("scenario.wavelength_m", sc["wavelength_m"], low=0, low_open=True)

    sweep = _fill("sweep", tree.get("sweep"), {"variable": _REQUIRED, "values": _REQUIRED})
    want = SWEEP_VARIABLE[kind]
    if sweep["variable"] != want:
        raise ConfigValidationError("sweep.variable", f"kind '{kind}' sweeps '{want}', got {sweep['variable']!r}")
    vals = sweep["values"]
    if not isinstance(vals, list) or not vals:
        raise ConfigValidationError("sweep.values", "expected a non-empty list")
    if want == "n_elements":
        vals = [_number("sweep.values", v, integer=True, low=0) for v in vals]
    elif want == "epsilon":
        vals = [_number("sweep.values", v, low=0, low_open=True, high=1) for v in vals]
        if any(v >= 1 for v in vals):
            raise ConfigValidationError("sweep.values", "epsilon must lie in (0, 1)")
    else:
        vals = [_number("sweep.values", v, low=0, high=1) for v in vals]
    sweep["values"] = vals

    mc = _fill("montecarlo", tree.get("montecarlo"), {"trials": _REQUIRED, "root_seed": 0})
    mc["trials"] = _number("montecarlo.trials", mc["trials"], integer=True, low=1)
    mc["root_seed"] = _number("montecarlo.root_seed", mc["root_seed"], integer=True, low=0)

    ex = _fill("experiment", tree.get("experiment"), KIND_DEFAULTS[kind])
    _check_experiment(kind, ex, sc)
    return ExperimentConfig({"kind": kind, "scenario": sc, "sweep": sweep, "montecarlo": mc, "experiment": ex})


def _check_experiment(kind, ex, sc):
    if kind == "secrecy-curve":
        o = ex["optimizer"]
        o["restarts"] = _number("experiment.optimizer.restarts", o["restarts"], integer=True, low=0)
        o["grid_points"] = _number("experiment.optimizer.grid_points", o["grid_points"], integer=True, low=1)
        o["grid_sweeps"] = _number("experiment.optimizer.grid_sweeps", o["grid_sweeps"], integer=True, low=0)
        o["tol"] = _number("experiment.optimizer.tol", o["tol"], low=0)
        o["max_sweeps"] = _number("experiment.optimizer.max_sweeps", o["max_sweeps"], integer=True, low=1)
        if o["phase_bits"] is not None:
            o["phase_bits"] = _number("experiment.optimizer.phase_bits", o["phase_bits"], integer=True, low=1)
        if o["beta"] is not None:
            o["beta"] = _number("experiment.optimizer.beta", o["beta"], low=0, high=1)
    elif kind == "covert-prob":
        pos = ex["irs_positions_m"]
        if pos is None:
            ex["irs_positions_m"] = [list(sc["irs_m"])]
        else:
            if not isinstance(pos, list) or not pos:
                raise ConfigValidationError("experiment.irs_positions_m", "expected a non-empty list of [x, y]")
            ex["irs_positions_m"] = [_position("experiment.irs_positions_m", p) for p in pos]
    elif kind == "covert-amplitudes":
        ex["target_rate_bps_hz"] = _number("experiment.target_rate_bps_hz", ex["target_rate_bps_hz"], low=0)
        ex["blocklength"] = _number("experiment.blocklength", ex["blocklength"], integer=True, low=1)
        ex["residual_rho"] = _number("experiment.residual_rho", ex["residual_rho"], low=0, high=1)
        if ex["method"] not in ("auto", "bruteforce", "coordinate"):
            raise ConfigValidationError("experiment.method", "expected auto, bruteforce or coordinate")
        g = ex["grids"]
        if not isinstance(g["beta_levels"], list) or not g["beta_levels"]:
            raise ConfigValidationError("experiment.grids.beta_levels", "expected a non-empty list")
        g["beta_levels"] = [_number("experiment.grids.beta_levels", b, low=0, high=1) for b in g["beta_levels"]]
        if any(b2 <= b1 for b1, b2 in zip(g["beta_levels"], g["beta_levels"][1:])):
            raise ConfigValidationError("experiment.grids.beta_levels", "must be strictly increasing")
        g["theta_points"] = _number("experiment.grids.theta_points", g["theta_points"], integer=True, low=1)
        g["power_min_dbm"] = _number("experiment.grids.power_min_dbm", g["power_min_dbm"])
        g["power_max_dbm"] = _number("experiment.grids.power_max_dbm", g["power_max_dbm"])
        g["power_points"] = _number("experiment.grids.power_points", g["power_points"], integer=True, low=1)
        if g["power_points"] > 1 and not g["power_max_dbm"] > g["power_min_dbm"]:
            raise ConfigValidationError("experiment.grids.power_max_dbm", "must exceed power_min_dbm")
    elif kind == "est-rho":
        rb = _number("experiment.rate_b_bps_hz", ex["rate_b_bps_hz"], low=0, low_open=True)
        rs = _number("experiment.rate_s_bps_hz", ex["rate_s_bps_hz"], low=0, low_open=True)
        if not rs < rb:
            raise ConfigValidationError("experiment.rate_s_bps_hz", "must be below rate_b_bps_hz")
        ex["rate_b_bps_hz"], ex["rate_s_bps_hz"] = rb, rs
        if not isinstance(ex["eve_csi_public"], bool):
            raise ConfigValidationError("experiment.eve_csi_public", "expected true or false")


def parse_text(text: str, source: str = "<string>"):
    """YAML text to a raw tree, with line/column on syntax errors (1-based)."""
    try:
        return yaml.safe_load(text)
    except yaml.MarkedYAMLError as exc:
        mark = exc.problem_mark or exc.context_mark
        line = mark.line + 1 if mark is not None else None
        col = mark.column + 1 if mark is not None else None
        raise ConfigParseError(f"{source}: {exc.problem or exc}", line, col) from exc
    except yaml.YAMLError as exc:
        raise ConfigParseError(f"{source}: {exc}") from exc


def load_config(path) -> ExperimentConfig:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigParseError(f"cannot read {path}: {exc.strerror or exc}") from exc
    return validate(parse_text(text, str(path)))
