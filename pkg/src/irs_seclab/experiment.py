"""Dispatch validated configurations to the curve routines; built-in presets."""

from __future__ import annotations

import copy
import logging

import numpy as np

from . import __version__
from .channel import PathLossParams, Position, RicianParams, Scenario
from .config import ExperimentConfig, validate
from .covert import CovertGrids, covert_amplitude_curve, perfect_covertness_curve
from .csi import est_vs_rho_curve
from .results import ResultTable
from .secrecy import OptimizerSettings, avg_secrecy_curve

log = logging.getLogger(__name__)


def dbm_to_watts(dbm: float) -> float:
    return 10.0 ** ((dbm - 30.0) / 10.0)


PRESETS = {
    "fig2": {
        "kind": "secrecy-curve",
        "scenario": {"alice_m": [0, 5], "bob_m": [35, 10], "eve_m": [75, 10], "irs_m": [55, 0],
                     "k_factor_db": 2},
        "sweep": {"variable": "n_elements", "values": [8, 16, 32, 64]},
        "montecarlo": {"trials": 5000, "root_seed": 1},
    },
    "fig3": {
        "kind": "covert-prob",
        "scenario": {"alice_m": [0, 5], "bob_m": [80, 0], "willie_m": [100, 0], "irs_m": [0, 10],
                     "k_factor_db": 5},
        "sweep": {"variable": "n_elements", "values": [0, 4, 8, 16, 24, 32, 48, 64, 96, 128]},
        "montecarlo": {"trials": 5000, "root_seed": 1},
        "experiment": {"irs_positions_m": [[0, 10], [80, 10], [100, 10]]},
    },
    "fig4": {
        "kind": "covert-amplitudes",
        # steeper direct links bring the reflected paths within reach of the
        # warden's direct link, otherwise the amplitudes barely matter
        "scenario": {"alice_m": [0, 5], "bob_m": [35, 10], "willie_m": [75, 10], "irs_m": [55, 0],
                     "n_elements": 4, "k_factor_db": 3,
                     "path_loss": {"exponent_direct": 4.0, "exponent_irs": 2.0}},
        "sweep": {"variable": "epsilon", "values": [0.05, 0.1, 0.2, 0.4]},
        "montecarlo": {"trials": 200, "root_seed": 1},
        "experiment": {"target_rate_bps_hz": 0.2,
                       "grids": {"beta_levels": [0.0, 0.2, 0.4, 0.6, 0.8, 1.0], "theta_points": 8,
                                 "power_min_dbm": -30.0, "power_max_dbm": -2.0, "power_points": 16}},
    },
    "fig5": {
        "kind": "est-rho",
        "scenario": {"alice_m": [0, 0], "bob_m": [40, 0], "eve_m": [60, 0], "irs_m": [40, 10],
                     "n_elements": 32, "k_factor_db": 5, "tx_power_dbm": 8.0},
        "sweep": {"variable": "rho", "values": [round(0.1 * i, 12) for i in range(11)]},
        "montecarlo": {"trials": 10000, "root_seed": 1},
    },
}


def preset_config(name: str) -> ExperimentConfig:
    if name not in PRESETS:
        raise KeyError(f"unknown preset '{name}'")
    return validate(copy.deepcopy(PRESETS[name]))


def _pos(p):
    return None if p is None else Position(float(p[0]), float(p[1]))


def build_scenario(cfg: ExperimentConfig) -> Scenario:
    sc = cfg.scenario
    pl = sc["path_loss"]
    return Scenario(
        alice=_pos(sc["alice_m"]), bob=_pos(sc["bob_m"]), irs=_pos(sc["irs_m"]),
        eve=_pos(sc["eve_m"]), willie=_pos(sc["willie_m"]), n_elements=sc["n_elements"],
        rician=RicianParams(sc["k_factor_db"]),
        path_loss=PathLossParams(pl["exponent_direct"], pl["exponent_irs"], pl["ref_gain_db"]),
        tx_power=dbm_to_watts(sc["tx_power_dbm"]), noise_power=dbm_to_watts(sc["noise_power_dbm"]),
        wavelength=sc["wavelength_m"],
    )


def build_grids(grids: dict) -> CovertGrids:
    if grids["power_points"] == 1:
        dbm = np.array([grids["power_min_dbm"]])
    else:
        dbm = np.linspace(grids["power_min_dbm"], grids["power_max_dbm"], grids["power_points"])
    return CovertGrids(beta_levels=tuple(grids["beta_levels"]), theta_points=grids["theta_points"],
                       power_levels=tuple(dbm_to_watts(d) for d in dbm))


def run_experiment(cfg: ExperimentConfig, threads=None) -> ResultTable:
    """Run one configured experiment and return its table.

    The output depends only on the configuration (seed included), never on
    ``threads``. Domain errors propagate with the sweep point prefixed.
    """
    scenario = build_scenario(cfg)
    ex = cfg.params
    values = cfg.sweep_values
    seed, trials = cfg.root_seed, cfg.trials
    log.info("running %s: %d sweep points x %d trials, seed %d", cfg.kind, len(values), trials, seed)
    if cfg.kind == "secrecy-curve":
        o = ex["optimizer"]
        opts = OptimizerSettings(restarts=o["restarts"], grid_points=o["grid_points"],
                                 grid_sweeps=o["grid_sweeps"], tol=o["tol"], max_sweeps=o["max_sweeps"],
                                 phase_bits=o["phase_bits"], beta=o["beta"])
        table = avg_secrecy_curve(scenario, values, trials, seed, opts, threads)
    elif cfg.kind == "covert-prob":
        positions = [_pos(p) for p in ex["irs_positions_m"]]
        table = perfect_covertness_curve(scenario, positions, values, trials, seed, threads)
    elif cfg.kind == "covert-amplitudes":
        table = covert_amplitude_curve(
            scenario, values, trials, seed, ex["target_rate_bps_hz"], build_grids(ex["grids"]),
            ex["blocklength"], ex["method"], ex["residual_rho"], threads)
    else:
        table = est_vs_rho_curve(scenario, values, ex["rate_b_bps_hz"], ex["rate_s_bps_hz"], trials,
                                 seed, ex["eve_csi_public"], None, threads)
    meta = dict(table.metadata)
    meta.update({"kind": cfg.kind, "config_digest": cfg.digest(), "root_seed": seed,
                 "trials": trials, "version": __version__})
    table.metadata = meta
    return table
