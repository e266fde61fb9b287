"""Execution of configured runs and deterministic output writing.

Every run derives its random streams from a single master seed through
numpy's SeedSequence spawning, one child per logical task, so results do
not depend on the thread count.  Data files (CSV, JSON) contain no
timestamps and use shortest-roundtrip float formatting; rerunning with the
same seed reproduces them byte for byte.  The manifest carries the clock.
"""

from __future__ import annotations

import csv
import datetime
import json
import os
import platform
from concurrent.futures import ThreadPoolExecutor

import numpy as np
import scipy

from . import __version__
from .attacks import (
    ATTACK_KEY_BITS_CAP,
    ATTACK_TABLE_CAP,
    AttackScenario,
    ENTROPY_KEY_BITS_CAP,
    ENTROPY_SYMBOL_CAP,
    brute_force_candidates,
    ciphertext_only_entropy,
    keygen_advantage,
    known_plaintext_key_entropy,
    label_mutual_information,
    measure_labels,
    otp_stage_attack,
)
from .codec import Constellation, Keystream, encode_sequence
from .detection import bit_bound, exponent_fit, srm_mary_error, updown_bound
from .errors import RegimeCapError
from .fockspace import HERMITICITY_TOL, TAIL_TOL
from .scenario import RunManifest, ScenarioConfig


def validate_caps(cfg: ScenarioConfig) -> None:
    """Raise RegimeCapError before any computation if the run is oversized."""
    if cfg.family == "attack":
        if cfg.key_bits > ATTACK_KEY_BITS_CAP:
            raise RegimeCapError(
                f"attack family enumerates 2^{cfg.key_bits} seeds; "
                f"cap is 2^{ATTACK_KEY_BITS_CAP}")
        if (1 << cfg.key_bits) * cfg.n_symbols > ATTACK_TABLE_CAP:
            raise RegimeCapError("seed table exceeds the in-memory cap")
    elif cfg.family == "entropy":
        if cfg.key_bits > ENTROPY_KEY_BITS_CAP:
            raise RegimeCapError(
                f"entropy family enumerates 2^{cfg.key_bits} hypotheses; "
                f"cap is 2^{ENTROPY_KEY_BITS_CAP}")
        if cfg.n_symbols > ENTROPY_SYMBOL_CAP:
            raise RegimeCapError(
                f"entropy family caps at {ENTROPY_SYMBOL_CAP} symbols")


def _scenario_from_config(cfg: ScenarioConfig) -> AttackScenario:
    if cfg.error_positions:
        return AttackScenario.with_errors(cfg.n_symbols, cfg.error_positions,
                                          misalign=cfg.misalign, dsr=cfg.dsr,
                                          otp_mode=cfg.otp)
    return AttackScenario(n_symbols=cfg.n_symbols, misalign=cfg.misalign,
                          dsr=cfg.dsr, otp_mode=cfg.otp)


def _modeling_record(cfg: ScenarioConfig) -> "dict[str, object]":
    return {
        "label_encoding": "up=1 down=0",
        "label_tie_break": "phase on the axis counts as up, antipode as down",
        "lfsr": "fibonacci, low-bit output, msb-first per-symbol chunks",
        "eve_label_receiver": "ideal half-plane discriminator",
        "quantum_record_receiver": "heterodyne, nearest-phase decision",
        "entropy_hypothesis_space": "all 2^K register values including zero",
        "dsr": f"{cfg.dsr.kind}:{cfg.dsr.param}",
        "misalign_radians": cfg.misalign,
        "bound_impl": cfg.impl,
    }


def _manifest(cfg: ScenarioConfig, outputs: "list[str]") -> RunManifest:
    return RunManifest(
        family=cfg.family,
        master_seed=cfg.master_seed,
        threads=cfg.threads,
        config_path=cfg.config_path,
        config_sha256=cfg.config_sha256,
        outputs=outputs,
        created_utc=datetime.datetime.now(datetime.timezone.utc).isoformat(),
        versions={
            "yzero": __version__,
            "python": platform.python_version(),
            "numpy": np.__version__,
            "scipy": scipy.__version__,
        },
        modeling=_modeling_record(cfg),
        tolerances={
            "poisson_tail": TAIL_TOL,
            "hermiticity": HERMITICITY_TOL,
        },
    )


def _fmt(value) -> str:
    if isinstance(value, float):
        return repr(value)
    if value is None:
        return ""
    return str(value)


def _write_csv(path: str, manifest_name: str, sha256: str, header: "list[str]",
               rows: "list[list]") -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(f"# manifest: {manifest_name} config_sha256: {sha256}\n")
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_fmt(v) for v in row])


def _write_json(path: str, payload: dict) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _finish(cfg: ScenarioConfig, outputs: "list[str]") -> "list[str]":
    manifest_name = f"{cfg.prefix}_manifest.json"
    manifest = _manifest(cfg, outputs)
    _write_json(os.path.join(cfg.out_dir, manifest_name), manifest.to_dict())
    return outputs + [manifest_name]


def _spawn_rngs(master_seed: int, count: int) -> "list[np.random.Generator]":
    seq = np.random.SeedSequence(master_seed)
    return [np.random.default_rng(child) for child in seq.spawn(count)]


# ---------------------------------------------------------------------------
# Families


def run_bounds(cfg: ScenarioConfig) -> "list[str]":
    """Error-probability bounds over the (m, energy) grid; one CSV row per point."""
    validate_caps(cfg)
    os.makedirs(cfg.out_dir, exist_ok=True)
    tasks = [(m, s, method)
             for m in cfg.m_grid for s in cfg.energy_grid for method in cfg.methods]

    def compute(task):
        m, s, method = task
        c = Constellation(m=m, energy=s, phase_offset=cfg.phase_offset, osk=cfg.osk)
        if method == "bit":
            b = bit_bound(c, method=cfg.impl)
            return [m, s, "helstrom_mixed_bit", b.p_error, b.dim_used, b.deficit]
        if method == "srm":
            b = srm_mary_error(c)
            return [m, s, "srm_2M", b.p_error, c.n_states, 0.0]
        b = updown_bound(c, method=cfg.impl)
        return [m, s, "updown", b.p_error, b.dim_used, b.deficit]

    if cfg.threads > 1:
        with ThreadPoolExecutor(max_workers=cfg.threads) as pool:
            rows = list(pool.map(compute, tasks))
    else:
        rows = [compute(t) for t in tasks]
    name = f"{cfg.prefix}_bounds.csv"
    _write_csv(os.path.join(cfg.out_dir, name), f"{cfg.prefix}_manifest.json",
               cfg.config_sha256,
               ["m", "s", "method", "p_error", "dim_used", "truncation_deficit"], rows)
    return _finish(cfg, [name])


def _attack_record_payload(rec, cfg: ScenarioConfig) -> dict:
    return {
        "measured_labels": rec.measured_labels.tolist(),
        "candidate_count": rec.candidate_count,
        "collision_count": rec.collision_count,
        "exact_match_count": rec.exact_match_count,
        "true_key_rank": rec.true_key_rank,
        "true_r_in_candidates": rec.true_r_in_candidates,
        "mutual_info_estimate": rec.mutual_info_estimate,
        "match_fraction_mean": float(rec.per_seed_match_fraction.mean()),
        "match_fraction_max": float(rec.per_seed_match_fraction.max()),
        "notes": rec.notes,
        "config_sha256": cfg.config_sha256,
        "manifest_file": f"{cfg.prefix}_manifest.json",
    }


def _per_seed_rows(rec, n_symbols: int) -> "list[list]":
    rows = []
    frac = rec.per_seed_match_fraction
    for i, seed in enumerate(rec.seeds):
        hamming = int(round((1.0 - frac[i]) * n_symbols))
        rows.append([format(int(seed), "#x"), float(frac[i]), hamming,
                     int(frac[i] == 1.0), int(int(seed) == rec.true_seed)])
    return rows


def run_attack(cfg: ScenarioConfig) -> "list[str]":
    """One full replay: encode, eavesdrop, exhaust the seed space, report."""
    validate_caps(cfg)
    os.makedirs(cfg.out_dir, exist_ok=True)
    c = Constellation(m=cfg.m_grid[0], energy=cfg.energy_grid[0],
                      phase_offset=cfg.phase_offset, osk=False)
    scenario = _scenario_from_config(cfg)
    rng_data, rng_channel, rng_mi, rng_otp = _spawn_rngs(cfg.master_seed, 4)
    r_true = rng_data.integers(0, 2, cfg.n_symbols, dtype=np.uint8)
    ks = Keystream(cfg.poly, cfg.seed_register, c.bits_per_symbol)
    records = encode_sequence(r_true, ks, c)
    labels = measure_labels(records, c, scenario, rng_channel)
    rec = brute_force_candidates(labels, c, cfg.poly, r_true, cfg.seed_register)
    if cfg.mi_trials > 0:
        rec.mutual_info_estimate = label_mutual_information(
            c, cfg.poly, cfg.seed_register, scenario, cfg.mi_trials, rng_mi)
    payload = {
        "family": "attack",
        "key_bits": cfg.key_bits,
        "n_symbols": cfg.n_symbols,
        "transmitted_bits": r_true.tolist(),
        "record": _attack_record_payload(rec, cfg),
    }
    outputs = []
    seeds_name = f"{cfg.prefix}_attack_seeds.csv"
    _write_csv(os.path.join(cfg.out_dir, seeds_name), f"{cfg.prefix}_manifest.json",
               cfg.config_sha256,
               ["seed_hex", "match_fraction", "hamming_distance", "exact_match",
                "is_true_seed"],
               _per_seed_rows(rec, cfg.n_symbols))
    outputs.append(seeds_name)
    if cfg.otp:
        x_bits = rng_otp.integers(0, 2, cfg.n_symbols, dtype=np.uint8)
        orec = otp_stage_attack(x_bits, c, cfg.poly, cfg.seed_register, scenario, rng_otp)
        payload["otp_stage"] = _attack_record_payload(orec, cfg)
        payload["otp_stage"]["plaintext"] = x_bits.tolist()
        otp_name = f"{cfg.prefix}_attack_otp_seeds.csv"
        _write_csv(os.path.join(cfg.out_dir, otp_name), f"{cfg.prefix}_manifest.json",
                   cfg.config_sha256,
                   ["seed_hex", "match_fraction", "hamming_distance", "exact_match",
                    "is_true_seed"],
                   _per_seed_rows(orec, cfg.n_symbols))
        outputs.append(otp_name)
    summary_name = f"{cfg.prefix}_attack.json"
    _write_json(os.path.join(cfg.out_dir, summary_name), payload)
    outputs.insert(0, summary_name)
    return _finish(cfg, outputs)


def run_entropy(cfg: ScenarioConfig) -> "list[str]":
    """Exact posterior-entropy accounting for the configured record model."""
    validate_caps(cfg)
    os.makedirs(cfg.out_dir, exist_ok=True)
    c = Constellation(m=cfg.m_grid[0], energy=cfg.energy_grid[0],
                      phase_offset=cfg.phase_offset, osk=False)
    scenario = _scenario_from_config(cfg)
    rng_co, rng_kp = _spawn_rngs(cfg.master_seed, 2)
    payload: dict = {
        "family": "entropy",
        "key_bits": cfg.key_bits,
        "n_symbols": cfg.n_symbols,
        "trials": cfg.trials,
        "config_sha256": cfg.config_sha256,
        "manifest_file": f"{cfg.prefix}_manifest.json",
    }

    def report_dict(rep) -> dict:
        return {
            "regime": rep.regime,
            "trials": rep.trials,
            "h_key": rep.h_key,
            "h_key_given_obs": rep.h_key_given_obs,
            "h_data_given_obs": rep.h_data_given_obs,
            "h_key_given_obs_and_data": rep.h_key_given_obs_and_data,
            "exceeds_key_entropy": rep.exceeds_key_entropy,
            "notes": rep.notes,
        }

    if cfg.mode in ("ciphertext_only", "both"):
        rep = ciphertext_only_entropy(c, cfg.poly, scenario, cfg.trials, rng_co)
        payload["ciphertext_only"] = report_dict(rep)
    if cfg.mode in ("known_plaintext", "both"):
        rep = known_plaintext_key_entropy(c, cfg.poly, scenario, cfg.trials, rng_kp,
                                          regime=cfg.regime)
        payload["known_plaintext"] = report_dict(rep)
    name = f"{cfg.prefix}_entropy.json"
    _write_json(os.path.join(cfg.out_dir, name), payload)
    return _finish(cfg, [name])


def run_keygen(cfg: ScenarioConfig) -> "list[str]":
    """Advantage-versus-energy curve with decay-exponent fits when possible."""
    validate_caps(cfg)
    os.makedirs(cfg.out_dir, exist_ok=True)
    points = keygen_advantage(cfg.s_grid, mode=cfg.keygen_mode,
                              energy_factor=cfg.energy_factor)
    fit_pts_b = [(p.s, p.p_error_bob) for p in points if 0.0 < p.p_error_bob < 0.5]
    fit_pts_e = [(p.s, p.p_error_eve) for p in points if 0.0 < p.p_error_eve < 0.5]
    slope_b = slope_e = ratio = None
    if len(fit_pts_b) >= 4 and len(fit_pts_e) >= 4:
        fb = exponent_fit(fit_pts_b)
        fe = exponent_fit(fit_pts_e)
        slope_b, slope_e = fb.slope, fe.slope
        if fe.slope != 0.0:
            ratio = fb.slope / fe.slope
    rows = [[cfg.keygen_mode, p.s, p.p_error_bob, p.p_error_eve, p.advantage_bits,
             slope_b, slope_e, ratio] for p in points]
    name = f"{cfg.prefix}_keygen.csv"
    _write_csv(os.path.join(cfg.out_dir, name), f"{cfg.prefix}_manifest.json",
               cfg.config_sha256,
               ["mode", "s", "p_error_bob", "p_error_eve", "advantage_bits",
                "slope_bob", "slope_eve", "slope_ratio"], rows)
    return _finish(cfg, [name])


RUNNERS = {
    "bounds": run_bounds,
    "attack": run_attack,
    "entropy": run_entropy,
    "keygen": run_keygen,
}
