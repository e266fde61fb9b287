"""Eavesdropper replays and information-theoretic accounting.

Everything here treats the eavesdropper generously: she holds a perfect copy
of the transmitted state, knows the constellation, the feedback polynomial,
and the protocol, and is limited only by measurement physics and by the
secrecy of the short seed.  The module answers three kinds of question at
desk scale:

* replay: given recorded half-plane labels, what does exhaustive search over
  every seed actually recover, and how do injected measurement errors or
  deliberate randomization degrade it;
* entropy: exact posterior entropies of the seed and of the data sequence
  given the eavesdropper's record, computed by brute-force marginalization
  rather than by bound;
* key generation: the error-probability gap between an optimal quantum
  receiver and an intercepting one, as a function of pulse energy.

Exhaustive enumeration is capped to sizes a laptop handles in seconds; the
caps raise RegimeCapError rather than silently subsampling.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .codec import Constellation, SymbolRecord, encode, halfplane_label, keystream_table
from .detection import (
    antipodal_homodyne_error,
    helstrom_pure,
    heterodyne_index_transition,
    heterodyne_sample,
    nearest_phase_index,
)
from .errors import RegimeCapError

# Exhaustive-search ceilings.  Replays enumerate every nonzero seed; the
# entropy engines additionally hold a per-seed, per-symbol probability table.
ATTACK_KEY_BITS_CAP = 20
ATTACK_TABLE_CAP = 1 << 26
ENTROPY_KEY_BITS_CAP = 12
ENTROPY_SYMBOL_CAP = 32


@dataclass(frozen=True)
class Dsr:
    """Deliberate signal randomization applied by the sender.

    kind 'binary' flips the transmitted pair member with probability
    ``param``; kind 'jitter' adds phase noise uniform on (-param, param).
    """

    kind: str = "none"
    param: float = 0.0

    def __post_init__(self) -> None:
        if self.kind not in ("none", "binary", "jitter"):
            raise ValueError("dsr kind must be 'none', 'binary' or 'jitter'")
        if self.kind == "binary" and not 0.0 <= self.param <= 1.0:
            raise ValueError("binary flip probability must lie in [0, 1]")
        if self.kind == "jitter" and not 0.0 <= self.param < math.pi:
            raise ValueError("jitter half-width must lie in [0, pi)")

    @classmethod
    def none(cls) -> "Dsr":
        return cls()

    @classmethod
    def binary(cls, flip_prob: float) -> "Dsr":
        return cls("binary", flip_prob)

    @classmethod
    def jitter(cls, half_width: float) -> "Dsr":
        return cls("jitter", half_width)


@dataclass(frozen=True)
class AttackScenario:
    """Channel and adversary model for one replay or entropy run.

    error_seq marks positions where the eavesdropper's label record is
    flipped after measurement (recording errors); misalign rotates her
    phase reference relative to the sender's; dsr is the sender's deliberate
    randomization; otp_mode marks the two-stage construction in which the
    cipher transports a one-time pad rather than the message itself.
    """

    n_symbols: int
    error_seq: "np.ndarray | None" = None
    misalign: float = 0.0
    dsr: Dsr = Dsr()
    otp_mode: bool = False

    def __post_init__(self) -> None:
        if self.n_symbols < 1:
            raise ValueError("n_symbols must be positive")
        if not math.isfinite(self.misalign):
            raise ValueError("misalign must be finite")
        if self.error_seq is not None:
            e = np.asarray(self.error_seq, dtype=np.uint8)
            if e.shape != (self.n_symbols,):
                raise ValueError("error_seq must have one entry per symbol")
            if np.any(e > 1):
                raise ValueError("error_seq entries must be bits")
            object.__setattr__(self, "error_seq", e)

    def error_vector(self) -> np.ndarray:
        if self.error_seq is None:
            return np.zeros(self.n_symbols, dtype=np.uint8)
        return self.error_seq

    @classmethod
    def with_errors(cls, n_symbols: int, positions: "list[int]", **kw) -> "AttackScenario":
        e = np.zeros(n_symbols, dtype=np.uint8)
        for p in positions:
            e[p] = 1
        return cls(n_symbols=n_symbols, error_seq=e, **kw)


@dataclass
class AttackRecord:
    """Outcome of one exhaustive replay over the seed space."""

    measured_labels: np.ndarray
    candidate_count: int
    true_key_rank: "int | None"
    true_r_in_candidates: bool
    per_seed_match_fraction: np.ndarray
    mutual_info_estimate: "float | None" = None
    seeds: "np.ndarray | None" = None
    true_seed: "int | None" = None
    exact_match_count: int = 0
    collision_count: int = 0
    notes: dict = field(default_factory=dict)


@dataclass
class EntropyReport:
    """Posterior entropies averaged over independently generated trials."""

    regime: str
    trials: int
    key_bits: int
    n_symbols: int
    h_key: float
    h_key_given_obs: "float | None" = None
    h_data_given_obs: "float | None" = None
    h_key_given_obs_and_data: "float | None" = None
    exceeds_key_entropy: "bool | None" = None
    notes: dict = field(default_factory=dict)


@dataclass(frozen=True)
class KeygenPoint:
    """One energy point of the key-generation advantage curve."""

    s: float
    p_error_bob: float
    p_error_eve: float
    advantage_bits: float


def binary_entropy(p: float) -> float:
    """h2(p) in bits, with the 0 log 0 = 0 convention."""
    if not 0.0 <= p <= 1.0:
        raise ValueError("probability out of range")
    if p == 0.0 or p == 1.0:
        return 0.0
    return float(-p * math.log2(p) - (1.0 - p) * math.log2(1.0 - p))


def _require_plain_pairing(c: Constellation) -> None:
    if c.osk:
        raise ValueError(
            "label-record attacks assume the fixed bit-to-member pairing; "
            "disable the scrambling bit for this analysis")


def _check_attack_caps(key_bits: int, n_symbols: int) -> None:
    if key_bits > ATTACK_KEY_BITS_CAP:
        raise RegimeCapError(
            f"replay enumerates 2^{key_bits} seeds; cap is 2^{ATTACK_KEY_BITS_CAP}")
    if (1 << key_bits) * n_symbols > ATTACK_TABLE_CAP:
        raise RegimeCapError(
            f"seed table of 2^{key_bits} x {n_symbols} symbols exceeds the "
            f"{ATTACK_TABLE_CAP}-entry cap")


def _check_entropy_caps(key_bits: int, n_symbols: int) -> None:
    if key_bits > ENTROPY_KEY_BITS_CAP:
        raise RegimeCapError(
            f"exact posteriors enumerate 2^{key_bits} seeds; cap is "
            f"2^{ENTROPY_KEY_BITS_CAP}")
    if n_symbols > ENTROPY_SYMBOL_CAP:
        raise RegimeCapError(
            f"exact posteriors over {n_symbols} symbols exceed the "
            f"{ENTROPY_SYMBOL_CAP}-symbol cap")


# ---------------------------------------------------------------------------
# Label measurement pipeline


def _up_fraction(rel_phase: float, half_width: float) -> float:
    """Probability that rel_phase + U(-w, w) lands in the upper half-plane."""
    if half_width == 0.0:
        return float(halfplane_label(rel_phase, 0.0))

    def below(x: float) -> float:
        # measure of the up set (0, pi) mod 2 pi on (-inf, x]
        k = math.floor(x / (2.0 * math.pi))
        return k * math.pi + min(x - 2.0 * math.pi * k, math.pi)

    lo, hi = rel_phase - half_width, rel_phase + half_width
    return (below(hi) - below(lo)) / (2.0 * half_width)


def _index_label_prob(c: Constellation, scenario: AttackScenario) -> np.ndarray:
    """P(recorded label = 1 | transmitted index), before recording errors.

    Folds reference misalignment, phase jitter, and the binary flip into a
    single per-index probability table of length 2M.
    """
    eve_axis = c.phase_offset + scenario.misalign
    rel = c.phases() - eve_axis
    if scenario.dsr.kind == "jitter" and scenario.dsr.param > 0.0:
        p1 = np.array([_up_fraction(float(r), scenario.dsr.param) for r in rel])
    else:
        p1 = np.array([float(halfplane_label(float(ph), eve_axis)) for ph in c.phases()])
    if scenario.dsr.kind == "binary":
        f = scenario.dsr.param
        p1 = p1 * (1.0 - f) + (1.0 - p1) * f
    return p1


def _measure_indices(indices: np.ndarray, c: Constellation, scenario: AttackScenario,
                     rng: "np.random.Generator | None",
                     error_vec: np.ndarray) -> np.ndarray:
    """Physical label pipeline: deliberate flip, jitter, half-plane decision, recording errors."""
    idx = np.asarray(indices, dtype=int).copy()
    needs_rng = scenario.dsr.kind in ("binary", "jitter") and scenario.dsr.param > 0.0
    if needs_rng and rng is None:
        raise ValueError("this scenario randomizes the signal; pass a Generator")
    if scenario.dsr.kind == "binary" and scenario.dsr.param > 0.0:
        flips = rng.random(idx.size) < scenario.dsr.param
        idx = np.where(flips, (idx + c.m) % c.n_states, idx)
    phases = c.phase_offset + math.pi * idx / c.m
    if scenario.dsr.kind == "jitter" and scenario.dsr.param > 0.0:
        phases = phases + rng.uniform(-scenario.dsr.param, scenario.dsr.param, idx.size)
    eve_axis = c.phase_offset + scenario.misalign
    labels = np.fromiter((halfplane_label(float(p), eve_axis) for p in phases),
                         dtype=np.uint8, count=idx.size)
    return labels ^ error_vec


def measure_labels(symbols: "list[SymbolRecord] | np.ndarray", c: Constellation,
                   scenario: AttackScenario,
                   rng: "np.random.Generator | None" = None) -> np.ndarray:
    """Half-plane labels an eavesdropper records for a transmitted sequence.

    Accepts encoded SymbolRecords or a raw array of state indices.  The rng
    is only consulted when the scenario contains a stochastic element.
    """
    if isinstance(symbols, np.ndarray):
        indices = symbols
    else:
        indices = np.array([s.index for s in symbols], dtype=int)
    if indices.ndim != 1 or indices.size != scenario.n_symbols:
        raise ValueError("symbol count does not match the scenario")
    if np.any(indices < 0) or np.any(indices >= c.n_states):
        raise ValueError("state index out of range")
    return _measure_indices(indices, c, scenario, rng, scenario.error_vector())


# ---------------------------------------------------------------------------
# Exhaustive replay


def _pair_index_table(c: Constellation) -> np.ndarray:
    """idx[bit, basis] = transmitted state index under the fixed pairing."""
    table = np.empty((2, c.m), dtype=int)
    for basis in range(c.m):
        for bit in (0, 1):
            table[bit, basis] = encode(bit, basis, 0, c).index
    return table


def _candidate_scan(effective_labels: np.ndarray, parity: np.ndarray,
                    target: np.ndarray) -> "tuple[np.ndarray, np.ndarray, int]":
    """Candidate bit sequences labels XOR parity_j, scored against a target.

    Returns (candidates, match_fraction, distinct_count).
    """
    cand = np.bitwise_xor(effective_labels[None, :], parity)
    frac = np.mean(cand == target[None, :], axis=1)
    packed = np.packbits(cand, axis=1)
    distinct = np.unique(packed, axis=0).shape[0]
    return cand, frac, int(distinct)


def brute_force_candidates(measured: np.ndarray, c: Constellation, poly: int,
                           r_true: np.ndarray, true_seed: int) -> AttackRecord:
    """Replay of the classic recorded-labels attack over every nonzero seed.

    Each seed hypothesis j turns the label record into a candidate data
    sequence by XOR with that seed's basis-parity stream.  The record keeps
    the full per-seed agreement profile with the actually transmitted
    sequence, the rank of the true seed (ties resolved optimistically for
    the attacker), and the number of distinct candidate sequences.
    """
    _require_plain_pairing(c)
    key_bits = poly.bit_length() - 1
    n = measured.size
    _check_attack_caps(key_bits, n)
    measured = np.asarray(measured, dtype=np.uint8)
    r_true = np.asarray(r_true, dtype=np.uint8)
    if r_true.shape != measured.shape:
        raise ValueError("label record and reference sequence differ in length")
    if not 0 < true_seed < (1 << key_bits):
        raise ValueError("true_seed must be a nonzero register value")
    seeds = np.arange(1, 1 << key_bits, dtype=np.uint32)
    _, parity, _ = keystream_table(poly, n, c.bits_per_symbol, seeds=seeds, osk=False)
    _, frac, distinct = _candidate_scan(measured, parity, r_true)
    exact = np.nonzero(frac == 1.0)[0]
    t = int(true_seed) - 1
    rank = 1 + int(np.sum(frac > frac[t]))
    # a candidate with match fraction 1 is the transmitted sequence itself
    return AttackRecord(
        measured_labels=measured,
        candidate_count=distinct,
        true_key_rank=rank,
        true_r_in_candidates=bool(exact.size > 0),
        per_seed_match_fraction=frac,
        seeds=seeds,
        true_seed=int(true_seed),
        exact_match_count=int(exact.size),
        collision_count=int(seeds.size - distinct),
        notes={
            "seed_space": int(seeds.size),
            "data_space_log2": float(n),
        },
    )


def otp_stage_attack(x_bits: np.ndarray, c: Constellation, poly: int, true_seed: int,
                     scenario: AttackScenario,
                     rng: np.random.Generator) -> AttackRecord:
    """Replay against the two-stage construction: the cipher carries a pad.

    The sender draws a uniform pad R, publishes ciphertext C = X XOR R, and
    transmits R through the keyed constellation.  The eavesdropper's
    candidate plaintexts are C XOR labels XOR parity_j; on a noiseless
    record the true seed reproduces X exactly, bit for bit.
    """
    _require_plain_pairing(c)
    if not scenario.otp_mode:
        raise ValueError("scenario must set otp_mode for the two-stage replay")
    key_bits = poly.bit_length() - 1
    x_bits = np.asarray(x_bits, dtype=np.uint8)
    n = x_bits.size
    _check_attack_caps(key_bits, n)
    if scenario.n_symbols != n:
        raise ValueError("scenario length does not match the plaintext")
    pad = rng.integers(0, 2, n, dtype=np.uint8)
    cipher = x_bits ^ pad
    ks_basis, parity_true, _ = keystream_table(
        poly, n, c.bits_per_symbol, seeds=np.array([true_seed], dtype=np.uint32), osk=False)
    idx_table = _pair_index_table(c)
    indices = idx_table[pad, ks_basis[0]]
    labels = _measure_indices(indices, c, scenario, rng, scenario.error_vector())
    seeds = np.arange(1, 1 << key_bits, dtype=np.uint32)
    _, parity, _ = keystream_table(poly, n, c.bits_per_symbol, seeds=seeds, osk=False)
    cand, frac, distinct = _candidate_scan(cipher ^ labels, parity, x_bits)
    exact = np.nonzero(frac == 1.0)[0]
    t = int(true_seed) - 1
    rank = 1 + int(np.sum(frac > frac[t]))
    noiseless = (scenario.dsr.kind == "none" and scenario.misalign == 0.0
                 and not scenario.error_vector().any())
    identity = bool(np.all((cipher ^ labels ^ parity_true[0]) == x_bits)) if noiseless else None
    return AttackRecord(
        measured_labels=labels,
        candidate_count=distinct,
        true_key_rank=rank,
        true_r_in_candidates=bool(frac[t] == 1.0),
        per_seed_match_fraction=frac,
        seeds=seeds,
        true_seed=int(true_seed),
        exact_match_count=int(exact.size),
        collision_count=int(seeds.size - distinct),
        notes={
            "seed_space": int(seeds.size),
            "pad_identity_noiseless": identity,
            "ciphertext": cipher.tolist(),
        },
    )


# ---------------------------------------------------------------------------
# Exact posterior entropies


def _full_seed_tables(c: Constellation, poly: int,
                      n_symbols: int) -> "tuple[np.ndarray, np.ndarray]":
    """(seeds, basis) over the complete 2^K hypothesis space, zero included.

    The zero register never occurs operationally, but the uncertainty
    accounting runs over every syntactically possible key, so the all-zero
    keystream row is prepended by hand.
    """
    key_bits = poly.bit_length() - 1
    basis_nz, _, _ = keystream_table(poly, n_symbols, c.bits_per_symbol, osk=False)
    basis = np.vstack([np.zeros((1, n_symbols), dtype=basis_nz.dtype), basis_nz])
    seeds = np.arange(0, 1 << key_bits, dtype=np.uint32)
    return seeds, basis


def _symbol_likelihoods(p1_by_index: np.ndarray, idx_table: np.ndarray,
                        basis: np.ndarray, labels: np.ndarray,
                        r_bits: "np.ndarray | None") -> np.ndarray:
    """P(label_i | seed_j) for every seed row; data marginalized when r_bits is None."""
    p_r0 = p1_by_index[idx_table[0, basis]]
    p_r1 = p1_by_index[idx_table[1, basis]]
    if r_bits is None:
        p1 = 0.5 * (p_r0 + p_r1)
    else:
        p1 = np.where(r_bits.astype(bool)[None, :], p_r1, p_r0)
    up = labels.astype(bool)[None, :]
    return np.where(up, p1, 1.0 - p1)


def _sequence_likelihood(q: np.ndarray, q_flipped: np.ndarray, error_weight: int) -> np.ndarray:
    """Per-seed sequence likelihood, marginalizing the error position if any."""
    if error_weight == 0:
        return q.prod(axis=1)
    n = q.shape[1]
    pre = np.ones((q.shape[0], n + 1))
    pre[:, 1:] = np.cumprod(q, axis=1)
    suf = np.ones((q.shape[0], n + 1))
    suf[:, :n] = np.cumprod(q[:, ::-1], axis=1)[:, ::-1]
    terms = pre[:, :n] * suf[:, 1:] * q_flipped
    return terms.sum(axis=1) / n


def _posterior_entropy_bits(likelihood: np.ndarray) -> float:
    total = float(likelihood.sum())
    if total <= 0.0:
        raise AssertionError("posterior has no support; model inconsistent with data")
    p = likelihood / total
    nz = p[p > 0.0]
    return float(-(nz * np.log2(nz)).sum())


def _entropy_error_weight(scenario: AttackScenario) -> int:
    w = int(scenario.error_vector().sum())
    if w > 1:
        raise ValueError(
            "posterior marginalization supports at most one unknown-position "
            "recording error")
    return w


def ciphertext_only_entropy(c: Constellation, poly: int, scenario: AttackScenario,
                            trials: int, rng: np.random.Generator) -> EntropyReport:
    """Exact H(key | record) and H(data | record) from label records alone.

    Each trial draws a fresh seed, data sequence, and channel noise, then
    computes the eavesdropper's full posterior over all 2^K keys (data
    marginalized) and the exact surprisal of the transmitted sequence.  A
    declared recording error contributes its weight, not its position, to
    the posterior; weights above one are not supported.
    """
    _require_plain_pairing(c)
    key_bits = poly.bit_length() - 1
    n = scenario.n_symbols
    _check_entropy_caps(key_bits, n)
    if trials < 1:
        raise ValueError("trials must be positive")
    weight = _entropy_error_weight(scenario)
    p1 = _index_label_prob(c, scenario)
    idx_table = _pair_index_table(c)
    _, basis = _full_seed_tables(c, poly, n)
    h_key_vals = np.empty(trials)
    surprisals = np.empty(trials)
    for t in range(trials):
        true_seed = int(rng.integers(1, 1 << key_bits))
        r = rng.integers(0, 2, n, dtype=np.uint8)
        error_vec = np.zeros(n, dtype=np.uint8)
        if weight == 1:
            error_vec[int(rng.integers(0, n))] = 1
        # row index in the full table equals the seed value
        indices = idx_table[r, basis[true_seed]]
        labels = _measure_indices(indices, c, scenario, rng, error_vec)
        q_marg = _symbol_likelihoods(p1, idx_table, basis, labels, None)
        qf_marg = _symbol_likelihoods(p1, idx_table, basis, labels ^ 1, None)
        like_marg = _sequence_likelihood(q_marg, qf_marg, weight)
        h_key_vals[t] = _posterior_entropy_bits(like_marg)
        q_cond = _symbol_likelihoods(p1, idx_table, basis, labels, r)
        qf_cond = _symbol_likelihoods(p1, idx_table, basis, labels ^ 1, r)
        like_cond = _sequence_likelihood(q_cond, qf_cond, weight)
        # P(data | record) = 2^-n sum_j L(record | j, data) / sum_j L(record | j)
        surprisals[t] = n - math.log2(float(like_cond.sum())) + math.log2(float(like_marg.sum()))
    h_key_mean = float(h_key_vals.mean())
    h_data_mean = float(surprisals.mean())
    return EntropyReport(
        regime="ciphertext_only",
        trials=trials,
        key_bits=key_bits,
        n_symbols=n,
        h_key=float(key_bits),
        h_key_given_obs=h_key_mean,
        h_data_given_obs=h_data_mean,
        exceeds_key_entropy=bool(h_data_mean > key_bits),
        notes={
            "h_key_given_obs_min": float(h_key_vals.min()),
            "h_key_given_obs_max": float(h_key_vals.max()),
            "h_data_given_obs_std": float(surprisals.std()),
            "error_weight": weight,
        },
    )


def known_plaintext_key_entropy(c: Constellation, poly: int, scenario: AttackScenario,
                                trials: int, rng: np.random.Generator,
                                regime: str = "classical") -> EntropyReport:
    """Exact H(key | record, data) when the data sequence is disclosed.

    regime 'classical' scores the half-plane label record; 'quantum' scores
    a heterodyne receiver's nearest-phase index record through the exact
    per-symbol transition matrix.  In both cases the posterior runs over
    all 2^K keys.
    """
    _require_plain_pairing(c)
    if regime not in ("classical", "quantum"):
        raise ValueError("regime must be 'classical' or 'quantum'")
    key_bits = poly.bit_length() - 1
    n = scenario.n_symbols
    _check_entropy_caps(key_bits, n)
    if trials < 1:
        raise ValueError("trials must be positive")
    idx_table = _pair_index_table(c)
    _, basis = _full_seed_tables(c, poly, n)
    h_vals = np.empty(trials)
    if regime == "classical":
        weight = _entropy_error_weight(scenario)
        p1 = _index_label_prob(c, scenario)
        for t in range(trials):
            true_seed = int(rng.integers(1, 1 << key_bits))
            r = rng.integers(0, 2, n, dtype=np.uint8)
            error_vec = np.zeros(n, dtype=np.uint8)
            if weight == 1:
                error_vec[int(rng.integers(0, n))] = 1
            indices = idx_table[r, basis[true_seed]]
            labels = _measure_indices(indices, c, scenario, rng, error_vec)
            q = _symbol_likelihoods(p1, idx_table, basis, labels, r)
            qf = _symbol_likelihoods(p1, idx_table, basis, labels ^ 1, r)
            h_vals[t] = _posterior_entropy_bits(_sequence_likelihood(q, qf, weight))
    else:
        if scenario.dsr.kind == "jitter":
            raise ValueError("the quantum record model supports dsr 'none' or 'binary'")
        if scenario.error_vector().any():
            raise ValueError("recording errors apply to label records, not index records")
        f = scenario.dsr.param if scenario.dsr.kind == "binary" else 0.0
        trans = heterodyne_index_transition(c, decision_offset=scenario.misalign)
        amps = c.amplitudes()
        for t in range(trials):
            true_seed = int(rng.integers(1, 1 << key_bits))
            r = rng.integers(0, 2, n, dtype=np.uint8)
            sent = idx_table[r, basis[true_seed]]
            if f > 0.0:
                flips = rng.random(n) < f
                sent = np.where(flips, (sent + c.m) % c.n_states, sent)
            z = heterodyne_sample(0j, rng, size=n) + amps[sent]
            decided = nearest_phase_index(z, c, decision_offset=scenario.misalign)
            like_match = trans[idx_table[r, basis], decided[None, :]]
            if f > 0.0:
                like_flip = trans[idx_table[1 - r, basis], decided[None, :]]
                per_symbol = (1.0 - f) * like_match + f * like_flip
            else:
                per_symbol = like_match
            h_vals[t] = _posterior_entropy_bits(per_symbol.prod(axis=1))
    h_mean = float(h_vals.mean())
    return EntropyReport(
        regime=f"known_plaintext_{regime}",
        trials=trials,
        key_bits=key_bits,
        n_symbols=n,
        h_key=float(key_bits),
        h_key_given_obs_and_data=h_mean,
        notes={
            "h_min": float(h_vals.min()),
            "h_max": float(h_vals.max()),
            "residual_positive": bool(h_vals.min() > 0.0),
        },
    )


def label_mutual_information(c: Constellation, poly: int, true_seed: int,
                             scenario: AttackScenario, trials: int,
                             rng: np.random.Generator) -> float:
    """Empirical I(recorded label; data bit) in bits per symbol, fixed keystream.

    Estimated position by position with a plug-in 2x2 estimator over
    ``trials`` independently drawn data sequences, then averaged across
    positions.  With effective deliberate randomization this collapses to
    zero up to estimator noise of order 1/trials.
    """
    _require_plain_pairing(c)
    key_bits = poly.bit_length() - 1
    n = scenario.n_symbols
    _check_attack_caps(key_bits, n)
    if trials < 2:
        raise ValueError("need at least two trials")
    if not 0 < true_seed < (1 << key_bits):
        raise ValueError("true_seed must be a nonzero register value")
    basis, _, _ = keystream_table(poly, n, c.bits_per_symbol,
                                  seeds=np.array([true_seed], dtype=np.uint32), osk=False)
    idx_table = _pair_index_table(c)
    labels = np.empty((trials, n), dtype=np.uint8)
    data = rng.integers(0, 2, (trials, n), dtype=np.uint8)
    for t in range(trials):
        indices = idx_table[data[t], basis[0]]
        labels[t] = _measure_indices(indices, c, scenario, rng, scenario.error_vector())
    mi_sum = 0.0
    for i in range(n):
        joint = np.zeros((2, 2))
        np.add.at(joint, (data[:, i], labels[:, i]), 1.0)
        joint /= trials
        px = joint.sum(axis=1, keepdims=True)
        py = joint.sum(axis=0, keepdims=True)
        mask = joint > 0.0
        mi_sum += float((joint[mask] * np.log2(joint[mask] / (px @ py)[mask])).sum())
    return mi_sum / n


def keygen_advantage(s_values: "np.ndarray | list[float]", mode: str = "ideal",
                     energy_factor: float = 0.5) -> "list[KeygenPoint]":
    """Per-pulse error gap between the key holder and an intercepting receiver.

    Antipodal signaling at mean photon number S: the key holder reaches the
    quantum-optimal error (decaying like e^{-4S}) while the interceptor,
    without the phase reference the key provides, is scored as a homodyne
    receiver (decaying like e^{-2S}).  The advantage is the difference of
    binary entropies of the two error rates.

    mode 'randomized' treats each input value as a per-pulse energy budget
    of which only ``energy_factor`` arrives coherently, halving both decay
    exponents at the default factor.
    """
    if mode not in ("ideal", "randomized"):
        raise ValueError("mode must be 'ideal' or 'randomized'")
    if not 0.0 < energy_factor <= 1.0:
        raise ValueError("energy_factor must lie in (0, 1]")
    out = []
    for s in np.asarray(s_values, dtype=float):
        if s < 0 or not math.isfinite(s):
            raise ValueError("energies must be finite and nonnegative")
        s_eff = s * energy_factor if mode == "randomized" else s
        a = math.sqrt(s_eff)
        pe_bob = helstrom_pure(a, -a).p_error
        pe_eve = antipodal_homodyne_error(s_eff)
        out.append(KeygenPoint(
            s=float(s),
            p_error_bob=pe_bob,
            p_error_eve=pe_eve,
            advantage_bits=binary_entropy(pe_eve) - binary_entropy(pe_bob),
        ))
    return out
