"""What deliberate randomization buys: match fractions, posteriors, leakage.

Three views of the same 8-bit register at desk scale.  First the replay
match fraction as the flip probability rises toward a coin toss, then the
exact posterior entropies of key and data under several channel settings,
and finally the per-symbol mutual information between recorded label and
data bit.
"""

import numpy as np

from yzero import (AttackScenario, Constellation, Dsr, Keystream,
                   PRIMITIVE_POLYS, brute_force_candidates,
                   ciphertext_only_entropy, encode_sequence,
                   known_plaintext_key_entropy, label_mutual_information,
                   measure_labels)

POLY = PRIMITIVE_POLYS[8]
TRUE_SEED = 0xB5


def replay_decay() -> None:
    c = Constellation(m=8, energy=4.0)
    n = 96
    rng = np.random.default_rng(21)
    data = rng.integers(0, 2, n, dtype=np.uint8)
    symbols = encode_sequence(data, Keystream(POLY, TRUE_SEED, c.bits_per_symbol), c)
    print("replay vs binary randomization (255 seeds, N = 96)")
    print(f"  {'flip p':>7} {'true-seed match':>16} {'rank':>5}")
    for f in (0.0, 0.1, 0.25, 0.5):
        sc = AttackScenario(n_symbols=n, dsr=Dsr.binary(f))
        labels = measure_labels(symbols, c, sc, np.random.default_rng(int(f * 100)))
        rec = brute_force_candidates(labels, c, POLY, data, TRUE_SEED)
        frac = rec.per_seed_match_fraction[TRUE_SEED - 1]
        print(f"  {f:>7.2f} {frac:>16.4f} {rec.true_key_rank:>5}")
    print("  at p = 0.5 the record carries no trace of the seed at all\n")


def posterior_table() -> None:
    c = Constellation(m=4, energy=2.0)
    n = 16
    rng = np.random.default_rng(33)
    rows = [
        ("noiseless", AttackScenario(n_symbols=n)),
        ("one recording error", AttackScenario.with_errors(n, [4])),
        ("jitter 0.6 rad", AttackScenario(n_symbols=n, dsr=Dsr.jitter(0.6))),
        ("binary flip 0.5", AttackScenario(n_symbols=n, dsr=Dsr.binary(0.5))),
    ]
    print("exact posteriors, 8-bit key, N = 16, 6 trials each")
    print(f"  {'channel':<20} {'H(K|Y)':>8} {'H(X|Y)':>8} {'H(X|Y) > H(K)':>14}")
    for name, sc in rows:
        rep = ciphertext_only_entropy(c, POLY, sc, trials=6, rng=rng)
        flag = "yes" if rep.exceeds_key_entropy else "no"
        print(f"  {name:<20} {rep.h_key_given_obs:>8.3f} "
              f"{rep.h_data_given_obs:>8.3f} {flag:>14}")
    print("  the key posterior stays flat in every column: the pair members")
    print("  are antipodal, so a symmetric record is equally likely under")
    print("  every seed.  Secrecy shows up in the data column instead.\n")

    print("known plaintext (data disclosed):")
    rep = known_plaintext_key_entropy(c, POLY, AttackScenario(n_symbols=n),
                                      trials=6, rng=rng)
    print(f"  noiseless labels     H(K|Y,X) = {rep.h_key_given_obs_and_data:.3f}")
    rep = known_plaintext_key_entropy(c, POLY,
                                      AttackScenario(n_symbols=n, dsr=Dsr.binary(0.5)),
                                      trials=6, rng=rng)
    print(f"  binary flip 0.5      H(K|Y,X) = {rep.h_key_given_obs_and_data:.3f}")
    c_dim = Constellation(m=4, energy=0.5)
    rep = known_plaintext_key_entropy(c_dim, POLY, AttackScenario(n_symbols=n),
                                      trials=6, rng=rng, regime="quantum")
    print(f"  heterodyne, S = 0.5  H(K|Y,X) = {rep.h_key_given_obs_and_data:.3f}"
          f"  (residual from measurement noise alone)\n")


def mutual_information_table() -> None:
    c = Constellation(m=8, energy=4.0)
    sc_base = AttackScenario(n_symbols=12)
    rng = np.random.default_rng(55)
    print("I(label; data bit) per symbol, fixed keystream, 4000 trials")
    for name, sc in [
        ("no randomization", sc_base),
        ("binary flip 0.25", AttackScenario(n_symbols=12, dsr=Dsr.binary(0.25))),
        ("binary flip 0.5", AttackScenario(n_symbols=12, dsr=Dsr.binary(0.5))),
    ]:
        mi = label_mutual_information(c, POLY, TRUE_SEED, sc, trials=4000, rng=rng)
        print(f"  {name:<20} {mi:.4f} bits")


if __name__ == "__main__":
    replay_decay()
    posterior_table()
    mutual_information_table()
