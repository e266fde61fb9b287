"""Discrimination bounds and receiver models against independent oracles."""

import math

import numpy as np
import numpy.testing as npt
import pytest
from scipy import integrate, special

from yzero import codec, detection, fockspace


def test_helstrom_pure_trivial_cases():
    assert detection.helstrom_pure(2 + 0j, 2 + 0j).p_error == 0.5
    assert detection.helstrom_pure(0j, 1 + 0j, p0=1.0).p_error == 0.0
    assert detection.helstrom_pure(0j, 1 + 0j, p0=0.0).p_error == 0.0


def test_helstrom_pure_antipodal_unit_energy():
    b = detection.helstrom_pure(1 + 0j, -1 + 0j)
    npt.assert_allclose(b.p_error, 0.004600070369588705, rtol=1e-12)
    assert b.method == "helstrom_pure"


def test_helstrom_pure_prior_validation():
    with pytest.raises(ValueError):
        detection.helstrom_pure(0j, 1j, p0=1.2)


def test_helstrom_mixed_agrees_with_pure_closed_form():
    # rank-one density inputs must land on the closed form to 1e-9
    rng = np.random.default_rng(314)
    for _ in range(25):
        a = rng.uniform(0, 2.2) * np.exp(1j * rng.uniform(0, 2 * math.pi))
        b = rng.uniform(0, 2.2) * np.exp(1j * rng.uniform(0, 2 * math.pi))
        p0 = rng.uniform(0.1, 0.9)
        dim = fockspace.truncation_dim(max(abs(a), abs(b)) ** 2, 1e-13)
        rho0 = fockspace.density_from_ensemble([fockspace.coherent_fock(a, dim)], [1.0])
        rho1 = fockspace.density_from_ensemble([fockspace.coherent_fock(b, dim)], [1.0])
        got = detection.helstrom_mixed(rho0, rho1, p0=p0).p_error
        want = detection.helstrom_pure(a, b, p0=p0).p_error
        npt.assert_allclose(got, want, atol=1e-9)


def test_helstrom_mixed_rejects_dimension_mismatch():
    r = fockspace.density_from_ensemble([fockspace.coherent_fock(0j, 4)], [1.0])
    s = fockspace.density_from_ensemble([fockspace.coherent_fock(0j, 5)], [1.0])
    with pytest.raises(ValueError):
        detection.helstrom_mixed(r, s)


def test_bit_bound_scrambled_pairs_are_unreadable():
    for m in (4, 16):
        c = codec.Constellation(m=m, energy=5.0, osk=True)
        b = detection.bit_bound(c)
        npt.assert_allclose(b.p_error, 0.5, atol=1e-12)


def test_bit_bound_gram_and_fock_routes_agree():
    for m in (8, 32):
        for s in (1.0, 4.0):
            c = codec.Constellation(m=m, energy=s)
            pf = detection.bit_bound(c, method="fock", tol=1e-13).p_error
            pg = detection.bit_bound(c, method="gram").p_error
            assert abs(pf - pg) < 1e-8


def test_bit_bound_grows_with_constellation_size():
    vals = [detection.bit_bound(codec.Constellation(m=m, energy=1.0),
                                method="gram").p_error
            for m in (8, 16, 32, 64, 128, 256)]
    assert all(a <= b + 1e-12 for a, b in zip(vals, vals[1:]))
    assert vals[-1] >= 0.45


def test_bit_bound_method_strings():
    c = codec.Constellation(m=4, energy=1.0)
    assert detection.bit_bound(c, method="fock").method == "bit_fock"
    assert detection.bit_bound(c, method="gram").method == "bit_gram"
    with pytest.raises(ValueError):
        detection.bit_bound(c, method="dft")


def test_auto_method_prefers_gram_for_small_state_sets():
    dense = codec.Constellation(m=2, energy=50.0)
    assert detection.bit_bound(dense).method == "bit_gram"
    wide = codec.Constellation(m=256, energy=0.5)
    assert detection.bit_bound(wide).method == "bit_fock"


def test_updown_bound_routes_agree():
    for m in (2, 8, 32):
        c = codec.Constellation(m=m, energy=6.0)
        pf = detection.updown_bound(c, method="fock").p_error
        pg = detection.updown_bound(c, method="gram").p_error
        assert abs(pf - pg) < 1e-8


def test_updown_bound_rotation_invariant():
    base = codec.Constellation(m=8, energy=3.0)
    spun = codec.Constellation(m=8, energy=3.0, phase_offset=0.7)
    npt.assert_allclose(detection.updown_bound(base, method="gram").p_error,
                        detection.updown_bound(spun, method="gram").p_error,
                        atol=1e-10)


def test_updown_bound_vacuum_is_coin_flip():
    c = codec.Constellation(m=4, energy=0.0)
    npt.assert_allclose(detection.updown_bound(c, method="fock").p_error, 0.5,
                        atol=1e-12)


def test_updown_bound_single_pair_matches_pure_helstrom():
    c = codec.Constellation(m=1, energy=2.0)
    want = detection.helstrom_pure(math.sqrt(2) + 0j, -math.sqrt(2) + 0j).p_error
    npt.assert_allclose(detection.updown_bound(c, method="fock").p_error, want,
                        atol=1e-9)
    npt.assert_allclose(detection.updown_bound(c, method="gram").p_error, want,
                        atol=1e-9)


def test_updown_bound_rejects_scrambling():
    with pytest.raises(ValueError):
        detection.updown_bound(codec.Constellation(m=4, energy=1.0, osk=True))


def test_srm_vacuum_error_is_uniform_guess():
    for m in (1, 4, 32):
        b = detection.srm_mary_error(codec.Constellation(m=m, energy=0.0))
        npt.assert_allclose(b.p_error, 1.0 - 1.0 / (2 * m), atol=1e-12)


def test_srm_single_pair_matches_helstrom():
    # for two symmetric pure states the square-root measurement is optimal
    c = codec.Constellation(m=1, energy=1.5)
    want = detection.helstrom_pure(math.sqrt(1.5) + 0j, -math.sqrt(1.5) + 0j).p_error
    npt.assert_allclose(detection.srm_mary_error(c).p_error, want, atol=1e-9)


def test_srm_dft_and_gram_sqrt_routes_agree():
    for m in (1, 2, 4, 8):
        for s in (1.0, 4.0):
            c = codec.Constellation(m=m, energy=s)
            a = detection.srm_mary_error(c)
            b = detection.srm_mary_error_direct(c)
            assert abs(a.p_error - b.p_error) < 1e-8
            assert a.method == "srm_dft" and b.method == "srm_gram_sqrt"


def test_srm_error_bounded_by_uniform_guess():
    for m in (4, 16, 64):
        for s in (0.5, 2.0, 10.0):
            b = detection.srm_mary_error(codec.Constellation(m=m, energy=s))
            assert 0.0 <= b.p_error <= 1.0 - 1.0 / (2 * m) + 1e-12


def test_homodyne_sample_moments():
    rng = np.random.default_rng(7)
    x = detection.homodyne_sample(1.5 * np.exp(1j * 0.4), 0.4, rng, size=200_000)
    # mean estimator sd = 0.5/sqrt(n), variance estimator sd ~ var*sqrt(2/n)
    assert abs(x.mean() - 1.5) < 3 * 0.5 / math.sqrt(200_000)
    assert abs(x.var() - 0.25) < 3 * 0.25 * math.sqrt(2 / 200_000)


def test_homodyne_axis_projects_the_mean():
    rng = np.random.default_rng(8)
    x = detection.homodyne_sample(2.0 + 0j, math.pi / 2, rng, size=100_000)
    assert abs(x.mean()) < 3 * 0.5 / math.sqrt(100_000)


def test_heterodyne_sample_moments():
    rng = np.random.default_rng(9)
    z = detection.heterodyne_sample(1.0 + 2.0j, rng, size=200_000)
    n = 200_000
    sd = math.sqrt(0.5)
    assert abs(z.real.mean() - 1.0) < 3 * sd / math.sqrt(n)
    assert abs(z.imag.mean() - 2.0) < 3 * sd / math.sqrt(n)
    assert abs(z.real.var() - 0.5) < 3 * 0.5 * math.sqrt(2 / n)
    assert abs(z.imag.var() - 0.5) < 3 * 0.5 * math.sqrt(2 / n)


def test_antipodal_homodyne_error_closed_form():
    npt.assert_allclose(detection.antipodal_homodyne_error(4.0),
                        3.167124183311986e-05, rtol=1e-12)
    assert detection.antipodal_homodyne_error(0.0) == 0.5
    with pytest.raises(ValueError):
        detection.antipodal_homodyne_error(-1.0)


def test_antipodal_homodyne_error_matches_monte_carlo():
    rng = np.random.default_rng(11)
    s, n = 2.0, 400_000
    amp = math.sqrt(s)
    bits = rng.integers(0, 2, size=n)
    means = np.where(bits == 1, -amp, amp)
    x = means + rng.normal(0.0, 0.5, size=n)
    # decide bit 1 when the quadrature is negative
    decided = (x < 0).astype(int)
    p_hat = float(np.mean(decided != bits))
    p = detection.antipodal_homodyne_error(s)
    assert abs(p_hat - p) < 3 * math.sqrt(p * (1 - p) / n)


def radial_phase_density(phi: float, s: float) -> float:
    """Independent oracle: integrate the circular Gaussian over the radius."""
    def f(r: float) -> float:
        return r / math.pi * math.exp(-(r * r - 2 * r * math.sqrt(s) * math.cos(phi) + s))
    val, _ = integrate.quad(f, 0.0, np.inf, limit=200)
    return val


@pytest.mark.parametrize("s", [0.5, 4.0, 25.0])
def test_phase_density_matches_radial_quadrature(s):
    for phi in np.linspace(-math.pi, math.pi, 17):
        npt.assert_allclose(detection.phase_density(float(phi), s),
                            radial_phase_density(float(phi), s), atol=1e-12)


def test_phase_density_normalizes():
    for s in (0.0, 1.0, 9.0):
        total, _ = integrate.quad(detection.phase_density, -math.pi, math.pi,
                                  args=(s,), limit=200)
        npt.assert_allclose(total, 1.0, atol=1e-12)


def test_phase_density_vacuum_is_uniform():
    npt.assert_allclose(detection.phase_density(1.234, 0.0), 1 / (2 * math.pi),
                        rtol=1e-12)


def test_nearest_phase_index_hits_grid_points():
    c = codec.Constellation(m=8, energy=4.0, phase_offset=0.2)
    for j in range(16):
        z = np.exp(1j * c.phase(j))
        assert detection.nearest_phase_index(complex(z), c) == j
        # small rotations inside the wedge must not change the decision
        assert detection.nearest_phase_index(complex(z * np.exp(0.4j * math.pi / 8)), c) == j


def test_nearest_phase_index_decision_offset_shifts_wedges():
    c = codec.Constellation(m=8, energy=4.0)
    z = complex(np.exp(1j * c.phase(3)))
    # rotating the receiver grid by a full wedge moves the decision down one
    assert detection.nearest_phase_index(z, c, decision_offset=math.pi / 8) == 2


def test_heterodyne_transition_rows_are_circulant_distributions():
    c = codec.Constellation(m=8, energy=2.0)
    t = detection.heterodyne_index_transition(c)
    n = c.n_states
    npt.assert_allclose(t.sum(axis=1), np.ones(n), atol=1e-9)
    assert np.all(t >= 0)
    for sent in range(n):
        for m in range(n):
            npt.assert_allclose(t[sent, m], t[0, (m - sent) % n], rtol=1e-12)


def test_heterodyne_transition_vacuum_is_uniform():
    c = codec.Constellation(m=4, energy=0.0)
    npt.assert_allclose(detection.heterodyne_index_transition(c),
                        np.full((8, 8), 1 / 8), atol=1e-15)


def test_heterodyne_transition_matches_monte_carlo():
    c = codec.Constellation(m=4, energy=2.0)
    t = detection.heterodyne_index_transition(c)
    rng = np.random.default_rng(23)
    n = 200_000
    sent = 3
    z = detection.heterodyne_sample(c.amplitude(sent), rng, size=n)
    decided = detection.nearest_phase_index(z, c)
    counts = np.bincount(decided, minlength=c.n_states)
    for m in range(c.n_states):
        p = t[sent, m]
        if p * n >= 25:
            assert abs(counts[m] / n - p) < 4 * math.sqrt(p * (1 - p) / n)
    assert 0.5 * np.abs(counts / n - t[sent]).sum() < 0.02


def test_heterodyne_transition_decision_offset_biases_neighbors():
    c = codec.Constellation(m=4, energy=4.0)
    t = detection.heterodyne_index_transition(c, decision_offset=0.3 * math.pi / 4)
    # a receiver grid rotated toward the next index must leak probability there
    assert t[0, 7] > t[0, 1]
    npt.assert_allclose(t.sum(axis=1), np.ones(c.n_states), atol=1e-9)


def test_receiver_model_reproducible_and_validated():
    a = detection.ReceiverModel("homodyne", axis=0.1, noise_seed=5)
    b = detection.ReceiverModel("homodyne", axis=0.1, noise_seed=5)
    xs = [a.sample(1 + 1j) for _ in range(10)]
    ys = [b.sample(1 + 1j) for _ in range(10)]
    assert xs == ys
    h = detection.ReceiverModel("heterodyne", noise_seed=5)
    assert isinstance(h.sample(1 + 1j), complex)
    with pytest.raises(ValueError):
        detection.ReceiverModel("dyne")


def test_exponent_fit_recovers_exact_decay():
    s = np.array([1.0, 2.0, 3.0, 4.0, 5.0])
    pts = np.column_stack([s, 0.4 * np.exp(-3.0 * s)])
    fit = detection.exponent_fit(pts)
    npt.assert_allclose(fit.slope, -3.0, atol=1e-9)
    npt.assert_allclose(fit.intercept, math.log(0.4), atol=1e-9)
    npt.assert_allclose(fit.r_squared, 1.0, atol=1e-12)


def test_exponent_fit_input_validation():
    good = [(1.0, 0.1), (2.0, 0.05), (3.0, 0.02), (4.0, 0.01)]
    detection.exponent_fit(good)
    with pytest.raises(ValueError):
        detection.exponent_fit(good[:3])
    with pytest.raises(ValueError):
        detection.exponent_fit(good[:3] + [(4.0, 0.0)])
    with pytest.raises(ValueError):
        detection.exponent_fit(good[:3] + [(4.0, 0.5)])
