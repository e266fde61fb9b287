"""Quantum and semiclassical receiver bounds for phase-shift constellations.

Three layers of analysis, from strongest observer to weakest:

* Helstrom bounds: the minimum achievable error probability of any quantum
  measurement distinguishing two states (pure closed form, or mixed via the
  trace norm of the weighted difference).
* Square-root measurement: the pretty-good measurement for the full set of
  2M symmetric states, evaluated exactly through the circulant structure of
  the Gram matrix.
* Explicit receivers: homodyne and heterodyne samplers plus the phase
  decision statistics an intercepting receiver actually faces.

Large constellations at high energy are handled on the span of the states
themselves (a Gram-matrix factorization) whenever that span is smaller than
the truncated photon-number basis, so nothing here requires the full basis.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate, special

from .codec import Constellation, bit_ensembles, encode
from .fockspace import (
    ComplexAmplitude,
    DensityMatrix,
    TAIL_TOL,
    _as_complex,
    coherent_fock,
    coherent_overlap,
    density_from_ensemble,
    trace_norm,
    truncation_dim,
)

# Eigenvalues of a Gram matrix are clipped at zero below this magnitude;
# anything more negative indicates a genuinely broken input.  The circulant
# (DFT) eigenvalues are held to a tighter floor since they are analytic.
GRAM_EIG_FLOOR = -1e-8
SRM_EIG_FLOOR = -1e-10

# Row sums of a numerically integrated decision matrix must land this close
# to one before renormalization.
TRANSITION_ROW_TOL = 1e-9


@dataclass(frozen=True)
class BinaryBound:
    """Error probability of an optimal binary discrimination."""

    p_error: float
    method: str
    priors: "tuple[float, float]" = (0.5, 0.5)
    dim_used: "int | None" = None
    deficit: float = 0.0


@dataclass(frozen=True)
class MaryBound:
    """Error probability of a measurement resolving all constellation states."""

    p_error: float
    n_states: int
    method: str = "srm_dft"


@dataclass(frozen=True)
class ExponentFit:
    """Least-squares fit of ln(p_error) = slope * s + intercept."""

    slope: float
    intercept: float
    r_squared: float


def _check_priors(p0: float) -> "tuple[float, float]":
    if not 0.0 <= p0 <= 1.0:
        raise ValueError("prior p0 must lie in [0, 1]")
    return (p0, 1.0 - p0)


def helstrom_pure(a0: "ComplexAmplitude | complex", a1: "ComplexAmplitude | complex",
                  p0: float = 0.5) -> BinaryBound:
    """Minimum error probability between two pure coherent states.

    Closed form (1 - sqrt(1 - 4 p0 p1 |<a0|a1>|^2)) / 2; no truncation.
    """
    priors = _check_priors(p0)
    kappa2 = abs(coherent_overlap(a0, a1)) ** 2
    arg = 1.0 - 4.0 * priors[0] * priors[1] * kappa2
    pe = 0.5 * (1.0 - math.sqrt(max(arg, 0.0)))
    return BinaryBound(p_error=pe, method="helstrom_pure", priors=priors)


def helstrom_mixed(rho0: DensityMatrix, rho1: DensityMatrix, p0: float = 0.5) -> BinaryBound:
    """Minimum error probability between two density matrices.

    Evaluates (1 - ||p1 rho1 - p0 rho0||_1) / 2 on the common truncated basis.
    """
    priors = _check_priors(p0)
    rho0.validate()
    rho1.validate()
    if rho0.dim != rho1.dim:
        raise ValueError("density matrices must share one truncated dimension")
    tn = trace_norm(priors[1] * rho1.entries - priors[0] * rho0.entries)
    pe = 0.5 * (1.0 - tn)
    return BinaryBound(p_error=pe, method="helstrom_mixed", priors=priors,
                       dim_used=rho0.dim, deficit=max(rho0.deficit, rho1.deficit))


def _gram_matrix(amps: np.ndarray) -> np.ndarray:
    """Pairwise coherent overlaps <a_i|a_j> from amplitudes, in closed form."""
    z = np.asarray(amps, dtype=np.complex128)
    half = 0.5 * np.abs(z) ** 2
    return np.exp(-half[:, None] - half[None, :] + np.conj(z)[:, None] * z[None, :])


def _gram_sqrt(gram: np.ndarray) -> np.ndarray:
    """Positive square root of a (numerically) PSD Gram matrix."""
    g, u = np.linalg.eigh(0.5 * (gram + gram.conj().T))
    if float(g[0]) < GRAM_EIG_FLOOR:
        raise ValueError(f"Gram matrix has eigenvalue {g[0]} far below zero")
    g = np.clip(g, 0.0, None)
    return (u * np.sqrt(g)) @ u.conj().T


def _gram_trace_norm(amps: np.ndarray, weights: np.ndarray) -> float:
    """Trace norm of sum_i w_i |a_i><a_i| evaluated on the span of the states.

    The nonzero spectrum of the weighted sum equals that of
    G^{1/2} diag(w) G^{1/2}, so the cost scales with the number of states
    rather than the photon-number dimension.
    """
    gh = _gram_sqrt(_gram_matrix(amps))
    h = gh @ (np.asarray(weights, dtype=float)[:, None] * gh)
    w = np.linalg.eigvalsh(0.5 * (h + h.conj().T))
    return float(np.sum(np.abs(w)))


def _resolve_method(c: Constellation, method: str) -> str:
    if method not in ("auto", "fock", "gram"):
        raise ValueError("method must be one of 'auto', 'fock', 'gram'")
    if method != "auto":
        return method
    return "gram" if c.n_states < truncation_dim(c.energy) else "fock"


def bit_bound(c: Constellation, p0: float = 0.5, method: str = "auto",
              tol: float = TAIL_TOL) -> BinaryBound:
    """Helstrom bound on reading the data bit without the keystream.

    The two hypotheses are the whole-constellation mixtures carrying bit 0
    and bit 1.  With scrambling active the mixtures coincide and the bound
    sits at exactly 1/2.
    """
    priors = _check_priors(p0)
    resolved = _resolve_method(c, method)
    if resolved == "fock":
        rho0, rho1, _ = bit_ensembles(c, p0=p0, tol=tol)
        bound = helstrom_mixed(rho0, rho1, p0=p0)
        return BinaryBound(p_error=bound.p_error, method="bit_" + resolved,
                           priors=priors, dim_used=bound.dim_used, deficit=bound.deficit)
    weights = np.zeros(c.n_states)
    scrambles = (0, 1) if c.osk else (0,)
    share = 1.0 / (c.m * len(scrambles))
    for basis in range(c.m):
        for s in scrambles:
            weights[encode(1, basis, s, c).index] += priors[1] * share
            weights[encode(0, basis, s, c).index] -= priors[0] * share
    tn = _gram_trace_norm(c.amplitudes(), weights)
    return BinaryBound(p_error=0.5 * (1.0 - tn), method="bit_" + resolved,
                       priors=priors, dim_used=c.n_states, deficit=0.0)


def updown_bound(c: Constellation, method: str = "auto", tol: float = TAIL_TOL) -> BinaryBound:
    """Helstrom bound on the half-plane label of a keyed transmission.

    Hypotheses: the uniform mixture of all states whose label is 1 versus
    the uniform mixture of those labeled 0, equal priors.  This is the
    per-symbol quantity an eavesdropper needs for a label-record attack,
    which only exists against the fixed (non-scrambling) pairing.
    """
    if c.osk:
        raise ValueError("the half-plane bound applies to non-scrambling constellations")
    labels = np.array([c.label(j) for j in range(c.n_states)])
    if labels.sum() * 2 != c.n_states:
        raise AssertionError("half-plane labels failed to split the constellation")
    resolved = _resolve_method(c, method)
    if resolved == "gram":
        weights = np.where(labels == 1, 1.0, -1.0) / c.n_states
        tn = _gram_trace_norm(c.amplitudes(), weights)
        return BinaryBound(p_error=0.5 * (1.0 - tn), method="updown_" + resolved,
                           dim_used=c.n_states, deficit=0.0)
    dim = truncation_dim(c.energy, tol)
    states = [coherent_fock(c.amplitude(j), dim) for j in range(c.n_states)]
    up = density_from_ensemble(states, (labels == 1) / labels.sum())
    down = density_from_ensemble(states, (labels == 0) / (c.n_states - labels.sum()))
    tn = trace_norm(0.5 * (up.entries - down.entries))
    return BinaryBound(p_error=0.5 * (1.0 - tn), method="updown_" + resolved,
                       dim_used=dim, deficit=max(up.deficit, down.deficit))


def srm_mary_error(c: Constellation) -> MaryBound:
    """Square-root-measurement error for resolving all 2M states.

    The Gram matrix of a phase-symmetric set is circulant, so its
    eigenvalues are the discrete Fourier transform of the first row
    g_k = exp(-S + S e^{i pi k / M}), and the success probability is
    |mean(sqrt(lambda))|^2.
    """
    n = c.n_states
    k = np.arange(n)
    row = np.exp(-c.energy + c.energy * np.exp(1j * math.pi * k / c.m))
    lam = np.fft.fft(row).real
    if float(lam.min()) < SRM_EIG_FLOOR:
        raise AssertionError("circulant Gram eigenvalues came out negative")
    lam = np.clip(lam, 0.0, None)
    p_success = float(np.mean(np.sqrt(lam))) ** 2
    return MaryBound(p_error=1.0 - p_success, n_states=n, method="srm_dft")


def srm_mary_error_direct(c: Constellation) -> MaryBound:
    """Square-root-measurement error via the explicit Gram square root.

    Success probability (1/n) sum_i (G^{1/2})_{ii}^2.  Slower than the DFT
    route; kept as an independent implementation for cross-validation.
    """
    gh = _gram_sqrt(_gram_matrix(c.amplitudes()))
    diag = np.real(np.diag(gh))
    p_success = float(np.mean(diag**2))
    return MaryBound(p_error=1.0 - p_success, n_states=c.n_states, method="srm_gram_sqrt")


# ---------------------------------------------------------------------------
# Explicit receivers


@dataclass
class ReceiverModel:
    """A seeded physical receiver: homodyne along an axis, or heterodyne.

    Wraps the sampling functions with an owned random stream so repeated
    measurement campaigns are reproducible from (kind, axis, noise_seed).
    """

    kind: str
    axis: float = 0.0
    noise_seed: int = 0

    def __post_init__(self) -> None:
        if self.kind not in ("homodyne", "heterodyne"):
            raise ValueError("kind must be 'homodyne' or 'heterodyne'")
        self._rng = np.random.default_rng(self.noise_seed)

    def sample(self, a: "ComplexAmplitude | complex",
               size: "int | None" = None) -> "float | complex | np.ndarray":
        if self.kind == "homodyne":
            return homodyne_sample(a, self.axis, self._rng, size)
        return heterodyne_sample(a, self._rng, size)


def homodyne_sample(a: "ComplexAmplitude | complex", axis: float,
                    rng: np.random.Generator,
                    size: "int | None" = None) -> "float | np.ndarray":
    """Homodyne quadrature outcomes along ``axis``: N(Re(a e^{-i axis}), sd 1/2)."""
    mean = float(np.real(_as_complex(a) * np.exp(-1j * axis)))
    out = rng.normal(mean, 0.5, size)
    return out if size is not None else float(out)


def heterodyne_sample(a: "ComplexAmplitude | complex", rng: np.random.Generator,
                      size: "int | None" = None) -> "complex | np.ndarray":
    """Heterodyne outcomes: the amplitude plus circular Gaussian noise.

    Both quadratures are resolved at once, at the price of variance 1/2 in
    each (double the homodyne figure).
    """
    sd = math.sqrt(0.5)
    z = _as_complex(a)
    re = rng.normal(z.real, sd, size)
    im = rng.normal(z.imag, sd, size)
    out = re + 1j * im
    return out if size is not None else complex(out)


def antipodal_homodyne_error(energy: float) -> float:
    """Exact bit-error probability of homodyne detection of +/- sqrt(S).

    Phi(-2 sqrt(S)) with the sd-1/2 quadrature convention; decays like
    exp(-2S), the square root of the Helstrom exponent.
    """
    if energy < 0:
        raise ValueError("energy must be nonnegative")
    return float(special.ndtr(-2.0 * math.sqrt(energy)))


def nearest_phase_index(z: "complex | np.ndarray", c: Constellation,
                        decision_offset: float = 0.0) -> "int | np.ndarray":
    """Index of the constellation phase nearest to the argument of z.

    ``decision_offset`` rotates the receiver's reference grid relative to
    the transmitter's, modeling a misaligned phase reference.
    """
    rel = np.angle(np.asarray(z, dtype=np.complex128)) - c.phase_offset - decision_offset
    idx = np.round(rel / (math.pi / c.m)).astype(int) % c.n_states
    return idx if isinstance(z, np.ndarray) else int(idx)


def phase_density(phi: "float | np.ndarray", energy: float) -> "float | np.ndarray":
    """Density of the heterodyne phase error for an on-axis coherent state.

    For mean photon number S the angle of sqrt(S) + circular Gaussian noise
    (variance 1/2 per quadrature) has the closed form

        p(phi) = e^{-S}/(2 pi)
               + sqrt(S/pi) cos(phi) e^{-S sin^2 phi} Phi(sqrt(2S) cos(phi)).
    """
    if energy < 0:
        raise ValueError("energy must be nonnegative")
    f = np.asarray(phi, dtype=float)
    s = energy
    cos = np.cos(f)
    out = (math.exp(-s) / (2.0 * math.pi)
           + math.sqrt(s / math.pi) * cos * np.exp(-s * np.sin(f) ** 2)
           * special.ndtr(math.sqrt(2.0 * s) * cos))
    return out if isinstance(phi, np.ndarray) else float(out)


def heterodyne_index_transition(c: Constellation, decision_offset: float = 0.0) -> np.ndarray:
    """Transition matrix T[sent, decided] of a nearest-phase heterodyne receiver.

    Entry (t, m) is the probability that a heterodyne measurement of state t,
    decided by the nearest point of a grid rotated by ``decision_offset``,
    lands on index m.  The matrix is circulant; each distinct wedge integral
    of the phase-error density is evaluated once.
    """
    if c.energy == 0.0:
        return np.full((c.n_states, c.n_states), 1.0 / c.n_states)
    n = c.n_states
    half = math.pi / (2 * c.m)
    q = np.empty(n)
    for d in range(n):
        # the density is 2 pi periodic, so the wedge may be integrated in place
        center = math.pi * d / c.m + decision_offset
        val, _ = integrate.quad(phase_density, center - half, center + half,
                                args=(c.energy,), limit=200)
        q[d] = val
    total = float(q.sum())
    if abs(total - 1.0) > TRANSITION_ROW_TOL:
        raise AssertionError(f"wedge integrals sum to {total}, expected 1")
    q /= total
    t = np.empty((n, n))
    for sent in range(n):
        t[sent] = np.roll(q, sent)
    return t


def exponent_fit(points: "np.ndarray | list[tuple[float, float]]") -> ExponentFit:
    """Fit ln(p_error) = slope * s + intercept over (s, p_error) pairs.

    Requires at least four points with p_error strictly inside (0, 0.5);
    zeros have no logarithm and values at or above one half carry no decay
    information.
    """
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2 or pts.shape[1] != 2 or pts.shape[0] < 4:
        raise ValueError("need at least four (s, p_error) points")
    s, p = pts[:, 0], pts[:, 1]
    if np.any(p <= 0.0) or np.any(p >= 0.5):
        raise ValueError("every p_error must lie strictly in (0, 0.5)")
    y = np.log(p)
    slope, intercept = np.polyfit(s, y, 1)
    resid = y - (slope * s + intercept)
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    r2 = 1.0 - float(np.sum(resid**2)) / ss_tot if ss_tot > 0 else 1.0
    return ExponentFit(slope=float(slope), intercept=float(intercept), r_squared=r2)
