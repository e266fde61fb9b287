"""Coding layer of the coherent-state stream cipher.

A constellation of 2M phases on a circle carries one data bit per symbol.
A short linear-feedback shift register expands a seed into a keystream;
each symbol consumes ceil(log2 M) bits to pick a basis (an antipodal phase
pair) and, optionally, one further bit that scrambles which pair member
carries which data bit.  The transmitted index is the pair member whose
half-plane label, measured against the constellation axis, equals
data_bit XOR (basis & 1).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .fockspace import (
    ComplexAmplitude,
    DensityMatrix,
    TAIL_TOL,
    coherent_fock,
    density_from_ensemble,
    truncation_dim,
)

# Half-plane tie band: |sin(phase - axis)| at or below this counts as lying
# on the axis line, where the sign of cos decides.  Constellation points sit
# at least sin(pi/M) from the axis, orders of magnitude above the band.
TIE_EPS = 1e-12

# Primitive feedback polynomials over GF(2), degree -> bitmask including the
# x^degree term (e.g. 0x13 = x^4 + x + 1).  Each generates the full period
# 2^degree - 1; verified by direct cycle enumeration in the test suite.
PRIMITIVE_POLYS: "dict[int, int]" = {
    2: 0x7,
    3: 0xB,
    4: 0x13,
    5: 0x25,
    6: 0x43,
    7: 0x83,
    8: 0x11D,
    9: 0x211,
    10: 0x409,
    11: 0x805,
    12: 0x1053,
    13: 0x201B,
    14: 0x4443,
    15: 0x8003,
    16: 0x1002D,
    17: 0x20009,
    18: 0x40081,
    19: 0x80027,
    20: 0x100009,
}


def halfplane_label(phase: float, axis: float) -> int:
    """1 if the phase lies in the open half-plane above the axis line, else 0.

    A phase on the axis itself maps to 1, its antipode to 0, so every
    antipodal pair splits into exactly one up member and one down member.
    """
    d = phase - axis
    s = math.sin(d)
    if abs(s) > TIE_EPS:
        return 1 if s > 0.0 else 0
    return 1 if math.cos(d) > 0.0 else 0


@dataclass(frozen=True)
class Constellation:
    """2M coherent states equally spaced in phase on a circle of fixed energy.

    m: number of antipodal basis pairs, a power of two so a whole number of
       keystream bits selects the basis.
    energy: mean photon number of every state.
    phase_offset: global rotation, also the half-plane labeling axis.
    osk: when True, one extra keystream bit per symbol re-scrambles the
         bit-to-member assignment within the chosen pair.
    """

    m: int
    energy: float
    phase_offset: float = 0.0
    osk: bool = False

    def __post_init__(self) -> None:
        if self.m < 1 or (self.m & (self.m - 1)) != 0:
            raise ValueError("m must be a positive power of two")
        if not math.isfinite(self.energy) or self.energy < 0:
            raise ValueError("energy must be finite and nonnegative")
        if not math.isfinite(self.phase_offset):
            raise ValueError("phase_offset must be finite")

    @property
    def n_states(self) -> int:
        return 2 * self.m

    @property
    def bits_per_basis(self) -> int:
        return self.m.bit_length() - 1

    @property
    def bits_per_symbol(self) -> int:
        return self.bits_per_basis + (1 if self.osk else 0)

    def phase(self, index: int) -> float:
        if not 0 <= index < self.n_states:
            raise ValueError("index out of range")
        return self.phase_offset + math.pi * index / self.m

    def phases(self) -> np.ndarray:
        return self.phase_offset + math.pi * np.arange(self.n_states) / self.m

    def amplitude(self, index: int) -> ComplexAmplitude:
        return ComplexAmplitude.from_polar(math.sqrt(self.energy), self.phase(index))

    def amplitudes(self) -> np.ndarray:
        """All 2M amplitudes as a complex array."""
        return math.sqrt(self.energy) * np.exp(1j * self.phases())

    def label(self, index: int) -> int:
        """Half-plane label of a constellation point, measured on the native axis."""
        return halfplane_label(self.phase(index), self.phase_offset)


@dataclass(frozen=True)
class SymbolRecord:
    """One encoded symbol: keystream draw, data bit, and the resulting state index."""

    index: int
    basis: int
    bit: int
    parity: int
    osk_flip: int
    label: int


class Keystream:
    """Fibonacci linear-feedback shift register consumed in per-symbol chunks.

    The register holds ``degree`` bits; each step outputs the low bit and
    shifts in the parity of the tapped bits.  A symbol consumes
    ``bits_per_symbol`` successive output bits, assembled most significant
    first; with ``osk`` set the trailing bit of each chunk is split off as
    the scrambling bit.
    """

    def __init__(self, poly: int, register: int, bits_per_symbol: int,
                 osk: bool = False) -> None:
        degree = poly.bit_length() - 1
        if degree < 2:
            raise ValueError("polynomial degree must be at least 2")
        if poly & 1 == 0:
            raise ValueError("polynomial must have a constant term")
        if not 0 < register < (1 << degree):
            raise ValueError("register must be a nonzero value below 2^degree")
        if bits_per_symbol - (1 if osk else 0) < 1:
            raise ValueError("bits_per_symbol too small for the requested mode")
        self.poly = poly
        self.register = register
        self.bits_per_symbol = bits_per_symbol
        self.osk = osk
        self._degree = degree
        self._taps = poly & ((1 << degree) - 1)

    @property
    def degree(self) -> int:
        return self._degree

    @property
    def taps(self) -> int:
        return self._taps

    def copy(self) -> "Keystream":
        return Keystream(self.poly, self.register, self.bits_per_symbol, self.osk)

    def step(self) -> int:
        """Advance one clock; return the output bit."""
        out = self.register & 1
        fb = bin(self.register & self._taps).count("1") & 1
        self.register = (self.register >> 1) | (fb << (self._degree - 1))
        return out

    def to_spec(self) -> "dict[str, object]":
        return {
            "poly_bitmask_hex": format(self.poly, "#x"),
            "seed_hex": format(self.register, "#x"),
            "bits_per_symbol": self.bits_per_symbol,
        }

    @classmethod
    def from_spec(cls, spec: "dict[str, object]", osk: bool = False) -> "Keystream":
        return cls(
            int(str(spec["poly_bitmask_hex"]), 16),
            int(str(spec["seed_hex"]), 16),
            int(spec["bits_per_symbol"]),  # type: ignore[arg-type]
            osk=osk,
        )


def keystream_next(ks: Keystream) -> "tuple[int, int, int]":
    """Consume one symbol's worth of bits; return (basis, basis_parity, scramble_bit).

    The chunk is read most significant bit first.  On a scrambling keystream
    the trailing bit of the chunk is returned separately as the scramble
    bit; otherwise the scramble bit is 0.
    """
    nb = ks.bits_per_symbol - (1 if ks.osk else 0)
    k = 0
    for _ in range(nb):
        k = (k << 1) | ks.step()
    s = ks.step() if ks.osk else 0
    return k, k & 1, s


def encode(bit: int, basis: int, scramble: int, c: Constellation) -> SymbolRecord:
    """Map one data bit and one keystream draw to a constellation index.

    The effective bit is bit XOR scramble; the transmitted index is the
    member of pair {basis, basis + M} whose half-plane label equals
    effective_bit XOR (basis & 1).
    """
    if bit not in (0, 1) or scramble not in (0, 1):
        raise ValueError("bit and scramble must be 0 or 1")
    if not 0 <= basis < c.m:
        raise ValueError("basis out of range")
    if scramble and not c.osk:
        raise ValueError("scramble bit supplied to a non-scrambling constellation")
    parity = basis & 1
    want = (bit ^ scramble) ^ parity
    lo, hi = basis, basis + c.m
    if c.label(lo) == want:
        index = lo
    elif c.label(hi) == want:
        index = hi
    else:
        raise AssertionError("antipodal pair failed to split across half-planes")
    return SymbolRecord(index=index, basis=basis, bit=bit, parity=parity,
                        osk_flip=scramble, label=want)


def encode_sequence(bits: "np.ndarray | list[int]", ks: Keystream, c: Constellation) -> "list[SymbolRecord]":
    """Encode a bit sequence, consuming the keystream in order."""
    if ks.bits_per_symbol != c.bits_per_symbol or ks.osk != c.osk:
        raise ValueError("keystream chunking does not match the constellation")
    out = []
    for b in np.asarray(bits, dtype=np.uint8):
        k, _, s = keystream_next(ks)
        out.append(encode(int(b), k, s, c))
    return out


def keystream_table(poly: int, n_symbols: int, bits_per_symbol: int,
                    seeds: "np.ndarray | None" = None,
                    osk: bool = False) -> "tuple[np.ndarray, np.ndarray, np.ndarray]":
    """Keystream chunks for many seeds at once.

    Returns (basis, parity, scramble) arrays of shape (n_seeds, n_symbols),
    one row per seed.  With seeds=None every nonzero register value of the
    polynomial's degree is enumerated in increasing order.  Matches the
    scalar Keystream bit for bit.
    """
    degree = poly.bit_length() - 1
    if degree < 2 or degree > 24:
        raise ValueError("polynomial degree must lie in [2, 24] for table enumeration")
    taps = poly & ((1 << degree) - 1)
    if seeds is None:
        seeds = np.arange(1, 1 << degree, dtype=np.uint32)
    reg = np.asarray(seeds, dtype=np.uint32).copy()
    if reg.ndim != 1 or reg.size == 0:
        raise ValueError("seeds must be a nonempty 1-d array")
    if np.any(reg == 0) or np.any(reg >= (1 << degree)):
        raise ValueError("seeds must be nonzero values below 2^degree")
    nb = bits_per_symbol - (1 if osk else 0)
    if nb < 1:
        raise ValueError("bits_per_symbol too small for the requested mode")
    basis = np.zeros((reg.size, n_symbols), dtype=np.uint32)
    scram = np.zeros((reg.size, n_symbols), dtype=np.uint8)

    def step_all() -> np.ndarray:
        out = reg & 1
        fb = reg & taps
        # xor-fold the tapped bits down to parity
        for shift in (16, 8, 4, 2, 1):
            fb ^= fb >> shift
        fb &= 1
        reg[:] = (reg >> 1) | (fb << (degree - 1))
        return out.astype(np.uint32)

    for i in range(n_symbols):
        k = np.zeros(reg.size, dtype=np.uint32)
        for _ in range(nb):
            k = (k << 1) | step_all()
        basis[:, i] = k
        if osk:
            scram[:, i] = step_all().astype(np.uint8)
    parity = (basis & 1).astype(np.uint8)
    return basis, parity, scram


def bit_ensembles(c: Constellation, p0: float = 0.5,
                  tol: float = TAIL_TOL) -> "tuple[DensityMatrix, DensityMatrix, DensityMatrix]":
    """Density matrices (rho_0, rho_1, rho_total) seen by an observer without the key.

    rho_b mixes, uniformly over bases (and scramble bits when active), every
    constellation state that carries data bit b; rho_total = p0 rho_0 +
    (1 - p0) rho_1.  With scrambling on, both pair members carry each bit
    and the two ensembles coincide.
    """
    if not 0.0 <= p0 <= 1.0:
        raise ValueError("p0 must lie in [0, 1]")
    dim = truncation_dim(c.energy, tol)
    states = [coherent_fock(c.amplitude(j), dim) for j in range(c.n_states)]
    weights = {0: np.zeros(c.n_states), 1: np.zeros(c.n_states)}
    scrambles = (0, 1) if c.osk else (0,)
    for bit in (0, 1):
        for basis in range(c.m):
            for s in scrambles:
                rec = encode(bit, basis, s, c)
                weights[bit][rec.index] += 1.0
        weights[bit] /= weights[bit].sum()
    rho0 = density_from_ensemble(states, weights[0])
    rho1 = density_from_ensemble(states, weights[1])
    total = density_from_ensemble(states, p0 * weights[0] + (1.0 - p0) * weights[1])
    return rho0, rho1, total
