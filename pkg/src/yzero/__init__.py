"""Desk-scale simulator and analysis toolkit for the coherent-state stream cipher.

The package splits into four layers: truncated Fock-space numerics
(:mod:`yzero.fockspace`), the keyed phase-constellation coding layer
(:mod:`yzero.codec`), receiver error bounds (:mod:`yzero.detection`), and
eavesdropper replays with exact information accounting
(:mod:`yzero.attacks`).  Configured runs are driven by :mod:`yzero.runner`
and the ``yzero`` command.
"""

from __future__ import annotations

__version__ = "0.1.0"

from .attacks import (
    AttackRecord,
    AttackScenario,
    Dsr,
    EntropyReport,
    KeygenPoint,
    binary_entropy,
    brute_force_candidates,
    ciphertext_only_entropy,
    keygen_advantage,
    known_plaintext_key_entropy,
    label_mutual_information,
    measure_labels,
    otp_stage_attack,
)
from .codec import (
    Constellation,
    Keystream,
    PRIMITIVE_POLYS,
    SymbolRecord,
    bit_ensembles,
    encode,
    encode_sequence,
    halfplane_label,
    keystream_next,
    keystream_table,
)
from .detection import (
    BinaryBound,
    ExponentFit,
    MaryBound,
    ReceiverModel,
    antipodal_homodyne_error,
    bit_bound,
    exponent_fit,
    helstrom_mixed,
    helstrom_pure,
    heterodyne_index_transition,
    heterodyne_sample,
    homodyne_sample,
    nearest_phase_index,
    phase_density,
    srm_mary_error,
    srm_mary_error_direct,
    updown_bound,
)
from .errors import ConfigError, RegimeCapError
from .fockspace import (
    ComplexAmplitude,
    DensityMatrix,
    FockVector,
    coherent_fock,
    coherent_overlap,
    density_from_ensemble,
    hermitian_eig,
    trace_norm,
    truncation_dim,
)
from .scenario import RunManifest, ScenarioConfig, load_config

__all__ = [
    "AttackRecord", "AttackScenario", "BinaryBound", "ComplexAmplitude",
    "ConfigError", "Constellation", "DensityMatrix", "Dsr", "EntropyReport",
    "ExponentFit", "FockVector", "KeygenPoint", "Keystream", "MaryBound",
    "PRIMITIVE_POLYS", "ReceiverModel", "RegimeCapError", "RunManifest",
    "ScenarioConfig",
    "SymbolRecord", "antipodal_homodyne_error", "binary_entropy", "bit_bound",
    "bit_ensembles", "brute_force_candidates", "ciphertext_only_entropy",
    "coherent_fock", "coherent_overlap", "density_from_ensemble", "encode",
    "encode_sequence", "exponent_fit", "halfplane_label", "helstrom_mixed",
    "helstrom_pure", "hermitian_eig", "heterodyne_index_transition",
    "heterodyne_sample", "homodyne_sample", "keygen_advantage",
    "keystream_next", "keystream_table", "known_plaintext_key_entropy",
    "label_mutual_information", "load_config", "measure_labels",
    "nearest_phase_index", "otp_stage_attack", "phase_density",
    "srm_mary_error", "srm_mary_error_direct", "trace_norm", "truncation_dim",
    "updown_bound",
]
