"""Nondestructive analysis of two-photon six-qubit hyperentangled Bell states."""
__version__ = "0.1.0"

from .state import (
    DOF,
    SOURCE_LABEL,
    BasisKet,
    BellIndex,
    HyperBellLabel,
    ModeLabel,
    Photon,
    PureState,
    all_labels,
    apply_single,
    build_bell_factor,
    build_hyper_bell,
    dumps_state,
    fidelity,
    loads_state,
)
from .kerr import (
    QND_FIRST_MOMENTUM,
    QND_POLARIZATION,
    QND_SECOND_MOMENTUM,
    KerrConfig,
    PhasePattern,
    ProbeRegister,
    QndOutcome,
    accumulate,
    homodyne_x,
    qnd_parity_check,
)
from .analyzer import ANALYZERS, AnalysisRecord, DofAnalyzerSpec, analyze_dof, hadamard_dof, hbsa_complete, oracle_classify
from .hyperdense import CodeWord, PauliOp, apply_pauli, decode, encode
