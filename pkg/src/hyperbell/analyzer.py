"""Complete hyperentangled Bell-state analysis with six QND parity checks.

Each DOF is resolved by parity check -> Hadamard on both photons -> parity
check -> Hadamard again. The first check splits phi/psi; the Hadamard turns
the relative sign into parity so the second check splits +/-; the last
Hadamard pair restores the input.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .kerr import (
    QND_FIRST_MOMENTUM,
    QND_POLARIZATION,
    QND_SECOND_MOMENTUM,
    KerrConfig,
    PhasePattern,
    QndOutcome,
    qnd_parity_check,
)
from .state import (
    DOF,
    BellIndex,
    HyperBellLabel,
    PureState,
    _apply_both_unchecked,
    apply_both,
    bell_components,
    fidelity,
    is_unitary,
)

_S = 1 / math.sqrt(2)

# Beam splitter on l/r (and I/E): r -> (r + l)/sqrt2, l -> (r - l)/sqrt2,
# written in the (l, r) = (0, 1) basis.
BS_HADAMARD = np.array([[-_S, _S], [_S, _S]], dtype=np.complex128)
# R45 wave plate: H -> (H + V)/sqrt2, V -> (H - V)/sqrt2.
R45_HADAMARD = np.array([[_S, _S], [_S, -_S]], dtype=np.complex128)

DEFAULT_ORDER = (DOF.FIRST_MOMENTUM, DOF.SECOND_MOMENTUM, DOF.POLARIZATION)


@dataclass(frozen=True, eq=False)
class DofAnalyzerSpec:
    dof: DOF
    first_pattern: PhasePattern
    second_pattern: PhasePattern
    hadamard: np.ndarray

    def __post_init__(self):
        h = np.asarray(self.hadamard, dtype=np.complex128)
        if h.shape != (2, 2) or not is_unitary(h):
            raise ValueError("hadamard must be a 2x2 unitary")
        if np.max(np.abs(h @ h - np.eye(2))) > 1e-12:
            raise ValueError("hadamard must be self-inverse")
        for pat in (self.first_pattern, self.second_pattern):
            if pat.dof != self.dof or not np.any(pat.ket_multiples()):
                raise ValueError(f"pattern {pat.name!r} does not probe {DOF(self.dof).name}")
        object.__setattr__(self, "hadamard", h)


ANALYZERS = {
    DOF.FIRST_MOMENTUM: DofAnalyzerSpec(DOF.FIRST_MOMENTUM, QND_FIRST_MOMENTUM, QND_FIRST_MOMENTUM, BS_HADAMARD),
    DOF.SECOND_MOMENTUM: DofAnalyzerSpec(DOF.SECOND_MOMENTUM, QND_SECOND_MOMENTUM, QND_SECOND_MOMENTUM, BS_HADAMARD),
    DOF.POLARIZATION: DofAnalyzerSpec(DOF.POLARIZATION, QND_POLARIZATION, QND_POLARIZATION, R45_HADAMARD),
}

# QND numbering: 1/2 first momentum, 3/4 second momentum, 5/6 polarization
QND_SLOTS = {DOF.FIRST_MOMENTUM: 0, DOF.SECOND_MOMENTUM: 2, DOF.POLARIZATION: 4}


def hadamard_dof(state: PureState, dof: DOF) -> PureState:
    return apply_both(state, dof, ANALYZERS[DOF(dof)].hadamard)


def decode_outcomes(first: QndOutcome, second: QndOutcome) -> BellIndex:
    return BellIndex((0 if first.is_even else 2) + (0 if second.is_even else 1))


def analyze_dof(
    state: PureState,
    spec: DofAnalyzerSpec,
    cfg: KerrConfig,
    rng: np.random.Generator | None = None,
) -> tuple[BellIndex, tuple[QndOutcome, QndOutcome], PureState]:
    if rng is None:
        rng = cfg.make_rng()
    o1, state = qnd_parity_check(state, spec.first_pattern, cfg, rng)
    state = _apply_both_unchecked(state, spec.dof, spec.hadamard)
    o2, state = qnd_parity_check(state, spec.second_pattern, cfg, rng)
    state = _apply_both_unchecked(state, spec.dof, spec.hadamard)
    return decode_outcomes(o1, o2), (o1, o2), state


@dataclass(frozen=True)
class AnalysisRecord:
    outcomes: tuple[QndOutcome, ...]  # QND1..QND6
    label: HyperBellLabel
    fidelity: float
    output_state: PureState = field(repr=False, compare=False)

    def pair(self, dof: DOF) -> tuple[QndOutcome, QndOutcome]:
        i = QND_SLOTS[DOF(dof)]
        return self.outcomes[i], self.outcomes[i + 1]

    def to_dict(self) -> dict:
        return {
            "label": self.label.ascii,
            "code": self.label.to_int(),
            "qnd": [o.magnitude_class for o in self.outcomes],
            "fidelity": self.fidelity,
        }


def hbsa_complete(
    state: PureState,
    cfg: KerrConfig,
    rng: np.random.Generator | None = None,
    order: Sequence[DOF] = DEFAULT_ORDER,
) -> AnalysisRecord:
    """Run the three DOF analyzers in ``order`` (default F, S, P)."""
    if sorted(DOF(d) for d in order) != sorted(DOF):
        raise ValueError("order must be a permutation of the three DOFs")
    if rng is None:
        rng = cfg.make_rng()
    current = state
    outcomes: list[QndOutcome | None] = [None] * 6
    found = {}
    for dof in order:
        dof = DOF(dof)
        idx, (o1, o2), current = analyze_dof(current, ANALYZERS[dof], cfg, rng)
        found[dof] = idx
        slot = QND_SLOTS[dof]
        outcomes[slot], outcomes[slot + 1] = o1, o2
    return AnalysisRecord(
        outcomes=tuple(outcomes),
        label=HyperBellLabel.from_dofs(found),
        fidelity=fidelity(state, current),
        output_state=current,
    )


def oracle_classify(state: PureState, tol: float = 1e-9) -> HyperBellLabel | None:
    """Brute-force label by overlap with all 64 hyper-Bell states.

    Returns ``None`` when no hyper-Bell state has fidelity above ``1 - tol``.
    """
    fids = np.abs(bell_components(state)) ** 2
    best = int(np.argmax(fids))
    if fids[best] > 1 - tol:
        return HyperBellLabel.from_int(best)
    return None
