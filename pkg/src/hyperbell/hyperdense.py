"""Six-bit hyperdense coding on a shared hyperentangled pair.

The sender applies one Pauli per DOF to photon A and ships it; the receiver
runs the complete analyzer and reads two bits per DOF off the label change.

Bit layout: ``bits = 16*op_P + 4*op_F + op_S`` with I=00, X=01, Y=10, Z=11.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .analyzer import hbsa_complete
from .kerr import KerrConfig
from .state import (
    DOF,
    SOURCE_LABEL,
    BellIndex,
    HyperBellLabel,
    Photon,
    PureState,
    apply_single,
    build_hyper_bell,
)

_X = np.array([[0, 1], [1, 0]], dtype=np.complex128)
_Z = np.array([[1, 0], [0, -1]], dtype=np.complex128)
# Y realised as the plate pair Z.X; the factor -1j only removes a global phase,
# giving the usual Y with X.Z = -1j * Y.
_Y = -1j * (_Z @ _X)


class PauliOp(enum.IntEnum):
    I = 0
    X = 1
    Y = 2
    Z = 3

    @property
    def matrix(self) -> np.ndarray:
        return _PAULI_MATRICES[self]

    @property
    def bell_flip(self) -> int:
        """XOR mask this Pauli (on one photon) applies to a BellIndex code."""
        return _BELL_FLIP[self]


_PAULI_MATRICES = {
    PauliOp.I: np.eye(2, dtype=np.complex128),
    PauliOp.X: _X,
    PauliOp.Y: _Y,
    PauliOp.Z: _Z,
}
for _m in _PAULI_MATRICES.values():
    _m.setflags(write=False)

# X flips parity (phi <-> psi), Z flips the sign, Y does both
_BELL_FLIP = {PauliOp.I: 0, PauliOp.X: 2, PauliOp.Y: 3, PauliOp.Z: 1}
_OP_FOR_FLIP = {v: k for k, v in _BELL_FLIP.items()}

CAPACITY_BITS = int(math.log2(64))


@dataclass(frozen=True)
class CodeWord:
    p: PauliOp
    f: PauliOp
    s: PauliOp

    def __post_init__(self):
        for name in ("p", "f", "s"):
            object.__setattr__(self, name, PauliOp(getattr(self, name)))

    @property
    def ops(self) -> tuple[PauliOp, PauliOp, PauliOp]:
        return (self.p, self.f, self.s)

    @property
    def bits(self) -> int:
        return int(self.p) * 16 + int(self.f) * 4 + int(self.s)

    @classmethod
    def from_bits(cls, bits: int) -> "CodeWord":
        _check_bits(bits)
        return cls(PauliOp(bits >> 4), PauliOp((bits >> 2) & 3), PauliOp(bits & 3))

    def __str__(self):
        return f"({self.p.name},{self.f.name},{self.s.name})"


def _check_bits(bits) -> None:
    if isinstance(bits, bool) or not isinstance(bits, (int, np.integer)) or not 0 <= bits <= 63:
        raise ValueError(f"message must be an integer in [0, 63], got {bits!r}")


def apply_pauli(state: PureState, photon: Photon, dof: DOF, op: PauliOp) -> PureState:
    op = PauliOp(op)
    if op is PauliOp.I:
        return state
    return apply_single(state, photon, dof, op.matrix)


def encode(bits: int, shared: PureState | None = None) -> PureState:
    """Apply the codeword for ``bits`` to photon A of ``shared`` (default: the source state)."""
    word = CodeWord.from_bits(bits)
    state = build_hyper_bell(SOURCE_LABEL) if shared is None else shared
    for dof, op in zip(DOF, word.ops):
        state = apply_pauli(state, Photon.A, dof, op)
    return state


def expected_label(bits: int, reference: HyperBellLabel = SOURCE_LABEL) -> HyperBellLabel:
    """Label that ``encode(bits)`` should produce, from the Pauli/Bell XOR rule."""
    word = CodeWord.from_bits(bits)
    return HyperBellLabel(
        *(BellIndex(int(reference[dof]) ^ op.bell_flip) for dof, op in zip(DOF, word.ops))
    )


def label_to_bits(label: HyperBellLabel, reference: HyperBellLabel = SOURCE_LABEL) -> int:
    ops = [_OP_FOR_FLIP[int(label[dof]) ^ int(reference[dof])] for dof in DOF]
    return CodeWord(*ops).bits


def decode(
    state: PureState,
    reference: HyperBellLabel = SOURCE_LABEL,
    cfg: KerrConfig | None = None,
    rng: np.random.Generator | None = None,
) -> int:
    cfg = cfg or KerrConfig()
    record = hbsa_complete(state, cfg, rng)
    return label_to_bits(record.label, reference)
