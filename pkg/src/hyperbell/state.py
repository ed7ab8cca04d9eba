"""Pure states of a photon pair carrying three binary degrees of freedom.

Each photon (A, B) has a polarization qubit (H/V), a first longitudinal
momentum qubit (l/r) and a second longitudinal momentum qubit (I/E), so a
two-photon state is a vector of 64 complex amplitudes.

Basis ordering: a ket is the bit string (pol_A, pol_B, f_A, f_B, s_A, s_B)
with H, l, I -> 0 and V, r, E -> 1, pol_A being the most significant bit.
Ket ``0b000000`` is ``HHllII`` and ket ``0b011001`` is ``HVrlIE``.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, NamedTuple

import numpy as np

N_QUBITS = 6
DIM = 2**N_QUBITS
NORM_TOL = 1e-12
UNITARY_TOL = 1e-12
FORMAT_VERSION = 1

_SQRT1_2 = 1 / math.sqrt(2)


class DOF(enum.IntEnum):
    POLARIZATION = 0
    FIRST_MOMENTUM = 1
    SECOND_MOMENTUM = 2

    @property
    def modes(self) -> str:
        """The two mode symbols of this DOF, logical 0 first."""
        return _MODES[self]

    @property
    def short(self) -> str:
        return "PFS"[self]


_MODES = ("HV", "lr", "IE")


class Photon(enum.IntEnum):
    A = 0
    B = 1


def qubit_axis(photon: Photon, dof: DOF) -> int:
    """Tensor axis of one (photon, DOF) qubit in the (2,)*6 amplitude array."""
    return 2 * int(dof) + int(photon)


@dataclass(frozen=True)
class ModeLabel:
    dof: DOF
    value: str

    def __post_init__(self):
        if self.value not in DOF(self.dof).modes:
            raise ValueError(f"mode {self.value!r} is not legal for {DOF(self.dof).name}")

    @property
    def bit(self) -> int:
        return DOF(self.dof).modes.index(self.value)


class BasisKet(NamedTuple):
    """One of the 64 product kets, as six mode symbols."""

    pol_a: str
    pol_b: str
    f_a: str
    f_b: str
    s_a: str
    s_b: str

    @property
    def index(self) -> int:
        idx = 0
        for pos, sym in enumerate(self):
            idx = (idx << 1) | _MODES[pos // 2].index(sym)
        return idx

    @property
    def label(self) -> str:
        return "".join(self)

    @classmethod
    def from_index(cls, index: int) -> "BasisKet":
        if not 0 <= index < DIM:
            raise ValueError(f"ket index {index} outside [0, {DIM})")
        syms = []
        for pos in range(N_QUBITS):
            bit = (index >> (N_QUBITS - 1 - pos)) & 1
            syms.append(_MODES[pos // 2][bit])
        return cls(*syms)

    @classmethod
    def from_label(cls, label: str) -> "BasisKet":
        if len(label) != N_QUBITS:
            raise ValueError(f"ket label must have {N_QUBITS} characters, got {label!r}")
        for pos, sym in enumerate(label):
            if sym not in _MODES[pos // 2]:
                raise ValueError(f"bad mode symbol {sym!r} at position {pos} of {label!r}")
        return cls(*label)


@lru_cache(maxsize=None)
def ket_bits() -> np.ndarray:
    """(64, 6) int array: the mode bit of every qubit for every ket, read-only."""
    idx = np.arange(DIM)
    bits = (idx[:, None] >> (N_QUBITS - 1 - np.arange(N_QUBITS))[None, :]) & 1
    bits.setflags(write=False)
    return bits


class BellIndex(enum.IntEnum):
    """Two-bit code: high bit is parity (0 even/phi, 1 odd/psi), low bit is the relative sign."""

    PHI_PLUS = 0
    PHI_MINUS = 1
    PSI_PLUS = 2
    PSI_MINUS = 3

    @property
    def symbol(self) -> str:
        return ("Φ+", "Φ-", "Ψ+", "Ψ-")[self]

    @property
    def ascii(self) -> str:
        return ("phi+", "phi-", "psi+", "psi-")[self]

    @property
    def is_even(self) -> bool:
        return self < 2

    @classmethod
    def parse(cls, text: str) -> "BellIndex":
        t = text.strip()
        for b in cls:
            if t in (b.symbol, b.ascii, b.name):
                return b
        raise ValueError(f"unknown Bell index {text!r}")


@dataclass(frozen=True, order=True)
class HyperBellLabel:
    """A product of one Bell state per DOF; packs into 6 bits as p*16 + f*4 + s."""

    p: BellIndex
    f: BellIndex
    s: BellIndex

    def __post_init__(self):
        for name in ("p", "f", "s"):
            object.__setattr__(self, name, BellIndex(getattr(self, name)))

    def __getitem__(self, dof: DOF) -> BellIndex:
        return (self.p, self.f, self.s)[dof]

    def to_int(self) -> int:
        return int(self.p) * 16 + int(self.f) * 4 + int(self.s)

    @classmethod
    def from_int(cls, value: int) -> "HyperBellLabel":
        if not 0 <= value < 64:
            raise ValueError(f"hyper-Bell code {value} outside [0, 64)")
        return cls(BellIndex(value >> 4), BellIndex((value >> 2) & 3), BellIndex(value & 3))

    @classmethod
    def from_dofs(cls, by_dof: dict) -> "HyperBellLabel":
        return cls(by_dof[DOF.POLARIZATION], by_dof[DOF.FIRST_MOMENTUM], by_dof[DOF.SECOND_MOMENTUM])

    @classmethod
    def parse(cls, text: str) -> "HyperBellLabel":
        parts = text.replace(",", " ").split()
        if len(parts) != 3:
            raise ValueError(f"expected three Bell indices, got {text!r}")
        return cls(*(BellIndex.parse(x) for x in parts))

    @property
    def ascii(self) -> str:
        return f"{self.p.ascii},{self.f.ascii},{self.s.ascii}"

    def __str__(self) -> str:
        return f"{self.p.symbol}_P {self.f.symbol}_F {self.s.symbol}_S"


def all_labels() -> Iterator[HyperBellLabel]:
    """All 64 labels in code order."""
    return (HyperBellLabel.from_int(i) for i in range(64))


# the state prepared by the six-qubit source
SOURCE_LABEL = HyperBellLabel(BellIndex.PHI_PLUS, BellIndex.PSI_PLUS, BellIndex.PHI_PLUS)


class PureState:
    """Immutable normalized 64-amplitude state vector."""

    __slots__ = ("_amps",)

    def __init__(self, amplitudes, *, normalize: bool = False, tol: float = 1e-10):
        amps = np.array(amplitudes, dtype=np.complex128).reshape(-1)
        if amps.shape != (DIM,):
            raise ValueError(f"expected {DIM} amplitudes, got {amps.size}")
        norm2 = float(np.vdot(amps, amps).real)
        if normalize:
            if norm2 == 0.0:
                raise ValueError("cannot normalize the zero vector")
            amps = amps / math.sqrt(norm2)
        elif abs(norm2 - 1.0) > tol:
            raise ValueError(f"state is not normalized (norm^2 = {norm2!r})")
        amps.setflags(write=False)
        self._amps = amps

    @property
    def amplitudes(self) -> np.ndarray:
        return self._amps

    @property
    def tensor(self) -> np.ndarray:
        return self._amps.reshape((2,) * N_QUBITS)

    def norm2(self) -> float:
        return float(np.vdot(self._amps, self._amps).real)

    def amplitude(self, ket: str | BasisKet) -> complex:
        if isinstance(ket, str):
            ket = BasisKet.from_label(ket)
        return complex(self._amps[ket.index])

    def nonzero(self, atol: float = 0.0) -> dict[str, complex]:
        return {
            BasisKet.from_index(i).label: complex(a)
            for i, a in enumerate(self._amps)
            if abs(a) > atol
        }

    @classmethod
    def basis(cls, ket: str | int) -> "PureState":
        idx = BasisKet.from_label(ket).index if isinstance(ket, str) else int(ket)
        amps = np.zeros(DIM, dtype=np.complex128)
        amps[idx] = 1.0
        return cls(amps)

    @classmethod
    def from_kets(cls, terms: dict[str, complex], *, normalize: bool = True) -> "PureState":
        """Build a state from ``{"HHlrII": amp, ...}``."""
        amps = np.zeros(DIM, dtype=np.complex128)
        for label, amp in terms.items():
            amps[BasisKet.from_label(label).index] += amp
        return cls(amps, normalize=normalize)

    def __eq__(self, other):
        if not isinstance(other, PureState):
            return NotImplemented
        return np.array_equal(self._amps, other._amps)

    def __hash__(self):
        return hash(self._amps.tobytes())

    def __repr__(self):
        terms = ", ".join(f"{k}: {v:.4g}" for k, v in self.nonzero(1e-12).items())
        return f"PureState({{{terms}}})"


def build_bell_factor(dof: DOF, index: BellIndex) -> np.ndarray:
    """Amplitudes of one Bell state on (A, B) kets ordered 00, 01, 10, 11.

    For FIRST_MOMENTUM that is (ll, lr, rl, rr). The DOF only fixes the mode
    names; every DOF uses the same 0/1 convention.
    """
    DOF(dof)
    index = BellIndex(index)
    sign = -1.0 if index in (BellIndex.PHI_MINUS, BellIndex.PSI_MINUS) else 1.0
    out = np.zeros(4, dtype=np.complex128)
    if index.is_even:
        out[0b00], out[0b11] = _SQRT1_2, sign * _SQRT1_2
    else:
        out[0b01], out[0b10] = _SQRT1_2, sign * _SQRT1_2
    return out


def build_hyper_bell(label: HyperBellLabel) -> PureState:
    amps = np.kron(
        np.kron(
            build_bell_factor(DOF.POLARIZATION, label.p),
            build_bell_factor(DOF.FIRST_MOMENTUM, label.f),
        ),
        build_bell_factor(DOF.SECOND_MOMENTUM, label.s),
    )
    return PureState(amps)


@lru_cache(maxsize=None)
def hyper_bell_basis() -> np.ndarray:
    """(64, 64) matrix whose column ``k`` is the hyper-Bell state with code ``k``."""
    mat = np.column_stack([build_hyper_bell(lab).amplitudes for lab in all_labels()])
    mat.setflags(write=False)
    return mat


def fidelity(a: PureState, b: PureState) -> float:
    return float(abs(np.vdot(a.amplitudes, b.amplitudes)) ** 2)


def is_unitary(u: np.ndarray, tol: float = UNITARY_TOL) -> bool:
    u = np.asarray(u)
    if u.ndim != 2 or u.shape[0] != u.shape[1]:
        return False
    return bool(np.max(np.abs(u.conj().T @ u - np.eye(u.shape[0]))) <= tol)


def _apply_axis(amps: np.ndarray, axis: int, u: np.ndarray) -> np.ndarray:
    t = amps.reshape(2**axis, 2, 2 ** (N_QUBITS - 1 - axis))
    return np.matmul(u, t).reshape(DIM)


def apply_single(state: PureState, photon: Photon, dof: DOF, u) -> PureState:
    """Act with a 2x2 unitary on one photon's qubit in one DOF."""
    u = np.asarray(u, dtype=np.complex128)
    if u.shape != (2, 2):
        raise ValueError(f"expected a 2x2 matrix, got shape {u.shape}")
    if not is_unitary(u):
        raise ValueError("matrix is not unitary within 1e-12")
    return PureState(_apply_axis(state.amplitudes, qubit_axis(Photon(photon), DOF(dof)), u))


def apply_both(state: PureState, dof: DOF, u) -> PureState:
    """The same single-qubit unitary on photons A and B in one DOF."""
    u = np.asarray(u, dtype=np.complex128)
    if u.shape != (2, 2) or not is_unitary(u):
        raise ValueError("expected a 2x2 unitary")
    return _apply_both_unchecked(state, dof, u)


def _apply_both_unchecked(state: PureState, dof: DOF, u: np.ndarray) -> PureState:
    amps = state.amplitudes
    for photon in Photon:
        amps = _apply_axis(amps, qubit_axis(photon, DOF(dof)), u)
    return PureState(amps)


def bell_components(state: PureState) -> np.ndarray:
    """Overlaps <HB_k|state> for the 64 hyper-Bell states, indexed by label code."""
    return hyper_bell_basis().conj().T @ state.amplitudes


def random_state(rng: np.random.Generator) -> PureState:
    """Haar-random pure state."""
    v = rng.normal(size=DIM) + 1j * rng.normal(size=DIM)
    return PureState(v, normalize=True)


def random_unitary(rng: np.random.Generator, n: int = 2) -> np.ndarray:
    """Haar-random n x n unitary (QR of a complex Ginibre matrix with phase fix)."""
    z = (rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))) / math.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))


# --- text serialization ---------------------------------------------------

_HEADER = f"hyperbell-state v{FORMAT_VERSION}"


def dumps_state(state: PureState) -> str:
    """One ``<ket> <re>,<im>`` line per nonzero amplitude after a version header."""
    lines = [_HEADER]
    for i, a in enumerate(state.amplitudes):
        if a != 0:
            lines.append(f"{BasisKet.from_index(i).label} {a.real:.17g},{a.imag:.17g}")
    return "\n".join(lines) + "\n"


def loads_state(text: str) -> PureState:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines or lines[0] != _HEADER:
        raise ValueError(f"missing or unsupported header (expected {_HEADER!r})")
    amps = np.zeros(DIM, dtype=np.complex128)
    for ln in lines[1:]:
        try:
            ket, value = ln.split()
            re, im = value.split(",")
            amps[BasisKet.from_label(ket).index] = complex(float(re), float(im))
        except ValueError as exc:
            raise ValueError(f"malformed state line {ln!r}") from exc
    return PureState(amps)
