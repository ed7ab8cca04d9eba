"""Cross-Kerr QND gadgets and the homodyne readout model.

A signal photon crossing a Kerr medium of strength ``k*theta`` shifts a
coherent probe ``|alpha>`` to ``|alpha e^{i k theta}>``. Since the probe only
ever picks up integer multiples of ``theta`` here, the probe is tracked as one
integer per basis ket (:class:`ProbeRegister`); ``theta`` itself is reporting
metadata.

The X-quadrature readout resolves the magnitude of the shift but not its sign,
so it is modelled as a projective measurement onto the classes
``|multiple| in {0, 1, 2}``. Relative amplitudes inside the observed class are
kept exactly.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Mapping

import numpy as np

from .state import DIM, DOF, ModeLabel, Photon, PureState, ket_bits, qubit_axis

_CLASS_TEXT = {0: "0", 1: "±θ", 2: "±2θ"}


@dataclass(frozen=True)
class KerrConfig:
    theta: float = 0.1
    homodyne_error: float = 0.0
    rng_seed: int = 0

    def __post_init__(self):
        if not self.theta > 0 or not math.isfinite(self.theta):
            raise ValueError(f"theta must be a positive finite angle, got {self.theta!r}")
        if not 0.0 <= self.homodyne_error < 1.0:
            raise ValueError(f"homodyne_error must lie in [0, 1), got {self.homodyne_error!r}")
        if not 0 <= int(self.rng_seed) < 2**64:
            raise ValueError("rng_seed must be an unsigned 64-bit integer")

    def make_rng(self) -> np.random.Generator:
        return np.random.default_rng(int(self.rng_seed))


@dataclass(frozen=True)
class PhasePattern:
    """Kerr multiples imprinted by each photon's modes in a single DOF.

    ``shifts[photon][bit]`` is the multiple of theta picked up when ``photon``
    occupies mode ``bit`` of ``dof``. Modes of other DOFs imprint nothing.
    """

    dof: DOF
    shifts: tuple[tuple[int, int], tuple[int, int]]
    name: str = field(default="", compare=False)

    def __post_init__(self):
        object.__setattr__(self, "dof", DOF(self.dof))
        sh = tuple(tuple(int(x) for x in row) for row in self.shifts)
        if len(sh) != 2 or any(len(row) != 2 for row in sh):
            raise ValueError("shifts must be a 2x2 table indexed [photon][mode bit]")
        if any(x not in (-1, 0, 1) for row in sh for x in row):
            raise ValueError("Kerr multiples must be -1, 0 or +1")
        object.__setattr__(self, "shifts", sh)

    @classmethod
    def from_mapping(cls, mapping: Mapping[tuple[Photon, ModeLabel], int], name: str = "") -> "PhasePattern":
        """Build from ``{(photon, ModeLabel): multiple}``; nonzero entries must share one DOF."""
        dofs = {mode.dof for (_, mode), k in mapping.items() if k}
        if len(dofs) > 1:
            raise ValueError(f"pattern touches several DOFs: {sorted(d.name for d in dofs)}")
        dof = dofs.pop() if dofs else DOF.POLARIZATION
        table = [[0, 0], [0, 0]]
        for (photon, mode), k in mapping.items():
            if k:
                table[Photon(photon)][mode.bit] = k
        return cls(dof, (tuple(table[0]), tuple(table[1])), name)

    def shift(self, photon: Photon, mode: ModeLabel) -> int:
        if mode.dof != self.dof:
            return 0
        return self.shifts[Photon(photon)][mode.bit]

    @cached_property
    def _multiples(self) -> np.ndarray:
        bits = ket_bits()
        total = np.zeros(DIM, dtype=np.int64)
        for photon in Photon:
            col = bits[:, qubit_axis(photon, self.dof)]
            total += np.asarray(self.shifts[photon])[col]
        total.setflags(write=False)
        return total

    def ket_multiples(self) -> np.ndarray:
        """Total multiple imprinted by each of the 64 basis kets (read-only)."""
        return self._multiples


# momentum gadgets: l -> -theta, r -> +theta on both photons (I/E likewise)
QND_FIRST_MOMENTUM = PhasePattern(DOF.FIRST_MOMENTUM, ((-1, 1), (-1, 1)), "QND1/QND2")
QND_SECOND_MOMENTUM = PhasePattern(DOF.SECOND_MOMENTUM, ((-1, 1), (-1, 1)), "QND3/QND4")
# polarization gadget: HH -> +theta, VV -> -theta, HV/VH -> 0
QND_POLARIZATION = PhasePattern(DOF.POLARIZATION, ((1, 0), (0, -1)), "QND5/QND6")
ZERO_PATTERN = PhasePattern(DOF.POLARIZATION, ((0, 0), (0, 0)), "identity")


@dataclass(frozen=True, eq=False)
class ProbeRegister:
    """Accumulated probe phase, in units of theta, for each basis ket."""

    multiples: np.ndarray

    def __post_init__(self):
        m = np.array(self.multiples, dtype=np.int64).reshape(-1)
        if m.shape != (DIM,):
            raise ValueError(f"expected {DIM} multiples, got {m.size}")
        m.setflags(write=False)
        object.__setattr__(self, "multiples", m)

    @classmethod
    def fresh(cls) -> "ProbeRegister":
        return cls(np.zeros(DIM, dtype=np.int64))

    def phases(self, theta: float) -> np.ndarray:
        """Probe phase in radians per ket."""
        return self.multiples * theta

    @cached_property
    def _classes(self) -> frozenset[int]:
        return frozenset(int(x) for x in np.unique(np.abs(self.multiples)))

    def classes(self) -> frozenset[int]:
        """Magnitude classes this probe can report, whatever the photon state."""
        return self._classes

    def __eq__(self, other):
        if not isinstance(other, ProbeRegister):
            return NotImplemented
        return np.array_equal(self.multiples, other.multiples)


@dataclass(frozen=True, order=True)
class QndOutcome:
    """Homodyne result: magnitude of the probe phase in units of theta."""

    magnitude_class: int

    def __post_init__(self):
        if self.magnitude_class not in (0, 1, 2):
            raise ValueError(f"magnitude class must be 0, 1 or 2, got {self.magnitude_class!r}")

    @property
    def is_even(self) -> bool:
        """A nonzero phase flags even parity in the probed DOF."""
        return self.magnitude_class != 0

    def render(self) -> str:
        return _CLASS_TEXT[self.magnitude_class]

    def __str__(self):
        return self.render()


def accumulate(probe: ProbeRegister, pattern: PhasePattern) -> ProbeRegister:
    return ProbeRegister(probe.multiples + pattern.ket_multiples())


def class_weights(probe: ProbeRegister, state: PureState) -> np.ndarray:
    """Born weight of each magnitude class 0, 1, 2."""
    p = np.abs(state.amplitudes) ** 2
    return np.bincount(np.abs(probe.multiples), weights=p, minlength=3)[:3]


def homodyne_x(
    probe: ProbeRegister,
    state: PureState,
    cfg: KerrConfig,
    rng: np.random.Generator | None = None,
) -> tuple[QndOutcome, PureState]:
    """Read the probe's phase magnitude and collapse the photons accordingly.

    ``rng`` defaults to a fresh generator seeded from ``cfg``; pass one
    explicitly to draw successive independent readouts. With
    ``cfg.homodyne_error > 0`` the *reported* class is, with that
    probability, swapped for a uniformly chosen other class among those the
    probe can carry; the collapse always follows the true class.
    """
    if rng is None:
        rng = cfg.make_rng()
    mags = np.abs(probe.multiples)
    if np.any(mags > 2):
        raise ValueError("probe phase beyond ±2θ is outside the readout model")
    p = np.abs(state.amplitudes) ** 2
    weights = np.bincount(mags, weights=p, minlength=3)[:3]
    total = float(weights.sum())
    if not total > 0:
        raise ValueError("state has zero total weight")

    u = rng.random() * total
    cum = 0.0
    true_class = None
    for c in range(3):
        if weights[c] <= 0.0:
            continue
        cum += weights[c]
        true_class = c
        if u < cum:
            break

    mask = mags == true_class
    amps = np.where(mask, state.amplitudes, 0.0)
    post = PureState(amps / math.sqrt(weights[true_class]))

    reported = true_class
    if cfg.homodyne_error > 0.0:
        others = sorted(probe.classes() - {true_class})
        if others and rng.random() < cfg.homodyne_error:
            reported = others[int(rng.integers(len(others)))]
    return QndOutcome(reported), post


def qnd_parity_check(
    state: PureState,
    pattern: PhasePattern,
    cfg: KerrConfig,
    rng: np.random.Generator | None = None,
) -> tuple[QndOutcome, PureState]:
    """One QND gadget on a fresh probe; a nonzero class means even parity."""
    return homodyne_x(accumulate(ProbeRegister.fresh(), pattern), state, cfg, rng)
