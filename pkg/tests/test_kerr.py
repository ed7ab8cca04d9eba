import itertools
import math
from types import SimpleNamespace

import numpy as np
import pytest

from hyperbell.kerr import (
    QND_FIRST_MOMENTUM,
    QND_POLARIZATION,
    QND_SECOND_MOMENTUM,
    ZERO_PATTERN,
    KerrConfig,
    PhasePattern,
    ProbeRegister,
    QndOutcome,
    accumulate,
    class_weights,
    homodyne_x,
    qnd_parity_check,
)
from hyperbell.state import (
    DOF,
    BasisKet,
    BellIndex,
    HyperBellLabel,
    ModeLabel,
    Photon,
    PureState,
    all_labels,
    build_hyper_bell,
    fidelity,
)

S = 1 / math.sqrt(2)
CFG = KerrConfig()


def kets_where(**modes):
    """Indices of kets whose named positions (pol_a, f_b, ...) match."""
    return [i for i in range(64) if all(getattr(BasisKet.from_index(i), k) == v for k, v in modes.items())]


def label(p=BellIndex.PHI_PLUS, f=BellIndex.PHI_PLUS, s=BellIndex.PHI_PLUS):
    return HyperBellLabel(p, f, s)


# --- config and types -----------------------------------------------------

@pytest.mark.parametrize("kw", [{"theta": 0}, {"theta": -0.1}, {"theta": float("inf")}, {"homodyne_error": 1.0}, {"homodyne_error": -0.1}, {"rng_seed": -1}, {"rng_seed": 2**64}])
def test_kerr_config_rejects(kw):
    with pytest.raises(ValueError):
        KerrConfig(**kw)


def test_outcome_classes_and_rendering():
    assert [QndOutcome(c).render() for c in (0, 1, 2)] == ["0", "±θ", "±2θ"]
    assert not QndOutcome(0).is_even and QndOutcome(1).is_even and QndOutcome(2).is_even
    with pytest.raises(ValueError):
        QndOutcome(3)


def test_pattern_from_mapping_and_dof_isolation():
    pat = PhasePattern.from_mapping(
        {
            (Photon.A, ModeLabel(DOF.POLARIZATION, "H")): 1,
            (Photon.B, ModeLabel(DOF.POLARIZATION, "V")): -1,
            (Photon.A, ModeLabel(DOF.FIRST_MOMENTUM, "l")): 0,
        }
    )
    assert pat == QND_POLARIZATION
    assert pat.shift(Photon.A, ModeLabel(DOF.FIRST_MOMENTUM, "l")) == 0
    assert pat.shift(Photon.B, ModeLabel(DOF.POLARIZATION, "V")) == -1
    with pytest.raises(ValueError):
        PhasePattern.from_mapping(
            {(Photon.A, ModeLabel(DOF.POLARIZATION, "H")): 1, (Photon.B, ModeLabel(DOF.SECOND_MOMENTUM, "E")): 1}
        )
    with pytest.raises(ValueError):
        PhasePattern(DOF.POLARIZATION, ((2, 0), (0, 0)))


# --- accumulate -----------------------------------------------------------

def test_accumulate_first_momentum_pattern():
    m = accumulate(ProbeRegister.fresh(), QND_FIRST_MOMENTUM).multiples
    for i in range(64):
        k = BasisKet.from_index(i)
        want = {("l", "l"): -2, ("r", "r"): 2}.get((k.f_a, k.f_b), 0)
        assert m[i] == want, k.label


def test_accumulate_zero_pattern_is_identity():
    probe = ProbeRegister(np.arange(64) % 3 - 1)
    assert accumulate(probe, ZERO_PATTERN) == probe


def test_accumulate_polarization_pattern():
    m = accumulate(ProbeRegister.fresh(), QND_POLARIZATION).multiples
    assert set(m[kets_where(pol_a="H", pol_b="H")]) == {1}
    assert set(m[kets_where(pol_a="V", pol_b="V")]) == {-1}
    assert set(m[kets_where(pol_a="H", pol_b="V")]) == {0}
    assert set(m[kets_where(pol_a="V", pol_b="H")]) == {0}


def test_accumulate_is_additive():
    p = accumulate(accumulate(ProbeRegister.fresh(), QND_SECOND_MOMENTUM), QND_POLARIZATION)
    np.testing.assert_array_equal(p.multiples, QND_SECOND_MOMENTUM.ket_multiples() + QND_POLARIZATION.ket_multiples())


def test_probe_phases_in_radians():
    p = accumulate(ProbeRegister.fresh(), QND_FIRST_MOMENTUM)
    assert p.phases(0.25)[BasisKet.from_label("HHrrII").index] == pytest.approx(0.5)
    assert p.classes() == frozenset({0, 2})


# --- homodyne readout -----------------------------------------------------

def test_phi_minus_first_momentum_gives_two_theta_class():
    probe = accumulate(ProbeRegister.fresh(), QND_FIRST_MOMENTUM)
    st = build_hyper_bell(label(BellIndex.PSI_MINUS, BellIndex.PHI_MINUS, BellIndex.PSI_PLUS))
    assert class_weights(probe, st)[2] == pytest.approx(1.0, abs=1e-15)
    out, post = homodyne_x(probe, st, CFG)
    assert out.magnitude_class == 2
    assert fidelity(post, st) == pytest.approx(1.0, abs=1e-12)


def test_psi_plus_first_momentum_gives_zero_class():
    probe = accumulate(ProbeRegister.fresh(), QND_FIRST_MOMENTUM)
    for p, s in itertools.product(BellIndex, BellIndex):
        out, _ = homodyne_x(probe, build_hyper_bell(label(p, BellIndex.PSI_PLUS, s)), CFG)
        assert out.magnitude_class == 0


def test_superposition_collapse_branches():
    st = PureState.from_kets({"HHllII": 1, "HHlrII": 1})
    probe = accumulate(ProbeRegister.fresh(), QND_FIRST_MOMENTUM)
    seen = {}
    rng = np.random.default_rng(0)
    for _ in range(50):
        out, post = homodyne_x(probe, st, CFG, rng)
        seen[out.magnitude_class] = post
    assert set(seen) == {0, 2}
    assert fidelity(seen[2], PureState.basis("HHllII")) == pytest.approx(1.0)
    assert fidelity(seen[0], PureState.basis("HHlrII")) == pytest.approx(1.0)


def test_superposition_born_frequency():
    st = PureState.from_kets({"HHllII": 1, "HHlrII": 1})
    probe = accumulate(ProbeRegister.fresh(), QND_FIRST_MOMENTUM)
    # Born oracle: direct sum of |amp|^2 over kets with |multiple| = 2
    w2 = sum(abs(st.amplitudes[i]) ** 2 for i in range(64) if abs(probe.multiples[i]) == 2)
    assert w2 == pytest.approx(0.5)
    rng = np.random.default_rng(2024)
    n = 100_000
    hits = sum(homodyne_x(probe, st, CFG, rng)[0].magnitude_class == 2 for _ in range(n))
    assert abs(hits / n - w2) <= 0.01


def test_collapse_keeps_relative_phases_inside_class():
    # ll and rr both land in the 2-theta class with opposite probe signs
    st = PureState.from_kets({"HHllII": 1, "HHrrII": 1j, "HHlrII": 2})
    probe = accumulate(ProbeRegister.fresh(), QND_FIRST_MOMENTUM)
    rng = np.random.default_rng(1)
    while True:
        out, post = homodyne_x(probe, st, CFG, rng)
        if out.magnitude_class == 2:
            break
    assert post.amplitude("HHrrII") / post.amplitude("HHllII") == pytest.approx(1j)
    assert post.amplitude("HHlrII") == 0


def test_homodyne_rejects_zero_weight():
    probe = ProbeRegister.fresh()
    with pytest.raises(ValueError):
        homodyne_x(probe, SimpleNamespace(amplitudes=np.zeros(64, complex)), CFG)


def test_same_seed_same_outcomes():
    st = PureState.from_kets({"HHllII": 1, "HHlrII": 1, "VVrrEE": 1})
    probe = accumulate(ProbeRegister.fresh(), QND_FIRST_MOMENTUM)
    cfg = KerrConfig(rng_seed=99, homodyne_error=0.2)
    r1, r2 = cfg.make_rng(), cfg.make_rng()
    a = [homodyne_x(probe, st, cfg, r1)[0] for _ in range(200)]
    b = [homodyne_x(probe, st, cfg, r2)[0] for _ in range(200)]
    assert a == b


def test_misreport_rate_and_target():
    # true class is 2 with certainty; a misreport can only name the other class the probe carries
    st = build_hyper_bell(label())
    probe = accumulate(ProbeRegister.fresh(), QND_FIRST_MOMENTUM)
    cfg = KerrConfig(homodyne_error=0.1)
    rng = np.random.default_rng(4)
    n = 20_000
    outs = [homodyne_x(probe, st, cfg, rng) for _ in range(n)]
    classes = [o.magnitude_class for o, _ in outs]
    assert set(classes) == {0, 2}
    wrong = classes.count(0) / n
    assert abs(wrong - 0.1) <= 3 * math.sqrt(0.1 * 0.9 / n)
    # misreporting never disturbs the collapse
    assert all(fidelity(post, st) > 1 - 1e-12 for _, post in outs[:200])


# --- parity check ---------------------------------------------------------

def test_parity_check_all_plus_first_momentum():
    st = build_hyper_bell(label())
    out, post = qnd_parity_check(st, QND_FIRST_MOMENTUM, CFG)
    assert out.magnitude_class == 2
    assert fidelity(post, st) == pytest.approx(1.0, abs=1e-12)


def test_parity_check_psi_minus_polarization():
    st = build_hyper_bell(label(BellIndex.PSI_MINUS, BellIndex.PSI_MINUS, BellIndex.PSI_MINUS))
    out, post = qnd_parity_check(st, QND_POLARIZATION, CFG)
    assert out.magnitude_class == 0
    assert fidelity(post, st) == pytest.approx(1.0, abs=1e-12)


@pytest.mark.parametrize("f,s", list(itertools.product(BellIndex, BellIndex)))
def test_parity_check_phi_minus_polarization_every_background(f, s):
    st = build_hyper_bell(label(BellIndex.PHI_MINUS, f, s))
    out, post = qnd_parity_check(st, QND_POLARIZATION, CFG)
    assert out.magnitude_class == 1
    assert fidelity(post, st) == pytest.approx(1.0, abs=1e-12)


@pytest.mark.parametrize(
    "pattern,dof,even_class",
    [(QND_FIRST_MOMENTUM, DOF.FIRST_MOMENTUM, 2), (QND_SECOND_MOMENTUM, DOF.SECOND_MOMENTUM, 2), (QND_POLARIZATION, DOF.POLARIZATION, 1)],
)
def test_parity_soundness_all_64(pattern, dof, even_class):
    probe = accumulate(ProbeRegister.fresh(), pattern)
    for lab in all_labels():
        st = build_hyper_bell(lab)
        w = class_weights(probe, st)
        want = even_class if lab[dof].is_even else 0
        assert w[want] == pytest.approx(1.0, abs=1e-12)
        out, post = qnd_parity_check(st, pattern, CFG)
        assert out.magnitude_class == want
        assert fidelity(post, st) >= 1 - 1e-12
