"""Property-based checks of the state and QND invariants."""
import numpy as np
from hypothesis import given, settings, strategies as st

from hyperbell.analyzer import ANALYZERS, hadamard_dof, hbsa_complete
from hyperbell.kerr import (
    QND_FIRST_MOMENTUM,
    QND_POLARIZATION,
    QND_SECOND_MOMENTUM,
    KerrConfig,
    ProbeRegister,
    accumulate,
    class_weights,
    qnd_parity_check,
)
from hyperbell.state import (
    DOF,
    BellIndex,
    HyperBellLabel,
    Photon,
    PureState,
    apply_single,
    build_hyper_bell,
    fidelity,
    random_state,
    random_unitary,
)

PATTERNS = {DOF.FIRST_MOMENTUM: QND_FIRST_MOMENTUM, DOF.SECOND_MOMENTUM: QND_SECOND_MOMENTUM, DOF.POLARIZATION: QND_POLARIZATION}

seeds = st.integers(min_value=0, max_value=2**32 - 1)
dofs = st.sampled_from(list(DOF))
photons = st.sampled_from(list(Photon))
labels = st.integers(0, 63).map(HyperBellLabel.from_int)


@given(seeds, photons, dofs)
def test_apply_single_preserves_norm(seed, photon, dof):
    rng = np.random.default_rng(seed)
    out = apply_single(random_state(rng), photon, dof, random_unitary(rng))
    assert abs(out.norm2() - 1) < 1e-12


@given(seeds, dofs)
def test_hadamard_involution_on_random_states(seed, dof):
    s = random_state(np.random.default_rng(seed))
    assert fidelity(hadamard_dof(hadamard_dof(s, dof), dof), s) > 1 - 1e-12


@given(seeds, dofs)
def test_parity_check_output_normalized(seed, dof):
    rng = np.random.default_rng(seed)
    _, post = qnd_parity_check(random_state(rng), PATTERNS[dof], KerrConfig(), rng)
    assert abs(post.norm2() - 1) < 1e-12


@given(seeds, dofs, dofs, photons)
def test_dof_isolation(seed, target, other, photon):
    if target == other:
        return
    rng = np.random.default_rng(seed)
    s, u = random_state(rng), random_unitary(rng)
    o1, a = qnd_parity_check(apply_single(s, photon, other, u), PATTERNS[target], KerrConfig(), np.random.default_rng(seed))
    o2, b = qnd_parity_check(s, PATTERNS[target], KerrConfig(), np.random.default_rng(seed))
    assert o1 == o2
    assert np.max(np.abs(a.amplitudes - apply_single(b, photon, other, u).amplitudes)) < 1e-12


@given(labels, dofs)
def test_sign_blindness(lab, dof):
    by = {d: lab[d] for d in DOF}
    probe = accumulate(ProbeRegister.fresh(), PATTERNS[dof])
    by[dof] = BellIndex.PHI_PLUS
    w_plus = class_weights(probe, build_hyper_bell(HyperBellLabel.from_dofs(by)))
    by[dof] = BellIndex.PHI_MINUS
    w_minus = class_weights(probe, build_hyper_bell(HyperBellLabel.from_dofs(by)))
    np.testing.assert_array_equal(w_plus, w_minus)


@given(labels, seeds)
def test_bell_inputs_nondestructive_any_seed(lab, seed):
    s = build_hyper_bell(lab)
    rec = hbsa_complete(s, KerrConfig(rng_seed=seed))
    assert rec.label == lab
    assert rec.fidelity > 1 - 1e-12


@settings(max_examples=40)
@given(seeds)
def test_random_circuit_norm(seed):
    rng = np.random.default_rng(seed)
    s = random_state(rng)
    cfg = KerrConfig()
    for _ in range(8):
        if rng.random() < 0.5:
            s = apply_single(s, Photon(rng.integers(2)), DOF(rng.integers(3)), random_unitary(rng))
        else:
            _, s = qnd_parity_check(s, PATTERNS[DOF(rng.integers(3))], cfg, rng)
        assert abs(s.norm2() - 1) < 1e-10


@given(st.lists(st.complex_numbers(max_magnitude=10, allow_nan=False, allow_infinity=False), min_size=64, max_size=64))
def test_class_weights_sum_to_one(amps):
    v = np.array(amps)
    if np.linalg.norm(v) < 1e-6:
        return
    s = PureState(v, normalize=True)
    for pat in PATTERNS.values():
        w = class_weights(accumulate(ProbeRegister.fresh(), pat), s)
        assert abs(w.sum() - 1) < 1e-12
