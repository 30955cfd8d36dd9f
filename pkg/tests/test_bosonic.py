"""Second-quantized engine: beam splitter algebra, post-selection, HOM."""

import math

import numpy as np
import pytest

from symclone.bosonic import (
    DistinguishabilityModel,
    FockState,
    ModeIndex,
    add_photon,
    beam_splitter,
    coalescence_enhancement,
    hom_curve,
    identical_photons,
    postselect_same_port,
    reduced_single_photon,
    single_photon,
)
from symclone.hilbert import PureState, basis_four, basis_logical, basis_state

RT2 = 1 / np.sqrt(2)


def _pair(level_s: int, level_a: int, d: int = 4) -> FockState:
    state = single_photon(0, basis_state(d, level_s))
    return add_photon(state, 1, basis_state(d, level_a))


# ------------------------------------------------------------- FockState


def test_mode_index_flattening():
    assert ModeIndex(port=1, level=2).flat(dim=4) == 6


def test_fock_state_rejects_mixed_photon_number():
    with pytest.raises(ValueError):
        FockState(1, 2, {(1, 0): RT2, (1, 1): RT2})


def test_fock_state_rejects_unnormalized():
    with pytest.raises(ValueError):
        FockState(1, 2, {(1, 0): 0.5})


def test_empty_state_marker():
    empty = FockState(2, 2, {})
    assert empty.is_empty and empty.n_photons == 0


def test_debug_dump_is_sorted_and_round_shaped():
    state = single_photon(0, PureState.normalized([1.0, 1j]))
    dump = state.to_dict()
    assert dump["ports"] == 2 and dump["dim"] == 2
    occs = [tuple(t["occ"]) for t in dump["terms"]]
    assert occs == sorted(occs)


# ---------------------------------------------------------- single_photon


def test_single_photon_basis_state():
    state = single_photon(0, basis_state(4, 0))
    assert state.amplitude((1, 0, 0, 0, 0, 0, 0, 0)) == pytest.approx(1.0)
    assert state.norm() == pytest.approx(1.0, abs=1e-12)


def test_single_photon_superposition():
    psi = PureState.normalized([1.0, 1.0])
    state = single_photon(0, psi, ports=1)
    assert state.amplitude((1, 0)) == pytest.approx(RT2)
    assert state.amplitude((0, 1)) == pytest.approx(RT2)


def test_single_photon_bad_port():
    with pytest.raises(ValueError):
        single_photon(2, basis_state(2, 0), ports=2)


def test_add_photon_dimension_mismatch():
    state = FockState.vacuum(2, 4)
    with pytest.raises(ValueError):
        add_photon(state, 0, basis_state(2, 0))


# ---------------------------------------------------------- beam splitter


def test_beam_splitter_single_photon_amplitudes():
    state = beam_splitter(single_photon(0, basis_state(2, 0)), 0, 1)
    assert state.amplitude((1, 0, 0, 0)) == pytest.approx(RT2, abs=1e-15)
    assert state.amplitude((0, 0, 1, 0)) == pytest.approx(1j * RT2, abs=1e-15)


def test_hom_identical_photons_cancel_coincidences():
    # (a + ib)(ia + b)/2 = i(a^2 + b^2)/2: the ab terms cancel and the
    # bunched kets |2> pick up the sqrt(2!) ladder factor -> i/sqrt2 each.
    out = beam_splitter(_pair(0, 0, d=2), 0, 1)
    assert out.amplitude((1, 0, 1, 0)) == pytest.approx(0.0, abs=1e-15)
    assert out.amplitude((2, 0, 0, 0)) == pytest.approx(1j * RT2, abs=1e-15)
    assert out.amplitude((0, 0, 2, 0)) == pytest.approx(1j * RT2, abs=1e-15)


def test_orthogonal_photons_keep_half_coincidence():
    # (a0 + ib0)(ia1 + b1)/2: four cross terms, each weight 1/4.
    out = beam_splitter(_pair(0, 1, d=2), 0, 1)
    assert out.amplitude((1, 1, 0, 0)) == pytest.approx(0.5j, abs=1e-15)
    assert out.amplitude((0, 0, 1, 1)) == pytest.approx(0.5j, abs=1e-15)
    assert out.amplitude((1, 0, 0, 1)) == pytest.approx(0.5, abs=1e-15)
    assert out.amplitude((0, 1, 1, 0)) == pytest.approx(-0.5, abs=1e-15)
    coincidence = abs(out.amplitude((1, 0, 0, 1))) ** 2 + abs(out.amplitude((0, 1, 1, 0))) ** 2
    assert coincidence == pytest.approx(0.5, abs=1e-12)


def test_beam_splitter_rejects_bad_ports():
    state = _pair(0, 0)
    with pytest.raises(ValueError):
        beam_splitter(state, 0, 0)
    with pytest.raises(ValueError):
        beam_splitter(state, 0, 5)


def _random_state(rng, ports, dim, n) -> FockState:
    state = FockState.vacuum(ports, dim)
    for _ in range(n):
        amps = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
        state = add_photon(state, int(rng.integers(ports)), PureState.normalized(amps))
    return state


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5, 6])
def test_beam_splitter_unitary_on_random_states(n):
    rng = np.random.default_rng(n)
    state = _random_state(rng, 2, 3, n)
    out = beam_splitter(state, 0, 1)
    assert out.norm() == pytest.approx(1.0, abs=1e-12)
    assert out.n_photons == n


def test_double_pass_is_i_swap():
    # BS^2 maps each creation operator to i x (the swapped port's one), so
    # an n-photon state returns port-swapped with global phase i^n.
    rng = np.random.default_rng(3)
    for n in (1, 2, 3):
        state = _random_state(rng, 2, 2, n)
        twice = beam_splitter(beam_splitter(state, 0, 1), 0, 1)
        d = state.dim
        for occ, amp in state.terms.items():
            swapped = tuple(occ[d:]) + tuple(occ[:d])
            assert twice.amplitude(swapped) == pytest.approx((1j) ** n * amp, abs=1e-12)


# ---------------------------------------------------------- post-selection


def test_postselect_identical_pair():
    out = beam_splitter(_pair(0, 0), 0, 1)
    p0, cond = postselect_same_port(out, 0)
    p1, _ = postselect_same_port(out, 1)
    assert p0 == pytest.approx(0.5, abs=1e-12)
    assert p1 == pytest.approx(0.5, abs=1e-12)
    assert cond.norm() == pytest.approx(1.0, abs=1e-12)


def test_postselect_orthogonal_pair():
    out = beam_splitter(_pair(0, 1), 0, 1)
    for port in (0, 1):
        p, _ = postselect_same_port(out, port)
        assert p == pytest.approx(0.25, abs=1e-12)


def test_postselect_before_splitter_is_all_or_nothing():
    state = identical_photons(0, basis_state(4, 2), 2)
    p_here, _ = postselect_same_port(state, 0)
    p_there, cond = postselect_same_port(state, 1)
    assert p_here == pytest.approx(1.0, abs=1e-12)
    assert p_there == 0.0 and cond.is_empty


@pytest.mark.parametrize("same", [True, False])
def test_postselect_probability_vs_ancilla_overlap(same):
    # per output port: 1/2 for identical inputs, 1/4 for orthogonal ones
    level_a = 0 if same else 3
    out = beam_splitter(_pair(0, level_a), 0, 1)
    p, _ = postselect_same_port(out, 0)
    assert p == pytest.approx(0.5 if same else 0.25, abs=1e-12)


# ------------------------------------------------------ reduced density op


def test_reduced_state_of_bunched_pair():
    state = identical_photons(0, basis_state(4, 1), 2)
    rho = reduced_single_photon(state, 0)
    expected = np.zeros((4, 4))
    expected[1, 1] = 1.0
    assert np.allclose(rho.mat, expected, atol=1e-12)


def test_reduced_state_of_two_distinct_levels():
    state = add_photon(single_photon(0, basis_state(4, 0)), 0, basis_state(4, 1))
    rho = reduced_single_photon(state, 0)
    assert np.allclose(rho.mat, np.diag([0.5, 0.5, 0.0, 0.0]), atol=1e-12)


def test_reduced_state_of_cloning_mixture_matches_clone_diagonal():
    # signal |0>, ancilla mixed over the basis, coalescence in port 0
    d = 4
    rho = np.zeros((d, d), dtype=complex)
    total = 0.0
    for level in range(d):
        out = beam_splitter(_pair(0, level, d=d), 0, 1)
        p0, cond = postselect_same_port(out, 0)
        p1, _ = postselect_same_port(out, 1)
        weight = (p0 + p1) / d
        rho += weight * reduced_single_photon(cond, 0).mat
        total += weight
    rho /= total
    assert np.allclose(rho, np.diag([0.7, 0.1, 0.1, 0.1]), atol=1e-12)


def test_reduced_state_requires_occupied_port():
    state = identical_photons(0, basis_state(2, 0), 2)
    with pytest.raises(ValueError):
        reduced_single_photon(state, 1)
    with pytest.raises(ValueError):
        reduced_single_photon(FockState(2, 2, {}), 0)


def test_both_split_photons_carry_the_same_reduced_state():
    # split a coalesced pair across two arms; each arm's photon has the
    # same reduced state by exchange symmetry
    rng = np.random.default_rng(8)
    psi = PureState.normalized(rng.standard_normal(4) + 1j * rng.standard_normal(4))
    anc = PureState.normalized(rng.standard_normal(4) + 1j * rng.standard_normal(4))
    state = FockState.vacuum(3, 4)
    state = add_photon(add_photon(state, 0, psi), 1, anc)
    state = beam_splitter(state, 0, 1)
    _, cond = postselect_same_port(state, 0)
    split = beam_splitter(cond, 0, 2)
    coincidence = {
        occ: amp
        for occ, amp in split.terms.items()
        if sum(occ[0:4]) == 1 and sum(occ[8:12]) == 1
    }
    norm = math.sqrt(sum(abs(a) ** 2 for a in coincidence.values()))
    pair = FockState(3, 4, {k: v / norm for k, v in coincidence.items()})
    rho_a = reduced_single_photon(pair, 0)
    rho_b = reduced_single_photon(pair, 2)
    assert np.allclose(rho_a.mat, rho_b.mat, atol=1e-12)


# ------------------------------------------------- distinguishability model


def test_model_validation():
    with pytest.raises(ValueError):
        DistinguishabilityModel(v=1.2)
    with pytest.raises(ValueError):
        DistinguishabilityModel(v=1.0, wavelength=795e-9)  # bandwidth missing


def test_coherence_time_for_bench_spectrum():
    model = DistinguishabilityModel.from_spectrum(795.0, 4.5)
    # FWHM 4.5 nm at 795 nm -> Gaussian coherence time ~0.25 ps
    assert model.coherence_time == pytest.approx(2.483e-13, rel=1e-3)


def test_v_of_delay_invariants():
    model = DistinguishabilityModel.from_spectrum(795.0, 4.5)
    taus = np.linspace(0.0, 2e-12, 40)
    vals = [model.v_of_delay(t) for t in taus]
    assert vals[0] == pytest.approx(1.0, abs=1e-15)
    assert all(a >= b - 1e-15 for a, b in zip(vals, vals[1:]))  # nonincreasing
    assert model.v_of_delay(-5e-13) == pytest.approx(model.v_of_delay(5e-13), abs=1e-15)


# --------------------------------------------------- coalescence enhancement


def test_enhancement_of_identical_photons():
    psi = basis_logical().states[3]
    r = coalescence_enhancement(psi, psi, DistinguishabilityModel(v=1.0))
    assert r == pytest.approx(2.0, abs=1e-12)


def test_enhancement_at_partial_overlap():
    psi = basis_four().states[0]
    r = coalescence_enhancement(psi, psi, DistinguishabilityModel(v=0.9165))
    assert r == pytest.approx(1.84, abs=0.005)


def test_enhancement_of_orthogonal_photons():
    b = basis_logical()
    r = coalescence_enhancement(b.states[0], b.states[1], DistinguishabilityModel(v=0.7))
    assert r == pytest.approx(1.0, abs=1e-12)


def test_enhancement_matches_overlap_law():
    # R = 1 + v^2 |<a|s>|^2, checked against the engine on random states
    rng = np.random.default_rng(21)
    for _ in range(6):
        d = int(rng.choice([2, 3, 4]))
        s = PureState.normalized(rng.standard_normal(d) + 1j * rng.standard_normal(d))
        a = PureState.normalized(rng.standard_normal(d) + 1j * rng.standard_normal(d))
        v = float(rng.uniform(0, 1))
        r = coalescence_enhancement(s, a, DistinguishabilityModel(v=v))
        expected = 1.0 + (v * abs(np.vdot(a.amps, s.amps))) ** 2
        assert r == pytest.approx(expected, abs=1e-12)


def test_enhancement_depends_only_on_total_overlap():
    # a pair of single-particle entangled states interferes exactly like a
    # separable pair with the same total overlap
    c = np.cos(0.7)
    s = np.sin(0.7)
    ent = basis_four()
    sep = basis_logical()
    ent_partner = PureState(4, c * ent.states[0].amps + s * ent.states[1].amps)
    sep_partner = PureState(4, c * sep.states[0].amps + s * sep.states[1].amps)
    model = DistinguishabilityModel(v=0.83)
    r_ent = coalescence_enhancement(ent.states[0], ent_partner, model)
    r_sep = coalescence_enhancement(sep.states[0], sep_partner, model)
    assert r_ent == pytest.approx(r_sep, abs=1e-12)


# -------------------------------------------------------------- HOM curve


def test_hom_curve_shape():
    model = DistinguishabilityModel.from_spectrum(795.0, 4.5)
    psi = basis_four().states[0]
    right = np.linspace(1.5e-13, 1.5e-12, 10)
    taus = np.concatenate([-right[::-1], [0.0], right])  # exact +-tau pairs
    curve = hom_curve(psi, psi, taus, model)
    rs = {tau: r for tau, r in curve}
    assert rs[0.0] == pytest.approx(2.0, abs=1e-12)
    assert rs[max(rs)] == pytest.approx(1.0, abs=1e-3)
    for tau, r in curve:
        assert r == pytest.approx(rs[-tau], abs=1e-12)  # even in tau
    assert max(rs.values()) == rs[0.0]
