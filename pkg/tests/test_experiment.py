"""Monte Carlo bench: trial statistics, the count-ratio estimator, RNG streams."""

import io
from fractions import Fraction

import numpy as np
import pytest

from symclone.experiment import (
    CountsTable,
    ExperimentConfig,
    _event_terms,
    apply_infidelity,
    coincidence_probabilities,
    estimate_probabilities,
    randomize_ancilla,
    replicate_table,
    run_cloning_experiment,
    write_counts_csv,
)
from symclone.hilbert import PureState, basis_four, basis_logical, inner


def _haar(rng, d):
    return PureState.normalized(rng.standard_normal(d) + 1j * rng.standard_normal(d))


def _counts_table(counts: dict) -> CountsTable:
    labels = " / ".join(f"s{i}" for i in range(len(counts)))
    return CountsTable(
        input_label="s0",
        basis_label=labels,
        phi_index=0,
        counts=counts,
        config=ExperimentConfig(shots=max(1, sum(counts.values()))),
    )


# ------------------------------------------------------------------ config


def test_config_validation():
    with pytest.raises(ValueError):
        ExperimentConfig(shots=0)
    with pytest.raises(ValueError):
        ExperimentConfig(shots=10, v=1.5)
    with pytest.raises(ValueError):
        ExperimentConfig(shots=10, prep_fidelity=-0.1)
    with pytest.raises(ValueError):
        ExperimentConfig(shots=10, ancilla_weights=(0.5, 0.4))  # sums to 0.9


def test_config_round_trip():
    cfg = ExperimentConfig(
        shots=5000, v=0.9, ancilla_weights=(0.4, 0.2, 0.2, 0.2),
        prep_fidelity=0.95, analysis_fidelity=0.9, seed=123,
    )
    assert ExperimentConfig.from_dict(cfg.to_dict()) == cfg


def test_weights_dimension_check():
    cfg = ExperimentConfig(shots=10, ancilla_weights=(0.5, 0.5))
    with pytest.raises(ValueError):
        cfg.weights_for(4)


# -------------------------------------------------------- ancilla sampling


def test_uniform_ancilla_draws_are_uniform():
    rng = np.random.default_rng(0)
    cfg = ExperimentConfig(shots=1)
    basis = basis_logical()
    freq = np.zeros(4)
    n = 40_000
    for _ in range(n):
        state = randomize_ancilla(rng, cfg, basis)
        freq[basis.index_of(state)] += 1
    assert np.max(np.abs(freq / n - 0.25)) < 0.01  # ~4.6 sigma for n=40k


def test_weighted_ancilla_matches_weights():
    rng = np.random.default_rng(1)
    cfg = ExperimentConfig(shots=1, ancilla_weights=(0.4, 0.2, 0.2, 0.2))
    basis = basis_logical()
    freq = np.zeros(4)
    n = 40_000
    for _ in range(n):
        freq[basis.index_of(randomize_ancilla(rng, cfg, basis))] += 1
    assert np.max(np.abs(freq / n - np.array([0.4, 0.2, 0.2, 0.2]))) < 0.012


def test_degenerate_weights_always_give_first_state():
    rng = np.random.default_rng(2)
    cfg = ExperimentConfig(shots=1, ancilla_weights=(1.0, 0.0, 0.0, 0.0))
    basis = basis_logical()
    for _ in range(50):
        assert randomize_ancilla(rng, cfg, basis).amps[0] == pytest.approx(1.0)


# ----------------------------------------------------------- state errors


def test_apply_infidelity_passthrough():
    rng = np.random.default_rng(3)
    phi = basis_logical().states[0]
    assert apply_infidelity(phi, 1.0, rng) is phi


def test_apply_infidelity_mean_overlap():
    rng = np.random.default_rng(4)
    phi = basis_four().states[0]
    n = 20_000
    overlaps = [abs(inner(phi, apply_infidelity(phi, 0.9, rng))) ** 2 for _ in range(n)]
    assert np.mean(overlaps) == pytest.approx(0.9, abs=0.01)


def test_apply_infidelity_fully_randomized_is_orthogonal():
    # the error branch draws from the orthogonal complement, so at f=0 the
    # channel's mean overlap with the target is 0
    rng = np.random.default_rng(5)
    phi = basis_logical().states[2]
    overlaps = [abs(inner(phi, apply_infidelity(phi, 0.0, rng))) ** 2 for _ in range(500)]
    assert max(overlaps) < 1e-24


# ----------------------------------------------- closed forms vs the engine


def test_trial_terms_agree_with_fock_engine():
    rng = np.random.default_rng(6)
    for _ in range(8):
        d = int(rng.choice([2, 3, 4]))
        v = float(rng.uniform(0, 1))
        s, n, f = _haar(rng, d), _haar(rng, d), _haar(rng, d)
        outs = [_haar(rng, d) for _ in range(d)]
        p_coal_e, p_split_e, p_fil_e, q_e = coincidence_probabilities(s, n, v, f, outs)
        G = np.stack([o.amps for o in outs])
        p_coal_c, p_fil_c, q_c = _event_terms(s.amps, n.amps, v, f.amps, G)
        x = (v * abs(np.vdot(s.amps, n.amps))) ** 2
        assert p_coal_e == pytest.approx(p_coal_c, abs=1e-12)
        assert p_split_e == pytest.approx(0.5, abs=1e-12)
        assert p_fil_e == pytest.approx(p_fil_c, abs=1e-12)
        # engine weights live on the normalized pair state
        assert np.max(np.abs(q_e - q_c / (2 * (1 + x)))) < 1e-12


# ------------------------------------------------------------------- runs


def test_ideal_run_matches_clone_diagonal():
    basis = basis_logical()
    cfg = ExperimentConfig(shots=100_000, seed=7)
    table = run_cloning_experiment(basis.states[0], basis, cfg)
    assert sum(table.counts.values()) == cfg.shots
    res = estimate_probabilities(table, 0)
    assert abs(res.fidelity - 0.7) < 3 * res.stderr
    # off-input outcomes are each near 0.1
    for i in (1, 2, 3):
        assert res.probs[i] == pytest.approx(0.1, abs=0.005)


def test_same_seed_reproduces_counts_exactly():
    basis = basis_logical()
    cfg = ExperimentConfig(shots=3000, v=0.93, prep_fidelity=0.95, seed=11)
    a = run_cloning_experiment(basis.states[1], basis, cfg)
    b = run_cloning_experiment(basis.states[1], basis, cfg)
    assert a.counts == b.counts


def test_distinguishable_photons_lose_the_interference_boost():
    # with v = 0 the matched-ancilla branch loses its factor-2 coalescence
    # enhancement: count ratio drops to 2:1 and the estimator reads
    # (2 + 3) / (2 + 2*3) = 0.625 for d = 4
    basis = basis_logical()
    cfg = ExperimentConfig(shots=60_000, v=0.0, seed=13)
    res = estimate_probabilities(run_cloning_experiment(basis.states[0], basis, cfg), 0)
    assert abs(res.fidelity - 0.625) < 3 * res.stderr


def test_matched_ancilla_always_clones_perfectly():
    basis = basis_logical()
    cfg = ExperimentConfig(shots=4000, ancilla_weights=(1.0, 0.0, 0.0, 0.0), seed=17)
    res = estimate_probabilities(run_cloning_experiment(basis.states[0], basis, cfg), 0)
    assert res.fidelity == 1.0


def test_swapped_detectors_change_counts_not_statistics():
    basis = basis_logical()
    cfg = ExperimentConfig(
        shots=40_000, v=0.95, prep_fidelity=0.92, analysis_fidelity=0.9, seed=19
    )
    normal = run_cloning_experiment(basis.states[0], basis, cfg)
    swapped = run_cloning_experiment(basis.states[0], basis, cfg, swap_detectors=True)
    assert normal.counts != swapped.counts
    r_n = estimate_probabilities(normal, 0)
    r_s = estimate_probabilities(swapped, 0)
    sigma = np.hypot(r_n.stderr, r_s.stderr)
    assert abs(r_n.fidelity - r_s.fidelity) < 3 * sigma


def test_fidelity_is_monotone_in_v_and_prep():
    basis = basis_logical()
    fid_v = []
    for v in (0.0, 0.5, 1.0):
        cfg = ExperimentConfig(shots=30_000, v=v, seed=5)
        fid_v.append(estimate_probabilities(run_cloning_experiment(basis.states[0], basis, cfg), 0).fidelity)
    # expectation gaps are ~0.04, far above the ~0.001 Monte Carlo error
    assert fid_v[0] < fid_v[1] < fid_v[2]
    fid_p = []
    for prep in (0.7, 1.0):
        cfg = ExperimentConfig(shots=30_000, prep_fidelity=prep, seed=5)
        fid_p.append(estimate_probabilities(run_cloning_experiment(basis.states[0], basis, cfg), 0).fidelity)
    assert fid_p[0] < fid_p[1]


def test_run_requires_phi_in_basis():
    basis = basis_logical()
    cfg = ExperimentConfig(shots=100)
    with pytest.raises(ValueError):
        run_cloning_experiment(basis_four().states[0], basis, cfg)


# --------------------------------------------------------------- estimator


def test_estimator_on_clone_ratio_counts():
    res = estimate_probabilities(_counts_table({0: 4, 1: 1, 2: 1, 3: 1}), 0)
    assert np.allclose(res.probs, [0.7, 0.1, 0.1, 0.1], atol=1e-15)
    assert res.fidelity == pytest.approx(0.7, abs=1e-15)


def test_estimator_single_matched_count():
    res = estimate_probabilities(_counts_table({0: 1, 1: 0, 2: 0, 3: 0}), 0)
    assert res.fidelity == 1.0


def test_estimator_single_orthogonal_count():
    # one orthogonal-pair coincidence means exactly one clone matched
    res = estimate_probabilities(_counts_table({0: 0, 1: 1, 2: 0, 3: 0}), 0)
    assert res.fidelity == pytest.approx(0.5, abs=1e-15)


def test_estimator_probabilities_sum_to_one_exactly():
    # exact in the defining rational arithmetic; the float image only
    # carries the final rounding of each division
    rng = np.random.default_rng(23)
    for _ in range(20):
        counts = {i: int(rng.integers(0, 50)) for i in range(4)}
        if sum(counts.values()) == 0:
            counts[0] = 1
        k = counts[0]
        s = sum(counts.values()) - k
        norm = k + 2 * s
        total = Fraction(k + s, norm) + sum(Fraction(counts[i], norm) for i in (1, 2, 3))
        assert total == 1
        res = estimate_probabilities(_counts_table(counts), 0)
        assert float(res.probs.sum()) == pytest.approx(1.0, abs=1e-15)


def test_estimator_rejects_empty_counts():
    with pytest.raises(ValueError):
        estimate_probabilities(_counts_table({0: 0, 1: 0, 2: 0, 3: 0}), 0)


def test_estimator_stderr_shrinks_with_counts():
    small = estimate_probabilities(_counts_table({0: 40, 1: 10, 2: 10, 3: 10}), 0)
    large = estimate_probabilities(_counts_table({0: 4000, 1: 1000, 2: 1000, 3: 1000}), 0)
    assert large.stderr < small.stderr / 5


# ------------------------------------------------------------ whole tables


def test_replicate_table_ideal_basis_one():
    table = replicate_table("I", ExperimentConfig(shots=20_000, seed=42))
    assert table.input_labels == ("R,+2", "R,-2", "L,+2", "L,-2")
    for res in table.results:
        assert abs(res.fidelity - 0.7) < 3 * res.stderr
    assert table.average == pytest.approx(0.7, abs=0.01)
    assert "average" in str(table)


def test_replicate_table_unknown_basis():
    with pytest.raises(ValueError):
        replicate_table("II", ExperimentConfig(shots=100))


def test_counts_csv_format():
    table = replicate_table("I", ExperimentConfig(shots=200, seed=1))
    buf = io.StringIO()
    write_counts_csv(table.tables, buf)
    lines = buf.getvalue().splitlines()
    assert lines[0] == "input,outcome,count"
    assert len(lines) == 1 + 16  # four inputs x four outcomes
    # labels contain commas, so fields must be quoted
    assert lines[1].startswith('"R,+2","R,+2",')
