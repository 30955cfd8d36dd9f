"""Monte Carlo replica of the cloning bench: randomized ancilla, imperfect
preparation and analysis, coincidence counting, and the count-ratio
estimator for p(i|phi).

A single trial walks the optical path: prepare the signal (with preparation
infidelity), draw one ancilla basis state, interfere both photons on the
first balanced splitter with wavepacket overlap v, keep events where the
pair coalesces into the monitored output port, split the pair on a second
balanced splitter, keep one-photon-per-arm events, filter arm 1 on |phi>
and resolve arm 2 in the measurement basis (both with analysis
infidelity). Trials repeat until the requested number of post-selected
coincidences has been collected.

Randomness
----------
Counter-based and reproducible. Trials are processed in fixed-size batches
(``BATCH_TRIALS``); batch ``b`` of the run for input index ``i`` draws all
its variates, in a fixed documented order, from

    Generator(Philox(SeedSequence(entropy=config.seed, spawn_key=(i, b))))

so results are identical no matter how batches are distributed across
workers, and two runs with the same config are count-for-count identical.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numpy as np

from . import bosonic
from .hilbert import LabeledBasis, PureState, basis_four, basis_logical

__all__ = [
    "BATCH_TRIALS",
    "ExperimentConfig",
    "CountsTable",
    "EstimationResult",
    "FidelityTable",
    "randomize_ancilla",
    "apply_infidelity",
    "coincidence_probabilities",
    "run_cloning_experiment",
    "estimate_probabilities",
    "replicate_table",
    "write_counts_csv",
]

# Trials per RNG stream. Fixed: changing it changes which variates feed
# which trial and therefore the realization (not the statistics).
BATCH_TRIALS = 4096

# Give up if this many consecutive batches yield no coincidence at all.
_MAX_DRY_BATCHES = 2000


@dataclass(frozen=True)
class ExperimentConfig:
    """Knobs of the simulated bench.

    shots counts post-selected coincidences, not source pairs; v is the
    two-photon wavepacket overlap at the first splitter; ancilla_weights
    (None = uniform) describe imperfect randomization of the ancilla over
    the measurement basis; prep/analysis fidelities model state-level
    preparation and analyzer errors.
    """

    shots: int
    v: float = 1.0
    ancilla_weights: tuple[float, ...] | None = None
    prep_fidelity: float = 1.0
    analysis_fidelity: float = 1.0
    seed: int = 0

    def __post_init__(self):
        if self.shots < 1:
            raise ValueError(f"shots must be positive, got {self.shots}")
        if not 0.0 <= self.v <= 1.0:
            raise ValueError(f"v must lie in [0, 1], got {self.v}")
        for name in ("prep_fidelity", "analysis_fidelity"):
            val = getattr(self, name)
            if not 0.0 <= val <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1], got {val}")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must fit in 64 unsigned bits")
        if self.ancilla_weights is not None:
            w = tuple(float(x) for x in self.ancilla_weights)
            if any(x < 0 for x in w):
                raise ValueError("ancilla weights must be nonnegative")
            if abs(sum(w) - 1.0) > 1e-12:
                raise ValueError(f"ancilla weights must sum to 1, got {sum(w)!r}")
            object.__setattr__(self, "ancilla_weights", w)

    def weights_for(self, d: int) -> np.ndarray:
        if self.ancilla_weights is None:
            return np.full(d, 1.0 / d)
        if len(self.ancilla_weights) != d:
            raise ValueError(
                f"{len(self.ancilla_weights)} ancilla weights for dimension {d}"
            )
        return np.asarray(self.ancilla_weights)

    def to_dict(self) -> dict:
        return {
            "shots": self.shots,
            "v": self.v,
            "ancillaWeights": list(self.ancilla_weights) if self.ancilla_weights else None,
            "prepFidelity": self.prep_fidelity,
            "analysisFidelity": self.analysis_fidelity,
            "seed": self.seed,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "ExperimentConfig":
        weights = data.get("ancillaWeights")
        return cls(
            shots=int(data["shots"]),
            v=float(data.get("v", 1.0)),
            ancilla_weights=tuple(weights) if weights else None,
            prep_fidelity=float(data.get("prepFidelity", 1.0)),
            analysis_fidelity=float(data.get("analysisFidelity", 1.0)),
            seed=int(data.get("seed", 0)),
        )


@dataclass(frozen=True)
class CountsTable:
    """Coincidence counts N_{phi,i} for one input state."""

    input_label: str
    basis_label: str
    phi_index: int
    counts: dict[int, int]
    config: ExperimentConfig

    def __post_init__(self):
        if any(n < 0 for n in self.counts.values()):
            raise ValueError("counts must be nonnegative")

    @property
    def dim(self) -> int:
        return len(self.counts)

    def to_dict(self) -> dict:
        return {
            "input": self.input_label,
            "basis": self.basis_label,
            "phiIndex": self.phi_index,
            "counts": {str(i): int(self.counts[i]) for i in sorted(self.counts)},
            "config": self.config.to_dict(),
        }


@dataclass(frozen=True)
class EstimationResult:
    """Estimated outcome probabilities and the fidelity F = p(phi|phi)."""

    probs: np.ndarray
    fidelity: float
    stderr: float

    def __post_init__(self):
        probs = np.asarray(self.probs, dtype=float)
        if abs(float(probs.sum()) - 1.0) > 1e-9:
            raise ValueError(f"probabilities sum to {probs.sum()!r}, not 1")
        probs.setflags(write=False)
        object.__setattr__(self, "probs", probs)

    def to_dict(self) -> dict:
        return {
            "probs": [float(p) for p in self.probs],
            "fidelity": float(self.fidelity),
            "stderr": float(self.stderr),
        }


def randomize_ancilla(rng: np.random.Generator, config: ExperimentConfig, basis: LabeledBasis) -> PureState:
    """Draw one ancilla state from the basis according to the config weights.

    With uniform weights the drawn ensemble averages to the fully mixed
    state I_d/d, as required for a universal cloner.
    """
    weights = config.weights_for(basis.dim)
    idx = int(rng.choice(basis.dim, p=weights))
    return basis.states[idx]


def _orthogonal_haar(psi: np.ndarray, z: np.ndarray) -> np.ndarray:
    """Haar-random unit vector in the orthogonal complement of ``psi``.

    ``z`` supplies 2d standard normals. The measure-zero degenerate draw
    falls back to orthogonalizing the basis vector least parallel to psi.
    """
    d = len(psi)
    chi = z[:d] + 1j * z[d:]
    chi -= np.vdot(psi, chi) * psi
    norm = np.linalg.norm(chi)
    if norm < 1e-12:
        k = int(np.argmin(np.abs(psi)))
        chi = np.zeros(d, dtype=complex)
        chi[k] = 1.0
        chi -= np.vdot(psi, chi) * psi
        norm = np.linalg.norm(chi)
    return chi / norm


def apply_infidelity(psi: PureState, f: float, rng: np.random.Generator) -> PureState:
    """Depolarizing-style state error with mean overlap f.

    With probability f the state passes unchanged; otherwise it is replaced
    by a Haar-random state in the orthogonal complement, so the expected
    overlap |<psi|out>|^2 over the channel equals f.
    """
    if not 0.0 <= f <= 1.0:
        raise ValueError(f"fidelity must lie in [0, 1], got {f}")
    if rng.random() < f:
        return psi
    z = rng.standard_normal(2 * psi.dim)
    return PureState(psi.dim, _orthogonal_haar(psi.amps, z))


def _perturb_batch(psi: np.ndarray, f: float, u: np.ndarray, z: np.ndarray) -> np.ndarray:
    """Vectorized apply_infidelity: one state per row of the output.

    u: (B,) uniforms deciding pass-through; z: (B, 2d) normals feeding the
    orthogonal replacement. Same construction as the scalar op.
    """
    B = len(u)
    d = len(psi)
    out = np.broadcast_to(psi, (B, d)).copy()
    bad = u >= f
    if np.any(bad):
        chi = z[bad, :d] + 1j * z[bad, d:]
        chi -= (np.conj(psi)[None, :] * chi).sum(axis=1, keepdims=True) * psi[None, :]
        norms = np.linalg.norm(chi, axis=1, keepdims=True)
        # measure-zero degenerate rows: deterministic orthogonal fallback
        if np.any(norms[:, 0] < 1e-12):
            k = int(np.argmin(np.abs(psi)))
            fb = np.zeros(d, dtype=complex)
            fb[k] = 1.0
            fb -= np.vdot(psi, fb) * psi
            fb /= np.linalg.norm(fb)
            chi[norms[:, 0] < 1e-12] = fb
            norms = np.linalg.norm(chi, axis=1, keepdims=True)
        out[bad] = chi / norms
    return out


def _batch_rng(seed: int, input_index: int, batch: int) -> np.random.Generator:
    ss = np.random.SeedSequence(entropy=seed, spawn_key=(input_index, batch))
    return np.random.Generator(np.random.Philox(ss))


def _event_terms(S, N_arr, v, F_states, G_states):
    """Closed-form event quantities for one trial (broadcasts over leading axes).

    With u = S (x) e0 and a = N (x) (v e0 + w e1) the coalesced pair,
    split across the two detection arms, is (|u,a> + |a,u>) / sqrt(2(1+x)),
    x = v^2 |<S|N>|^2. Writing A = <filter|S>, B = <filter|N>,
    F_j = <outcome_j|S>, G_j = <outcome_j|N> and tracing the temporal
    modes at the detectors gives

        p_coal   = (1 + x) / 4                      (into the monitored port)
        p_filter = (|A|^2 + |B|^2 + 2 v^2 Re(conj(A) B conj(c))) / (2 (1+x))
        q_j      = |A G_j|^2 + |B F_j|^2 + 2 v^2 Re(conj(A) B conj(G_j) F_j)

    q_j are relative scanner-click weights (normalized by the caller).
    :func:`coincidence_probabilities` recomputes all of this through the
    second-quantized engine; the two routes must agree.
    """
    c = (np.conj(S) * N_arr).sum(axis=-1)
    x = (v * v) * np.abs(c) ** 2
    p_coal = (1.0 + x) / 4.0
    A = (np.conj(F_states) * S).sum(axis=-1)
    B = (np.conj(F_states) * N_arr).sum(axis=-1)
    p_filter = (
        np.abs(A) ** 2 + np.abs(B) ** 2 + 2.0 * v * v * np.real(np.conj(A) * B * np.conj(c))
    ) / (2.0 * (1.0 + x))
    F_j = (np.conj(G_states) * S[..., None, :]).sum(axis=-1)
    G_j = (np.conj(G_states) * N_arr[..., None, :]).sum(axis=-1)
    q = (
        np.abs(A[..., None] * G_j) ** 2
        + np.abs(B[..., None] * F_j) ** 2
        + 2.0 * v * v * np.real(np.conj(A)[..., None] * B[..., None] * np.conj(G_j) * F_j)
    )
    return p_coal, p_filter, np.maximum(q, 0.0)


def coincidence_probabilities(
    signal: PureState,
    ancilla: PureState,
    v: float,
    filter_state: PureState,
    outcome_states,
) -> tuple[float, float, float, np.ndarray]:
    """Engine-backed single-trial reference for the coincidence pipeline.

    Builds the full second-quantized computation (temporal-mode doubling,
    first splitter, coalescence into the monitored port, second splitter,
    one-photon-per-arm coincidence, analyzer projections) and returns

        (p_coal, p_split, p_filter, q)

    where q holds the relative scanner-click weights per outcome. Slow but
    independent of the vectorized closed forms used in the Monte Carlo
    loop; exists so the two can be cross-checked.
    """
    d = signal.dim
    w = math.sqrt(max(0.0, 1.0 - v * v))
    u = PureState(2 * d, np.concatenate([signal.amps, np.zeros(d)]))
    a = PureState(2 * d, np.concatenate([v * ancilla.amps, w * ancilla.amps]))
    state = bosonic.FockState.vacuum(3, 2 * d)
    state = bosonic.add_photon(state, 0, u)
    state = bosonic.add_photon(state, 1, a)
    state = bosonic.beam_splitter(state, 0, 1)
    p_coal, cond = bosonic.postselect_same_port(state, 0)
    if p_coal == 0.0:
        return 0.0, 0.0, 0.0, np.zeros(len(outcome_states))
    split = bosonic.beam_splitter(cond, 0, 2)
    # one photon in port 0, one in port 2 -> 2d x 2d amplitude matrix
    dd = 2 * d
    psi = np.zeros((dd, dd), dtype=complex)
    p_split = 0.0
    for occ, amp in split.terms.items():
        port0 = occ[0:dd]
        port2 = occ[2 * dd : 3 * dd]
        if sum(port0) == 1 and sum(port2) == 1:
            p_split += abs(amp) ** 2
            psi[port0.index(1), port2.index(1)] = amp
    if p_split == 0.0:
        return p_coal, 0.0, 0.0, np.zeros(len(outcome_states))
    psi /= math.sqrt(p_split)

    def temporal_pair(s: PureState) -> np.ndarray:
        cols = np.zeros((dd, 2), dtype=complex)
        cols[:d, 0] = s.amps
        cols[d:, 1] = s.amps
        return cols

    fil = temporal_pair(filter_state)
    p_filter = float(np.sum(np.abs(fil.conj().T @ psi) ** 2))
    q = np.array(
        [
            np.sum(np.abs(fil.conj().T @ psi @ np.conj(temporal_pair(out))) ** 2)
            for out in outcome_states
        ]
    )
    return float(p_coal), float(p_split), p_filter, q


def _simulate_batch(
    phi: np.ndarray,
    basis_cols: np.ndarray,
    weights: np.ndarray,
    v: float,
    prep_f: float,
    analysis_f: float,
    rng: np.random.Generator,
    swap_detectors: bool,
) -> tuple[np.ndarray, np.ndarray]:
    """Run BATCH_TRIALS single-shot trials; return (coincidence mask, outcomes).

    Variates are drawn in a fixed order: signal preparation, ancilla index,
    coalescence, pair splitting, analyzer perturbations (filter arm first,
    scanner arm second; the swapped-detector mode reverses those two
    blocks), filter click, scanner outcome.
    """
    B = BATCH_TRIALS
    d = len(phi)
    w = math.sqrt(max(0.0, 1.0 - v * v))

    u_prep = rng.random(B)
    z_prep = rng.standard_normal((B, 2 * d))
    u_anc = rng.random(B)
    u_coal = rng.random(B)
    u_split = rng.random(B)
    if swap_detectors:
        u_scan = rng.random((B, d))
        z_scan = rng.standard_normal((B, d, 2 * d))
        u_fil = rng.random(B)
        z_fil = rng.standard_normal((B, 2 * d))
    else:
        u_fil = rng.random(B)
        z_fil = rng.standard_normal((B, 2 * d))
        u_scan = rng.random((B, d))
        z_scan = rng.standard_normal((B, d, 2 * d))
    u_pass = rng.random(B)
    u_out = rng.random(B)

    S = _perturb_batch(phi, prep_f, u_prep, z_prep)

    cum_w = np.cumsum(weights)
    anc_idx = np.minimum(np.searchsorted(cum_w, u_anc, side="right"), d - 1)
    N = basis_cols[:, anc_idx].T  # (B, d) ancilla internal states

    F_states = _perturb_batch(phi, analysis_f, u_fil, z_fil)  # arm-1 filter
    G_states = np.empty((B, d, d), dtype=complex)  # arm-2 analyzer settings
    for j in range(d):
        G_states[:, j, :] = _perturb_batch(
            basis_cols[:, j], analysis_f, u_scan[:, j], z_scan[:, j, :]
        )

    p_coal, p_filter, q = _event_terms(S, N, v, F_states, G_states)
    coal = u_coal < p_coal  # both photons into the monitored port
    split = u_split < 0.5  # one photon per arm after the second splitter
    fired = u_pass < p_filter
    totals = q.sum(axis=1)
    resolvable = totals > 0.0

    thresholds = u_out * np.where(resolvable, totals, 1.0)
    outcomes = (np.cumsum(q, axis=1) < thresholds[:, None]).sum(axis=1)
    outcomes = np.minimum(outcomes, d - 1)

    ok = coal & split & fired & resolvable
    return ok, outcomes


def run_cloning_experiment(
    phi: PureState,
    basis: LabeledBasis,
    config: ExperimentConfig,
    *,
    swap_detectors: bool = False,
) -> CountsTable:
    """Collect coincidence counts for one input state of ``basis``.

    ``phi`` must be an element of ``basis``; trials accumulate until
    ``config.shots`` post-selected coincidences are recorded. Fully
    deterministic given the config (see the module docstring for the
    stream layout). ``swap_detectors`` exchanges which arm filters on
    |phi> and which arm scans the basis; the estimator's expectation is
    unchanged by the exchange symmetry of the photon pair.
    """
    phi_index = basis.index_of(phi)
    weights = config.weights_for(basis.dim)
    basis_cols = basis.matrix
    counts = np.zeros(basis.dim, dtype=np.int64)
    collected = 0
    batch = 0
    dry = 0
    while collected < config.shots:
        rng = _batch_rng(config.seed, phi_index, batch)
        ok, outcomes = _simulate_batch(
            phi.amps,
            basis_cols,
            weights,
            config.v,
            config.prep_fidelity,
            config.analysis_fidelity,
            rng,
            swap_detectors,
        )
        hits = outcomes[ok]
        if hits.size == 0:
            dry += 1
            if dry >= _MAX_DRY_BATCHES:
                raise RuntimeError(
                    "post-selection yield is (near) zero for this configuration"
                )
        else:
            dry = 0
            room = config.shots - collected
            if hits.size > room:
                hits = hits[:room]
            counts += np.bincount(hits, minlength=basis.dim)
            collected += hits.size
        batch += 1
    return CountsTable(
        input_label=basis.labels[phi_index],
        basis_label=" / ".join(basis.labels),
        phi_index=phi_index,
        counts={i: int(counts[i]) for i in range(basis.dim)},
        config=config,
    )


def estimate_probabilities(table: CountsTable, phi_index: int) -> EstimationResult:
    """Count-ratio estimator for p(i|phi).

    With S = sum of the off-input counts and the normalization
    N = N_{phi,phi} + 2 S (the factor 2 accounts for the coincidences the
    swapped detector assignment would have recorded for i != phi):

        p(i|phi)   = N_{phi,i} / N          (i != phi)
        p(phi|phi) = (N_{phi,phi} + S) / N  = fidelity

    The standard error propagates the binomial fluctuation of
    N_{phi,phi} at fixed total coincidences.
    """
    d = table.dim
    if not 0 <= phi_index < d:
        raise ValueError(f"phi index {phi_index} out of range")
    counts = np.array([table.counts[i] for i in range(d)], dtype=float)
    n_tot = counts.sum()
    if n_tot <= 0:
        raise ValueError("counts are all zero")
    k = counts[phi_index]
    s = n_tot - k
    norm = k + 2.0 * s
    probs = counts / norm
    probs[phi_index] = (k + s) / norm
    fidelity = float(probs[phi_index])
    q = k / n_tot
    stderr = float(n_tot * math.sqrt(n_tot * q * (1.0 - q)) / norm**2)
    return EstimationResult(probs=probs, fidelity=fidelity, stderr=stderr)


@dataclass(frozen=True)
class FidelityTable:
    """Cloning fidelities for every input of one basis, plus their average."""

    basis_name: str
    input_labels: tuple[str, ...]
    tables: tuple[CountsTable, ...]
    results: tuple[EstimationResult, ...]
    average: float
    average_stderr: float

    def to_dict(self) -> dict:
        return {
            "basis": self.basis_name,
            "inputs": list(self.input_labels),
            "results": [r.to_dict() for r in self.results],
            "counts": [t.to_dict() for t in self.tables],
            "average": {"fidelity": self.average, "stderr": self.average_stderr},
        }

    def __str__(self) -> str:
        lines = [f"basis {self.basis_name}: cloning fidelities"]
        for label, res in zip(self.input_labels, self.results):
            lines.append(f"  {label:>20s}   {res.fidelity:.4f} +- {res.stderr:.4f}")
        lines.append(
            f"  {'average':>20s}   {self.average:.4f} +- {self.average_stderr:.4f}"
        )
        return "\n".join(lines)


_NAMED_BASES = {"I": basis_logical, "IV": basis_four}


def replicate_table(basis_name: str, config: ExperimentConfig) -> FidelityTable:
    """Run the full four-input fidelity table for basis I or IV.

    Each input uses its own RNG stream family derived from the one config
    seed, so the whole table is reproducible from a single integer.
    """
    try:
        basis = _NAMED_BASES[basis_name]()
    except KeyError:
        raise ValueError(f"unknown basis {basis_name!r}; expected one of I, IV") from None
    tables = []
    results = []
    for phi in basis.states:
        table = run_cloning_experiment(phi, basis, config)
        tables.append(table)
        results.append(estimate_probabilities(table, table.phi_index))
    fidelities = [r.fidelity for r in results]
    avg = float(np.mean(fidelities))
    avg_err = float(math.sqrt(sum(r.stderr**2 for r in results)) / len(results))
    return FidelityTable(
        basis_name=basis_name,
        input_labels=tuple(t.input_label for t in tables),
        tables=tuple(tables),
        results=tuple(results),
        average=avg,
        average_stderr=avg_err,
    )


def write_counts_csv(tables, fileobj) -> None:
    """Write counts as RFC-4180 CSV with the columns input, outcome, count."""
    writer = csv.writer(fileobj, lineterminator="\n")
    writer.writerow(["input", "outcome", "count"])
    for table in tables:
        labels = table.basis_label.split(" / ")
        for i in sorted(table.counts):
            writer.writerow([table.input_label, labels[i], table.counts[i]])
