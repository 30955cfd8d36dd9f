"""Optimal universal cloning: closed-form fidelities, the beam-splitter
symmetrization channel, and its cascaded N -> M extension.

The symmetrization channel interferes the input photon with an ancilla
photon in the fully mixed state I_d/d on a balanced beam splitter and keeps
only the events where both photons coalesce into a common output port. Two
derived numbers anchor everything: conditioned on coalescence, the
ancilla-matches-input branch carries relative weight 2/(d+1) (fidelity 1)
and the d-1 orthogonal branches carry total weight (d-1)/(d+1) (fidelity
1/2), giving the optimal 1 -> 2 average fidelity 1/2 + 1/(d+1).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import bosonic
from .hilbert import DensityMatrix, LabeledBasis, PureState, basis_computational, fidelity_pure

__all__ = [
    "CloningSpec",
    "CloningOutcome",
    "f_est",
    "f_clon",
    "clone_analytic",
    "clone_oracle",
    "cascade_clone",
    "DEFAULT_CASCADE_CAP",
]

# Fock-space guard: each extra output copy multiplies the branch count by d.
DEFAULT_CASCADE_CAP = 6


@dataclass(frozen=True)
class CloningSpec:
    """An N -> M cloning task for internal dimension d."""

    d: int
    n: int
    m: int

    def __post_init__(self):
        if self.d < 2:
            raise ValueError(f"dimension must be >= 2, got {self.d}")
        if not 1 <= self.n < self.m:
            raise ValueError(f"need 1 <= N < M, got N={self.n}, M={self.m}")


@dataclass(frozen=True)
class CloningOutcome:
    """Result of a cloning run: per-clone state, its fidelity, success odds."""

    input_state: PureState
    clone_state: DensityMatrix
    fidelity: float
    success_prob: float
    n: int = 1
    m: int = 2

    def __post_init__(self):
        if not 0.0 < self.success_prob <= 1.0:
            raise ValueError(f"success probability out of (0, 1]: {self.success_prob}")
        check = fidelity_pure(self.clone_state, self.input_state)
        if abs(check - self.fidelity) > 1e-12:
            raise ValueError(
                f"recorded fidelity {self.fidelity!r} disagrees with "
                f"<phi|rho|phi> = {check!r}"
            )

    def to_dict(self) -> dict:
        return {
            "d": self.input_state.dim,
            "N": self.n,
            "M": self.m,
            "fidelity": self.fidelity,
            "successProb": self.success_prob,
            "cloneState": self.clone_state.to_dict(),
        }


def f_est(n: int, d: int) -> float:
    """Optimal mean fidelity for estimating a d-dim state from n copies: (n+1)/(n+d)."""
    if n < 1:
        raise ValueError(f"need at least one copy, got {n}")
    if d < 2:
        raise ValueError(f"dimension must be >= 2, got {d}")
    return (n + 1) / (n + d)


def f_clon(n: int, m: int, d: int) -> float:
    """Optimal symmetric N -> M cloning fidelity: (M - N + N(M + d)) / (M(N + d)).

    Always exceeds f_est(n, d) and tends to it as m -> infinity.
    """
    if d < 2:
        raise ValueError(f"dimension must be >= 2, got {d}")
    if not 1 <= n < m:
        raise ValueError(f"need 1 <= N < M, got N={n}, M={m}")
    return (m - n + n * (m + d)) / (m * (n + d))


def _success_1_to_2(d: int) -> float:
    """Probability that signal and mixed ancilla coalesce into a common port."""
    return (d + 1) / (2 * d)


def clone_analytic(phi: PureState, basis: LabeledBasis) -> CloningOutcome:
    """Closed-form 1 -> 2 outcome, expressed in a basis whose first element is phi.

    The per-clone state is diagonal in that basis:

        rho = (d+3)/(2(d+1)) |phi><phi| + 1/(2(d+1)) (I - |phi><phi|)

    i.e. diag(7, 1, 1, 1)/10 for d = 4.
    """
    d = phi.dim
    if basis.dim != d:
        raise ValueError(f"dimension mismatch: {basis.dim} vs {d}")
    if abs(abs(np.vdot(basis.states[0].amps, phi.amps)) - 1.0) > 1e-9:
        raise ValueError("phi must be the first element of the supplied basis")
    top = (d + 3) / (2 * (d + 1))
    rest = 1 / (2 * (d + 1))
    proj = np.outer(phi.amps, phi.amps.conj())
    rho = rest * np.eye(d) + (top - rest) * proj
    return CloningOutcome(
        input_state=phi,
        clone_state=DensityMatrix(dim=d, mat=rho),
        fidelity=top,
        success_prob=_success_1_to_2(d),
        n=1,
        m=2,
    )


def _mixed_ancilla_branches(
    phi: PureState, ancilla_basis: LabeledBasis
) -> list[tuple[float, float, DensityMatrix]]:
    """Evolve each ancilla basis branch: (weight, coalescence prob, clone state).

    The fully mixed ancilla is handled as an exact equal-weight convex
    combination over the basis states, never by sampling; the coalescence
    probability counts both output ports of the balanced splitter.
    """
    d = phi.dim
    branches = []
    for anc in ancilla_basis.states:
        state = bosonic.FockState.vacuum(2, d)
        state = bosonic.add_photon(state, 0, phi)
        state = bosonic.add_photon(state, 1, anc)
        state = bosonic.beam_splitter(state, 0, 1)
        p0, cond = bosonic.postselect_same_port(state, 0)
        p1, _ = bosonic.postselect_same_port(state, 1)
        rho = bosonic.reduced_single_photon(cond, 0)
        branches.append((1.0 / d, p0 + p1, rho))
    return branches


def clone_oracle(
    phi: PureState, d: int, ancilla_basis: LabeledBasis | None = None
) -> CloningOutcome:
    """Brute-force 1 -> 2 outcome from the second-quantized engine.

    Runs the full beam-splitter computation for every ancilla branch and
    averages; agrees with :func:`clone_analytic` to machine precision. The
    ancilla decomposition basis is arbitrary for a fully mixed state
    (defaults to computational); the result must not depend on it.
    """
    if d != phi.dim:
        raise ValueError(f"dimension mismatch: d={d} but phi.dim={phi.dim}")
    if ancilla_basis is None:
        ancilla_basis = basis_computational(d)
    if ancilla_basis.dim != d:
        raise ValueError(f"ancilla basis dimension {ancilla_basis.dim} != {d}")
    success = 0.0
    rho = np.zeros((d, d), dtype=complex)
    for weight, prob, branch_rho in _mixed_ancilla_branches(phi, ancilla_basis):
        success += weight * prob
        rho += weight * prob * branch_rho.mat
    rho /= success
    clone = DensityMatrix(dim=d, mat=(rho + rho.conj().T) / 2)
    return CloningOutcome(
        input_state=phi,
        clone_state=clone,
        fidelity=fidelity_pure(clone, phi),
        success_prob=success,
        n=1,
        m=2,
    )


def cascade_clone(
    phi: PureState,
    spec: CloningSpec,
    cap: int = DEFAULT_CASCADE_CAP,
    ancilla_basis: LabeledBasis | None = None,
) -> CloningOutcome:
    """N -> M cloning by a chain of M - N beam splitters and mixed ancillas.

    Starts with N photons in phi on one port; each stage interferes the
    accumulated photons with one fresh fully mixed ancilla photon and keeps
    only total coalescence into a common output port (partial-coalescence
    outcomes count as failures). The reported success probability is the
    weighted product of the stage-conditional probabilities over all
    ancilla branches; the clone state is the branch-averaged single-photon
    reduction of the final M-photon state.
    """
    if phi.dim != spec.d:
        raise ValueError(f"dimension mismatch: spec.d={spec.d} but phi.dim={phi.dim}")
    if spec.m > cap:
        raise ValueError(
            f"M={spec.m} exceeds the Fock-space cap {cap}; raise `cap` explicitly "
            "if you accept the exponential branch growth"
        )
    d = spec.d
    if ancilla_basis is None:
        ancilla_basis = basis_computational(d)
    # branches: (probability-weighted weight, accumulated FockState in port 0)
    start = bosonic.identical_photons(0, phi, spec.n)
    branches: list[tuple[float, bosonic.FockState]] = [(1.0, start)]
    for _ in range(spec.m - spec.n):
        grown: list[tuple[float, bosonic.FockState]] = []
        for weight, state in branches:
            for anc in ancilla_basis.states:
                merged = bosonic.add_photon(state, 1, anc)
                merged = bosonic.beam_splitter(merged, 0, 1)
                p0, cond = bosonic.postselect_same_port(merged, 0)
                p1, _ = bosonic.postselect_same_port(merged, 1)
                stage_prob = p0 + p1
                if stage_prob <= 0.0:
                    continue
                grown.append((weight * stage_prob / d, cond))
        branches = grown
    success = sum(w for w, _ in branches)
    rho = np.zeros((d, d), dtype=complex)
    for weight, state in branches:
        rho += weight * bosonic.reduced_single_photon(state, 0).mat
    rho /= success
    clone = DensityMatrix(dim=d, mat=(rho + rho.conj().T) / 2)
    return CloningOutcome(
        input_state=phi,
        clone_state=clone,
        fidelity=fidelity_pure(clone, phi),
        success_prob=success,
        n=spec.n,
        m=spec.m,
    )
