"""Few-photon second-quantized states and balanced beam-splitter evolution.

This is the brute-force engine behind every cloning number in the package:
states are sparse maps from mode-occupation vectors to complex amplitudes,
a mode being one (spatial port, internal level) pair. The 50/50 beam
splitter acts identically on every internal level, so two-photon
interference (Hong-Ou-Mandel coalescence) emerges from the operator
algebra rather than from any closed-form shortcut.

Conventions
-----------
* Basis kets are normalized: occupation (n_1, ...) means
  prod_k (a_k^dag)^(n_k) / sqrt(n_k!) acting on vacuum.
* The beam splitter uses the symmetric phase convention

      a_A^dag -> (a_A^dag + i a_B^dag) / sqrt2
      a_B^dag -> (i a_A^dag + a_B^dag) / sqrt2

  Any convention with |r| = |t| = 1/sqrt2 yields the same post-selection
  probabilities; this one is fixed so amplitudes are reproducible.
* Partial distinguishability is a scalar wavepacket overlap v: the second
  photon is split into a v-weighted copy of the first photon's temporal
  mode and a sqrt(1 - v^2)-weighted orthogonal temporal mode. This
  reproduces the standard HOM visibility law with a single parameter.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .hilbert import DensityMatrix, PureState

__all__ = [
    "ModeIndex",
    "FockState",
    "DistinguishabilityModel",
    "single_photon",
    "identical_photons",
    "add_photon",
    "beam_splitter",
    "postselect_same_port",
    "reduced_single_photon",
    "coalescence_enhancement",
    "hom_curve",
]

# Amplitudes below this are dropped after each evolution step. Beam-splitter
# expansions generate exact zeros (HOM cancellations) that would otherwise
# clutter the sparse map.
_PRUNE_TOL = 1e-14
_NORM_TOL = 1e-12

_SPEED_OF_LIGHT = 299_792_458.0  # m/s


@dataclass(frozen=True)
class ModeIndex:
    """One (spatial port, internal level) mode of the optical circuit."""

    port: int
    level: int

    def flat(self, dim: int) -> int:
        """Position of this mode in an occupation vector with ``dim`` levels per port."""
        return self.port * dim + self.level


class FockState:
    """Sparse n-photon state over ``ports`` x ``dim`` modes.

    ``terms`` maps occupation tuples (length ports*dim, mode order
    port-major) to complex amplitudes. All terms must share one total
    photon number, and the state must be normalized; the empty map is the
    zero-state marker returned by a failed post-selection.
    """

    __slots__ = ("ports", "dim", "terms")

    def __init__(self, ports: int, dim: int, terms: dict[tuple[int, ...], complex]):
        if ports < 1 or dim < 1:
            raise ValueError("need at least one port and one level")
        n_modes = ports * dim
        photon_counts = set()
        for occ, amp in terms.items():
            if len(occ) != n_modes:
                raise ValueError(f"occupation length {len(occ)} != {n_modes}")
            if any(n < 0 for n in occ):
                raise ValueError("negative occupation")
            photon_counts.add(sum(occ))
        if len(photon_counts) > 1:
            raise ValueError(f"mixed photon numbers in one state: {sorted(photon_counts)}")
        if terms:
            norm_sq = sum(abs(a) ** 2 for a in terms.values())
            if abs(norm_sq - 1.0) > _NORM_TOL:
                raise ValueError(f"state is not normalized: |amp|^2 sums to {norm_sq!r}")
        self.ports = ports
        self.dim = dim
        self.terms = dict(terms)

    @classmethod
    def vacuum(cls, ports: int, dim: int) -> "FockState":
        return cls(ports, dim, {(0,) * (ports * dim): 1.0 + 0j})

    @property
    def is_empty(self) -> bool:
        return not self.terms

    @property
    def n_photons(self) -> int:
        if self.is_empty:
            return 0
        return sum(next(iter(self.terms)))

    def norm(self) -> float:
        return math.sqrt(sum(abs(a) ** 2 for a in self.terms.values()))

    def amplitude(self, occ: tuple[int, ...]) -> complex:
        return self.terms.get(tuple(occ), 0j)

    def to_dict(self) -> dict:
        """Debug dump: {"ports": P, "dim": d, "terms": [{"occ": [...], "amp": [re, im]}]}."""
        return {
            "ports": self.ports,
            "dim": self.dim,
            "terms": [
                {"occ": list(occ), "amp": [float(amp.real), float(amp.imag)]}
                for occ, amp in sorted(self.terms.items())
            ],
        }


def _pruned(raw: dict[tuple[int, ...], complex]) -> dict[tuple[int, ...], complex]:
    return {occ: amp for occ, amp in raw.items() if abs(amp) > _PRUNE_TOL}


def single_photon(port: int, psi: PureState, ports: int = 2) -> FockState:
    """One photon in spatial ``port`` carrying the internal state ``psi``."""
    return add_photon(FockState.vacuum(ports, psi.dim), port, psi)


def identical_photons(port: int, psi: PureState, n: int, ports: int = 2) -> FockState:
    """n photons in one port, all in internal state ``psi``: (a_psi^dag)^n / sqrt(n!) |0>."""
    if n < 1:
        raise ValueError("need at least one photon")
    state = FockState.vacuum(ports, psi.dim)
    for _ in range(n):
        state = add_photon(state, port, psi)
    return state


def add_photon(state: FockState, port: int, psi: PureState) -> FockState:
    """Apply the creation operator a_psi^dag on ``port`` and renormalize.

    The renormalization divides by sqrt(m + 1) with m the photon number
    already in ``port``-modes overlapping psi; for an empty port this is a
    plain tensor product.
    """
    if not 0 <= port < state.ports:
        raise ValueError(f"port {port} out of range for {state.ports} ports")
    if psi.dim != state.dim:
        raise ValueError(f"internal dimension mismatch: {psi.dim} vs {state.dim}")
    raw: dict[tuple[int, ...], complex] = {}
    base = port * state.dim
    for occ, amp in state.terms.items():
        for k, c in enumerate(psi.amps):
            if abs(c) <= _PRUNE_TOL:
                continue
            mode = base + k
            new_occ = list(occ)
            new_occ[mode] += 1
            contrib = amp * c * math.sqrt(new_occ[mode])
            key = tuple(new_occ)
            raw[key] = raw.get(key, 0j) + contrib
    raw = _pruned(raw)
    norm = math.sqrt(sum(abs(a) ** 2 for a in raw.values()))
    if norm == 0.0:
        raise ValueError("creation operator annihilated the state")
    return FockState(state.ports, state.dim, {k: v / norm for k, v in raw.items()})


def _bs_level_polynomial(p: int, q: int) -> dict[tuple[int, int], complex]:
    """Expand (x + iy)^p (ix + y)^q into monomials {(j_x, j_y): coeff}.

    x, y stand for the output-port creation operators of one internal level;
    the overall 2^(-(p+q)/2) prefactor is included.
    """
    poly: dict[tuple[int, int], complex] = {}
    scale = 2.0 ** (-(p + q) / 2.0)
    for r in range(p + 1):
        for s in range(q + 1):
            coeff = (
                math.comb(p, r)
                * math.comb(q, s)
                * (1j) ** ((p - r) + s)
                * scale
            )
            key = (r + s, (p - r) + (q - s))
            poly[key] = poly.get(key, 0j) + coeff
    return poly


def beam_splitter(state: FockState, port_a: int, port_b: int) -> FockState:
    """Evolve through a 50/50 beam splitter joining ``port_a`` and ``port_b``.

    Acts identically on every internal level; unitary, so the norm and
    total photon number are preserved.
    """
    if port_a == port_b:
        raise ValueError("beam splitter needs two distinct ports")
    for p in (port_a, port_b):
        if not 0 <= p < state.ports:
            raise ValueError(f"port {p} out of range for {state.ports} ports")
    d = state.dim
    out: dict[tuple[int, ...], complex] = {}
    for occ, amp in state.terms.items():
        # Per-level expansion; levels act on disjoint output modes, so the
        # term's image is the cartesian product of the level expansions.
        options: list[list[tuple[int, int, int, complex]]] = []  # (level, ja, jb, coeff)
        prefactor = amp
        for k in range(d):
            p = occ[port_a * d + k]
            q = occ[port_b * d + k]
            if p == 0 and q == 0:
                continue
            prefactor /= math.sqrt(math.factorial(p) * math.factorial(q))
            poly = _bs_level_polynomial(p, q)
            options.append([(k, ja, jb, c) for (ja, jb), c in poly.items()])
        partial = [(list(occ), prefactor)]
        for choices in options:
            nxt = []
            for occ_acc, coeff_acc in partial:
                for k, ja, jb, c in choices:
                    new_occ = list(occ_acc)
                    new_occ[port_a * d + k] = ja
                    new_occ[port_b * d + k] = jb
                    nxt.append((new_occ, coeff_acc * c))
            partial = nxt
        for occ_out, coeff in partial:
            # restore ladder-operator normalization of the output ket
            fact = 1.0
            for k in range(d):
                fact *= math.factorial(occ_out[port_a * d + k])
                fact *= math.factorial(occ_out[port_b * d + k])
            key = tuple(occ_out)
            out[key] = out.get(key, 0j) + coeff * math.sqrt(fact)
    return FockState(state.ports, state.dim, _pruned(out))


def postselect_same_port(state: FockState, port: int) -> tuple[float, FockState]:
    """Keep only the component with every photon in ``port``.

    Returns ``(prob, conditional)``. ``prob`` is the squared norm of that
    component; when it vanishes the conditional is the empty-state marker.
    """
    if not 0 <= port < state.ports:
        raise ValueError(f"port {port} out of range for {state.ports} ports")
    d = state.dim
    lo, hi = port * d, (port + 1) * d
    kept = {
        occ: amp
        for occ, amp in state.terms.items()
        if sum(occ) == sum(occ[lo:hi])
    }
    prob = sum(abs(a) ** 2 for a in kept.values())
    if prob <= 0.0:
        return 0.0, FockState(state.ports, state.dim, {})
    root = math.sqrt(prob)
    conditional = FockState(
        state.ports, state.dim, {occ: amp / root for occ, amp in kept.items()}
    )
    return float(prob), conditional


def reduced_single_photon(state: FockState, port: int) -> DensityMatrix:
    """Single-photon density matrix of the photons found in ``port``.

    rho_kl = <a_l^dag a_k> / n, with n the photon number in ``port``; for a
    state with all photons coalesced in one port this is the per-clone
    reduced state. Raises if the port is unoccupied.
    """
    if state.is_empty:
        raise ValueError("cannot reduce the empty state")
    if not 0 <= port < state.ports:
        raise ValueError(f"port {port} out of range for {state.ports} ports")
    d = state.dim
    base = port * d
    # lowered[k] holds a_k |state> as a sparse map
    lowered: list[dict[tuple[int, ...], complex]] = [dict() for _ in range(d)]
    for occ, amp in state.terms.items():
        for k in range(d):
            n_k = occ[base + k]
            if n_k == 0:
                continue
            new_occ = list(occ)
            new_occ[base + k] -= 1
            key = tuple(new_occ)
            lowered[k][key] = lowered[k].get(key, 0j) + amp * math.sqrt(n_k)
    rho = np.zeros((d, d), dtype=complex)
    for k in range(d):
        for l in range(d):
            acc = 0j
            small, big = (lowered[l], lowered[k]) if len(lowered[l]) < len(lowered[k]) else (lowered[k], lowered[l])
            for key in small:
                if key in big:
                    acc += np.conj(lowered[l][key]) * lowered[k][key]
            rho[k, l] = acc
    trace = float(np.real(np.trace(rho)))
    if trace < 1e-12:
        raise ValueError(f"no photons in port {port}")
    rho = rho / trace
    rho = (rho + rho.conj().T) / 2  # scrub float asymmetry
    return DensityMatrix(dim=d, mat=rho)


@dataclass(frozen=True)
class DistinguishabilityModel:
    """Scalar wavepacket-overlap model of photon distinguishability.

    ``v`` is the temporal-mode overlap of the two photons at zero path
    delay (1 = fully indistinguishable). When ``wavelength`` and
    ``bandwidth`` are set (meters; bandwidth is the FWHM of a Gaussian
    intensity spectrum), ``v_of_delay`` gives the overlap as a function of
    the relative delay in seconds:

        v(tau) = exp(-(tau / tau_c)^2),   tau_c = sqrt(2) / sigma_omega,

    with sigma_omega the std of the angular-frequency intensity spectrum.
    """

    v: float = 1.0
    wavelength: float | None = None
    bandwidth: float | None = None

    def __post_init__(self):
        if not 0.0 <= self.v <= 1.0:
            raise ValueError(f"overlap v must lie in [0, 1], got {self.v}")
        if (self.wavelength is None) != (self.bandwidth is None):
            raise ValueError("wavelength and bandwidth must be given together")
        if self.wavelength is not None and (self.wavelength <= 0 or self.bandwidth <= 0):
            raise ValueError("wavelength and bandwidth must be positive")

    @classmethod
    def from_spectrum(cls, wavelength_nm: float, bandwidth_nm: float) -> "DistinguishabilityModel":
        """Convenience constructor taking nanometers."""
        return cls(v=1.0, wavelength=wavelength_nm * 1e-9, bandwidth=bandwidth_nm * 1e-9)

    @property
    def coherence_time(self) -> float:
        """tau_c in seconds; requires spectral parameters."""
        if self.wavelength is None:
            raise ValueError("no spectral parameters set")
        fwhm_nu = _SPEED_OF_LIGHT * self.bandwidth / self.wavelength**2
        sigma_omega = 2 * math.pi * fwhm_nu / (2 * math.sqrt(2 * math.log(2)))
        return math.sqrt(2) / sigma_omega

    def v_of_delay(self, tau: float) -> float:
        """Gaussian overlap-vs-delay law; v(0) = 1, even, nonincreasing in |tau|."""
        return math.exp(-((tau / self.coherence_time) ** 2))


def _two_photon_input(psi_s: PureState, psi_a: PureState, v: float) -> FockState:
    """Signal photon on port 0, ancilla on port 1, with temporal overlap v.

    The internal space is doubled: levels [0, d) are the signal's temporal
    mode, levels [d, 2d) an orthogonal one carrying the ancilla's
    distinguishable fraction.
    """
    d = psi_s.dim
    w = math.sqrt(max(0.0, 1.0 - v * v))
    signal = PureState(2 * d, np.concatenate([psi_s.amps, np.zeros(d)]))
    ancilla = PureState(2 * d, np.concatenate([v * psi_a.amps, w * psi_a.amps]))
    state = FockState.vacuum(2, 2 * d)
    state = add_photon(state, 0, signal)
    return add_photon(state, 1, ancilla)


def coalescence_enhancement(
    psi_s: PureState, psi_a: PureState, model: DistinguishabilityModel
) -> float:
    """Same-port coincidence-rate enhancement R relative to distinguishable photons.

    Computed by evolving the two-photon state through the beam splitter and
    post-selecting coalescence; for fully distinguishable photons that
    probability is exactly 1/2, so R = P_same / (1/2). Equals
    1 + v^2 |<psi_a|psi_s>|^2 and therefore lies in [1, 2].
    """
    if psi_s.dim != psi_a.dim:
        raise ValueError(f"dimension mismatch: {psi_s.dim} vs {psi_a.dim}")
    state = beam_splitter(_two_photon_input(psi_s, psi_a, model.v), 0, 1)
    p0, _ = postselect_same_port(state, 0)
    p1, _ = postselect_same_port(state, 1)
    return (p0 + p1) / 0.5


def hom_curve(
    psi_s: PureState,
    psi_a: PureState,
    delays,
    model: DistinguishabilityModel,
) -> list[tuple[float, float]]:
    """Sample the coalescence enhancement versus relative path delay.

    ``delays`` are in seconds; the model must carry spectral parameters.
    Returns (tau, R) pairs with R(0) maximal and R -> 1 far off the peak.
    """
    out = []
    for tau in delays:
        m = DistinguishabilityModel(
            v=model.v_of_delay(float(tau)),
            wavelength=model.wavelength,
            bandwidth=model.bandwidth,
        )
        out.append((float(tau), coalescence_enhancement(psi_s, psi_a, m)))
    return out
