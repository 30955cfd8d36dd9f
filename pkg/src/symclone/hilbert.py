"""Finite-dimensional Hilbert-space primitives for photonic qudits.

States live in an abstract d-dimensional internal space. For d = 4 the
convenience constructors label the levels with the polarization / orbital
angular momentum (OAM) product encoding used on the optical bench:
right/left circular polarization combined with the OAM eigenvalues m = +-2.
All cloning math downstream is label-agnostic; only the constructors here
know about photons.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "STRUCT_TOL",
    "PSD_FLOOR",
    "PureState",
    "DensityMatrix",
    "LabeledBasis",
    "inner",
    "basis_state",
    "basis_computational",
    "basis_logical",
    "basis_four",
    "basis_adapted_to",
    "unbiasedness_check",
    "maximally_mixed",
    "fidelity_pure",
]

# Structural identities (norms, orthogonality) hold to this tolerance; all
# amplitudes in the bench bases are exact-form rationals over sqrt(2).
STRUCT_TOL = 1e-12
# Density matrices may carry tiny negative eigenvalues from float roundoff.
PSD_FLOOR = -1e-10
# Constructor rejection threshold for Hermiticity / trace defects.
_MATRIX_TOL = 1e-9


def _readonly(arr: np.ndarray) -> np.ndarray:
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class PureState:
    """Normalized ket over a d-dimensional internal space.

    Immutable; the amplitude array is marked read-only, so instances can be
    shared freely across threads.
    """

    dim: int
    amps: np.ndarray

    def __post_init__(self):
        if self.dim < 2:
            raise ValueError(f"dimension must be >= 2, got {self.dim}")
        amps = np.asarray(self.amps, dtype=complex)
        if amps.shape != (self.dim,):
            raise ValueError(f"expected {self.dim} amplitudes, got shape {amps.shape}")
        norm_sq = float(np.sum(np.abs(amps) ** 2))
        if abs(norm_sq - 1.0) > STRUCT_TOL:
            raise ValueError(f"state is not normalized: sum |amps|^2 = {norm_sq!r}")
        object.__setattr__(self, "amps", _readonly(amps))

    @classmethod
    def normalized(cls, amps) -> "PureState":
        """Build a state from un-normalized amplitudes (rejects the zero vector)."""
        amps = np.asarray(amps, dtype=complex)
        norm = float(np.linalg.norm(amps))
        if norm < 1e-12:
            raise ValueError("cannot normalize the zero vector")
        return cls(dim=len(amps), amps=amps / norm)

    def to_dict(self) -> dict:
        """JSON-ready form: {"dim": d, "amps": [[re, im], ...]}."""
        return {
            "dim": self.dim,
            "amps": [[float(a.real), float(a.imag)] for a in self.amps],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "PureState":
        amps = np.array([complex(re, im) for re, im in data["amps"]])
        return cls(dim=int(data["dim"]), amps=amps)


@dataclass(frozen=True)
class DensityMatrix:
    """d x d Hermitian, unit-trace, positive-semidefinite matrix.

    Constructor rejects non-Hermitian or trace != 1 inputs (tolerance 1e-9)
    and eigenvalues below the PSD floor.
    """

    dim: int
    mat: np.ndarray

    def __post_init__(self):
        if self.dim < 2:
            raise ValueError(f"dimension must be >= 2, got {self.dim}")
        mat = np.asarray(self.mat, dtype=complex)
        if mat.shape != (self.dim, self.dim):
            raise ValueError(f"expected {self.dim}x{self.dim} matrix, got {mat.shape}")
        herm_defect = float(np.max(np.abs(mat - mat.conj().T)))
        if herm_defect > _MATRIX_TOL:
            raise ValueError(f"matrix is not Hermitian (defect {herm_defect:.3e})")
        trace = complex(np.trace(mat))
        if abs(trace - 1.0) > _MATRIX_TOL:
            raise ValueError(f"trace must be 1, got {trace!r}")
        min_eig = float(np.min(np.linalg.eigvalsh((mat + mat.conj().T) / 2)))
        if min_eig < PSD_FLOOR:
            raise ValueError(f"matrix is not positive semidefinite (min eig {min_eig:.3e})")
        object.__setattr__(self, "mat", _readonly(mat))

    @classmethod
    def from_pure(cls, psi: PureState) -> "DensityMatrix":
        """Projector |psi><psi|."""
        return cls(dim=psi.dim, mat=np.outer(psi.amps, psi.amps.conj()))

    def purity(self) -> float:
        """Tr(rho^2); 1 for pure states, 1/d for the maximally mixed state."""
        return float(np.real(np.trace(self.mat @ self.mat)))

    def to_dict(self) -> dict:
        """JSON-ready form: {"dim": d, "mat": [[[re, im], ...], ...]}."""
        return {
            "dim": self.dim,
            "mat": [
                [[float(x.real), float(x.imag)] for x in row] for row in self.mat
            ],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "DensityMatrix":
        mat = np.array(
            [[complex(re, im) for re, im in row] for row in data["mat"]]
        )
        return cls(dim=int(data["dim"]), mat=mat)


@dataclass(frozen=True)
class LabeledBasis:
    """Orthonormal basis of d states with human-readable labels."""

    dim: int
    states: tuple[PureState, ...]
    labels: tuple[str, ...]

    def __post_init__(self):
        states = tuple(self.states)
        labels = tuple(self.labels)
        if len(states) != self.dim or len(labels) != self.dim:
            raise ValueError("need exactly d states and d labels")
        for s in states:
            if s.dim != self.dim:
                raise ValueError("basis state dimension mismatch")
        gram = self.matrix.conj().T @ self.matrix
        if float(np.max(np.abs(gram - np.eye(self.dim)))) > STRUCT_TOL:
            raise ValueError("basis states are not orthonormal")
        object.__setattr__(self, "states", states)
        object.__setattr__(self, "labels", labels)

    @property
    def matrix(self) -> np.ndarray:
        """Unitary with the basis states as columns."""
        return np.column_stack([s.amps for s in self.states])

    def index_of(self, psi: PureState, tol: float = 1e-9) -> int:
        """Index of the basis state equal to ``psi`` up to global phase."""
        if psi.dim != self.dim:
            raise ValueError("dimension mismatch")
        overlaps = np.abs(self.matrix.conj().T @ psi.amps) ** 2
        best = int(np.argmax(overlaps))
        if abs(overlaps[best] - 1.0) > tol:
            raise ValueError("state is not an element of this basis")
        return best


def inner(a: PureState, b: PureState) -> complex:
    """Inner product <a|b> (conjugate-linear in the first argument)."""
    if a.dim != b.dim:
        raise ValueError(f"dimension mismatch: {a.dim} vs {b.dim}")
    return complex(np.vdot(a.amps, b.amps))


def basis_state(d: int, k: int) -> PureState:
    """Computational unit vector |k> in d dimensions."""
    if not 0 <= k < d:
        raise ValueError(f"level index {k} out of range for dimension {d}")
    amps = np.zeros(d, dtype=complex)
    amps[k] = 1.0
    return PureState(dim=d, amps=amps)


def basis_computational(d: int) -> LabeledBasis:
    """Computational basis {|0>, ..., |d-1>} with plain index labels."""
    if d < 2:
        raise ValueError(f"dimension must be >= 2, got {d}")
    return LabeledBasis(
        dim=d,
        states=tuple(basis_state(d, k) for k in range(d)),
        labels=tuple(str(k) for k in range(d)),
    )


#: Logical level order for the d=4 spin-orbit encoding:
#: |1> = R,+2   |2> = R,-2   |3> = L,+2   |4> = L,-2
_LOGICAL_LABELS = ("R,+2", "R,-2", "L,+2", "L,-2")


def basis_logical() -> LabeledBasis:
    """The d=4 separable "logic" basis: circular polarization x OAM m = +-2."""
    return LabeledBasis(
        dim=4,
        states=tuple(basis_state(4, k) for k in range(4)),
        labels=_LOGICAL_LABELS,
    )


def basis_four() -> LabeledBasis:
    """The d=4 basis of spin-orbit entangled states (basis "IV").

    States, in logical coordinates and with the sign order (+, -, +, -):

        (|R,+2> + |L,-2>)/sqrt2,  (|R,+2> - |L,-2>)/sqrt2,
        (|L,+2> + |R,-2>)/sqrt2,  (|L,+2> - |R,-2>)/sqrt2
    """
    r = 1 / np.sqrt(2)
    vectors = [
        (r, 0, 0, r),
        (r, 0, 0, -r),
        (0, r, r, 0),
        (0, -r, r, 0),
    ]
    labels = (
        "(R,+2 + L,-2)/√2",
        "(R,+2 - L,-2)/√2",
        "(L,+2 + R,-2)/√2",
        "(L,+2 - R,-2)/√2",
    )
    states = tuple(PureState(dim=4, amps=np.array(v, dtype=complex)) for v in vectors)
    return LabeledBasis(dim=4, states=states, labels=labels)


def basis_adapted_to(phi: PureState) -> LabeledBasis:
    """Orthonormal basis whose first element is ``phi``.

    The completion is deterministic: remaining columns come from a QR
    factorization seeded with the identity.
    """
    d = phi.dim
    cols = np.eye(d, dtype=complex)
    # Replace the column most parallel to phi, then re-orthogonalize.
    overlaps = np.abs(cols.conj().T @ phi.amps)
    cols = np.delete(cols, int(np.argmax(overlaps)), axis=1)
    block = np.column_stack([phi.amps, cols])
    q, _ = np.linalg.qr(block)
    # QR may flip the first column's phase; pin it back to phi exactly.
    states = [phi] + [PureState.normalized(q[:, j]) for j in range(1, d)]
    labels = ("phi",) + tuple(f"perp{j}" for j in range(1, d))
    return LabeledBasis(dim=d, states=tuple(states), labels=labels)


def unbiasedness_check(b1: LabeledBasis, b2: LabeledBasis, tol: float) -> bool:
    """True iff |<i|j>|^2 = 1/d within ``tol`` for every cross pair."""
    if b1.dim != b2.dim:
        raise ValueError(f"dimension mismatch: {b1.dim} vs {b2.dim}")
    overlaps = np.abs(b1.matrix.conj().T @ b2.matrix) ** 2
    return bool(np.all(np.abs(overlaps - 1.0 / b1.dim) <= tol))


def maximally_mixed(d: int) -> DensityMatrix:
    """The fully mixed state I_d / d."""
    if d < 2:
        raise ValueError(f"dimension must be >= 2, got {d}")
    return DensityMatrix(dim=d, mat=np.eye(d, dtype=complex) / d)


def fidelity_pure(rho: DensityMatrix, psi: PureState) -> float:
    """Overlap <psi|rho|psi>; real for Hermitian rho, invariant under global phase."""
    if rho.dim != psi.dim:
        raise ValueError(f"dimension mismatch: {rho.dim} vs {psi.dim}")
    return float(np.real(np.vdot(psi.amps, rho.mat @ psi.amps)))
