"""Exact finite-dimensional quantum state algebra.

State vectors, density operators, projective (von Neumann) measurement,
tensor products, partial traces, and local unitaries acting on an auxiliary
subsystem.  All values are immutable after construction and validated at
construction time, so anything that survives the constructors can be trusted
downstream.

Tolerances: algebraic identities (norms, orthogonality, hermiticity) are held
to ``ATOL_ALGEBRA``; spectral checks (positivity, unitarity) to ``ATOL_SPECTRAL``,
which leaves headroom for eigensolver noise in double precision.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    DegenerateStateError,
    DomainError,
    InvalidBasisError,
    InvalidOperatorError,
    NormalizationError,
    ShapeError,
)

ATOL_ALGEBRA = 1e-12
ATOL_SPECTRAL = 1e-9


def _frozen(array: np.ndarray) -> np.ndarray:
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class StateVector:
    """Normalized complex amplitude vector over an orthonormal box basis."""

    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=complex).reshape(-1)
        if amps.size < 2:
            raise ShapeError(f"state dimension must be >= 2, got {amps.size}")
        norm = float(np.linalg.norm(amps))
        if abs(norm - 1.0) > ATOL_ALGEBRA:
            raise NormalizationError(f"state norm is {norm!r}, expected 1")
        object.__setattr__(self, "amplitudes", _frozen(amps))

    @property
    def dim(self) -> int:
        return self.amplitudes.size

    def inner(self, other: "StateVector") -> complex:
        """Return the inner product <self|other>."""
        if other.dim != self.dim:
            raise ShapeError(f"dimension mismatch: {self.dim} vs {other.dim}")
        return complex(np.vdot(self.amplitudes, other.amplitudes))

    def projector(self) -> np.ndarray:
        """Return the rank-1 projector |psi><psi| as a plain array."""
        return np.outer(self.amplitudes, self.amplitudes.conj())


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Hermitian, unit-trace, positive semidefinite operator."""

    matrix: np.ndarray

    def __post_init__(self):
        mat = np.asarray(self.matrix, dtype=complex)
        if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
            raise ShapeError(f"density matrix must be square, got shape {mat.shape}")
        if mat.shape[0] < 2:
            raise ShapeError(f"density matrix dimension must be >= 2, got {mat.shape[0]}")
        herm_gap = float(np.max(np.abs(mat - mat.conj().T)))
        if herm_gap > ATOL_ALGEBRA:
            raise InvalidOperatorError(f"not Hermitian: max |rho_ij - conj(rho_ji)| = {herm_gap!r}")
        trace = complex(np.trace(mat))
        if abs(trace - 1.0) > ATOL_SPECTRAL:
            raise NormalizationError(f"trace is {trace!r}, expected 1")
        min_eig = float(np.min(np.linalg.eigvalsh(mat)))
        if min_eig < -ATOL_SPECTRAL:
            raise InvalidOperatorError(f"not positive semidefinite: min eigenvalue {min_eig!r}")
        object.__setattr__(self, "matrix", _frozen(mat))

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def expectation(self, psi: StateVector) -> float:
        """Return <psi|rho|psi> as a real number."""
        if psi.dim != self.dim:
            raise ShapeError(f"dimension mismatch: {self.dim} vs {psi.dim}")
        return float(np.real(np.vdot(psi.amplitudes, self.matrix @ psi.amplitudes)))


@dataclass(frozen=True, eq=False)
class MeasurementBasis:
    """Ordered orthonormal basis (possibly of a subspace) for a von Neumann measurement."""

    dim: int
    vectors: tuple[StateVector, ...]

    def __post_init__(self):
        vectors = tuple(self.vectors)
        if not vectors:
            raise InvalidBasisError("basis needs at least one vector")
        if len(vectors) > self.dim:
            raise InvalidBasisError(f"{len(vectors)} vectors cannot be orthonormal in dimension {self.dim}")
        for v in vectors:
            if v.dim != self.dim:
                raise ShapeError(f"basis vector of dim {v.dim} in a dim-{self.dim} basis")
        stacked = np.array([v.amplitudes for v in vectors])
        gram = stacked.conj() @ stacked.T
        gap = float(np.max(np.abs(gram - np.eye(len(vectors)))))
        if gap > ATOL_ALGEBRA:
            raise InvalidBasisError(f"basis not orthonormal: max |<v_i|v_j> - delta_ij| = {gap!r}")
        object.__setattr__(self, "vectors", vectors)

    def __len__(self) -> int:
        return len(self.vectors)


def basis_ket(dim: int, index: int) -> StateVector:
    """Return the computational basis state |index> in the given dimension."""
    if not 0 <= index < dim:
        raise DomainError(f"basis index {index} out of range for dimension {dim}")
    amps = np.zeros(dim, dtype=complex)
    amps[index] = 1.0
    return StateVector(amps)


def superpose(coeffs) -> StateVector:
    """Normalize a coefficient vector into a state.

    Raises DegenerateStateError when every coefficient is zero.
    """
    amps = np.asarray(coeffs, dtype=complex).reshape(-1)
    norm = float(np.linalg.norm(amps))
    if norm == 0.0:
        raise DegenerateStateError("cannot normalize an all-zero coefficient vector")
    return StateVector(amps / norm)


def density_from_pure(psi: StateVector) -> DensityMatrix:
    """Return the rank-1 density operator |psi><psi|."""
    return DensityMatrix(psi.projector())


def mix(parts) -> DensityMatrix:
    """Convex combination of density operators.

    ``parts`` is an iterable of ``(weight, DensityMatrix)`` with nonnegative
    weights summing to 1.
    """
    parts = list(parts)
    if not parts:
        raise DomainError("mix() needs at least one component")
    weights = np.array([w for w, _ in parts], dtype=float)
    if np.any(weights < -ATOL_ALGEBRA):
        raise DomainError(f"negative mixture weight: {weights.min()!r}")
    total = float(weights.sum())
    if abs(total - 1.0) > ATOL_SPECTRAL:
        raise NormalizationError(f"mixture weights sum to {total!r}, expected 1")
    dim = parts[0][1].dim
    out = np.zeros((dim, dim), dtype=complex)
    for w, rho in parts:
        if rho.dim != dim:
            raise ShapeError(f"mixture component of dim {rho.dim}, expected {dim}")
        out += w * rho.matrix
    return DensityMatrix(out)


def measure_projective(rho: DensityMatrix, basis: MeasurementBasis):
    """Von Neumann measurement of ``rho`` in ``basis``.

    Returns a list of ``(probability, post_state)`` pairs, one per basis
    vector, where the probability of outcome i is <v_i|rho|v_i> and the
    post-measurement state is v_i itself.  For a complete basis the
    probabilities sum to 1; for a subspace basis they sum to the trace of
    rho restricted to the span.
    """
    if basis.dim != rho.dim:
        raise ShapeError(f"basis dim {basis.dim} incompatible with state dim {rho.dim}")
    return [(rho.expectation(v), v) for v in basis.vectors]


def tensor(a: StateVector, b: StateVector) -> StateVector:
    """Tensor product |a> (x) |b| with row-major, system-major indexing."""
    return StateVector(np.kron(a.amplitudes, b.amplitudes))


def partial_trace(rho: DensityMatrix, dims: tuple[int, int], keep: int) -> DensityMatrix:
    """Reduced density operator of one subsystem of a bipartite state.

    ``dims = (d_sys, d_aux)`` factorizes the joint space with the system
    index varying slowest; ``keep`` selects the surviving subsystem
    (0 = system, 1 = auxiliary).
    """
    d_sys, d_aux = dims
    if d_sys * d_aux != rho.dim:
        raise ShapeError(f"dims {dims} do not factor dimension {rho.dim}")
    if keep not in (0, 1):
        raise DomainError(f"keep must be 0 (system) or 1 (aux), got {keep}")
    blocks = rho.matrix.reshape(d_sys, d_aux, d_sys, d_aux)
    if keep == 0:
        reduced = np.einsum("iaja->ij", blocks)
    else:
        reduced = np.einsum("iaib->ab", blocks)
    return DensityMatrix(reduced)


def apply_local_unitary_aux(
    rho_joint: DensityMatrix, u: np.ndarray, dims: tuple[int, int]
) -> DensityMatrix:
    """Apply (I (x) U) rho (I (x) U)^dagger with U acting on the auxiliary factor."""
    d_sys, d_aux = dims
    if d_sys * d_aux != rho_joint.dim:
        raise ShapeError(f"dims {dims} do not factor dimension {rho_joint.dim}")
    u = np.asarray(u, dtype=complex)
    if u.shape != (d_aux, d_aux):
        raise ShapeError(f"unitary must be {d_aux}x{d_aux}, got {u.shape}")
    gap = float(np.max(np.abs(u.conj().T @ u - np.eye(d_aux))))
    if gap > ATOL_SPECTRAL:
        raise InvalidOperatorError(f"operator not unitary: max |U^dag U - I| = {gap!r}")
    full = np.kron(np.eye(d_sys), u)
    return DensityMatrix(full @ rho_joint.matrix @ full.conj().T)


def rotated_basis(alpha: float) -> MeasurementBasis:
    """Two-dimensional basis rotated by ``alpha`` in the real plane.

    Vectors are (cos a, sin a) and (-sin a, cos a); alpha = 0 reproduces the
    computational basis.
    """
    c, s = np.cos(alpha), np.sin(alpha)
    return MeasurementBasis(
        2,
        (StateVector(np.array([c, s], dtype=complex)),
         StateVector(np.array([-s, c], dtype=complex))),
    )


def random_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-random unitary via QR of a complex Ginibre matrix."""
    z = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    q, r = np.linalg.qr(z)
    phases = np.diag(r).copy()
    phases /= np.abs(phases)
    return q * phases


def states_equal_up_to_phase(a: StateVector, b: StateVector, atol: float = ATOL_ALGEBRA) -> bool:
    """Physical equality of pure states: projectors match entrywise."""
    if a.dim != b.dim:
        return False
    return bool(np.max(np.abs(a.projector() - b.projector())) <= atol)
