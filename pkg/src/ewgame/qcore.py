"""Dense complex operator algebra for one to three qubits.

Pauli strings and their tensor products, named two-qubit states, validated
density matrices, partial transposition, a small Hermitian eigensolver, and
the maps between operators and their Pauli-basis coefficient tables.
Everything is a plain complex128 ndarray except the few types that carry
validated structure.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product

import numpy as np

from . import backends

HERMITICITY_TOL = 1e-10
TRACE_TOL = 1e-10
PSD_TOL = 1e-10
EIG_RESIDUAL_TOL = 1e-9
ROUNDTRIP_TOL = 1e-12

PAULIS = np.array(
    [
        [[1, 0], [0, 1]],
        [[0, 1], [1, 0]],
        [[0, -1j], [1j, 0]],
        [[1, 0], [0, -1]],
    ],
    dtype=np.complex128,
)
PAULIS.setflags(write=False)


def pauli_string(labels) -> np.ndarray:
    """Tensor product of single-qubit Paulis, e.g. (1, 3) -> sigma_x (x) sigma_z.

    Labels index {0: I, 1: x, 2: y, 3: z}; one to three labels are supported.
    """
    labels = tuple(int(l) for l in labels)
    if not 1 <= len(labels) <= 3:
        raise ValueError(f"need 1 to 3 labels, got {len(labels)}")
    if any(l not in (0, 1, 2, 3) for l in labels):
        raise ValueError(f"labels must be in 0..3, got {labels}")
    out = PAULIS[labels[0]]
    for l in labels[1:]:
        out = np.kron(out, PAULIS[l])
    return out


@lru_cache(maxsize=4)
def pauli_basis(n_qubits: int):
    """All 4^n Pauli strings stacked as an array plus their label tuples.

    Row order is np.ndindex order over (4,)*n, i.e. the raveled order of a
    coefficient table of shape (4,)*n.
    """
    labels = list(product(range(4), repeat=n_qubits))
    stack = np.stack([pauli_string(l) for l in labels])
    stack.setflags(write=False)
    return stack, labels


def _as_operator(matrix, name: str = "operator") -> np.ndarray:
    m = np.asarray(matrix, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"{name} must be a square matrix, got shape {m.shape}")
    if m.shape[0] not in (2, 4, 8):
        raise ValueError(f"{name} dimension must be 2, 4 or 8, got {m.shape[0]}")
    if not np.all(np.isfinite(m)):
        raise ValueError(f"{name} contains non-finite entries")
    return m


def _check_hermitian(m: np.ndarray, name: str = "operator") -> np.ndarray:
    dev = np.max(np.abs(m - m.conj().T))
    if dev > HERMITICITY_TOL:
        raise ValueError(f"{name} is not Hermitian (max deviation {dev:.3e})")
    return m


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """A validated quantum state: Hermitian, unit trace, positive semidefinite.

    Eigenvalues down to -1e-10 are tolerated as arithmetic noise; anything
    more negative is rejected.
    """

    matrix: np.ndarray

    def __post_init__(self):
        m = _as_operator(self.matrix, "density matrix")
        _check_hermitian(m, "density matrix")
        tr = m.trace()
        if abs(tr - 1.0) > TRACE_TOL:
            raise ValueError(f"density matrix trace is {tr:.12g}, expected 1")
        vals, _ = backends.jacobi_eigh((m + m.conj().T) / 2.0)
        if vals[0] < -PSD_TOL:
            raise ValueError(
                f"density matrix has negative eigenvalue {vals[0]:.3e}"
            )
        m = m.copy()
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def n_qubits(self) -> int:
        return self.dim.bit_length() - 1

    def purity(self) -> float:
        return float(np.real(np.trace(self.matrix @ self.matrix)))


@dataclass(frozen=True, eq=False)
class CorrelationTable:
    """Pauli-basis coordinates of a state: r[t] = Tr(rho * sigma_t)."""

    n_qubits: int
    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=np.float64)
        if v.shape != (4,) * self.n_qubits:
            raise ValueError(f"expected shape {(4,) * self.n_qubits}, got {v.shape}")
        if abs(v[(0,) * self.n_qubits] - 1.0) > TRACE_TOL:
            raise ValueError("identity coefficient must be 1 for a unit-trace state")
        if np.max(np.abs(v)) > 1.0 + 1e-9:
            raise ValueError("correlation values must lie in [-1, 1]")
        v = v.copy()
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    def __getitem__(self, labels) -> float:
        return float(self.values[labels])


def pauli_traces(matrix, n_qubits: int | None = None) -> np.ndarray:
    """Raw trace table Tr(M * sigma_t) for every Pauli string, shape (4,)*n.

    The imaginary residue must stay below 1e-10 (a larger one means the input
    was not Hermitian); it is discarded after the check.
    """
    m = np.asarray(matrix, dtype=np.complex128)
    if n_qubits is None:
        n_qubits = m.shape[0].bit_length() - 1
    basis, _ = pauli_basis(n_qubits)
    traces = np.einsum("kij,ji->k", basis, m)
    resid = np.max(np.abs(traces.imag))
    if resid > HERMITICITY_TOL:
        raise ValueError(f"imaginary residue {resid:.3e} in Pauli traces; input not Hermitian")
    return traces.real.reshape((4,) * n_qubits)


def pauli_coefficients(rho: DensityMatrix) -> CorrelationTable:
    """Correlation table r[t] = Tr(rho * sigma_t) of a validated state."""
    return CorrelationTable(rho.n_qubits, pauli_traces(rho.matrix, rho.n_qubits))


def from_pauli_coefficients(table) -> np.ndarray:
    """Inverse of pauli_coefficients: rebuild 2^-n * sum r[t] sigma_t."""
    if isinstance(table, CorrelationTable):
        values = table.values
        n = table.n_qubits
    else:
        values = np.asarray(table, dtype=np.float64)
        n = values.ndim
        if values.shape != (4,) * n:
            raise ValueError(f"coefficient table must have shape (4,)*n, got {values.shape}")
    basis, _ = pauli_basis(n)
    return np.einsum("k,kij->ij", values.ravel(), basis) / (2.0 ** n)


def partial_transpose(state, subsystem: str = "B") -> np.ndarray:
    """Partial transpose of a two-qubit operator over subsystem "A" or "B"."""
    m = state.matrix if isinstance(state, DensityMatrix) else np.asarray(state, dtype=np.complex128)
    if m.shape != (4, 4):
        raise ValueError(f"partial transpose is defined for 4x4 operators, got {m.shape}")
    if subsystem not in ("A", "B"):
        raise ValueError(f"subsystem must be 'A' or 'B', got {subsystem!r}")
    r = m.reshape(2, 2, 2, 2)
    axes = (2, 1, 0, 3) if subsystem == "A" else (0, 3, 2, 1)
    return np.ascontiguousarray(r.transpose(axes).reshape(4, 4))


def hermitian_eigensystem(op) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues (ascending) and orthonormal eigenvector columns of a
    Hermitian operator, computed by cyclic Jacobi rotations."""
    m = _as_operator(op)
    _check_hermitian(m)
    return backends.jacobi_eigh((m + m.conj().T) / 2.0)


def trace_distance(a, b) -> float:
    """Half the sum of absolute eigenvalues of (a - b)."""
    ma = a.matrix if isinstance(a, DensityMatrix) else np.asarray(a, dtype=np.complex128)
    mb = b.matrix if isinstance(b, DensityMatrix) else np.asarray(b, dtype=np.complex128)
    if ma.shape != mb.shape:
        raise ValueError(f"dimension mismatch: {ma.shape} vs {mb.shape}")
    vals, _ = hermitian_eigensystem(ma - mb)
    return float(0.5 * np.sum(np.abs(vals)))


# ---------------------------------------------------------------------------
# Named states and random ensembles
# ---------------------------------------------------------------------------

def bell_psi_plus() -> DensityMatrix:
    """The maximally entangled two-qubit state (|00> + |11>) / sqrt(2)."""
    vec = np.array([1, 0, 0, 1], dtype=np.complex128) / np.sqrt(2.0)
    return DensityMatrix(np.outer(vec, vec.conj()))


def make_werner(z: float) -> DensityMatrix:
    """Isotropic mixture (1-z)/4 * I + z |psi+><psi+| for z in [0, 1].

    Entangled exactly when z > 1/3.
    """
    z = float(z)
    if not 0.0 <= z <= 1.0:
        raise ValueError(f"werner parameter must be in [0, 1], got {z}")
    return DensityMatrix((1.0 - z) / 4.0 * np.eye(4) + z * bell_psi_plus().matrix)


def maximally_mixed(n_qubits: int) -> DensityMatrix:
    d = 2 ** n_qubits
    return DensityMatrix(np.eye(d, dtype=np.complex128) / d)


def random_density_matrix(rng: np.random.Generator, dim: int) -> DensityMatrix:
    """Hilbert-Schmidt random state: G G^dag / Tr for complex Gaussian G."""
    g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    m = g @ g.conj().T
    return DensityMatrix(m / m.trace())


def random_pure_qubit(rng: np.random.Generator) -> np.ndarray:
    """Haar-random single-qubit pure state as a normalized 2-vector."""
    v = rng.normal(size=2) + 1j * rng.normal(size=2)
    return v / np.linalg.norm(v)


def validate_spin_observable(op, name: str = "observable") -> np.ndarray:
    """Check a single-qubit observable is Hermitian with spectrum {-1, +1}."""
    m = np.asarray(op, dtype=np.complex128)
    if m.shape != (2, 2):
        raise ValueError(f"{name} must be 2x2, got {m.shape}")
    _check_hermitian(m, name)
    if np.max(np.abs(m @ m - np.eye(2))) > 1e-9:
        raise ValueError(f"{name} must square to the identity")
    if abs(m.trace()) > 1e-9:
        raise ValueError(f"{name} must be traceless (eigenvalues -1 and +1)")
    return m
