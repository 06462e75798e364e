"""Entanglement witnesses: construction, Pauli-weight decomposition, exact
expected payoff -Tr(rho W), and sampling-based separability checks.

A witness is stored exactly as defined, together with its coefficient table
w such that W = sum_t w[t] sigma_t; nothing is renormalized behind the
caller's back, so payoff values come out exactly as the defining constants
dictate.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import qcore

WEIGHT_CONSISTENCY_TOL = 1e-12
SEPARABLE_FLOOR = 1e-9
NPT_THRESHOLD = -1e-9


class PPTStateError(ValueError):
    """Raised when a witness is requested for a state with positive partial
    transpose (for two qubits: a separable state)."""


@dataclass(frozen=True, eq=False)
class PauliWeights:
    """Real coefficient table over Pauli label tuples, shape (4,)*n."""

    n_qubits: int
    table: np.ndarray

    def __post_init__(self):
        t = np.asarray(self.table, dtype=np.float64)
        if t.shape != (4,) * self.n_qubits:
            raise ValueError(f"expected shape {(4,) * self.n_qubits}, got {t.shape}")
        if not np.all(np.isfinite(t)):
            raise ValueError("weights must be finite")
        if not np.any(t):
            raise ValueError("weights must have at least one nonzero entry")
        t = t.copy()
        t.setflags(write=False)
        object.__setattr__(self, "table", t)

    def __getitem__(self, labels) -> float:
        return float(self.table[labels])

    def to_operator(self) -> np.ndarray:
        basis, _ = qcore.pauli_basis(self.n_qubits)
        return np.einsum("k,kij->ij", self.table.ravel(), basis)


@dataclass(frozen=True, eq=False)
class Witness:
    """Hermitian witness operator with its cached Pauli decomposition."""

    operator: np.ndarray
    weights: PauliWeights

    def __post_init__(self):
        op = np.asarray(self.operator, dtype=np.complex128)
        rebuilt = self.weights.to_operator()
        dev = np.max(np.abs(op - rebuilt))
        if dev > WEIGHT_CONSISTENCY_TOL:
            raise ValueError(f"operator and weights disagree (max deviation {dev:.3e})")
        op = op.copy()
        op.setflags(write=False)
        object.__setattr__(self, "operator", op)

    @property
    def n_qubits(self) -> int:
        return self.weights.n_qubits

    @classmethod
    def from_weights(cls, weights: PauliWeights) -> "Witness":
        return cls(weights.to_operator(), weights)

    @classmethod
    def from_operator(cls, op) -> "Witness":
        op = np.asarray(op, dtype=np.complex128)
        n = op.shape[0].bit_length() - 1
        table = qcore.pauli_traces(op, n) / (2.0 ** n)
        return cls(op, PauliWeights(n, table))


@dataclass(frozen=True)
class CheckReport:
    """Result of probing a witness against its target state and a sample of
    separable states."""

    payoff_on_target: float
    min_separable_value: float
    n_samples: int
    verdict: bool


# ---------------------------------------------------------------------------
# Built-in witnesses
# ---------------------------------------------------------------------------

def werner_witness() -> Witness:
    """(1/sqrt(3)) (I - xx + yy - zz); detects Werner states with z > 1/3.

    The prefactor makes the diagonal-correlation part a unit vector under the
    trace inner product, so the expected payoff equals the Euclidean distance
    from the state's diagonal projection to the Tr(rho W) = 0 plane.
    """
    w = np.zeros((4, 4))
    f = 1.0 / np.sqrt(3.0)
    w[0, 0] = f
    w[1, 1] = -f
    w[2, 2] = f
    w[3, 3] = -f
    return Witness.from_weights(PauliWeights(2, w))


def chsh_witness(a, a2, b, b2, sign: int = +1) -> Witness:
    """2 I +/- (A(x)B + A'(x)B + A(x)B' - A'(x)B') from four spin observables.

    Nonnegative on every separable state because the bracketed combination is
    bounded by 2 in absolute value on local models.
    """
    if sign not in (+1, -1):
        raise ValueError("sign must be +1 or -1")
    obs = [qcore.validate_spin_observable(o, n) for o, n in
           ((a, "A"), (a2, "A'"), (b, "B"), (b2, "B'"))]
    a, a2, b, b2 = obs
    bell = np.kron(a, b) + np.kron(a2, b) + np.kron(a, b2) - np.kron(a2, b2)
    return Witness.from_operator(2.0 * np.eye(4) + sign * bell)


def xz_chsh_observables() -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """The x/z-plane setting A = x, A' = z, B = -(x+z)/sqrt(2), B' = (z-x)/sqrt(2)."""
    sx, sz = qcore.PAULIS[1], qcore.PAULIS[3]
    rt2 = np.sqrt(2.0)
    return sx, sz, -(sx + sz) / rt2, (sz - sx) / rt2


def fixed_chsh_witness() -> Witness:
    """I - (xx + zz)/sqrt(2): half the CHSH witness of the x/z observables."""
    w = np.zeros((4, 4))
    w[0, 0] = 1.0
    w[1, 1] = -1.0 / np.sqrt(2.0)
    w[3, 3] = -1.0 / np.sqrt(2.0)
    return Witness.from_weights(PauliWeights(2, w))


def strengthened_chsh_witness() -> Witness:
    """(1/sqrt(2)) (I - xx - zz): tightens the x/z CHSH bound from 2 to sqrt(2),
    lowering the Werner detection threshold from sqrt(2)/2 to 1/2."""
    w = np.zeros((4, 4))
    f = 1.0 / np.sqrt(2.0)
    w[0, 0] = f
    w[1, 1] = -f
    w[3, 3] = -f
    return Witness.from_weights(PauliWeights(2, w))


def ppt_witness(rho: qcore.DensityMatrix) -> Witness:
    """Witness tailored to an entangled two-qubit state from the most negative
    eigenvector phi of its partial transpose: W = (|phi><phi|)^T_B.

    Then Tr(rho W) equals that negative eigenvalue, while Tr(sigma W) >= 0 for
    every separable sigma.  Raises PPTStateError when the partial transpose
    has no negative eigenvalue.
    """
    if rho.dim != 4:
        raise ValueError("ppt witness construction needs a two-qubit state")
    pt = qcore.partial_transpose(rho, "B")
    vals, vecs = qcore.hermitian_eigensystem(pt)
    if vals[0] >= NPT_THRESHOLD:
        raise PPTStateError("state is PPT; no witness of this form exists")
    phi = vecs[:, 0]
    proj = np.outer(phi, phi.conj())
    return Witness.from_operator(qcore.partial_transpose(proj, "B"))


# ---------------------------------------------------------------------------
# Payoff and separability checks
# ---------------------------------------------------------------------------

def expected_payoff(rho: qcore.DensityMatrix, witness: Witness) -> float:
    """Exact average payoff -Tr(rho W)."""
    if rho.dim != witness.operator.shape[0]:
        raise ValueError(
            f"dimension mismatch: state {rho.dim}, witness {witness.operator.shape[0]}"
        )
    val = -np.trace(rho.matrix @ witness.operator)
    if abs(val.imag) > 1e-10:
        raise ValueError(f"payoff has imaginary residue {val.imag:.3e}")
    return float(val.real)


def random_separable(rng: np.random.Generator, k: int, n_qubits: int = 2
                     ) -> qcore.DensityMatrix:
    """Convex mixture of k random product states.

    Each component is a tensor product of Haar-random single-qubit pure
    states; the mixing weights are uniform on the simplex.
    """
    if k < 1:
        raise ValueError("need at least one product component")
    weights = rng.dirichlet(np.ones(k))
    dim = 2 ** n_qubits
    m = np.zeros((dim, dim), dtype=np.complex128)
    for w in weights:
        vec = qcore.random_pure_qubit(rng)
        for _ in range(n_qubits - 1):
            vec = np.kron(vec, qcore.random_pure_qubit(rng))
        m += w * np.outer(vec, vec.conj())
    return qcore.DensityMatrix(m)


def check_witness(witness: Witness, rho: qcore.DensityMatrix, n_samples: int,
                  rng: np.random.Generator) -> CheckReport:
    """Evaluate a witness on its target and on sampled separable states.

    The verdict is positive only when the target payoff is positive and no
    sampled separable state drove Tr(sigma W) below -1e-9.
    """
    if n_samples < 1:
        raise ValueError("need at least one separable sample")
    payoff = expected_payoff(rho, witness)
    min_val = np.inf
    for _ in range(n_samples):
        sigma = random_separable(rng, k=int(rng.integers(1, 5)), n_qubits=witness.n_qubits)
        val = float(np.real(np.trace(sigma.matrix @ witness.operator)))
        min_val = min(min_val, val)
    return CheckReport(
        payoff_on_target=payoff,
        min_separable_value=float(min_val),
        n_samples=n_samples,
        verdict=bool(payoff > 0.0 and min_val >= -SEPARABLE_FLOOR),
    )
