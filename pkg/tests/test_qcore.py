import numpy as np
import pytest

import ewgame as ew
from ewgame import qcore

SX = np.array([[0, 1], [1, 0]], dtype=complex)
SY = np.array([[0, -1j], [1j, 0]], dtype=complex)
SZ = np.array([[1, 0], [0, -1]], dtype=complex)


class TestPauliString:
    def test_single_x(self):
        assert np.array_equal(ew.pauli_string((1,)), SX)

    def test_identity_pair(self):
        assert np.array_equal(ew.pauli_string((0, 0)), np.eye(4))

    def test_zz_diagonal(self):
        # direct tensor-product evaluation
        assert np.array_equal(ew.pauli_string((3, 3)), np.diag([1, -1, -1, 1]).astype(complex))
        assert np.array_equal(ew.pauli_string((3, 3)), np.kron(SZ, SZ))

    def test_label_out_of_range(self):
        with pytest.raises(ValueError):
            ew.pauli_string((4,))
        with pytest.raises(ValueError):
            ew.pauli_string(())
        with pytest.raises(ValueError):
            ew.pauli_string((0, 0, 0, 0))

    @pytest.mark.parametrize("n", [2, 3])
    def test_orthogonality_exhaustive(self, n):
        basis, labels = qcore.pauli_basis(n)
        for i, a in enumerate(basis):
            for j, b in enumerate(basis):
                expect = 2.0 ** n if i == j else 0.0
                assert abs(np.trace(a @ b) - expect) < 1e-12

    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_hermitian_and_involutive(self, n, rng):
        for _ in range(10):
            labels = tuple(rng.integers(0, 4, size=n))
            m = ew.pauli_string(labels)
            assert np.max(np.abs(m - m.conj().T)) == 0.0
            assert np.max(np.abs(m @ m - np.eye(2 ** n))) < 1e-15


class TestNamedStates:
    def test_werner_zero_is_maximally_mixed(self):
        assert np.allclose(ew.make_werner(0.0).matrix, np.eye(4) / 4, atol=1e-15)

    def test_werner_one_is_pure_bell(self):
        rho = ew.make_werner(1.0)
        assert abs(rho.purity() - 1.0) < 1e-12
        assert np.allclose(rho.matrix, ew.bell_psi_plus().matrix, atol=1e-15)

    def test_werner_boundary_partial_transpose_eigenvalue(self):
        # at the separability threshold the partial transpose touches zero
        pt = ew.partial_transpose(ew.make_werner(1.0 / 3.0))
        assert abs(np.linalg.eigvalsh(pt)[0]) < 1e-12

    @pytest.mark.parametrize("z", [-0.1, 1.1, 2.0])
    def test_werner_domain(self, z):
        with pytest.raises(ValueError):
            ew.make_werner(z)


class TestDensityMatrixValidation:
    def test_random_states_always_valid(self, rng):
        for _ in range(1000):
            dim = int(rng.choice([2, 4, 8]))
            ew.random_density_matrix(rng, dim)  # raises on any violation

    def test_rejects_non_hermitian(self):
        m = np.eye(4, dtype=complex) / 4
        m[0, 1] = 0.1
        with pytest.raises(ValueError, match="Hermitian"):
            ew.DensityMatrix(m)

    def test_rejects_wrong_trace(self):
        with pytest.raises(ValueError, match="trace"):
            ew.DensityMatrix(np.eye(4, dtype=complex) / 2)

    def test_rejects_negative_eigenvalue(self):
        m = np.diag([1.1, 0.0, 0.0, -0.1]).astype(complex)
        with pytest.raises(ValueError, match="negative eigenvalue"):
            ew.DensityMatrix(m)

    def test_tolerates_rounding_scale_negativity(self):
        m = np.diag([1.0 + 5e-11, 0.0, 0.0, -5e-11]).astype(complex)
        ew.DensityMatrix(m)

    def test_rejects_non_finite(self):
        m = np.eye(4, dtype=complex) / 4
        m[0, 0] = np.nan
        with pytest.raises(ValueError, match="finite"):
            ew.DensityMatrix(m)

    def test_matrix_is_frozen(self):
        rho = ew.make_werner(0.5)
        with pytest.raises(ValueError):
            rho.matrix[0, 0] = 0.3


class TestPauliCoefficients:
    def test_maximally_mixed(self):
        r = ew.pauli_coefficients(ew.maximally_mixed(2))
        assert r[0, 0] == pytest.approx(1.0, abs=1e-15)
        values = r.values.copy()
        values[0, 0] = 0.0
        assert np.max(np.abs(values)) < 1e-15

    def test_bell_state_correlations(self):
        # direct trace evaluation oracle
        rho = ew.bell_psi_plus()
        r = ew.pauli_coefficients(rho)
        for labels in np.ndindex(4, 4):
            direct = np.trace(rho.matrix @ ew.pauli_string(labels)).real
            assert r[labels] == pytest.approx(direct, abs=1e-14)
        assert r[1, 1] == pytest.approx(1.0, abs=1e-14)
        assert r[2, 2] == pytest.approx(-1.0, abs=1e-14)
        assert r[3, 3] == pytest.approx(1.0, abs=1e-14)

    def test_werner_scales_linearly(self):
        # linearity of the trace: r(werner(z)) interpolates mixed <-> Bell
        r_bell = ew.pauli_coefficients(ew.bell_psi_plus()).values
        for z in (0.25, 0.5, 0.9):
            r = ew.pauli_coefficients(ew.make_werner(z)).values
            expect = r_bell * z
            expect[0, 0] = 1.0
            assert np.max(np.abs(r - expect)) < 1e-12

    def test_roundtrip_random_states(self, rng):
        for _ in range(1000):
            rho = ew.random_density_matrix(rng, 4)
            back = ew.from_pauli_coefficients(ew.pauli_coefficients(rho))
            assert np.max(np.abs(back - rho.matrix)) < 1e-12

    def test_from_identity_coefficient_only(self):
        table = np.zeros((4, 4))
        table[0, 0] = 1.0
        assert np.allclose(ew.from_pauli_coefficients(table), np.eye(4) / 4, atol=1e-15)

    def test_random_table_gives_hermitian(self, rng):
        table = rng.uniform(-1, 1, size=(4, 4))
        m = ew.from_pauli_coefficients(table)
        assert np.max(np.abs(m - m.conj().T)) < 1e-14


class TestPartialTranspose:
    def test_identity_fixed_point(self):
        assert np.array_equal(ew.partial_transpose(np.eye(4) / 4), np.eye(4) / 4)

    def test_bell_state_eigenvalues(self):
        pt = ew.partial_transpose(ew.bell_psi_plus())
        vals = np.linalg.eigvalsh(pt)  # independent eigensolver oracle
        assert np.allclose(np.sort(vals), [-0.5, 0.5, 0.5, 0.5], atol=1e-12)

    def test_involution_trace_hermiticity(self, rng):
        for sub in ("A", "B"):
            for _ in range(50):
                rho = ew.random_density_matrix(rng, 4)
                pt = ew.partial_transpose(rho, sub)
                assert np.max(np.abs(ew.partial_transpose(pt, sub) - rho.matrix)) < 1e-15
                assert abs(np.trace(pt) - 1.0) < 1e-12
                assert np.max(np.abs(pt - pt.conj().T)) < 1e-12

    def test_product_state_stays_psd(self, rng):
        for _ in range(50):
            rho = ew.random_separable(rng, k=1)
            vals = np.linalg.eigvalsh(ew.partial_transpose(rho))
            assert vals[0] > -1e-12

    def test_dimension_guard(self):
        with pytest.raises(ValueError):
            ew.partial_transpose(np.eye(8) / 8)


class TestEigensystem:
    def test_sigma_z(self):
        vals, _ = ew.hermitian_eigensystem(SZ)
        assert np.allclose(vals, [-1.0, 1.0], atol=1e-14)

    def test_rank_one_projector(self):
        vals, _ = ew.hermitian_eigensystem(ew.bell_psi_plus().matrix)
        assert np.allclose(vals, [0, 0, 0, 1], atol=1e-12)

    def test_partial_transpose_of_bell(self):
        vals, _ = ew.hermitian_eigensystem(ew.partial_transpose(ew.bell_psi_plus()))
        assert np.allclose(vals, [-0.5, 0.5, 0.5, 0.5], atol=1e-12)

    @pytest.mark.parametrize("dim", [2, 4, 8])
    def test_against_lapack_and_contracts(self, dim, rng):
        for _ in range(60):
            g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
            h = (g + g.conj().T) / 2
            vals, vecs = ew.hermitian_eigensystem(h)
            assert np.all(np.diff(vals) >= 0)
            assert np.allclose(vals, np.linalg.eigvalsh(h), atol=1e-10)
            # residual, orthonormality, reconstruction
            assert np.max(np.abs(h @ vecs - vecs * vals)) < 1e-9
            assert np.max(np.abs(vecs.conj().T @ vecs - np.eye(dim))) < 1e-9
            recon = (vecs * vals) @ vecs.conj().T
            assert np.max(np.abs(recon - h)) < 1e-9

    def test_rejects_non_hermitian(self):
        with pytest.raises(ValueError, match="Hermitian"):
            ew.hermitian_eigensystem(np.array([[0, 1], [0, 0]], dtype=complex))


class TestTraceDistance:
    def test_identical_states(self):
        rho = ew.make_werner(0.7)
        assert ew.trace_distance(rho, rho) == 0.0

    def test_orthogonal_pure_states(self):
        zero = ew.DensityMatrix(np.diag([1.0, 0.0]).astype(complex))
        one = ew.DensityMatrix(np.diag([0.0, 1.0]).astype(complex))
        assert ew.trace_distance(zero, one) == pytest.approx(1.0, abs=1e-14)

    def test_mixed_vs_bell(self):
        # eigenvalues of I/4 - psi+ are {1/4, 1/4, 1/4, -3/4}: distance 3/4
        d = ew.trace_distance(ew.maximally_mixed(2), ew.bell_psi_plus())
        assert d == pytest.approx(0.75, abs=1e-12)

    def test_bounds_and_symmetry(self, rng):
        for _ in range(50):
            a = ew.random_density_matrix(rng, 4)
            b = ew.random_density_matrix(rng, 4)
            d = ew.trace_distance(a, b)
            assert 0.0 <= d <= 1.0 + 1e-12
            assert d == pytest.approx(ew.trace_distance(b, a), abs=1e-13)

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            ew.trace_distance(ew.maximally_mixed(2), ew.maximally_mixed(3))
