import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.special import jv

from rotorlab import (
    HermitianOperator,
    MomentumBasis,
    UnitaryOperator,
    build_cos_theta,
    build_kinetic_phase,
    build_sin_theta,
    ideal_basis,
    open_bc,
    periodic_bc,
    symmetric_basis,
    tensor_with_pauli,
    unitary_exp,
)
from rotorlab.basis import PAULI
from rotorlab.errors import BasisTooSmall, NotHermitian, NotUnitary


def random_hermitian(n, seed):
    rng = np.random.default_rng(seed)
    a = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return HermitianOperator((a + a.conj().T) / 2)


class TestWindows:
    def test_too_small_window_rejected(self):
        with pytest.raises(BasisTooSmall):
            MomentumBasis(0, 1, open_bc())

    def test_window_must_contain_zero(self):
        with pytest.raises(ValueError):
            MomentumBasis(1, 5, open_bc())

    def test_asymmetric_window_is_representable(self):
        b = MomentumBasis(-28, 27, periodic_bc())
        assert b.size == 56
        assert b.n_values()[0] == -28 and b.n_values()[-1] == 27

    def test_ideal_padding_floor(self):
        with pytest.raises(ValueError):
            ideal_basis(30, pad_nmax=50)  # pad must be >= 2 * n_max
        b = ideal_basis(30, pad_nmax=60)
        assert (b.n_lo, b.n_hi) == (-60, 60)

    def test_spin_dimension(self):
        b = symmetric_basis(5, spin_dim=2)
        assert b.dim == 22


class TestCosTheta:
    def test_open_n3_is_tridiagonal(self):
        m = build_cos_theta(MomentumBasis(-1, 1, open_bc())).matrix
        expected = np.array([[0, 0.5, 0], [0.5, 0, 0.5], [0, 0.5, 0]], dtype=complex)
        np.testing.assert_array_equal(m, expected)

    def test_periodic_n3_has_corner_couplings(self):
        m = build_cos_theta(MomentumBasis(-1, 1, periodic_bc())).matrix
        expected = np.full((3, 3), 0.5, dtype=complex) - 0.5 * np.eye(3)
        np.testing.assert_array_equal(m, expected)

    def test_periodic_n5_matches_circulant_eigenvalues(self):
        # oracle: diagonalize the explicitly constructed circulant
        import scipy.linalg

        m = build_cos_theta(MomentumBasis(-2, 2, periodic_bc())).matrix
        col = np.zeros(5)
        col[1] = col[-1] = 0.5
        oracle = np.linalg.eigvalsh(scipy.linalg.circulant(col))
        np.testing.assert_allclose(np.linalg.eigvalsh(m), oracle, atol=1e-12)
        np.testing.assert_allclose(
            np.sort(np.linalg.eigvalsh(m)), np.sort(np.cos(2 * np.pi * np.arange(5) / 5)), atol=1e-12
        )

    def test_spinful_basis_rejected(self):
        with pytest.raises(ValueError):
            build_cos_theta(symmetric_basis(3, spin_dim=2))


class TestSinTheta:
    def test_open_n3_pattern(self):
        m = build_sin_theta(MomentumBasis(-1, 1, open_bc())).matrix
        expected = np.array(
            [[0, 0.5j, 0], [-0.5j, 0, 0.5j], [0, -0.5j, 0]], dtype=complex
        )
        np.testing.assert_array_equal(m, expected)

    @pytest.mark.parametrize("n_max", [2, 3, 5])
    def test_cos2_plus_sin2_on_interior_rows(self, n_max):
        b = symmetric_basis(n_max)
        c = build_cos_theta(b).matrix
        s = build_sin_theta(b).matrix
        resolution = c @ c + s @ s
        interior = slice(1, b.size - 1)
        np.testing.assert_array_equal(resolution[interior, :], np.eye(b.size)[interior, :])

    def test_cos2_plus_sin2_periodic_all_rows(self):
        b = MomentumBasis(-2, 2, periodic_bc())
        c = build_cos_theta(b).matrix
        s = build_sin_theta(b).matrix
        np.testing.assert_allclose(c @ c + s @ s, np.eye(5), atol=1e-15)


class TestKineticPhase:
    def test_resonant_tau_is_identity_exactly(self):
        u = build_kinetic_phase(ideal_basis(100, 200), 4 * np.pi).matrix
        np.testing.assert_array_equal(u, np.eye(401))

    def test_antiresonant_tau_alternates_sign(self):
        b = symmetric_basis(5)
        u = build_kinetic_phase(b, 2 * np.pi).matrix
        oracle = np.diag([np.exp(-1j * np.pi * n * n) for n in range(-5, 6)])
        np.testing.assert_allclose(u, oracle, atol=1e-12)
        np.testing.assert_allclose(u, np.diag((-1.0) ** b.n_values()), atol=1e-12)

    def test_zero_tau_is_identity(self):
        u = build_kinetic_phase(symmetric_basis(4), 0.0).matrix
        np.testing.assert_array_equal(u, np.eye(9))

    def test_spin_doubled_diagonal(self):
        u = build_kinetic_phase(symmetric_basis(2, spin_dim=2), 1.0).matrix
        assert u.shape == (10, 10)
        np.testing.assert_allclose(np.diag(u)[::2], np.diag(u)[1::2])


class TestTensorWithPauli:
    def test_ordering_fixture_momentum_major(self):
        # pins the (momentum (x) spin) memory layout
        eye2 = HermitianOperator(np.eye(2))
        m = tensor_with_pauli(eye2, "z").matrix
        np.testing.assert_array_equal(m, np.diag([1.0, -1.0, 1.0, -1.0]))

    def test_cos_blocks_along_momentum_offdiagonals(self):
        m = tensor_with_pauli(build_cos_theta(MomentumBasis(-1, 1, open_bc())), "x").matrix
        assert m.shape == (6, 6)
        np.testing.assert_array_equal(m[0:2, 2:4], 0.5 * PAULI["x"])
        np.testing.assert_array_equal(m[4:6, 2:4], 0.5 * PAULI["x"])
        np.testing.assert_array_equal(m[0:2, 4:6], np.zeros((2, 2)))

    @settings(max_examples=30, deadline=None)
    @given(st.integers(3, 7), st.integers(0, 2**32 - 1), st.sampled_from(["x", "y", "z"]))
    def test_hermiticity_preserved(self, n, seed, axis):
        a = random_hermitian(n, seed)
        out = tensor_with_pauli(a, axis).matrix
        assert np.max(np.abs(out - out.conj().T)) <= 1e-12


class TestUnitaryExp:
    def test_zero_generator(self):
        h = HermitianOperator(np.zeros((4, 4)))
        np.testing.assert_allclose(unitary_exp(h, 3.7).matrix, np.eye(4), atol=1e-15)

    def test_pauli_rotation_identity(self):
        k = 1.234
        u = unitary_exp(HermitianOperator(PAULI["x"]), k).matrix
        oracle = np.cos(k) * np.eye(2) - 1j * np.sin(k) * PAULI["x"]
        np.testing.assert_allclose(u, oracle, atol=1e-14)

    def test_interior_entries_match_bessel_functions(self):
        # oracle: Jacobi-Anger series coefficients J_{n-m}(k) (-i)^{n-m}
        b = symmetric_basis(20)
        u = unitary_exp(build_cos_theta(b), 2.0).matrix
        n = b.n_values()
        interior = slice(16, 25)  # distance > 15 from either window edge
        ni = n[interior]
        order = ni[:, None] - ni[None, :]
        oracle = (-1j) ** order * jv(order, 2.0)
        assert np.max(np.abs(u[interior, interior] - oracle)) <= 1e-8

    @settings(max_examples=25, deadline=None)
    @given(st.integers(3, 8), st.integers(0, 2**32 - 1),
           st.floats(-5, 5), st.floats(-5, 5))
    def test_group_property(self, n, seed, a, b):
        h = random_hermitian(n, seed)
        lhs = unitary_exp(h, a).matrix @ unitary_exp(h, b).matrix
        rhs = unitary_exp(h, a + b).matrix
        assert np.max(np.abs(lhs - rhs)) <= 1e-10

    @settings(max_examples=25, deadline=None)
    @given(st.integers(3, 8), st.integers(0, 2**32 - 1), st.floats(-10, 10))
    def test_result_is_certified_unitary(self, n, seed, prefactor):
        u = unitary_exp(random_hermitian(n, seed), prefactor).matrix
        assert np.max(np.abs(u.conj().T @ u - np.eye(n))) <= 1e-10

    def test_non_hermitian_input_rejected(self):
        with pytest.raises(NotHermitian):
            HermitianOperator(np.array([[0.0, 1.0], [0.0, 0.0]]))

    def test_non_unitary_matrix_rejected(self):
        with pytest.raises(NotUnitary):
            UnitaryOperator(np.diag([1.0, 0.5]))


class TestDiscreteSymmetries:
    @pytest.mark.parametrize("n_max", [3, 6])
    def test_momentum_reflection_parity(self, n_max):
        # on a symmetric open window: P cos P = cos, P sin P = -sin
        b = symmetric_basis(n_max)
        p = np.eye(b.size)[::-1]
        c = build_cos_theta(b).matrix
        s = build_sin_theta(b).matrix
        np.testing.assert_array_equal(p @ c @ p, c)
        np.testing.assert_array_equal(p @ s @ p, -s)

    @pytest.mark.parametrize("n_lo,n_hi", [(-5, 5), (-6, 5), (-4, 7)])
    def test_sign_alternation_anticommutes_with_cos_open(self, n_lo, n_hi):
        b = MomentumBasis(n_lo, n_hi, open_bc())
        c = build_cos_theta(b).matrix
        p2 = np.diag((-1.0) ** b.n_values())
        np.testing.assert_array_equal(p2 @ c @ p2, -c)

    def test_sign_alternation_periodic_even_window_exact(self):
        b = MomentumBasis(-6, 5, periodic_bc())  # N = 12, even
        c = build_cos_theta(b).matrix
        p2 = np.diag((-1.0) ** b.n_values())
        np.testing.assert_array_equal(p2 @ c @ p2, -c)

    def test_sign_alternation_periodic_odd_window_fails_at_wrap_only(self):
        b = symmetric_basis(5, periodic_bc())  # N = 11, odd
        c = build_cos_theta(b).matrix
        p2 = np.diag((-1.0) ** b.n_values())
        defect = p2 @ c @ p2 + c
        assert defect[0, -1] == 1.0 and defect[-1, 0] == 1.0
        defect[0, -1] = defect[-1, 0] = 0.0
        np.testing.assert_array_equal(defect, np.zeros_like(defect))
