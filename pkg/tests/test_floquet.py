import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rotorlab import (
    DkqrParams,
    MomentumBasis,
    QkrParams,
    bloch_floquet_2x2,
    build_cos_theta,
    build_kinetic_phase,
    build_sin_theta,
    dkqr_floquet_frame1,
    dkqr_floquet_frame2,
    open_bc,
    periodic_bc,
    qkr_floquet,
    symmetric_basis,
    tensor_with_pauli,
    unitary_exp,
)
from rotorlab.basis import PAULI

TAU_RES = 4 * np.pi
TAU_ANTI = 2 * np.pi


def rot2(axis, angle):
    """Hand-coded 2x2 rotation oracle: exp(-i angle sigma_axis)."""
    return math.cos(angle) * np.eye(2) - 1j * math.sin(angle) * PAULI[axis]


class TestQkr:
    def test_resonant_free_part_is_trivial(self):
        b = symmetric_basis(8)
        u = qkr_floquet(QkrParams(1.7, TAU_RES), b).matrix
        kick = unitary_exp(build_cos_theta(b), 1.7).matrix
        np.testing.assert_array_equal(u, kick)

    @pytest.mark.parametrize("basis", [symmetric_basis(27), MomentumBasis(-9, 12, open_bc())])
    def test_antiresonant_square_is_identity_open(self, basis):
        u = qkr_floquet(QkrParams(2.0, TAU_ANTI), basis).matrix
        assert np.max(np.abs(u @ u - np.eye(basis.size))) <= 1e-10

    def test_antiresonant_square_deviates_under_pbc(self):
        # oracle: explicit matrix product; deviation sits in wrap-coupled rows
        b = symmetric_basis(27, periodic_bc())
        u = qkr_floquet(QkrParams(2.0, TAU_ANTI), b).matrix
        defect = np.abs(u @ u - np.eye(b.size))
        assert defect.max() > 0.1
        assert defect[8:-8, :].max() < 1e-4

    def test_params_flag_special_intervals(self):
        assert QkrParams(1.0, TAU_RES).is_resonant
        assert QkrParams(1.0, TAU_ANTI).is_antiresonant
        assert not QkrParams(1.0, 1.0).is_resonant


class TestDkqrFrames:
    def test_zero_kicks_give_identity(self):
        u = dkqr_floquet_frame1(DkqrParams(0.0, 0.0), symmetric_basis(5)).matrix
        np.testing.assert_allclose(u, np.eye(22), atol=1e-14)

    def test_half_kicks_merge_when_k2_vanishes(self):
        b = symmetric_basis(6)
        u = dkqr_floquet_frame1(DkqrParams(1.3, 0.0), b).matrix
        direct = unitary_exp(tensor_with_pauli(build_cos_theta(b), "x"), 1.3).matrix
        np.testing.assert_allclose(u, direct, atol=1e-12)

    def test_frame2_merges_when_k1_vanishes(self):
        b = symmetric_basis(6)
        u = dkqr_floquet_frame2(DkqrParams(0.0, 0.9), b).matrix
        direct = unitary_exp(tensor_with_pauli(build_sin_theta(b), "y"), 0.9).matrix
        np.testing.assert_allclose(u, direct, atol=1e-12)

    @pytest.mark.parametrize("bc", [open_bc(), periodic_bc()])
    @pytest.mark.parametrize("ks", [(1.5 * np.pi, 1.5 * np.pi), (0.7, 2.9), (4.0, 0.3)])
    @pytest.mark.parametrize("frame_fn", [dkqr_floquet_frame1, dkqr_floquet_frame2])
    def test_chiral_symmetry(self, bc, ks, frame_fn):
        b = symmetric_basis(9, bc)
        u = frame_fn(DkqrParams(*ks), b).matrix
        gamma = np.kron(np.eye(b.size), PAULI["z"])
        assert np.max(np.abs(gamma @ u @ gamma - u.conj().T)) <= 1e-10

    def test_frames_are_unitarily_conjugate(self):
        # G = Y(k2/2) X(k1/2) maps frame 1 to frame 2 exactly
        b = symmetric_basis(8)
        p = DkqrParams(1.5 * np.pi, 1.5 * np.pi)
        u1 = dkqr_floquet_frame1(p, b).matrix
        u2 = dkqr_floquet_frame2(p, b).matrix
        cx = tensor_with_pauli(build_cos_theta(b), "x")
        sy = tensor_with_pauli(build_sin_theta(b), "y")
        g = unitary_exp(sy, p.k2 / 2).matrix @ unitary_exp(cx, p.k1 / 2).matrix
        np.testing.assert_allclose(g @ u1 @ g.conj().T, u2, atol=1e-12)

    def test_frames_share_the_quasienergy_spectrum(self):
        b = symmetric_basis(15)
        p = DkqrParams(1.5 * np.pi, 1.5 * np.pi)
        phases1 = np.sort(np.abs(np.angle(np.linalg.eigvals(dkqr_floquet_frame1(p, b).matrix))))
        phases2 = np.sort(np.abs(np.angle(np.linalg.eigvals(dkqr_floquet_frame2(p, b).matrix))))
        np.testing.assert_allclose(phases1, phases2, atol=1e-8)

    def test_resonant_kinetic_factor_is_a_no_op(self):
        b = symmetric_basis(7)
        u = dkqr_floquet_frame1(DkqrParams(2.0, 1.0), b).matrix
        free = build_kinetic_phase(b.with_spin(), TAU_RES).matrix
        np.testing.assert_array_equal(free @ u, u)

    def test_off_resonance_rejected(self):
        with pytest.raises(ValueError):
            DkqrParams(1.0, 1.0, resonant=False)


class TestBloch2x2:
    def test_theta_zero_is_pure_x_rotation(self):
        p = DkqrParams(0.8, 2.0)
        u = bloch_floquet_2x2(p, 0.0, frame=1).matrix
        np.testing.assert_allclose(u, rot2("x", 0.8), atol=1e-14)

    @settings(max_examples=20, deadline=None)
    @given(st.floats(0, 3 * np.pi), st.floats(0, 3 * np.pi))
    def test_trace_is_real_on_a_grid(self, k1, k2):
        p = DkqrParams(k1, k2)
        thetas = -np.pi + 2 * np.pi * np.arange(100) / 100
        for frame in (1, 2):
            for theta in thetas[::7]:
                tr = np.trace(bloch_floquet_2x2(p, float(theta), frame).matrix)
                assert abs(tr.imag) <= 1e-12

    def test_explicit_composition_oracle(self):
        # oracle: hand-coded rotation products at (k1, k2, theta) = (pi/2, pi/2, pi/4)
        k1 = k2 = math.pi / 2
        theta = math.pi / 4
        a = 0.5 * k1 * math.cos(theta)
        b = k2 * math.sin(theta)
        oracle = rot2("x", a) @ rot2("y", b) @ rot2("x", a)
        u = bloch_floquet_2x2(DkqrParams(k1, k2), theta, frame=1).matrix
        np.testing.assert_allclose(u, oracle, atol=1e-14)

    def test_frame2_composition_oracle(self):
        k1, k2, theta = 1.1, 0.4, -2.0
        a = k1 * math.cos(theta)
        b = 0.5 * k2 * math.sin(theta)
        oracle = rot2("y", b) @ rot2("x", a) @ rot2("y", b)
        u = bloch_floquet_2x2(DkqrParams(k1, k2), theta, frame=2).matrix
        np.testing.assert_allclose(u, oracle, atol=1e-14)
