import numpy as np
import pytest
import scipy.linalg

from rotorlab import (
    DkqrParams,
    MomentumBasis,
    SpinorState,
    UnitaryOperator,
    build_cos_theta,
    build_sin_theta,
    chiral_displacement,
    distribution_delta,
    dkqr_floquet_frame1,
    energy_growth,
    evolve,
    ideal_basis,
    initial_spin_up,
    mcd,
    mcd_sweep,
    open_bc,
    run_dkqr,
    symmetric_basis,
    tensor_with_pauli,
    transport_basis,
)
from rotorlab.errors import BoundaryContact


def brute_force_period(p: DkqrParams, basis) -> np.ndarray:
    """Independent one-period operator via scipy's generic matrix exponential."""
    cx = tensor_with_pauli(build_cos_theta(basis), "x").matrix
    sy = tensor_with_pauli(build_sin_theta(basis), "y").matrix
    half = scipy.linalg.expm(-0.5j * p.k1 * cx)
    mid = scipy.linalg.expm(-1j * p.k2 * sy)
    return half @ mid @ half


class TestEvolve:
    def test_identity_operator_freezes_the_state(self):
        b = symmetric_basis(5)
        psi0 = initial_spin_up(b)
        trace = evolve(UnitaryOperator(np.eye(22)), psi0, 6)
        for t in range(7):
            np.testing.assert_array_equal(trace.states[t], psi0.amplitudes)
        assert np.all(trace.c_of_t == trace.c_of_t[0])

    def test_against_brute_force_exponential(self):
        # dual route: scipy.linalg.expm vs the library's spectral exponentials
        b = symmetric_basis(8)
        p = DkqrParams(1.1, 2.3)
        u = dkqr_floquet_frame1(p, b)
        trace = evolve(u, initial_spin_up(b), 5)
        psi = initial_spin_up(b).amplitudes.copy()
        u_ref = brute_force_period(p, b)
        for t in range(1, 6):
            psi = u_ref @ psi
            assert np.max(np.abs(trace.states[t] - psi)) <= 1e-10

    @pytest.mark.parametrize("bc", ["open", "periodic", "ideal"])
    def test_norm_conserved_over_fifteen_periods(self, bc):
        trace = run_dkqr(1.5 * np.pi, 2.5 * np.pi, bc, 20, 15, pad_nmax=40)
        norms = np.linalg.norm(trace.states, axis=1)
        assert np.max(np.abs(norms - 1.0)) <= 1e-10
        total = trace.dist_up.sum(axis=1) + trace.dist_down.sum(axis=1)
        assert np.max(np.abs(total - 1.0)) <= 1e-10

    def test_dimension_mismatch_rejected(self):
        b = symmetric_basis(5)
        with pytest.raises(ValueError):
            evolve(UnitaryOperator(np.eye(10)), initial_spin_up(b), 3)

    def test_state_normalization_enforced(self):
        b = symmetric_basis(5).with_spin()
        with pytest.raises(ValueError):
            SpinorState(np.ones(22), b)


class TestChiralDisplacement:
    def test_zero_at_start_for_central_initial_state(self):
        trace = run_dkqr(1.0, 1.0, "open", 10, 3)
        assert chiral_displacement(trace, 0) == 0.0

    def test_spin_resolved_decomposition(self):
        trace = run_dkqr(1.5 * np.pi, 1.8 * np.pi, "open", 15, 8)
        for t in range(9):
            c = chiral_displacement(trace, t)
            assert c == pytest.approx(trace.c_up[t] + trace.c_down[t], abs=1e-12)
            assert c == pytest.approx(trace.mean_n_up[t] - trace.mean_n_down[t], abs=1e-12)
            assert c == pytest.approx(trace.c_of_t[t], abs=1e-14)

    def test_momentum_symmetric_state_has_zero_displacement(self):
        b = symmetric_basis(4).with_spin()
        amp = np.zeros(18, dtype=complex)
        amp[0] = amp[-2] = 0.5  # |-4, up> + |4, up>
        amp[1] = amp[-1] = 0.5  # |-4, down> + |4, down>
        state = SpinorState(amp, b)
        trace = evolve(UnitaryOperator(np.eye(18)), state, 2)
        assert chiral_displacement(trace, 1) == 0.0


class TestMcd:
    def test_constant_series_average(self):
        trace = run_dkqr(0.0, 0.0, "open", 5, 4)  # identity evolution, C == 0
        np.testing.assert_allclose(mcd(trace), np.zeros(4), atol=1e-20)

    def test_running_average_matches_stored_incremental(self):
        trace = run_dkqr(1.5 * np.pi, 0.5 * np.pi, "open", 20, 12)
        recomputed = mcd(trace)
        np.testing.assert_allclose(recomputed, trace.mcd[1:], atol=1e-14)
        manual = [trace.c_of_t[1 : t + 1].mean() for t in range(1, 13)]
        np.testing.assert_allclose(recomputed, manual, atol=1e-14)

    def test_pure_x_kick_gives_zero_mcd(self):
        # at k2 = 0 both spin components stay momentum-symmetric
        rows = mcd_sweep(1.5 * np.pi, [0.0], "open", 15, 6)
        assert rows[0].mcd == pytest.approx(0.0, abs=1e-12)

    def test_sweep_row_order_and_decomposition(self):
        rows = mcd_sweep(1.5 * np.pi, [0.2 * np.pi, 0.4 * np.pi], "periodic", 10, 4)
        assert [r.k2 for r in rows] == [0.2 * np.pi, 0.4 * np.pi]
        for r in rows:
            assert r.mcd == pytest.approx(r.mcd_up + r.mcd_down, abs=1e-12)

    def test_boundary_independence_before_contact(self):
        # short evolution at gentle kicks never reaches |n| = 18
        k1, k2, periods, n_max = 0.5 * np.pi, 0.5 * np.pi, 4, 18
        traces = {
            bc: run_dkqr(k1, k2, bc, n_max, periods, pad_nmax=2 * n_max)
            for bc in ("open", "periodic", "ideal")
        }
        ideal = traces["ideal"]
        beyond = (
            ideal.dist_up[:, np.abs(ideal.basis.n_values()) >= n_max].sum()
            + ideal.dist_down[:, np.abs(ideal.basis.n_values()) >= n_max].sum()
        )
        assert beyond < 1e-12
        # ideal distributions live on the padded axis; align on the window
        offset = -n_max - ideal.basis.n_lo
        window = slice(offset, offset + 2 * n_max + 1)
        for bc in ("open", "periodic"):
            np.testing.assert_allclose(traces[bc].dist_up, ideal.dist_up[:, window], atol=1e-8)
            np.testing.assert_allclose(traces[bc].dist_down, ideal.dist_down[:, window], atol=1e-8)
            np.testing.assert_allclose(traces[bc].c_of_t, ideal.c_of_t, atol=1e-8)
            np.testing.assert_allclose(traces[bc].energy, ideal.energy, atol=1e-8)


@pytest.fixture(scope="module")
def delta18():
    return distribution_delta(1.5 * np.pi, 1.8 * np.pi, 60, 15, pad_nmax=200)


class TestDistributionDelta:
    def test_delta_rows_sum_to_zero(self, delta18):
        assert np.max(np.abs(delta18.delta_down.sum(axis=1))) <= 1e-10

    def test_no_difference_before_boundary_contact(self, delta18):
        assert max(np.abs(delta18.delta_down[t]).max() for t in range(8)) <= 1e-6

    def test_pbc_shifts_spin_down_mean_toward_positive_momenta(self, delta18):
        shift = delta18.mean_n_pbc - delta18.mean_n_ideal
        assert np.all(shift[10:] > 0)

    def test_chiral_displacement_identity_on_both_runs(self, delta18):
        for trace in (delta18.trace_pbc, delta18.trace_ideal):
            for t in range(16):
                c = chiral_displacement(trace, t)
                assert c == pytest.approx(trace.mean_n_up[t] - trace.mean_n_down[t], abs=1e-12)


class TestEnergyGrowth:
    def test_initial_energy_is_zero(self):
        e = energy_growth(2.0, ideal_basis(30, 60), 5)
        assert e[0] == 0.0

    def test_zero_kick_never_moves(self):
        e = energy_growth(0.0, ideal_basis(10, 20), 8)
        np.testing.assert_allclose(e, np.zeros(9), atol=1e-20)

    def test_quadratic_growth_at_resonance(self):
        # closed form for the resonant kick: E(T) = (T k)^2 / 4
        e = energy_growth(2.0, ideal_basis(100, 200), 20)
        t = np.arange(4, 21)
        slope = np.polyfit(np.log(t), np.log(e[4:21]), 1)[0]
        assert slope == pytest.approx(2.0, abs=0.05)
        np.testing.assert_allclose(e[1:], (np.arange(1, 21) * 2.0) ** 2 / 4.0, rtol=1e-10)

    def test_boundary_contact_detected(self):
        with pytest.raises(BoundaryContact):
            energy_growth(2.0, symmetric_basis(20), 15)


class TestTransportBasis:
    def test_kinds(self):
        assert transport_basis("open", 10).bc.kind == "open"
        assert transport_basis("periodic", 10).bc.kind == "periodic"
        b = transport_basis("ideal", 10, 40)
        assert b.bc.kind == "ideal" and b.size == 81
        with pytest.raises(ValueError):
            transport_basis("twisted", 10)
