"""Stroboscopic evolution and chiral-transport observables.

The chiral displacement after T periods is

    C(T) = sum_n n (|psi_up(n,T)|^2 - |psi_down(n,T)|^2),

its running average over T = 1..t is the Mean Chiral Displacement, and the
spin-resolved parts c_up = sum n |psi_up|^2, c_down = -sum n |psi_down|^2
satisfy C = c_up + c_down identically. Evolution applies the prebuilt
one-period operator as repeated dense matrix-vector products.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .basis import MomentumBasis, UnitaryOperator, ideal_basis, open_bc, periodic_bc, symmetric_basis
from .errors import BoundaryContact
from .floquet import DkqrParams, QkrParams, RESONANT_TAU, dkqr_floquet_frame1, qkr_floquet

NORM_TOL = 1e-10
DEFAULT_PAD_NMAX = 200
CONTACT_THRESHOLD = 1e-12


@dataclass(frozen=True, eq=False)
class SpinorState:
    """Normalized state on a spin-doubled momentum window, (momentum (x) spin) order."""

    amplitudes: np.ndarray
    basis: MomentumBasis

    def __post_init__(self):
        amp = np.ascontiguousarray(self.amplitudes, dtype=complex)
        if self.basis.spin_dim != 2:
            raise ValueError("SpinorState requires a spin_dim = 2 basis")
        if amp.shape != (self.basis.dim,):
            raise ValueError(f"amplitude vector must have length {self.basis.dim}")
        norm = np.linalg.norm(amp)
        if abs(norm - 1.0) > NORM_TOL:
            raise ValueError(f"state norm {norm} deviates from 1 beyond {NORM_TOL:.0e}")
        amp.setflags(write=False)
        object.__setattr__(self, "amplitudes", amp)


def initial_spin_up(basis: MomentumBasis, n: int = 0) -> SpinorState:
    """|n> (x) |up> on the spin-doubled version of `basis`."""
    spin_basis = basis.with_spin()
    amp = np.zeros(spin_basis.dim, dtype=complex)
    amp[(n - spin_basis.n_lo) * 2] = 1.0
    return SpinorState(amp, spin_basis)


@dataclass(frozen=True, eq=False)
class TransportTrace:
    """Per-period snapshots and derived observables, index T = 0..periods.

    mcd[T] is the running average of c_of_t over 1..T (mcd[0] = 0 by
    convention); mcd_up/mcd_down average the spin-resolved parts the same way.
    """

    basis: MomentumBasis
    states: np.ndarray  # (periods+1, dim)
    dist_up: np.ndarray  # (periods+1, N)
    dist_down: np.ndarray
    c_of_t: np.ndarray  # (periods+1,)
    c_up: np.ndarray
    c_down: np.ndarray
    mcd: np.ndarray
    mcd_up: np.ndarray
    mcd_down: np.ndarray
    mean_n: np.ndarray
    mean_n_up: np.ndarray
    mean_n_down: np.ndarray
    energy: np.ndarray

    @property
    def periods(self) -> int:
        return self.states.shape[0] - 1


def _running_average(series: np.ndarray) -> np.ndarray:
    out = np.zeros_like(series)
    out[1:] = np.cumsum(series[1:]) / np.arange(1, series.size)
    return out


def evolve(u: UnitaryOperator, psi0: SpinorState, periods: int) -> TransportTrace:
    """Apply U for `periods` periods, recording distributions and observables."""
    if periods < 1:
        raise ValueError("periods must be at least 1")
    basis = psi0.basis
    if u.dimension != basis.dim:
        raise ValueError(f"operator dimension {u.dimension} != state dimension {basis.dim}")

    states = np.empty((periods + 1, basis.dim), dtype=complex)
    states[0] = psi0.amplitudes
    for t in range(1, periods + 1):
        states[t] = u.matrix @ states[t - 1]

    n = basis.n_values().astype(float)
    probs = np.abs(states.reshape(periods + 1, basis.size, 2)) ** 2
    dist_up = probs[:, :, 0]
    dist_down = probs[:, :, 1]

    mean_n_up = dist_up @ n
    mean_n_down = dist_down @ n
    c_up = mean_n_up
    c_down = -mean_n_down
    c_of_t = c_up + c_down
    energy = 0.5 * (dist_up + dist_down) @ (n * n)

    return TransportTrace(
        basis=basis,
        states=states,
        dist_up=dist_up,
        dist_down=dist_down,
        c_of_t=c_of_t,
        c_up=c_up,
        c_down=c_down,
        mcd=_running_average(c_of_t),
        mcd_up=_running_average(c_up),
        mcd_down=_running_average(c_down),
        mean_n=mean_n_up + mean_n_down,
        mean_n_up=mean_n_up,
        mean_n_down=mean_n_down,
        energy=energy,
    )


def chiral_displacement(trace: TransportTrace, t: int) -> float:
    """C(t) recomputed from the stored spin-resolved distributions."""
    if not 0 <= t <= trace.periods:
        raise ValueError(f"t must lie in [0, {trace.periods}]")
    n = trace.basis.n_values().astype(float)
    return float((trace.dist_up[t] - trace.dist_down[t]) @ n)


def mcd(trace: TransportTrace) -> np.ndarray:
    """Running average (1/t) sum_{t'=1..t} C(t') for t = 1..periods."""
    return np.cumsum(trace.c_of_t[1:]) / np.arange(1, trace.periods + 1)


def transport_basis(bc_kind: str, n_max: int, pad_nmax: int = DEFAULT_PAD_NMAX) -> MomentumBasis:
    """Spinless window for a transport run under the named boundary."""
    if bc_kind == "open":
        return symmetric_basis(n_max, open_bc())
    if bc_kind == "periodic":
        return symmetric_basis(n_max, periodic_bc())
    if bc_kind == "ideal":
        return ideal_basis(n_max, pad_nmax)
    raise ValueError(f"unknown boundary kind {bc_kind!r}")


@dataclass(frozen=True, eq=False)
class McdRow:
    k2: float
    bc: str
    mcd: float
    mcd_up: float
    mcd_down: float
    periods: int
    trace: TransportTrace | None = None


def run_dkqr(
    k1: float,
    k2: float,
    bc_kind: str,
    n_max: int,
    periods: int,
    pad_nmax: int = DEFAULT_PAD_NMAX,
) -> TransportTrace:
    """Evolve |0, up> under the frame-1 double-kick operator for one parameter point."""
    basis = transport_basis(bc_kind, n_max, pad_nmax)
    u = dkqr_floquet_frame1(DkqrParams(k1, k2), basis)
    return evolve(u, initial_spin_up(basis), periods)


def mcd_sweep(
    k1: float,
    k2_grid,
    bc_kind: str,
    n_max: int,
    periods: int,
    pad_nmax: int = DEFAULT_PAD_NMAX,
    keep_traces: bool = False,
) -> list[McdRow]:
    """MCD at `periods` for each k2, deterministic row order along k2_grid."""
    rows = []
    for k2 in k2_grid:
        trace = run_dkqr(k1, float(k2), bc_kind, n_max, periods, pad_nmax)
        rows.append(
            McdRow(
                k2=float(k2),
                bc=bc_kind,
                mcd=float(trace.mcd[periods]),
                mcd_up=float(trace.mcd_up[periods]),
                mcd_down=float(trace.mcd_down[periods]),
                periods=periods,
                trace=trace if keep_traces else None,
            )
        )
    return rows


@dataclass(frozen=True, eq=False)
class DistributionDelta:
    """Window-aligned spin-down distribution difference between PBC and ideal runs.

    For the delta, each per-period spin-down distribution is restricted to
    [-n_max, n_max] and renormalized there before subtracting, so every delta
    row sums to zero by construction. mean_n_* are the spin-down momentum
    means over each run's own full basis (normalized by the spin-down
    population), i.e. untouched by the window alignment; truncating the ideal
    run's far tail would otherwise bias its mean. Rows where a spin component
    carries no weight (T = 0 for a spin-up initial state) are zero.
    """

    n_values: np.ndarray
    delta_down: np.ndarray  # (periods+1, 2*n_max+1)
    mean_n_pbc: np.ndarray  # (periods+1,)
    mean_n_ideal: np.ndarray
    trace_pbc: TransportTrace
    trace_ideal: TransportTrace


def _window_normalized(dist: np.ndarray, basis: MomentumBasis, n_max: int) -> np.ndarray:
    lo = -n_max - basis.n_lo
    window = dist[:, lo : lo + 2 * n_max + 1].copy()
    sums = window.sum(axis=1, keepdims=True)
    np.divide(window, sums, out=window, where=sums > 0)
    return window


def _down_mean(trace: TransportTrace) -> np.ndarray:
    n = trace.basis.n_values().astype(float)
    pop = trace.dist_down.sum(axis=1)
    return (trace.dist_down @ n) / np.where(pop > 0, pop, 1.0)


def distribution_delta(
    k1: float,
    k2: float,
    n_max: int,
    periods: int,
    pad_nmax: int = DEFAULT_PAD_NMAX,
) -> DistributionDelta:
    """Compare PBC at n_max against the padded ideal run on the aligned window."""
    trace_pbc = run_dkqr(k1, k2, "periodic", n_max, periods, pad_nmax)
    trace_ideal = run_dkqr(k1, k2, "ideal", n_max, periods, pad_nmax)
    n_values = np.arange(-n_max, n_max + 1)
    q_pbc = _window_normalized(trace_pbc.dist_down, trace_pbc.basis, n_max)
    q_ideal = _window_normalized(trace_ideal.dist_down, trace_ideal.basis, n_max)
    return DistributionDelta(
        n_values=n_values,
        delta_down=q_pbc - q_ideal,
        mean_n_pbc=_down_mean(trace_pbc),
        mean_n_ideal=_down_mean(trace_ideal),
        trace_pbc=trace_pbc,
        trace_ideal=trace_ideal,
    )


def energy_growth(k: float, basis: MomentumBasis, periods: int) -> np.ndarray:
    """Kinetic energy <n^2/2> per period for the resonant rotor from |n=0>.

    Raises BoundaryContact as soon as the outermost momentum classes pick up
    occupation above 1e-12, which would invalidate the free-spread reading.
    """
    if basis.spin_dim != 1:
        raise ValueError("energy growth is defined for the spinless rotor")
    u = qkr_floquet(QkrParams(k, RESONANT_TAU), basis).matrix
    psi = np.zeros(basis.size, dtype=complex)
    psi[-basis.n_lo] = 1.0
    n2 = basis.n_values().astype(float) ** 2
    energies = np.zeros(periods + 1)
    for t in range(1, periods + 1):
        psi = u @ psi
        prob = np.abs(psi) ** 2
        if prob[0] > CONTACT_THRESHOLD or prob[-1] > CONTACT_THRESHOLD:
            raise BoundaryContact(f"edge occupation above {CONTACT_THRESHOLD:.0e} at period {t}")
        energies[t] = 0.5 * float(prob @ n2)
    return energies
