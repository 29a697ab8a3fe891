"""Bloch vectors, winding numbers, and the (W0, Wpi) topological labels.

Chiral symmetry confines the Bloch vector to the x-y plane, so the winding
integrand (n x d_theta n)_z is just the derivative of the planar angle
psi(theta) = atan2(n_y, n_x). Windings are therefore computed by accumulating
wrapped angle increments around the closed theta loop, which yields an exact
integer; the grid is doubled until every increment is smaller than pi/2.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import GapClosed, RefinementExhausted
from .floquet import DkqrParams, bloch_floquet_2x2

GAP_FLOOR = 1e-8
GRID_CAP = 1 << 16
MIN_GRID = 64

_PAULI_VEC = np.array(
    [
        [[0.0, 1.0], [1.0, 0.0]],
        [[0.0, -1.0j], [1.0j, 0.0]],
        [[1.0, 0.0], [0.0, -1.0]],
    ],
    dtype=complex,
)


@dataclass(frozen=True, eq=False)
class BlochSample:
    """Unit Bloch vector of U(theta) = cos(E) - i sin(E) n.sigma, E in [0, pi]."""

    theta: float
    n_vec: np.ndarray
    gap_margin: float  # |sin E|, distance from a gap closing


@dataclass(frozen=True)
class WindingReport:
    """Frame windings and their half-sum/half-difference labels.

    w0 and wpi are exact rationals; a denominator of 2 flags the (never
    observed, but not excluded) case of odd w1 + w2.
    """

    w1: int
    w2: int
    w0: Fraction
    wpi: Fraction
    min_gap_margin: float
    grid_size: int

    @property
    def is_integer(self) -> bool:
        return self.w0.denominator == 1 and self.wpi.denominator == 1


def bloch_vector(
    p: DkqrParams, theta: float, frame: int = 1, gap_floor: float = GAP_FLOOR
) -> BlochSample:
    """Pauli decomposition of the 2x2 bulk operator at one theta."""
    u = bloch_floquet_2x2(p, theta, frame).matrix
    d = np.real(0.5j * np.einsum("aij,ji->a", _PAULI_VEC, u))
    norm = float(np.linalg.norm(d))
    if norm < gap_floor:
        raise GapClosed(theta, norm)
    return BlochSample(float(theta), d / norm, norm)


def planar_winding(angles: np.ndarray) -> float:
    """Total wrapped-angle accumulation (in turns) around a closed loop of psi samples."""
    inc = np.diff(np.concatenate([angles, angles[:1]]))
    inc = np.mod(inc + np.pi, 2.0 * np.pi) - np.pi
    return float(inc.sum() / (2.0 * np.pi))


def _sample_frame(p: DkqrParams, frame: int, grid: int, gap_floor: float):
    # The Brillouin loop is traversed from +pi down to -pi: in the library's
    # raising convention <theta|n> = e^{i n theta} this is the orientation
    # under which the time-averaged chiral displacement converges to +W/2.
    thetas = np.pi - 2.0 * np.pi * np.arange(grid) / grid
    psis = np.empty(grid)
    min_margin = np.inf
    for i, theta in enumerate(thetas):
        s = bloch_vector(p, float(theta), frame, gap_floor)
        psis[i] = np.arctan2(s.n_vec[1], s.n_vec[0])
        min_margin = min(min_margin, s.gap_margin)
    return psis, float(min_margin)


def _frame_winding(
    p: DkqrParams, frame: int, grid: int, gap_floor: float, grid_cap: int
) -> tuple[int, float, int]:
    g = grid
    while True:
        psis, min_margin = _sample_frame(p, frame, g, gap_floor)
        inc = np.diff(np.concatenate([psis, psis[:1]]))
        inc = np.mod(inc + np.pi, 2.0 * np.pi) - np.pi
        if np.max(np.abs(inc)) < np.pi / 2.0:
            turns = inc.sum() / (2.0 * np.pi)
            w = int(round(turns))
            if abs(turns - w) > 1e-6:  # pragma: no cover - closed loop guarantees this
                raise RefinementExhausted(f"accumulated angle {turns} is not an integer")
            return w, min_margin, g
        if 2 * g > grid_cap:
            raise RefinementExhausted(
                f"angle increments stayed >= pi/2 at the {grid_cap}-point cap; "
                "the parameters sit on or too near a transition"
            )
        g *= 2


def winding_number(
    p: DkqrParams,
    frame: int = 1,
    grid: int = 512,
    gap_floor: float = GAP_FLOOR,
    grid_cap: int = GRID_CAP,
) -> int:
    """Winding of the frame's planar Bloch vector over theta in [-pi, pi)."""
    if grid < MIN_GRID:
        raise ValueError(f"grid must be at least {MIN_GRID}")
    w, _, _ = _frame_winding(p, frame, grid, gap_floor, grid_cap)
    return w


def winding_pair(
    p: DkqrParams,
    grid: int = 512,
    gap_floor: float = GAP_FLOOR,
    grid_cap: int = GRID_CAP,
) -> WindingReport:
    """Both frame windings combined into (W0, Wpi) = ((W1+W2)/2, (W1-W2)/2)."""
    if grid < MIN_GRID:
        raise ValueError(f"grid must be at least {MIN_GRID}")
    w1, m1, g1 = _frame_winding(p, 1, grid, gap_floor, grid_cap)
    w2, m2, g2 = _frame_winding(p, 2, grid, gap_floor, grid_cap)
    return WindingReport(
        w1=w1,
        w2=w2,
        w0=Fraction(w1 + w2, 2),
        wpi=Fraction(w1 - w2, 2),
        min_gap_margin=min(m1, m2),
        grid_size=max(g1, g2),
    )


@dataclass(frozen=True)
class PhasePoint:
    k1: float
    k2: float
    status: str  # "ok" | "gap_closed" | "refinement_exhausted"
    report: WindingReport | None


def _phase_point(args) -> PhasePoint:
    k1, k2, grid, gap_floor, grid_cap = args
    try:
        report = winding_pair(DkqrParams(k1, k2), grid, gap_floor, grid_cap)
    except GapClosed:
        return PhasePoint(k1, k2, "gap_closed", None)
    except RefinementExhausted:
        return PhasePoint(k1, k2, "refinement_exhausted", None)
    return PhasePoint(k1, k2, "ok", report)


def phase_diagram(
    k1_grid,
    k2_grid,
    grid: int = 512,
    gap_floor: float = GAP_FLOOR,
    grid_cap: int = GRID_CAP,
    jobs: int = 1,
) -> list[PhasePoint]:
    """winding_pair mapped over the Cartesian (k1, k2) grid.

    Gap closings become `gap_closed` markers instead of aborting the sweep.
    Output order is row-major in (k1, k2) regardless of worker count.
    """
    tasks = [(k1, k2, grid, gap_floor, grid_cap) for k1 in k1_grid for k2 in k2_grid]
    if jobs > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(_phase_point, tasks))
    return [_phase_point(t) for t in tasks]
