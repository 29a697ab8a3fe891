"""Quasienergy spectra, edge-localization measures, and edge-state bookkeeping."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .basis import MomentumBasis, UnitaryOperator
from .errors import DiagonalizationFailed, IllConditionedWarning

RESIDUAL_TOL = 1e-8
DEGENERACY_TOL = 1e-9
TIE_TOL = 1e-12

DEFAULT_PHASE_TOL = 0.05
DEFAULT_WEIGHT_THRESHOLD = 0.5
DEFAULT_SPLIT_TOL = 1e-6


def fold_phases(phi: np.ndarray) -> np.ndarray:
    """Wrap phases into (-pi, pi], identifying -pi with +pi."""
    out = np.mod(np.asarray(phi, dtype=float) + np.pi, 2.0 * np.pi) - np.pi
    out[out <= -np.pi] += 2.0 * np.pi
    return out


def phase_distance(phi: float, target: float) -> float:
    """Distance on the phase circle; target pi is reached from both branches."""
    return abs(float(fold_phases(np.array([phi - target]))[0]))


def default_edge_width(n_classes: int) -> int:
    """max(4, 5% of the window), clamped to the N/4 cap for small windows."""
    return min(max(4, math.ceil(0.05 * n_classes)), max(1, n_classes // 4))


@dataclass(frozen=True, eq=False)
class QuasienergySpectrum:
    """Sorted eigenphases phi in (-pi, pi] with eigenvectors as columns."""

    phases: np.ndarray
    vectors: np.ndarray
    basis: MomentumBasis

    @property
    def dimension(self) -> int:
        return self.phases.size


@dataclass(frozen=True)
class EdgeStateRecord:
    index: int
    phase: float
    target: str  # "zero" | "pi"
    edge_weight: float
    side: str  # "low" | "high" | "both"


@dataclass(frozen=True)
class EdgePairingReport:
    pairs_zero: int
    pairs_pi: int
    members: tuple[tuple[int, int], ...]
    unpaired: tuple[int, ...]


def _momentum_probabilities(v: np.ndarray, basis: MomentumBasis) -> np.ndarray:
    """Per-momentum-class occupation, summed over spin."""
    return np.abs(v.reshape(basis.size, basis.spin_dim)) ** 2 @ np.ones(basis.spin_dim)


def edge_weight(v: np.ndarray, basis: MomentumBasis, width: int) -> float:
    """Occupation probability within `width` classes of either window end."""
    if width < 1:
        raise ValueError("width must be positive")
    if width > basis.size // 4:
        raise ValueError(f"width {width} exceeds a quarter of the window ({basis.size})")
    p = _momentum_probabilities(np.asarray(v), basis)
    return float(p[:width].sum() + p[-width:].sum())


def diagonalize(u: UnitaryOperator, basis: MomentumBasis) -> QuasienergySpectrum:
    """Full eigendecomposition of a unitary via its complex Schur form.

    Schur vectors of a normal matrix are orthonormal eigenvectors, so
    degenerate subspaces come out clean; clusters of phases within 1e-9 are
    re-orthonormalized anyway, and exact ties in the ascending sort are broken
    by descending edge weight for reproducible indices.
    """
    if u.dimension != basis.dim:
        raise ValueError(f"operator dimension {u.dimension} != basis dimension {basis.dim}")
    try:
        t, z = scipy.linalg.schur(u.matrix, output="complex")
    except Exception as exc:  # pragma: no cover - LAPACK failures are rare
        raise DiagonalizationFailed(str(exc)) from exc

    phases = fold_phases(-np.angle(np.diag(t)))
    order = np.argsort(phases, kind="stable")
    phases = phases[order]
    vectors = np.ascontiguousarray(z[:, order])

    for lo, hi in _clusters(phases, DEGENERACY_TOL):
        if hi - lo > 1:
            q, _ = np.linalg.qr(vectors[:, lo:hi])
            vectors[:, lo:hi] = q

    width = default_edge_width(basis.size)
    weights = np.array([edge_weight(vectors[:, j], basis, width) for j in range(phases.size)])
    for lo, hi in _clusters(phases, TIE_TOL):
        if hi - lo > 1:
            sub = np.argsort(-weights[lo:hi], kind="stable")
            vectors[:, lo:hi] = vectors[:, lo:hi][:, sub]
            weights[lo:hi] = weights[lo:hi][sub]

    residual = np.linalg.norm(u.matrix @ vectors - vectors * np.exp(-1j * phases), axis=0)
    worst = float(residual.max())
    if worst > RESIDUAL_TOL:
        warnings.warn(
            f"eigenpair residual {worst:.3e} exceeds {RESIDUAL_TOL:.0e}",
            IllConditionedWarning,
            stacklevel=2,
        )

    phases.setflags(write=False)
    vectors.setflags(write=False)
    return QuasienergySpectrum(phases, vectors, basis)


def _clusters(sorted_values: np.ndarray, tol: float):
    """Half-open [lo, hi) runs of consecutive values closer than tol."""
    n = sorted_values.size
    lo = 0
    for i in range(1, n + 1):
        if i == n or sorted_values[i] - sorted_values[i - 1] > tol:
            yield lo, i
            lo = i


def detect_edge_states(
    spec: QuasienergySpectrum,
    phase_tol: float = DEFAULT_PHASE_TOL,
    weight_threshold: float = DEFAULT_WEIGHT_THRESHOLD,
    width: int | None = None,
) -> list[EdgeStateRecord]:
    """Eigenstates pinned near 0 or pi with weight concentrated at the window ends.

    The thresholded edge weight is averaged over each degenerate cluster
    (phases within 1e-9): individual vectors of a degenerate subspace are
    basis-arbitrary, but the subspace-mean occupation of the edge region is
    invariant. A fully degenerate operator (e.g. both kicks zero) therefore
    yields no edge states even though its numerical eigenvectors happen to be
    localized delta vectors.
    """
    basis = spec.basis
    if width is None:
        width = default_edge_width(basis.size)
    per_state = np.array(
        [edge_weight(spec.vectors[:, j], basis, width) for j in range(spec.dimension)]
    )
    cluster_mean = np.empty_like(per_state)
    for lo, hi in _clusters(spec.phases, DEGENERACY_TOL):
        cluster_mean[lo:hi] = per_state[lo:hi].mean()

    records = []
    for j, phi in enumerate(spec.phases):
        if abs(phi) <= phase_tol:
            target = "zero"
        elif abs(abs(phi) - np.pi) <= phase_tol:
            target = "pi"
        else:
            continue
        if cluster_mean[j] < weight_threshold:
            continue
        p = _momentum_probabilities(spec.vectors[:, j], basis)
        low = float(p[:width].sum())
        high = float(p[-width:].sum())
        total = low + high
        if total > 0 and low / total > 0.6:
            side = "low"
        elif total > 0 and high / total > 0.6:
            side = "high"
        else:
            side = "both"
        records.append(EdgeStateRecord(j, float(phi), target, float(cluster_mean[j]), side))
    return records


def detect_flatband_deviators(
    spec: QuasienergySpectrum,
    deviation_tol: float = DEFAULT_PHASE_TOL,
    weight_threshold: float = DEFAULT_WEIGHT_THRESHOLD,
    width: int | None = None,
) -> list[EdgeStateRecord]:
    """Edge-localized eigenstates that leave the antiresonant flat bands {0, pi}.

    The complement of detect_edge_states: records carry target "deviating" and
    select phases farther than deviation_tol from both 0 and pi. This is the
    data product behind the periodic-boundary anomaly of the antiresonant
    rotor, whose wrap-induced states sit between the flat bands.
    """
    basis = spec.basis
    if width is None:
        width = default_edge_width(basis.size)
    per_state = np.array(
        [edge_weight(spec.vectors[:, j], basis, width) for j in range(spec.dimension)]
    )
    cluster_mean = np.empty_like(per_state)
    for lo, hi in _clusters(spec.phases, DEGENERACY_TOL):
        cluster_mean[lo:hi] = per_state[lo:hi].mean()

    records = []
    for j, phi in enumerate(spec.phases):
        off_band = min(abs(phi), abs(abs(phi) - np.pi))
        if off_band <= deviation_tol or cluster_mean[j] < weight_threshold:
            continue
        p = _momentum_probabilities(spec.vectors[:, j], basis)
        low = float(p[:width].sum())
        high = float(p[-width:].sum())
        total = low + high
        if total > 0 and low / total > 0.6:
            side = "low"
        elif total > 0 and high / total > 0.6:
            side = "high"
        else:
            side = "both"
        records.append(EdgeStateRecord(j, float(phi), "deviating", float(cluster_mean[j]), side))
    return records


def pair_edge_states(
    records: list[EdgeStateRecord], split_tol: float = DEFAULT_SPLIT_TOL
) -> EdgePairingReport:
    """Greedy pairing of same-target records with |dphi| <= split_tol.

    Candidates on the opposite window side are preferred; leftovers are
    reported unpaired.
    """
    members: list[tuple[int, int]] = []
    unpaired: list[int] = []
    counts = {"zero": 0, "pi": 0}
    targets = ("zero", "pi") + tuple(sorted({r.target for r in records} - {"zero", "pi"}))
    for target in targets:
        counts.setdefault(target, 0)
        group = sorted((r for r in records if r.target == target), key=lambda r: (r.phase, r.index))
        used = [False] * len(group)
        for i, rec in enumerate(group):
            if used[i]:
                continue
            best = None
            for j in range(i + 1, len(group)):
                if used[j]:
                    continue
                gap = group[j].phase - rec.phase
                if gap > split_tol:
                    break
                opposite = {rec.side, group[j].side} == {"low", "high"}
                key = (0 if opposite else 1, gap, group[j].index)
                if best is None or key < best[0]:
                    best = (key, j)
            if best is None:
                used[i] = True
                unpaired.append(rec.index)
            else:
                j = best[1]
                used[i] = used[j] = True
                members.append((rec.index, group[j].index))
                counts[target] += 1
    return EdgePairingReport(counts["zero"], counts["pi"], tuple(members), tuple(unpaired))
