"""Finite momentum-space representation of angle operators and kick unitaries.

Conventions used throughout the library:

* momentum eigenstates |n>, n integer, with <theta|n> = e^{i n theta}/sqrt(2 pi),
  so e^{i theta} acts as the raising operator n -> n + 1;
* spinful matrices are ordered (momentum (x) spin) with spin basis {up, down}
  along z, i.e. flat index = momentum_index * spin_dim + spin_index;
* unitary exponentials of Hermitian generators are computed spectrally
  (eigendecomposition), which keeps them unitary to roundoff and lets the
  eigenbasis be reused across kick strengths in parameter sweeps.

Periodic boundaries are imposed on the Hermitian generators only (corner
couplings identifying |n_lo - 1> with |n_hi> and |n_hi + 1> with |n_lo>),
never by wrapping an exponentiated operator.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from functools import cached_property

import numpy as np

from .errors import BasisTooSmall, NotHermitian, NotUnitary

HERMITICITY_TOL = 1e-12
UNITARITY_TOL = 1e-10

OPEN = "open"
PERIODIC = "periodic"
IDEAL = "ideal"

PAULI = {
    "x": np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex),
    "y": np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex),
    "z": np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex),
}


@dataclass(frozen=True)
class BoundaryCondition:
    """Boundary treatment of the momentum window.

    ``open``: hard cutoff, amplitudes vanish outside the window.
    ``periodic``: |n> = |n + N| identification via corner couplings.
    ``ideal``: open window padded to half-width ``pad_nmax`` so the wave
    packet never reaches the edge.
    """

    kind: str
    pad_nmax: int | None = None

    def __post_init__(self):
        if self.kind not in (OPEN, PERIODIC, IDEAL):
            raise ValueError(f"unknown boundary kind {self.kind!r}")
        if self.kind == IDEAL:
            if self.pad_nmax is None or self.pad_nmax < 1:
                raise ValueError("ideal boundary requires a positive pad_nmax")
        elif self.pad_nmax is not None:
            raise ValueError("pad_nmax is only meaningful for the ideal boundary")

    @property
    def wraps(self) -> bool:
        return self.kind == PERIODIC


def open_bc() -> BoundaryCondition:
    return BoundaryCondition(OPEN)


def periodic_bc() -> BoundaryCondition:
    return BoundaryCondition(PERIODIC)


def ideal_bc(pad_nmax: int = 200) -> BoundaryCondition:
    return BoundaryCondition(IDEAL, pad_nmax)


@dataclass(frozen=True)
class MomentumBasis:
    """Integer momentum window [n_lo, n_hi] with boundary kind and spin factor."""

    n_lo: int
    n_hi: int
    bc: BoundaryCondition
    spin_dim: int = 1

    def __post_init__(self):
        if not (self.n_lo <= 0 <= self.n_hi):
            raise ValueError("momentum window must contain n = 0")
        if self.size < 3:
            raise BasisTooSmall(f"window [{self.n_lo}, {self.n_hi}] has fewer than 3 classes")
        if self.spin_dim not in (1, 2):
            raise ValueError("spin_dim must be 1 or 2")
        if self.bc.kind == IDEAL and (self.n_lo, self.n_hi) != (-self.bc.pad_nmax, self.bc.pad_nmax):
            raise ValueError("ideal basis must span [-pad_nmax, pad_nmax]")

    @property
    def size(self) -> int:
        """Number of momentum classes N."""
        return self.n_hi - self.n_lo + 1

    @property
    def dim(self) -> int:
        """Total matrix dimension N * spin_dim."""
        return self.size * self.spin_dim

    def n_values(self) -> np.ndarray:
        return np.arange(self.n_lo, self.n_hi + 1)

    def with_spin(self) -> "MomentumBasis":
        return replace(self, spin_dim=2)


def symmetric_basis(n_max: int, bc: BoundaryCondition | None = None, spin_dim: int = 1) -> MomentumBasis:
    """Window [-n_max, n_max] under the given boundary (open by default)."""
    return MomentumBasis(-n_max, n_max, bc if bc is not None else open_bc(), spin_dim)


def ideal_basis(n_max: int, pad_nmax: int = 200, spin_dim: int = 1) -> MomentumBasis:
    """Padded window standing in for the infinite system.

    ``n_max`` is the physical half-width the caller cares about; the basis is
    enlarged to ``pad_nmax >= 2 * n_max`` so boundaries stay out of reach.
    """
    if pad_nmax < 2 * n_max:
        raise ValueError(f"pad_nmax={pad_nmax} must be at least twice n_max={n_max}")
    return MomentumBasis(-pad_nmax, pad_nmax, ideal_bc(pad_nmax), spin_dim)


def _freeze(matrix: np.ndarray) -> np.ndarray:
    out = np.ascontiguousarray(matrix, dtype=complex)
    out.setflags(write=False)
    return out


@dataclass(frozen=True, eq=False)
class HermitianOperator:
    """Dense Hermitian matrix; validated on construction, immutable after."""

    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError("matrix must be square")
        dev = float(np.max(np.abs(m - m.conj().T))) if m.size else 0.0
        if dev > HERMITICITY_TOL:
            raise NotHermitian(f"max |M - M^dag| = {dev:.3e} exceeds {HERMITICITY_TOL:.0e}")
        object.__setattr__(self, "matrix", _freeze(m))

    @property
    def dimension(self) -> int:
        return self.matrix.shape[0]

    @cached_property
    def eigensystem(self) -> tuple[np.ndarray, np.ndarray]:
        """Cached (eigenvalues, eigenvectors); reused across exponentiations."""
        w, v = np.linalg.eigh(self.matrix)
        return w, v


@dataclass(frozen=True, eq=False)
class UnitaryOperator:
    """Dense unitary matrix; the constructor certifies max|U^dag U - 1| <= 1e-10."""

    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError("matrix must be square")
        dev = float(np.max(np.abs(m.conj().T @ m - np.eye(m.shape[0]))))
        if dev > UNITARITY_TOL:
            raise NotUnitary(f"max |U^dag U - 1| = {dev:.3e} exceeds {UNITARITY_TOL:.0e}")
        object.__setattr__(self, "matrix", _freeze(m))

    @property
    def dimension(self) -> int:
        return self.matrix.shape[0]


def _require_spinless(basis: MomentumBasis) -> None:
    if basis.spin_dim != 1:
        raise ValueError("angle operators are built spinless; attach spin via tensor_with_pauli")


def build_cos_theta(basis: MomentumBasis) -> HermitianOperator:
    """Matrix of cos(theta): 1/2 on the first off-diagonals, wrap corners under PBC."""
    _require_spinless(basis)
    n = basis.size
    m = np.zeros((n, n), dtype=complex)
    idx = np.arange(n - 1)
    m[idx + 1, idx] = 0.5
    m[idx, idx + 1] = 0.5
    if basis.bc.wraps:
        m[0, n - 1] += 0.5
        m[n - 1, 0] += 0.5
    return HermitianOperator(m)


def build_sin_theta(basis: MomentumBasis) -> HermitianOperator:
    """Matrix of sin(theta) = (e^{i theta} - e^{-i theta}) / 2i.

    The raising part carries 1/(2i) = -i/2; under PBC the raise at n_hi wraps
    to n_lo with the same sign rule.
    """
    _require_spinless(basis)
    n = basis.size
    m = np.zeros((n, n), dtype=complex)
    idx = np.arange(n - 1)
    m[idx + 1, idx] = -0.5j
    m[idx, idx + 1] = 0.5j
    if basis.bc.wraps:
        m[0, n - 1] += -0.5j
        m[n - 1, 0] += 0.5j
    return HermitianOperator(m)


def build_kinetic_phase(basis: MomentumBasis, tau: float) -> UnitaryOperator:
    """Diagonal free evolution e^{-i n^2 tau / 2}.

    The phase is reduced as 2 pi * frac(n^2 * tau / (4 pi)) before
    exponentiation: for integer n the resonant value tau = 4 pi then yields
    the identity exactly, and tau = 2 pi yields exactly (-1)^n, instead of
    accumulating roundoff of order n^2 * eps.
    """
    if tau < 0:
        raise ValueError("tau must be non-negative")
    n = basis.n_values().astype(float)
    turns = np.mod(n * n * (tau / (4.0 * np.pi)), 1.0)
    diag = np.exp(-2.0j * np.pi * turns)
    if basis.spin_dim == 2:
        diag = np.repeat(diag, 2)
    return UnitaryOperator(np.diag(diag))


def tensor_with_pauli(a: HermitianOperator, axis: str) -> HermitianOperator:
    """Kronecker product A (x) sigma_axis in (momentum (x) spin) ordering."""
    if axis not in PAULI:
        raise ValueError(f"axis must be one of x, y, z, got {axis!r}")
    return HermitianOperator(np.kron(a.matrix, PAULI[axis]))


def unitary_exp(h: HermitianOperator, prefactor: float) -> UnitaryOperator:
    """exp(-i * prefactor * H) via the spectral decomposition of H."""
    w, v = h.eigensystem
    phases = np.exp(-1j * prefactor * w)
    return UnitaryOperator((v * phases) @ v.conj().T)
