"""One-period Floquet operators of the kicked rotor and its spin-1/2 double-kicked variant.

The double-kicked operators are expressed in chiral-symmetric time frames:

    frame 1:  U1 = X(k1/2) Y(k2) X(k1/2)
    frame 2:  U2 = Y(k2/2) X(k1) Y(k2/2)

with X(a) = exp(-i a cos(theta) sigma_x) and Y(b) = exp(-i b sin(theta) sigma_y).
Both satisfy sigma_z U sigma_z = U^dag and are unitarily equivalent
(U2 = G U1 G^dag with G = Y(k2/2) X(k1/2)), hence share one quasienergy
spectrum. Only the resonant case (free evolution == identity) is modelled.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .basis import (
    PAULI,
    HermitianOperator,
    MomentumBasis,
    UnitaryOperator,
    build_cos_theta,
    build_kinetic_phase,
    build_sin_theta,
    tensor_with_pauli,
    unitary_exp,
)

RESONANT_TAU = 4.0 * math.pi
ANTIRESONANT_TAU = 2.0 * math.pi


@dataclass(frozen=True)
class QkrParams:
    """Single-kick rotor: kick strength k and free-evolution interval tau."""

    k: float
    tau: float

    def __post_init__(self):
        if self.k < 0:
            raise ValueError("kick strength must be non-negative")
        if self.tau <= 0:
            raise ValueError("tau must be positive")

    @property
    def is_resonant(self) -> bool:
        return math.isclose(self.tau, RESONANT_TAU, rel_tol=1e-12)

    @property
    def is_antiresonant(self) -> bool:
        return math.isclose(self.tau, ANTIRESONANT_TAU, rel_tol=1e-12)


@dataclass(frozen=True)
class DkqrParams:
    """Double-kick parameters; only the resonant case is supported."""

    k1: float
    k2: float
    resonant: bool = True

    def __post_init__(self):
        if self.k1 < 0 or self.k2 < 0:
            raise ValueError("kick strengths must be non-negative")
        if not self.resonant:
            raise ValueError("only the resonant double-kicked rotor is implemented")


@lru_cache(maxsize=32)
def _cos_generator(basis: MomentumBasis) -> HermitianOperator:
    return build_cos_theta(basis)


@lru_cache(maxsize=32)
def _spin_generators(basis: MomentumBasis) -> tuple[HermitianOperator, HermitianOperator]:
    """(cos(theta) (x) sigma_x, sin(theta) (x) sigma_y), cached per basis."""
    return (
        tensor_with_pauli(build_cos_theta(basis), "x"),
        tensor_with_pauli(build_sin_theta(basis), "y"),
    )


def qkr_floquet(p: QkrParams, basis: MomentumBasis) -> UnitaryOperator:
    """U = e^{-i n^2 tau/2} e^{-i k cos(theta)} on the given window."""
    if basis.spin_dim != 1:
        raise ValueError("the single-kicked rotor is spinless")
    kick = unitary_exp(_cos_generator(basis), p.k)
    free = build_kinetic_phase(basis, p.tau)
    return UnitaryOperator(free.matrix @ kick.matrix)


def dkqr_floquet_frame1(p: DkqrParams, basis: MomentumBasis) -> UnitaryOperator:
    """Frame-1 operator X(k1/2) Y(k2) X(k1/2); dimension 2N."""
    if basis.spin_dim != 1:
        raise ValueError("pass the spinless window; spin is attached internally")
    cos_sx, sin_sy = _spin_generators(basis)
    half = unitary_exp(cos_sx, 0.5 * p.k1)
    mid = unitary_exp(sin_sy, p.k2)
    return UnitaryOperator(half.matrix @ mid.matrix @ half.matrix)


def dkqr_floquet_frame2(p: DkqrParams, basis: MomentumBasis) -> UnitaryOperator:
    """Frame-2 operator Y(k2/2) X(k1) Y(k2/2); spectrally equivalent to frame 1."""
    if basis.spin_dim != 1:
        raise ValueError("pass the spinless window; spin is attached internally")
    cos_sx, sin_sy = _spin_generators(basis)
    half = unitary_exp(sin_sy, 0.5 * p.k2)
    mid = unitary_exp(cos_sx, p.k1)
    return UnitaryOperator(half.matrix @ mid.matrix @ half.matrix)


_SIGMA_X = HermitianOperator(PAULI["x"])
_SIGMA_Y = HermitianOperator(PAULI["y"])


def bloch_floquet_2x2(p: DkqrParams, theta: float, frame: int = 1) -> UnitaryOperator:
    """Bulk (theta-parameterized) 2x2 operator: cos/sin matrices become scalars."""
    if frame not in (1, 2):
        raise ValueError("frame must be 1 or 2")
    a = p.k1 * math.cos(theta)
    b = p.k2 * math.sin(theta)
    if frame == 1:
        half = unitary_exp(_SIGMA_X, 0.5 * a)
        mid = unitary_exp(_SIGMA_Y, b)
    else:
        half = unitary_exp(_SIGMA_Y, 0.5 * b)
        mid = unitary_exp(_SIGMA_X, a)
    return UnitaryOperator(half.matrix @ mid.matrix @ half.matrix)
