"""Kicked-rotor Floquet simulator on finite momentum grids."""

__version__ = "0.1.0"

from .basis import (
    BoundaryCondition,
    HermitianOperator,
    MomentumBasis,
    UnitaryOperator,
    build_cos_theta,
    build_kinetic_phase,
    build_sin_theta,
    ideal_basis,
    ideal_bc,
    open_bc,
    periodic_bc,
    symmetric_basis,
    tensor_with_pauli,
    unitary_exp,
)
from .floquet import (
    DkqrParams,
    QkrParams,
    bloch_floquet_2x2,
    dkqr_floquet_frame1,
    dkqr_floquet_frame2,
    qkr_floquet,
)
from .spectral import (
    EdgePairingReport,
    EdgeStateRecord,
    QuasienergySpectrum,
    detect_edge_states,
    detect_flatband_deviators,
    diagonalize,
    edge_weight,
    fold_phases,
    pair_edge_states,
)
from .topology import (
    BlochSample,
    PhasePoint,
    WindingReport,
    bloch_vector,
    phase_diagram,
    planar_winding,
    winding_number,
    winding_pair,
)
from .transport import (
    DistributionDelta,
    McdRow,
    SpinorState,
    TransportTrace,
    chiral_displacement,
    distribution_delta,
    energy_growth,
    evolve,
    initial_spin_up,
    mcd,
    mcd_sweep,
    run_dkqr,
    transport_basis,
)
