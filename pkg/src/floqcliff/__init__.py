"""Disordered Floquet Clifford circuits in one and two dimensions.

Simulation of operator spreading, entanglement growth, and spectral form
factors via GF(2) stabilizer algebra, together with the percolation-style
boundary-growth analysis (random quadrant graphs, dual walls, closed-form
survival bounds) and the 1D blocking-wall statistics.
"""

from .circuit import FloquetCircuit, Geometry, GridEvolver, StabilizerState
from .clifford import (
    CliffordEnsembleSpec,
    CliffordGate,
    compose,
    conjugate,
    from_pauli_images,
    identity_gate,
    inverse,
    random_clifford,
    sample_uniform,
)
from .gf2 import BitMatrix, BitVector, kernel_basis, mat_mul, rank
from .observables import (
    average_spread,
    boundary_support,
    entanglement_curve,
    entanglement_entropy,
    fit_localization_length,
    lightspeed_fraction,
    rho,
)
from .pauli import PauliOperator, commutes, multiply, support
from .percolation import (
    analytic_bound,
    count_walls,
    decouple_q,
    dual_of,
    longest_path,
    sample_quadrant,
    survival_probability,
    verify_distribution_vs_clifford,
    vertex_distribution,
    wall_blocks_path_check,
)
from .sff import (
    brute_force_sff,
    fourier_sff,
    invariant_group,
    rmt_reference,
    sff_curve,
    time_average,
    trace_squared,
)
from .walls import detect_walls_dynamical, wall_histogram, wall_predicate

__version__ = "0.1.0"
