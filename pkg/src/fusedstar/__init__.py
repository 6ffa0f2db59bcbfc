"""Fastest consensus averaging on two-fused-star networks.

Build the network, pick or solve for edge weights, inspect the spectrum
through its stratified blocks, certify optimality analytically, and run
the consensus iteration.  The command-line entry point lives in
``fusedstar.cli``.
"""
from .certificate import (
    CertificateResiduals,
    DualCertificate,
    alpha_vectors,
    build_dual_certificate,
    stencil_gram_matrices,
    verify_certificate,
)
from .optimizer import (
    DegenerateSineError,
    NoRootsError,
    OptimalSolution,
    PoleProximityError,
    RootCountMismatchWarning,
    SelfCheckError,
    ThetaRoots,
    char_residual,
    equivalent_star,
    optimal_weights,
    solve_symmetric_star,
    solve_theta_roots,
)
from .simulation import (
    InsufficientSignalError,
    Trajectory,
    convergence_factor_estimate,
    distributed_iterate,
    iterate,
    random_initial_state,
    write_trajectory_csv,
)
from .spectral import (
    SpectralReport,
    SpectrumSizeError,
    StratifiedBlocks,
    block_spectrum,
    block_structure,
    build_blocks,
    full_spectrum,
    interlacing_check,
    perron_vector,
    stratification_basis,
)
from .topology import (
    InvalidNodeError,
    InvalidParameterError,
    NodeId,
    NotAnEdgeError,
    TfsGraph,
    TfsParams,
    build_topology,
    canonical_nodes,
    degrees,
    edge_orbit,
    node_index,
)
from .weighting import (
    MissingOrbitWeightError,
    OrbitWeights,
    StochasticityReport,
    WeightMatrix,
    assemble_weight_matrix,
    best_constant_orbit_weights,
    best_constant_weights,
    check_orbit_weights,
    max_degree_orbit_weights,
    max_degree_weights,
    metropolis_orbit_weights,
    metropolis_weights,
    validate_stochastic,
)

__version__ = "0.1.0"

__all__ = [
    "CertificateResiduals",
    "DualCertificate",
    "InsufficientSignalError",
    "InvalidNodeError",
    "InvalidParameterError",
    "MissingOrbitWeightError",
    "NoRootsError",
    "NodeId",
    "NotAnEdgeError",
    "OptimalSolution",
    "OrbitWeights",
    "PoleProximityError",
    "RootCountMismatchWarning",
    "SelfCheckError",
    "SpectralReport",
    "SpectrumSizeError",
    "StochasticityReport",
    "StratifiedBlocks",
    "TfsGraph",
    "TfsParams",
    "ThetaRoots",
    "Trajectory",
    "WeightMatrix",
    "alpha_vectors",
    "assemble_weight_matrix",
    "best_constant_orbit_weights",
    "best_constant_weights",
    "block_spectrum",
    "block_structure",
    "build_blocks",
    "build_dual_certificate",
    "build_topology",
    "canonical_nodes",
    "char_residual",
    "check_orbit_weights",
    "convergence_factor_estimate",
    "degrees",
    "distributed_iterate",
    "edge_orbit",
    "equivalent_star",
    "full_spectrum",
    "interlacing_check",
    "iterate",
    "max_degree_orbit_weights",
    "max_degree_weights",
    "metropolis_orbit_weights",
    "metropolis_weights",
    "node_index",
    "optimal_weights",
    "perron_vector",
    "random_initial_state",
    "solve_symmetric_star",
    "solve_theta_roots",
    "stencil_gram_matrices",
    "stratification_basis",
    "validate_stochastic",
    "verify_certificate",
    "write_trajectory_csv",
]
