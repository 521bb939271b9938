"""Entanglement distillation analysis for bipartite fermionic Gaussian states.

Covariance-matrix calculus in the self-dual formalism, Pfaffian-based
fidelities and parity probabilities, twirl-invariant state reduction,
distillability tests, and hashing-rate sweeps for the free hopping
chain, all cross-checked against a dense Fock-space reference at small
mode counts.
"""

from .chain import ChainSpec, chain_covariance, hopping_kernel, rate_sweep
from .covariance import (
    BasisProjection,
    CovarianceMatrix,
    bogolubov_transform,
    conjugate_projection,
    covariance_from_two_point,
    equal_parity_probability,
    fidelity,
    load_covariance,
    normal_form,
    optimal_fidelity_product,
    restrict_modes,
    save_covariance,
    standard_projection,
    validate_covariance,
    wick_moment,
)
from .distill import (
    DistillationReport,
    InvariantStateParams,
    conditional_fidelity,
    distillable,
    hashing_rate,
    isotropic_theta,
    run_protocol,
    twirl_project,
)
from .linalg import pair_partition_pfaffian, pfaffian, real_svd

__version__ = "0.1.0"

__all__ = [
    "BasisProjection",
    "ChainSpec",
    "CovarianceMatrix",
    "DistillationReport",
    "InvariantStateParams",
    "bogolubov_transform",
    "chain_covariance",
    "conditional_fidelity",
    "conjugate_projection",
    "covariance_from_two_point",
    "distillable",
    "equal_parity_probability",
    "fidelity",
    "hashing_rate",
    "hopping_kernel",
    "isotropic_theta",
    "load_covariance",
    "normal_form",
    "optimal_fidelity_product",
    "pair_partition_pfaffian",
    "pfaffian",
    "rate_sweep",
    "real_svd",
    "restrict_modes",
    "run_protocol",
    "save_covariance",
    "standard_projection",
    "twirl_project",
    "validate_covariance",
    "wick_moment",
]
