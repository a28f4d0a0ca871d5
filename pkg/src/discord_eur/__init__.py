"""Entropic uncertainty relations with quantum memory, tightened by quantum discord."""

from .bounds import (
    BoundReport,
    berta_bound,
    bound_report,
    common_randomness_upper_bound,
    eof_lower_bound,
    fano_term,
    mu_bound,
    new_bound,
    proof_chain_check,
    refined_bound,
    robertson_bound,
    tripartite_bound,
    tripartite_report,
    uncertainty_sum,
)
from .correlations import (
    OptimizerConfig,
    classical_correlation,
    conditional_entropy,
    correlation_report,
    discord,
    mutual_information,
    optimize_classical_correlation,
)
from .measurements import (
    Measurement,
    computational,
    fourier,
    incompatibility,
    pauli_x,
    pauli_y,
    pauli_z,
    projective,
)
from .states import (
    DensityOperator,
    InvalidStateError,
    isotropic,
    maximally_entangled,
    purify,
    random_density,
    random_pure,
    werner_general,
    werner_main,
)

__version__ = "0.1.0"
