"""Exact performance of port-based teleportation with pretty-good measurements.

A diagrammatic operator algebra whose size depends on the number of ports
but not the dimension, an exact rational spectral pipeline for the
measurement operator rho, closed-form and dense-matrix cross-checks, and
a CLI for sweeps and tables.
"""

from .algebra import (
    AlgebraElement,
    DiagramTerm,
    DScalar,
    expand_marked_classes,
    from_terms,
    identity_element,
    mul_terms,
    sigma,
    symmetrize_to_classes,
    trace_loops,
)
from .errors import ConsistencyError
from .metrics import (
    MetricsRow,
    closed_form_success,
    fidelities,
    fidelity_bounds,
    metrics_row,
    success_probability,
    sweep,
)
from .oracle import (
    element_to_matrix,
    oracle_success_probability,
    perm_matrix,
    rho_matrix,
    sigma_matrix,
    term_to_matrix,
)
from .partitions import (
    PartitionTable,
    bounds_check,
    build_partition_table,
    enumerate_partitions,
    generating_coefficients,
    marked_partition_count,
    partition_count,
    w_upper_bound,
)
from .permutations import (
    MarkedClass,
    Permutation,
    compose,
    enumerate_marked_classes,
    from_cycles,
    identity,
    inverse,
    marked_class_of,
    marked_class_size,
    to_cycles,
    transposition,
)
from .spectral import (
    ClosurePolynomial,
    Spectrum,
    build_rho,
    closure_polynomial,
    compute_spectrum,
    rho_inverse_sqrt,
    rho_power,
    spectral_projector,
)

__version__ = "0.1.0"
