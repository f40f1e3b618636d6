"""Width bounds, witness measures and certificates for transitive subsets of the sphere."""

from .errors import (
    DegenerateWitness,
    DimError,
    DomainError,
    NonIsometry,
    NonOrthogonalBlocks,
    NonOrthogonalSubspaces,
    NotASystem,
    OrbitOverflow,
    TransWidthError,
    UnsupportedVirtual,
    WrongKind,
)
from .numeric import (
    DEFAULT_TOL,
    Tolerance,
    haar_sample,
    inner,
    make_rng,
    sorted_abs,
    unit_vector,
)
from .groups import (
    GroupPresentation,
    TransitiveSet,
    basis_set,
    explicit_group,
    explicit_set,
    hypercube_set,
    monomial_group,
    orbit_enumerate,
    permutation_group,
    sharpness_set,
    signed_permutation_group,
    simplex_set,
    sorted_profile,
    square_set,
    sup_correlation,
    sup_correlation_many,
    virtual_set,
)
from .measures import (
    EtaParams,
    SymmetricMeasure,
    combine_imprimitive,
    combine_reducible,
    dyadic_family,
    dyadic_measure,
    eta,
    eta_inequalities_check,
    haar_witness,
    measure_risk,
    measure_risk_many,
    projected_dyadic_measure,
    psi,
    selberg_bound,
)
from .width import (
    SolverConfig,
    WidthReport,
    real_witness_from_complex,
    width_exact_monomial,
    width_lower_eig,
    width_report,
    width_upper,
)
from .decompose import (
    ImprimitivitySystem,
    SubspaceDecomposition,
    reynolds_invariant_subspaces,
    validate_imprimitivity,
)

__version__ = "0.1.0"
