"""Spectra of degenerate sub-elliptic operators and their universal
eigenvalue bounds: assembly, eigensolve, and a full catalog of bound checks."""

from .couples import (
    MembershipResult,
    PowerCouple,
    check_membership,
    couple_condition_residual,
    necessary_condition,
)
from .discretization import (
    Grid,
    assemble_dirichlet_L,
    assemble_multipliers,
    assemble_skew_fields,
    build_grid,
    clamped_proxy,
    default_box,
    write_coordinate_file,
)
from .eigensolver import (
    EigenPairs,
    proxy_pairs,
    rayleigh_quotient,
    smallest_k_eigenpairs,
    verify_lemma_2_5,
)
from .geometry import (
    Classification,
    ClassificationResult,
    DomainSpec,
    GenericDomain,
    GreinerBall,
    GreinerParams,
    Point,
    TorusShell,
    box_domain,
    classify_domain,
    horizontal_gradient_sq,
)
from .inequalities import (
    BoundFamily,
    BoundReport,
    EigenSequence,
    ExponentPair,
    InequalityId,
    chebyshev_check,
    check_clamped_bound,
    check_clamped_chebyshev_form,
    check_clamped_gap,
    check_dirichlet_bound,
    check_ppw_gap,
    check_yang_first,
    check_yang_second,
    gap_powers,
    generalized_chebyshev_check,
    lambda_next_upper_bound,
    power_mean_check,
    spectrum_from_array,
)

__version__ = "0.1.0"
