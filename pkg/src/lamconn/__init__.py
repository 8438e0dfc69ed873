"""lamconn: an exact-arithmetic workbench for lambda-connections, transport
between infinitesimally close pullbacks, and Higgs bundle deformations
presented by Cech cocycles on desk-scale covers.

Everything is computed over Q (and Laurent polynomial rings over Q, possibly
extended by square-zero generators); there is no floating point anywhere.
"""

from .bundles import (
    HiggsBundleData,
    ValidationReport,
    VectorBundle,
    euler_char_higgs_complex,
    line_bundle,
    scale_higgs,
    stratification_order2,
    validate_higgs,
)
from .builtin_bundles import builtin_bundle, p1_nilpotent, p1_split_zero, p1_trivial
from .cohomology import (
    DegreeWindow,
    cech_h1,
    default_window,
    hyper_dims,
    line_bundle_h1_monomial_count,
    sheaf_dims,
)
from .connections import (
    CurvatureTensor,
    EpsilonTransport,
    LambdaConnection,
    TransversalDistribution,
    curvature,
    epsilon_transport,
    horizontal_lift,
    intertwines_pullbacks,
    is_integrable,
    pullback_connection,
    verify_triangle,
)
from .covers import Cover, affine_cover, proj_line_cover, proj_line_cover_redundant
from .homs import (
    KaehlerForm,
    RingHom,
    hom_square_zero_close,
    identity_hom,
    interpolate_homs,
    kahler_d,
)
from .hypercoc import HyperCocycle, check_conditions, coboundary_of, is_hyper_coboundary
from .ks import (
    DeformedHiggsBundle,
    TangentCocycle,
    build_deformation,
    constant_deformation,
    contract,
    deformations_equivalent,
    gradedness_check,
    integrability_check,
    ks_cocycle,
    monomial_tangent,
    validate_tangent,
)
from .rees import (
    P1Element,
    ReesPoly,
    TrivializedRees,
    d0,
    d1,
    gm_twist_check,
    rees_trivialize,
    rees_untrivialize,
)
from .rings import Ring, RingElement
from .scenario import RunOptions, Scenario, load_scenario, run_scenario
from .thickening import interpolate_thickening
from .verify import verify_paper

__all__ = [name for name in dir() if not name.startswith("_")]
