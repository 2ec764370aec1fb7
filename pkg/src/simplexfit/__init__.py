"""simplexfit: randomized inscribed and enclosing simplices for convex bodies.

The library builds large barycenter-at-origin simplices inside convex bodies
by a randomized homothety construction, turns them into small enclosing
simplices by polar duality, and ships a Monte Carlo harness that checks the
exact volume identities and tail bounds behind both constructions.
"""

__version__ = "0.1.0"

from .bodies import (  # noqa: F401
    AffineMap,
    Ball,
    ConvexBody,
    Cube,
    DegenerateSimplexError,
    Ellipsoid,
    HPolytope,
    NoExactVolumeError,
    NotABodyError,
    PolarUnboundedError,
    Simplex,
    SimplexBody,
    TransformedBody,
    VPolytope,
    body_from_spec,
    exact_volume,
    mahler_centered_simplex,
    membership,
    polar_body,
    polar_simplex,
    simplex_barycenter,
    simplex_contains_body,
    simplex_volume,
    support,
)
from .centered import (  # noqa: F401
    CenterPolicy,
    CenteredSimplexTrial,
    build_raw,
    calibrate_tail_constants,
    certify_inside,
    positive_lower_quantile,
    recenter,
    run_trials,
    tail_quantile,
)
from .enclosing import (  # noqa: F401
    EnclosingResult,
    baseline_bounds,
    center_for_polar,
    duality_volume_identity,
    enclose,
)
from .harness import (  # noqa: F401
    Polygon2D,
    default_corpus,
    min_enclosing_triangle,
    reference_ball,
    reference_cube,
    sweep,
)
from .isotropy import (  # noqa: F401
    IsotropicModel,
    estimate_moments,
    isotropic_transform,
    kls_inradius,
)
from .report import ExperimentReport  # noqa: F401
from .sampling import SamplerHandle, derive_seed  # noqa: F401
