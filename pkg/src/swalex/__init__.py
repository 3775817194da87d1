"""swalex: exact-arithmetic twisted Alexander polynomial and
Seiberg-Witten obstructions for circle bundles over 3-manifolds."""

from .exactalg import (
    IntMatrix,
    LaurentPoly,
    PolyMatrix,
    minor_gcd,
    poly_det,
    poly_gcd,
    smith_normal_form,
    unit_normalize,
)
from .presentations import (
    KnotData,
    ParseError,
    Presentation,
    Word,
    builtin_knots,
    builtin_manifold,
    free_reduce,
    parse_presentation,
    parse_word,
    splice_t3,
    t3_presentation,
    zero_surgery,
)
from .homology import (
    CohClass1,
    EulerClass,
    H1Data,
    Interval,
    RealClass2,
    circle_bundle_invariants,
    decompose_positive,
    divisibility,
    find_transverse_class,
    h1,
    ker_pairing,
)
from .covers import (
    FiniteGroup,
    FiniteHom,
    builtin_group,
    enumerate_epimorphisms,
    gamma_quotient,
    induced_class,
    load_group_table,
    reidemeister_schreier,
    schreier_cover,
)
from .alexander import (
    GroupRingElt,
    IndeterminateTwisted,
    alexander_multivariable,
    alexander_one_variable,
    fox_derivative,
    twisted_alexander,
)
from .swbridge import (
    SWPolynomial,
    baldridge_pushforward,
    coefficient_sum,
    splice_sw,
    sw_from_alexander,
)
from .obstruction import (
    ModeFlags,
    QuotientRecord,
    Verdict,
    degree_report,
    is_monic,
    verdict,
)

__version__ = "0.1.0"
