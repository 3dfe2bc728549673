"""Exact exponential sums over hypersurfaces modulo p and p^2, and the
stratification of frequency space by the dimension of the tangency locus."""

from .cyclo import CycloElem, RootCounter, canonicalize, cyclo_eq, cyclo_to_complex
from .expsum import (
    BoundReport,
    SumValue,
    TpArgs,
    bound_report,
    sum_bruteforce,
    sum_reduction,
    t_p_bruteforce,
    t_p_closed,
)
from .ffield import (
    ModulusSpec,
    build_extension,
    enumerate_field,
    ext_arith,
    prime_field,
    prime_square,
)
from .poly import (
    FormReport,
    HypothesisError,
    MultiPoly,
    PolyParseError,
    analyze_form,
    eval_mod,
    gradient,
    parse_poly,
)
from .strata import CodimReport, StrataTable, build_strata, codim_report, min_j
from .varieties import (
    DimEstimate,
    LiftCount,
    WSpec,
    count_mod_p2,
    count_W,
    enumerate_points,
    enumerate_W,
    estimate_dim,
)

__version__ = "0.1.0"
