"""Frobenius trace statistics of elliptic curves y^2 = x^3 + ax + b.

Exact per-prime trace tables, class numbers, Dirichlet characters, the
average constant C_r and box averages of pi^r_E(x).
"""
from . import _kernels
from ._kernels import BACKEND
from .analytic import (
    B_of_r,
    ComparisonPoint,
    ConstantValue,
    euler_product_Cr,
    lemma3_partial_sum,
    pi_half,
)
from .arith import is_prime, legendre, primitive_root, quartic_symbol, sieve_primes
from .characters import (
    BoxCountDecomposition,
    CharacterTable,
    box_count_via_characters,
    build_character_table,
    fourth_moment_ratio,
    lemma5_check,
    polya_vinogradov_scan,
)
from .classnum import ClassNumberRecord, H_rp, form_class_number, kronecker_H, lemma8_diagnostics
from .curves import (
    CurveParams,
    IsoClassSummary,
    TraceDistribution,
    TraceResult,
    are_isomorphic_criterion,
    are_isomorphic_direct,
    iso_classes_with_trace,
    orbit_size,
    trace_distribution,
    trace_of_frobenius,
)
from .errors import (
    CriterionInapplicableError,
    DomainError,
    EmptyRangeError,
    InvalidDiscriminantError,
    InvalidModulusError,
    LangTrotterError,
    NoInverseError,
    ResourceError,
    SingularCurveError,
)
from .experiments import (
    AverageReport,
    ExperimentConfig,
    average_pi_r,
    curve_pi_r,
    exceptional_census,
    second_moment,
)

__version__ = "0.1.0"

__all__ = [
    name
    for name, obj in list(globals().items())
    if not name.startswith("_") and not isinstance(obj, type(_kernels))
]
