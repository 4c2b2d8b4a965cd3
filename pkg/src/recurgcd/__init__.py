"""Exact heights, places and log gcd for number fields, with recurrence-sequence experiments."""

from .errors import (
    ConfigurationError,
    DomainError,
    FieldMismatchError,
    NotDivisibleError,
    ParseError,
    RecurGCDError,
    TorsionError,
    UndecidableError,
    ZeroRecurrenceError,
)
from .exactfield import (
    Field,
    FieldElement,
    Place,
    is_s_integral,
    is_s_unit,
    log_abs,
    ord_at,
    parse_place,
    product_formula_residual,
)
from .heights import (
    LinearForm,
    ProjectivePoint,
    height_form,
    height_point,
    height_polynomial,
    height_scalar,
    log_gcd,
    weil,
)
from .hilbert import greedy_basis, hilbert_prime, ideal_slice, reduction_forms
from .logvalue import LogValue
from .multipoly import MultiPoly, gcd, resultant
from .parsing import parse_element, parse_polynomial
from .recurrence import (
    ExponentLattice,
    Recurrence,
    coprime_in_R_gamma,
    eval_rec,
    exceptional_n,
    group_structure,
    parse_recurrence,
    s_integral_ratio,
    skolem_zeros,
    split_subsequence,
    to_laurent,
)
from .subspace import HyperplaneFamily, PointFamily, best_general_position_sum, subspace_check

__version__ = "0.1.0"
