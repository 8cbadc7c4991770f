"""Elliptic Dedekind sums over imaginary quadratic orders.

Exact order arithmetic and coset enumeration, exponentially convergent
evaluation of the Kronecker-Eisenstein E1 / E2(0) / j-invariant, the Phi
homomorphism with its three-term closed form, and a constructive density
search approximating rationals by normalized sums.
"""

from .cosets import CosetSystem, MultMatrix, coset_reps, mult_matrix
from .dedekind import (
    Mat2,
    SumContext,
    d_norm,
    d_sum,
    gen_sl2_triple,
    i_map,
    three_term_closed_form,
    normalize_value,
    phi,
    three_term_residual,
)
from .density import ApproxStep, Target, approximate, approximate_real, construct, find_prime
from .errors import (
    ConstructionError,
    DedekindError,
    DegenerateLatticeError,
    ExcludedRingError,
    GenerationError,
    InadmissibleTargetError,
    InvalidModulusError,
    ModularArithmeticError,
    NoSquareRootError,
    NotAMultiplierError,
    NotUnimodularError,
    OrderMismatchError,
    PoleError,
    PrecisionLossError,
    PreconditionError,
    SearchLimitError,
    UnsupportedOrderError,
    ZeroDivisorError,
)
from .lattice import Lattice, PrecisionPolicy, area, e1, e2_zero, j_invariant, quasi_periods, weierstrass_zeta
from .ring import (
    OrderElem,
    QuadOrder,
    crt,
    egcd,
    egcd_order,
    inverse_mod,
    is_probable_prime,
    legendre_symbol,
    sqrt_discriminant,
    sqrt_mod,
)

__version__ = "0.1.0"

__all__ = [
    "QuadOrder",
    "OrderElem",
    "sqrt_discriminant",
    "egcd",
    "inverse_mod",
    "crt",
    "legendre_symbol",
    "sqrt_mod",
    "is_probable_prime",
    "egcd_order",
    "PrecisionPolicy",
    "Lattice",
    "area",
    "weierstrass_zeta",
    "quasi_periods",
    "e2_zero",
    "e1",
    "j_invariant",
    "MultMatrix",
    "mult_matrix",
    "CosetSystem",
    "coset_reps",
    "Mat2",
    "SumContext",
    "i_map",
    "d_sum",
    "d_norm",
    "normalize_value",
    "phi",
    "three_term_residual",
    "three_term_closed_form",
    "gen_sl2_triple",
    "Target",
    "ApproxStep",
    "find_prime",
    "construct",
    "approximate",
    "approximate_real",
    "DedekindError",
    "OrderMismatchError",
    "InvalidModulusError",
    "NoSquareRootError",
    "ModularArithmeticError",
    "UnsupportedOrderError",
    "DegenerateLatticeError",
    "PoleError",
    "NotAMultiplierError",
    "ZeroDivisorError",
    "NotUnimodularError",
    "PreconditionError",
    "GenerationError",
    "ExcludedRingError",
    "PrecisionLossError",
    "InadmissibleTargetError",
    "SearchLimitError",
    "ConstructionError",
]
