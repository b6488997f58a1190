"""Exact computations with multisemigroups with multiplicities."""
from .errors import (
    BaseNotAssociative,
    BoundMismatch,
    CarrierMismatch,
    FormatError,
    MultiMultError,
    NegativeCoefficient,
    NotAssociative,
    NotFinitary,
    UnknownElement,
    WordTooShort,
)
from .mms import (
    Counterexample,
    MultiMultisemigroup,
    Multisemigroup,
    MultiplicityFunction,
    StructureConstantAlgebra,
    diamond_product,
    evaluate_word_prefix,
    evaluate_word_suffix,
    from_structure_constants,
    function_algebra_multiply,
    indicator,
    is_finitary,
    lift_multisemigroup,
    mu,
    reduce,
    structure_constants,
    underlying_multisemigroup,
    verify_associativity,
)
from .semiring import (
    OMEGA,
    Cardinal,
    card_add,
    card_mul,
    card_sum,
    check_semiring_axioms,
    phi_reduce,
    psi_lift,
)

__version__ = "0.1.0"
