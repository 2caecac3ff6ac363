"""Exact classification of the linear maps between modules of differential
operators on forms that commute with the Lie derivative."""

from .ansatz import ansatz_terms, classify_ansatz, cross_validate
from .canonical import (
    OPERATORS,
    K_D1p,
    K_D20,
    decompose_D1p,
    decompose_D20,
    dstar_K,
    dstar_K_closed_form,
    i_zero,
    identity,
)
from .classify import (
    CandidateOperator,
    ClassificationResult,
    apply_candidate,
    candidate_space,
    classify_direct,
    constraint_system,
    encode_operator,
    equivariance_residual,
)
from .linalg import kernel
from .symbols import (
    FormField,
    OpSymbol,
    PolyVectorField,
    apply,
    bracket,
    de_rham,
    dual_d,
    lie_form,
    lie_op,
    lie_symbolic,
    lie_tensor,
    principal_symbol,
)
from .tables import expected_dimension, natural_l, stabilization
from .tensor import AltTensor, Poly, alt_substitute, interior, pair, wedge

__version__ = "0.1.0"
