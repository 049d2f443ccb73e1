"""Exact diagram calculus for the marked Brauer category and its algebra."""

from .scalars import Params, ParamsMismatch, Scalar, lc_normalize
from .diagrams import (
    Matching,
    StandardDiagram,
    MarkedLayout,
    Marking,
    basis_size,
    classify,
    enumerate_basis,
    normalization_sign,
)
from .category import (
    ArityMismatch,
    Element,
    GeneratorWord,
    SignConventions,
    bend,
    braiding,
    compose,
    endofunctor,
    evaluate_word,
    factor_standard,
    generator,
    identity,
    tensor,
    transpose,
    verify_category_presentation,
    w_element,
)

__all__ = [name for name in dir() if not name.startswith("_")]
