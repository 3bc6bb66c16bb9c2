"""Finite structures, first-order formulas, interpretations and counting formulas."""

from gapforge.fo.catalog import builtin_interpretations
from gapforge.fo.counting import (
    CardEq,
    Compiled,
    CountingContext,
    Indicator,
    NuCount,
    One,
    PairCount,
    Product,
    Sum,
    compile_counting,
    evaluate_counting,
)
from gapforge.fo.evaluate import UnboundVariable, count_satisfying, evaluate, satisfying_tuples
from gapforge.fo.formulas import Formula
from gapforge.fo.interpret import Applied, Interpretation, apply_interpretation, identity_interpretation
from gapforge.fo.iso import find_isomorphism, isomorphic
from gapforge.fo.sexpr import parse_formula, parse_interpretation
from gapforge.fo.structures import Structure, Vocabulary

__all__ = [
    "Applied",
    "CardEq",
    "Compiled",
    "CountingContext",
    "Formula",
    "Indicator",
    "Interpretation",
    "NuCount",
    "One",
    "PairCount",
    "Product",
    "Structure",
    "Sum",
    "UnboundVariable",
    "Vocabulary",
    "apply_interpretation",
    "builtin_interpretations",
    "compile_counting",
    "count_satisfying",
    "evaluate",
    "evaluate_counting",
    "find_isomorphism",
    "identity_interpretation",
    "isomorphic",
    "parse_formula",
    "parse_interpretation",
    "satisfying_tuples",
]
