"""Logic programs with generalized quantifiers: two stable-model
semantics, a reduct-based route, and tooling around them."""

from .syntax import (
    Apply,
    Atom,
    BOT,
    Bot,
    Constant,
    Equality,
    Formula,
    GqError,
    Program,
    Rule,
    TOP,
    Top,
    Variable,
    atom,
    conj,
    disj,
    equality,
    exists,
    forall,
    free_variables,
    impl,
    neg,
)
from .quantifiers import (
    Mono,
    QuantifierDef,
    Registry,
    RegistryError,
    RelationError,
    UnknownQuantifierError,
    verify_profile,
)
from .ground import (
    GApply,
    GBot,
    GTop,
    GroundAtom,
    GroundAtomNode,
    GroundFormula,
    GroundingError,
    Interpretation,
    PairSet,
    eval_flp_transform,
    eval_star,
    format_atoms,
    ground,
    ground_program,
    ground_rule,
    ground_to_json,
    herbrand_base,
    satisfies,
    satisfies_direct,
    satisfies_program,
)
from .reduct import (
    DEFAULT_ATOM_CAP,
    EnumerationCapError,
    ReductResult,
    minimal_models,
    reduct,
    reduct_program,
)
from .parser import (
    ParseError,
    aggregate_apply,
    parse_formula,
    parse_model,
    parse_program,
    parse_rule,
)
from .render import render, render_ground_rule, simplify_ground, simplify_rule_sides
from .solver import (
    ClassReport,
    ClassViolation,
    ComparisonReport,
    ReductRouteError,
    SolveResult,
    SolveStats,
    compare_semantics,
    flp_stable_models,
    monotone_class_report,
    program_to_sentence,
    stable_models_operator,
    stable_models_reduct,
)

__version__ = "0.1.0"

__all__ = [
    "Apply",
    "Atom",
    "BOT",
    "Bot",
    "ClassReport",
    "ClassViolation",
    "ComparisonReport",
    "Constant",
    "DEFAULT_ATOM_CAP",
    "EnumerationCapError",
    "Equality",
    "Formula",
    "GApply",
    "GBot",
    "GTop",
    "GqError",
    "GroundAtom",
    "GroundAtomNode",
    "GroundFormula",
    "GroundingError",
    "Interpretation",
    "Mono",
    "PairSet",
    "ParseError",
    "Program",
    "QuantifierDef",
    "ReductResult",
    "ReductRouteError",
    "Registry",
    "RegistryError",
    "RelationError",
    "Rule",
    "SolveResult",
    "SolveStats",
    "TOP",
    "Top",
    "UnknownQuantifierError",
    "Variable",
    "aggregate_apply",
    "atom",
    "compare_semantics",
    "conj",
    "disj",
    "equality",
    "eval_flp_transform",
    "eval_star",
    "exists",
    "flp_stable_models",
    "forall",
    "format_atoms",
    "free_variables",
    "ground",
    "ground_program",
    "ground_rule",
    "ground_to_json",
    "herbrand_base",
    "impl",
    "minimal_models",
    "monotone_class_report",
    "neg",
    "parse_formula",
    "parse_model",
    "parse_program",
    "parse_rule",
    "program_to_sentence",
    "reduct",
    "reduct_program",
    "render",
    "render_ground_rule",
    "satisfies",
    "satisfies_direct",
    "satisfies_program",
    "simplify_ground",
    "simplify_rule_sides",
    "stable_models_operator",
    "stable_models_reduct",
    "verify_profile",
    "__version__",
]
