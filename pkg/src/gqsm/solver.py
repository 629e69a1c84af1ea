"""Model enumeration under the two stable semantics, and the syntactic
class on which they are guaranteed to agree.

Three enumerators share the same candidate space, every subset of the
program's ground atom base:

* ``stable_models_reduct``    grounds once, then keeps candidates that
  are minimal models of their own reduct.  Sound only when every
  predicate is intensional.
* ``stable_models_operator``  keeps models with no smaller valuation of
  the intensional predicates satisfying the stability transformation.
* ``flp_stable_models``       same shape, with the rule-wise
  transformation ``B and B(u) -> H(u)`` in place of the star.

``compare_semantics`` runs the last two and checks the outcome against
``monotone_class_report``: inside the class, any disagreement is a bug.
"""
from __future__ import annotations

import itertools
import os
import time
from dataclasses import dataclass
from typing import Optional

from .syntax import (
    Apply,
    Formula,
    GqError,
    Program,
    TOP,
    forall,
    impl,
    is_atomic,
    is_bot,
)
from .quantifiers import Registry
from .ground import (
    GroundAtom,
    Interpretation,
    _eval,
    _gsat,
    atom_set_key,
    eval_flp_transform,
    eval_star,
    ground_program,
    herbrand_base,
    satisfies_program,
)
from .reduct import DEFAULT_ATOM_CAP, EnumerationCapError, reduct

CAP_ENV_VAR = "GQSM_ATOM_CAP"


class ReductRouteError(GqError):
    pass


@dataclass(frozen=True)
class SolveStats:
    candidates: int
    elapsed: float


@dataclass(frozen=True)
class SolveResult:
    semantics: str  # "sm" or "flp"
    route: str  # "reduct" or "operator"
    models: tuple
    stats: SolveStats

    def to_json(self) -> dict:
        return {
            "semantics": self.semantics,
            "route": self.route,
            "models": [
                [str(a) for a in sorted(m, key=GroundAtom.sort_key)]
                for m in self.models
            ],
            "stats": {"candidates": self.stats.candidates},
        }


def resolve_cap(cap: Optional[int] = None) -> int:
    if cap is not None:
        return cap
    raw = os.environ.get(CAP_ENV_VAR)
    if raw is None:
        return DEFAULT_ATOM_CAP
    try:
        return int(raw)
    except ValueError:
        raise GqError(f"{CAP_ENV_VAR} must be an integer, got {raw!r}") from None


def program_to_sentence(program: Program) -> Formula:
    """The program as one sentence: the conjunction of the universal
    closures of ``body -> head``."""
    closures = []
    for rule in program.rules:
        f = impl(rule.body, rule.head)
        for x in sorted(rule.free_variables(), reverse=True):
            f = forall(x, f)
        closures.append(f)
    if not closures:
        return TOP
    out = closures[0]
    for f in closures[1:]:
        out = Apply("and", ((), ()), (out, f))
    return out


def _subsets_ascending(pool: tuple):
    for r in range(len(pool) + 1):
        yield from itertools.combinations(pool, r)


def _checked_base(program: Program, cap: Optional[int]) -> tuple:
    base = herbrand_base(program)
    limit = resolve_cap(cap)
    if len(base) > limit:
        raise EnumerationCapError(len(base), limit)
    return base


def stable_models_reduct(
    program: Program, registry: Registry, cap: Optional[int] = None
) -> SolveResult:
    """Stable models via grounding and reducts.

    Sound only when every predicate is intensional, since the reduct
    minimizes over whole atom sets; otherwise this raises
    ``ReductRouteError`` and the operator route must be used.
    """
    if not program.all_intensional:
        extensional = sorted(set(program.signature) - program.intensional)
        raise ReductRouteError(
            "the reduct route requires every predicate to be intensional; "
            f"extensional here: {', '.join(extensional)}"
        )
    t0 = time.perf_counter()
    base = _checked_base(program, cap)
    universe = program.universe
    rules = ground_program(program, registry)
    models = []
    candidates = 0
    for combo in _subsets_ascending(base):
        candidates += 1
        s = frozenset(combo)
        idx = frozenset((a.pred, a.args) for a in s)
        if not all(_gsat(g, idx, universe, registry) for g in rules):
            continue
        reduced = tuple(reduct(g, s, universe, registry).formula for g in rules)
        pool = sorted(s, key=GroundAtom.sort_key)
        minimal = True
        for r in range(len(pool)):
            for sub in itertools.combinations(pool, r):
                sub_idx = frozenset((a.pred, a.args) for a in sub)
                if all(_gsat(g, sub_idx, universe, registry) for g in reduced):
                    minimal = False
                    break
            if not minimal:
                break
        if minimal:
            models.append(s)
    models.sort(key=atom_set_key)
    return SolveResult(
        "sm",
        "reduct",
        tuple(models),
        SolveStats(candidates, time.perf_counter() - t0),
    )


def stable_models_operator(
    program: Program, registry: Registry, cap: Optional[int] = None
) -> SolveResult:
    """Stable models via the stability transformation: a model is stable
    when no proper subvaluation of its intensional slice satisfies the
    starred sentence."""
    t0 = time.perf_counter()
    base = _checked_base(program, cap)
    universe = program.universe
    sentence = program_to_sentence(program)
    intensional = program.intensional
    models = []
    candidates = 0
    for combo in _subsets_ascending(base):
        candidates += 1
        s = frozenset(combo)
        interp = Interpretation(universe, s)
        if not _eval(sentence, interp, registry, {}):
            continue
        slice_pool = sorted(
            (a for a in s if a.pred in intensional), key=GroundAtom.sort_key
        )
        stable = True
        for r in range(len(slice_pool)):
            for sub in itertools.combinations(slice_pool, r):
                if eval_star(sentence, interp, frozenset(sub), intensional, registry):
                    stable = False
                    break
            if not stable:
                break
        if stable:
            models.append(s)
    models.sort(key=atom_set_key)
    return SolveResult(
        "sm",
        "operator",
        tuple(models),
        SolveStats(candidates, time.perf_counter() - t0),
    )


def flp_stable_models(
    program: Program, registry: Registry, cap: Optional[int] = None
) -> SolveResult:
    """Stable models in the FLP sense: a model is stable when no proper
    subvaluation of its intensional slice satisfies every rule instance
    read as ``B and B(u) -> H(u)``."""
    t0 = time.perf_counter()
    base = _checked_base(program, cap)
    universe = program.universe
    intensional = program.intensional
    models = []
    candidates = 0
    for combo in _subsets_ascending(base):
        candidates += 1
        s = frozenset(combo)
        interp = Interpretation(universe, s)
        if not satisfies_program(interp, program, registry):
            continue
        slice_pool = sorted(
            (a for a in s if a.pred in intensional), key=GroundAtom.sort_key
        )
        stable = True
        for r in range(len(slice_pool)):
            for sub in itertools.combinations(slice_pool, r):
                if eval_flp_transform(program, interp, frozenset(sub), registry):
                    stable = False
                    break
            if not stable:
                break
        if stable:
            models.append(s)
    models.sort(key=atom_set_key)
    return SolveResult(
        "flp",
        "operator",
        tuple(models),
        SolveStats(candidates, time.perf_counter() - t0),
    )


# ---------------------------------------------------------------------------
# The agreement class


@dataclass(frozen=True)
class ClassViolation:
    rule_index: int  # 0-based position of the rule in the program
    literal: str
    reason: str


@dataclass(frozen=True)
class ClassReport:
    in_class: bool
    violations: tuple

    def to_json(self) -> dict:
        return {
            "in_class": self.in_class,
            "violations": [
                {"rule": v.rule_index, "literal": v.literal, "reason": v.reason}
                for v in self.violations
            ],
        }


def _flatten_spine(f: Formula, name: str) -> list:
    if isinstance(f, Apply) and f.quantifier == name and f.var_lists == ((), ()):
        return _flatten_spine(f.args[0], name) + [f.args[1]]
    return [f]


def _negated(f: Formula):
    """The formula under an outermost negation, or None."""
    if (
        isinstance(f, Apply)
        and f.quantifier == "impl"
        and f.var_lists == ((), ())
        and is_bot(f.args[1])
    ):
        return f.args[0]
    return None


def monotone_class_report(program: Program, registry: Registry) -> ClassReport:
    """Check rules against the shape on which both semantics coincide:
    disjunctions of atomics in the head; bodies built from literals that
    are atomic or apply a quantifier to atomic arguments, where any
    negated quantifier must be monotone in every argument position."""
    violations = []

    def atomic_args_ok(app: Apply) -> bool:
        return all(is_atomic(a) for a in app.args)

    for i, rule in enumerate(program.rules):
        for part in _flatten_spine(rule.head, "or"):
            if not is_atomic(part):
                violations.append(
                    ClassViolation(i, str(part), "head disjunct is not atomic")
                )
        for part in _flatten_spine(rule.body, "and"):
            inner = _negated(part)
            if inner is not None:
                if is_atomic(inner):
                    continue
                if isinstance(inner, Apply):
                    if not atomic_args_ok(inner):
                        violations.append(
                            ClassViolation(
                                i,
                                str(part),
                                "negated quantifier has a non-atomic argument",
                            )
                        )
                        continue
                    qdef = registry.resolve(inner.quantifier)
                    if not qdef.monotone_everywhere:
                        violations.append(
                            ClassViolation(
                                i,
                                str(part),
                                f"quantifier {inner.quantifier!r} is not "
                                "monotone in every position, so it cannot "
                                "be negated",
                            )
                        )
                    continue
                violations.append(
                    ClassViolation(i, str(part), "negated part is not atomic")
                )
                continue
            if is_atomic(part):
                continue
            if isinstance(part, Apply):
                if not atomic_args_ok(part):
                    violations.append(
                        ClassViolation(
                            i, str(part), "quantifier argument is not atomic"
                        )
                    )
                continue
            violations.append(
                ClassViolation(i, str(part), "body literal is not atomic")
            )
    return ClassReport(not violations, tuple(violations))


@dataclass(frozen=True)
class ComparisonReport:
    sm: SolveResult
    flp: SolveResult
    difference: tuple  # models in exactly one of the two
    class_report: ClassReport
    agreement_violated: bool

    def to_json(self) -> dict:
        return {
            "sm": self.sm.to_json(),
            "flp": self.flp.to_json(),
            "difference": [
                [str(a) for a in sorted(m, key=GroundAtom.sort_key)]
                for m in self.difference
            ],
            "class": self.class_report.to_json(),
            "agreement_violated": self.agreement_violated,
        }


def compare_semantics(
    program: Program, registry: Registry, cap: Optional[int] = None
) -> ComparisonReport:
    sm = stable_models_operator(program, registry, cap)
    flp = flp_stable_models(program, registry, cap)
    diff = set(sm.models) ^ set(flp.models)
    difference = tuple(sorted(diff, key=atom_set_key))
    report = monotone_class_report(program, registry)
    return ComparisonReport(
        sm=sm,
        flp=flp,
        difference=difference,
        class_report=report,
        agreement_violated=report.in_class and bool(difference),
    )
