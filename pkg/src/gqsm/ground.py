"""Interpretations, grounding, and the three satisfaction relations.

Grounding replaces every quantified argument by a pair-set that maps
each tuple of universe elements to the ground instance of the argument
formula, so a ground quantifier application carries one total, finite
table per argument position.  On top of that live:

* ``satisfies``        truth of a ground formula in a set of atoms,
* ``satisfies_direct`` truth of a sentence in an interpretation,
* ``eval_star``        truth of the stability transformation F*(u),
  where u is a second, smaller valuation of the intensional predicates,
* ``eval_flp_transform``  truth of the rule-wise transformation
  B and B(u) implies H(u) used by the FLP semantics.

``satisfies`` after ``ground`` and ``satisfies_direct`` always agree;
the test suite exercises that equivalence heavily.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional

from .syntax import (
    Apply,
    Atom,
    Bot,
    Constant,
    Element,
    Equality,
    Formula,
    GqError,
    Program,
    Rule,
    Top,
    Variable,
    check_element,
    element_key,
    impl,
)
from .quantifiers import Registry

_MISSING = object()


class GroundingError(GqError):
    pass


# ---------------------------------------------------------------------------
# Ground atoms and interpretations


@dataclass(frozen=True)
class GroundAtom:
    """A predicate applied to universe elements, e.g. ``p(-1)``."""

    pred: str
    args: tuple[Element, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "args", tuple(self.args))

    def sort_key(self):
        return (self.pred, tuple(element_key(v) for v in self.args))

    def __str__(self):
        if not self.args:
            return self.pred
        return f"{self.pred}({', '.join(str(v) for v in self.args)})"


AtomSet = frozenset


def atom_set_key(atoms: Iterable[GroundAtom]):
    """Sort key for a whole model: the sorted tuple of atom keys."""
    return tuple(sorted(a.sort_key() for a in atoms))


def format_atoms(atoms: Iterable[GroundAtom]) -> str:
    return " ".join(str(a) for a in sorted(atoms, key=GroundAtom.sort_key))


@dataclass(frozen=True)
class Interpretation:
    """A universe, a set of true ground atoms, and a constant valuation.

    ``constants`` maps object constants to universe elements; ``None``
    is the usual identity valuation, under which every constant names
    itself and must belong to the universe.
    """

    universe: frozenset
    atoms: AtomSet = frozenset()
    constants: Optional[Mapping[Element, Element]] = None
    universe_sorted: tuple = field(
        default=None, compare=False, repr=False, hash=False
    )
    index: frozenset = field(default=None, compare=False, repr=False, hash=False)

    def __post_init__(self):
        universe = frozenset(check_element(e) for e in self.universe)
        if not universe:
            raise GqError("the universe must not be empty")
        object.__setattr__(self, "universe", universe)
        object.__setattr__(
            self, "universe_sorted", tuple(sorted(universe, key=element_key))
        )
        atoms = frozenset(self.atoms)
        for a in atoms:
            if not isinstance(a, GroundAtom):
                raise GqError(f"not a ground atom: {a!r}")
            for v in a.args:
                if v not in universe:
                    raise GqError(f"atom {a} mentions {v!r}, not a universe element")
        object.__setattr__(self, "atoms", atoms)
        object.__setattr__(
            self, "index", frozenset((a.pred, a.args) for a in atoms)
        )
        if self.constants is not None:
            for c, v in self.constants.items():
                check_element(c)
                if v not in universe:
                    raise GqError(
                        f"constant {c!r} maps to {v!r}, not a universe element"
                    )

    def value(self, constant: Element) -> Element:
        if self.constants is not None:
            try:
                return self.constants[constant]
            except KeyError:
                raise GroundingError(f"constant {constant!r} has no value") from None
        if constant not in self.universe:
            raise GroundingError(
                f"constant {constant!r} is not a universe element"
            )
        return constant

    def with_atoms(self, atoms: AtomSet) -> "Interpretation":
        return Interpretation(self.universe, atoms, self.constants)

    def intensional_slice(self, intensional: Iterable[str]) -> AtomSet:
        preds = frozenset(intensional)
        return frozenset(a for a in self.atoms if a.pred in preds)


def herbrand_base(program: Program) -> tuple[GroundAtom, ...]:
    """All ground atoms over the program's signature, sorted."""
    u_sorted = program.universe_sorted()
    out = []
    for pred in sorted(program.signature):
        arity = program.signature[pred]
        for combo in itertools.product(u_sorted, repeat=arity):
            out.append(GroundAtom(pred, combo))
    return tuple(sorted(out, key=GroundAtom.sort_key))


# ---------------------------------------------------------------------------
# Ground formulas


class GroundFormula:
    """Base class of the ground formula algebra."""

    def __str__(self):
        from .render import render

        return render(self)


@dataclass(frozen=True)
class GTop(GroundFormula):
    def __str__(self):
        return "top"


@dataclass(frozen=True)
class GBot(GroundFormula):
    def __str__(self):
        return "bot"


G_TOP = GTop()
G_BOT = GBot()


@dataclass(frozen=True)
class GroundAtomNode(GroundFormula):
    """A ground atom used as a leaf of a ground formula."""

    pred: str
    args: tuple[Element, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "args", tuple(self.args))

    def to_atom(self) -> GroundAtom:
        return GroundAtom(self.pred, self.args)

    def __str__(self):
        return str(self.to_atom())


def _row_key(row):
    return tuple(element_key(v) for v in row)


@dataclass(frozen=True)
class PairSet:
    """A total table from element tuples to ground formulas.

    Entries are kept sorted by key and keys are unique, so two pair-sets
    built from the same mapping compare equal.
    """

    entries: tuple

    def __post_init__(self):
        rows = []
        seen = set()
        for key, child in self.entries:
            key = tuple(key)
            if key in seen:
                raise GqError(f"duplicate pair-set key {key!r}")
            seen.add(key)
            if not isinstance(child, GroundFormula):
                raise GqError(f"pair-set value is not a ground formula: {child!r}")
            rows.append((key, child))
        rows.sort(key=lambda kv: _row_key(kv[0]))
        object.__setattr__(self, "entries", tuple(rows))

    def __len__(self):
        return len(self.entries)

    def keys(self):
        return tuple(k for k, _ in self.entries)


@dataclass(frozen=True)
class GApply(GroundFormula):
    """Ground quantifier application: one pair-set per argument position."""

    quantifier: str
    sets: tuple

    def __post_init__(self):
        sets = tuple(self.sets)
        for s in sets:
            if not isinstance(s, PairSet):
                raise GqError(f"not a pair-set: {s!r}")
        object.__setattr__(self, "sets", sets)

    __str__ = GroundFormula.__str__


def iter_ground_subformulas(g: GroundFormula):
    yield g
    if isinstance(g, GApply):
        for ps in g.sets:
            for _, child in ps.entries:
                yield from iter_ground_subformulas(child)


# ---------------------------------------------------------------------------
# Direct evaluation of formulas in an interpretation


def _term_value(t, interp: Interpretation, env: dict) -> Element:
    if isinstance(t, Variable):
        try:
            return env[t.name]
        except KeyError:
            raise GroundingError(f"unbound free variable {t.name}") from None
    return interp.value(t.value)


def _check_shape(f: Apply, qdef) -> None:
    if len(f.var_lists) != len(qdef.arities):
        raise GroundingError(
            f"quantifier {f.quantifier!r} takes {len(qdef.arities)} arguments, "
            f"got {len(f.var_lists)}"
        )
    for xs, n in zip(f.var_lists, qdef.arities):
        if len(xs) != n:
            raise GroundingError(
                f"quantifier {f.quantifier!r} binds {n} variable(s) per "
                f"argument in this position, got {len(xs)}"
            )


def _eval(f: Formula, interp: Interpretation, registry: Registry, env: dict) -> bool:
    t = type(f)
    if t is Atom:
        vals = tuple(_term_value(a, interp, env) for a in f.args)
        return (f.pred, vals) in interp.index
    if t is Equality:
        return _term_value(f.left, interp, env) == _term_value(f.right, interp, env)
    if t is Top:
        return True
    if t is Bot:
        return False
    if t is Apply:
        qdef = registry.resolve(f.quantifier)
        _check_shape(f, qdef)
        name = f.quantifier
        args = f.args
        if name == "and":
            return _eval(args[0], interp, registry, env) and _eval(
                args[1], interp, registry, env
            )
        if name == "or":
            return _eval(args[0], interp, registry, env) or _eval(
                args[1], interp, registry, env
            )
        if name == "impl":
            return not _eval(args[0], interp, registry, env) or _eval(
                args[1], interp, registry, env
            )
        if name == "forall" or name == "exists":
            want = name == "exists"
            x = f.var_lists[0][0]
            old = env.get(x, _MISSING)
            result = not want
            for v in interp.universe_sorted:
                env[x] = v
                if _eval(args[0], interp, registry, env) == want:
                    result = want
                    break
            if old is _MISSING:
                del env[x]
            else:
                env[x] = old
            return result
        rels = _relations(f, interp, registry, env, _eval)
        return bool(qdef.truth(interp.universe, rels))
    raise GqError(f"not a formula: {f!r}")


def _relations(f: Apply, interp, registry, env, evaluate, *extra) -> tuple:
    """Build the relation tuple for a generic quantifier application."""
    rels = []
    for xs, arg in zip(f.var_lists, f.args):
        n = len(xs)
        rows = set()
        if n == 0:
            if evaluate(arg, interp, registry, env, *extra):
                rows.add(())
        else:
            saved = [env.get(x, _MISSING) for x in xs]
            for combo in itertools.product(interp.universe_sorted, repeat=n):
                for x, v in zip(xs, combo):
                    env[x] = v
                if evaluate(arg, interp, registry, env, *extra):
                    rows.add(combo)
            for x, old in zip(xs, saved):
                if old is _MISSING:
                    del env[x]
                else:
                    env[x] = old
        rels.append(frozenset(rows))
    return tuple(rels)


def satisfies_direct(
    interp: Interpretation, sentence: Formula, registry: Registry
) -> bool:
    """Truth of a sentence in an interpretation, without grounding."""
    return _eval(sentence, interp, registry, {})


def satisfies_program(interp: Interpretation, program: Program, registry: Registry) -> bool:
    """Does the interpretation satisfy every rule's universal closure?"""
    for rule in program.rules:
        fvs = sorted(rule.free_variables())
        env: dict = {}
        for combo in itertools.product(interp.universe_sorted, repeat=len(fvs)):
            for x, v in zip(fvs, combo):
                env[x] = v
            if _eval(rule.body, interp, registry, env) and not _eval(
                rule.head, interp, registry, env
            ):
                return False
    return True


# ---------------------------------------------------------------------------
# Grounding


def ground(
    f: Formula,
    interp: Interpretation,
    registry: Registry,
    env: Optional[dict] = None,
) -> GroundFormula:
    """Ground a sentence over the interpretation's universe.

    Atoms become ground atoms, equalities collapse to ``top``/``bot``,
    and each quantified argument becomes a total pair-set with one entry
    per tuple of universe elements.  Only the universe and the constant
    valuation matter here; the interpretation's atom set does not.
    """
    if env is None:
        env = {}
    return _ground(f, interp, registry, env)


def _ground(f, interp, registry, env) -> GroundFormula:
    t = type(f)
    if t is Atom:
        vals = tuple(_term_value(a, interp, env) for a in f.args)
        return GroundAtomNode(f.pred, vals)
    if t is Equality:
        lv = _term_value(f.left, interp, env)
        rv = _term_value(f.right, interp, env)
        return G_TOP if lv == rv else G_BOT
    if t is Top:
        return G_TOP
    if t is Bot:
        return G_BOT
    if t is Apply:
        qdef = registry.resolve(f.quantifier)
        _check_shape(f, qdef)
        sets = []
        for xs, arg in zip(f.var_lists, f.args):
            n = len(xs)
            entries = []
            saved = [env.get(x, _MISSING) for x in xs]
            for combo in itertools.product(interp.universe_sorted, repeat=n):
                for x, v in zip(xs, combo):
                    env[x] = v
                entries.append((combo, _ground(arg, interp, registry, env)))
            for x, old in zip(xs, saved):
                if old is _MISSING:
                    del env[x]
                else:
                    env[x] = old
            sets.append(PairSet(tuple(entries)))
        return GApply(f.quantifier, tuple(sets))
    raise GqError(f"not a formula: {f!r}")


def ground_rule(rule: Rule, interp: Interpretation, registry: Registry) -> tuple:
    """Ground instances of one rule, one implication per assignment of
    the rule's free variables, in sorted assignment order."""
    fvs = sorted(rule.free_variables())
    formula = impl(rule.body, rule.head)
    out = []
    for combo in itertools.product(interp.universe_sorted, repeat=len(fvs)):
        env = dict(zip(fvs, combo))
        out.append(_ground(formula, interp, registry, env))
    return tuple(out)


def ground_program(
    program: Program,
    registry: Registry,
    interp: Optional[Interpretation] = None,
) -> tuple:
    """Ground every rule; returns a flat tuple of implications."""
    if interp is None:
        interp = Interpretation(program.universe)
    out = []
    for rule in program.rules:
        out.extend(ground_rule(rule, interp, registry))
    return tuple(out)


# ---------------------------------------------------------------------------
# Satisfaction of ground formulas


def satisfies(
    atoms: Iterable[GroundAtom],
    g: GroundFormula,
    universe: Iterable[Element],
    registry: Registry,
) -> bool:
    """Truth of a ground formula in a set of atoms.

    The universe is needed because quantifier truth functions may
    consult it; ``g`` should be ground with respect to an
    interpretation over that same universe.
    """
    u = frozenset(universe)
    idx = frozenset((a.pred, a.args) for a in atoms)
    return _gsat(g, idx, u, registry)


def _gsat(g, idx, universe, registry) -> bool:
    t = type(g)
    if t is GroundAtomNode:
        return (g.pred, g.args) in idx
    if t is GTop:
        return True
    if t is GBot:
        return False
    if t is GApply:
        qdef = registry.resolve(g.quantifier)
        name = g.quantifier
        sets = g.sets
        if len(sets) != len(qdef.arities):
            raise GroundingError(
                f"ground quantifier {name!r} has {len(sets)} pair-sets, "
                f"expected {len(qdef.arities)}"
            )
        if name in ("and", "or", "impl") and all(len(s) == 1 for s in sets):
            a = _gsat(sets[0].entries[0][1], idx, universe, registry)
            if name == "and":
                return a and _gsat(sets[1].entries[0][1], idx, universe, registry)
            if name == "or":
                return a or _gsat(sets[1].entries[0][1], idx, universe, registry)
            return not a or _gsat(sets[1].entries[0][1], idx, universe, registry)
        if name == "exists":
            return any(
                _gsat(child, idx, universe, registry) for _, child in sets[0].entries
            )
        rels = tuple(
            frozenset(
                key
                for key, child in ps.entries
                if _gsat(child, idx, universe, registry)
            )
            for ps in sets
        )
        return bool(qdef.truth(universe, rels))
    raise GqError(f"not a ground formula: {g!r}")


# ---------------------------------------------------------------------------
# The stability transformation F*(u)


def eval_star(
    sentence: Formula,
    interp: Interpretation,
    smaller: Iterable[GroundAtom],
    intensional: Iterable[str],
    registry: Registry,
) -> bool:
    """Truth of F*(u) where u is the valuation given by ``smaller``.

    ``smaller`` reinterprets the intensional predicates only; every
    other atom, and one conjunct of every quantifier application, is
    still read from ``interp``.  A quantifier application is true only
    when it holds both under the recursive star reading and under the
    plain reading in ``interp``.
    """
    preds = frozenset(intensional)
    smaller = frozenset(smaller)
    for a in smaller:
        if not isinstance(a, GroundAtom):
            raise GqError(f"not a ground atom: {a!r}")
        if a.pred not in preds:
            raise GqError(
                f"atom {a} is not intensional; the smaller valuation may "
                "only mention intensional predicates"
            )
        for v in a.args:
            if v not in interp.universe:
                raise GqError(f"atom {a} mentions {v!r}, not a universe element")
    j_idx = frozenset((a.pred, a.args) for a in smaller)
    return _eval_star(sentence, interp, j_idx, preds, registry, {})


def _eval_star(f, interp, j_idx, intensional, registry, env) -> bool:
    t = type(f)
    if t is Atom:
        vals = tuple(_term_value(a, interp, env) for a in f.args)
        if f.pred in intensional:
            return (f.pred, vals) in j_idx
        return (f.pred, vals) in interp.index
    if t is Equality:
        return _term_value(f.left, interp, env) == _term_value(f.right, interp, env)
    if t is Top:
        return True
    if t is Bot:
        return False
    if t is Apply:
        qdef = registry.resolve(f.quantifier)
        _check_shape(f, qdef)
        # the plain conjunct, evaluated wholly in interp
        if not _eval(f, interp, registry, env):
            return False
        name = f.quantifier
        args = f.args
        if name == "and":
            return _eval_star(
                args[0], interp, j_idx, intensional, registry, env
            ) and _eval_star(args[1], interp, j_idx, intensional, registry, env)
        if name == "or":
            return _eval_star(
                args[0], interp, j_idx, intensional, registry, env
            ) or _eval_star(args[1], interp, j_idx, intensional, registry, env)
        if name == "impl":
            return not _eval_star(
                args[0], interp, j_idx, intensional, registry, env
            ) or _eval_star(args[1], interp, j_idx, intensional, registry, env)
        if name == "forall" or name == "exists":
            want = name == "exists"
            x = f.var_lists[0][0]
            old = env.get(x, _MISSING)
            result = not want
            for v in interp.universe_sorted:
                env[x] = v
                if (
                    _eval_star(args[0], interp, j_idx, intensional, registry, env)
                    == want
                ):
                    result = want
                    break
            if old is _MISSING:
                del env[x]
            else:
                env[x] = old
            return result
        star_rels = _relations(
            f, interp, registry, env, _eval_star_adapter, j_idx, intensional
        )
        return bool(qdef.truth(interp.universe, star_rels))
    raise GqError(f"not a formula: {f!r}")


def _eval_star_adapter(f, interp, registry, env, j_idx, intensional):
    return _eval_star(f, interp, j_idx, intensional, registry, env)


# ---------------------------------------------------------------------------
# The FLP transformation


def eval_flp_transform(
    program: Program,
    interp: Interpretation,
    smaller: Iterable[GroundAtom],
    registry: Registry,
) -> bool:
    """Truth of the conjunction, over all rule instances, of
    ``B and B(u) implies H(u)``.

    ``B`` is read in ``interp``; ``B(u)`` and ``H(u)`` reinterpret the
    program's intensional predicates by ``smaller`` while everything
    else keeps its value from ``interp``.
    """
    preds = program.intensional
    smaller = frozenset(smaller)
    for a in smaller:
        if not isinstance(a, GroundAtom):
            raise GqError(f"not a ground atom: {a!r}")
        if a.pred not in preds:
            raise GqError(
                f"atom {a} is not intensional; the smaller valuation may "
                "only mention intensional predicates"
            )
    frozen = frozenset(a for a in interp.atoms if a.pred not in preds)
    subst = interp.with_atoms(frozen | smaller)
    for rule in program.rules:
        fvs = sorted(rule.free_variables())
        env: dict = {}
        for combo in itertools.product(interp.universe_sorted, repeat=len(fvs)):
            for x, v in zip(fvs, combo):
                env[x] = v
            if not _eval(rule.body, interp, registry, env):
                continue
            if not _eval(rule.body, subst, registry, env):
                continue
            if not _eval(rule.head, subst, registry, env):
                return False
    return True


# ---------------------------------------------------------------------------
# JSON export


def ground_to_json(g: GroundFormula) -> dict:
    """A JSON-ready mirror of a ground formula's structure."""
    t = type(g)
    if t is GTop:
        return {"kind": "top"}
    if t is GBot:
        return {"kind": "bot"}
    if t is GroundAtomNode:
        return {"kind": "atom", "pred": g.pred, "args": list(g.args)}
    if t is GApply:
        return {
            "kind": "apply",
            "quantifier": g.quantifier,
            "sets": [
                [[list(key), ground_to_json(child)] for key, child in ps.entries]
                for ps in g.sets
            ],
        }
    raise GqError(f"not a ground formula: {g!r}")
