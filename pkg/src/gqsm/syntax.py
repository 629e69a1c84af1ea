"""Terms, formulas built from generalized quantifiers, rules, and programs.

A formula is either atomic (an atom, an equality between terms, ``top``,
``bot``) or an application ``Q[x1]...[xk](F1, ..., Fk)`` of a named
quantifier to k argument formulas, each with its own list of bound
variables.  The standard connectives and first-order quantifiers are
ordinary quantifier applications: ``and``/``or``/``impl`` take two
arguments with empty binder lists, ``forall``/``exists`` take one
argument with a single bound variable.  ``not F`` abbreviates
``impl(F, bot)``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field, fields
from typing import Iterator, Mapping, Optional, Sequence, Union

Element = Union[int, str]

# Words the parser treats specially; they cannot name constants,
# predicates, or quantifiers (the four built-in quantifier names that
# coincide with keywords are registered before user code runs).
RESERVED_WORDS = frozenset({"not", "bot", "top", "forall", "exists"})

_CONST_RE = re.compile(r"[a-z][A-Za-z0-9_]*\Z")
_VAR_RE = re.compile(r"[A-Z][A-Za-z0-9_]*\Z")
_QNAME_RE = re.compile(r"[a-z][A-Za-z0-9_]*(\(\d+\))?\Z")


class GqError(Exception):
    """Base class for all errors raised by this package."""


def check_element(value: object) -> Element:
    """Validate a universe element (an integer or a lowercase symbol)."""
    if isinstance(value, bool) or not isinstance(value, (int, str)):
        raise GqError(f"universe element must be an int or a symbol, got {value!r}")
    if isinstance(value, str):
        if not _CONST_RE.match(value) or value in RESERVED_WORDS:
            raise GqError(f"invalid symbolic element {value!r}")
    return value


def element_key(value: Element):
    """Total order on elements: integers first, then symbols."""
    if isinstance(value, int):
        return (0, value, "")
    return (1, 0, value)


# ---------------------------------------------------------------------------
# Terms


@dataclass(frozen=True)
class Variable:
    name: str

    def __post_init__(self):
        if not _VAR_RE.match(self.name):
            raise GqError(f"variable names start with an uppercase letter: {self.name!r}")

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class Constant:
    value: Element

    def __post_init__(self):
        check_element(self.value)

    def __str__(self):
        return str(self.value)


Term = Union[Variable, Constant]


def as_term(x: object) -> Term:
    """Coerce ints and strings to terms; uppercase strings become variables."""
    if isinstance(x, (Variable, Constant)):
        return x
    if isinstance(x, bool):
        raise GqError(f"not a term: {x!r}")
    if isinstance(x, int):
        return Constant(x)
    if isinstance(x, str):
        if x[:1].isupper():
            return Variable(x)
        return Constant(x)
    raise GqError(f"not a term: {x!r}")


def term_variables(t: Term) -> frozenset[str]:
    if isinstance(t, Variable):
        return frozenset((t.name,))
    return frozenset()


# ---------------------------------------------------------------------------
# Formulas


class Formula:
    """Base class; all nodes are immutable and compare structurally."""

    __hash__ = None  # subclasses regenerate it

    def __str__(self):
        from .render import render

        return render(self)


@dataclass(frozen=True)
class Atom(Formula):
    pred: str
    args: tuple[Term, ...] = ()

    def __post_init__(self):
        if not _CONST_RE.match(self.pred) or self.pred in RESERVED_WORDS:
            raise GqError(f"invalid predicate name {self.pred!r}")
        object.__setattr__(self, "args", tuple(as_term(a) for a in self.args))

    __str__ = Formula.__str__


@dataclass(frozen=True)
class Equality(Formula):
    left: Term
    right: Term

    def __post_init__(self):
        object.__setattr__(self, "left", as_term(self.left))
        object.__setattr__(self, "right", as_term(self.right))

    __str__ = Formula.__str__


@dataclass(frozen=True)
class Top(Formula):
    __str__ = Formula.__str__


@dataclass(frozen=True)
class Bot(Formula):
    __str__ = Formula.__str__


TOP = Top()
BOT = Bot()


@dataclass(frozen=True)
class Apply(Formula):
    """Application of the quantifier named ``quantifier``.

    ``var_lists[i]`` is the tuple of variables bound for argument ``i``;
    its length must equal the quantifier's declared arity for that
    position (checked against the registry when the formula is parsed,
    evaluated, or grounded).
    """

    quantifier: str
    var_lists: tuple[tuple[str, ...], ...]
    args: tuple[Formula, ...]

    def __post_init__(self):
        if not _QNAME_RE.match(self.quantifier) or self.quantifier == "not":
            raise GqError(f"invalid quantifier name {self.quantifier!r}")
        lists = tuple(tuple(xs) for xs in self.var_lists)
        for xs in lists:
            for x in xs:
                if not _VAR_RE.match(x):
                    raise GqError(f"invalid bound variable {x!r}")
            if len(set(xs)) != len(xs):
                raise GqError(f"repeated variable in binder list {xs!r}")
        object.__setattr__(self, "var_lists", lists)
        object.__setattr__(self, "args", tuple(self.args))
        if len(self.args) != len(lists):
            raise GqError(
                f"quantifier {self.quantifier!r} applied to {len(self.args)} "
                f"arguments but has {len(lists)} binder lists"
            )
        for a in self.args:
            if not isinstance(a, Formula):
                raise GqError(f"argument is not a formula: {a!r}")

    __str__ = Formula.__str__


# Convenient constructors.  Conjunction and disjunction fold to the left,
# matching how the parser folds ``,`` and ``;`` chains.


def conj(*formulas: Formula) -> Formula:
    if not formulas:
        return TOP
    out = formulas[0]
    for f in formulas[1:]:
        out = Apply("and", ((), ()), (out, f))
    return out


def disj(*formulas: Formula) -> Formula:
    if not formulas:
        return BOT
    out = formulas[0]
    for f in formulas[1:]:
        out = Apply("or", ((), ()), (out, f))
    return out


def impl(antecedent: Formula, consequent: Formula) -> Formula:
    return Apply("impl", ((), ()), (antecedent, consequent))


def neg(f: Formula) -> Formula:
    return impl(f, BOT)


def forall(var: str, f: Formula) -> Formula:
    return Apply("forall", ((var,),), (f,))


def exists(var: str, f: Formula) -> Formula:
    return Apply("exists", ((var,),), (f,))


def atom(pred: str, *args: object) -> Atom:
    return Atom(pred, tuple(as_term(a) for a in args))


def equality(left: object, right: object) -> Equality:
    return Equality(as_term(left), as_term(right))


def is_atomic(f: Formula) -> bool:
    return isinstance(f, (Atom, Equality, Top, Bot))


def is_bot(f: Formula) -> bool:
    return isinstance(f, Bot) or (isinstance(f, Apply) and f.quantifier == "bot")


# ---------------------------------------------------------------------------
# Formula walks


def iter_subformulas(f: Formula) -> Iterator[Formula]:
    """Yield ``f`` and every subformula, preorder."""
    yield f
    if isinstance(f, Apply):
        for a in f.args:
            yield from iter_subformulas(a)


def free_variables(f: Formula) -> frozenset[str]:
    """Free variables of a formula.

    Any variable listed in any binder list of an application is treated
    as bound throughout that application, including in argument
    positions other than its own.  A variable that escapes its binder
    list that way has no value at evaluation time and triggers an
    unbound-variable error there.
    """
    if isinstance(f, Atom):
        out: frozenset[str] = frozenset()
        for t in f.args:
            out |= term_variables(t)
        return out
    if isinstance(f, Equality):
        return term_variables(f.left) | term_variables(f.right)
    if isinstance(f, (Top, Bot)):
        return frozenset()
    if isinstance(f, Apply):
        bound: set[str] = set()
        for xs in f.var_lists:
            bound.update(xs)
        out = frozenset()
        for a in f.args:
            out |= free_variables(a)
        return out - bound
    raise GqError(f"not a formula: {f!r}")


def constants_in(f: Formula) -> set[Element]:
    out: set[Element] = set()
    for sub in iter_subformulas(f):
        terms: Sequence[Term] = ()
        if isinstance(sub, Atom):
            terms = sub.args
        elif isinstance(sub, Equality):
            terms = (sub.left, sub.right)
        for t in terms:
            if isinstance(t, Constant):
                out.add(t.value)
    return out


def predicates_in(f: Formula) -> dict[str, int]:
    out: dict[str, int] = {}
    for sub in iter_subformulas(f):
        if isinstance(sub, Atom):
            arity = len(sub.args)
            known = out.setdefault(sub.pred, arity)
            if known != arity:
                raise GqError(
                    f"predicate {sub.pred!r} used with arities {known} and {arity}"
                )
    return out


# ---------------------------------------------------------------------------
# Rules and programs


@dataclass(frozen=True)
class Rule:
    """``head :- body``; facts have body ``top``, constraints head ``bot``."""

    head: Formula
    body: Formula

    def free_variables(self) -> frozenset[str]:
        return free_variables(self.head) | free_variables(self.body)


@dataclass(frozen=True)
class Program:
    """A rule list plus its universe and intensional predicate set.

    ``intensional=None`` defaults to every predicate occurring in the
    rules.  ``signature`` maps each predicate to its arity and is
    derived from the rules; it does not participate in equality.
    """

    rules: tuple[Rule, ...]
    universe: frozenset[Element]
    intensional: Optional[frozenset[str]] = None
    signature: Mapping[str, int] = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        rules = tuple(self.rules)
        for r in rules:
            if not isinstance(r, Rule):
                raise GqError(f"not a rule: {r!r}")
        object.__setattr__(self, "rules", rules)

        universe = frozenset(check_element(e) for e in self.universe)
        if not universe:
            raise GqError("the universe must not be empty")
        object.__setattr__(self, "universe", universe)

        signature: dict[str, int] = {}
        constants: set[Element] = set()
        for r in rules:
            for f in (r.head, r.body):
                for pred, arity in predicates_in(f).items():
                    known = signature.setdefault(pred, arity)
                    if known != arity:
                        raise GqError(
                            f"predicate {pred!r} used with arities {known} and {arity}"
                        )
                constants |= constants_in(f)
        stray = constants - universe
        if stray:
            shown = ", ".join(str(c) for c in sorted(stray, key=element_key))
            raise GqError(f"constants outside the universe: {shown}")
        object.__setattr__(self, "signature", signature)

        if self.intensional is None:
            intensional = frozenset(signature)
        else:
            intensional = frozenset(self.intensional)
            unknown = intensional - set(signature)
            if unknown:
                raise GqError(
                    "intensional predicates not used in any rule: "
                    + ", ".join(sorted(unknown))
                )
        object.__setattr__(self, "intensional", intensional)

    @property
    def all_intensional(self) -> bool:
        return self.intensional == frozenset(self.signature)

    def universe_sorted(self) -> tuple[Element, ...]:
        return tuple(sorted(self.universe, key=element_key))

    def __str__(self):
        from .render import render

        return render(self)
