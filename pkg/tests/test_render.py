"""Text output: formulas, programs, ground formulas, and round trips."""

import random

import pytest

from gqsm.ground import (
    GApply,
    GBot,
    GroundAtom,
    Interpretation,
    PairSet,
    ground,
    ground_program,
)
from gqsm.parser import parse_formula, parse_program
from gqsm.quantifiers import Registry
from gqsm.reduct import reduct
from gqsm.render import (
    render,
    render_ground_rule,
    simplify_ground,
    simplify_rule_sides,
)
from gqsm.syntax import TOP, BOT, Atom, Rule, conj, disj, impl, neg

import randprog
from conftest import SUM_THRESHOLD


FIXED_POINTS = [
    "p",
    "p(1, a, X)",
    "not p",
    "not not p",
    "p & q & r",
    "p | q & r",
    "(p | q) & r",
    "p -> q -> r",
    "(p -> q) -> r",
    "not (p & q)",
    "X = 1",
    "X != 1",
    "forall X (p(X))",
    "exists X (p(X) & q(X))",
    "majority{X : p(X)}",
    "atmost(2){X : p(X)}",
    "atleast(0){X : p(X)}",
    "sum{X : p(X)} < 2",
    "sum{X : p(X)} >= -1",
    "count{X : p(X, Y)} != 0",
    "sum_lt[X][Y](p(X); q(Y))",
    "top",
    "bot",
    "top -> p",
    "p -> bot -> q",
]


@pytest.mark.parametrize("text", FIXED_POINTS)
def test_formula_text_is_a_fixed_point(text, registry):
    f = parse_formula(text, registry)
    assert render(f) == text
    assert parse_formula(render(f), registry) == f


def test_needless_parens_are_dropped(registry):
    assert render(parse_formula("((p))", registry)) == "p"
    assert render(parse_formula("(p & q) & r", registry)) == "p & q & r"
    assert render(parse_formula("p -> (q -> r)", registry)) == "p -> q -> r"


def test_connective_construction_renders_like_parsed_text(registry):
    p, q = Atom("p"), Atom("q")
    assert render(conj(p, q)) == "p & q"
    assert render(disj(p, q)) == "p | q"
    assert render(impl(p, q)) == "p -> q"
    assert render(neg(p)) == "not p"
    assert render(neg(neg(p))) == "not not p"


def test_rule_rendering(registry):
    assert render(Rule(Atom("p"), TOP)) == "p."
    assert render(Rule(BOT, Atom("p"))) == ":- p."
    assert render(Rule(Atom("p"), Atom("q"))) == "p :- q."
    assert (
        render(Rule(disj(Atom("p"), Atom("q")), conj(Atom("r"), Atom("s"))))
        == "p; q :- r, s."
    )


def test_program_rendering_always_shows_both_directives(registry):
    prog = parse_program("#universe {2, -1, 1}.\np(1) :- q(1).", registry)
    text = render(prog)
    assert text.splitlines()[0] == "#universe {-1, 1, 2}."
    assert "#intensional p, q." in text
    narrowed = parse_program(
        "#universe {1}.\n#intensional.\np(1) :- q(1).", registry
    )
    assert "#intensional." in render(narrowed)


def test_program_round_trip(registry):
    prog = parse_program(SUM_THRESHOLD, registry)
    again = parse_program(render(prog), registry)
    assert again == prog


def test_ground_rendering_golden(registry):
    prog = parse_program(SUM_THRESHOLD, registry)
    rules = ground_program(prog, registry)
    assert render_ground_rule(rules[0]) == (
        "not sum{ -1 : p(-1); 1 : p(1); 2 : p(2) } < 2 -> p(2)"
    )


def test_ground_aggregate_sugar_needs_a_recognizable_bound(registry):
    i = Interpretation(frozenset({-1, 1, 2}))
    g = ground(parse_formula("sum{X : p(X)} < 2", registry), i, registry)
    assert render(g) == "sum{ -1 : p(-1); 1 : p(1); 2 : p(2) } < 2"
    # the sugar survives a reduct because the bound rows are left alone
    r = reduct(g, frozenset(), frozenset({-1, 1, 2}), registry)
    assert render(r.formula) == "sum{ -1 : bot; 1 : bot; 2 : bot } < 2"
    # a bound set with no true row has no displayable value
    body, bound = g.sets
    h = GApply("sum_lt", (body, PairSet(tuple((k, GBot()) for k in bound.keys()))))
    assert render(h) == (
        "sum_lt{ -1 : p(-1); 1 : p(1); 2 : p(2) }{ -1 : bot; 1 : bot; 2 : bot }"
    )


def test_ground_not_sugar(registry):
    i = Interpretation(frozenset({1}))
    g = ground(parse_formula("not p(1)", registry), i, registry)
    assert render(g) == "not p(1)"
    # a bot antecedent is spelled as a plain implication instead
    b = ground(parse_formula("bot -> bot", registry), i, registry)
    assert render(b) == "bot -> bot"


def test_render_ground_rule_keeps_the_top_arrow(registry):
    i = Interpretation(frozenset({1}))
    g = ground(parse_formula("p(1) -> bot", registry), i, registry)
    assert render(g) == "not p(1)"
    assert render_ground_rule(g) == "p(1) -> bot"


def test_simplify_ground_folds_constants(registry):
    i = Interpretation(frozenset({1}))

    def simp(text):
        return render(simplify_ground(ground(parse_formula(text, registry), i, registry)))

    assert simp("top & p(1)") == "p(1)"
    assert simp("bot & p(1)") == "bot"
    assert simp("bot | p(1)") == "p(1)"
    assert simp("bot -> p(1)") == "top"
    assert simp("top -> p(1)") == "p(1)"
    assert simp("p(1) -> top") == "top"
    assert simp("p(1) -> bot") == "not p(1)"
    assert simp("(bot -> bot) -> p(1)") == "p(1)"


def test_simplify_rule_sides_never_folds_the_rule_arrow(registry):
    i = Interpretation(frozenset({1}))
    g = ground(parse_formula("(bot -> bot) -> p(1)", registry), i, registry)
    s = simplify_rule_sides(g)
    assert render_ground_rule(s) == "top -> p(1)"


def test_simplify_ground_leaves_quantifier_sets_alone(registry):
    i = Interpretation(frozenset({1, 2}))
    g = ground(parse_formula("majority{X : p(X)}", registry), i, registry)
    assert simplify_ground(g) == g


def test_random_program_round_trips():
    reg = Registry()
    rng = random.Random(424)
    for _ in range(120):
        src = randprog.random_wild_program(rng)
        prog = parse_program(src, reg)
        text = render(prog)
        assert parse_program(text, reg) == prog, src


def test_random_formula_round_trips():
    reg = Registry()
    rng = random.Random(425)
    for _ in range(120):
        universe = randprog.random_universe(rng)
        f = randprog.random_sentence(rng, universe)
        assert parse_formula(render(f), reg) == f, render(f)


def test_random_ground_render_reparses_consistently():
    # ground text is display-only, but for connective-only formulas it
    # matches the formula layer spelling
    reg = Registry()
    i = Interpretation(frozenset({1}))
    for text in ("p(1) & q(1)", "p(1) | q(1)", "not p(1)", "top", "bot"):
        g = ground(parse_formula(text, reg), i, reg)
        assert render(g) == text
