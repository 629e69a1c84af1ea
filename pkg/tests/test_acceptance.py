"""Acceptance gate.

Each test prints one line, ACCEPTANCE <name>: PASS or FAIL, checking a
shipped behavior end to end.  Oracles here are independent of the code
under test: golden strings, closed-form evaluations, and brute-force
enumeration written out inline.
"""

import itertools
import random
import time

import pytest

from gqsm.ground import (
    GroundAtom,
    Interpretation,
    eval_flp_transform,
    eval_star,
    format_atoms,
    ground,
    ground_program,
    satisfies,
    satisfies_direct,
)
from gqsm.parser import parse_program
from gqsm.quantifiers import Registry, verify_profile
from gqsm.reduct import minimal_models, reduct
from gqsm.render import render_ground_rule, simplify_rule_sides
from gqsm.solver import (
    compare_semantics,
    flp_stable_models,
    monotone_class_report,
    stable_models_operator,
    stable_models_reduct,
)

import randprog
from conftest import COUNT_GUARD, SUM_THRESHOLD


def ga(pred, *args):
    return GroundAtom(pred, args)


@pytest.fixture
def report(capfd):
    """One visible PASS or FAIL line per checked behavior, then the assertion."""

    def go(name, failures):
        status = "PASS" if not failures else "FAIL"
        with capfd.disabled():
            print(f"ACCEPTANCE {name}: {status}", flush=True)
        assert not failures, "\n".join(failures)

    return go


def checker(failures):
    def check(cond, msg):
        if not cond:
            failures.append(msg)

    return check


I1 = frozenset({ga("p", -1), ga("p", 1)})
I2 = frozenset({ga("p", -1), ga("p", 1), ga("p", 2)})


def test_sum_threshold_semantics(report):
    failures = []
    check = checker(failures)
    reg = Registry()
    prog = parse_program(SUM_THRESHOLD, reg)

    flp = flp_stable_models(prog, reg)
    check(flp.models == (I1,), f"flp models: {[format_atoms(m) for m in flp.models]}")

    t0 = time.perf_counter()
    red = stable_models_reduct(prog, reg)
    t_red = time.perf_counter() - t0
    t0 = time.perf_counter()
    op = stable_models_operator(prog, reg)
    t_op = time.perf_counter() - t0

    expect = (I1, I2)
    check(red.models == expect, f"reduct route: {[format_atoms(m) for m in red.models]}")
    check(op.models == expect, f"operator route: {[format_atoms(m) for m in op.models]}")
    check(t_red < 1.0, f"reduct route took {t_red:.3f}s")
    check(t_op < 1.0, f"operator route took {t_op:.3f}s")
    report("sum_threshold_semantics", failures)


def test_reduct_golden_text(report):
    failures = []
    check = checker(failures)
    reg = Registry()
    prog = parse_program(SUM_THRESHOLD, reg)
    rules = ground_program(prog, reg)
    universe = prog.universe

    ground_text = [render_ground_rule(g) for g in rules]
    check(
        ground_text
        == [
            "not sum{ -1 : p(-1); 1 : p(1); 2 : p(2) } < 2 -> p(2)",
            "sum{ -1 : p(-1); 1 : p(1); 2 : p(2) } > -1 -> p(-1)",
            "p(-1) -> p(1)",
        ],
        f"ground text: {ground_text}",
    )

    r1 = [reduct(g, I1, universe, reg) for g in rules]
    text1 = [render_ground_rule(r.formula) for r in r1]
    check(
        text1
        == [
            "bot -> bot",
            "sum{ -1 : p(-1); 1 : p(1); 2 : bot } > -1 -> p(-1)",
            "p(-1) -> p(1)",
        ],
        f"reduct wrt the 2-atom model: {text1}",
    )
    check([r.replaced for r in r1] == [2, 1, 0], f"replaced: {[r.replaced for r in r1]}")

    r2 = [reduct(g, I2, universe, reg) for g in rules]
    text2 = [render_ground_rule(r.formula) for r in r2]
    check(text2[0] == "(bot -> bot) -> p(2)", f"exact reduct: {text2[0]}")
    shown = render_ground_rule(simplify_rule_sides(r2[0].formula))
    check(shown == "top -> p(2)", f"simplified reduct: {shown}")
    check(text2[1:] == ground_text[1:], "satisfied rules must pass through unchanged")

    base = [ga("p", -1), ga("p", 1), ga("p", 2)]
    mm = minimal_models([r.formula for r in r1], base, universe, reg)
    check(mm == (I1,), f"minimal models of the reduct: {[format_atoms(m) for m in mm]}")
    report("reduct_golden_text", failures)


def test_count_guard_semantics_and_class(report):
    failures = []
    check = checker(failures)
    reg = Registry()
    prog = parse_program(COUNT_GUARD, reg)

    expect_sm = (frozenset(), frozenset({ga("p", "a")}))
    op = stable_models_operator(prog, reg)
    red = stable_models_reduct(prog, reg)
    flp = flp_stable_models(prog, reg)
    check(op.models == expect_sm, f"operator: {[format_atoms(m) for m in op.models]}")
    check(red.models == expect_sm, f"reduct: {[format_atoms(m) for m in red.models]}")
    check(flp.models == (frozenset(),), f"flp: {[format_atoms(m) for m in flp.models]}")

    class_rep = monotone_class_report(prog, reg)
    check(not class_rep.in_class, "the count guard must fall outside the class")
    check(
        any("atmost(0)" in v.literal for v in class_rep.violations),
        f"violations: {[(v.literal, v.reason) for v in class_rep.violations]}",
    )
    check(
        any("not monotone" in v.reason for v in class_rep.violations),
        "the reason must name the monotonicity failure",
    )
    report("count_guard_semantics_and_class", failures)


def brute_force_default_closure(n):
    """Stable models of q(X) :- not p(X), computed from the closed form
    of the starred sentence, no solver machinery involved."""
    universe = list(range(1, n + 1))
    base = [("p", e) for e in universe] + [("q", e) for e in universe]

    def sat(i):
        return all(("p", e) in i or ("q", e) in i for e in universe)

    def gstar(i, j):
        # star of forall X ((p(X) -> bot) -> q(X)) spelled out by hand
        return all(
            (("p", e) in j or ("p", e) in i or ("q", e) in j)
            and (("p", e) in i or ("q", e) in i)
            for e in universe
        ) and sat(i)

    stable = []
    for k in range(len(base) + 1):
        for combo in itertools.combinations(base, k):
            i = frozenset(combo)
            if not sat(i):
                continue
            if any(gstar(i, j) for j in proper_subsets(i)):
                continue
            stable.append(frozenset(GroundAtom(p, (e,)) for p, e in i))
    return sorted(stable, key=lambda s: (len(s), sorted(a.sort_key() for a in s)))


def proper_subsets(s):
    items = sorted(s, key=repr)
    for k in range(len(items)):
        yield from map(frozenset, itertools.combinations(items, k))


def test_default_closure_matches_brute_force(report):
    failures = []
    check = checker(failures)
    reg = Registry()
    for n in (1, 2, 3):
        text = "#universe {" + ", ".join(str(e) for e in range(1, n + 1)) + "}.\n"
        text += "q(X) :- not p(X).\n"
        prog = parse_program(text, reg)
        oracle = brute_force_default_closure(n)
        red = sorted(stable_models_reduct(prog, reg).models)
        op = sorted(stable_models_operator(prog, reg).models)
        check(red == sorted(oracle), f"n={n} reduct: {[format_atoms(m) for m in red]}")
        check(op == sorted(oracle), f"n={n} operator: {[format_atoms(m) for m in op]}")
        want = frozenset(ga("q", e) for e in range(1, n + 1))
        check(oracle == [want], f"n={n} oracle: {[format_atoms(m) for m in oracle]}")
    report("default_closure_matches_brute_force", failures)


def test_reduct_and_operator_routes_agree_at_random(report):
    failures = []
    check = checker(failures)
    reg = Registry()
    rng = random.Random(90001)
    for i in range(500):
        src = randprog.random_wild_program(rng)
        prog = parse_program(src, reg)
        red = stable_models_reduct(prog, reg).models
        op = stable_models_operator(prog, reg).models
        if red != op:
            check(False, f"program {i} disagrees:\n{src}")
            if len(failures) > 3:
                break
    report("reduct_and_operator_routes_agree_at_random", failures)


def test_semantics_agree_inside_the_monotone_class(report):
    failures = []
    check = checker(failures)
    reg = Registry()
    rng = random.Random(90002)
    for i in range(500):
        src = randprog.random_in_class_program(rng)
        prog = parse_program(src, reg)
        rep = compare_semantics(prog, reg)
        if not rep.class_report.in_class:
            check(False, f"generator left the class on program {i}:\n{src}")
        if rep.difference:
            check(False, f"semantics split on in-class program {i}:\n{src}")
        if rep.agreement_violated:
            check(False, f"agreement violated on program {i}:\n{src}")
        if len(failures) > 3:
            break
    # agreement_violated must stay off out-of-class programs as well
    rng = random.Random(90003)
    for i in range(250):
        src = randprog.random_wild_program(rng)
        rep = compare_semantics(parse_program(src, reg), reg)
        if rep.agreement_violated:
            check(False, f"agreement flag raised on a wild program {i}:\n{src}")
            break
    report("semantics_agree_inside_the_monotone_class", failures)


def test_direct_and_grounded_satisfaction_agree(report):
    failures = []
    check = checker(failures)
    reg = Registry()
    rng = random.Random(90004)
    for i in range(1000):
        universe = randprog.random_universe(rng)
        sentence = randprog.random_sentence(rng, universe)
        interp = randprog.random_interpretation(rng, universe)
        direct = satisfies_direct(interp, sentence, reg)
        grounded = satisfies(
            interp.atoms, ground(sentence, interp, reg), interp.universe, reg
        )
        if direct != grounded:
            check(False, f"case {i}: direct={direct} grounded={grounded}")
            if len(failures) > 3:
                break
    report("direct_and_grounded_satisfaction_agree", failures)


def test_builtin_monotonicity_flags_verified_exhaustively(report):
    failures = []
    check = checker(failures)
    reg = Registry()
    names = list(reg.names())
    names += [f"atmost({k})" for k in range(4)]
    names += [f"atleast({k})" for k in range(4)]
    for name in names:
        problems = verify_profile(reg.resolve(name))
        if problems:
            check(False, f"{name}: {problems[0]}")
    report("builtin_monotonicity_flags_verified_exhaustively", failures)


def test_star_and_substitution_witnesses(report):
    failures = []
    check = checker(failures)
    reg = Registry()
    prog = parse_program(SUM_THRESHOLD, reg)
    from gqsm.solver import program_to_sentence

    sentence = program_to_sentence(prog)
    universe = prog.universe

    for model in (I1, I2):
        interp = Interpretation(universe, model)
        witnesses = [
            format_atoms(j)
            for j in proper_subsets(model)
            if eval_star(sentence, interp, j, prog.intensional, reg)
        ]
        check(
            not witnesses,
            f"{format_atoms(model)} has starred witnesses: {witnesses}",
        )

    # the smaller model satisfies the body-substituted program at the
    # larger one, which is exactly why flp rejects the larger model
    i2 = Interpretation(universe, I2)
    check(
        eval_flp_transform(prog, i2, I1, reg),
        "the 2-atom model must satisfy the substituted program at the 3-atom model",
    )
    i1 = Interpretation(universe, I1)
    smaller = [
        format_atoms(j)
        for j in proper_subsets(I1)
        if eval_flp_transform(prog, i1, j, reg)
    ]
    check(not smaller, f"flp witnesses below the 2-atom model: {smaller}")
    report("star_and_substitution_witnesses", failures)
