"""Reducts of ground formulas, and minimal models of the result.

The reduct of a ground formula relative to a set of atoms replaces
every maximal subformula not satisfied by those atoms with ``bot``;
satisfied parts are kept and rebuilt recursively.  ``top`` and ``bot``
are left alone and never counted as replacements.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable

from .syntax import Element, GqError
from .quantifiers import Registry
from .ground import (
    G_BOT,
    GApply,
    GBot,
    GroundAtom,
    GroundAtomNode,
    GroundFormula,
    GTop,
    PairSet,
    atom_set_key,
)

DEFAULT_ATOM_CAP = 20


class EnumerationCapError(GqError):
    """Raised instead of enumerating an unreasonably large subset space."""

    def __init__(self, size: int, cap: int):
        super().__init__(
            f"{size} atoms would mean 2**{size} candidate sets; "
            f"the cap is {cap} (set GQSM_ATOM_CAP or pass cap= to raise it)"
        )
        self.size = size
        self.cap = cap


@dataclass(frozen=True)
class ReductResult:
    formula: GroundFormula
    replaced: int

    def __str__(self):
        return str(self.formula)


def reduct(
    g: GroundFormula,
    atoms: Iterable[GroundAtom],
    universe: Iterable[Element],
    registry: Registry,
) -> ReductResult:
    u = frozenset(universe)
    idx = frozenset((a.pred, a.args) for a in atoms)
    memo: dict = {}

    def sat(n) -> bool:
        key = id(n)
        got = memo.get(key)
        if got is not None:
            return got
        t = type(n)
        if t is GTop:
            v = True
        elif t is GBot:
            v = False
        elif t is GroundAtomNode:
            v = (n.pred, n.args) in idx
        elif t is GApply:
            qdef = registry.resolve(n.quantifier)
            rels = tuple(
                frozenset(k for k, c in ps.entries if sat(c)) for ps in n.sets
            )
            v = bool(qdef.truth(u, rels))
        else:
            raise GqError(f"not a ground formula: {n!r}")
        memo[key] = v
        return v

    replaced = 0

    def rebuild(n):
        nonlocal replaced
        t = type(n)
        if t is GTop or t is GBot:
            return n
        if not sat(n):
            replaced += 1
            return G_BOT
        if t is GroundAtomNode:
            return n
        sets = tuple(
            PairSet(tuple((k, rebuild(c)) for k, c in ps.entries)) for ps in n.sets
        )
        return GApply(n.quantifier, sets)

    return ReductResult(rebuild(g), replaced)


def reduct_program(
    ground_rules: Iterable[GroundFormula],
    atoms: Iterable[GroundAtom],
    universe: Iterable[Element],
    registry: Registry,
) -> tuple:
    """Reduct of each ground rule, in order."""
    atoms = frozenset(atoms)
    return tuple(reduct(g, atoms, universe, registry) for g in ground_rules)


def minimal_models(
    formulas: Iterable[GroundFormula],
    base: Iterable[GroundAtom],
    universe: Iterable[Element],
    registry: Registry,
    cap: int = DEFAULT_ATOM_CAP,
) -> tuple:
    """All minimal (by inclusion) subsets of ``base`` satisfying every
    formula, enumerated in ascending cardinality so supersets of a hit
    can be skipped."""
    from .ground import _gsat

    u = frozenset(universe)
    pool = sorted(frozenset(base), key=GroundAtom.sort_key)
    if len(pool) > cap:
        raise EnumerationCapError(len(pool), cap)
    formulas = tuple(formulas)
    found: list = []
    for r in range(len(pool) + 1):
        for combo in itertools.combinations(pool, r):
            s = frozenset(combo)
            if any(m <= s for m in found):
                continue
            idx = frozenset((a.pred, a.args) for a in s)
            if all(_gsat(g, idx, u, registry) for g in formulas):
                found.append(s)
    return tuple(sorted(found, key=atom_set_key))
