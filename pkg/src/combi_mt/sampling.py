"""Seeded random structures, formulas and families for sweeps."""

from __future__ import annotations

import itertools
import random

from .combine import FamilySpec
from .logic import (
    AND,
    EXISTS,
    FORALL,
    IMPLIES,
    OR,
    Atom,
    Bin,
    Eq,
    Formula,
    Not,
    Quant,
    Signature,
    var,
)
from .model import FiniteStructure


def random_structure(rng: random.Random, sig: Signature, size: int, density: float = 0.4) -> FiniteStructure:
    interp = {
        name: {t for t in itertools.product(range(size), repeat=arity) if rng.random() < density}
        for name, arity in sig
    }
    return FiniteStructure(sig, size, interp)


def random_formula(
    rng: random.Random,
    sig: Signature,
    depth: int,
    scope: list[str],
    max_var: int = 4,
) -> Formula:
    """Random formula whose free variables lie in ``scope``."""
    if depth == 0 or rng.random() < 0.25:
        if not scope:
            v = var(1)
            return Quant(rng.choice((EXISTS, FORALL)), v, _atom(rng, sig, [v]))
        return _atom(rng, sig, scope)
    r = rng.random()
    if r < 0.2:
        return Not(random_formula(rng, sig, depth - 1, scope, max_var))
    if r < 0.6:
        op = rng.choice((AND, OR, IMPLIES))
        return Bin(
            op,
            random_formula(rng, sig, depth - 1, scope, max_var),
            random_formula(rng, sig, depth - 1, scope, max_var),
        )
    v = var(rng.randint(1, max_var))
    inner = scope if v in scope else scope + [v]
    return Quant(rng.choice((EXISTS, FORALL)), v, random_formula(rng, sig, depth - 1, inner, max_var))


def _atom(rng: random.Random, sig: Signature, scope: list[str]) -> Formula:
    if not len(sig) or rng.random() < 0.25:
        return Eq(rng.choice(scope), rng.choice(scope))
    name, arity = rng.choice(sig.relations)
    return Atom(name, tuple(rng.choice(scope) for _ in range(arity)))


def random_family(
    rng: random.Random, sig: Signature, max_members: int = 3, max_size: int = 3
) -> FamilySpec:
    n = rng.randint(1, max_members)
    return FamilySpec.of(
        ((f"m{i}", random_structure(rng, sig, rng.randint(1, max_size))) for i in range(n)),
        sig,
    )
