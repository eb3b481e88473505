"""Separating sentences for finite structures.

A separator of minimal quantifier rank is read off Spoiler's winning strategy
in the EF game: at a lost position for Duplicator, Spoiler's move in A becomes
an existential over the conjunction of the sub-separators for every reply,
and a move in B becomes a universal over their disjunction.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .combine import FamilySpec
from .errors import EmptyUniverse, NotSeparable, WitnessMismatch
from .logic import (
    EXISTS,
    FORALL,
    Atom,
    Eq,
    Formula,
    Not,
    Quant,
    conjunction,
    disjunction,
    node_count,
    quantifier_rank,
    var,
    And,
)
from .model import EFGame, FiniteStructure, are_isomorphic, atomic_formulas, evaluate

HINTIKKA_BUDGET = 10_000


@dataclass(frozen=True)
class SeparationCertificate:
    sentence: Formula
    witness_true: str
    witness_false: str
    rank: int
    method: str = "ef"  # "ef" (game extraction) or "scott" (budget fallback)


def check_separating(c: SeparationCertificate, A: FiniteStructure, B: FiniteStructure) -> bool:
    """``A`` plays witness_true and ``B`` witness_false."""
    return (
        evaluate(A, c.sentence)
        and not evaluate(B, c.sentence)
        and c.rank == quantifier_rank(c.sentence)
    )


def scott_sentence(A: FiniteStructure) -> Formula:
    """A sentence true exactly in the structures isomorphic to ``A``."""
    n = A.size
    if n < 1:
        raise EmptyUniverse("scott_sentence needs a nonempty universe")
    xs = [var(i) for i in range(1, n + 1)]
    parts: list[Formula] = [Not(Eq(xs[i], xs[j])) for i in range(n) for j in range(i + 1, n)]
    for name, arity in A.sig:
        for t in itertools.product(range(n), repeat=arity):
            atom = Atom(name, tuple(xs[i] for i in t))
            parts.append(atom if t in A.interp[name] else Not(atom))
    z = var(n + 1)
    parts.append(Quant(FORALL, z, disjunction(Eq(z, x) for x in xs)))
    body = conjunction(parts)
    for x in reversed(xs):
        body = Quant(EXISTS, x, body)
    return body


class _Extractor:
    def __init__(self, A: FiniteStructure, B: FiniteStructure):
        self.game = EFGame(A, B)
        self.A, self.B = A, B
        self._memo: dict[tuple, Formula] = {}

    def distinguishing_literal(self, pairs: list[tuple[int, int]]) -> Formula:
        # first atom, in atomic_formulas order, on which the two sides differ
        a = {var(i + 1): x for i, (x, _) in enumerate(pairs)}
        b = {var(i + 1): y for i, (_, y) in enumerate(pairs)}
        for atom in atomic_formulas(self.A.sig, len(pairs)):
            va = evaluate(self.A, atom, a)
            if va != evaluate(self.B, atom, b):
                return atom if va else Not(atom)
        raise AssertionError("position is a partial isomorphism")

    def formula(self, pairs: list[tuple[int, int]], rounds: int) -> Formula:
        """A formula of rank <= rounds in x1..x<len(pairs)> true at the A side
        and false at the B side; Duplicator must lose the position."""
        key = (tuple(pairs), rounds)
        if key in self._memo:
            return self._memo[key]
        game = self.game
        if rounds == 0 or not game.duplicator_wins(pairs, 0):
            f = self.distinguishing_literal(pairs)
            self._memo[key] = f
            return f
        x = var(len(pairs) + 1)
        for side, e in game.spoiler_moves():
            if side == "A":
                replies = [pairs + [(e, b)] for b in self.B.universe]
            else:
                replies = [pairs + [(a, e)] for a in self.A.universe]
            if any(game.duplicator_wins(p, rounds - 1) for p in replies):
                continue
            # each reply gets its own least rank so subformulas stay small
            subs = _dedupe(self.formula(p, self._least_rank(p, rounds - 1)) for p in replies)
            if side == "A":
                f = Quant(EXISTS, x, conjunction(subs))
            else:
                f = Quant(FORALL, x, disjunction(subs))
            break
        else:
            raise AssertionError("Spoiler has no winning move")
        self._memo[key] = f
        return f

    def _least_rank(self, pairs: list[tuple[int, int]], bound: int) -> int:
        for r in range(bound + 1):
            if not self.game.duplicator_wins(pairs, r):
                return r
        raise AssertionError("position is not lost within the bound")


def _dedupe(fs) -> list[Formula]:
    out: list[Formula] = []
    seen = set()
    for f in fs:
        if f not in seen:
            seen.add(f)
            out.append(f)
    return out


def least_separating_rank(A: FiniteStructure, B: FiniteStructure) -> int | None:
    """Least r with A and B not r-equivalent, or None if isomorphic."""
    if are_isomorphic(A, B) is not None:
        return None
    game = EFGame(A, B)
    r = 0
    while game.duplicator_wins([], r):
        r += 1
    return r


def separating_sentence(
    A: FiniteStructure,
    B: FiniteStructure,
    true_tag: str = "A",
    false_tag: str = "B",
    budget: int = HINTIKKA_BUDGET,
) -> SeparationCertificate:
    """Minimal-rank sentence true in ``A`` and false in ``B``."""
    r = least_separating_rank(A, B)
    if r is None:
        raise NotSeparable("isomorphic finite structures are elementarily equivalent")
    f = _Extractor(A, B).formula([], r)
    if node_count(f) > budget:
        f = scott_sentence(A)
        return SeparationCertificate(f, true_tag, false_tag, quantifier_rank(f), "scott")
    return SeparationCertificate(f, true_tag, false_tag, quantifier_rank(f), "ef")


def flip(c: SeparationCertificate) -> SeparationCertificate:
    return SeparationCertificate(Not(c.sentence), c.witness_false, c.witness_true, c.rank, c.method)


def conjoin(c1: SeparationCertificate, c2: SeparationCertificate) -> Formula:
    """Conjunction separating the shared true-witness from both false ones."""
    if c1.witness_true != c2.witness_true:
        raise WitnessMismatch(f"{c1.witness_true} != {c2.witness_true}")
    return And(c1.sentence, c2.sentence)


def e_separating_set(target: str, fam: FamilySpec) -> list[SeparationCertificate]:
    """One certificate per member not isomorphic to ``target``."""
    A = fam[target]
    out = []
    for tag, B in fam.members:
        if tag == target or are_isomorphic(A, B) is not None:
            continue
        out.append(separating_sentence(A, B, target, tag))
    return out
