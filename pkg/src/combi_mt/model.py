"""Finite relational structures and the usual finite-model-theory toolkit.

Universes are always ``range(size)``.  Isomorphism and automorphism search are
plain backtracking over colour-refined candidates, which is exact and quick
for the desk-scale structures (size <= ~10) this package works with.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterator, Mapping

from .errors import EmptyUniverse, SignatureMismatch, UnboundVariable
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
    check_signature,
    free_variables,
    var,
)

Tuple = tuple[int, ...]


@dataclass(frozen=True)
class FiniteStructure:
    sig: Signature
    size: int
    interp: Mapping[str, frozenset[Tuple]] = field(default_factory=dict)

    def __post_init__(self):
        if self.size < 0:
            raise ValueError("size must be nonnegative")
        interp = {}
        for name, arity in self.sig:
            rel = frozenset(tuple(t) for t in self.interp.get(name, ()))
            for t in rel:
                if len(t) != arity:
                    raise ValueError(f"{name}: tuple {t} has wrong length")
                if any(not 0 <= e < self.size for e in t):
                    raise ValueError(f"{name}: tuple {t} leaves the universe")
            interp[name] = rel
        extra = set(self.interp) - set(interp)
        if extra:
            raise SignatureMismatch(f"symbols not in signature: {sorted(extra)}")
        object.__setattr__(self, "interp", interp)

    def __hash__(self):
        return hash((self.sig, self.size, tuple(self.interp[n] for n in self.sig.names)))

    def __eq__(self, other):
        if not isinstance(other, FiniteStructure):
            return NotImplemented
        return (self.sig, self.size, self.interp) == (other.sig, other.size, other.interp)

    @property
    def universe(self) -> range:
        return range(self.size)

    def holds(self, rel: str, args: Tuple) -> bool:
        return tuple(args) in self.interp[rel]

    def reduct(self, sig: Signature) -> FiniteStructure:
        return FiniteStructure(sig, self.size, {n: self.interp[n] for n in sig.names})

    def expand(self, extra: Mapping[str, frozenset[Tuple]], sig: Signature) -> FiniteStructure:
        interp = dict(self.interp)
        interp.update(extra)
        return FiniteStructure(sig, self.size, interp)

    def induced(self, elements: list[int]) -> FiniteStructure:
        """Substructure on ``elements``, relabelled to 0..m-1 in the given order."""
        index = {e: i for i, e in enumerate(elements)}
        interp = {
            name: frozenset(
                tuple(index[e] for e in t)
                for t in rel
                if all(e in index for e in t)
            )
            for name, rel in self.interp.items()
        }
        return FiniteStructure(self.sig, len(elements), interp)

    def relabel(self, perm: Mapping[int, int]) -> FiniteStructure:
        interp = {
            name: frozenset(tuple(perm[e] for e in t) for t in rel)
            for name, rel in self.interp.items()
        }
        return FiniteStructure(self.sig, self.size, interp)


def _same_sig(a: FiniteStructure, b: FiniteStructure) -> None:
    if a.sig != b.sig:
        raise SignatureMismatch(f"{a.sig.relations} vs {b.sig.relations}")


# -- evaluation --------------------------------------------------------------


def evaluate(A: FiniteStructure, f: Formula, a: Mapping[str, int] | None = None) -> bool:
    """Tarskian satisfaction ``A |= f[a]``."""
    a = dict(a or {})
    check_signature(f, A.sig)
    missing = [v for v in free_variables(f) if v not in a]
    if missing:
        raise UnboundVariable(", ".join(missing))
    return _eval(A, f, a)


def _eval(A: FiniteStructure, f: Formula, a: dict[str, int]) -> bool:
    if isinstance(f, Atom):
        return tuple(a[v] for v in f.args) in A.interp[f.rel]
    if isinstance(f, Eq):
        return a[f.left] == a[f.right]
    if isinstance(f, Not):
        return not _eval(A, f.sub, a)
    if isinstance(f, Bin):
        if f.op == AND:
            return _eval(A, f.left, a) and _eval(A, f.right, a)
        if f.op == OR:
            return _eval(A, f.left, a) or _eval(A, f.right, a)
        return (not _eval(A, f.left, a)) or _eval(A, f.right, a)
    saved = a.get(f.var)
    had = f.var in a
    try:
        test = any if f.kind == EXISTS else all
        result = test(_eval(A, f.body, _bind(a, f.var, e)) for e in A.universe)
    finally:
        if had:
            a[f.var] = saved
        else:
            a.pop(f.var, None)
    return result


def _bind(a: dict[str, int], v: str, e: int) -> dict[str, int]:
    a[v] = e
    return a


# -- partial isomorphisms, colour refinement ---------------------------------


def is_partial_isomorphism(
    A: FiniteStructure, B: FiniteStructure, pairs: list[tuple[int, int]]
) -> bool:
    """Whether ``a_i -> b_i`` is a well-defined injective map preserving all
    relations in both directions on the elements it mentions."""
    fwd: dict[int, int] = {}
    bwd: dict[int, int] = {}
    for x, y in pairs:
        if fwd.setdefault(x, y) != y or bwd.setdefault(y, x) != x:
            return False
    for name, arity in A.sig:
        for t in itertools.product(fwd, repeat=arity):
            if (t in A.interp[name]) != (tuple(fwd[e] for e in t) in B.interp[name]):
                return False
    return True


def _refine(structs: list[FiniteStructure]) -> list[list[int]]:
    """Joint 1-dimensional colour refinement; colours are comparable across
    the given structures."""
    names = [n for n, _ in structs[0].sig]
    incid = []
    for S in structs:
        occ: list[list[tuple]] = [[] for _ in S.universe]
        for ri, name in enumerate(names):
            for t in S.interp[name]:
                for pos, e in enumerate(t):
                    occ[e].append((ri, pos, t))
        incid.append(occ)

    def pattern(t: Tuple, e: int) -> Tuple:
        return tuple(i for i, x in enumerate(t) if x == e)

    colours = [[0] * S.size for S in structs]
    n_colours = -1
    while True:
        keys = []
        for si, S in enumerate(structs):
            col = colours[si]
            row = []
            for e in S.universe:
                neigh = sorted(
                    (ri, pos, pattern(t, e), tuple(col[x] for x in t))
                    for ri, pos, t in incid[si][e]
                )
                row.append((col[e], tuple(neigh)))
            keys.append(row)
        palette = {k: i for i, k in enumerate(sorted({k for row in keys for k in row}))}
        colours = [[palette[k] for k in row] for row in keys]
        if len(palette) == n_colours:
            return colours
        n_colours = len(palette)


def _extensions(
    A: FiniteStructure,
    B: FiniteStructure,
    seed: list[tuple[int, int]] = (),
    first_only: bool = False,
) -> Iterator[dict[int, int]]:
    """All isomorphisms A -> B extending ``seed`` (a list of pairs)."""
    if A.size != B.size:
        return
    ca, cb = _refine([A, B])
    if sorted(ca) != sorted(cb):
        return
    fwd: dict[int, int] = {}
    used: set[int] = set()
    for x, y in seed:
        if x in fwd:
            if fwd[x] != y:
                return
            continue
        if y in used or ca[x] != cb[y]:
            return
        fwd[x] = y
        used.add(y)
    if not is_partial_isomorphism(A, B, list(fwd.items())):
        return

    # tuples of A / B grouped by the element that completes them last
    order = sorted((e for e in A.universe if e not in fwd), key=lambda e: (ca.count(ca[e]), e))
    rank = {e: -1 for e in fwd}
    rank.update({e: i for i, e in enumerate(order)})
    a_checks: list[list[tuple[str, Tuple]]] = [[] for _ in order]
    for name, _ in A.sig:
        for t in A.interp[name]:
            r = max(rank[e] for e in t)
            if r >= 0:
                a_checks[r].append((name, t))
    b_incid: list[list[tuple]] = [[] for _ in B.universe]
    for name, _ in B.sig:
        for t in B.interp[name]:
            for e in set(t):
                b_incid[e].append(t)
    a_counts = [len(c) for c in a_checks]

    def consistent(depth: int, b: int) -> bool:
        for name, t in a_checks[depth]:
            if tuple(fwd[e] for e in t) not in B.interp[name]:
                return False
        # the A->B direction is verified above and the map is injective, so
        # matching counts rule out extra B tuples inside the image
        return sum(all(e in used for e in t) for t in b_incid[b]) == a_counts[depth]

    def search(depth: int) -> Iterator[dict[int, int]]:
        if depth == len(order):
            yield dict(fwd)
            return
        x = order[depth]
        for y in B.universe:
            if y in used or cb[y] != ca[x]:
                continue
            fwd[x] = y
            used.add(y)
            if consistent(depth, y):
                yield from search(depth + 1)
            del fwd[x]
            used.discard(y)

    for iso in search(0):
        yield iso
        if first_only:
            return


def are_isomorphic(A: FiniteStructure, B: FiniteStructure) -> dict[int, int] | None:
    """A witnessing bijection ``A -> B``, or ``None``."""
    _same_sig(A, B)
    return next(_extensions(A, B, first_only=True), None)


def automorphisms(A: FiniteStructure) -> Iterator[dict[int, int]]:
    return _extensions(A, A)


def orbit_count(A: FiniteStructure, n: int) -> int:
    """Number of Aut(A)-orbits on n-tuples (the finite shadow of n-types)."""
    if A.size < 1:
        raise EmptyUniverse("orbit_count needs a nonempty universe")
    if n < 1:
        raise ValueError("n must be positive")
    return len(orbit_representatives(A, n))


def orbit_representatives(A: FiniteStructure, n: int) -> list[Tuple]:
    reps: dict[tuple, list[Tuple]] = {}
    colours = _refine([A])[0]
    for t in itertools.product(A.universe, repeat=n):
        key = _tuple_invariant(A, colours, t)
        bucket = reps.setdefault(key, [])
        for r in bucket:
            if next(_extensions(A, A, list(zip(r, t)), first_only=True), None) is not None:
                break
        else:
            bucket.append(t)
    return [t for bucket in reps.values() for t in bucket]


def _tuple_invariant(A: FiniteStructure, colours: list[int], t: Tuple) -> tuple:
    eq = tuple(t.index(e) for e in t)
    atoms = tuple(
        tuple(t[i] for i in ix) in A.interp[name]
        for name, arity in A.sig
        for ix in itertools.product(range(len(t)), repeat=arity)
    )
    return (eq, tuple(colours[e] for e in t), atoms)


# -- Ehrenfeucht-Fraisse games -----------------------------------------------


class EFGame:
    """Exact r-round EF game solver on a pair of structures.

    Positions are memoised on the set of chosen pairs, since repeating a pair
    or permuting the order of earlier moves changes nothing.
    """

    def __init__(self, A: FiniteStructure, B: FiniteStructure):
        _same_sig(A, B)
        self.A, self.B = A, B
        self._memo: dict[tuple[tuple[tuple[int, int], ...], int], bool] = {}

    def duplicator_wins(self, pairs: list[tuple[int, int]], rounds: int) -> bool:
        key = (tuple(sorted(set(pairs))), rounds)
        hit = self._memo.get(key)
        if hit is not None:
            return hit
        result = is_partial_isomorphism(self.A, self.B, list(key[0]))
        if result and rounds > 0:
            result = all(
                any(self.duplicator_wins(pairs + [(a, b)], rounds - 1) for b in self.B.universe)
                for a in self.A.universe
            ) and all(
                any(self.duplicator_wins(pairs + [(a, b)], rounds - 1) for a in self.A.universe)
                for b in self.B.universe
            )
        self._memo[key] = result
        return result

    def spoiler_moves(self) -> Iterator[tuple[str, int]]:
        """Spoiler's options in the fixed tie-break order: A first, then B."""
        for a in self.A.universe:
            yield "A", a
        for b in self.B.universe:
            yield "B", b


def ef_equivalent(A: FiniteStructure, B: FiniteStructure, r: int) -> bool:
    """True iff Duplicator wins the r-round EF game on (A, B)."""
    if r < 0:
        raise ValueError("r must be nonnegative")
    return EFGame(A, B).duplicator_wins([], r)


# -- sentence enumeration ----------------------------------------------------


def atomic_formulas(sig: Signature, depth: int) -> list[Formula]:
    """All atoms over x1..x<depth>: equalities first, then relations in
    signature order, argument tuples lexicographic."""
    vs = [var(i) for i in range(1, depth + 1)]
    out: list[Formula] = [Eq(x, y) for x in vs for y in vs]
    for name, arity in sig:
        out.extend(Atom(name, args) for args in itertools.product(vs, repeat=arity))
    return out


def enumerate_sentences(sig: Signature, rank_bound: int, size_bound: int) -> Iterator[Formula]:
    """Every sentence with quantifier rank <= rank_bound and at most
    size_bound AST nodes, in canonical form: a quantifier at nesting depth d
    binds x<d+1>.  Ordered by node count, then structurally."""
    cache: dict[tuple[int, int, int], list[Formula]] = {}

    def gen(depth: int, size: int, rank: int) -> list[Formula]:
        key = (depth, size, rank)
        if key in cache:
            return cache[key]
        out: list[Formula] = []
        if size == 1:
            out.extend(atomic_formulas(sig, depth))
        elif size >= 2:
            out.extend(Not(g) for g in gen(depth, size - 1, rank))
            for op in (AND, OR, IMPLIES):
                for ls in range(1, size - 1):
                    for left in gen(depth, ls, rank):
                        for right in gen(depth, size - 1 - ls, rank):
                            out.append(Bin(op, left, right))
            if rank >= 1:
                v = var(depth + 1)
                for kind in (EXISTS, FORALL):
                    out.extend(Quant(kind, v, g) for g in gen(depth + 1, size - 1, rank - 1))
        cache[key] = out
        return out

    for size in range(1, size_bound + 1):
        yield from gen(0, size, rank_bound)
