"""P- and E-combinations of finite structures, their restrictions, and the
(E, sigma)-relativization of formulas."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import (
    ArityError,
    DuplicateTag,
    NotAnECombination,
    NotAPCombination,
    SigmaArity,
    SignatureMismatch,
    SymbolClash,
    UnknownTag,
)
from .logic import (
    AND,
    EXISTS,
    IMPLIES,
    Atom,
    Bin,
    Eq,
    Formula,
    Not,
    Quant,
    Signature,
    all_variables,
    conjunction,
    fresh_variable,
    free_variables,
    rename_free,
    var,
    var_index,
)
from .model import FiniteStructure


@dataclass(frozen=True)
class FamilySpec:
    members: tuple[tuple[str, FiniteStructure], ...]
    shared_sig: Signature

    def __post_init__(self):
        tags = [t for t, _ in self.members]
        dup = {t for t in tags if tags.count(t) > 1}
        if dup:
            raise DuplicateTag(", ".join(sorted(dup)))
        # lift every member to the shared language, new symbols empty
        lifted = []
        for tag, S in self.members:
            if S.sig != self.shared_sig:
                if self.shared_sig.merge(S.sig) != self.shared_sig:
                    raise SignatureMismatch(f"member {tag} uses symbols outside the shared signature")
                S = FiniteStructure(self.shared_sig, S.size, S.interp)
            lifted.append((tag, S))
        object.__setattr__(self, "members", tuple(lifted))

    @classmethod
    def of(cls, members: Iterable[tuple[str, FiniteStructure]], sig: Signature | None = None) -> FamilySpec:
        """Build a family, merging member languages when ``sig`` is omitted."""
        members = tuple(members)
        if sig is None:
            sig = Signature()
            for _, S in members:
                sig = sig.merge(S.sig)
        return cls(members, sig)

    @property
    def tags(self) -> tuple[str, ...]:
        return tuple(t for t, _ in self.members)

    def __getitem__(self, tag: str) -> FiniteStructure:
        for t, S in self.members:
            if t == tag:
                return S
        raise UnknownTag(tag)

    def __len__(self) -> int:
        return len(self.members)


@dataclass(frozen=True)
class CombinedStructure:
    """A combination together with the provenance of each element.

    ``kind`` is ``"P"`` or ``"E"``.  ``origin[e]`` is ``(tag, element)`` or
    ``None`` for elements that came from a file and belong to no part.
    """

    base: FiniteStructure
    origin: tuple[tuple[str, int] | None, ...]
    kind: str
    shared_sig: Signature
    tags: tuple[str, ...] = ()
    e_symbol: str = "E"
    predicates: dict[str, str] = field(default_factory=dict)


def predicate_name(tag: str) -> str:
    return f"P_{tag}"


def _layout(fam: FamilySpec):
    if not fam.members:
        raise ValueError("family must be nonempty")
    origin = []
    blocks = {}
    for tag, S in fam.members:
        start = len(origin)
        origin.extend((tag, e) for e in S.universe)
        blocks[tag] = range(start, len(origin))
    interp: dict[str, set] = {n: set() for n in fam.shared_sig.names}
    for tag, S in fam.members:
        off = blocks[tag].start
        for name, rel in S.interp.items():
            interp[name].update(tuple(off + e for e in t) for t in rel)
    return tuple(origin), blocks, interp


def p_combine(fam: FamilySpec) -> CombinedStructure:
    """Disjoint P-combination: tagged disjoint union plus one unary ``P_<tag>``
    per member, interpreted as that member's block."""
    preds = {tag: predicate_name(tag) for tag in fam.tags}
    clash = [p for p in preds.values() if p in fam.shared_sig]
    if clash:
        raise SymbolClash(", ".join(clash))
    origin, blocks, interp = _layout(fam)
    sig = fam.shared_sig.extend(*((p, 1) for p in preds.values()))
    for tag, p in preds.items():
        interp[p] = {(e,) for e in blocks[tag]}
    base = FiniteStructure(sig, len(origin), interp)
    return CombinedStructure(base, origin, "P", fam.shared_sig, fam.tags, predicates=preds)


def e_combine(fam: FamilySpec, e_symbol: str = "E") -> CombinedStructure:
    """E-combination: the blocks become the classes of one equivalence E."""
    if e_symbol in fam.shared_sig:
        raise SymbolClash(e_symbol)
    origin, blocks, interp = _layout(fam)
    sig = fam.shared_sig.extend((e_symbol, 2))
    interp[e_symbol] = {(x, y) for blk in blocks.values() for x in blk for y in blk}
    base = FiniteStructure(sig, len(origin), interp)
    return CombinedStructure(base, origin, "E", fam.shared_sig, fam.tags, e_symbol=e_symbol)


def as_p_combination(A: FiniteStructure, prefix: str = "P_") -> CombinedStructure:
    """View a loaded structure as a P-combination.

    Every unary symbol named ``<prefix><tag>`` marks a part; elements in no
    part get origin ``None``.
    """
    preds = {n[len(prefix):]: n for n, a in A.sig if a == 1 and n.startswith(prefix)}
    if not preds:
        raise NotAPCombination("no part predicates found")
    shared = A.sig.without(*preds.values())
    origin: list = [None] * A.size
    for tag, p in preds.items():
        for i, (e,) in enumerate(sorted(A.interp[p])):
            if origin[e] is None:
                origin[e] = (tag, i)
    return CombinedStructure(A, tuple(origin), "P", shared, tuple(preds), predicates=preds)


def as_e_combination(A: FiniteStructure, e_symbol: str = "E") -> CombinedStructure:
    """View a loaded structure as an E-combination (E must be an equivalence)."""
    if e_symbol not in A.sig or A.sig.arity(e_symbol) != 2:
        raise NotAnECombination(f"no binary {e_symbol}")
    E = A.interp[e_symbol]
    refl = all((x, x) in E for x in A.universe)
    sym = all((y, x) in E for x, y in E)
    trans = all((x, z) in E for x, y in E for y2, z in E if y == y2)
    if not (refl and sym and trans):
        raise NotAnECombination(f"{e_symbol} is not an equivalence relation")
    classes = _classes(A, e_symbol)
    tags = tuple(f"c{i}" for i in range(len(classes)))
    origin: list = [None] * A.size
    for tag, cls in zip(tags, classes):
        for i, e in enumerate(cls):
            origin[e] = (tag, i)
    return CombinedStructure(A, tuple(origin), "E", A.sig.without(e_symbol), tags, e_symbol=e_symbol)


def _classes(A: FiniteStructure, e_symbol: str) -> list[list[int]]:
    seen: set[int] = set()
    out = []
    for x in A.universe:
        if x in seen:
            continue
        cls = sorted(y for y in A.universe if (x, y) in A.interp[e_symbol])
        seen.update(cls)
        out.append(cls)
    return out


def e_classes(C: CombinedStructure) -> list[list[int]]:
    if C.kind != "E":
        raise NotAnECombination("not an E-combination")
    return _classes(C.base, C.e_symbol)


def restrict_to_class(C: CombinedStructure, e: int) -> FiniteStructure:
    """Substructure on the E-class of ``e``, E removed, relabelled in order."""
    if C.kind != "E":
        raise NotAnECombination("restrict_to_class needs an E-combination")
    if not 0 <= e < C.base.size:
        raise ValueError(f"element {e} outside the universe")
    cls = [y for y in C.base.universe if (e, y) in C.base.interp[C.e_symbol]]
    return C.base.induced(cls).reduct(C.shared_sig)


def restrict_to_predicate(C: CombinedStructure, tag: str) -> FiniteStructure:
    """Substructure on ``P_<tag>``, part predicates removed."""
    if C.kind != "P":
        raise NotAPCombination("restrict_to_predicate needs a P-combination")
    if tag not in C.predicates:
        raise UnknownTag(tag)
    elems = sorted(e for (e,) in C.base.interp[C.predicates[tag]])
    return C.base.induced(elems).reduct(C.shared_sig)


def p_infinity_residual(C: CombinedStructure) -> set[int]:
    """Elements lying in no part predicate (realisations of p_infinity)."""
    if C.kind != "P":
        raise NotAPCombination("p_infinity_residual needs a P-combination")
    covered = set()
    for p in C.predicates.values():
        covered.update(e for (e,) in C.base.interp[p])
    return set(C.base.universe) - covered


# -- relativization ----------------------------------------------------------

TRIVIAL_SIGMA = Eq("x1", "x1")


def relativize(
    f: Formula,
    e_symbol: str = "E",
    sigma: Formula = TRIVIAL_SIGMA,
    sig: Signature | None = None,
    verbatim: bool = False,
) -> Formula:
    """The (E, sigma)-relativization of ``f``.

    Each subformula is relativized with respect to the tuple of variables in
    scope (the free variables of ``f`` plus enclosing binders, innermost
    first), so closed subformulas stay confined to the class of the free
    variables.  Atoms and negations receive the class guard::

        /\\_{i,j} E(x_i, x_j) & E y . (E(x_1, y) & sigma(y))

    ``->`` and ``A`` are also closed by that guard unless ``verbatim`` is set;
    without it they hold vacuously on classes missing sigma.

    ``sig``, when given, is checked for a binary ``e_symbol``.
    """
    if sig is not None and e_symbol in sig and sig.arity(e_symbol) != 2:
        raise ArityError(f"{e_symbol} has arity {sig.arity(e_symbol)}, expected 2")
    sigma_free = free_variables(sigma)
    if len(sigma_free) != 1:
        raise SigmaArity(f"sigma must have exactly one free variable, has {len(sigma_free)}")

    f = _unshadow(f)
    y = fresh_variable(f, sigma)
    sigma_y = rename_free(sigma, {sigma_free[0]: y})

    def E(a: str, b: str) -> Formula:
        return Atom(e_symbol, (a, b))

    def witness(v: str) -> Formula:
        return Quant(EXISTS, y, Bin(AND, E(v, y), sigma_y))

    def guard(ctx: Sequence[str]) -> list[Formula]:
        if not ctx:
            return []
        return [E(a, b) for a in ctx for b in ctx] + [witness(ctx[0])]

    def rel(g: Formula, ctx: tuple[str, ...]) -> Formula:
        if isinstance(g, (Atom, Eq)):
            return conjunction([g] + guard(ctx))
        if isinstance(g, Not):
            return conjunction([Not(rel(g.sub, ctx))] + guard(ctx))
        if isinstance(g, Bin):
            out = Bin(g.op, rel(g.left, ctx), rel(g.right, ctx))
            if g.op == IMPLIES and not verbatim:
                out = conjunction([out] + guard(ctx))
            return out
        x = g.var
        inner = (x,) + ctx
        links = [E(x, v) for v in ctx] + [witness(x)]
        body = rel(g.body, inner)
        if g.kind == EXISTS:
            return Quant(EXISTS, x, conjunction(links + [body]))
        out = Quant(g.kind, x, Bin(IMPLIES, conjunction(links), body))
        if not verbatim:
            out = conjunction([out] + guard(ctx))
        return out

    return rel(f, free_variables(f))


def _unshadow(f: Formula) -> Formula:
    """Rename binders that re-bind a variable already in scope.

    Formulas without shadowing come back unchanged.
    """
    taken = {var_index(v) for v in all_variables(f)}

    def fresh() -> str:
        k = 1
        while k in taken:
            k += 1
        taken.add(k)
        return var(k)

    def walk(g: Formula, scope: frozenset) -> Formula:
        if isinstance(g, (Atom, Eq)):
            return g
        if isinstance(g, Not):
            return Not(walk(g.sub, scope))
        if isinstance(g, Bin):
            return Bin(g.op, walk(g.left, scope), walk(g.right, scope))
        if g.var in scope:
            new = fresh()
            body = rename_free(g.body, {g.var: new})
            return Quant(g.kind, new, walk(body, scope | {new}))
        return Quant(g.kind, g.var, walk(g.body, scope | {g.var}))

    return walk(f, frozenset(free_variables(f)))
