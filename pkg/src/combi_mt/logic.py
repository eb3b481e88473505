"""First-order syntax over relational signatures.

Formulas are immutable dataclass trees.  Variables are plain strings of the
form ``x<k>`` (k >= 1); equality is built in and never part of a signature.

Concrete syntax::

    A x1 . phi        E x1 . phi        (quantifier body extends maximally right)
    !phi   phi & psi   phi | psi   phi -> psi
    R(x1,x2)   x1 = x2   ( phi )

Precedence is ``!`` > ``&`` > ``|`` > ``->``; ``&`` and ``|`` associate to the
left and ``->`` to the right.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Iterator, Union

from .errors import ArityMismatch, FormulaSyntaxError, SignatureMismatch, UnknownSymbol

AND = "and"
OR = "or"
IMPLIES = "implies"
EXISTS = "exists"
FORALL = "forall"

VAR_RE = re.compile(r"x[1-9][0-9]*\Z")
NAME_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")


def var(k: int) -> str:
    return f"x{k}"


def var_index(v: str) -> int:
    return int(v[1:])


@dataclass(frozen=True)
class Signature:
    relations: tuple[tuple[str, int], ...] = ()

    def __post_init__(self):
        seen = set()
        for name, arity in self.relations:
            if not NAME_RE.match(name) or VAR_RE.match(name):
                raise ValueError(f"bad relation name {name!r}")
            if name in seen:
                raise ValueError(f"duplicate relation symbol {name!r}")
            if arity < 1:
                raise ValueError(f"arity of {name!r} must be >= 1")
            seen.add(name)

    @classmethod
    def of(cls, *pairs: tuple[str, int], **arities: int) -> Signature:
        return cls(tuple(pairs) + tuple(arities.items()))

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(name for name, _ in self.relations)

    def __contains__(self, name: object) -> bool:
        return any(name == n for n, _ in self.relations)

    def __iter__(self) -> Iterator[tuple[str, int]]:
        return iter(self.relations)

    def __len__(self) -> int:
        return len(self.relations)

    def arity(self, name: str) -> int:
        for n, a in self.relations:
            if n == name:
                return a
        raise UnknownSymbol(name)

    def extend(self, *pairs: tuple[str, int]) -> Signature:
        return Signature(self.relations + tuple(pairs))

    def without(self, *names: str) -> Signature:
        return Signature(tuple(p for p in self.relations if p[0] not in names))

    def merge(self, other: Signature) -> Signature:
        """Union of two signatures; a shared name must carry the same arity."""
        out = list(self.relations)
        for name, arity in other.relations:
            if name in self:
                if self.arity(name) != arity:
                    raise SignatureMismatch(
                        f"{name} has arity {self.arity(name)} and {arity}"
                    )
            else:
                out.append((name, arity))
        return Signature(tuple(out))

    def render(self) -> str:
        return "\n".join(f"rel {n}/{a}" for n, a in self.relations)


def parse_signature(text: str) -> Signature:
    """Parse ``rel Name/arity`` lines (``#`` starts a comment)."""
    pairs = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        m = re.fullmatch(r"rel\s+([A-Za-z_][A-Za-z0-9_]*)\s*/\s*(\d+)", line)
        if not m:
            raise FormulaSyntaxError(f"bad signature line {lineno}: {raw!r}", 0)
        pairs.append((m.group(1), int(m.group(2))))
    return Signature(tuple(pairs))


@dataclass(frozen=True)
class Atom:
    rel: str
    args: tuple[str, ...]


@dataclass(frozen=True)
class Eq:
    left: str
    right: str


@dataclass(frozen=True)
class Not:
    sub: Formula


@dataclass(frozen=True)
class Bin:
    op: str
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Quant:
    kind: str
    var: str
    body: Formula


Formula = Union[Atom, Eq, Not, Bin, Quant]


def And(left: Formula, right: Formula) -> Bin:
    return Bin(AND, left, right)


def Or(left: Formula, right: Formula) -> Bin:
    return Bin(OR, left, right)


def Implies(left: Formula, right: Formula) -> Bin:
    return Bin(IMPLIES, left, right)


def Exists(v: str, body: Formula) -> Quant:
    return Quant(EXISTS, v, body)


def Forall(v: str, body: Formula) -> Quant:
    return Quant(FORALL, v, body)


def conjunction(parts: Iterable[Formula]) -> Formula:
    """Left-associated conjunction of a nonempty sequence."""
    return _fold(AND, parts)


def disjunction(parts: Iterable[Formula]) -> Formula:
    return _fold(OR, parts)


def _fold(op: str, parts: Iterable[Formula]) -> Formula:
    it = iter(parts)
    try:
        acc = next(it)
    except StopIteration:
        raise ValueError("empty connective") from None
    for p in it:
        acc = Bin(op, acc, p)
    return acc


# -- syntactic queries -------------------------------------------------------


def free_variables(f: Formula) -> tuple[str, ...]:
    """Free variables in order of first occurrence."""
    out: dict[str, None] = {}
    _free(f, frozenset(), out)
    return tuple(out)


def _free(f: Formula, bound: frozenset, out: dict) -> None:
    if isinstance(f, Atom):
        for v in f.args:
            if v not in bound:
                out.setdefault(v)
    elif isinstance(f, Eq):
        for v in (f.left, f.right):
            if v not in bound:
                out.setdefault(v)
    elif isinstance(f, Not):
        _free(f.sub, bound, out)
    elif isinstance(f, Bin):
        _free(f.left, bound, out)
        _free(f.right, bound, out)
    else:
        _free(f.body, bound | {f.var}, out)


def all_variables(f: Formula) -> set[str]:
    """Every variable occurring in ``f``, free or bound."""
    if isinstance(f, Atom):
        return set(f.args)
    if isinstance(f, Eq):
        return {f.left, f.right}
    if isinstance(f, Not):
        return all_variables(f.sub)
    if isinstance(f, Bin):
        return all_variables(f.left) | all_variables(f.right)
    return {f.var} | all_variables(f.body)


def fresh_variable(*formulas: Formula) -> str:
    """Smallest ``x<k>`` occurring in none of ``formulas``."""
    used = set()
    for f in formulas:
        used |= {var_index(v) for v in all_variables(f)}
    k = 1
    while k in used:
        k += 1
    return var(k)


def quantifier_rank(f: Formula) -> int:
    if isinstance(f, (Atom, Eq)):
        return 0
    if isinstance(f, Not):
        return quantifier_rank(f.sub)
    if isinstance(f, Bin):
        return max(quantifier_rank(f.left), quantifier_rank(f.right))
    return 1 + quantifier_rank(f.body)


def node_count(f: Formula) -> int:
    if isinstance(f, (Atom, Eq)):
        return 1
    if isinstance(f, Not):
        return 1 + node_count(f.sub)
    if isinstance(f, Bin):
        return 1 + node_count(f.left) + node_count(f.right)
    return 1 + node_count(f.body)


def relations_used(f: Formula) -> set[tuple[str, int]]:
    if isinstance(f, Atom):
        return {(f.rel, len(f.args))}
    if isinstance(f, Eq):
        return set()
    if isinstance(f, Not):
        return relations_used(f.sub)
    if isinstance(f, Bin):
        return relations_used(f.left) | relations_used(f.right)
    return relations_used(f.body)


def check_signature(f: Formula, sig: Signature) -> None:
    for name, n in relations_used(f):
        if name not in sig:
            raise UnknownSymbol(name)
        if sig.arity(name) != n:
            raise ArityMismatch(f"{name} expects {sig.arity(name)} arguments, got {n}")


def rename_free(f: Formula, mapping: dict[str, str]) -> Formula:
    """Replace free occurrences of variables.

    The targets must not be bound anywhere in ``f``; no capture check is made.
    """
    if not mapping:
        return f
    if isinstance(f, Atom):
        return Atom(f.rel, tuple(mapping.get(v, v) for v in f.args))
    if isinstance(f, Eq):
        return Eq(mapping.get(f.left, f.left), mapping.get(f.right, f.right))
    if isinstance(f, Not):
        return Not(rename_free(f.sub, mapping))
    if isinstance(f, Bin):
        return Bin(f.op, rename_free(f.left, mapping), rename_free(f.right, mapping))
    inner = {k: v for k, v in mapping.items() if k != f.var}
    return Quant(f.kind, f.var, rename_free(f.body, inner))


# -- printer -----------------------------------------------------------------

_PREC = {IMPLIES: 1, OR: 2, AND: 3}
_OPSYM = {AND: "&", OR: "|", IMPLIES: "->"}
_QSYM = {EXISTS: "E", FORALL: "A"}


def render(f: Formula) -> str:
    return _render(f, 0, True)


def _render(f: Formula, min_prec: int, tail: bool) -> str:
    # ``tail``: nothing follows this subformula in the output, so a bare
    # quantifier cannot swallow a later operand.
    if isinstance(f, Atom):
        return f"{f.rel}({','.join(f.args)})"
    if isinstance(f, Eq):
        return f"{f.left} = {f.right}"
    if isinstance(f, Not):
        return "!" + _render(f.sub, 4, tail)
    if isinstance(f, Quant):
        body = _render(f.body, 0, True)
        if isinstance(f.body, Bin):
            body = f"({body})"
        s = f"{_QSYM[f.kind]} {f.var} . {body}"
        return s if tail else f"({s})"
    p = _PREC[f.op]
    wrap = p < min_prec
    inner_tail = tail or wrap
    if f.op == IMPLIES:
        left = _render(f.left, p + 1, False)
        right = _render(f.right, p, inner_tail)
    else:
        left = _render(f.left, p, False)
        right = _render(f.right, p + 1, inner_tail)
    s = f"{left} {_OPSYM[f.op]} {right}"
    return f"({s})" if wrap else s


# -- parser ------------------------------------------------------------------

_TOKEN_RE = re.compile(
    r"\s*(?:(?P<arrow>->)|(?P<punct>[()!&|.,=])|(?P<word>[A-Za-z_][A-Za-z0-9_]*))"
)


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    n = len(text)
    while True:
        while pos < n and text[pos].isspace():
            pos += 1
        if pos >= n:
            break
        m = _TOKEN_RE.match(text, pos)
        if not m:
            raise FormulaSyntaxError(f"unexpected character {text[pos]!r}", pos)
        start = m.start(m.lastgroup)
        tok = m.group(m.lastgroup)
        if m.lastgroup == "word":
            kind = "var" if VAR_RE.match(tok) else "name"
        else:
            kind = tok
        tokens.append((kind, tok, start))
        pos = m.end()
    tokens.append(("eof", "", n))
    return tokens


class _Parser:
    def __init__(self, text: str, sig: Signature | None):
        self.tokens = _tokenize(text)
        self.i = 0
        self.sig = sig

    def peek(self, ahead: int = 0) -> tuple[str, str, int]:
        return self.tokens[min(self.i + ahead, len(self.tokens) - 1)]

    def take(self, *kinds: str) -> tuple[str, str, int]:
        tok = self.peek()
        if tok[0] not in kinds:
            shown = tok[1] or "end of input"
            raise FormulaSyntaxError(f"unexpected {shown!r}", tok[2], kinds)
        self.i += 1
        return tok

    def formula(self) -> Formula:
        left = self.disj()
        if self.peek()[0] == "->":
            self.i += 1
            return Bin(IMPLIES, left, self.formula())
        return left

    def disj(self) -> Formula:
        acc = self.conj()
        while self.peek()[0] == "|":
            self.i += 1
            acc = Bin(OR, acc, self.conj())
        return acc

    def conj(self) -> Formula:
        acc = self.unary()
        while self.peek()[0] == "&":
            self.i += 1
            acc = Bin(AND, acc, self.unary())
        return acc

    def unary(self) -> Formula:
        kind, text, _ = self.peek()
        if kind == "!":
            self.i += 1
            return Not(self.unary())
        if kind == "name" and text in ("A", "E") and self.peek(1)[0] == "var":
            self.i += 1
            v = self.take("var")[1]
            self.take(".")
            return Quant(FORALL if text == "A" else EXISTS, v, self.formula())
        return self.primary()

    def primary(self) -> Formula:
        kind, text, pos = self.peek()
        if kind == "(":
            self.i += 1
            f = self.formula()
            self.take(")")
            return f
        if kind == "var":
            self.i += 1
            self.take("=")
            return Eq(text, self.take("var")[1])
        if kind == "name":
            self.i += 1
            self.take("(")
            args = [self.take("var")[1]]
            while self.peek()[0] == ",":
                self.i += 1
                args.append(self.take("var")[1])
            self.take(")")
            if self.sig is not None:
                if text not in self.sig:
                    raise UnknownSymbol(f"{text} at position {pos}")
                if self.sig.arity(text) != len(args):
                    raise ArityMismatch(
                        f"{text} expects {self.sig.arity(text)} arguments, "
                        f"got {len(args)} at position {pos}"
                    )
            return Atom(text, tuple(args))
        shown = text or "end of input"
        raise FormulaSyntaxError(
            f"unexpected {shown!r}", pos, ("(", "!", "A", "E", "variable", "relation")
        )


def parse_formula(text: str, sig: Signature | None = None) -> Formula:
    """Parse ``text``; with ``sig`` given, symbols and arities are checked."""
    p = _Parser(text, sig)
    f = p.formula()
    p.take("eof")
    return f
