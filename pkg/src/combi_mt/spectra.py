"""Cardinal arithmetic, closed-form e-spectrum and model counts, their
enumeration oracles, and generators for the standard example families.

Closed forms and oracles are kept deliberately separate: the oracles never
call the closed forms or ``math.comb``; they list objects and count them.
"""

from __future__ import annotations

import functools
import itertools
import math
import os
from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .combine import FamilySpec
from .errors import BoundExceeded, UndefinedIndex, UnknownKind, ZeroFactor
from .logic import Signature
from .model import FiniteStructure, are_isomorphic

MAX_SIZE_ENV = "COMBI_MT_MAX_SIZE"


def cap(default: int) -> int:
    """Desk-scale bound, overridable (unsafely) through COMBI_MT_MAX_SIZE."""
    raw = os.environ.get(MAX_SIZE_ENV)
    return int(raw) if raw else default


# -- cardinals ---------------------------------------------------------------

_FIN, _OMEGA, _CONT = 0, 1, 2


@functools.total_ordering
@dataclass(frozen=True)
class ExtCardinal:
    """A finite number, aleph_0 (``OMEGA``) or 2^aleph_0 (``CONTINUUM``).

    All uncountable values collapse to ``CONTINUUM``.
    """

    tier: int
    n: int = 0

    def __post_init__(self):
        if self.tier not in (_FIN, _OMEGA, _CONT):
            raise ValueError(f"bad tier {self.tier}")
        if self.tier == _FIN and self.n < 0:
            raise ValueError("finite cardinal must be nonnegative")
        if self.tier != _FIN and self.n != 0:
            raise ValueError("infinite cardinals carry no count")

    @property
    def is_finite(self) -> bool:
        return self.tier == _FIN

    def _key(self) -> tuple[int, int]:
        return (self.tier, self.n)

    def __lt__(self, other: ExtCardinal) -> bool:
        return self._key() < _card(other)._key()

    def __add__(self, other) -> ExtCardinal:
        other = _card(other)
        if self.is_finite and other.is_finite:
            return Fin(self.n + other.n)
        return max(self, other)

    __radd__ = __add__

    def __mul__(self, other) -> ExtCardinal:
        other = _card(other)
        if self == Fin(0) or other == Fin(0):
            return Fin(0)
        if self.is_finite and other.is_finite:
            return Fin(self.n * other.n)
        return max(self, other)

    __rmul__ = __mul__

    def pow2(self) -> ExtCardinal:
        return Fin(2**self.n) if self.is_finite else CONTINUUM

    def __str__(self) -> str:
        if self.is_finite:
            return str(self.n)
        return "omega" if self.tier == _OMEGA else "continuum"


def Fin(n: int) -> ExtCardinal:
    return ExtCardinal(_FIN, n)


OMEGA = ExtCardinal(_OMEGA)
CONTINUUM = ExtCardinal(_CONT)


def _card(v) -> ExtCardinal:
    if isinstance(v, ExtCardinal):
        return v
    if isinstance(v, int) and not isinstance(v, bool):
        return Fin(v)
    raise TypeError(f"not a cardinal: {v!r}")


def parse_cardinal(text: str) -> ExtCardinal:
    t = text.strip().lower()
    if t in ("omega", "w", "aleph0", "aleph_0"):
        return OMEGA
    if t in ("continuum", "2^omega", "2^w", "c"):
        return CONTINUUM
    return Fin(int(t))


@dataclass(frozen=True)
class SpectrumReport:
    closed_form: ExtCardinal
    oracle_value: int | None
    params: Mapping[str, object] = field(default_factory=dict)

    @property
    def agrees(self) -> bool:
        if self.oracle_value is None:
            return True
        return self.closed_form.is_finite and self.closed_form.n == self.oracle_value

    def render(self, fmt: str = "text") -> str:
        oracle = "n/a" if self.oracle_value is None else str(self.oracle_value)
        agrees = str(self.agrees).lower()
        if fmt == "tsv":
            return f"{self.closed_form}\t{oracle}\t{agrees}"
        return f"closed_form={self.closed_form} oracle={oracle} agrees={agrees}"


# -- model counts ------------------------------------------------------------


def count_models_product(factors: Iterable) -> ExtCardinal:
    """Number of countable models of a combination: the product of the
    component counts, each taken at min(|A_i|, omega)."""
    factors = [_card(f) for f in factors]
    if not factors:
        raise ValueError("need at least one factor")
    if any(f == Fin(0) for f in factors):
        raise ZeroFactor("every theory has a model of its own cardinality")
    return functools.reduce(lambda a, b: a * b, factors)


def oracle_model_choices(counts: Iterable[int]) -> int:
    """Count tuples of independent per-component model choices by listing them."""
    return sum(1 for _ in itertools.product(*(range(c) for c in counts)))


def i_infinity_singletons(j, lam) -> ExtCardinal:
    """Limit structures of cardinality ``lam`` for the singleton family with
    ``j`` singleton predicates."""
    j, lam = _card(j), _card(lam)
    if lam < Fin(1):
        raise ValueError("lambda must be at least 1")
    if j.is_finite:
        top = j.n if not lam.is_finite else min(j.n, lam.n)
        return Fin(sum(math.comb(j.n, i) for i in range(top + 1)))
    if j > lam:
        return j
    return j.pow2()


def oracle_i_infinity(j: int, lam: int) -> int:
    """Isomorphism classes of size-``lam`` structures over ``Q1..Qj``, each
    ``Qk`` empty or a singleton, pairwise disjoint; listed and compared."""
    if j > cap(6) or lam > cap(6):
        raise BoundExceeded(f"j={j}, lambda={lam} beyond the oracle range")
    if j < 0 or lam < 1:
        raise ValueError("need j >= 0 and lambda >= 1")
    sig = Signature(tuple((f"Q{k}", 1) for k in range(1, j + 1)))
    reps: dict[tuple, list[FiniteStructure]] = {}
    for slots in itertools.product([None, *range(lam)], repeat=j):
        placed = [s for s in slots if s is not None]
        if len(set(placed)) != len(placed):
            continue
        S = FiniteStructure(
            sig, lam, {f"Q{k + 1}": {(s,)} for k, s in enumerate(slots) if s is not None}
        )
        key = tuple(len(S.interp[n]) for n in sig.names)
        bucket = reps.setdefault(key, [])
        if not any(are_isomorphic(S, R) is not None for R in bucket):
            bucket.append(S)
    return sum(len(b) for b in reps.values())


def esp_disjoint_orders(m: int, merged: bool) -> int:
    """e-spectrum of m disjoint copies of the dense-order-with-singletons
    structure: separate order symbols give 3^m - 1, one shared symbol
    gives (m^2 + 3m) / 2."""
    if m < 1:
        raise ValueError("m must be positive")
    if merged:
        return m * (m + 1) // 2 + m
    return 3**m - 1


def oracle_component_states(m: int, states: int, labeled: bool, exclude_all_empty: bool) -> int:
    """Count state assignments to ``m`` components by explicit listing.

    State 0 is "empty".  Labeled components give tuples, unlabeled ones
    give multisets.
    """
    if m > cap(10) or states > cap(6):
        raise BoundExceeded(f"m={m}, states={states} beyond the oracle range")
    if m < 0 or states < 1:
        raise ValueError("need m >= 0 and states >= 1")
    if labeled:
        configs = itertools.product(range(states), repeat=m)
    else:
        configs = itertools.combinations_with_replacement(range(states), m)
    return sum(1 for c in configs if not (exclude_all_empty and all(s == 0 for s in c)))


def comb_rep(n: int, m: int) -> int:
    """Combinations with repetition: m picks from n kinds."""
    if n < 1 or m < 0:
        raise ValueError("need n >= 1 and m >= 0")
    return math.comb(n + m - 1, m)


ESP_T0_HALFOPEN_VARIANT = 4
"""Variant of the base example with P_{2i} = {a < c_2i}, P_{2i+1} = {a <= c_2i+1}:
limit orders with or without least and with or without greatest element."""


def esp_tn(n: int) -> int:
    """e-spectrum of the dense-order theories T_n (base example at n = 0)."""
    if n == 0:
        return 2
    if n >= 2:
        return n
    raise UndefinedIndex(f"T_{n} is not defined by the partition construction")


def comlim_validate(spA, spB, spC, comlim) -> bool:
    """Check the bounds and the sum identity linking the e-spectra of two
    E-combinations, of their disjoint union, and their common limits."""
    spA, spB, spC, comlim = map(_card, (spA, spB, spC, comlim))
    return (
        comlim <= min(spA, spB)
        and max(spA, spB) <= spC
        and spA + spB == spC + comlim
    )


def esp_range_check(v) -> bool:
    """True iff ``v`` is a finite count, omega or continuum."""
    if isinstance(v, ExtCardinal):
        return v.tier in (_FIN, _OMEGA, _CONT) and (not v.is_finite or v.n >= 0)
    return isinstance(v, int) and not isinstance(v, bool) and v >= 0


# -- family generators -------------------------------------------------------

FAMILY_KINDS = ("singletons", "unary_chain", "independent_preds", "paths", "parity")


def gen_family(kind: str, params: Mapping[str, object] | None = None) -> FamilySpec:
    params = dict(params or {})
    try:
        build = _GENERATORS[kind]
    except KeyError:
        raise UnknownKind(kind) from None
    members = build(params)
    if len(members) > cap(8):
        raise BoundExceeded(f"{len(members)} members")
    for tag, S in members:
        if S.size > cap(8):
            raise BoundExceeded(f"member {tag} has size {S.size}")
    return FamilySpec.of(members)


def _int(params: Mapping, key: str, default: int | None = None) -> int:
    if key not in params:
        if default is None:
            raise ValueError(f"missing parameter {key!r}")
        return default
    return int(params[key])


def _index_set(params: Mapping, key: str, count_key: str) -> list[int]:
    if key in params:
        raw = params[key]
        if isinstance(raw, str):
            return [int(x) for x in raw.replace(";", " ").split()]
        if isinstance(raw, int):
            return list(range(1, raw + 1))
        return [int(x) for x in raw]
    return list(range(1, _int(params, count_key) + 1))


def _singletons(params):
    # each member: one nonempty unary predicate Q_k, a singleton
    J = _index_set(params, "J", "j")
    size = _int(params, "size", 1)
    copies = _int(params, "copies", 1)
    if size < 1:
        raise ValueError("size must be >= 1")
    sig = Signature(tuple((f"Q{k}", 1) for k in J))
    out = []
    for k in J:
        for c in range(copies):
            tag = f"q{k}" if copies == 1 else f"q{k}_{c}"
            out.append((tag, FiniteStructure(sig, size, {f"Q{k}": {(0,)}})))
    return out


def _unary_chain(params):
    # universe of n elements with P_i everything and every other P_j empty
    if "i" in params:
        i = _int(params, "i")
        lam = _int(params, "lam", i + 1)
        pairs = [(i, _int(params, "n"))]
    else:
        lam = _int(params, "lam")
        pairs = [(i, n) for i in range(lam) for n in range(1, _int(params, "n_max", 2) + 1)]
    if any(not 0 <= i < lam for i, _ in pairs):
        raise ValueError("need 0 <= i < lam")
    sig = Signature(tuple((f"P{i}", 1) for i in range(lam)))
    return [
        (f"a{i}_{n}", FiniteStructure(sig, n, {f"P{i}": {(e,) for e in range(n)}}))
        for i, n in pairs
    ]


def _independent_preds(params):
    # every sign pattern of P0..P<k-1> realised, each with multiplicity m
    k = _int(params, "k")
    mults = [1]
    if "mults" in params or "max_mult" in params:
        mults = _index_set(params, "mults", "max_mult")
    sig = Signature(tuple((f"P{j}", 1) for j in range(k)))
    out = []
    for m in mults:
        cells = [(cell, c) for cell in range(2**k) for c in range(m)]
        interp = {
            f"P{j}": {(e,) for e, (cell, _) in enumerate(cells) if cell >> j & 1}
            for j in range(k)
        }
        out.append((f"m{m}", FiniteStructure(sig, len(cells), interp)))
    return out


def _paths(params):
    # symmetric irreflexive R whose components are paths of diameter i
    idx = [_int(params, "i")] if "i" in params else list(range(1, _int(params, "imax") + 1))
    comps = _int(params, "components", 2)
    sig = Signature((("R", 2),))
    out = []
    for i in idx:
        if i < 1:
            raise ValueError("diameter must be >= 1")
        edges = set()
        for c in range(comps):
            base = c * (i + 1)
            for v in range(base, base + i):
                edges |= {(v, v + 1), (v + 1, v)}
        out.append((f"d{i}", FiniteStructure(sig, comps * (i + 1), {"R": edges})))
    return out


def _parity(params):
    # P has 2i (even side) or 2i+1 (odd side) elements, plus one element outside P
    side = str(params.get("side", "even"))
    if side not in ("even", "odd"):
        raise ValueError("side must be 'even' or 'odd'")
    count = _int(params, "count", 3)
    sig = Signature((("P", 1),))
    out = []
    for i in range(count):
        p = 2 * i + (side == "odd")
        out.append((f"{side[0]}{i}", FiniteStructure(sig, p + 1, {"P": {(e,) for e in range(p)}})))
    return out


_GENERATORS = {
    "singletons": _singletons,
    "unary_chain": _unary_chain,
    "independent_preds": _independent_preds,
    "paths": _paths,
    "parity": _parity,
}


# -- named reports (CLI surface) ---------------------------------------------


def _bool(v) -> bool:
    if isinstance(v, bool):
        return v
    return str(v).lower() in ("1", "true", "yes", "y")


def spectrum_report(name: str, params: Mapping[str, object]) -> SpectrumReport:
    """Evaluate a named closed form and, where it exists, its oracle."""
    p = dict(params)
    if name == "i-infinity":
        j = parse_cardinal(str(p["j"]))
        lam = parse_cardinal(str(p.get("lambda", p.get("lam"))))
        closed = i_infinity_singletons(j, lam)
        oracle = None
        if j.is_finite and lam.is_finite and j.n <= cap(6) and lam.n <= cap(6):
            oracle = oracle_i_infinity(j.n, lam.n)
        return SpectrumReport(closed, oracle, p)
    if name == "disjoint-orders":
        m = int(p["m"])
        merged = _bool(p.get("merged", False))
        closed = Fin(esp_disjoint_orders(m, merged))
        oracle = None
        if m <= cap(10):
            oracle = oracle_component_states(m, 3, labeled=not merged, exclude_all_empty=True)
        return SpectrumReport(closed, oracle, p)
    if name == "comb-rep":
        n, m = int(p["n"]), int(p["m"])
        oracle = None
        if n <= cap(6) and m <= cap(10):
            oracle = oracle_component_states(m, n, labeled=False, exclude_all_empty=False)
        return SpectrumReport(Fin(comb_rep(n, m)), oracle, p)
    if name == "tn":
        return SpectrumReport(Fin(esp_tn(int(p["n"]))), None, p)
    if name == "t0-halfopen":
        return SpectrumReport(Fin(ESP_T0_HALFOPEN_VARIANT), None, p)
    if name == "product":
        factors = [parse_cardinal(x) for x in str(p["factors"]).replace(";", " ").split()]
        closed = count_models_product(factors)
        oracle = None
        if all(f.is_finite for f in factors):
            oracle = oracle_model_choices(f.n for f in factors)
        return SpectrumReport(closed, oracle, p)
    raise UnknownKind(f"no spectrum formula named {name!r}")


SPECTRUM_NAMES = ("i-infinity", "disjoint-orders", "comb-rep", "tn", "t0-halfopen", "product")
