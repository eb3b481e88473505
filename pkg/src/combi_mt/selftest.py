"""Closed form vs. oracle table, run by ``combi-mt selftest``."""

from __future__ import annotations

import itertools
import random
from typing import Callable, Iterator

from . import spectra
from .combine import e_classes, e_combine, relativize, restrict_to_class
from .logic import Atom, Signature, free_variables, parse_formula, render, var
from .model import FiniteStructure, ef_equivalent, evaluate
from .sampling import random_family, random_formula
from .spectra import CONTINUUM, OMEGA, Fin

ATOM_GOLDEN = (
    "R(x1,x2) & E(x1,x1) & E(x1,x2) & E(x2,x1) & E(x2,x2) & E x3 . (E(x1,x3) & x3 = x3)"
)


def _golden() -> tuple[bool, str]:
    got = render(relativize(parse_formula("R(x1,x2)"), "E", parse_formula("x1 = x1")))
    return got == ATOM_GOLDEN, got


def _ef_bare_sets() -> tuple[bool, str]:
    bad = []
    for n, m, r in itertools.product(range(1, 7), range(1, 7), range(7)):
        expect = n == m or (n >= r and m >= r)
        if ef_equivalent(FiniteStructure(Signature(), n), FiniteStructure(Signature(), m), r) != expect:
            bad.append((n, m, r))
    return not bad, f"mismatches={bad[:5]}"


def _i_infinity() -> tuple[bool, str]:
    bad = [
        (j, lam)
        for j in range(5)
        for lam in range(1, 6)
        if spectra.i_infinity_singletons(j, lam) != Fin(spectra.oracle_i_infinity(j, lam))
    ]
    return not bad, f"points=25 mismatches={bad}"


def _orders() -> tuple[bool, str]:
    bad = []
    for m in range(1, 6):
        if spectra.esp_disjoint_orders(m, False) != spectra.oracle_component_states(m, 3, True, True):
            bad.append(("labeled", m))
        if spectra.esp_disjoint_orders(m, True) != spectra.oracle_component_states(m, 3, False, True):
            bad.append(("merged", m))
    return not bad, f"mismatches={bad}"


def _comb_rep() -> tuple[bool, str]:
    bad = [
        (n, m)
        for n in range(1, 7)
        for m in range(7)
        if spectra.comb_rep(n, m) != spectra.oracle_component_states(m, n, False, False)
    ]
    return not bad, f"mismatches={bad}"


def _product() -> tuple[bool, str]:
    ok = (
        spectra.count_models_product([Fin(1)] * 5) == Fin(1)
        and spectra.count_models_product([Fin(2), OMEGA]) >= OMEGA
        and spectra.count_models_product([Fin(3), Fin(3)]) == Fin(spectra.oracle_model_choices([3, 3]))
    )
    return ok, "[1]*5, [2,omega], [3,3]"


def _comlim() -> tuple[bool, str]:
    ok = spectra.comlim_validate(1, 1, 1, 1) and all(
        spectra.comlim_validate(k, k, k, k) for k in (Fin(0), Fin(4), OMEGA, CONTINUUM)
    )
    ok = ok and not spectra.comlim_validate(2, 3, 3, 3)
    return ok, "parity point, identical-structures law, min-bound violation"


def relativization_sweep(seed: int, pairs: int) -> tuple[int, list]:
    """Check C |= phi^(E,sigma)[a] iff a's class meets sigma and the class
    satisfies phi[a], with every free variable inside one class."""
    rng = random.Random(seed)
    sig = Signature((("R", 2), ("Q", 1)))
    sigmas = [parse_formula("x1 = x1"), Atom("Q", ("x1",))]
    checked, failures = 0, []
    for _ in range(pairs):
        fam = random_family(rng, sig)
        C = e_combine(fam)
        n = rng.randint(1, 2)
        f = random_formula(rng, sig, rng.randint(1, 3), [var(i) for i in range(1, n + 1)])
        sigma = rng.choice(sigmas)
        free = free_variables(f)
        if not free:
            continue
        g = relativize(f, "E", sigma)
        for cls in e_classes(C):
            meets = any(evaluate(C.base, sigma, {"x1": e}) for e in cls)
            K = restrict_to_class(C, cls[0])
            for tup in itertools.product(range(len(cls)), repeat=len(free)):
                a = {v: cls[i] for v, i in zip(free, tup)}
                lhs = evaluate(C.base, g, a)
                rhs = meets and evaluate(K, f, dict(zip(free, tup)))
                checked += 1
                if lhs != rhs:
                    failures.append((render(f), render(sigma), a))
    return checked, failures


def _relativization(seed: int) -> tuple[bool, str]:
    checked, failures = relativization_sweep(seed, 200)
    return not failures, f"assignments={checked} failures={len(failures)}"


CHECKS: dict[str, Callable[[], tuple[bool, str]]] = {
    "relativize atom golden": _golden,
    "EF on bare sets": _ef_bare_sets,
    "i_infinity closed form = oracle": _i_infinity,
    "disjoint orders closed form = oracle": _orders,
    "comb_rep = multiset oracle": _comb_rep,
    "model-count product laws": _product,
    "ComLim relations": _comlim,
}


def run(seed: int = 0) -> Iterator[tuple[str, bool, str]]:
    checks = dict(CHECKS)
    checks[f"relativization soundness (seed {seed})"] = lambda: _relativization(seed)
    for name in sorted(checks):
        ok, detail = checks[name]()
        yield name, ok, detail
