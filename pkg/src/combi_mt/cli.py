"""Command-line front end: ``combi-mt <verb> ...``.

Exit status 0 on success, 1 on a domain error, 2 on usage or parse errors.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import selftest, spectra
from .combine import (
    as_e_combination,
    as_p_combination,
    e_combine,
    p_combine,
    relativize,
    restrict_to_class,
    restrict_to_predicate,
)
from .errors import CombiError, FormulaSyntaxError, StructureFormatError
from .formats import parse_family, parse_structures, render_family, render_structure
from .logic import free_variables, parse_formula, parse_signature, quantifier_rank, render
from .model import evaluate
from .separate import e_separating_set


class UsageError(Exception):
    pass


def parse_params(text: str | None) -> dict[str, str]:
    out: dict[str, str] = {}
    if not text:
        return out
    for item in text.split(","):
        if not item.strip():
            continue
        if "=" not in item:
            raise UsageError(f"bad parameter {item!r}, expected key=value")
        k, v = item.split("=", 1)
        out[k.strip()] = v.strip()
    return out


def _read(path: str) -> str:
    p = Path(path)
    if not p.is_file():
        raise UsageError(f"no such file: {path}")
    return p.read_text()


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _pick(structs: dict, name: str | None):
    if name is None:
        if len(structs) != 1:
            raise UsageError("file holds several structures; pass --name")
        return next(iter(structs.items()))
    if name not in structs:
        raise UsageError(f"no structure named {name!r}")
    return name, structs[name]


def cmd_parse(args) -> None:
    sig = parse_signature(_read(args.sig)) if args.sig else None
    f = parse_formula(args.formula, sig)
    print(render(f))
    print(f"# free={','.join(free_variables(f)) or '-'} rank={quantifier_rank(f)}")


def cmd_eval(args) -> None:
    _, A = _pick(parse_structures(_read(args.structure)), args.name)
    f = parse_formula(args.formula, A.sig)
    assignment = {k: int(v) for k, v in parse_params(args.assign).items()}
    print(str(evaluate(A, f, assignment)).lower())


def cmd_combine(args) -> None:
    name, fam = parse_family(_read(args.family))
    C = p_combine(fam) if args.mode == "p" else e_combine(fam, args.e_symbol)
    _emit(render_structure(f"{name}_{args.mode}", C.base), args.output)


def cmd_restrict(args) -> None:
    _, A = _pick(parse_structures(_read(args.structure)), args.name)
    if args.mode == "p":
        if args.tag is None:
            raise UsageError("--mode p needs --tag")
        S = restrict_to_predicate(as_p_combination(A), args.tag)
        label = args.tag
    else:
        if args.element is None:
            raise UsageError("--mode e needs --element")
        S = restrict_to_class(as_e_combination(A, args.e_symbol), args.element)
        label = f"class{args.element}"
    _emit(render_structure(label, S), args.output)


def cmd_relativize(args) -> None:
    f = parse_formula(args.formula)
    sigma = parse_formula(args.sigma)
    print(render(relativize(f, args.e_symbol, sigma, verbatim=args.verbatim)))


def cmd_separate(args) -> None:
    _, fam = parse_family(_read(args.family))
    for c in e_separating_set(args.target, fam):
        print(render(c.sentence))
        print(f"# rank={c.rank} true={c.witness_true} false={c.witness_false} method={c.method}")


def cmd_spectrum(args) -> None:
    report = spectra.spectrum_report(args.formula_name, parse_params(args.params))
    print(report.render(args.format))


def cmd_gen(args) -> None:
    fam = spectra.gen_family(args.kind, parse_params(args.params))
    _emit(render_family(args.name or args.kind, fam), args.output)


def cmd_selftest(args) -> int:
    failed = 0
    for name, ok, detail in selftest.run(args.seed):
        print(f"{'PASS' if ok else 'FAIL'}\t{name}\t{detail}")
        failed += not ok
    return 1 if failed else 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="combi-mt", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="verb", required=True)

    p = sub.add_parser("parse", help="parse and re-print a formula")
    p.add_argument("formula")
    p.add_argument("--sig", help="file of 'rel Name/arity' lines")
    p.set_defaults(func=cmd_parse)

    p = sub.add_parser("eval", help="evaluate a formula in a structure")
    p.add_argument("structure")
    p.add_argument("formula")
    p.add_argument("--name")
    p.add_argument("--assign", help="x1=0,x2=3,...")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("combine", help="P- or E-combine a family file")
    p.add_argument("family")
    p.add_argument("--mode", choices=("p", "e"), required=True)
    p.add_argument("--e-symbol", default="E")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_combine)

    p = sub.add_parser("restrict", help="restrict a combination to one part")
    p.add_argument("structure")
    p.add_argument("--mode", choices=("p", "e"), required=True)
    p.add_argument("--tag")
    p.add_argument("--element", type=int)
    p.add_argument("--name")
    p.add_argument("--e-symbol", default="E")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_restrict)

    p = sub.add_parser("relativize", help="print the (E,sigma)-relativization")
    p.add_argument("formula")
    p.add_argument("--e-symbol", default="E")
    p.add_argument("--sigma", default="x1 = x1")
    p.add_argument("--verbatim", action="store_true", help="leave -> and A unguarded")
    p.set_defaults(func=cmd_relativize)

    p = sub.add_parser("separate", help="e-separating set for one family member")
    p.add_argument("family")
    p.add_argument("--target", required=True)
    p.set_defaults(func=cmd_separate)

    p = sub.add_parser("spectrum", help="closed form vs oracle report")
    p.add_argument("formula_name", choices=spectra.SPECTRUM_NAMES)
    p.add_argument("--params", default="")
    p.add_argument("--format", choices=("text", "tsv"), default="text")
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("gen", help="write one of the example families")
    p.add_argument("--kind", choices=spectra.FAMILY_KINDS, required=True)
    p.add_argument("--params", default="")
    p.add_argument("--name")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("selftest", help="run the closed-form/oracle table")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_selftest)
    return ap


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args) or 0
    except (UsageError, FormulaSyntaxError, StructureFormatError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except CombiError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (ValueError, KeyError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
