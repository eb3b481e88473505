import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from combi_mt.errors import ArityMismatch, FormulaSyntaxError, UnknownSymbol
from combi_mt.logic import (
    AND,
    EXISTS,
    FORALL,
    IMPLIES,
    OR,
    Atom,
    Bin,
    Eq,
    Not,
    Quant,
    Signature,
    free_variables,
    fresh_variable,
    node_count,
    parse_formula,
    parse_signature,
    quantifier_rank,
    render,
)

SIG = Signature((("R", 2), ("P", 1), ("E", 2), ("A", 1), ("T", 3)))

variables = st.sampled_from(["x1", "x2", "x3", "x10"])


def _atoms():
    eq = st.builds(Eq, variables, variables)
    atoms = [
        st.builds(lambda args, n=name: Atom(n, tuple(args)), st.lists(variables, min_size=a, max_size=a))
        for name, a in SIG
    ]
    return st.one_of(eq, *atoms)


def _extend(children):
    return st.one_of(
        st.builds(Not, children),
        st.builds(Bin, st.sampled_from([AND, OR, IMPLIES]), children, children),
        st.builds(Quant, st.sampled_from([EXISTS, FORALL]), variables, children),
    )


def _depth(f):
    if isinstance(f, (Atom, Eq)):
        return 0
    if isinstance(f, Not):
        return 1 + _depth(f.sub)
    if isinstance(f, Bin):
        return 1 + max(_depth(f.left), _depth(f.right))
    return 1 + _depth(f.body)


formulas = st.recursive(_atoms(), _extend, max_leaves=24).filter(lambda f: _depth(f) <= 5)


def naive_free(f):
    if isinstance(f, Atom):
        return set(f.args)
    if isinstance(f, Eq):
        return {f.left, f.right}
    if isinstance(f, Not):
        return naive_free(f.sub)
    if isinstance(f, Bin):
        return naive_free(f.left) | naive_free(f.right)
    return naive_free(f.body) - {f.var}


def naive_rank(f):
    if isinstance(f, (Atom, Eq)):
        return 0
    if isinstance(f, Not):
        return naive_rank(f.sub)
    if isinstance(f, Bin):
        return max(naive_rank(f.left), naive_rank(f.right))
    return 1 + naive_rank(f.body)


class TestParse:
    def test_existential(self):
        sig = Signature((("R", 1),))
        assert parse_formula("E x1 . R(x1)", sig) == Quant(EXISTS, "x1", Atom("R", ("x1",)))

    def test_equality(self):
        assert parse_formula("x1 = x1") == Eq("x1", "x1")

    def test_size_one_sentence(self):
        f = parse_formula("A x1 . A x2 . (x1 = x2)")
        assert f == Quant(FORALL, "x1", Quant(FORALL, "x2", Eq("x1", "x2")))
        assert parse_formula(render(f)) == f

    @pytest.mark.parametrize(
        "text, expected",
        [
            ("P(x1) & P(x2) & P(x3)", "((P1 & P2) & P3)"),
            ("P(x1) | P(x2) & P(x3)", "(P1 | (P2 & P3))"),
            ("P(x1) -> P(x2) -> P(x3)", "(P1 -> (P2 -> P3))"),
            ("!P(x1) & P(x2)", "(!P1 & P2)"),
            ("E x1 . P(x1) & P(x2)", "E1.(P1 & P2)"),
            ("P(x2) & E x1 . P(x1) | P(x3)", "(P2 & E1.(P1 | P3))"),
        ],
    )
    def test_precedence_and_associativity(self, text, expected):
        assert _shape(parse_formula(text, SIG)) == expected

    def test_quantifier_keyword_vs_relation(self):
        f = parse_formula("E x1 . E(x1,x1) & A(x1)", SIG)
        assert f == Quant(EXISTS, "x1", Bin(AND, Atom("E", ("x1", "x1")), Atom("A", ("x1",))))

    def test_unknown_symbol(self):
        with pytest.raises(UnknownSymbol):
            parse_formula("Q(x1)", SIG)

    def test_arity_mismatch(self):
        with pytest.raises(ArityMismatch):
            parse_formula("R(x1)", SIG)

    @pytest.mark.parametrize("text", ["", "x1 =", "E x1 P(x1)", "(P(x1)", "P(x1) &", "x0 = x1", "P(x1) $"])
    def test_syntax_errors_carry_position(self, text):
        with pytest.raises(FormulaSyntaxError) as info:
            parse_formula(text)
        assert info.value.position >= 0

    def test_signature_lines(self):
        assert parse_signature("rel R/2\n# c\nrel P/1\n") == Signature((("R", 2), ("P", 1)))


def _shape(f):
    if isinstance(f, Atom):
        return f.rel + "".join(a[1:] for a in f.args)
    if isinstance(f, Not):
        return "!" + _shape(f.sub)
    if isinstance(f, Bin):
        sym = {AND: "&", OR: "|", IMPLIES: "->"}[f.op]
        return f"({_shape(f.left)} {sym} {_shape(f.right)})"
    if isinstance(f, Quant):
        return f"{'E' if f.kind == EXISTS else 'A'}{f.var[1:]}.{_shape(f.body)}"
    return f"{f.left}={f.right}"


class TestRender:
    def test_equality(self):
        assert render(Eq("x1", "x2")) == "x1 = x2"

    def test_negated_atom(self):
        assert render(Not(Atom("R", ("x1",)))) == "!R(x1)"

    def test_quantifier_left_operand_is_parenthesised(self):
        f = Bin(AND, Quant(EXISTS, "x1", Atom("P", ("x1",))), Atom("P", ("x2",)))
        assert render(f) == "(E x1 . P(x1)) & P(x2)"

    def test_trailing_quantifier_inside_left_operand(self):
        inner = Bin(AND, Atom("P", ("x2",)), Quant(EXISTS, "x1", Atom("P", ("x1",))))
        f = Bin(OR, inner, Atom("P", ("x3",)))
        assert parse_formula(render(f)) == f

    @settings(max_examples=1000, deadline=None)
    @given(formulas)
    def test_round_trip(self, f):
        assert parse_formula(render(f), SIG) == f


class TestQueries:
    def test_free_atom(self):
        assert free_variables(Atom("R", ("x1", "x2"))) == ("x1", "x2")

    def test_free_closed(self):
        assert free_variables(Quant(EXISTS, "x1", Atom("R", ("x1",)))) == ()

    def test_free_mixed_binding(self):
        f = Bin(AND, Eq("x1", "x1"), Quant(FORALL, "x1", Atom("R", ("x1", "x2"))))
        assert free_variables(f) == ("x1", "x2")
        assert set(free_variables(f)) == naive_free(f)

    def test_rank_examples(self):
        assert quantifier_rank(Atom("R", ("x1",))) == 0
        two = Quant(EXISTS, "x1", Quant(FORALL, "x2", Eq("x1", "x2")))
        assert quantifier_rank(two) == 2
        three = Quant(EXISTS, "x1", two)
        assert quantifier_rank(Bin(AND, two, three)) == 3

    @settings(max_examples=300, deadline=None)
    @given(formulas)
    def test_free_variables_match_naive_definition(self, f):
        fv = free_variables(f)
        assert set(fv) == naive_free(f)
        assert len(fv) == len(set(fv))
        assert free_variables(parse_formula(render(f), SIG)) == fv

    @settings(max_examples=300, deadline=None)
    @given(formulas)
    def test_rank_rules(self, f):
        assert quantifier_rank(f) == naive_rank(f)
        assert quantifier_rank(Not(f)) == quantifier_rank(f)

    def test_fresh_variable_skips_bound_names(self):
        f = Quant(EXISTS, "x1", Atom("R", ("x1", "x3")))
        assert fresh_variable(f) == "x2"

    def test_node_count(self):
        assert node_count(parse_formula("E x1 . !P(x1) & x1 = x1")) == 5
