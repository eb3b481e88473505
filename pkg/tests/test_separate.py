import random

import pytest

from combi_mt.combine import FamilySpec
from combi_mt.errors import NotSeparable, UnknownTag, WitnessMismatch
from combi_mt.logic import Not, Signature, parse_formula, quantifier_rank
from combi_mt.model import FiniteStructure, are_isomorphic, ef_equivalent, enumerate_sentences, evaluate
from combi_mt.sampling import random_structure
from combi_mt.separate import (
    SeparationCertificate,
    check_separating,
    conjoin,
    e_separating_set,
    flip,
    least_separating_rank,
    scott_sentence,
    separating_sentence,
)

EMPTY = Signature()
UNARY = Signature((("P", 1),))
MIXED = Signature((("P", 1), ("R", 2)))


def bare(n):
    return FiniteStructure(EMPTY, n)


def non_isomorphic_pairs(rng, sig, count, max_size):
    out = []
    while len(out) < count:
        A = random_structure(rng, sig, rng.randint(1, max_size))
        B = random_structure(rng, sig, rng.randint(1, max_size))
        if are_isomorphic(A, B) is None:
            out.append((A, B))
    return out


class TestScott:
    def test_size_one(self):
        s = scott_sentence(bare(1))
        assert evaluate(bare(1), s)
        assert not evaluate(bare(2), s)
        ref = parse_formula("E x1 . A x2 . x2 = x1")
        for n in range(1, 4):
            assert evaluate(bare(n), s) == evaluate(bare(n), ref)

    def test_size_two(self):
        s = scott_sentence(bare(2))
        assert [evaluate(bare(n), s) for n in (1, 2, 3)] == [False, True, False]

    def test_marked_point(self):
        A = FiniteStructure(UNARY, 2, {"P": {(0,)}})
        assert not evaluate(FiniteStructure(UNARY, 2), scott_sentence(A))

    def test_characterises_up_to_isomorphism(self):
        rng = random.Random(6)
        for _ in range(150):
            A = random_structure(rng, MIXED, rng.randint(1, 5))
            B = random_structure(rng, MIXED, rng.randint(1, 5)) if rng.random() < 0.5 else A.relabel(
                dict(enumerate(rng.sample(range(A.size), A.size)))
            )
            assert evaluate(B, scott_sentence(A)) == (are_isomorphic(A, B) is not None)


class TestSeparatingSentence:
    def test_isomorphic_inputs(self):
        with pytest.raises(NotSeparable):
            separating_sentence(bare(2), bare(2))

    def test_three_vs_two(self):
        c = separating_sentence(bare(3), bare(2))
        assert c.rank == 3
        assert check_separating(c, bare(3), bare(2))

    def test_one_marked_point(self):
        A = FiniteStructure(UNARY, 2, {"P": {(0,)}})
        B = FiniteStructure(UNARY, 2)
        c = separating_sentence(A, B)
        assert c.rank == 1
        assert c.sentence == parse_formula("E x1 . P(x1)")

    def test_random_pairs_are_valid_and_minimal(self):
        rng = random.Random(10)
        for A, B in non_isomorphic_pairs(rng, MIXED, 80, 4):
            c = separating_sentence(A, B)
            assert check_separating(c, A, B)
            assert c.method == "ef"
            assert not ef_equivalent(A, B, c.rank)
            if c.rank >= 1:
                assert ef_equivalent(A, B, c.rank - 1)

    def test_budget_fallback_to_scott(self):
        c = separating_sentence(bare(3), bare(2), budget=1)
        assert c.method == "scott"
        assert check_separating(c, bare(3), bare(2))

    def test_minimal_rank_against_enumeration(self):
        rng = random.Random(13)
        sentences = {r: list(enumerate_sentences(UNARY, r, 6)) for r in (0, 1)}
        for A, B in non_isomorphic_pairs(rng, UNARY, 30, 3):
            r = least_separating_rank(A, B)
            if r > 2:
                continue
            for s in sentences.get(r - 1, []):
                assert evaluate(A, s) == evaluate(B, s)


class TestFlipConjoin:
    def test_flip(self):
        c = separating_sentence(bare(3), bare(2), "a", "b")
        d = flip(c)
        assert d.sentence == Not(c.sentence)
        assert (d.witness_true, d.witness_false, d.rank) == ("b", "a", c.rank)
        assert check_separating(d, bare(2), bare(3))
        assert flip(d).sentence == Not(Not(c.sentence))
        assert check_separating(flip(d), bare(3), bare(2))

    def test_conjoin_self(self):
        c = separating_sentence(bare(3), bare(1))
        f = conjoin(c, c)
        assert evaluate(bare(3), f) and not evaluate(bare(1), f)

    def test_conjoin_triple(self):
        c1 = separating_sentence(bare(2), bare(1), "b", "a")
        c2 = separating_sentence(bare(2), bare(3), "b", "c")
        f = conjoin(c1, c2)
        assert evaluate(bare(2), f)
        assert not evaluate(bare(1), f) and not evaluate(bare(3), f)
        assert quantifier_rank(f) == max(c1.rank, c2.rank)

    def test_witness_mismatch(self):
        c1 = separating_sentence(bare(2), bare(1), "b", "a")
        with pytest.raises(WitnessMismatch):
            conjoin(c1, flip(c1))


class TestSeparatingSet:
    def test_all_isomorphic(self):
        fam = FamilySpec.of([("a", bare(2)), ("b", bare(2))])
        assert e_separating_set("a", fam) == []

    def test_sizes_one_two_three(self):
        fam = FamilySpec.of([("s1", bare(1)), ("s2", bare(2)), ("s3", bare(3))])
        certs = e_separating_set("s2", fam)
        assert len(certs) == 2
        assert all(isinstance(c, SeparationCertificate) for c in certs)
        assert {c.witness_false for c in certs} == {"s1", "s3"}
        for c in certs:
            assert check_separating(c, fam["s2"], fam[c.witness_false])

    def test_conjunction_per_member(self):
        rng = random.Random(14)
        for _ in range(15):
            members = [(f"m{i}", random_structure(rng, UNARY, rng.randint(1, 3))) for i in range(3)]
            fam = FamilySpec.of(members, UNARY)
            certs = e_separating_set("m0", fam)
            if not certs:
                continue
            f = certs[0].sentence
            for c in certs[1:]:
                f = conjoin(SeparationCertificate(f, "m0", "", 0), c)
            for tag, S in fam.members:
                expected = are_isomorphic(S, fam["m0"]) is not None
                assert evaluate(S, f) == expected

    def test_unknown_target(self):
        with pytest.raises(UnknownTag):
            e_separating_set("zz", FamilySpec.of([("a", bare(1))]))
