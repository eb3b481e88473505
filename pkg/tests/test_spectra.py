import itertools

import pytest

from combi_mt import spectra
from combi_mt.errors import BoundExceeded, UndefinedIndex, UnknownKind, ZeroFactor
from combi_mt.spectra import (
    CONTINUUM,
    OMEGA,
    Fin,
    comb_rep,
    comlim_validate,
    count_models_product,
    esp_disjoint_orders,
    esp_range_check,
    esp_tn,
    gen_family,
    i_infinity_singletons,
    oracle_component_states,
    oracle_i_infinity,
    oracle_model_choices,
    parse_cardinal,
    spectrum_report,
)

SAMPLE = [Fin(0), Fin(1), Fin(2), Fin(5), OMEGA, CONTINUUM]


class TestCardinals:
    def test_order(self):
        assert Fin(0) < Fin(7) < OMEGA < CONTINUUM
        assert max(Fin(3), OMEGA) == OMEGA
        assert min(CONTINUUM, Fin(2)) == Fin(2)

    @pytest.mark.parametrize("a, b, c", list(itertools.product(SAMPLE, repeat=3)))
    def test_laws(self, a, b, c):
        assert a + b == b + a
        assert a * b == b * a
        assert (a + b) + c == a + (b + c)
        assert (a * b) * c == a * (b * c)

    def test_absorption(self):
        assert Fin(4) + OMEGA == OMEGA
        assert OMEGA + CONTINUUM == CONTINUUM
        assert Fin(2) * OMEGA == OMEGA
        assert Fin(0) * CONTINUUM == Fin(0)

    def test_parse(self):
        assert parse_cardinal("omega") == OMEGA
        assert parse_cardinal("continuum") == CONTINUUM
        assert parse_cardinal(" 12 ") == Fin(12)

    def test_invalid(self):
        with pytest.raises(ValueError):
            Fin(-1)


class TestProduct:
    def test_all_ones(self):
        assert count_models_product([Fin(1)] * 3) == Fin(1)

    def test_three_by_three(self):
        assert count_models_product([Fin(3), Fin(3)]) == Fin(9) == Fin(oracle_model_choices([3, 3]))

    def test_omega_factor(self):
        assert count_models_product([Fin(2), OMEGA]) == OMEGA

    def test_one_iff_all_ones(self):
        for fs in itertools.product([Fin(1), Fin(2), OMEGA], repeat=3):
            assert (count_models_product(fs) == Fin(1)) == all(f == Fin(1) for f in fs)

    def test_zero_factor(self):
        with pytest.raises(ZeroFactor):
            count_models_product([Fin(0), Fin(2)])


class TestIInfinity:
    @pytest.mark.parametrize(
        "j, lam, expected",
        [(Fin(0), Fin(1), Fin(1)), (Fin(2), Fin(1), Fin(3)), (OMEGA, OMEGA, CONTINUUM), (OMEGA, Fin(3), OMEGA)],
    )
    def test_examples(self, j, lam, expected):
        assert i_infinity_singletons(j, lam) == expected

    def test_oracle_examples(self):
        assert oracle_i_infinity(0, 3) == 1
        assert oracle_i_infinity(2, 1) == 3

    def test_closed_form_equals_oracle(self):
        for j in range(5):
            for lam in range(1, 6):
                assert i_infinity_singletons(j, lam) == Fin(oracle_i_infinity(j, lam))

    def test_monotone(self):
        for j in range(5):
            for lam in range(1, 6):
                v = i_infinity_singletons(j, lam)
                assert i_infinity_singletons(j + 1, lam) >= v
                assert i_infinity_singletons(j, lam + 1) >= v

    def test_oracle_bound(self):
        with pytest.raises(BoundExceeded):
            oracle_i_infinity(7, 1)


class TestOrdersAndCombinations:
    def test_base_case(self):
        assert esp_disjoint_orders(1, False) == esp_disjoint_orders(1, True) == 2

    def test_m_two(self):
        assert esp_disjoint_orders(2, False) == 8
        assert esp_disjoint_orders(2, True) == 5

    def test_against_oracle(self):
        for m in range(1, 6):
            assert esp_disjoint_orders(m, False) == oracle_component_states(m, 3, True, True)
            assert esp_disjoint_orders(m, True) == oracle_component_states(m, 3, False, True)

    def test_component_oracle_examples(self):
        assert oracle_component_states(0, 3, True, True) == 0
        assert oracle_component_states(2, 3, True, True) == 8
        assert oracle_component_states(3, 2, False, False) == 4
        with pytest.raises(BoundExceeded):
            oracle_component_states(11, 2, True, False)

    def test_comb_rep(self):
        assert comb_rep(5, 0) == 1
        assert comb_rep(1, 4) == 1
        assert comb_rep(2, 2) == 3
        for n in range(1, 7):
            for m in range(7):
                assert comb_rep(n, m) == oracle_component_states(m, n, False, False)

    def test_tn(self):
        assert [esp_tn(0), esp_tn(3), esp_tn(5)] == [2, 3, 5]
        with pytest.raises(UndefinedIndex):
            esp_tn(1)


class TestComLim:
    def test_parity_point(self):
        assert comlim_validate(Fin(1), Fin(1), Fin(1), Fin(1))

    @pytest.mark.parametrize("k", SAMPLE)
    def test_identical_structures(self, k):
        assert comlim_validate(k, k, k, k)

    def test_min_bound_violation(self):
        assert not comlim_validate(Fin(2), Fin(3), Fin(3), Fin(3))

    def test_sum_violation(self):
        assert not comlim_validate(Fin(2), Fin(2), Fin(3), Fin(2))


class TestRange:
    @pytest.mark.parametrize("v", [Fin(7), OMEGA, CONTINUUM, 0])
    def test_in_range(self, v):
        assert esp_range_check(v)

    def test_out_of_range(self):
        assert not esp_range_check(-1)
        assert not esp_range_check(True)


class TestGenerators:
    def test_singletons(self):
        fam = gen_family("singletons", {"J": "1 2"})
        assert fam.tags == ("q1", "q2")
        for k, (_, S) in zip((1, 2), fam.members):
            assert S.size >= 1
            assert len(S.interp[f"Q{k}"]) == 1
            assert all(not S.interp[f"Q{o}"] for o in (1, 2) if o != k)

    def test_unary_chain(self):
        fam = gen_family("unary_chain", {"i": 1, "n": 3})
        (_, S), = fam.members
        assert S.size == 3
        assert S.interp["P1"] == {(e,) for e in range(3)}
        assert all(not S.interp[n] for n in S.sig.names if n != "P1")

    def test_independent_preds(self):
        fam = gen_family("independent_preds", {"k": 2, "max_mult": 2})
        for tag, S in fam.members:
            m = int(tag[1:])
            patterns = [tuple((e,) in S.interp[f"P{j}"] for j in range(2)) for e in S.universe]
            assert all(patterns.count(p) == m for p in itertools.product([False, True], repeat=2))

    def test_paths(self):
        fam = gen_family("paths", {"i": 2})
        (_, S), = fam.members
        R = S.interp["R"]
        assert all((y, x) in R and x != y for x, y in R)
        assert all(sum(1 for x, _ in R if x == v) <= 2 for v in S.universe)
        # component diameters by BFS
        seen = set()
        for v in S.universe:
            if v in seen:
                continue
            comp, frontier = {v}, [v]
            while frontier:
                frontier = [y for x in frontier for (a, y) in R if a == x and y not in comp]
                comp.update(frontier)
            seen |= comp
            assert len(comp) == 3 and len([e for e in R if e[0] in comp]) == 4

    @pytest.mark.parametrize("side, parity", [("even", 0), ("odd", 1)])
    def test_parity(self, side, parity):
        fam = gen_family("parity", {"side": side, "count": 3})
        for i, (_, S) in enumerate(fam.members):
            assert len(S.interp["P"]) == 2 * i + parity
            assert S.size == len(S.interp["P"]) + 1

    def test_errors(self):
        with pytest.raises(UnknownKind):
            gen_family("bogus", {})
        with pytest.raises(BoundExceeded):
            gen_family("singletons", {"j": 9})
        with pytest.raises(BoundExceeded):
            gen_family("paths", {"i": 8})

    def test_cap_override(self, monkeypatch):
        monkeypatch.setenv(spectra.MAX_SIZE_ENV, "9")
        assert len(gen_family("singletons", {"j": 9})) == 9


class TestReports:
    def test_i_infinity(self):
        r = spectrum_report("i-infinity", {"j": "2", "lambda": "1"})
        assert r.render() == "closed_form=3 oracle=3 agrees=true"
        assert r.render("tsv") == "3\t3\ttrue"

    def test_infinite_has_no_oracle(self):
        r = spectrum_report("i-infinity", {"j": "omega", "lambda": "omega"})
        assert r.closed_form == CONTINUUM and r.oracle_value is None and r.agrees

    def test_unknown(self):
        with pytest.raises(UnknownKind):
            spectrum_report("nope", {})

    @pytest.mark.parametrize(
        "name, params",
        [
            ("disjoint-orders", {"m": "3"}),
            ("disjoint-orders", {"m": "3", "merged": "true"}),
            ("comb-rep", {"n": "3", "m": "4"}),
            ("tn", {"n": "4"}),
            ("t0-halfopen", {}),
            ("product", {"factors": "2 3 omega"}),
        ],
    )
    def test_all_agree_and_in_range(self, name, params):
        r = spectrum_report(name, params)
        assert r.agrees
        assert esp_range_check(r.closed_form)
