"""Motive expression algebra: the invertible group, detection, and the
small-Kahn decompositions."""

import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from quadmot import mdt, motives
from quadmot.forms import FormProfile
from quadmot.motives import (KIND_INVERTIBLE, KIND_ROST, MotiveExpr, Summand,
                             ZERO, base_change_kill, detect_count,
                             pfister_motive, small_kahn_decomposition,
                             symbol, tensor)


def L(sym, twist=0, period=None):
    return MotiveExpr.invertible(sym, twist, period)


class TestTensor:
    def test_square_is_unit(self):
        a = symbol("a")
        assert tensor(L(a), L(a)) == MotiveExpr.tate(0)

    def test_addition_of_symbols(self):
        a, b = symbol("a"), symbol("b")
        assert tensor(L(a), L(b)) == L(symbol("a", "b"))

    def test_tate_is_unit(self):
        a = symbol("a")
        assert tensor(MotiveExpr.tate(2), L(a, 3)) == L(a, 5)

    def test_distributes(self):
        a, b = symbol("a"), symbol("b")
        left = tensor(L(a) + L(b), L(a))
        assert left == MotiveExpr.tate(0) + L(symbol("a", "b"))

    def test_mode_mismatch(self):
        with pytest.raises(ValueError):
            tensor(MotiveExpr.tate(0, 3), MotiveExpr.tate(0))

    def test_rost_twists_by_invertible(self):
        a, b = symbol("a"), symbol("b")
        r = MotiveExpr([Summand(KIND_ROST, a, 1, "C0(q)")])
        got = tensor(r, L(b, 2))
        assert got == MotiveExpr([Summand(KIND_ROST, symbol("a", "b"), 3,
                                          "C0(q)")])

    def test_two_binaries_rejected(self):
        r = MotiveExpr([Summand(KIND_ROST, ZERO, 0, "C0(q)")])
        with pytest.raises(ValueError):
            tensor(r, r)

    def test_group_axioms_on_invertibles(self):
        gens = ["a", "b"]
        syms = [symbol(*c) for r in range(3)
                for c in itertools.combinations(gens, r)]
        twists = [0, 1, 2]
        elems = [(s, t) for s in syms for t in twists]
        period = 3
        for s1, t1 in elems:
            for s2, t2 in elems:
                x, y = L(s1, t1, period), L(s2, t2, period)
                assert tensor(x, y) == tensor(y, x)
                inv = L(s1, -t1, period)
                assert tensor(x, inv) == MotiveExpr.tate(0, period)
                for s3, t3 in elems[:4]:
                    z = L(s3, t3, period)
                    assert tensor(tensor(x, y), z) == tensor(x, tensor(y, z))


class TestPfister:
    def test_shape(self):
        a = symbol("a")
        m = pfister_motive(2, a)
        assert m.rank() == 8
        assert m.tate_count() == 4
        for i in range(4):
            assert m.summands[Summand(KIND_INVERTIBLE, ZERO, i)] == 1
            assert m.summands[Summand(KIND_INVERTIBLE, a, i)] == 1

    def test_zero_symbol_collapses(self):
        m = pfister_motive(2, ZERO)
        assert m.tate_count() == 8

    def test_absorbs_its_invertible(self):
        a = symbol("a")
        m = pfister_motive(2, a)
        assert tensor(m, L(a)) == m


class TestKill:
    def test_kill_own_symbol(self):
        a = symbol("a")
        assert base_change_kill(L(a, 1), a) == MotiveExpr.tate(1)

    def test_independent_symbol_survives(self):
        a, b = symbol("a"), symbol("b")
        assert base_change_kill(L(b), a) == L(b)

    def test_tate_fixed(self):
        assert base_change_kill(MotiveExpr.tate(2), symbol("a")) == \
            MotiveExpr.tate(2)

    def test_sum_symbol_quotient(self):
        ab = symbol("a", "b")
        killed = base_change_kill(L(ab), ab)
        assert killed == MotiveExpr.tate(0)
        # a and b become identified, not killed
        a_left = base_change_kill(L(symbol("a")), ab)
        b_left = base_change_kill(L(symbol("b")), ab)
        assert a_left == b_left
        assert a_left != MotiveExpr.tate(0)

    def test_monoidal(self):
        a, b = symbol("a"), symbol("b")
        exprs = [L(a, 1), L(b) + L(symbol("a", "b"), 2), MotiveExpr.tate(1)]
        for x in exprs:
            for y in exprs:
                assert base_change_kill(tensor(x, y), a) == \
                    tensor(base_change_kill(x, a), base_change_kill(y, a))


class TestDetect:
    def test_pfister_counts(self):
        a = symbol("a")
        m = pfister_motive(2, a, period=3)
        assert detect_count(m, a, 1) == 1
        assert detect_count(m, a, 2) == 1
        assert detect_count(m, a, 0) == 2  # twists 0 and 3 coincide

    def test_no_dependence(self):
        a, b = symbol("a"), symbol("b")
        m = L(b, 0, 3) + MotiveExpr.tate(1, 3)
        assert detect_count(m, a, 0) == 0
        assert detect_count(m, a, 1) == 0

    def test_exact_match_only(self):
        a, b = symbol("a"), symbol("b")
        m = L(a, 0, 3) + L(symbol("a", "b"), 0, 3)
        assert detect_count(m, a, 0) == 1

    def test_additive_and_invariant(self):
        a, b = symbol("a"), symbol("b")
        base = L(a, 1, 3)
        extra = L(b, 1, 3) + MotiveExpr.tate(1, 3)
        assert detect_count(base + extra, a, 1) == \
            detect_count(base, a, 1)

    def test_requires_periodic(self):
        with pytest.raises(ValueError):
            detect_count(L(symbol("a")), symbol("a"), 0)


class TestSmallKahn:
    def test_dim_n_one(self):
        p = FormProfile(7, (1, 2), {2: 1}, symbols={2: "a"})
        m = small_kahn_decomposition(p, 2)
        a = symbol("a")
        assert m.rank() == 3
        assert all(s.kind == KIND_INVERTIBLE and s.sym == a for s in m)
        assert sorted(s.twist for s in m) == [0, 1, 2]

    def test_dim_n_full(self):
        p = FormProfile(8, (2, 2), {1: 0, 2: 4}, symbols={1: "c", 2: "a"},
                        disc_trivial=True)
        m = small_kahn_decomposition(p, 2)
        assert m.rank() == 2
        assert all(s.kind == KIND_ROST and s.label == "C(q)" for s in m)

    def test_zero_symbol_collapse(self):
        p = FormProfile(8, (4,), {2: 0}, i_power=3, symbols={2: "0"},
                        disc_trivial=True)
        m = small_kahn_decomposition(p, 2)
        assert m.tate_count() == 4

    def test_requires_kahn_entry(self):
        p = FormProfile(8, (4,))
        with pytest.raises(ValueError):
            small_kahn_decomposition(p, 2)

    def test_rows_match_classifier(self):
        profiles = [
            FormProfile(7, (1, 2), {2: 1}, symbols={2: "a"}),
            FormProfile(7, (1, 2), {2: 3}, symbols={2: "a"}),
            FormProfile(8, (4,), {2: 0}, i_power=3, symbols={2: "a"},
                        disc_trivial=True),
            FormProfile(8, (1, 3), {2: 2}, symbols={2: "a"}),
            FormProfile(8, (2, 2), {1: 0, 2: 4}, symbols={1: "c", 2: "a"},
                        disc_trivial=True),
            FormProfile(11, (1, 1, 3), {2: 1}, symbols={2: "a"}),
            FormProfile(12, (2, 1, 3), {2: 2}, symbols={2: "a"}),
        ]
        for p in profiles:
            expr = small_kahn_decomposition(p, 2)
            classified = mdt.classify_k2(p)
            assert expr == classified.expr, p
