"""Ring structure of split quadrics across theories."""

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from quadmot import coefficients as coeff
from quadmot.quadring import SplitQuadric, degree, h_power, mul

from conftest import random_class


class TestMultiplicationTable:
    def test_h_times_l(self, chow_int):
        quad = SplitQuadric(5, chow_int)
        assert quad.h(1) * quad.l(2) == quad.l(1)

    def test_middle_square_dim_four(self, chow_int):
        quad = SplitQuadric(4, chow_int)
        assert quad.l(2) * quad.l(2) == quad.l(0)
        assert (quad.lt() * quad.lt()) == quad.l(0)
        assert (quad.l(2) * quad.lt()).is_zero()

    def test_middle_products_dim_six(self, chow_int):
        # oracle for D = 2 mod 4: forced by the middle relation h^d = l_d + lt
        # together with l_d^2 = 0; cross-checked against h^d * h^d below
        quad = SplitQuadric(6, chow_int)
        assert quad.l(3) * quad.lt() == quad.l(0)
        assert (quad.l(3) * quad.l(3)).is_zero()
        assert (quad.lt() * quad.lt()).is_zero()

    def test_middle_relation_consistency_even(self, k2_int):
        # expanding h^d * h^d two ways must agree
        for dim in (4, 6, 8, 10):
            quad = SplitQuadric(dim, k2_int)
            d = quad.d
            lhs = quad.h_power(d) * quad.h_power(d)
            rhs = quad.h_power(2 * d)
            assert lhs == rhs

    def test_theory_mismatch_raises(self, chow_int, k2_int):
        q1 = SplitQuadric(5, chow_int)
        q2 = SplitQuadric(5, k2_int)
        with pytest.raises(ValueError):
            mul(q1, q1.l(0), q2.l(0))

    def test_conic_hyperplane(self, chow_int):
        quad = SplitQuadric(1, chow_int)
        assert quad.h_power(1) == quad.l(0).scale(2)


class TestHPower:
    def test_low_powers_are_basis(self, chow_int):
        quad = SplitQuadric(5, chow_int)
        for k in range(3):
            assert quad.h_power(k) == quad.basis_class(("h", k))

    def test_chow_odd_reduction(self, chow_int):
        quad = SplitQuadric(5, chow_int)
        assert quad.h_power(3) == quad.l(2).scale(2)

    def test_even_middle_expansion(self, k2_int):
        quad = SplitQuadric(6, k2_int)
        got = quad.h_power(3)
        want = quad.l(3) + quad.lt() + quad.l(0).scale(k2_int.fgl.b(4))
        assert got == want

    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_window_identity_integral(self, n):
        th = coeff.morava(n)
        for dim in range(2 ** (n + 1) - 1, 2 ** (n + 1) + 9):
            quad = SplitQuadric(dim, th)
            got = quad.h_power(dim - (2 ** n - 1))
            c = got.coefficient(("l", 0))
            assert got.coefficient(("l", 2 ** n - 1)) == th.ring.integer(2)
            assert set(c.c) == {1} and c.c[1] % 2 == 1
            assert set(got.terms) == {("l", 2 ** n - 1), ("l", 0)}

    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_window_identity_mod2(self, n):
        th = coeff.morava_mod2(n)
        for dim in range(2 ** (n + 1) - 1, 2 ** (n + 1) + 9):
            quad = SplitQuadric(dim, th)
            got = quad.h_power(dim - (2 ** n - 1))
            assert set(got.terms) == {("l", 0)}
            c = got.coefficient(("l", 0))
            assert set(c.c) == {1} and c.c[1] == 1

    def test_chain_rule(self, k2_mod2):
        for dim in (4, 5, 6):
            quad = SplitQuadric(dim, k2_mod2)
            h = quad.h_power(1)
            for k in range(dim):
                assert quad.h_power(k + 1) == h * quad.h_power(k)

    def test_out_of_range(self, chow_int):
        quad = SplitQuadric(5, chow_int)
        with pytest.raises(ValueError):
            h_power(quad, 6)
        with pytest.raises(ValueError):
            h_power(quad, -1)


class TestDegree:
    def test_point_class(self, chow_int):
        for dim in (3, 4, 7):
            quad = SplitQuadric(dim, chow_int)
            assert degree(quad.l(0)) == chow_int.ring.one()

    def test_chow_higher_l_vanishes(self, chow_int):
        quad = SplitQuadric(7, chow_int)
        assert degree(quad.l(2)).is_zero()

    def test_height_one_line_degree(self):
        th = coeff.morava_mod2(1, 12)
        quad = SplitQuadric(5, th)
        assert degree(quad.l(1)) == th.ring.v()

    def test_middle_degrees_agree(self, k2_int):
        quad = SplitQuadric(6, k2_int)
        assert degree(quad.l(3)) == degree(quad.lt())

    def test_degree_of_unit_is_quadric_class(self, k2_int):
        quad = SplitQuadric(6, k2_int)
        assert degree(quad.one()) == k2_int.split_quadric_class(6)

    def test_top_h_power_degree_two(self, chow_int):
        for dim in (3, 4):
            quad = SplitQuadric(dim, chow_int)
            assert degree(quad.h_power(dim)) == chow_int.ring.integer(2)


@st.composite
def quad_and_classes(draw):
    dim = draw(st.integers(min_value=1, max_value=12))
    seed = draw(st.integers(min_value=0, max_value=10 ** 6))
    theory_name = draw(st.sampled_from(["chow", "k2", "k2int", "k1"]))
    return dim, seed, theory_name


THEORIES = {}


def _theory(name):
    if not THEORIES:
        THEORIES.update({
            "chow": coeff.chow(8, 16),
            "k2": coeff.morava_mod2(2, 16),
            "k2int": coeff.morava(2, 8, 16),
            "k1": coeff.morava_mod2(1, 16),
        })
    return THEORIES[name]


class TestRingAxioms:
    @settings(max_examples=120, deadline=None)
    @given(quad_and_classes())
    def test_associative_commutative(self, data):
        dim, seed, theory_name = data
        quad = SplitQuadric(dim, _theory(theory_name))
        rng = random.Random(seed)
        x = random_class(quad, rng)
        y = random_class(quad, rng)
        z = random_class(quad, rng)
        assert x * y == y * x
        assert (x * y) * z == x * (y * z)

    @settings(max_examples=60, deadline=None)
    @given(quad_and_classes())
    def test_distributive(self, data):
        dim, seed, theory_name = data
        quad = SplitQuadric(dim, _theory(theory_name))
        rng = random.Random(seed)
        x = random_class(quad, rng)
        y = random_class(quad, rng)
        z = random_class(quad, rng)
        assert x * (y + z) == x * y + x * z
