"""Form profiles: towers, kernel levels, validation."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from quadmot import forms, mdt
from quadmot.forms import (FormProfile, build_tower, kn_kernel_index,
                           validate)


class TestTower:
    def test_dims_example(self):
        p = FormProfile(12, (2, 1, 3))
        tower = build_tower(p)
        assert tower.anisotropic_dims() == [12, 8, 6, 0]
        assert [lvl[0] for lvl in tower.levels] == ["K0", "K1", "K2", "K3"]
        assert tower.levels[1][2] == (1, 3)

    def test_split_form_single_level(self):
        tower = build_tower(FormProfile(1, ()))
        assert tower.anisotropic_dims() == [1]

    def test_pfister_shape(self):
        for n in (1, 2, 3):
            p = FormProfile(2 ** (n + 1), (2 ** n,), i_power=n + 1)
            assert build_tower(p).anisotropic_dims() == [2 ** (n + 1), 0]

    def test_bad_pattern_raises(self):
        with pytest.raises(ValueError):
            build_tower(FormProfile(6, (2, 2)))


class TestKernelIndex:
    def test_example(self):
        p = FormProfile(12, (2, 1, 3))
        assert kn_kernel_index(p, 2) == (1, 8)

    def test_small_form_level_zero(self):
        assert kn_kernel_index(FormProfile(7, (1, 2)), 2) == (0, 7)

    def test_hole(self):
        assert kn_kernel_index(FormProfile(10, (1, 4)), 2) == (1, 8)

    def test_monotone_in_height(self):
        p = FormProfile(20, (2, 2, 1, 5))
        levels = [kn_kernel_index(p, n)[0] for n in (1, 2, 3)]
        assert levels == sorted(levels, reverse=True)


class TestValidate:
    def test_consistent_pfister(self):
        p = FormProfile(8, (4,), {2: 0}, disc_trivial=True, i_power=3,
                        symbols={2: "a"})
        assert validate(p) == []

    def test_arason_pfister(self):
        p = FormProfile(6, (1, 2), i_power=3)
        assert any("I^3" in msg for msg in validate(p))

    def test_kahn_parity(self):
        p = FormProfile(8, (4,), {2: 3}, symbols={2: "a"})
        assert any("parity" in msg for msg in validate(p))

    def test_symbol_required_below_bound(self):
        p = FormProfile(7, (1, 2), {2: 3})
        assert any("symbol" in msg for msg in validate(p))

    def test_kernel6_pattern_precondition(self):
        base = dict(dim=14, kahn_dims={2: 6})
        bad = FormProfile(splitting_pattern=(4, 3), **base)
        assert any("(1, ...)" in msg for msg in validate(bad))
        good = FormProfile(splitting_pattern=(4, 1, 2), **base)
        assert validate(good) == []

    def test_kernel8_pattern_precondition(self):
        bad = FormProfile(16, (4, 2, 2), {2: 6})
        assert any("(1, 1, ...)" in msg for msg in validate(bad))
        good = FormProfile(16, (4, 1, 1, 2), {2: 6})
        assert validate(good) == []

    def test_dim4_needs_dim1(self):
        p = FormProfile(8, (1, 3), {2: 4}, symbols={2: "a"})
        assert any("n=1" in msg for msg in validate(p))


@st.composite
def valid_profiles(draw):
    dim = draw(st.integers(min_value=4, max_value=24))
    pattern = []
    rest = dim
    while rest > 1:
        i = draw(st.integers(1, max(1, rest // 2)))
        i = min(i, rest // 2)
        pattern.append(i)
        rest -= 2 * i
    parity = dim % 2
    choices = [k for k in range(parity, 9, 2) if k <= min(dim, 8)]
    dim2 = draw(st.sampled_from(choices))
    kahn = {2: dim2}
    symbols = {}
    if dim2 <= 4:
        symbols[2] = "a"
    if dim % 2 == 0 and dim2 == 4:
        kahn[1] = draw(st.sampled_from([0, 2]))
        symbols[1] = "c"
    return FormProfile(dim, tuple(pattern), kahn, symbols=symbols)


class TestValidProfilesClassify:
    @settings(max_examples=120, deadline=None)
    @given(valid_profiles())
    def test_accepted_profiles_classify(self, profile):
        issues = validate(profile)
        if issues:
            return  # the strategy can hit the kernel-pattern preconditions
        result = mdt.classify_k2(profile)
        assert result.diagram.components
        assert result.expr.rank() >= 1

    def test_consistency_predicate(self):
        assert forms.kernel_kahn_consistent(3, 2)
        assert not forms.kernel_kahn_consistent(4, 2)
