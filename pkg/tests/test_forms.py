import itertools
from math import gcd

import numpy as np
import pytest
from hypothesis import given, strategies as st

from binic.errors import DegenerateForm, ZeroForm
from binic.forms import (BinaryForm, FamilySpec, Unimodular2, discriminant, enumerate_forms,
                         factor_over_Q, has_squarefree_disc, height, in_Wp, is_irreducible,
                         is_primitive, is_sn_certified, leading_normalize, multiply_forms,
                         shard_ranges, signature, sl2_act)

from strategies import forms, sl2


def F(*c):
    return BinaryForm(c)


def test_height():
    assert height(F(1, 0, 0, -1)) == 1
    assert height(F(2, 7, 0, -5)) == 7
    assert height(F(0, 0, 0, 0)) == 0


def test_discriminant_values():
    assert discriminant(F(1, 0, 0, 1)) == -27
    assert discriminant(F(1, -1, -1, 1)) == 0          # (x - y)^2 (x + y)
    assert discriminant(F(1, 0, -1, -1)) == -23
    assert discriminant(F(1, 0, -3, 1)) == 81


def test_discriminant_zero_form():
    with pytest.raises(ZeroForm):
        discriminant(F(0, 0, 0, 0))


def test_discriminant_leading_zero_uses_translate():
    f = F(0, 1, 2, -3)
    g = sl2_act(Unimodular2(((1, 2), (0, 1))), f)
    assert g[0] != 0
    assert discriminant(f) == discriminant(g)


def test_quintic_discriminant_against_resultant():
    # x^5 + y^5: Res(x^5 + 1, 5x^4) = 5^5 and the sign (-1)^(5*4/2) = 1
    assert discriminant(F(1, 0, 0, 0, 0, 1)) == 5 ** 5


def test_sl2_swap():
    assert sl2_act(((0, 1), (-1, 0)), F(1, 0, 0, 0)) == F(0, 0, 0, -1)


def test_sl2_identity():
    f = F(3, -1, 4, 1)
    assert sl2_act(((1, 0), (0, 1)), f) == f


@given(forms(), sl2(), sl2())
def test_sl2_composition_order(f, g, h):
    assert sl2_act(g @ h, f) == sl2_act(g, sl2_act(h, f))


@given(forms(), sl2())
def test_invariants_under_sl2(f, g):
    g_f = sl2_act(g, f)
    assert discriminant(g_f) == discriminant(f)
    assert is_primitive(g_f) == is_primitive(f)
    if discriminant(f):
        assert signature(g_f) == signature(f)


def test_height_not_invariant():
    f = F(1, 0, 0, 1)
    assert height(sl2_act(((1, 3), (0, 1)), f)) != height(f)


def test_primitive():
    assert is_primitive(F(1, 0, 0, -1))
    assert not is_primitive(F(2, 0, 0, 4))
    assert is_primitive(F(6, 10, 0, 15))


def test_factor_examples():
    c, fac = factor_over_Q(F(1, 0, 0, -1))
    assert c == 1 and fac == [(F(1, -1), 1), (F(1, 1, 1), 1)]
    c, fac = factor_over_Q(F(0, 1, 1, 0))
    assert c == 1
    assert sorted(g.coeffs for g, _ in fac) == [(0, 1), (1, 0), (1, 1)]
    c, fac = factor_over_Q(F(1, 1, 2, 1))                   # irreducible mod 2
    assert fac == [(F(1, 1, 2, 1), 1)]


@given(forms(bound=12))
def test_factorization_multiplies_back(f):
    c, fac = factor_over_Q(f)
    g = multiply_forms([h for h, e in fac for _ in range(e)]).scale(c)
    assert g == f
    repeated = any(e > 1 for _, e in fac)
    assert repeated == (discriminant(f) == 0)


def test_signature_examples():
    assert signature(F(1, 0, -1, 0)) == (3, 0)
    assert signature(F(1, 0, 0, 1)) == (1, 1)
    assert signature(F(1, 0, 0, 0, 0, 1)) == (1, 2)
    assert signature(F(0, 1, 0, -1)) == (3, 0)              # root at infinity is real
    with pytest.raises(DegenerateForm):
        signature(F(1, -1, -1, 1))


@given(st.sampled_from([3, 5]).flatmap(lambda n: forms(n, 30, nondegenerate=True)))
def test_signature_matches_float_roots(f):
    r1, r2 = signature(f)
    assert r1 + 2 * r2 == f.degree
    _, g = leading_normalize(f)
    roots = np.roots([float(c) for c in g.coeffs])
    real = sum(1 for z in roots if abs(z.imag) < 1e-7 * max(1, abs(z)))
    assert real == r1


def test_sn_certified():
    assert is_sn_certified(F(1, 0, -1, -1)) == "yes"
    assert is_sn_certified(F(1, 0, -3, 1)) == "unknown"
    assert is_sn_certified(F(1, 0, -1, -1), bound=0) == "unknown"


def test_squarefree_and_wp():
    assert has_squarefree_disc(F(1, 0, -1, -1)) == "yes"
    assert in_Wp(F(1, 0, -3, 1), 3)
    g = next(g for g in itertools.product(range(-3, 4), repeat=4)
             if any(g) and discriminant(g) == -104)
    assert in_Wp(g, 2) and has_squarefree_disc(g) == "no"


def test_enumerate_box():
    spec = FamilySpec(degree=3)
    assert enumerate_forms(1, spec, lambda f: None) == 81
    assert enumerate_forms(2, spec, lambda f: None) == 5 ** 4


def test_enumerate_primitive_matches_gcd_census():
    spec = FamilySpec(degree=3, primitive=True)
    brute = sum(1 for c in itertools.product(range(-1, 2), repeat=4)
                if any(c) and gcd(*c) == 1)
    assert enumerate_forms(1, spec, lambda f: None) == brute


def test_enumerate_local_condition():
    allowed = frozenset({(1, 0, 0, 0)})
    spec = FamilySpec(degree=3, local_conditions=((2, 1, allowed),))
    seen = enumerate_forms(2, spec)
    assert seen and all(tuple(c % 2 for c in f.coeffs) == (1, 0, 0, 0) for f in seen)


def test_shards_partition_the_box():
    spec = FamilySpec(degree=3)
    whole = enumerate_forms(2, spec)
    parts = [f for lo, hi in shard_ranges(2, 3) for f in enumerate_forms(2, spec, f0_range=(lo, hi))]
    assert parts == whole
    assert len(set(whole)) == len(whole)


def test_family_spec_round_trip():
    spec = FamilySpec(degree=3, signature=(1, 1), squarefree_disc=True,
                      local_conditions=((2, 1, frozenset({(1, 0, 0, 0), (1, 1, 1, 1)})),))
    assert FamilySpec.loads(spec.dumps()) == spec


def test_form_text():
    f = F(2, -7, 0, 5)
    assert str(f) == "[2,-7,0,5]"
    assert BinaryForm.parse(str(f)) == f
    with pytest.raises(ValueError):
        BinaryForm.parse("2,-7,0,5")


def test_irreducible():
    assert is_irreducible(F(1, 0, -1, -1))
    assert not is_irreducible(F(1, 0, 0, -1))
