import itertools
import random
from fractions import Fraction

import pytest

from binic.errors import FormVanishesModP, InseparableType, PrecisionTooLow
from binic.forms import BinaryForm
from binic.modp import (FactorType, PairSpace, archimedean_counts, archimedean_mass, brute_orbits,
                        brute_unit_counts, census, delta_label, factor_type, isotropic_search_modp,
                        local_mass, predicted_orbit_count, predicted_stab, sl_order, strata_census)
from binic.pairs import resolvent, section_e

from strategies import reducible_pattern_pairs


def F(*c):
    return BinaryForm(c)


def test_factor_types():
    assert factor_type(F(1, 0, 0, -1), 7).factors == ((1, 1), (1, 1), (1, 1))
    assert factor_type(F(1, 0, -1, -1), 2).factors == ((3, 1),)
    ft = factor_type(F(1, 0, -1, -1), 23)                # 23 divides the discriminant
    assert not ft.separable
    with pytest.raises(FormVanishesModP):
        factor_type(F(3, 6, 0, 9), 3)
    assert factor_type(F(0, 1, 0, 1), 5).degree == 3     # root at infinity counts


def test_inseparable_prediction_rejected():
    with pytest.raises(InseparableType):
        predicted_orbit_count(FactorType(((1, 2), (1, 1)), False), 3)


def partitions(n):
    if n == 0:
        yield ()
        return
    for first in range(1, n + 1):
        for rest in partitions(n - first):
            if not rest or first <= rest[0]:
                yield (first,) + rest


@pytest.mark.parametrize("p", [2, 3, 5, 7])
@pytest.mark.parametrize("n", [3, 5])
def test_predictions_match_unit_counts(n, p):
    for degs in partitions(n):
        ft = FactorType(tuple((d, 1) for d in degs), True)
        assert (predicted_orbit_count(ft, p), predicted_stab(ft, p)) == brute_unit_counts(ft, p)


def test_split_cubic_by_hand():
    # R = F_p^3, p odd: unit triples mod squares with square norm
    p = 5
    sq = {x * x % p for x in range(1, p)}
    classes = {tuple(x in sq for x in t) for t in itertools.product(range(1, p), repeat=3)}
    expected = sum(1 for c in classes if sum(not s for s in c) % 2 == 0)
    ft = FactorType(((1, 1), (1, 1), (1, 1)), True)
    assert predicted_orbit_count(ft, p) == expected == 4
    assert predicted_stab(ft, p) == 4


def test_p2_single_orbit():
    for degs in partitions(5):
        assert predicted_orbit_count(FactorType(tuple((d, 1) for d in degs), True), 2) == 1


def test_archimedean_counts():
    for n in (3, 5, 7):
        for r2 in range((n - 1) // 2 + 1):
            r1 = n - 2 * r2
            assert archimedean_counts(r1, r2) == (2 ** (r1 - 1), 2 ** (r1 + r2 - 1))


def test_census_small_prime():
    reports = census(3, 2, mode="exhaustive")
    G = sl_order(3, 2)
    for r in reports:
        assert r.matches()
        assert r.fiber_size == sum(size for size, _, _ in r.orbits)
        assert all(size * stab == G for size, stab, _ in r.orbits)


def test_closure_mode_at_five():
    r = brute_orbits(F(1, 0, -1, -1), 5, mode="closure")
    assert r.matches() and not r.exhaustive
    assert r.fiber_size == sum(G // s for G, s in [(sl_order(3, 5), st) for _, st, _ in r.orbits])


def test_section_label_trivial():
    for f in (F(1, 0, -1, -1), F(2, 1, 1, 1), F(1, 2, 0, 1)):
        label = delta_label(section_e(f), 3)
        assert set(label) == {"+"}


def test_strata_census():
    s = strata_census(3)
    assert s["total"] == 3 ** 12
    assert all(v > 0 for v in s["eq"].values())
    assert sum(s["eq"].values()) <= s["total"]
    assert 0 < s["irr"] < s["total"] and 0 < s["nostab"] < s["total"]
    assert s["ratios"]["irr"] == Fraction(s["irr"], s["total"])


def test_isotropic_matches_label():
    rng = random.Random(0)
    space = PairSpace(3, 3)
    seen = set()
    for _ in range(400):
        pair = space.decode_pair(rng.randrange(space.size))
        fm = BinaryForm(tuple(c % 3 for c in resolvent(pair).coeffs))
        if fm.is_zero() or not factor_type(fm, 3).separable:
            continue
        trivial = set(delta_label(pair, 3)) == {"+"}
        assert isotropic_search_modp(pair, 3) == trivial
        seen.add(trivial)
    assert seen == {True, False}


def test_isotropic_for_block_pattern():
    for p in reducible_pattern_pairs(random.Random(1), 3, 5):
        assert isotropic_search_modp(p, 3)


@pytest.mark.parametrize("f", [F(1, 0, -1, -1), F(2, -1, 3, 5), F(1, 1, -2, -1), F(3, 1, 4, -2)])
def test_local_mass_cubic(f):
    assert local_mass(f, 2).value == 4
    for p in (3, 5, 7):
        assert local_mass(f, p).value == 1


def test_local_mass_quintic():
    f = F(2, 1, -3, 0, 4, 5)
    assert local_mass(f, 2).value == 16
    assert local_mass(f, 3).value == 1


def test_local_mass_precision_guard():
    with pytest.raises(PrecisionTooLow):
        local_mass(F(1, 0, -1, -1), 2, k=2)


def test_archimedean_mass():
    for n in (3, 5):
        for r2 in range((n - 1) // 2 + 1):
            r1 = n - 2 * r2
            m, tau, sigma = archimedean_mass(r1, r2)
            assert m.value == Fraction(1, 2 ** r2)
            assert tau == 2 ** (r1 - 1) and sigma == 2 ** (r1 + r2 - 1)
            assert sigma * m.value == tau
            # product over places with m_2 = 2^(n-1), m_p = 1 otherwise
            assert Fraction(1, sigma) * 2 ** (n - 1) == 2 ** r2
