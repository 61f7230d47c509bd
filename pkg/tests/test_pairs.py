import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import assume, given, strategies as st

from binic import linalg
from binic.arith import is_square_rational
from binic.errors import DegenerateInput, IncompatibleForms, IndexOutOfRange
from binic.forms import BinaryForm, Unimodular2, sl2_act
from binic.pairs import (SymPair, act_g, act_sln, binomial_identity, charpoly_identity, compose,
                         d_matrix, equivalent, ideal_to_pair, identity_class, is_projective,
                         is_reducible, pair_to_ideal, resolvent, section_e, star)
from binic.rings import is_square

from strategies import (correspondence_ready, forms, random_form, random_sln,
                        reducible_pattern_pairs, sl2)


def F(*c):
    return BinaryForm(c)


def test_section_cubic_display():
    f0, f1, f2, f3 = 2, 3, 5, 7
    p = section_e(F(f0, f1, f2, f3))
    assert [list(r) for r in p.A] == [[0, 0, 1], [0, -f0, 0], [1, 0, -f2]]
    assert [list(r) for r in p.B] == [[0, 1, 0], [1, f1, 0], [0, 0, f3]]


def test_section_quintic_display():
    f = (2, 3, 5, 7, 11, 13)
    p = section_e(F(*f))
    assert [list(r) for r in p.A] == [[0, 0, 0, 0, 1], [0, 0, 0, 1, 0], [0, 0, f[0], 0, 0],
                                      [0, 1, 0, f[2], 0], [1, 0, 0, 0, f[4]]]
    assert [list(r) for r in p.B] == [[0, 0, 0, 1, 0], [0, 0, 1, 0, 0], [0, 1, -f[1], 0, 0],
                                      [1, 0, 0, -f[3], 0], [0, 0, 0, 0, -f[5]]]


@given(st.sampled_from([3, 5, 7, 9]).flatmap(lambda n: forms(n, 50)))
def test_section_resolvent(f):
    assert resolvent(section_e(f)) == f


def test_resolvent_of_identity():
    p = SymPair(3, [[1, 0, 0], [0, 1, 0], [0, 0, 1]], [[0] * 3] * 3)
    assert resolvent(p) == F(1, 0, 0, 0)


def pairs_n(n, bound=4):
    entries = st.lists(st.integers(-bound, bound), min_size=n * (n + 1), max_size=n * (n + 1))

    def build(v):
        A = [[0] * n for _ in range(n)]
        B = [[0] * n for _ in range(n)]
        it = iter(v)
        for M in (A, B):
            for i in range(n):
                for j in range(i, n):
                    M[i][j] = M[j][i] = next(it)
        return SymPair(n, A, B)

    return entries.map(build)


@given(st.sampled_from([3, 5]).flatmap(pairs_n))
def test_det_a_and_det_b(p):
    f = resolvent(p)
    assert linalg.det([list(r) for r in p.A]) == f[0]
    assert linalg.det([list(r) for r in p.B]) == -f[p.n]      # odd n: det(-B) = -det B


@given(st.sampled_from([3, 5]).flatmap(pairs_n), sl2(3), st.randoms(use_true_random=False))
def test_resolvent_equivariance(p, g2, rnd):
    gn = random_sln(rnd, p.n)
    q = act_g(g2, gn, p)
    assert resolvent(q) == sl2_act(star(g2), resolvent(p))


def test_identity_action():
    p = section_e(F(2, -1, 3, 5))
    assert act_g(Unimodular2(((1, 0), (0, 1))), linalg.identity(3), p) == p


def test_text_round_trip():
    p = section_e(F(2, -1, 3, 5))
    assert SymPair.loads(p.dumps()) == p
    assert p.dumps().splitlines()[0] == "3"


def good_pairs(rng, n, count):
    out = []
    while len(out) < count:
        f = random_form(rng, n, 10)
        if correspondence_ready(f):
            out.append(act_sln(random_sln(rng, n), section_e(f)))
    return out


@pytest.mark.parametrize("n,count", [(3, 60), (5, 10)])
def test_round_trip(n, count):
    for p in good_pairs(random.Random(n), n, count):
        assert ideal_to_pair(pair_to_ideal(p)) == p


def test_section_gives_trivial_delta():
    p = section_e(F(2, -1, 3, 5))
    ic = pair_to_ideal(p)
    assert ic.delta == ic.ring.one()
    assert is_reducible(p)


def test_theta_acts_by_a_inverse_b():
    for p in good_pairs(random.Random(7), 3, 20):
        ic = pair_to_ideal(p, check=False)
        ring = ic.ring
        A = [[Fraction(x) for x in r] for r in p.A]
        M = linalg.mat_mul(linalg.inverse(A), [list(r) for r in p.B])
        al = ic.I.elements()
        theta = ring.theta_power(1)
        for j in range(3):
            rhs = sum((al[i] * M[i][j] for i in range(3)), ring.element([0, 0, 0]))
            assert theta * al[j] == rhs


def test_change_of_basis():
    rng = random.Random(11)
    for p in good_pairs(rng, 3, 10) + good_pairs(rng, 5, 3):
        ic = pair_to_ideal(p)
        g = random_sln(rng, p.n)
        basis = linalg.mat_mul(g, [list(r) for r in ic.I.basis])
        assert ideal_to_pair(ic, basis) == act_sln(g, p)


def test_sln_translate_gives_equivalent_class():
    rng = random.Random(12)
    for p in good_pairs(rng, 3, 10):
        a = pair_to_ideal(p)
        b = pair_to_ideal(act_sln(random_sln(rng, 3), p))
        k = equivalent(a, b)
        assert k is not None
        assert a.I.scale(k).same_module(b.I) and b.delta == a.delta * k * k


def test_degenerate_resolvent_rejected():
    with pytest.raises(DegenerateInput):
        pair_to_ideal(section_e(F(1, 0, 0, 0)))
    with pytest.raises(DegenerateInput):
        pair_to_ideal(section_e(F(2, 0, 2, 4)))             # imprimitive


def test_pattern_pairs_reducible_and_square_d11():
    rng = random.Random(5)
    for n in (3, 5):
        for p in reducible_pattern_pairs(rng, n, 15):
            assert is_reducible(p)
            assert charpoly_identity(p)
            D = d_matrix(p)
            assert all(is_square_rational(D.quotient_value(0, 0, m)) for m in range(-10, 11))


def test_d11_coefficients():
    rng = random.Random(6)
    for n in (3, 5):
        for p in reducible_pattern_pairs(rng, n, 5) + good_pairs(rng, n, 5):
            f = resolvent(p)
            A = [[Fraction(x) for x in r] for r in p.A]
            B = [[Fraction(x) for x in r] for r in p.B]
            D = d_matrix(p).entry_poly(0, 0)
            AB = linalg.mat_mul(linalg.mat_mul(A, linalg.inverse(B)), A)
            BA = linalg.mat_mul(linalg.mat_mul(B, linalg.inverse(A)), B)
            assert D[0] == -f[n] * AB[0][0]
            # theta^(n-3): f0 (B A^-1 B)_11 plus terms that vanish when a11 = b11 = 0
            assert D[n - 3] == f[0] * BA[0][0] + f[1] * B[0][0] + f[2] * A[0][0]


@given(st.sampled_from([3, 5]).flatmap(pairs_n))
def test_charpoly_identity(p):
    assume(linalg.det([list(r) for r in p.A]) != 0 and linalg.det([list(r) for r in p.B]) != 0)
    assert charpoly_identity(p)


def test_charpoly_identity_on_sections():
    assert charpoly_identity(section_e(F(2, -1, 3, 5)))
    assert charpoly_identity(section_e(F(1, 2, 0, -1, 3, 7)))


def test_binomial_identity():
    assert binomial_identity(3, 0, 0) == 1
    for n in range(3, 16):
        for i in range(n):
            for j in range(n - i):
                assert binomial_identity(n, i, j) == (-1) ** (n + 1)
    with pytest.raises(IndexOutOfRange):
        binomial_identity(3, 2, 2)


def test_composition():
    rng = random.Random(8)
    f = F(1, 0, -1, -1)                                   # |Cl| = 1 but many pairs
    pairs = [act_sln(random_sln(rng, 3), section_e(f)) for _ in range(3)]
    x, y, z = (pair_to_ideal(p) for p in pairs)
    e = identity_class(x.ring)
    assert equivalent(compose(x, e), x) is not None
    xx = compose(x, x)
    assert is_square(xx.delta).status == "yes"
    left, right = compose(compose(x, y), z), compose(x, compose(y, z))
    assert left.I.same_module(right.I) and left.delta == right.delta


def test_compose_different_forms():
    a = pair_to_ideal(section_e(F(1, 0, -1, -1)))
    b = pair_to_ideal(section_e(F(2, -1, 3, 5)))
    with pytest.raises(IncompatibleForms):
        compose(a, b)


def test_projective():
    ic = pair_to_ideal(section_e(F(2, -1, 3, 5)))
    assert is_projective(ic)
    assert is_projective(identity_class(ic.ring))
