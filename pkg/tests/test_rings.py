import itertools
from fractions import Fraction

import pytest
from hypothesis import assume, given, strategies as st

from binic.errors import IndexOutOfRange, NonInvertible, ZeroForm
from binic.forms import BinaryForm, discriminant, is_primitive, leading_normalize
from binic.rings import (BasedIdeal, build_ring, dual_eval, ideal_inverse, ideal_power, is_maximal_at, is_square, maximal_order,
                         mult_ideals, ring_as_order, span_ideal)

from strategies import forms


def F(*c):
    return BinaryForm(c)


def ring_of(f):
    return build_ring(f)


primitive_forms = st.sampled_from([3, 5]).flatmap(lambda n: forms(n, 15, nondegenerate=True))


def test_identity_row():
    ring = ring_of(F(2, -3, 5, 7))
    for j in range(3):
        assert ring.table[0][j] == [1 if k == j else 0 for k in range(3)]


def test_trace_disc_x3_plus_y3():
    assert ring_of(F(1, 0, 0, 1)).disc == -27


@given(primitive_forms)
def test_table_integral_and_disc(f):
    ring = ring_of(f)
    n = ring.n
    assert all(isinstance(c, int) for row in ring.table for cell in row for c in cell)
    assert ring.disc == discriminant(f)
    for i, j in itertools.product(range(n), repeat=2):
        assert ring.table[i][j] == ring.table[j][i]


@given(forms(3, 10, nondegenerate=True))
def test_table_associative(f):
    ring = ring_of(f)
    n = ring.n
    T = ring.table

    def mul(u, v):
        out = [0] * n
        for i, a in enumerate(u):
            for j, b in enumerate(v):
                if a and b:
                    for k in range(n):
                        out[k] += a * b * T[i][j][k]
        return out

    e = [[int(i == k) for k in range(n)] for i in range(n)]
    for i, j, k in itertools.product(range(n), repeat=3):
        assert mul(mul(e[i], e[j]), e[k]) == mul(e[i], mul(e[j], e[k]))


def test_zero_form_rejected():
    with pytest.raises(ZeroForm):
        build_ring(F(0, 0, 0, 0))


def test_leading_normalize():
    g, h = leading_normalize(F(3, 1, 0, 2))
    assert g.tolist() == [[1, 0], [0, 1]] and h == F(3, 1, 0, 2)
    g, h = leading_normalize(F(0, 0, 0, 1))
    assert h.coeffs[0] in (1, -1) and h.coeffs[1:] == (0, 0, 0)
    f = F(0, 1, -1, 0)                                   # xy(x - y)
    g, h = leading_normalize(f)
    assert h[0] != 0
    assert h[0] == f(*g.tolist()[0])


def test_ideal_power_bases():
    ring = ring_of(F(2, -1, 3, 5))
    assert ideal_power(ring, 0).basis == tuple(tuple(r) for r in ring.zeta)
    I1 = ideal_power(ring, 1)
    assert I1.basis[:2] == ((1, 0, 0), (0, 1, 0))
    assert I1.basis[2] == tuple(ring.zeta[2])
    with pytest.raises(IndexOutOfRange):
        ideal_power(ring, 3)


def test_half_power_quintic():
    ring = ring_of(F(3, 1, -2, 0, 4, 1))
    I = ideal_power(ring, 1)
    assert [list(r) for r in I.basis[:2]] == [[1, 0, 0, 0, 0], [0, 1, 0, 0, 0]]
    assert [list(r) for r in I.basis[2:]] == [list(z) for z in ring.zeta[2:]]


@given(primitive_forms)
def test_ideal_powers_closed(f):
    ring = ring_of(f)
    for k in range(ring.n):
        assert ideal_power(ring, k).is_ideal()


@given(forms(3, 12, nondegenerate=True))
def test_if_squared_is_if2(f):
    assume(is_primitive(f))
    ring = ring_of(f)
    I = ideal_power(ring, 1)
    assert mult_ideals(I, I).same_module(ideal_power(ring, 2))


def test_mult_by_unit_ideal():
    ring = ring_of(F(2, -1, 3, 5))
    I = ideal_power(ring, 1)
    assert mult_ideals(I, ring.unit_ideal()).same_module(I)


MAXIMAL_CUBICS = [F(1, 0, -1, -1), F(1, 1, -2, -1), F(1, 0, -4, 1), F(1, -1, 3, -2)]


@given(st.sampled_from(MAXIMAL_CUBICS),
       st.lists(st.integers(-6, 6), min_size=6, max_size=6),
       st.lists(st.integers(-6, 6), min_size=6, max_size=6))
def test_norm_multiplicative_in_maximal_order(f, u, v):
    ring = ring_of(f)
    assert maximal_order(ring).index_in(ring_as_order(ring)) == 1

    def ideal(c):
        a, b = ring.element(c[:3]), ring.element(c[3:])
        assume(a.norm() != 0 and b.norm() != 0)
        gens = [(x * ring.zeta_element(k)).coords for x in (a, b) for k in range(3)]
        return span_ideal(ring, gens)

    I, J = ideal(u), ideal(v)
    assert mult_ideals(I, J).norm == I.norm * J.norm
    assert mult_ideals(I, ideal_inverse(I)).same_module(ring.unit_ideal())


def test_dual_functionals():
    ring = ring_of(F(2, -1, 3, 5))
    n = ring.n
    for k in range(n):
        assert dual_eval(ring, "zeta", ring.zeta_element(k)) == (1 if k == n - 1 else 0)
        for j in range(n):
            assert dual_eval(ring, k, ring.theta_power(j)) == (1 if j == k else 0)


@given(primitive_forms, st.data())
def test_dual_identity(f, data):
    ring = ring_of(f)
    n = ring.n
    g = ring.form
    r = ring.element(data.draw(st.lists(st.integers(-9, 9), min_size=n, max_size=n)))
    k = data.draw(st.integers(0, n - 2))
    lhs = dual_eval(ring, k, r)
    rhs = dual_eval(ring, "zeta", ring.zeta_element(n - 1 - k) * r) + g[n - 1 - k] * dual_eval(ring, "zeta", r)
    assert lhs == rhs


def test_maximality():
    assert is_maximal_at(F(1, 0, -1, -1), 23)
    assert is_maximal_at(F(1, 0, -3, 1), 3)             # disc 81 is the field discriminant
    assert not is_maximal_at(F(1, 0, 0, -12), 2)        # Z[cbrt 12] has index 2
    assert is_maximal_at(F(1, 0, 0, -12), 3)
    ring = ring_of(F(1, 0, 0, -12))
    assert ring_as_order(ring).index_in(maximal_order(ring)) == 2


def test_thickened_form_not_maximal():
    # x^3 - 54 y^3 is x^3 - 2 y^3 with y -> 3y: Z[3 cbrt 2] has index 27 in Z[cbrt 2]
    assert is_maximal_at(F(1, 0, 0, -2), 3)
    assert not is_maximal_at(F(1, 0, 0, -54), 3)


def test_norm_of_theta():
    for f in (F(2, -1, 3, 5), F(3, 1, -2, 0, 4, 1)):
        ring = ring_of(f)
        n = ring.n
        assert ring.theta_power(1).norm() == Fraction((-1) ** n * f[n], f[0])


def test_squares():
    ring = ring_of(F(1, 0, -1, -1))
    t = is_square(ring.one())
    assert t.status == "yes" and t.root * t.root == ring.one()
    with pytest.raises(NonInvertible):
        is_square(ring.element([0, 0, 0]))


@given(st.sampled_from(MAXIMAL_CUBICS + [F(3, 1, -2, 0, 4, 1)]), st.data())
def test_square_of_element(f, data):
    ring = ring_of(f)
    e = ring.element(data.draw(st.lists(st.integers(-8, 8), min_size=ring.n, max_size=ring.n)))
    assume(e.norm() != 0)
    t = is_square(e * e)
    assert t.status == "yes" and t.root * t.root == e * e


def test_nonsquare_witness_agrees_with_search():
    ring = ring_of(F(1, 0, -1, -1))
    squares = {tuple((ring.element(c) * ring.element(c)).coords)
               for c in itertools.product(range(-3, 4), repeat=3)}
    for c in itertools.product(range(-2, 3), repeat=3):
        e = ring.element(c)
        if e.norm() == 0:
            continue
        t = is_square(e)
        if t.status == "no":
            assert tuple(e.coords) not in squares
        if tuple(e.coords) in squares:
            assert t.status == "yes"


def test_based_ideal_text_round_trip():
    ring = ring_of(F(2, -1, 3, 5))
    I = ideal_power(ring, 1)
    J = BasedIdeal.loads(ring, I.dumps())
    assert J.basis == I.basis
