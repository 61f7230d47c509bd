import random

import mpmath
import pytest
from hypothesis import given, settings, strategies as st

from binic.errors import DegenerateForm
from binic.forms import BinaryForm, discriminant, leading_normalize, sl2_act
from binic.julia import julia_theta, reduce_form, roots

from strategies import forms, random_form, sl2

REL = mpmath.mpf("1e-8")


def F(*c):
    return BinaryForm(c)


def rel(a, b):
    return abs(a - b) / abs(b)


def test_roots_of_unity():
    rts, _ = roots(F(1, 0, 0, -1))
    assert len(rts) == 3
    for z in rts:
        assert abs(z ** 3 - 1) < mpmath.mpf("1e-30")
    assert abs(rts[0] - mpmath.mpc(-0.5, -mpmath.sqrt(3) / 2)) < 1e-15


def test_real_roots_sorted():
    rts, _ = roots(F(1, 0, -1, 0))
    assert [mpmath.nint(z.real) for z in rts] == [-1, 0, 1]


def test_quintic_residual():
    rng = random.Random(4)
    for _ in range(5):
        f = random_form(rng, 5, 20)
        if f[0] == 0 or discriminant(f) == 0:
            continue
        with mpmath.workprec(128):
            for z in roots(f)[0]:
                assert abs(mpmath.polyval(list(f.coeffs), z)) < mpmath.mpf("1e-20")


def test_degenerate():
    with pytest.raises(DegenerateForm):
        julia_theta(F(1, -1, -1, 1))


def test_result_invariants():
    res = julia_theta(F(1, 2, -3, 1))
    with mpmath.workprec(128):
        assert rel(res.J ** 2, res.theta) < mpmath.mpf("1e-30")
    a, b, c = res.Q_t
    assert a > 0 and 4 * a * c - b * b > 0
    assert res.residual < mpmath.mpf("1e-12")


@settings(max_examples=25)
@given(st.sampled_from([3, 5]).flatmap(lambda n: forms(n, 12, nondegenerate=True)), sl2(5))
def test_sl2_invariance(f, g):
    assert rel(julia_theta(sl2_act(g, f)).J, julia_theta(f).J) < REL


@settings(max_examples=20)
@given(forms(3, 12, nondegenerate=True), st.integers(2, 9))
def test_homogeneity(f, lam):
    assert rel(julia_theta(f.scale(lam)).theta, lam ** 2 * julia_theta(f).theta) < mpmath.mpf("1e-9")


def test_cubic_theta_squared_over_disc():
    rng = random.Random(9)
    seen = set()
    while len(seen) < 2 or rng.random() < 0.9:
        f = random_form(rng, 3, 15)
        d = discriminant(f)
        if d == 0:
            continue
        seen.add(d > 0)
        theta = julia_theta(f).theta
        with mpmath.workprec(128):
            assert rel(theta ** 2 / abs(d), mpmath.mpf(1728)) < mpmath.mpf("1e-20")


def objective(f, logw):
    _, g = leading_normalize(f)
    rts, _ = roots(g)
    w = [mpmath.exp(x) for x in logw]
    S0 = mpmath.fsum(w)
    S1 = mpmath.fsum(a * z.real for a, z in zip(w, rts))
    S2 = mpmath.fsum(a * abs(z) ** 2 for a, z in zip(w, rts))
    disc_q = 4 * (S0 * S2 - S1 * S1)
    n = g.degree
    return g[0] ** 2 * disc_q ** (mpmath.mpf(n) / 2) / mpmath.fprod(w)


def test_minimum_not_beaten_by_random_weights():
    rng = random.Random(2)
    for f in (F(1, 2, -3, 1), F(2, -1, 0, 3, 1, -1), F(1, 0, 0, 0, 0, 1)):
        res = julia_theta(f)
        _, g = leading_normalize(f)
        rts, _ = roots(g)
        for _ in range(10):
            u = [rng.uniform(-2, 2) for _ in rts]
            # conjugate roots share a weight at the optimum, but any weight is admissible
            assert objective(f, u) >= res.theta * (1 - mpmath.mpf("1e-12"))


def test_reduce_fixes_reduced_output():
    _, h = reduce_form(F(3, 11, -7, 5))
    g, again = reduce_form(h)
    assert g.tolist() == [[1, 0], [0, 1]] and again == h


@settings(max_examples=12)
@given(forms(3, 10, nondegenerate=True), sl2(4))
def test_reduce_representatives(f, g):
    _, a = reduce_form(f)
    _, b = reduce_form(sl2_act(g, f))
    assert rel(julia_theta(a).J, julia_theta(b).J) < REL
    _, again = reduce_form(a)
    assert again == a
