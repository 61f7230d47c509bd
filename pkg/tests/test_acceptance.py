import random
import time
from fractions import Fraction

import mpmath
import pytest

from binic.errors import DegenerateForm
from binic.forms import BinaryForm, Unimodular2, discriminant, sl2_act
from binic.harness.averages import avg_campaign
from binic.harness.density import density_campaign
from binic.harness.weights import cusp_check
from binic.julia import julia_theta
from binic.modp import census, local_mass, sl_order
from binic.pairs import (binomial_identity, charpoly_identity, d_matrix, ideal_to_pair,
                         is_reducible, pair_to_ideal, resolvent, section_e)
from binic.arith import is_square_rational

from conftest import VERDICTS
from strategies import random_form, reducible_pattern_pairs, translated_sections


def verdict(label, ok, detail=""):
    line = f"{'PASS' if ok else 'FAIL'} {label}" + (f": {detail}" if detail else "")
    VERDICTS.append(line)
    print(line)
    assert ok, line


def test_section_round_trip():
    t0 = time.perf_counter()
    rng = random.Random(1)
    bad = 0
    for n in (3, 5, 7, 9):
        for _ in range(1000):
            f = random_form(rng, n, 50)
            bad += resolvent(section_e(f)) != f
    f = (2, 3, 5, 7)
    p3 = section_e(BinaryForm(f))
    disp3 = ([[0, 0, 1], [0, -f[0], 0], [1, 0, -f[2]]], [[0, 1, 0], [1, f[1], 0], [0, 0, f[3]]])
    g = (2, 3, 5, 7, 11, 13)
    p5 = section_e(BinaryForm(g))
    disp5 = ([[0, 0, 0, 0, 1], [0, 0, 0, 1, 0], [0, 0, g[0], 0, 0], [0, 1, 0, g[2], 0],
              [1, 0, 0, 0, g[4]]],
             [[0, 0, 0, 1, 0], [0, 0, 1, 0, 0], [0, 1, -g[1], 0, 0], [1, 0, 0, -g[3], 0],
              [0, 0, 0, 0, -g[5]]])
    shown = all([list(r) for r in p.A] == A and [list(r) for r in p.B] == B
                for p, (A, B) in ((p3, disp3), (p5, disp5)))
    dt = time.perf_counter() - t0
    verdict("section round trip", bad == 0 and shown and dt < 10,
            f"{bad} mismatches, displays {'match' if shown else 'differ'}, {dt:.1f}s")


def test_correspondence_round_trip():
    t0 = time.perf_counter()
    bad = 0
    for n, count in ((3, 1000), (5, 100)):
        for p in translated_sections(random.Random(n), n, count):
            bad += ideal_to_pair(pair_to_ideal(p)) != p
    dt = time.perf_counter() - t0
    verdict("correspondence round trip", bad == 0 and dt < 120, f"{bad} mismatches, {dt:.1f}s")


def test_f3_census():
    t0 = time.perf_counter()
    reports = census(3, 3, mode="exhaustive", strict=False)
    G = sl_order(3, 3)
    bad = 0
    for r in reports:
        fiber_ok = sum(size for size, _, _ in r.orbits) == r.fiber_size
        stab_ok = all(size * stab == G for size, stab, _ in r.orbits)
        bad += not (r.matches() and fiber_ok and stab_ok)
    dt = time.perf_counter() - t0
    verdict("F3 orbit census", bad == 0 and len(reports) > 0 and dt < 600,
            f"{len(reports)} forms, {bad} exceptions, {dt:.1f}s")


def test_local_masses():
    t0 = time.perf_counter()
    rng = random.Random(4)
    bad = []
    for n in (3, 5):
        forms = []
        while len(forms) < 5:
            f = random_form(rng, n, 9)
            if f[0] and discriminant(f):
                forms.append(f)
        for f in forms:
            for p, want in ((2, 2 ** (n - 1)), (3, 1), (5, 1), (7, 1)):
                got = local_mass(f, p).value
                if got != want:
                    bad.append((f.coeffs, p, got))
    dt = time.perf_counter() - t0
    verdict("local masses", not bad and dt < 60, f"{len(bad)} wrong, {dt:.1f}s")


def test_reducibility():
    t0 = time.perf_counter()
    rng = random.Random(5)
    bad = 0
    for n in (3, 5):
        for p in reducible_pattern_pairs(rng, n, 100):
            D = d_matrix(p)
            ok = is_reducible(p) and charpoly_identity(p)
            ok = ok and all(is_square_rational(D.quotient_value(0, 0, m)) for m in range(-10, 11))
            bad += not ok
    binom = all(binomial_identity(n, i, j) == (-1) ** (n + 1)
                for n in range(3, 16) for i in range(n) for j in range(n - i))
    dt = time.perf_counter() - t0
    verdict("reducibility", bad == 0 and binom and dt < 60,
            f"{bad} failing pairs, binomial identity {'holds' if binom else 'fails'}, {dt:.1f}s")


def random_sl2(rng, bound=5):
    while True:
        a, b, c = (rng.randint(-bound, bound) for _ in range(3))
        if a and (1 + b * c) % a == 0 and abs((1 + b * c) // a) <= bound:
            return Unimodular2(((a, b), (c, (1 + b * c) // a)))


def julia_forms(rng, n, count, bound=10):
    out = []
    while len(out) < count:
        f = random_form(rng, n, bound)
        if discriminant(f):
            out.append(f)
    return out


def test_julia_invariance_and_homogeneity():
    t0 = time.perf_counter()
    rng = random.Random(6)
    worst_inv = worst_hom = mpmath.mpf(0)
    for n in (3, 5):
        for f in julia_forms(rng, n, 100):
            J = julia_theta(f).J
            worst_inv = max(worst_inv, abs(julia_theta(sl2_act(random_sl2(rng), f)).J - J) / J)
        for f in julia_forms(rng, n, 10):
            th = julia_theta(f).theta
            for lam in (2, 3, 7):
                worst_hom = max(worst_hom, abs(julia_theta(f.scale(lam)).theta - lam ** 2 * th)
                                / (lam ** 2 * th))
    dt = time.perf_counter() - t0
    verdict("Julia invariance and homogeneity", worst_inv < 1e-8 and worst_hom < 1e-9 and dt < 60,
            f"invariance {mpmath.nstr(worst_inv, 3)}, homogeneity {mpmath.nstr(worst_hom, 3)}, {dt:.1f}s")


def cubic_ratios(power):
    rng = random.Random(7)
    signs = set()
    out = []
    while len(out) < 100 or len(signs) < 2:
        f = random_form(rng, 3, 12)
        d = discriminant(f)
        if not d:
            continue
        signs.add(d > 0)
        out.append(julia_theta(f).theta ** power / abs(d))
    return out


def spread(xs):
    return (max(xs) - min(xs)) / min(xs)


@pytest.mark.xfail(strict=True, reason="theta has degree 2 in f and the discriminant degree 4")
def test_julia_ratio_theta_over_disc():
    s = spread(cubic_ratios(1))
    verdict("Julia ratio theta/|disc| constant", s < 1e-6, f"relative spread {mpmath.nstr(s, 3)}")


def test_julia_ratio_theta_squared_over_disc():
    r = cubic_ratios(2)
    s = spread(r)
    verdict("Julia ratio theta^2/|disc| constant", s < 1e-6,
            f"relative spread {mpmath.nstr(s, 3)}, value {mpmath.nstr(r[0], 12)}")


@pytest.mark.parametrize("n", [3, 5, 7, 9])
def test_cusp_combinatorics(n):
    t0 = time.perf_counter()
    rep = cusp_check(n)
    dt = time.perf_counter() - t0
    verdict(f"cusp combinatorics n={n}", rep["pass"] and rep["closed_form_match"] and dt < 5,
            f"{dt:.2f}s")


@pytest.fixture(scope="module")
def density40():
    t0 = time.perf_counter()
    rep = density_campaign(None, 40)
    return rep, time.perf_counter() - t0


@pytest.mark.xfail(strict=True, reason="p > 50 and small-box effects exceed 2% at X = 40")
def test_density_squarefree_ratio(density40):
    rep, dt = density40
    r = rep.results["ratio"]
    verdict("density squarefree vs local product", abs(r - 1) < 0.02 and dt < 1800,
            f"ratio {r:.4f}, {rep.tallies['total']} forms, {dt:.1f}s")


def test_density_sieved_ratio(density40):
    rep, dt = density40
    r = rep.results["ratio_sieved"]
    ok = abs(r - 1) < 0.02 and rep.tallies["partition_ok"] and rep.tallies["total"] == 81 ** 4
    verdict("density p<=50 sieve vs local product", ok and dt < 1800, f"ratio {r:.4f}, {dt:.1f}s")


def test_class_group_identities():
    t0 = time.perf_counter()
    rep = avg_campaign(None, 4, records=True)
    recs = [r for r in rep.results["records"] if r["status"] == "ok"]
    maxdisc = max(abs(r["disc"]) for r in recs)
    complex_ok = all(r["narrow_class_number"] == r["class_number"]
                     for r in recs if r["signature"] == [1, 1])
    units_ok = all(r["units_totally_positive"] == 2 ** (r["signature"][0] - r["sign_rank"]
                                                        + r["signature"][1]) for r in recs)
    i2_ok = all(r["i2"] == 1 for r in recs)
    mean = rep.results["r2=0"]["cl2"]["mean_exact"]
    fields = len({r["disc"] for r in recs})
    dt = time.perf_counter() - t0
    ok = (fields >= 200 and maxdisc <= 5 * 10 ** 4 and complex_ok and units_ok and i2_ok
          and Fraction(1) <= mean <= Fraction(8, 5) and not rep.results["check_failures"]
          and rep.tallies["reconciled"] and dt < 3600)
    verdict("class group identities", ok,
            f"{fields} fields, max |disc| {maxdisc}, totally real mean |Cl2| {float(mean):.3f}, {dt:.0f}s")


def test_determinism():
    a = [density_campaign(None, 12).dumps(), avg_campaign(None, 2).dumps()]
    b = [density_campaign(None, 12).dumps(), avg_campaign(None, 2).dumps()]
    verdict("campaign determinism", a == b, f"{sum(map(len, a))} bytes compared")
