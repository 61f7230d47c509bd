import io
import json
from fractions import Fraction

import pytest

from binic import _kernels_py, kernels
from binic.forms import BinaryForm, FamilySpec, Unimodular2, sl2_act
from binic.harness import weights as W
from binic.harness.averages import TREND_LABEL, avg_campaign, canonical_key
from binic.harness.cli import main
from binic.harness.density import _lift_census_generic, _python_tallies, density_campaign, local_density
from binic.harness.patterns import reducible_patterns


@pytest.mark.parametrize("n", [3, 5, 7, 9])
def test_cusp_check(n):
    rep = W.cusp_check(n)
    assert rep["pass"] and rep["closed_form_match"] and rep["a11_minimal"]
    assert rep["var"] == n * (n + 1)


def test_cusp_check_rejects_even():
    with pytest.raises(ValueError):
        W.cusp_check(4)


@pytest.mark.parametrize("n", [3, 5, 7])
def test_weights_match_torus_scaling(n):
    # s_k = u_k^n, t_i = prod_k s_k^([k >= i] - k/n), prod t_i = 1
    u = [Fraction(2 + k, 3 + 2 * k) for k in range(1, n)]
    ti = []
    for i in range(1, n + 1):
        v = Fraction(1)
        for k in range(1, n):
            v *= u[k - 1] ** (n * (k >= i) - k)
        ti.append(v)
    prod = Fraction(1)
    for v in ti:
        prod *= v
    assert prod == 1
    t = Fraction(5, 7)
    for var in W.variables(n):
        kind, i, j = var
        wh, wj = W.weight(var, n)
        scale = 1 / (ti[i - 1] * ti[j - 1])
        assert wh.evaluate(t, u) == scale
        assert wj.evaluate(t, u) == scale * (1 / t if kind == "a" else t)


def test_weight_rejects_bad_index():
    with pytest.raises(ValueError):
        W.weight(("a", 2, 1), 3)


@pytest.mark.parametrize("n", [3, 5])
def test_reducible_patterns(n):
    rep = reducible_patterns(n, trials=30, seed=1)
    assert rep["pass"], rep


def test_density_box_identity():
    rep = density_campaign(None, 3).to_json()
    t = rep["tallies"]
    assert t["total"] == 7 ** 4 and t["partition_ok"]
    assert t["squarefree"] <= t["sieved"]


def test_density_matches_python_enumeration():
    X = 3
    fast = density_campaign(None, X).tallies
    slow = _python_tallies(X, FamilySpec(degree=3))
    assert fast["zero_disc"] == slow["zero_disc"]
    assert fast["r2_0"] == slow["by_r2"].get(0, 0) and fast["r2_1"] == slow["by_r2"].get(1, 0)
    assert fast["squarefree"] == slow["squarefree"]


def test_density_signature_partition():
    spec = FamilySpec.loads("degree: 3\nsignature: 3 0\n")
    t = density_campaign(spec, 2).tallies
    full = _python_tallies(2, FamilySpec(degree=3))
    assert t["total"] == full["by_r2"][0]


@pytest.mark.parametrize("p", [2, 3, 5])
def test_local_density_against_brute(p):
    bad = kernels.brute_census(p)
    assert local_density(p) == 1 - Fraction(bad, p ** 8)
    assert _lift_census_generic(p, 3) == bad


def test_backends_agree():
    X = 6
    limit = kernels.cubic_disc_bound(X)
    sf, sv = kernels.squarefree_table(limit), kernels.squarefree_table(limit, 50)
    compiled = kernels.box_census(X, sf, sv, -X, X)
    assert tuple(compiled) == tuple(_kernels_py.box_census(X, sf, sv, -X, X))
    for p in (2, 3, 7):
        assert kernels.lift_census(p) == _kernels_py.lift_census(p)


def test_density_jobs_deterministic():
    a = density_campaign(None, 5, jobs=1)
    b = density_campaign(None, 5, jobs=2)
    a.tallies.pop("shards"), b.tallies.pop("shards")
    assert a.dumps() == b.dumps()


def test_canonical_key_sign_and_reflection():
    f = BinaryForm((3, 11, -7, 5))
    key = canonical_key(f)
    for g in (Unimodular2(((2, 1), (1, 1))), Unimodular2(((1, 3), (0, 1)))):
        h = sl2_act(g, f)
        for c in (h.coeffs, tuple(-x for x in h.coeffs), h.coeffs[::-1]):
            assert canonical_key(c) == key


@pytest.fixture(scope="module")
def small_avg():
    return avg_campaign(None, 2, records=True)


def test_avg_reconciles(small_avg):
    rep = small_avg.to_json()
    t = rep["tallies"]
    assert rep["label"] == TREND_LABEL
    assert t["enumerated"] == 5 ** 4 and t["reconciled"]
    assert t["included"] + sum(t["excluded"].values()) == t["enumerated"]


def test_avg_only_certified(small_avg):
    res = small_avg.results
    recs = res["records"]
    ok = [r for r in recs if r["status"] == "ok"]
    total = sum(res[k]["cl2"]["count"] for k in res if k.startswith("r2="))
    assert total == sum(r["weight"] for r in ok) == small_avg.tallies["included"]
    assert not res["check_failures"]


def test_avg_references(small_avg):
    res = small_avg.results
    assert res["r2=0"]["reference"]["cl2"] == Fraction(5, 4)
    assert res["r2=1"]["reference"]["cl2"] == Fraction(3, 2)
    assert res["r2=1"]["reference"]["cl2_plus"] == Fraction(3, 2)


def test_avg_julia_mode_counts_classes(small_avg):
    rep = avg_campaign(None, 2, mode="julia")
    res = rep.results
    total = sum(res[k]["cl2"]["count"] for k in res if k.startswith("r2="))
    assert total == rep.tallies["certified_classes"] == small_avg.tallies["certified_classes"]


def test_avg_jobs_deterministic(small_avg):
    assert avg_campaign(None, 2, jobs=2, records=True).dumps() == small_avg.dumps()


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out)
    return code, [json.loads(line) for line in out.getvalue().splitlines()]


def test_cli_form():
    code, recs = run("form", "[1,0,0,-2]")
    assert code == 0 and len(recs) == 1


def test_cli_bad_form():
    code, recs = run("form", "1 0 0 -2")
    assert code == 2 and recs[0]["kind"] == "input"


def test_cli_usage_error():
    assert run("cusp-check")[0] == 2
    assert run("mass", "[1,0,0,-2]")[0] == 2


def test_cli_cusp_check():
    code, recs = run("cusp-check", "-n", "7")
    assert code == 0 and recs[0]["pass"] is True


def test_cli_pair_roundtrip():
    code, recs = run("pair", "--section", "[1,2,-3,5]", "--roundtrip")
    assert code == 0
    assert any(r.get("match") is True for r in recs)


def test_cli_julia_and_reduce():
    assert run("julia", "[1,0,-1,1]")[0] == 0
    assert run("reduce", "[1,0,-1,1]")[0] == 0


def test_cli_classgroup():
    code, recs = run("classgroup", "[1,0,4,-1]")
    assert code == 0 and recs[-1]["cl2"] == 2


def test_cli_density_deterministic():
    a = run("density", "-X", "4")
    b = run("density", "-X", "4")
    assert a == b and a[0] == 0
