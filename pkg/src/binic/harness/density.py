"""Squarefree-discriminant densities of binary cubics against measured local densities."""

import itertools
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction

from .. import kernels
from ..arith import primes_upto
from ..forms import FamilySpec, discriminant, enumerate_forms, shard_ranges, signature, squarefree_int
from .report import CampaignReport


def local_density(p, n=3):
    """Proportion of forms mod p^2 whose discriminant is not divisible by p^2."""
    q = p * p
    if n == 3:
        bad = kernels.lift_census(p)
    else:
        bad = _lift_census_generic(p, n)
    return 1 - Fraction(bad, q ** (n + 1))


def _lift_census_generic(p, n):
    """Same count for any degree: lift each residue mod p through the linear term."""
    bad = 0
    for f0 in itertools.product(range(p), repeat=n + 1):
        D = discriminant(f0) if any(f0) else 0
        if D % p:
            continue
        grads = []
        for i in range(n + 1):
            g = list(f0)
            g[i] += p
            grads.append(((discriminant(g) - D) // p) % p)
        if any(grads):
            bad += p ** n
        elif (D // p) % p == 0:
            bad += p ** (n + 1)
    return bad


def _tables(X, prime_bound):
    limit = kernels.cubic_disc_bound(X)
    return kernels.squarefree_table(limit), kernels.squarefree_table(limit, prime_bound)


def _shard(args):
    X, lo, hi, prime_bound = args
    return kernels.box_census(X, *_tables(X, prime_bound), lo, hi)


def _box_tallies(X, jobs, prime_bound):
    shards = [(X, lo, hi, prime_bound) for lo, hi in shard_ranges(X, jobs)]
    if jobs > 1:
        with ProcessPoolExecutor(jobs) as ex:
            parts = list(ex.map(_shard, shards))
    else:
        sf, sv = _tables(X, prime_bound)
        parts = [kernels.box_census(X, sf, sv, lo, hi) for _, lo, hi, _ in shards]
    keys = ("total", "zero_disc", "r2_0", "r2_1", "squarefree_r2_0", "squarefree_r2_1",
            "sieved_r2_0", "sieved_r2_1")
    tallies = {k: sum(part[i] for part in parts) for i, k in enumerate(keys)}
    tallies["shards"] = len(shards)
    return tallies


def _python_tallies(X, spec):
    t = {"total": 0, "zero_disc": 0, "squarefree": 0, "by_r2": {}, "squarefree_by_r2": {}}

    def visit(f):
        t["total"] += 1
        d = discriminant(f) if not f.is_zero() else 0
        if d == 0:
            t["zero_disc"] += 1
            return
        r2 = signature(f)[1]
        t["by_r2"][r2] = t["by_r2"].get(r2, 0) + 1
        if squarefree_int(d) == "yes":
            t["squarefree"] += 1
            t["squarefree_by_r2"][r2] = t["squarefree_by_r2"].get(r2, 0) + 1

    enumerate_forms(X, spec, visit)
    return t


def density_campaign(spec, X, prime_bound=50, jobs=1):
    """Exhaustive tallies over forms of height <= X and the local-density prediction."""
    spec = spec or FamilySpec(degree=3)
    plain = not spec.local_conditions and not spec.primitive and spec.signature is None \
        and not spec.squarefree_disc
    params = {"degree": spec.degree, "X": X, "prime_bound": prime_bound, "spec": spec.dumps()}
    if spec.degree == 3 and plain:
        t = _box_tallies(X, jobs, prime_bound)
        sf = t["squarefree_r2_0"] + t["squarefree_r2_1"]
        t["squarefree"] = sf
        t["sieved"] = t["sieved_r2_0"] + t["sieved_r2_1"]
        t["partition_ok"] = t["zero_disc"] + t["r2_0"] + t["r2_1"] == t["total"] == (2 * X + 1) ** 4
    else:
        t = _python_tallies(X, spec)
        sf = t["squarefree"]
        t["partition_ok"] = t["zero_disc"] + sum(t["by_r2"].values()) == t["total"]
    results = {"observed": Fraction(sf, t["total"]) if t["total"] else None}
    if plain:
        dens = {p: local_density(p, spec.degree) for p in primes_upto(prime_bound)}
        pred = Fraction(1)
        for v in dens.values():
            pred *= v
        results.update({
            "local_densities": {str(p): v for p, v in dens.items()},
            "predicted": pred,
            "predicted_count": float(pred * (2 * X + 1) ** (spec.degree + 1)),
            "ratio": float(results["observed"] / pred),
        })
        if "sieved" in t:
            obs = Fraction(t["sieved"], t["total"])
            results["observed_sieved"] = obs
            results["ratio_sieved"] = float(obs / pred)
    return CampaignReport("density", params, t, results)
