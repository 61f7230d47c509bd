"""Running averages of 2-torsion in class groups over enumerated binary forms.

Each form is mapped to a canonical representative of its GL2(Z)-class
(Julia reduction, then the smallest of the sign/reflection variants), so
field data is computed once per class and never depends on which form of
the class was visited first.  Height mode weights fields by the number of
forms visited; julia mode counts each canonical representative once.

This is a trend report: desk-scale boxes are far from the limit.
"""

from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction

from ..classgroup import OrderData, class_group, h_sizes, ideal_two_torsion
from ..errors import BinicError, EffortExceeded
from ..forms import FamilySpec, as_form, discriminant, enumerate_forms, is_irreducible, shard_ranges
from ..julia import DEFAULT_PREC, reduce_form
from .report import CampaignReport, RunningMean

TREND_LABEL = "TREND REPORT: desk-scale running averages, not the limiting values"


def canonical_key(f, prec=DEFAULT_PREC):
    """A coefficient tuple determined by the GL2(Z)-class of f, in most cases.

    Equal keys always mean equivalent forms; two equivalent forms can
    occasionally get different keys when the reduced quadratic sits on the
    boundary of the fundamental domain.
    """
    f = as_form(f)
    try:
        _, g = reduce_form(f, prec=prec, check=False)
    except BinicError:
        g = f
    c = g.coeffs
    flip = tuple(x if i % 2 == 0 else -x for i, x in enumerate(c))
    return min(c, flip, tuple(-x for x in c), tuple(-x for x in flip))


def field_record(key, effort=1):
    """Class group data and exact identity checks for the ring of one canonical form."""
    f = as_form(key)
    O = OrderData(f)
    rec = {"form": list(key), "ring_disc": discriminant(f), "disc": O.disc,
           "signature": list(O.signature), "maximal": O.index == 1}
    if not rec["maximal"]:
        rec["status"] = "nonmaximal"
        return rec
    try:
        cg = class_group(O, effort=effort)
    except EffortExceeded as exc:
        rec["status"] = "uncertified"
        rec["notes"] = [str(exc)]
        return rec
    u = cg.units
    rec.update({"divisors": list(cg.divisors), "narrow_divisors": list(cg.narrow_divisors),
                "class_number": cg.class_number, "narrow_class_number": cg.narrow_class_number,
                "cl2": cg.cl2, "cl2_plus": cg.cl2_plus, "unit_rank": u.rank,
                "sign_rank": u.sign_rank, "notes": list(cg.notes)})
    if not cg.certified:
        rec["status"] = "uncertified"
        return rec
    r1, r2 = O.signature
    sizes = h_sizes(O, cg)
    i2 = len(ideal_two_torsion(O))
    rec.update({"i2": i2, "units_totally_positive": sizes["units_totally_positive"],
                "units_norm_one": sizes["units_norm_one"], "H": sizes["H"],
                "H_plus": sizes["H_plus"]})
    checks = {
        "narrow_equals_class": r2 == 0 or O.n != 3 or cg.narrow_class_number == cg.class_number,
        "totally_positive_units": sizes["units_totally_positive"] == 2 ** (r1 - u.sign_rank + r2),
        "norm_one_units": sizes["units_norm_one"] == 2 ** (r1 + r2 - 1),
        "ideal_two_torsion_trivial": i2 == 1,
    }
    rec["checks"] = checks
    rec["status"] = "ok" if all(checks.values()) else "check_failed"
    return rec


def _classify(f):
    if f.is_zero() or discriminant(f) == 0:
        return "degenerate"
    if not is_irreducible(f):
        return "reducible"
    return None


def _scan(args):
    """One shard: tally exclusions and count forms per canonical key."""
    X, spec_text, lo, hi, prec = args
    spec = FamilySpec.loads(spec_text)
    excluded = Counter()
    keys = Counter()

    def visit(f):
        why = _classify(f)
        if why:
            excluded[why] += 1
        else:
            keys[canonical_key(f, prec)] += 1

    total = enumerate_forms(X, spec, visit, f0_range=(lo, hi))
    return total, excluded, keys


def _records(args):
    keys, effort = args
    return [field_record(k, effort) for k in keys]


def _mean_block():
    return {"cl2": RunningMean(), "cl2_plus": RunningMean(),
            "cl2_minus_i2": RunningMean(), "cl2_plus_minus_i2": RunningMean()}


def avg_campaign(spec, X, mode="height", jobs=1, effort=1, prec=DEFAULT_PREC, records=False):
    """Averages of |Cl2| and |Cl2+| (with the I2 corrections) over a box of forms."""
    if mode not in ("height", "julia"):
        raise ValueError("mode must be 'height' or 'julia'")
    spec = spec or FamilySpec(degree=3)
    n = spec.degree
    params = {"X": X, "mode": mode, "effort": effort, "precision": prec, "spec": spec.dumps()}
    shards = [(X, spec.dumps(), lo, hi, prec) for lo, hi in shard_ranges(X, jobs)]
    if jobs > 1:
        with ProcessPoolExecutor(jobs) as ex:
            parts = list(ex.map(_scan, shards))
    else:
        parts = [_scan(s) for s in shards]
    total = sum(p[0] for p in parts)
    excluded = Counter()
    weights = Counter()
    for _, ex_, ks in parts:
        excluded.update(ex_)
        weights.update(ks)

    ordered = sorted(weights)
    if jobs > 1:
        chunks = [ordered[i::jobs] for i in range(jobs)]
        with ProcessPoolExecutor(jobs) as ex:
            recs = [r for part in ex.map(_records, [(c, effort) for c in chunks]) for r in part]
    else:
        recs = _records((ordered, effort))
    by_key = {tuple(r["form"]): r for r in recs}

    means = {}
    discs = set()
    status = Counter()
    failures = []
    for key in ordered:
        rec = by_key[key]
        w = weights[key] if mode == "height" else 1
        status[rec["status"]] += weights[key]
        if rec["status"] == "check_failed":
            failures.append(rec)
        if rec["status"] != "ok":
            continue
        discs.add(rec["disc"])
        r1, r2 = rec["signature"]
        block = means.setdefault(r2, _mean_block())
        i2 = rec["i2"]
        values = {"cl2": rec["cl2"], "cl2_plus": rec["cl2_plus"],
                  "cl2_minus_i2": rec["cl2"] - Fraction(i2, 2 ** (r1 + r2 - 1)),
                  "cl2_plus_minus_i2": rec["cl2_plus"] - Fraction(i2, 2 ** r2)}
        for name, v in values.items():
            for _ in range(w):
                block[name].add(v)

    for reason in ("nonmaximal", "uncertified", "check_failed"):
        excluded[reason] += status.get(reason, 0)
    tallies = {"enumerated": total, "included": status.get("ok", 0),
               "excluded": dict(sorted(excluded.items())), "classes": len(ordered),
               "certified_classes": sum(1 for k in ordered if by_key[k]["status"] == "ok"),
               "distinct_discriminants": len(discs)}
    tallies["reconciled"] = tallies["included"] + sum(excluded.values()) == total

    results = {}
    for r2 in sorted(means):
        r1 = n - 2 * r2
        block = means[r2]
        results[f"r2={r2}"] = {
            "signature": [r1, r2],
            "cl2": block["cl2"].to_json(),
            "cl2_plus": block["cl2_plus"].to_json(),
            "cl2_minus_i2": block["cl2_minus_i2"].to_json(),
            "cl2_plus_minus_i2": block["cl2_plus_minus_i2"].to_json(),
            "reference": {"cl2": Fraction(1) + Fraction(2, 2 ** (r1 + r2)),
                          "cl2_plus": Fraction(1) + Fraction(1, 2 ** r2),
                          "cl2_minus_i2": Fraction(1), "cl2_plus_minus_i2": Fraction(1)},
        }
    results["check_failures"] = failures
    if records:
        results["records"] = [dict(by_key[k], weight=weights[k]) for k in ordered]
    return CampaignReport("avg", params, tallies, results, label=TREND_LABEL)
