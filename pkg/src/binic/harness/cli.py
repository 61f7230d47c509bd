"""Command-line front end: one JSON object per output line.

Exit status: 0 success, 2 usage or bad input, 3 partial or uncertified
result, 4 internal check failure.  Timing and the effective seed go to
standard error only, so standard output is reproducible.
"""

import argparse
import os
import sys
import time
from fractions import Fraction

import mpmath

from .. import errors, forms, modp, pairs, rings
from ..forms import BinaryForm, FamilySpec
from ..julia import DEFAULT_PREC
from .report import dumps

EXIT_OK, EXIT_USAGE, EXIT_PARTIAL, EXIT_CHECK = 0, 2, 3, 4

INPUT_ERRORS = (errors.ZeroForm, errors.DegenerateForm, errors.DegenerateInput,
                errors.IncompatibleForms, errors.OrientationError, errors.InseparableType,
                errors.FormVanishesModP, errors.IndexOutOfRange, errors.TooLarge,
                errors.NonInvertible, ValueError)
PARTIAL_ERRORS = (errors.EffortExceeded, errors.Unknown, errors.NonConvergence,
                  errors.PrecisionExhausted, errors.PrecisionTooLow, errors.NonIntegralOutput)
CHECK_ERRORS = (errors.CheckFailed, AssertionError)


class Partial(Exception):
    """Raised after output has been written when the result is incomplete."""


def _emit(out, record):
    out.write(dumps(record) + "\n")


def _read_text(arg):
    """'-' reads stdin, an existing path is read, anything else is the text itself."""
    if arg == "-":
        return sys.stdin.read()
    if os.path.exists(arg):
        with open(arg) as fh:
            return fh.read()
    return arg


def _form(text):
    return BinaryForm.parse(text)


def _spec(args):
    if getattr(args, "spec", None):
        return FamilySpec.loads(_read_text(args.spec))
    return FamilySpec(degree=getattr(args, "degree", 3))


def _fr(x):
    return str(x) if isinstance(x, Fraction) else x


def _mat(rows):
    return [[_fr(Fraction(x)) for x in r] for r in rows]


# ---------------------------------------------------------------- subcommands


def cmd_form(args, out):
    f = _form(args.form)
    rec = {"type": "form", "form": str(f), "degree": f.degree, "height": forms.height(f),
           "primitive": forms.is_primitive(f)}
    if f.is_zero():
        raise errors.ZeroForm("the zero form has no invariants")
    d = forms.discriminant(f)
    rec["disc"] = d
    c, fac = forms.factor_over_Q(f)
    rec["content"] = c
    rec["factors"] = [[str(g), e] for g, e in fac]
    rec["irreducible"] = forms.is_irreducible(f)
    if d:
        rec["signature"] = list(forms.signature(f))
        rec["squarefree_disc"] = forms.squarefree_int(d)
        rec["sn_certified"] = forms.is_sn_certified(f)
    _emit(out, rec)


def cmd_ring(args, out):
    f = _form(args.form)
    ring = rings.build_ring(f)
    rec = {"type": "ring", "form": str(f), "normalized_form": str(ring.form),
           "gamma": None if ring.gamma is None else ring.gamma.tolist(), "disc": ring.disc,
           "table": [[_mat([c])[0] for c in row] for row in ring.table],
           "zeta": _mat(ring.zeta)}
    if ring.disc and forms.is_irreducible(f):
        O = rings.maximal_order(ring)
        rec["maximal_order"] = _mat(O.basis)
        rec["index_in_maximal"] = _fr(rings.ring_as_order(ring).index_in(O))
    _emit(out, rec)


def cmd_ideal(args, out):
    f = _form(args.form)
    ring = rings.build_ring(f)
    if args.basis:
        I = rings.BasedIdeal.loads(ring, _read_text(args.basis))
    else:
        I = rings.ideal_power(ring, args.power)
    d, H = I.canonical
    _emit(out, {"type": "ideal", "form": str(f), "basis": _mat(I.basis), "norm": _fr(I.norm),
                "orientation": I.orientation, "is_ideal": I.is_ideal(),
                "hnf": {"den": d, "rows": [list(r) for r in H]}, "text": I.dumps()})


def cmd_pair(args, out):
    if args.section:
        p = pairs.section_e(_form(args.section))
    else:
        if not args.input:
            raise ValueError("pair needs a serialized pair or --section FORM")
        p = pairs.SymPair.loads(_read_text(args.input))
    f = pairs.resolvent(p)
    rec = {"type": "pair", "n": p.n, "text": p.dumps(), "resolvent": str(f)}
    if args.roundtrip or args.ideal:
        g2, q = pairs.normalize_pair(p)
        ic = pairs.pair_to_ideal(p)
        rec["normalized"] = g2 is not None
        rec["ideal"] = ic.I.dumps()
        rec["delta"] = [_fr(x) for x in ic.delta.coords]
        rec["reducible"] = pairs.is_reducible(q)
        if args.roundtrip:
            back = pairs.ideal_to_pair(ic)
            rec["roundtrip"] = back.dumps()
            rec["match"] = back.A == q.A and back.B == q.B
            if not rec["match"]:
                _emit(out, rec)
                raise errors.CheckFailed("round trip did not return the pair")
    _emit(out, rec)


def cmd_orbits(args, out):
    mode = "exhaustive" if args.exhaustive else "auto"
    if args.form:
        reports = [modp.brute_orbits(_form(args.form), args.p, mode=mode, strict=False)]
    else:
        reports = modp.census(args.n, args.p, mode=mode, strict=False)
    bad = 0
    for r in reports:
        rec = dict(r.to_json(), type="orbits", matches=r.matches())
        bad += not r.matches()
        _emit(out, rec)
    _emit(out, {"type": "orbits-summary", "n": args.n, "p": args.p, "forms": len(reports),
                "mismatches": bad, "fiber_total": sum(r.fiber_size for r in reports)})
    if bad:
        raise errors.CheckFailed(f"{bad} forms disagree with the prediction")


def cmd_mass(args, out):
    if args.archimedean:
        r1, r2 = args.archimedean
        m, tau, sigma = modp.archimedean_mass(r1, r2)
        _emit(out, {"type": "mass", "place": "inf", "value": m.value, "tau": tau, "sigma": sigma})
        return
    f = _form(args.form)
    for p in args.p:
        m = modp.local_mass(f, p, args.k)
        _emit(out, {"type": "mass", "form": str(f), "place": p, "value": m.value, "k": m.precision})


def cmd_julia(args, out):
    from ..julia import julia_theta
    res = julia_theta(_form(args.form), prec=args.precision)
    _emit(out, dict(res.to_json(), type="julia", form=args.form))


def cmd_reduce(args, out):
    from ..julia import julia_theta, reduce_form
    f = _form(args.form)
    gamma, g = reduce_form(f, prec=args.precision)
    J = julia_theta(g, prec=args.precision).J
    _emit(out, {"type": "reduce", "form": str(f), "gamma": gamma.tolist(), "reduced": str(g),
                "J": mpmath.nstr(J, 25)})


def cmd_classgroup(args, out):
    from .averages import field_record
    f = _form(args.form)
    rec = field_record(f.coeffs, effort=args.effort)
    rec["type"] = "classgroup"
    _emit(out, rec)
    if rec["status"] == "check_failed":
        raise errors.CheckFailed("class group identities failed")
    if rec["status"] != "ok":
        raise Partial(rec["status"])


def cmd_census(args, out):
    _emit(out, dict(modp.strata_census(args.p, args.n), type="census"))


def cmd_density(args, out):
    from .density import density_campaign
    rep = density_campaign(_spec(args), args.X, prime_bound=args.prime_bound, jobs=args.jobs)
    out.write(rep.dumps() + "\n")


def cmd_avg(args, out):
    from .averages import avg_campaign
    rep = avg_campaign(_spec(args), args.X, mode=args.mode, jobs=args.jobs, effort=args.effort,
                       prec=args.precision, records=args.records)
    out.write(rep.dumps() + "\n")
    if rep.results["check_failures"]:
        raise errors.CheckFailed("class group identities failed on some fields")


def cmd_cusp(args, out):
    from .weights import cusp_check
    rep = cusp_check(args.n)
    _emit(out, dict(rep, type="cusp-check"))
    if not rep["pass"]:
        raise errors.CheckFailed("cusp weight checks failed")


def cmd_patterns(args, out):
    from .patterns import reducible_patterns
    rep = reducible_patterns(args.n, trials=args.trials, seed=args.seed)
    _emit(out, dict(rep, type="patterns"))
    if not rep["pass"]:
        raise errors.CheckFailed("reducibility patterns failed")


# ---------------------------------------------------------------- parser


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="seed for randomized searches")
    common.add_argument("--precision", type=int, default=DEFAULT_PREC, help="working bits")
    common.add_argument("--effort", type=int, default=1, help="search effort level")
    common.add_argument("--jobs", type=int, default=1, help="worker processes")

    ap = argparse.ArgumentParser(prog="binic", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    def add(name, func, help_):
        p = sub.add_parser(name, parents=[common], help=help_)
        p.set_defaults(func=func)
        return p

    add("form", cmd_form, "invariants of one form").add_argument("form")
    add("ring", cmd_ring, "multiplication table and maximal order").add_argument("form")
    p = add("ideal", cmd_ideal, "a based fractional ideal of R_f")
    p.add_argument("form")
    g = p.add_mutually_exclusive_group()
    g.add_argument("--power", type=int, default=1, help="the ideal I_f^k")
    g.add_argument("--basis", help="file with a serialized basis ('-' for stdin)")
    p = add("pair", cmd_pair, "pairs of symmetric matrices and their ideals")
    p.add_argument("input", nargs="?", help="file with a serialized pair ('-' for stdin)")
    p.add_argument("--section", metavar="FORM", help="use the section pair of FORM")
    p.add_argument("--ideal", action="store_true", help="report the ideal class")
    p.add_argument("--roundtrip", action="store_true", help="pair -> ideal -> pair")
    p = add("orbits-modp", cmd_orbits, "orbit census over F_p")
    p.add_argument("-n", type=int, default=3)
    p.add_argument("-p", type=int, required=True)
    p.add_argument("--exhaustive", action="store_true")
    p.add_argument("--form", help="a single form instead of the full census")
    p = add("mass", cmd_mass, "local masses")
    p.add_argument("form", nargs="?")
    p.add_argument("-p", type=int, action="append", default=[])
    p.add_argument("-k", type=int, default=None)
    p.add_argument("--archimedean", type=int, nargs=2, metavar=("R1", "R2"))
    add("julia", cmd_julia, "Julia invariant").add_argument("form")
    add("reduce", cmd_reduce, "Julia reduction").add_argument("form")
    add("classgroup", cmd_classgroup, "class group of the maximal order").add_argument("form")
    p = add("census", cmd_census, "strata of pairs over F_p")
    p.add_argument("-p", type=int, required=True)
    p.add_argument("-n", type=int, default=3)
    for name, func, help_ in (("density", cmd_density, "squarefree density campaign"),
                              ("avg", cmd_avg, "class group trend report")):
        p = add(name, func, help_)
        p.add_argument("-X", type=int, required=True)
        p.add_argument("--degree", type=int, default=3)
        p.add_argument("--spec", help="FamilySpec file ('-' for stdin)")
        if name == "density":
            p.add_argument("--prime-bound", type=int, default=50)
        else:
            p.add_argument("--mode", choices=("height", "julia"), default="height")
            p.add_argument("--records", action="store_true", help="include per-field records")
    add("cusp-check", cmd_cusp, "cusp weight combinatorics").add_argument("-n", type=int, required=True)
    p = add("patterns", cmd_patterns, "zero-block reducibility patterns")
    p.add_argument("-n", type=int, required=True)
    p.add_argument("--trials", type=int, default=100)
    return ap


def _fail(out, kind, exc):
    _emit(out, {"type": "error", "kind": kind, "error": type(exc).__name__, "message": str(exc)})


def main(argv=None, out=None):
    out = out or sys.stdout
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    if args.command == "mass" and not args.archimedean and (not args.form or not args.p):
        print("binic mass: needs FORM and at least one -p, or --archimedean R1 R2", file=sys.stderr)
        return EXIT_USAGE
    t0 = time.perf_counter()
    code = EXIT_OK
    try:
        args.func(args, out)
    except Partial as exc:
        code = EXIT_PARTIAL
        print(f"binic: partial result ({exc})", file=sys.stderr)
    except CHECK_ERRORS as exc:
        _fail(out, "check", exc)
        code = EXIT_CHECK
    except PARTIAL_ERRORS as exc:
        rec = {"type": "partial", "error": type(exc).__name__, "message": str(exc)}
        partial = getattr(exc, "partial", None)
        if partial is not None:
            rec["partial"] = partial
        _emit(out, rec)
        code = EXIT_PARTIAL
    except INPUT_ERRORS as exc:
        _fail(out, "input", exc)
        code = EXIT_USAGE
    except OSError as exc:
        _fail(out, "input", exc)
        code = EXIT_USAGE
    out.flush()
    print(f"binic {args.command}: seed={args.seed} precision={args.precision} jobs={args.jobs} "
          f"elapsed={time.perf_counter() - t0:.3f}s exit={code}", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
