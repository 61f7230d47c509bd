"""Integral binary forms: invariants, the SL2(Z) action, factorization, families.

A form of degree n is stored as its coefficient tuple (f0, ..., fn) so that
f(x, y) = sum f_i x^(n-i) y^i.

The group acts on the right of the variables: ``sl2_act(g, f)`` is
f((x, y) g).  With this convention ``sl2_act(g1 @ g2, f)`` equals
``sl2_act(g1, sl2_act(g2, f))``, so it is a left action.
"""

from dataclasses import dataclass, field
from itertools import product
from math import gcd, isqrt

from . import polys
from .arith import is_square_int, primes_upto, trial_factor
from .errors import DegenerateForm, ZeroForm


@dataclass(frozen=True)
class BinaryForm:
    coeffs: tuple

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(int(c) for c in self.coeffs))
        if len(self.coeffs) < 2:
            raise ValueError("a binary form needs degree >= 1")

    @property
    def degree(self):
        return len(self.coeffs) - 1

    def __getitem__(self, i):
        return self.coeffs[i]

    def __iter__(self):
        return iter(self.coeffs)

    def __len__(self):
        return len(self.coeffs)

    def __call__(self, x, y):
        n = self.degree
        return sum(c * x ** (n - i) * y ** i for i, c in enumerate(self.coeffs))

    def is_zero(self):
        return not any(self.coeffs)

    def dehomogenize(self):
        """f(x, 1) as an ascending coefficient list (trimmed)."""
        return polys.trim(list(reversed(self.coeffs)))

    def scale(self, c):
        return BinaryForm(tuple(c * a for a in self.coeffs))

    def __str__(self):
        return "[" + ",".join(str(c) for c in self.coeffs) + "]"

    @classmethod
    def parse(cls, text):
        text = text.strip()
        if not (text.startswith("[") and text.endswith("]")):
            raise ValueError(f"bad form syntax: {text!r}")
        return cls(tuple(int(t) for t in text[1:-1].split(",")))


def as_form(f):
    return f if isinstance(f, BinaryForm) else BinaryForm(tuple(f))


@dataclass(frozen=True)
class Unimodular2:
    """A 2x2 integer matrix of determinant 1, or -1 when ``gl`` is set."""

    entries: tuple
    gl: bool = False

    def __post_init__(self):
        e = tuple(tuple(int(x) for x in r) for r in self.entries)
        object.__setattr__(self, "entries", e)
        d = self.det
        if d != 1 and not (self.gl and d == -1):
            raise ValueError(f"matrix has determinant {d}")

    @property
    def det(self):
        (a, b), (c, d) = self.entries
        return a * d - b * c

    def __matmul__(self, other):
        (a, b), (c, d) = self.entries
        (e, f), (g, h) = other.entries
        return Unimodular2(((a * e + b * g, a * f + b * h), (c * e + d * g, c * f + d * h)),
                           gl=self.gl or other.gl)

    def inverse(self):
        (a, b), (c, d) = self.entries
        s = self.det
        return Unimodular2(((d * s, -b * s), (-c * s, a * s)), gl=self.gl)

    def tolist(self):
        return [list(r) for r in self.entries]


IDENTITY2 = Unimodular2(((1, 0), (0, 1)))
SWAP2 = Unimodular2(((0, 1), (-1, 0)))


def _as_gamma(g):
    if isinstance(g, Unimodular2):
        return g.entries
    return tuple(tuple(r) for r in g)


def height(f):
    return max(abs(c) for c in as_form(f).coeffs)


def is_primitive(f):
    f = as_form(f)
    if f.is_zero():
        raise ZeroForm("primitivity of the zero form")
    g = 0
    for c in f.coeffs:
        g = gcd(g, c)
    return g == 1


def _binary_mul(u, v):
    out = [0] * (len(u) + len(v) - 1)
    for i, a in enumerate(u):
        if a:
            for j, b in enumerate(v):
                out[i + j] += a * b
    return out


def sl2_act(gamma, f):
    """f((x, y) gamma), expanded exactly.

    With this convention sl2_act(g @ h, f) == sl2_act(g, sl2_act(h, f)).
    """
    f = as_form(f)
    (a, b), (c, d) = _as_gamma(gamma)
    n = f.degree
    # lists indexed by power of y
    X = [a, c]
    Y = [b, d]
    xp = [[1]]
    yp = [[1]]
    for _ in range(n):
        xp.append(_binary_mul(xp[-1], X))
        yp.append(_binary_mul(yp[-1], Y))
    out = [0] * (n + 1)
    for i, fi in enumerate(f.coeffs):
        if fi:
            term = _binary_mul(xp[n - i], yp[i])
            for k, t in enumerate(term):
                out[k] += fi * t
    return BinaryForm(tuple(out))


def leading_normalize(f):
    """(gamma, gamma.f) with a nonzero leading coefficient.

    Tries the identity, then the swap (x, y) -> (-y, x), then shears
    (x, y) -> (x, y + c x) for c = 1, -1, 2, -2, ...; all lie in SL2(Z).
    """
    f = as_form(f)
    if f.is_zero():
        raise ZeroForm("cannot normalize the zero form")
    if f[0] != 0:
        return IDENTITY2, f
    if f[f.degree] != 0:
        return SWAP2, sl2_act(SWAP2, f)
    c = 1
    while True:
        for s in (c, -c):
            if f(1, s) != 0:
                g = Unimodular2(((1, s), (0, 1)))
                return g, sl2_act(g, f)
        c += 1


def _cubic_disc(a, b, c, d):
    return b * b * c * c - 4 * a * c ** 3 - 4 * b ** 3 * d - 27 * a * a * d * d + 18 * a * b * c * d


def discriminant(f):
    f = as_form(f)
    if f.is_zero():
        raise ZeroForm("discriminant of the zero form")
    n = f.degree
    if n == 3:
        return _cubic_disc(*f.coeffs)
    if n == 1:
        return 1
    if f[0] == 0:
        f = leading_normalize(f)[1]
    F = f.dehomogenize()
    r = polys.resultant(F, polys.pderiv(F))
    sign = -1 if (n * (n - 1) // 2) % 2 else 1
    q, rem = divmod(sign * r, f[0])
    assert rem == 0
    return q


def _binary_from_poly(g, d):
    """Binary form of degree d from an ascending poly in x of degree <= d."""
    g = list(g) + [0] * (d + 1 - len(g))
    return BinaryForm(tuple(reversed(g)))


def factor_over_Q(f):
    """(content, [(factor, multiplicity)]) with integral primitive factors.

    Factors have positive leading coefficient in x (or are y), and are sorted
    by degree then by coefficient tuple.  The product of content and the
    factors is f.
    """
    f = as_form(f)
    if f.is_zero():
        raise ZeroForm("factorization of the zero form")
    F = f.dehomogenize()
    c, fac = polys.factor_Z(F)
    out = [(_binary_from_poly(g, len(g) - 1), e) for g, e in fac]
    ydeg = f.degree - (len(F) - 1)
    if ydeg:
        out.append((BinaryForm((0, 1)), ydeg))
    out.sort(key=lambda t: (t[0].degree, t[0].coeffs, t[1]))
    return c, out


def multiply_forms(forms):
    acc = [1]
    for g in forms:
        acc = _binary_mul(acc, list(g.coeffs))
    return BinaryForm(tuple(acc))


def is_irreducible(f):
    f = as_form(f)
    if f[0] == 0:
        return f.degree == 1
    return polys.is_irreducible_Z(f.dehomogenize())


def signature(f):
    f = as_form(f)
    if discriminant(f) == 0:
        raise DegenerateForm("signature needs a nonzero discriminant")
    F = f.dehomogenize()
    r1 = polys.count_real_roots(F) + (1 if f[0] == 0 else 0)
    return r1, (f.degree - r1) // 2


def factor_pattern_mod(f, p):
    """Degrees of the irreducible factors of f mod p (binary, so a factor
    y counts as degree 1), with multiplicities; None if f vanishes mod p."""
    f = as_form(f)
    F = [c % p for c in f.dehomogenize()]
    F = polys.trim(F)
    if not F:
        return None
    out = [(len(g) - 1, e) for g, e in polys.factor_mod_p(F, p) if len(g) > 1]
    inf = f.degree - (len(F) - 1)
    if inf:
        out.append((1, inf))
    return sorted(out)


def is_sn_certified(f, bound=200):
    """'yes' when mod-p patterns exhibit a k-cycle for every 2 <= k <= n."""
    f = as_form(f)
    n = f.degree
    disc = discriminant(f)
    if disc == 0:
        return "unknown"
    need = set(range(2, n + 1))
    for p in primes_upto(bound):
        if disc % p == 0:
            continue
        pat = factor_pattern_mod(f, p)
        degs = sorted(d for d, _ in pat)
        big = [d for d in degs if d > 1]
        if len(big) == 1:
            need.discard(big[0])
        elif not big:
            pass
        if not need:
            return "yes"
    return "unknown"


def in_Wp(f, p):
    d = discriminant(f)
    if d == 0:
        raise DegenerateForm("W_p membership needs a nonzero discriminant")
    return d % (p * p) == 0


def squarefree_int(d, cutoff=10 ** 6):
    """Three-valued squarefreeness of a nonzero integer by trial division."""
    d = abs(d)
    if d == 0:
        return "no"
    fac, rest = trial_factor(d, cutoff)
    if any(e >= 2 for e in fac.values()):
        return "no"
    if rest == 1:
        return "yes"
    # every prime factor of rest exceeds the trial bound
    bound = max(cutoff, 2)
    if rest < bound * bound:
        return "yes"
    if is_square_int(rest):
        return "no"
    if rest < bound ** 3:
        return "yes"
    return "unknown"


def has_squarefree_disc(f, cutoff=10 ** 6):
    d = discriminant(f)
    if d == 0:
        raise DegenerateForm("squarefreeness needs a nonzero discriminant")
    return squarefree_int(d, cutoff)


# ---------------------------------------------------------------- families


@dataclass(frozen=True)
class FamilySpec:
    """Congruence and archimedean filters on forms of a fixed degree.

    Text grammar, one ``key: value`` per line, ``#`` starts a comment::

        degree: 3
        signature: 1 1
        squarefree_disc: yes
        primitive: no
        local 2 1: [1,0,0,0] [1,1,1,1]

    A ``local p k`` line lists the coefficient vectors mod p^k that are
    allowed; a prime may appear once.
    """

    degree: int = 3
    local_conditions: tuple = ()
    signature: tuple = None
    squarefree_disc: bool = False
    primitive: bool = False
    nondegenerate: bool = False
    extra: dict = field(default_factory=dict, compare=False, hash=False)

    def __post_init__(self):
        for p, k, allowed in self.local_conditions:
            if not allowed:
                raise ValueError(f"empty residue set at {p}")
            if k < 1 or not polys.is_prime(p):
                raise ValueError("local moduli must be prime powers")

    def accepts(self, f, disc=None):
        f = as_form(f)
        if f.degree != self.degree:
            return False
        for p, k, allowed in self.local_conditions:
            m = p ** k
            if tuple(c % m for c in f.coeffs) not in allowed:
                return False
        if self.primitive and (f.is_zero() or not is_primitive(f)):
            return False
        needs_disc = self.squarefree_disc or self.signature is not None or self.nondegenerate
        if needs_disc:
            if f.is_zero():
                return False
            d = discriminant(f) if disc is None else disc
            if d == 0:
                return False
            if self.squarefree_disc and squarefree_int(d) != "yes":
                return False
            if self.signature is not None and signature(f) != tuple(self.signature):
                return False
        return True

    def dumps(self):
        lines = [f"degree: {self.degree}"]
        if self.signature is not None:
            lines.append(f"signature: {self.signature[0]} {self.signature[1]}")
        lines.append(f"squarefree_disc: {'yes' if self.squarefree_disc else 'no'}")
        lines.append(f"primitive: {'yes' if self.primitive else 'no'}")
        lines.append(f"nondegenerate: {'yes' if self.nondegenerate else 'no'}")
        for p, k, allowed in self.local_conditions:
            res = " ".join("[" + ",".join(map(str, r)) + "]" for r in sorted(allowed))
            lines.append(f"local {p} {k}: {res}")
        return "\n".join(lines) + "\n"

    @classmethod
    def loads(cls, text):
        kw = {}
        local = []
        for raw in text.splitlines():
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            key, _, val = line.partition(":")
            key, val = key.strip(), val.strip()
            if key == "degree":
                kw["degree"] = int(val)
            elif key == "signature":
                kw["signature"] = tuple(int(t) for t in val.split())
            elif key in ("squarefree_disc", "primitive", "nondegenerate"):
                if val not in ("yes", "no"):
                    raise ValueError(f"{key} expects yes or no")
                kw[key] = val == "yes"
            elif key.startswith("local"):
                _, p, k = key.split()
                vecs = frozenset(tuple(int(t) for t in tok.strip("[]").split(","))
                                 for tok in val.split())
                local.append((int(p), int(k), vecs))
            else:
                raise ValueError(f"unknown key {key!r}")
        kw["local_conditions"] = tuple(local)
        return cls(**kw)


def shard_ranges(X, parts):
    """Split the leading-coefficient range [-X, X] into contiguous shards."""
    vals = list(range(-X, X + 1))
    parts = max(1, min(parts, len(vals)))
    size, extra = divmod(len(vals), parts)
    out = []
    start = 0
    for i in range(parts):
        end = start + size + (1 if i < extra else 0)
        out.append((vals[start], vals[end - 1]))
        start = end
    return out


def enumerate_forms(X, spec, visitor=None, f0_range=None):
    """Visit forms of height <= X accepted by spec, lexicographically.

    The order is lexicographic in (f0, ..., fn) with each coefficient running
    from -X to X.  ``f0_range`` restricts f0 to an inclusive sub-range, which
    is how campaigns partition the box.  Returns the list of visited forms if
    no visitor is given, else the number visited.
    """
    n = spec.degree
    lo, hi = f0_range if f0_range is not None else (-X, X)
    out = [] if visitor is None else None
    count = 0
    rng = range(-X, X + 1)
    for f0 in range(lo, hi + 1):
        for rest in product(rng, repeat=n):
            f = BinaryForm((f0,) + rest)
            if spec.accepts(f):
                count += 1
                if visitor is None:
                    out.append(f)
                else:
                    visitor(f)
    return out if visitor is None else count
