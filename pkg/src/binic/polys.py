"""Univariate polynomials as ascending coefficient lists.

``[c0, c1, c2]`` is c0 + c1*x + c2*x^2.  The zero polynomial is ``[]``.
Functions suffixed ``_p`` work over F_p with coefficients reduced to [0, p).
"""

import random
from fractions import Fraction
from itertools import product
from math import gcd

from .arith import content, divisors, is_prime, next_prime
from .linalg import det


def trim(f):
    f = list(f)
    while f and f[-1] == 0:
        f.pop()
    return f


def deg(f):
    return len(trim(f)) - 1


def padd(f, g):
    n = max(len(f), len(g))
    return trim([(f[i] if i < len(f) else 0) + (g[i] if i < len(g) else 0) for i in range(n)])


def psub(f, g):
    return padd(f, [-c for c in g])


def pmul(f, g):
    if not f or not g:
        return []
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a:
            for j, b in enumerate(g):
                out[i + j] += a * b
    return trim(out)


def pscale(c, f):
    return trim([c * a for a in f])


def peval(f, x):
    acc = 0
    for c in reversed(f):
        acc = acc * x + c
    return acc


def pderiv(f):
    return trim([i * f[i] for i in range(1, len(f))])


def pdivmod(f, g):
    """Division over Q."""
    f = [Fraction(c) for c in trim(f)]
    g = trim(g)
    if not g:
        raise ZeroDivisionError("polynomial division by zero")
    lead = Fraction(g[-1])
    q = [Fraction(0)] * max(len(f) - len(g) + 1, 0)
    while len(f) >= len(g) and f:
        c = f[-1] / lead
        k = len(f) - len(g)
        q[k] = c
        for i, b in enumerate(g):
            f[k + i] -= c * b
        f = trim(f)
    return trim(q), f


def pmonic(f):
    f = trim(f)
    lead = Fraction(f[-1])
    return [Fraction(c) / lead for c in f]


def pgcd(f, g):
    f, g = trim(f), trim(g)
    while g:
        f, g = g, pdivmod(f, g)[1]
    return pmonic(f) if f else []


def primitive_part(f):
    """Clear denominators and content; positive leading coefficient."""
    f = trim(f)
    if not f:
        return []
    d = 1
    for c in f:
        c = Fraction(c)
        d = d * c.denominator // gcd(d, c.denominator)
    ints = [int(Fraction(c) * d) for c in f]
    g = content(ints)
    ints = [c // g for c in ints]
    if ints[-1] < 0:
        ints = [-c for c in ints]
    return ints


def sylvester(f, g):
    m, n = len(f) - 1, len(g) - 1
    size = m + n
    rows = []
    fr = list(reversed(f))
    gr = list(reversed(g))
    for i in range(n):
        rows.append([0] * i + fr + [0] * (size - m - 1 - i))
    for i in range(m):
        rows.append([0] * i + gr + [0] * (size - n - 1 - i))
    return rows


def resultant(f, g):
    """Res(f, g) from the Sylvester determinant, using the stored degrees."""
    f, g = trim(f), trim(g)
    if not f or not g:
        return 0
    if len(f) == 1 and len(g) == 1:
        return 1
    return det(sylvester(f, g))


# ---------------------------------------------------------------- Sturm


def _sign_at_inf(f, neg):
    s = 1 if f[-1] > 0 else -1
    if neg and (len(f) - 1) % 2:
        s = -s
    return s


def sturm_sequence(f):
    seq = [trim([Fraction(c) for c in f])]
    seq.append(pderiv(seq[0]))
    while seq[-1] and len(seq[-1]) > 1:
        r = pdivmod(seq[-2], seq[-1])[1]
        if not r:
            break
        seq.append([-c for c in r])
    return [s for s in seq if s]


def count_real_roots(f):
    """Number of distinct real roots of f (Sturm)."""
    f = trim(f)
    if len(f) <= 1:
        return 0
    seq = sturm_sequence(f)

    def changes(signs):
        signs = [s for s in signs if s]
        return sum(1 for a, b in zip(signs, signs[1:]) if a != b)

    lo = changes([_sign_at_inf(s, True) for s in seq])
    hi = changes([_sign_at_inf(s, False) for s in seq])
    return lo - hi


# ---------------------------------------------------------------- F_p


def trim_p(f, p):
    return trim([c % p for c in f])


def add_p(f, g, p):
    n = max(len(f), len(g))
    return trim([((f[i] if i < len(f) else 0) + (g[i] if i < len(g) else 0)) % p for i in range(n)])


def sub_p(f, g, p):
    n = max(len(f), len(g))
    return trim([((f[i] if i < len(f) else 0) - (g[i] if i < len(g) else 0)) % p for i in range(n)])


def mul_p(f, g, p):
    if not f or not g:
        return []
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a:
            for j, b in enumerate(g):
                out[i + j] += a * b
    return trim([c % p for c in out])


def divmod_p(f, g, p):
    f = trim_p(f, p)
    g = trim_p(g, p)
    if not g:
        raise ZeroDivisionError("division by zero polynomial mod p")
    inv = pow(g[-1], -1, p)
    q = [0] * max(len(f) - len(g) + 1, 0)
    while len(f) >= len(g) and f:
        c = f[-1] * inv % p
        k = len(f) - len(g)
        q[k] = c
        for i, b in enumerate(g):
            f[k + i] = (f[k + i] - c * b) % p
        f = trim(f)
    return trim(q), f


def rem_p(f, g, p):
    return divmod_p(f, g, p)[1]


def monic_p(f, p):
    f = trim_p(f, p)
    if not f:
        return f
    inv = pow(f[-1], -1, p)
    return [c * inv % p for c in f]


def gcd_p(f, g, p):
    f, g = trim_p(f, p), trim_p(g, p)
    while g:
        f, g = g, rem_p(f, g, p)
    return monic_p(f, p)


def powmod_p(f, e, m, p):
    result = [1]
    base = rem_p(f, m, p)
    while e:
        if e & 1:
            result = rem_p(mul_p(result, base, p), m, p)
        e >>= 1
        if e:
            base = rem_p(mul_p(base, base, p), m, p)
    return result


def deriv_p(f, p):
    return trim([i * f[i] % p for i in range(1, len(f))])


def is_squarefree_p(f, p):
    f = trim_p(f, p)
    if len(f) <= 2:
        return bool(f)
    return len(gcd_p(f, deriv_p(f, p), p)) == 1


def _pth_root(f, p):
    return [f[i] for i in range(0, len(f), p)]


def squarefree_decomposition_p(f, p):
    """Pairs (g, e) of squarefree monic coprime g with f = lead * prod g^e."""
    f = monic_p(f, p)
    out = {}

    def rec(f, mult):
        if len(f) <= 1:
            return
        d = deriv_p(f, p)
        if not d:
            rec(_pth_root(f, p), mult * p)
            return
        c = gcd_p(f, d, p)
        w = divmod_p(f, c, p)[0]
        i = 1
        while len(w) > 1:
            y = gcd_p(w, c, p)
            z = divmod_p(w, y, p)[0]
            if len(z) > 1:
                out[i * mult] = mul_p(out.get(i * mult, [1]), z, p)
            i += 1
            w = y
            c = divmod_p(c, y, p)[0]
        if len(c) > 1:
            rec(_pth_root(c, p), mult * p)

    rec(f, 1)
    return sorted(((monic_p(g, p), e) for e, g in out.items()), key=lambda t: t[1])


def distinct_degree_p(f, p):
    """Distinct-degree factorization of a squarefree monic f."""
    out = []
    h = [0, 1]
    d = 0
    f = monic_p(f, p)
    while len(f) - 1 >= 2 * (d + 1):
        d += 1
        h = powmod_p(h, p, f, p)
        g = gcd_p(sub_p(h, [0, 1], p), f, p)
        if len(g) > 1:
            out.append((g, d))
            f = divmod_p(f, g, p)[0]
            h = rem_p(h, f, p)
    if len(f) > 1:
        out.append((f, len(f) - 1))
    return out


def _equal_degree_p(f, d, p, rng):
    n = len(f) - 1
    if n == d:
        return [f]
    while True:
        a = trim([rng.randrange(p) for _ in range(n)])
        if len(a) <= 1:
            continue
        if p == 2:
            t = a
            acc = a
            for _ in range(d - 1):
                acc = rem_p(mul_p(acc, acc, p), f, p)
                t = add_p(t, acc, p)
            g = gcd_p(t, f, p)
        else:
            b = powmod_p(a, (p ** d - 1) // 2, f, p)
            g = gcd_p(sub_p(b, [1], p), f, p)
        if 1 < len(g) < len(f):
            q = divmod_p(f, g, p)[0]
            return _equal_degree_p(g, d, p, rng) + _equal_degree_p(q, d, p, rng)


def factor_mod_p(f, p):
    """Monic irreducible factors of f mod p with multiplicities.

    Sorted by (degree, coefficients).  The splitting randomness is seeded
    from the input, so the output is deterministic.
    """
    f = trim_p(f, p)
    if not f:
        raise ValueError("zero polynomial mod p")
    rng = random.Random(f"{p}:{f}")
    out = []
    for g, e in squarefree_decomposition_p(f, p):
        for h, d in distinct_degree_p(g, p):
            for k in _equal_degree_p(h, d, p, rng):
                out.append((k, e))
    out.sort(key=lambda t: (len(t[0]), t[0][::-1], t[1]))
    return out


def is_irreducible_p(f, p):
    f = trim_p(f, p)
    if len(f) <= 1:
        return False
    fac = factor_mod_p(f, p)
    return len(fac) == 1 and fac[0][1] == 1


def roots_mod_p(f, p):
    return sorted((-g[0]) % p for g, _ in factor_mod_p(f, p) if len(g) == 2)


# ---------------------------------------------------------------- F_q


def fq_is_square(a, g, p):
    """Whether a (a poly mod irreducible g) is a square in F_p[x]/g."""
    a = rem_p(a, g, p)
    if not a or p == 2:
        return True
    q = p ** (len(g) - 1)
    return powmod_p(a, (q - 1) // 2, g, p) == [1]


def fq_sqrt(a, g, p):
    """A square root in F_p[x]/g (g irreducible), or None."""
    a = rem_p(a, g, p)
    if not a:
        return []
    d = len(g) - 1
    q = p ** d
    if p == 2:
        return powmod_p(a, q // 2, g, p)
    if not fq_is_square(a, g, p):
        return None
    s, t = 0, q - 1
    while t % 2 == 0:
        t //= 2
        s += 1
    z = None
    for coeffs in product(range(p), repeat=d):
        cand = trim(list(coeffs))
        if cand and not fq_is_square(cand, g, p):
            z = cand
            break
    m = s
    c = powmod_p(z, t, g, p)
    tt = powmod_p(a, t, g, p)
    r = powmod_p(a, (t + 1) // 2, g, p)
    while tt != [1]:
        i, t2 = 0, tt
        while t2 != [1]:
            t2 = rem_p(mul_p(t2, t2, p), g, p)
            i += 1
        b = c
        for _ in range(m - i - 1):
            b = rem_p(mul_p(b, b, p), g, p)
        m = i
        c = rem_p(mul_p(b, b, p), g, p)
        tt = rem_p(mul_p(tt, c, p), g, p)
        r = rem_p(mul_p(r, b, p), g, p)
    return r


def crt_p(residues, moduli, p):
    """Combine residues modulo pairwise coprime polynomials over F_p."""
    x, m = [], [1]
    for r, g in zip(residues, moduli):
        # solve x + m*t == r mod g
        inv = _inv_mod_poly(rem_p(m, g, p), g, p)
        t = rem_p(mul_p(sub_p(r, x, p), inv, p), g, p)
        x = add_p(x, mul_p(m, t, p), p)
        m = mul_p(m, g, p)
    return rem_p(x, m, p) if len(m) > 1 else x


def _inv_mod_poly(a, m, p):
    r0, r1 = trim_p(m, p), trim_p(a, p)
    s0, s1 = [], [1]
    while r1:
        q, r = divmod_p(r0, r1, p)
        r0, r1 = r1, r
        s0, s1 = s1, sub_p(s0, mul_p(q, s1, p), p)
    if len(r0) != 1:
        raise ZeroDivisionError("not invertible mod polynomial")
    inv = pow(r0[0], -1, p)
    return [c * inv % p for c in s0]


# ---------------------------------------------------------------- over Z


def squarefree_decomposition(f):
    """Yun over Q; returns [(primitive g, e)] with f = c * prod g^e."""
    f = primitive_part(f)
    out = []
    if len(f) <= 1:
        return out
    c = pgcd(f, pderiv(f))
    w = pdivmod(f, c)[0]
    i = 1
    while len(w) > 1:
        y = pgcd(w, c)
        z = pdivmod(w, y)[0]
        if len(z) > 1:
            out.append((primitive_part(z), i))
        i += 1
        w = y
        c = pdivmod(c, y)[0]
    return out


def _good_primes(f, count, start=2):
    out = []
    p = start - 1
    lead = f[-1]
    while len(out) < count:
        p = next_prime(p)
        if lead % p and is_squarefree_p(f, p):
            out.append(p)
        if p > 5000:
            break
    return out


def _subset_degrees(degs):
    sums = {0}
    for d in degs:
        sums |= {s + d for s in sums}
    return sums


def possible_factor_degrees(f, trials=6):
    """Degrees a proper factor of squarefree f could have, via mod-p patterns."""
    n = len(f) - 1
    allowed = set(range(1, n))
    for p in _good_primes(f, trials):
        degs = [len(g) - 1 for g, _ in factor_mod_p(f, p)]
        allowed &= _subset_degrees(degs)
        if not allowed:
            break
    return sorted(allowed)


def _interpolate(xs, ys):
    n = len(xs)
    out = [Fraction(0)] * n
    for i in range(n):
        num = [Fraction(1)]
        den = Fraction(1)
        for j in range(n):
            if j != i:
                num = pmul(num, [-xs[j], 1])
                den *= xs[i] - xs[j]
        c = Fraction(ys[i]) / den
        for k, a in enumerate(num):
            out[k] += c * a
    return trim(out)


def _kronecker_factor(f, d):
    """A factor of degree d of the squarefree primitive f, or None."""
    pts = []
    x = 0
    tried = set()
    cand = []
    for r in range(0, 40):
        for x in (r, -r):
            if x in tried:
                continue
            tried.add(x)
            v = peval(f, x)
            if v == 0:
                return [-x, 1]
            cand.append((len(divisors(v)), abs(v), x, v))
    cand.sort()
    pts = cand[: d + 1]
    xs = [t[2] for t in pts]
    choices = []
    for i, t in enumerate(pts):
        divs = divisors(t[3])
        choices.append(divs if i == 0 else divs + [-q for q in divs])
    lead = f[-1]
    for ys in product(*choices):
        h = _interpolate(xs, list(ys))
        if len(h) != d + 1 or any(c.denominator != 1 for c in h):
            continue
        h = [int(c) for c in h]
        if lead % h[-1]:
            continue
        q, r = pdivmod(f, h)
        if not r and all(c.denominator == 1 for c in q):
            return primitive_part(h)
    return None


def factor_squarefree_Z(f):
    """Irreducible factors over Z of a squarefree primitive polynomial."""
    f = primitive_part(f)
    if len(f) <= 2:
        return [f]
    if f[0] == 0:
        return [[0, 1]] + factor_squarefree_Z(f[1:])
    degs = [d for d in possible_factor_degrees(f) if d <= (len(f) - 1) // 2]
    for d in degs:
        h = _kronecker_factor(f, d)
        if h is not None:
            q = primitive_part(pdivmod(f, h)[0])
            return factor_squarefree_Z(h) + factor_squarefree_Z(q)
    return [f]


def factor_Z(f):
    """(content, [(irreducible primitive factor, multiplicity)]).

    The sign of f is absorbed into the content.
    """
    f = trim(f)
    if not f:
        raise ValueError("cannot factor zero")
    c = content(f)
    if f[-1] < 0:
        c = -c
    out = []
    for g, e in squarefree_decomposition(f):
        for h in factor_squarefree_Z(g):
            out.append((h, e))
    return c, out


def is_irreducible_Z(f):
    f = primitive_part(f)
    if len(f) <= 2:
        return len(f) == 2
    for p in _good_primes(f, 3):
        if is_irreducible_p(f, p):
            return True
    _, fac = factor_Z(f)
    return len(fac) == 1 and fac[0][1] == 1


def first_prime_where(pred, start=2, limit=10 ** 6):
    p = start
    while p <= limit:
        if is_prime(p) and pred(p):
            return p
        p += 1
    return None
