"""Small exact integer and rational helpers shared across the package."""

from fractions import Fraction
from functools import lru_cache
from math import gcd, isqrt


def primes_upto(n):
    """All primes <= n, ascending."""
    if n < 2:
        return []
    sieve = bytearray([1]) * (n + 1)
    sieve[0] = sieve[1] = 0
    for p in range(2, isqrt(n) + 1):
        if sieve[p]:
            sieve[p * p::p] = bytearray(len(range(p * p, n + 1, p)))
    return [i for i in range(n + 1) if sieve[i]]


@lru_cache(maxsize=None)
def _small_primes(limit):
    return tuple(primes_upto(limit))


def is_prime(n):
    if n < 2:
        return False
    for p in _small_primes(200):
        if n % p == 0:
            return n == p
    # deterministic Miller-Rabin for n < 3.3e24
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def next_prime(n):
    n = max(n + 1, 2)
    while not is_prime(n):
        n += 1
    return n


def trial_factor(n, cutoff=None):
    """Factor |n| by trial division.

    Returns (factors, cofactor) where factors maps primes to exponents and
    cofactor is the unfactored part (1 when the factorization is complete).
    With cutoff=None the division runs to sqrt, so the cofactor is 1 or prime
    and is folded into factors.
    """
    n = abs(n)
    if n == 0:
        raise ValueError("cannot factor zero")
    out = {}
    p = 2
    while n % p == 0:
        out[p] = out.get(p, 0) + 1
        n //= p
    p = 3
    lim = cutoff if cutoff is not None else isqrt(n)
    while p <= lim and p * p <= n:
        if n % p == 0:
            while n % p == 0:
                out[p] = out.get(p, 0) + 1
                n //= p
            if cutoff is None:
                lim = isqrt(n)
        p += 2
    if n > 1 and (cutoff is None or p * p > n):
        out[n] = out.get(n, 0) + 1
        n = 1
    return out, n


def factorint(n):
    return trial_factor(n)[0]


def divisors(n):
    n = abs(n)
    divs = [1]
    for p, e in factorint(n).items():
        divs = [d * p ** k for d in divs for k in range(e + 1)]
    return sorted(divs)


def is_square_int(n):
    return n >= 0 and isqrt(n) ** 2 == n


def is_square_rational(q):
    q = Fraction(q)
    return q >= 0 and is_square_int(q.numerator) and is_square_int(q.denominator)


def vp(n, p):
    """p-adic valuation of a nonzero integer or rational."""
    q = Fraction(n)
    if q == 0:
        raise ValueError("valuation of zero")
    v = 0
    a, b = q.numerator, q.denominator
    while a % p == 0:
        a //= p
        v += 1
    while b % p == 0:
        b //= p
        v -= 1
    return v


def content(values):
    g = 0
    for v in values:
        g = gcd(g, int(v))
    return g


def lcm(a, b):
    return abs(a * b) // gcd(a, b) if a and b else 0


def common_denominator(values):
    d = 1
    for v in values:
        d = lcm(d, Fraction(v).denominator)
    return d


def legendre(a, p):
    """Legendre symbol (a/p) for odd prime p."""
    a %= p
    if a == 0:
        return 0
    return 1 if pow(a, (p - 1) // 2, p) == 1 else -1


def sqrt_mod_prime(a, p):
    """A square root of a mod an odd prime p (Tonelli-Shanks), or None."""
    a %= p
    if a == 0:
        return 0
    if p == 2:
        return a
    if legendre(a, p) != 1:
        return None
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = 2
    while legendre(z, p) != -1:
        z += 1
    m, c, t, r = s, pow(z, q, p), pow(a, q, p), pow(a, (q + 1) // 2, p)
    while t != 1:
        i, t2 = 0, t
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        m, c = i, b * b % p
        t, r = t * c % p, r * b % p
    return r


def rational_reconstruct(a, m):
    """Find p/q == a mod m with |p|, q <= sqrt(m/2), or None."""
    a %= m
    bound = isqrt(m // 2)
    r0, r1 = m, a
    s0, s1 = 0, 1
    while r1 > bound:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        s0, s1 = s1, s0 - q * s1
    if s1 == 0 or abs(s1) > bound:
        return None
    if s1 < 0:
        r1, s1 = -r1, -s1
    if gcd(r1, s1) != 1:
        return None
    return Fraction(r1, s1)


def crt(residues, moduli):
    x, m = 0, 1
    for r, n in zip(residues, moduli):
        g = gcd(m, n)
        if (r - x) % g:
            raise ValueError("incompatible congruences")
        l = m // g * n
        t = ((r - x) // g) * pow(m // g, -1, n // g) % (n // g)
        x = (x + m * t) % l
        m = l
    return x, m


def squarefree_part_sign(q):
    """Map a nonzero rational to (sign, squarefree kernel of |q|)."""
    q = Fraction(q)
    n = abs(q.numerator) * q.denominator
    core = 1
    for p, e in factorint(n).items():
        if e % 2:
            core *= p
    return (1 if q > 0 else -1), core
