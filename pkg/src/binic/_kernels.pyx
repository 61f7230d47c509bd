# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled loops for the binary cubic density census."""


cdef inline long long _disc(long long a, long long b, long long c, long long d) nogil:
    return b * b * c * c - 4 * a * c * c * c - 4 * b * b * b * d - 27 * a * a * d * d + 18 * a * b * c * d


def box_census(long X, const unsigned char[:] squarefree, const unsigned char[:] sieved,
               long a_lo, long a_hi):
    """Tallies over the box |f_i| <= X of binary cubics with a_lo <= f_0 <= a_hi.

    Returns (total, zero, positive, negative, squarefree_positive,
    squarefree_negative, sieved_positive, sieved_negative), where sieved means
    the discriminant passes the second table (no p^2 factor for small p).
    """
    cdef long a, b, c, d
    cdef long long D, absD
    cdef long long total = 0, zero = 0, pos = 0, neg = 0, sfp = 0, sfn = 0, svp = 0, svn = 0
    cdef long long limit = squarefree.shape[0]
    with nogil:
        for a in range(a_lo, a_hi + 1):
            for b in range(-X, X + 1):
                for c in range(-X, X + 1):
                    for d in range(-X, X + 1):
                        total += 1
                        D = _disc(a, b, c, d)
                        if D == 0:
                            zero += 1
                            continue
                        if D > 0:
                            pos += 1
                            absD = D
                        else:
                            neg += 1
                            absD = -D
                        if absD >= limit or absD >= sieved.shape[0]:
                            with gil:
                                raise ValueError("squarefree table too short")
                        if squarefree[absD]:
                            if D > 0:
                                sfp += 1
                            else:
                                sfn += 1
                        if sieved[absD]:
                            if D > 0:
                                svp += 1
                            else:
                                svn += 1
    return total, zero, pos, neg, sfp, sfn, svp, svn


def lift_census(long p):
    """Number of cubics mod p^2 whose discriminant is divisible by p^2.

    Each residue f0 mod p is lifted to f0 + p f1; modulo p^2 the discriminant
    is D(f0) + p grad D(f0) . f1, so the lifts are counted exactly.
    """
    cdef long a, b, c, d
    cdef long long D, ga, gb, gc, gd
    cdef long long bad = 0
    cdef long long p3 = p * p * p, p4 = p3 * p
    with nogil:
        for a in range(p):
            for b in range(p):
                for c in range(p):
                    for d in range(p):
                        D = _disc(a, b, c, d)
                        if D % p:
                            continue
                        ga = (-4 * c * c * c - 54 * a * d * d + 18 * b * c * d) % p
                        gb = (2 * b * c * c - 12 * b * b * d + 18 * a * c * d) % p
                        gc = (2 * b * b * c - 12 * a * c * c + 18 * a * b * d) % p
                        gd = (-4 * b * b * b - 54 * a * a * d + 18 * a * b * c) % p
                        if ga or gb or gc or gd:
                            bad += p3
                        elif (D // p) % p == 0:
                            bad += p4
    return bad


def brute_census(long p):
    """Number of cubics mod p^2 with p^2 | disc, by direct enumeration."""
    cdef long a, b, c, d
    cdef long q = p * p
    cdef long long bad = 0
    with nogil:
        for a in range(q):
            for b in range(q):
                for c in range(q):
                    for d in range(q):
                        if _disc(a, b, c, d) % q == 0:
                            bad += 1
    return bad
