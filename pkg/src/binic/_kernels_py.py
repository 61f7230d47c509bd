"""numpy versions of the density loops, used when the compiled module is absent."""

import numpy as np


def _disc(a, b, c, d):
    return b * b * c * c - 4 * a * c * c * c - 4 * b * b * b * d - 27 * a * a * d * d + 18 * a * b * c * d


def box_census(X, squarefree, sieved, a_lo, a_hi):
    r = np.arange(-X, X + 1, dtype=np.int64)
    c, d = np.meshgrid(r, r, indexing="ij")
    c, d = c.ravel(), d.ravel()
    total = zero = pos = neg = sfp = sfn = svp = svn = 0
    limit = min(len(squarefree), len(sieved))
    for a in range(a_lo, a_hi + 1):
        for b in range(-X, X + 1):
            D = _disc(a, b, c, d)
            A = np.abs(D)
            if A.max() >= limit:
                raise ValueError("squarefree table too short")
            sf = squarefree[A].astype(bool)
            total += len(D)
            zero += int((D == 0).sum())
            pos += int((D > 0).sum())
            neg += int((D < 0).sum())
            sfp += int((sf & (D > 0)).sum())
            sfn += int((sf & (D < 0)).sum())
            sv = sieved[A].astype(bool) & (D != 0)
            svp += int((sv & (D > 0)).sum())
            svn += int((sv & (D < 0)).sum())
    return total, zero, pos, neg, sfp, sfn, svp, svn


def lift_census(p):
    r = np.arange(p, dtype=np.int64)
    a, b, c, d = (x.ravel() for x in np.meshgrid(r, r, r, r, indexing="ij"))
    D = _disc(a, b, c, d)
    hit = D % p == 0
    a, b, c, d, D = a[hit], b[hit], c[hit], d[hit], D[hit]
    ga = (-4 * c ** 3 - 54 * a * d * d + 18 * b * c * d) % p
    gb = (2 * b * c * c - 12 * b * b * d + 18 * a * c * d) % p
    gc = (2 * b * b * c - 12 * a * c * c + 18 * a * b * d) % p
    gd = (-4 * b ** 3 - 54 * a * a * d + 18 * a * b * c) % p
    moving = (ga != 0) | (gb != 0) | (gc != 0) | (gd != 0)
    flat = ~moving & ((D // p) % p == 0)
    return int(moving.sum()) * p ** 3 + int(flat.sum()) * p ** 4


def brute_census(p):
    q = p * p
    r = np.arange(q, dtype=np.int64)
    c, d = (x.ravel() for x in np.meshgrid(r, r, indexing="ij"))
    bad = 0
    for a in range(q):
        for b in range(q):
            bad += int((_disc(a, b, c, d) % q == 0).sum())
    return bad
