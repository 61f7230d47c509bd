"""Zero patterns that force a pair to be not absolutely irreducible."""

import random

from ..errors import BinicError
from ..forms import discriminant, factor_over_Q
from ..pairs import SymPair, is_reducible, resolvent


def _pattern_pair(n, zero, rng, bound):
    A = [[0] * n for _ in range(n)]
    B = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            if zero(i, j) or zero(j, i):
                continue
            A[i][j] = A[j][i] = rng.randint(-bound, bound)
            B[i][j] = B[j][i] = rng.randint(-bound, bound)
    return SymPair(n, A, B)


def block_zero(k, n):
    """Pattern (a): a_ij = b_ij = 0 for i <= k, j <= n - k (1-based)."""
    return lambda i, j: i < k and j < n - k


def corner_zero(n):
    """Pattern (b): the upper-left (n-1)/2 square block of both matrices vanishes."""
    m = (n - 1) // 2
    return lambda i, j: i < m and j < m


def has_repeated_factor(f):
    if all(c == 0 for c in f.coeffs):
        return True
    if discriminant(f) == 0:
        return True
    return any(e > 1 for _, e in factor_over_Q(f))


def reducible_patterns(n, trials=100, seed=0, bound=6):
    """Random fills of both zero patterns and the resulting degeneracy checks."""
    if n < 3 or n % 2 == 0:
        raise ValueError("n must be odd and at least 3")
    rng = random.Random(seed)
    report = {"n": n, "seed": seed, "trials": trials, "pattern_a": {}, "pattern_b": {}}
    ok = True
    for k in range(1, n):
        fails = 0
        for _ in range(trials):
            p = _pattern_pair(n, block_zero(k, n), rng, bound)
            if not has_repeated_factor(resolvent(p)):
                fails += 1
        report["pattern_a"][str(k)] = {"failures": fails}
        ok = ok and fails == 0
    tested = skipped = fails = 0
    for _ in range(trials):
        p = _pattern_pair(n, corner_zero(n), rng, bound)
        try:
            red = is_reducible(p)
        except BinicError:
            skipped += 1
            continue
        tested += 1
        if not red:
            fails += 1
    report["pattern_b"] = {"tested": tested, "skipped": skipped, "failures": fails}
    report["pass"] = ok and fails == 0 and tested > 0
    return report
