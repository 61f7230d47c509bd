"""Density kernels: the compiled module when built, the numpy fallback otherwise."""

import math

import numpy as np

from .arith import primes_upto

try:
    from . import _kernels as _impl
    BACKEND = "compiled"
except ImportError:  # extension not built
    from . import _kernels_py as _impl
    BACKEND = "numpy"

box_census = _impl.box_census
lift_census = _impl.lift_census
brute_census = _impl.brute_census


def squarefree_table(limit, prime_bound=None):
    """uint8 array s with s[m] = 1 iff no p^2 divides m (p <= prime_bound if given)."""
    s = np.ones(limit + 1, dtype=np.uint8)
    s[0] = 0
    top = math.isqrt(limit) if prime_bound is None else min(prime_bound, math.isqrt(limit))
    for q in primes_upto(top):
        s[q * q::q * q] = 0
    return s


def cubic_disc_bound(X):
    """An upper bound for |disc| over binary cubics of height at most X."""
    return 54 * X ** 4
