"""The rank-n ring R_f, the algebra K_f = Q[theta]/f(theta, 1), and based ideals.

Elements of K_f are stored by their rational coordinates in the power basis
1, theta, ..., theta^(n-1).  R_f has the basis zeta_0 = 1 and
zeta_k = f0 theta^k + f1 theta^(k-1) + ... + f_(k-1) theta.
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import product
from math import gcd

from . import linalg, polys
from .arith import common_denominator, is_prime, next_prime, rational_reconstruct
from .errors import IndexOutOfRange, NonInvertible, ZeroForm
from .forms import as_form, leading_normalize

__all__ = [
    "RankNRing", "AlgebraElement", "BasedIdeal", "SquareTest",
    "build_ring", "leading_normalize", "ideal_power", "mult_ideals",
    "dual_eval", "is_maximal_at", "maximal_order", "is_square",
]


def _F(x):
    return x if isinstance(x, Fraction) else Fraction(x)


class RankNRing:
    """R_f for a form with nonzero leading coefficient, plus K_f arithmetic."""

    def __init__(self, f, gamma=None):
        f = as_form(f)
        if f.is_zero():
            raise ZeroForm("ring of the zero form")
        if f[0] == 0:
            raise ValueError("RankNRing needs f0 != 0; use build_ring")
        self.form = f
        self.gamma = gamma
        self.n = f.degree
        n = self.n
        self.f0 = f[0]
        # monic relation theta^n = -sum_{i>=1} (f_i/f0) theta^(n-i)
        self._reduce = self._reduction_table()
        self.zeta = [self._zeta_coords(k) for k in range(n)]
        self._zeta_inv = linalg.inverse(self.zeta)
        self.table = self._build_table()
        self.disc = self._trace_disc()

    # -- K_f arithmetic in theta coordinates

    def _reduction_table(self):
        n, f = self.n, self.form
        top = [Fraction(-f[n - j], f[0]) for j in range(n)]  # theta^n
        red = {n: top}
        for k in range(n + 1, 2 * n - 1):
            prev = red[k - 1]
            cur = [Fraction(0)] + prev[:-1]
            lead = prev[-1]
            if lead:
                cur = [c + lead * t for c, t in zip(cur, top)]
            red[k] = cur
        return red

    def reduce_poly(self, coeffs):
        n = self.n
        out = [Fraction(0)] * n
        for k, c in enumerate(coeffs):
            if not c:
                continue
            if k < n:
                out[k] += c
            else:
                for j, t in enumerate(self._reduce[k]):
                    out[j] += c * t
        return out

    def mul_coords(self, u, v):
        prod = [Fraction(0)] * (2 * self.n - 1)
        for i, a in enumerate(u):
            if a:
                for j, b in enumerate(v):
                    if b:
                        prod[i + j] += a * b
        return self.reduce_poly(prod)

    def _zeta_coords(self, k):
        f = self.form
        v = [Fraction(0)] * self.n
        if k == 0:
            v[0] = Fraction(1)
            return v
        for i in range(k):
            v[k - i] = Fraction(f[i])
        return v

    def to_zeta(self, coords):
        return linalg.vec_mat(list(coords), self._zeta_inv)

    def from_zeta(self, zc):
        return linalg.vec_mat(list(zc), self.zeta)

    def mult_matrix(self, u):
        """Rows are the theta-coordinates of u * theta^j."""
        rows = []
        cur = [_F(c) for c in u]
        for _ in range(self.n):
            rows.append(cur)
            cur = self.reduce_poly([Fraction(0)] + cur)
        return rows

    def _build_table(self):
        n = self.n
        T = [[None] * n for _ in range(n)]
        for i in range(n):
            for j in range(i, n):
                zc = self.to_zeta(self.mul_coords(self.zeta[i], self.zeta[j]))
                if any(c.denominator != 1 for c in zc):
                    raise AssertionError("non-integral structure constant")
                row = [int(c) for c in zc]
                T[i][j] = row
                T[j][i] = row
        return T

    def _trace_disc(self):
        n = self.n
        tr = [sum(self.table[k][j][j] for j in range(n)) for k in range(n)]
        gram = [[sum(self.table[i][j][k] * tr[k] for k in range(n)) for j in range(n)]
                for i in range(n)]
        return linalg.det(gram)

    # -- convenience

    def element(self, coords):
        return AlgebraElement(self, tuple(_F(c) for c in coords))

    def theta_power(self, k):
        v = [0] * (2 * self.n)
        v[k] = 1
        return self.element(self.reduce_poly(v))

    def zeta_element(self, k):
        return self.element(self.zeta[k])

    def one(self):
        return self.theta_power(0)

    def __eq__(self, other):
        return isinstance(other, RankNRing) and other.form == self.form

    def __hash__(self):
        return hash(self.form)

    def unit_ideal(self):
        return BasedIdeal(self, self.zeta)


def build_ring(f):
    """R_f, after moving to a form with nonzero leading coefficient if needed.

    The SL2(Z) element used is kept in ``ring.gamma``.
    """
    f = as_form(f)
    if f.is_zero():
        raise ZeroForm("ring of the zero form")
    gamma, g = leading_normalize(f)
    return RankNRing(g, gamma)


@dataclass(frozen=True, eq=False)
class AlgebraElement:
    ring: RankNRing
    coords: tuple

    def _other(self, o):
        if isinstance(o, AlgebraElement):
            return o.coords
        c = [Fraction(0)] * self.ring.n
        c[0] = _F(o)
        return c

    def __add__(self, o):
        return AlgebraElement(self.ring, tuple(a + b for a, b in zip(self.coords, self._other(o))))

    __radd__ = __add__

    def __neg__(self):
        return AlgebraElement(self.ring, tuple(-a for a in self.coords))

    def __sub__(self, o):
        return self + (-AlgebraElement(self.ring, tuple(self._other(o))))

    def __mul__(self, o):
        if isinstance(o, AlgebraElement):
            return AlgebraElement(self.ring, tuple(self.ring.mul_coords(self.coords, o.coords)))
        return AlgebraElement(self.ring, tuple(a * _F(o) for a in self.coords))

    __rmul__ = __mul__

    def __truediv__(self, o):
        if isinstance(o, AlgebraElement):
            return self * o.inverse()
        return AlgebraElement(self.ring, tuple(a / _F(o) for a in self.coords))

    def __pow__(self, k):
        if k < 0:
            return self.inverse() ** (-k)
        r = self.ring.one()
        b = self
        while k:
            if k & 1:
                r = r * b
            b = b * b
            k >>= 1
        return r

    def __eq__(self, o):
        return isinstance(o, AlgebraElement) and self.coords == o.coords and self.ring == o.ring

    def __hash__(self):
        return hash(self.coords)

    def is_zero(self):
        return not any(self.coords)

    def norm(self):
        return linalg.det(self.ring.mult_matrix(self.coords))

    def trace(self):
        M = self.ring.mult_matrix(self.coords)
        return sum(M[i][i] for i in range(self.ring.n))

    def inverse(self):
        M = self.ring.mult_matrix(self.coords)
        try:
            Minv = linalg.inverse(M)
        except ZeroDivisionError:
            raise NonInvertible("element is a zero divisor") from None
        return AlgebraElement(self.ring, tuple(Minv[0]))

    def zeta_coords(self):
        return self.ring.to_zeta(self.coords)

    def is_integral_in_Rf(self):
        return all(c.denominator == 1 for c in self.zeta_coords())

    def __repr__(self):
        return f"AlgebraElement({[str(c) for c in self.coords]})"


def dual_eval(ring, k, r):
    """theta-check_k(r) for an integer k, or zeta-check_(n-1)(r) for k='zeta'."""
    coords = r.coords if isinstance(r, AlgebraElement) else r
    if k == "zeta":
        return _F(coords[ring.n - 1]) / ring.f0
    if not 0 <= k < ring.n:
        raise IndexOutOfRange(f"dual index {k}")
    return _F(coords[k])


# ---------------------------------------------------------------- ideals


class BasedIdeal:
    """A fractional R_f-ideal with an ordered basis (theta coordinates)."""

    def __init__(self, ring, basis):
        self.ring = ring
        self.basis = tuple(tuple(_F(x) for x in r) for r in basis)
        if len(self.basis) != ring.n:
            raise ValueError("basis must have n rows")

    @cached_property
    def signed_norm(self):
        return Fraction(linalg.det([list(r) for r in self.basis])) / linalg.det(self.ring.zeta)

    @property
    def norm(self):
        return abs(self.signed_norm)

    @property
    def orientation(self):
        s = self.signed_norm
        return (s > 0) - (s < 0)

    @cached_property
    def canonical(self):
        d, H = linalg.hnf_rational(self.basis)
        return d, tuple(tuple(r) for r in H)

    def canonical_ideal(self):
        d, H = self.canonical
        return BasedIdeal(self.ring, [[Fraction(x, d) for x in r] for r in H])

    def same_module(self, other):
        return self.canonical == other.canonical

    def elements(self):
        return [AlgebraElement(self.ring, r) for r in self.basis]

    def contains(self, e):
        coords = e.coords if isinstance(e, AlgebraElement) else e
        return linalg.lattice_contains([list(r) for r in self.basis], list(coords))

    def contains_ideal(self, other):
        return all(self.contains(r) for r in other.basis)

    def is_ideal(self, order_basis=None):
        """Closure under multiplication by the basis of R_f (or of a given order)."""
        gens = order_basis if order_basis is not None else self.ring.zeta
        for z in gens:
            for b in self.basis:
                if not self.contains(self.ring.mul_coords(z, b)):
                    return False
        return True

    def scale(self, e):
        if not isinstance(e, AlgebraElement):
            return BasedIdeal(self.ring, [[x * _F(e) for x in r] for r in self.basis])
        return BasedIdeal(self.ring, [self.ring.mul_coords(e.coords, r) for r in self.basis])

    def __mul__(self, other):
        return mult_ideals(self, other)

    def __eq__(self, other):
        return isinstance(other, BasedIdeal) and self.ring == other.ring and self.basis == other.basis

    def __hash__(self):
        return hash(self.basis)

    def dumps(self):
        d = common_denominator(x for r in self.basis for x in r)
        lines = [str(d)]
        for r in self.basis:
            lines.append(" ".join(str(int(x * d)) for x in r))
        return "\n".join(lines) + "\n"

    @classmethod
    def loads(cls, ring, text):
        toks = [int(t) for t in text.split()]
        d, rest = toks[0], toks[1:]
        n = ring.n
        if len(rest) != n * n:
            raise ValueError("expected n*n matrix entries")
        return cls(ring, [[Fraction(rest[i * n + j], d) for j in range(n)] for i in range(n)])

    def __repr__(self):
        return f"BasedIdeal(norm={self.norm}, basis={[[str(x) for x in r] for r in self.basis]})"


def ideal_power(ring, k):
    """I_f^k with basis 1, theta, ..., theta^k, zeta_(k+1), ..., zeta_(n-1)."""
    n = ring.n
    if not 0 <= k <= n - 1:
        raise IndexOutOfRange(f"ideal power {k} outside 0..{n - 1}")
    rows = []
    for j in range(n):
        if j <= k:
            v = [Fraction(0)] * n
            v[j] = Fraction(1)
            rows.append(v)
        else:
            rows.append(list(ring.zeta[j]))
    return BasedIdeal(ring, rows)


def span_ideal(ring, vectors):
    d, H = linalg.hnf_rational(vectors)
    if len(H) != ring.n:
        raise ValueError("vectors do not span a full lattice")
    return BasedIdeal(ring, [[Fraction(x, d) for x in r] for r in H])


def mult_ideals(I, J):
    if I.ring != J.ring:
        raise ValueError("ideals over different rings")
    ring = I.ring
    prods = [ring.mul_coords(a, b) for a in I.basis for b in J.basis]
    return span_ideal(ring, prods)


def ideal_sum(I, J):
    return span_ideal(I.ring, list(I.basis) + list(J.basis))


def colon(I, J):
    """(I : J) = {x in K_f : x J in I}."""
    ring = I.ring
    bases = []
    Ib = [list(r) for r in I.basis]
    for b in J.basis:
        binv = AlgebraElement(ring, b).inverse()
        bases.append([ring.mul_coords(binv.coords, r) for r in Ib])
    inter = linalg.lattice_intersection(bases)
    return span_ideal(ring, inter)


def ideal_inverse(I):
    return colon(I.ring.unit_ideal(), I)


# ---------------------------------------------------------------- orders


class Order:
    """A subring of K_f of full rank, given by a basis in theta coordinates."""

    def __init__(self, ring, basis):
        self.ring = ring
        self.lattice = span_ideal(ring, basis)
        self.basis = self.lattice.basis

    def structure_constants(self):
        B = [list(r) for r in self.basis]
        Binv = linalg.inverse(B)
        n = self.ring.n
        out = [[None] * n for _ in range(n)]
        for i in range(n):
            for j in range(i, n):
                c = linalg.vec_mat(self.ring.mul_coords(B[i], B[j]), Binv)
                assert all(x.denominator == 1 for x in c), "basis does not span an order"
                out[i][j] = out[j][i] = [int(x) for x in c]
        return out

    def index_in(self, other):
        """[other : self] for self inside other."""
        return Fraction(linalg.det([list(r) for r in self.basis])) / linalg.det([list(r) for r in other.basis])

    def radical(self, p):
        """Basis of the p-radical {x : x^(p^j) in pO} as an ideal of this order."""
        n = self.ring.n
        B = [list(r) for r in self.basis]
        Binv = linalg.inverse(B)
        # Frobenius matrix on O/pO in the order's basis
        frob = []
        for b in B:
            e = AlgebraElement(self.ring, b) ** p
            c = linalg.vec_mat(list(e.coords), Binv)
            frob.append([int(x) % p for x in c])
        j = 1
        while p ** j < n:
            j += 1
        M = linalg.identity(n)
        for _ in range(j):
            M = [[sum(M[i][k] * frob[k][l] for k in range(n)) % p for l in range(n)] for i in range(n)]
        kern = linalg.left_kernel_mod(M, p)
        gens = [[p * x for x in b] for b in B]
        for v in kern:
            gens.append(linalg.vec_mat(v, B))
        return span_ideal(self.ring, gens)

    def multiplier_ring(self, I):
        """{x : x I in I}."""
        return Order(self.ring, colon(I, I).basis)

    def enlarge_at(self, p):
        return self.multiplier_ring(self.radical(p))

    def is_maximal_at(self, p):
        return self.enlarge_at(p).index_in(self) == 1

    def contains(self, e):
        return self.lattice.contains(e)


def ring_as_order(ring):
    return Order(ring, ring.zeta)


def is_maximal_at(f, p):
    """Whether R_f is p-maximal, by the multiplier ring of its p-radical."""
    if not is_prime(p):
        raise ValueError("p must be prime")
    ring = f if isinstance(f, RankNRing) else build_ring(f)
    if ring.disc % (p * p):
        return True
    return ring_as_order(ring).is_maximal_at(p)


def maximal_order(ring, primes=None):
    """The integral closure of Z in K_f, by repeated multiplier-ring enlargement."""
    from .arith import factorint

    O = ring_as_order(ring)
    if primes is None:
        primes = [p for p, e in factorint(ring.disc).items() if e >= 2]
    for p in primes:
        while True:
            O2 = O.enlarge_at(p)
            if O2.index_in(O) == 1:
                break
            O = O2
    return O


# ---------------------------------------------------------------- squares


@dataclass(frozen=True)
class SquareTest:
    status: str  # "yes", "no" or "unknown"
    root: object = None
    witness: tuple = None

    def __bool__(self):
        if self.status == "unknown":
            raise ValueError("inconclusive square test has no truth value")
        return self.status == "yes"


def _integral_poly(e):
    D = common_denominator(e.coords)
    # sqrt(e) = sqrt(e * D^2) / D
    return [int(c * D * D) for c in e.coords], D


def _good_primes_for(ring, e_int, count, start=3):
    F = ring.form.dehomogenize()
    out = []
    p = start - 1
    while len(out) < count:
        p = next_prime(p)
        if p == 2 or ring.f0 % p == 0:
            continue
        if not polys.is_squarefree_p(F, p):
            continue
        out.append(p)
    return out


def _mul_mod(u, v, Fm, pk):
    n = len(Fm) - 1
    prod = [0] * (2 * n - 1)
    for i, a in enumerate(u):
        if a:
            for j, b in enumerate(v):
                prod[i + j] += a * b
    for k in range(2 * n - 2, n - 1, -1):
        c = prod[k] % pk
        if c:
            for j in range(n + 1):
                prod[k - n + j] -= c * Fm[j]
    return [x % pk for x in prod[:n]]


def _lift_sqrt(r0, e_int, Fm_int, p, k):
    """Newton-lift r0 (r0^2 = e mod p) to precision p^k in (Z/p^k)[x]/Fm."""
    n = len(Fm_int) - 1
    prec = 1
    r = [x % p for x in r0] + [0] * (n - len(r0))
    # inverse of 2r mod p, then lift together
    inv = _inverse_mod_poly_ring(r, Fm_int, p)
    inv = [(x * pow(2, -1, p)) % p for x in inv]
    while prec < k:
        prec = min(2 * prec, k)
        pk = p ** prec
        Fm = [c % pk for c in Fm_int]
        # refine inverse of 2r to precision pk
        two_r = [(2 * x) % pk for x in r]
        for _ in range(2):
            t = _mul_mod(two_r, inv, Fm, pk)
            t = [(-x) % pk for x in t]
            t[0] = (t[0] + 2) % pk
            inv = _mul_mod(inv, t, Fm, pk)
        sq = _mul_mod(r, r, Fm, pk)
        diff = [(a - b) % pk for a, b in zip(sq, e_int + [0] * (n - len(e_int)))]
        corr = _mul_mod(diff, inv, Fm, pk)
        r = [(a - b) % pk for a, b in zip(r, corr)]
    return r


def _inverse_mod_poly_ring(a, Fm_int, p):
    g = polys.trim_p(Fm_int, p)
    inv = polys._inv_mod_poly(polys.trim_p(a, p), g, p)
    n = len(Fm_int) - 1
    return inv + [0] * (n - len(inv))


def is_square(e, witness_primes=40, max_bits=4096):
    """Three-valued square test in K_f with an exact or modular witness."""
    ring = e.ring
    if e.norm() == 0:
        raise NonInvertible("square test needs an invertible element")
    n = ring.n
    e_int, D = _integral_poly(e)
    F = ring.form.dehomogenize()
    best = None
    for p in _good_primes_for(ring, e_int, witness_primes):
        fac = polys.factor_mod_p(F, p)
        roots = []
        for g, _ in fac:
            ebar = polys.rem_p(e_int, g, p)
            if not ebar:
                roots = None
                break
            s = polys.fq_sqrt(ebar, g, p)
            if s is None:
                return SquareTest("no", witness=(p, tuple(g)))
            roots.append((g, s))
        if roots is not None and (best is None or len(roots) < len(best[1])):
            best = (p, roots)
    if best is None:
        return SquareTest("unknown")
    p, roots = best
    gs = [g for g, _ in roots]
    m = len(roots)
    bits = 64
    while bits <= max_bits:
        k = max(2, bits // p.bit_length() + 1)
        pk = p ** k
        inv_f0 = pow(ring.f0, -1, pk)
        Fm_int = [c * inv_f0 % pk for c in F]
        for signs in product((1, -1), repeat=m - 1):
            signs = (1,) + signs
            parts = [[(sg * c) % p for c in s] for sg, (_, s) in zip(signs, roots)]
            r0 = polys.crt_p(parts, gs, p)
            r = _lift_sqrt(r0, e_int, Fm_int, p, k)
            cand = []
            for c in r:
                q = rational_reconstruct(c, pk)
                if q is None:
                    break
                cand.append(q)
            else:
                root = AlgebraElement(ring, tuple(cand))
                if (root * root).coords == tuple(Fraction(c) for c in e_int):
                    return SquareTest("yes", root=root / D)
        bits *= 2
    return SquareTest("unknown")
