"""Class groups, narrow class groups and units of maximal orders at desk scale.

The class group is computed from a factor base of prime ideals of norm at
most the Minkowski bound.  Relations come from short elements (Fincke-Pohst
on the T2 form) of O_K and of each factor-base prime.  A candidate group
Z^FB / L is certified when every element of prime order in it is shown to
be non-principal by an exhaustive search over a fundamental domain of a
full-rank unit lattice; a trivial candidate needs no such search.
"""

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property

import mpmath
import numpy as np

from . import linalg
from .arith import factorint, is_prime, primes_upto, trial_factor, vp
from .errors import DegenerateForm, EffortExceeded
from .forms import as_form, discriminant, is_irreducible, leading_normalize, signature
from .rings import (AlgebraElement, BasedIdeal, RankNRing, colon, is_square, maximal_order,
                    mult_ideals, span_ideal)


# ---------------------------------------------------------------- orders


class OrderData:
    """The maximal order of K_f with integral structure constants and embeddings."""

    def __init__(self, f, order_basis=None):
        f = as_form(f)
        if discriminant(f) == 0 or not is_irreducible(f):
            raise DegenerateForm("class groups need an irreducible nondegenerate form")
        self.form = f
        _, g = leading_normalize(f)
        self.ring = RankNRing(g)
        self.n = self.ring.n
        self.r1, self.r2 = signature(g)
        given = order_basis is not None
        if not given:
            order_basis = maximal_order(self.ring).basis
        self.basis = [list(r) for r in order_basis]
        self._binv = linalg.inverse(self.basis)
        n = self.n
        table = [[None] * n for _ in range(n)]
        for i in range(n):
            for j in range(i, n):
                c = linalg.vec_mat(self.ring.mul_coords(self.basis[i], self.basis[j]), self._binv)
                if any(x.denominator != 1 for x in c):
                    raise ValueError("basis is not closed under multiplication")
                table[i][j] = table[j][i] = [int(x) for x in c]
        self.table = table
        self.index = abs(Fraction(linalg.det(self.basis)) / linalg.det(self.ring.zeta)) ** -1
        self.disc = int(Fraction(self.ring.disc) / self.index ** 2)
        self.maximal = not given or self.index == self.max_index
        self._prime_cache = {}
        self._root_cache = {}

    @cached_property
    def max_index(self):
        O = maximal_order(self.ring)
        return abs(Fraction(linalg.det(self.ring.zeta)) / linalg.det([list(r) for r in O.basis]))

    @property
    def signature(self):
        return self.r1, self.r2

    @property
    def minkowski_bound(self):
        n, r2 = self.n, self.r2
        return math.factorial(n) / n ** n * (4 / math.pi) ** r2 * math.sqrt(abs(self.disc))

    # -- element arithmetic in O coordinates

    def one(self):
        v = linalg.vec_mat([1] + [0] * (self.n - 1), self._binv)
        return [int(x) for x in v]

    def mul(self, u, v):
        n = self.n
        out = [0] * n
        for i, a in enumerate(u):
            if a:
                for j, b in enumerate(v):
                    if b:
                        t = self.table[i][j]
                        ab = a * b
                        for k in range(n):
                            out[k] += ab * t[k]
        return out

    def mult_matrix(self, u):
        return [self.mul(u, [1 if k == i else 0 for k in range(self.n)]) for i in range(self.n)]

    def norm(self, u):
        return linalg.det(self.mult_matrix(u))

    def to_element(self, u):
        return AlgebraElement(self.ring, linalg.vec_mat([Fraction(x) for x in u], self.basis))

    def from_element(self, e):
        c = linalg.vec_mat(list(e.coords), self._binv)
        return c

    def integral_coords(self, e):
        c = self.from_element(e)
        if any(x.denominator != 1 for x in c):
            return None
        return [int(x) for x in c]

    def as_ideal(self, rows):
        """BasedIdeal over the ring for a lattice given in O coordinates."""
        return BasedIdeal(self.ring, [linalg.vec_mat([Fraction(x) for x in r], self.basis) for r in rows])

    def unit_ideal(self):
        return self.as_ideal(linalg.identity(self.n))

    # -- embeddings

    def roots(self, prec):
        prec = max(128, 1 << (prec - 1).bit_length())
        if prec not in self._root_cache:
            g = self.ring.form
            with mpmath.workprec(prec):
                rts = mpmath.polyroots(list(g.coeffs), maxsteps=400 + 4 * prec, extraprec=2 * prec)
                rts = [mpmath.mpc(r) for r in rts]
                order = sorted(rts, key=lambda z: abs(z.imag))
                real = sorted((z.real for z in order[:self.r1]))
                cplx = sorted((z for z in order[self.r1:] if z.imag > 0), key=lambda z: (z.real, z.imag))
                emb = [mpmath.mpc(x) for x in real] + cplx
                omega = [[mpmath.fsum(mpmath.mpf(c.numerator) / c.denominator * z ** j
                                      for j, c in enumerate(row)) for z in emb] for row in self.basis]
            self._root_cache[prec] = (emb, omega)
        return self._root_cache[prec]

    @cached_property
    def real_embedding_matrix(self):
        """Rows: the T2-isometric real image of each basis element."""
        _, omega = self.roots(128)
        rows = []
        for k in range(self.n):
            row = [float(omega[k][s].real) for s in range(self.r1)]
            for s in range(self.r1, self.r1 + self.r2):
                z = omega[k][s]
                row += [math.sqrt(2) * float(z.real), math.sqrt(2) * float(z.imag)]
            rows.append(row)
        return np.array(rows)

    def _embed(self, e):
        """Embeddings of a K-element (theta coords) at adequate precision."""
        coords = list(e.coords)
        size = max((abs(c.numerator).bit_length() + c.denominator.bit_length() for c in coords), default=1)
        prec = 96 + 2 * size
        emb, _ = self.roots(prec)
        with mpmath.workprec(prec):
            vals = [mpmath.fsum(mpmath.mpf(c.numerator) / c.denominator * z ** j
                                for j, c in enumerate(coords)) for z in emb]
        return vals, prec

    def signs(self, e):
        vals, prec = self._embed(e)
        out = []
        for v in vals[:self.r1]:
            if v.real == 0:
                raise ValueError("element vanishes at a real place")
            out.append(1 if v.real > 0 else -1)
        return tuple(out)

    def log_vector(self, e):
        """(log|sigma_i|) with complex places weighted twice."""
        vals, prec = self._embed(e)
        with mpmath.workprec(prec):
            out = [float(mpmath.log(abs(v))) for v in vals[:self.r1]]
            out += [2 * float(mpmath.log(abs(v))) for v in vals[self.r1:]]
        return out


# ---------------------------------------------------------------- primes


@dataclass
class PrimeIdeal:
    p: int
    f: int
    e: int
    rows: list        # lattice basis in O coordinates (HNF)
    tau: list         # x with x P in pO, x not in pO
    residue: list = None  # images of the basis in F_p when f = 1

    @property
    def norm(self):
        return self.p ** self.f

    def __repr__(self):
        return f"PrimeIdeal(p={self.p}, f={self.f}, e={self.e})"


def _mul_mod(O, u, v, p):
    return [x % p for x in O.mul(u, v)]


def _span_mod(rows, p):
    if not rows:
        return []
    R, _ = linalg.rref_mod([list(r) for r in rows], p)
    return [r for r in R if any(r)]


def _frobenius_matrix(O, p):
    n = O.n
    rows = []
    for k in range(n):
        e = [1 if i == k else 0 for i in range(n)]
        acc = O.one()
        base, ex = e, p
        while ex:
            if ex & 1:
                acc = _mul_mod(O, acc, base, p)
            base = _mul_mod(O, base, base, p)
            ex >>= 1
        rows.append([x % p for x in acc])
    return rows


def primes_above(O, p):
    """The prime ideals of O over p, by splitting O/pO over F_p."""
    if p in O._prime_cache:
        return O._prime_cache[p]
    n = O.n
    frob = _frobenius_matrix(O, p)
    j = 1
    while p ** j < n:
        j += 1
    M = linalg.identity(n)
    for _ in range(j):
        M = [[sum(M[i][k] * frob[k][l] for k in range(n)) % p for l in range(n)] for i in range(n)]
    J = _span_mod(linalg.left_kernel_mod(M, p), p)
    FmI = [[(frob[i][k] - (1 if i == k else 0)) % p for k in range(n)] for i in range(n)]
    stacked = FmI + [list(r) for r in J]
    kern = linalg.left_kernel_mod(stacked, p)
    berlekamp = _span_mod([v[:n] for v in kern], p)
    ideals = [J]
    basis_e = [[1 if i == k else 0 for i in range(n)] for k in range(n)]
    one = O.one()
    for z in berlekamp:
        nxt = []
        for I in ideals:
            for c in range(p):
                zc = [(a - c * b) % p for a, b in zip(z, one)]
                gens = list(I) + [_mul_mod(O, zc, b, p) for b in basis_e]
                S = _span_mod(gens, p)
                if len(S) < n and S not in nxt:
                    nxt.append(S)
        ideals = nxt
    out = []
    for S in ideals:
        f = n - len(S)
        rows = [[p if i == k else 0 for i in range(n)] for k in range(n)] + [list(r) for r in S]
        H = linalg.hnf(rows)
        if S:
            mat = []
            for x in basis_e:
                v = []
                for s in S:
                    v += _mul_mod(O, x, s, p)
                mat.append(v)
            kern = linalg.left_kernel_mod(mat, p)
            tau = [int(x) for x in kern[0]]
        else:
            tau = one
        P = PrimeIdeal(p, f, 0, H, tau)
        P.e = valuation(O, P, [p * x for x in one])
        if f == 1:
            P.residue = _residue_map(O, S, p)
        out.append(P)
    total = sum(P.e * P.f for P in out)
    if total != n:
        raise AssertionError(f"prime decomposition of {p} has sum e f = {total}")
    out.sort(key=lambda P: (P.f, P.e, P.rows))
    O._prime_cache[p] = out
    return out


def _residue_map(O, S, p):
    """Images in F_p of the basis elements for a degree-one prime with subspace S."""
    n = O.n
    # the functional vanishing on S with 1 -> 1
    kern = linalg.kernel_mod([list(r) for r in S], p) if S else None
    if kern is None:
        raise AssertionError("degree-one prime with empty subspace")
    lam = kern[0]
    one = O.one()
    s = sum(a * b for a, b in zip(lam, one)) % p
    inv = pow(s, -1, p)
    return [x * inv % p for x in lam]


def valuation(O, P, u):
    if not any(u):
        raise ValueError("valuation of zero")
    v = 0
    beta = list(u)
    while True:
        g = O.mul(beta, P.tau)
        if all(x % P.p == 0 for x in g):
            beta = [x // P.p for x in g]
            v += 1
        else:
            return v


# ---------------------------------------------------------------- lattice search


def lll(B, delta=0.99):
    """LLL reduction of the rows of a real matrix: (reduced rows, integer T) with reduced = T B."""
    B = np.array(B, dtype=float)
    m = len(B)
    T = [[1 if i == j else 0 for j in range(m)] for i in range(m)]

    def gso(B):
        R = np.linalg.qr(B.T, mode="r")
        d = np.diag(R)
        return R, d

    k = 1
    guard = 0
    while k < m and guard < 10000:
        guard += 1
        for j in range(k - 1, -1, -1):
            R, d = gso(B)
            q = round(R[j, k] / d[j])
            if q:
                B[k] -= q * B[j]
                T[k] = [a - q * b for a, b in zip(T[k], T[j])]
        R, d = gso(B)
        mu = R[k - 1, k] / d[k - 1]
        if d[k] ** 2 >= (delta - mu * mu) * d[k - 1] ** 2:
            k += 1
        else:
            B[[k - 1, k]] = B[[k, k - 1]]
            T[k - 1], T[k] = T[k], T[k - 1]
            k = max(k - 1, 1)
    return B, T


def fincke_pohst(basis, bound, limit=None):
    """Nonzero integer x (one of each +-x) with |x B|^2 <= bound, for real basis rows B."""
    B0 = np.array(basis, dtype=float)
    m = len(B0)
    B, T = lll(B0)
    R = np.linalg.qr(B.T, mode="r")
    d = np.diag(R)
    if np.any(np.abs(d) < 1e-300):
        raise ValueError("basis is degenerate")
    qd = d * d
    qo = R / d[:, None]
    bound = bound * (1 + 1e-9) + 1e-12
    out = []
    x = [0] * m
    Tl = [0.0] * m
    U = [0.0] * m
    UB = [0] * m
    i = m - 1
    Tl[i] = bound

    def init(i):
        Z = math.sqrt(max(Tl[i], 0.0) / qd[i])
        UB[i] = math.floor(Z - U[i])
        x[i] = math.ceil(-Z - U[i]) - 1

    init(i)
    while True:
        x[i] += 1
        if x[i] > UB[i]:
            i += 1
            if i >= m:
                return out
            continue
        if i > 0:
            Tl[i - 1] = Tl[i] - qd[i] * (x[i] + U[i]) ** 2
            i -= 1
            U[i] = sum(qo[i, j] * x[j] for j in range(i + 1, m))
            init(i)
            continue
        if not any(x):
            return out
        out.append(tuple(sum(x[a] * T[a][b] for a in range(m)) for b in range(m)))
        if limit is not None and len(out) >= limit:
            return out


def _lattice_real_basis(O, rows, weights=None):
    R = np.array(rows, dtype=float) @ O.real_embedding_matrix
    if weights is not None:
        R = R * np.array(weights)[None, :]
    return R


def short_elements(O, rows, bound, weights=None, limit=None):
    """Elements (O coordinates) of the lattice spanned by rows with weighted T2 <= bound."""
    R = _lattice_real_basis(O, rows, weights)
    out = []
    for x in fincke_pohst(R, bound, limit):
        out.append([sum(c * r[k] for c, r in zip(x, rows)) for k in range(O.n)])
    return out


# ---------------------------------------------------------------- relations


class _RelationState:
    def __init__(self, O, fb):
        self.O = O
        self.fb = fb
        self.index = {id(P): i for i, P in enumerate(fb)}
        self.rows = []       # exponent vectors over the factor base
        self.elements = []   # AlgebraElement generating each relation
        self.seen = set()

    def factor(self, u):
        O = self.O
        N = abs(O.norm(u))
        if N == 0:
            return None
        vec = [0] * len(self.fb)
        rest = N
        for p in primes_upto(max(2, int(O.minkowski_bound))):
            if rest % p:
                continue
            k = vp(rest, p)
            rest //= p ** k
            got = 0
            for P in primes_above(O, p):
                v = valuation(O, P, u)
                if v:
                    if id(P) not in self.index:
                        return None
                    vec[self.index[id(P)]] = v
                    got += v * P.f
            if got != k:
                raise AssertionError("valuations do not account for the norm")
        if rest != 1:
            return None
        return vec

    def add(self, u):
        key = tuple(u)
        neg = tuple(-x for x in u)
        if key in self.seen or neg in self.seen:
            return False
        self.seen.add(key)
        vec = self.factor(u)
        if vec is None:
            return False
        self.rows.append(vec)
        self.elements.append(self.O.to_element(u))
        return True


# ---------------------------------------------------------------- units


class CompactUnits:
    """Units as exponent vectors over a list of field elements (a compact representation)."""

    def __init__(self, O, elements):
        self.O = O
        self.elements = []
        self._logs = []
        self._signs = []
        self._nsign = []
        self._res = {}
        for e in elements:
            self.add_element(e)

    def add_element(self, e):
        self.elements.append(e)
        self._logs.append(self.O.log_vector(e))
        self._signs.append(self.O.signs(e))
        self._nsign.append(1 if e.norm() > 0 else -1)
        for P, r in self._res.items():
            r.append(_residue(self.O, P, e))
        return len(self.elements) - 1

    def pad(self, x):
        return list(x) + [0] * (len(self.elements) - len(x))

    def log(self, x):
        x = self.pad(x)
        return [sum(a * L[s] for a, L in zip(x, self._logs) if a) for s in range(self.O.r1 + self.O.r2)]

    def signs(self, x):
        x = self.pad(x)
        return tuple(math.prod(sg[i] for a, sg in zip(x, self._signs) if a % 2)
                     for i in range(self.O.r1))

    def norm_sign(self, x):
        return math.prod(s for a, s in zip(self.pad(x), self._nsign) if a % 2)

    def residue(self, x, P):
        if id(P) not in self._res:
            self._res[id(P)] = [_residue(self.O, P, e) for e in self.elements]
        r = self._res[id(P)]
        out = 1
        for a, v in zip(self.pad(x), r):
            if a:
                out = out * pow(v, a, P.p) % P.p
        return out

    def evaluate(self, x, max_bits=200000):
        """The unit as an exact element, or None when it would be too large."""
        x = self.pad(x)
        size = sum(abs(a) * _height(e) for a, e in zip(x, self.elements))
        if size > max_bits:
            return None
        acc = self.O.ring.one()
        for a, e in zip(x, self.elements):
            if a > 0:
                acc = acc * e ** a
            elif a < 0:
                acc = acc / e ** (-a)
        return acc


def _height(e):
    return max(abs(c.numerator).bit_length() + c.denominator.bit_length() for c in e.coords)


@dataclass
class UnitGroupData:
    system: CompactUnits
    units: list                  # exponent vectors over system.elements
    rank: int
    expected_rank: int
    sign_rank: int               # r with |sgn(O^x)| = 2^r
    totally_positive_mod_squares: int
    norm_one_mod_squares: int
    regulator_bound: float
    full_rank: bool
    two_saturated: bool
    logs: list = field(default_factory=list)

    @property
    def certified(self):
        return self.full_rank and self.two_saturated

    def element(self, i):
        return self.system.evaluate(self.units[i])


def _rational_coords(c, max_den=10 ** 4):
    out = []
    for v in c:
        q = Fraction(float(v)).limit_denominator(max_den)
        if abs(float(q) - v) > 1e-6 * (1 + abs(v)):
            return None
        out.append(q)
    return out


def _unit_basis(O, system, vectors):
    """A reduced basis (exponent vectors) of the unit lattice generated by vectors."""
    r = O.r1 + O.r2 - 1
    if r == 0:
        return [], []
    basis, logs = [], []
    rest = []
    for v in vectors:
        L = system.log(v)
        if max(abs(x) for x in L) < 1e-6:
            continue
        if len(basis) < r:
            M = np.array(logs + [L])[:, :r]
            if np.linalg.matrix_rank(M, tol=1e-6) == len(basis) + 1:
                basis.append(system.pad(v))
                logs.append(L)
                continue
        rest.append(v)
    if len(basis) < r:
        return basis, logs
    for v in rest:
        M = np.array(logs)[:, :r]
        c = np.linalg.solve(M.T, np.array(system.log(v))[:r])
        q = _rational_coords(c)
        if q is None or all(x.denominator == 1 for x in q):
            continue
        D = math.lcm(*(x.denominator for x in q))
        aug = [[D if i == j else 0 for j in range(r)] + [1 if i == j else 0 for j in range(r + 1)]
               for i in range(r)]
        aug.append([int(x * D) for x in q] + [1 if j == r else 0 for j in range(r + 1)])
        H = linalg.hnf(aug)
        T = [row[r:] for row in H[:r]]
        gens = basis + [system.pad(v)]
        basis = [[sum(t * g[k] for t, g in zip(trow, gens)) for k in range(len(gens[0]))] for trow in T]
        logs = [system.log(b) for b in basis]
    # size reduction of the log lattice
    _, T = lll(np.array(logs)[:, :r])
    basis = [[sum(t * b[k] for t, b in zip(trow, basis)) for k in range(len(basis[0]))] for trow in T]
    logs = [system.log(b) for b in basis]
    return basis, logs


def _degree_one_primes(O, count, above):
    out = []
    p = max(2, above)
    while len(out) < count and p < 10 ** 6:
        p += 1
        if not is_prime(p) or O.disc % p == 0:
            continue
        for P in primes_above(O, p):
            if P.f == 1:
                out.append(P)
    return out


def _residue(O, P, e):
    c = O.integral_coords(e)
    if c is None:
        num = O.integral_coords(e * O.ring.element([common_den(e)] + [0] * (O.n - 1)))
        return sum(a * b for a, b in zip(num, P.residue)) * pow(common_den(e), -1, P.p) % P.p
    return sum(a * b for a, b in zip(c, P.residue)) % P.p


def common_den(e):
    return math.lcm(*(c.denominator for c in e.coords))


def two_saturate(O, system, units, max_rounds=30):
    """Replace units by square roots until no product of -1 and the units is a square."""
    units = [system.pad(u) for u in units]
    above = max([P.p for P in getattr(system, "primes", [])] + [int(O.minkowski_bound) + 1])
    witnesses = _degree_one_primes(O, 60, above)
    for _ in range(max_rounds):
        zero = [0] * len(system.elements)
        basis = [None] + [system.pad(u) for u in units]
        replaced = False
        for combo in itertools.product((0, 1), repeat=len(basis)):
            if not any(combo):
                continue
            x = [0] * len(system.elements)
            for k in range(1, len(basis)):
                if combo[k]:
                    x = [a + b for a, b in zip(x, basis[k])]
            sg = system.signs(x)
            if combo[0]:
                sg = tuple(-s for s in sg)
            if any(s < 0 for s in sg):
                continue
            witnessed = False
            for P in witnesses:
                val = system.residue(x, P)
                if combo[0]:
                    val = (-val) % P.p
                if _legendre(val, P.p) == P.p - 1:
                    witnessed = True
                    break
            if witnessed:
                continue
            prod = system.evaluate(x)
            if prod is None:
                return units, False
            if combo[0]:
                prod = -prod
            t = is_square(prod)
            if t.status == "yes":
                j = max(k for k in range(1, len(basis)) if combo[k])
                idx = system.add_element(t.root)
                units = [system.pad(u) for u in units]
                units[j - 1] = [1 if k == idx else 0 for k in range(len(system.elements))]
                replaced = True
                break
            return units, False
        if not replaced:
            return units, True
    return units, False


def _legendre(a, p):
    return pow(a, (p - 1) // 2, p)


def _mod_squares_counts(O, system, units):
    tp = n1 = 0
    images = set()
    for combo in itertools.product((0, 1), repeat=len(units) + 1):
        x = [0] * len(system.elements)
        for k, u in enumerate(units):
            if combo[k + 1]:
                x = [a + b for a, b in zip(x, system.pad(u))]
        sg = system.signs(x)
        ns = system.norm_sign(x)
        if combo[0]:
            sg = tuple(-s for s in sg)
            ns = -ns * 1 if O.n % 2 else ns
        images.add(sg)
        tp += all(s > 0 for s in sg)
        n1 += ns == 1
    r = int(round(math.log2(len(images))))
    return tp, n1, r


def unit_group_from(O, system, vectors):
    r = O.r1 + O.r2 - 1
    units, logs = _unit_basis(O, system, vectors)
    full = len(units) == r
    sat = False
    if full:
        units, sat = two_saturate(O, system, units)
        logs = [system.log(u) for u in units]
    tp, n1, sr = _mod_squares_counts(O, system, units)
    if full:
        reg = abs(float(np.linalg.det(np.array(logs)[:, :r]))) if r else 1.0
    else:
        reg = float("inf")
    return UnitGroupData(system, units, len(units), r, sr, tp, n1, reg, full, sat, logs)


def _kernel_units(state, max_rows):
    """Exponent vectors (over state.elements) of units from integer relations among relations."""
    m = len(state.fb)
    chosen, rows = [], []
    order = sorted(range(len(state.rows)), key=lambda k: _height(state.elements[k]))
    rk = 0
    for k in order:
        rows.append(state.rows[k])
        chosen.append(k)
        new = linalg.rank(rows) if m else 0
        if new == rk and len(chosen) > max_rows:
            rows.pop()
            chosen.pop()
        rk = new
    if m == 0:
        K = [[1 if i == j else 0 for j in range(len(chosen))] for i in range(len(chosen))]
    else:
        K = linalg.left_kernel_int(rows) if rows else []
    out = []
    for v in K:
        x = [0] * len(state.elements)
        for a, k in zip(v, chosen):
            x[k] = a
        out.append(x)
    return out


# ---------------------------------------------------------------- principality


def _unit_domain_cells(O, logs):
    """Cells covering a fundamental parallelepiped of the unit lattice in log space."""
    r = len(logs)
    places = O.r1 + O.r2
    if r == 0:
        return [(np.zeros(places), np.zeros(places))]
    L = np.array(logs)
    divisions = [max(1, math.ceil(float(np.abs(L[j]).sum()))) for j in range(r)]
    cells = []
    for idx in itertools.product(*(range(d) for d in divisions)):
        center = sum((idx[j] + 0.5) / divisions[j] * L[j] for j in range(r))
        slack = sum(np.abs(L[j]) / (2 * divisions[j]) for j in range(r))
        cells.append((center, slack))
    return cells


def find_generator(O, rows, norm, units_logs, max_points=200000):
    """A generator of the ideal spanned by rows (O coordinates) or None, exhaustively."""
    n = O.n
    places = O.r1 + O.r2
    base = math.log(norm) / n
    seen = 0
    for center, slack in _unit_domain_cells(O, units_logs):
        weights = []
        for s in range(places):
            w = 1 if s < O.r1 else 2
            X = math.exp(base + (center[s] + slack[s]) / w)
            if s < O.r1:
                weights.append(1.0 / X)
            else:
                weights += [1.0 / X, 1.0 / X]
        for u in short_elements(O, rows, float(n), weights=weights, limit=max_points):
            seen += 1
            if abs(O.norm(u)) == norm:
                return u
        if seen > max_points:
            raise EffortExceeded("principality search exceeded its point budget")
    return None


# ---------------------------------------------------------------- class group


@dataclass
class ClassGroupData:
    divisors: tuple
    narrow_divisors: tuple
    cl2: int
    cl2_plus: int
    generators: list
    factor_base: list
    units: UnitGroupData
    certified: bool
    notes: list = field(default_factory=list)

    @property
    def class_number(self):
        return math.prod(self.divisors) if self.divisors else 1

    @property
    def narrow_class_number(self):
        return math.prod(self.narrow_divisors) if self.narrow_divisors else 1


def _snf_divisors(rows, ncols):
    if ncols == 0:
        return (), None, None
    if not rows:
        raise EffortExceeded("no relations")
    diag, V, Vinv = linalg.smith_form([list(r) for r in rows])
    diag = list(diag) + [0] * (ncols - len(diag))
    return tuple(abs(d) for d in diag), V, Vinv


def _group_from_relations(rows, ncols):
    diag, V, Vinv = _snf_divisors(rows, ncols)
    return diag, V, Vinv


def factor_base(O):
    M = O.minkowski_bound
    fb = []
    for p in primes_upto(max(2, int(M))):
        for P in primes_above(O, p):
            if P.norm <= M:
                fb.append(P)
    return fb


def _ideal_rows(O, P, k):
    """HNF rows (O coordinates) of P^k."""
    I = O.as_ideal(P.rows)
    acc = O.unit_ideal()
    for _ in range(k):
        acc = mult_ideals(acc, I)
    return _to_O_rows(O, acc)


def _to_O_rows(O, I):
    rows = [O.integral_coords(AlgebraElement(O.ring, r)) for r in I.basis]
    if any(r is None for r in rows):
        raise AssertionError("ideal not inside O")
    return linalg.hnf(rows)


def _product_ideal(O, fb, exps):
    acc = O.unit_ideal()
    for P, k in zip(fb, exps):
        for _ in range(k):
            acc = mult_ideals(acc, O.as_ideal(P.rows))
    return _to_O_rows(O, acc), math.prod(P.norm ** k for P, k in zip(fb, exps))


def _class_of(vec, V, diag):
    img = linalg.vec_mat(list(vec), V)
    return tuple(int(x) % d if d else int(x) for x, d in zip(img, diag))


def _prime_order_elements(diag):
    """Elements of prime order of prod Z/d, as coordinate tuples."""
    primes = sorted({q for d in diag if d > 1 for q in factorint(d)})
    out = []
    for q in primes:
        axes = [j for j, d in enumerate(diag) if d > 1 and d % q == 0]
        for coeffs in itertools.product(range(q), repeat=len(axes)):
            if not any(coeffs):
                continue
            el = [0] * len(diag)
            for j, c in zip(axes, coeffs):
                el[j] = c * diag[j] // q
            out.append(tuple(el))
    return out


def _representative(O, fb, target, V, diag, h):
    """Small nonnegative exponent vector whose class is target."""
    m = len(fb)
    cands = []
    for i in range(m):
        e = [0] * m
        e[i] = 1
        cands.append(e)
    for i in range(m):
        for j in range(i, m):
            e = [0] * m
            e[i] += 1
            e[j] += 1
            cands.append(e)
    for e in sorted(cands, key=lambda e: math.prod(P.norm ** k for P, k in zip(fb, e))):
        if _class_of(e, V, diag) == target:
            return e
    Vinv = linalg.inverse(V)
    vec = linalg.vec_mat(list(target), Vinv)
    return [int(x) % h for x in vec]


def class_group(O, effort=1, seed_count=None):
    """Class group data for the maximal order O (an OrderData)."""
    if not O.maximal:
        raise ValueError("class_group needs the maximal order")
    fb = factor_base(O)
    state = _RelationState(O, fb)
    n = O.n
    r = O.r1 + O.r2 - 1
    notes = []
    base_count = seed_count or 40
    rounds = 3 + 2 * effort
    covol = math.sqrt(abs(O.disc))
    vol_unit = math.pi ** (n / 2) / math.gamma(n / 2 + 1)
    diag = V = units = None
    certified = False
    for rnd in range(rounds):
        count = base_count * (2 ** rnd)
        B = (count * covol / vol_unit) ** (2 / n)
        for u in short_elements(O, linalg.identity(n), B, limit=20 * count):
            state.add(u)
        for P in fb:
            BP = (max(8, count // 4) * covol * P.norm / vol_unit) ** (2 / n)
            for u in short_elements(O, P.rows, BP, limit=10 * count):
                state.add(u)
        if fb and (len(state.rows) < len(fb) or linalg.rank(state.rows) < len(fb)):
            continue
        diag, V, _ = _group_from_relations(state.rows, len(fb))
        system = CompactUnits(O, state.elements)
        units = unit_group_from(O, system, _kernel_units(state, len(fb) + 20 + 4 * r))
        if not units.certified:
            continue
        if all(d == 1 for d in diag) or _certify(O, fb, state, diag, V, units, notes):
            diag, V, _ = _group_from_relations(state.rows, len(fb))
            certified = True
            break
    if diag is None:
        raise EffortExceeded("relation lattice not of full rank",
                             partial={"factor_base": len(fb), "relations": len(state.rows)})
    if not certified:
        notes.append("units incomplete" if not units.certified else "class group not certified")
    divisors = tuple(d for d in diag if d > 1)
    narrow = _narrow_divisors(O, fb, state, units)
    gens = []
    if divisors:
        Vinv = linalg.inverse(V)
        for j, d in enumerate(diag):
            if d > 1:
                vec = [int(x) % d for x in Vinv[j]]
                rows, _ = _product_ideal(O, fb, vec)
                gens.append(O.as_ideal(rows))
    cl2 = 2 ** sum(1 for d in divisors if d % 2 == 0)
    cl2p = 2 ** sum(1 for d in narrow if d % 2 == 0)
    hp = math.prod(narrow)
    h = math.prod(divisors)
    if certified and hp != h * 2 ** (O.r1 - units.sign_rank):
        raise AssertionError("narrow class number disagrees with the sign sequence")
    return ClassGroupData(divisors, narrow, cl2, cl2p, gens, fb, units, certified, notes)


def _certify(O, fb, state, diag, V, units, notes):
    """Show each element of prime order is non-principal; add relations when one is."""
    for _ in range(20):
        h = math.prod(d for d in diag if d)
        bad = None
        for target in _prime_order_elements(diag):
            exps = _representative(O, fb, target, V, diag, h)
            rows, norm = _product_ideal(O, fb, exps)
            try:
                gen = find_generator(O, rows, norm, units.logs)
            except EffortExceeded:
                notes.append("principality search budget exceeded")
                return False
            if gen is not None:
                bad = gen
                break
        if bad is None:
            return True
        state.add(bad)
        if not state.rows or linalg.rank(state.rows) < len(fb):
            return False
        diag, V, _ = _group_from_relations(state.rows, len(fb))
        if all(d == 1 for d in diag):
            return True
    return False


def _narrow_divisors(O, fb, state, units):
    r1 = O.r1
    m = len(fb)
    rows = []
    for vec, e in zip(state.rows, state.elements):
        s = O.signs(e)
        rows.append(list(vec) + [0 if x > 0 else 1 for x in s])
    rows.append([0] * m + [1] * r1)
    for u in units.units:
        s = units.system.signs(u)
        rows.append([0] * m + [0 if x > 0 else 1 for x in s])
    for i in range(r1):
        rows.append([0] * m + [2 if k == i else 0 for k in range(r1)])
    if m + r1 == 0:
        return ()
    diag, _, _ = _snf_divisors(rows, m + r1)
    return tuple(d for d in diag if d > 1)


# ---------------------------------------------------------------- derived sizes


def unit_group(O, effort=1):
    return class_group(O, effort).units


def narrow_class_group(O, effort=1):
    cg = class_group(O, effort)
    return cg.cl2_plus, cg.narrow_divisors


def h_sizes(O, cg=None):
    """(|H|, |H+|) with the unit and class factors reported separately."""
    cg = cg or class_group(O)
    u = cg.units
    c_plus = Fraction(cg.cl2_plus, 2 ** (O.r1 - u.sign_rank))
    H = u.norm_one_mod_squares * cg.cl2
    Hp = u.totally_positive_mod_squares * c_plus
    if Hp.denominator != 1:
        raise AssertionError("narrow two-torsion not divisible by the sign cokernel")
    return {"H": H, "H_plus": int(Hp), "units_norm_one": u.norm_one_mod_squares,
            "units_totally_positive": u.totally_positive_mod_squares, "cl2": cg.cl2,
            "cl2_plus": cg.cl2_plus, "squares_totally_positive_classes": int(c_plus)}


# ---------------------------------------------------------------- two-torsion ideals


def _subgroups(moduli):
    """All subgroups of prod Z/m_i, as frozensets of tuples."""
    elements = list(itertools.product(*(range(m) for m in moduli)))
    if len(elements) > 4096:
        raise EffortExceeded("quotient too large for the subgroup census")

    def add(a, b):
        return tuple((x + y) % m for x, y, m in zip(a, b, moduli))

    def closure(gens):
        zero = tuple(0 for _ in moduli)
        S = {zero}
        frontier = [zero]
        while frontier:
            nxt = []
            for s in frontier:
                for g in gens:
                    t = add(s, g)
                    if t not in S:
                        S.add(t)
                        nxt.append(t)
            frontier = nxt
        return frozenset(S)

    cyclic = {closure([g]) for g in elements}
    subs = set(cyclic)
    frontier = set(cyclic)
    while frontier:
        nxt = set()
        for A in frontier:
            for C in cyclic:
                if not C <= A:
                    J = closure(list(A | C))
                    if J not in subs:
                        nxt.add(J)
        subs |= nxt
        frontier = nxt
    return subs


def ideal_two_torsion(order_ring, maximal=None):
    """Invertible fractional ideals I of the order with I^2 = order.

    order_ring is a RankNRing (the order R_f) or an OrderData (its order).
    Such I satisfy conductor <= I <= O_K, so the search runs over the
    lattices between them that are modules over the order.
    """
    if isinstance(order_ring, OrderData):
        ring = order_ring.ring
        order = order_ring.as_ideal(linalg.identity(order_ring.n))
        gens = [list(r) for r in order.basis]
        OK = maximal or order_ring
    else:
        ring = order_ring
        order = ring.unit_ideal()
        gens = [list(r) for r in ring.zeta]
        OK = maximal or OrderData(ring.form)
    OKI = OK.as_ideal(linalg.identity(OK.n))
    cond = colon(order, OKI)
    n = ring.n
    # coordinates of the conductor in the O_K basis
    F = [OK.integral_coords(AlgebraElement(ring, r)) for r in cond.basis]
    diag, Vt, Vinv = linalg.smith_form(F)
    diag = [abs(d) for d in diag]
    moduli = [d for d in diag if d > 1]
    axes = [j for j, d in enumerate(diag) if d > 1]
    out = []
    for S in _subgroups(moduli):
        rows = [list(r) for r in F]
        for el in S:
            v = [0] * n
            for j, c in zip(axes, el):
                v[j] = c
            rows.append([int(x) for x in linalg.vec_mat(v, Vinv)])
        I = OK.as_ideal(linalg.hnf(rows))
        if not I.is_ideal(gens):
            continue
        if mult_ideals(I, I).same_module(order):
            out.append(I)
    return out
