"""Finite-field ground truth: orbit censuses on V(F_p), unit-class
predictions for them, strata counts, and local masses on truncations."""

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd, prod

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from . import polys
from .errors import CheckFailed, FormVanishesModP, InseparableType, PrecisionTooLow, TooLarge
from .forms import IDENTITY2, SWAP2, BinaryForm, Unimodular2, as_form, leading_normalize, sl2_act
from .pairs import SymPair, _mix, _phi_entries, orientation_sign, resolvent, section_e, star
from .rings import RankNRing

EXHAUSTIVE_LIMIT = 2 * 10 ** 6
ORBIT_LIMIT = 2 * 10 ** 7


# ---------------------------------------------------------------- factor types


@dataclass(frozen=True)
class FactorType:
    """Degrees and multiplicities of the factors of f over F_p (y counts as degree 1)."""

    factors: tuple
    separable: bool

    @property
    def degree(self):
        return sum(d * e for d, e in self.factors)

    def __str__(self):
        return " ".join(f"{d}^{e}" for d, e in self.factors)


def _factors_mod(f, p):
    """[(monic poly or None for the point at infinity, multiplicity)]."""
    f = as_form(f)
    F = polys.trim_p([c % p for c in f.dehomogenize()], p)
    if not F:
        raise FormVanishesModP(f"{f} vanishes mod {p}")
    out = [(g, e) for g, e in polys.factor_mod_p(F, p) if len(g) > 1]
    inf = f.degree - (len(F) - 1)
    if inf:
        out.append((None, inf))
    return out


def factor_type(f, p):
    fac = _factors_mod(f, p)
    degs = sorted((1 if g is None else len(g) - 1, e) for g, e in fac)
    return FactorType(tuple(degs), all(e == 1 for _, e in degs))


def _check_separable(ft):
    if not ft.separable:
        raise InseparableType(f"factor type {ft} has a repeated factor")


def _square_class_image(d, p):
    """(size of F_q^x / squares, whether the norm to F_p of a non-square is a non-square)."""
    q = p ** d
    classes = gcd(2, q - 1)
    # a generator of F_q^x has norm generating F_p^x, so non-squares map to non-squares
    return classes, classes == 2 and gcd(2, p - 1) == 2


def predicted_orbit_count(ft, p):
    """|(R^x / R^x2)_{N = 1}| for R the product of the residue fields of ft."""
    _check_separable(ft)
    data = [_square_class_image(d, p) for d, _ in ft.factors]
    count = 0
    for choice in itertools.product(*(range(c) for c, _ in data)):
        parity = sum(c for c, (_, flips) in zip(choice, data) if flips) % 2
        count += parity == 0
    return count


def predicted_stab(ft, p):
    """|R^x[2]_{N = 1}|: sign vectors whose norm, prod (-1)^d_i, is 1."""
    _check_separable(ft)
    if p == 2:
        return 1
    count = 0
    for signs in itertools.product((0, 1), repeat=len(ft.factors)):
        parity = sum(s * d for s, (d, _) in zip(signs, ft.factors)) % 2
        count += parity == 0
    return count


def _first_irreducible(d, p):
    for tail in itertools.product(range(p), repeat=d):
        g = list(tail) + [1]
        if polys.is_irreducible_p(g, p):
            return g
    raise AssertionError("no irreducible polynomial found")


def brute_unit_counts(ft, p):
    """The two unit-class counts by enumerating every field F_{p^d} of ft."""
    _check_separable(ft)
    per_factor = []
    for d, _ in ft.factors:
        g = _first_irreducible(d, p)
        q = p ** d
        units = [polys.trim(list(c)) for c in itertools.product(range(p), repeat=d)]
        units = [u for u in units if u]
        squares = {tuple(polys.rem_p(polys.mul_p(u, u, p), g, p)) for u in units}
        norm_exp = (q - 1) // (p - 1)

        def norm(u, g=g, e=norm_exp):
            r = polys.powmod_p(u, e, g, p)
            return r[0] if r else 0

        # walk the cosets u * squares, one norm per coset
        covered = set()
        class_norms = []
        for u in units:
            key = tuple(polys.rem_p(u, g, p))
            if key in covered:
                continue
            covered.update(tuple(polys.rem_p(polys.mul_p(u, list(s), p), g, p)) for s in squares)
            class_norms.append(norm(list(key)))
        torsion = [u for u in units if polys.rem_p(polys.mul_p(u, u, p), g, p) == [1]]
        per_factor.append((class_norms, [norm(u) for u in torsion]))
    fp_squares = {x * x % p for x in range(1, p)}
    classes = sum(1 for combo in itertools.product(*(c for c, _ in per_factor))
                  if prod(combo) % p in fp_squares)
    torsion = sum(1 for combo in itertools.product(*(t for _, t in per_factor))
                  if prod(combo) % p == 1)
    return classes, torsion


def archimedean_counts(r1, r2):
    """(orbit count, stabilizer order) over R: sign vectors on R^r1 x C^r2."""
    orbits = sum(1 for s in itertools.product((1, -1), repeat=r1) if prod(s) == 1)
    # -1 in C has norm +1, so complex factors contribute freely to the torsion
    stab = sum(1 for s in itertools.product((1, -1), repeat=r1 + r2) if prod(s[:r1]) == 1)
    return orbits, stab


def sl_order(n, p):
    return p ** (n * (n - 1) // 2) * prod(p ** i - 1 for i in range(2, n + 1))


# ---------------------------------------------------------------- encoded pairs


class PairSpace:
    """Pairs over F_p encoded as base-p integers: upper triangle of A, then of B."""

    def __init__(self, n, p):
        self.n, self.p = n, p
        self.iu = np.triu_indices(n)
        self.t = len(self.iu[0])
        self.size = p ** (2 * self.t)
        self.weights = np.array([p ** k for k in range(2 * self.t)], dtype=np.int64)
        self.gens = [(i, j) for i in range(n) for j in range(n) if i != j]

    def decode(self, codes):
        codes = np.asarray(codes, dtype=np.int64)
        digits = (codes[:, None] // self.weights[None, :]) % self.p
        n, t = self.n, self.t
        A = np.zeros((len(codes), n, n), dtype=np.int64)
        B = np.zeros_like(A)
        A[:, self.iu[0], self.iu[1]] = digits[:, :t]
        B[:, self.iu[0], self.iu[1]] = digits[:, t:]
        A = A + np.triu(A, 1).transpose(0, 2, 1)
        B = B + np.triu(B, 1).transpose(0, 2, 1)
        return A, B

    def encode(self, A, B):
        digits = np.concatenate([A[:, self.iu[0], self.iu[1]], B[:, self.iu[0], self.iu[1]]], axis=1)
        return (digits % self.p) @ self.weights

    def encode_pair(self, pair):
        A = np.array([pair.A], dtype=np.int64)
        B = np.array([pair.B], dtype=np.int64)
        return int(self.encode(A, B)[0])

    def decode_pair(self, code):
        A, B = self.decode([code])
        return SymPair(self.n, A[0].tolist(), B[0].tolist())

    def transvect(self, A, B, i, j, c=1):
        """(g A g^t, g B g^t) for g = 1 + c E_ij."""
        out = []
        for M in (A, B):
            M = M.copy()
            M[:, i, :] += c * M[:, j, :]
            M[:, :, i] += c * M[:, :, j]
            out.append(M % self.p)
        return out

    def images(self, codes):
        A, B = self.decode(codes)
        return [self.encode(*self.transvect(A, B, i, j)) for i, j in self.gens]


def _det_poly_batch(A, B, p):
    """Ascending coefficients in x of det(A x - B) mod p, batched (Leibniz)."""
    N, n, _ = A.shape
    out = np.zeros((N, n + 1), dtype=np.int64)
    for perm in itertools.permutations(range(n)):
        sign = 1
        for a in range(n):
            for b in range(a + 1, n):
                if perm[a] > perm[b]:
                    sign = -sign
        poly = np.zeros((N, n + 1), dtype=np.int64)
        poly[:, 0] = 1
        for r in range(n):
            a = A[:, r, perm[r]]
            b = B[:, r, perm[r]]
            nxt = np.zeros_like(poly)
            nxt[:, 1:] += poly[:, :-1] * a[:, None]
            nxt -= poly * b[:, None]
            poly = nxt % p
        out = (out + sign * poly) % p
    return out


def resolvent_codes(space, A, B):
    """Resolvent forms (f0..fn) mod p encoded base p, f0 as the lowest digit."""
    asc = _det_poly_batch(A, B, space.p)
    coeffs = asc[:, ::-1]
    w = np.array([space.p ** k for k in range(space.n + 1)], dtype=np.int64)
    return coeffs @ w


def form_code(f, p):
    return sum((c % p) * p ** k for k, c in enumerate(as_form(f).coeffs))


def form_from_code(code, n, p):
    return BinaryForm(tuple((code // p ** k) % p for k in range(n + 1)))


# ---------------------------------------------------------------- delta labels


def _normalizer_mod(f, p):
    """gamma in SL2(Z) with (gamma.f)_0 a unit mod p, or None if f vanishes on P^1(F_p)."""
    f = as_form(f)
    if f[0] % p:
        return IDENTITY2
    if f[f.degree] % p:
        return SWAP2
    for s in range(1, p):
        if f(1, s) % p:
            return Unimodular2(((1, s), (0, 1)))
    return None


def _frac_mod(x, p):
    x = Fraction(x)
    return x.numerator * pow(x.denominator, -1, p) % p


def delta_label(pair, p):
    """Square class of delta in each residue field, as a string of +/-.

    The pair is first moved so that its resolvent has a unit leading
    coefficient; the factor fields are those of the moved form, in the
    order given by factor_mod_p.
    """
    f = resolvent(pair)
    n = pair.n
    if p == 2:
        # every unit of a finite field of characteristic 2 is a square
        return "+" * len(_factors_mod(f, p))
    gamma = _normalizer_mod(f, p)
    if gamma is None:
        raise TooLarge("resolvent vanishes on every F_p point; no unit leading coefficient")
    moved = _mix(star(gamma), pair)
    F = resolvent(moved)
    Fbar = polys.trim_p([c % p for c in F.dehomogenize()], p)
    factors = polys.factor_mod_p(Fbar, p)
    if any(e > 1 for _, e in factors):
        raise InseparableType("resolvent is not separable mod p")
    phi = _phi_entries(moved, RankNRing(F))
    eps = orientation_sign(n)
    diag = [[eps * _frac_mod(c, p) % p for c in phi[j][j]] for j in range(n)]
    label = []
    for g, _ in factors:
        for h in diag:
            h = polys.rem_p(h, g, p)
            if h:
                label.append("+" if polys.fq_is_square(h, g, p) else "-")
                break
        else:
            raise CheckFailed("delta has no unit component")
    return "".join(label)


def _pair_from_delta(F, p, delta):
    """A pair over F_p with resolvent a multiple of F for I = R and the given delta.

    F has a unit leading coefficient mod p; returns (pair, multiplier).
    """
    n = F.degree
    Fbar = polys.trim_p([c % p for c in F.dehomogenize()], p)
    Fm = polys.monic_p(Fbar, p)
    ring_zeta = [[0] * n for _ in range(n)]
    for k in range(1, n):
        for i in range(k):
            ring_zeta[k][k - i] = F[i] % p
    ring_zeta[0][0] = 1
    dinv = polys._inv_mod_poly(delta, Fm, p)
    eps = orientation_sign(n)
    inv0 = pow(F[0] % p, -1, p)
    A = [[0] * n for _ in range(n)]
    B = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            phi = polys.rem_p(polys.mul_p(polys.mul_p(ring_zeta[i], ring_zeta[j], p), dinv, p), Fm, p)
            phi = [eps * c % p for c in phi] + [0] * n
            a = phi[n - 1] * inv0 % p
            b = (phi[n - 2] - F[1] * a) * inv0 % p
            A[i][j] = A[j][i] = a
            B[i][j] = B[j][i] = b
    pair = SymPair(n, A, B)
    G = [c % p for c in resolvent(pair).coeffs]
    target = [c % p for c in F.coeffs]
    lam = G[0] * inv0 % p
    if [lam * c % p for c in target] != G:
        return None, None
    return pair, lam


def _seed_pairs(f, p):
    """Pairs with resolvent f mod p covering every delta class reachable with I = R."""
    n = as_form(f).degree
    seeds = [SymPair(n, [[x % p for x in r] for r in section_e(f).A],
                     [[x % p for x in r] for r in section_e(f).B])]
    gamma = _normalizer_mod(f, p)
    if gamma is None or p == 2:
        return seeds
    F = sl2_act(gamma, f)
    Fbar = polys.trim_p([c % p for c in F.dehomogenize()], p)
    factors = [g for g, _ in polys.factor_mod_p(Fbar, p)]
    nonsq = []
    for g in factors:
        d = len(g) - 1
        for tail in itertools.product(range(p), repeat=d):
            h = polys.trim(list(tail))
            if h and not polys.fq_is_square(h, g, p):
                nonsq.append(h)
                break
    square_roots = {x * x % p: x for x in range(1, p)}
    back = star(gamma.inverse())
    for choice in itertools.product((0, 1), repeat=len(factors)):
        residues = [nonsq[i] if c else [1] for i, c in enumerate(choice)]
        delta = polys.crt_p(residues, factors, p)
        pair, lam = _pair_from_delta(F, p, delta)
        if pair is None or lam not in square_roots:
            continue
        c = pow(square_roots[lam], -1, p)
        A = [list(r) for r in pair.A]
        B = [list(r) for r in pair.B]
        for M in (A, B):
            for k in range(n):
                M[0][k] = M[0][k] * c % p
                M[k][0] = M[k][0] * c % p
        moved = _mix(back, SymPair(n, A, B))
        seeds.append(SymPair(n, [[x % p for x in r] for r in moved.A],
                             [[x % p for x in r] for r in moved.B]))
    return seeds


# ---------------------------------------------------------------- orbits


@dataclass(frozen=True)
class OrbitReport:
    p: int
    f: BinaryForm
    fiber_size: int
    orbits: tuple
    predicted_count: int
    predicted_stab: int
    exhaustive: bool

    @property
    def orbit_count(self):
        return len(self.orbits)

    def matches(self):
        return (self.orbit_count == self.predicted_count
                and all(s == self.predicted_stab for _, s, _ in self.orbits))

    def to_json(self):
        return {"p": self.p, "f": list(self.f.coeffs), "fiber": self.fiber_size,
                "orbits": [list(o) for o in self.orbits], "predicted": self.predicted_count,
                "predicted_stab": self.predicted_stab, "exhaustive": self.exhaustive}


@lru_cache(maxsize=4)
def exhaustive_census_data(n, p):
    """Component labels and resolvent codes for every point of V(F_p)."""
    space = PairSpace(n, p)
    if space.size > EXHAUSTIVE_LIMIT:
        raise TooLarge(f"|V(F_{p})| = {space.size} exceeds the exhaustive limit")
    codes = np.arange(space.size, dtype=np.int64)
    A, B = space.decode(codes)
    targets = space.images(codes)
    rows = np.concatenate([codes] * len(targets))
    cols = np.concatenate(targets)
    graph = coo_matrix((np.ones(len(rows), dtype=np.int8), (rows, cols)),
                       shape=(space.size, space.size)).tocsr()
    _, labels = connected_components(graph, directed=True, connection="weak")
    res = resolvent_codes(space, A, B)
    return space, labels, res


def _orbit_closure(space, seed):
    visited = np.array([seed], dtype=np.int64)
    frontier = visited
    while frontier.size:
        imgs = np.unique(np.concatenate(space.images(frontier)))
        new = np.setdiff1d(imgs, visited, assume_unique=True)
        visited = np.union1d(visited, new)
        frontier = new
        if visited.size > ORBIT_LIMIT:
            raise TooLarge("orbit closure exceeded the size limit")
    return visited


def brute_orbits(f, p, mode="auto", strict=True):
    """SL_n(F_p)-orbits on the pairs over F_p with resolvent f mod p."""
    f = as_form(f)
    n = f.degree
    ft = factor_type(f, p)
    _check_separable(ft)
    pc, ps = predicted_orbit_count(ft, p), predicted_stab(ft, p)
    G = sl_order(n, p)
    space = PairSpace(n, p)
    if mode == "auto":
        mode = "exhaustive" if space.size <= EXHAUSTIVE_LIMIT else "closure"
    orbits = []
    if mode == "exhaustive":
        space, labels, res = exhaustive_census_data(n, p)
        idx = np.nonzero(res == form_code(f, p))[0]
        comps, first, sizes = np.unique(labels[idx], return_index=True, return_counts=True)
        fiber = int(idx.size)
        for k in range(len(comps)):
            rep = space.decode_pair(int(idx[first[k]]))
            size = int(sizes[k])
            orbits.append((size, G // size, delta_label(rep, p)))
    elif mode == "closure":
        if G * pc // ps > ORBIT_LIMIT:
            raise TooLarge("predicted fiber too large for orbit closure")
        covered = []
        for seed in _seed_pairs(f, p):
            code = space.encode_pair(seed)
            if any(np.isin(code, orb) for orb in covered):
                continue
            orb = _orbit_closure(space, code)
            covered.append(orb)
            orbits.append((int(orb.size), G // int(orb.size), delta_label(seed, p)))
        fiber = sum(o[0] for o in orbits)
    else:
        raise ValueError(f"unknown mode {mode!r}")
    for size, stab, _ in orbits:
        if size * stab != G:
            raise CheckFailed("orbit size does not divide |SL_n(F_p)|")
    orbits.sort(key=lambda o: (o[2], o[0]))
    report = OrbitReport(p, f, fiber, tuple(orbits), pc, ps, mode == "exhaustive")
    if strict and not report.matches():
        raise CheckFailed(f"census of {f} mod {p} disagrees with the unit-class prediction")
    return report


def separable_forms_mod(n, p):
    """Representatives 0 <= f_i < p of every separable form over F_p."""
    out = []
    for coeffs in itertools.product(range(p), repeat=n + 1):
        f = BinaryForm(coeffs)
        if f.is_zero():
            continue
        if factor_type(f, p).separable:
            out.append(f)
    return out


def census(n, p, mode="auto", strict=True):
    return [brute_orbits(f, p, mode=mode, strict=strict) for f in separable_forms_mod(n, p)]


# ---------------------------------------------------------------- strata


def _common_points_n3(A, B, p):
    """Whether the two conics share an F_p-point, batched."""
    found = np.zeros(len(A), dtype=bool)
    pts = [(1, a, b) for a in range(p) for b in range(p)] + [(0, 1, a) for a in range(p)] + [(0, 0, 1)]
    for v in pts:
        v = np.array(v, dtype=np.int64)
        qa = np.einsum("i,nij,j->n", v, A, v) % p
        qb = np.einsum("i,nij,j->n", v, B, v) % p
        found |= (qa == 0) & (qb == 0)
    return found


def strata_census(p, n=3):
    """Exact counts of the strata of V(F_p) and their proportions."""
    if n != 3:
        raise TooLarge("strata census is exhaustive and implemented for n = 3 only")
    space, labels, res = exhaustive_census_data(n, p)
    total = space.size
    G = sl_order(n, p)
    form_types = {}
    for code in np.unique(res):
        f = form_from_code(int(code), n, p)
        form_types[int(code)] = None if f.is_zero() else factor_type(f, p)
    eq = {k: 0 for k in range(1, n + 1)}
    counts_by_form = dict(zip(*np.unique(res, return_counts=True)))
    for code, cnt in counts_by_form.items():
        ft = form_types[int(code)]
        if ft is None or not ft.separable:
            continue
        big = [d for d, _ in ft.factors if d > 1]
        if len(big) == 0:
            eq[1] += int(cnt)
        elif len(big) == 1:
            eq[big[0]] += int(cnt)
    codes = np.arange(total, dtype=np.int64)
    A, B = space.decode(codes)
    irr = int((~_common_points_n3(A, B, p)).sum())
    _, inverse, sizes = np.unique(labels, return_inverse=True, return_counts=True)
    nostab = int((sizes[inverse] == G).sum())
    out = {"p": p, "n": n, "total": total, "eq": eq, "irr": irr, "nostab": nostab}
    out["ratios"] = {"eq": {k: Fraction(v, total) for k, v in eq.items()},
                     "irr": Fraction(irr, total), "nostab": Fraction(nostab, total)}
    return out


def _subspaces(n, k, q):
    """Row-reduced bases of all k-dimensional subspaces of F_q^n."""
    for pivots in itertools.combinations(range(n), k):
        free = [(r, c) for r in range(k) for c in range(pivots[r] + 1, n) if c not in pivots]
        for vals in itertools.product(range(q), repeat=len(free)):
            rows = [[0] * n for _ in range(k)]
            for r, c in enumerate(pivots):
                rows[r][c] = 1
            for (r, c), v in zip(free, vals):
                rows[r][c] = v
            yield rows


def _gaussian_binomial(n, k, q):
    num = prod(q ** (n - i) - 1 for i in range(k))
    den = prod(q ** (i + 1) - 1 for i in range(k))
    return num // den


def isotropic_search_modp(pair, q, limit=2 * 10 ** 6):
    """Whether A and B share an isotropic subspace of dimension (n-1)/2 over F_q."""
    n = pair.n
    k = (n - 1) // 2
    if _gaussian_binomial(n, k, q) > limit:
        raise TooLarge("too many subspaces to search")
    A, B = pair.A, pair.B

    def form(M, u, v):
        return sum(u[i] * M[i][j] * v[j] for i in range(n) for j in range(n)) % q

    for rows in _subspaces(n, k, q):
        if all(form(M, rows[a], rows[b]) == 0
               for M in (A, B) for a in range(k) for b in range(a, k)):
            return True
    return False


# ---------------------------------------------------------------- local masses


@dataclass(frozen=True)
class LocalMass:
    place: object
    value: Fraction
    precision: int = 0


def _structure_array(ring, m):
    n = ring.n
    C = np.zeros((n, n, n), dtype=np.int64)
    for i in range(n):
        for j in range(n):
            C[i, j, :] = [c % m for c in ring.table[i][j]]
    return C


def _mul_batch(U, V, C, m):
    return np.einsum("ni,nj,ijl->nl", U, V, C) % m


def _norm_batch(U, C, m):
    """det of multiplication by u in the zeta basis, mod m (Leibniz)."""
    M = np.einsum("nj,ijl->nil", U, C) % m
    n = C.shape[0]
    out = np.zeros(len(U), dtype=np.int64)
    for perm in itertools.permutations(range(n)):
        sign = 1
        for a in range(n):
            for b in range(a + 1, n):
                if perm[a] > perm[b]:
                    sign = -sign
        term = np.ones(len(U), dtype=np.int64)
        for r in range(n):
            term = term * M[:, r, perm[r]] % m
        out = (out + sign * term) % m
    return out


def _two_torsion_lifts(C, p, k):
    """All u mod p^k with u^2 = 1, built level by level."""
    n = C.shape[0]
    one = np.zeros(n, dtype=np.int64)
    one[0] = 1
    steps = np.array(list(itertools.product(range(p), repeat=n)), dtype=np.int64)
    sols = steps.copy()
    m = p
    sq = _mul_batch(sols, sols, C, m)
    sols = sols[np.all(sq == one % m, axis=1)]
    for level in range(1, k):
        m_next = m * p
        cand = (sols[:, None, :] + m * steps[None, :, :]).reshape(-1, n) % m_next
        sq = _mul_batch(cand, cand, C, m_next)
        sols = cand[np.all(sq == one, axis=1)]
        m = m_next
    return sols


def _mass_at(ring, p, k):
    m = p ** k
    C = _structure_array(ring, m)
    n = ring.n
    S = _two_torsion_lifts(C, p, k)
    # |U/U^2| = |U[2]| for the finite group U = (R/p^k)^x
    classes = len(S)
    units = [x for x in range(1, m) if x % p]
    squares = {x * x % m for x in units}
    def cls(x):
        return min(x * s % m for s in squares)
    scal = np.zeros((len(units), n), dtype=np.int64)
    scal[:, 0] = units
    image = {cls(int(v)) for v in _norm_batch(scal, C, m)}
    image |= {cls(int(v)) for v in _norm_batch(S, C, m)}
    numerator = Fraction(classes, len(image))
    # genuine torsion: images of the solutions one level down (p = 2)
    drop = 1 if p == 2 else 0
    m_low = p ** (k - drop)
    low = {tuple(int(x) for x in row) for row in S % m_low}
    low_arr = np.array(sorted(low), dtype=np.int64).reshape(-1, n)
    norms = _norm_batch(low_arr, _structure_array(ring, m_low), m_low)
    torsion = int((norms == 1 % m_low).sum())
    return numerator / torsion


def local_mass(f, p, k=None):
    """m_p(f) = |(R^x/R^x2)_{N=1}| / |R^x[2]_{N=1}| on R_f / p^k, checked at k and k+1."""
    f = as_form(f)
    if k is None:
        k = 6 if p == 2 else 2
    if p == 2 and k < 3:
        raise PrecisionTooLow("p = 2 needs k >= 3")
    _, g = leading_normalize(f)
    ring = RankNRing(g)
    if ring.disc == 0:
        raise PrecisionTooLow("degenerate form")
    a = _mass_at(ring, p, k)
    b = _mass_at(ring, p, k + 1)
    if a != b:
        raise PrecisionTooLow(f"mass unstable between k={k} ({a}) and k={k + 1} ({b})")
    return LocalMass(p, a, k)


def archimedean_mass(r1, r2):
    """m_inf together with tau and sigma from the sign counts."""
    tau, sigma = archimedean_counts(r1, r2)
    return LocalMass("inf", Fraction(tau, sigma)), tau, sigma
