"""Pairs of integral symmetric matrices and their correspondence with (I, delta).

A pair (A, B) has resolvent form det(A x - B y).  SL_n acts by
(A, B) -> (g A g^t, g B g^t); the SL_2 factor mixes the two matrices,
(A, B) -> (a A + b B, c A + d B) for [[a, b], [c, d]], which moves the
resolvent by ``star(g2)``.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb

from . import linalg
from .arith import common_denominator, content, is_square_rational
from .errors import (CheckFailed, DegenerateInput, IncompatibleForms, IndexOutOfRange,
                     NonIntegralOutput, OrientationError, Unknown)
from .forms import (BinaryForm, Unimodular2, as_form, discriminant, is_irreducible,
                    is_primitive, leading_normalize, sl2_act)
from .rings import (AlgebraElement, BasedIdeal, RankNRing, colon, ideal_power, is_square,
                    mult_ideals)


def orientation_sign(n):
    """(-1)^(n(n-1)/2): the sign relating det(A x - B y) to alpha_i alpha_j / delta."""
    return -1 if (n * (n - 1) // 2) % 2 else 1


def _sym(M):
    return tuple(tuple(int(x) for x in r) for r in M)


@dataclass(frozen=True)
class SymPair:
    n: int
    A: tuple
    B: tuple

    def __post_init__(self):
        object.__setattr__(self, "A", _sym(self.A))
        object.__setattr__(self, "B", _sym(self.B))
        for M in (self.A, self.B):
            if len(M) != self.n or any(len(r) != self.n for r in M):
                raise ValueError("matrix shape does not match n")
            if any(M[i][j] != M[j][i] for i in range(self.n) for j in range(i)):
                raise ValueError("matrices must be symmetric")

    def dumps(self):
        def tri(M):
            return " ".join(str(M[i][j]) for i in range(self.n) for j in range(i, self.n))
        return f"{self.n}\n{tri(self.A)}\n{tri(self.B)}\n"

    @classmethod
    def loads(cls, text):
        lines = [ln for ln in text.strip().splitlines() if ln.strip()]
        n = int(lines[0])
        mats = []
        for line in lines[1:3]:
            vals = [int(t) for t in line.split()]
            if len(vals) != n * (n + 1) // 2:
                raise ValueError("wrong number of upper-triangle entries")
            M = [[0] * n for _ in range(n)]
            it = iter(vals)
            for i in range(n):
                for j in range(i, n):
                    M[i][j] = M[j][i] = next(it)
            mats.append(M)
        return cls(n, mats[0], mats[1])


def _interp_int(xs, ys):
    """Exact integer interpolation; ascending coefficients."""
    n = len(xs)
    coef = [Fraction(y) for y in ys]
    for j in range(1, n):
        for i in range(n - 1, j - 1, -1):
            coef[i] = (coef[i] - coef[i - 1]) / (xs[i] - xs[i - j])
    # Newton form to monomial form
    out = [Fraction(0)] * n
    for k in range(n - 1, -1, -1):
        shifted = [Fraction(0)] + out[:-1]
        out = [s - xs[k] * o for s, o in zip(shifted, out)]
        out[0] += coef[k]
    assert all(c.denominator == 1 for c in out)
    return [int(c) for c in out]


def resolvent(p):
    """det(A x - B y) by evaluation at x = 0..n, y = 1 and interpolation."""
    n = p.n
    xs = list(range(n + 1))
    ys = []
    for x in xs:
        M = [[p.A[i][j] * x - p.B[i][j] for j in range(n)] for i in range(n)]
        ys.append(linalg.det(M))
    asc = _interp_int(xs, ys)
    asc += [0] * (n + 1 - len(asc))
    f = BinaryForm(tuple(reversed(asc)))
    if f[0] != linalg.det([list(r) for r in p.A]):
        raise CheckFailed("leading coefficient disagrees with det A")
    return f


def act_sln(g, p):
    g = [list(r) for r in g]
    gt = linalg.transpose(g)
    A = linalg.mat_mul(linalg.mat_mul(g, [list(r) for r in p.A]), gt)
    B = linalg.mat_mul(linalg.mat_mul(g, [list(r) for r in p.B]), gt)
    return SymPair(p.n, A, B)


def _mix(g2, p):
    (a, b), (c, d) = g2.entries if isinstance(g2, Unimodular2) else g2
    n = p.n
    A = [[a * p.A[i][j] + b * p.B[i][j] for j in range(n)] for i in range(n)]
    B = [[c * p.A[i][j] + d * p.B[i][j] for j in range(n)] for i in range(n)]
    return SymPair(n, A, B)


def act_g(g2, gn, p):
    """(g2, gn) . (A, B) = (gn A gn^t, gn B gn^t) g2^t."""
    return _mix(g2, act_sln(gn, p))


def star(g2):
    """The element moving resolvents: resolvent(act_g(g2, gn, p)) = star(g2) . resolvent(p)."""
    (a, b), (c, d) = g2.entries if isinstance(g2, Unimodular2) else g2
    return Unimodular2(((a, -b), (-c, d)))


def section_e(f):
    """A pair with resolvent f: antidiagonal ones and a central band of coefficients."""
    f = as_form(f)
    n = f.degree
    if n < 3 or n % 2 == 0:
        raise ValueError("section needs odd degree >= 3")
    m = (n - 1) // 2
    A = [[0] * n for _ in range(n)]
    B = [[0] * n for _ in range(n)]
    for k in range(n):
        if k != m:
            A[k][n - 1 - k] = 1
    for k in range(n - 1):
        B[k][n - 2 - k] = 1
    sa = (-1) ** m
    for k in range(m + 1):
        A[m + k][m + k] = sa * f[2 * k]
        B[m + k][m + k] = -sa * f[2 * k + 1]
    return SymPair(n, A, B)


# ---------------------------------------------------------------- correspondence


@dataclass
class IdealClassPair:
    I: BasedIdeal
    delta: AlgebraElement
    column: int = 0
    gamma: object = None
    meta: dict = field(default_factory=dict)

    @property
    def ring(self):
        return self.I.ring

    def check(self):
        ring = self.ring
        n = ring.n
        Ifn3 = ideal_power(ring, n - 3)
        if not self.I.is_ideal():
            raise CheckFailed("basis does not span an R_f-ideal")
        if not mult_ideals(Ifn3, ring.unit_ideal()).scale(self.delta).contains_ideal(mult_ideals(self.I, self.I)):
            raise CheckFailed("I^2 not contained in delta I_f^(n-3)")
        if self.I.signed_norm ** 2 != self.delta.norm() * Ifn3.signed_norm:
            raise CheckFailed("norm identity fails")
        return True


def _theta_matrix(p):
    A = [[Fraction(x) for x in r] for r in p.A]
    B = [[Fraction(x) for x in r] for r in p.B]
    return linalg.mat_mul(B, linalg.inverse(A)), A, B


def coefficient_matrices(p, f):
    """C^(0), ..., C^(n-3) as rational matrices.

    For k >= 1, C^(k) = (f0 M^(n-k-1) + ... + f_(n-k-2) M) A - f_(n-k-2) B
    with M = B A^-1.  The zeta terms carry no constant coefficient, so C^(0)
    instead adds f_(n-1) A and subtracts nothing.
    """
    n = p.n
    M, A, B = _theta_matrix(p)
    powers = [linalg.identity(n)]
    for _ in range(n):
        powers.append(linalg.mat_mul(powers[-1], M))
    out = []
    for k in range(n - 2):
        top = n - k - 2
        S = [[Fraction(0)] * n for _ in range(n)]
        for l in range(top + 1):
            S = linalg.mat_add(S, linalg.mat_scale(f[l], powers[n - k - 1 - l]))
        C = linalg.mat_mul(S, A)
        if k == 0:
            C = linalg.mat_add(C, linalg.mat_scale(f[n - 1], A))
        else:
            C = linalg.mat_add(C, linalg.mat_scale(-f[top], B))
        out.append(C)
    return out


def _phi_entries(p, ring):
    """phi(alpha_i x alpha_j) as theta-coordinates, from the C^(k) and (A, B)."""
    n = p.n
    f = ring.form
    Cs = coefficient_matrices(p, f)
    zn1 = ring.zeta[n - 1]
    zn2 = ring.zeta[n - 2]
    out = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            v = [Fraction(0)] * n
            for k, C in enumerate(Cs):
                v[k] += C[i][j]
            a, b = p.A[i][j], p.B[i][j]
            v = [x + b * y + a * z for x, y, z in zip(v, zn2, zn1)]
            out[i][j] = out[j][i] = v
    return out


def _check_form_for_correspondence(f):
    if discriminant(f) == 0:
        raise DegenerateInput("resolvent is degenerate")
    if not is_primitive(f):
        raise DegenerateInput("resolvent is not primitive")
    if not is_irreducible(f):
        raise DegenerateInput("resolvent is reducible")


def normalize_pair(p):
    """Move a pair with f0 = 0 to one with f0 != 0; returns (g2, pair)."""
    f = resolvent(p)
    if f[0] != 0:
        return None, p
    gamma, _ = leading_normalize(f)
    g2 = star(gamma)
    return g2, _mix(g2, p)


def pair_to_ideal(p, check=True):
    g2, p = normalize_pair(p)
    f = resolvent(p)
    _check_form_for_correspondence(f)
    ring = RankNRing(f)
    n = p.n
    phi = _phi_entries(p, ring)
    for j in range(n):
        rows = [phi[i][j] for i in range(n)]
        if linalg.det(rows) != 0:
            break
    else:
        raise DegenerateInput("no ratio column gives a basis")
    d = common_denominator(x for r in rows for x in r)
    ints = [[int(x * d) for x in r] for r in rows]
    g = content(x for r in ints for x in r)
    scale = Fraction(d, g)
    alpha = [[x * scale for x in r] for r in rows]
    I = BasedIdeal(ring, alpha)
    if I.orientation < 0:
        alpha = [[-x for x in r] for r in alpha]
        I = BasedIdeal(ring, alpha)
    al = [ring.element(r) for r in alpha]
    # delta = eps alpha_i alpha_j / phi_ij, constant over (i, j)
    eps = orientation_sign(n)
    phij = ring.element(phi[j][j])
    delta = (al[j] * al[j]) / phij * eps
    for a in range(n):
        for b in range(a, n):
            if (delta * ring.element(phi[a][b])) * eps != al[a] * al[b]:
                raise CheckFailed("ratio alpha_i alpha_j / phi_ij is not constant")
    ic = IdealClassPair(I, delta, column=j, gamma=g2)
    if check:
        ic.check()
        _check_theta_action(ic, p)
    return ic


def _check_theta_action(ic, p):
    """theta * alpha_j = sum_i alpha_i (A^-1 B)_ij: the theta action on the basis."""
    ring = ic.ring
    _, A, B = _theta_matrix(p)
    M = linalg.mat_mul(linalg.inverse(A), B)
    th = ring.theta_power(1)
    al = [ring.element(r) for r in ic.I.basis]
    n = ring.n
    for j in range(n):
        lhs = th * al[j]
        rhs = ring.element([0] * n)
        for i in range(n):
            rhs = rhs + al[i] * M[i][j]
        if lhs != rhs:
            raise CheckFailed("theta does not act by A^-1 B")


def ideal_to_pair(ic, basis=None):
    ring = ic.ring
    n = ring.n
    f = ring.form
    I = ic.I if basis is None else BasedIdeal(ring, basis)
    if I.orientation <= 0:
        raise OrientationError("basis is not positively oriented")
    al = I.elements()
    dinv = ic.delta.inverse() * orientation_sign(n)
    A = [[0] * n for _ in range(n)]
    B = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            phi = (al[i] * al[j] * dinv).coords
            a = phi[n - 1] / f[0]
            b = (phi[n - 2] - f[1] * a) / f[0]
            if a.denominator != 1 or b.denominator != 1:
                raise NonIntegralOutput(f"entry ({i},{j}) is not integral")
            A[i][j] = A[j][i] = int(a)
            B[i][j] = B[j][i] = int(b)
    out = SymPair(n, A, B)
    if resolvent(out) != f:
        raise CheckFailed("resolvent of the output differs from the form")
    return out


def identity_class(ring):
    n = ring.n
    return IdealClassPair(ideal_power(ring, (n - 3) // 2), ring.one())


def compose(ic1, ic2):
    if ic1.ring != ic2.ring:
        raise IncompatibleForms("classes over different forms")
    ring = ic1.ring
    n = ring.n
    shift = colon(ring.unit_ideal(), ideal_power(ring, (n - 3) // 2))
    I = mult_ideals(mult_ideals(ic1.I, ic2.I), shift)
    out = IdealClassPair(I, ic1.delta * ic2.delta)
    out.check()
    return out


def equivalent(ic1, ic2):
    """Whether (I2, d2) = (k I1, k^2 d1) for some k in K_f^x; returns k or None."""
    if ic1.ring != ic2.ring:
        return None
    t = is_square(ic2.delta / ic1.delta)
    if t.status == "unknown":
        raise Unknown("square test inconclusive")
    if t.status == "no":
        return None
    k = t.root
    if ic1.I.scale(k).same_module(ic2.I):
        return k
    return None


def is_projective(ic):
    if isinstance(ic, SymPair):
        ic = pair_to_ideal(ic)
    ring = ic.ring
    rhs = ideal_power(ring, ring.n - 3).scale(ic.delta)
    return mult_ideals(ic.I, ic.I).same_module(mult_ideals(rhs, ring.unit_ideal()))


# ---------------------------------------------------------------- D matrix


@dataclass(frozen=True)
class DMatrix:
    """The closed-form matrix sum f_(n-j-k-1) (B A^-1)^j A theta^k.

    ``entries`` hold integer polynomials in theta (ascending) over the common
    ``denominator``.  Multiplying by ``sign`` gives alpha_i alpha_j / delta
    for the basis and delta produced by pair_to_ideal.
    """

    entries: tuple
    denominator: int
    sign: int = 1

    def entry_value(self, i, j, m):
        poly = self.entries[i][j]
        return Fraction(sum(c * m ** k for k, c in enumerate(poly)), self.denominator)

    def entry_poly(self, i, j):
        return [Fraction(c, self.denominator) for c in self.entries[i][j]]

    def quotient_value(self, i, j, m):
        """alpha_i alpha_j / delta as a polynomial in theta, evaluated at m."""
        return self.sign * self.entry_value(i, j, m)

    def quotient_poly(self, i, j):
        return [self.sign * c for c in self.entry_poly(i, j)]


def d_matrix(p):
    """D = sum_{j+k <= n-1} f_(n-j-k-1) (B A^-1)^j A theta^k."""
    f = resolvent(p)
    n = p.n
    M, A, _ = _theta_matrix(p)
    MjA = [A]
    for _ in range(n - 1):
        MjA.append(linalg.mat_mul(M, MjA[-1]))
    polys_ = [[[Fraction(0)] * n for _ in range(n)] for _ in range(n)]
    for j in range(n):
        for k in range(n - j):
            c = f[n - j - k - 1]
            if not c:
                continue
            for a in range(n):
                for b in range(n):
                    polys_[a][b][k] += c * MjA[j][a][b]
    den = common_denominator(x for r in polys_ for e in r for x in e)
    ents = tuple(tuple(tuple(int(x * den) for x in e) for e in r) for r in polys_)
    return DMatrix(ents, den, orientation_sign(n))


def is_reducible(p):
    ic = pair_to_ideal(p)
    t = is_square(ic.delta)
    if t.status == "unknown":
        raise Unknown("square test inconclusive")
    return t.status == "yes"


def charpoly_identity(p):
    """sum_j f_(n-j) (B A^-1)^j = 0."""
    f = resolvent(p)
    n = p.n
    M, _, _ = _theta_matrix(p)
    S = [[Fraction(0)] * n for _ in range(n)]
    P = linalg.identity(n)
    for j in range(n + 1):
        S = linalg.mat_add(S, linalg.mat_scale(f[n - j], P))
        P = linalg.mat_mul(P, M)
    return all(x == 0 for r in S for x in r)


def binomial_identity(n, i, j):
    if i < 0 or j < 0 or i + j > n - 1:
        raise IndexOutOfRange("need i, j >= 0 and i + j <= n - 1")
    return sum((-1) ** (k + i) * comb(n - j, k - j) * comb(n - k - 1, i)
               for k in range(j, n - i))


def is_square_value(q):
    return is_square_rational(q)
