"""Julia's invariant of a binary form and reduction through its covariant quadratic.

For f = a0 prod (x - alpha_i y) and weights w_i = t_i^2 > 0 let
Q_w = sum_i w_i |x - alpha_i y|^2.  Then

    theta(f) = min_w a0^2 |Disc Q_w|^(n/2) / prod w_i,

which is convex in u = log w and invariant under u -> u + c, so the
search runs on the hyperplane sum u_i = 0.
"""

from dataclasses import dataclass

import mpmath

from .errors import DegenerateForm, NonConvergence, PrecisionExhausted
from .forms import IDENTITY2, SWAP2, Unimodular2, as_form, discriminant, leading_normalize, sl2_act, signature

DEFAULT_PREC = 128


@dataclass(frozen=True)
class JuliaResult:
    theta: object
    J: object
    t_opt: tuple
    Q_t: tuple
    residual: object
    iterations: int
    roots: tuple = ()

    def to_json(self):
        def s(x):
            return mpmath.nstr(x, 25)
        return {"theta": s(self.theta), "J": s(self.J), "t_opt": [s(t) for t in self.t_opt],
                "Q_t": [s(q) for q in self.Q_t], "residual": s(self.residual),
                "iterations": self.iterations}


def roots(f, prec=DEFAULT_PREC, max_prec=2048):
    """Roots of f(x, 1), sorted by real then imaginary part, separated beyond their error."""
    f = as_form(f)
    if f[0] == 0:
        raise DegenerateForm("leading coefficient vanishes; normalize first")
    if discriminant(f) == 0:
        raise DegenerateForm("repeated roots")
    p = prec
    while p <= max_prec:
        with mpmath.workprec(p):
            try:
                rts, err = mpmath.polyroots(list(f.coeffs), maxsteps=200 + 4 * p,
                                            extraprec=p, error=True)
            except mpmath.libmp.NoConvergence:
                p *= 2
                continue
            rts = [mpmath.mpc(r) for r in rts]
            sep = min(abs(a - b) for i, a in enumerate(rts) for b in rts[i + 1:])
            if sep > 4 * err:
                rts.sort(key=lambda z: (z.real, z.imag))
                return tuple(rts), err
        p *= 2
    raise PrecisionExhausted("roots not separated at the maximal precision")


def _groups(rts, r2):
    """Index groups sharing one weight: real roots alone, conjugate pairs together."""
    n = len(rts)
    order = sorted(range(n), key=lambda i: abs(rts[i].imag))
    real = sorted(order[:n - 2 * r2])
    cplx = [i for i in order[n - 2 * r2:] if rts[i].imag > 0]
    groups = [[i] for i in real]
    used = set(real)
    for i in cplx:
        j = min((k for k in range(n) if k not in used and k != i and rts[k].imag < 0),
                key=lambda k: abs(rts[k] - mpmath.conj(rts[i])))
        groups.append([i, j])
        used.update((i, j))
    return groups


def _objective_parts(w, s1, s2):
    S0 = mpmath.fsum(w)
    S1 = mpmath.fsum(a * b for a, b in zip(w, s1))
    S2 = mpmath.fsum(a * b for a, b in zip(w, s2))
    return S0, S1, S2, S0 * S2 - S1 * S1


def julia_theta(f, prec=DEFAULT_PREC, tol=None, max_iter=200):
    f = as_form(f)
    if discriminant(f) == 0:
        raise DegenerateForm("Julia's invariant needs distinct roots")
    _, g = leading_normalize(f)
    n = g.degree
    _, r2 = signature(g)
    rts, _ = roots(g, prec)
    with mpmath.workprec(prec):
        tol = tol if tol is not None else mpmath.mpf(2) ** (-(prec * 2) // 3)
        s1 = [r.real for r in rts]
        s2 = [abs(r) ** 2 for r in rts]
        groups = _groups(rts, r2)
        sizes = [len(gp) for gp in groups]
        m = len(groups)
        a0 = mpmath.mpf(g[0])
        half_n = mpmath.mpf(n) / 2

        def expand(v):
            u = [mpmath.mpf(0)] * n
            for val, gp in zip(v, groups):
                for i in gp:
                    u[i] = val
            return u

        def value(v):
            w = [mpmath.exp(x) for x in expand(v)]
            D = _objective_parts(w, s1, s2)[3]
            return half_n * mpmath.log(D) - mpmath.fsum(expand(v))

        def derivs(v):
            u = expand(v)
            w = [mpmath.exp(x) for x in u]
            S0, S1, S2, D = _objective_parts(w, s1, s2)
            dD = [S2 + s2[i] * S0 - 2 * s1[i] * S1 for i in range(n)]
            gu = [w[i] * dD[i] for i in range(n)]
            Hu = [[w[i] * w[j] * (s2[j] + s2[i] - 2 * s1[i] * s1[j]) for j in range(n)]
                  for i in range(n)]
            for i in range(n):
                Hu[i][i] += gu[i]
            grad = [half_n * mpmath.fsum(gu[i] for i in gp) / D - len(gp) for gp in groups]
            hess = mpmath.matrix(m, m)
            for a, ga in enumerate(groups):
                for b, gb in enumerate(groups):
                    hd = mpmath.fsum(Hu[i][j] for i in ga for j in gb)
                    ga_ = mpmath.fsum(gu[i] for i in ga)
                    gb_ = mpmath.fsum(gu[j] for j in gb)
                    hess[a, b] = half_n * (hd / D - ga_ * gb_ / D ** 2)
            return grad, hess

        # the first group is pinned at 0; the rest move freely
        v = [mpmath.mpf(0)] * m
        it = 0
        res = None
        while it < max_iter:
            grad, hess = derivs(v)
            res = mpmath.sqrt(mpmath.fsum(x * x for x in grad[1:])) if m > 1 else mpmath.mpf(0)
            if res < tol:
                break
            it += 1
            gr = mpmath.matrix(grad[1:])
            H = mpmath.matrix([[hess[a, b] for b in range(1, m)] for a in range(1, m)])
            try:
                step = -mpmath.lu_solve(H, gr)
            except ZeroDivisionError:
                step = -gr
            slope = mpmath.fsum(step[k] * gr[k] for k in range(m - 1))
            if slope >= 0:
                step = -gr
                slope = -mpmath.fsum(x * x for x in gr)
            f0 = value(v)
            lam = mpmath.mpf(1)
            while True:
                cand = [v[0]] + [v[k + 1] + lam * step[k] for k in range(m - 1)]
                if value(cand) <= f0 + lam * slope / 4 or lam < mpmath.mpf(2) ** -60:
                    break
                lam /= 2
            v = cand
        if res is None or res > mpmath.mpf("1e-12"):
            raise NonConvergence("Newton iteration did not converge", residual=res)
        shift = mpmath.fsum(val * sz for val, sz in zip(v, sizes)) / n
        v = [x - shift for x in v]
        u = expand(v)
        w = [mpmath.exp(x) for x in u]
        S0, S1, S2, D = _objective_parts(w, s1, s2)
        disc_q = 4 * D
        theta = a0 ** 2 * disc_q ** half_n / mpmath.fprod(w)
        return JuliaResult(theta=+theta, J=mpmath.sqrt(theta),
                           t_opt=tuple(mpmath.exp(x / 2) for x in u),
                           Q_t=(S0, -2 * S1, S2), residual=res, iterations=it, roots=rts)


def julia_J(f, prec=DEFAULT_PREC):
    return julia_theta(f, prec).J


def _gauss_reduce(q):
    """gamma in SL2(Z) with Q((x, y) gamma) reduced, for Q = (a, b, c) positive definite."""
    a, b, c = q
    total = IDENTITY2
    # slack keeps forms on the boundary of the domain fixed on a second pass
    eps = mpmath.mpf(2) ** (-mpmath.mp.prec // 2)
    for _ in range(10000):
        k = int(mpmath.nint(-b / (2 * a))) if abs(b) > a * (1 + eps) else 0
        if k:
            step = Unimodular2(((1, 0), (k, 1)))
            a, b, c = a, b + 2 * a * k, a * k * k + b * k + c
            total = step @ total
        if a > c * (1 + eps):
            a, b, c = c, -b, a
            total = SWAP2 @ total
            continue
        break
    return total, (a, b, c)


def reduce_form(f, prec=DEFAULT_PREC, check=True):
    """(gamma, gamma . f) with the covariant quadratic of gamma . f Gauss-reduced."""
    f = as_form(f)
    g0, g = leading_normalize(f)
    res = julia_theta(g, prec)
    with mpmath.workprec(prec):
        gamma, _ = _gauss_reduce(res.Q_t)
    total = gamma @ g0
    out = sl2_act(total, f)
    if f.degree % 2:
        # -I fixes the quadratic but negates an odd form; keep the larger sign
        neg = Unimodular2(((-1, 0), (0, -1))) @ total
        alt = sl2_act(neg, f)
        if alt.coeffs > out.coeffs:
            total, out = neg, alt
    if check:
        J1 = julia_theta(out, prec).J
        if abs(J1 - res.J) > mpmath.mpf("1e-8") * res.J:
            raise NonConvergence("J changed under reduction", residual=abs(J1 - res.J))
    return total, out
