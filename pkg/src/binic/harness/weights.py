"""Torus weights of the coefficients of a pair and the cusp bookkeeping built on them.

A coefficient a_ij (b_ij) of a pair is scaled by t^-1 t_i^-1 t_j^-1
(t t_i^-1 t_j^-1) under the torus of SL2 x SLn.  Writing s_k = t_k / t_(k+1)
with prod t_i = 1 gives t_i = prod_k s_k^([k >= i] - k/n).  The s exponents
are kept in units of 1/n, which makes them integers and is the unit in which
the Haar factors prod s_k^(-n k (n-k)) are written; t exponents are plain.
"""

from dataclasses import dataclass


@dataclass(frozen=True)
class WeightVector:
    t: int
    s: tuple

    def __post_init__(self):
        if not isinstance(self.t, int) or not all(isinstance(x, int) for x in self.s):
            raise ArithmeticError("weight exponents must be integers")

    def __add__(self, o):
        return WeightVector(self.t + o.t, tuple(a + b for a, b in zip(self.s, o.s)))

    def __neg__(self):
        return WeightVector(-self.t, tuple(-a for a in self.s))

    def __sub__(self, o):
        return self + (-o)

    def exponents(self):
        return (self.t,) + self.s

    def without_t(self):
        return WeightVector(0, self.s)

    def evaluate(self, t, u):
        """Value at t and s_k = u_k^n (u exact rationals), so that s_k^(e/n) = u_k^e."""
        out = t ** self.t
        for uk, e in zip(u, self.s):
            out *= uk ** e
        return out


def zero_weight(n):
    return WeightVector(0, (0,) * (n - 1))


def variables(n):
    return [(kind, i, j) for kind in "ab" for i in range(1, n + 1) for j in range(i, n + 1)]


def _canon(kind, i, j):
    return (kind, min(i, j), max(i, j))


def weight(var, n):
    """(w_H, w_J) of a coefficient ('a' or 'b', i, j) with 1 <= i <= j <= n."""
    kind, i, j = var
    if not (1 <= i <= j <= n) or kind not in "ab":
        raise ValueError("coefficient index out of range")
    s = tuple(-n * ((k >= i) + (k >= j)) + 2 * k for k in range(1, n))
    wh = WeightVector(0, s)
    wj = WeightVector(-1 if kind == "a" else 1, s)
    return wh, wj


def leq(w1, w2):
    """w1 <~ w2: the quotient w2 / w1 has only nonnegative exponents."""
    d = w2 - w1
    return d.t >= 0 and all(x >= 0 for x in d.s)


def var0(n):
    m = (n - 1) // 2
    out = [("a", i, j) for i in range(1, n + 1) for j in range(i, n + 1) if i + j <= n]
    out += [("b", i, j) for i in range(1, n + 1) for j in range(i, n + 1)
            if i + j <= n - 1 and (i, j) != (m, m)]
    return out


def psi(var, n):
    """The assignment Var0 \\ a11 -> Var \\ Var0 used to bound the cusp."""
    m = (n - 1) // 2
    kind, i, j = var
    if var == ("a", 1, 1):
        return None
    if kind == "a":
        if i == 1:
            return _canon("a", 1, n)
        if j != m:
            return _canon("a", i, n - i + 1)
        return _canon("a", m + 1, m + 1)
    if j < m:
        return _canon("b", j, n - j)
    if j == m:
        return _canon("b", m, m)
    return _canon("b", n - j - 1, j + 1)


def haar_factor(n, julia):
    s = tuple(-n * k * (n - k) for k in range(1, n))
    return WeightVector(-2 if julia else 0, s)


def closed_form(n):
    """Exponents (t, s_1..s_(n-1)) of t^-1 prod_(k<=m) s_k^(-2k) prod_(k>m) s_k^(-2(k-m)+1)."""
    m = (n - 1) // 2
    return (-1,) + tuple(-2 * k if k <= m else -2 * (k - m) + 1 for k in range(1, n))


def cusp_check(n):
    """Verify the weight conditions bounding absolutely irreducible points in the cusp."""
    if n < 3 or n % 2 == 0:
        raise ValueError("n must be odd and at least 3")
    V = variables(n)
    V0 = var0(n)
    V0set = set(V0)
    a11 = ("a", 1, 1)
    w = {v: weight(v, n) for v in V}
    minimal = all(leq(w[a11][0], w[v][0]) and leq(w[a11][1], w[v][1]) for v in V)
    bad_target, bad_order = [], []
    total = zero_weight(n)
    for v in V0:
        target = psi(v, n)
        total = total - w[v][1]
        if target is None:
            continue
        if target in V0set or target not in w:
            bad_target.append((v, target))
            continue
        if not leq(w[v][1], w[target][1]):
            bad_order.append((v, target))
        total = total + w[target][1]
    product = total + haar_factor(n, julia=True)
    exps = product.exponents()
    height_product = (total.without_t() + haar_factor(n, julia=False)).exponents()
    expected = closed_form(n)
    report = {
        "n": n,
        "var": len(V),
        "var0": len(V0),
        "a11_minimal": minimal,
        "psi_outside_var0": not bad_target,
        "condition1": not bad_order,
        "condition1_failures": [list(map(str, f)) for f in bad_order],
        "product_exponents": list(exps),
        "condition2": all(e < 0 for e in exps),
        "height_product_exponents": list(height_product[1:]),
        "closed_form": list(expected),
        "closed_form_match": tuple(exps) == expected,
    }
    report["pass"] = all(report[k] for k in ("a11_minimal", "psi_outside_var0", "condition1",
                                              "condition2", "closed_form_match"))
    return report
