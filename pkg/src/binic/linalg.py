"""Exact dense linear algebra over Z, Q and F_p on plain nested lists.

Matrices are lists of rows.  Nothing here touches floating point.
"""

from fractions import Fraction
from math import gcd

from .arith import common_denominator


def identity(n):
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def zeros(r, c):
    return [[0] * c for _ in range(r)]


def transpose(M):
    return [list(r) for r in zip(*M)]


def mat_mul(A, B):
    Bt = list(zip(*B))
    return [[sum(a * b for a, b in zip(row, col)) for col in Bt] for row in A]


def mat_add(A, B):
    return [[a + b for a, b in zip(r, s)] for r, s in zip(A, B)]


def mat_scale(c, A):
    return [[c * a for a in r] for r in A]


def vec_mat(v, M):
    """Row vector times matrix."""
    return [sum(v[i] * M[i][j] for i in range(len(v))) for j in range(len(M[0]))]


def mat_vec(M, v):
    return [sum(a * b for a, b in zip(r, v)) for r in M]


def mat_pow(M, k):
    R = identity(len(M))
    for _ in range(k):
        R = mat_mul(R, M)
    return R


def _bareiss(M):
    M = [list(r) for r in M]
    n = len(M)
    sign, prev = 1, 1
    for k in range(n - 1):
        if M[k][k] == 0:
            for i in range(k + 1, n):
                if M[i][k] != 0:
                    M[k], M[i] = M[i], M[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) // prev
        prev = M[k][k]
    return sign * M[n - 1][n - 1]


def det(M):
    """Exact determinant of an integer or rational square matrix."""
    n = len(M)
    if n == 0:
        return 1
    if all(isinstance(x, int) for r in M for x in r):
        return _bareiss(M)
    scale = Fraction(1)
    rows = []
    for r in M:
        d = common_denominator(r)
        rows.append([int(Fraction(x) * d) for x in r])
        scale *= d
    out = Fraction(_bareiss(rows), scale)
    return out.numerator if out.denominator == 1 else out


def rref(M):
    """Reduced row echelon form over Q; returns (R, pivot_columns)."""
    R = [[Fraction(x) for x in r] for r in M]
    rows = len(R)
    cols = len(R[0]) if rows else 0
    piv = []
    r = 0
    for c in range(cols):
        k = next((i for i in range(r, rows) if R[i][c] != 0), None)
        if k is None:
            continue
        R[r], R[k] = R[k], R[r]
        inv = 1 / R[r][c]
        R[r] = [x * inv for x in R[r]]
        for i in range(rows):
            if i != r and R[i][c] != 0:
                f = R[i][c]
                R[i] = [a - f * b for a, b in zip(R[i], R[r])]
        piv.append(c)
        r += 1
        if r == rows:
            break
    return R, piv


def rank(M):
    return len(rref(M)[1]) if M else 0


def inverse(M):
    n = len(M)
    aug = [list(M[i]) + [1 if i == j else 0 for j in range(n)] for i in range(n)]
    R, piv = rref(aug)
    if piv[:n] != list(range(n)):
        raise ZeroDivisionError("singular matrix")
    return [r[n:] for r in R]


def solve_row(B, v):
    """Solve x B = v for a row vector x over Q (B square, invertible)."""
    return vec_mat(v, inverse(B))


def solve_rows(B, V):
    """Express every row of V in the row basis B; returns coefficient rows."""
    Binv = inverse(B)
    return [vec_mat(v, Binv) for v in V]


def _to_int_rows(rows):
    d = common_denominator(x for r in rows for x in r)
    return d, [[int(Fraction(x) * d) for x in r] for r in rows]


def hnf(rows, ncols=None):
    """Row Hermite normal form of the Z-span of integer rows.

    Result is upper triangular (echelon), pivots positive, entries above a
    pivot reduced into [0, pivot).  Zero rows are dropped.
    """
    A = [list(map(int, r)) for r in rows if any(r)]
    if not A:
        return []
    m = len(A[0]) if ncols is None else ncols
    out = []
    col = 0
    while A and col < m:
        nz = [r for r in A if r[col] != 0]
        rest = [r for r in A if r[col] == 0]
        if not nz:
            col += 1
            continue
        while len(nz) > 1:
            nz.sort(key=lambda r: abs(r[col]))
            piv = nz[0]
            new = [piv]
            for r in nz[1:]:
                q = r[col] // piv[col]
                r2 = [a - q * b for a, b in zip(r, piv)]
                if r2[col] != 0:
                    new.append(r2)
                elif any(r2):
                    rest.append(r2)
            nz = new
        piv = nz[0]
        if piv[col] < 0:
            piv = [-x for x in piv]
        out.append((col, piv))
        A = rest
        col += 1
    # reduce entries above pivots
    res = [r for _, r in out]
    for i in range(len(out)):
        c, r = out[i]
        for j in range(i):
            q = res[j][c] // r[c]
            if q:
                res[j] = [a - q * b for a, b in zip(res[j], r)]
    return res


def hnf_rational(rows):
    """Canonical basis of the Z-span of rational rows: (d, integer HNF)."""
    d, ints = _to_int_rows(rows)
    H = hnf(ints)
    g = 0
    for r in H:
        for x in r:
            g = gcd(g, x)
    g = gcd(g, d)
    if g > 1:
        H = [[x // g for x in r] for r in H]
        d //= g
    return d, H


def lattice_contains(basis, v):
    """Whether the rational row vector v lies in the Z-span of basis (square)."""
    x = solve_row(basis, v)
    return all(Fraction(t).denominator == 1 for t in x)


def dual_basis(B):
    """Rows of (B^-1)^T: the dual lattice under the standard pairing."""
    return transpose(inverse(B))


def lattice_intersection(bases):
    """Intersection of full-rank lattices given by square rational bases."""
    duals = []
    for B in bases:
        duals.extend(dual_basis(B))
    d, H = hnf_rational(duals)
    Hq = [[Fraction(x, d) for x in r] for r in H]
    return dual_basis(Hq)


def left_kernel_int(M):
    """Z-basis of integer row vectors r with r M = 0."""
    rows = len(M)
    cols = len(M[0]) if rows else 0
    aug = [list(map(int, M[i])) + [1 if i == j else 0 for j in range(rows)]
           for i in range(rows)]
    A = aug
    col = 0
    done = []
    while col < cols:
        nz = [r for r in A if r[col] != 0]
        rest = [r for r in A if r[col] == 0]
        if nz:
            while len(nz) > 1:
                nz.sort(key=lambda r: abs(r[col]))
                piv = nz[0]
                new = [piv]
                for r in nz[1:]:
                    q = r[col] // piv[col]
                    r2 = [a - q * b for a, b in zip(r, piv)]
                    if r2[col] != 0:
                        new.append(r2)
                    else:
                        rest.append(r2)
                nz = new
            done.append(nz[0])
        A = rest
        col += 1
    kern = [r[cols:] for r in A]
    return hnf(kern, rows) if kern else []


def smith_form(M):
    """Smith normal form with column transforms.

    Returns (diag, V, Vinv) such that rowspace(M) V = rowspace(D) where D is
    diagonal with entries diag (nonnegative, each dividing the next), padded
    with zeros to the column count.  V is unimodular.
    """
    A = [list(map(int, r)) for r in M]
    m = len(A)
    n = len(A[0]) if m else 0
    V = identity(n)
    Vinv = identity(n)

    def col_op(i, j, q):
        # column_j -= q * column_i
        for r in A:
            r[j] -= q * r[i]
        for r in V:
            r[j] -= q * r[i]
        Vinv[i] = [a + q * b for a, b in zip(Vinv[i], Vinv[j])]

    def col_swap(i, j):
        for r in A:
            r[i], r[j] = r[j], r[i]
        for r in V:
            r[i], r[j] = r[j], r[i]
        Vinv[i], Vinv[j] = Vinv[j], Vinv[i]

    def col_neg(i):
        for r in A:
            r[i] = -r[i]
        for r in V:
            r[i] = -r[i]
        Vinv[i] = [-x for x in Vinv[i]]

    diag = []
    t = 0
    while t < min(m, n):
        entries = [(abs(A[i][j]), i, j) for i in range(t, m) for j in range(t, n) if A[i][j]]
        if not entries:
            break
        _, pi, pj = min(entries)
        A[t], A[pi] = A[pi], A[t]
        if pj != t:
            col_swap(t, pj)
        while True:
            changed = False
            for j in range(t + 1, n):
                if A[t][j]:
                    q = A[t][j] // A[t][t]
                    col_op(t, j, q)
                    if A[t][j]:
                        col_swap(t, j)
                        changed = True
            for i in range(t + 1, m):
                if A[i][t]:
                    q = A[i][t] // A[t][t]
                    A[i] = [a - q * b for a, b in zip(A[i], A[t])]
                    if A[i][t]:
                        A[t], A[i] = A[i], A[t]
                        changed = True
            if changed:
                continue
            bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n)
                        if A[i][j] % A[t][t]), None)
            if bad is None:
                break
            A[t] = [a + b for a, b in zip(A[t], A[bad[0]])]
        if A[t][t] < 0:
            col_neg(t)
        diag.append(A[t][t])
        t += 1
    return diag, V, Vinv


# ---------------------------------------------------------------- mod p


def rref_mod(M, p):
    R = [[x % p for x in r] for r in M]
    rows = len(R)
    cols = len(R[0]) if rows else 0
    piv = []
    r = 0
    for c in range(cols):
        k = next((i for i in range(r, rows) if R[i][c]), None)
        if k is None:
            continue
        R[r], R[k] = R[k], R[r]
        inv = pow(R[r][c], -1, p)
        R[r] = [x * inv % p for x in R[r]]
        for i in range(rows):
            if i != r and R[i][c]:
                f = R[i][c]
                R[i] = [(a - f * b) % p for a, b in zip(R[i], R[r])]
        piv.append(c)
        r += 1
        if r == rows:
            break
    return R, piv


def rank_mod(M, p):
    return len(rref_mod(M, p)[1]) if M else 0


def kernel_mod(M, p):
    """Basis of column vectors x with M x = 0 over F_p."""
    cols = len(M[0])
    R, piv = rref_mod(M, p)
    free = [c for c in range(cols) if c not in piv]
    basis = []
    for f in free:
        v = [0] * cols
        v[f] = 1
        for i, c in enumerate(piv):
            v[c] = (-R[i][f]) % p
        basis.append(v)
    return basis


def left_kernel_mod(M, p):
    return kernel_mod(transpose(M), p)


def det_mod(M, p):
    R = [[x % p for x in r] for r in M]
    n = len(R)
    d = 1
    for c in range(n):
        k = next((i for i in range(c, n) if R[i][c]), None)
        if k is None:
            return 0
        if k != c:
            R[c], R[k] = R[k], R[c]
            d = -d
        d = d * R[c][c] % p
        inv = pow(R[c][c], -1, p)
        for i in range(c + 1, n):
            if R[i][c]:
                f = R[i][c] * inv % p
                R[i] = [(a - f * b) % p for a, b in zip(R[i], R[c])]
    return d % p


def inverse_mod(M, p):
    n = len(M)
    aug = [list(M[i]) + [1 if i == j else 0 for j in range(n)] for i in range(n)]
    R, piv = rref_mod(aug, p)
    if piv[:n] != list(range(n)):
        raise ZeroDivisionError("singular mod p")
    return [r[n:] for r in R]
