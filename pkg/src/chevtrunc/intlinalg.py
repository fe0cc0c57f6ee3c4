"""Exact integer and rational matrix routines.

Matrices are plain lists of row lists.  Integer routines never leave Z;
rational routines use :class:`fractions.Fraction`.  The heavy products in the
cohomology code go through python-flint, everything else stays in pure Python
so it can serve as an oracle for the flint path.
"""
from __future__ import annotations

from fractions import Fraction
from math import gcd

import flint

Matrix = list


def zeros(m: int, n: int) -> Matrix:
    return [[0] * n for _ in range(m)]


def identity(n: int) -> Matrix:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def transpose(a: Matrix, ncols: int | None = None) -> Matrix:
    if not a:
        return [[] for _ in range(ncols or 0)]
    return [list(col) for col in zip(*a)]


def matmul(a: Matrix, b: Matrix) -> Matrix:
    if not a or not b:
        return [[0] * (len(b[0]) if b else 0) for _ in range(len(a))]
    bt = list(zip(*b))
    return [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a]


def matvec(a: Matrix, v) -> list:
    return [sum(x * y for x, y in zip(row, v)) for row in a]


def matadd(a: Matrix, b: Matrix) -> Matrix:
    return [[x + y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def matscale(c, a: Matrix) -> Matrix:
    return [[c * x for x in row] for row in a]


def is_zero(a: Matrix) -> bool:
    return all(x == 0 for row in a for x in row)


def to_flint(a: Matrix) -> flint.fmpz_mat:
    return flint.fmpz_mat([[int(x) for x in row] for row in a])


def from_flint(a: flint.fmpz_mat) -> Matrix:
    return [[int(x) for x in row] for row in a.tolist()]


def fmatmul(a: Matrix, b: Matrix) -> Matrix:
    """Integer product through flint; same contract as :func:`matmul`."""
    if not a or not b or not b[0]:
        return matmul(a, b)
    return from_flint(to_flint(a) * to_flint(b))


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return (g, x, y) with g = gcd(a, b) >= 0 and x*a + y*b = g."""
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


def det_bareiss(a: Matrix) -> int:
    """Fraction-free determinant."""
    n = len(a)
    if n == 0:
        return 1
    m = [list(row) for row in a]
    sign, prev = 1, 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


# ---------------------------------------------------------------- Smith form

class SmithForm:
    """A = U * D * W with U, W unimodular and D diagonal, d1 | d2 | ...

    ``Uinv`` and ``Winv`` are the inverses, kept alongside so callers never
    need a separate inversion.
    """

    def __init__(self, U, D, W, Uinv, Winv):
        self.U, self.D, self.W, self.Uinv, self.Winv = U, D, W, Uinv, Winv

    @property
    def diagonal(self) -> list[int]:
        return [self.D[i][i] for i in range(min(len(self.D), len(self.D[0]) if self.D else 0))]

    @property
    def rank(self) -> int:
        return sum(1 for d in self.diagonal if d != 0)


def smith_normal_form(a: Matrix, ncols: int | None = None) -> SmithForm:
    m = len(a)
    n = len(a[0]) if a else (ncols or 0)
    d = [list(map(int, row)) for row in a]
    U, Uinv, W, Winv = identity(m), identity(m), identity(n), identity(n)

    def rows_op(i, j, e):
        # rows (i, j) of D <- e * rows; U <- U e^{-1}; Uinv <- e Uinv
        (x, y), (z, w) = e
        inv = ((w, -y), (-z, x))  # det e = 1
        for mat in (d, Uinv):
            ri, rj = mat[i], mat[j]
            mat[i] = [x * s + y * t for s, t in zip(ri, rj)]
            mat[j] = [z * s + w * t for s, t in zip(ri, rj)]
        for row in U:
            s, t = row[i], row[j]
            row[i] = s * inv[0][0] + t * inv[1][0]
            row[j] = s * inv[0][1] + t * inv[1][1]

    def cols_op(i, j, f):
        # columns (i, j) of D <- cols * f; Winv <- Winv f; W <- f^{-1} W
        (x, y), (z, w) = f
        inv = ((w, -y), (-z, x))
        for mat in (d, Winv):
            for row in mat:
                s, t = row[i], row[j]
                row[i] = s * x + t * z
                row[j] = s * y + t * w
        wi, wj = W[i], W[j]
        W[i] = [inv[0][0] * s + inv[0][1] * t for s, t in zip(wi, wj)]
        W[j] = [inv[1][0] * s + inv[1][1] * t for s, t in zip(wi, wj)]

    def swap_rows(i, j):
        if i != j:
            d[i], d[j] = d[j], d[i]
            Uinv[i], Uinv[j] = Uinv[j], Uinv[i]
            for row in U:
                row[i], row[j] = row[j], row[i]

    def swap_cols(i, j):
        if i != j:
            for mat in (d, Winv):
                for row in mat:
                    row[i], row[j] = row[j], row[i]
            W[i], W[j] = W[j], W[i]

    def negate_row(i):
        d[i] = [-x for x in d[i]]
        Uinv[i] = [-x for x in Uinv[i]]
        for row in U:
            row[i] = -row[i]

    for t in range(min(m, n)):
        best = None
        for i in range(t, m):
            for j in range(t, n):
                v = d[i][j]
                if v and (best is None or abs(v) < best[0]):
                    best = (abs(v), i, j)
                    if best[0] == 1:
                        break
            if best and best[0] == 1:
                break
        if best is None:
            break
        swap_rows(t, best[1])
        swap_cols(t, best[2])
        while True:
            for i in range(t + 1, m):
                b = d[i][t]
                if b:
                    a_ = d[t][t]
                    if b % a_ == 0:
                        rows_op(t, i, ((1, 0), (-(b // a_), 1)))
                    else:
                        g, x, y = xgcd(a_, b)
                        rows_op(t, i, ((x, y), (-b // g, a_ // g)))
            for j in range(t + 1, n):
                b = d[t][j]
                if b:
                    a_ = d[t][t]
                    if b % a_ == 0:
                        cols_op(t, j, ((1, -(b // a_)), (0, 1)))
                    else:
                        g, x, y = xgcd(a_, b)
                        cols_op(t, j, ((x, -b // g), (y, a_ // g)))
            if any(d[i][t] for i in range(t + 1, m)):
                continue
            piv = d[t][t]
            bad = None
            for i in range(t + 1, m):
                for j in range(t + 1, n):
                    if d[i][j] % piv:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            rows_op(t, bad, ((1, 1), (0, 1)))
        if d[t][t] < 0:
            negate_row(t)
    return SmithForm(U, d, W, Uinv, Winv)


def elementary_divisors(a: Matrix) -> list[int]:
    """Nonzero invariant factors via flint (no transforms)."""
    if not a or not a[0]:
        return []
    s = to_flint(a).snf()
    k = min(s.nrows(), s.ncols())
    return [int(s[i, i]) for i in range(k) if s[i, i] != 0]


# ------------------------------------------------------------- Hermite form

def hnf_rows(a: Matrix, ncols: int | None = None) -> Matrix:
    """Row-style Hermite normal form: nonzero rows, positive pivots, entries
    above each pivot reduced into [0, pivot)."""
    rows = [list(map(int, r)) for r in a if any(r)]
    n = len(a[0]) if a else (ncols or 0)
    out = 0
    for c in range(n):
        piv = None
        for i in range(out, len(rows)):
            if rows[i][c]:
                piv = i
                break
        if piv is None:
            continue
        rows[out], rows[piv] = rows[piv], rows[out]
        for i in range(out + 1, len(rows)):
            b = rows[i][c]
            if b:
                a_ = rows[out][c]
                g, x, y = xgcd(a_, b)
                ro, ri = rows[out], rows[i]
                rows[out] = [x * s + y * t for s, t in zip(ro, ri)]
                rows[i] = [(-b // g) * s + (a_ // g) * t for s, t in zip(ro, ri)]
        if rows[out][c] < 0:
            rows[out] = [-x for x in rows[out]]
        pv = rows[out][c]
        for i in range(out):
            q = rows[i][c] // pv
            if q:
                rows[i] = [s - q * t for s, t in zip(rows[i], rows[out])]
        out += 1
        rows = rows[:out] + [r for r in rows[out:] if any(r)]
    return rows[:out]


# --------------------------------------------------- rational linear algebra

def rref(a: Matrix) -> tuple[Matrix, list[int]]:
    m = [[Fraction(x) for x in row] for row in a]
    pivots: list[int] = []
    r = 0
    ncols = len(m[0]) if m else 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m, pivots


def rank_q(a: Matrix) -> int:
    if not a or not a[0]:
        return 0
    return len(rref(a)[1])


def independent_columns(a: Matrix) -> list[int]:
    """Indices of a greedy maximal independent set of columns."""
    if not a or not a[0]:
        return []
    return rref(a)[1]


def solve_q(a: Matrix, b: Matrix) -> Matrix:
    """Solve a x = b (b may have several columns) for a of full column rank."""
    n = len(a[0])
    aug = [list(ra) + list(rb) for ra, rb in zip(a, b)]
    red, piv = rref(aug)
    if piv[:n] != list(range(n)) or any(c >= n for c in piv):
        raise ValueError("system not uniquely solvable")
    return [row[n:] for row in red[:n]]


def inverse_q(a: Matrix) -> Matrix:
    return solve_q(a, identity(len(a)))


def inverse_unimodular(a: Matrix) -> Matrix:
    inv = inverse_q(a)
    out = []
    for row in inv:
        if any(x.denominator != 1 for x in row):
            raise ArithmeticError("matrix is not unimodular")
        out.append([int(x) for x in row])
    return out


def nullspace_q(a: Matrix, ncols: int) -> Matrix:
    """Basis (as a list of vectors) of {x : a x = 0}."""
    if not a:
        return [[Fraction(int(i == j)) for j in range(ncols)] for i in range(ncols)]
    red, piv = rref(a)
    free = [c for c in range(ncols) if c not in piv]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for r, c in enumerate(piv):
            v[c] = -red[r][f]
        basis.append(v)
    return basis


def clear_denominators(v) -> list[int]:
    den = 1
    for x in v:
        den = den * Fraction(x).denominator // gcd(den, Fraction(x).denominator)
    return [int(Fraction(x) * den) for x in v]


# --------------------------------------------------------------- saturation

class LatticeQuotient:
    """Saturation of a column span S inside Z^N and the quotient Z^N / sat(S).

    ``quotient`` is the canonical surjection Z^N -> Z^(N-r) (row Hermite form),
    ``lift`` a right inverse (quotient * lift = I), ``saturated`` a Z-basis of
    the saturated span (as columns, in Hermite form).
    """

    def __init__(self, saturated: Matrix, quotient: Matrix, lift: Matrix, n: int, rank: int):
        self.saturated, self.quotient, self.lift = saturated, quotient, lift
        self.n, self.rank = n, rank

    @property
    def quotient_rank(self) -> int:
        return self.n - self.rank


def saturate(columns: list, n: int) -> LatticeQuotient:
    """``columns`` is a list of integer vectors of length n."""
    cols = [list(map(int, c)) for c in columns if any(c)]
    if not cols:
        return LatticeQuotient([], identity(n), identity(n), n, 0)
    # shrink the generating set first
    gens = hnf_rows(cols, n)
    sf = smith_normal_form(transpose(gens))
    r = sf.rank
    # the first r columns of U span the saturation whatever the divisors are
    sat_cols = [[sf.U[i][j] for i in range(n)] for j in range(r)]
    q0 = sf.Uinv[r:]
    c0 = [row[r:] for row in sf.U]
    q = hnf_rows(q0, n) if q0 else []
    if len(q) != n - r:
        raise ArithmeticError("quotient map lost rank")
    lift = c0
    if q:
        h = matmul(q, c0)
        lift = matmul(c0, inverse_unimodular(h))
    saturated = transpose(hnf_rows(sat_cols, n))
    return LatticeQuotient(saturated, q, lift, n, r)
