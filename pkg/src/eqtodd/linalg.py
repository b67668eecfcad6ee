"""Exact linear algebra over Q and Z.

Matrices are lists of rows.  Rational routines work on ``Fraction``;
integer routines (kernels, saturation, solving) only use unimodular
operations so that lattice bases stay lattice bases.
"""
from fractions import Fraction
from itertools import combinations
from math import gcd


def as_int(x):
    """``x`` as an int, refusing anything that is not exactly integral."""
    if isinstance(x, bool):
        raise ValueError(f"expected an integer, got {x!r}")
    q = Fraction(x)
    if q.denominator != 1:
        raise ValueError(f"expected an integer, got {x!r}")
    return q.numerator


def as_fractions(rows):
    return [[Fraction(x) for x in row] for row in rows]


def rref(rows, ncols=None):
    """Reduced row echelon form. Returns ``(R, pivots)``."""
    A = as_fractions(rows)
    if ncols is None:
        ncols = len(A[0]) if A else 0
    pivots = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(A)) if A[i][c] != 0), None)
        if p is None:
            continue
        A[r], A[p] = A[p], A[r]
        piv = A[r][c]
        A[r] = [x / piv for x in A[r]]
        for i in range(len(A)):
            if i != r and A[i][c] != 0:
                f = A[i][c]
                A[i] = [x - f * y for x, y in zip(A[i], A[r])]
        pivots.append(c)
        r += 1
        if r == len(A):
            break
    return A[:r], pivots


def rank(rows, ncols=None):
    if not rows:
        return 0
    return len(rref(rows, ncols)[1])


def independent_subset(vectors):
    """Indices of a maximal linearly independent subset, greedy in order."""
    chosen = []
    basis = []
    for i, v in enumerate(vectors):
        if rank(basis + [list(v)]) > len(basis):
            basis.append(list(v))
            chosen.append(i)
    return chosen


def nullspace(rows, ncols):
    """Rational basis of ``{x : A x = 0}``."""
    if not rows:
        return [[Fraction(int(i == j)) for j in range(ncols)] for i in range(ncols)]
    R, pivots = rref(rows, ncols)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        x = [Fraction(0)] * ncols
        x[f] = Fraction(1)
        for i, p in enumerate(pivots):
            x[p] = -R[i][f]
        basis.append(x)
    return basis


def solve(rows, rhs):
    """One rational solution of ``A x = b``, or ``None`` if inconsistent."""
    ncols = len(rows[0]) if rows else 0
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    if not aug:
        return [Fraction(0)] * ncols
    R, pivots = rref(aug, ncols + 1)
    if ncols in pivots:
        return None
    x = [Fraction(0)] * ncols
    for i, p in enumerate(pivots):
        x[p] = R[i][ncols]
    return x


def det(rows):
    """Exact determinant (fraction-free Bareiss when entries are integers)."""
    n = len(rows)
    if n == 0:
        return Fraction(1)
    A = as_fractions(rows)
    sign = 1
    prev = Fraction(1)
    for k in range(n - 1):
        if A[k][k] == 0:
            p = next((i for i in range(k + 1, n) if A[i][k] != 0), None)
            if p is None:
                return Fraction(0)
            A[k], A[p] = A[p], A[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]) / prev
        prev = A[k][k]
    return sign * A[n - 1][n - 1]


def inverse(rows):
    n = len(rows)
    aug = [list(r) + [int(i == j) for j in range(n)] for i, r in enumerate(rows)]
    R, pivots = rref(aug, 2 * n)
    if pivots[:n] != list(range(n)) or len(pivots) < n:
        raise ZeroDivisionError("singular matrix")
    return [row[n:] for row in R]


def transpose(rows):
    return [list(c) for c in zip(*rows)]


def matmul(A, B):
    Bt = transpose(B)
    return [[sum(a * b for a, b in zip(row, col)) for col in Bt] for row in A]


def dot(u, v):
    return sum(a * b for a, b in zip(u, v))


# ---------------------------------------------------------------- integers


def _xgcd(a, b):
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


def _row_echelon_with_transform(B):
    """Unimodular row reduction ``U B = H`` with ``H`` in echelon form.

    Returns ``(H, U, pivot_cols)``; rows of ``H`` past ``len(pivot_cols)`` are 0.
    """
    H = [list(map(int, r)) for r in B]
    m = len(H)
    ncols = len(H[0]) if H else 0
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    r = 0
    pivots = []
    for c in range(ncols):
        if r == m:
            break
        for i in range(r + 1, m):
            if H[i][c] == 0:
                continue
            a, b = H[r][c], H[i][c]
            g, x, y = _xgcd(a, b)
            # [[x, y], [-b/g, a/g]] has determinant 1
            p, q = -b // g, a // g
            H[r], H[i] = (
                [x * s + y * t for s, t in zip(H[r], H[i])],
                [p * s + q * t for s, t in zip(H[r], H[i])],
            )
            U[r], U[i] = (
                [x * s + y * t for s, t in zip(U[r], U[i])],
                [p * s + q * t for s, t in zip(U[r], U[i])],
            )
        if H[r][c] != 0:
            if H[r][c] < 0:
                H[r] = [-v for v in H[r]]
                U[r] = [-v for v in U[r]]
            pivots.append(c)
            r += 1
    return H, U, pivots


def integer_kernel(rows, ncols):
    """Z-basis of ``{x in Z^ncols : A x = 0}`` for an integer matrix ``A``."""
    if not rows:
        return [[int(i == j) for j in range(ncols)] for i in range(ncols)]
    At = transpose([list(map(int, r)) for r in rows])
    H, U, pivots = _row_echelon_with_transform(At)
    return [U[i] for i in range(len(pivots), ncols)]


def saturate(vectors, n):
    """Z-basis of ``span(vectors) ∩ Z^n``."""
    vectors = [list(map(int, v)) for v in vectors if any(v)]
    if not vectors:
        return []
    perp = integer_kernel(vectors, n)
    return integer_kernel(perp, n)


def integer_solve(rows, rhs):
    """An integer solution of ``A x = b``, or ``None`` if there is none."""
    ncols = len(rows[0])
    At = transpose([list(map(int, r)) for r in rows])
    # U A^T = H  =>  A U^T = H^T, solve H^T y = b then x = U^T y
    H, U, pivots = _row_echelon_with_transform(At)
    y = [0] * ncols
    for k, c in enumerate(pivots):
        # H^T is lower echelon; entries y[j] for j < k are already solved
        s = rhs[c] - sum(H[j][c] * y[j] for j in range(k))
        if s % H[k][c]:
            return None
        y[k] = s // H[k][c]
    for c in range(len(rhs)):
        if sum(H[j][c] * y[j] for j in range(len(pivots))) != rhs[c]:
            return None
    return [sum(U[j][i] * y[j] for j in range(ncols)) for i in range(ncols)]


def gcd_of_maximal_minors(rows):
    """gcd of the k x k minors of a k x n integer matrix of rank k."""
    k = len(rows)
    n = len(rows[0])
    g = 0
    for cols in combinations(range(n), k):
        d = det([[r[c] for c in cols] for r in rows])
        g = gcd(g, int(d))
    return g
