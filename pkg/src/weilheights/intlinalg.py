"""Exact linear algebra over Z and Q.

Matrices are plain lists of rows.  Integer routines return Python ints,
rational ones return ``Fraction``; nothing here touches floating point.
"""
from fractions import Fraction
from math import gcd

from sympy import Matrix
from sympy.matrices.normalforms import invariant_factors


def _copy(rows):
    return [list(r) for r in rows]


def hnf_with_transform(rows):
    """Row Hermite normal form ``H = U * rows`` with ``U`` unimodular.

    Returns ``(H, U)``.  ``H`` keeps all rows (zero rows sit at the bottom),
    pivots are positive and entries above a pivot are reduced into
    ``[0, pivot)``.
    """
    A = _copy(rows)
    m = len(A)
    ncols = len(A[0]) if m else 0
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    r = 0
    for c in range(ncols):
        if r == m:
            break
        # Euclid on column c among rows r..m-1
        while True:
            nz = [i for i in range(r, m) if A[i][c] != 0]
            if not nz:
                break
            piv = min(nz, key=lambda i: abs(A[i][c]))
            A[r], A[piv] = A[piv], A[r]
            U[r], U[piv] = U[piv], U[r]
            done = True
            for i in range(r + 1, m):
                if A[i][c]:
                    q = A[i][c] // A[r][c]
                    A[i] = [a - q * b for a, b in zip(A[i], A[r])]
                    U[i] = [a - q * b for a, b in zip(U[i], U[r])]
                    if A[i][c]:
                        done = False
            if done:
                break
        if A[r][c] == 0:
            continue
        if A[r][c] < 0:
            A[r] = [-a for a in A[r]]
            U[r] = [-a for a in U[r]]
        for i in range(r):
            q = A[i][c] // A[r][c]
            if q:
                A[i] = [a - q * b for a, b in zip(A[i], A[r])]
                U[i] = [a - q * b for a, b in zip(U[i], U[r])]
        r += 1
    return A, U


def hnf(rows):
    """Nonzero rows of the row Hermite normal form."""
    if not rows:
        return []
    H, _ = hnf_with_transform(rows)
    return [h for h in H if any(h)]


def integer_kernel(A):
    """Z-basis of the saturated lattice ``{x in Z^n : A x = 0}``.

    ``A`` is m x n.  Works by row-reducing ``A^T`` with a unimodular
    transform; rows of the transform that kill ``A^T`` span the kernel.
    """
    if not A:
        raise ValueError("empty matrix")
    n = len(A[0])
    At = [[A[i][j] for i in range(len(A))] for j in range(n)]
    H, U = hnf_with_transform(At)
    basis = [U[i] for i in range(n) if not any(H[i])]
    return hnf(basis) if basis else []


def rank(rows):
    return len(_echelon([[Fraction(x) for x in r] for r in rows])) if rows else 0


def _echelon(M):
    M = _copy(M)
    out = []
    ncols = len(M[0]) if M else 0
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(M)) if M[i][c] != 0), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        for i in range(len(M)):
            if i != r and M[i][c] != 0:
                f = M[i][c] / M[r][c]
                M[i] = [a - f * b for a, b in zip(M[i], M[r])]
        out.append(M[r])
        r += 1
    return out


def det(rows):
    """Exact determinant (Fraction-valued; integral input gives integral value)."""
    M = [[Fraction(x) for x in r] for r in rows]
    n = len(M)
    d = Fraction(1)
    for c in range(n):
        piv = next((i for i in range(c, n) if M[i][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            M[c], M[piv] = M[piv], M[c]
            d = -d
        d *= M[c][c]
        for i in range(c + 1, n):
            if M[i][c] != 0:
                f = M[i][c] / M[c][c]
                M[i] = [a - f * b for a, b in zip(M[i], M[c])]
    return d


def solve(A, b):
    """Unique solution of the square system ``A x = b`` or ``None`` if singular."""
    n = len(A)
    M = [[Fraction(x) for x in A[i]] + [Fraction(b[i])] for i in range(n)]
    for c in range(n):
        piv = next((i for i in range(c, n) if M[i][c] != 0), None)
        if piv is None:
            return None
        M[c], M[piv] = M[piv], M[c]
        for i in range(n):
            if i != c and M[i][c] != 0:
                f = M[i][c] / M[c][c]
                M[i] = [a - f * v for a, v in zip(M[i], M[c])]
    return [M[i][n] / M[i][i] for i in range(n)]


def solve_in_span(rows, v):
    """Coefficients ``x`` with ``sum x_i rows[i] = v``, or ``None``.

    ``rows`` must be linearly independent.
    """
    k = len(rows)
    n = len(v)
    # normal equations are fine here: exact arithmetic, independent rows
    G = [[sum(Fraction(rows[i][t]) * rows[j][t] for t in range(n)) for j in range(k)] for i in range(k)]
    rhs = [sum(Fraction(rows[i][t]) * v[t] for t in range(n)) for i in range(k)]
    x = solve(G, rhs)
    if x is None:
        return None
    for t in range(n):
        if sum(x[i] * rows[i][t] for i in range(k)) != v[t]:
            return None
    return x


def matmul(A, B):
    return [[sum(A[i][k] * B[k][j] for k in range(len(B))) for j in range(len(B[0]))] for i in range(len(A))]


def identity(n):
    return [[int(i == j) for j in range(n)] for i in range(n)]


def matpow(A, e):
    R = identity(len(A))
    for _ in range(e):
        R = matmul(R, A)
    return R


def primitive(v):
    """Divide an integer vector by the gcd of its entries."""
    g = 0
    for x in v:
        g = gcd(g, int(x))
    if g == 0:
        return [int(x) for x in v]
    return [int(x) // g for x in v]


def clear_denominators(v):
    """Smallest positive integer multiple of a rational vector that is integral."""
    den = 1
    for x in v:
        den = den * Fraction(x).denominator // gcd(den, Fraction(x).denominator)
    return [int(Fraction(x) * den) for x in v]


def elementary_divisors(rows):
    """Nonzero invariant factors of an integer matrix (Smith normal form)."""
    if not rows or not rows[0]:
        return []
    facs = invariant_factors(Matrix(rows))
    return [abs(int(f)) for f in facs if f != 0]


# ---------------------------------------------------------------------------
# exact simplex

class LPResult:
    __slots__ = ("status", "x", "value")

    def __init__(self, status, x=None, value=None):
        self.status = status
        self.x = x
        self.value = value

    def __repr__(self):
        return f"LPResult({self.status!r}, value={self.value})"


def _pivot(T, basis, r, c):
    pr = T[r]
    pv = pr[c]
    if pv != 1:
        T[r] = pr = [a / pv for a in pr]
    for i, row in enumerate(T):
        if i != r:
            f = row[c]
            if f:
                T[i] = [a - f * b for a, b in zip(row, pr)]
    basis[r] = c


def _run_simplex(T, basis, ncols):
    """Minimise the objective stored in the last row; Bland's rule."""
    m = len(T) - 1
    while True:
        obj = T[-1]
        c = next((j for j in range(ncols) if obj[j] < 0), None)
        if c is None:
            return "optimal"
        best = None
        for i in range(m):
            a = T[i][c]
            if a > 0:
                ratio = T[i][-1] / a
                if best is None or ratio < best[0] or (ratio == best[0] and basis[i] < basis[best[1]]):
                    best = (ratio, i)
        if best is None:
            return "unbounded"
        _pivot(T, basis, best[1], c)


def lp_minimize(c, A_eq, b_eq):
    """Exact two-phase simplex for ``min c.x  s.t.  A_eq x = b_eq, x >= 0``.

    Returns an :class:`LPResult` whose status is ``"optimal"``,
    ``"infeasible"`` or ``"unbounded"``.
    """
    n = len(c)
    A = [[Fraction(a) for a in row] for row in A_eq]
    b = [Fraction(x) for x in b_eq]
    for i in range(len(A)):
        if b[i] < 0:
            A[i] = [-a for a in A[i]]
            b[i] = -b[i]
    m = len(A)
    # phase 1: artificials n..n+m-1
    T = [A[i] + [Fraction(int(i == k)) for k in range(m)] + [b[i]] for i in range(m)]
    obj = [Fraction(0)] * n + [Fraction(1)] * m + [Fraction(0)]
    for i in range(m):
        obj = [o - t for o, t in zip(obj, T[i])]
    T.append(obj)
    basis = list(range(n, n + m))
    _run_simplex(T, basis, n + m)
    if T[-1][-1] != 0:
        return LPResult("infeasible")
    # drive artificials out of the basis
    keep = []
    for i in range(m):
        if basis[i] >= n:
            c_in = next((j for j in range(n) if T[i][j] != 0), None)
            if c_in is None:
                continue  # redundant row
            _pivot(T, basis, i, c_in)
        keep.append(i)
    T2 = [T[i][:n] + [T[i][-1]] for i in keep]
    basis2 = [basis[i] for i in keep]
    cost = [Fraction(x) for x in c] + [Fraction(0)]
    for i, bcol in enumerate(basis2):
        f = cost[bcol]
        if f:
            cost = [a - f * t for a, t in zip(cost, T2[i])]
    T2.append(cost)
    status = _run_simplex(T2, basis2, n)
    if status == "unbounded":
        return LPResult("unbounded")
    x = [Fraction(0)] * n
    for i, bcol in enumerate(basis2):
        x[bcol] = T2[i][-1]
    value = sum(Fraction(ci) * xi for ci, xi in zip(c, x))
    return LPResult("optimal", x, value)
