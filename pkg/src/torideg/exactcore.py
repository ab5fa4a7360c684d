"""Exact rational linear algebra.

Scalars are ``fractions.Fraction``; vectors are tuples of fractions and
matrices are tuples of row tuples. Nothing in this module (or anywhere else
in the package) touches floating point.

Gaussian elimination always pivots on the first nonzero entry of a column, so
results are reproducible bit for bit.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import DegenerateSimplex, NotInAffineSpan, SingularBasis

Rational = Fraction
RatVector = tuple  # tuple[Fraction, ...]
RatMatrix = tuple  # tuple[RatVector, ...]


def frac(x) -> Fraction:
    """Coerce an int, Fraction or ``"p/q"`` string to a Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        raise TypeError("floats are not accepted; pass an int, Fraction or 'p/q' string")
    return Fraction(x)


def vector(entries: Iterable) -> RatVector:
    return tuple(frac(x) for x in entries)


def matrix(rows: Iterable[Iterable]) -> RatMatrix:
    rows = tuple(vector(r) for r in rows)
    if rows and len({len(r) for r in rows}) != 1:
        raise ValueError("matrix rows must all have the same length")
    return rows


def format_fraction(x: Fraction) -> str:
    x = frac(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def add(u: Sequence, v: Sequence) -> RatVector:
    return tuple(a + b for a, b in zip(u, v, strict=True))


def sub(u: Sequence, v: Sequence) -> RatVector:
    return tuple(a - b for a, b in zip(u, v, strict=True))


def scale(c, v: Sequence) -> RatVector:
    return tuple(c * a for a in v)


def dot(u: Sequence, v: Sequence):
    return sum((a * b for a, b in zip(u, v, strict=True)), 0)


def linear_combination(coefficients: Sequence, vectors: Sequence[Sequence]) -> RatVector:
    dim = len(vectors[0])
    out = [Fraction(0)] * dim
    for c, v in zip(coefficients, vectors, strict=True):
        if c:
            for i, a in enumerate(v):
                out[i] += c * a
    return tuple(out)


def transpose(rows: Sequence[Sequence]) -> RatMatrix:
    return tuple(zip(*rows))


# --------------------------------------------------------------------------
# Elimination


def row_echelon(rows: Sequence[Sequence]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form and the list of pivot columns."""
    M = [[frac(x) for x in r] for r in rows]
    if not M:
        return M, []
    ncols = len(M[0])
    pivots = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(M)) if M[i][c] != 0), None)
        if p is None:
            continue
        M[r], M[p] = M[p], M[r]
        pv = M[r][c]
        M[r] = [x / pv for x in M[r]]
        for i in range(len(M)):
            if i != r and M[i][c] != 0:
                f = M[i][c]
                M[i] = [a - f * b for a, b in zip(M[i], M[r])]
        pivots.append(c)
        r += 1
        if r == len(M):
            break
    return M, pivots


def rank(rows: Sequence[Sequence]) -> int:
    return len(row_echelon(rows)[1])


def affine_dimension(points: Sequence[Sequence]) -> int:
    """Dimension of the affine span; -1 for an empty set."""
    if not points:
        return -1
    base = points[0]
    diffs = [sub(vector(p), vector(base)) for p in points[1:]]
    return rank(diffs) if diffs else 0


def determinant(rows: Sequence[Sequence]) -> Fraction:
    M = [[frac(x) for x in r] for r in rows]
    n = len(M)
    if any(len(r) != n for r in M):
        raise ValueError("determinant of a non-square matrix")
    det = Fraction(1)
    for c in range(n):
        p = next((i for i in range(c, n) if M[i][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            M[c], M[p] = M[p], M[c]
            det = -det
        pv = M[c][c]
        det *= pv
        for i in range(c + 1, n):
            if M[i][c] != 0:
                f = M[i][c] / pv
                M[i] = [a - f * b for a, b in zip(M[i], M[c])]
    return det


def solve_columns(columns: Sequence[Sequence], target: Sequence) -> RatVector:
    """Unique ``c`` with ``sum(c[i] * columns[i]) == target``.

    Dependent columns raise SingularBasis even when the system is also
    inconsistent; otherwise an inconsistent system raises NotInAffineSpan.
    """
    k = len(columns)
    dim = len(target)
    aug = [[frac(columns[j][i]) for j in range(k)] + [frac(target[i])] for i in range(dim)]
    R, pivots = row_echelon(aug)
    if len([p for p in pivots if p < k]) < k:
        raise SingularBasis("vectors are linearly dependent")
    if k in pivots:
        raise NotInAffineSpan("target is not in the span of the given vectors")
    return tuple(R[i][k] for i in range(k))


def solve_in_basis(basis: Sequence[Sequence], target: Sequence) -> RatVector:
    """Coordinates of ``target`` in a basis of Q^k (k vectors of length k)."""
    k = len(basis)
    if any(len(b) != k for b in basis) or len(target) != k:
        raise ValueError("solve_in_basis expects k vectors of dimension k")
    return solve_columns(basis, target)


def barycentric_coordinates(vertices: Sequence[Sequence], point: Sequence) -> tuple[RatVector, bool]:
    """Affine coordinates of ``point`` with respect to simplex ``vertices``.

    Returns the coefficient tuple (summing to one) and whether the point lies
    in the closed simplex.
    """
    lifted = [(Fraction(1),) + vector(v) for v in vertices]
    if rank(lifted) < len(lifted):
        raise DegenerateSimplex("simplex vertices are affinely dependent")
    try:
        coeffs = solve_columns(lifted, (Fraction(1),) + vector(point))
    except NotInAffineSpan:
        raise NotInAffineSpan(f"point {point!r} is not in the affine span of the simplex") from None
    return coeffs, all(c >= 0 for c in coeffs)


def simplex_volume(vertices: Sequence[Sequence]) -> Fraction:
    """Euclidean volume of a full-dimensional simplex in Q^n."""
    v0 = vector(vertices[0])
    n = len(v0)
    if len(vertices) != n + 1:
        raise ValueError("need n+1 vertices for a simplex in Q^n")
    det = determinant([sub(vector(v), v0) for v in vertices[1:]])
    return abs(det) / math.factorial(n)


def inverse(rows: Sequence[Sequence]) -> RatMatrix:
    n = len(rows)
    aug = [list(vector(r)) + [Fraction(int(i == j)) for j in range(n)] for i, r in enumerate(rows)]
    R, pivots = row_echelon(aug)
    if pivots[:n] != list(range(n)):
        raise SingularBasis("matrix is singular")
    return tuple(tuple(R[i][n:]) for i in range(n))


def integral_adjugate(rows: Sequence[Sequence[int]]) -> tuple[tuple[tuple[int, ...], ...], int]:
    """``(A, D)`` with integer A and positive D such that ``M^{-1} = A / D``.

    Lets hot loops test cone membership with integer arithmetic only.
    """
    inv = inverse(rows)
    D = 1
    for r in inv:
        for x in r:
            D = math.lcm(D, x.denominator)
    return tuple(tuple(int(x * D) for x in r) for r in inv), D


# --------------------------------------------------------------------------
# Integer helpers


def denominator_lcm(v: Iterable) -> int:
    d = 1
    for x in v:
        d = math.lcm(d, frac(x).denominator)
    return d


def primitive_vector(v: Sequence) -> tuple[int, ...]:
    """The primitive integer vector on the ray through the rational vector v."""
    v = vector(v)
    d = denominator_lcm(v)
    ints = [int(x * d) for x in v]
    g = 0
    for x in ints:
        g = math.gcd(g, x)
    if g == 0:
        raise ValueError("zero vector has no primitive generator")
    return tuple(x // g for x in ints)


def integer_nullspace_vector(rows: Sequence[Sequence]) -> tuple[int, ...]:
    """A primitive integer vector spanning the one-dimensional kernel of ``rows``."""
    R, pivots = row_echelon(rows)
    ncols = len(rows[0])
    free = [c for c in range(ncols) if c not in pivots]
    if len(free) != 1:
        raise SingularBasis(f"kernel has dimension {len(free)}, expected 1")
    f = free[0]
    sol = [Fraction(0)] * ncols
    sol[f] = Fraction(1)
    for i, p in enumerate(pivots):
        sol[p] = -R[i][f]
    return primitive_vector(sol)


# --------------------------------------------------------------------------
# Exact linear programming (two-phase simplex, Bland's rule)


def _pivot(T, r, col):
    pv = T[r][col]
    T[r] = [x / pv for x in T[r]]
    for i in range(len(T)):
        if i != r and T[i][col] != 0:
            f = T[i][col]
            T[i] = [a - f * b for a, b in zip(T[i], T[r])]


def _run_simplex(T, basis, ncols):
    """Maximise; the last row of T is the objective row (reduced costs)."""
    m = len(T) - 1
    while True:
        col = next((j for j in range(ncols) if T[m][j] < 0), None)
        if col is None:
            return "optimal"
        best = None
        for i in range(m):
            a = T[i][col]
            if a > 0:
                ratio = T[i][-1] / a
                if best is None or ratio < best[0] or (ratio == best[0] and basis[i] < basis[best[1]]):
                    best = (ratio, i)
        if best is None:
            return "unbounded"
        _pivot(T, best[1], col)
        basis[best[1]] = col


def lp_maximize(c: Sequence, A_eq: Sequence[Sequence], b_eq: Sequence):
    """Maximise ``c.x`` subject to ``A_eq x = b_eq`` and ``x >= 0``.

    Returns ``(status, value, x)`` with status one of "optimal",
    "infeasible", "unbounded". Exact throughout.
    """
    n = len(c)
    rows = []
    for row, rhs in zip(A_eq, b_eq):
        row = [frac(x) for x in row]
        rhs = frac(rhs)
        if rhs < 0:
            row, rhs = [-x for x in row], -rhs
        rows.append((row, rhs))
    m = len(rows)
    # phase 1: artificial columns n..n+m-1
    T = []
    for i, (row, rhs) in enumerate(rows):
        T.append(row + [Fraction(int(i == j)) for j in range(m)] + [rhs])
    obj = [Fraction(0)] * n + [Fraction(1)] * m + [Fraction(0)]
    for i in range(m):
        obj = [a - b for a, b in zip(obj, T[i])]
    T.append(obj)
    basis = list(range(n, n + m))
    _run_simplex(T, basis, n + m)
    if T[m][-1] != 0:
        return "infeasible", None, None
    # drive artificial variables out of the basis, dropping redundant rows
    i = 0
    while i < len(basis):
        if basis[i] >= n:
            col = next((j for j in range(n) if T[i][j] != 0), None)
            if col is None:
                del T[i]
                del basis[i]
                continue
            _pivot(T, i, col)
            basis[i] = col
        i += 1
    m = len(basis)
    T = [row[:n] + [row[-1]] for row in T[:m]]
    obj = [-frac(x) for x in c] + [Fraction(0)]
    for i, bcol in enumerate(basis):
        if obj[bcol] != 0:
            f = obj[bcol]
            obj = [a - f * b for a, b in zip(obj, T[i])]
    T.append(obj)
    status = _run_simplex(T, basis, n)
    if status != "optimal":
        return status, None, None
    x = [Fraction(0)] * n
    for i, bcol in enumerate(basis):
        x[bcol] = T[i][-1]
    return "optimal", T[m][-1], tuple(x)
