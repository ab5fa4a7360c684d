"""Slow, independent reference computations used as test oracles.

Nothing here imports the library's linear algebra; every function is the
textbook definition written out directly.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from math import prod


def perm_sign(p):
    sign, seen = 1, set()
    for i in range(len(p)):
        if i in seen:
            continue
        j, length = i, 0
        while j not in seen:
            seen.add(j)
            j = p[j]
            length += 1
        sign *= -1 if length % 2 == 0 else 1
    return sign


def leibniz_det(rows):
    n = len(rows)
    return sum(perm_sign(p) * prod(Fraction(rows[i][p[i]]) for i in range(n))
               for p in itertools.permutations(range(n)))


def cramer(columns, target):
    """Solve sum c_i columns_i = target by Cramer's rule; None if singular."""
    n = len(columns)
    A = [[Fraction(columns[j][i]) for j in range(n)] for i in range(n)]
    D = leibniz_det(A)
    if D == 0:
        return None
    out = []
    for k in range(n):
        Ak = [row[:k] + [Fraction(target[i])] + row[k + 1:] for i, row in enumerate(A)]
        out.append(leibniz_det(Ak) / D)
    return out


def box_points(vertices, m):
    """Lattice points of m*conv(vertices) via barycentric feasibility on simplices.

    Only valid for simplices: a point is inside iff its barycentric
    coordinates (Cramer) are nonnegative.
    """
    n = len(vertices[0])
    v0 = vertices[0]
    cols = [[m * (v[i] - v0[i]) for i in range(n)] for v in vertices[1:]]
    lo = [m * min(c) for c in zip(*vertices)]
    hi = [m * max(c) for c in zip(*vertices)]
    out = []
    for x in itertools.product(*[range(a, b + 1) for a, b in zip(lo, hi)]):
        lam = cramer(cols, [x[i] - m * v0[i] for i in range(n)])
        if all(c >= 0 for c in lam) and sum(lam) <= 1:
            out.append(x)
    return out


def decomposes(eta, m, level_one):
    """Depth-first search for eta = x_1 + ... + x_m with x_i in level_one."""
    if m == 0:
        return all(c == 0 for c in eta)
    for x in level_one:
        rest = tuple(a - b for a, b in zip(eta, x))
        if decomposes(rest, m - 1, level_one):
            return True
    return False


def count_flags(vertex_sets, top):
    """Number of maximal chains of the inclusion poset, by recursion downward."""
    def below(s):
        subs = [t for t in vertex_sets if t < s]
        return [t for t in subs if not any(t < u < s for u in subs)]

    def flags(s):
        b = below(s)
        return 1 if not b else sum(flags(t) for t in b)

    return flags(top)


def in_simplex(vertices, point):
    """Barycentric membership of a point in a full-dimensional simplex (Cramer)."""
    n = len(point)
    v0 = vertices[0]
    cols = [[Fraction(v[i]) - Fraction(v0[i]) for i in range(n)] for v in vertices[1:]]
    lam = cramer(cols, [Fraction(point[i]) - Fraction(v0[i]) for i in range(n)])
    return lam is not None and all(c >= 0 for c in lam) and sum(lam) <= 1


def cone_coordinates(rays, p):
    return cramer(rays, p)


def in_cone_lattice(rays, p):
    c = cramer(rays, p)
    return c is not None and all(x >= 0 for x in c)


def irreducible_elements(points):
    """Elements of a finite downward-closed window not a sum of two nonzero others."""
    s = set(points)
    zero = tuple(0 for _ in next(iter(s)))
    nz = [p for p in s if p != zero]
    out = []
    for p in nz:
        if not any(tuple(a - b for a, b in zip(p, q)) in s and tuple(a - b for a, b in zip(p, q)) != zero
                   for q in nz if q != p):
            out.append(p)
    return sorted(out)
