"""Markings of faces, extremal data and the flag triangulation.

A marking picks one rational point in the relative interior of every face.
The extremal data attaches to each face a degree ``d`` and the lifted weight
``(d, d*u)``. The weight is stored with positive level, i.e. it is the
negative of the torus weight of the corresponding eigenfunction.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Mapping, Sequence

from . import exactcore as ec
from .errors import (
    CoverageFailure,
    DegenerateSimplex,
    InapplicableMarking,
    InvalidMarking,
    MissingFace,
    OverlapFailure,
    PointNotInteriorToFace,
    PointOutsidePolytope,
    ToridegError,
)
from .polytope import FaceLattice, relative_interior_contains

Marking = dict  # face id -> tuple[Fraction, ...]
Chain = tuple  # face ids, smallest face first


def default_marking(L: FaceLattice) -> Marking:
    """Barycenters of all faces."""
    return {f.id: L.barycenter(f.id) for f in L}


def integral_marking(L: FaceLattice, overrides: Mapping[str, Sequence] | None = None) -> Marking:
    """A lattice point in the relative interior of every face.

    Picks the interior lattice point closest to the barycenter (ties broken
    lexicographically) unless ``overrides`` names the point for that face.
    """
    overrides = dict(overrides or {})
    P = L.polytope
    out = {}
    for f in L:
        if f.id in overrides:
            out[f.id] = ec.vector(overrides[f.id])
            continue
        pts = f.points(P)
        lo = [min(c) for c in zip(*pts)]
        hi = [max(c) for c in zip(*pts)]
        bc = L.barycenter(f.id)
        best = None
        for x in itertools.product(*(range(a, b + 1) for a, b in zip(lo, hi))):
            if not relative_interior_contains(f, x, L):
                continue
            key = (sum((a - b) ** 2 for a, b in zip(x, bc)), x)
            if best is None or key < best:
                best = key
        if best is None:
            raise InapplicableMarking(f"face {f.id!r} has no lattice point in its relative interior")
        out[f.id] = ec.vector(best[1])
    return out


def parse_marking(data, L: FaceLattice | None = None) -> tuple[Marking, dict[str, int]]:
    """Read ``{"marking": {...}, "multipliers": {...}}``; fractions as ``"p/q"``."""
    if isinstance(data, str):
        data = json.loads(data)
    marking = {fid: ec.vector(pt) for fid, pt in data.get("marking", {}).items()}
    multipliers = {fid: int(k) for fid, k in data.get("multipliers", {}).items()}
    return marking, multipliers


def marking_to_json(marking: Marking, multipliers: Mapping[str, int] | None = None) -> dict:
    out = {"marking": {fid: [ec.format_fraction(x) for x in pt] for fid, pt in marking.items()}}
    if multipliers:
        out["multipliers"] = dict(multipliers)
    return out


def validate_marking(marking: Mapping[str, Sequence], L: FaceLattice) -> list[ToridegError]:
    """List of problems with ``marking``; an empty list means it is valid."""
    errors: list[ToridegError] = []
    for fid in marking:
        if fid not in L.by_id:
            errors.append(ToridegError(f"marking names unknown face {fid!r}"))
    for f in L:
        if f.id not in marking:
            errors.append(MissingFace(f.id))
            continue
        pt = marking[f.id]
        if any(isinstance(x, float) for x in pt) or len(pt) != L.polytope.dim:
            errors.append(PointNotInteriorToFace(f.id, pt))
            continue
        if not relative_interior_contains(f, pt, L):
            errors.append(PointNotInteriorToFace(f.id, tuple(pt)))
    if errors:
        return errors
    for chain in L.maximal_chains:
        lifted = [(1,) + tuple(marking[s]) for s in chain]
        if ec.rank(lifted) != len(chain):
            errors.append(DegenerateSimplex(f"marking points along chain {chain} are affinely dependent"))
    return errors


def check_marking(marking: Mapping[str, Sequence], L: FaceLattice) -> Marking:
    errors = validate_marking(marking, L)
    if errors:
        raise errors[0] if len(errors) == 1 else InvalidMarking(errors)
    return {fid: ec.vector(pt) for fid, pt in marking.items()}


@dataclass(frozen=True)
class ExtremalData:
    """Degree and lifted weight ``(d, d*u)`` for every face."""

    minimal_degree: dict  # face id -> q, least q with q*u integral
    degree: dict  # face id -> d = q * multiplier
    weight: dict  # face id -> tuple of ints (d, d*u)
    _inverses: dict = field(default_factory=dict, repr=False, compare=False)

    def basis(self, chain: Sequence[str]) -> list[tuple[int, ...]]:
        return [self.weight[s] for s in chain]

    def chain_inverse(self, chain: Chain):
        """Inverse of the matrix whose columns are the lifted weights along ``chain``."""
        chain = tuple(chain)
        inv = self._inverses.get(chain)
        if inv is None:
            inv = ec.inverse(ec.transpose(self.basis(chain)))
            self._inverses[chain] = inv
        return inv


def extremal_data(marking: Mapping[str, Sequence], multipliers: Mapping[str, int] | None = None) -> ExtremalData:
    multipliers = dict(multipliers or {})
    for fid, k in multipliers.items():
        if fid not in marking:
            raise ToridegError(f"multiplier given for unknown face {fid!r}")
        if int(k) < 1:
            raise ToridegError(f"multiplier for face {fid!r} must be a positive integer")
    q, d, w = {}, {}, {}
    for fid, u in marking.items():
        qs = ec.denominator_lcm(u)
        ds = qs * int(multipliers.get(fid, 1))
        q[fid] = qs
        d[fid] = ds
        w[fid] = (ds,) + tuple(int(ds * x) for x in u)
    return ExtremalData(q, d, w)


# --------------------------------------------------------------------------
# Triangulation


class FlagTriangulation:
    """Simplices spanned by marking points along chains of faces."""

    def __init__(self, marking: Mapping[str, Sequence], L: FaceLattice):
        self.lattice = L
        self.marking = {fid: ec.vector(pt) for fid, pt in marking.items()}
        self.maximal_chains: tuple[Chain, ...] = L.maximal_chains
        self._inverse = {}
        self._adjugate = {}
        for c in self.maximal_chains:
            cols = [(Fraction(1),) + self.marking[s] for s in c]
            # rows of the inverse give barycentric coordinates of (1, x)
            self._inverse[c] = ec.inverse(ec.transpose(cols))
            # integer rows with the same sign pattern, for graded points
            self._adjugate[c] = ec.integral_adjugate(ec.transpose(cols))

    @property
    def dim(self) -> int:
        return self.lattice.polytope.dim

    def simplex(self, chain: Sequence[str]) -> list[tuple]:
        return [self.marking[s] for s in chain]

    def chain_coordinates(self, chain: Chain, v: Sequence) -> tuple:
        """Coordinates of ``v`` in Q^(n+1) in the basis ``(1, u_s)``, s in the maximal chain."""
        inv = self._inverse[chain]
        return tuple(sum((a * b for a, b in zip(row, v)), Fraction(0)) for row in inv)

    def barycentric(self, chain: Chain, point: Sequence) -> tuple:
        return self.chain_coordinates(chain, (1,) + tuple(point))

    def contains(self, chain: Chain, point: Sequence) -> bool:
        if chain in self._inverse:
            return all(c >= 0 for c in self.barycentric(chain, point))
        try:
            _, inside = ec.barycentric_coordinates(self.simplex(chain), point)
        except ec.NotInAffineSpan:
            return False
        return inside

    def contains_graded(self, chain: Chain, p: Sequence[int]) -> bool:
        """Whether ``eta/m`` lies in the simplex, for a graded point with ``m >= 1``."""
        A, _ = self._adjugate[chain]
        return all(sum(a * x for a, x in zip(row, p)) >= 0 for row in A)

    def graded_barycentric(self, chain: Chain, p: Sequence[int]) -> tuple:
        A, D = self._adjugate[chain]
        m = p[0]
        return tuple(Fraction(sum(a * x for a, x in zip(row, p)), D * m) for row in A)

    def locate_graded(self, p: Sequence[int]) -> list[Chain]:
        """``locate(eta/m)`` for a graded point already known to lie in S."""
        found = [c for c in self.maximal_chains if self.contains_graded(c, p)]
        if not found:
            raise CoverageFailure(f"no simplex contains the point of {tuple(p)}")
        return found

    def locate(self, point: Sequence) -> list[Chain]:
        """All maximal chains whose closed simplex contains ``point``."""
        point = ec.vector(point)
        if not self.lattice.polytope.contains(point):
            raise PointOutsidePolytope(f"{tuple(point)} is outside the polytope")
        found = [c for c in self.maximal_chains if self.contains(c, point)]
        if not found:
            raise CoverageFailure(f"no simplex contains {tuple(point)}")
        return found

    def chains_containing_face(self, face_id: str) -> list[Chain]:
        return [c for c in self.maximal_chains if face_id in c]

    @cached_property
    def volumes(self) -> dict:
        return {c: ec.simplex_volume(self.simplex(c)) for c in self.maximal_chains}

    def verify(self) -> dict:
        """Exact volume partition and pairwise proper-intersection checks."""
        total = sum(self.volumes.values(), Fraction(0))
        vol_p = self.lattice.polytope.volume
        if total != vol_p:
            raise CoverageFailure(f"simplex volumes sum to {total}, polytope volume is {vol_p}")
        pairs = 0
        for c1, c2 in itertools.combinations(self.maximal_chains, 2):
            if not proper_intersection(self.simplex(c1), self.simplex(c2)):
                raise OverlapFailure(f"simplices of {c1} and {c2} do not meet in a common face")
            pairs += 1
        return {"simplices": len(self.maximal_chains), "volume": total, "pairs_checked": pairs}

    def to_json(self) -> dict:
        return {
            "dim": self.dim,
            "marking": {fid: [ec.format_fraction(x) for x in pt] for fid, pt in self.marking.items()},
            "simplices": [
                {
                    "chain": list(c),
                    "vertices": [[ec.format_fraction(x) for x in self.marking[s]] for s in c],
                    "volume": ec.format_fraction(self.volumes[c]),
                }
                for c in self.maximal_chains
            ],
        }


def proper_intersection(s1: Sequence[Sequence], s2: Sequence[Sequence]) -> bool:
    """Whether two simplices intersect exactly in the convex hull of their common vertices.

    Maximises the weight that a common point puts on non-shared vertices of
    ``s1``; the intersection is proper iff that maximum is zero (or the
    simplices are disjoint).
    """
    s1 = [ec.vector(v) for v in s1]
    s2 = [ec.vector(v) for v in s2]
    common = set(s1) & set(s2)
    k1, k2 = len(s1), len(s2)
    n = len(s1[0])
    A, b = [], []
    for i in range(n):
        A.append([v[i] for v in s1] + [-v[i] for v in s2])
        b.append(0)
    A.append([1] * k1 + [0] * k2)
    b.append(1)
    A.append([0] * k1 + [1] * k2)
    b.append(1)
    c = [0 if v in common else 1 for v in s1] + [0] * k2
    status, value, _ = ec.lp_maximize(c, A, b)
    if status == "infeasible":
        return True
    return status == "optimal" and value == 0


def build_triangulation(marking: Mapping[str, Sequence], L: FaceLattice, verify: bool = True) -> FlagTriangulation:
    marking = check_marking(marking, L)
    T = FlagTriangulation(marking, L)
    if verify:
        T.verify()
    return T


def locate(point: Sequence, T: FlagTriangulation) -> list[Chain]:
    return T.locate(point)


def chain_lcm_degree(E: ExtremalData, chain: Sequence[str]) -> int:
    return math.lcm(*(E.degree[s] for s in chain))
