"""Chain monoids ``S_C = S ∩ K(Δ_C)``, their Hilbert bases and the fan they form."""

from __future__ import annotations

import itertools
import math
import operator
import os
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Mapping, Sequence

from . import exactcore as ec
from .errors import FanConditionViolation, InapplicableMarking
from .polytope import LatticePolytope, graded_points, lattice_points
from .stratification import Chain, ExtremalData, FlagTriangulation
from .valuation import psi, quasi_valuation_point

GradedPoint = tuple  # (m, eta_1, ..., eta_n), ints


def default_level_bound(n: int) -> int:
    env = os.environ.get("TORIDEG_LEVEL_BOUND")
    if env:
        b = int(env)
        if b < 1:
            raise ValueError("TORIDEG_LEVEL_BOUND must be at least 1")
        return b
    return n + 2


@lru_cache(maxsize=64)
def _graded(P: LatticePolytope, bound: int) -> tuple:
    return tuple(graded_points(P, bound))


def _add(a, b):
    return tuple(x + y for x, y in zip(a, b))


def _sub(a, b):
    return tuple(x - y for x, y in zip(a, b))


@dataclass(frozen=True)
class SimplicialCone:
    """Cone spanned by linearly independent primitive rays in Z^(n+1)."""

    rays: tuple  # tuple of int tuples

    @cached_property
    def ambient(self) -> int:
        return len(self.rays[0]) if self.rays else 0

    @cached_property
    def _adjugate(self):
        if len(self.rays) != self.ambient:
            return None
        return ec.integral_adjugate(ec.transpose(self.rays))

    def coordinates(self, p: Sequence) -> tuple | None:
        """Coefficients of ``p`` in the rays, or None if ``p`` is outside their span."""
        if not self.rays:
            return () if not any(p) else None
        adj = self._adjugate
        if adj is not None:
            A, D = adj
            return tuple(Fraction(sum(a * x for a, x in zip(row, p)), D) for row in A)
        try:
            return ec.solve_columns(self.rays, p)
        except ec.NotInAffineSpan:
            return None

    def integer_coordinates(self, p: Sequence) -> tuple:
        """``D * coordinates(p)`` as integers, for a full cone."""
        A, _ = self._adjugate
        return tuple(sum(map(operator.mul, row, p)) for row in A)

    def contains(self, p: Sequence) -> bool:
        adj = self._adjugate
        if adj is not None:
            mul = operator.mul
            return all(sum(map(mul, row, p)) >= 0 for row in adj[0])
        t = self.coordinates(p)
        return t is not None and all(c >= 0 for c in t)

    @property
    def index(self) -> int:
        """Index of the ray sublattice (|det| for a full cone)."""
        if not self.rays:
            return 1
        return _lattice_index(self.rays)


def _lattice_index(vectors) -> int:
    """Index of the lattice spanned by ``vectors`` in its saturation."""
    k = ec.rank(vectors)
    cols = len(vectors[0])
    g = 0
    for rows in itertools.combinations(range(len(vectors)), k):
        for cs in itertools.combinations(range(cols), k):
            det = ec.determinant([[vectors[r][c] for c in cs] for r in rows])
            g = math.gcd(g, int(det))
            if g == 1:
                return 1
    return abs(g)


def chain_cone(chain: Sequence[str], marking: Mapping[str, Sequence]) -> SimplicialCone:
    """Primitive generators of the rays through ``(1, u_s)``, s in the chain."""
    return SimplicialCone(tuple(ec.primitive_vector((1,) + tuple(marking[s])) for s in chain))


def monoid_membership(p: Sequence[int], cone: SimplicialCone) -> bool:
    """Membership of a graded point of S in ``S_C``; the origin is always in."""
    if not any(p):
        return True
    return cone.contains(p)


def _level_key(p):
    return (p[0],) + tuple(p[1:])


@dataclass
class ChainMonoid:
    chain: Chain
    cone: SimplicialCone
    hilbert_basis: list
    index: int

    def levels(self) -> list[int]:
        return sorted({h[0] for h in self.hilbert_basis})

    def contains(self, p) -> bool:
        return monoid_membership(p, self.cone)

    def to_json(self) -> dict:
        return {
            "chain": list(self.chain),
            "rays": [list(r) for r in self.cone.rays],
            "index": self.index,
            "hilbert_basis": [list(h) for h in self.hilbert_basis],
        }


def parallelepiped_points(cone: SimplicialCone) -> list[tuple[int, ...]]:
    """Nonzero lattice points ``sum t_i r_i`` with ``0 <= t_i < 1``."""
    rays = cone.rays
    lo = [sum(min(0, r[i]) for r in rays) for i in range(cone.ambient)]
    hi = [sum(max(0, r[i]) for r in rays) for i in range(cone.ambient)]
    full = cone._adjugate is not None
    D = cone._adjugate[1] if full else None
    out = []
    for x in itertools.product(*(range(a, b + 1) for a, b in zip(lo, hi))):
        if not any(x):
            continue
        if full:
            if all(0 <= c < D for c in cone.integer_coordinates(x)):
                out.append(x)
            continue
        t = cone.coordinates(x)
        if t is not None and all(0 <= c < 1 for c in t):
            out.append(x)
    return out


def _reduce(candidates, cone) -> list:
    cands = sorted(set(candidates), key=_level_key)
    out = []
    for x in cands:
        if not any(y != x and cone.contains(_sub(x, y)) for y in cands):
            out.append(x)
    return out


def hilbert_basis(chain: Sequence[str], cone: SimplicialCone) -> ChainMonoid:
    """Minimal generating set of ``S_C`` via the fundamental parallelepiped."""
    cands = list(cone.rays) + parallelepiped_points(cone)
    return ChainMonoid(tuple(chain), cone, _reduce(cands, cone), cone.index)


def hilbert_basis_bruteforce(cone: SimplicialCone, P: LatticePolytope, level_bound: int | None = None) -> list:
    """Irreducible elements of ``S ∩ cone`` found by scanning S up to a level.

    The default bound ``k * (max ray level)`` covers the parallelepiped, so
    the scan is exhaustive.
    """
    if not cone.rays:
        return []
    if level_bound is None:
        level_bound = len(cone.rays) * max(r[0] for r in cone.rays)
    elems = [p for p in _graded(P, level_bound) if p[0] > 0 and cone.contains(p)]
    have = set(elems)
    out = []
    for x in elems:
        if not any(y != x and _sub(x, y) in have for y in elems if y[0] <= x[0]):
            out.append(x)
    return sorted(out, key=_level_key)


# --------------------------------------------------------------------------
# The fan


@dataclass
class MonoidFan:
    triangulation: FlagTriangulation
    extremal: ExtremalData
    monoids: dict  # maximal chain -> ChainMonoid
    level_bound: int
    fan_pairs_checked: int = 0
    psi_points_checked: int = 0
    _sub: dict = field(default_factory=dict, repr=False)

    @property
    def dim(self) -> int:
        return self.triangulation.dim

    def monoid(self, chain: Sequence[str]) -> ChainMonoid:
        chain = tuple(chain)
        if chain in self.monoids:
            return self.monoids[chain]
        if chain not in self._sub:
            cone = chain_cone(chain, self.triangulation.marking)
            if chain:
                self._sub[chain] = hilbert_basis(chain, cone)
            else:
                self._sub[chain] = ChainMonoid((), cone, [], 1)
        return self._sub[chain]

    def to_json(self) -> dict:
        return {
            "level_bound": self.level_bound,
            "fan_pairs_checked": self.fan_pairs_checked,
            "psi_points_checked": self.psi_points_checked,
            "chains": [M.to_json() for M in self.monoids.values()],
        }


def fan_of_monoids(T: FlagTriangulation, E: ExtremalData, level_bound: int | None = None,
                   verify: bool = True) -> MonoidFan:
    """Chain monoids for every maximal chain, with the fan condition and ψ checked."""
    bound = level_bound or default_level_bound(T.dim)
    monoids = {}
    for c in T.maximal_chains:
        monoids[c] = hilbert_basis(c, chain_cone(c, T.marking))
    F = MonoidFan(T, E, monoids, bound)
    if verify:
        check_fan_condition(F, bound)
        check_psi(F, bound)
    return F


def check_fan_condition(F: MonoidFan, bound: int) -> int:
    """``S_C ∩ S_C' = S_{C∩C'}`` for all pairs of maximal chains, up to ``bound``.

    One inclusion is automatic (the rays of ``C∩C'`` are rays of both), so a
    point is only tested against the sub-chain cone when both chains hold it.
    That test reads off the unique coordinates of the point in the rays of
    ``C``: it lies in the sub-cone iff they vanish off ``C∩C'``.
    """
    P = F.triangulation.lattice.polytope
    chains = list(F.monoids)
    pairs = 0
    for p in _graded(P, bound):
        holders = [c for c in chains if F.monoids[c].contains(p)]
        for c1, c2 in itertools.combinations(holders, 2):
            common = {s for s in c1 if s in c2}
            pairs += 1
            t = F.monoids[c1].cone.integer_coordinates(p)
            if any(ti != 0 for s, ti in zip(c1, t) if s not in common):
                raise FanConditionViolation(f"{p} lies in S_{c1} and S_{c2} but not in S_{common}")
    F.fan_pairs_checked = pairs
    return pairs


def check_psi(F: MonoidFan, bound: int) -> int:
    """ψ(ν(p)) = p, and ν(p) is supported in C exactly when p ∈ S_C."""
    T, E = F.triangulation, F.extremal
    P = T.lattice.polytope
    count = 0
    for p in _graded(P, bound):
        v, _ = quasi_valuation_point(p, T, E)
        if psi(v, E) != tuple(Fraction(x) for x in p):
            raise FanConditionViolation(f"psi does not invert the quasi-valuation at {p}")
        for c, M in F.monoids.items():
            if (set(v) <= set(c)) != M.contains(p):
                raise FanConditionViolation(f"support of nu{p} disagrees with membership in S_{c}")
        count += 1
    F.psi_points_checked = count
    return count


# --------------------------------------------------------------------------
# Degree-one submonoids and the integral case


def degree_one_submonoid(chain: Sequence[str], T: FlagTriangulation) -> list[GradedPoint]:
    """Generators ``(1, eta)`` with ``eta`` a lattice point of the chain's simplex."""
    chain = tuple(chain)
    simplex = T.simplex(chain)
    out = []
    for x in lattice_points(T.lattice.polytope, 1):
        if chain in T.maximal_chains:
            inside = T.contains(chain, x)
        else:
            try:
                _, inside = ec.barycentric_coordinates(simplex, x)
            except ec.NotInAffineSpan:
                inside = False
        if inside:
            out.append((1,) + x)
    return out


def is_integral(T: FlagTriangulation, E: ExtremalData) -> bool:
    return all(E.degree[s] == 1 for s in T.marking) and all(
        x.denominator == 1 for u in T.marking.values() for x in u
    )


class _Span:
    """Level-graded N-span of a finite set of level-one generators."""

    def __init__(self, gens):
        self.gens = list(gens)
        self.levels = [{(0,) * (len(self.gens[0]) if self.gens else 1)}]

    def level(self, k: int) -> set:
        while len(self.levels) <= k:
            prev = self.levels[-1]
            self.levels.append({_add(s, g) for s in prev for g in self.gens})
        return self.levels[k]

    def __contains__(self, p) -> bool:
        return p[0] >= 0 and tuple(p) in self.level(p[0])


@dataclass
class SaturationReport:
    chain: Chain
    level_bound: int
    equal: bool
    missing: list
    multiple: dict  # missing point -> least k with k*p in the span

    def to_json(self) -> dict:
        return {
            "chain": list(self.chain),
            "level_bound": self.level_bound,
            "equal": self.equal,
            "missing": [list(p) for p in self.missing],
            "multiple": [{"point": list(p), "k": k} for p, k in self.multiple.items()],
        }


def saturation_check(chain: Sequence[str], T: FlagTriangulation, E: ExtremalData, d: int) -> SaturationReport:
    """Compare ``S_C`` with the span of its degree-one elements up to level ``d``."""
    if not is_integral(T, E):
        raise InapplicableMarking("saturation check needs lattice-point markings of degree one")
    chain = tuple(chain)
    n = T.dim
    cone = chain_cone(chain, T.marking)
    span = _Span(degree_one_submonoid(chain, T))
    missing = [p for p in _graded(T.lattice.polytope, d) if monoid_membership(p, cone) and p not in span]
    multiple = {}
    for p in missing:
        for k in range(2, n + 2):
            if tuple(k * x for x in p) in span:
                multiple[p] = k
                break
    return SaturationReport(chain, d, not missing, missing, multiple)


@dataclass
class ComponentRecord:
    chain: Chain
    rank: int
    index: int
    hilbert_size: int
    hilbert_levels: list
    saturated: bool
    degree_one: list | None = None
    degree_one_equal: bool | None = None
    degree_one_group: dict | None = None

    def to_json(self) -> dict:
        out = {
            "chain": list(self.chain),
            "rank": self.rank,
            "index": self.index,
            "hilbert_size": self.hilbert_size,
            "hilbert_levels": self.hilbert_levels,
            "saturated": self.saturated,
        }
        if self.degree_one is not None:
            out["degree_one"] = [list(g) for g in self.degree_one]
            out["degree_one_equal"] = self.degree_one_equal
            out["degree_one_group"] = self.degree_one_group
        return out


def _generated_up_to(gens, elems, bound) -> bool:
    """Every element of ``elems`` (levels <= bound) is an N-sum of ``gens``."""
    have = {tuple(0 for _ in gens[0])}
    reach = set(have)
    frontier = set(have)
    while frontier:
        nxt = set()
        for s in frontier:
            for g in gens:
                t = _add(s, g)
                if t[0] <= bound and t not in reach:
                    reach.add(t)
                    nxt.add(t)
        frontier = nxt
    return all(e in reach for e in elems)


def component_report(F: MonoidFan, n: int | None = None, level_bound: int | None = None) -> list[ComponentRecord]:
    """Per maximal chain: group rank, index, Hilbert data, saturation, and S¹ data when integral."""
    T, E = F.triangulation, F.extremal
    n = T.dim if n is None else n
    bound = level_bound or F.level_bound
    integral = is_integral(T, E)
    P = T.lattice.polytope
    out = []
    for c, M in F.monoids.items():
        hb = M.hilbert_basis
        elems = [p for p in _graded(P, bound) if M.contains(p)]
        rank = ec.rank(hb)
        saturated = _lattice_index(hb) == 1 and rank == n + 1 and _generated_up_to(hb, elems, bound)
        rec = ComponentRecord(c, rank, M.index, len(hb), M.levels(), saturated)
        if integral:
            gens = degree_one_submonoid(c, T)
            rep = saturation_check(c, T, E, bound)
            rec.degree_one = gens
            rec.degree_one_equal = rep.equal
            grank = ec.rank(gens) if gens else 0
            rec.degree_one_group = {
                "rank": grank,
                "index": _lattice_index(gens) if grank == n + 1 else None,
            }
        out.append(rec)
    return out
