"""Chain valuations and the quasi-valuation on graded points.

A graded point ``(m, eta)`` stands for the eigenfunction of weight
``(m, eta)``; a ring element is a formal rational combination of graded
points, given as a mapping ``point -> coefficient`` or a list of points.
Values in Q^A are sparse dicts ``face id -> Fraction`` without zero entries.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from . import exactcore as ec
from .errors import InvalidGradedPoint, ToridegError, ZeroPolynomial
from .polytope import FaceLattice, graded_points, is_graded_point
from .stratification import Chain, ExtremalData, FlagTriangulation

QuasiValue = dict  # face id -> Fraction, no zero entries


class AOrder:
    """A linearization of the face poset and the induced order on Q^A.

    Vectors are compared coefficient by coefficient starting from the face
    that is largest in the linearization; absent entries count as zero.
    """

    def __init__(self, ascending: Sequence[str], L: FaceLattice | None = None):
        self.ascending = tuple(ascending)
        self.position = {fid: i for i, fid in enumerate(self.ascending)}
        self.descending = self.ascending[::-1]
        if len(self.position) != len(self.ascending):
            raise ToridegError("linearization lists a face twice")
        if L is not None:
            if set(self.ascending) != set(L.ids):
                raise ToridegError("linearization must list every face exactly once")
            for a in L.ids:
                for b in L.up[a]:
                    if self.position[b] < self.position[a]:
                        raise ToridegError(f"linearization puts {b!r} below its face {a!r}")

    @classmethod
    def default(cls, L: FaceLattice) -> "AOrder":
        return cls(L.linearization, L)

    @classmethod
    def alternate(cls, L: FaceLattice) -> "AOrder":
        """By dimension, but reversed within each dimension."""
        ids = []
        for _, grp in itertools.groupby(L.faces, key=lambda f: f.dim):
            ids.extend(f.id for f in reversed(list(grp)))
        return cls(ids, L)

    def key(self, v: Mapping[str, Fraction]) -> tuple:
        return tuple(v.get(fid, 0) for fid in self.descending)

    def compare(self, a: Mapping, b: Mapping) -> int:
        ka, kb = self.key(a), self.key(b)
        return (ka > kb) - (ka < kb)

    def minimum(self, values: Iterable[Mapping]) -> Mapping:
        return min(values, key=self.key)

    def __repr__(self):
        return f"AOrder({list(self.ascending)!r})"


# --------------------------------------------------------------------------
# Input normalisation


def _as_point(p) -> tuple[int, ...]:
    if isinstance(p, Mapping) and "m" in p:
        return (int(p["m"]),) + tuple(int(x) for x in p["eta"])
    if any(isinstance(x, float) for x in p):
        raise InvalidGradedPoint(f"graded point {p!r} has non-integer entries")
    return tuple(int(x) for x in p)


def terms(g) -> dict[tuple[int, ...], Fraction]:
    """Normalise a graded point or formal sum into ``{point: coefficient}``.

    Raises ZeroPolynomial when nothing survives cancellation.
    """
    out: dict[tuple[int, ...], Fraction] = {}
    if isinstance(g, tuple) and g and all(isinstance(x, int) for x in g):
        out[g] = Fraction(1)
    elif isinstance(g, Mapping) and "m" in g:
        out[_as_point(g)] = Fraction(1)
    elif isinstance(g, Mapping):
        for p, c in g.items():
            p = _as_point(p)
            out[p] = out.get(p, Fraction(0)) + ec.frac(c)
    else:
        for p in g:
            p = _as_point(p)
            out[p] = out.get(p, Fraction(0)) + 1
    out = {p: c for p, c in out.items() if c != 0}
    if not out:
        raise ZeroPolynomial("the valuation of zero is undefined")
    return out


def _check_point(P, p):
    if not is_graded_point(P, p):
        raise InvalidGradedPoint(f"{p!r} is not in the weight monoid")


def sparse(v: Mapping) -> QuasiValue:
    return {k: Fraction(x) for k, x in v.items() if x != 0}


def psi(a: Mapping[str, Fraction], E: ExtremalData) -> tuple:
    """``sum a_s * (d_s, d_s u_s)``; integral when ``a`` is a value."""
    out = None
    for fid, c in a.items():
        w = E.weight[fid]
        out = [c * x for x in w] if out is None else [o + c * x for o, x in zip(out, w)]
    if out is None:
        n1 = len(next(iter(E.weight.values())))
        return (Fraction(0),) * n1
    return tuple(out)


def psi_int(a: Mapping, E: ExtremalData) -> tuple[int, ...]:
    v = psi(a, E)
    if any(x.denominator != 1 for x in v):
        raise InvalidGradedPoint(f"{v!r} is not a lattice point")
    return tuple(int(x) for x in v)


# --------------------------------------------------------------------------
# Chain valuation


@dataclass(frozen=True)
class ChainValue:
    chain: Chain
    coefficients: dict  # every face of the chain, zeros included

    @property
    def is_nonnegative(self) -> bool:
        return all(c >= 0 for c in self.coefficients.values())

    def sparse(self) -> QuasiValue:
        return sparse(self.coefficients)


def _nu_chain_point(p, chain, E) -> dict:
    inv = E.chain_inverse(chain)
    vals = [sum((a * b for a, b in zip(row, p)), Fraction(0)) for row in inv]
    return dict(zip(chain, vals))


def nu_chain(g, chain: Sequence[str], E: ExtremalData, order: AOrder | None = None) -> ChainValue:
    """Coordinates of ``g`` in the lifted-weight basis along a maximal chain.

    For a formal sum the result is the minimum over its terms, compared in
    ``order`` restricted to the chain (the default linearization orders the
    chain bottom-up, which is its only linear extension anyway).
    """
    chain = tuple(chain)
    ts = terms(g)
    vals = [_nu_chain_point(p, chain, E) for p in ts]
    if len(vals) == 1:
        return ChainValue(chain, vals[0])
    if order is None:
        key = lambda v: tuple(v[s] for s in reversed(chain))  # noqa: E731
    else:
        key = order.key
    return ChainValue(chain, min(vals, key=key))


# --------------------------------------------------------------------------
# Quasi-valuation


def quasi_valuation_point(p, T: FlagTriangulation, E: ExtremalData) -> tuple[QuasiValue, Chain | None]:
    """Value of a single graded point, with the chain whose simplex was used."""
    p = _as_point(p)
    _check_point(T.lattice.polytope, p)
    m = p[0]
    if m == 0:
        return {}, None
    chain = T.locate_graded(p)[0]
    b = T.graded_barycentric(chain, p)
    return sparse({s: bs * m / E.degree[s] for s, bs in zip(chain, b)}), chain


def quasi_valuation(g, T: FlagTriangulation, E: ExtremalData, order: AOrder | None = None) -> QuasiValue:
    """The quasi-valuation via point location (fast path)."""
    ts = terms(g)
    vals = [quasi_valuation_point(p, T, E)[0] for p in ts]
    if len(vals) == 1:
        return vals[0]
    order = order or AOrder.default(T.lattice)
    return dict(order.minimum(vals))


def quasi_valuation_via_min(g, chains: Sequence[Chain], E: ExtremalData, order: AOrder,
                            polytope=None) -> QuasiValue:
    """Minimum over all maximal chains of the chain valuations.

    This is the defining formula and serves as the oracle for
    :func:`quasi_valuation`.
    """
    ts = terms(g)
    if polytope is not None:
        for p in ts:
            _check_point(polytope, p)
    best = None
    for c in chains:
        for p in ts:
            v = sparse(_nu_chain_point(p, c, E))
            if best is None or order.key(v) < order.key(best):
                best = v
    return best


def containment_conditions(p, chain: Chain, T: FlagTriangulation, E: ExtremalData, order: AOrder) -> tuple[bool, bool, bool]:
    """The three equivalent conditions for a graded point and a maximal chain.

    (i) the quasi-valuation equals the chain valuation, (ii) ``eta/m`` lies in
    the chain's simplex, (iii) the chain valuation is nonnegative.
    """
    p = _as_point(p)
    nc = nu_chain(p, chain, E)
    qv = quasi_valuation_via_min(p, T.maximal_chains, E, order)
    i = qv == nc.sparse()
    m = p[0]
    ii = True if m == 0 else T.contains_graded(chain, p)
    iii = nc.is_nonnegative
    return i, ii, iii


# --------------------------------------------------------------------------
# Valuation monoid along one chain


@dataclass
class MonoidLawReport:
    chain: Chain
    level_bound: int
    points_checked: int
    denominators: dict  # face id -> lcm of denominators over all images
    round_trip: bool
    law_maps_into_lattice: bool
    law_is_sharp: bool
    law_points_hit: bool

    @property
    def ok(self) -> bool:
        return self.round_trip and self.law_maps_into_lattice and self.law_is_sharp and self.law_points_hit

    def law(self) -> list[str]:
        return [f"{q}*a[{fid}] in Z" if q != 1 else f"a[{fid}] in Z" for fid, q in self.denominators.items()]

    def to_json(self) -> dict:
        return {
            "chain": list(self.chain),
            "level_bound": self.level_bound,
            "points_checked": self.points_checked,
            "denominators": dict(self.denominators),
            "law": self.law(),
            "round_trip": self.round_trip,
            "law_maps_into_lattice": self.law_maps_into_lattice,
            "law_is_sharp": self.law_is_sharp,
            "law_points_hit": self.law_points_hit,
        }


def valuation_monoid_check(chain: Sequence[str], E: ExtremalData, d: int, L: FaceLattice) -> MonoidLawReport:
    """Images of ``{(m, eta) in S : m <= d}`` under the chain valuation.

    Records per-coordinate denominators (the monoid law), the round trip
    ``psi(nu(p)) == p``, whether the law lattice maps into Z^(n+1)
    (so every law point is the value of a lattice point), whether the law is
    sharp (index of the law lattice equals ``|det|`` of the weight matrix) and,
    by box enumeration, that every law point whose image lies in the
    truncation of S is attained.
    """
    chain = tuple(chain)
    P = L.polytope
    pts = graded_points(P, d)
    images = {}
    ok_round = True
    for p in pts:
        a = _nu_chain_point(p, chain, E)
        images[p] = a
        if psi(a, E) != tuple(Fraction(x) for x in p):
            ok_round = False
    den = {s: 1 for s in chain}
    for a in images.values():
        for s in chain:
            den[s] = math.lcm(den[s], a[s].denominator)
    into = all(all(x.denominator == 1 for x in psi({s: Fraction(1, den[s])}, E)) for s in chain)
    W = ec.transpose(E.basis(chain))
    sharp = abs(ec.determinant(W)) == math.prod(den.values())
    # box enumeration of the law lattice
    hit = True
    attained = {tuple(a[s] for s in chain) for a in images.values()}
    lo = [min(a[s] for a in images.values()) for s in chain]
    hi = [max(a[s] for a in images.values()) for s in chain]
    ranges = [
        [Fraction(k, den[s]) for k in range(math.floor(lo[i] * den[s]), math.ceil(hi[i] * den[s]) + 1)]
        for i, s in enumerate(chain)
    ]
    for a in itertools.product(*ranges):
        v = psi(dict(zip(chain, a)), E)
        if any(x.denominator != 1 for x in v):
            hit = False
            break
        q = tuple(int(x) for x in v)
        if q[0] <= d and is_graded_point(P, q) and a not in attained:
            hit = False
            break
    return MonoidLawReport(chain, d, len(pts), den, ok_round, into, sharp, hit)


def to_json(v: Mapping[str, Fraction]) -> dict:
    return {fid: ec.format_fraction(x) for fid, x in v.items()}
