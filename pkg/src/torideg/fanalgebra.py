"""The fan algebra, generator sets, the monomial preorder and kernel bases.

Polynomials in the generator variables are dicts ``exponent tuple ->
Fraction``. A monomial is its exponent tuple. The maps θ and θ̄ are modelled
on graded points: θ(x^α) is the point Σ α_i g_i, and θ̄(x^α) is the class of
that point when α is minimal and zero otherwise.
"""

from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from . import exactcore as ec
from .errors import DecompositionFailure, InapplicableMarking, InvalidGradedPoint, ZeroPolynomial
from .monoidfan import MonoidFan, _Span, degree_one_submonoid, is_integral, saturation_check
from .polytope import is_graded_point, lattice_points
from .stratification import Chain, ExtremalData, FlagTriangulation
from .valuation import AOrder, QuasiValue, quasi_valuation_point

ZERO = None
Monomial = tuple
Polynomial = dict


class Cmp(enum.IntEnum):
    LESS = -1
    EQUAL = 0
    GREATER = 1


def _add(a, b):
    return tuple(x + y for x, y in zip(a, b))


def _dot(alpha, lam):
    return sum(lam[i] * a for i, a in enumerate(alpha) if a)


# --------------------------------------------------------------------------
# Basis multiplication


def _chains_of(p, T: FlagTriangulation) -> set:
    if not is_graded_point(T.lattice.polytope, p):
        raise InvalidGradedPoint(f"{p!r} is not in the weight monoid")
    return set(T.locate_graded(p))


def multiply_basis(a: Sequence[int], b: Sequence[int], T: FlagTriangulation):
    """Product of two basis classes: their sum if one simplex holds both, else ZERO."""
    a, b = tuple(a), tuple(b)
    for x in (a, b):
        if not is_graded_point(T.lattice.polytope, x):
            raise InvalidGradedPoint(f"{x!r} is not in the weight monoid")
    if not any(a):
        return b
    if not any(b):
        return a
    if _chains_of(a, T) & _chains_of(b, T):
        return _add(a, b)
    return ZERO


def multiply(x: Mapping, y: Mapping, T: FlagTriangulation) -> dict:
    """Bilinear extension to finite combinations ``{point: coefficient}``."""
    out: dict = {}
    for a, ca in x.items():
        for b, cb in y.items():
            prod = multiply_basis(a, b, T)
            if prod is not ZERO:
                out[prod] = out.get(prod, Fraction(0)) + Fraction(ca) * Fraction(cb)
    return {p: c for p, c in out.items() if c != 0}


# --------------------------------------------------------------------------
# Generator sets


@dataclass
class GeneratorSet:
    """Ordered generators ``g_1..g_p``; the first ``r`` are all of Λ at level one."""

    points: list
    nus: list  # QuasiValue per generator
    triangulation: FlagTriangulation
    extremal: ExtremalData
    order: AOrder
    r: int
    _lifts: dict = field(default_factory=dict, repr=False)
    _scaled: dict = field(default_factory=dict, repr=False)
    _monomials: dict = field(default_factory=dict, repr=False)

    @classmethod
    def from_points(cls, points: Iterable[Sequence[int]], T: FlagTriangulation, E: ExtremalData,
                    order: AOrder | None = None) -> "GeneratorSet":
        pts = list(dict.fromkeys(tuple(p) for p in points))
        nus = [quasi_valuation_point(p, T, E)[0] for p in pts]
        r = sum(1 for p in pts if p[0] == 1)
        return cls(pts, nus, T, E, order or AOrder.default(T.lattice), r)

    @property
    def levels(self) -> list[int]:
        return [p[0] for p in self.points]

    @property
    def ids(self) -> list[str]:
        return [f"g{i}" for i in range(len(self.points))]

    def __len__(self):
        return len(self.points)

    def chain_members(self, chain: Chain) -> list[int]:
        cs = set(chain)
        return [i for i, v in enumerate(self.nus) if set(v) <= cs]

    def to_json(self) -> list:
        return [
            {"id": gid, "point": list(p), "nu": {k: ec.format_fraction(x) for k, x in v.items()}}
            for gid, p, v in zip(self.ids, self.points, self.nus)
        ]

    # monomial data -------------------------------------------------------

    def theta(self, alpha: Monomial) -> tuple:
        out = (0,) * len(self.points[0])
        for a, g in zip(alpha, self.points):
            if a:
                out = tuple(o + a * x for o, x in zip(out, g))
        return out

    def deg_m(self, alpha: Monomial) -> int:
        return sum(a * p[0] for a, p in zip(alpha, self.points))

    def nu_sum(self, alpha: Monomial) -> QuasiValue:
        out: dict = {}
        for a, v in zip(alpha, self.nus):
            if a:
                for k, x in v.items():
                    out[k] = out.get(k, Fraction(0)) + a * x
        return {k: x for k, x in out.items() if x != 0}

    def deg_A(self, alpha: Monomial) -> tuple[int, QuasiValue]:
        return self.deg_m(alpha), self.nu_sum(alpha)

    def sort_key(self, alpha: Monomial) -> tuple:
        """Increasing in the preorder: degree first, then decreasing ν-sum."""
        key = self.order.key(self.nu_sum(alpha))
        return (self.deg_m(alpha), tuple(-x for x in key))

    @property
    def denominator(self) -> int:
        return math.lcm(1, *(x.denominator for v in self.nus for x in v.values()))

    def int_key(self, alpha: Monomial, order: AOrder | None = None) -> tuple:
        """``sort_key`` scaled by the common denominator of the ν(g_i); integral, same order."""
        order = order or self.order
        rows = self._scaled.get(tuple(order.ascending))
        if rows is None:
            D = self.denominator
            pos = {s: j for j, s in enumerate(order.descending)}
            rows = [[(pos[s], -int(x * D)) for s, x in v.items()] for v in self.nus]
            self._scaled[tuple(order.ascending)] = rows
        acc = [0] * len(order.descending)
        deg = 0
        for a, p, row in zip(alpha, self.points, rows):
            if a:
                deg += a * p[0]
                for j, x in row:
                    acc[j] += a * x
        return deg, tuple(acc)

    def monomials(self, k: int) -> list[Monomial]:
        """All exponent vectors of weighted degree exactly ``k``, in lexicographic order."""
        if k in self._monomials:
            return list(self._monomials[k])
        levels = self.levels
        p = len(levels)
        out = []

        def rec(i, left, acc):
            if i == p:
                if left == 0:
                    out.append(tuple(acc))
                return
            for a in range(left // levels[i] + 1):
                acc.append(a)
                rec(i + 1, left - a * levels[i], acc)
                acc.pop()

        rec(0, k, [])
        out.sort()
        self._monomials[k] = tuple(out)
        return out


def generator_set(F: MonoidFan, order: AOrder | None = None) -> GeneratorSet:
    """Λ at level one (lexicographic) followed by the higher Hilbert elements of all chains."""
    T = F.triangulation
    lam = [(1,) + x for x in lattice_points(T.lattice.polytope, 1)]
    higher = sorted({h for M in F.monoids.values() for h in M.hilbert_basis if h[0] >= 2})
    return GeneratorSet.from_points(lam + higher, T, F.extremal, order)


def compare_deg_A(alpha: Monomial, beta: Monomial, G: GeneratorSet, order: AOrder | None = None) -> Cmp:
    ka, kb = G.int_key(alpha, order), G.int_key(beta, order)
    return Cmp((ka > kb) - (ka < kb))


def is_minimal_monomial(alpha: Monomial, G: GeneratorSet) -> bool:
    supp = set()
    for a, v in zip(alpha, G.nus):
        if a:
            supp |= set(v)
    return any(supp <= set(c) for c in G.triangulation.maximal_chains)


def val_nu(alpha: Monomial, G: GeneratorSet) -> tuple[int, QuasiValue]:
    """``(deg_m, ν(θ(x^α)))``, the valuation of the monomial's image."""
    p = G.theta(alpha)
    return p[0], quasi_valuation_point(p, G.triangulation, G.extremal)[0]


# --------------------------------------------------------------------------
# Minimal lifts


def _decompose(target: Sequence[Fraction], vecs: list, idx: list, p: int) -> tuple | None:
    """Lexicographically least exponent vector (over ``idx``) with Σ α_i vecs_i = target.

    All vectors are nonzero and nonnegative, so the search is finite.
    """
    k = len(idx)
    alpha = [0] * p

    def rec(j, rest):
        if not any(rest):
            return True
        if j == k:
            return False
        v = vecs[j]
        cap = min(rest[t] // v[t] for t in range(len(v)) if v[t] > 0)
        for a in range(0, cap + 1):
            nr = [x - a * y for x, y in zip(rest, v)]
            if all(x >= 0 for x in nr):
                alpha[idx[j]] = a
                if rec(j + 1, nr):
                    return True
        alpha[idx[j]] = 0
        return False

    if rec(0, list(target)):
        return tuple(alpha)
    return None


def fixed_minimal_lift(p: Sequence[int], G: GeneratorSet) -> Monomial:
    """The lexicographically least minimal monomial whose ν-sum is ν(p)."""
    p = tuple(p)
    if p in G._lifts:
        return G._lifts[p]
    if not any(p):
        G._lifts[p] = (0,) * len(G)
        return G._lifts[p]
    nu = quasi_valuation_point(p, G.triangulation, G.extremal)[0]
    best = None
    for c in G.triangulation.maximal_chains:
        if not set(nu) <= set(c):
            continue
        idx = G.chain_members(c)
        # work in the chain's coordinates, cleared to integers
        den = math.lcm(*(x.denominator for i in idx for x in G.nus[i].values()),
                       *(x.denominator for x in nu.values()))
        vecs = [tuple(int(G.nus[i].get(s, 0) * den) for s in c) for i in idx]
        target = tuple(int(nu.get(s, 0) * den) for s in c)
        alpha = _decompose(target, vecs, idx, len(G))
        if alpha is not None and (best is None or alpha < best):
            best = alpha
    if best is None:
        raise DecompositionFailure(f"{p} has no minimal lift in the generator set")
    G._lifts[p] = best
    return best


# --------------------------------------------------------------------------
# Polynomials


def _clean(f: Mapping) -> Polynomial:
    return {tuple(a): Fraction(c) for a, c in f.items() if c != 0}


def binomial(alpha: Monomial, beta: Monomial) -> Polynomial:
    return _clean({alpha: 1, beta: -1}) if alpha != beta else {}


def initial_term(f: Mapping, G: GeneratorSet) -> Polynomial:
    """Sum of the terms whose monomials are maximal in the deg_A preorder."""
    f = _clean(f)
    if not f:
        raise ZeroPolynomial("initial term of the zero polynomial")
    keys = {a: G.int_key(a) for a in f}
    top = max(keys.values())
    return {a: c for a, c in f.items() if keys[a] == top}


def initial_term_lambda(f: Mapping, lam: Sequence[int]) -> Polynomial:
    f = _clean(f)
    if not f:
        raise ZeroPolynomial("initial term of the zero polynomial")
    w = {a: _dot(a, lam) for a in f}
    top = max(w.values())
    return {a: c for a, c in f.items() if w[a] == top}


def polynomial_to_json(f: Mapping, ids: Sequence[str]) -> list:
    return [
        {"coeff": ec.format_fraction(c), "exps": {ids[i]: e for i, e in enumerate(a) if e}}
        for a, c in sorted(f.items())
    ]


# --------------------------------------------------------------------------
# Kernel bases


def theta_kernel_basis(G: GeneratorSet, k: int) -> list[Polynomial]:
    """A basis of ker θ in degree ``k``: differences within each θ-fibre."""
    fibres: dict = {}
    for a in G.monomials(k):
        fibres.setdefault(G.theta(a), []).append(a)
    out = []
    for mons in fibres.values():
        out.extend(binomial(b, mons[0]) for b in mons[1:])
    return out


def _span_rank(polys: Sequence[Mapping]) -> int:
    """Rank by sparse elimination; kernel rows have two or three terms."""
    pivots: dict = {}  # leading monomial -> reduced row
    for f in polys:
        r = {a: Fraction(c) for a, c in f.items() if c}
        while r:
            lead = max(r)
            row = pivots.get(lead)
            if row is None:
                pivots[lead] = r
                break
            t = r[lead] / row[lead]
            for a, c in row.items():
                v = r.get(a, 0) - t * c
                if v:
                    r[a] = v
                else:
                    r.pop(a, None)
    return len(pivots)


def same_span(A: Sequence[Mapping], B: Sequence[Mapping]) -> bool:
    ra, rb = _span_rank(A), _span_rank(B)
    return ra == rb == _span_rank(list(A) + list(B))


@dataclass
class KernelBases:
    degree_bound: int
    bar_B1: dict  # degree -> list of monomials
    bar_B2: dict  # degree -> list of binomials
    bar_B3: dict  # degree -> list of monomials (fixed lifts)
    B1: dict
    B2: dict
    B3: dict
    monomial_counts: dict
    point_counts: dict
    dimension_identity: dict  # degree -> bool
    initial_span_equal: dict  # degree -> bool

    @property
    def ok(self) -> bool:
        return all(self.dimension_identity.values()) and all(self.initial_span_equal.values())

    def kernel_elements(self) -> list[Polynomial]:
        return [f for k in sorted(self.B1) for f in self.B1[k] + self.B2[k]]

    def to_json(self, ids: Sequence[str]) -> dict:
        per = []
        for k in sorted(self.bar_B1):
            per.append({
                "degree": k,
                "monomials": self.monomial_counts[k],
                "points": self.point_counts[k],
                "bar_B1": [polynomial_to_json({a: 1}, ids) for a in self.bar_B1[k]],
                "bar_B2": [polynomial_to_json(f, ids) for f in self.bar_B2[k]],
                "bar_B3": [polynomial_to_json({a: 1}, ids) for a in self.bar_B3[k]],
                "B1": [polynomial_to_json(f, ids) for f in self.B1[k]],
                "dimension_identity": self.dimension_identity[k],
                "initial_span_equal": self.initial_span_equal[k],
            })
        return {"degree_bound": self.degree_bound, "degrees": per, "ok": self.ok}


def kernel_bases(G: GeneratorSet, d: int) -> KernelBases:
    """Bases of ker θ̄ and ker θ in degrees ``1..d`` with their verification record."""
    if d < 1:
        raise ValueError("degree bound must be at least 1")
    P = G.triangulation.lattice.polytope
    bB1, bB2, bB3, B1, B2, B3 = ({} for _ in range(6))
    mons_n, pts_n, dim_ok, span_ok = {}, {}, {}, {}
    for k in range(1, d + 1):
        mons = G.monomials(k)
        pts = lattice_points(P, k)
        b1, b2, b3, k1 = [], [], [], []
        lifts_here = set()
        for a in mons:
            p = G.theta(a)
            lift = fixed_minimal_lift(p, G)
            if not is_minimal_monomial(a, G):
                b1.append(a)
                k1.append(binomial(a, lift))
            elif a != lift:
                b2.append(binomial(a, lift))
            else:
                lifts_here.add(a)
        b3 = sorted(lifts_here)
        bB1[k], bB2[k], bB3[k] = b1, b2, b3
        B1[k], B2[k], B3[k] = k1, list(b2), list(b3)
        mons_n[k], pts_n[k] = len(mons), len(pts)
        dim_ok[k] = len(b1) + len(b2) == len(mons) - len(pts) and len(b3) == len(pts)
        initials = [initial_term(f, G) for f in k1 + b2]
        span_ok[k] = same_span(initials, [{a: 1} for a in b1] + b2)
    return KernelBases(d, bB1, bB2, bB3, B1, B2, B3, mons_n, pts_n, dim_ok, span_ok)


# --------------------------------------------------------------------------
# Weight vector and homogenization


@dataclass
class WeightVector:
    lam: list
    degree_bound: int
    base: int
    monomials_checked: int
    order_embedding: bool
    initial_terms_agree: bool | None = None

    def to_json(self) -> dict:
        return {
            "lambda": list(self.lam),
            "degree_bound": self.degree_bound,
            "base": self.base,
            "monomials_checked": self.monomials_checked,
            "order_embedding": self.order_embedding,
            "initial_terms_agree": self.initial_terms_agree,
        }


def weight_vector(G: GeneratorSet, d: int, order: AOrder | None = None,
                  kernel: KernelBases | None = None) -> WeightVector:
    """Integral λ with λ·α ordering monomials of degree <= d exactly as deg_A does."""
    order = order or G.order
    faces = order.ascending
    K = len(faces)
    D = G.denominator
    maxc = max([1] + [int(x * D) for v in G.nus for x in v.values()])
    B = d * maxc * K + 1
    lam = []
    for p, v in zip(G.points, G.nus):
        lam.append(B ** K * p[0] - sum(B ** order.position[s] * int(x * D) for s, x in v.items()))
    g = math.gcd(*lam) if lam else 1
    lam = [x // g for x in lam] if g > 1 else lam
    # verification: sorting by the preorder key, λ must be constant on ties
    # and strictly increasing across them (equivalent to the all-pairs check)
    mons = [(0,) * len(G)] + [a for k in range(1, d + 1) for a in G.monomials(k)]
    keyed = sorted(((G.int_key(a, order), _dot(a, lam)) for a in mons))
    ok = True
    for (k1, w1), (k2, w2) in zip(keyed, keyed[1:]):
        if (k1 == k2 and w1 != w2) or (k1 < k2 and not w1 < w2):
            ok = False
            break
    wv = WeightVector(lam, d, B, len(mons), ok)
    if kernel is not None:
        wv.initial_terms_agree = all(
            initial_term_lambda(f, lam) == initial_term(f, G) for f in kernel.kernel_elements()
        )
    return wv


def lambda_pairs_check(G: GeneratorSet, lam: Sequence[int], d: int, order: AOrder | None = None) -> bool:
    """Direct check over all pairs of monomials of degree <= d."""
    order = order or G.order
    mons = [(0,) * len(G)] + [a for k in range(1, d + 1) for a in G.monomials(k)]
    data = [(compare_key(G, a, order), _dot(a, lam)) for a in mons]
    for (ka, wa), (kb, wb) in itertools.combinations(data, 2):
        if ka == kb and wa != wb:
            return False
        if ka > kb and not wa > wb:
            return False
        if ka < kb and not wa < wb:
            return False
    return True


def compare_key(G, alpha, order):
    return G.int_key(alpha, order)


def homogenize(f: Mapping, lam: Sequence[int]) -> Polynomial:
    """``u^{deg_λ f} f(u^{-λ_1} x_1, ...)``; the exponent of u is stored last."""
    f = _clean(f)
    if not f:
        raise ZeroPolynomial("cannot homogenize the zero polynomial")
    w = {a: _dot(a, lam) for a in f}
    top = max(w.values())
    return {a + (top - w[a],): c for a, c in f.items()}


def specialize(fh: Mapping, u: int) -> Polynomial:
    """Set ``u`` to 0 or 1 in a homogenized polynomial."""
    if u not in (0, 1):
        raise ValueError("only u = 0 and u = 1 are supported")
    out: dict = {}
    for a, c in fh.items():
        if u == 0 and a[-1] > 0:
            continue
        out[a[:-1]] = out.get(a[:-1], Fraction(0)) + c
    return _clean(out)


# --------------------------------------------------------------------------
# Integral case: the shadow of the degeneration


@dataclass
class ShadowReport:
    degree_bound: int
    components: list  # per maximal chain
    radical_witnesses: list  # (monomial, point, k, chain)
    minimal_reported: int = 0

    def to_json(self, ids: Sequence[str]) -> dict:
        return {
            "degree_bound": self.degree_bound,
            "components": self.components,
            "radical_witnesses": [
                {"monomial": {ids[i]: e for i, e in enumerate(a) if e}, "point": list(p), "k": k, "chain": list(c)}
                for a, p, k, c in self.radical_witnesses
            ],
        }


def shadow_report(T: FlagTriangulation, E: ExtremalData, d: int, order: AOrder | None = None) -> ShadowReport:
    """Components ``X_{Δ_C}`` and, for each non-minimal level-one monomial, a power in some S¹ span."""
    if not is_integral(T, E):
        raise InapplicableMarking("the shadow needs lattice-point markings with degree-one data")
    n = T.dim
    lam = [(1,) + x for x in lattice_points(T.lattice.polytope, 1)]
    G = GeneratorSet.from_points(lam, T, E, order)
    spans = {c: _Span(degree_one_submonoid(c, T)) for c in T.maximal_chains}
    comps = []
    for c in T.maximal_chains:
        sat = saturation_check(c, T, E, d)
        comps.append({
            "chain": list(c),
            "degree_one": [list(g) for g in spans[c].gens],
            "normal_up_to_bound": sat.equal,
            "not_in_span": [list(p) for p in sat.missing],
        })
    witnesses = []
    for k in range(2, d + 1):
        for a in G.monomials(k):
            if is_minimal_monomial(a, G):
                continue
            p = G.theta(a)
            found = None
            for c in T.locate_graded(p):
                for j in range(1, n + 2):
                    if tuple(j * x for x in p) in spans[c]:
                        found = (j, c)
                        break
                if found:
                    break
            if found is None:
                raise DecompositionFailure(f"no power of the image of {a} lies in a degree-one span")
            witnesses.append((a, p, found[0], found[1]))
    return ShadowReport(d, comps, witnesses)
