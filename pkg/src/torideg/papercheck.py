"""Registry of reference examples reproduced by ``torideg paper-examples``.

Each check names the fixtures it reads so that a fixture can be swapped for a
file on the command line.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from .catalog import SIMPLEX_6, SIMPLEX_Q, SIMPLEX_R, Fixture, chain_through
from .errors import ToridegError
from .fanalgebra import generator_set, shadow_report
from .monoidfan import (
    _Span,
    chain_cone,
    degree_one_submonoid,
    fan_of_monoids,
    hilbert_basis,
    monoid_membership,
    saturation_check,
)
from .polytope import LatticePolytope, graded_points, is_normal, lattice_points
from .svg import render_svg
from .valuation import AOrder, nu_chain, psi, quasi_valuation_via_min, valuation_monoid_check


@dataclass
class Check:
    name: str
    fixtures: tuple
    run: Callable  # (fixtures) -> (ok, detail)


REGISTRY: list[Check] = []


def check(name, *fixtures):
    def deco(fn):
        REGISTRY.append(Check(name, fixtures, fn))
        return fn
    return deco


def _modified_chain(f: Fixture):
    return chain_through(f.lattice, (2, 2), (0, 2))


def _q_chain(f: Fixture):
    return chain_through(f.lattice, (0, 0, 0), (0, 0, 6), (0, 6, 0))


@check("unit-square-level-one-points", "unit-square")
def _(fx):
    pts = lattice_points(fx["unit-square"].polytope, 1)
    return len(pts) == 4 and set(pts) == set(fx["unit-square"].polytope.vertices), f"{len(pts)} points"


@check("square-2x2-level-one-points", "square-2x2")
def _(fx):
    pts = lattice_points(fx["square-2x2"].polytope, 1)
    return len(pts) == 9, f"{len(pts)} points"


@check("unit-square-extremal-degrees", "unit-square")
def _(fx):
    f = fx["unit-square"]
    E = f.extremal
    L = f.lattice
    ok = E.degree["P"] == 4 and E.weight["P"] == (4, 2, 2)
    ok &= all(E.degree[x.id] == 2 for x in L if x.dim == 1)
    ok &= all(E.degree[x.id] == 1 for x in L if x.dim == 0)
    return ok, f"d_P={E.degree['P']} weight={E.weight['P']}"


@check("square-2x2-degree-one-data", "square-2x2")
def _(fx):
    E = fx["square-2x2"].extremal
    return all(d == 1 for d in E.degree.values()), f"degrees {sorted(set(E.degree.values()))}"


@check("square-2x2-triangulation", "square-2x2")
def _(fx):
    T = fx["square-2x2"].triangulation
    centre = (Fraction(1), Fraction(1))
    ok = len(T.maximal_chains) == 8 and all(centre in T.simplex(c) for c in T.maximal_chains)
    return ok, f"{len(T.maximal_chains)} triangles"


@check("square-2x2-figure", "square-2x2")
def _(fx):
    svg = render_svg(fx["square-2x2"].triangulation)
    n = svg.count('class="simplex"')
    ok = n == 8 and all("120,120" in line for line in svg.splitlines() if 'class="simplex"' in line)
    return ok, f"{n} simplices drawn"


@check("extremal-weight-is-unit-vector", "unit-square")
def _(fx):
    f = fx["unit-square"]
    E, T = f.extremal, f.triangulation
    bad = []
    for order in (AOrder.default(f.lattice), AOrder.alternate(f.lattice)):
        for s, w in E.weight.items():
            if quasi_valuation_via_min(w, T.maximal_chains, E, order) != {s: 1}:
                bad.append(s)
    chain = chain_through(f.lattice, (0, 0), (1, 0))
    edge = nu_chain(E.weight[chain[1]], chain, E).sparse() == {chain[1]: 1}
    return not bad and edge, f"failures: {bad}" if bad else "all faces"


@check("value-reconstructs-point", "unit-square")
def _(fx):
    f = fx["unit-square"]
    E, T = f.extremal, f.triangulation
    order = AOrder.default(f.lattice)
    bad = [p for p in graded_points(f.polytope, 4)
           if psi(quasi_valuation_via_min(p, T.maximal_chains, E, order), E) != tuple(map(Fraction, p))]
    return not bad, f"{len(bad)} failures"


@check("unit-square-monoid-law", "unit-square")
def _(fx):
    f = fx["unit-square"]
    E, L = f.extremal, f.lattice
    for c in L.maximal_chains:
        r = valuation_monoid_check(c, E, 4, L)
        want = {s: (2 if s == "P" else 1) for s in c}
        if not r.ok or r.denominators != want:
            return False, f"chain {c}: {r.law()}"
    return True, "2a_P, a_edge, a_vertex integral on every chain"


@check("square-2x2-monoid-is-Z3", "square-2x2")
def _(fx):
    f = fx["square-2x2"]
    for c in f.lattice.maximal_chains:
        r = valuation_monoid_check(c, f.extremal, 3, f.lattice)
        if not r.ok or any(q != 1 for q in r.denominators.values()):
            return False, f"chain {c}: {r.law()}"
    return True, "all images integral"


@check("modified-square-extra-classes", "square-2x2-modified")
def _(fx):
    f = fx["square-2x2-modified"]
    c = _modified_chain(f)
    cone = chain_cone(c, f.marking)
    span = _Span([(1, 1, 1), (1, 2, 2)])
    members = all(monoid_membership(p, cone) for p in [(2, 3, 4), (3, 4, 6)])
    outside = all(p not in span for p in [(2, 3, 4), (3, 4, 6)])
    return members and outside, f"chain {c}"


@check("modified-square-degree-one", "square-2x2-modified")
def _(fx):
    f = fx["square-2x2-modified"]
    gens = degree_one_submonoid(_modified_chain(f), f.triangulation)
    return gens == [(1, 1, 1), (1, 2, 2)], f"{gens}"


@check("modified-square-hilbert-basis", "square-2x2-modified")
def _(fx):
    f = fx["square-2x2-modified"]
    c = _modified_chain(f)
    M = hilbert_basis(c, chain_cone(c, f.marking))
    want = {(1, 1, 1), (1, 2, 2), (2, 3, 4), (3, 4, 6)}
    return set(M.hilbert_basis) == want and M.index == 2, f"{M.hilbert_basis}, index {M.index}"


@check("modified-square-generator-set", "square-2x2-modified")
def _(fx):
    f = fx["square-2x2-modified"]
    G = generator_set(fan_of_monoids(f.triangulation, f.extremal))
    lam = {(1,) + x for x in lattice_points(f.polytope, 1)}
    ok = lam | {(2, 3, 4), (3, 4, 6)} <= set(G.points)
    return ok, f"{len(G)} generators"


@check("simplex-6-normal")
def _(fx):
    ok, _w = is_normal(LatticePolytope.from_points(SIMPLEX_6))
    return ok, "normal" if ok else "not normal"


@check("simplex-q-not-normal")
def _(fx):
    ok, w = is_normal(LatticePolytope.from_points(SIMPLEX_Q))
    return (not ok) and w is not None and w[0] == 2, f"witness {w}"


@check("simplex-r-normal")
def _(fx):
    ok, _w = is_normal(LatticePolytope.from_points(SIMPLEX_R))
    return ok, "normal" if ok else "not normal"


@check("simplex-q-chain-not-saturated", "simplex-6")
def _(fx):
    f = fx["simplex-6"]
    c = _q_chain(f)
    simplex = {tuple(v) for v in f.triangulation.simplex(c)}
    want = {tuple(map(Fraction, v)) for v in SIMPLEX_Q}
    r = saturation_check(c, f.triangulation, f.extremal, 3)
    lvl2 = [p for p in r.missing if p[0] == 2 and r.multiple.get(p) == 2]
    return simplex == want and not r.equal and bool(lvl2), f"missing {r.missing}"


@check("simplex-q-shadow-component", "simplex-6")
def _(fx):
    f = fx["simplex-6"]
    c = list(_q_chain(f))
    rep = shadow_report(f.triangulation, f.extremal, 2)
    comp = next(x for x in rep.components if x["chain"] == c)
    gens = {tuple(g) for g in comp["degree_one"]}
    want = {(1,) + tuple(v) for v in SIMPLEX_Q}
    return want <= gens and comp["normal_up_to_bound"] is False, f"{len(gens)} degree-one generators"


def run_all(fixtures: dict) -> list[tuple[str, bool, str]]:
    out = []
    for chk in REGISTRY:
        try:
            ok, detail = chk.run(fixtures)
        except (ToridegError, ValueError, KeyError, StopIteration) as e:
            ok, detail = False, f"{type(e).__name__}: {e}"
        out.append((chk.name, bool(ok), detail))
    return out
