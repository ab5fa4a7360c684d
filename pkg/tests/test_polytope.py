import itertools
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import box_points, count_flags, decomposes
from torideg.catalog import SIMPLEX_6, SIMPLEX_Q, SIMPLEX_R, SQUARE_2, UNIT_SQUARE
from torideg.errors import InvalidPolytope, NotFullDimensional
from torideg.monoidfan import SimplicialCone, hilbert_basis
from torideg.polytope import (
    FaceLattice,
    LatticePolytope,
    graded_points,
    halfspace_representation,
    is_graded_point,
    is_normal,
    lattice_points,
    relative_interior_contains,
)

SQ = LatticePolytope.from_points(UNIT_SQUARE)
SEG = LatticePolytope.from_points([(0,), (1,)])
S6 = LatticePolytope.from_points(SIMPLEX_6)


def facet_set(P):
    return {(f.normal, f.offset) for f in halfspace_representation(P)}


def test_halfspaces():
    assert facet_set(SQ) == {((1, 0), 0), ((0, 1), 0), ((-1, 0), 1), ((0, -1), 1)}
    assert facet_set(SEG) == {((1,), 0), ((-1,), 1)}
    assert facet_set(S6) == {((1, 0, 0), 0), ((0, 1, 0), 0), ((0, 0, 1), 0), ((-1, -1, -1), 6)}


def test_not_full_dimensional():
    with pytest.raises(NotFullDimensional):
        LatticePolytope.from_points([(0, 0), (1, 1), (2, 2)])
    with pytest.raises(InvalidPolytope):
        LatticePolytope(((0, 0), (2, 0), (0, 2), (1, 0)))


def test_from_points_keeps_order_and_drops_interior():
    P = LatticePolytope.from_points([(2, 0), (0, 0), (1, 1), (0, 2), (2, 2)])
    assert P.vertices == ((2, 0), (0, 0), (0, 2), (2, 2))


def test_face_counts():
    for P, faces, chains in [(SQ, 9, 8), (S6, 15, 24), (SEG, 3, 2)]:
        L = FaceLattice(P)
        assert len(L) == faces and len(L.maximal_chains) == chains
        assert all(len(c) == P.dim + 1 for c in L.maximal_chains)


@pytest.mark.parametrize("verts", [UNIT_SQUARE, SQUARE_2, SIMPLEX_6, SIMPLEX_Q, SIMPLEX_R,
                                   [(0, 0), (3, 0), (4, 2), (1, 3), (0, 1)]])
def test_face_lattice_structure(verts):
    P = LatticePolytope.from_points(verts)
    L = FaceLattice(P)
    sets = [f.vertices for f in L]
    assert count_flags(sets, L.top.vertices) == len(L.maximal_chains)
    assert {f.vertices for f in L.vertex_faces()} == {frozenset([i]) for i in range(len(P.vertices))}
    for f in L:
        tight = frozenset(i for i, v in enumerate(P.vertices)
                          if all(P.facets[j].value(v) == 0 for j in f.facets))
        assert tight == f.vertices
    for f, g in itertools.product(L, L):
        assert (f.vertices <= g.vertices) == (g.facets <= f.facets)
    pos = {fid: i for i, fid in enumerate(L.linearization)}
    for f, g in itertools.product(L, L):
        if f.vertices < g.vertices:
            assert pos[f.id] < pos[g.id]


def test_face_lattice_json():
    d = FaceLattice(SQ).to_json()
    assert d["dim"] == 2 and len(d["faces"]) == 9
    assert ["0", "0-1"] in d["hasse"] and len(d["hasse"]) == 12


def test_lattice_points_examples():
    assert len(lattice_points(SQ, 1)) == 4
    assert len(lattice_points(LatticePolytope.from_points(SQUARE_2), 1)) == 9
    assert len(lattice_points(SQ, 2)) == 9
    pts = lattice_points(S6, 1)
    assert pts == sorted(pts) and len(set(pts)) == len(pts)


@pytest.mark.parametrize("m", range(1, 5))
def test_ehrhart_unit_square(m):
    assert len(lattice_points(SQ, m)) == (m + 1) ** 2


@pytest.mark.parametrize("verts", [SIMPLEX_6, SIMPLEX_Q, SIMPLEX_R])
@pytest.mark.parametrize("m", [1, 2])
def test_lattice_points_against_barycentric_oracle(verts, m):
    assert lattice_points(LatticePolytope.from_points(verts), m) == sorted(box_points(verts, m))


def test_relative_interior():
    L = FaceLattice(SQ)
    assert relative_interior_contains(L["0-1"], (F(1, 2), 0), L)
    assert not relative_interior_contains(L["0-1"], (0, 0), L)
    assert relative_interior_contains(L["P"], (F(1, 2), F(1, 2)), L)
    assert not relative_interior_contains(L["P"], (1, F(1, 2)), L)


def test_graded_points():
    assert graded_points(SQ, 1) == [(0, 0, 0), (1, 0, 0), (1, 0, 1), (1, 1, 0), (1, 1, 1)]
    assert is_graded_point(SQ, (0, 0, 0)) and not is_graded_point(SQ, (0, 1, 0))
    assert is_graded_point(SQ, (3, 2, 3)) and not is_graded_point(SQ, (3, 4, 0))


def _normal_oracle(verts):
    P = LatticePolytope.from_points(verts)
    one = lattice_points(P, 1)
    for m in range(2, P.dim):
        for eta in box_points(verts, m) if len(verts) == P.dim + 1 else lattice_points(P, m):
            if not decomposes(eta, m, one):
                return False, (m,) + eta
    return True, None


def test_normality_examples():
    assert is_normal(S6) == (True, None)
    assert is_normal(LatticePolytope.from_points(SIMPLEX_R)) == (True, None)
    assert is_normal(SQ) == (True, None)
    ok, w = is_normal(LatticePolytope.from_points(SIMPLEX_Q))
    assert not ok and w[0] == 2
    assert (ok, w) == _normal_oracle(SIMPLEX_Q)


@pytest.mark.parametrize("verts", [SIMPLEX_6, SIMPLEX_Q, SIMPLEX_R,
                                   [(0, 0, 0), (1, 0, 0), (0, 1, 0), (1, 1, 2)]])
def test_normality_matches_hilbert_height(verts):
    P = LatticePolytope.from_points(verts)
    cone = SimplicialCone(tuple((1,) + v for v in P.vertices))
    H = hilbert_basis(("x",), cone).hilbert_basis
    assert is_normal(P)[0] == all(h[0] == 1 for h in H)


def test_volume():
    assert S6.volume == 36
    assert LatticePolytope.from_points(SQUARE_2).volume == 4


lattice_polygon = st.lists(st.tuples(st.integers(0, 3), st.integers(0, 3)), min_size=3, max_size=7)


@settings(max_examples=40, deadline=None)
@given(lattice_polygon)
def test_polygons_are_normal(points):
    try:
        P = LatticePolytope.from_points(points)
    except NotFullDimensional:
        return
    assert is_normal(P) == (True, None)
    L = FaceLattice(P)
    # a polygon with k vertices has 2k + 1 faces and 2k flags
    k = len(P.vertices)
    assert len(L) == 2 * k + 1 and len(L.maximal_chains) == 2 * k
