import itertools
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import cramer, in_simplex, leibniz_det
from torideg import exactcore as ec
from torideg.catalog import SIMPLEX_6, SIMPLEX_Q, SIMPLEX_R, UNIT_SQUARE, chain_through
from torideg.errors import (
    CoverageFailure,
    InapplicableMarking,
    InvalidMarking,
    MissingFace,
    OverlapFailure,
    PointNotInteriorToFace,
    PointOutsidePolytope,
    ToridegError,
)
from torideg.polytope import FaceLattice, LatticePolytope
from torideg.stratification import (
    FlagTriangulation,
    build_triangulation,
    check_marking,
    default_marking,
    extremal_data,
    integral_marking,
    marking_to_json,
    parse_marking,
    proper_intersection,
    validate_marking,
)

h = F(1, 2)


def lattice(verts):
    return FaceLattice(LatticePolytope.from_points(verts))


SQ = lattice(UNIT_SQUARE)


def test_default_marking():
    m = default_marking(SQ)
    assert m["P"] == (h, h) and m["0-1"] == (h, 0) and m["3"] == (1, 1)
    L6 = lattice(SIMPLEX_6)
    facet = next(f.id for f in L6 if f.dim == 2 and all(L6.polytope.vertices[i][0] == 0 for i in f.vertices))
    assert default_marking(L6)[facet] == (0, 2, 2)
    assert default_marking(lattice([(0,), (1,)]))["P"] == (h,)


def test_validate_marking():
    m = default_marking(SQ)
    assert validate_marking(m, SQ) == []
    bad = dict(m, P=(0, h))
    errs = validate_marking(bad, SQ)
    assert len(errs) == 1 and isinstance(errs[0], PointNotInteriorToFace) and errs[0].face_id == "P"
    with pytest.raises(PointNotInteriorToFace):
        check_marking(bad, SQ)
    missing = {k: v for k, v in m.items() if k != "2-3"}
    with pytest.raises(MissingFace) as e:
        check_marking(missing, SQ)
    assert e.value.face_id == "2-3"
    with pytest.raises(InvalidMarking) as e:
        check_marking({"P": (h, h)}, SQ)
    assert len(e.value.errors) == 8


def test_marking_rejects_floats_and_unknown_faces():
    m = default_marking(SQ)
    assert validate_marking(dict(m, P=(0.5, 0.5)), SQ)
    assert validate_marking(dict(m, bogus=(0, 0)), SQ)


def test_marking_json_round_trip():
    m = default_marking(SQ)
    back, mult = parse_marking(marking_to_json(m, {"P": 2}))
    assert back == m and mult == {"P": 2}


def test_integral_marking():
    L = lattice([(0, 0), (2, 0), (0, 2), (2, 2)])
    m = integral_marking(L)
    assert m["P"] == (1, 1) and m["0-1"] == (1, 0)
    with pytest.raises(InapplicableMarking):
        integral_marking(SQ)


def test_extremal_data():
    m = default_marking(SQ)
    E = extremal_data(m)
    assert E.minimal_degree["P"] == 2 and E.weight["P"] == (2, 1, 1)
    E2 = extremal_data(m, {"P": 2})
    assert E2.degree["P"] == 4 and E2.weight["P"] == (4, 2, 2)
    assert E2.degree["0-1"] == 2 and E2.degree["0"] == 1
    L = lattice([(0, 0), (2, 0), (0, 2), (2, 2)])
    assert set(extremal_data(integral_marking(L)).degree.values()) == {1}
    for fid, (d, *du) in E2.weight.items():
        assert tuple(F(x, d) for x in du) == m[fid]
        assert d % E2.minimal_degree[fid] == 0
    with pytest.raises(ToridegError):
        extremal_data(m, {"P": 0})
    with pytest.raises(ToridegError):
        extremal_data(m, {"nope": 2})


def test_triangulation_unit_square():
    T = build_triangulation(default_marking(SQ), SQ)
    assert len(T.maximal_chains) == 8
    # oracle: Leibniz determinant area
    for c in T.maximal_chains:
        a, b, cc = T.simplex(c)
        area = abs(leibniz_det([ec.sub(b, a), ec.sub(cc, a)])) / 2
        assert area == F(1, 8) == T.volumes[c]


def test_triangulation_square_2x2(fx):
    T = fx["square-2x2"].triangulation
    assert len(T.maximal_chains) == 8
    assert all((1, 1) in T.simplex(c) for c in T.maximal_chains)


def test_triangulation_simplex6(fx):
    T = fx["simplex-6"].triangulation
    rep = T.verify()
    assert rep["simplices"] == 24 and rep["volume"] == 36 and rep["pairs_checked"] == 276


def test_locate_examples():
    T = build_triangulation(default_marking(SQ), SQ)
    assert T.locate((F(1, 3), 0)) == [chain_through(SQ, (0, 0), (1, 0))]
    assert len(T.locate((h, h))) == 8
    assert set(T.locate((F(1, 4), F(1, 4)))) == {chain_through(SQ, (0, 0), (1, 0)),
                                                chain_through(SQ, (0, 0), (0, 1))}
    with pytest.raises(PointOutsidePolytope):
        T.locate((2, 0))


def test_locate_against_cramer_oracle():
    T = build_triangulation(default_marking(SQ), SQ)
    for x, y in itertools.product(range(9), repeat=2):
        pt = (F(x, 8), F(y, 8))
        want = {c for c in T.maximal_chains if in_simplex(T.simplex(c), pt)}
        assert set(T.locate(pt)) == want


@pytest.mark.parametrize("name", ["unit-square", "square-2x2", "square-2x2-modified", "simplex-6"])
def test_locate_marking_points(fx, name):
    T = fx[name].triangulation
    for fid, u in T.marking.items():
        assert set(T.locate(u)) == set(T.chains_containing_face(fid))


@pytest.mark.parametrize("name", ["unit-square", "square-2x2", "square-2x2-modified", "simplex-6"])
def test_lifted_weights_form_basis(fx, name):
    f = fx[name]
    n = f.polytope.dim
    for c in f.lattice.maximal_chains:
        assert ec.rank(f.extremal.basis(c)) == n + 1


def test_centroids_lie_in_one_simplex(fx):
    # oracle for disjoint interiors: every simplex centroid is interior to its own simplex only
    for name in ["unit-square", "square-2x2-modified", "simplex-6"]:
        T = fx[name].triangulation
        for c in T.maximal_chains:
            s = T.simplex(c)
            g = tuple(sum(col) / len(s) for col in zip(*s))
            inside = [d for d in T.maximal_chains if in_simplex(T.simplex(d), g)]
            assert inside == [c]


def test_proper_intersection():
    a = [(0, 0), (1, 0), (0, 1)]
    assert proper_intersection(a, [(1, 0), (0, 1), (1, 1)])
    assert proper_intersection(a, [(2, 2), (3, 2), (2, 3)])
    assert not proper_intersection(a, [(0, 0), (1, 0), (F(1, 2), 1)])
    assert not proper_intersection(a, [(F(1, 4), F(1, 4)), (2, 0), (0, 2)])


def test_coverage_failure_surfaces():
    m = default_marking(SQ)
    T = FlagTriangulation(m, SQ)
    T.lattice.polytope.__dict__["volume"] = F(2)
    try:
        with pytest.raises(CoverageFailure):
            T.verify()
    finally:
        del T.lattice.polytope.__dict__["volume"]


def test_overlap_failure_surfaces(monkeypatch):
    import torideg.stratification as strat

    monkeypatch.setattr(strat, "proper_intersection", lambda a, b: False)
    with pytest.raises(OverlapFailure):
        FlagTriangulation(default_marking(SQ), SQ).verify()


@pytest.mark.parametrize("verts", [SIMPLEX_Q, SIMPLEX_R])
def test_default_marking_valid_on_examples(verts):
    L = lattice(verts)
    assert validate_marking(default_marking(L), L) == []
    build_triangulation(default_marking(L), L)


interior = st.fractions(min_value=F(1, 7), max_value=F(6, 7), max_denominator=7)


@settings(max_examples=30, deadline=None)
@given(interior, interior, interior, interior)
def test_random_markings_triangulate(px, py, ex, ey):
    """Moving u_P and two edge points keeps volumes exact and cells proper."""
    m = default_marking(SQ)
    m["P"] = (px, py)
    m["0-1"] = (ex, 0)
    m["2-3"] = (ey, 1)
    T = build_triangulation(m, SQ)
    assert sum(T.volumes.values()) == 1
    E = extremal_data(m)
    for c in SQ.maximal_chains:
        assert cramer(E.basis(c), E.weight[c[-1]]) is not None
