"""Lattice polytopes, their facets and their face lattice.

Graded lattice points ``(m, eta)`` of the cone over a polytope are stored as
flat integer tuples ``(m, eta_1, ..., eta_n)`` so that monoid arithmetic is
plain componentwise addition.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

from . import exactcore as ec
from .errors import InvalidPolytope, NotFullDimensional

GradedPoint = tuple  # (m, eta_1, ..., eta_n), all ints


@dataclass(frozen=True)
class Facet:
    """Inequality ``<normal, x> + offset >= 0`` with primitive integer normal."""

    normal: tuple[int, ...]
    offset: int

    def value(self, x: Sequence) -> object:
        return sum(a * b for a, b in zip(self.normal, x)) + self.offset

    def value_at_level(self, m: int, eta: Sequence) -> object:
        """Same inequality for ``eta`` in the dilate ``m P``."""
        return sum(a * b for a, b in zip(self.normal, eta)) + m * self.offset


@dataclass(frozen=True)
class LatticePolytope:
    """Full-dimensional lattice polytope given by its vertices in Z^n."""

    vertices: tuple[tuple[int, ...], ...]
    dim: int = field(init=False)

    def __post_init__(self):
        verts = tuple(tuple(int(x) for x in v) for v in self.vertices)
        if not verts:
            raise InvalidPolytope("a polytope needs at least one vertex")
        n = len(verts[0])
        if n < 1 or any(len(v) != n for v in verts):
            raise InvalidPolytope("all vertices must have the same positive dimension")
        if len(set(verts)) != len(verts):
            raise InvalidPolytope("duplicate vertices")
        if ec.affine_dimension(verts) != n:
            raise NotFullDimensional(f"vertices span less than {n} dimensions")
        object.__setattr__(self, "vertices", verts)
        object.__setattr__(self, "dim", n)
        for i, v in enumerate(verts):
            active = [f.normal for f in self.facets if f.value(v) == 0]
            if ec.rank(active) < n:
                raise InvalidPolytope(f"point {v} is not a vertex of the convex hull")

    @classmethod
    def from_points(cls, points: Iterable[Sequence[int]]) -> "LatticePolytope":
        """Convex hull of arbitrary lattice points; non-vertices are dropped, order kept."""
        pts = list(dict.fromkeys(tuple(int(x) for x in p) for p in points))
        if not pts:
            raise InvalidPolytope("no points given")
        n = len(pts[0])
        if ec.affine_dimension(pts) != n:
            raise NotFullDimensional(f"points span less than {n} dimensions")
        facets = _enumerate_facets(pts)
        verts = [p for p in pts if ec.rank([f.normal for f in facets if f.value(p) == 0]) == n]
        return cls(tuple(verts))

    @classmethod
    def from_json(cls, data) -> "LatticePolytope":
        if isinstance(data, str):
            data = json.loads(data)
        poly = cls(tuple(tuple(v) for v in data["vertices"]))
        if "dim" in data and int(data["dim"]) != poly.dim:
            raise InvalidPolytope(f"declared dim {data['dim']} but vertices live in Z^{poly.dim}")
        return poly

    def to_json(self) -> dict:
        return {"dim": self.dim, "vertices": [list(v) for v in self.vertices]}

    @cached_property
    def facets(self) -> tuple[Facet, ...]:
        return _enumerate_facets(self.vertices)

    def contains(self, x: Sequence, m: int = 1) -> bool:
        """Whether ``x`` lies in the dilate ``m P`` (closed)."""
        return all(f.value_at_level(m, x) >= 0 for f in self.facets)

    @cached_property
    def volume(self):
        return polytope_volume(self)


def halfspace_representation(P: LatticePolytope) -> tuple[Facet, ...]:
    return P.facets


def _enumerate_facets(points: Sequence[tuple[int, ...]]) -> tuple[Facet, ...]:
    # hyperplanes through n affinely independent points that leave every
    # point on one closed side; fine for a few dozen points
    n = len(points[0])
    found = set()
    for combo in itertools.combinations(range(len(points)), n):
        base = points[combo[0]]
        if n == 1:
            normal = (1,)
        else:
            diffs = [tuple(a - b for a, b in zip(points[j], base)) for j in combo[1:]]
            if ec.rank(diffs) < n - 1:
                continue
            normal = ec.integer_nullspace_vector(diffs)
        offset = -sum(a * b for a, b in zip(normal, base))
        vals = [sum(a * b for a, b in zip(normal, p)) + offset for p in points]
        if all(v >= 0 for v in vals):
            found.add(Facet(normal, offset))
        elif all(v <= 0 for v in vals):
            found.add(Facet(tuple(-a for a in normal), -offset))
    return tuple(sorted(found, key=lambda f: (f.normal, f.offset)))


# --------------------------------------------------------------------------
# Face lattice


@dataclass(frozen=True)
class Face:
    id: str
    dim: int
    vertices: frozenset  # vertex indices into P.vertices
    facets: frozenset  # indices into P.facets that are tight on the face

    def points(self, P: LatticePolytope) -> list[tuple[int, ...]]:
        return [P.vertices[i] for i in sorted(self.vertices)]


class FaceLattice:
    """The poset of faces of P ordered by inclusion.

    Faces are listed in the default linearization: by dimension, then by the
    lexicographically sorted list of vertex coordinates. Face ids are
    ``"P"`` for the polytope itself and the dash-joined vertex indices
    otherwise (``"0"``, ``"0-1"``, ...).
    """

    def __init__(self, P: LatticePolytope):
        self.polytope = P
        facets = P.facets
        allv = frozenset(range(len(P.vertices)))
        facet_sets = [frozenset(i for i, v in enumerate(P.vertices) if f.value(v) == 0) for f in facets]
        seen = {allv}
        stack = [allv]
        while stack:
            g = stack.pop()
            for fs in facet_sets:
                h = g & fs
                if h and h not in seen:
                    seen.add(h)
                    stack.append(h)

        def sort_key(vs):
            pts = sorted(P.vertices[i] for i in vs)
            return (ec.affine_dimension(pts), pts)

        faces = []
        for vs in sorted(seen, key=sort_key):
            pts = [P.vertices[i] for i in sorted(vs)]
            d = ec.affine_dimension(pts)
            fid = "P" if vs == allv else "-".join(str(i) for i in sorted(vs))
            active = frozenset(j for j, fs in enumerate(facet_sets) if vs <= fs)
            faces.append(Face(fid, d, vs, active))
        self.faces: tuple[Face, ...] = tuple(faces)
        self.by_id = {f.id: f for f in faces}
        self.rank = {f.id: i for i, f in enumerate(faces)}
        self.top = self.by_id["P"]
        self.up: dict[str, tuple[str, ...]] = {}
        self.down: dict[str, tuple[str, ...]] = {}
        for f in faces:
            self.up[f.id] = tuple(
                g.id for g in faces if g.dim == f.dim + 1 and f.vertices < g.vertices
            )
            self.down[f.id] = tuple(
                g.id for g in faces if g.dim == f.dim - 1 and g.vertices < f.vertices
            )

    def __getitem__(self, face_id: str) -> Face:
        return self.by_id[face_id]

    def __iter__(self):
        return iter(self.faces)

    def __len__(self):
        return len(self.faces)

    @property
    def ids(self) -> list[str]:
        return [f.id for f in self.faces]

    @property
    def linearization(self) -> list[str]:
        """Default total order, smallest first; extends inclusion."""
        return self.ids

    def vertex_faces(self) -> list[Face]:
        return [f for f in self.faces if f.dim == 0]

    def leq(self, a: str, b: str) -> bool:
        """Face inclusion ``a <= b``."""
        return self.by_id[a].vertices <= self.by_id[b].vertices

    def barycenter(self, face_id: str) -> tuple:
        pts = self.by_id[face_id].points(self.polytope)
        k = len(pts)
        return tuple(ec.Fraction(sum(c), k) for c in zip(*pts))

    @cached_property
    def maximal_chains(self) -> tuple[tuple[str, ...], ...]:
        """Flags vertex < edge < ... < P, each listed bottom-up."""
        out = []

        def extend(chain):
            last = chain[-1]
            if last == "P":
                out.append(tuple(chain))
                return
            for g in self.up[last]:
                extend(chain + [g])

        for v in self.vertex_faces():
            extend([v.id])
        return tuple(sorted(out, key=lambda c: [self.rank[x] for x in c]))

    def all_chains(self) -> list[tuple[str, ...]]:
        """Every nonempty chain, each a sub-chain of some maximal chain."""
        seen = set()
        for c in self.maximal_chains:
            for k in range(1, len(c) + 1):
                for sub in itertools.combinations(c, k):
                    seen.add(sub)
        return sorted(seen, key=lambda c: (len(c), [self.rank[x] for x in c]))

    def to_json(self) -> dict:
        P = self.polytope
        return {
            "dim": P.dim,
            "faces": [
                {
                    "id": f.id,
                    "dim": f.dim,
                    "vertices": [list(P.vertices[i]) for i in sorted(f.vertices)],
                    "facets": sorted(f.facets),
                }
                for f in self.faces
            ],
            "hasse": [[f.id, g] for f in self.faces for g in self.up[f.id]],
            "linearization": self.linearization,
            "maximal_chains": [list(c) for c in self.maximal_chains],
        }


def face_lattice(P: LatticePolytope) -> FaceLattice:
    return FaceLattice(P)


def relative_interior_contains(face: Face, point: Sequence, L: FaceLattice) -> bool:
    """True iff ``point`` is tight exactly on the facets active on ``face``."""
    P = L.polytope
    point = ec.vector(point)
    if len(point) != P.dim:
        raise ValueError("point has the wrong dimension")
    for j, f in enumerate(P.facets):
        v = f.value(point)
        if j in face.facets:
            if v != 0:
                return False
        elif v <= 0:
            return False
    return True


# --------------------------------------------------------------------------
# Lattice points and normality


def lattice_points(P: LatticePolytope, m: int = 1) -> list[tuple[int, ...]]:
    """All points of ``m P`` intersected with Z^n, sorted lexicographically."""
    if m < 0:
        raise ValueError("level must be nonnegative")
    lo = [m * min(c) for c in zip(*P.vertices)]
    hi = [m * max(c) for c in zip(*P.vertices)]
    ranges = [range(a, b + 1) for a, b in zip(lo, hi)]
    return [x for x in itertools.product(*ranges) if P.contains(x, m)]


def graded_points(P: LatticePolytope, max_level: int, min_level: int = 0) -> list[GradedPoint]:
    """Elements ``(m, eta)`` of the weight monoid with ``min_level <= m <= max_level``."""
    out = []
    for m in range(min_level, max_level + 1):
        out.extend((m,) + x for x in lattice_points(P, m))
    return out


def is_graded_point(P: LatticePolytope, p: Sequence) -> bool:
    """Membership of ``p`` in the weight monoid of P."""
    if len(p) != P.dim + 1 or any(not isinstance(x, int) for x in p):
        return False
    m, eta = p[0], p[1:]
    if m < 0:
        return False
    if m == 0:
        return all(x == 0 for x in eta)
    return P.contains(eta, m)


def is_normal(P: LatticePolytope) -> tuple[bool, GradedPoint | None]:
    """Integer decomposition property check.

    The weight monoid of an n-dimensional lattice polytope is generated in
    levels at most n-1, so only levels 2..n-1 are examined. A witness is the
    lexicographically smallest non-decomposable point of minimal level.
    """
    level_one = lattice_points(P, 1)
    sums = set(level_one)
    for m in range(2, P.dim):
        sums = {tuple(a + b for a, b in zip(s, x)) for s in sums for x in level_one}
        for eta in lattice_points(P, m):
            if eta not in sums:
                return False, (m,) + eta
    return True, None


def polytope_volume(P: LatticePolytope):
    """Exact volume by a pulling triangulation (independent of any marking)."""
    L = FaceLattice(P)

    def pull(face_id):
        f = L[face_id]
        if f.dim == 0:
            return [[P.vertices[next(iter(f.vertices))]]]
        apex_idx = min(f.vertices, key=lambda i: P.vertices[i])
        apex = P.vertices[apex_idx]
        out = []
        for g in L.down[face_id]:
            if apex_idx in L[g].vertices:
                continue
            out.extend([apex] + s for s in pull(g))
        return out

    return sum((ec.simplex_volume(s) for s in pull("P")), ec.Fraction(0))
