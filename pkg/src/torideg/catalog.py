"""Built-in example stratifications.

Each fixture is a polytope with a marking and optional multipliers, stored in
the same JSON shapes the CLI reads.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

from . import exactcore as ec
from .polytope import FaceLattice, LatticePolytope
from .stratification import (
    ExtremalData,
    FlagTriangulation,
    build_triangulation,
    default_marking,
    extremal_data,
    integral_marking,
)


@dataclass
class Fixture:
    name: str
    vertices: list
    marking_mode: str = "barycentric"  # barycentric | integral | explicit
    overrides: dict = field(default_factory=dict)
    multipliers: dict = field(default_factory=dict)

    @classmethod
    def from_json(cls, name: str, data: dict, base: "Fixture | None" = None) -> "Fixture":
        """A fixture from ``{"vertices": ..., "marking": ..., "multipliers": ...}``.

        Missing vertices are taken from ``base``; the marking is used verbatim.
        """
        verts = data.get("vertices") or (base.vertices if base else None)
        if verts is None:
            raise ValueError(f"fixture {name!r} needs vertices")
        return cls(name, [tuple(v) for v in verts], "explicit",
                   dict(data.get("marking", {})), dict(data.get("multipliers", {})))

    @cached_property
    def polytope(self) -> LatticePolytope:
        return LatticePolytope.from_points(self.vertices)

    @cached_property
    def lattice(self) -> FaceLattice:
        return FaceLattice(self.polytope)

    @cached_property
    def marking(self) -> dict:
        if self.marking_mode == "integral":
            return integral_marking(self.lattice, self.overrides)
        if self.marking_mode == "explicit":
            return {k: ec.vector(v) for k, v in self.overrides.items()}
        m = default_marking(self.lattice)
        m.update({k: ec.vector(v) for k, v in self.overrides.items()})
        return m

    @cached_property
    def extremal(self) -> ExtremalData:
        return extremal_data(self.marking, self.multipliers)

    @cached_property
    def triangulation(self) -> FlagTriangulation:
        return build_triangulation(self.marking, self.lattice)

    def polytope_json(self) -> dict:
        return self.polytope.to_json()

    def to_json(self) -> dict:
        return {"vertices": [list(v) for v in self.polytope.vertices], **self.marking_json()}

    def marking_json(self) -> dict:
        out = {"marking": {k: [ec.format_fraction(x) for x in v] for k, v in self.marking.items()}}
        if self.multipliers:
            out["multipliers"] = dict(self.multipliers)
        return out


UNIT_SQUARE = [(0, 0), (1, 0), (0, 1), (1, 1)]
SQUARE_2 = [(0, 0), (2, 0), (0, 2), (2, 2)]
SIMPLEX_6 = [(0, 0, 0), (6, 0, 0), (0, 6, 0), (0, 0, 6)]
SIMPLEX_Q = [(0, 0, 0), (2, 1, 1), (0, 2, 2), (0, 0, 3)]
SIMPLEX_R = [(0, 0, 6), (0, 3, 3), (2, 2, 2), (2, 1, 1)]


def fixtures() -> dict[str, Fixture]:
    """Fresh fixture objects (their caches are independent per call)."""
    return {
        # vertex ids 0..3 are (0,0), (1,0), (0,1), (1,1); f_P gets degree 4
        "unit-square": Fixture("unit-square", UNIT_SQUARE, multipliers={"P": 2}),
        "unit-square-canonical": Fixture("unit-square-canonical", UNIT_SQUARE),
        "square-2x2": Fixture("square-2x2", SQUARE_2, "integral"),
        # top edge joins (0,2) and (2,2)
        "square-2x2-modified": Fixture("square-2x2-modified", SQUARE_2, "integral", {"2-3": ("4/3", 2)}),
        "simplex-6": Fixture("simplex-6", SIMPLEX_6, "barycentric", {"P": (2, 1, 1)}),
    }


def polytopes() -> dict[str, list]:
    return {
        "unit-square": UNIT_SQUARE,
        "square-2x2": SQUARE_2,
        "simplex-6": SIMPLEX_6,
        "simplex-q": SIMPLEX_Q,
        "simplex-r": SIMPLEX_R,
    }


def chain_through(L: FaceLattice, *points) -> tuple[str, ...]:
    """The maximal chain whose faces are spanned by growing vertex sets.

    ``points`` lists vertex coordinates; the chain is vertex(points[0]) <
    face(points[:2]) < ... . The smallest face containing each prefix is used.
    """
    P = L.polytope
    idx = [P.vertices.index(tuple(p)) for p in points]
    chain = []
    for k in range(1, len(idx) + 1):
        want = set(idx[:k])
        cands = [f for f in L if want <= f.vertices]
        chain.append(min(cands, key=lambda f: (f.dim, L.rank[f.id])).id)
    chain += ["P"] if chain[-1] != "P" else []
    return tuple(chain)
