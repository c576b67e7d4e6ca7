"""Configurations of curves on exceptional surfaces, their flip graphs and the fibration census.

A surface is modelled only through its numerical lattice Q'' and the data
that decides which flips are effective:

* type ``T8`` (T_{2,3,7} conductrix support) and ``T7`` (T_{2,4,5}) carry a
  fixed, finite list of fibrations;
* type ``T6`` (T_{3,3,3}) has one elliptic fibration and a Mordell-Weil rank
  0, 1 or 2 which selects the extraneous fibre components and the flips.

Fibrations other than the elliptic one are identified with the Q''-class of
the E~7 Kodaira-Neron cycle of a sub-configuration.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from typing import Optional

from . import q444
from .q444 import STANDARD, TConfiguration, Vec

SURFACE_TYPES = ("T6", "T7", "T8")


class SurfaceError(ValueError):
    pass


@dataclass(frozen=True)
class SurfaceModel:
    type: str
    mw_rank: Optional[int] = None  # only for T6
    second_fibre: Optional[str] = None  # "simple" or "double", only for T7

    def __post_init__(self):
        if self.type not in SURFACE_TYPES:
            raise SurfaceError(f"unknown surface type {self.type!r}")
        if self.type == "T6" and self.mw_rank not in (0, 1, 2):
            raise SurfaceError("T6 surfaces need mw_rank 0, 1 or 2")
        if self.type != "T6" and self.mw_rank is not None:
            raise SurfaceError("mw_rank is only meaningful for T6 surfaces")
        if self.type == "T7" and self.second_fibre not in ("simple", "double"):
            raise SurfaceError("T7 surfaces need second_fibre 'simple' or 'double'")
        if self.type != "T7" and self.second_fibre is not None:
            raise SurfaceError("second_fibre is only meaningful for T7 surfaces")

    @property
    def extraneous_classes(self) -> tuple:
        """Classes of the elliptic fibre components outside the E~6 half-fibre."""
        if self.type != "T6":
            return ()
        nv = q444.build_tower().named
        if self.mw_rank == 0:
            return tuple(q444.vsub(nv.e, nv.f[i]) for i in (1, 2, 3))
        if self.mw_rank == 1:
            return (q444.vadd(nv.e, nv.f[1]), q444.vsub(nv.e, nv.f[1]))
        return ()

    @property
    def label(self) -> str:
        if self.type == "T6":
            return f"T6/mw{self.mw_rank}"
        if self.type == "T7":
            return f"T7/{self.second_fibre}"
        return "T8"


def _require_t6(surface: SurfaceModel) -> None:
    if surface.type != "T6":
        raise SurfaceError(f"{surface.label}: only T6 surfaces carry flippable T_(4,4,4)-configurations")


def effective_flip(surface: SurfaceModel, T: TConfiguration, arm: int) -> Optional[TConfiguration]:
    """The flip of T in ``arm`` if it is a configuration of curves on the surface, else None."""
    _require_t6(surface)
    if arm not in (1, 2, 3):
        raise ValueError("arm must be 1, 2 or 3")
    if surface.mw_rank == 0:
        return None
    flipped = q444.flip(T, arm, check=False)
    if surface.mw_rank == 1 and q444.is_one_realisable(flipped) is None:
        return None
    return flipped


@dataclass
class FlipGraph:
    surface: SurfaceModel
    radius: int
    nodes: list  # TConfiguration, index = node id
    words: list  # shortest flip word from the standard configuration
    depth: list
    edges: list = field(default_factory=list)  # (a, arm, b) with a < b

    def index(self) -> dict:
        return {T.key(): k for k, T in enumerate(self.nodes)}

    def degree(self, node: int) -> int:
        return sum(1 for a, _arm, b in self.edges if node in (a, b))

    def neighbours(self, node: int) -> list:
        out = []
        for a, arm, b in self.edges:
            if a == node:
                out.append((arm, b))
            elif b == node:
                out.append((arm, a))
        return sorted(out)

    def interior(self, margin: int = 1) -> list:
        return [k for k, d in enumerate(self.depth) if d <= self.radius - margin]

    def to_json(self) -> dict:
        return {
            "surface": self.surface.label,
            "radius": self.radius,
            "nodes": [
                {"id": k, "word": list(w), "depth": d, "ends": [_vec_json(T.end(i)) for i in (1, 2, 3)]}
                for k, (T, w, d) in enumerate(zip(self.nodes, self.words, self.depth))
            ],
            "edges": [list(e) for e in self.edges],
        }

    def to_dot(self) -> str:
        lines = [f'graph "{self.surface.label}" {{']
        for k, w in enumerate(self.words):
            label = "".join(str(i) for i in w) or "e"
            lines.append(f'  n{k} [label="{label}"];')
        for a, arm, b in self.edges:
            lines.append(f'  n{a} -- n{b} [label="{arm}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"


def build_flip_graph(surface: SurfaceModel, radius: int) -> FlipGraph:
    """Breadth-first search from the standard configuration through effective flips."""
    _require_t6(surface)
    if radius < 0:
        raise ValueError("radius must be non-negative")
    g = FlipGraph(surface, radius, [STANDARD], [()], [0])
    seen = {STANDARD.key(): 0}
    edges = set()
    queue = deque([0])
    while queue:
        k = queue.popleft()
        for arm in (1, 2, 3):
            nxt = effective_flip(surface, g.nodes[k], arm)
            if nxt is None:
                continue
            j = seen.get(nxt.key())
            if j is None:
                if g.depth[k] >= radius:
                    continue
                j = len(g.nodes)
                seen[nxt.key()] = j
                g.nodes.append(nxt)
                g.words.append(g.words[k] + (arm,))
                g.depth.append(g.depth[k] + 1)
                queue.append(j)
            edges.add((min(k, j), arm, max(k, j)))
    g.edges = sorted(edges)
    return g


def _vec_json(x: Vec) -> list:
    return [str(c) for c in x]


@dataclass
class Census:
    surface: SurfaceModel
    radius: Optional[int]
    elliptic_count: int
    quasi_elliptic_classes: list  # [{"class": Vec or label, "member_configs": [...]}]
    flip_graph: Optional[FlipGraph] = None
    interior_classes: list = field(default_factory=list)  # indices into quasi_elliptic_classes

    @property
    def quasi_elliptic_count(self) -> int:
        return len(self.quasi_elliptic_classes)

    def multiplicities(self, interior_only: bool = True) -> list:
        idx = self.interior_classes if interior_only else range(len(self.quasi_elliptic_classes))
        return [len(self.quasi_elliptic_classes[k]["member_configs"]) for k in idx]

    def to_json(self) -> dict:
        classes = []
        for c in self.quasi_elliptic_classes:
            cls = c["class"]
            classes.append({
                "class": cls if isinstance(cls, str) else _vec_json(cls),
                "member_configs": list(c["member_configs"]),
            })
        out = {
            "surface": self.surface.label,
            "radius": self.radius,
            "elliptic_count": self.elliptic_count,
            "quasi_elliptic_classes": classes,
            "flip_graph": None,
        }
        if self.flip_graph is not None:
            out["flip_graph"] = {
                "nodes": len(self.flip_graph.nodes),
                "edges": [list(e) for e in self.flip_graph.edges],
            }
        return out

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, indent=2)


def fibration_census(surface: SurfaceModel, radius: int = 5) -> Census:
    if surface.type == "T8":
        return Census(surface, None, 0, [{"class": "E~8 half-fibre", "member_configs": []}])
    if surface.type == "T7":
        labels = ["E~7 half-fibre", "E~8 via first curve"]
        if surface.second_fibre == "simple":
            labels.append("E~8 via second curve")
        return Census(surface, None, 0, [{"class": s, "member_configs": []} for s in labels])
    g = build_flip_graph(surface, radius)
    members: dict = {}
    for k, T in enumerate(g.nodes):
        for i in (1, 2, 3):
            members.setdefault(T.e7(i), set()).add(k)
    interior_nodes = set(g.interior(1))
    keys = sorted(members, key=lambda c: (min(members[c]), c))
    classes = [{"class": c, "member_configs": sorted(members[c])} for c in keys]
    interior = [n for n, c in enumerate(keys) if members[c] & interior_nodes]
    return Census(surface, radius, 1, classes, g, interior)


@dataclass
class CurveClass:
    vector: Vec
    source: str  # "end", "fibre" or "extraneous"
    member_configs: list


@dataclass
class Inventory:
    surface: SurfaceModel
    radius: int
    classes: list  # CurveClass
    interior_margin: int

    def end_classes(self) -> list:
        return [c for c in self.classes if c.source == "end"]

    def interior_counts(self, graph_depth: list) -> list:
        out = []
        for c in self.end_classes():
            if min(graph_depth[k] for k in c.member_configs) <= self.radius - self.interior_margin:
                out.append(len(c.member_configs))
        return out

    def to_json(self) -> dict:
        return {
            "surface": self.surface.label,
            "radius": self.radius,
            "classes": [
                {"class": _vec_json(c.vector), "source": c.source, "member_configs": c.member_configs}
                for c in self.classes
            ],
        }


def minus_two_curve_inventory(surface: SurfaceModel, radius: int = 5, margin: int = 3):
    """Fibre components plus every end-vertex class met in the flip-graph ball.

    An end-vertex class of arm i is shared exactly by the configurations
    reached through flips in the other two arms; these form a hexagon, so a
    class first seen ``margin`` = 3 steps inside the ball has all of its
    configurations inside the ball.
    """
    _require_t6(surface)
    g = build_flip_graph(surface, radius)
    ends = {a[2] for a in q444.ARMS.values()}
    out = [CurveClass(q444.unit(i), "fibre", []) for i in range(q444.N) if i not in ends]
    out += [CurveClass(x, "extraneous", []) for x in surface.extraneous_classes]
    members: dict = {}
    for k, T in enumerate(g.nodes):
        for i in (1, 2, 3):
            members.setdefault(T.end(i), set()).add(k)
    for x in sorted(members, key=lambda c: (min(members[c]), c)):
        out.append(CurveClass(x, "end", sorted(members[x])))
    return Inventory(surface, radius, out, margin), g
