"""Extended Dynkin diagrams, root-vector arithmetic, Kodaira-Neron and excess cycles.

Vertex numbering is canonical per family:

* ``A~n``: cyclic, vertex 0 is the attached vertex.  ``A~1`` is two vertices
  joined by a single edge of multiplicity 2 (same graph as ``A~*1``).
* ``D~n``: the interior chain c_1..c_{n-3} first (ids 0..n-4), then the two
  leaves at c_1, then the two leaves at c_{n-3}; the attached vertex is the
  last leaf.  For ``D~4`` this is centre 0, leaves 1-4.
* ``E~6``: centre 0, arms (1,2), (3,4), (5,6) listed outwards; attached 6.
* ``E~7``: centre 0, short arm 1, arms (2,3,4) and (5,6,7); attached 7.
* ``E~8``: centre 0, arm 1, arm (2,3), arm (4..8); attached 8.
* ``A~*1``: two vertices, one edge of multiplicity 2; attached 1.
* ``A~*2``: the ``A~2`` triangle; attached 0.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from math import gcd
from typing import Iterable, Sequence

import sympy

KINDS = ("A~", "D~", "E~", "A~*")

RootVector = tuple  # tuple of int or Fraction, one entry per vertex
EdgeVector = tuple  # tuple of int, one entry per edge (in diagram edge order)


class DiagramError(ValueError):
    pass


@dataclass(frozen=True)
class DynkinDiagram:
    kind: str
    rank: int
    n_vertices: int
    edges: tuple  # ((i, j, multiplicity), ...) with i < j
    attached: int
    _: dict = field(default_factory=dict, compare=False, repr=False)

    @property
    def name(self) -> str:
        return f"{self.kind}{self.rank}"

    @property
    def vertices(self) -> tuple:
        return tuple(range(self.n_vertices))

    @cached_property
    def gram(self) -> tuple:
        g = [[0] * self.n_vertices for _ in range(self.n_vertices)]
        for i in range(self.n_vertices):
            g[i][i] = -2
        for i, j, m in self.edges:
            g[i][j] += m
            g[j][i] += m
        return tuple(tuple(r) for r in g)

    @cached_property
    def neighbours(self) -> tuple:
        nb = [[] for _ in range(self.n_vertices)]
        for i, j, _m in self.edges:
            nb[i].append(j)
            nb[j].append(i)
        return tuple(tuple(sorted(x)) for x in nb)

    def degree(self, v: int) -> int:
        return sum(m for i, j, m in self.edges if v in (i, j))

    def edge_multiplicity(self, a: int, b: int) -> int:
        return self.gram[a][b] if a != b else 0

    @property
    def is_tree(self) -> bool:
        return self.kind in ("D~", "E~")

    @cached_property
    def automorphisms(self) -> tuple:
        """All vertex permutations preserving the Gram matrix, identity first."""
        n = self.n_vertices
        g = self.gram
        found = []
        perm = [-1] * n
        used = [False] * n

        def extend(k: int) -> None:
            if k == n:
                found.append(tuple(perm))
                return
            for img in range(n):
                if used[img]:
                    continue
                if all(g[k][j] == g[img][perm[j]] for j in range(k)):
                    perm[k] = img
                    used[img] = True
                    extend(k + 1)
                    used[img] = False
            perm[k] = -1

        extend(0)
        found.sort(key=lambda p: p != tuple(range(n)))
        return tuple(found)

    @property
    def automorphism_generators(self) -> tuple:
        return tuple(p for p in self.automorphisms if p != tuple(range(self.n_vertices)))

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "rank": self.rank,
            "vertices": list(self.vertices),
            "edges": [list(e) for e in self.edges],
            "attached": self.attached,
        }

    @staticmethod
    def from_json(data: dict) -> "DynkinDiagram":
        d = build_diagram(data["kind"], data["rank"])
        if [list(e) for e in d.edges] != [list(e) for e in data.get("edges", d.edges)]:
            raise DiagramError(f"edge list does not match canonical {d.name}")
        return d


def _make(kind: str, rank: int, n: int, edges: Iterable, attached: int) -> DynkinDiagram:
    norm = tuple(sorted((min(i, j), max(i, j), m) for i, j, m in edges))
    return DynkinDiagram(kind, rank, n, norm, attached)


def _chain(ids: Sequence[int]) -> list:
    return [(a, b, 1) for a, b in zip(ids, ids[1:])]


def build_diagram(kind: str, rank: int) -> DynkinDiagram:
    """Construct the canonical diagram of the given kind and rank."""
    if kind not in KINDS:
        raise DiagramError(f"unknown diagram kind {kind!r}; expected one of {KINDS}")
    if not isinstance(rank, int) or isinstance(rank, bool):
        raise DiagramError(f"rank must be an integer, got {rank!r}")
    if kind == "A~":
        if rank < 1:
            raise DiagramError("A~n needs n >= 1")
        if rank == 1:
            return _make(kind, 1, 2, [(0, 1, 2)], 0)
        n = rank + 1
        return _make(kind, rank, n, [(i, (i + 1) % n, 1) for i in range(n)], 0)
    if kind == "A~*":
        if rank == 1:
            return _make(kind, 1, 2, [(0, 1, 2)], 1)
        if rank == 2:
            return _make(kind, 2, 3, [(0, 1, 1), (1, 2, 1), (0, 2, 1)], 0)
        raise DiagramError("A~*n exists only for n in {1, 2}")
    if kind == "D~":
        if rank < 4:
            raise DiagramError("D~n needs n >= 4")
        k = rank - 3
        chain = list(range(k))
        l1, l2, l3, l4 = k, k + 1, k + 2, k + 3
        edges = _chain(chain) + [(0, l1, 1), (0, l2, 1), (k - 1, l3, 1), (k - 1, l4, 1)]
        return _make(kind, rank, rank + 1, edges, l4)
    if kind == "E~":
        arms = {6: ((1, 2), (3, 4), (5, 6)), 7: ((1,), (2, 3, 4), (5, 6, 7)), 8: ((1,), (2, 3), (4, 5, 6, 7, 8))}
        if rank not in arms:
            raise DiagramError("E~n needs n in {6, 7, 8}")
        edges = []
        for arm in arms[rank]:
            edges += _chain((0,) + arm)
        return _make(kind, rank, rank + 1, edges, rank)
    raise DiagramError(f"invalid diagram {kind}{rank}")


def parse_diagram(text: str) -> DynkinDiagram:
    """Parse names like ``E~8``, ``D~4``, ``A~3``, ``A~*1``."""
    s = text.strip()
    for kind in ("A~*", "A~", "D~", "E~"):
        if s.startswith(kind):
            rest = s[len(kind):]
            if rest.isdigit():
                return build_diagram(kind, int(rest))
    raise DiagramError(f"cannot parse diagram name {text!r}")


def pair(a: Sequence, b: Sequence, d: DynkinDiagram):
    if len(a) != d.n_vertices or len(b) != d.n_vertices:
        raise DiagramError("basis mismatch: vector length differs from vertex count")
    g = d.gram
    total = 0
    for i, x in enumerate(a):
        if x:
            row = g[i]
            total += x * sum(row[j] * y for j, y in enumerate(b) if y)
    return total


def gram_apply(d: DynkinDiagram, u: Sequence) -> tuple:
    """The weighting v -> (v, u)."""
    g = d.gram
    return tuple(sum(g[i][j] * u[j] for j in range(d.n_vertices)) for i in range(d.n_vertices))


def vertex_root(d: DynkinDiagram, v: int) -> tuple:
    return tuple(1 if i == v else 0 for i in range(d.n_vertices))


def kodaira_neron_cycle(d: DynkinDiagram) -> tuple:
    cached = d._.get("F")
    if cached is not None:
        return cached
    ns = sympy.Matrix(d.gram).nullspace()
    if len(ns) != 1:
        raise DiagramError(f"{d.name}: radical has dimension {len(ns)}")
    vec = ns[0]
    den = sympy.ilcm(*[sympy.fraction(x)[1] for x in vec])
    ints = [int(x * den) for x in vec]
    g = 0
    for x in ints:
        g = gcd(g, x)
    ints = [x // g for x in ints]
    if ints[0] < 0:
        ints = [-x for x in ints]
    if min(ints) <= 0:
        raise DiagramError(f"{d.name}: radical vector is not positive")
    F = tuple(ints)
    d._["F"] = F
    return F


def _scope_n(d: DynkinDiagram) -> int:
    if d.kind == "A~*":
        raise DiagramError(f"excess cycle not defined for degenerate fibre {d.name}")
    return 2 if d.kind == "A~" else 1


def branch_vertex_cycle(d: DynkinDiagram) -> tuple:
    _scope_n(d)
    V = [0] * d.n_vertices
    if d.kind == "A~" or (d.kind == "E~" and d.rank == 6):
        return tuple(V)
    if d.kind == "D~" and d.rank >= 5:
        V[0] = 1
        V[d.rank - 4] = 1
        return tuple(V)
    V[0] = 2  # D~4, E~7, E~8: the unique branch vertex is 0
    return tuple(V)


def excess_cycle(d: DynkinDiagram) -> tuple:
    """Edge multiplicities E (in ``d.edges`` order) with n*F = E - V."""
    n = _scope_n(d)
    F = kodaira_neron_cycle(d)
    V = branch_vertex_cycle(d)
    target = [n * f + v for f, v in zip(F, V)]
    if d.kind == "A~":
        E = tuple(2 if m == 2 else 1 for _i, _j, m in d.edges)
    else:
        # peel leaves: the coefficient of a leaf edge is the leaf's remaining value
        rem = list(target)
        coeff = {}
        alive = set(range(len(d.edges)))
        while alive:
            deg = [0] * d.n_vertices
            for k in alive:
                i, j, _m = d.edges[k]
                deg[i] += 1
                deg[j] += 1
            progressed = False
            for k in sorted(alive):
                i, j, _m = d.edges[k]
                leaf = i if deg[i] == 1 else j if deg[j] == 1 else None
                if leaf is None:
                    continue
                other = j if leaf == i else i
                c = rem[leaf]
                coeff[k] = c
                rem[leaf] -= c
                rem[other] -= c
                alive.discard(k)
                progressed = True
                break
            if not progressed:
                raise DiagramError("leaf peeling stalled")
        if any(rem):
            raise DiagramError(f"{d.name}: excess cycle does not close")
        E = tuple(coeff[k] for k in range(len(d.edges)))
    if edge_vector_as_root(d, E) != tuple(target):
        raise DiagramError(f"{d.name}: n*F != E - V")
    return E


def edge_vector_as_root(d: DynkinDiagram, E: Sequence[int]) -> tuple:
    out = [0] * d.n_vertices
    for (i, j, _m), c in zip(d.edges, E):
        out[i] += c
        out[j] += c
    return tuple(out)


def add(a: Sequence, b: Sequence) -> tuple:
    return tuple(x + y for x, y in zip(a, b))


def scale(k, a: Sequence) -> tuple:
    return tuple(k * x for x in a)


def as_fractions(a: Sequence) -> tuple:
    return tuple(Fraction(x) for x in a)


def families(max_components: int) -> list:
    """Every supported diagram with at most ``max_components`` vertices."""
    out = []
    if max_components >= 2:
        out.append(build_diagram("A~*", 1))
    for r in range(1, max_components):
        out.append(build_diagram("A~", r))
    if max_components >= 3:
        out.append(build_diagram("A~*", 2))
    for r in range(4, max_components):
        out.append(build_diagram("D~", r))
    for r in (6, 7, 8):
        if r + 1 <= max_components:
            out.append(build_diagram("E~", r))
    return out


def diagram_json(d: DynkinDiagram) -> str:
    return json.dumps(d.to_json(), sort_keys=True)
