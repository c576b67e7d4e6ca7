"""Admissible weightings on extended Dynkin diagrams.

A weighting is a tuple of integers indexed by the vertices of a diagram.  The
enumerator assigns the branch vertices first and then walks the diagram
outwards; the identity ``e + n*m = -w(V)`` bounds the total excess, and every
edge contributes a nonnegative amount, so the search tree stays small.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterator, Optional, Sequence

import sympy

from .dynkin_core import (
    DynkinDiagram,
    branch_vertex_cycle,
    build_diagram,
    excess_cycle,
    gram_apply,
    kodaira_neron_cycle,
)

DEFAULT_BOUND = -6

Weighting = tuple


def evaluate(w: Sequence[int], vec: Sequence) -> int:
    return sum(a * b for a, b in zip(w, vec))


def fibre_weight(w: Sequence[int], d: DynkinDiagram) -> int:
    return evaluate(w, kodaira_neron_cycle(d))


def edge_excess(w: Sequence[int], edge, d: DynkinDiagram) -> int:
    """Minus the value of ``w`` on the edge root of ``edge`` (per unit multiplicity)."""
    i, j = edge[0], edge[1]
    if d.edge_multiplicity(i, j) == 0:
        raise ValueError(f"{d.name}: vertices {i} and {j} are not adjacent")
    return -(w[i] + w[j])


def _excess_coefficients(d: DynkinDiagram) -> Optional[tuple]:
    if d.kind == "A~*":
        if d.rank == 2:
            return excess_cycle(build_diagram("A~", 2))
        return None
    return excess_cycle(d)


def _branch_cycle(d: DynkinDiagram) -> tuple:
    if d.kind == "A~*":
        return (0,) * d.n_vertices
    return branch_vertex_cycle(d)


def _n_factor(d: DynkinDiagram) -> int:
    return 2 if d.kind in ("A~", "A~*") else 1


def total_excess(w: Sequence[int], d: DynkinDiagram) -> int:
    E = _excess_coefficients(d)
    if E is None:
        raise ValueError(f"{d.name}: no excess cycle")
    return sum(c * edge_excess(w, e, d) for c, e in zip(E, d.edges))


# -- representing elements -------------------------------------------------


class _Solver:
    """Exact solve of Gram_sub * u = t on the diagram minus its attached vertex."""

    def __init__(self, d: DynkinDiagram):
        self.d = d
        keep = [v for v in range(d.n_vertices) if v != d.attached]
        self.keep = keep
        sub = sympy.Matrix([[d.gram[a][b] for b in keep] for a in keep])
        self.det = int(sub.det())
        self.adj = [[int(x) for x in row] for row in sub.adjugate().tolist()]

    def solve(self, t: Sequence[int]) -> Optional[tuple]:
        """Integral u with (v,u) = t(v) for all v, attached coefficient 0; None if not integral.

        Requires t(F) = 0, in which case the equation at the attached vertex
        follows from the others.
        """
        rhs = [t[v] for v in self.keep]
        u = [0] * self.d.n_vertices
        for row, v in zip(self.adj, self.keep):
            num = sum(a * b for a, b in zip(row, rhs))
            q, r = divmod(num, self.det)
            if r:
                return None
            u[v] = q
        return tuple(u)


_SOLVERS: dict = {}


def _solver(d: DynkinDiagram) -> _Solver:
    key = (d.kind, d.rank)
    s = _SOLVERS.get(key)
    if s is None:
        s = _SOLVERS[key] = _Solver(d)
    return s


def reduce_mod_fibre(u: Sequence[int], d: DynkinDiagram) -> tuple:
    """Subtract the multiple of F that makes ``u`` nonnegative but not >= F."""
    F = kodaira_neron_cycle(d)
    k = min(a // f for a, f in zip(u, F))
    return tuple(a - k * f for a, f in zip(u, F))


def complements(d: DynkinDiagram, m: int) -> Iterator[tuple]:
    """All w' >= 0 with sum w'(v) F(v) = m, in lexicographic order."""
    F = kodaira_neron_cycle(d)
    n = d.n_vertices
    out = [0] * n

    def rec(i: int, rest: int):
        if i == n:
            if rest == 0:
                yield tuple(out)
            return
        for k in range(rest // F[i] + 1):
            out[i] = k
            yield from rec(i + 1, rest - k * F[i])
        out[i] = 0

    if m >= 0:
        yield from rec(0, m)


def representing_elements(w: Sequence[int], d: DynkinDiagram, m: Optional[int] = None,
                          condition6: Optional[bool] = None) -> list:
    """Every (u, w') with u reduced and integral and w(v) = (v,u) + w'(v), w' >= 0.

    ``condition6`` (default: on when m == 2) drops solutions whose u contains a
    vertex of multiplicity 1 in F.
    """
    if m is None:
        m = fibre_weight(w, d)
    if condition6 is None:
        condition6 = m == 2
    F = kodaira_neron_cycle(d)
    solver = _solver(d)
    found = []
    for wp in complements(d, m):
        t = tuple(a - b for a, b in zip(w, wp))
        u = solver.solve(t)
        if u is None:
            continue
        u = reduce_mod_fibre(u, d)
        if condition6 and any(u[v] and F[v] == 1 for v in range(d.n_vertices)):
            continue
        found.append((u, wp))
    return found


def find_representing_element(w: Sequence[int], d: DynkinDiagram, m: Optional[int] = None):
    sols = representing_elements(w, d, m)
    return sols[0] if sols else None


# -- admissibility ------------------------------------------------------------


@dataclass
class AdmissibilityCertificate:
    weighting: tuple
    admissible: bool
    fibre_weight: int
    excess: Optional[int]
    excessive_edges: list = field(default_factory=list)
    representing_element: Optional[tuple] = None
    complement: Optional[tuple] = None
    failed_condition: Optional[int] = None
    semi_admissible: bool = False

    def to_json(self) -> dict:
        return {
            "weighting": list(self.weighting),
            "admissible": self.admissible,
            "semi_admissible": self.semi_admissible,
            "fibre_weight": self.fibre_weight,
            "excess": self.excess,
            "excessive_edges": [[list(e), x] for e, x in self.excessive_edges],
            "representing_element": None if self.representing_element is None else list(self.representing_element),
            "complement": None if self.complement is None else list(self.complement),
            "failed_condition": self.failed_condition,
        }


def _zero_neighbour_ok(w: Sequence[int], d: DynkinDiagram) -> bool:
    for v in range(d.n_vertices):
        if w[v] == 0 and sum(1 for x in d.neighbours[v] if w[x] == 0) > 2:
            return False
    return True


def check_admissible(w: Sequence[int], d: DynkinDiagram) -> AdmissibilityCertificate:
    """Evaluate the six conditions in order; ``A~*1`` skips the edge-excess condition."""
    w = tuple(int(x) for x in w)
    if len(w) != d.n_vertices:
        raise ValueError(f"{d.name} has {d.n_vertices} vertices, weighting has {len(w)}")
    semi = d.kind == "A~*" and d.rank == 1
    m = fibre_weight(w, d)
    E = _excess_coefficients(d)
    e = None if E is None else total_excess(w, d)
    exc = [((i, j), -(w[i] + w[j])) for i, j, _m in d.edges if -(w[i] + w[j]) > 0]
    cert = AdmissibilityCertificate(w, False, m, e, exc, semi_admissible=semi)

    if max(w) > 1:
        cert.failed_condition = 1
        return cert
    if not semi and any(-(w[i] + w[j]) < 0 for i, j, _m in d.edges):
        cert.failed_condition = 2
        return cert
    if m not in (0, 1, 2):
        cert.failed_condition = 3
        return cert
    if not _zero_neighbour_ok(w, d):
        cert.failed_condition = 4
        return cert
    if not representing_elements(w, d, m, condition6=False):
        cert.failed_condition = 5
        return cert
    sols = representing_elements(w, d, m)
    if not sols:
        cert.failed_condition = 6
        return cert
    cert.admissible = True
    cert.representing_element, cert.complement = sols[0]
    return cert


# -- enumeration ----------------------------------------------------------------


def _candidates(d: DynkinDiagram, m: Optional[int], bound: int) -> Iterator[tuple]:
    """Weightings in [bound, 1] with nonnegative edge excess and admissible excess budget."""
    n = d.n_vertices
    if d.kind == "A~*" and d.rank == 1:
        for w in itertools.product(range(bound, 2), repeat=n):
            yield w
        return
    E = _excess_coefficients(d)
    coef = {}
    for (i, j, _mult), c in zip(d.edges, E):
        coef[(i, j)] = coef[(j, i)] = c
    V = _branch_cycle(d)
    nf = _n_factor(d)
    branch = [v for v in range(n) if V[v]]
    order = list(branch)
    if not order:
        order = [0]
    seen = set(order)
    head = 0
    while head < len(order):
        for x in d.neighbours[order[head]]:
            if x not in seen:
                seen.add(x)
                order.append(x)
        head += 1
    pos = {v: k for k, v in enumerate(order)}
    earlier = [[x for x in d.neighbours[v] if pos[x] < pos[v]] for v in order]
    w = [0] * n

    def rec(k: int, budget: int, acc: int):
        if k == len(order):
            yield tuple(w)
            return
        v = order[k]
        lo, hi = bound, 1
        rem = budget - acc
        for x in earlier[k]:
            hi = min(hi, -w[x])
            lo = max(lo, -w[x] - rem // coef[(v, x)])
        for val in range(lo, hi + 1):
            add = sum(coef[(v, x)] * -(val + w[x]) for x in earlier[k])
            if acc + add > budget:
                continue
            w[v] = val
            yield from rec(k + 1, budget, acc + add)
        w[v] = 0

    nb = len(branch)
    branch_edges = [(i, j) for i, j, _m in d.edges if i in branch and j in branch]
    for bvals in itertools.product(range(bound, 2), repeat=nb):
        for v, val in zip(branch, bvals):
            w[v] = val
        wv = -sum(V[v] * w[v] for v in branch)
        budget = wv - nf * m if m is not None else wv
        if budget < 0:
            continue
        acc0 = 0
        ok = True
        for i, j in branch_edges:
            x = -(w[i] + w[j])
            if x < 0:
                ok = False
            acc0 += coef[(i, j)] * x
        if not ok or acc0 > budget:
            continue
        if nb:
            yield from rec(nb, budget, acc0)
        else:
            for val in range(bound, 2):
                w[order[0]] = val
                yield from rec(1, budget, 0)


def enumerate_admissible(d: DynkinDiagram, m: Optional[int] = None, bound: int = DEFAULT_BOUND) -> list:
    """All admissible (semi-admissible for A~*1) weightings with values in [bound, 1].

    ``m`` filters by fibre weight; ``None`` keeps all.  Sorted lexicographically.
    """
    if bound > -2:
        raise ValueError("lower bound must be <= -2")
    out = []
    for w in _candidates(d, m, bound):
        fw = fibre_weight(w, d)
        if m is not None and fw != m:
            continue
        cert = check_admissible(w, d)
        if cert.admissible:
            out.append((w, cert))
    out.sort(key=lambda p: p[0])
    return out


# -- the excess-results suite -----------------------------------------------------


def _alternating(w: Sequence[int], d: DynkinDiagram) -> bool:
    return all(abs(x) == 1 for x in w) and all(w[i] == -w[j] for i, j, _m in d.edges)


def _orbit_count(ws: Sequence[tuple], d: DynkinDiagram) -> int:
    seen = set()
    count = 0
    for w in ws:
        if w in seen:
            continue
        count += 1
        for g in d.automorphisms:
            img = [0] * d.n_vertices
            for i, x in enumerate(w):
                img[g[i]] = x
            seen.add(tuple(img))
    return count


def central_vertex(d: DynkinDiagram) -> int:
    """The vertex fixed by every automorphism of a D~2n diagram."""
    fixed = [v for v in range(d.n_vertices) if all(g[v] == v for g in d.automorphisms)]
    if len(fixed) != 1:
        raise ValueError(f"{d.name} has no unique central vertex")
    return fixed[0]


@dataclass
class ExcessReport:
    diagram: str
    clauses: dict = field(default_factory=dict)  # name -> (ok, detail)
    counts: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(ok for ok, _ in self.clauses.values())

    def failures(self) -> list:
        return [(k, v[1]) for k, v in self.clauses.items() if not v[0]]

    def to_json(self) -> dict:
        return {
            "diagram": self.diagram,
            "ok": self.ok,
            "clauses": {k: {"ok": ok, "detail": det} for k, (ok, det) in self.clauses.items()},
            "counts": self.counts,
        }


def verify_excess_results(d: DynkinDiagram, bound: int = DEFAULT_BOUND) -> ExcessReport:
    """Check every clause of the excess classification against the full enumeration."""
    if d.kind == "A~*":
        raise ValueError("the excess classification covers A~, D~ and E~ only")
    rep = ExcessReport(d.name)
    items = enumerate_admissible(d, None, bound)
    V = branch_vertex_cycle(d)
    F = kodaira_neron_cycle(d)
    branch = [v for v in range(d.n_vertices) if V[v]]
    nf = _n_factor(d)
    zero = (0,) * d.n_vertices

    def clause(name: str, bad: list, detail: str = "") -> None:
        rep.clauses[name] = (not bad, f"counterexample {bad[0]}" if bad else detail)

    clause("identity e+n*m=-w(V)", [w for w, c in items if c.excess + nf * c.fibre_weight != -sum(a * b for a, b in zip(w, V))])

    if d.kind == "A~" or (d.kind == "E~" and d.rank == 6):
        clause("i", [w for w, c in items if not (w == zero or _alternating(w, d)) or c.excess or c.fibre_weight])
    if d.kind == "A~":
        odd_vertices = d.n_vertices % 2 == 1
        clause("i:A~ alternation needs even vertex count",
               [w for w, _c in items if _alternating(w, d) and odd_vertices])

    def f_of(w):
        return [-w[v] for v in branch]

    if (d.kind == "D~" and d.rank == 4) or (d.kind == "E~" and d.rank in (7, 8)):
        clause("ii", [w for w, c in items if c.excess + c.fibre_weight != 2 * f_of(w)[0]])
    if d.kind == "D~" and d.rank > 4:
        clause("iii", [w for w, c in items if c.excess + c.fibre_weight != sum(f_of(w))])

    if branch:
        outlier = None
        if d.kind == "D~" and d.rank == 4:
            outlier = (-2, 1, 1, 1, 1)
        bad = []
        for w, c in items:
            if max(f_of(w)) > 1 and not (w == outlier and c.fibre_weight == 0):
                bad.append(w)
        clause("iv", bad)
        if outlier is not None:
            present = any(w == outlier for w, _c in items)
            rep.clauses["iv:D~4 f=2 weight admissible"] = (present, "" if present else "missing")

    bad = []
    for w, c in items:
        if c.fibre_weight != 2:
            continue
        for _u, wp in representing_elements(w, d, 2):
            if any(wp[v] for v in range(d.n_vertices) if F[v] == 1):
                bad.append(w)
    clause("iv.5", bad)

    ex0 = [(w, c) for w, c in items if c.excess == 0]
    clause("v:shape", [w for w, c in ex0 if not (w == zero or _alternating(w, d)) or c.fibre_weight not in (0, 2)])
    nz0 = [w for w, c in ex0 if w != zero and c.fibre_weight == 0]
    two0 = [w for w, c in ex0 if c.fibre_weight == 2]
    rep.counts.update({
        "admissible": len(items),
        "m0": sum(1 for _w, c in items if c.fibre_weight == 0),
        "m1": sum(1 for _w, c in items if c.fibre_weight == 1),
        "m2": sum(1 for _w, c in items if c.fibre_weight == 2),
        "excess0_m0_nonzero": len(nz0),
        "excess0_m2": len(two0),
    })

    is_d = d.kind == "D~"
    allows_nz0 = (is_d and d.rank % 4 == 1) or (d.kind == "E~" and d.rank == 6)
    if allows_nz0:
        if d.kind == "E~":
            ok = len(nz0) == 2 and tuple(-x for x in nz0[0]) == nz0[1]
        else:
            ok = _orbit_count(nz0, d) == 1
        rep.clauses["v:excess-0 m=0 nonzero"] = (ok, f"found {nz0}")
    else:
        clause("v:excess-0 m=0 nonzero", nz0)

    allows_two0 = (is_d and d.rank % 2 == 0) or (d.kind == "E~" and d.rank in (7, 8))
    if allows_two0:
        ok = len(two0) == 1
        detail = f"found {two0}"
        if ok:
            sols = representing_elements(two0[0], d, 2)
            supports = sorted({tuple(v for v in range(d.n_vertices) if wp[v]) for _u, wp in sols})
            rep.counts["excess0_m2_complement_support"] = supports
            ok = len(sols) == 1 and all(len(s) == 1 for s in supports)
            if ok and is_d:
                ok = supports == [(central_vertex(d),)]
            if ok and d.kind == "E~" and d.rank == 7:
                ok = supports == [(1,)]  # the leaf next to the branch vertex
            detail = f"weight {two0[0]}, complement supports {supports}"
        rep.clauses["v:excess-0 m=2"] = (ok, detail)
    else:
        clause("v:excess-0 m=2", two0)
    return rep
