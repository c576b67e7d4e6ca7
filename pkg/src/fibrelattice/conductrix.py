"""Conductrix profiles of reducible genus-1 fibres and the golden tables.

A profile pairs an admissible weighting with a reduced fibre-supported part
``A_s`` of the conductrix, the cusp-curve attachment (quasi-elliptic only), a
self-intersection type for every component and the fibre multiplicity.

Golden rows are stored in the layout of the printed tables (``display`` vertex
order); :func:`display_order` maps that layout to canonical vertex ids.
"""

from __future__ import annotations

import itertools
import json
import os
from fractions import Fraction
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Iterable, Optional, Sequence

from .dynkin_core import DynkinDiagram, build_diagram, families, kodaira_neron_cycle
from .weightings import enumerate_admissible, representing_elements

ELLIPTIC = "elliptic"
QUASI_ELLIPTIC = "quasi-elliptic"
GOLDEN_ENV = "FIBRELATTICE_GOLDEN_DIR"
SCHEMA_VERSION = 1


@dataclass(frozen=True)
class CurveInvariantRow:
    r: int
    s: int
    AE: int
    self_int: int
    g: int

    @property
    def expected_self_int(self) -> Fraction:
        return Fraction((-2 - self.r) * self.s * self.s, 2)

    def genus_relation_holds(self) -> bool:
        return 2 * self.g - 2 == self.expected_self_int - self.s * self.AE

    def self_int_relation_holds(self) -> bool:
        return self.self_int == self.expected_self_int

    def relations_hold(self) -> bool:
        return self.genus_relation_holds() and self.self_int_relation_holds()


_INVARIANTS = (
    CurveInvariantRow(0, 1, 1, -1, 0),
    CurveInvariantRow(0, 2, -1, -4, 0),
    CurveInvariantRow(2, 1, 0, -2, 0),
    CurveInvariantRow(4, 1, -1, -3, 0),
    CurveInvariantRow(6, 1, -2, -2, 0),  # printed label; the self-intersection relation gives -4
    CurveInvariantRow(1, 2, -2, -6, 0),
)


def invariant_table() -> list:
    return list(_INVARIANTS)


def rows_for_weight(weight: int) -> list:
    return [row for row in _INVARIANTS if row.AE == weight]


def may_meet(a: CurveInvariantRow, b: CurveInvariantRow) -> bool:
    """Whether two transversally meeting curves can carry these invariants."""
    if a.s != b.s:
        return True
    if a.s == 2:
        return True
    return a.r > 0 and b.r > 0


# -- profiles -----------------------------------------------------------------


@dataclass(frozen=True)
class ConductrixProfile:
    diagram: Optional[DynkinDiagram]  # None for a collapsed family row
    kind: str
    d: int
    A_s: tuple
    self_int: tuple
    cusp: tuple  # attachment degree per vertex
    weighting: Optional[tuple] = None
    family: Optional[str] = None

    @property
    def diagram_name(self) -> str:
        return self.family if self.diagram is None else self.diagram.name

    def key(self) -> tuple:
        return canonical_key(self)

    def to_json(self) -> dict:
        if self.diagram is None:
            diag = {"family": self.family}
        else:
            diag = self.diagram.to_json()
        return {
            "kind": self.kind,
            "diagram": diag,
            "d": self.d,
            "A_s": list(self.A_s),
            "self_int": list(self.self_int),
            "cusp": [[v, k] for v, k in enumerate(self.cusp) if k],
        }

    @staticmethod
    def from_json(data: dict) -> "ConductrixProfile":
        diag = data["diagram"]
        if "family" in diag:
            dg, fam = None, diag["family"]
            n = len(data["A_s"])
        else:
            dg, fam = DynkinDiagram.from_json(diag), None
            n = dg.n_vertices
        cusp = [0] * n
        for v, k in data.get("cusp", []):
            cusp[v] = k
        return ConductrixProfile(dg, data["kind"], data["d"], tuple(data["A_s"]), tuple(data["self_int"]), tuple(cusp), family=fam)


def canonical_key(p: ConductrixProfile) -> tuple:
    """Lexicographic minimum of (A_s, self_int, cusp) over diagram automorphisms."""
    if p.diagram is None:
        return (p.family, p.kind, p.d, p.A_s, p.self_int, p.cusp)
    best = None
    n = p.diagram.n_vertices
    for g in p.diagram.automorphisms:
        img = []
        for vec in (p.A_s, p.self_int, p.cusp):
            out = [0] * n
            for i, x in enumerate(vec):
                out[g[i]] = x
            img.append(tuple(out))
        t = tuple(img)
        if best is None or t < best:
            best = t
    return (p.diagram.name, p.kind, p.d) + best


def fibre_weight_for(kind: str, d: int, diagram: DynkinDiagram) -> int:
    """Weight of the conductrix on F for the given fibre kind and multiplicity.

    The curve of cusps meets a simple fibre with multiplicity 2 and a double
    fibre with multiplicity 1.  The tangential ``A~*1`` fibre follows the
    printed table, which pairs weight 1 with d=1 and weight 2 with d=2.
    """
    if kind == ELLIPTIC:
        return 0
    if d not in (1, 2):
        raise ValueError("fibre multiplicity must be 1 or 2")
    if diagram.kind == "A~*" and diagram.rank == 1:
        return d
    return 3 - d


def weight_to_multiplicities(w: Sequence[int], diagram: DynkinDiagram, kind: str, fibre_mult: int) -> list:
    """All (A_s, cusp) with w(v) = (A_s, v) + cusp(v), A_s reduced and integral."""
    m = fibre_weight_for(kind, fibre_mult, diagram)
    F = kodaira_neron_cycle(diagram)
    if sum(a * f for a, f in zip(w, F)) != m:
        return []
    return representing_elements(w, diagram, m)


def assign_self_intersections(w: Sequence[int], diagram: DynkinDiagram) -> list:
    """Every per-vertex choice of invariant row consistent with weights and adjacency."""
    n = diagram.n_vertices
    choices = [rows_for_weight(x) for x in w]
    if any(not c for c in choices):
        return []
    transversal = [[j for j in diagram.neighbours[i] if j < i and diagram.gram[i][j] == 1] for i in range(n)]
    out = []
    pick = [None] * n

    def rec(i: int):
        if i == n:
            out.append(tuple(r.self_int for r in pick))
            return
        for row in choices[i]:
            if all(may_meet(row, pick[j]) for j in transversal[i]):
                pick[i] = row
                rec(i + 1)
        pick[i] = None

    rec(0)
    return out


def profiles_for_diagram(diagram: DynkinDiagram, kind: str) -> list:
    out = []
    mults = (1,) if kind == ELLIPTIC else (1, 2)
    for d in mults:
        m = fibre_weight_for(kind, d, diagram)
        for w, _cert in enumerate_admissible(diagram, m):
            for A_s, cusp in weight_to_multiplicities(w, diagram, kind, d):
                if kind == ELLIPTIC and any(cusp):
                    continue
                for si in assign_self_intersections(w, diagram):
                    out.append(ConductrixProfile(diagram, kind, d, A_s, si, cusp, w))
    return out


def _is_zero_family_row(p: ConductrixProfile) -> bool:
    return (p.diagram is not None and p.diagram.kind == "A~" and not any(p.A_s)
            and all(x == -2 for x in p.self_int) and not any(p.cusp))


def generate_table(kind: str, max_components: int = 9, collapse_families: bool = True) -> list:
    """Regenerate the conductrix table, deduplicated up to diagram automorphism.

    With ``collapse_families`` the zero rows of the ``A~n`` diagrams are
    merged into one ``A~n`` family row, matching the printed layout.
    """
    if kind not in (ELLIPTIC, QUASI_ELLIPTIC):
        raise ValueError(f"unknown kind {kind!r}")
    rows = {}
    family_seen = False
    for diagram in families(max_components):
        for p in profiles_for_diagram(diagram, kind):
            if collapse_families and _is_zero_family_row(p):
                family_seen = True
                continue
            rows.setdefault(p.key(), p)
    out = [rows[k] for k in sorted(rows, key=_sort_key)]
    if family_seen:
        fam = ConductrixProfile(None, kind, 1, (0,), (-2,), (0,), family="A~n")
        out.insert(_family_position(out), fam)
    return out


def _sort_key(k: tuple):
    return (str(k[0]), k[1:])


def _family_position(rows: list) -> int:
    for i, r in enumerate(rows):
        if r.diagram is not None and r.diagram.kind != "A~*":
            return i
    return len(rows)


# -- display layout ----------------------------------------------------------------


def display_order(diagram: DynkinDiagram) -> list:
    """Canonical vertex id for each position of the printed layout."""
    k, r = diagram.kind, diagram.rank
    if k in ("A~", "A~*"):
        return list(range(diagram.n_vertices))
    if k == "D~":
        chain = list(range(r - 3))
        return [r - 3] + chain + [r - 1, r, r - 2]
    if k == "E~":
        return {6: [2, 1, 0, 3, 5, 4, 6], 7: [4, 3, 2, 0, 1, 5, 6, 7], 8: [3, 2, 0, 1, 4, 5, 6, 7, 8]}[r]
    raise ValueError(diagram.name)


def to_display(diagram: DynkinDiagram, vec: Sequence) -> list:
    return [vec[v] for v in display_order(diagram)]


def from_display(diagram: DynkinDiagram, vec: Sequence) -> tuple:
    out = [0] * diagram.n_vertices
    for pos, v in enumerate(display_order(diagram)):
        out[v] = vec[pos]
    return tuple(out)


def _arms(diagram: DynkinDiagram) -> list:
    """Display positions grouped as they are drawn: main line, then the branch above it."""
    k, r = diagram.kind, diagram.rank
    n = diagram.n_vertices
    if k == "E~":
        up = {6: [4, 6], 7: [4], 8: [3]}[r]
        return [[p for p in range(n) if p not in up], up]
    if k == "D~":
        return [list(range(0, r - 1)), [r - 1, r]]
    return [list(range(n))]


def render_profile(p: ConductrixProfile) -> str:
    """Two-line rendering: the main line of the diagram, then the branch vertices."""
    if p.diagram is None:
        return f"{p.family:6} {p.kind:14} d={p.d}  F: all -2        A_s: 0"
    dg = p.diagram
    si = to_display(dg, p.self_int)
    a = to_display(dg, p.A_s)
    c = to_display(dg, p.cusp)

    def cell(pos: int, vals) -> str:
        mark = "o" if c[pos] else ""
        return f"{vals[pos]}{mark}"

    parts = []
    for vals, label in ((si, "F"), (a, "A_s")):
        lines = [" ".join(cell(pos, vals) for pos in arm) for arm in _arms(dg)]
        parts.append(f"{label}: " + " | ".join(lines))
    return f"{dg.name:6} {p.kind:14} d={p.d}  " + "   ".join(parts)


# -- golden data -------------------------------------------------------------------


def golden_path(kind: str, override: Optional[str] = None) -> Path:
    name = f"golden_{kind.replace('-', '_')}.json"
    if override:
        path = Path(override)
        return path / name if path.is_dir() else path
    env = os.environ.get(GOLDEN_ENV)
    if env:
        return Path(env) / name
    return Path(str(resources.files("fibrelattice") / "data" / name))


def parse_golden(data: dict) -> list:
    if data.get("schema_version") != SCHEMA_VERSION:
        raise ValueError(f"unsupported golden schema version {data.get('schema_version')!r}")
    kind = data["kind"]
    out = []
    for row in data["rows"]:
        if set(row) - {"diagram", "d", "self_int", "A_s", "hollow"}:
            raise ValueError(f"unexpected golden row fields {sorted(row)}")
        diag = row["diagram"]
        if diag.get("family"):
            out.append(ConductrixProfile(None, kind, row.get("d", 1), (0,), (-2,), (0,), family=diag["family"]))
            continue
        dg = build_diagram(diag["kind"], diag["rank"])
        if len(row["A_s"]) != dg.n_vertices or len(row["self_int"]) != dg.n_vertices:
            raise ValueError(f"{dg.name}: golden row has wrong length")
        cusp_disp = [0] * dg.n_vertices
        for pos in row.get("hollow", []):
            if isinstance(pos, list):
                cusp_disp[pos[0]] = pos[1]
            else:
                cusp_disp[pos] = 1
        out.append(ConductrixProfile(dg, kind, row.get("d", 1), from_display(dg, row["A_s"]),
                                     from_display(dg, row["self_int"]), from_display(dg, cusp_disp)))
    return out


def load_golden(kind: str, override: Optional[str] = None) -> list:
    with open(golden_path(kind, override)) as fh:
        data = json.load(fh)
    if data.get("kind") != kind:
        raise ValueError(f"golden file holds {data.get('kind')!r} rows, expected {kind!r}")
    return parse_golden(data)


def table_to_json(rows: Iterable[ConductrixProfile]) -> list:
    return [r.to_json() for r in rows]


def table_from_json(items: Iterable[dict]) -> list:
    return [ConductrixProfile.from_json(x) for x in items]


@dataclass
class TableDiff:
    matched: list = field(default_factory=list)
    missing: list = field(default_factory=list)  # golden rows not regenerated
    extra: list = field(default_factory=list)  # regenerated rows absent from golden

    @property
    def empty(self) -> bool:
        return not self.missing and not self.extra

    def to_json(self) -> dict:
        return {
            "matched": len(self.matched),
            "missing": table_to_json(self.missing),
            "extra": table_to_json(self.extra),
        }


def diff_against_golden(generated: Sequence[ConductrixProfile], golden: Sequence[ConductrixProfile]) -> TableDiff:
    for p in list(generated) + list(golden):
        if p.kind not in (ELLIPTIC, QUASI_ELLIPTIC):
            raise ValueError(f"schema mismatch: kind {p.kind!r}")
    pool = {}
    for p in generated:
        pool.setdefault(p.key(), []).append(p)
    diff = TableDiff()
    for g in golden:
        bucket = pool.get(g.key())
        if bucket:
            diff.matched.append(bucket.pop())
        else:
            diff.missing.append(g)
    for bucket in pool.values():
        diff.extra.extend(bucket)
    return diff
