"""Command-line front end.

Exit codes: 0 success, 1 verification failure (table diff or failed claim),
2 usage error.  Every subcommand accepts ``--format text|json``; identical
arguments give byte-identical output.
"""

from __future__ import annotations

import json
import sys
import time
from dataclasses import dataclass, field
from typing import Callable, Optional

import click

from . import conductrix, dynkin_core, fibration_graph, q444, weightings

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
DEFAULT_MAX_RANK = 12
DEFAULT_RADIUS = 5


@dataclass(frozen=True)
class RunConfig:
    command: str
    diagram: Optional[str] = None
    fibre_weight: Optional[int] = None
    bound: int = weightings.DEFAULT_BOUND
    radius: int = DEFAULT_RADIUS
    output: str = "text"
    golden: Optional[str] = None

    def __post_init__(self):
        if self.bound > -2:
            raise click.BadParameter(f"bound must be <= -2, got {self.bound}", param_hint="--bound")
        if self.radius < 0:
            raise click.BadParameter(f"radius must be >= 0, got {self.radius}", param_hint="--radius")
        if self.output not in ("text", "json", "dot"):
            raise click.BadParameter(f"unknown output format {self.output!r}", param_hint="--format")


def _emit(obj) -> None:
    click.echo(json.dumps(obj, indent=2, sort_keys=True))


def _parse_diagram(text: str) -> dynkin_core.DynkinDiagram:
    try:
        return dynkin_core.parse_diagram(text)
    except dynkin_core.DiagramError as exc:
        raise click.BadParameter(str(exc), param_hint="--diagram") from exc


FORMAT = click.option("--format", "output", type=click.Choice(["text", "json"]), default="text",
                      show_default=True, help="Output format.")


@click.group(context_settings={"help_option_names": ["-h", "--help"]})
@click.version_option(package_name="fibrelattice")
def cli():
    """Admissible weightings, conductrix tables and the T_(4,4,4) lattice calculus."""


# -- weights ------------------------------------------------------------------------


def cmd_weights(cfg: RunConfig) -> int:
    d = _parse_diagram(cfg.diagram)
    rows = weightings.enumerate_admissible(d, cfg.fibre_weight, cfg.bound)
    if cfg.output == "json":
        _emit({"diagram": d.name, "fibre_weight": cfg.fibre_weight, "bound": cfg.bound,
               "count": len(rows), "weightings": [c.to_json() for _w, c in rows]})
        return EXIT_OK
    click.echo(f"{d.name}  fibre weight {'any' if cfg.fibre_weight is None else cfg.fibre_weight}  "
               f"bound {cfg.bound}  {len(rows)} admissible")
    for w, c in rows:
        u = "-" if c.representing_element is None else " ".join(map(str, c.representing_element))
        click.echo(f"  w = {' '.join(f'{x:2d}' for x in w)}   m={c.fibre_weight} e={c.excess}   u = {u}")
    return EXIT_OK


@cli.command("weights")
@click.option("--diagram", required=True, help="Diagram name, e.g. E~6, D~4, A~3, A~*1.")
@click.option("--fibre-weight", type=click.IntRange(0, 2), default=None, help="Keep only w(F) = m.")
@click.option("--bound", type=int, default=weightings.DEFAULT_BOUND, show_default=True,
              help="Lower bound B <= -2 on vertex weights.")
@FORMAT
def weights_cmd(diagram, fibre_weight, bound, output):
    """Enumerate admissible weightings with their certificates."""
    sys.exit(cmd_weights(RunConfig("weights", diagram=diagram, fibre_weight=fibre_weight,
                                   bound=bound, output=output)))


# -- tables -------------------------------------------------------------------------


def cmd_tables(cfg: RunConfig, kind: str, max_components: int = 9) -> int:
    t0 = time.perf_counter()
    rows = conductrix.generate_table(kind, max_components)
    try:
        golden = conductrix.load_golden(kind, cfg.golden)
    except (OSError, ValueError, KeyError, dynkin_core.DiagramError) as exc:
        click.echo(f"cannot read golden table: {exc}", err=True)
        return EXIT_FAIL
    diff = conductrix.diff_against_golden(rows, golden)
    elapsed = time.perf_counter() - t0
    if cfg.output == "json":
        _emit({"kind": kind, "rows": conductrix.table_to_json(rows), "diff": diff.to_json(),
               "diff_empty": diff.empty})
    else:
        for r in rows:
            click.echo(conductrix.render_profile(r))
        click.echo(f"{len(rows)} rows; golden {len(golden)}; matched {len(diff.matched)}; "
                   f"missing {len(diff.missing)}; extra {len(diff.extra)}")
        for r in diff.missing:
            click.echo("  MISSING " + conductrix.render_profile(r))
        for r in diff.extra:
            click.echo("  EXTRA   " + conductrix.render_profile(r))
        click.echo(f"diff {'empty' if diff.empty else 'NOT empty'} ({elapsed:.1f} s)", err=True)
    return EXIT_OK if diff.empty else EXIT_FAIL


@cli.command("tables")
@click.option("--kind", type=click.Choice([conductrix.QUASI_ELLIPTIC, conductrix.ELLIPTIC]), required=True)
@click.option("--golden", type=click.Path(), default=None,
              help=f"Golden file or directory (default: ${conductrix.GOLDEN_ENV} or bundled data).")
@click.option("--max-components", type=click.IntRange(2, 13), default=9, show_default=True)
@FORMAT
def tables_cmd(kind, golden, max_components, output):
    """Regenerate a conductrix table and diff it against the golden rows."""
    sys.exit(cmd_tables(RunConfig("tables", output=output, golden=golden), kind, max_components))


# -- verify -------------------------------------------------------------------------


@dataclass
class ClaimResult:
    name: str
    ok: bool
    detail: dict = field(default_factory=dict)


def _diagrams_up_to(max_rank: int) -> list:
    out = [dynkin_core.build_diagram("A~", r) for r in range(1, max_rank + 1)]
    out += [dynkin_core.build_diagram("D~", r) for r in range(4, max_rank + 1)]
    out += [dynkin_core.build_diagram("E~", r) for r in (6, 7, 8) if r <= max_rank]
    return out


def claim_excess_results(max_rank: int = DEFAULT_MAX_RANK, bound: int = weightings.DEFAULT_BOUND) -> ClaimResult:
    reports = [weightings.verify_excess_results(d, bound) for d in _diagrams_up_to(max_rank)]
    failures = {r.diagram: [k for k, _ in r.failures()] for r in reports if not r.ok}
    return ClaimResult("excess-results", not failures, {"diagrams": len(reports), "failures": failures})


def claim_tables() -> ClaimResult:
    detail, ok = {}, True
    for kind in (conductrix.QUASI_ELLIPTIC, conductrix.ELLIPTIC):
        diff = conductrix.diff_against_golden(conductrix.generate_table(kind), conductrix.load_golden(kind))
        detail[kind] = {"matched": len(diff.matched), "missing": len(diff.missing), "extra": len(diff.extra)}
        ok = ok and diff.empty
    return ClaimResult("tables", ok, detail)


def claim_discriminants() -> ClaimResult:
    T = q444.build_tower()
    vals = {"Q": q444.discriminant(T.Q), "Q''": q444.discriminant(T.Qpp), "Q(2)": q444.discriminant(T.Q2)}
    ok = vals["Q"] == -16 and abs(vals["Q''"]) == 1 and vals["Q(2)"] == -16 * 2 ** 10
    return ClaimResult("discriminants", ok, vals)


def claim_maximality() -> ClaimResult:
    rep = q444.verify_maximality()
    snf = q444.dual_group_order_snf(q444.build_tower().Qp)
    ok = rep.ok and snf == rep.dual_group_order and [rep.parity_values[k] for k in ("u/2", "v/2", "(u+v)/2")] == [1, 1, 3]
    return ClaimResult("maximality", ok, {"parity": rep.parity_values, "dual_order": rep.dual_group_order,
                                          "dual_order_snf": snf})


def claim_sigma_relations() -> ClaimResult:
    nv = q444.build_tower().named
    detail = {}
    for i in (1, 2, 3):
        j, k = [a for a in (1, 2, 3) if a != i]
        M = q444.sigma(i)
        detail[f"sigma{i}"] = {
            "isometry": q444.is_isometry(M),
            "f_i": q444.matvec(M, nv.f[i]) == q444.vsub(q444.vscale(2, nv.e), nv.f[i]),
            "f_j": q444.matvec(M, nv.f[j]) == q444.vscale(-1, nv.f[k]),
            "f_k": q444.matvec(M, nv.f[k]) == q444.vscale(-1, nv.f[j]),
        }
    detail["coxeter"] = q444.coxeter_relations_hold()
    ok = all(all(v.values()) for v in detail.values())
    return ClaimResult("sigma-relations", ok, detail)


def claim_flip_table() -> ClaimResult:
    res = q444.flip_table_check((0, 1, 2))
    bad = [f"n={n} {col} v{i}" for (n, col, i), ok in res.items() if not ok]
    return ClaimResult("flip-table", not bad, {"entries": len(res), "failures": bad})


def claim_iterating_flips() -> ClaimResult:
    bad = q444.iterating_flips_check(200, 8, seed=0)
    return ClaimResult("iterating-flips", not bad, {"words": 200, "failures": [list(w) for w in bad]})


def claim_candidates() -> ClaimResult:
    got = q444.candidate_vectors()
    return ClaimResult("candidates", got == q444.candidate_set(), {"count": len(got)})


def claim_torsor() -> ClaimResult:
    rep = q444.t333_extension_torsor_check(100, seed=0)
    return ClaimResult("t333-torsor", rep.ok, {"samples": len(rep.samples),
                                               "realisable": sum(r.realisable for r in rep.samples)})


def claim_flip_graph(radius: int = DEFAULT_RADIUS) -> ClaimResult:
    S = fibration_graph.SurfaceModel
    counts = {r: len(fibration_graph.build_flip_graph(S("T6", r), radius).nodes) for r in (0, 1, 2)}
    coxeter = q444.affine_permutation_ball(radius)[-1]
    ok = counts[0] == 1 and counts[1] == 2 * radius + 1 and counts[2] == coxeter
    return ClaimResult("flip-graph", ok, {"nodes": counts, "coxeter_ball": coxeter, "radius": radius})


def claim_census(radius: int = DEFAULT_RADIUS) -> ClaimResult:
    S = fibration_graph.SurfaceModel
    c0 = fibration_graph.fibration_census(S("T6", 0), radius)
    mult = {r: sorted(set(fibration_graph.fibration_census(S("T6", r), radius).multiplicities())) for r in (1, 2)}
    t8 = fibration_graph.fibration_census(S("T8")).quasi_elliptic_count
    t7 = {f: fibration_graph.fibration_census(S("T7", second_fibre=f)).quasi_elliptic_count
          for f in ("double", "simple")}
    ok = (c0.quasi_elliptic_count == 3 and t8 == 1 and t7 == {"double": 2, "simple": 3}
          and all(set(m) <= {1, 2} for m in mult.values()))
    return ClaimResult("census", ok, {"T6/mw0": c0.quasi_elliptic_count, "T8": t8, "T7": t7,
                                      "interior_multiplicities": {str(k): v for k, v in mult.items()}})


CLAIMS: dict = {
    "excess-results": claim_excess_results,
    "tables": claim_tables,
    "discriminants": claim_discriminants,
    "maximality": claim_maximality,
    "sigma-relations": claim_sigma_relations,
    "flip-table": claim_flip_table,
    "iterating-flips": claim_iterating_flips,
    "candidates": claim_candidates,
    "t333-torsor": claim_torsor,
    "flip-graph": claim_flip_graph,
    "census": claim_census,
}


def cmd_verify(cfg: RunConfig, claims: tuple) -> int:
    names = list(claims) or list(CLAIMS)
    results = []
    for name in names:
        fn: Callable[[], ClaimResult] = CLAIMS[name]
        results.append(fn())
    if cfg.output == "json":
        _emit({"ok": all(r.ok for r in results),
               "claims": {r.name: {"ok": r.ok, "detail": r.detail} for r in results}})
    else:
        for r in results:
            click.echo(f"{'PASS' if r.ok else 'FAIL'}  {r.name:16} {json.dumps(r.detail, sort_keys=True)}")
    return EXIT_OK if all(r.ok for r in results) else EXIT_FAIL


@cli.command("verify")
@click.option("--claim", "claims", multiple=True, type=click.Choice(list(CLAIMS)),
              help="Run only the named claim (repeatable). Default: all.")
@FORMAT
def verify_cmd(claims, output):
    """Run the verification suite and report pass/fail per claim."""
    sys.exit(cmd_verify(RunConfig("verify", output=output), claims))


# -- lattice ------------------------------------------------------------------------


def _vec(x) -> list:
    return [str(c) for c in x]


def cmd_lattice(cfg: RunConfig) -> int:
    T = q444.build_tower()
    nv = T.named
    data = {
        "vertex_order": list(T.Q.labels),
        "hollow": list(q444.HOLLOW),
        "discriminants": {L.name: q444.discriminant(L) for L in (T.Q, T.Q2, T.Qp, T.Qpp)},
        "Qp_basis_squares": [str(T.Qp.pair(b, b)) for b in T.Qp.basis],
        "Qpp_basis": [_vec(b) for b in T.Qpp.basis],
        "C": _vec(nv.C),
        "f": {str(i): _vec(nv.f[i]) for i in (1, 2, 3)},
        "e": _vec(nv.e),
        "e7": {str(i): _vec(nv.e7[i]) for i in (1, 2, 3)},
    }
    if cfg.output == "json":
        _emit(data)
        return EXIT_OK
    click.echo("vertex order: " + " ".join(data["vertex_order"]))
    for name, val in data["discriminants"].items():
        click.echo(f"disc {name:9} = {val}")
    for key in ("C", "e"):
        click.echo(f"{key:3} = ({', '.join(data[key])})")
    for i in (1, 2, 3):
        click.echo(f"f_{i} = ({', '.join(data['f'][str(i)])})")
    for i in (1, 2, 3):
        click.echo(f"e_{i} = ({', '.join(data['e7'][str(i)])})")
    return EXIT_OK


@cli.command("lattice")
@FORMAT
def lattice_cmd(output):
    """Show the lattice tower, discriminants and the distinguished vectors."""
    sys.exit(cmd_lattice(RunConfig("lattice", output=output)))


# -- flips and census ----------------------------------------------------------------


@cli.command("flips")
@click.option("--mw-rank", type=click.IntRange(0, 2), required=True)
@click.option("--radius", type=int, default=DEFAULT_RADIUS, show_default=True)
@click.option("--format", "output", type=click.Choice(["text", "json", "dot"]), default="text", show_default=True)
def flips_cmd(mw_rank, radius, output):
    """Build the flip graph of configurations of curves on a T6 surface."""
    cfg = RunConfig("flips", radius=radius, output=output)
    g = fibration_graph.build_flip_graph(fibration_graph.SurfaceModel("T6", mw_rank), cfg.radius)
    if output == "json":
        _emit(g.to_json())
    elif output == "dot":
        click.echo(g.to_dot(), nl=False)
    else:
        click.echo(f"{g.surface.label} radius {radius}: {len(g.nodes)} nodes, {len(g.edges)} edges")
        for k, w in enumerate(g.words):
            nb = ", ".join(f"{arm}->{j}" for arm, j in g.neighbours(k))
            click.echo(f"  {k:4d} depth {g.depth[k]}  word {''.join(map(str, w)) or '-':10} {nb}")
    sys.exit(EXIT_OK)


@cli.command("census")
@click.option("--surface", type=click.Choice(list(fibration_graph.SURFACE_TYPES)), required=True)
@click.option("--mw-rank", type=click.IntRange(0, 2), default=None, help="Required for T6.")
@click.option("--second-fibre", type=click.Choice(["simple", "double"]), default=None, help="Required for T7.")
@click.option("--radius", type=int, default=DEFAULT_RADIUS, show_default=True)
@FORMAT
def census_cmd(surface, mw_rank, second_fibre, radius, output):
    """Count genus-1 fibrations on a surface model."""
    cfg = RunConfig("census", radius=radius, output=output)
    try:
        model = fibration_graph.SurfaceModel(surface, mw_rank, second_fibre)
    except fibration_graph.SurfaceError as exc:
        raise click.UsageError(str(exc)) from exc
    c = fibration_graph.fibration_census(model, cfg.radius)
    if output == "json":
        _emit(c.to_json())
        sys.exit(EXIT_OK)
    click.echo(f"{model.label}: elliptic {c.elliptic_count}, quasi-elliptic {c.quasi_elliptic_count}")
    if c.flip_graph is not None:
        mult = c.multiplicities()
        click.echo(f"  flip graph radius {radius}: {len(c.flip_graph.nodes)} configurations")
        click.echo(f"  interior classes {len(mult)}, membership multiplicities {sorted(set(mult))}")
    sys.exit(EXIT_OK)


def main(argv=None) -> None:
    cli.main(args=argv, prog_name="fibrelattice")


if __name__ == "__main__":
    main()
