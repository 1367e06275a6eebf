from __future__ import annotations

from typing import List, Optional

import click

from ..schemas import Report, SquareRead, TableEntryRead, TableRead
from ..services.basis import mod2_ring
from ..services.errors import InvalidInput
from ..services.expr import render_coefficient
from ..services.steenrod import adem_residues, complete_table, sq
from .deps import Settings, assignment_options, build_report, collect_assignment, emit, handle_errors, load_input


def _sq_text(report: Report) -> List[str]:
    r = report.result
    return [
        f"Sq^{r['n']}({r['class']}) = {r['value']}",
        f"coordinates in degree {r['degree']}: ({', '.join(r['coordinates'])})",
    ]


@click.command("sq")
@click.argument("source")
@click.option("--class", "class_text", required=True, help="Homogeneous class, e.g. 'y2^12*y12*y20'.")
@click.option("--n", "n", type=int, required=True, help="Square index.")
@click.option("--degree", type=int, default=None, help="Degree of the class when it is zero.")
@assignment_options
@click.pass_obj
@handle_errors
def sq_command(
    settings: Settings,
    source: str,
    class_text: str,
    n: int,
    degree: Optional[int],
    set_,
    instantiate: Optional[str],
    bits,
):
    """Sq^n of a class, reduced to the additive basis."""
    loaded = load_input(source, collect_assignment(set_, bits), instantiate)
    p = loaded.presentation
    c = p.parse(class_text)
    d = c.degree()
    if d is None:
        if degree is None:
            raise InvalidInput("the zero class needs --degree")
        d = degree
    coords = sq(c, n, p, degree=d)
    value = mod2_ring(p).coordinates_to_class(d + n, coords)
    payload = SquareRead(
        cls=str(c),
        n=n,
        degree=d + n,
        value=str(value),
        coordinates=[render_coefficient(x) for x in coords],
    )
    emit(settings, build_report("sq", loaded, payload), _sq_text)


def _table_text(report: Report) -> List[str]:
    r = report.result
    lines = []
    for e in r["entries"]:
        shown = e["value"] if e["value"] is not None else f"missing (needs {e['missing']})"
        lines.append(f"Sq^{e['index']} {e['generator']} = {shown}  [{e['provenance']}]")
    if r["missing"]:
        lines.append("missing: " + ", ".join(r["missing"]))
    for residue in r["adem_residues"]:
        lines.append(f"Adem relation fails on {residue}")
    for c in r["constraints"]:
        lines.append(f"  needs {c} = 0")
    return lines


@click.command("table")
@click.argument("source")
@click.option("--generator", "-g", default=None, help="Only this generator.")
@click.option("--strict", is_flag=True, help="Fail on the first missing entry.")
@click.option("--adem", "check_adem", is_flag=True, help="Check the Adem relations on every generator.")
@assignment_options
@click.pass_obj
@handle_errors
def table_command(
    settings: Settings,
    source: str,
    generator: Optional[str],
    strict: bool,
    check_adem: bool,
    set_,
    instantiate: Optional[str],
    bits,
):
    """Completed Steenrod table on the generators, with provenance."""
    loaded = load_input(source, collect_assignment(set_, bits), instantiate)
    p = loaded.presentation
    if generator is not None:
        p.gens.index(generator)
    table = complete_table(p, strict=strict)
    entries = [
        TableEntryRead(
            generator=e.generator,
            index=e.index,
            value=str(e.value) if e.value is not None else None,
            provenance=e.provenance,
            missing=e.missing,
        )
        for e in table.entries()
        if generator is None or e.generator == generator
    ]
    payload = TableRead(entries=entries, missing=table.missing())
    if check_adem:
        payload.adem_residues = [r.render() for r in adem_residues(table)]
        payload.constraints = [c.render() for c in table.constraints().generators]
    emit(settings, build_report("table", loaded, payload), _table_text)
