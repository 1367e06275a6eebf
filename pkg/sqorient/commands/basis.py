from __future__ import annotations

from typing import List, Optional

import click

from ..schemas import BasisRead, DegreeRead, MonomialsRead, Report
from ..services.basis import enumerate_monomials, graded_ring
from ..services.errors import InvalidInput
from ..services.expr import render_coefficient
from ..services.presentation import Presentation
from .deps import Settings, build_report, emit, handle_errors, load_input


def degree_read(p: Presentation, d: int, with_coordinates: bool) -> DegreeRead:
    basis = graded_ring(p).degree_basis(d)
    nonzero = sum(1 for m in basis.monomials if any(basis.coordinates(m)))
    coordinates = None
    if with_coordinates:
        coordinates = {
            p.gens.render_monomial(m): [render_coefficient(x) for x in basis.coordinates(m)]
            for m in basis.monomials
        }
    return DegreeRead(
        degree=d,
        rank=basis.rank,
        monomial_count=len(basis.monomials),
        relation_rank=basis.relation_rank,
        basis=[str(b) for b in basis.basis],
        torsion=list(basis.torsion),
        nonzero=nonzero,
        coordinates=coordinates,
    )


def _basis_text(report: Report) -> List[str]:
    result = report.result
    lines = []
    if result.get("betti") is not None:
        lines.append("ranks: " + " ".join(str(b) for b in result["betti"]))
    for d in result["degrees"]:
        torsion = f", torsion {d['torsion']}" if d["torsion"] else ""
        lines.append(
            f"degree {d['degree']}: rank {d['rank']}{torsion}, "
            f"{d['monomial_count']} monomials, {d['nonzero']} nonzero"
        )
        if d["basis"]:
            lines.append("  basis: " + ", ".join(d["basis"]))
        for mono, coords in (d.get("coordinates") or {}).items():
            lines.append(f"  {mono} -> ({', '.join(coords)})")
    return lines


@click.command("basis")
@click.argument("source")
@click.option("--degree", "-d", type=int, default=None, help="Single degree to list.")
@click.option("--all", "all_degrees", is_flag=True, help="Every degree 0..dim.")
@click.option("--coordinates", is_flag=True, help="Include the monomial -> coordinates map.")
@click.pass_obj
@handle_errors
def basis_command(settings: Settings, source: str, degree: Optional[int], all_degrees: bool, coordinates: bool):
    """Additive basis of SOURCE (manifest path or built-in name)."""
    if (degree is None) == (not all_degrees):
        raise InvalidInput("give exactly one of --degree or --all")
    loaded = load_input(source)
    p = loaded.presentation
    degrees = range(p.dim + 1) if all_degrees else [degree]
    reads = [degree_read(p, d, coordinates) for d in degrees]
    betti = [r.rank for r in reads] if all_degrees else None
    payload = BasisRead(degrees=reads, betti=betti)
    emit(settings, build_report("basis", loaded, payload), _basis_text)


def _monomials_text(report: Report) -> List[str]:
    result = report.result
    return [f"degree {result['degree']}: {result['count']} monomials", *result["monomials"]]


@click.command("monomials")
@click.argument("source")
@click.option("--degree", "-d", type=int, required=True)
@click.pass_obj
@handle_errors
def monomials_command(settings: Settings, source: str, degree: int):
    """Monomials of the free ring in one degree, grevlex ascending."""
    loaded = load_input(source)
    p = loaded.presentation
    monos = enumerate_monomials(p, degree)
    payload = MonomialsRead(
        degree=degree, count=len(monos), monomials=[p.gens.render_monomial(m) for m in monos]
    )
    emit(settings, build_report("monomials", loaded, payload), _monomials_text)
