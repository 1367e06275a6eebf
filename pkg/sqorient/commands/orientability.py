from __future__ import annotations

from typing import List, Optional

import click

from ..schemas import (
    EulerRead,
    Report,
    SignatureRead,
    class_read,
    parity_read,
    verdict_read,
)
from ..services.basis import betti_profile, graded_ring
from ..services.orientability import (
    METHODS,
    euler_characteristic,
    intersection_form,
    orientability_verdict,
    parity_theorem_check,
    signature_of_form,
    stiefel_whitney,
    wu_class,
    wu_classes,
)
from ..services.poly import Mode
from ..services.presentation import Presentation
from .deps import Settings, assignment_options, build_report, collect_assignment, emit, handle_errors, load_input


def _classes_text(symbol: str):
    def render(report: Report) -> List[str]:
        lines = []
        for c in report.result:
            note = f"  ({c['note']})" if c.get("note") else ""
            lines.append(f"{symbol}_{c['index']} = {c['value']}{note}")
        return lines

    return render


@click.command("wu")
@click.argument("source")
@click.option("--index", "-i", type=int, default=None, help="Single Wu class v_i.")
@assignment_options
@click.pass_obj
@handle_errors
def wu_command(settings: Settings, source: str, index: Optional[int], set_, instantiate: Optional[str], bits):
    """Wu classes v_0 .. v_(n/2), or a single v_i."""
    loaded = load_input(source, collect_assignment(set_, bits), instantiate)
    p = loaded.presentation
    if index is not None:
        classes = [wu_class(p, None, index)]
    else:
        classes = wu_classes(p, upto=p.dim // 2)
    payload = [class_read(v.index, v.cls, v.note) for v in classes]
    emit(settings, build_report("wu", loaded, payload), _classes_text("v"))


@click.command("sw")
@click.argument("source")
@click.option("--upto", type=int, default=None, help="Stop at w_j.")
@assignment_options
@click.pass_obj
@handle_errors
def sw_command(settings: Settings, source: str, upto: Optional[int], set_, instantiate: Optional[str], bits):
    """Stiefel-Whitney classes w = Sq(v)."""
    loaded = load_input(source, collect_assignment(set_, bits), instantiate)
    classes = stiefel_whitney(loaded.presentation, upto=upto)
    payload = [class_read(j, w) for j, w in enumerate(classes)]
    emit(settings, build_report("sw", loaded, payload), _classes_text("w"))


def _verdict_text(report: Report) -> List[str]:
    v = report.result
    lines = [f"k={v['k']}: {v['status']} (by {v['method']})"]
    for c in v["conditions"]:
        lines.append(f"  needs {c} = 0")
    if v["witness"]:
        w = v["witness"]
        lines.append(f"  witness: Sq^{w['index']} on {w['class']} in degree {w['degree']}")
    for a in v["annotations"]:
        lines.append(f"  note: {a}")
    for c in v["assumptions"]:
        lines.append(f"  assuming {c} = 0")
    return lines


@click.command("orient")
@click.argument("source")
@click.option("--k", "k", type=int, required=True, help="Orientability level.")
@click.option("--method", type=click.Choice(METHODS), default="squares", show_default=True)
@assignment_options
@click.pass_obj
@handle_errors
def orient_command(settings: Settings, source: str, k: int, method: str, set_, instantiate: Optional[str], bits):
    """Is SOURCE k-orientable?"""
    loaded = load_input(source, collect_assignment(set_, bits), instantiate)
    verdict = orientability_verdict(loaded.presentation, None, k, method)
    emit(settings, build_report("orient", loaded, verdict_read(verdict)), _verdict_text)


def ranks(p: Presentation) -> List[int]:
    if p.mode is Mode.INT:
        ring = graded_ring(p)
        return [ring.degree_basis(d).rank for d in range(p.dim + 1)]
    return list(betti_profile(p))


@click.command("euler")
@click.argument("source")
@click.pass_obj
@handle_errors
def euler_command(settings: Settings, source: str):
    """Euler characteristic from the ranks."""
    loaded = load_input(source)
    p = loaded.presentation
    payload = EulerRead(chi=euler_characteristic(p), ranks=ranks(p))
    emit(settings, build_report("euler", loaded, payload), lambda r: [f"chi = {r.result['chi']}"])


def _signature_text(report: Report) -> List[str]:
    r = report.result
    rows = ["  [" + ", ".join(str(x) for x in row) + "]" for row in r["matrix"]]
    return [f"intersection form on degree {r['degree']}:", *rows, f"signature = {r['signature']}"]


@click.command("signature")
@click.argument("source")
@click.pass_obj
@handle_errors
def signature_command(settings: Settings, source: str):
    """Signature of the middle-degree intersection form (integral input, dim = 0 mod 4)."""
    loaded = load_input(source)
    form = intersection_form(loaded.presentation)
    payload = SignatureRead(
        degree=form.degree,
        matrix=[list(row) for row in form.matrix],
        signature=signature_of_form(form.matrix),
    )
    emit(settings, build_report("signature", loaded, payload), _signature_text)


def _parity_text(report: Report) -> List[str]:
    r = report.result
    lines = [f"chi = {r['chi']}, dimension {r['dimension']}: {'consistent' if r['consistent'] else 'INCONSISTENT'}"]
    for lv in r["levels"]:
        lines.append(
            f"  k={lv['k']}: chi even {lv['chi_even']}, 2^{lv['k'] + 1} | n {lv['dim_divisible']}"
        )
    if r["limitation"]:
        lines.append(f"  scan stopped at missing {r['limitation']}")
    return lines


@click.command("check")
@click.argument("source")
@assignment_options
@click.pass_obj
@handle_errors
def check_command(settings: Settings, source: str, set_, instantiate: Optional[str], bits):
    """Parity check: k-orientable with odd chi forces 2^(k+1) | n."""
    loaded = load_input(source, collect_assignment(set_, bits), instantiate)
    check = parity_theorem_check(loaded.presentation)
    emit(settings, build_report("check", loaded, parity_read(check)), _parity_text)
