from __future__ import annotations

from typing import List, Optional

import click

from ..schemas import Report
from ..services.corpus import golden_suite
from ..workers.pipeline import goldens_failed, run_report
from .deps import (
    EXIT_GOLDEN,
    Settings,
    assignment_options,
    build_report,
    collect_assignment,
    emit,
    fail,
    handle_errors,
    load_input,
)


def _report_text(report: Report) -> List[str]:
    r = report.result
    lines = []
    if r["betti"] is not None:
        lines.append("betti: " + " ".join(str(b) for b in r["betti"]))
        lines.append(f"chi = {r['chi']}")
    if r["table_missing"]:
        lines.append("table gaps: " + ", ".join(r["table_missing"]))
    if r["table_constraints"]:
        lines.append("Adem relations need: " + ", ".join(c + " = 0" for c in r["table_constraints"]))
    for v in r["wu"]:
        if v["value"] != "0":
            lines.append(f"v_{v['index']} = {v['value']}")
    for w in r["stiefel_whitney"]:
        if w["value"] != "0":
            lines.append(f"w_{w['index']} = {w['value']}")
    for v in r["verdicts"]:
        conditions = f" if {' and '.join(c + ' = 0' for c in v['conditions'])}" if v["conditions"] else ""
        lines.append(f"k={v['k']}: {v['status']}{conditions}")
    scan = r["max_orientability"]
    if scan:
        lines.append(f"max orientability: {scan['k']} (stopped by {scan['stopped_by']})")
    if r["signature"]:
        lines.append(f"signature = {r['signature']['signature']}")
    for lim in r["limitations"]:
        lines.append(f"limitation [{lim['stage']}]: {lim['message']}")
    for g in r["goldens"]:
        lines.append(f"golden {g['fixture']}: {'ok' if g['ok'] else 'MISMATCH'}")
    return lines


@click.command("report")
@click.argument("source")
@click.option("--golden", "golden_dir", type=click.Path(file_okay=False), default=None,
              help="Compare against the golden fixtures in this directory.")
@assignment_options
@click.pass_obj
@handle_errors
def report_command(
    settings: Settings,
    source: str,
    golden_dir: Optional[str],
    set_,
    instantiate: Optional[str],
    bits,
):
    """Everything at once: ranks, table, Wu/SW classes, verdicts, chi, signature."""
    loaded = load_input(source, collect_assignment(set_, bits), instantiate)
    goldens = golden_suite(golden_dir, entry=loaded.base.name) if golden_dir else []
    full = run_report(loaded.presentation, settings.threads, goldens, golden_base=loaded.base)
    emit(settings, build_report("report", loaded, full), _report_text)
    failed = goldens_failed(full)
    if failed:
        fail(f"{len(failed)} golden mismatch(es): {', '.join(failed)}", EXIT_GOLDEN)
