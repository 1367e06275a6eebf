from __future__ import annotations

import asyncio
from dataclasses import dataclass, field
from typing import Any, Callable, List, Optional, Sequence

from ..log import get_logger
from ..schemas import (
    ClassRead,
    FullReport,
    GoldenRead,
    Limitation,
    SignatureRead,
    class_read,
    golden_read,
    parity_read,
    scan_read,
    verdict_read,
)
from ..services.basis import betti_profile
from ..services.corpus import GoldenFixture, check_fixture
from ..services.errors import ComputationLimit, TableIncomplete
from ..services.orientability import (
    euler_characteristic,
    intersection_form,
    levels,
    max_orientability,
    orientability_verdict,
    parity_theorem_check,
    signature_of_form,
    stiefel_whitney,
    wu_class,
)
from ..services.poly import Mode
from ..services.presentation import Presentation
from ..services.steenrod import SquareTable, complete_table

logger = get_logger(__name__)


@dataclass
class StageResult:
    value: Any = None
    limitations: List[Limitation] = field(default_factory=list)


# ---------- stages (plain functions, run in worker threads) ----------

def table_stage(p: Presentation) -> StageResult:
    """
    The completed table, with its Adem constraints worked out before any
    verdict needs them.
    """
    table = complete_table(p)
    constraints = table.constraints()
    return StageResult((table, [c.render() for c in constraints.generators]))


def betti_stage(p: Presentation) -> StageResult:
    try:
        betti = list(betti_profile(p))
    except ComputationLimit as exc:
        return StageResult(None, [Limitation(stage="betti", message=str(exc))])
    return StageResult((betti, euler_characteristic(p)))


def characteristic_classes_stage(p: Presentation, table: SquareTable) -> StageResult:
    """
    Wu classes up to n/2, then w = Sq(v) as far as the Wu classes reach.
    A table gap ends the stage and is reported, not raised.
    """
    out = StageResult(([], []))
    wu: List[ClassRead] = out.value[0]
    complete = True
    for i in range(p.dim // 2 + 1):
        try:
            v = wu_class(p, table, i)
        except TableIncomplete as exc:
            out.limitations.append(
                Limitation(stage="wu", message=f"v_{i} needs {exc.entry}", entry=exc.entry, level=i)
            )
            complete = False
            break
        wu.append(class_read(v.index, v.cls, v.note))

    upto = p.dim if complete else len(wu) - 1
    try:
        classes = stiefel_whitney(p, table, upto=upto)
    except TableIncomplete as exc:
        out.limitations.append(Limitation(stage="stiefel-whitney", message=str(exc), entry=exc.entry))
        return out
    out.value[1].extend(class_read(j, w) for j, w in enumerate(classes))
    return out


def verdict_stage(p: Presentation, table: SquareTable) -> StageResult:
    """
    Verdicts for k = 1, 2, ... up to the last level with something to
    check, stopping at the first level whose squares leave the table.
    """
    out = StageResult([])
    for k in range(1, levels(p) + 1):
        try:
            v = orientability_verdict(p, table, k)
        except TableIncomplete as exc:
            out.limitations.append(
                Limitation(stage="verdicts", message=f"k={k} needs {exc.entry}", entry=exc.entry, level=k)
            )
            break
        out.value.append(verdict_read(v))
    scan = max_orientability(p, table)
    return StageResult((out.value, scan), out.limitations)


def signature_stage(p: Presentation) -> StageResult:
    if p.mode is not Mode.INT or p.dim % 4:
        return StageResult(None)
    try:
        form = intersection_form(p)
    except ComputationLimit as exc:
        return StageResult(None, [Limitation(stage="signature", message=str(exc))])
    read = SignatureRead(
        degree=form.degree,
        matrix=[list(row) for row in form.matrix],
        signature=signature_of_form(form.matrix),
    )
    return StageResult(read)


def golden_stage(fixture: GoldenFixture, p: Presentation) -> StageResult:
    try:
        return StageResult(golden_read(check_fixture(fixture, p)))
    except ComputationLimit as exc:
        return StageResult(
            GoldenRead(fixture=fixture.id, ok=False, expected=fixture.expected, actual=str(exc), source=fixture.source)
        )


# ---------- fan-out ----------

async def _run(semaphore: asyncio.Semaphore, fn: Callable[..., StageResult], *args) -> StageResult:
    async with semaphore:
        return await asyncio.to_thread(fn, *args)


async def run_report_async(
    p: Presentation,
    threads: int = 1,
    goldens: Sequence[GoldenFixture] = (),
    golden_base: Optional[Presentation] = None,
) -> FullReport:
    """
    Independent stages run in worker threads, at most `threads` at once.
    Results are assembled in a fixed order, so the report does not
    depend on scheduling. Goldens are checked against `golden_base`
    (the presentation before any parameter assignment) when given.
    """
    base = golden_base if golden_base is not None else p
    semaphore = asyncio.Semaphore(max(1, threads))
    betti, completed = await asyncio.gather(
        _run(semaphore, betti_stage, p),
        _run(semaphore, table_stage, p),
    )
    table, constraints = completed.value
    classes, verdicts, sig, *checks = await asyncio.gather(
        _run(semaphore, characteristic_classes_stage, p, table),
        _run(semaphore, verdict_stage, p, table),
        _run(semaphore, signature_stage, p),
        *(_run(semaphore, golden_stage, f, base) for f in goldens),
    )

    report = FullReport(table_missing=table.missing(), table_constraints=constraints)
    if betti.value is not None:
        report.betti, report.chi = betti.value
    report.wu, report.stiefel_whitney = classes.value
    verdict_list, scan = verdicts.value
    report.verdicts = verdict_list
    report.max_orientability = scan_read(scan)
    report.parity = parity_read(parity_theorem_check(p, table, scan))
    report.signature = sig.value
    report.goldens = [c.value for c in checks]
    for stage in (betti, classes, verdicts, sig):
        report.limitations.extend(stage.limitations)
    logger.info(
        "%s: report with %d verdicts, %d limitations, %d goldens",
        p.name, len(report.verdicts), len(report.limitations), len(report.goldens),
    )
    return report


def run_report(
    p: Presentation,
    threads: int = 1,
    goldens: Sequence[GoldenFixture] = (),
    golden_base: Optional[Presentation] = None,
) -> FullReport:
    return asyncio.run(run_report_async(p, threads, goldens, golden_base))


def goldens_failed(report: FullReport) -> List[str]:
    return [g.fixture for g in report.goldens if not g.ok]
