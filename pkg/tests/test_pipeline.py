import threading
import time

from sqorient.services.corpus import builtin, golden_suite
from sqorient.services.steenrod import complete_table
from sqorient.workers import pipeline
from sqorient.workers.pipeline import goldens_failed, run_report


def test_cp2_report(cp2):
    report = run_report(cp2)
    assert report.betti == [1, 0, 1, 0, 1]
    assert report.chi == 3
    assert [v.value for v in report.wu] == ["1", "0", "x"]
    assert [w.value for w in report.stiefel_whitney] == ["1", "0", "x", "0", "x^2"]
    assert [v.status for v in report.verdicts] == ["yes", "no"]
    assert (report.max_orientability.k, report.max_orientability.stopped_by) == (1, "no")
    assert report.parity.consistent
    assert report.signature is None
    assert report.limitations == []
    assert report.table_constraints == []


def test_integral_report_has_a_signature(eiii):
    report = run_report(eiii, threads=2)
    assert report.signature.signature == 3
    assert report.signature.degree == 16
    assert len(report.verdicts) == 5
    assert [v.status for v in report.verdicts][:3] == ["yes", "conditional", "conditional"]


def test_thread_count_does_not_change_the_report(eiii):
    goldens = golden_suite(entry="EIII")
    one = run_report(eiii, threads=1, goldens=goldens)
    four = run_report(eiii, threads=4, goldens=goldens)
    assert one.model_dump_json() == four.model_dump_json()
    assert goldens_failed(one) == []


def test_evi_report_records_the_table_gap(evi):
    report = run_report(evi, threads=3)
    assert report.table_missing == ["Sq^16 y20"]
    assert report.table_constraints
    assert report.table_constraints == [c.render() for c in complete_table(evi).constraints().generators]
    assert [v.status for v in report.verdicts][:4] == ["yes", "yes", "yes", "conditional"]
    assert all(lim.entry == "Sq^16 y20" for lim in report.limitations if lim.entry)
    assert (report.max_orientability.k, report.max_orientability.stopped_by) == (3, "conditional")
    assert report.parity.consistent


def test_goldens_run_against_the_unassigned_presentation(eiii):
    base = builtin("EIII")
    assigned = base.specialise({"a": 1, "b": 1, "c": 1, "d": 0})
    report = run_report(assigned, goldens=golden_suite(entry="EIII"), golden_base=base)
    assert report.goldens
    assert goldens_failed(report) == []
    assert [v.status for v in report.verdicts][:3] == ["yes", "yes", "no"]


def test_table_completion_counts_against_the_thread_limit(cp2, monkeypatch):
    lock = threading.Lock()
    active = [0]
    peak = [0]

    def tracked(stage):
        def run(*args):
            with lock:
                active[0] += 1
                peak[0] = max(peak[0], active[0])
            time.sleep(0.05)
            try:
                return stage(*args)
            finally:
                with lock:
                    active[0] -= 1

        return run

    monkeypatch.setattr(pipeline, "betti_stage", tracked(pipeline.betti_stage))
    monkeypatch.setattr(pipeline, "table_stage", tracked(pipeline.table_stage))
    report = run_report(cp2, threads=1)
    assert peak[0] == 1
    assert report.betti == [1, 0, 1, 0, 1]
