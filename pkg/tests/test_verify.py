"""Smoke tests for the cross-module verification suite."""

import time

from hsgeo import verify as vf


def test_all_checks_pass_within_budget():
    t0 = time.perf_counter()
    results = vf.run_all()
    elapsed = time.perf_counter() - t0
    failed = [r.name for r in results if not r.passed]
    assert failed == []
    assert vf.all_passed(results)
    assert len(results) >= 20
    assert elapsed < 60.0


def test_runs_are_deterministic():
    first = vf.run_all()
    second = vf.run_all()
    assert [r.value for r in first] == [r.value for r in second]
    assert [r.name for r in first] == [r.name for r in second]


def test_table_renders_every_row():
    results = vf.run_all()
    table = vf.render_table(results)
    lines = table.splitlines()
    assert len(lines) == len(results) + 2
    for row in lines[1:-1]:
        assert row.startswith("[OK]") or row.startswith("[FAIL]")
    assert lines[-1].startswith("[OK] all")


def test_failed_row_flips_the_footer():
    bad = vf.CheckResult("made up", 1.0, 1e-6, False, False, 0.0)
    table = vf.render_table([bad])
    assert "[FAIL] made up" in table
    assert table.splitlines()[-1].startswith("[FAIL] 1 of 1")
    assert not vf.all_passed([bad])


def test_order_style_rows_compare_upward():
    results = vf.run_all()
    orders = [r for r in results if r.larger_is_better]
    assert len(orders) >= 3
    for r in orders:
        assert r.value >= r.bound
