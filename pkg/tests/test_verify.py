from __future__ import annotations

import json
import math

import pytest

from fracsobolev.errors import UsageError
from fracsobolev.grid import GridSpec
from fracsobolev.verify import (
    QUADRATURE_SUITES,
    ROUNDOFF_FLOOR,
    SUITES,
    TRACEABILITY,
    SuiteConfig,
    VerificationReport,
    _guarded,
    quadrature_tolerance,
    report_document,
    run_all,
)


@pytest.fixture(scope="module")
def default_reports():
    return run_all(SuiteConfig())


def test_default_config_passes(default_reports):
    failed = [(r.name, c.desc, c.rel_err, c.tol) for r in default_reports for c in r.cases if not c.passed]
    assert failed == []
    assert [r.name for r in default_reports] == list(SUITES)


def test_wall_time(default_reports):
    assert sum(r.seconds for r in default_reports) < 60.0


def test_deterministic(default_reports):
    again = run_all(SuiteConfig())
    for a, b in zip(default_reports, again):
        assert [(c.desc, c.abs_err, c.rel_err) for c in a.cases] == [(c.desc, c.abs_err, c.rel_err) for c in b.cases]


def test_parallel_matches_sequential():
    names = ["duality", "semigroup", "chi", "roundtrip"]
    seq = run_all(SuiteConfig(), suites=names)
    par = run_all(SuiteConfig(), suites=names, max_workers=4)
    for a, b in zip(seq, par):
        assert a.name == b.name
        assert [(c.abs_err, c.rel_err) for c in a.cases] == [(c.abs_err, c.rel_err) for c in b.cases]


def test_override_makes_only_that_suite_fail():
    reports = run_all(SuiteConfig(tolerances={"duality": 1e-16}))
    status = {r.name: r.passed for r in reports}
    assert status.pop("duality") is False
    assert all(status.values())
    tols = {c.tol for r in reports if r.name == "duality" for c in r.cases}
    assert tols == {1e-16}


def test_coarse_grid_relaxed():
    config = SuiteConfig(grid=GridSpec(16.0, 512))
    reports = {r.name: r for r in run_all(config)}
    assert all(r.passed for r in reports.values())
    # quadrature suites report larger errors than at the default resolution
    assert reports["cross_check"].max_rel_err > 5e-3
    assert all(c.tol >= 1e-2 for c in reports["cross_check"].cases)


def test_quadrature_tolerance_policy():
    assert quadrature_tolerance(GridSpec(), 1e-3) == 1e-3
    assert quadrature_tolerance(GridSpec(16.0, 8192), 5e-3) == 5e-3
    assert quadrature_tolerance(GridSpec(16.0, 2048), 1e-3) == pytest.approx(1e-2)
    assert quadrature_tolerance(GridSpec(16.0, 1024), 5e-3) == pytest.approx(4e-2)
    assert quadrature_tolerance(GridSpec(16.0, 512), 2e-2) == pytest.approx(0.32)


def test_convergence_trend():
    """Doubling N from 2048 to 4096 does not grow any quadrature suite error by over 10%."""
    coarse = {r.name: r for r in run_all(SuiteConfig(grid=GridSpec(16.0, 2048)), suites=QUADRATURE_SUITES)}
    fine = {r.name: r for r in run_all(SuiteConfig(grid=GridSpec(16.0, 4096)), suites=QUADRATURE_SUITES)}
    for name in QUADRATURE_SUITES:
        a, b = coarse[name].max_rel_err, fine[name].max_rel_err
        assert b <= max(1.1 * a, ROUNDOFF_FLOOR), (name, a, b)


def test_failure_is_data(monkeypatch):
    def boom(config):
        raise RuntimeError("kaput")

    monkeypatch.setitem(SUITES, "chi", boom)
    report = _guarded("chi", SuiteConfig())
    assert isinstance(report, VerificationReport)
    assert not report.passed
    assert "kaput" in report.cases[0].desc
    assert math.isnan(report.cases[0].rel_err)


def test_unknown_names():
    with pytest.raises(UsageError):
        run_all(SuiteConfig(), suites=["nosuch"])
    with pytest.raises(UsageError):
        run_all(SuiteConfig(tolerances={"nosuch": 1.0}))
    with pytest.raises(UsageError):
        SuiteConfig(tolerances={"duality": 0.0})


def test_report_document(default_reports):
    config = SuiteConfig()
    doc = json.loads(json.dumps(report_document(config, default_reports)))
    assert doc["version"] == "1"
    assert doc["config"]["grid"] == {"half_width": 16.0, "points": 4096}
    assert doc["config"]["window_margin"] == 4.0
    assert doc["metadata"]["pass"] is True
    assert set(doc["metadata"]["traceability"]) == set(SUITES)


def test_traceability_covers_every_suite():
    assert set(TRACEABILITY) == set(SUITES)
    assert all(TRACEABILITY[name] for name in SUITES)


def test_detector_case_is_lower_bound(default_reports):
    weak = next(r for r in default_reports if r.name == "weak_derivative")
    detector = [c for c in weak.cases if c.bound == "lower"]
    assert len(detector) == 1
    assert detector[0].rel_err >= 1e-2 and detector[0].passed
    assert detector[0].as_dict()["bound"] == "lower"


def test_window_margin_configurable():
    narrow = run_all(SuiteConfig(window_margin=1.0), suites=["semigroup"])[0]
    assert narrow.passed
