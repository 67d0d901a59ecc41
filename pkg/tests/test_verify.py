import json

import pytest
from mpmath import mp, mpf

from rrsextic.errors import VerificationError
from rrsextic.numkernel import PrecCtx
from rrsextic.verify import (
    Status,
    a_3_20_radical,
    conjecture_suite,
    identity_point,
    identity_suite,
    j_6_5_radical,
    y_table,
)

IDENTITY_IDS = {"rrcf_quotient", "period_ratio", "a_closed_form", "a_j_relation", "j_rrcf",
                "j_modulus", "degree5_modular", "duplication", "derivative", "beta_modulus",
                "j_beta"}


def test_identity_suite_single_point(ctx):
    report = identity_suite([1], ctx=ctx)
    assert report.ok
    assert {e.id for e in report.entries} == IDENTITY_IDS


def test_identity_suite_grid_ordered(ctx):
    report = identity_suite([4, 2, mpf(1) / 5, 1], ctx=ctx)
    assert report.ok
    rs = [e.r for e in report.entries]
    assert rs == sorted(rs)


def test_identity_suite_processes_match_serial(ctx):
    serial = identity_suite([1, 2, 3], ctx=ctx)
    fanned = identity_suite([1, 2, 3], ctx=ctx, jobs=3)
    assert serial.to_json() == fanned.to_json()


def test_perturbation_is_detected(ctx):
    with pytest.raises(VerificationError) as info:
        identity_suite([2], ctx=ctx, perturb={"A": mpf(10) ** -6})
    failed = {e.id for e in info.value.report.failures}
    assert "a_j_relation" in failed
    assert {o[0] for o in info.value.offenders} == failed


def test_perturbation_non_strict_returns_report(ctx):
    report = identity_suite([2], ctx=ctx, perturb={"A": mpf(10) ** -6}, strict=False)
    assert not report.ok
    assert report.by_id("a_j_relation")[0].status is Status.FAIL


def test_report_json_schema(ctx):
    data = json.loads(identity_suite([1], ctx=ctx).to_json())
    assert set(data) == {"suite", "digits", "entries"}
    assert data["suite"] == "identities" and data["digits"] == 60
    for entry in data["entries"]:
        assert set(entry) == {"id", "r", "residual", "status"}
        assert isinstance(entry["residual"], str)


def test_identity_point_tolerance_tracks_digits():
    c = PrecCtx(30)
    for entry in identity_point(2, c):
        assert entry.status is Status.PASS


def test_conjectures_are_report_only(ctx):
    report = conjecture_suite([1, 2, 3], ctx=ctx)
    assert report.ok
    for ident in ("n_relation_q2", "n_relation_q3", "x_relation_4r"):
        entries = report.by_id(ident)
        assert len(entries) == 3
        assert all(e.status is Status.REPORT_ONLY for e in entries)
    products = {e.r: e.status for e in report.by_id("product_125_64")}
    assert products[1] is Status.PASS
    assert products[2] is Status.REPORT_ONLY and products[3] is Status.REPORT_ONLY


def test_closed_forms_asserted(ctx):
    report = conjecture_suite([1], ctx=ctx)
    assert len(report.by_id("Y")) == len(y_table()) == 10
    for ident in ("Y", "ratio_68_17", "A_3/20", "j_6/5"):
        assert all(e.status is Status.PASS for e in report.by_id(ident))
    assert report.by_id("ratio_68_17_minus")[0].status is Status.REPORT_ONLY


def test_radicals_need_extra_precision():
    # both lose many leading digits to cancellation; evaluated at +30 digits in the suite
    with mp.workdps(100):
        assert a_3_20_radical() > 0
        assert j_6_5_radical() > 1728
