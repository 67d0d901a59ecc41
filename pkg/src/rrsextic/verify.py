"""Residual suites: identities that must hold, and conjectures that are only reported."""

from __future__ import annotations

import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from enum import Enum

import mpmath
from mpmath import mp, mpf

from .elliptic import ModulusPair, beta_modulus, beta_of_k, period_ratio_residual, k_pair, modular5_residual
from .errors import VerificationError
from .jinv import Route, j_value
from .numkernel import PrecCtx, resolve, to_mpf, to_str
from .qseries import Nome, f_minus
from .rrcf import _cf, a_quotient, derivative_residual, n_value


class Status(str, Enum):
    PASS = "pass"
    FAIL = "fail"
    REPORT_ONLY = "report-only"


@dataclass(frozen=True)
class Entry:
    id: str
    r: mpf
    residual: mpf
    status: Status


@dataclass
class ResidualReport:
    suite: str
    grid: list
    digits: int
    entries: list = field(default_factory=list)

    @property
    def failures(self) -> list[Entry]:
        return [e for e in self.entries if e.status is Status.FAIL]

    @property
    def ok(self) -> bool:
        return not self.failures

    def by_id(self, ident: str) -> list[Entry]:
        return [e for e in self.entries if e.id == ident]

    def to_dict(self) -> dict:
        return {
            "suite": self.suite,
            "digits": self.digits,
            "entries": [
                {"id": e.id, "r": to_str(e.r, 20), "residual": to_str(e.residual, 6),
                 "status": e.status.value}
                for e in self.entries
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


def _rel(x, y):
    return abs(x - y) / abs(y) if y else abs(x)


def _assert(ident, r, residual, tol):
    return Entry(ident, r, residual, Status.PASS if residual < tol else Status.FAIL)


def _report(ident, r, residual):
    return Entry(ident, r, residual, Status.REPORT_ONLY)


# ---------------------------------------------------------------------------
# identities


def identity_point(r, ctx: PrecCtx, perturb: dict | None = None) -> list[Entry]:
    """All asserted identities at a single r; ``perturb`` scales named inputs by (1 + delta)."""
    perturb = perturb or {}
    with mp.workdps(ctx.dps):
        r = to_mpf(r)
        tol = ctx.tol()
        A = a_quotient(r, ctx=ctx) * (1 + to_mpf(perturb.get("A", 0)))
        q1 = Nome.from_r(r).q
        q2 = Nome.from_r(r, 2).q
        u, v = _cf(q1, ctx), _cf(q2, ctx)
        v5 = v**5
        k, kp = k_pair(r, ctx=ctx)
        k25, k25p = k_pair(25 * r, ctx=ctx)
        pair = ModulusPair.from_moduli(k, k25, kp, k25p)
        j_eta = j_value(r, Route.ETA_QUOTIENT, ctx=ctx)
        out = [
            _assert("rrcf_quotient", r, _rel(1 / v5 - 11 - v5, A), tol),
            _assert("period_ratio", r, period_ratio_residual(r, ctx=ctx) / mpmath.sqrt(r), tol),
            _assert("a_closed_form", r, _rel(pair.a_closed_form(), A), tol),
            _assert("a_j_relation", r, abs(3125 + 250 * A + A * A - mpmath.cbrt(j_eta) * A ** (mpf(5) / 3)) / (A * A), tol),
            _assert("j_rrcf", r, _rel(j_value(r, Route.RRCF, ctx=ctx), j_eta), tol),
            _assert("j_modulus", r, _rel(j_value(r, Route.MODULUS, ctx=ctx), j_eta), tol),
            _assert("degree5_modular", r, modular5_residual(pair, ctx=ctx), tol),
            _assert("duplication", r, abs((v - u * u) / (v + u * u) - u * v * v), tol),
        ]
        scale = f_minus(q1, ctx=ctx) ** 4 / q1 ** (mpf(5) / 6)
        out.append(_assert("derivative", r, derivative_residual(q1, ctx=ctx) / scale,
                           mpf(10) ** (-(ctx.digits // 2 - 8))))
        # beta_of_k picks beta <= 1/2, i.e. the value at max(r, 1/r)
        beta = beta_modulus(r if r >= 1 else 1 / r, ctx=ctx)
        out.append(_assert("beta_modulus", r, _rel(beta_of_k(k, kp=kp, ctx=ctx), beta), tol))
        out.append(_assert("j_beta", r, _rel(432 / (beta * (1 - beta)), j_eta), tol))
        return out


def _run_grid(fn, grid, ctx, jobs, **kwargs):
    if jobs and jobs > 1 and len(grid) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            futures = [pool.submit(fn, r, ctx, **kwargs) for r in grid]
            return [f.result() for f in futures]
    return [fn(r, ctx, **kwargs) for r in grid]


def _finish(report: ResidualReport, strict: bool) -> ResidualReport:
    if strict and not report.ok:
        offenders = [(e.id, e.r, e.residual) for e in report.failures]
        err = VerificationError(
            f"{len(offenders)} asserted identities exceeded tolerance: "
            + ", ".join(f"{i}@r={mpmath.nstr(r, 8)}" for i, r, _ in offenders),
            offenders=offenders)
        err.report = report
        raise err
    return report


def _sorted_grid(grid):
    return sorted({to_mpf(r) for r in grid})


def identity_suite(grid, *, ctx: PrecCtx | None = None, perturb: dict | None = None,
                   jobs: int = 1, strict: bool = True) -> ResidualReport:
    """Evaluate every asserted identity on the grid (ordered by r)."""
    ctx = resolve(ctx)
    with mp.workdps(ctx.dps):
        grid = _sorted_grid(grid)
    report = ResidualReport("identities", grid, ctx.digits)
    for entries in _run_grid(identity_point, grid, ctx, jobs, perturb=perturb):
        report.entries.extend(entries)
    return _finish(report, strict)


# ---------------------------------------------------------------------------
# closed forms and conjectures


def y_table() -> dict:
    """(1/8) A_{r/5} in radicals, keyed by r (a = 4, b = 125)."""
    s5, s2, s3, s10, s85 = (mpmath.sqrt(n) for n in (5, 2, 3, 10, 85))
    f = mpf
    return {
        1: 5 * s5 / 8,
        2: f(5) / 8 * (5 + 2 * s5),
        3: f(5) / 16 * (25 + 11 * s5),
        4: f(5) / 16 * (25 + 13 * s5 + 5 * mpmath.sqrt(58 + 26 * s5)),
        5: f(125) / 8 * (2 + s5),
        6: f(5) / 8 * (50 + 35 * s2 + 3 * mpmath.sqrt(5 * (99 + 70 * s2))),
        9: f(5) / 8 * (225 + 104 * s5 + 10 * mpmath.sqrt(1047 + 468 * s5)),
        12: f(5) / 16 * (1690 + 975 * s3 + 29 * mpmath.sqrt(6755 + 3900 * s3)),
        14: f(5) / 8 * (1850 + 585 * s10 + 7 * mpmath.sqrt(5 * (27379 + 8658 * s10))),
        17: f(5) / 8 * (5360 + 585 * s85 + 4 * mpmath.sqrt(3613670 + 391950 * s85)),
    }


def ratio_constant():
    """x with Y(68/5)/Y(17/5) expressed through sqrt(x+4) and sqrt(x)."""
    s85 = mpmath.sqrt(85)
    return 2891581250 + 313636050 * s85 + 12960 * mpmath.sqrt(99557521554 + 10798529365 * s85)


def a_3_20_radical():
    s3 = mpmath.sqrt(3)
    return mpf(5) / 2 * (1690 - 975 * s3 + 29 * mpmath.sqrt(6755 - 3900 * s3))


def j_6_5_radical():
    s2 = mpmath.sqrt(2)
    inner = 10 * (3399058140008707 - 2403497060447490 * s2)
    return 8640 * (25551735275 - 18067805280 * s2 - 196 * mpmath.sqrt(inner))


def closed_form_entries(ctx: PrecCtx) -> list[Entry]:
    """Asserted radical values."""
    tol = ctx.tol()
    with mp.workdps(ctx.dps):
        out = []
        for r, y in y_table().items():
            out.append(_assert("Y", mpf(r), _rel(a_quotient(mpf(r) / 5, ctx=ctx) / 8, y), tol))
        x = ratio_constant()
        ratio = a_quotient(mpf(68) / 5, ctx=ctx) / a_quotient(mpf(17) / 5, ctx=ctx)
        out.append(_assert("ratio_68_17", mpf(68) / 5,
                           _rel(ratio, (mpmath.sqrt(x + 4) + mpmath.sqrt(x)) / 2), tol))
        out.append(_report("ratio_68_17_minus", mpf(68) / 5,
                           _rel(ratio, (mpmath.sqrt(x + 4) - mpmath.sqrt(x)) / 2)))
        # both radicals cancel leading digits (about 3 and 20)
        with mp.workdps(ctx.dps + 30):
            a_rad = a_3_20_radical()
            j_rad = j_6_5_radical()
        out.append(_assert("A_3/20", mpf(3) / 20, _rel(a_quotient(mpf(3) / 20, ctx=ctx), a_rad), tol))
        out.append(_assert("j_6/5", mpf(6) / 5,
                           _rel(j_value(mpf(6) / 5, ctx=ctx), j_rad), tol))
        return out


def conjecture_point(r, ctx: PrecCtx) -> list[Entry]:
    """Report-only residuals at r (the product identity is asserted at r = 1)."""
    with mp.workdps(ctx.dps):
        r = to_mpf(r)
        tol = ctx.tol()
        prod = a_quotient(r / 5, ctx=ctx) * a_quotient(1 / (5 * r), ctx=ctx) / 64
        prod_res = abs(prod - mpf(125) / 64) / (mpf(125) / 64)
        out = [_assert("product_125_64", r, prod_res, tol) if r == 1 else _report("product_125_64", r, prod_res)]
        q = Nome.from_r(r).q
        v, u, h = n_value(q, ctx=ctx), n_value(q * q, ctx=ctx), n_value(q**3, ctx=ctx)
        rel2 = 5 * u**6 - u**2 * v**2 - 125 * u**4 * v**4 + 5 * v**6
        out.append(_report("n_relation_q2", r, abs(rel2) / (5 * v**6)))
        terms = [125 * h**12, h**3 * v**3, 1125 * h**9 * v**3, 1125 * h**3 * v**9,
                 1953125 * h**9 * v**9, -125 * v**12]
        out.append(_report("n_relation_q3", r, abs(sum(terms)) / max(abs(t) for t in terms)))
        a, b = mpf(4), mpf(125)
        X1 = b / (250 * a) * a_quotient(r, ctx=ctx)
        X4 = b / (250 * a) * a_quotient(4 * r, ctx=ctx)
        p = X1 * X4
        rel4 = (mpf(2) ** (mpf(2) / 3) * mpmath.cbrt(a * b * p)
                + 10 * mpmath.cbrt(2) * a / mpmath.cbrt(b) * p ** (mpf(2) / 3)
                - 2 * a ** (mpf(2) / 3) * (X1 + X4))
        out.append(_report("x_relation_4r", r, abs(rel4) / (2 * a ** (mpf(2) / 3) * (X1 + X4))))
        return out


def conjecture_suite(grid, *, ctx: PrecCtx | None = None, jobs: int = 1,
                     strict: bool = True) -> ResidualReport:
    """Report-only conjectures on the grid plus the asserted closed-form values."""
    ctx = resolve(ctx)
    with mp.workdps(ctx.dps):
        grid = _sorted_grid(grid)
    report = ResidualReport("conjectures", grid, ctx.digits)
    for entries in _run_grid(conjecture_point, grid, ctx, jobs):
        report.entries.extend(entries)
    report.entries.extend(closed_form_entries(ctx))
    return _finish(report, strict)
