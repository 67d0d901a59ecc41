import mpmath
import pytest
from hypothesis import given, settings, strategies as st
from mpmath import mp, mpf

from conftest import rel, stock_A
from rrsextic.elliptic import k_pair
from rrsextic.errors import BranchError, ConvergenceError, DomainError
from rrsextic.numkernel import PrecCtx
from rrsextic.sextic import (
    ModulusPair,
    SexticInstance,
    SolveMethod,
    branch_residuals,
    cube_family_eval,
    cube_family_quadratic,
    equation_residual,
    lagrange_coeff,
    lagrange_coeff_series,
    multiplier_instance,
    nested_radical,
    oracle_match,
    solve_from_L,
    solve_modular,
    solve_series,
)

TIGHT = mpf(10) ** -48


def x_example8():
    s5 = mpmath.sqrt(5)
    return (mpf(143375) / 16 + 64125 * s5 / 16
            + mpmath.sqrt(mpf(20553203125) / 32 + 9191671875 * s5 / 32) / 2)


def test_instance_basics():
    with mp.workdps(40):
        inst = SexticInstance.of(4, 125, 132)
        assert inst.j_target == 287496
        assert inst.prefactor == mpf(1) / 8
        assert inst.coefficients()[-1] == mpf(125) ** 2 / 80
    with pytest.raises(DomainError):
        SexticInstance.of(0, 1, 1)


def test_solve_example8(ctx):
    with mp.workdps(90):
        inst = SexticInstance.of(4, 125, 132)
        rep = solve_modular(inst, ctx=ctx)
        assert rep.method is SolveMethod.MODULAR
        assert abs(rep.r - 4) < TIGHT
        assert rel(rep.X, x_example8()) < mpf(10) ** -45
        assert rep.residual < TIGHT
        assert oracle_match(inst, rep, ctx=ctx) < mpf(10) ** -(ctx.digits - 12)


def test_solve_example1_both_branches(ctx):
    with mp.workdps(90):
        inst = SexticInstance.of(1, 3, 26 / (5 * mpmath.cbrt(3)))
        rep = solve_modular(inst, ctx=ctx)
        assert rel(rep.alpha, mpf(1) / 2) < TIGHT
        assert rel(rep.alternates["alpha_complement"], mpmath.sqrt(3) / 2) < TIGHT
        r_oracle = (mpmath.ellipk(mpf(3) / 4) / mpmath.ellipk(mpf(1) / 4)) ** 2
        assert rel(rep.r, r_oracle) < TIGHT
        assert rel(rep.alternates["r"], 1 / r_oracle) < TIGHT
        assert rel(rep.X, mpf(3) / 250 * stock_A(r_oracle)) < TIGHT
        assert rep.residual < TIGHT and rep.alternates["residual"] < TIGHT
        assert oracle_match(inst, rep, ctx=ctx) < mpf(10) ** -(ctx.digits - 12)


def test_solve_example10(ctx):
    with mp.workdps(90):
        C1 = mpmath.cbrt(32)
        rep = solve_modular(SexticInstance.of(1, 1, C1), ctx=ctx)
        assert abs(rep.r - 2) < TIGHT
        assert rel(rep.X, stock_A(2) / 250) < TIGHT


def test_solve_negative_X_reports_branches(ctx):
    with mp.workdps(90):
        inst = SexticInstance.of(-1, 3, mpmath.cbrt(96))
        rep = solve_modular(inst, ctx=ctx)
        assert rep.X < 0
        assert rep.residual < TIGHT
        assert len(rep.alternates["branch_residuals"]) == 3


def test_solve_below_1728_is_branch_error(ctx):
    with pytest.raises(BranchError, match="series"):
        solve_modular(SexticInstance.of(1, 1, 1), ctx=ctx)  # j = 250


def test_branch_residuals_pick_real_root(ctx):
    with mp.workdps(90):
        inst = SexticInstance.of(4, 125, 132)
        X = x_example8()
        res = branch_residuals(inst, X)
        assert res[0] < TIGHT and min(res[1:]) > mpf(10) ** -5
        assert equation_residual(inst, X) == res[0]


def test_solve_from_L_third(ctx):
    with mp.workdps(90):
        C1, rep = solve_from_L(mpf(1) / 3, 1, 1, ctx=ctx)
        assert rep.method is SolveMethod.PARAMETRIC
        assert rep.residual < TIGHT
        assert rep.alternates["cross_route"] < mpf(10) ** -45
        # the same instance through the modular path lands on the same X
        again = solve_modular(SexticInstance.of(1, 1, C1), ctx=ctx)
        assert rel(again.X, rep.X) < TIGHT or rel(again.alternates["X"], rep.X) < TIGHT


def test_solve_from_L_one(ctx):
    with mp.workdps(90):
        _, rep = solve_from_L(1, 2, 3, ctx=ctx)
        assert rep.residual < TIGHT


def test_cube_family(ctx):
    with mp.workdps(90):
        a, A, j = cube_family_eval(2, 1, ctx=ctx)
        res = abs(3125 + 250 * A + A * A - mpmath.cbrt(j) * A ** (mpf(5) / 3)) / (A * A)
        assert res < ctx.tol()
        # X = bA/(250a) is the cube of t
        assert rel(A / (250 * a), 8) < TIGHT
        p, q, rational = cube_family_quadratic(2, 1, ctx=ctx)
        assert abs(A * A + p * A + q) / (A * A) < TIGHT
        assert rational < TIGHT


def test_cube_family_domain(ctx):
    with pytest.raises(DomainError):
        cube_family_eval(1, 1, ctx=ctx)  # 4 - 10 + 5 < 0


def test_lagrange_c1_closed_form(ctx):
    with mp.workdps(90):
        assert rel(lagrange_coeff(1, ctx=ctx), (125 - 50 * mpmath.sqrt(5)) ** (mpf(5) / 3)) < TIGHT


@pytest.mark.parametrize("n", [2, 3])
def test_lagrange_coeff_finite_difference(ctx, n):
    with mp.workdps(2 * ctx.dps):
        phi_n = lambda z: (125 - mpmath.sqrt(12500 + z)) ** (mpf(5 * n) / 3)
        oracle = mpmath.diff(phi_n, 0, n - 1)
    with mp.workdps(90):
        assert rel(lagrange_coeff(n, ctx=ctx), oracle) < mpf(10) ** -30


@pytest.mark.parametrize("n", [1, 5, 17, 40])
def test_lagrange_coeff_two_routes(ctx, n):
    with mp.workdps(90):
        assert rel(lagrange_coeff(n, ctx=ctx), lagrange_coeff_series(n, ctx=ctx)) < TIGHT


def test_lagrange_coeff_domain(ctx):
    with pytest.raises(DomainError):
        lagrange_coeff(0, ctx=ctx)


def test_series_example3(ctx):
    with mp.workdps(90):
        s = solve_series(800, ctx=ctx)
        assert s.converged
        assert s.fixed_point_residual < mpf(10) ** -30
        # independent oracle: x0 is the root near -11 of (x^2+250x+3125)^3 + 800 x^5
        oracle = mpmath.findroot(lambda x: (x * x + 250 * x + 3125) ** 3 + 800 * x**5, mpf(-11))
        assert rel(s.x0, oracle) < TIGHT
        assert s.best_branch == 0
        assert s.branch_residuals[0] / abs(s.U0) < mpf(10) ** -45


def test_series_terms_decay_monotonically(ctx):
    with mp.workdps(90):
        s = solve_series(800, ctx=ctx)
        cj = mpmath.cbrt(800)
        mags = [abs(c) * cj ** (n + 1) / mpmath.factorial(n + 1) for n, c in enumerate(s.c)]
        tail = mags[len(mags) // 4:]
        assert all(b < a for a, b in zip(tail, tail[1:]))


def test_series_slow_at_1728(ctx):
    with mp.workdps(90):
        s = solve_series(1728, 200, ctx=ctx)
        assert not s.converged


def test_series_diverges_far_out(ctx):
    with pytest.raises(ConvergenceError) as info:
        solve_series(5000, 300, ctx=ctx)
    assert info.value.profile


def test_series_small_j_limit(ctx):
    with mp.workdps(90):
        s = solve_series(mpf(10) ** -30, ctx=ctx)
        assert abs(s.U0) < mpf(10) ** -8
        assert abs(s.x0 - (50 * mpmath.sqrt(5) - 125)) < mpf(10) ** -8
        zero = solve_series(0, ctx=ctx)
        assert zero.U0 == 0


def test_series_domain(ctx):
    with pytest.raises(DomainError):
        solve_series(-1, ctx=ctx)


def test_series_and_modular_agree_when_comparable(ctx):
    with mp.workdps(90):
        # the only j both solvers accept is the series' boundary j = 1728
        s = solve_series(1728, 400, ctx=ctx)
        if not (s.converged and s.x0 > 0):
            pytest.skip("the series root sits on the x0 < 0 branch while A_r > 0; "
                        "the two solvers address different roots here")
        A = solve_modular(SexticInstance.of(1, 250, mpmath.cbrt(1728)), ctx=ctx).X
        assert rel(A, s.x0) < TIGHT


@pytest.mark.parametrize("j, r", [(287496, 4), (8000, 2)])
def test_nested_radical(ctx, j, r):
    with mp.workdps(90):
        nr = nested_radical(j, ctx=ctx)
        assert rel(nr.value, mpmath.cbrt(stock_A(r) / j)) < TIGHT
        assert nr.residual < TIGHT


def test_nested_radical_depth(ctx):
    with mp.workdps(90):
        assert nested_radical(8000, 0, ctx=ctx).value == 0
        assert nested_radical(8000, 3, ctx=ctx).iterations == 3


def test_nested_radical_errors(ctx):
    with pytest.raises(ConvergenceError):
        nested_radical(1728, ctx=ctx, max_iter=2000)
    with pytest.raises(DomainError):
        nested_radical(100, ctx=ctx)
    with pytest.raises(DomainError):
        nested_radical(8000, -1, ctx=ctx)


def test_multiplier_instance(ctx):
    with mp.workdps(90):
        k, kp = k_pair(1, ctx=ctx)
        k25, k25p = k_pair(25, ctx=ctx)
        inst, m5 = multiplier_instance(ModulusPair.from_moduli(k, k25, kp, k25p), ctx=ctx)
        assert rel(inst.a, mpf(1) / 4) < TIGHT
        assert equation_residual(inst, m5**3 / 250) < TIGHT


@settings(max_examples=10, deadline=None)
@given(st.floats(min_value=1.0, max_value=30.0), st.floats(min_value=0.2, max_value=5.0),
       st.floats(min_value=0.2, max_value=5.0))
def test_modular_solver_roundtrip(r, a, b):
    c = PrecCtx(30)
    with mp.workdps(50):
        r, a, b = mpf(r), mpf(a), mpf(b)
        from rrsextic.jinv import j_value
        j = j_value(r, ctx=c)
        C1 = mpmath.cbrt(a * a * b * j / 250)
        rep = solve_modular(SexticInstance.of(a, b, C1), ctx=c)
        assert rep.residual < mpf(10) ** -25
        assert rel(rep.r, r) < mpf(10) ** -20 or rel(rep.alternates["r"], r) < mpf(10) ** -20
