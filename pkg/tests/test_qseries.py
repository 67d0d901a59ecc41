import mpmath
import pytest
from hypothesis import given, settings, strategies as st
from mpmath import mp, mpf

from conftest import rel, stock_rrcf
from rrsextic.errors import DomainError
from rrsextic.numkernel import PrecCtx, parse_number
from rrsextic.qseries import Nome, as_nome, eta, f_minus, theta4_z, theta_nulls

TIGHT = mpf(10) ** -58


def test_nome_validation():
    with pytest.raises(DomainError):
        Nome(mpf(1))
    with pytest.raises(DomainError):
        Nome(mpf(0))
    with pytest.raises(DomainError):
        Nome.from_r(-1)


def test_nome_keeps_origin():
    with mp.workdps(60):
        n = Nome.from_r(2, 2)
        assert n.log_inverse() == 2 * mp.pi * mpmath.sqrt(2)
        assert n.power(3).scale == 6
        assert rel(n.power(3).q, n.q**3) < mpf(10) ** -55


def test_as_nome_recomputes_at_current_precision():
    with mp.workdps(15):
        n = Nome.from_r(1)
    with mp.workdps(60):
        assert rel(as_nome(n).q, mpmath.exp(-mp.pi)) < TIGHT


def test_f_minus_small_q(ctx):
    assert f_minus(mpf(10) ** -100, ctx=ctx) == 1


def test_f_minus_matches_q_pochhammer(ctx):
    with mp.workdps(90):
        q = mpmath.exp(-mp.pi)
        assert rel(f_minus(q, ctx=ctx), mpmath.qp(q)) < TIGHT


def test_eta_at_i_closed_form(ctx):
    with mp.workdps(90):
        oracle = mpmath.gamma(mpf(1) / 4) / (2 * mp.pi ** (mpf(3) / 4))
        assert rel(eta(1, ctx=ctx), oracle) < TIGHT
        # eta(i) = e^(-pi/12) f(-e^(-2 pi))
        assert rel(mpmath.exp(-mp.pi / 12) * f_minus(Nome.from_r(1, 2), ctx=ctx), oracle) < TIGHT


def test_eta_half_shift(ctx):
    with mp.workdps(90):
        assert rel(eta(4, half_shift=True, ctx=ctx), eta(1, ctx=ctx)) < TIGHT


def test_eta_domain(ctx):
    with pytest.raises(DomainError):
        eta(0, ctx=ctx)


def test_theta_nulls_small_q(ctx):
    t2, t3, t4 = theta_nulls(mpf(10) ** -200, ctx=ctx)
    assert t2 < mpf(10) ** -49 and t3 == 1 and t4 == 1


@pytest.mark.parametrize("r", ["1", "2", "1/5", "7"])
def test_theta_nulls_match_jtheta(ctx, r):
    with mp.workdps(90):
        q = Nome.from_r(parse_number(r))
        ours = theta_nulls(q, ctx=ctx)
        for i, t in zip((2, 3, 4), ours):
            assert rel(t, mpmath.jtheta(i, 0, q.q)) < TIGHT
        # Jacobi's identity theta3^4 = theta2^4 + theta4^4
        assert rel(ours[1] ** 4, ours[0] ** 4 + ours[2] ** 4) < TIGHT


def test_k1_is_one_over_sqrt2(ctx):
    with mp.workdps(90):
        t2, t3, _ = theta_nulls(Nome.from_r(1), ctx=ctx)
        assert rel(t2**2 / t3**2, 1 / mpmath.sqrt(2)) < TIGHT


def test_theta4_z_matches_jtheta(ctx):
    with mp.workdps(90):
        q = mpmath.exp(-mp.pi)
        z = mpmath.mpc("0.3", "0.7")
        assert rel(theta4_z(z, q, ctx=ctx), mpmath.jtheta(4, z, q)) < TIGHT


def test_theta4_z_rejects_runaway_imaginary_part(ctx):
    with pytest.raises(DomainError):
        theta4_z(mpmath.mpc(0, 10**9), mpf("0.999"), ctx=ctx, max_terms=1000)


def test_rrcf_quotient_identity(ctx):
    # 1/R^5 - 11 - R^5 = f^6(-q) / (q f^6(-q^5)) at q = e^-pi, R from the stock product
    with mp.workdps(90):
        q = mpmath.exp(-mp.pi)
        R5 = stock_rrcf(q) ** 5
        rhs = f_minus(q, ctx=ctx) ** 6 / (q * f_minus(q**5, ctx=ctx) ** 6)
        assert rel(1 / R5 - 11 - R5, rhs) < TIGHT


@settings(max_examples=20, deadline=None)
@given(st.floats(min_value=0.01, max_value=0.9))
def test_f_minus_decreasing_in_q(x):
    c = PrecCtx(25)
    with mp.workdps(40):
        q = mpf(x)
        assert f_minus(q * mpf("0.99"), ctx=c) > f_minus(q, ctx=c)
