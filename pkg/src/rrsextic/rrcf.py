"""Rogers-Ramanujan continued fraction R(q), the quantity A_r and related maps."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import mpmath
from mpmath import mp, mpf

from .elliptic import ModulusPair
from .errors import DomainError, VerificationError
from .numkernel import PrecCtx, newton_polish, poly_roots, real_roots_in, to_mpf, with_precision
from .qseries import Nome, as_nome, f_minus, theta4_z


class Method(str, Enum):
    CONTINUED_FRACTION = "continued_fraction"
    THETA_QUOTIENT = "theta_quotient"
    PRODUCT_SERIES = "product_series"


@dataclass(frozen=True)
class RrcfValue:
    q: Nome
    R: mpf
    method: Method


@dataclass(frozen=True)
class AValue:
    """A_r = f^6(-q^2)/(q^2 f^6(-q^10)) at q = exp(-pi sqrt r), with its cross-checks."""

    r: mpf
    A: mpf
    A_from_rrcf: mpf
    closed_form_residual: mpf | None = None


def _cf(q, ctx):
    eps = ctx.eps
    n = 1
    qn = q
    while qn >= eps:
        n += 1
        qn *= q
    n += 2
    t = mpf(1)
    for m in range(n, 0, -1):
        t = 1 + q**m / t
    return mpmath.root(q, 5) / t


def _theta(nome: Nome, ctx):
    x = nome.log_inverse()
    inner = Nome(mpmath.exp(-5 * x / 2))
    num = theta4_z(mpmath.mpc(0, 3 * x / 4), inner, ctx=ctx)
    den = theta4_z(mpmath.mpc(0, x / 4), inner, ctx=ctx)
    return mpmath.exp(-x / 5) * (num / den).real


def fifth_power_from_a(a) -> mpf:
    """R^5 from a = R^-5 - 11 - R^5, the root in (0, 1)."""
    s = 11 + a
    return 2 / (s + mpmath.sqrt(s * s + 4))


def _a_of_q(nome: Nome, ctx):
    # R(q)^-5 - 11 - R(q)^5 = f^6(-q) / (q f^6(-q^5))
    return (f_minus(nome, ctx=ctx) / f_minus(nome.power(5), ctx=ctx)) ** 6 / nome.q


def _product(nome: Nome, ctx):
    return mpmath.root(fifth_power_from_a(_a_of_q(nome, ctx)), 5)


_ROUTES = {
    Method.CONTINUED_FRACTION: lambda nome, ctx: _cf(nome.q, ctx),
    Method.THETA_QUOTIENT: _theta,
    Method.PRODUCT_SERIES: _product,
}


@with_precision
def rrcf_eval(q, method: Method | str = Method.CONTINUED_FRACTION, *,
              ctx: PrecCtx | None = None) -> RrcfValue:
    """R(q) by the requested route."""
    nome = as_nome(q)
    method = Method(method)
    return RrcfValue(nome, _ROUTES[method](nome, ctx), method)


def rrcf(q, method: Method | str = Method.CONTINUED_FRACTION, *, ctx: PrecCtx | None = None) -> mpf:
    return rrcf_eval(q, method, ctx=ctx).R


@with_precision
def a_quotient(r, *, ctx: PrecCtx | None = None) -> mpf:
    """A_r from the Euler products alone."""
    r = to_mpf(r)
    if r <= 0:
        raise DomainError(f"A_r needs r > 0, got {r}")
    return _a_of_q(Nome.from_r(r, 2), ctx)


@with_precision
def a_value(r, pair: ModulusPair | None = None, *, ctx: PrecCtx | None = None) -> AValue:
    """A_r by two routes; with ``pair = (k_r, k_25r)`` also checks the (k, w) closed form."""
    r = to_mpf(r)
    A = a_quotient(r, ctx=ctx)
    R = _cf(Nome.from_r(r, 2).q, ctx)
    R5 = R**5
    A2 = 1 / R5 - 11 - R5
    tol = ctx.tol()
    if abs(A - A2) > tol * A:
        raise VerificationError(
            f"A_{r}: product route {mpmath.nstr(A, 20)} and continued fraction "
            f"{mpmath.nstr(A2, 20)} disagree", offenders=[("A", r, abs(A - A2) / A)])
    closed = None
    if pair is not None:
        closed = abs(pair.a_closed_form() - A) / A
    return AValue(r, A, A2, closed)


@with_precision
def duplicate(u, *, ctx: PrecCtx | None = None) -> mpf:
    """R(q^2) from u = R(q): the root in (0, 1) of u v^3 + u^3 v^2 - v + u^2."""
    u = to_mpf(u)
    if not 0 < u < 1:
        raise DomainError(f"duplicate needs 0 < u < 1, got {u}")
    coeffs = [u, u**3, -1, u * u]
    found = real_roots_in(poly_roots(coeffs, ctx=ctx), 0, 1, imag_tol=ctx.tol())
    if len(found) != 1:
        raise DomainError(f"expected one root in (0, 1) for u = {u}, found {len(found)}")
    return newton_polish(coeffs, found[0], ctx=ctx)


@with_precision
def descend_r25(v, *, ctx: PrecCtx | None = None) -> mpf:
    """R(exp(-pi sqrt(r)/5)) from v = R(exp(-pi sqrt r))."""
    v = to_mpf(v)
    num = v * (1 - 2 * v + 4 * v**2 - 3 * v**3 + v**4)
    den = 1 + 3 * v + 4 * v**2 + 2 * v**3 + v**4
    if v <= 0 or num <= 0 or den <= 0:
        raise DomainError(f"descend_r25: negative radicand at v = {v}")
    return mpmath.root(num / den, 5)


@with_precision
def n_value(q, *, ctx: PrecCtx | None = None) -> mpf:
    """N(q) = (R^-5 - 11 - R^5)^(1/6) / 5."""
    R5 = _cf(as_nome(q).q, ctx) ** 5
    return mpmath.root(1 / R5 - 11 - R5, 6) / 5


@with_precision
def rrcf_derivative(q, *, ctx: PrecCtx | None = None) -> mpf:
    """R'(q) by a central difference with step q 10^(-digits/2) at doubled precision."""
    q = as_nome(q).q
    big = ctx.doubled()
    with mp.workdps(big.dps):
        h = q * mpf(10) ** (-(ctx.digits // 2))
        d = (_cf(q + h, big) - _cf(q - h, big)) / (2 * h)
    return +d


@with_precision
def derivative_residual(q, *, ctx: PrecCtx | None = None) -> mpf:
    """|5R'/(R (R^-5-11-R^5)^(1/6)) - f^4(-q) q^(-5/6)|, R' from finite differences."""
    nome = as_nome(q)
    q = nome.q
    R = _cf(q, ctx)
    R5 = R**5
    lhs = 5 * rrcf_derivative(q, ctx=ctx) / (R * mpmath.root(1 / R5 - 11 - R5, 6))
    rhs = f_minus(nome, ctx=ctx) ** 4 / q ** (mpf(5) / 6)
    return abs(lhs - rhs)


@with_precision
def n_from_derivative(q, *, ctx: PrecCtx | None = None) -> mpf:
    """N(q) = q^(5/6) f(-q)^-4 R'(q)/R(q), the derivative definition."""
    nome = as_nome(q)
    q = nome.q
    return q ** (mpf(5) / 6) / f_minus(nome, ctx=ctx) ** 4 * rrcf_derivative(q, ctx=ctx) / _cf(q, ctx)
