"""The j-invariant on the imaginary axis by four routes, and the map U with its inverse."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import mpmath
from mpmath import mpf

from .elliptic import beta_modulus, k_pair
from .errors import DomainError
from .numkernel import PrecCtx, newton_polish, poly_roots, real_roots_in, to_mpf, with_precision
from .qseries import Nome, eta
from .rrcf import _cf, a_quotient


class Route(str, Enum):
    ETA_QUOTIENT = "eta_quotient"
    RRCF = "rrcf"
    MODULUS = "modulus"
    BETA = "beta"


@dataclass(frozen=True)
class JValue:
    r: mpf
    j: mpf
    route: Route


def _eta_route(r, ctx):
    x = eta(r, half_shift=True, ctx=ctx) / eta(r, ctx=ctx)
    return (x**16 + 16 / x**8) ** 3


def _rrcf_route(r, ctx):
    R5 = _cf(Nome.from_r(r, 2).q, ctx) ** 5
    num = ((R5 - 228) * R5 + 494) * R5 * R5 + 228 * R5 + 1
    return -num**3 / (R5 * (R5 * R5 + 11 * R5 - 1) ** 5)


def _modulus_route(r, ctx):
    k, kp = k_pair(r, ctx=ctx)
    k2, kp2 = k * k, kp * kp
    return 256 * (k2 + kp2 * kp2) ** 3 / (k2 * kp2) ** 2


def _beta_route(r, ctx):
    # beta_{1/r} = 1 - beta_r, so the product is the same and stays accurate
    b = beta_modulus(r if r >= 1 else 1 / r, ctx=ctx)
    return 432 / (b * (1 - b))


_ROUTES = {
    Route.ETA_QUOTIENT: _eta_route,
    Route.RRCF: _rrcf_route,
    Route.MODULUS: _modulus_route,
    Route.BETA: _beta_route,
}


@with_precision
def j_eval(r, route: Route | str = Route.ETA_QUOTIENT, *, ctx: PrecCtx | None = None) -> JValue:
    """j at tau = i sqrt(r) by the chosen route."""
    r = to_mpf(r)
    if r <= 0:
        raise DomainError(f"j needs r > 0, got {r}")
    route = Route(route)
    return JValue(r, _ROUTES[route](r, ctx), route)


def j_value(r, route: Route | str = Route.ETA_QUOTIENT, *, ctx: PrecCtx | None = None) -> mpf:
    return j_eval(r, route, ctx=ctx).j


@with_precision
def u_forward(x, *, ctx: PrecCtx | None = None) -> mpf:
    """U(x) = 256 (x^2 + (1-x^2)^2)^3 / (x^4 (1-x^2)^2)."""
    x = to_mpf(x)
    if not 0 < x < 1:
        raise DomainError(f"U needs 0 < x < 1, got {x}")
    x2 = x * x
    c2 = 1 - x2
    return 256 * (x2 + c2 * c2) ** 3 / (x2 * c2) ** 2


@dataclass(frozen=True)
class UInverse:
    """Both moduli with U(x) = t; ``x <= 1/sqrt 2`` is the primary (r >= 1) branch."""

    x: mpf
    complement: mpf


@with_precision
def u_inverse_pair(t, *, ctx: PrecCtx | None = None) -> UInverse:
    t = to_mpf(t)
    if t < 1728:
        raise DomainError(f"U(x) = {t} < 1728 has no real singular modulus; use the series solver")
    tol = ctx.tol()
    if t < 3456:
        # s = 1 - 4u stays well conditioned at the double root u = 1/4:
        # 64 s (9 - s)^2 = (t - 1728)(1 - s)^2
        T = t - 1728
        if T == 0:
            s = mpf(0)
        else:
            coeffs = [64, -1152 - T, 5184 + 2 * T, -T]
            found = real_roots_in(poly_roots(coeffs, ctx=ctx), 0, 1, imag_tol=tol)
            if len(found) != 1:
                raise DomainError(f"no unique root s in [0, 1) for t = {t}")
            s = newton_polish(coeffs, found[0], ctx=ctx)
        rs = mpmath.sqrt(s)
        x2 = (1 - s) / (2 * (1 + rs))
        return UInverse(mpmath.sqrt(x2), mpmath.sqrt((1 + rs) / 2))
    # u = x^2 (1 - x^2): 256 (1 - u)^3 = t u^2
    coeffs = [-256, 768 - t, -768, 256]
    found = real_roots_in(poly_roots(coeffs, ctx=ctx), 0, mpf(1) / 4, imag_tol=tol)
    if len(found) != 1:
        raise DomainError(f"no unique root u in (0, 1/4] for t = {t}")
    u = newton_polish(coeffs, found[0], ctx=ctx)
    rs = mpmath.sqrt(1 - 4 * u)
    return UInverse(mpmath.sqrt(2 * u / (1 + rs)), mpmath.sqrt((1 + rs) / 2))


def u_inverse(t, *, ctx: PrecCtx | None = None) -> mpf:
    """The modulus x in (0, 1/sqrt 2] with U(x) = t."""
    return u_inverse_pair(t, ctx=ctx).x


@with_precision
def a_j_residual(r, *, ctx: PrecCtx | None = None) -> mpf:
    """|3125 + 250A + A^2 - j^(1/3) A^(5/3)| / A^2 with j from the eta quotient."""
    A = a_quotient(r, ctx=ctx)
    j = _eta_route(to_mpf(r), ctx)
    return abs(3125 + 250 * A + A * A - mpmath.cbrt(j) * A ** (mpf(5) / 3)) / (A * A)


@dataclass(frozen=True)
class ModularPoint:
    """k, j, R(q) and A at a single r, as tabulated by the CLI."""

    r: mpf
    k: mpf
    kp: mpf
    j: mpf
    R: mpf
    A: mpf

    @classmethod
    @with_precision
    def at(cls, r, *, ctx: PrecCtx | None = None) -> "ModularPoint":
        r = to_mpf(r)
        k, kp = k_pair(r, ctx=ctx)
        return cls(r, k, kp, _eta_route(r, ctx), _cf(Nome.from_r(r).q, ctx), a_quotient(r, ctx=ctx))
