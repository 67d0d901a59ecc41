"""q-series primitives: f(-q), Dedekind eta on the imaginary axis, theta functions."""

from __future__ import annotations

from dataclasses import dataclass

import mpmath
from mpmath import mp, mpc, mpf

from .errors import DomainError
from .numkernel import PrecCtx, to_mpf, with_precision


@dataclass(frozen=True)
class Nome:
    """A nome ``0 < q < 1``, optionally remembering ``q = exp(-scale*pi*sqrt(r))``."""

    q: mpf
    r: mpf | None = None
    scale: int = 1

    def __post_init__(self):
        if not 0 < self.q < 1:
            raise DomainError(f"nome must satisfy 0 < q < 1, got {self.q}")

    @classmethod
    def from_r(cls, r, scale: int = 1) -> "Nome":
        r = to_mpf(r)
        if r <= 0:
            raise DomainError(f"r must be positive, got {r}")
        return cls(mpmath.exp(-scale * mp.pi * mpmath.sqrt(r)), r, scale)

    def log_inverse(self) -> mpf:
        """x with q = exp(-x), exact when the origin r is known."""
        if self.r is not None:
            return self.scale * mp.pi * mpmath.sqrt(self.r)
        return -mpmath.log(self.q)

    def power(self, n: int) -> "Nome":
        """q**n, keeping the origin tag (q^n has scale*n)."""
        if self.r is not None:
            return Nome.from_r(self.r, self.scale * n)
        return Nome(self.q**n)


def as_nome(q) -> Nome:
    """Coerce to a Nome at the current precision (tagged nomes are recomputed)."""
    if isinstance(q, Nome):
        return Nome.from_r(q.r, q.scale) if q.r is not None else q
    return Nome(to_mpf(q))


@with_precision
def f_minus(q, *, ctx: PrecCtx | None = None) -> mpf:
    """Euler product f(-q) = prod_{n>=1} (1 - q^n)."""
    q = as_nome(q).q
    eps = ctx.eps
    prod = mpf(1)
    qn = q
    while qn >= eps:
        prod *= 1 - qn
        qn *= q
    # remaining factors change the product by about -q^N/(1-q)
    return prod * (1 - qn / (1 - q))


@with_precision
def eta(r, half_shift: bool = False, *, ctx: PrecCtx | None = None) -> mpf:
    """Dedekind eta at tau = i*sqrt(r) (or i*sqrt(r)/2 with ``half_shift``).

    Real and positive on the imaginary axis, so a real value is returned.
    """
    r = to_mpf(r)
    if r <= 0:
        raise DomainError(f"eta needs r > 0, got {r}")
    t = mpmath.sqrt(r) / (2 if half_shift else 1)
    # q = exp(2*pi*i*tau) = exp(-2*pi*t)
    q = mpmath.exp(-2 * mp.pi * t)
    return mpmath.exp(-mp.pi * t / 12) * f_minus(q, ctx=ctx)


@with_precision
def theta_nulls(q, *, ctx: PrecCtx | None = None) -> tuple[mpf, mpf, mpf]:
    """Jacobi theta constants (theta2, theta3, theta4) at nome q."""
    q = as_nome(q).q
    eps = ctx.eps
    # theta2 = 2 q^(1/4) sum_{n>=0} q^(n(n+1))
    s2 = mpf(0)
    n = 0
    while True:
        t = q ** (n * (n + 1))
        s2 += t
        if t < eps * s2:
            break
        n += 1
    s3 = mpf(1)
    s4 = mpf(1)
    n = 1
    while True:
        t = q ** (n * n)
        if t < eps:
            break
        s3 += 2 * t
        s4 += 2 * t if n % 2 == 0 else -2 * t
        n += 1
    return 2 * mpmath.root(q, 4) * s2, s3, s4


@with_precision
def theta4_z(z, q, *, ctx: PrecCtx | None = None, max_terms: int = 10**6) -> mpc:
    """Two-argument theta4(z, q) = 1 + 2 sum (-1)^n q^(n^2) cos(2 n z)."""
    q = as_nome(q).q
    z = mpmath.mpmathify(z)
    y = abs(mpmath.im(z))
    logq = mpmath.log(q)
    # term magnitude exp(n^2 log q + 2 n y) peaks at n = y / (-log q)
    peak = int(y / (-logq)) + 1
    if peak > max_terms:
        raise DomainError("theta4_z: |Im z| too large for direct summation at this q")
    eps = ctx.eps
    total = mpc(1)
    n = 1
    while True:
        bound = mpmath.exp(n * n * logq + 2 * n * y)
        term = 2 * q ** (n * n) * mpmath.cos(2 * n * z)
        total += -term if n % 2 else term
        if n > peak and bound < eps * max(abs(total), eps):
            return total
        n += 1
        if n > max_terms + peak:
            raise DomainError("theta4_z series did not terminate")
