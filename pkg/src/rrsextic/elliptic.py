"""Complete elliptic integral K, singular moduli, degree-5 modulus pairs and the
fifth-base moduli.

Conventions: ``k_r`` is the modulus with ``K(k')/K(k) = sqrt(r)``, i.e. nome
``q = exp(-pi*sqrt(r))``.  ``G_r = (2 k_r k'_r)^(-1/12)`` is Ramanujan's class
invariant; the P-map below advances the ratio ``G_{r/25}/G_r`` to
``G_r/G_{25r}``.
"""

from __future__ import annotations

from dataclasses import dataclass

import mpmath
from mpmath import mp, mpc, mpf

from .errors import BranchError, DomainError
from .numkernel import PrecCtx, agm, hyp2f1, resolve, to_mpf, with_precision
from .qseries import Nome, theta_nulls


# ---------------------------------------------------------------------------
# K and the singular modulus


@with_precision
def ellipK(x, *, ctx: PrecCtx | None = None) -> mpf:
    """K(x) = pi / (2 agm(1, sqrt(1 - x^2))) for 0 <= x < 1."""
    x = to_mpf(x)
    if not 0 <= x < 1:
        raise DomainError(f"ellipK needs 0 <= x < 1, got {x}")
    return mp.pi / (2 * agm(1, mpmath.sqrt(1 - x * x), ctx=ctx))


@with_precision
def ellipK_hypergeometric(x, *, ctx: PrecCtx | None = None) -> mpf:
    """K(x) = (pi/2) 2F1(1/2, 1/2; 1; x^2), the independent series route."""
    x = to_mpf(x)
    if not 0 <= x < 1:
        raise DomainError(f"ellipK needs 0 <= x < 1, got {x}")
    half = mpf(1) / 2
    return mp.pi / 2 * hyp2f1(half, half, 1, x * x, ctx=ctx)


@with_precision
def k_pair(r, *, ctx: PrecCtx | None = None) -> tuple[mpf, mpf]:
    """(k_r, k'_r), both from theta quotients so neither loses digits to 1 - k^2.

    For r < 1 the nome of 1/r is used, with k_r = k'_{1/r}.
    """
    r = to_mpf(r)
    if r <= 0:
        raise DomainError(f"k_modulus needs r > 0, got {r}")
    flip = r < 1
    q = Nome.from_r(1 / r if flip else r).q
    t2, t3, t4 = theta_nulls(q, ctx=ctx)
    k, kp = (t2 / t3) ** 2, (t4 / t3) ** 2
    return (kp, k) if flip else (k, kp)


def k_modulus(r, *, ctx: PrecCtx | None = None) -> mpf:
    """Singular modulus k_r = theta2^2/theta3^2 at q = exp(-pi sqrt(r))."""
    return k_pair(r, ctx=ctx)[0]


@with_precision
def period_ratio_residual(r, *, ctx: PrecCtx | None = None) -> mpf:
    """|K(k')/K(k) - sqrt(r)| for k = k_modulus(r)."""
    r = to_mpf(r)
    k, kp = k_pair(r, ctx=ctx)
    # K(k) = pi/(2 agm(1,k')), K(k') = pi/(2 agm(1,k))
    return abs(agm(1, kp, ctx=ctx) / agm(1, k, ctx=ctx) - mpmath.sqrt(r))


@with_precision
@with_precision
def k_inverse(x, *, complement=None, ctx: PrecCtx | None = None) -> mpf:
    """r = K(sqrt(1-x^2))^2 / K(x)^2, inverse of :func:`k_modulus`.

    ``complement`` may supply sqrt(1-x^2) when it is known more accurately.
    """
    x = to_mpf(x)
    if not 0 < x < 1:
        raise DomainError(f"k_inverse needs 0 < x < 1, got {x}")
    xp = mpmath.sqrt(1 - x * x) if complement is None else to_mpf(complement)
    return (agm(1, xp, ctx=ctx) / agm(1, x, ctx=ctx)) ** 2


def modulus_from_product(e) -> mpf:
    """k <= 1/sqrt(2) from e = 4 (k k')^2, i.e. sqrt(1/2 - sqrt(1 - e)/2) without cancellation."""
    if not 0 <= e <= 1:
        raise DomainError(f"4(kk')^2 must lie in [0, 1], got {e}")
    return mpmath.sqrt(e / (2 * (1 + mpmath.sqrt(1 - e))))


# ---------------------------------------------------------------------------
# degree-5 modulus pairs


@dataclass(frozen=True)
class ModulusPair:
    """Moduli (k_r, k_25r) with w = sqrt(k_r k_25r) and its complement w'."""

    k: mpf
    k25: mpf
    kp: mpf
    k25p: mpf
    w: mpf
    w_prime: mpf

    @classmethod
    def from_moduli(cls, k, k25, kp=None, k25p=None) -> "ModulusPair":
        k, k25 = to_mpf(k), to_mpf(k25)
        for v in (k, k25):
            if not 0 < v < 1:
                raise DomainError(f"moduli must lie in (0, 1), got {v}")
        kp = mpmath.sqrt(1 - k * k) if kp is None else to_mpf(kp)
        k25p = mpmath.sqrt(1 - k25 * k25) if k25p is None else to_mpf(k25p)
        return cls(k, k25, kp, k25p, mpmath.sqrt(k * k25), mpmath.sqrt(kp * k25p))

    def a_closed_form(self) -> mpf:
        """(kk')^2/(ww')^2 (w/k + w'/k' - ww'/(kk'))^3, which equals A_r."""
        k, kp, w, wp = self.k, self.kp, self.w, self.w_prime
        return (k * kp) ** 2 / (w * wp) ** 2 * (w / k + wp / kp - w * wp / (k * kp)) ** 3

    def multiplier(self) -> mpf:
        """m5 = w/k + w'/k' - ww'/(kk'), so that m5^3 = (ww')^2 A / (kk')^2."""
        k, kp, w, wp = self.k, self.kp, self.w, self.w_prime
        return w / k + wp / kp - w * wp / (k * kp)


@dataclass(frozen=True)
class LParam:
    L: mpf
    M: mpf

    @classmethod
    def of(cls, L) -> "LParam":
        L = to_mpf(L)
        if L <= 0:
            raise DomainError(f"L must be positive, got {L}")
        return cls(L, (18 + L) / (64 + 3 * L))

    @property
    def ratio6(self) -> mpf:
        """(L/M)^(1/6), the quantity called A in the w-from-A inversion."""
        return mpmath.root(self.L / self.M, 6)

    @property
    def shift(self) -> mpf:
        """(L/M)^(1/6) - 4 (M/L)^(1/6)."""
        a = self.ratio6
        return a - 4 / a


def w_of_L(L) -> mpf:
    L = to_mpf(L)
    return mpmath.sqrt(L * (18 + L) / (6 * (64 + 3 * L)))


@with_precision
def pair_from_L(L, *, ctx: PrecCtx | None = None) -> ModulusPair:
    """The (k_r, k_25r) pair generated by the free parameter L > 0."""
    p = LParam.of(L)
    w = w_of_L(p.L)
    d = p.shift
    s = mpmath.sqrt(4 + 2 * d * d / 3) / 2 + mpmath.sqrt(mpf(2) / 3) * d / 2
    k = w / s**2
    k25 = w * s**2
    if not (0 < k < 1 and 0 < k25 < 1):
        raise DomainError(f"L = {p.L} gives moduli outside (0, 1): k={k}, k25={k25}")
    kp = mpmath.sqrt(1 - k * k)
    k25p = mpmath.sqrt(1 - w**4 / k**2)
    w_prime = mpmath.sqrt(k25p * kp)
    return ModulusPair(k, k25, kp, k25p, w, w_prime)


@with_precision
def shift_values(pair: ModulusPair, L=None, *, ctx: PrecCtx | None = None) -> tuple[mpf, ...]:
    """(-(k-w)/sqrt(kw), (k25-w)/sqrt(k25 w)[, sqrt(2/3) * shift(L)]) which must coincide."""
    k, k25, w = pair.k, pair.k25, pair.w
    vals = (-(k - w) / mpmath.sqrt(k * w), (k25 - w) / mpmath.sqrt(k25 * w))
    if L is not None:
        vals += (mpmath.sqrt(mpf(2) / 3) * LParam.of(L).shift,)
    return vals


@with_precision
def modular5_residual(pair: ModulusPair, *, ctx: PrecCtx | None = None) -> mpf:
    """|k k25 + k' k25' + 2 4^(1/3) (k k25 k' k25')^(1/3) - 1|."""
    a = pair.k * pair.k25
    b = pair.kp * pair.k25p
    return abs(a + b + 2 * mpmath.cbrt(4) * mpmath.cbrt(a * b) - 1)


@with_precision
def w_from_A(A, *, ctx: PrecCtx | None = None) -> mpf:
    """w from A = (L/M)^(1/6) by the closed inversion of w(L)."""
    A = to_mpf(A)
    if A <= 0:
        raise DomainError(f"A must be positive, got {A}")
    a6 = A**6
    num = 4096 - 20 * a6 + a6**2 + (a6 - 64) * mpmath.sqrt(4096 + 88 * a6 + a6**2)
    if num <= 0:
        raise DomainError(f"negative radicand for w at A = {A}")
    return mpmath.sqrt(num / (108 * a6))


@with_precision
def L_from_A(A, *, ctx: PrecCtx | None = None) -> mpf:
    """Positive L with (L/M)^(1/6) = A, M = (18+L)/(64+3L)."""
    a6 = to_mpf(A) ** 6
    # 3 L^2 + (64 - A^6) L - 18 A^6 = 0
    b = 64 - a6
    return (-b + mpmath.sqrt(b * b + 216 * a6)) / 6


# ---------------------------------------------------------------------------
# iterated P-map for k_{25^n r0}


def _extra_digits(x) -> int:
    ax = abs(x)
    if ax == 0 or ax >= 1:
        return 5
    return int(-mpmath.log10(ax)) + 5


def _check_real(z, what: str, ctx: PrecCtx) -> mpf:
    if isinstance(z, mpc):
        if abs(z.imag) > ctx.tol() * max(1, abs(z.real)):
            raise BranchError(f"{what} left the real axis: imaginary part {mpmath.nstr(z.imag, 5)}")
        return z.real
    return z


@with_precision
def q_map(x, *, ctx: PrecCtx | None = None) -> mpf:
    """Q(x) with y = arcsinh((11+x)/2); maps 125/A_s to 125/A_25s."""
    x = to_mpf(x)
    # (e^2 - e - 1) -> 0 as x -> 0; keep digits through the cancellation
    with mp.workdps(ctx.dps + 2 * _extra_digits(x)):
        e = mpmath.exp(mpmath.asinh((11 + x) / 2) / 5)
        num = (e * e - e - 1) ** 5
        den = e * (1 + e * (-1 + e * (2 + e * (-3 + e * (5 + e * (3 + e * (2 + e * (1 + e))))))))
        return num / den


@with_precision
def u1_map(y, *, ctx: PrecCtx | None = None) -> mpf:
    """U1(Y) = sqrt(-1/(2Y^2) + Y^4/2 + sqrt(1+18Y^6+Y^12)/(2Y^2)), in cancellation-free form."""
    y = to_mpf(y)
    if y <= 0:
        raise DomainError(f"U1 needs Y > 0, got {y}")
    y4, y6 = y**4, y**6
    root = mpmath.sqrt(1 + 18 * y6 + y6 * y6)
    return mpmath.sqrt(y4 / 2 + y4 * (18 + y6) / (2 * (1 + root)))


@with_precision
def v_map(x, *, ctx: PrecCtx | None = None) -> mpf:
    """Inverse of U1 via its Cardano form (principal complex cube root in h)."""
    x = to_mpf(x)
    if x <= 0:
        raise DomainError(f"V needs X > 0, got {x}")
    with mp.workdps(ctx.dps + 2 * _extra_digits(x)):
        x2, x6 = x * x, x**6
        inner = mpmath.sqrt(mpc(-125 * x6 - 22 * x6**2 - x6**3))
        h = mpmath.cbrt(-125 - 9 * x6 + 3 * mpmath.sqrt(3) * inner)
        sq = (-5 + 25 / h + h) / (3 * x2) + x2 * x2 / h
        val = mpmath.sqrt(sq)
    return _check_real(val, "V(X) via the cube root h(X)", ctx)


@with_precision
def p_map(x, *, ctx: PrecCtx | None = None) -> mpf:
    """P = V o Q^(1/6) o U1 with Q^(1/6)[y] = Q(y^6)^(1/6).

    Maps G_{r/25}/G_r to G_r/G_{25r}.
    """
    y = u1_map(x, ctx=ctx)
    qv = q_map(y**6, ctx=ctx)
    if qv <= 0:
        raise BranchError(f"Q(U1(x)^6) = {mpmath.nstr(qv, 5)} is not positive")
    return v_map(mpmath.root(qv, 6), ctx=ctx)


@with_precision
def p_map_12(s, *, ctx: PrecCtx | None = None) -> mpf:
    """Twelfth-power form P(s^(1/12))^12: maps 2k_r k'_r/(2k_{r/25}k'_{r/25}) one level up."""
    s = to_mpf(s)
    if s <= 0:
        raise DomainError(f"argument must be positive, got {s}")
    return p_map(mpmath.root(s, 12), ctx=ctx) ** 12


@with_precision
def p_sequence(k_r0, k_r0_over_25, n: int, *, kp_r0=None, kp_r0_over_25=None,
               ctx: PrecCtx | None = None) -> list[mpf]:
    """[k_{25 r0}, ..., k_{25^n r0}] from the consistent pair (k_{r0/25}, k_{r0})."""
    if int(n) != n or n < 1:
        raise DomainError(f"n must be a positive integer, got {n}")
    k0, k1 = to_mpf(k_r0), to_mpf(k_r0_over_25)
    for v in (k0, k1):
        if not 0 < v < 1:
            raise DomainError(f"moduli must lie in (0, 1), got {v}")
    kp0 = mpmath.sqrt(1 - k0 * k0) if kp_r0 is None else to_mpf(kp_r0)
    kp1 = mpmath.sqrt(1 - k1 * k1) if kp_r0_over_25 is None else to_mpf(kp_r0_over_25)
    base = 4 * (k0 * kp0) ** 2
    x0 = mpmath.root(k0 * kp0 / (k1 * kp1), 12)

    def run(c):
        x, prod, out, smallest = x0, mpf(1), [], mpf(1)
        for _ in range(int(n)):
            # arcsinh((11+y)/2) only sees y = U1(x)^6 in its low digits
            smallest = min(smallest, u1_map(x, ctx=c) ** 6)
            x = p_map(x, ctx=c)
            prod *= x
            out.append(modulus_from_product(base * prod**24))
        return out, smallest

    out, smallest = run(ctx)
    if smallest < mpf(10) ** -3:
        boosted = PrecCtx(ctx.digits + int(-mpmath.log10(smallest)) + 5, ctx.guard)
        with mp.workdps(boosted.dps):
            out, _ = run(boosted)
    return [+v for v in out]


def p_iterate(r0, k_r0, k_r0_over_25, n: int, *, kp_r0=None, kp_r0_over_25=None,
              ctx: PrecCtx | None = None) -> mpf:
    """k_{25^n r0} from k_{r0} and k_{r0/25} by the iterated P-map."""
    r0 = to_mpf(r0)
    if r0 <= 0:
        raise DomainError(f"r0 must be positive, got {r0}")
    return p_sequence(k_r0, k_r0_over_25, n, kp_r0=kp_r0,
                      kp_r0_over_25=kp_r0_over_25, ctx=ctx)[-1]


# ---------------------------------------------------------------------------
# fifth base: u(x) = 2F1(1/6, 5/6; 1; x)


def _u(x, ctx):
    return hyp2f1(mpf(1) / 6, mpf(5) / 6, 1, x, ctx=ctx)


def _u_complement(x, ctx):
    """u(1 - x) without forming 1 - x."""
    return hyp2f1(mpf(1) / 6, mpf(5) / 6, 1, one_minus_z=x, ctx=ctx)


@with_precision
def beta_inverse(x, *, ctx: PrecCtx | None = None) -> mpf:
    """r = (u(1-x)/u(x))^2 for the fifth-base modulus x in (0, 1)."""
    x = to_mpf(x)
    if not 0 < x < 1:
        raise DomainError(f"beta_inverse needs 0 < x < 1, got {x}")
    return (_u_complement(x, ctx) / _u(x, ctx)) ** 2


@with_precision
def beta_of_k(k, *, kp=None, ctx: PrecCtx | None = None) -> mpf:
    """beta <= 1/2 with 432/(beta(1-beta)) = 256(k^2+k'^4)^3/(kk')^4."""
    k = to_mpf(k)
    if not 0 < k < 1:
        raise DomainError(f"beta_of_k needs 0 < k < 1, got {k}")
    kp = mpmath.sqrt(1 - k * k) if kp is None else to_mpf(kp)
    lam, lamc = k * k, kp * kp
    # sqrt(1 - 1728/j) = (1+lam)(2-lam)|1-2lam| / (2 (1-lam+lam^2)^(3/2))
    s = (1 + lam) * (1 + lamc) * abs(lamc - lam) / (2 * (lam * lam + lamc) ** (mpf(3) / 2))
    # beta = (1 - s)/2 written without cancellation
    return (1 - s * s) / (2 * (1 + s))


@with_precision
def beta_modulus(r, *, ctx: PrecCtx | None = None) -> mpf:
    """beta_r solving u(1-beta)/u(beta) = sqrt(r), by root finding (no j or k involved)."""
    r = to_mpf(r)
    if r <= 0:
        raise DomainError(f"beta_modulus needs r > 0, got {r}")
    if r < 1:
        return 1 - beta_modulus(1 / r, ctx=ctx)
    if r == 1:
        return mpf(1) / 2
    target = mpmath.sqrt(r)

    def g(t):
        b = mpmath.exp(t)
        return _u_complement(b, ctx) / _u(b, ctx) - target

    # j ~ 1/q + 744 with q = exp(-2 pi sqrt r) and beta ~ 432/j
    guess = min(mpf(432) / (mpmath.exp(2 * mp.pi * target) + 744), mpf(1) / 2 - mpf(1) / 100)
    t = mpmath.findroot(g, (mpmath.log(guess), mpmath.log(guess) * (1 + mpf(1) / 100)),
                        tol=resolve(ctx).eps ** 2, verify=False, maxsteps=200)
    return mpmath.exp(t)
