"""Solvers for b^2/(20a) + bX^3 + aX^6 = C1 X^5.

Writing X for the cube of the sextic unknown, the equation becomes
``b^2/(20a) + bX + aX^2 = C1 X^(5/3)``.  With ``j = 250 C1^3/(a^2 b)`` the
substitution ``X = b A/(250a)`` turns it into
``3125 + 250A + A^2 = j^(1/3) A^(5/3)``, solved by ``A = A_r`` where ``j = j_r``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache

import mpmath
from mpmath import mp, mpc, mpf

from .elliptic import ModulusPair, k_inverse, pair_from_L
from .errors import BranchError, ConvergenceError, DomainError
from .jinv import u_inverse_pair
from .numkernel import PrecCtx, hyp2f1, poly_roots, real_root, to_mpf, with_precision
from .rrcf import a_quotient


class SolveMethod(str, Enum):
    MODULAR = "modular"
    PARAMETRIC = "parametric"
    LAGRANGE_SERIES = "lagrange_series"


@dataclass(frozen=True)
class SexticInstance:
    a: mpf
    b: mpf
    C1: mpf

    @classmethod
    def of(cls, a, b, C1) -> "SexticInstance":
        a, b, C1 = to_mpf(a), to_mpf(b), to_mpf(C1)
        if a == 0 or b == 0:
            raise DomainError("a and b must be nonzero")
        return cls(a, b, C1)

    @property
    def j_target(self) -> mpf:
        return 250 * self.C1**3 / (self.a**2 * self.b)

    @property
    def prefactor(self) -> mpf:
        """b/(250a), so that X = prefactor * A."""
        return self.b / (250 * self.a)

    def coefficients(self) -> list[mpf]:
        """Sextic coefficients in Y = X^(1/3), highest degree first."""
        a, b = self.a, self.b
        return [a, -self.C1, 0, b, 0, 0, b * b / (20 * a)]


@dataclass(frozen=True)
class SolveReport:
    method: SolveMethod
    r: mpf | None
    X: mpf | mpc
    residual: mpf
    sextic_root: mpf | mpc
    digits: int
    alpha: mpf | None = None
    # other admissible values, e.g. the complementary modulus branch
    alternates: dict = field(default_factory=dict)


def _cube_roots(x):
    base = mpmath.cbrt(x) if not isinstance(x, mpc) else x ** (mpf(1) / 3)
    w = mpmath.expjpi(mpf(2) / 3)
    return [base, base * w, base * w * w]


def equation_residual(inst: SexticInstance, X, y=None) -> mpf:
    """|b^2/(20a) + bX + aX^2 - C1 y^5| / scale with y a cube root of X (real one by default)."""
    a, b = inst.a, inst.b
    if y is None:
        y = real_root(X, 3) if not isinstance(X, mpc) else X ** (mpf(1) / 3)
    terms = (b * b / (20 * a), b * X, a * X * X)
    scale = max(abs(t) for t in terms)
    return abs(sum(terms) - inst.C1 * y**5) / scale


def branch_residuals(inst: SexticInstance, X) -> list[mpf]:
    """Residuals over the three cube-root branches of X^(1/3)."""
    return [equation_residual(inst, X, y) for y in _cube_roots(X)]


@with_precision
def solve_modular(inst: SexticInstance, *, ctx: PrecCtx | None = None) -> SolveReport:
    """X = b/(250a) A_r with r = k^(-1)(U^(-1)(j)); needs j >= 1728."""
    j = inst.j_target
    if j < 1728 * (1 - ctx.tol()):
        raise BranchError(
            f"j = {mpmath.nstr(j, 15)} < 1728: no real singular modulus; use the series solver")
    j = max(j, mpf(1728))
    inv = u_inverse_pair(j, ctx=ctx)
    r = k_inverse(inv.x, complement=inv.complement, ctx=ctx)
    X = inst.prefactor * a_quotient(r, ctx=ctx)
    y = real_root(X, 3)
    res = equation_residual(inst, X, y)
    alternates = {"alpha_complement": inv.complement}
    if r != 1:
        r_alt = 1 / r
        X_alt = inst.prefactor * a_quotient(r_alt, ctx=ctx)
        alternates.update(r=r_alt, X=X_alt, residual=equation_residual(inst, X_alt))
    if X < 0:
        alternates["branch_residuals"] = branch_residuals(inst, X)
    return SolveReport(SolveMethod.MODULAR, r, X, res, y, ctx.digits, inv.x, alternates)


@with_precision
def oracle_match(inst: SexticInstance, report: SolveReport, *, ctx: PrecCtx | None = None) -> mpf:
    """Relative distance from the reported sextic root to the nearest polynomial root."""
    y = report.sextic_root
    roots = poly_roots(inst.coefficients(), ctx=ctx)
    return min(abs(z - y) for z in roots) / abs(y)


@with_precision
def solve_from_L(L, a, b, *, ctx: PrecCtx | None = None) -> tuple[mpf, SolveReport]:
    """C1 and X for the instance built from the modulus pair generated by L."""
    pair = pair_from_L(L, ctx=ctx)
    a, b = to_mpf(a), to_mpf(b)
    x = pair.k
    x2, xc2 = x * x, pair.kp**2
    j = 256 * (x2 + xc2 * xc2) ** 3 / (x2 * xc2) ** 2
    C1 = real_root(a * a * b * j / 250, 3)
    inst = SexticInstance.of(a, b, C1)
    X = inst.prefactor * x2 * xc2 / (pair.w * pair.w_prime) ** 2 * pair.multiplier() ** 3
    y = real_root(X, 3)
    r = k_inverse(x, complement=pair.kp, ctx=ctx)
    X_eta = inst.prefactor * a_quotient(r, ctx=ctx)
    report = SolveReport(
        SolveMethod.PARAMETRIC, r, X, equation_residual(inst, X, y), y, ctx.digits, x,
        {"X_eta_quotient": X_eta, "cross_route": abs(X - X_eta) / abs(X), "j": j},
    )
    return C1, report


@with_precision
def cube_family_eval(t, b, *, ctx: PrecCtx | None = None) -> tuple[mpf, mpf, mpf]:
    """(a, A, j) of the closed family with C1 = 1 whose cube-root solution is X^(1/3) = t."""
    t, b = to_mpf(t), to_mpf(b)
    disc = 4 * b * b - 10 * b * t * t + 5 * t**4
    if disc < 0:
        raise DomainError(f"4b^2 - 10bt^2 + 5t^4 = {disc} < 0")
    s5 = mpmath.sqrt(5)
    core = -5 * b + 5 * t * t + s5 * mpmath.sqrt(disc)
    a = t**3 * core / (10 * t**6)
    if a == 0:
        raise DomainError("the family degenerates to a = 0 here")
    A = 25 * core / b
    j = 25000 * t**6 / (b * core**2)
    return a, A, j


@with_precision
def cube_family_quadratic(t, b, *, ctx: PrecCtx | None = None) -> tuple[mpf, mpf, mpf]:
    """(p, q, rationality residual): A solves A^2 + pA + q = 0 with p, q from the radical form,
    and cbrt(A^2 j) = 250 t^2/b, reported as |cbrt(A^2 j) - 250t^2/b|."""
    t, b = to_mpf(t), to_mpf(b)
    _, A, j = cube_family_eval(t, b, ctx=ctx)
    # A = 25(-5b + 5t^2 + sqrt5 sqrt(disc))/b is (u + sqrt(D))*c
    u = 25 * (-5 * b + 5 * t * t) / b
    D = 625 * 5 * (4 * b * b - 10 * b * t * t + 5 * t**4) / b**2
    p, q = -2 * u, u * u - D
    return p, q, abs(mpmath.cbrt(A * A * j) - 250 * t * t / b)


# ---------------------------------------------------------------------------
# Lagrange inversion


@lru_cache(maxsize=4096)
def _lagrange_coeff_cached(n: int, dps: int) -> mpf:
    with mp.workdps(dps):
        nn = mpf(n)
        h = hyp2f1(5 * nn / 6, (5 * nn + 3) / 6, 2 * (nn + 3) / 3, mpf(1) / 5,
                   ctx=PrecCtx(max(20, dps - 10)))
        sign = 1 if n % 2 else -1
        return (sign * mpf(5) ** 6 / 3 * nn * mpf(10) ** (-5 * nn / 3) * h
                * mpmath.gamma(5 * nn / 3) / mpmath.gamma(2 + 2 * nn / 3))


@with_precision
def lagrange_coeff(n: int, *, ctx: PrecCtx | None = None) -> mpf:
    """c_n = d^(n-1)/dz^(n-1) (125 - sqrt(12500+z))^(5n/3) at z = 0, in closed form."""
    if int(n) != n or n < 1:
        raise DomainError(f"n must be a positive integer, got {n}")
    return +_lagrange_coeff_cached(int(n), mp.dps)


@with_precision
def lagrange_coeff_series(n: int, *, ctx: PrecCtx | None = None) -> mpf:
    """c_n from the power series of (125 - sqrt(12500+z))^m in y = 3125 - z (independent route).

    125 - sqrt(15625 - y) = (y/250) C(y/62500) with C the Catalan generating function,
    and C(w)^m = sum_k m Gamma(m+2k) / (Gamma(m+k+1) k!) w^k.
    """
    if int(n) != n or n < 1:
        raise DomainError(f"n must be a positive integer, got {n}")
    n = int(n)
    m = mpf(5 * n) / 3
    y = mpf(3125)
    total = mpf(0)
    k = 0
    eps = ctx.eps
    while True:
        coef = m * mpmath.gamma(m + 2 * k) / (mpmath.gamma(m + k + 1) * mpmath.factorial(k))
        e = m + k
        # (n-1)th derivative of y^e
        falling = mpmath.rf(e - n + 2, n - 1) if n > 1 else mpf(1)
        term = coef / mpf(62500) ** k * falling * y ** (e - n + 1)
        total += term
        if k > n and abs(term) < eps * abs(total):
            break
        k += 1
    sign = 1 if (n - 1) % 2 == 0 else -1
    return sign * total / mpf(250) ** m


@dataclass(frozen=True)
class LagrangeSeries:
    j: mpf
    n_terms: int
    c: list
    U0: mpf
    x0: mpf
    converged: bool
    fixed_point_residual: mpf
    branch_residuals: list
    best_branch: int


def _decaying(mags, run=5) -> bool:
    if len(mags) <= run:
        return False
    tail = mags[-(run + 1):]
    return all(tail[i + 1] < tail[i] for i in range(run))


@with_precision
def solve_series(j, n_terms: int | None = None, *, max_terms: int = 1000,
                 ctx: PrecCtx | None = None) -> LagrangeSeries:
    """U0 = sum c_n j^(n/3)/n! and x0 = -125 + sqrt(12500 + U0).

    With ``n_terms`` unset, terms are added until they fall below working
    precision; ``converged`` is False if that did not happen within the budget.
    Terms that are still growing at the end raise :class:`ConvergenceError`.
    """
    j = to_mpf(j)
    if j < 0:
        raise DomainError("the series path takes j >= 0 (negative j is out of scope)")
    budget = int(n_terms) if n_terms is not None else max_terms
    if budget < 1:
        raise DomainError("need at least one term")
    cj = mpmath.cbrt(j)
    U0 = mpf(0)
    cs, mags = [], []
    converged = False
    fact = mpf(1)
    power = mpf(1)
    for n in range(1, budget + 1):
        c = lagrange_coeff(n, ctx=ctx)
        fact *= n
        power *= cj
        term = c * power / fact
        cs.append(c)
        mags.append(abs(term))
        U0 += term
        if j == 0 or (n > 5 and abs(term) < ctx.eps * abs(U0) and _decaying(mags)):
            converged = True
            if n_terms is None:
                break
    if not converged and not _decaying(mags):
        profile = [mpmath.nstr(m, 5) for m in mags[-10:]]
        raise ConvergenceError(
            f"Lagrange series terms are not decaying at j = {mpmath.nstr(j, 10)}",
            residual=mags[-1], profile=profile)
    x0 = -125 + mpmath.sqrt(12500 + U0)
    fp = abs(U0 - cj * (125 - mpmath.sqrt(12500 + U0)) ** (mpf(5) / 3))
    # x0 < 0 here, so X^(5/3) needs a cube root of -1
    lhs = 3125 + 250 * x0 + x0 * x0
    x53 = mpc(x0) ** (mpf(5) / 3)
    branches = [mpmath.expjpi(mpf(s) / 3) for s in (1, 3, 5)]
    res = [abs(lhs - cj * w * x53) for w in branches]
    best = min(range(3), key=res.__getitem__)
    return LagrangeSeries(j, len(cs), cs, U0, x0, converged, fp, res, best)


# ---------------------------------------------------------------------------
# nested radical


@dataclass(frozen=True)
class NestedRadical:
    value: mpf | mpc
    residual: mpf
    iterations: int


def _nested_step(Z, j):
    return (-125 / j + mpmath.sqrt(12500 / j**2 + Z**5)) ** (mpf(1) / 3)


@with_precision
def nested_radical(j, depth: int | None = None, *, max_iter: int = 20000,
                   ctx: PrecCtx | None = None) -> NestedRadical:
    """Iterate Z -> cbrt(-125/j + sqrt(12500/j^2 + Z^5)) from Z = 0 (principal branches).

    The limit is (A_r/j)^(1/3).  With ``depth`` the iteration runs exactly that
    many steps; otherwise until the step falls below working precision.
    """
    j = to_mpf(j)
    if j < 1728:
        raise DomainError("the nested radical is taken on the real path j >= 1728")
    Z = mpc(0)
    if depth is not None:
        if depth < 0:
            raise DomainError("depth must be >= 0")
        for _ in range(depth):
            Z = _nested_step(Z, j)
        steps = depth
    else:
        tol = ctx.eps * 10
        for steps in range(1, max_iter + 1):
            new = _nested_step(Z, j)
            done = abs(new - Z) <= tol * max(abs(new), 1)
            Z = new
            if done:
                break
        else:
            raise ConvergenceError(
                f"nested radical did not settle in {max_iter} steps at j = {mpmath.nstr(j, 10)}",
                residual=abs(_nested_step(Z, j) - Z))
    res = abs(_nested_step(Z, j) - Z)
    if abs(Z.imag) <= ctx.tol() * max(abs(Z.real), ctx.eps):
        Z = Z.real
    return NestedRadical(Z, res, steps)


# ---------------------------------------------------------------------------
# multiplier instance


@with_precision
def multiplier_instance(pair: ModulusPair, *, ctx: PrecCtx | None = None) -> tuple[SexticInstance, mpf]:
    """a = (k k')^2, b = (w w')^2; then X = m5^3/250.  Returns the instance and m5."""
    a = (pair.k * pair.kp) ** 2
    b = (pair.w * pair.w_prime) ** 2
    x = pair.k
    x2, xc2 = x * x, pair.kp**2
    j = 256 * (x2 + xc2 * xc2) ** 3 / (x2 * xc2) ** 2
    C1 = real_root(a * a * b * j / 250, 3)
    return SexticInstance.of(a, b, C1), pair.multiplier()
