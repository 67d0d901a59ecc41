"""Arbitrary-precision kernel: precision context, AGM, 2F1 and a polynomial root oracle.

All numbers are mpmath ``mpf``/``mpc`` values.  Every public operation takes a
:class:`PrecCtx` and evaluates at ``digits + guard`` decimal digits; results are
returned at that working precision and only rounded to ``digits`` when
serialized (see :func:`to_str`).
"""

from __future__ import annotations

import ast
import functools
import operator
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

import mpmath
from mpmath import mp, mpc, mpf

from .errors import ConvergenceError, DomainError


@dataclass(frozen=True)
class PrecCtx:
    """Working precision: ``digits`` reported digits plus ``guard`` extra digits."""

    digits: int = 60
    guard: int = 10

    def __post_init__(self):
        if int(self.digits) != self.digits or self.digits < 20:
            raise DomainError(f"digits must be an integer >= 20, got {self.digits!r}")
        if int(self.guard) != self.guard or self.guard < 1:
            raise DomainError(f"guard must be a positive integer, got {self.guard!r}")

    @property
    def dps(self) -> int:
        return self.digits + self.guard

    @property
    def eps(self) -> mpf:
        """Truncation threshold 10^-(digits+guard)."""
        with mp.workdps(self.dps):
            return mpf(10) ** (-self.dps)

    def tol(self, slack: int = 10) -> mpf:
        """Acceptance threshold 10^-(digits-slack)."""
        with mp.workdps(self.dps):
            return mpf(10) ** (-(self.digits - slack))

    def workdps(self, extra: int = 0):
        return mp.workdps(self.dps + extra)

    def doubled(self) -> "PrecCtx":
        return PrecCtx(2 * self.digits, self.guard)


DEFAULT_CTX = PrecCtx()


def resolve(ctx: PrecCtx | None) -> PrecCtx:
    return DEFAULT_CTX if ctx is None else ctx


def with_precision(fn: Callable) -> Callable:
    """Run ``fn`` at the working precision of its ``ctx`` keyword/positional."""

    @functools.wraps(fn)
    def wrapper(*args, ctx: PrecCtx | None = None, **kwargs):
        ctx = resolve(ctx)
        with mp.workdps(ctx.dps):
            return fn(*args, ctx=ctx, **kwargs)

    return wrapper


# ---------------------------------------------------------------------------
# conversions


_FUNCS = {
    "sqrt": mpmath.sqrt,
    "cbrt": mpmath.cbrt,
    "exp": mpmath.exp,
    "log": mpmath.log,
    "ln": mpmath.log,
}
_DECIMAL = re.compile(r"[+-]?(\d+\.?\d*|\.\d+)([eE][+-]?\d+)?")
_BINOPS = {
    ast.Add: operator.add,
    ast.Sub: operator.sub,
    ast.Mult: operator.mul,
    ast.Div: operator.truediv,
    ast.Pow: operator.pow,
}


def _eval_node(node):
    if isinstance(node, ast.Expression):
        return _eval_node(node.body)
    if isinstance(node, ast.Constant) and isinstance(node.value, (int, str)):
        return mpf(node.value)
    if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
        return _BINOPS[type(node.op)](_eval_node(node.left), _eval_node(node.right))
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
        v = _eval_node(node.operand)
        return -v if isinstance(node.op, ast.USub) else v
    if isinstance(node, ast.Name):
        if node.id == "pi":
            return +mp.pi
        if node.id == "e":
            return mpmath.e()
    if isinstance(node, ast.Call) and isinstance(node.func, ast.Name) and node.func.id in _FUNCS:
        if len(node.args) != 1 or node.keywords:
            raise DomainError(f"{node.func.id}() takes one argument")
        return _FUNCS[node.func.id](_eval_node(node.args[0]))
    raise DomainError(f"unsupported expression element: {ast.dump(node)}")


def parse_number(text: str) -> mpf:
    """Parse a decimal string or a small closed-form expression at current precision.

    Accepts decimals (kept exact as strings), ``p/q``, ``^`` or ``**``, implicit
    products like ``2pi``, the names ``pi`` and ``e`` and the functions sqrt,
    cbrt, exp, log.  The nome literals ``e^-pi``, ``e^-2pi`` and
    ``e^-pi*sqrt(5)`` are read as ``exp(<exponent>)`` of everything after ``^``.
    """
    s = text.strip().replace(" ", "")
    if not s:
        raise DomainError("empty number")
    if _DECIMAL.fullmatch(s):
        return mpf(s)
    if s.startswith("e^"):
        return mpmath.exp(parse_number(s[2:]))
    s = s.replace("^", "**")
    # implicit multiplication: 2pi, 5sqrt(3), 2(1+x)
    out = []
    for i, ch in enumerate(s):
        exponent = ch in "eE" and s[i + 1:i + 2] in tuple("0123456789+-") and s[i - 1:i].isdigit()
        if i and not exponent and (ch.isalpha() or ch == "(") and (s[i - 1].isdigit() or s[i - 1] == ")"):
            out.append("*")
        out.append(ch)
    s = "".join(out)
    try:
        tree = ast.parse(s, mode="eval")
    except SyntaxError as exc:
        raise DomainError(f"cannot parse number {text!r}") from exc
    # decimal literals go through mpf(str), never through binary floats
    for node in ast.walk(tree):
        if isinstance(node, ast.Constant):
            if isinstance(node.value, float):
                node.value = ast.get_source_segment(s, node)
            elif isinstance(node.value, str):
                raise DomainError(f"cannot parse number {text!r}")
    return _eval_node(tree)


def to_mpf(x) -> mpf:
    """Coerce int, Fraction, str, mpf (or a float, exactly) to ``mpf``."""
    if isinstance(x, mpf):
        return +x
    if isinstance(x, bool):
        raise DomainError("booleans are not numbers here")
    if isinstance(x, int):
        return mpf(x)
    if isinstance(x, Fraction):
        return mpf(x.numerator) / x.denominator
    if isinstance(x, str):
        return parse_number(x)
    if isinstance(x, float):
        if x != x or x in (float("inf"), float("-inf")):
            raise DomainError(f"non-finite input {x!r}")
        return mpf(x)
    if isinstance(x, mpc):
        if x.imag != 0:
            raise DomainError(f"expected a real number, got {x}")
        return x.real
    raise DomainError(f"cannot convert {type(x).__name__} to a real number")


def require_finite(*values) -> None:
    for v in values:
        if not mpmath.isfinite(v):
            raise DomainError(f"non-finite input {v}")


def to_str(x, digits: int) -> str:
    """Decimal string of ``x`` at ``digits`` significant digits (complex as a+bj)."""
    if isinstance(x, mpc):
        return mpmath.nstr(x, digits, min_fixed=-mpmath.inf, max_fixed=mpmath.inf)
    return mpmath.nstr(x, digits, strip_zeros=False)


def real_root(x: mpf, n: int) -> mpf:
    """Real n-th root, sign-preserving for odd ``n``."""
    if x >= 0:
        return mpmath.root(x, n)
    if n % 2 == 0:
        raise DomainError(f"even root of negative number {x}")
    return -mpmath.root(-x, n)


# ---------------------------------------------------------------------------
# arithmetic-geometric mean


@with_precision
def agm(x, y, *, ctx: PrecCtx | None = None, max_iter: int = 200) -> mpf:
    """Arithmetic-geometric mean of ``x > 0`` and ``y >= 0``."""
    a, b = to_mpf(x), to_mpf(y)
    require_finite(a, b)
    if a <= 0 or b < 0:
        raise DomainError(f"agm needs x > 0, y >= 0 (got {a}, {b})")
    if b == 0:
        return mpf(0)
    eps = ctx.eps
    for _ in range(max_iter):
        if abs(a - b) < eps * a:
            return a
        a, b = (a + b) / 2, mpmath.sqrt(a * b)
    raise ConvergenceError("agm did not converge", residual=abs(a - b))


# ---------------------------------------------------------------------------
# Gauss hypergeometric function


def _hyp2f1_direct(a, b, c, z, eps, max_terms=100000):
    term = mpf(1)
    total = mpf(1)
    n = 0
    while True:
        term *= (a + n) * (b + n) / ((c + n) * (n + 1)) * z
        total += term
        n += 1
        # stop once past the peak and below threshold
        if abs(term) < eps * abs(total) and n > abs(a * b / c):
            return total
        if n > max_terms:
            raise ConvergenceError("2F1 series did not converge", residual=abs(term))


def _hyp2f1_log(a, b, y, eps, max_terms=100000):
    """F(a, b; a+b; 1-y) by the logarithmic connection formula around z = 1."""
    lny = mpmath.log(y)
    psi1 = mpmath.digamma(1)
    psia = mpmath.digamma(a)
    psib = mpmath.digamma(b)
    coef = mpf(1)
    total = coef * (2 * psi1 - psia - psib - lny)
    n = 0
    while True:
        coef *= (a + n) * (b + n) / ((n + 1) ** 2) * y
        psi1 += mpf(1) / (n + 1)
        psia += 1 / (a + n)
        psib += 1 / (b + n)
        n += 1
        term = coef * (2 * psi1 - psia - psib - lny)
        total += term
        if abs(term) < eps * abs(total) and n > 2:
            break
        if n > max_terms:
            raise ConvergenceError("2F1 log series did not converge", residual=abs(term))
    return mpmath.gamma(a + b) / (mpmath.gamma(a) * mpmath.gamma(b)) * total


def _hyp2f1_connect(a, b, c, y, eps):
    """F(a, b; c; 1-y) by the connection formula, for non-integer c-a-b."""
    g = mpmath.gamma
    t1 = g(c) * g(c - a - b) / (g(c - a) * g(c - b)) * _hyp2f1_direct(a, b, a + b - c + 1, y, eps)
    t2 = (
        y ** (c - a - b)
        * g(c) * g(a + b - c) / (g(a) * g(b))
        * _hyp2f1_direct(c - a, c - b, c - a - b + 1, y, eps)
    )
    return t1 + t2


@with_precision
def hyp2f1(a, b, c, z=None, *, one_minus_z=None, ctx: PrecCtx | None = None) -> mpf:
    """Gauss 2F1(a, b; c; z) for real ``0 <= z < 1``.

    Summed directly for ``z <= 1/2``; above that the ``z -> 1 - z`` connection
    formula is used (the logarithmic form when ``c = a + b``).  Passing
    ``one_minus_z`` instead of ``z`` keeps full relative accuracy near z = 1.
    """
    a, b, c = (to_mpf(v) for v in (a, b, c))
    if (z is None) == (one_minus_z is None):
        raise DomainError("give exactly one of z and one_minus_z")
    if z is None:
        y = to_mpf(one_minus_z)
        z = 1 - y
    else:
        z = to_mpf(z)
        y = 1 - z
    if not (0 <= z < 1 and 0 < y <= 1):
        raise DomainError(f"hyp2f1 implemented for 0 <= z < 1, got {z}")
    eps = ctx.eps / 100
    if z <= mpf(1) / 2:
        return _hyp2f1_direct(a, b, c, z, eps)
    s = c - a - b
    if s == 0:
        return _hyp2f1_log(a, b, y, eps)
    if s == int(s):
        # integer c-a-b other than 0 is not needed anywhere in this package
        raise DomainError("hyp2f1 connection with nonzero integer c-a-b not implemented")
    return _hyp2f1_connect(a, b, c, y, eps)


# ---------------------------------------------------------------------------
# polynomial roots (Aberth-Ehrlich)


def polyval(coeffs: Sequence, x):
    """Horner evaluation; ``coeffs`` from highest degree down."""
    acc = coeffs[0] * 0
    for c in coeffs:
        acc = acc * x + c
    return acc


def _polyval_deriv(coeffs, x):
    p = coeffs[0] * 0
    dp = p
    for c in coeffs:
        dp = dp * x + p
        p = p * x + c
    return p, dp


@with_precision
def poly_roots(coeffs: Sequence, *, ctx: PrecCtx | None = None, max_iter: int = 200) -> list[mpc]:
    """All complex roots of a polynomial by simultaneous Aberth-Ehrlich iteration.

    ``coeffs`` run from the leading coefficient down to the constant term.
    Roots are returned with multiplicity, sorted by (real, imag).
    """
    cs = [mpmath.mpmathify(c) for c in coeffs]
    while cs and cs[0] == 0:
        cs.pop(0)
    if not cs:
        raise DomainError("zero polynomial")
    for c in cs:
        require_finite(c)
    if len(cs) < 2:
        raise DomainError("polynomial degree must be >= 1")
    # exact zero roots are split off; the relative residual cannot certify them
    zeros = []
    while len(cs) > 1 and cs[-1] == 0:
        cs.pop()
        zeros.append(mpc(0))
    n = len(cs) - 1
    if n == 0:
        return zeros
    lead = cs[0]
    cs = [mpc(c) / lead for c in cs]
    radius = 1 + max(abs(c) for c in cs[1:])
    offset = mpmath.sqrt(2) / 2  # irrational angular offset
    zs = [radius * mpmath.expj(2 * mp.pi * k / n + offset) for k in range(n)]
    step_tol = ctx.eps
    res_rel = mpf(10) ** (-(ctx.digits - 5))
    abs_cs = [abs(c) for c in cs]

    def residual(z):
        # relative to the magnitude of the largest term at z
        scale = polyval(abs_cs, abs(z))
        return abs(polyval(cs, z)) / scale if scale else mpf(0)

    for _ in range(max_iter):
        max_step = mpf(0)
        for i in range(n):
            p, dp = _polyval_deriv(cs, zs[i])
            if p == 0:
                continue
            ratio = p / dp if dp != 0 else mpc(step_tol)
            s = mpc(0)
            for j in range(n):
                if j != i:
                    d = zs[i] - zs[j]
                    if d != 0:
                        s += 1 / d
            w = ratio / (1 - ratio * s)
            zs[i] -= w
            max_step = max(max_step, abs(w) / max(1, abs(zs[i])))
        if max_step < step_tol:
            break
    worst = max(residual(z) for z in zs)
    if worst >= res_rel:
        raise ConvergenceError(
            f"Aberth iteration did not reach relative residual {mpmath.nstr(res_rel, 5)}",
            residual=worst,
        )
    return sorted(zs + zeros, key=lambda z: (z.real, z.imag))


def real_roots_in(roots, lo, hi, *, imag_tol) -> list[mpf]:
    """Real parts of roots whose imaginary part is negligible and real part in (lo, hi)."""
    out = []
    for z in roots:
        z = mpmath.mpmathify(z)
        im = z.imag if isinstance(z, mpc) else 0
        re = z.real if isinstance(z, mpc) else z
        if abs(im) <= imag_tol * max(1, abs(re)) and lo < re < hi:
            out.append(re)
    return out


def newton_polish(coeffs: Sequence, x, *, ctx: PrecCtx, steps: int = 8):
    """A few Newton steps on a polynomial, at current precision."""
    for _ in range(steps):
        p, dp = _polyval_deriv(coeffs, x)
        if dp == 0:
            break
        dx = p / dp
        x -= dx
        if abs(dx) <= ctx.eps * max(1, abs(x)):
            break
    return x
