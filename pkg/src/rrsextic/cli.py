"""Command-line front end: ``rrsextic solve|eval|verify|examples|table``."""

from __future__ import annotations

import argparse
import csv
import io
import json
import re
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path

import mpmath
from mpmath import mp, mpf

from . import __version__
from .cache import ValueCache, cache_dir_from_env
from .elliptic import ModulusPair, ellipK, k_modulus, k_pair, modulus_from_product, p_map_12, pair_from_L
from .errors import BranchError, ConvergenceError, DomainError, RRSexticError, VerificationError
from .jinv import ModularPoint, j_value, u_forward, u_inverse_pair
from .numkernel import PrecCtx, parse_number, to_str
from .qseries import Nome, eta, f_minus
from .rrcf import a_quotient, n_value, rrcf
from .sextic import (
    SexticInstance,
    equation_residual,
    multiplier_instance,
    oracle_match,
    solve_from_L,
    solve_modular,
    solve_series,
)
from .verify import conjecture_suite, identity_suite

EXIT_OK, EXIT_INPUT, EXIT_CONVERGENCE, EXIT_VERIFY = 0, 2, 3, 4


@dataclass(frozen=True)
class Config:
    default_digits: int = 60
    cache_dir: Path | None = None
    output: str = "json"

    def __post_init__(self):
        if self.default_digits < 20:
            raise DomainError("digits must be >= 20")
        if self.output not in ("json", "csv", "text"):
            raise DomainError(f"unknown output format {self.output!r}")

    @classmethod
    def from_args(cls, args) -> "Config":
        cache = args.cache_dir or cache_dir_from_env()
        if args.no_cache:
            cache = None
        return cls(args.digits, Path(cache) if cache else None, args.output)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


# ---------------------------------------------------------------------------
# argument helpers

_NOME = re.compile(r"e\^-(\d*)pi(?:\*sqrt\((.+)\))?")


def parse_nome(text: str) -> Nome:
    """``e^-pi``, ``e^-2pi``, ``e^-pi*sqrt(R)`` keep their exact origin; anything else is a number."""
    s = text.replace(" ", "")
    m = _NOME.fullmatch(s)
    if m:
        scale = int(m.group(1) or 1)
        r = parse_number(m.group(2)) if m.group(2) else mpf(1)
        return Nome.from_r(r, scale)
    return Nome(parse_number(s))


def _grid(text: str) -> list:
    try:
        return [parse_number(t) for t in text.split(",") if t.strip()]
    except DomainError as exc:
        raise UsageError(str(exc)) from exc


def _fmt(value, digits):
    if isinstance(value, dict):
        return {k: _fmt(v, digits) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_fmt(v, digits) for v in value]
    if isinstance(value, (mpf, mpmath.mpc)):
        return to_str(value, digits)
    return value


def _envelope(inp, result, residual, digits, method):
    return {
        "input": inp,
        "result": _fmt(result, digits),
        "residual": None if residual is None else to_str(residual, 6),
        "digits": digits,
        "method": method,
        "metadata": {"version": __version__,
                     "timestamp": datetime.now(timezone.utc).isoformat(timespec="seconds")},
    }


def _render(payload: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(payload, indent=2)
    flat = {}

    def walk(prefix, v):
        if isinstance(v, dict):
            for k, x in v.items():
                walk(f"{prefix}.{k}" if prefix else k, x)
        elif isinstance(v, list):
            for i, x in enumerate(v):
                walk(f"{prefix}[{i}]", x)
        else:
            flat[prefix] = "" if v is None else str(v)

    walk("", {k: v for k, v in payload.items() if k != "metadata"})
    if fmt == "text":
        return "\n".join(f"{k}: {v}" for k, v in flat.items())
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["key", "value"])
    w.writerows(flat.items())
    return buf.getvalue().rstrip("\n")


# ---------------------------------------------------------------------------
# subcommands


def cmd_solve(args, cfg: Config, ctx: PrecCtx) -> tuple[dict, int]:
    a, b, c1 = (parse_number(v) for v in (args.a, args.b, args.c1))
    inst = SexticInstance.of(a, b, c1)
    inp = {"a": args.a, "b": args.b, "c1": args.c1}
    if args.method == "series":
        series = solve_series(inst.j_target, ctx=ctx)
        X = inst.prefactor * series.x0
        result = {"j": inst.j_target, "X": X, "x0": series.x0, "U0": series.U0,
                  "n_terms": series.n_terms, "converged": series.converged,
                  "branch": ["exp(i pi/3)", "-1", "exp(-i pi/3)"][series.best_branch]}
        res = series.branch_residuals[series.best_branch] / max(abs(series.U0), 1)
        code = EXIT_OK if series.converged else EXIT_CONVERGENCE
        return _envelope(inp, result, res, ctx.digits, "lagrange_series"), code
    report = solve_modular(inst, ctx=ctx)
    result = {"j": inst.j_target, "alpha": report.alpha, "r": report.r, "X": report.X,
              "sextic_root": report.sextic_root,
              "oracle_match": oracle_match(inst, report, ctx=ctx),
              "alternate": {k: v for k, v in report.alternates.items()}}
    return _envelope(inp, result, report.residual, ctx.digits, "modular"), EXIT_OK


def _need(args, name):
    value = getattr(args, name)
    if value is None:
        raise UsageError(f"--{name} is required for --fn {args.fn}")
    return value


def cmd_eval(args, cfg: Config, ctx: PrecCtx) -> tuple[dict, int]:
    fn = args.fn
    inp = {"fn": fn, "at": args.at, "r": args.r}

    def nome():
        if args.at is not None:
            return parse_nome(args.at)
        return Nome.from_r(parse_number(_need(args, "r")))

    def r_arg():
        return parse_number(args.r if args.r is not None else _need(args, "at"))

    if fn == "rrcf":
        value = rrcf(nome(), ctx=ctx)
    elif fn == "f":
        value = f_minus(nome(), ctx=ctx)
    elif fn == "N":
        value = n_value(nome(), ctx=ctx)
    elif fn == "eta":
        value = eta(r_arg(), ctx=ctx)
    elif fn == "k":
        value = k_modulus(r_arg(), ctx=ctx)
    elif fn == "j":
        value = j_value(r_arg(), ctx=ctx)
    elif fn == "A":
        value = a_quotient(r_arg(), ctx=ctx)
    elif fn == "K":
        value = ellipK(parse_number(_need(args, "at")), ctx=ctx)
    else:  # pragma: no cover - argparse restricts choices
        raise UsageError(f"unknown function {fn}")
    return _envelope(inp, {"value": value}, None, ctx.digits, fn), EXIT_OK


def cmd_verify(args, cfg: Config, ctx: PrecCtx) -> tuple[dict, int]:
    grid = _grid(args.grid)
    suite = identity_suite if args.suite == "identities" else conjecture_suite
    report = suite(grid, ctx=ctx, jobs=args.jobs, strict=False)
    payload = report.to_dict()
    payload["metadata"] = {"version": __version__,
                           "timestamp": datetime.now(timezone.utc).isoformat(timespec="seconds")}
    return payload, EXIT_OK if report.ok else EXIT_VERIFY


def _example(n: int, ctx: PrecCtx) -> dict:
    s5 = mpmath.sqrt(5)
    if n == 1:
        inst = SexticInstance.of(1, 3, parse_number("26/(5*cbrt(3))"))
        rep = solve_modular(inst, ctx=ctx)
        inv = u_inverse_pair(inst.j_target, ctx=ctx)
        return {"U(sqrt3/2)": u_forward(mpmath.sqrt(3) / 2, ctx=ctx), "j": inst.j_target,
                "alpha": inv.x, "alpha_complement": inv.complement, "r": rep.r, "X": rep.X,
                "residual": rep.residual, "r_complement": rep.alternates.get("r"),
                "X_complement": rep.alternates.get("X")}
    if n == 3:
        s = solve_series(800, ctx=ctx)
        return {"j": s.j, "U0": s.U0, "x0": s.x0, "n_terms": s.n_terms,
                "converged": s.converged, "fixed_point_residual": s.fixed_point_residual}
    if n == 4:
        C1, rep = solve_from_L(mpf(1) / 3, 1, 1, ctx=ctx)
        pair = pair_from_L(mpf(1) / 3, ctx=ctx)
        return {"w": pair.w, "w_closed": mpmath.sqrt(mpf(11) / 78) / 3, "k": pair.k,
                "k25": pair.k25, "r_L": rep.r, "C1": C1, "X": rep.X,
                "X_eta_quotient": rep.alternates["X_eta_quotient"], "residual": rep.residual}
    if n == 5:
        core = 9 + 4 * s5
        rad = 2 * mpmath.sqrt(38 + 17 * s5)
        return {"k5": k_modulus(5, ctx=ctx),
                "k5_radical": mpmath.sqrt((core - rad) / (18 + 8 * s5)),
                "k1/5": k_modulus(mpf(1) / 5, ctx=ctx),
                "k1/5_radical": mpmath.sqrt((core + rad) / (18 + 8 * s5))}
    if n == 6:
        k25, k25p = k_pair(25, ctx=ctx)
        e125 = (9 - 4 * s5) * p_map_12(1, ctx=ctx) ** 2
        big = 161 + 72 * s5
        e625 = (p_map_12(161 - 72 * s5, ctx=ctx) / big) ** 2
        return {"k1": k_modulus(1, ctx=ctx),
                "k25": k25,
                "k25_radical": 1 / mpmath.sqrt(2 * (51841 + 23184 * s5 + 12 * mpmath.sqrt(
                    37325880 + 16692641 * s5))),
                "k125_pmap": modulus_from_product(e125), "k125": k_modulus(125, ctx=ctx),
                "k625_pmap": modulus_from_product(e625), "k625": k_modulus(625, ctx=ctx)}
    if n == 7:
        k, kp = k_pair(1, ctx=ctx)
        k25, k25p = k_pair(25, ctx=ctx)
        inst, m5 = multiplier_instance(ModulusPair.from_moduli(k, k25, kp, k25p), ctx=ctx)
        X = m5**3 / 250
        return {"a": inst.a, "b": inst.b, "C1": inst.C1, "m5": m5, "X": X,
                "residual": equation_residual(inst, X)}
    if n == 8:
        inst = SexticInstance.of(4, 125, 132)
        rep = solve_modular(inst, ctx=ctx)
        X8 = (mpf(143375) / 16 + 64125 * s5 / 16
              + mpmath.sqrt(mpf(20553203125) / 32 + 9191671875 * s5 / 32) / 2)
        return {"j": inst.j_target, "r": rep.r, "X": rep.X, "X_radical": X8,
                "residual": rep.residual, "oracle_match": oracle_match(inst, rep, ctx=ctx)}
    if n == 10:
        a, b = mpf(1), mpf(1)
        C1 = mpmath.cbrt(32 * a * a * b)
        inst = SexticInstance.of(a, b, C1)
        rep = solve_modular(inst, ctx=ctx)
        return {"j": inst.j_target, "r": rep.r, "X": rep.X,
                "X_from_A2": b / (250 * a) * a_quotient(2, ctx=ctx), "residual": rep.residual}
    raise UsageError(f"no example {n}")


EXAMPLES = (1, 3, 4, 5, 6, 7, 8, 10)


def cmd_examples(args, cfg: Config, ctx: PrecCtx) -> tuple[dict, int]:
    ids = EXAMPLES if args.id == "all" else (int(args.id),)
    result = {f"example_{i}": _example(i, ctx) for i in ids}
    return _envelope({"id": args.id}, result, None, ctx.digits, "examples"), EXIT_OK


TABLE_COLUMNS = ("r", "k", "j", "R", "A")


def _table_row(r, ctx: PrecCtx) -> dict:
    with mp.workdps(ctx.dps):
        p = ModularPoint.at(r, ctx=ctx)
        return {c: to_str(getattr(p, c), ctx.dps) for c in TABLE_COLUMNS}


def cmd_table(args, cfg: Config, ctx: PrecCtx) -> tuple[dict, int]:
    grid_text = [t.strip() for t in args.r.split(",") if t.strip()]
    grid = _grid(args.r)
    cache = ValueCache(cfg.cache_dir) if cfg.cache_dir else None
    rows: list = [None] * len(grid)
    todo = []
    for i, (text, r) in enumerate(zip(grid_text, grid)):
        # keyed by the argument as written, so any stored precision can serve it
        hit = cache.get("modular_point", {"r": text}, ctx.dps) if cache else None
        if hit is not None:
            rows[i] = hit
        else:
            todo.append(i)
    if todo:
        if args.jobs > 1 and len(todo) > 1:
            with ProcessPoolExecutor(max_workers=args.jobs) as pool:
                computed = list(pool.map(_table_row, [grid[i] for i in todo], [ctx] * len(todo)))
        else:
            computed = [_table_row(grid[i], ctx) for i in todo]
        for i, row in zip(todo, computed):
            rows[i] = row
            if cache:
                cache.put("modular_point", {"r": grid_text[i]}, ctx.dps, row)
    out_rows = []
    for row in rows:
        with mp.workdps(ctx.dps):
            out_rows.append({c: to_str(mpf(row[c]), ctx.digits) for c in TABLE_COLUMNS})
    if args.out:
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=TABLE_COLUMNS, lineterminator="\n")
        w.writeheader()
        w.writerows(out_rows)
        path = Path(args.out)
        tmp = path.with_name(f".{path.name}.tmp")
        tmp.write_text(buf.getvalue())
        tmp.replace(path)
    result = {"rows": out_rows, "out": args.out,
              "cache_hits": cache.hits if cache else 0}
    return _envelope({"r": args.r}, result, None, ctx.digits, "table"), EXIT_OK


COMMANDS = {"solve": cmd_solve, "eval": cmd_eval, "verify": cmd_verify,
            "examples": cmd_examples, "table": cmd_table}


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--digits", type=int, default=60, help="reported significant digits (>= 20)")
    common.add_argument("--output", choices=("json", "csv", "text"), default="json")
    common.add_argument("--cache-dir", default=None,
                        help="value cache directory (else $RRSEXTIC_CACHE_DIR)")
    common.add_argument("--no-cache", action="store_true")
    common.add_argument("--jobs", type=int, default=1, help="worker processes for grid commands")

    parser = _Parser(prog="rrsextic", description=__doc__)
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("solve", parents=[common], help="solve b^2/(20a)+bX^3+aX^6=C1 X^5")
    p.add_argument("--a", required=True)
    p.add_argument("--b", required=True)
    p.add_argument("--c1", required=True)
    p.add_argument("--method", choices=("modular", "series"), default="modular")

    p = sub.add_parser("eval", parents=[common], help="evaluate one function")
    p.add_argument("--fn", required=True, choices=("rrcf", "eta", "f", "k", "j", "A", "K", "N"))
    p.add_argument("--at", help="nome (e^-pi, e^-2pi, e^-pi*sqrt(R) or a number) or argument")
    p.add_argument("--r", help="r, for functions of r or to form q = e^(-pi sqrt r)")

    p = sub.add_parser("verify", parents=[common], help="run a residual suite")
    p.add_argument("--suite", choices=("identities", "conjectures"), required=True)
    p.add_argument("--grid", default="1,2,4")

    p = sub.add_parser("examples", parents=[common], help="reproduce worked examples")
    p.add_argument("--id", default="all", choices=[str(i) for i in EXAMPLES] + ["all"])

    p = sub.add_parser("table", parents=[common], help="tabulate r, k, j, R, A")
    p.add_argument("--r", required=True)
    p.add_argument("--out")
    return parser


def dispatch(argv: list[str] | None = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        cfg = Config.from_args(args)
        ctx = PrecCtx(cfg.default_digits)
        with mp.workdps(ctx.dps):
            payload, code = COMMANDS[args.command](args, cfg, ctx)
    except (UsageError, DomainError, BranchError) as exc:
        print(f"error: {exc}", file=stderr)
        return EXIT_INPUT
    except ConvergenceError as exc:
        print(f"convergence failure: {exc}", file=stderr)
        return EXIT_CONVERGENCE
    except VerificationError as exc:
        print(f"verification failure: {exc}", file=stderr)
        return EXIT_VERIFY
    except RRSexticError as exc:
        print(f"error: {exc}", file=stderr)
        return EXIT_INPUT
    print(_render(payload, cfg.output), file=stdout)
    return code


def main() -> None:
    sys.exit(dispatch())
