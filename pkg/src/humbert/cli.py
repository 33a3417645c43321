"""Command-line front end.

Usage:
    humbert eval --x -10 --y 20 --method all   # every applicable route
    humbert table1 --out table1.csv            # ratio Psi_1 / L on two rays
    humbert converge --ray=-1,2 --Ks 1,2,3     # error of truncated expansions
    humbert bounds --lemma 2.2 --samples 10000 # sample an explicit inequality

Exit codes: 0 success, 2 domain or hypothesis failure, 3 convergence failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import math
import sys
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Sequence

import numpy as np

from .errors import ConvergenceFailure, ExclusionZoneError, PreconditionError
from .gamma_core import (
    DEFAULT_EXCLUSION_RADIUS,
    fit_growth_constant,
    gamma_ratio_bound,
    pochhammer_ratio_profile,
    shifted_ratio_profile,
)
from .hyper_series import ApproxResult, TruncationPolicy, psi1_double_series
from .params import EvalPoint, Psi1Params
from .psi1_asym import choose_w_thm13, leading_term, psi1_asym_thm12, psi1_asym_thm13
from .psi1_eval import psi1_eval, psi1_laplace, psi1_series_thm11
from .scalars import Exact, context, parse_scalar, precision
from .two_f_two import TwoF2Family, f2f2_growth_check_plus_n, theorem26_shape

TABLE1_RAYS = ((-1, 2), (-1, -2))
TABLE1_T = (10, 100, 1000)
LEMMAS = ("2.1", "2.2", "2.3", "thm2.6")
METHODS = ("auto", "all", "double_series", "thm11", "laplace", "thm12", "thm13")


@dataclass(frozen=True)
class RunConfig:
    params: Psi1Params
    policy: TruncationPolicy
    K: int = 1
    N: int = 1
    w: float = 3.0
    eps: float = 0.1
    out: str | None = None
    mode: str = "standard"


@dataclass(frozen=True)
class TableRow:
    x0: float
    y0: float
    t: float
    ratio: float
    method_value: str
    method_leading: str
    extra: dict = field(default_factory=dict, compare=False)


def fmt(v) -> str:
    """17 significant digits, enough to round-trip a double."""
    return format(float(v), ".17g")


def _write(rows: Iterable[Sequence], header: Sequence[str], out: str | None) -> None:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    if out:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(buf.getvalue())
    else:
        sys.stdout.write(buf.getvalue())


def _result_row(r: ApproxResult) -> list:
    v = complex(r.value)
    return [r.method, fmt(v.real), fmt(v.imag), fmt(r.err_estimate), r.terms_used, "; ".join(r.warnings)]


# -- eval ------------------------------------------------------------------


def _routes(cfg: RunConfig, pt: EvalPoint) -> dict[str, Callable[[], ApproxResult]]:
    p, pol = cfg.params, cfg.policy
    x, y = pt.x, pt.y
    return {
        "auto": lambda: psi1_eval(p, pt, pol),
        "double_series": lambda: psi1_double_series(p, x, y, pol),
        "thm11": lambda: psi1_series_thm11(p, pt, pol),
        "laplace": lambda: psi1_laplace(p, pt, pol),
        "thm12": lambda: psi1_asym_thm12(p, x, y, cfg.K),
        "thm13": lambda: psi1_asym_thm13(p, x, y, choose_w_thm13(p, cfg.w, cfg.eps, cfg.N)),
    }


def cmd_eval(cfg: RunConfig, x: Exact, y: Exact, method: str = "auto") -> list[ApproxResult]:
    pt = EvalPoint(x, y)
    routes = _routes(cfg, pt)
    if method != "all":
        return [routes[method]()]
    out = []
    for name in ("double_series", "thm11", "laplace", "thm12", "thm13"):
        try:
            out.append(routes[name]())
        except PreconditionError as exc:
            print(f"{name}: not applicable ({exc})", file=sys.stderr)
    if not out:
        out.append(routes["auto"]())
    return out


# -- table1 ----------------------------------------------------------------


def table_row(params: Psi1Params, x0: int, y0: int, t: int, policy: TruncationPolicy, mode: str) -> TableRow:
    with precision(mode):
        pt = EvalPoint(x0 * t, y0 * t)
        value = psi1_laplace(params, pt, policy)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            lead = leading_term(params, pt.x, pt.y)
        ratio = value.value / lead
    regime = "thm12" if y0 > 0 else "thm13"
    return TableRow(x0, y0, t, float(ratio.real), value.method, regime, {"imag": float(ratio.imag)})


def _table_row_args(args) -> TableRow:
    return table_row(*args)


def cmd_table1(cfg: RunConfig, jobs: int = 1) -> list[TableRow]:
    tasks = [(cfg.params, x0, y0, t, cfg.policy, cfg.mode) for x0, y0 in TABLE1_RAYS for t in TABLE1_T]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(_table_row_args, tasks))
    return [table_row(*task) for task in tasks]


# -- converge --------------------------------------------------------------


def slope(ts: Sequence[float], errs: Sequence[float]) -> float:
    """Least-squares slope of ``log err`` against ``log t``."""
    return float(np.polyfit(np.log(ts), np.log(errs), 1)[0])


def cmd_converge(cfg: RunConfig, ray: tuple[Fraction, Fraction], ts: Sequence[float], Ks: Sequence[int]):
    """Rows ``(kind, t, K, reference, expansion, rel_err, a3_share, slope)``.

    On a ray with ``y0 > 0`` ``K`` counts terms of the ``y -> +inf`` expansion;
    otherwise it counts ``A3`` terms of the three-block expansion.
    """
    p = cfg.params
    x0, y0 = ray
    rows = []
    errs: dict[int, list[float]] = {K: [] for K in Ks}
    with precision(cfg.mode):
        ctx = context()
        for t in ts:
            tq = Fraction(t)
            pt = EvalPoint(x0 * tq, y0 * tq)
            ref = psi1_series_thm11(p, pt, cfg.policy).value
            for K in Ks:
                if y0 > 0:
                    r = psi1_asym_thm12(p, pt.x, pt.y, K)
                    share = 1.0
                else:
                    r = psi1_asym_thm13(p, pt.x, pt.y, choose_w_thm13(p, cfg.w, cfg.eps, K))
                    share = float(abs(r.details["A3"]) / abs(r.value))
                e = float(abs(r.value / ref - 1))
                errs[K].append(e)
                rows.append(["point", fmt(t), K, fmt(ctx.re(ref)), fmt(ctx.re(r.value)), fmt(e), fmt(share), ""])
    for K in Ks:
        s = slope(ts, errs[K]) if len(ts) > 1 and all(e > 0 for e in errs[K]) else math.nan
        rows.append(["slope", "", K, "", "", "", "", fmt(s)])
    return rows


# -- bounds ----------------------------------------------------------------


def _rand_complex(rng: np.random.Generator, re: tuple[float, float], im: tuple[float, float]) -> complex:
    return complex(rng.uniform(*re), rng.uniform(*im))


def lemma22_sample(rng: np.random.Generator):
    """``(a, b, z)`` with ``Re b > Re a >= 0`` and ``Re z > |Im a|``."""
    a = _rand_complex(rng, (0, 3), (-2, 2))
    b = a + _rand_complex(rng, (0.01, 3), (-2, 2))
    z = complex(abs(a.imag) + rng.uniform(0.01, 20), rng.uniform(-20, 20))
    return a, b, z


def growth_check(profile: np.ndarray, exponent: float, fit_max: int) -> tuple[float, float]:
    """Fit ``C`` on ``n <= fit_max``; return ``(C, sup over the rest)`` of ``profile / (n+1)^exponent``."""
    n = np.arange(len(profile))
    c_fit = fit_growth_constant(profile[: fit_max + 1], n[: fit_max + 1], exponent)
    c_check = fit_growth_constant(profile[fit_max + 1 :], n[fit_max + 1 :], exponent)
    return c_fit, c_check


def bounds_rows(lemma: str, samples: int, seed: int, n_fit: int = 1000, n_check: int = 10000):
    """Rows ``(sample, a, b, z, lhs, rhs, holds, status)``.

    For the growth statements ``lhs`` is the normalized supremum on the check
    range and ``rhs`` twice the constant fitted on the fit range.
    """
    rng = np.random.default_rng(seed)
    rows = []
    for i in range(samples):
        if lemma == "2.2":
            a, b, z = lemma22_sample(rng)
            rep = gamma_ratio_bound(z, a, b)
            rows.append([i, a, b, z, rep.lhs, rep.rhs, rep.holds, "ok" if rep.holds else "violation"])
        elif lemma == "2.1":
            a = _rand_complex(rng, (-5, 5), (-3, 3))
            b = _rand_complex(rng, (0.1, 5), (-3, 3))
            prof = pochhammer_ratio_profile(a, b, n_check)
            c_fit, c_check = growth_check(prof, (a - b).real, n_fit)
            ok = c_check <= 2 * c_fit
            rows.append([i, a, b, "", c_check, 2 * c_fit, ok, "ok" if ok else "violation"])
        elif lemma == "2.3":
            a = _rand_complex(rng, (-2, 2), (-1, 1))
            b = _rand_complex(rng, (-2, 2), (-1, 1))
            z = _rand_complex(rng, (-3, 3), (-1, 1))
            try:
                prof = shifted_ratio_profile(a, b, z, n_check, DEFAULT_EXCLUSION_RADIUS)
            except ExclusionZoneError:
                rows.append([i, a, b, z, "", "", "", "skipped"])
                continue
            c_fit, c_check = growth_check(prof, 2 * abs(a - b), n_fit)
            ok = c_check <= 2 * c_fit
            rows.append([i, a, b, z, c_check, 2 * c_fit, ok, "ok" if ok else "violation"])
        elif lemma == "thm2.6":
            rows.append(thm26_row(i, rng))
        else:
            raise ValueError(f"unknown lemma {lemma!r}")
    return rows


def thm26_row(i: int, rng: np.random.Generator, z_fit=(10, 20, 30, 40, 50), z_check=(60, 70, 80, 90, 100)):
    a, b = rng.uniform(0.1, 2), rng.uniform(0.1, 2)
    c, d = rng.uniform(0.1, 2), rng.uniform(0.1, 2)
    n = int(rng.integers(0, 6))
    fam = TwoF2Family(a, b, c, d)

    def normalized(z):
        rep = f2f2_growth_check_plus_n(fam, z, n)
        # lhs / shape in log form; the shape itself overflows a double at z ~ 700
        return math.exp(math.log(rep.lhs) - theorem26_shape(fam.shifted(n), z)) if rep.lhs > 0 else 0.0

    c_fit = max(normalized(z) for z in z_fit)
    c_check = max(normalized(z) for z in z_check)
    ok = c_check <= 2 * c_fit
    return [i, complex(a, 0), complex(b, 0), f"c={c:.6g};d={d:.6g};n={n}", c_check, 2 * c_fit, ok,
            "ok" if ok else "violation"]


def cmd_bounds(lemma: str, samples: int, seed: int):
    if samples < 1:
        raise ValueError("samples must be at least 1")
    rows = bounds_rows(lemma, samples, seed)
    violations = sum(1 for r in rows if r[-1] == "violation")
    skipped = sum(1 for r in rows if r[-1] == "skipped")
    return rows, violations, skipped


# -- argument handling -----------------------------------------------------


def _scalar(text: str) -> Exact:
    try:
        return parse_scalar(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _float_list(text: str) -> list[float]:
    return [float(v) for v in text.split(",") if v]


def _int_list(text: str) -> list[int]:
    return [int(v) for v in text.split(",") if v]


def _ray(text: str) -> tuple[Fraction, Fraction]:
    parts = text.split(",")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError("ray is given as x0,y0")
    return Fraction(parts[0]), Fraction(parts[1])


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--a", type=_scalar, default=Fraction(1))
    common.add_argument("--b", type=_scalar, default=Fraction(1, 2))
    common.add_argument("--c", type=_scalar, default=Fraction(1, 3))
    common.add_argument("--cp", type=_scalar, default=Fraction(1, 4))
    common.add_argument("--tol", type=float, default=1e-12)
    common.add_argument("--max-terms", type=int, default=100000)
    common.add_argument("--K", type=int, default=1)
    common.add_argument("--N", type=int, default=1)
    common.add_argument("--w", type=float, default=3.0)
    common.add_argument("--eps", type=float, default=0.1)
    common.add_argument("--precision", choices=("standard", "extended"), default=None)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--out", default=None)
    common.add_argument("--format", choices=("csv",), default="csv")

    parser = argparse.ArgumentParser(prog="humbert", description="Evaluate and check Psi_1.")
    sub = parser.add_subparsers(dest="command", required=True)
    ev = sub.add_parser("eval", parents=[common], help="evaluate at one point")
    ev.add_argument("--x", type=_scalar, required=True)
    ev.add_argument("--y", type=_scalar, required=True)
    ev.add_argument("--method", choices=METHODS, default="auto")
    tb = sub.add_parser("table1", parents=[common], help="ratio to the leading term on two rays")
    tb.add_argument("--jobs", type=int, default=1)
    cv = sub.add_parser("converge", parents=[common], help="expansion error against t")
    cv.add_argument("--ray", type=_ray, default=(Fraction(-1), Fraction(2)))
    cv.add_argument("--t", type=_float_list, default=[50, 100, 200, 400])
    cv.add_argument("--Ks", "--K-list", dest="Ks", type=_int_list, default=[1, 2, 3])
    bd = sub.add_parser("bounds", parents=[common], help="sample an inequality")
    bd.add_argument("--lemma", choices=LEMMAS, required=True)
    bd.add_argument("--samples", type=int, default=1000)
    return parser


def _config(args, default_mode: str) -> RunConfig:
    params = Psi1Params(args.a, args.b, args.c, args.cp)
    policy = TruncationPolicy(args.tol, args.max_terms)
    return RunConfig(params, policy, args.K, args.N, args.w, args.eps, args.out, args.precision or default_mode)


def run(args) -> int:
    if args.command == "eval":
        cfg = _config(args, "standard")
        with precision(cfg.mode):
            results = cmd_eval(cfg, args.x, args.y, args.method)
            rows = [_result_row(r) for r in results]
        _write(rows, ["method", "re", "im", "err_estimate", "terms_used", "warnings"], cfg.out)
    elif args.command == "table1":
        cfg = _config(args, "extended")
        table = cmd_table1(cfg, args.jobs)
        rows = [
            [fmt(r.x0), fmt(r.y0), fmt(r.t), fmt(r.ratio), f"{r.ratio:.6f}", r.method_value, r.method_leading]
            for r in table
        ]
        _write(rows, ["x0", "y0", "t", "ratio", "ratio_6", "method_value", "method_leading"], cfg.out)
    elif args.command == "converge":
        cfg = _config(args, "extended")
        rows = cmd_converge(cfg, args.ray, args.t, args.Ks)
        _write(rows, ["kind", "t", "K", "reference", "expansion", "rel_err", "a3_share", "slope"], cfg.out)
    else:
        cfg = _config(args, "standard")
        with precision(cfg.mode):
            rows, violations, skipped = cmd_bounds(args.lemma, args.samples, args.seed)
        out = [[r[0], *[_cell(v) for v in r[1:6]], r[6], r[7]] for r in rows]
        _write(out, ["sample", "a", "b", "z", "lhs", "rhs", "holds", "status"], cfg.out)
        print(f"lemma {args.lemma}: samples={len(rows)} violations={violations} skipped={skipped}", file=sys.stderr)
    return 0


def _cell(v) -> str:
    if isinstance(v, complex):
        return f"{fmt(v.real)}{'+' if v.imag >= 0 else '-'}{fmt(abs(v.imag))}i"
    if isinstance(v, float):
        return fmt(v)
    return str(v)


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return run(args)
    except PreconditionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ConvergenceFailure as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
