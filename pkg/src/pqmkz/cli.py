"""Command-line front end.

    pqmkz figures --out results/figures
    pqmkz bounds --n 5 10 25 --p 0.95 --q 0.9 --out results/bounds
    pqmkz converge --scheme remark1 --function e2 --out results/converge
    pqmkz statdemo --N 10000 --eps 0.01 --out results/stat

Every command writes a timestamp-free ``manifest.json`` next to its tables.
"""

from __future__ import annotations

import argparse
import math
import sys
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np

from . import __version__, selftest
from .convergence import (
    GRID_SIZE,
    H_SIZE,
    SeqScheme,
    alpha_n,
    delta_n,
    error_bound_check,
    natural_density,
    remark1_scheme,
    scheme_sequences,
    sup_error,
    theorem53_check,
)
from .functions import ROOTS_LABEL, TEST_POLYNOMIALS, parse_function
from .mkz import OperatorConfig
from .operator import apply, corollary1_bounds, moments, theorem1_bounds
from .pq_core import PQParams, TruncationError
from .reporting import write_csv, write_json

COMMANDS = ("eval", "moments", "bounds", "converge", "figures", "statdemo")
FORMATS = ("csv", "json", "svg")
FIGURE_PQ = (0.95, 0.9)

_DEFAULTS = {
    "eval": dict(n=(10,), grid="0:0.95:0.05", functions=("quadratic",), params=FIGURE_PQ),
    "moments": dict(n=(10,), grid="0:0.95:0.05", functions=(), params=FIGURE_PQ),
    "bounds": dict(n=(5, 10, 25), grid="0:0.95:0.05", functions=(), params=FIGURE_PQ),
    "converge": dict(n=(10, 20, 40, 80), grid="0:0.95:0.05", functions=("e2",), params=None),
    "figures": dict(n=(25,), grid="0:0.995:0.005", functions=tuple(TEST_POLYNOMIALS), params=FIGURE_PQ),
    "statdemo": dict(n=(), grid="", functions=(), params=None),
}


class UsageError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    command: str
    out: str
    n: tuple[int, ...]
    p: Optional[float] = None
    q: Optional[float] = None
    scheme: Optional[str] = None
    cp: float = 3.0
    cq: float = 2.0
    tail_tol: float = 1e-12
    max_terms: int = 10_000
    fixed_k: Optional[int] = None
    grid: tuple[float, ...] = ()
    format: str = "csv"
    functions: tuple[str, ...] = ()
    C: float = 4.0
    N: int = 10_000
    eps: float = 0.01
    method: str = "auto"
    x1_literal: bool = False
    omega_grid: int = GRID_SIZE
    omega_h: int = H_SIZE
    self_test: bool = False
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise UsageError(f"unknown command {self.command!r}")
        if self.format not in FORMATS:
            raise UsageError(f"format must be one of {FORMATS}, got {self.format!r}")
        has_pq = self.p is not None or self.q is not None
        if has_pq and self.scheme is not None:
            raise UsageError("give either --p/--q or --scheme, not both")
        if has_pq and (self.p is None or self.q is None):
            raise UsageError("--p and --q must be given together")
        if not has_pq and self.scheme is None:
            raise UsageError("one of --p/--q or --scheme is required")
        if self.fixed_k is not None and self.fixed_k < 1:
            raise UsageError(f"--fixed-k must be >= 1, got {self.fixed_k}")
        if self.max_terms < 1:
            raise UsageError(f"--max-terms must be >= 1, got {self.max_terms}")

    @property
    def operator_config(self) -> OperatorConfig:
        return OperatorConfig(
            tail_tol=self.tail_tol, max_terms=self.max_terms, fixed_k=self.fixed_k, x1_literal=self.x1_literal
        )

    def params(self) -> PQParams:
        if self.scheme is not None:
            raise UsageError(f"{self.command} needs a fixed --p/--q pair")
        return PQParams(self.p, self.q)

    def seq_scheme(self) -> SeqScheme:
        if self.scheme == "remark1":
            return remark1_scheme(self.cp, self.cq)
        fixed = PQParams(self.p, self.q)
        a = 1.0 if fixed.p == 1.0 else 0.0
        return SeqScheme(lambda n: fixed, a, 0.0, f"fixed({fixed.p:g},{fixed.q:g})")

    def manifest(self) -> dict:
        d = asdict(self)
        d.pop("extra")
        d["grid"] = list(self.grid)
        d["n"] = list(self.n)
        d["functions"] = list(self.functions)
        if self.fixed_k is not None:
            d["K"] = d.pop("fixed_k")
            d.pop("tail_tol")
            d.pop("max_terms")
        else:
            d.pop("fixed_k")
        d["version"] = __version__
        d.update(self.extra)
        return d


def parse_grid(spec: str) -> tuple[float, ...]:
    """``start:stop:step`` (stop inclusive) or a comma list."""
    spec = spec.strip()
    if not spec:
        return ()
    if ":" in spec:
        try:
            start, stop, step = (float(v) for v in spec.split(":"))
        except ValueError as exc:
            raise UsageError(f"bad grid {spec!r}; expected start:stop:step") from exc
        if step <= 0 or stop < start:
            raise UsageError(f"bad grid {spec!r}")
        count = int(math.floor((stop - start) / step + 1e-9)) + 1
        return tuple(round(start + i * step, 12) for i in range(count))
    try:
        return tuple(float(v) for v in spec.split(",") if v.strip())
    except ValueError as exc:
        raise UsageError(f"bad grid {spec!r}") from exc


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--n", type=int, nargs="+", help="operator degree(s)")
    common.add_argument("--p", type=float)
    common.add_argument("--q", type=float)
    common.add_argument("--scheme", choices=["remark1"], help="parameter sequence n -> (p_n, q_n)")
    common.add_argument("--cp", type=float, default=3.0, help="p_n = 1 - 1/(cp n) (default: %(default)s)")
    common.add_argument("--cq", type=float, default=2.0, help="q_n = 1 - 1/(cq n) (default: %(default)s)")
    common.add_argument("--tail-tol", type=float, default=1e-12)
    common.add_argument("--max-terms", type=int, default=10_000, help="cap on basis terms per x")
    common.add_argument("--fixed-k", type=int, help="sum k = 0..K instead of mass-based truncation")
    common.add_argument("--grid", help="x grid: start:stop:step or comma list")
    common.add_argument("--out", default="results", help="output directory (default: %(default)s)")
    common.add_argument("--format", choices=FORMATS, default="csv")
    common.add_argument("--function", action="append", dest="functions",
                        help="name, e<i> or poly:c0,c1,... (repeatable)")
    common.add_argument("--C", type=float, default=4.0, help="constant in the omega_2 error bound")
    common.add_argument("--N", type=int, default=10_000, help="density horizon (statdemo)")
    common.add_argument("--eps", type=float, default=0.01, help="violation threshold (statdemo)")
    common.add_argument("--method", choices=["auto", "closed", "jackson"], default="auto")
    common.add_argument("--x1-literal", action="store_true", help="return 1 at x = 1 instead of f(1)")
    common.add_argument("--omega-grid", type=int, default=GRID_SIZE, help="x grid size for moduli")
    common.add_argument("--omega-h", type=int, default=H_SIZE, help="step grid size for moduli")
    common.add_argument("--self-test", action="store_true", help="also run the command's self-checks")

    parser = argparse.ArgumentParser(
        prog="pqmkz", description="(p,q)-Meyer-König-Zeller Durrmeyer operator toolkit."
    )
    sub = parser.add_subparsers(dest="command", required=True)
    helps = {
        "eval": "evaluate the operator on a function over an x grid",
        "moments": "moments and central moments over an x grid",
        "bounds": "check the moment and central-moment bounds",
        "converge": "sup error, error-bound quantities and empirical C over n",
        "figures": "figure data for the four test polynomials",
        "statdemo": "natural-density profiles of the parameter sequences",
    }
    for name in COMMANDS:
        sub.add_parser(name, parents=[common], help=helps[name])
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    defaults = _DEFAULTS[args.command]
    p, q, scheme = args.p, args.q, args.scheme
    if p is None and q is None and scheme is None:
        if defaults["params"] is None:
            scheme = "remark1"
        else:
            p, q = defaults["params"]
    fixed_k = args.fixed_k
    if args.command == "figures" and fixed_k is None:
        fixed_k = 150
    return RunConfig(
        command=args.command,
        out=args.out,
        n=tuple(args.n or defaults["n"]),
        p=p,
        q=q,
        scheme=scheme,
        cp=args.cp,
        cq=args.cq,
        tail_tol=args.tail_tol,
        max_terms=args.max_terms,
        fixed_k=fixed_k,
        grid=parse_grid(args.grid if args.grid is not None else defaults["grid"]),
        format=args.format,
        functions=tuple(args.functions or defaults["functions"]),
        C=args.C,
        N=args.N,
        eps=args.eps,
        method=args.method,
        x1_literal=args.x1_literal,
        omega_grid=args.omega_grid,
        omega_h=args.omega_h,
        self_test=args.self_test,
    )


def _table(cfg: RunConfig, stem: str, header, rows) -> list[Path]:
    out = Path(cfg.out)
    if cfg.format == "json":
        return [write_json(out / f"{stem}.json", [dict(zip(header, r)) for r in rows])]
    return [write_csv(out / f"{stem}.csv", header, rows)]


def cmd_eval(cfg: RunConfig) -> tuple[list[Path], bool]:
    params, oc = cfg.params(), cfg.operator_config
    header = ("function", "n", "x", "f", "Mtilde", "abs_error", "k_used", "tail_bound")
    rows, files = [], []
    for name in cfg.functions:
        f = parse_function(name)
        for n in cfg.n:
            xs, fx, mx = [], [], []
            for x in cfg.grid:
                r = apply(f, n, x, params, oc, method=cfg.method)
                fv = float(f(np.array([x]))[0])
                rows.append((name, n, x, fv, r.value, abs(r.value - fv), r.k_used, r.tail_bound))
                xs.append(x), fx.append(fv), mx.append(r.value)
            if cfg.format == "svg":
                from .plotting import plot_overlay

                files.append(plot_overlay(Path(cfg.out) / f"eval_{_safe(name)}_n{n}.svg", xs, fx, mx,
                                          f"{name}, n={n}", label=f"M_{n}"))
    return _table(cfg, "eval", header, rows) + files, True


def cmd_moments(cfg: RunConfig) -> tuple[list[Path], bool]:
    params, oc = cfg.params(), cfg.operator_config
    header = ("n", "x", "M_e0", "M_e1", "M_e2", "psi1", "psi2")
    rows = []
    for n in cfg.n:
        for x in cfg.grid:
            m0, m1, m2 = moments(n, x, params, oc)
            rows.append((n, x, m0, m1, m2, m1 - x, m2 - 2 * x * m1 + x * x))
    return _table(cfg, "moments", header, rows), True


def cmd_bounds(cfg: RunConfig) -> tuple[list[Path], bool]:
    """Moment bounds and central-moment bounds over the (n, x) grid."""
    oc = cfg.operator_config
    scheme = cfg.seq_scheme() if cfg.scheme else None
    records = []
    for n in cfg.n:
        params = scheme(n) if scheme else cfg.params()
        for x in cfg.grid:
            for kind, fn, orders in (("moment", theorem1_bounds, (0, 1, 2)), ("central", corollary1_bounds, (1, 2))):
                for i in orders:
                    rep = fn(i, n, x, params, oc)
                    records.append({
                        "kind": kind, "i": i, "n": n, "p": params.p, "q": params.q, "x": x,
                        "actual": rep.actual, "lower": rep.lower, "upper": rep.upper, "holds": rep.holds,
                    })
    failed = sum(not r["holds"] for r in records)
    out = Path(cfg.out)
    files = [write_json(out / "bounds.json", {
        "records": records,
        "summary": {"total": len(records), "passed": len(records) - failed, "failed": failed},
    })]
    if cfg.format != "json":
        header = ("kind", "i", "n", "p", "q", "x", "actual", "lower", "upper", "holds")
        files.append(write_csv(out / "bounds.csv", header, [[r[h] for h in header] for r in records]))
    if cfg.format == "svg":
        from .plotting import plot_loglog

        xs = [r["x"] for r in records if r["kind"] == "central" and r["i"] == 2 and r["n"] == cfg.n[-1]]
        act = [r["actual"] for r in records if r["kind"] == "central" and r["i"] == 2 and r["n"] == cfg.n[-1]]
        up = [r["upper"] for r in records if r["kind"] == "central" and r["i"] == 2 and r["n"] == cfg.n[-1]]
        keep = [i for i, x in enumerate(xs) if x > 0]
        files.append(plot_loglog(out / "bounds_psi2.svg", [xs[i] for i in keep],
                                 {"psi2": [act[i] for i in keep], "upper bound": [up[i] for i in keep]},
                                 "x", f"second central moment, n={cfg.n[-1]}"))
    return files, failed == 0


def cmd_converge(cfg: RunConfig) -> tuple[list[Path], bool]:
    scheme, oc = cfg.seq_scheme(), cfg.operator_config
    header = ("function", "n", "sup_error", "max_alpha_n", "max_delta_n", "c_min", "thm42_holds", "thm53_holds")
    rows, series = [], {}
    all_ok = True
    for name in cfg.functions:
        f = parse_function(name)
        errs = []
        for n in cfg.n:
            err = sup_error(f, n, scheme, oc, cfg.grid)
            alphas = [alpha_n(n, x, scheme) for x in cfg.grid]
            deltas = [delta_n(n, x, scheme, oc) for x in cfg.grid]
            c_min, ok42, ok53 = 0.0, True, True
            for x in cfg.grid:
                chk = error_bound_check(f, n, x, scheme, oc, cfg.C, cfg.omega_grid, cfg.omega_h)
                c_min = max(c_min, chk.details["c_min"])
                ok42 &= chk.holds
                ok53 &= theorem53_check(f, n, x, scheme, oc, cfg.omega_grid, cfg.omega_h).holds
            all_ok &= ok53
            rows.append((name, n, err, max(alphas), max(deltas), c_min, ok42, ok53))
            errs.append(err)
        series[name] = errs
    files = _table(cfg, "converge", header, rows)
    if cfg.format == "svg":
        from .plotting import plot_loglog

        files.append(plot_loglog(Path(cfg.out) / "converge.svg", list(cfg.n), series, "n",
                                 f"sup error, {scheme.name}"))
    return files, all_ok


def cmd_figures(cfg: RunConfig) -> tuple[list[Path], bool]:
    from .plotting import plot_overlay, plot_panel

    params, oc = cfg.params(), cfg.operator_config
    (n,) = cfg.n[:1]
    out = Path(cfg.out)
    files, panel = [], []
    xs = list(cfg.grid)
    for name in cfg.functions:
        f = parse_function(name)
        fx = [float(v) for v in f(np.array(xs))]
        mx = [apply(f, n, x, params, oc, method=cfg.method).value for x in xs]
        rows = [(x, a, b, abs(b - a)) for x, a, b in zip(xs, fx, mx)]
        files.append(write_csv(out / f"figure_{_safe(name)}.csv", ("x", "f", "Mtilde", "abs_error"), rows))
        title = f"f(x) = {ROOTS_LABEL.get(name, name)}"
        files.append(plot_overlay(out / f"figure_{_safe(name)}.svg", xs, fx, mx, title, label=f"M_{n}"))
        panel.append((title, xs, fx, mx))
    if len(panel) > 1:
        files.append(plot_panel(out / "figures_panel.svg", panel, label=f"M_{n}"))
    return files, True


def cmd_statdemo(cfg: RunConfig) -> tuple[list[Path], bool]:
    scheme = cfg.seq_scheme()
    header = ("sequence", "limit", "eps", "N", "violators", "density", "value")
    rows, profiles = [], {}
    for name, (seq, limit) in scheme_sequences(scheme).items():
        rep = natural_density(lambda j: abs(seq(j) - limit) >= cfg.eps, cfg.N)
        for n_i, dens in rep.profile:
            rows.append((name, limit, cfg.eps, n_i, int(round(dens * n_i)), dens, seq(n_i)))
        profiles[name] = rep.profile
    files = _table(cfg, "statdemo", header, rows)
    if cfg.format == "svg":
        from .plotting import plot_density_profiles

        files.append(plot_density_profiles(Path(cfg.out) / "statdemo.svg", profiles,
                                           f"eps={cfg.eps:g}, {scheme.name}"))
    return files, True


def run_self_test(cfg: RunConfig) -> tuple[Path, bool]:
    oc = cfg.operator_config
    n = cfg.n[0] if cfg.n else 10
    if cfg.command == "figures":
        checks = selftest.figures_checks(n, cfg.params(), cfg.fixed_k or 150)
    elif cfg.command == "statdemo":
        checks = selftest.statdemo_checks(cfg.seq_scheme(), cfg.N)
    elif cfg.command == "converge":
        checks = selftest.converge_checks(n, cfg.seq_scheme(), oc)
    else:
        params = cfg.seq_scheme()(n) if cfg.scheme else cfg.params()
        checks = {
            "eval": selftest.eval_checks,
            "moments": selftest.moments_checks,
            "bounds": selftest.bounds_checks,
        }[cfg.command](n, params, oc)
    path = write_csv(Path(cfg.out) / "selftest.csv", selftest.HEADER, [c.row() for c in checks])
    return path, all(c.passed for c in checks)


def _safe(name: str) -> str:
    return "".join(ch if ch.isalnum() or ch in "-_" else "_" for ch in name)


HANDLERS = {
    "eval": cmd_eval,
    "moments": cmd_moments,
    "bounds": cmd_bounds,
    "converge": cmd_converge,
    "figures": cmd_figures,
    "statdemo": cmd_statdemo,
}


def run(cfg: RunConfig) -> tuple[list[Path], bool]:
    files, ok = HANDLERS[cfg.command](cfg)
    if cfg.self_test:
        path, passed = run_self_test(cfg)
        files.append(path)
        ok &= passed
    manifest = cfg.manifest()
    manifest["outputs"] = sorted(p.name for p in files)
    manifest["ok"] = ok
    files.append(write_json(Path(cfg.out) / "manifest.json", manifest))
    return files, ok


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = config_from_args(args)
        files, ok = run(cfg)
    except (UsageError, ValueError) as exc:
        parser.error(str(exc))
    except OSError as exc:
        print(f"pqmkz: {exc}", file=sys.stderr)
        return 3
    except TruncationError as exc:
        print(f"pqmkz: {exc}; raise --max-terms or keep x further from 1", file=sys.stderr)
        return 4
    for path in files:
        print(path)
    if not ok:
        print("pqmkz: one or more checks failed", file=sys.stderr)
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
