"""Command-line harness: property suites, case studies, lambda sweeps and reports.

Verbs::

    susy-immersion check {algebra,killing,operators,all} [--alpha A]
    susy-immersion case  [--config FILE] [--case ...] [--lambda ...] [--out DIR] ...
    susy-immersion sweep [--case ...] [--lambda ...]
    susy-immersion report [--out DIR]

The exit status is 0 iff every asserted check of the run passed; 2 signals a
configuration error.
"""
from __future__ import annotations

import argparse
import csv
import json
import logging
import math
import sys
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .grassmann import GrassmannElement, monomial_id
from .sinegordon import (CASES, DEFAULT_GENERATORS, PRECISION, RESIDUAL_TOL, ZCC_SIGN, CaseReport, Check,
                         build_solution, component_residuals, lambda_sweep, run_case)
from .suites import SUITES, run_suite
from .supermatrix import DEFAULT_ALPHA

log = logging.getLogger("susy_immersion")

CSV_HEADER = ["x1", "x2", "quantity", "part", "re", "im", "expected_re", "expected_im", "abs_dev", "verdict"]
SWEEP_TARGETS = {"symtafel": 2.0, "bosonic-gauge": -2.0}


class ConfigError(ValueError):
    pass


# configuration ---------------------------------------------------------------------------


def _floats(text: str) -> list[float]:
    return [float(t) for t in text.replace(";", ",").split(",") if t.strip()]


def _names(text: str) -> list[str]:
    out = [t.strip() for t in text.split(",") if t.strip()]
    return list(CASES) if out == ["all"] else out


def _range(text: str) -> tuple[float, float]:
    vals = _floats(text)
    if len(vals) == 1:
        return (-abs(vals[0]), abs(vals[0]))
    if len(vals) != 2:
        raise ConfigError(f"range needs 'lo,hi' or a half-width, got {text!r}")
    return vals[0], vals[1]


def _dressing(text: str):
    t = text.strip().lower()
    if t in ("on", "true", "yes", "1"):
        return True
    if t in ("off", "false", "no", "0", ""):
        return False
    vals = _floats(t)
    if len(vals) != 2:
        raise ConfigError(f"dressing must be on, off or 'c1,c2', got {text!r}")
    return tuple(vals)


@dataclass
class RunConfig:
    cases: list[str] = field(default_factory=lambda: ["symtafel"])
    lambdas: list[float] = field(default_factory=lambda: [1.0])
    beta: float = 1.0
    grid: int = 21
    x_range: tuple[float, float] = (-5.0, 5.0)
    jet_order: int = 3
    generators: int = DEFAULT_GENERATORS
    tol: float = 1e-8
    out: str = "out"
    a: float = 1.0
    dressing: bool | tuple[float, float] = False
    alpha: float = DEFAULT_ALPHA
    precision: str = "extended"
    sign: int = ZCC_SIGN

    # config-file key -> (field, parser)
    KEYS = {
        "case": ("cases", _names), "cases": ("cases", _names),
        "lambda": ("lambdas", _floats), "lambdas": ("lambdas", _floats),
        "beta": ("beta", float), "grid": ("grid", int), "range": ("x_range", _range),
        "jet_order": ("jet_order", int), "generators": ("generators", int), "tol": ("tol", float),
        "out": ("out", str), "a": ("a", float), "dressing": ("dressing", _dressing),
        "alpha": ("alpha", float), "precision": ("precision", str), "sign": ("sign", int),
    }

    @classmethod
    def from_mapping(cls, values: dict[str, str], base: "RunConfig | None" = None) -> "RunConfig":
        unknown = sorted(k for k in values if k.replace("-", "_") not in cls.KEYS)
        if unknown:
            raise ConfigError(f"unknown config keys: {', '.join(unknown)}")
        cfg = base or cls()
        for key, raw in values.items():
            name, parse = cls.KEYS[key.replace("-", "_")]
            try:
                setattr(cfg, name, parse(raw))
            except ValueError as exc:
                raise ConfigError(f"bad value for {key}: {raw!r} ({exc})") from exc
        return cfg

    def validate(self) -> "RunConfig":
        if not self.cases:
            raise ConfigError("empty case list")
        bad = [c for c in self.cases if c not in CASES]
        if bad:
            raise ConfigError(f"unknown case ids: {', '.join(bad)}; expected {', '.join(CASES)}")
        if not self.lambdas or any(not (math.isfinite(v) and v > 0) for v in self.lambdas):
            raise ConfigError("lambda values must be finite and positive")
        if self.grid < 2:
            raise ConfigError(f"grid too small: {self.grid} points per axis (need >= 2)")
        lo, hi = self.x_range
        if not (math.isfinite(lo) and math.isfinite(hi) and lo < hi):
            raise ConfigError(f"invalid range {self.x_range}")
        if not self.tol > 0:
            raise ConfigError("tolerance must be positive")
        if self.jet_order < 3:
            raise ConfigError("jet order must be at least 3")
        if self.precision not in PRECISION:
            raise ConfigError(f"precision must be one of {', '.join(PRECISION)}")
        if self.sign not in (1, -1):
            raise ConfigError("sign must be +1 or -1")
        if self.alpha == 0:
            raise ConfigError("alpha must be nonzero")
        return self


def read_config(path: str | Path) -> dict[str, str]:
    """Flat ``key = value`` file; ``#`` starts a comment."""
    out = {}
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected key = value")
        k, v = line.split("=", 1)
        out[k.strip()] = v.strip()
    return out


def config_from_args(args: argparse.Namespace) -> RunConfig:
    values = read_config(args.config) if getattr(args, "config", None) else {}
    cfg = RunConfig.from_mapping(values)
    overrides = {
        "case": args.case, "lambda": args.lam, "beta": args.beta, "grid": args.grid,
        "range": args.range, "jet_order": args.jet_order, "tol": args.tol, "out": args.out,
        "dressing": args.dressing, "a": args.a, "alpha": args.alpha, "precision": args.precision,
        "sign": args.sign,
    }
    return RunConfig.from_mapping({k: v for k, v in overrides.items() if v is not None}, cfg).validate()


# serialization ---------------------------------------------------------------------------


def _per_point(c, npts: int) -> np.ndarray:
    return np.broadcast_to(np.asarray(c, dtype=complex), (npts,))


def _fmt(x: float) -> str:
    return repr(float(x))


def verdict_tag(c: Check) -> str:
    if c.expected is None:
        return c.verdict
    extra = "" if c.asserted else ", informational"
    return f"{c.verdict} ({c.provenance}{extra})"


def check_rows(c: Check, x1: np.ndarray, x2: np.ndarray) -> Iterable[list[str]]:
    """CSV rows for one check: every grid point, every monomial present in either side."""
    npts = len(x1)
    comp: GrassmannElement = c.computed
    exp: GrassmannElement | None = c.expected
    masks = set(comp.terms) | (set(exp.terms) if exp is not None else set())
    masks.add(0)
    order = sorted(masks, key=lambda m: (bin(m).count("1"), m))
    tag = verdict_tag(c)
    cols = []
    for m in order:
        got = _per_point(comp.terms.get(m, 0.0), npts)
        want = _per_point(exp.terms.get(m, 0.0), npts) if exp is not None else None
        cols.append((monomial_id(m), got, want))
    for p in range(npts):
        for ident, got, want in cols:
            row = [_fmt(x1[p]), _fmt(x2[p]), c.quantity, ident, _fmt(got[p].real), _fmt(got[p].imag)]
            if want is None:
                row += ["", "", "", tag]
            else:
                row += [_fmt(want[p].real), _fmt(want[p].imag), _fmt(abs(got[p] - want[p])), tag]
            yield row


def write_case_csv(report: CaseReport, path: Path) -> None:
    x1 = np.asarray(report.x1, dtype=float)
    x2 = np.asarray(report.x2, dtype=float)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(CSV_HEADER)
        for c in report.checks:
            w.writerows(check_rows(c, x1, x2))


def summarize_case(report: CaseReport, solution: dict[str, dict[str, float]] | None = None) -> list[str]:
    lines = [f"== case {report.case}  lambda={report.lam:g}  beta={report.beta:g}  "
             f"{'PASS' if report.passed else 'FAIL'}"]
    for note in report.notes:
        lines.append(f"  note: {note}")
    for k, v in sorted(report.residuals.items()):
        flag = "" if k not in ("zcc", "determining") else (" ok" if v < RESIDUAL_TOL else " FAIL")
        lines.append(f"  residual {k}: {v:.3g}{flag}")
    for label, res in (solution or {}).items():
        body = ", ".join(f"{k}={v:.3g}" for k, v in res.items())
        lines.append(f"  component residuals [{label}]: {body}")
    width = max(len(c.quantity) for c in report.checks) if report.checks else 10
    for c in report.checks:
        dev = "" if math.isnan(c.deviation) else f"{c.deviation:.3g}"
        mark = "  " if c.passed else "!!"
        note = f"  # {c.note}" if c.note else ""
        lines.append(f"  {mark} {c.quantity:<{width}}  {verdict_tag(c):<40} {dev:>10}{note}")
    return lines


# verbs -----------------------------------------------------------------------------------


def cmd_check(suite: str, alpha: float = DEFAULT_ALPHA, out: str | None = None) -> int:
    names = SUITES if suite == "all" else (suite,)
    results = []
    for name in names:
        for r in run_suite(name, alpha):
            print(f"[{name}] {r.line()}")
            results.append({"suite": name, **asdict(r)})
    ok = all(r["passed"] for r in results)
    print(json.dumps({"passed": ok, "failures": [r["name"] for r in results if not r["passed"]]}))
    if out:
        Path(out).mkdir(parents=True, exist_ok=True)
        Path(out, f"check_{suite}.json").write_text(json.dumps(results, indent=2), encoding="utf-8")
    return 0 if ok else 1


def cmd_case(cfg: RunConfig) -> int:
    outdir = Path(cfg.out)
    outdir.mkdir(parents=True, exist_ok=True)
    sol = build_solution(cfg.a, cfg.dressing, cfg.sign, cfg.precision)
    lo, hi = cfg.x_range
    xs = np.linspace(lo, hi, cfg.grid)
    X1, X2 = (v.ravel() for v in np.meshgrid(xs, xs, indexing="ij"))
    solution = {f"sign {s:+d}": component_residuals(sol, X1, X2, cfg.generators, sign=s) for s in (cfg.sign, -cfg.sign)}
    lines = [f"config: {json.dumps({f.name: getattr(cfg, f.name) for f in fields(cfg)})}"]
    ok = True
    for case in cfg.cases:
        for lam in cfg.lambdas:
            log.info("running %s at lambda=%g", case, lam)
            r = run_case(case, lam=lam, beta=cfg.beta, grid=cfg.grid, x_range=cfg.x_range, a=cfg.a,
                         dressing=cfg.dressing, jet_order=cfg.jet_order, tol=cfg.tol, sign=cfg.sign,
                         n=cfg.generators, alpha=cfg.alpha, precision=cfg.precision)
            path = outdir / f"{case}_lambda{lam:g}.csv"
            write_case_csv(r, path)
            lines += summarize_case(r, solution)
            lines.append(f"  csv: {path.name}")
            ok &= r.passed
            print(f"{case} lambda={lam:g}: {'PASS' if r.passed else 'FAIL'}"
                  + "".join(f"\n  failed: {c.quantity} [{c.verdict}, deviation {c.deviation:.3g}]"
                            for c in r.failures))
    lines.append(f"overall: {'PASS' if ok else 'FAIL'}")
    (outdir / "summary.txt").write_text("\n".join(lines) + "\n", encoding="utf-8")
    return 0 if ok else 1


def cmd_sweep(cfg: RunConfig, tol: float = 1e-6, out: str | None = None) -> int:
    cases, lams = cfg.cases, cfg.lambdas
    if len(lams) < 2:
        raise ConfigError("a sweep needs at least two lambda values")
    ok = True
    lines = []
    for case in cases:
        if case not in SWEEP_TARGETS:
            raise ConfigError(f"no lambda scaling law for case {case!r}; use {', '.join(SWEEP_TARGETS)}")
        fit = lambda_sweep(case, list(lams), beta=cfg.beta, grid=cfg.grid, x_range=cfg.x_range, a=cfg.a)
        target = SWEEP_TARGETS[case]
        passed = abs(fit["exponent"] - target) <= tol and fit["spread"] <= tol
        ok &= passed
        lines.append(f"{case}: exponent {fit['exponent']:.9f} (target {target:+.3f}, "
                     f"pointwise spread {fit['spread']:.2g}) {'pass' if passed else 'FAIL'}")
    print("\n".join(lines))
    if out:
        Path(out).mkdir(parents=True, exist_ok=True)
        Path(out, "sweep.txt").write_text("\n".join(lines) + "\n", encoding="utf-8")
    return 0 if ok else 1


def cmd_report(out: str) -> int:
    """Aggregate the CSVs in ``out`` per quantity: verdicts and worst deviation."""
    paths = sorted(Path(out).glob("*.csv"))
    if not paths:
        raise ConfigError(f"no case CSVs under {out}")
    lines = []
    for path in paths:
        agg: dict[str, dict] = {}
        with open(path, newline="", encoding="utf-8") as fh:
            for row in csv.DictReader(fh):
                a = agg.setdefault(row["quantity"], {"verdicts": set(), "dev": 0.0})
                a["verdicts"].add(row["verdict"])
                if row["abs_dev"]:
                    a["dev"] = max(a["dev"], float(row["abs_dev"]))
        lines.append(f"== {path.name}")
        for q, a in agg.items():
            lines.append(f"  {q:<36} max abs_dev {a['dev']:.3g}  {'; '.join(sorted(a['verdicts']))}")
    text = "\n".join(lines) + "\n"
    print(text, end="")
    Path(out, "report.txt").write_text(text, encoding="utf-8")
    return 0


# entry point -----------------------------------------------------------------------------


def _add_run_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="flat key=value config file")
    p.add_argument("--case", help=f"comma-separated case ids or 'all' ({', '.join(CASES)})")
    p.add_argument("--lambda", dest="lam", help="comma-separated spectral parameters")
    p.add_argument("--beta")
    p.add_argument("--grid", help="points per axis")
    p.add_argument("--range", help="'lo,hi' or a half-width; write --range=-5,5 for negative bounds")
    p.add_argument("--jet-order", dest="jet_order")
    p.add_argument("--tol")
    p.add_argument("--out")
    p.add_argument("--dressing", nargs="?", const="on", help="on, off or 'c1,c2'")
    p.add_argument("--a", help="kink rapidity")
    p.add_argument("--alpha", help="Killing form normalization")
    p.add_argument("--precision", choices=sorted(PRECISION))
    p.add_argument("--sign", help="model sign in D2 D1 phi = sign i sin(phi)")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="susy-immersion", description=__doc__.splitlines()[0])
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="verb", required=True)
    p = sub.add_parser("check", help="run an invariant suite")
    p.add_argument("suite", choices=list(SUITES) + ["all"])
    p.add_argument("--alpha", type=float, default=DEFAULT_ALPHA)
    p.add_argument("--out")
    _add_run_flags(sub.add_parser("case", help="run case studies and write CSV reports"))
    p = sub.add_parser("sweep", help="fit the lambda scaling of K")
    _add_run_flags(p)
    p = sub.add_parser("report", help="summarize CSVs of an earlier case run")
    p.add_argument("--out", default="out")
    return ap


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        if args.verb == "check":
            return cmd_check(args.suite, args.alpha, args.out)
        if args.verb == "report":
            return cmd_report(args.out)
        if args.verb == "sweep" and args.case is None:
            args.case = ",".join(SWEEP_TARGETS)
        if args.verb == "sweep" and args.lam is None:
            args.lam = "0.5,1,2"
        cfg = config_from_args(args)
        if args.verb == "case":
            return cmd_case(cfg)
        return cmd_sweep(cfg, out=args.out)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
