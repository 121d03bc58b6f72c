"""Command-line front end: verification suites and scans as CSV/JSON tables.

    convexity verify-lemma --seed 7 --tolerance 1e-8
    convexity char-scan --qmax 100
    convexity bound --frame data/zeta.frame --format json
    convexity intermediate --delta 0.05 0.1 0.25 0.5
    convexity gamma-ratio-scan

Exit status is 0 when every check in the table passes, 1 when any fails
(the table is still written) and 2 on usage or I/O errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Callable, Iterable, Sequence

import numpy as np

from . import bounds, dirichlet, strip_jensen
from .selberg_frame import Frame, LFunction, parse_frame

SCHEMA_VERSION = 1
SUBCOMMANDS = ("verify-lemma", "bound", "char-scan", "intermediate", "gamma-ratio-scan")

COLUMNS = {
    "verify-lemma": ("index", "source", "n_zeros", "order", "lhs", "rhs", "residual", "lhs_error", "passed"),
    "bound": (
        "name", "conductor", "theorem_bound", "euler_sum", "euler_tail", "L_abs",
        "ratio", "delta", "slack", "classic_eps", "classic_value",
    ),
    "char-scan": ("q", "index", "parity", "conductor_chi", "C", "L_abs", "theorem_bound", "ratio"),
    "intermediate": (
        "name", "delta", "rhs", "rhs_error", "shortcut_head", "shortcut_tail",
        "log_abs_half", "slack", "agree",
    ),
    "gamma-ratio-scan": ("alpha", "beta", "bound", "bound_jittered", "stable"),
}

SLACK_FLOOR = -5.0


@dataclass
class RunConfig:
    subcommand: str
    qmax: int = 100
    deltas: list[float] = field(default_factory=lambda: list(bounds.DELTAS))
    tolerance: float = 1e-8
    seed: int = 7
    fmt: str = "csv"
    output: str = "-"
    jobs: int = 1
    count: int = 100
    corpus: str | None = None
    frame: str | None = None
    lfunction: str | None = None
    eps: float = 0.1
    coef_bound: float = 1.0

    def __post_init__(self):
        if self.subcommand not in SUBCOMMANDS:
            raise ValueError(f"unknown subcommand {self.subcommand!r}")
        if self.qmax < 1:
            raise ValueError("qmax must be >= 1")
        if self.tolerance <= 0:
            raise ValueError("tolerance must be positive")
        if self.fmt not in ("csv", "json"):
            raise ValueError("format must be csv or json")
        if self.jobs < 1:
            raise ValueError("jobs must be >= 1")


class Table:
    def __init__(self, subcommand: str, rows: list[dict], passed: bool, summary: dict | None = None):
        self.subcommand = subcommand
        self.rows = rows
        self.passed = passed
        self.summary = summary or {}


# ----------------------------------------------------------------------------
# formatting


def _fmt_csv(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return format(float(v), ".15g")
    return str(v)


def _fmt_json(v):
    if isinstance(v, (bool, np.bool_)):
        return bool(v)
    if isinstance(v, (int, np.integer)):
        return int(v)
    if isinstance(v, (float, np.floating)):
        v = float(v)
        return float(format(v, ".15g")) if math.isfinite(v) else None
    if isinstance(v, dict):
        return {k: _fmt_json(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_fmt_json(x) for x in v]
    return v


def render(table: Table, config: RunConfig) -> str:
    cols = COLUMNS[table.subcommand]
    if config.fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(cols)
        for row in table.rows:
            w.writerow([_fmt_csv(row[c]) for c in cols])
        return buf.getvalue()
    cfg = asdict(config)
    cfg.pop("output")
    doc = {
        "meta": {
            "schema_version": SCHEMA_VERSION,
            "subcommand": table.subcommand,
            "passed": table.passed,
            "config": _fmt_json(cfg),
            "summary": _fmt_json(table.summary),
        },
        "rows": [{c: _fmt_json(row[c]) for c in cols} for row in table.rows],
    }
    return json.dumps(doc, indent=2) + "\n"


def schema_path() -> Path:
    return Path(__file__).with_name("schemas") / "report.schema.json"


# ----------------------------------------------------------------------------
# suites


def _map(fn: Callable, items: Sequence, jobs: int) -> list:
    if jobs == 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, items, chunksize=max(1, len(items) // (4 * jobs))))


def _lemma_row(args):
    i, source, f, tol = args
    r = strip_jensen.verify_lemma(f, tol=tol)
    passed = r.passed and r.residual <= tol
    return {
        "index": i, "source": source, "n_zeros": sum(k for _, k in f.zeros), "order": f.order,
        "lhs": r.lhs, "rhs": r.rhs, "residual": r.residual, "lhs_error": r.lhs_error, "passed": passed,
    }


def run_verify_lemma(config: RunConfig) -> Table:
    if config.corpus:
        fixed = strip_jensen.load_corpus(Path(config.corpus).read_text())
        source = "file"
    else:
        fixed = strip_jensen.deterministic_corpus()
        source = "corpus"
    items = [(i, source, f, config.tolerance) for i, f in enumerate(fixed)]
    rand = strip_jensen.random_corpus(config.seed, config.count)
    items += [(i, "random", f, config.tolerance) for i, f in enumerate(rand)]
    rows = _map(_lemma_row, items, config.jobs)
    worst = max((r["residual"] for r in rows), default=0.0)
    return Table("verify-lemma", rows, all(r["passed"] for r in rows), {"max_residual": worst, "count": len(rows)})


def _scan_rows(q: int) -> list[dict]:
    return [asdict(r) for r in bounds.scan_modulus(q)]


def run_char_scan(config: RunConfig) -> Table:
    rows = [r for chunk in _map(_scan_rows, list(range(1, config.qmax + 1)), config.jobs) for r in chunk]
    worst = max(rows, key=lambda r: r["ratio"], default=None)
    summary = {}
    if worst is not None:
        summary = {"max_ratio": worst["ratio"], "max_q": worst["q"], "max_index": worst["index"], "count": len(rows)}
    return Table("char-scan", rows, all(r["ratio"] < 1 for r in rows), summary)


def _one_function(frame: Frame) -> LFunction:
    return LFunction(frame, lambda s: np.ones_like(np.asarray(s, dtype=complex)), None, "one")


def resolve_lfunction(key: str | None, frame: Frame | None) -> LFunction:
    """'zeta', 'chi:q:index' or 'one'; defaults follow the frame's name."""
    if key is None:
        name = frame.name if frame is not None else "zeta"
        if name == "zeta":
            key = "zeta"
        elif name.startswith("chi_"):
            _, q, i = name.split("_")
            key = f"chi:{q}:{i}"
        else:
            key = "one"
    if key == "zeta":
        L = dirichlet.zeta_function()
    elif key.startswith("chi:"):
        _, q, i = key.split(":")
        chi = dirichlet.characters_mod(int(q))[int(i)]
        L = dirichlet.dirichlet_l_function(chi)
    elif key == "one":
        if frame is None:
            raise ValueError("the synthetic function 'one' needs --frame")
        return _one_function(frame)
    else:
        raise ValueError(f"unknown L-function {key!r}")
    if frame is not None:
        L = LFunction(frame, L.evaluate, L.log_coeffs, L.name)
    return L


def run_bound(config: RunConfig) -> Table:
    frame = parse_frame(Path(config.frame).read_text()) if config.frame else None
    L = resolve_lfunction(config.lfunction, frame)
    rep = bounds.bound_report(L, delta=config.deltas[0], eps=config.eps, A=config.coef_bound)
    return Table("bound", [rep.as_row()], rep.ratio < 1)


def _intermediate_row(args):
    key, delta = args
    L = resolve_lfunction(key, None)
    return asdict(bounds.intermediate_check(L, delta))


def run_intermediate(config: RunConfig) -> Table:
    keys = ["zeta"]
    for q in range(3, config.qmax + 1):
        keys += [f"chi:{q}:{c.index}" for c in dirichlet.primitive_characters(q)]
    items = [(s, d) for s in keys for d in config.deltas]
    rows = _map(_intermediate_row, items, config.jobs)
    ok = all(r["agree"] and r["slack"] >= SLACK_FLOOR for r in rows)
    worst = min((r["slack"] for r in rows), default=0.0)
    return Table("intermediate", rows, ok, {"min_slack": worst, "slack_floor": SLACK_FLOOR})


def run_gamma_ratio_scan(config: RunConfig) -> Table:
    rng = np.random.default_rng(config.seed)
    jitter = float(rng.uniform(0.001, 0.02))
    base = bounds.gamma_ratio_grid()
    other = bounds.gamma_ratio_grid(jitter=jitter)
    rows = []
    for a, b in bounds.GAMMA_RATIO_PAIRS:
        r1 = bounds.gamma_ratio_remainder(a, b, base)
        r2 = bounds.gamma_ratio_remainder(a, b, other)
        rows.append({"alpha": a, "beta": b, "bound": r1, "bound_jittered": r2,
                     "stable": bool(abs(r1 - r2) <= 0.1 * r1 and math.isfinite(r1))})
    return Table("gamma-ratio-scan", rows, all(r["stable"] for r in rows), {"jitter": jitter})


SUITES = {
    "verify-lemma": run_verify_lemma,
    "bound": run_bound,
    "char-scan": run_char_scan,
    "intermediate": run_intermediate,
    "gamma-ratio-scan": run_gamma_ratio_scan,
}


def run(config: RunConfig, stdout=None) -> int:
    stdout = stdout or sys.stdout
    try:
        table = SUITES[config.subcommand](config)
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    text = render(table, config)
    try:
        if config.output == "-":
            stdout.write(text)
        else:
            Path(config.output).write_text(text)
    except OSError as exc:
        print(f"error: cannot write {config.output}: {exc}", file=sys.stderr)
        return 2
    for k, v in table.summary.items():
        print(f"{k}: {_fmt_csv(v)}", file=sys.stderr)
    print(f"{config.subcommand}: {'PASS' if table.passed else 'FAIL'}", file=sys.stderr)
    return 0 if table.passed else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="convexity", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="subcommand", required=True)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", dest="fmt", choices=("csv", "json"), default="csv")
    common.add_argument("--output", "-o", default="-")
    common.add_argument("--jobs", type=int, default=1)
    common.add_argument("--seed", type=int, default=7)
    common.add_argument("--tolerance", type=float, default=1e-8)
    common.add_argument("--delta", dest="deltas", type=float, nargs="+", default=list(bounds.DELTAS))

    p = sub.add_parser("verify-lemma", parents=[common], help="strip Jensen identity on test functions")
    p.add_argument("--corpus", help="corpus file replacing the built-in deterministic families")
    p.add_argument("--count", type=int, default=100, help="number of seeded random functions")

    p = sub.add_parser("bound", parents=[common], help="one BoundReport")
    p.add_argument("--frame", help="frame file (key=value lines plus 'lambda mu nu' lines)")
    p.add_argument("--lfunction", help="zeta, chi:q:index or one")
    p.add_argument("--eps", type=float, default=0.1)
    p.add_argument("--coef-bound", dest="coef_bound", type=float, default=1.0)

    p = sub.add_parser("char-scan", parents=[common], help="theorem bound over primitive characters")
    p.add_argument("--qmax", type=int, default=100)

    p = sub.add_parser("intermediate", parents=[common], help="intermediate inequality and Euler shortcut")
    p.add_argument("--qmax", type=int, default=12)

    sub.add_parser("gamma-ratio-scan", parents=[common], help="Gamma ratio remainder bounds")
    return parser


def main(argv: Iterable[str] | None = None) -> int:
    args = vars(build_parser().parse_args(None if argv is None else list(argv)))
    try:
        config = RunConfig(**args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return run(config)


if __name__ == "__main__":
    sys.exit(main())
