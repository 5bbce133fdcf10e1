"""Command-line front end.

Subcommands and their output columns (CSV; JSON mirrors the same fields):

  error-curve   n, pe_closed_form, pe_lp, pe_lower_cert
  tradeoff      n, alpha, beta_lp, beta_closed
  exponents     case, d, m, lambda, r, chernoff, stein, hoeffding, strong_converse
  separation    n, bound, psd_check, block_pos_falsified   (JSON adds delta, mu, flags)
  verify        check, status, residual, threshold

Floats carry 12 significant digits and infinities print as ``inf``.  CSV
output starts with a ``# generated`` line unless ``--no-timestamp`` is given.
Relative ``--out`` paths resolve under $PPTDISC_OUT_DIR when it is set.
"""

from __future__ import annotations

import argparse
import csv
import datetime as _dt
import io
import json
import math
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .exponents import (
    ERROR_CASES,
    REPORT_COLUMNS,
    CaseParams,
    closed_form_error,
    exponents_table,
)
from .formatting import fmt, json_number
from .operators import Operator, eigvals_hermitian
from .ppt import (
    exp_lower_bound,
    transpose_b_side,
    ppt_norm_dual_value,
    ppt_norm_primal_value,
)
from .states import TABLE_ROWS, max_entangled_vector, pure_state, random_pure_state
from .symmetric_lp import (
    certificate_weights,
    identity_residual,
    q_matrix,
    QMatrix,
    solve_symmetric_lp,
    solve_weighted_lp,
    tradeoff_lp,
)
from .upb import (
    DeltaConfig,
    ProductBasis,
    delta_s,
    ppt_perfect_discrimination,
    separation_witness,
    SEPARATION_CAP,
    tiles_upb,
)

OUT_DIR_ENV = "PPTDISC_OUT_DIR"
DEFAULT_ALPHA_GRID = ",".join(f"{a:g}" for a in np.linspace(0, 1, 11))
DEFAULT_R_GRID = "0.5,1,1.5,2,3"


class ConfigError(ValueError):
    """Invalid command-line parameters."""


def _parse_grid(text: str, name: str) -> tuple[float, ...]:
    try:
        vals = tuple(float(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise ConfigError(f"{name} must be a comma-separated list of numbers, got {text!r}") from None
    if not vals:
        raise ConfigError(f"{name} is empty")
    return vals


@dataclass(frozen=True)
class RunConfig:
    subcommand: str
    case: str = "MES"
    d: int = 2
    m: int = 2
    lam: float = 1.0
    p: float = 0.5
    n_min: int = 1
    n_max: int = 6
    alpha_grid: tuple[float, ...] = field(default_factory=lambda: _parse_grid(DEFAULT_ALPHA_GRID, "alpha grid"))
    r_grid: tuple[float, ...] = field(default_factory=lambda: _parse_grid(DEFAULT_R_GRID, "r grid"))
    fmt: str = "csv"
    out: str | None = None
    seed: int = 0
    tol: float = 1e-9
    restarts: int = 32
    falsifier_restarts: int = 256
    no_timestamp: bool = False
    basis: str | None = None
    perturb_q: float = 0.0

    def validate(self):
        if self.n_min < 0 or self.n_max < self.n_min:
            raise ConfigError(f"empty copy range [{self.n_min}, {self.n_max}]")
        if self.d < 2 or self.m < 2:
            raise ConfigError("dimensions must be at least 2")
        if not 0 <= self.lam <= 1:
            raise ConfigError(f"lambda {self.lam} outside [0, 1]")
        if not 0 < self.p < 1:
            raise ConfigError(f"prior {self.p} outside (0, 1)")
        if self.tol <= 0:
            raise ConfigError("tolerance must be positive")
        if self.restarts < 1 or self.falsifier_restarts < 1:
            raise ConfigError("restart counts must be positive")
        if self.subcommand == "error-curve":
            if self.case.upper() not in ERROR_CASES:
                raise ConfigError(f"unknown case {self.case!r}; expected one of {', '.join(ERROR_CASES)}")
            if self.n_min < 1:
                raise ConfigError("error curves start at n = 1")
        if self.subcommand == "tradeoff":
            if any(not 0 <= a <= 1 for a in self.alpha_grid):
                raise ConfigError("alpha grid must lie in [0, 1]")
            if self.n_min < 1:
                raise ConfigError("trade-off needs n >= 1")
        if self.subcommand == "exponents":
            names = [c.upper() for c in self.case.split(",")]
            for c in names:
                if c != "ALL" and c not in TABLE_ROWS and not (c.isdigit() and 1 <= int(c) <= len(TABLE_ROWS)):
                    raise ConfigError(f"unknown table row {c!r}; expected 1-8 or one of {', '.join(TABLE_ROWS)}")
            if any(r < 0 for r in self.r_grid):
                raise ConfigError("rates must be nonnegative")
        if self.subcommand == "separation" and self.n_min < 1:
            raise ConfigError("separation series starts at n = 1")
        return self


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pptdisc",
        description="Error probabilities and exponents for multi-copy state discrimination under PPT measurements.",
        epilog=__doc__.split("\n\n", 1)[1],
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", dest="fmt", choices=("csv", "json"), default="csv")
    common.add_argument("--out", help="output file (default: stdout)")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--tol", type=float, default=1e-9, help="agreement tolerance for checks")
    common.add_argument("--no-timestamp", action="store_true", help="omit the generated-at header")

    params = argparse.ArgumentParser(add_help=False)
    params.add_argument("--d", type=int, default=2, help="local dimension")
    params.add_argument("--m", type=int, default=2, help="embedded dimension for padded cases")
    params.add_argument("--lambda", dest="lam", type=float, default=1.0, help="mixing weight for padded cases")
    params.add_argument("--p", type=float, default=0.5, help="prior of the null hypothesis")

    def copies(n_max: int | None) -> argparse.ArgumentParser:
        # fresh parent per subcommand: argparse shares parent actions, so defaults would leak
        parent = argparse.ArgumentParser(add_help=False)
        parent.add_argument("--n-min", type=int, default=1)
        parent.add_argument("--n-max", type=int, default=n_max)
        return parent

    p = sub.add_parser("error-curve", parents=[common, params, copies(6)],
                       help="optimal error against copy number",
                       description="Columns: n, pe_closed_form, pe_lp, pe_lower_cert. "
                                   "The LP column is blank where no LP route exists (Werner cases).")
    p.add_argument("--case", default="MES", help=f"one of {', '.join(ERROR_CASES)}")

    p = sub.add_parser("tradeoff", parents=[common, params, copies(None)], help="type-II error at fixed type-I level",
                       description="Columns: n, alpha, beta_lp, beta_closed.")
    p.add_argument("--alpha-grid", default=DEFAULT_ALPHA_GRID)

    p = sub.add_parser("exponents", parents=[common, params], help="exponent table rows over a rate grid",
                       description="Columns: " + ", ".join(REPORT_COLUMNS) + ".")
    p.add_argument("--case", default="all", help="row number 1-8, row name, comma list, or 'all'")
    p.add_argument("--r-grid", default=DEFAULT_R_GRID)

    p = sub.add_parser("separation", parents=[common, copies(2)], help="SEP lower bound from a product basis",
                       description="JSON: delta, mu, bound series, PPT flag and witness checks. "
                                   "CSV columns: n, bound, psd_check, block_pos_falsified.")
    p.add_argument("--basis", help="JSON product basis file (default: the Tiles basis)")
    p.add_argument("--restarts", type=int, default=32, help="restarts for the delta optimizer")
    p.add_argument("--falsifier-restarts", type=int, default=256)

    p = sub.add_parser("verify", parents=[common, copies(10)], help="run the certificate suite",
                       description="Columns: check, status, residual, threshold. Exit status 1 on any failure.")
    p.add_argument("--perturb-q", type=float, default=0.0, help=argparse.SUPPRESS)
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    kw = {"subcommand": args.subcommand}
    for name in ("case", "d", "m", "lam", "p", "n_min", "n_max", "fmt", "out", "seed", "tol", "restarts",
                 "falsifier_restarts", "no_timestamp", "basis", "perturb_q"):
        if getattr(args, name, None) is not None:
            kw[name] = getattr(args, name)
    if args.subcommand == "tradeoff" and args.n_max is None:
        kw["n_max"] = kw.get("n_min", 1)
    if getattr(args, "alpha_grid", None) is not None:
        kw["alpha_grid"] = _parse_grid(args.alpha_grid, "alpha grid")
    if getattr(args, "r_grid", None) is not None:
        kw["r_grid"] = _parse_grid(args.r_grid, "r grid")
    return RunConfig(**kw).validate()


# ---------------------------------------------------------------------------
# computations: each returns (columns, rows, extra JSON fields)


def run_error_curve(cfg: RunConfig):
    case = cfg.case.upper()
    params = CaseParams(cfg.d, cfg.m, cfg.lam, cfg.p)
    rows = []
    for n in range(cfg.n_min, cfg.n_max + 1):
        closed = closed_form_error(case, params, n)
        lp, cert = None, None
        if case == "MES":
            lp = solve_symmetric_lp(n, cfg.d, cfg.p).value
            phi = pure_state(max_entangled_vector(cfg.d), (cfg.d, cfg.d))
            cert = exp_lower_bound(phi, cfg.p, n).bound
        elif case == "MES_HIGH":
            lp = solve_weighted_lp(n, cfg.m, cfg.p, (1 - cfg.p) * cfg.lam ** n)[1]
        elif case == "MES_HIGH_1":
            lp = solve_weighted_lp(n, cfg.m, (1 - cfg.p) * cfg.lam ** n, cfg.p)[1]
        if lp is not None and abs(lp - closed) > cfg.tol:
            raise RuntimeError(f"LP value {lp:.12g} and closed form {closed:.12g} disagree at n={n}")
        rows.append({"n": n, "pe_closed_form": closed, "pe_lp": lp, "pe_lower_cert": cert})
    return ["n", "pe_closed_form", "pe_lp", "pe_lower_cert"], rows, {"case": case, "params": vars_of(params)}


def run_tradeoff(cfg: RunConfig):
    rows = []
    for n in range(cfg.n_min, cfg.n_max + 1):
        for alpha in cfg.alpha_grid:
            sol = tradeoff_lp(n, cfg.d, alpha)
            closed = (1 - alpha) * (cfg.d + 1.0) ** -n
            if abs(sol.beta - closed) > cfg.tol:
                raise RuntimeError(f"trade-off LP {sol.beta:.12g} disagrees with {closed:.12g}")
            rows.append({"n": n, "alpha": alpha, "beta_lp": sol.beta, "beta_closed": closed})
    return ["n", "alpha", "beta_lp", "beta_closed"], rows, {"d": cfg.d}


def _table_cases(selection: str) -> list[str]:
    out = []
    for c in selection.split(","):
        c = c.strip().upper()
        if c == "ALL":
            out.extend(TABLE_ROWS)
        elif c.isdigit():
            out.append(TABLE_ROWS[int(c) - 1])
        else:
            out.append(c)
    return out


def run_exponents(cfg: RunConfig):
    params = CaseParams(cfg.d, cfg.m, cfg.lam, cfg.p)
    rows = []
    for case in _table_cases(cfg.case):
        report = exponents_table(case, params)
        rows.extend(report.evaluate(r) for r in cfg.r_grid)
    return list(REPORT_COLUMNS), rows, {}


def run_separation(cfg: RunConfig):
    if cfg.basis is not None:
        path = Path(cfg.basis)
        if not path.is_file():
            raise FileNotFoundError(f"basis file not found: {path}")
        basis = ProductBasis.load(path)
    else:
        basis = tiles_upb()
    est = delta_s(basis, DeltaConfig(restarts=cfg.restarts, seed=cfg.seed))
    delta = est.value
    mu = delta / basis.size
    rows = []
    for n in range(cfg.n_min, cfg.n_max + 1):
        row = {"n": n, "bound": mu ** n / 2, "psd_check": None, "block_pos_falsified": None}
        if math.prod(basis.dims) ** n <= SEPARATION_CAP and delta > 0:
            w = separation_witness(basis, n, delta, restarts=cfg.falsifier_restarts, seed=cfg.seed)
            row["psd_check"], row["block_pos_falsified"] = w.psd_check, w.block_pos_falsified
        rows.append(row)
    extra = {
        "basis": basis.name,
        "dims": list(basis.dims),
        "size": basis.size,
        "delta": delta,
        "delta_converged": est.converged,
        "mu": mu,
        "ppt_perfect": ppt_perfect_discrimination(basis),
    }
    return ["n", "bound", "psd_check", "block_pos_falsified"], rows, extra


def _perturbed(q: QMatrix, eps: float) -> QMatrix:
    if eps == 0:
        return q
    entries = q.entries.copy()
    entries[0, 0] += eps
    return QMatrix(q.n, q.d, entries)


def verify_checks(cfg: RunConfig) -> list[dict]:
    """Certificate suite; each entry has check, status, residual, threshold."""
    results = []

    def record(name, residual, threshold):
        results.append({"check": name, "status": "PASS" if residual <= threshold else "FAIL",
                        "residual": residual, "threshold": threshold})

    dims = range(2, 6)
    n_range = range(max(cfg.n_min, 1), cfg.n_max + 1)
    record("q_row_sums", max(q_matrix(n, d).row_sum_residual() for d in dims for n in n_range), 1e-12)
    record("dual_identity", max(
        identity_residual(_perturbed(q_matrix(n, d), cfg.perturb_q), certificate_weights(n, d))
        for d in dims for n in n_range), 1e-10)

    gap = 0.0
    for d in dims:
        for n in range(1, min(cfg.n_max, 6) + 1):
            for p in np.arange(1, 10) / 10:
                sol = solve_symmetric_lp(n, d, float(p))
                gap = max(gap, abs(sol.value - sol.dual.objective))
    record("lp_strong_duality", gap, cfg.tol)

    rng = np.random.default_rng(cfg.seed)
    worst = 0.0
    for d in (2, 3):
        for _ in range(5):
            psi = random_pure_state((d, d), rng)
            for n in range(1, 4):
                c = exp_lower_bound(psi, 0.5, n)
                worst = max(worst, -c.x_min_eig, c.y_gamma_max_eig, -c.single_copy_margin)
    record("exp_lb_sign_checks", max(worst, 0.0), 1e-9)

    violation = 0.0
    for _ in range(20):
        z = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
        h = Operator(z + z.conj().T, (2, 2))
        w = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
        m = Operator(w + w.conj().T, (2, 2))
        scale = max(np.abs(eigvals_hermitian(m)).max(), np.abs(eigvals_hermitian(transpose_b_side(m))).max())
        primal = ppt_norm_primal_value(h, m / scale)
        y = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
        y = Operator(y + y.conj().T, (2, 2))
        dual = ppt_norm_dual_value(h, h - y, y).norm_value
        violation = max(violation, primal - dual)
    record("weak_duality_sandwich", max(violation, 0.0), cfg.tol)
    return results


def run_verify(cfg: RunConfig):
    return ["check", "status", "residual", "threshold"], verify_checks(cfg), {}


RUNNERS = {
    "error-curve": run_error_curve,
    "tradeoff": run_tradeoff,
    "exponents": run_exponents,
    "separation": run_separation,
    "verify": run_verify,
}


# ---------------------------------------------------------------------------
# output


def vars_of(params: CaseParams) -> dict:
    return {"d": params.d, "m": params.m, "lambda": params.lam, "p": params.p}


def _cell(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, str):
        return v
    return fmt(v)


def render(cfg: RunConfig, columns, rows, extra) -> str:
    stamp = _dt.datetime.now(_dt.timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")
    if cfg.fmt == "json":
        doc = {}
        if not cfg.no_timestamp:
            doc["generated"] = stamp
        doc["command"] = cfg.subcommand
        doc.update({k: _json_value(v) for k, v in extra.items()})
        doc["rows"] = [{c: _json_value(r.get(c)) for c in columns} for r in rows]
        return json.dumps(doc, indent=2) + "\n"
    buf = io.StringIO()
    if not cfg.no_timestamp:
        buf.write(f"# generated {stamp}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for r in rows:
        writer.writerow([_cell(r.get(c)) for c in columns])
    return buf.getvalue()


def _json_value(v):
    if isinstance(v, dict):
        return {k: _json_value(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_json_value(x) for x in v]
    if isinstance(v, (np.floating, np.integer)):
        v = v.item()
    return json_number(v)


def _destination(out: str | None) -> Path | None:
    if out is None or out == "-":
        return None
    path = Path(out)
    base = os.environ.get(OUT_DIR_ENV)
    if base and not path.is_absolute():
        path = Path(base) / path
    return path


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = config_from_args(args)
        columns, rows, extra = RUNNERS[cfg.subcommand](cfg)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (OSError, ValueError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    text = render(cfg, columns, rows, extra)
    dest = _destination(cfg.out)
    if dest is None:
        sys.stdout.write(text)
    else:
        dest.parent.mkdir(parents=True, exist_ok=True)
        dest.write_text(text)
    if cfg.subcommand == "verify":
        failed = [r for r in rows if r["status"] != "PASS"]
        for r in failed:
            print(f"FAIL {r['check']}: residual {fmt(r['residual'])} > {fmt(r['threshold'])}", file=sys.stderr)
        return 1 if failed else 0
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
