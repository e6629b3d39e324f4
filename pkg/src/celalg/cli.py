"""Command-line verification suites.

Three subcommands:

  classify   quartic trace-identity membership table over the standard scan
  solve      deformation constants from the defect solver vs. closed forms
  verify     zero-defect Jacobi grid plus the trace-identity batches

Exit codes: 0 all checks pass, 1 verification failure, 2 configuration
error.  Every flag can also be set through an environment variable with the
CELALG_ prefix (flag --grid-max -> CELALG_GRID, see _ENV_VARS); command-line
values win.  Structured output (--json) is a single deterministic document
on stdout; progress and timing go to stderr.
"""

from __future__ import annotations

import argparse
import json
import os
import re
import sys
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Tuple

from . import adinv
from .celestial import (
    ADMISSIBLE_TYPES,
    closed_form_fractions,
    solve_constants,
    verify_jacobi_grid,
)
from .liealg import (
    ConfigurationError,
    LieAlgebra,
    algebra_from_cache,
    save_structure_constants,
    simple_lie_algebra,
)
from .report import Report

_ENV_VARS = {
    "grid": "CELALG_GRID",
    "samples": "CELALG_SAMPLES",
    "seed": "CELALG_SEED",
    "beta": "CELALG_BETA",
    "json": "CELALG_JSON",
    "enable_e78": "CELALG_ENABLE_E78",
    "cache_dir": "CELALG_CACHE_DIR",
    "jobs": "CELALG_JOBS",
    "max_rank": "CELALG_MAX_RANK",
}

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_CONFIG = 2


@dataclass
class RunConfig:
    command: str
    series: Optional[str] = None
    rank: Optional[int] = None
    grid_max: int = 2
    samples: int = 100
    master_seed: int = 0
    beta: Optional[Fraction] = None  # None = formal
    json_output: bool = False
    enable_e78: bool = False
    cache_dir: Optional[str] = None
    jobs: int = 1
    max_rank: int = 4

    def echo(self) -> dict:
        out = {"command": self.command, "seed": self.master_seed,
               "beta": "formal" if self.beta is None else str(self.beta)}
        if self.series:
            out["algebra"] = f"{self.series}{self.rank}"
        if self.command == "verify":
            out["grid_max"] = self.grid_max
            out["jobs"] = self.jobs
        if self.command in ("verify", "classify"):
            out["samples"] = self.samples
        if self.command == "classify":
            out["max_rank"] = self.max_rank
            out["enable_e78"] = self.enable_e78
        return out


def parse_algebra(text: str) -> Tuple[str, int]:
    m = re.fullmatch(r"([A-Ga-g])(\d+)", text.strip())
    if not m:
        raise ConfigurationError(f"cannot parse algebra name {text!r}")
    return m.group(1).upper(), int(m.group(2))


def parse_beta(text: str) -> Optional[Fraction]:
    if text.strip().lower() == "formal":
        return None
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise ConfigurationError(f"cannot parse beta value {text!r}: {exc}")


def _env(key: str) -> Optional[str]:
    return os.environ.get(_ENV_VARS[key])


def _resolve(cli_value, key: str, cast, default):
    if cli_value is not None:
        return cli_value
    raw = _env(key)
    if raw is not None:
        try:
            return cast(raw)
        except (TypeError, ValueError) as exc:
            raise ConfigurationError(f"bad {_ENV_VARS[key]}={raw!r}: {exc}")
    return default


def _bool_cast(raw: str) -> bool:
    return raw.strip().lower() in ("1", "true", "yes", "on")


def get_algebra(series: str, rank: int, cache_dir: Optional[str]) -> LieAlgebra:
    """Build the algebra, consulting the structure-constant cache if set."""
    if cache_dir:
        os.makedirs(cache_dir, exist_ok=True)
        path = os.path.join(cache_dir, f"{series}{rank}.sc")
        if os.path.exists(path):
            return algebra_from_cache(series, rank, path)
        L = simple_lie_algebra(series, rank)
        save_structure_constants(L, path)
        return L
    return simple_lie_algebra(series, rank)


def _emit(cfg: RunConfig, document: dict, text_lines: List[str]) -> None:
    if cfg.json_output:
        print(json.dumps(document, sort_keys=True, indent=2))
    else:
        for line in text_lines:
            print(line)


def _status(flag: bool) -> str:
    return "pass" if flag else "FAIL"


def cmd_classify(cfg: RunConfig) -> int:
    rows = []
    t0 = time.time()
    for series, rank in adinv.classification_types(cfg.max_rank, cfg.enable_e78):
        L = simple_lie_algebra(series, rank)
        alpha = adinv.quartic_alpha(L, samples=max(24, cfg.samples // 4),
                                    master_seed=cfg.master_seed)
        rows.append((L.name, alpha is not None, alpha))
        print(f"[{time.time() - t0:7.1f}s] scanned {L.name} (dim {L.dim})",
              file=sys.stderr)
    expected = {f"{s}{r}" for s, r in ADMISSIBLE_TYPES}
    ok = all((name in expected) == found for name, found, _ in rows)
    lines = [f"{'type':<6} {'member':<8} alpha"]
    for name, found, alpha in rows:
        lines.append(f"{name:<6} {str(found).lower():<8} {alpha if alpha is not None else '-'}")
    lines.append(f"classification {_status(ok)}")
    document = {
        "config": cfg.echo(),
        "results": [{"type": name, "member": found,
                     "alpha": None if alpha is None else str(alpha)}
                    for name, found, alpha in rows],
        "pass": ok,
    }
    _emit(cfg, document, lines)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_solve(cfg: RunConfig) -> int:
    L = get_algebra(cfg.series, cfg.rank, cfg.cache_dir)
    t0 = time.time()

    def progress(done, total):
        print(f"[{time.time() - t0:7.1f}s] defect rows from {done}/{total} triples",
              file=sys.stderr)

    sol = solve_constants(L, master_seed=cfg.master_seed,
                          progress=progress if L.dim > 20 else None)
    admissible = (L.series, L.rank) in ADMISSIBLE_TYPES
    closed = closed_form_fractions(L) if admissible else None
    if admissible:
        agree = (sol.status == "unique" and closed is not None
                 and sol.d_over_beta2 == closed[0]
                 and sol.c_over_beta2 == closed[1])
    else:
        agree = sol.status == "trivial_only"
    lines = [f"algebra {L.name}: dim {L.dim}, dual Coxeter {L.h_dual_coxeter}",
             f"solver status: {sol.status} ({sol.rows} independent rows, "
             f"{sol.triples} triples)"]
    if sol.status == "unique":
        lines.append(f"  D = ({sol.d_over_beta2}) beta^2")
        lines.append(f"  C = ({sol.c_over_beta2}) beta^2")
    if closed is not None:
        lines.append(f"closed form: D = ({closed[0]}) beta^2, C = ({closed[1]}) beta^2")
    else:
        lines.append("closed form: not admissible (only beta = D = C = 0)")
    lines.append(f"agreement {_status(agree)}")
    document = {
        "config": cfg.echo(),
        "results": [{
            "solution": sol.to_dict(),
            "closed_form": None if closed is None else
            {"D_over_beta2": str(closed[0]), "C_over_beta2": str(closed[1])},
            "admissible": admissible,
            "agreement": agree,
        }],
        "pass": agree,
    }
    _emit(cfg, document, lines)
    return EXIT_OK if agree else EXIT_FAIL


def cmd_verify(cfg: RunConfig) -> int:
    L = get_algebra(cfg.series, cfg.rank, cfg.cache_dir)
    reports: List[Report] = []
    t0 = time.time()
    reports.append(verify_jacobi_grid(L, cfg.grid_max, level="extended",
                                      beta=cfg.beta, jobs=cfg.jobs))
    print(f"[{time.time() - t0:7.1f}s] jacobi grid done", file=sys.stderr)
    reports.extend(adinv.trace_identity_suite(L, samples=cfg.samples,
                                              master_seed=cfg.master_seed))
    print(f"[{time.time() - t0:7.1f}s] trace-identity batches done",
          file=sys.stderr)
    ok = all(r.passed for r in reports)
    lines = []
    for r in reports:
        extra = ""
        if r.check == "jacobi_grid":
            extra = (f" ({r.details['triples']} triples, grid "
                     f"{r.details['grid_max']})")
        elif r.samples:
            extra = f" ({r.samples} samples)"
        lines.append(f"{r.check:<28} {_status(r.passed)}{extra}")
        if r.first_counterexample is not None:
            lines.append(f"    first counterexample: {r.first_counterexample}")
    lines.append(f"verification {_status(ok)}")
    document = {
        "config": cfg.echo(),
        "results": [r.to_dict() for r in reports],
        "pass": ok,
    }
    _emit(cfg, document, lines)
    return EXIT_OK if ok else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="celalg",
        description="Exact verification suites for celestial current algebras.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--seed", type=int, default=None,
                       help="master seed for all sampled elements")
        p.add_argument("--json", action="store_true", default=None,
                       help="emit one structured JSON document on stdout")
        p.add_argument("--cache-dir", default=None,
                       help="directory of structure-constant cache files")

    p_classify = sub.add_parser("classify",
                                help="quartic trace-identity membership table")
    common(p_classify)
    p_classify.add_argument("--max-rank", type=int, default=None)
    p_classify.add_argument("--samples", type=int, default=None)
    p_classify.add_argument("--enable-e78", action="store_true", default=None,
                            help="include the two largest exceptional types")

    p_solve = sub.add_parser("solve", help="deformation constants for one algebra")
    common(p_solve)
    p_solve.add_argument("algebra", help="type name, e.g. A1, G2, D4")
    p_solve.add_argument("--beta", default=None,
                         help="'formal' (default) or an exact rational p/q")

    p_verify = sub.add_parser("verify", help="Jacobi grid and trace identities")
    common(p_verify)
    p_verify.add_argument("algebra", help="type name, e.g. A1, G2, D4")
    p_verify.add_argument("--grid", type=int, default=None,
                          help="max bidegree entry in the Jacobi grid")
    p_verify.add_argument("--samples", type=int, default=None)
    p_verify.add_argument("--beta", default=None)
    p_verify.add_argument("--jobs", type=int, default=None,
                          help="parallel workers for the Jacobi grid")

    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    cfg = RunConfig(command=args.command)
    if getattr(args, "algebra", None) is not None:
        cfg.series, cfg.rank = parse_algebra(args.algebra)
    cfg.master_seed = _resolve(args.seed, "seed", int, 0)
    cfg.json_output = _resolve(args.json, "json", _bool_cast, False)
    cfg.cache_dir = _resolve(args.cache_dir, "cache_dir", str, None)
    if hasattr(args, "samples"):
        cfg.samples = _resolve(args.samples, "samples", int, 100)
    if hasattr(args, "grid"):
        cfg.grid_max = _resolve(args.grid, "grid", int, 2)
    if hasattr(args, "beta"):
        raw = _resolve(args.beta, "beta", str, "formal")
        cfg.beta = parse_beta(raw)
    if hasattr(args, "jobs"):
        cfg.jobs = _resolve(args.jobs, "jobs", int, 1)
        if cfg.jobs < 1:
            raise ConfigurationError("--jobs must be at least 1")
    if hasattr(args, "max_rank"):
        cfg.max_rank = _resolve(args.max_rank, "max_rank", int, 4)
        if cfg.max_rank < 4:
            raise ConfigurationError("--max-rank must be at least 4")
    if hasattr(args, "enable_e78"):
        cfg.enable_e78 = _resolve(args.enable_e78, "enable_e78", _bool_cast, False)
    return cfg


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = config_from_args(args)
        t0 = time.time()
        if cfg.command == "classify":
            code = cmd_classify(cfg)
        elif cfg.command == "solve":
            code = cmd_solve(cfg)
        else:
            code = cmd_verify(cfg)
        print(f"[{time.time() - t0:7.1f}s] total", file=sys.stderr)
        return code
    except ConfigurationError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
