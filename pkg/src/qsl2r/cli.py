"""Command line entry point: ``qsl2r <suite> [options]``.

Exit codes: 0 when every check passes, 1 when any check fails, 2 for an
invalid configuration.
"""
from __future__ import annotations

import argparse
import json
import math
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from typing import Callable, Dict, List, Optional, Sequence

import numpy as np

from . import __version__, verify
from .qnum import ParameterError, QContext
from .coideal import build_coideal
from .relint import (CheckReport, GCharacter, TruncationError, check_balanced,
                     compute_weights, report, solve_weights)

SCHEMA_VERSION = "1.0"


@dataclass(frozen=True)
class RunConfig:
    q: float = 0.5
    a: float = 1.0
    tol: float = 1e-9
    max_spin: int = 4
    M: int = 3
    g_exponent: float = -1.0
    seed: int = 0
    samples: int = 20
    cutoff: int = 4
    format: str = "text"

    def __post_init__(self):
        self.context()  # raises ParameterError
        if not isinstance(self.M, int) or self.M < 0:
            raise ParameterError(f"M must be a non-negative integer, got {self.M!r}")
        if self.M > self.max_spin:
            raise ParameterError(f"M={self.M} exceeds max_spin={self.max_spin}")
        if not math.isfinite(self.g_exponent):
            raise ParameterError("g exponent must be finite")
        if self.samples < 1 or self.cutoff < 1:
            raise ParameterError("samples and cutoff must be positive")
        if self.format not in ("text", "json"):
            raise ParameterError(f"unknown format {self.format!r}")

    def context(self) -> QContext:
        return QContext(q=self.q, a=self.a, tol=self.tol, max_spin=self.max_spin)


def _integral(cfg: RunConfig, rng) -> List[CheckReport]:
    ctx = cfg.context()
    cd = build_coideal(ctx)
    g = GCharacter(cfg.g_exponent)
    bal = check_balanced(g, cd)
    if not bal.passed:
        return [report("integral_weights", bal.residual, ctx.tol,
                       reason=f"Phi_C is not balanced for s={cfg.g_exponent:g}")]
    out = verify.integral_suite(ctx, cfg.M)
    solved, nullity = solve_weights(g, cd, cfg.M)
    if solved is None:
        out.append(report("integral_direct_solve", float(nullity), 0.0, nullity=nullity))
    else:
        ref = compute_weights(g, cd, cfg.M)
        diff = max(abs(solved.weights[m] - ref.weights[m]) for m in ref.weights)
        out.append(report("integral_direct_solve", diff, ctx.tol * 1e3, nullity=nullity))
    return out + verify.coproduct_phic_suite(ctx, max_n=min(ctx.max_n, 6))


SUITES: Dict[str, Callable[[RunConfig, np.random.Generator], List[CheckReport]]] = {
    "spectrum": lambda c, rng: verify.spectrum_suite(c.context()),
    "balance": lambda c, rng: verify.balance_suite(c.context(), c.g_exponent),
    "integral": _integral,
    "haar": lambda c, rng: verify.peter_weyl_suite(
        c.context(), rng, max_n=min(c.context().max_n, 6), samples=c.samples),
    "gelfand": lambda c, rng: verify.gelfand_suite(c.context(), rng, pairs=c.samples),
    "double": lambda c, rng: verify.double_suite(c.context(), rng, samples=c.samples),
    "regrep": lambda c, rng: verify.regrep_suite(c.context(), rng, cutoff=c.cutoff, M=c.M),
}
ORDER = list(SUITES)


def _threads() -> int:
    raw = os.environ.get("QSL2R_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        raise ParameterError(f"QSL2R_THREADS must be an integer, got {raw!r}")


def _finite(x):
    return float(x) if math.isfinite(x) else None


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (np.floating, float)):
        return _finite(float(obj))
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return [_finite(obj.real), _finite(obj.imag)]
    return obj


def run(subcommand: str, cfg: RunConfig, timing: bool = False) -> dict:
    """Run one suite (or ``all``) and assemble the report document."""
    names = ORDER if subcommand == "all" else [subcommand]
    if any(n not in SUITES for n in names):
        raise ParameterError(f"unknown suite {subcommand!r}")
    # each suite gets its own stream, so results do not depend on scheduling
    seeds = np.random.SeedSequence(cfg.seed).spawn(len(ORDER))

    def job(name):
        rng = np.random.default_rng(seeds[ORDER.index(name)])
        t0 = time.perf_counter()
        checks = SUITES[name](cfg, rng)
        return checks, time.perf_counter() - t0

    with ThreadPoolExecutor(max_workers=_threads()) as pool:
        results = list(pool.map(job, names))

    checks = []
    for name, (reps, _) in zip(names, results):
        for r in reps:
            d = r.as_dict()
            d["suite"] = name
            d["residual"] = _finite(d["residual"])
            d["details"] = _jsonable(d["details"])
            checks.append(d)
    doc = {
        "schema_version": SCHEMA_VERSION,
        "program": "qsl2r",
        "version": __version__,
        "subcommand": subcommand,
        "config": asdict(cfg),
        "status": "pass" if all(c["status"] == "pass" for c in checks) else "fail",
        "checks": checks,
    }
    if timing:
        doc["timing"] = {name: t for name, (_, t) in zip(names, results)}
    return doc


def format_text(doc: dict) -> str:
    lines = [f"qsl2r {doc['subcommand']}  q={doc['config']['q']} a={doc['config']['a']}"]
    for c in doc["checks"]:
        res = "n/a" if c["residual"] is None else f"{c['residual']:.3e}"
        lines.append(f"  [{c['status'].upper()}] {c['suite']}/{c['name']}: "
                     f"residual={res} tol={c['tol']:.0e}")
        weights = c["details"].get("weights") if c["name"] == "integral_weights" else None
        if weights:
            lines.append("    weights: " + ", ".join(f"mu_{m}={w:.12g}" for m, w in weights.items()))
    if "timing" in doc:
        lines.append("  timing: " + ", ".join(f"{k}={v:.2f}s" for k, v in doc["timing"].items()))
    lines.append(f"overall: {doc['status'].upper()}")
    return "\n".join(lines)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="qsl2r", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    d = RunConfig()
    common.add_argument("--q", type=float, default=d.q, help="deformation parameter, 0 < q < 1")
    common.add_argument("--a", type=float, default=d.a, help="Podles parameter t = q^a (a > 0)")
    common.add_argument("--tol", type=float, default=d.tol)
    common.add_argument("--max-spin", type=int, default=d.max_spin)
    common.add_argument("--M", type=int, default=d.M, help="truncation |m| <= M of I")
    common.add_argument("--g-exponent", type=float, default=d.g_exponent,
                        help="g = k**s (default -1)")
    common.add_argument("--seed", type=int, default=d.seed)
    common.add_argument("--samples", type=int, default=d.samples,
                        help="random samples per randomized check")
    common.add_argument("--cutoff", type=int, default=d.cutoff, help="B-spin cutoff for regrep")
    common.add_argument("--format", choices=("text", "json"), default=d.format,
                        help="what to print on stdout")
    common.add_argument("--json", metavar="PATH", help="also write the JSON report to PATH")
    common.add_argument("--timing", action="store_true",
                        help="include wall-clock timings (breaks bit-reproducibility)")
    sub = p.add_subparsers(dest="subcommand", required=True)
    for name in ORDER + ["all"]:
        sub.add_parser(name, parents=[common])
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = RunConfig(q=args.q, a=args.a, tol=args.tol, max_spin=args.max_spin, M=args.M,
                        g_exponent=args.g_exponent, seed=args.seed, samples=args.samples,
                        cutoff=args.cutoff, format=args.format)
        doc = run(args.subcommand, cfg, timing=args.timing)
    except (ParameterError, TruncationError) as exc:
        print(f"qsl2r: invalid configuration: {exc}", file=sys.stderr)
        return 2
    text = json.dumps(doc, indent=2, sort_keys=True, allow_nan=False)
    if args.json:
        with open(args.json, "w") as fh:
            fh.write(text + "\n")
    print(text if cfg.format == "json" else format_text(doc))
    return 0 if doc["status"] == "pass" else 1


if __name__ == "__main__":
    sys.exit(main())
