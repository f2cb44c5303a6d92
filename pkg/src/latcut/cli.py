"""Command-line driver.

    latcut run --instance inst.json --kind sfm --seed 7 --out result.json
    latcut sweep --kind separation --n 2 4 6 --R 1 4 16 --seeds 5 --out table.csv

Exit codes: 0 success, 1 input/output or schema error, 2 solver alarm.
"""
from __future__ import annotations

import argparse
import csv
import json
import math
import sys
import time

import numpy as np

from .errors import InstanceError, LatcutError
from .problems import SeparationInstance, random_separation_instance
from .sfm import FAMILIES, SubmodularInstance, minimize_submodular, random_instance
from .solver import SolverConfig, minimize

EXIT_OK, EXIT_INPUT, EXIT_ALARM = 0, 1, 2
SWEEP_COLUMNS = ["kind", "n", "R", "seed", "backend", "oracle_calls", "eo_calls", "reductions", "fitted_c"]


def model(backend: str, n: int, R: int) -> float:
    """Oracle-call scale: ``n (n + log2 R)`` for LLL, ``n log2(2 n R)`` for exact SVP."""
    if backend == "exact":
        return n * math.log2(2 * n * R)
    return n * (n + math.log2(R))


def _jsonable(obj):
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.generic):
        return obj.item()
    if isinstance(obj, float) and not math.isfinite(obj):
        return str(obj)
    return obj


def solve_instance(data: dict, kind: str, config: SolverConfig) -> dict:
    """Run one instance; returns the result fields (without timing)."""
    if kind == "sfm":
        inst = SubmodularInstance.from_json(data)
        res = minimize_submodular(inst, config)
        if res.value != inst.value(res.subset):
            raise LatcutError("reported value does not match re-evaluation")
        out = {
            "minimizer": [int(i in res.subset) for i in range(inst.n)],
            "subset": sorted(i + 1 for i in res.subset),
            "value": res.value,
            "oracle_calls": res.oracle_calls,
            "eo_calls": res.eo_calls,
            "dimension_reductions": res.report.dimension_reductions if res.report else None,
            "certified": not res.fallback,
        }
        trace = res.trace
    else:
        inst = SeparationInstance.from_json(data)
        if config.radius < inst.default_radius:
            raise InstanceError(f"radius {config.radius} is below the instance radius {inst.default_radius}")
        report = minimize(inst.oracle, inst.n, config)
        if not inst.oracle(np.array(report.minimizer, dtype=float)).is_yes:
            raise LatcutError("minimizer failed re-verification")
        out = {
            "minimizer": list(report.minimizer),
            "value": inst.value(report.minimizer),
            "oracle_calls": report.oracle_calls,
            "dimension_reductions": report.dimension_reductions,
        }
        trace = report.trace
    return out, trace


def _config(args, radius: int) -> SolverConfig:
    return SolverConfig(
        radius=radius,
        svp_backend=args.backend,
        seed=args.seed,
        max_oracle_calls=args.max_oracle_calls,
        perturb=args.perturb == "on",
        diagnostics=args.diagnostics,
    )


def cmd_run(args) -> int:
    try:
        with open(args.instance) as fh:
            data = json.load(fh)
        if not isinstance(data, dict):
            raise InstanceError("instance must be a JSON object")
        kind = args.kind or ("sfm" if data.get("family") in FAMILIES else "separation")
        if kind == "sfm":
            radius = 1
        else:
            radius = args.radius or SeparationInstance.from_json(data).default_radius
        config = _config(args, radius)
    except (OSError, json.JSONDecodeError, InstanceError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT

    result = {"seed": args.seed, "backend": args.backend, "kind": kind}
    start = time.perf_counter()
    code = EXIT_OK
    try:
        fields, trace = solve_instance(data, kind, config)
        result.update(fields)
        result["status"] = "ok"
        if args.diagnostics:
            result["trace"] = trace
    except InstanceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except LatcutError as exc:
        print(f"solver alarm: {type(exc).__name__}: {exc}", file=sys.stderr)
        result.update(status="alarm", error=type(exc).__name__, message=str(exc))
        code = EXIT_ALARM
    result["wall_time_ms"] = round(1000 * (time.perf_counter() - start), 3)
    text = json.dumps(_jsonable(result), indent=2, sort_keys=True)
    try:
        if args.out:
            with open(args.out, "w") as fh:
                fh.write(text + "\n")
        else:
            print(text)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    return code


def sweep_cell(kind: str, n: int, R: int, seed: int, backend: str) -> dict:
    """One sweep row on a random instance determined by ``(kind, n, R, seed)``."""
    rng = np.random.default_rng(np.random.SeedSequence([n, R, seed, kind == "sfm"]))
    config = SolverConfig(radius=R, svp_backend=backend, seed=seed)
    if kind == "sfm":
        inst = random_instance(FAMILIES[seed % len(FAMILIES)], n, rng)
        res = minimize_submodular(inst, config)
        calls, eo, red = res.oracle_calls, res.eo_calls, res.report.dimension_reductions if res.report else ""
        R = 1
    else:
        inst = random_separation_instance(n, R, rng)
        report = minimize(inst.oracle, n, config)
        if not inst.is_minimizer(report.minimizer):
            raise LatcutError(f"wrong minimizer {report.minimizer}")
        calls, eo, red = report.oracle_calls, "", report.dimension_reductions
    return {
        "kind": kind, "n": n, "R": R, "seed": seed, "backend": backend,
        "oracle_calls": calls, "eo_calls": eo, "reductions": red,
        "fitted_c": round(calls / model(backend, n, R), 4),
    }


def cmd_sweep(args) -> int:
    seeds = list(range(args.seeds)) if args.seed_list is None else args.seed_list
    radii = [1] if args.kind == "sfm" else args.R
    rows, failed = [], 0
    for n in args.n:
        for R in radii:
            for seed in seeds:
                try:
                    rows.append(sweep_cell(args.kind, n, R, seed, args.backend))
                except LatcutError as exc:
                    failed += 1
                    print(f"cell n={n} R={R} seed={seed} failed: {type(exc).__name__}: {exc}", file=sys.stderr)
    rows.sort(key=lambda r: (r["n"], r["R"], r["seed"]))
    out = open(args.out, "w", newline="") if args.out else sys.stdout
    try:
        writer = csv.DictWriter(out, fieldnames=SWEEP_COLUMNS)
        writer.writeheader()
        writer.writerows(rows)
    finally:
        if args.out:
            out.close()
    if rows:
        worst = max(r["fitted_c"] for r in rows)
        print(f"fitted constant ({args.backend}): {worst:.3f} over {len(rows)} runs", file=sys.stderr)
    return EXIT_ALARM if failed else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="latcut", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def solver_flags(sp):
        sp.add_argument("--backend", choices=["lll", "exact"], default="lll")
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--max-oracle-calls", type=int, default=None)
        sp.add_argument("--perturb", choices=["on", "off"], default="on")
        sp.add_argument("--diagnostics", action="store_true")

    run = sub.add_parser("run", help="solve one instance")
    run.add_argument("--instance", required=True)
    run.add_argument("--kind", choices=["separation", "sfm"], default=None,
                     help="inferred from the instance family when omitted")
    run.add_argument("--radius", type=int, default=None)
    run.add_argument("--out", default=None)
    solver_flags(run)
    run.set_defaults(func=cmd_run)

    sw = sub.add_parser("sweep", help="oracle-complexity table over random instances")
    sw.add_argument("--kind", choices=["separation", "sfm"], required=True)
    sw.add_argument("--n", type=int, nargs="*", default=[])
    sw.add_argument("--R", type=int, nargs="*", default=[1, 4, 16])
    sw.add_argument("--seeds", type=int, default=5, help="use seeds 0..k-1")
    sw.add_argument("--seed-list", type=int, nargs="*", default=None)
    sw.add_argument("--backend", choices=["lll", "exact"], default="lll")
    sw.add_argument("--out", default=None)
    sw.set_defaults(func=cmd_sweep)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
