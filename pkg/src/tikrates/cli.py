"""Command line front end.

Subcommands: ``check`` runs one condition check and writes the report,
``rates`` sweeps a parameter grid and writes fit plus per-point rows,
``lemmas`` batch-verifies the measure inequalities, ``conformance`` compares
computed verdicts against the documented expectations of the named
instances.  Outputs are JSON or CSV; with ``--no-timestamp`` a JSON artifact
is byte-reproducible for a fixed seed and configuration.

Exit codes: 0 success, 1 verdict mismatch or inequality violation, 2 usage
error.  The environment variable ``TIKRATES_OUTDIR`` sets the directory for
relative output paths.
"""

from __future__ import annotations

import argparse
import csv
import datetime
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import conditions as cond
from . import suites
from .instances import INSTANCE_NAMES, NamedInstance, build, \
    derive_ivi_constants, run_battery
from .operators import SpectralOperator
from .rates import (IN_RANGE, RANDOM_SPHERE, WORST_CASE_BASIS, NoiseModel,
                    infimum_rate, noise_free_rate, noisy_rate,
                    noisy_sweep_rows)

CONDITION_ALIASES = {
    "ssc": cond.STANDARD_SC, "standard_sc": cond.STANDARD_SC,
    "hvi": cond.HVI, "ivi": cond.IVI, "svi": cond.SVI,
    "tail": cond.SPECTRAL_TAIL, "spectral_tail": cond.SPECTRAL_TAIL,
}
NOISE_ALIASES = {"worst-case": WORST_CASE_BASIS, "random": RANDOM_SPHERE,
                 "in-range": IN_RANGE}


def _out_path(path: str) -> Path:
    p = Path(path)
    if not p.is_absolute():
        p = Path(os.environ.get("TIKRATES_OUTDIR", ".")) / p
    p.parent.mkdir(parents=True, exist_ok=True)
    return p


def _dump_json(payload: dict, path: str | None, stamp: bool) -> str:
    if stamp:
        payload = dict(payload)
        payload["generated_at"] = datetime.datetime.now(
            datetime.timezone.utc).isoformat()
    text = json.dumps(payload, indent=2, sort_keys=True)
    if path:
        _out_path(path).write_text(text + "\n")
    return text


def _load_instance(args) -> NamedInstance:
    ref = args.instance
    if ref in INSTANCE_NAMES:
        return build(ref, n=args.n, seed=args.seed)
    path = Path(ref)
    if not path.exists():
        raise SystemExit(f"error: unknown instance {ref!r} and no such file")
    spec = json.loads(path.read_text())
    if "y" not in spec:
        raise SystemExit("error: operator file must provide 'y'")
    if "diagonal" in spec:
        op = SpectralOperator.diagonal(spec["diagonal"],
                                       note=f"loaded from {path.name}")
    elif "matrix" in spec:
        op = SpectralOperator.from_matrix(spec["matrix"],
                                          note=f"loaded from {path.name}")
    else:
        raise SystemExit("error: operator file needs 'diagonal' or 'matrix'")
    y = np.asarray(spec["y"], dtype=float)
    if op.kind == "dense" and y.size == op.matrix.shape[0] != op.n:
        yvec, _ = op.data_from_ambient(y)
    else:
        yvec = op.data_vector(y)
    u_dag = op.vector(yvec.coeffs / op.sigma)
    return NamedInstance(name=path.stem, op=op, y=yvec, u_dagger=u_dag,
                         expected={}, n=op.n)


def _cmd_check(args) -> int:
    inst = _load_instance(args)
    condition = CONDITION_ALIASES[args.condition]
    if condition == cond.STANDARD_SC:
        rep = cond.check_standard_sc(inst.op, inst.u_dagger, args.nu)
    elif condition == cond.HVI:
        rep = cond.check_hvi(inst.op, inst.u_dagger, args.nu, seed=args.seed)
    elif condition == cond.SVI:
        rep = cond.check_svi(inst.op, inst.u_dagger, args.nu, seed=args.seed)
    elif condition == cond.SPECTRAL_TAIL:
        rep = cond.check_spectral_tail(inst.op, inst.u_dagger, args.nu)
    else:
        if args.mu is None:
            raise SystemExit("error: --mu is required for the ivi check")
        beta, gamma = args.beta, args.gamma
        if beta is None or gamma is None:
            dbeta, dgamma = derive_ivi_constants(inst, args.mu, seed=args.seed)
            beta = dbeta if beta is None else beta
            gamma = dgamma if gamma is None else gamma
        rep = cond.check_ivi(inst.op, inst.u_dagger, args.mu, beta, gamma,
                             seed=args.seed)
    text = _dump_json(rep.to_json(), args.output, not args.no_timestamp)
    print(text)
    return 0


def _grid(lo, hi, points):
    return np.logspace(np.log10(lo), np.log10(hi), points)


def _write_csv(path: str, header, rows) -> None:
    with _out_path(path).open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        writer.writerows(rows)


def _cmd_rates(args) -> int:
    inst = _load_instance(args)
    noise = NoiseModel(kind=NOISE_ALIASES[args.noise], seed=args.seed)
    if args.mode == "noise-free":
        fit = noise_free_rate(inst.op, inst.y,
                              _grid(args.alpha_min, args.alpha_max,
                                    args.alpha_points))
        rows = [(x, e, x, 0) for x, e in fit.grid]
        payload = {"mode": args.mode, "instance": inst.name,
                   "fit": fit.to_json()}
    elif args.mode == "noisy":
        deltas = _grid(args.delta_min, args.delta_max, args.delta_points)
        fit = noisy_rate(inst.op, inst.y, deltas, args.mu, noise, args.trials)
        rows = noisy_sweep_rows(inst.op, inst.y, deltas, args.mu, noise,
                                args.trials)
        payload = {"mode": args.mode, "instance": inst.name, "mu": args.mu,
                   "noise": noise.kind, "fit": fit.to_json()}
    else:  # infimum
        value = infimum_rate(inst.op, inst.y, args.delta, noise,
                             _grid(args.alpha_min, args.alpha_max,
                                   args.alpha_points), args.trials)
        rows = [(args.delta, value, float("nan"), 0)]
        payload = {"mode": args.mode, "instance": inst.name,
                   "delta": args.delta, "value": value, "noise": noise.kind}
    if args.output and args.format == "csv":
        _write_csv(args.output, ("x", "error", "alpha_used",
                                 "trial_witness_index"), rows)
        print(_dump_json(payload, None, not args.no_timestamp))
    else:
        print(_dump_json(payload, args.output, not args.no_timestamp))
    return 0


def _cmd_lemmas(args) -> int:
    results = {
        "cs_bound": suites.cs_bound_suite(args.count, args.seed),
        "tail_bound": suites.tail_bound_suite(max(200, args.count // 5),
                                              args.seed),
        "split_point": suites.split_point_suite(),
    }
    bad = (results["cs_bound"]["violations"]
           + results["tail_bound"]["violations"]
           + results["split_point"]["violations"])
    print(_dump_json(results, args.output, not args.no_timestamp))
    return 0 if bad == 0 else 1


def _cmd_conformance(args) -> int:
    names = list(INSTANCE_NAMES) if args.all else [args.instance]
    if names == [None]:
        raise SystemExit("error: give --instance NAME or --all")
    rows = []
    for name in names:
        inst = build(name, n=args.n, seed=args.seed)
        rows.extend(run_battery(inst, seed=args.seed))
    width = max(len(r["instance"]) for r in rows)
    mismatches = 0
    print(f"{'instance':{width}}  {'condition':13} {'param':>7} "
          f"{'expected':12} {'computed':12} match")
    for r in rows:
        ok = r["match"]
        mismatches += 0 if ok else 1
        print(f"{r['instance']:{width}}  {r['condition']:13} "
              f"{r['parameter']:7.4g} {r['expected']:12} {r['computed']:12} "
              f"{'yes' if ok else 'NO'}")
    print(f"{len(rows)} checks, {mismatches} mismatches")
    if args.output:
        payload = {"checks": [
            {k: v for k, v in r.items() if k != "report"} for r in rows],
            "mismatches": mismatches}
        _dump_json(payload, args.output, not args.no_timestamp)
    return 0 if mismatches == 0 else 1


def _parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(prog="tikrates", description=__doc__)
    sub = top.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--instance", help="instance name or operator JSON file")
        p.add_argument("--n", type=int, default=60, help="truncation (>= 8)")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--output", help="output file path")
        p.add_argument("--no-timestamp", action="store_true",
                       help="suppress the timestamp field for reproducible output")

    p = sub.add_parser("check", help="run one condition check")
    common(p)
    p.add_argument("--condition", required=True,
                   choices=sorted(CONDITION_ALIASES))
    p.add_argument("--nu", type=float, help="parameter for ssc/hvi/svi/tail")
    p.add_argument("--mu", type=float, help="parameter for ivi")
    p.add_argument("--beta", type=float, help="ivi constant (doubled form)")
    p.add_argument("--gamma", type=float, help="ivi constant")

    p = sub.add_parser("rates", help="empirical convergence-order sweeps")
    common(p)
    p.add_argument("--mode", required=True,
                   choices=("noise-free", "noisy", "infimum"))
    p.add_argument("--mu", type=float, default=2.0 / 3.0)
    p.add_argument("--noise", default="worst-case",
                   choices=sorted(NOISE_ALIASES))
    p.add_argument("--trials", type=int, default=None)
    p.add_argument("--alpha-min", type=float, default=1e-10)
    p.add_argument("--alpha-max", type=float, default=1e-4)
    p.add_argument("--alpha-points", type=int, default=25)
    p.add_argument("--delta-min", type=float, default=1e-8)
    p.add_argument("--delta-max", type=float, default=1e-2)
    p.add_argument("--delta-points", type=int, default=25)
    p.add_argument("--delta", type=float, default=1e-4,
                   help="noise level for the infimum mode")
    p.add_argument("--format", default="json", choices=("json", "csv"))

    p = sub.add_parser("lemmas", help="verify the measure inequalities in batch")
    common(p)
    p.add_argument("--count", type=int, default=10000)

    p = sub.add_parser("conformance",
                       help="compare computed verdicts with documented ones")
    common(p)
    p.add_argument("--all", action="store_true", help="run every named instance")
    return top


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    needs_instance = args.command in ("check", "rates") or (
        args.command == "conformance" and not args.all)
    if needs_instance and args.instance is None:
        print("error: --instance is required", file=sys.stderr)
        return 2
    if args.command == "check" and CONDITION_ALIASES[args.condition] != \
            cond.IVI and args.nu is None:
        print("error: --nu is required for this condition", file=sys.stderr)
        return 2
    if args.n < 8:
        print("error: --n must be at least 8", file=sys.stderr)
        return 2
    handlers = {"check": _cmd_check, "rates": _cmd_rates,
                "lemmas": _cmd_lemmas, "conformance": _cmd_conformance}
    try:
        return handlers[args.command](args)
    except SystemExit as exc:
        if isinstance(exc.code, str):
            print(exc.code, file=sys.stderr)
            return 2
        raise
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
