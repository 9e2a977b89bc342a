"""Command-line entry point: ``geophase {sweep,check,demo}``.

Exit codes: 0 success, 1 validation failure, 2 bad configuration.
"""

from __future__ import annotations

import argparse
import dataclasses
import sys
from pathlib import Path

from geophase import sweep, validation

EXIT_OK, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2


def _overrides(args) -> dict:
    out = {}
    if args.mode is not None:
        out["mode"] = args.mode
    if args.format is not None:
        out["format"] = args.format
    if args.tolerance is not None:
        out["threshold"] = args.tolerance
    return out


def _write(records, cfg: sweep.SweepConfig, target: Path | None) -> None:
    if target is None:
        sys.stdout.write(sweep.render(records, cfg.format))
    else:
        sweep.emit(records, cfg.format, target)


def _report(name: str, records, cfg: sweep.SweepConfig, to_stderr: bool) -> bool:
    summary = sweep.summarize(records)
    ok = summary.passed(cfg.threshold)
    status = "PASS" if ok else "FAIL"
    print(f"[{status}] {name}: {summary.line()}", file=sys.stderr if to_stderr else sys.stdout)
    return ok


def cmd_sweep(args) -> int:
    try:
        cfg = sweep.load_config(args.config)
        cfg = dataclasses.replace(cfg, **_overrides(args))
    except sweep.ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    out = args.out or cfg.output
    records = sweep.run_sweep(cfg)
    _write(records, cfg, Path(out) if out else None)
    ok = _report(Path(args.config).stem, records, cfg, to_stderr=out is None)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_demo(args) -> int:
    try:
        configs = sweep.demo_configs(**_overrides(args))
    except sweep.ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    outdir = Path(args.out) if args.out else None
    if outdir is not None:
        outdir.mkdir(parents=True, exist_ok=True)
    ok = True
    for name, cfg in configs.items():
        records = sweep.run_sweep(cfg)
        if outdir is None:
            print(f"# {name}: theta={cfg.theta!r} varphi={cfg.varphi!r} "
                  f"{'s2_0' if cfg.sweep_var == 's1_0' else 's1_0'} fixed")
            _write(records, cfg, None)
        else:
            _write(records, cfg, outdir / f"{name}.{cfg.format}")
        ok &= _report(name, records, cfg, to_stderr=outdir is None)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_check(args) -> int:
    results = validation.run_all()
    width = max(len(r.name) for r in results)
    for i, r in enumerate(results, 1):
        print(f"{i}. {r.name:<{width}}  {'PASS' if r.passed else 'FAIL'}  {r.detail}")
    failed = sum(not r.passed for r in results)
    print(f"{len(results) - failed}/{len(results)} checks passed")
    return EXIT_OK if failed == 0 else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--mode", choices=("ideal", "pulse"), help="simulation mode for beta_sim")
    common.add_argument("--out", help="output file (sweep) or directory (demo); default stdout")
    common.add_argument("--format", choices=("csv", "json"))
    common.add_argument("--tolerance", type=float,
                        help="pass threshold on max_pairwise_dev in rad (default 1e-6)")

    parser = argparse.ArgumentParser(
        prog="geophase", description="Three-level geometric phases and their NMR simulation.")
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("sweep", parents=[common], help="run a sweep from a key = value config file")
    p.add_argument("config")
    p.set_defaults(func=cmd_sweep)
    p = sub.add_parser("check", parents=[common], help="run the cross-validation suite")
    p.set_defaults(func=cmd_check)
    p = sub.add_parser("demo", parents=[common], help="emit both demonstration sweeps")
    p.set_defaults(func=cmd_demo)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
