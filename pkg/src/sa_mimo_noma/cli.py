"""Command-line front end.

Subcommands:
  run <config>          simulate + evaluate a sweep, write curve data
  verify <config>       reduced-budget invariant suite, pass/fail per check
  preset <name>         run a built-in scenario (figure-caption parameters)

Exit codes: 0 success, 1 validation error, 2 numerical failure,
3 invariant failure.
"""

import argparse
import dataclasses
import sys
from pathlib import Path

from .config import load_scenario
from .errors import ConfigurationError, InvariantViolation, NumericalError
from .presets import PRESETS, load_preset
from . import report

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_NUMERICAL = 2
EXIT_INVARIANT = 3


def _add_common(parser):
    parser.add_argument("--trials", type=int, default=None,
                        help="override the trial count per grid point")
    parser.add_argument("--seed", type=int, default=None,
                        help="override the base RNG seed")
    parser.add_argument("--threads", type=int, default=1,
                        help="worker threads for trial blocks")
    parser.add_argument("--format", choices=("csv", "json"), default="csv",
                        help="curve output format")
    parser.add_argument("--out", type=Path, default=Path("."),
                        help="output directory")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="sanoma",
        description="Outage simulator and analytic calculator for "
                    "signal-alignment MIMO-NOMA with field interference.")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run a sweep from a scenario file")
    p_run.add_argument("config", type=Path)
    _add_common(p_run)

    p_verify = sub.add_parser("verify", help="run the invariant suite")
    p_verify.add_argument("config", type=Path)
    p_verify.add_argument("--trials", type=int, default=2000)
    p_verify.add_argument("--seed", type=int, default=None)

    p_preset = sub.add_parser("preset", help="run a built-in scenario")
    p_preset.add_argument("name", choices=sorted(PRESETS))
    _add_common(p_preset)
    return parser


def _apply_overrides(scenario, args):
    changes = {}
    if args.trials is not None:
        changes["trials"] = args.trials
    if getattr(args, "seed", None) is not None:
        changes["seed"] = args.seed
    if changes:
        scenario = dataclasses.replace(
            scenario, base=dataclasses.replace(scenario.base, **changes))
    return scenario


def _run_scenarios(scenarios, args):
    args.out.mkdir(parents=True, exist_ok=True)
    all_records = []
    metas = []
    for scenario in scenarios:
        scenario = _apply_overrides(scenario, args)
        records, meta = report.run_sweep(scenario, threads=args.threads)
        all_records.extend(records)
        metas.append(meta)
    if args.format == "json":
        report.write_curves_json(args.out / "curves.json", all_records)
    else:
        report.write_curves_csv(args.out / "curves.csv", all_records)
    report.write_summary(args.out / "summary.json",
                         metas[0] if len(metas) == 1 else {"runs": metas})
    report.render_figure(args.out / "curves.png", all_records,
                         metas[0]["sweep_parameter"])
    for meta in metas:
        print(f"{meta['scenario']}: {len(all_records)} curve records, "
              f"{meta['wall_time_s']} s, "
              f"resampled {meta['resampled_channels']} channel draws")
    bad = [k for m in metas for k, ok in m["invariants"].items() if not ok]
    if bad:
        print(f"invariant checks failed: {', '.join(bad)}", file=sys.stderr)
        return EXIT_INVARIANT
    return EXIT_OK


def _cmd_run(args):
    scenario = load_scenario(args.config)
    return _run_scenarios([scenario], args)


def _cmd_preset(args):
    return _run_scenarios(load_preset(args.name), args)


def _cmd_verify(args):
    scenario = load_scenario(args.config)
    if args.seed is not None:
        scenario = dataclasses.replace(
            scenario, base=dataclasses.replace(scenario.base, seed=args.seed))
    results = report.verify_scenario(scenario, trials=args.trials)
    ok = True
    for name, passed, detail in results:
        print(f"{'PASS' if passed else 'FAIL'}  {name}: {detail}")
        ok &= passed
    return EXIT_OK if ok else EXIT_INVARIANT


def main(argv=None):
    args = build_parser().parse_args(argv)
    handlers = {"run": _cmd_run, "verify": _cmd_verify, "preset": _cmd_preset}
    try:
        return handlers[args.command](args)
    except ConfigurationError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except InvariantViolation as exc:
        print(f"invariant violation: {exc}", file=sys.stderr)
        return EXIT_INVARIANT


if __name__ == "__main__":
    sys.exit(main())
