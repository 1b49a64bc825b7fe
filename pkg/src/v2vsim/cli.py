"""Command-line front end.

Four preset experiment families, ad hoc sweeps, config validation, and the
self-check suite. Results stream to stdout or a file as CSV or JSON lines;
exit codes are 0 for success, 1 for validation problems, 2 for runtime
failures.
"""

import argparse
import json
import sys
from dataclasses import replace

import numpy as np

from . import acceptance, mcengine
from .beam import ALIGNMENT_MODES
from .scenario import ConfigError, ScenarioConfig, load_config, validate

CSV_HEADER = "metric,radio,n_elements,alignment,distance_m,mean,std_err,ci_lo,ci_hi,n_trials,seed"

PRESET_NAMES = ("fig-pathloss", "fig-rate", "fig-outage", "fig-misalignment", "fig-gps")


class _Parser(argparse.ArgumentParser):
    """argparse with usage errors reported at exit code 1 instead of 2."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _preset_rows(name, config):
    """(metric, radio, n_elements, alignment) rows for one preset family."""
    elems = config.antenna_elements
    narrow = max(elems)
    if name == "fig-pathloss":
        return [(metric, radio, None, None)
                for metric in ("path_loss", "los_prob")
                for radio in ("dsrc", "mmwave")]
    if name == "fig-rate":
        return [("rate", "dsrc", None, None)] + [
            ("rate", "mmwave", n, "aligned") for n in elems]
    if name == "fig-outage":
        return [("outage", "dsrc", None, None)] + [
            ("outage", "mmwave", n, "aligned") for n in elems]
    if name == "fig-misalignment":
        return [("rx_power", "mmwave", n, mode)
                for n in elems for mode in ("aligned", "misaligned")]
    if name == "fig-gps":
        return [("rx_power", "dsrc", None, None)] + [
            ("rx_power", "mmwave", narrow, mode)
            for mode in ("aligned", "misaligned", "gps_pointed")]
    raise ConfigError([f"unknown preset: {name}"])


def expand_preset(name, config):
    """SweepSpec list for a preset under the given config."""
    return [
        mcengine.SweepSpec(
            metric=metric,
            radio=radio,
            n_elements=n,
            alignment_mode=mode,
            distance_grid_m=config.distance_grid_m,
            n_trials=config.n_trials,
            master_seed=config.master_seed,
        )
        for metric, radio, n, mode in _preset_rows(name, config)
    ]


def _parse_distances(text):
    parts = text.split(":")
    if len(parts) != 3:
        raise ConfigError([f"distances: want LO:HI:COUNT, got {text!r}"])
    try:
        lo, hi = float(parts[0]), float(parts[1])
        count = int(parts[2])
    except ValueError:
        raise ConfigError([f"distances: non-numeric field in {text!r}"]) from None
    if count < 1:
        raise ConfigError([f"distances: count must be >= 1, got {count}"])
    if not 0 < lo <= hi:
        raise ConfigError([f"distances: need 0 < lo <= hi, got {text!r}"])
    return tuple(float(d) for d in np.linspace(lo, hi, count))


def _load_config(args):
    """Config from --config plus flag overrides, re-validated."""
    config = load_config(args.config) if getattr(args, "config", None) else ScenarioConfig()
    fields = {}
    if getattr(args, "trials", None) is not None:
        fields["n_trials"] = args.trials
    if getattr(args, "seed", None) is not None:
        fields["master_seed"] = args.seed
    if getattr(args, "noise_figure_db", None) is not None:
        fields["noise_figure_db"] = args.noise_figure_db
    if getattr(args, "distances", None):
        fields["distance_grid_m"] = _parse_distances(args.distances)
    if fields:
        config = replace(config, **fields)
        problems = validate(config)
        if problems:
            raise ConfigError(problems)
    return config


def _fmt(value):
    return format(float(value), ".9g")


def emit_results(estimates, fmt):
    """Serialize estimates to bytes; floats carry 9 significant digits."""
    if not estimates:
        raise ValueError("no estimates to emit")
    if fmt not in ("csv", "json-lines"):
        raise ValueError(f"unknown format: {fmt!r}")
    rows = []
    for e in estimates:
        row = {
            "metric": e.metric,
            "radio": e.radio,
            "n_elements": e.n_elements,
            "alignment": e.alignment_mode,
            "distance_m": e.distance_m,
            "mean": e.mean,
            "std_err": e.std_error,
            "ci_lo": e.ci95_lo,
            "ci_hi": e.ci95_hi,
            "n_trials": e.n_trials,
            "seed": e.master_seed,
        }
        rows.append(row)
    if fmt == "csv":
        lines = [CSV_HEADER]
        for row in rows:
            cells = []
            for key, value in row.items():
                if value is None:
                    cells.append("")
                elif key in ("metric", "radio", "alignment"):
                    cells.append(value)
                elif key in ("n_elements", "n_trials", "seed"):
                    cells.append(str(value))
                else:
                    cells.append(_fmt(value))
            lines.append(",".join(cells))
        return ("\n".join(lines) + "\n").encode("utf-8")
    lines = []
    for row in rows:
        for key in ("distance_m", "mean", "std_err", "ci_lo", "ci_hi"):
            row[key] = float(_fmt(row[key]))
        lines.append(json.dumps(row, separators=(",", ":")))
    return ("\n".join(lines) + "\n").encode("utf-8")


def _write_output(data, out_path):
    if out_path:
        with open(out_path, "wb") as handle:
            handle.write(data)
    else:
        sys.stdout.buffer.write(data)
        sys.stdout.buffer.flush()


def _cmd_run(args):
    config = _load_config(args)
    estimates = []
    for spec in expand_preset(args.preset, config):
        estimates.extend(mcengine.run_sweep(spec, config))
    _write_output(emit_results(estimates, args.format), args.out)
    return 0


def _cmd_sweep(args):
    config = _load_config(args)
    spec = mcengine.SweepSpec(
        metric=args.metric,
        radio=args.radio,
        n_elements=args.elements,
        alignment_mode=args.alignment,
        distance_grid_m=config.distance_grid_m,
        n_trials=config.n_trials,
        master_seed=config.master_seed,
    )
    estimates = mcengine.run_sweep(spec, config)
    _write_output(emit_results(estimates, args.format), args.out)
    return 0


def _cmd_validate_config(args):
    try:
        load_config(args.path)
    except ConfigError as exc:
        for problem in exc.problems:
            print(problem, file=sys.stderr)
        return 1
    print(f"{args.path}: ok")
    return 0


def _cmd_selftest(args):
    config = _load_config(args)
    results = acceptance.run_all(config)
    for result in results:
        status = "PASS" if result.passed else "FAIL"
        print(f"{status} {result.name}: {result.detail}")
    return 0 if all(r.passed for r in results) else 1


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", metavar="PATH", help="INI config file")
    common.add_argument("--out", metavar="PATH", help="write results here instead of stdout")
    common.add_argument("--format", choices=("csv", "json-lines"), default="csv")
    common.add_argument("--trials", type=int, metavar="N", help="trials per distance")
    common.add_argument("--seed", type=int, metavar="S", help="master seed")
    common.add_argument("--distances", metavar="LO:HI:COUNT",
                        help="linear distance grid, e.g. 2:500:30")
    common.add_argument("--noise-figure-db", type=float, dest="noise_figure_db",
                        metavar="DB", help="receiver noise figure override")

    parser = _Parser(prog="v2vsim", description="V2V link-level Monte Carlo simulator")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    run = sub.add_parser("run", parents=[common],
                         help="run a preset experiment family")
    run.add_argument("preset", choices=PRESET_NAMES)
    run.set_defaults(func=_cmd_run)

    sweep = sub.add_parser("sweep", parents=[common],
                           help="run one fully explicit sweep")
    sweep.add_argument("--metric", required=True, choices=mcengine.METRICS)
    sweep.add_argument("--radio", required=True, choices=mcengine.RADIOS)
    sweep.add_argument("--elements", type=int, metavar="N",
                       help="antenna elements (mmwave link metrics)")
    sweep.add_argument("--alignment", choices=ALIGNMENT_MODES,
                       help="beam pointing mode (mmwave link metrics)")
    sweep.set_defaults(func=_cmd_sweep)

    vc = sub.add_parser("validate-config", help="check a config file and exit")
    vc.add_argument("path", metavar="PATH")
    vc.set_defaults(func=_cmd_validate_config)

    selftest = sub.add_parser("selftest", help="run the built-in check suite")
    selftest.add_argument("--config", metavar="PATH", help="INI config file")
    selftest.set_defaults(func=_cmd_selftest)

    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except ConfigError as exc:
        for problem in exc.problems:
            print(f"v2vsim: {problem}", file=sys.stderr)
        return 1
    except mcengine.SpecError as exc:
        print(f"v2vsim: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"v2vsim: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"v2vsim: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
