"""Command-line entry point: ``qwprobe <subcommand> [options]``.

Exit codes: 0 success, 2 configuration error, 3 capacity or invariant
violation during the run.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .experiments import (
    OUTPUTS,
    ConfigError,
    RunConfig,
    parse_angle,
    parse_grid,
    parse_window,
    recipes_for,
    run,
    with_overrides,
)
from .walk import CapacityError

EXIT_CONFIG = 2
EXIT_RUNTIME = 3

# subcommand -> fields it forces on the config
PRESETS = {
    "walk": dict(walk="standard", outputs=("distribution",)),
    "qfi": dict(walk="standard", outputs=("qfi",)),
    "fi": dict(walk="standard", outputs=("fi",)),
    "interference": dict(walk="standard", outputs=("interference",)),
    "splitstep": dict(walk="split-step", outputs=("stddev", "qfi")),
    "sweep": dict(),
}

HELP = {
    "walk": "position distributions",
    "qfi": "full and position-space quantum Fisher information",
    "fi": "classical Fisher information of position, full and windowed",
    "interference": "degree-of-interference maps",
    "splitstep": "split-step walk spread and QFI for both coin angles",
    "sweep": "run a --config file with whatever outputs it lists",
}


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", type=Path, help="JSON run configuration; flags override it")
    p.add_argument("--theta", type=parse_angle, help="coin angle, e.g. 0.3 or pi/4")
    p.add_argument("--theta1", type=parse_angle, help="split-step first coin angle")
    p.add_argument("--theta2", type=parse_angle, help="split-step second coin angle")
    p.add_argument("--grid", help="theta sweep start:stop:count (theta1 for split-step)")
    p.add_argument("--steps", type=int, help="number of walk steps")
    p.add_argument("--bounded", type=int, metavar="A", help="reflecting walls at -A and A")
    p.add_argument("--window", action="append", metavar="LO:HI",
                   help="detector window for limited Fisher information (repeatable)")
    p.add_argument("--outputs", help=f"comma-separated subset of {','.join(OUTPUTS)}")
    p.add_argument("--out", help="output file (stdout when omitted)")
    p.add_argument("--format", choices=("csv", "json"))
    p.add_argument("--workers", type=int)
    p.add_argument("--exact-qfi", action="store_true", default=None,
                   help="also report the spectral position-space QFI")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qwprobe",
        description="Quantum walks, their coin-parameter derivatives and Fisher information.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in PRESETS:
        _common(sub.add_parser(name, help=HELP[name]))
    fig = sub.add_parser("figure", help="run a named figure preset")
    fig.add_argument("name")
    _common(fig)
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    if args.command == "figure":
        cfg = recipes_for(args.name)
    elif args.config is not None:
        try:
            cfg = RunConfig.from_dict(json.loads(args.config.read_text()))
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError("config", str(exc)) from None
    else:
        cfg = RunConfig(name=args.command)
    if args.command in PRESETS:
        cfg = with_overrides(cfg, **PRESETS[args.command])

    split = cfg.walk == "split-step"
    thetas = None
    theta2s = None
    if args.grid is not None:
        thetas = parse_grid(args.grid)
    elif args.theta is not None:
        thetas = (args.theta,)
    if split:
        if args.theta1 is not None:
            thetas = (args.theta1,)
        if args.theta2 is not None:
            theta2s = (args.theta2,)
    elif args.theta1 is not None or args.theta2 is not None:
        raise ConfigError("theta1", "--theta1/--theta2 only apply to split-step walks")

    outputs = tuple(o.strip() for o in args.outputs.split(",")) if args.outputs else None
    windows = tuple(parse_window(w) for w in args.window) if args.window else None
    bounds = (args.bounded,) if args.bounded is not None else None
    if bounds is not None and args.bounded < 1:
        raise ConfigError("bounded", "wall position must be >= 1")
    if split and not cfg.theta2s and theta2s is None:
        theta2s = cfg.thetas if thetas is None else thetas

    times = None
    if args.steps is not None and cfg.times:
        # keep the requested times that still fit, else report the last step
        times = tuple(t for t in cfg.times if t <= args.steps) or (args.steps,)
    return with_overrides(
        cfg,
        thetas=thetas,
        theta2s=theta2s,
        t_max=args.steps,
        times=times,
        bounds=bounds,
        windows=windows,
        outputs=outputs,
        out=args.out,
        format=args.format,
        workers=args.workers,
        exact_qfi=args.exact_qfi,
    ).validate()


def _glue_windows(argv):
    # argparse reads "-25:25" as an option, so attach it to its flag
    out = []
    for tok in argv:
        if out and out[-1] == "--window" and tok.startswith("-"):
            out[-1] = f"--window={tok}"
        else:
            out.append(tok)
    return out


def main(argv: list[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    args = build_parser().parse_args(_glue_windows(argv))
    try:
        cfg = config_from_args(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        table = run(cfg)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (CapacityError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    if cfg.out is None:
        sys.stdout.write(table.to_csv() if cfg.format == "csv" else table.to_json())
    else:
        print(f"wrote {len(table)} rows to {cfg.out}", file=sys.stderr)
    return 0


if __name__ == "__main__":
    sys.exit(main())
