"""Command-line entry point.

Usage: yzero <family> --config <path> [--out-dir <path>] [--seed <int>]
       [--threads <n>]

Exit codes: 0 on success, 2 on configuration errors, 3 when a run exceeds
the desk-scale enumeration caps.
"""

from __future__ import annotations

import argparse
import sys

from .errors import ConfigError, RegimeCapError
from .runner import RUNNERS
from .scenario import FAMILIES, load_config


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="yzero",
        description="Simulate and bound the coherent-state stream cipher at desk scale.")
    parser.add_argument("family", choices=FAMILIES,
                        help="which analysis family to run")
    parser.add_argument("--config", required=True, metavar="PATH",
                        help="scenario file (INI format)")
    parser.add_argument("--out-dir", default=None, metavar="PATH",
                        help="override the [output] out_dir")
    parser.add_argument("--seed", default=None, type=int, metavar="U64",
                        help="override the [output] master_seed")
    parser.add_argument("--threads", default=None, type=int, metavar="N",
                        help="override the [output] threads")
    return parser


def main(argv: "list[str] | None" = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config, args.family, out_dir=args.out_dir,
                          master_seed=args.seed, threads=args.threads)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    try:
        outputs = RUNNERS[cfg.family](cfg)
    except RegimeCapError as exc:
        print(f"regime cap: {exc}", file=sys.stderr)
        return 3
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    for name in outputs:
        print(name)
    return 0


if __name__ == "__main__":
    sys.exit(main())
