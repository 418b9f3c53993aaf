"""Command line entry point: ``verify`` (also ``python3 -m gl2hecke``)."""

from __future__ import annotations

import argparse
import sys

from .field import is_prime
from .report import emit
from .suite import CHECKS, FORMATS, MODES, ConfigError, SuiteConfig, run

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # argparse already exits with 2; keep the message short
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma separated list of integers: {text!r}")


def _check_list(text: str) -> tuple[str, ...]:
    items = tuple(x.strip() for x in text.split(",") if x.strip())
    if "all" in items:
        return CHECKS
    return items


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(
        prog="verify",
        description="Verify double coset operator relations and determinants for GL_2(F_p).",
    )
    group = ap.add_mutually_exclusive_group()
    group.add_argument("--prime", type=int, help="a single odd prime")
    group.add_argument("--primes", type=_int_list, help="comma separated odd primes")
    group.add_argument("--max-prime", type=int, help="all odd primes up to this bound")
    ap.add_argument("--mode", choices=MODES, default="both")
    ap.add_argument("--checks", type=_check_list, default=CHECKS,
                    help=f"comma separated subset of: {', '.join(CHECKS)} (default all)")
    ap.add_argument("--format", dest="fmt", choices=FORMATS, default="text")
    ap.add_argument("--out", help="write the report here instead of stdout")
    ap.add_argument("--allow-large", action="store_true",
                    help="lift the p <= 19 limit on checks that use the full group")
    ap.add_argument("--timing", action="store_true", help="append timings (text format only)")
    return ap


def config_from_args(args: argparse.Namespace) -> SuiteConfig:
    if args.prime is not None:
        primes = [args.prime]
    elif args.primes is not None:
        primes = args.primes
    elif args.max_prime is not None:
        primes = [p for p in range(3, args.max_prime + 1) if is_prime(p)]
    else:
        primes = SuiteConfig().primes
    return SuiteConfig(primes, args.mode, args.checks, args.fmt, args.out, args.allow_large)


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    config = config_from_args(args)
    try:
        config.validate()
    except ConfigError as exc:
        print(f"verify: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    report = run(config)
    text = emit(report, config.fmt, timing=args.timing and config.fmt == "text")
    if config.out:
        try:
            with open(config.out, "w", encoding="utf-8", newline="") as fh:
                fh.write(text)
        except OSError as exc:
            print(f"verify: cannot write {config.out}: {exc}", file=sys.stderr)
            return EXIT_USAGE
    else:
        sys.stdout.write(text)
    return report.exit_code


if __name__ == "__main__":
    sys.exit(main())
