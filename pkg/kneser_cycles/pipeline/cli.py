#!/usr/bin/env python3
"""Command-line interface: construct, verify, stats, lemma dumps and base certificates."""

import argparse
import logging
import sys
from fractions import Fraction
from typing import List, Optional

from ..bitcore import binomial
from ..certificate import LEMMA_TAG, parse_certificate, read_text
from ..derive import coverage_fraction
from ..exceptions import KneserError, ParameterError
from ..factory import create_base_provider, create_lemma_builder, create_pipeline, create_store
from ..lemma_engine import parse_lemma_dump, render_lemma_dump
from ..middle_levels import import_certificate, solve_base
from ..verify import verify_certificate, verify_lemma_structure
from .base import GRAPH_CHOICES, ConstructionRequest
from .config import FORMAT_CHOICES, PipelineConfig

logger = logging.getLogger(__name__)


def setup_logging(verbosity: int, default_level: str = "WARNING"):
    """Set up logging based on verbosity level; log output always goes to stderr.

    Without ``-v`` the level is ``default_level``, an unknown name meaning WARNING.
    """
    if verbosity > 0:
        level = logging.DEBUG if verbosity > 1 else logging.INFO
    else:
        level = getattr(logging, default_level.upper(), logging.WARNING)
        if not isinstance(level, int):
            level = logging.WARNING

    logging.basicConfig(
        level=level,
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        datefmt="%Y-%m-%d %H:%M:%S",
        stream=sys.stderr,
        force=True,
    )


def _add_common(parser: argparse.ArgumentParser):
    parser.add_argument("--config", "-c", type=str, help="Path to configuration YAML file")
    parser.add_argument(
        "-v",
        "--verbose",
        action="count",
        default=0,
        help="Increase verbosity (-v for INFO, -vv for DEBUG)",
    )


def create_parser() -> argparse.ArgumentParser:
    """Create the argument parser."""
    parser = argparse.ArgumentParser(
        prog="kneser-cycles",
        description="Constructive Hamilton cycles in Kneser-type graphs, with verification",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  # Hamilton cycle of the bipartite Kneser graph H(4,1)
  %(prog)s construct --graph h --n 4 --k 1 --out h41.cert

  # Long cycle in the Petersen graph, as subsets
  %(prog)s construct --graph k --n 5 --k 2 --format sets

  # Check a certificate or LEMMA dump
  %(prog)s verify h41.cert

  # Counts and the Kneser coverage fraction
  %(prog)s stats --n 7 --k 3

  # Install a middle-levels base certificate
  %(prog)s base search --k 3 --budget 60
        """,
    )

    subparsers = parser.add_subparsers(dest="command", help="Available commands")

    construct_parser = subparsers.add_parser("construct", help="Construct a cycle certificate")
    construct_parser.add_argument("--graph", choices=GRAPH_CHOICES, required=True)
    construct_parser.add_argument("--n", type=int, required=True)
    construct_parser.add_argument("--k", type=int, required=True)
    construct_parser.add_argument("--out", type=str, help="Output file (default: stdout)")
    construct_parser.add_argument("--format", choices=FORMAT_CHOICES, help="Output format")
    construct_parser.add_argument("--metrics", type=str, help="Write build metrics JSON here")
    _add_common(construct_parser)

    verify_parser = subparsers.add_parser("verify", help="Verify a certificate or LEMMA dump")
    verify_parser.add_argument("input", type=str, help="Certificate file to check")
    _add_common(verify_parser)

    stats_parser = subparsers.add_parser("stats", help="Print cycle lengths and coverage")
    stats_parser.add_argument("--n", type=int, required=True)
    stats_parser.add_argument("--k", type=int, required=True)
    _add_common(stats_parser)

    lemma_parser = subparsers.add_parser("lemma", help="Dump the lemma structure for (n,k)")
    lemma_parser.add_argument("--n", type=int, required=True)
    lemma_parser.add_argument("--k", type=int, required=True)
    lemma_parser.add_argument("--out", type=str, help="Output file (default: stdout)")
    _add_common(lemma_parser)

    base_parser = subparsers.add_parser("base", help="Manage middle-levels base certificates")
    base_sub = base_parser.add_subparsers(dest="base_command", help="Base certificate commands")
    import_parser = base_sub.add_parser("import", help="Validate and install a MID certificate")
    import_parser.add_argument("file", type=str)
    _add_common(import_parser)
    search_parser = base_sub.add_parser("search", help="Search a base cycle and install it")
    search_parser.add_argument("--k", type=int, required=True)
    search_parser.add_argument("--budget", type=float, help="Search time limit in seconds")
    _add_common(search_parser)
    list_parser = base_sub.add_parser("list", help="List installed base certificates")
    _add_common(list_parser)

    config_parser = subparsers.add_parser(
        "generate-config", help="Generate a sample configuration file"
    )
    config_parser.add_argument(
        "--output",
        "-o",
        type=str,
        default="kneser_config.yaml",
        help="Output path for configuration file",
    )

    return parser


def load_config(args) -> PipelineConfig:
    """Configuration from ``--config`` if given, else from the environment."""
    if getattr(args, "config", None):
        config = PipelineConfig.from_yaml(args.config)
        logging.info(f"Loaded configuration from {args.config}")
    else:
        config = PipelineConfig.from_env()
    setup_logging(getattr(args, "verbose", 0), config.monitoring.log_level)
    return config


def _emit(text: str, out: Optional[str]):
    if out:
        with open(out, "w") as f:
            f.write(text)
    else:
        sys.stdout.write(text)


def run_construct(args) -> int:
    """Construct, self-verify and write one certificate."""
    config = load_config(args)
    if args.format:
        config.construct.format = args.format
    request = ConstructionRequest(args.graph, args.n, args.k)

    pipeline = create_pipeline(config, out_path=args.out)
    result = pipeline.run(request)
    if not args.out:
        sys.stdout.write(result.output_text or "")
    if args.metrics:
        pipeline.metrics.save_summary(args.metrics)
    if args.verbose:
        pipeline.metrics.print_summary(sys.stderr)
    return 0


def run_verify(args) -> int:
    """Print the verification report of a certificate or LEMMA dump."""
    config = load_config(args)
    text = read_text(args.input)

    first = next((line for line in text.split("\n") if not line.startswith("#")), "")
    if first.split(" ")[0] == LEMMA_TAG:
        report = verify_lemma_structure(
            parse_lemma_dump(text), max_violations=config.verify.max_violations
        )
    else:
        cert = parse_certificate(text).to_certificate()
        report = verify_certificate(cert, config.verify.max_violations)
    sys.stdout.write(report.render())
    return 0 if report.ok else 1


def run_stats(args) -> int:
    """Print C(n,k), cycle lengths and the Kneser coverage fraction."""
    config = load_config(args)
    n, k = args.n, args.k
    if k < 1 or n < 2 * k + 1:
        raise ParameterError(f"need k >= 1 and n >= 2k+1, got (n,k)=({n},{k})")
    if n > config.construct.max_n:
        raise ParameterError(f"n={n} exceeds the configured maximum {config.construct.max_n}")

    h_length = 2 * binomial(n, k)
    formula = Fraction(2 * k, n)
    print(f"C({n},{k}) = {binomial(n, k)}")
    if k == 1:
        actual = coverage_fraction(n, k)
        print(f"H-cycle {h_length}, K-cycle {n}, fraction {formula} (actual {actual})")
    else:
        k_length = 2 * binomial(n - 1, k - 1)
        print(f"H-cycle {h_length}, K-cycle {k_length}, fraction {coverage_fraction(n, k)}")
    return 0


def run_lemma(args) -> int:
    """Build (n,k) and write its LEMMA dump."""
    config = load_config(args)
    if args.n > config.construct.max_n:
        raise ParameterError(f"n={args.n} exceeds the configured maximum {config.construct.max_n}")
    builder = create_lemma_builder(create_base_provider(config.base_case), config.lemma)
    _emit(render_lemma_dump(builder.build(args.n, args.k)), args.out)
    return 0


def run_base(args) -> int:
    """Import, search or list middle-levels base certificates."""
    config = load_config(args)
    store = create_store(config.base_case)

    if args.base_command == "import":
        with open(args.file, encoding="utf-8") as f:
            cycle = import_certificate(f)
        path = store.install(cycle)
        print(f"Installed k={cycle.k} certificate at {path}")
        return 0

    if args.base_command == "search":
        budget = args.budget if args.budget is not None else config.base_case.search_budget
        cycle = solve_base(args.k, budget)
        path = store.install(cycle)
        print(f"Installed k={cycle.k} certificate ({len(cycle)} vertices) at {path}")
        return 0

    if args.base_command == "list":
        for k in store.list_installed():
            print(f"k={k} {store.path_for(k)}")
        return 0

    print("usage: kneser-cycles base {import,search,list}", file=sys.stderr)
    return 2


def generate_config(args) -> int:
    """Generate a sample configuration file."""
    config = PipelineConfig()
    config.to_yaml(args.output)
    print(f"Generated configuration file: {args.output}")
    return 0


COMMANDS = {
    "construct": run_construct,
    "verify": run_verify,
    "stats": run_stats,
    "lemma": run_lemma,
    "base": run_base,
    "generate-config": generate_config,
}


def main(argv: Optional[List[str]] = None) -> int:
    """Main entry point; library errors become exit codes 1-4."""
    parser = create_parser()
    args = parser.parse_args(argv)

    if hasattr(args, "verbose"):
        setup_logging(args.verbose)

    handler = COMMANDS.get(args.command)
    if handler is None:
        parser.print_help()
        return 1

    try:
        return handler(args)
    except KneserError as e:
        print(f"error: {e}", file=sys.stderr)
        return e.exit_code
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
