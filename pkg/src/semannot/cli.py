"""Batch command line: annotate one document and emit standoff JSON.

Exit codes: 0 success, 1 usage error, 2 configuration error, 3 annotation
or runtime error.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from .app import annotate_all
from .config import parse_settings, parse_source_list
from .errors import (
    AnnotatorError,
    ConfigurationError,
    LoadError,
    ParseError,
    ValidationError,
)
from .model import serialize_document
from .provenance import utc_now

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_CONFIG = 2
EXIT_RUNTIME = 3


class _Parser(argparse.ArgumentParser):
    # argparse exits with status 2 on bad flags; usage problems are exit 1
    # here, so configuration errors keep exit 2 to themselves.
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="semannot",
        description="Annotate text with SKOS, WordNet, DBPedia and "
                    "concept-mapper knowledge sources.",
    )
    parser.add_argument("--config", default="settings.cfg",
                        help="settings file (default: settings.cfg)")
    parser.add_argument("--input", default=None,
                        help="input text file, or - for standard input")
    parser.add_argument("--output", default="-",
                        help="output file, or - for standard output (default)")
    parser.add_argument("--sources", default=None,
                        help="comma-separated source override, e.g. skos,wordnet")
    return parser


def _read_input(path: str | None, stdin) -> str:
    if path is None:
        if hasattr(stdin, "isatty") and stdin.isatty():
            raise SystemExit(EXIT_USAGE)
        path = "-"
    if path == "-":
        return stdin.read()
    return Path(path).read_text(encoding="utf-8")


def run_cli(argv, clock=utc_now, stdin=None, stdout=None) -> int:
    """Parse flags, annotate, write JSON; returns the exit status.

    ``clock``/``stdin``/``stdout`` are injection points for tests and
    embedding; the console entry point passes the real ones.
    """
    stdin = stdin if stdin is not None else sys.stdin
    stdout = stdout if stdout is not None else sys.stdout
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if exc.code is not None else EXIT_USAGE

    try:
        override = parse_source_list(args.sources) if args.sources else None
    except ConfigurationError as exc:
        parser.print_usage(sys.stderr)
        print(f"semannot: error: {exc}", file=sys.stderr)
        return EXIT_USAGE

    try:
        text = _read_input(args.input, stdin)
    except SystemExit:
        parser.print_usage(sys.stderr)
        print("semannot: error: no --input given and standard input is a terminal",
              file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"semannot: error: cannot read input: {exc}", file=sys.stderr)
        return EXIT_USAGE

    try:
        settings = parse_settings(args.config)
        if override is not None:
            settings = settings.with_sources(override)
        document = annotate_all(text, settings, clock=clock)
    except ConfigurationError as exc:
        print(f"semannot: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (LoadError, ParseError, ValidationError) as exc:
        print(f"semannot: resource error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except AnnotatorError as exc:
        print(f"semannot: annotation failed: {exc}", file=sys.stderr)
        return EXIT_RUNTIME

    payload = serialize_document(document)
    try:
        if args.output == "-":
            buffer = getattr(stdout, "buffer", stdout)
            buffer.write(payload)
            if hasattr(stdout, "flush"):
                stdout.flush()
        else:
            Path(args.output).write_bytes(payload)
    except OSError as exc:
        print(f"semannot: error: cannot write output: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    return EXIT_OK


def main() -> None:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s %(message)s")
    sys.exit(run_cli(sys.argv[1:]))


if __name__ == "__main__":
    main()
