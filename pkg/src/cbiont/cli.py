"""``cbiont`` command line.

Exit codes: 0 success, 1 usage error, 2 parse/ingest error, 3 validation
found error-grade violations.
"""
from __future__ import annotations

import argparse
import sys
from typing import List, Optional, TextIO

from .ingest import IngestError, MintingScheme, ingest_json, reference_individuals
from .namespaces import STANDARD_PREFIXES
from .query import competency_query, evaluate, format_json, format_tsv, parse_query
from .rdf import IRI, Graph
from .reasoner import ERROR, CyclicSchemaError, format_violations, materialize, validate, violations_to_json
from .schema import build_schema
from .turtle import ParseError, parse_turtle, serialize_ntriples, serialize_turtle

EXIT_OK, EXIT_USAGE, EXIT_INPUT, EXIT_VIOLATIONS = 0, 1, 2, 3


class UsageError(Exception):
    pass


class InputError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="cbiont", description="CBIOnt knowledge-base tool")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    schema = sub.add_parser("schema", help="schema operations")
    schema_sub = schema.add_subparsers(dest="action", required=True, parser_class=_Parser)
    export = schema_sub.add_parser("export", help="print the CBIOnt schema")
    export.add_argument("--format", choices=("turtle", "ntriples"), default="turtle")
    export.add_argument("--out", help="write to a file instead of stdout")

    ingest = sub.add_parser("ingest", help="convert JSON session exports into a Turtle KB")
    ingest.add_argument("--input", required=True, action="append",
                        help="JSON export (repeatable)")
    ingest.add_argument("--kb-out", required=True, help="Turtle file to write ('-' for stdout)")
    ingest.add_argument("--merge-with", help="existing Turtle KB to extend")

    infer = sub.add_parser("infer", help="materialize inferences")
    infer.add_argument("--kb", required=True, help="input Turtle KB ('-' for stdin)")
    infer.add_argument("--out", required=True, help="output Turtle file ('-' for stdout)")

    val = sub.add_parser("validate", help="check a KB against the schema")
    val.add_argument("--kb", required=True, help="Turtle KB ('-' for stdin)")
    val.add_argument("--pedantic", action="store_true",
                     help="also warn about sessions under several leaves of one hub class")
    val.add_argument("--format", choices=("text", "json"), default="text")

    query = sub.add_parser("query", help="run a query or competency question")
    query.add_argument("--kb", required=True, help="Turtle KB ('-' for stdin)")
    which = query.add_mutually_exclusive_group(required=True)
    which.add_argument("--query-file", help="file holding a SELECT query")
    which.add_argument("--cq", help="competency question id, 1-8 or CQ1-CQ8")
    query.add_argument("--session", help="session IRI to pin a competency question to")
    query.add_argument("--format", choices=("tsv", "json"), default="tsv")
    return parser


def _read(path: str, stdin: TextIO) -> str:
    if path == "-":
        return stdin.read()
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except (OSError, UnicodeDecodeError) as exc:
        raise InputError(f"{path}: {exc}") from None


def _write(path: Optional[str], text: str, stdout: TextIO) -> None:
    if path is None or path == "-":
        stdout.write(text)
        return
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    except OSError as exc:
        raise InputError(f"{path}: {exc}") from None


def _scheme() -> MintingScheme:
    try:
        return MintingScheme.from_env()
    except ValueError as exc:
        raise UsageError(f"cbiont: CBIONT_BASE_IRI: {exc}") from None


def _prefixes(scheme: MintingScheme) -> dict:
    # cbidata follows CBIONT_BASE_IRI so output stays abbreviated
    return {**STANDARD_PREFIXES, "cbidata": scheme.base}


def _load_kb(path: str, stdin: TextIO) -> Graph:
    text = _read(path, stdin)
    try:
        graph, _ = parse_turtle(text)
    except ParseError as exc:
        raise InputError(f"{path}:{exc}") from None
    return graph


def _cmd_schema(args, stdin, stdout, stderr) -> int:
    schema = build_schema()
    if args.format == "turtle":
        text = serialize_turtle(schema, STANDARD_PREFIXES)
    else:
        text = serialize_ntriples(schema)
    _write(args.out, text, stdout)
    return EXIT_OK


def _cmd_ingest(args, stdin, stdout, stderr) -> int:
    scheme = _scheme()
    kb = _load_kb(args.merge_with, stdin) if args.merge_with else Graph()
    kb.update(reference_individuals(scheme).triples())
    status = EXIT_OK
    for path in args.input:
        text = _read(path, stdin)
        try:
            report = ingest_json(text, kb, scheme)
        except IngestError as exc:
            stderr.write(f"{path}: {exc}\n")
            status = EXIT_INPUT
            continue
        for line in report.lines(path):
            stderr.write(line + "\n")
        if report.failed:
            status = EXIT_INPUT
    _write(args.kb_out, serialize_turtle(kb, _prefixes(scheme)), stdout)
    return status


def _cmd_infer(args, stdin, stdout, stderr) -> int:
    kb = _load_kb(args.kb, stdin)
    try:
        result = materialize(kb, build_schema())
    except CyclicSchemaError as exc:
        raise InputError(f"{args.kb}: {exc}") from None
    _write(args.out, serialize_turtle(result, _prefixes(_scheme())), stdout)
    return EXIT_OK


def _cmd_validate(args, stdin, stdout, stderr) -> int:
    kb = _load_kb(args.kb, stdin)
    violations = validate(kb, build_schema(), pedantic=args.pedantic)
    if args.format == "json":
        stdout.write(violations_to_json(violations))
    else:
        stdout.write(format_violations(violations))
    errors = sum(1 for v in violations if v.severity == ERROR)
    if violations:
        stderr.write(f"{args.kb}: {errors} error(s), {len(violations) - errors} warning(s)\n")
    return EXIT_VIOLATIONS if errors else EXIT_OK


def _cmd_query(args, stdin, stdout, stderr) -> int:
    if args.query_file:
        if args.session:
            raise UsageError("cbiont query: --session only applies to --cq")
        text = _read(args.query_file, stdin)
        try:
            q = parse_query(text)
        except ParseError as exc:
            raise InputError(f"{args.query_file}:{exc}") from None
    else:
        try:
            session = IRI(args.session) if args.session else None
            q = competency_query(args.cq, session)
        except ValueError as exc:
            raise UsageError(f"cbiont query: {exc}") from None
    kb = _load_kb(args.kb, stdin)
    rows = evaluate(q, kb)
    fmt = format_tsv if args.format == "tsv" else format_json
    stdout.write(fmt(q.projection, rows))
    return EXIT_OK


_COMMANDS = {
    "schema": _cmd_schema,
    "ingest": _cmd_ingest,
    "infer": _cmd_infer,
    "validate": _cmd_validate,
    "query": _cmd_query,
}


def run(argv: List[str], stdin: TextIO = None, stdout: TextIO = None, stderr: TextIO = None) -> int:
    stdin = stdin or sys.stdin
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        args = _build_parser().parse_args(argv)
        return _COMMANDS[args.command](args, stdin, stdout, stderr)
    except UsageError as exc:
        stderr.write(f"{exc}\n")
        return EXIT_USAGE
    except InputError as exc:
        stderr.write(f"error: {exc}\n")
        return EXIT_INPUT
    except SystemExit as exc:
        # --help
        return EXIT_OK if not exc.code else EXIT_USAGE


def main() -> None:
    sys.exit(run(sys.argv[1:]))
