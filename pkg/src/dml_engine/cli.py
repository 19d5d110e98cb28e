"""Command-line surface.

Subcommands: validate, counts, up, down, cypher, serve. Results go to stdout
as canonical JSON (Cypher as plain text); diagnostics and machine-readable
error envelopes go to stderr. Exit codes: 0 success, 1 I/O or parse errors,
2 validation failure, 3 query errors.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import render
from .errors import EngineError, ParseError, QueryError, ValidationFailed
from .cypher import export_cypher
from .modelio import parse_model, to_graph, validate_structure
from .propagation import EvidenceSet, PropagationConfig, propagate
from .pathsets import DEFAULT_LIMIT, generate_pathsets, minimize
from .service import load_service_config, serve

EXIT_OK = 0
EXIT_IO = 1
EXIT_VALIDATION = 2
EXIT_QUERY = 3


def _read_text(path: str) -> str:
    with open(path, encoding="utf-8") as handle:
        return handle.read()


def _load_graph(path: str):
    return to_graph(parse_model(_read_text(path)))


def _emit(payload_text: str) -> None:
    sys.stdout.write(payload_text)


def _emit_error(code: str, message: str, path: str | None = None) -> None:
    sys.stderr.write(render.canonical_json(render.error_payload(code, message, path)))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dml-engine",
        description="Deterministic diagnostics over DML success hierarchies.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="validate a model document")
    p.add_argument("model")

    p = sub.add_parser("counts", help="element counts of a model")
    p.add_argument("model")

    p = sub.add_parser("up", help="upward propagation from evidence")
    p.add_argument("model")
    p.add_argument("--evidence", help="evidence JSON file (component -> state distribution)")
    p.add_argument("--threshold", type=float, help="impact threshold override")

    p = sub.add_parser("down", help="success path-sets for a node")
    p.add_argument("model")
    p.add_argument("--node", required=True)
    p.add_argument("--raw", action="store_true", help="skip minimization")
    p.add_argument("--limit", type=int, default=DEFAULT_LIMIT)

    p = sub.add_parser("cypher", help="export the model as Cypher text")
    p.add_argument("model")

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--config", help="service config JSON (or set DML_ENGINE_CONFIG)")

    return parser


def run_cli(argv: list[str]) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _dispatch(args)
    except FileNotFoundError as err:
        _emit_error("IO_ERROR", f"cannot read {err.filename}")
        return EXIT_IO
    except OSError as err:
        _emit_error("IO_ERROR", str(err))
        return EXIT_IO
    except ParseError as err:
        _emit_error(err.code, err.message, err.path)
        return EXIT_IO
    except ValidationFailed as err:
        sys.stderr.write(render.canonical_json(render.report_payload(err.report)))
        return EXIT_VALIDATION
    except QueryError as err:
        _emit_error(err.code, err.message, err.path)
        return EXIT_QUERY
    except EngineError as err:
        _emit_error(err.code, err.message, err.path)
        return EXIT_QUERY


def _dispatch(args) -> int:
    if args.command == "validate":
        report = validate_structure(parse_model(_read_text(args.model)))
        _emit(render.canonical_json(render.report_payload(report)))
        return EXIT_OK if report.passed else EXIT_VALIDATION

    if args.command == "counts":
        graph = _load_graph(args.model)
        _emit(render.canonical_json(render.counts_payload(graph.count_elements())))
        return EXIT_OK

    if args.command == "up":
        graph = _load_graph(args.model)
        evidence = EvidenceSet()
        if args.evidence:
            try:
                document = json.loads(_read_text(args.evidence))
            except json.JSONDecodeError as err:
                raise ParseError("MALFORMED_JSON", f"evidence file: {err.msg}")
            evidence = EvidenceSet.from_names(graph, document)
        config = PropagationConfig(threshold=args.threshold) if args.threshold is not None \
            else PropagationConfig()
        result = propagate(graph, evidence, config)
        _emit(render.canonical_json(render.propagation_payload(result)))
        return EXIT_OK

    if args.command == "down":
        graph = _load_graph(args.model)
        matches = graph.by_name(args.node)
        if not matches:
            raise QueryError("NOT_FOUND", f"no node named {args.node!r}")
        if len(matches) > 1:
            kinds = sorted(n.kind.value for n in matches)
            raise QueryError(
                "AMBIGUOUS_NAME", f"{args.node!r} names nodes of several kinds ({kinds})"
            )
        collection = generate_pathsets(graph, matches[0].id, limit=args.limit)
        if not args.raw:
            collection = minimize(graph, collection)
        _emit(render.canonical_json(render.pathsets_payload(graph, collection)))
        return EXIT_OK

    if args.command == "cypher":
        graph = _load_graph(args.model)
        _emit(export_cypher(graph))
        return EXIT_OK

    if args.command == "serve":
        config = load_service_config(args.config)
        serve(config)
        return EXIT_OK

    raise AssertionError(f"unhandled command {args.command!r}")


def main() -> None:
    sys.exit(run_cli(sys.argv[1:]))


if __name__ == "__main__":
    main()
