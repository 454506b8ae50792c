"""Command-line front door.

  validate  check a parse-graph file, print violations
  ask       one-shot question against a graph
  repl      interactive dialogue over one session
  eval      annotation-corpus percentage matrix
  serve     run the HTTP service

Exit codes: 0 success, 1 missing/invalid input files, 2 unrecognized
question.
"""

from __future__ import annotations

import argparse
import os
import sys
from typing import Optional

from pgx import pg as pgmod
from pgx.corpus import CorpusError, eval_matrix, format_matrix, parse_corpus
from pgx.ontology import Ontology, OntologyParseError, load_ontology
from pgx.policy import PolicyTable, aggregate, default_table, load_policy, uniform_weights
from pgx.question import QUESTION_FORMS, UnrecognizedQuestionError
from pgx.session import Session, TurnResult
from pgx.whatif import modification_to_dict

DEFAULT_LISTEN = "127.0.0.1:8000"


def _read_file(path: str) -> str:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            return handle.read()
    except OSError as e:
        _fail(f"cannot read {path}: {e.strerror}")
        raise AssertionError  # unreachable


def _fail(message: str) -> None:
    print(f"error: {message}", file=sys.stderr)
    raise SystemExit(1)


def _load_pg(path: str) -> pgmod.ParseGraph:
    text = _read_file(path)
    try:
        return pgmod.load(text)
    except pgmod.PgValidationError as e:
        for v in e.report:
            print(f"{v.rule} [{v.subject}] {v.message}", file=sys.stderr)
        _fail(f"{path}: invalid parse graph ({len(e.report)} violations)")
    except pgmod.PgFormatError as e:
        _fail(f"{path}: {e}")
    raise AssertionError  # unreachable


def _load_ontology(path: Optional[str]) -> Ontology:
    if path is None:
        return Ontology()
    try:
        return load_ontology(_read_file(path))
    except OntologyParseError as e:
        _fail(f"{path}: {e}")
        raise AssertionError  # unreachable


def _load_policy(path: Optional[str]) -> PolicyTable:
    if path is None:
        return default_table()
    try:
        return load_policy(_read_file(path))
    except ValueError as e:
        _fail(f"{path}: {e}")
        raise AssertionError  # unreachable


def cmd_validate(args: argparse.Namespace) -> int:
    text = _read_file(args.pg_file)
    try:
        pgmod.load(text)
    except pgmod.PgValidationError as e:
        for v in e.report:
            print(f"{v.rule} [{v.subject}] {v.message}")
        print(f"invalid: {len(e.report)} violation(s)")
        return 1
    except pgmod.PgFormatError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    print("valid")
    return 0


def _print_turn(result: TurnResult) -> None:
    selection = result.selection
    selected = selection.etype.value if selection.etype else "no-evidence"
    print(f"{result.question.qtype.value} -> {selected}")
    print(selection.text)
    if selection.explanation is not None:
        for item in selection.explanation.evidence:
            print(f"  evidence: {_format_evidence(item)}")
    print("  ranked: " + " > ".join(e.value for e in selection.ranked))
    if result.consequences is not None:
        for v in result.consequences.ontology:
            print(f"  consequence: {v.rule} {'/'.join(v.concepts)} in {v.scene}")
        for d in result.consequences.discourse:
            print(
                f"  consequence: {d.relation} link leaves {d.label} in {d.scene} unsupported"
            )
        for f in result.consequences.feasibility:
            direction = "gained" if f.after else "lost"
            print(f"  consequence: {f.node} {direction} {f.kind} support")


def _format_evidence(item) -> str:
    if item.kind == "node":
        score = f" (score {item.score:.2f})" if item.score is not None else ""
        return f"node {item.node} {item.label}{score}"
    if item.kind == "comparison":
        return (
            f"{item.label} {item.score:.2f} vs {item.vs_label} {item.vs_score:.2f}"
        )
    if item.kind == "fact" and item.fact is not None:
        f = item.fact
        return f"fact {f.kind.value} {' '.join(f.args)}"
    if item.kind == "discourse" and item.link is not None:
        return f"link {item.link.a} ~{item.link.relation.value}~ {item.link.b}"
    return item.kind


def _print_help_forms() -> None:
    print("supported question forms:", file=sys.stderr)
    for qtype, example in QUESTION_FORMS:
        print(f"  {qtype.value}: {example}", file=sys.stderr)


def cmd_ask(args: argparse.Namespace) -> int:
    graph = _load_pg(args.pg_file)
    onto = _load_ontology(args.ontology)
    policy = _load_policy(args.policy)
    session = Session("cli", graph, ontology=onto, policy=policy)
    try:
        result = session.ask(args.question)
    except UnrecognizedQuestionError as e:
        print(f"error: {e}", file=sys.stderr)
        _print_help_forms()
        return 2
    _print_turn(result)
    return 0


def cmd_repl(args: argparse.Namespace) -> int:
    graph = _load_pg(args.pg_file)
    onto = _load_ontology(args.ontology)
    policy = _load_policy(args.policy)
    session = Session("repl", graph, ontology=onto, policy=policy)
    print("ask away (:reset, :history, :quit)")
    while True:
        try:
            line = input("> ").strip()
        except EOFError:
            print()
            return 0
        if not line:
            continue
        if line == ":quit":
            return 0
        if line == ":reset":
            session.reset()
            print("session reset")
            continue
        if line == ":history":
            for i, entry in enumerate(session.history, start=1):
                etype = entry.selected_type.value if entry.selected_type else "-"
                print(f"{i}. [{entry.question.qtype.value} -> {etype}] {entry.text}")
            if session.overlay:
                print("overlay:")
                for mod in session.overlay:
                    print(f"  {modification_to_dict(mod)}")
            continue
        try:
            result = session.ask(line)
        except UnrecognizedQuestionError as e:
            print(f"error: {e}", file=sys.stderr)
            _print_help_forms()
            continue
        _print_turn(result)


def cmd_eval(args: argparse.Namespace) -> int:
    text = _read_file(args.corpus_file)
    try:
        records = parse_corpus(text)
    except CorpusError as e:
        _fail(f"{args.corpus_file}: {e}")
        raise AssertionError  # unreachable
    matrix = eval_matrix(records)
    aggregate_row = None
    if args.weights == "uniform":
        table = PolicyTable(matrix=matrix)
        aggregate_row = aggregate(table, uniform_weights())
    sys.stdout.write(format_matrix(matrix, aggregate_row))
    return 0


def cmd_serve(args: argparse.Namespace) -> int:
    listen = args.listen or os.environ.get("PGX_LISTEN") or DEFAULT_LISTEN
    host, _, port_text = listen.rpartition(":")
    if not host:
        host = "127.0.0.1"
    try:
        port = int(port_text)
    except ValueError:
        _fail(f"bad listen address {listen!r}, expected host:port")
        raise AssertionError  # unreachable
    import uvicorn

    from pgx.service import create_app

    uvicorn.run(create_app(), host=host, port=port, log_level="warning")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pgx",
        description="explanation engine for And-Or-graph parse graphs",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_validate = sub.add_parser("validate", help="check a parse-graph file")
    p_validate.add_argument("pg_file")
    p_validate.set_defaults(func=cmd_validate)

    p_ask = sub.add_parser("ask", help="answer one question against a graph")
    p_ask.add_argument("pg_file")
    p_ask.add_argument("question")
    p_ask.add_argument("--ontology", help="fact file")
    p_ask.add_argument("--policy", help="preference-table JSON")
    p_ask.set_defaults(func=cmd_ask)

    p_repl = sub.add_parser("repl", help="interactive dialogue")
    p_repl.add_argument("pg_file")
    p_repl.add_argument("--ontology", help="fact file")
    p_repl.add_argument("--policy", help="preference-table JSON")
    p_repl.set_defaults(func=cmd_repl)

    p_eval = sub.add_parser("eval", help="annotation-corpus percentage matrix")
    p_eval.add_argument("corpus_file")
    p_eval.add_argument("--weights", choices=["uniform"], help="also print the aggregate row")
    p_eval.set_defaults(func=cmd_eval)

    p_serve = sub.add_parser("serve", help="run the HTTP service")
    p_serve.add_argument("--listen", help=f"host:port (default {DEFAULT_LISTEN}, env PGX_LISTEN)")
    p_serve.set_defaults(func=cmd_serve)

    return parser


def entry(argv: Optional[list[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(entry())
