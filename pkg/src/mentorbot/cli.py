"""Command-line surface: serve, repl, eval, demo, export."""

from __future__ import annotations

import argparse
import json
import os
import socket
import sys
from pathlib import Path

from .dialogue import DialogueEngine, replay
from .nlu import evaluate, load_corpus, load_seed_corpus
from .service import ApiError, SessionStore, create_app, export_session

DEFAULT_UI_DIR = Path(__file__).resolve().parents[2] / "frontend" / "dist"


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mentorbot",
                                     description="Interview a founder, map the idea, "
                                                 "derive hypotheses.")
    commands = parser.add_subparsers(dest="command", required=True)

    serve = commands.add_parser("serve", help="run the HTTP service")
    serve.add_argument("--port", type=int, default=int(os.environ.get("PORT", "8000")))
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--data", default=os.environ.get("DATA_DIR", "./sessions"))
    serve.add_argument("--ui-dir", default=os.environ.get("UI_DIR"))

    commands.add_parser("repl", help="run the interview in the terminal")

    evaluate_cmd = commands.add_parser("eval", help="cross-validate the intent classifier")
    evaluate_cmd.add_argument("--corpus", default=None,
                              help="JSONL corpus (defaults to the bundled seed corpus)")
    evaluate_cmd.add_argument("--folds", type=int, default=5)
    evaluate_cmd.add_argument("--threshold", type=float, default=0.9,
                              help="exit 0 only if intent accuracy reaches this value")

    demo = commands.add_parser("demo", help="replay a scripted interview")
    demo.add_argument("--script", required=True,
                      help="JSONL file with one user utterance per line")

    export = commands.add_parser("export", help="export a stored session")
    export.add_argument("--session", required=True)
    export.add_argument("--format", default="json", choices=["json", "dot", "markdown"])
    export.add_argument("--data", default=os.environ.get("DATA_DIR", "./sessions"))

    return parser


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    handlers = {
        "serve": _run_serve,
        "repl": _run_repl,
        "eval": _run_eval,
        "demo": _run_demo,
        "export": _run_export,
    }
    return handlers[args.command](args)


def _run_serve(args) -> int:
    import uvicorn

    store = SessionStore(args.data)
    ui_dir = args.ui_dir if args.ui_dir else DEFAULT_UI_DIR
    app = create_app(store, ui_dir=ui_dir)
    sock = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
    sock.setsockopt(socket.SOL_SOCKET, socket.SO_REUSEADDR, 1)
    sock.bind((args.host, args.port))
    host, port = sock.getsockname()[:2]
    print(f"listening on http://{host}:{port}", flush=True)
    server = uvicorn.Server(uvicorn.Config(app, log_level="warning"))
    server.run(sockets=[sock])
    return 0


def _run_repl(args) -> int:
    engine = DialogueEngine()
    session = engine.new_session()
    for line in session.greeting:
        print(f"mentor> {line}")
    while not session.done:
        try:
            text = input("you> ")
        except EOFError:
            print()
            break
        if not text.strip():
            continue
        result = engine.handle(session, text)
        for line in result.replies:
            print(f"mentor> {line}")
        if result.done and result.hypotheses:
            print()
            for hypothesis in result.hypotheses:
                print(f"- [{hypothesis.kind.value}] {hypothesis.statement}")
    return 0


def _run_eval(args) -> int:
    corpus = load_corpus(args.corpus) if args.corpus else load_seed_corpus()
    metrics = evaluate(corpus, args.folds)
    print(json.dumps(metrics.to_payload(), indent=2))
    print()
    print(metrics.confusion_table())
    if metrics.accuracy >= args.threshold:
        return 0
    print(f"\naccuracy {metrics.accuracy:.3f} below threshold {args.threshold}",
          file=sys.stderr)
    return 1


def read_script(path: str | Path) -> list[str]:
    """Read a replay script: JSON Lines, each a string or {"text": ...}."""
    utterances = []
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        if not line.strip():
            continue
        value = json.loads(line)
        if isinstance(value, str):
            utterances.append(value)
        elif isinstance(value, dict) and isinstance(value.get("text"), str):
            utterances.append(value["text"])
        else:
            raise ValueError(f"bad script line: {line!r}")
    return utterances


def _run_demo(args) -> int:
    utterances = read_script(args.script)
    engine = DialogueEngine()
    session, results = replay(engine, utterances)
    for entry in session.transcript:
        prefix = "you>   " if entry.speaker == "user" else "mentor>"
        print(f"{prefix} {entry.text}")
    print()
    print(session.map.to_json())
    if results and results[-1].hypotheses:
        print()
        for hypothesis in results[-1].hypotheses:
            print(f"- [{hypothesis.kind.value}] {hypothesis.statement}")
    return 0


def _run_export(args) -> int:
    store = SessionStore(args.data)
    try:
        record = store.get(args.session)
        print(export_session(record.session, args.format))
    except ApiError as exc:
        print(f"error: {exc.message}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
