"""Command-line interface.

Subcommands:
    serve            run the HTTP gateway
    chat             interactive REPL against a local or remote gateway
    submit           send one request (from --text or --file)
    eval             score a backend on a labeled corpus, write report files
    corpus gen       generate the seed+augmented corpus deterministically
    fixtures record  capture live chat exchanges into replay fixtures
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import requests

from intent_gate.canon import canonical_dumps
from intent_gate.corpus import TECHNIQUES, build_corpus, read_corpus, write_corpus
from intent_gate.evaluation import evaluate
from intent_gate.extraction.llm import LlmExtractor
from intent_gate.extraction.prompt import default_prompt_spec, load_prompt_spec
from intent_gate.extraction.rules import Lexicon, RuleBasedExtractor
from intent_gate.extraction.transport import (
    HttpChatTransport,
    RecordingTransport,
    ReplayTransport,
)
from intent_gate.gateway.config import load_config
from intent_gate.gateway.service import GatewayService


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if not hasattr(args, "func"):
        parser.print_help()
        return 2
    return args.func(args)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="intent-gate",
        description="Natural-language intent gateway for a simulated 5G core.",
    )
    sub = parser.add_subparsers(dest="command")

    p_serve = sub.add_parser("serve", help="run the HTTP gateway")
    p_serve.add_argument("--config", help="path to a JSON config file")
    p_serve.add_argument("--host", help="listen host override")
    p_serve.add_argument("--port", type=int, help="listen port override")
    p_serve.set_defaults(func=cmd_serve)

    p_chat = sub.add_parser("chat", help="interactive REPL")
    p_chat.add_argument("--url", help="remote gateway base URL (default: in-process)")
    p_chat.add_argument("--config", help="config for the in-process gateway")
    p_chat.set_defaults(func=cmd_chat)

    p_submit = sub.add_parser("submit", help="submit a single request")
    group = p_submit.add_mutually_exclusive_group(required=True)
    group.add_argument("--text", help="request text")
    group.add_argument("--file", help="file containing the request text")
    p_submit.add_argument("--session", help="session id to reuse")
    p_submit.add_argument("--url", help="remote gateway base URL (default: in-process)")
    p_submit.add_argument("--config", help="config for the in-process gateway")
    p_submit.set_defaults(func=cmd_submit)

    p_eval = sub.add_parser("eval", help="evaluate a backend on a labeled corpus")
    p_eval.add_argument("--dataset", help="corpus file (default: generated seed corpus)")
    p_eval.add_argument("--corpus-seed", type=int, default=42,
                        help="seed for the generated corpus when --dataset is absent")
    p_eval.add_argument("--backend", choices=("rule", "replay"), default="rule")
    p_eval.add_argument("--lexicon", help="lexicon file for the rule backend")
    p_eval.add_argument("--replay-dir", help="fixture directory for the replay backend")
    p_eval.add_argument("--prompt-spec", help="prompt spec for the replay backend")
    p_eval.add_argument("--min-f1", type=float, help="fail (exit 1) below this macro F1")
    p_eval.add_argument("--out-dir", help="write report.json, per_class.tsv and figures here")
    p_eval.add_argument("--no-figures", action="store_true", help="skip figure rendering")
    p_eval.set_defaults(func=cmd_eval)

    p_corpus = sub.add_parser("corpus", help="corpus tools")
    corpus_sub = p_corpus.add_subparsers(dest="corpus_command")
    p_gen = corpus_sub.add_parser("gen", help="generate the labeled corpus")
    p_gen.add_argument("--seed", type=int, required=True)
    p_gen.add_argument("--out", required=True, help="output corpus file")
    p_gen.add_argument(
        "--techniques",
        nargs="+",
        choices=TECHNIQUES,
        default=list(TECHNIQUES),
        help="augmentation techniques to apply",
    )
    p_gen.set_defaults(func=cmd_corpus_gen)

    p_fixtures = sub.add_parser("fixtures", help="replay fixture tools")
    fixtures_sub = p_fixtures.add_subparsers(dest="fixtures_command")
    p_record = fixtures_sub.add_parser(
        "record", help="capture live chat exchanges into replay fixtures"
    )
    p_record.add_argument("--endpoint", required=True, help="chat-completions URL")
    p_record.add_argument("--model", required=True)
    p_record.add_argument("--temperature", type=float, default=0.0)
    p_record.add_argument("--texts-file", required=True,
                          help="file with one request text per line")
    p_record.add_argument("--out-dir", required=True, help="fixture output directory")
    p_record.add_argument("--prompt-spec", help="prompt spec file (default: bundled)")
    p_record.set_defaults(func=cmd_fixtures_record)

    return parser


# ---------------------------------------------------------------------------
# serve / chat / submit
# ---------------------------------------------------------------------------


def cmd_serve(args) -> int:
    from intent_gate.gateway.httpd import serve_forever

    config = load_config(args.config)
    if args.host:
        config.listen_host = args.host
    if args.port:
        config.listen_port = args.port
    service = GatewayService(config)
    print(
        f"intent-gate listening on http://{config.listen_host}:{config.listen_port} "
        f"(backend={config.backend}, deterministic={service.deterministic})"
    )
    try:
        serve_forever(service)
    except KeyboardInterrupt:
        print("\nshutting down")
    return 0


class _RemoteGateway:
    """Thin client used by chat/submit when --url is given."""

    def __init__(self, base_url: str) -> None:
        self._base = base_url.rstrip("/")

    def create_session(self) -> str:
        resp = requests.post(f"{self._base}/v1/sessions", json={}, timeout=30)
        resp.raise_for_status()
        return resp.json()["session_id"]

    def handle_request(self, session_id: str, text: str) -> dict:
        resp = requests.post(
            f"{self._base}/v1/sessions/{session_id}/requests",
            json={"text": text},
            timeout=60,
        )
        resp.raise_for_status()
        return resp.json()


class _LocalGateway:
    def __init__(self, config_path: str | None) -> None:
        self._service = GatewayService(load_config(config_path))

    def create_session(self) -> str:
        return self._service.create_session()

    def handle_request(self, session_id: str, text: str) -> dict:
        return self._service.handle_request(session_id, text).to_jsonable()


def _gateway_for(args):
    if getattr(args, "url", None):
        return _RemoteGateway(args.url)
    return _LocalGateway(getattr(args, "config", None))


def _print_outcome(outcome: dict) -> None:
    extraction = outcome["extraction"]
    if extraction["kind"] == "no_intent_present":
        print("  -> no intent present")
    elif extraction["kind"] == "unknown_intent":
        print("  -> unknown intent")
    else:
        for detected in extraction["intents"]:
            print(f"  -> {detected['intent_type']} (confidence {detected['confidence']:.2f})")
            print(f"     {detected['explanation']}")
    for notice in outcome["notices"]:
        print(f"  note: {notice}")
    if outcome["clarification"]:
        print(f"  ? {outcome['clarification']}")
    for intent_id in outcome["intent_record_ids"]:
        print(f"  record: {intent_id}")


def cmd_chat(args) -> int:
    gateway = _gateway_for(args)
    session_id = gateway.create_session()
    print(f"session {session_id} — type a request, or 'quit' to leave")
    while True:
        try:
            line = input("> ").strip()
        except (EOFError, KeyboardInterrupt):
            print()
            return 0
        if line.lower() in ("quit", "exit"):
            return 0
        if not line:
            continue
        try:
            _print_outcome(gateway.handle_request(session_id, line))
        except Exception as exc:  # surface, keep the REPL alive
            print(f"  error: {exc}")


def cmd_submit(args) -> int:
    text = args.text if args.text else Path(args.file).read_text(encoding="utf-8").strip()
    gateway = _gateway_for(args)
    session_id = args.session or gateway.create_session()
    outcome = gateway.handle_request(session_id, text)
    print(canonical_dumps({"session_id": session_id, "outcome": outcome}))
    return 0


# ---------------------------------------------------------------------------
# eval / corpus / fixtures
# ---------------------------------------------------------------------------


def _eval_backend(args):
    if args.backend == "rule":
        lexicon = Lexicon.load(args.lexicon) if args.lexicon else Lexicon.bundled()
        return RuleBasedExtractor(lexicon)
    if not args.replay_dir:
        raise SystemExit("--backend replay requires --replay-dir")
    spec = load_prompt_spec(args.prompt_spec) if args.prompt_spec else default_prompt_spec()
    return LlmExtractor(ReplayTransport(args.replay_dir), spec)


def cmd_eval(args) -> int:
    if args.dataset:
        _, examples = read_corpus(args.dataset)
    else:
        _, examples = build_corpus(args.corpus_seed)
    report = evaluate(_eval_backend(args), examples)
    print(report.to_text_table())

    if args.out_dir:
        out_dir = Path(args.out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        (out_dir / "report.json").write_text(
            canonical_dumps(report.to_jsonable()) + "\n", encoding="utf-8"
        )
        (out_dir / "per_class.tsv").write_text(report.to_tsv(), encoding="utf-8")
        written = [out_dir / "report.json", out_dir / "per_class.tsv"]
        if not args.no_figures:
            from intent_gate.figures import render_eval_figures

            written += render_eval_figures(report, out_dir / "figures")
        for path in written:
            print(f"wrote {path}")

    if args.min_f1 is not None and report.macro_f1 < args.min_f1:
        print(f"FAIL: macro F1 {report.macro_f1:.4f} < {args.min_f1}", file=sys.stderr)
        return 1
    return 0


def cmd_corpus_gen(args) -> int:
    header, examples = build_corpus(args.seed, tuple(args.techniques))
    write_corpus(args.out, header, examples)
    print(f"wrote {len(examples)} examples to {args.out}")
    return 0


def cmd_fixtures_record(args) -> int:
    spec = load_prompt_spec(args.prompt_spec) if args.prompt_spec else default_prompt_spec()
    inner = HttpChatTransport(
        endpoint=args.endpoint, model=args.model, temperature=args.temperature
    )
    transport = RecordingTransport(inner, args.out_dir)
    backend = LlmExtractor(transport, spec)
    texts = [
        line.strip()
        for line in Path(args.texts_file).read_text(encoding="utf-8").splitlines()
        if line.strip()
    ]
    for text in texts:
        outcome = backend.classify(text)
        print(f"recorded: {text[:60]!r} -> {outcome.kind.value}")
    print(f"{len(texts)} fixtures in {args.out_dir}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
