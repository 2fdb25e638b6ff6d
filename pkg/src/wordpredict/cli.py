"""``predictd`` command line umbrella.

Subcommands: ``train-ngram``, ``train-lsa``, ``evaluate``,
``evaluate-all``, and ``serve``.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .combine import CombinerConfig, PredictionPipeline, load_presets
from .corpus import build_vocabulary, load_stopwords, tokenize
from .evaluate import evaluate_all, evaluate_pipeline, render_table, write_report
from .ngram import export_arpa, import_arpa, train_ngram_model
from .semantic import SemanticSpace, build_cooccurrence, build_semantic_space


def _read_text(path: str) -> str:
    return Path(path).read_text(encoding="utf-8")


def cmd_train_ngram(args: argparse.Namespace) -> int:
    tokens = tokenize(_read_text(args.corpus))
    vocab = build_vocabulary(tokens, max_size=args.vocab_size, min_count=args.min_count)
    model = train_ngram_model(
        tokens, vocab, order=args.order, smoothing=args.smoothing,
        prune=args.prune if args.prune > 1 else None,
    )
    export_arpa(model, args.out)
    meta = model.metadata
    if meta.get("warning"):
        print(f"warning: {meta['warning']}", file=sys.stderr)
    print(f"wrote {args.out} (order {model.order}, {len(model.logprobs)} entries)")
    return 0


def cmd_train_lsa(args: argparse.Namespace) -> int:
    tokens = tokenize(_read_text(args.corpus))
    stopwords = load_stopwords(args.stopwords) if args.stopwords else set()
    content = build_vocabulary(
        (t for t in tokens if t.is_word() and t.surface not in stopwords),
        max_size=args.max_terms,
        min_count=args.min_count,
    )
    columns = min(args.columns, len(content) - 1)
    matrix = build_cooccurrence(tokens, content, columns, args.window)
    space = build_semantic_space(
        matrix, k=args.dims, density_m=args.density_m, seed=args.seed
    )
    if args.binary:
        space.save_binary(args.out)
    else:
        space.save_text(args.out)
    print(f"wrote {args.out} ({len(space)} terms, {space.dims} dims)")
    return 0


def _load_pipeline(args: argparse.Namespace, config: CombinerConfig) -> PredictionPipeline:
    model = import_arpa(args.lm)
    space = SemanticSpace.load(args.space) if args.space else None
    return PredictionPipeline(model, space, config)


def cmd_evaluate(args: argparse.Namespace) -> int:
    config = CombinerConfig.load(args.config)
    if args.list_size:
        config.list_size = args.list_size
    pipeline = _load_pipeline(args, config)
    report = evaluate_pipeline(pipeline, _read_text(args.text), n=config.list_size)
    print(
        f"ksr{config.list_size} = {report.ksr.ksr:.2f}%  "
        f"(kp={report.ksr.kp}, ka={report.ksr.ka})  "
        f"perplexity = {report.perplexity:.2f}  oov = {report.oov_count}"
    )
    if args.report:
        with open(args.report, "w", encoding="utf-8") as f:
            json.dump({"v": 1, **report.to_dict()}, f, indent=2)
    return 0


def cmd_evaluate_all(args: argparse.Namespace) -> int:
    model = import_arpa(args.lm)
    space = SemanticSpace.load(args.space) if args.space else None
    presets = load_presets()
    if space is None:
        presets = {k: v for k, v in presets.items() if not v.uses_space}
    texts = {Path(p).name: _read_text(p) for p in args.texts}
    results = evaluate_all(model, space, texts, presets, n=args.list_size)
    print(render_table(results))
    if args.report:
        write_report(results, args.report)
    return 0


def cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .service import ServiceEngine, build_demo_models, create_app

    if args.demo:
        model, space = build_demo_models()
    else:
        if not args.lm:
            print("serve: --lm is required without --demo", file=sys.stderr)
            return 2
        model = import_arpa(args.lm)
        space = SemanticSpace.load(args.space) if args.space else None
    presets = None
    if args.configs:
        presets = {
            p.stem: CombinerConfig.load(p) for p in sorted(Path(args.configs).glob("*.json"))
        }
    engine = ServiceEngine(model, space, presets)
    port = int(os.environ.get("PREDICTD_PORT", args.port))
    uvicorn.run(create_app(engine), host=args.host, port=port)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="predictd")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("train-ngram", help="train a backoff model, write ARPA")
    p.add_argument("corpus")
    p.add_argument("--order", type=int, default=4)
    p.add_argument("--smoothing", default="mkn", choices=["mkn", "wb"])
    p.add_argument("--vocab-size", type=int, default=141000)
    p.add_argument("--min-count", type=int, default=1)
    p.add_argument("--prune", type=int, default=1, help="drop n-grams (order>=2) below this count")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_train_ngram)

    p = sub.add_parser("train-lsa", help="build a semantic space")
    p.add_argument("corpus")
    p.add_argument("--dims", type=int, default=150)
    p.add_argument("--window", type=int, default=100)
    p.add_argument("--columns", type=int, default=3000)
    p.add_argument("--stopwords")
    p.add_argument("--max-terms", type=int, default=80000)
    p.add_argument("--min-count", type=int, default=2)
    p.add_argument("--density-m", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--binary", action="store_true")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_train_lsa)

    p = sub.add_parser("evaluate", help="ksr + perplexity for one config")
    p.add_argument("text")
    p.add_argument("--config", required=True)
    p.add_argument("--lm", required=True)
    p.add_argument("--space")
    p.add_argument("--list-size", type=int)
    p.add_argument("--report")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("evaluate-all", help="run the eight shipped presets")
    p.add_argument("texts", nargs="+")
    p.add_argument("--lm", required=True)
    p.add_argument("--space")
    p.add_argument("--list-size", type=int)
    p.add_argument("--report")
    p.set_defaults(func=cmd_evaluate_all)

    p = sub.add_parser("serve", help="run the HTTP prediction service")
    p.add_argument("--lm")
    p.add_argument("--space")
    p.add_argument("--configs", help="directory of config JSON files")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8080)
    p.add_argument("--demo", action="store_true", help="train tiny models in memory")
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
