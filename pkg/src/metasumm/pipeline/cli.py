"""metasumm command-line interface.

Exit codes: 0 success, 1 usage error, 2 data/config error, 3 transport
error. Flags override values from an optional `key = value` config file;
the abstractive endpoint falls back to METASUMM_ABSTRACTIVE_URL.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path

from ..doc2vec import Doc2VecConfig
from ..errors import ConfigError, DataError, MetasummError, ProtocolError, ServiceError, TransportError
from ..io import dumps_json
from ..metamodel import ForestConfig, MLPConfig, SplitSpec, TreeConfig
from ..summarizers import Engines, SummaryBudget
from ..summarizers.abstractive import ENDPOINT_ENV_VAR, AbstractiveClient, AbstractiveClientConfig
from ..textproc import DEFAULT_STOPWORDS, NormalizationConfig, load_word_file
from . import stages
from .mockserver import MockAbstractiveServer

logger = logging.getLogger("metasumm")


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # exit 1 on usage errors, not argparse's 2
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _read_config_file(path: str) -> dict:
    values: dict = {}
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), start=1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if "=" not in stripped:
            raise ConfigError(f"{path}: line {lineno}: expected 'key = value'")
        key, _, raw = stripped.partition("=")
        key = key.strip().replace("-", "_")
        raw = raw.strip()
        try:
            values[key] = json.loads(raw)
        except ValueError:
            values[key] = raw
    return values


def _add_split_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--split-train", type=float, default=0.90, help="train fraction (default 0.90)")
    p.add_argument("--split-val", type=float, default=0.05, help="validation fraction (default 0.05)")
    p.add_argument("--split-test", type=float, default=0.05, help="test fraction (default 0.05)")
    p.add_argument("--split-seed", type=int, default=0, help="shuffle seed for the split")


def _add_engine_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument(
        "--abstractive-url",
        default=os.environ.get(ENDPOINT_ENV_VAR),
        help=f"abstractive service endpoint (default: ${ENDPOINT_ENV_VAR})",
    )
    p.add_argument("--timeout", type=float, default=30.0, help="request timeout in seconds")
    p.add_argument("--max-input-tokens", type=int, default=512, help="abstractive input cap in words")
    p.add_argument("--retries", type=int, default=2, help="transport retry count")
    p.add_argument("--budget-words", type=int, default=80, help="summary budget in words")
    _add_text_flags(p)


def _add_text_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--stopwords", help="stopword file, one word per line")
    p.add_argument("--lemmatizer", default="identity", help="registered lemmatizer name")
    p.add_argument("--abbreviations", help="abbreviation file for sentence splitting")


def _norm_from_args(args) -> NormalizationConfig:
    stopwords = DEFAULT_STOPWORDS
    if getattr(args, "stopwords", None):
        stopwords = load_word_file(args.stopwords)
    return NormalizationConfig(stopwords=stopwords, lemmatizer=getattr(args, "lemmatizer", "identity"))


def _abbreviations_from_args(args) -> frozenset | None:
    if getattr(args, "abbreviations", None):
        return load_word_file(args.abbreviations)
    return None


def _engines_from_args(args) -> Engines:
    client = None
    if getattr(args, "abstractive_url", None):
        client = AbstractiveClient(
            AbstractiveClientConfig(
                endpoint=args.abstractive_url,
                timeout_s=args.timeout,
                max_input_tokens=args.max_input_tokens,
                retries=args.retries,
            )
        )
    return Engines(
        budget=SummaryBudget(target_words=args.budget_words),
        norm=_norm_from_args(args),
        client=client,
    )


def _split_from_args(args) -> SplitSpec:
    return SplitSpec(args.split_train, args.split_val, args.split_test, args.split_seed)


def build_parser() -> _Parser:
    parser = _Parser(prog="metasumm", description=__doc__)
    parser.add_argument("--config", help="key = value config file; flags override it")
    parser.add_argument("-v", "--verbose", action="store_true", help="debug logging")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")

    p = sub.add_parser("ingest", parents=[], help="validate a corpus and print statistics")
    p.add_argument("corpus")
    p.add_argument("--length-threshold", type=int, default=512)
    p.add_argument("--summary-from", choices=("field", "first-paragraph"), default="field")
    p.add_argument("--abbreviations", help="abbreviation file for sentence splitting")

    p = sub.add_parser("train-doc2vec", help="train document embeddings")
    p.add_argument("corpus")
    p.add_argument("out")
    p.add_argument("--dim", type=int, default=256)
    p.add_argument("--window", type=int, default=5)
    p.add_argument("--max-vocab", type=int, default=100_000)
    p.add_argument("--min-count", type=int, default=1)
    p.add_argument("--epochs", type=int, default=5)
    p.add_argument("--negative", type=int, default=5)
    p.add_argument("--alpha", type=float, default=0.025)
    p.add_argument("--min-alpha", type=float, default=1e-4)
    p.add_argument("--seed", type=int, default=1)
    _add_text_flags(p)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--summary-from", choices=("field", "first-paragraph"), default="field")

    p = sub.add_parser("build-meta-dataset", help="run engines + ROUGE to build regression targets")
    p.add_argument("corpus")
    p.add_argument("doc2vec")
    p.add_argument("out")
    _add_engine_flags(p)
    p.add_argument("--target-mode", choices=("aggregate", "suite"), default="aggregate")
    p.add_argument("--length-threshold", type=int, default=512)
    p.add_argument("--infer-steps", type=int, default=50)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--sample", type=int, help="use a seeded random sample of N documents")
    p.add_argument("--sample-seed", type=int, default=0)
    p.add_argument("--summary-from", choices=("field", "first-paragraph"), default="field")

    p = sub.add_parser("train-meta", help="fit a predictor on the meta dataset")
    p.add_argument("dataset")
    p.add_argument("out")
    p.add_argument("--model", choices=stages.MODEL_KINDS, required=True)
    p.add_argument("--length-feature", action="store_true")
    p.add_argument("--balanced", action="store_true")
    p.add_argument("--balance-seed", type=int, default=0)
    _add_split_flags(p)
    p.add_argument("--min-split", type=int, default=100, help="tree/forest min samples to split")
    p.add_argument("--trees", type=int, default=300, help="forest size")
    p.add_argument("--no-bootstrap", action="store_true")
    p.add_argument("--max-features", type=int, help="forest per-split feature sample (default ceil(d/3))")
    p.add_argument("--hidden", default="1024,1024", help="MLP hidden sizes, comma-separated")
    p.add_argument("--batch-size", type=int, default=32)
    p.add_argument("--max-epochs", type=int, default=100)
    p.add_argument("--patience", type=int, default=2)
    p.add_argument("--val-fraction", type=float, default=0.1)
    p.add_argument("--lr", type=float, default=1e-3)
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("evaluate", help="evaluate predictors on the test split")
    p.add_argument("dataset")
    p.add_argument("--predictor", nargs="+", required=True)
    p.add_argument("--report", choices=stages.REPORT_KINDS, required=True)
    _add_split_flags(p)
    p.add_argument("--out-dir", help="write <report>.txt and <report>.csv here")
    p.add_argument("--corpus", help="corpus path (final-rouge)")
    p.add_argument("--doc2vec", help="doc2vec model path (final-rouge)")
    p.add_argument("--infer-steps", type=int, default=50)
    _add_engine_flags(p)

    p = sub.add_parser("summarize", help="summarize one document, optionally auto-routed")
    p.add_argument("--model", choices=("auto", *stages.CLI_MODEL_NAMES), default="auto")
    p.add_argument("--text", help="document text (default: read stdin)")
    p.add_argument("--input", help="read the document from this file")
    p.add_argument("--doc2vec", help="doc2vec model path (auto mode)")
    p.add_argument("--predictor", help="predictor path (auto mode)")
    p.add_argument("--infer-steps", type=int, default=50)
    _add_engine_flags(p)

    p = sub.add_parser("serve-mock", help="run the deterministic mock abstractive server")
    p.add_argument("--port", type=int, default=8099)
    p.add_argument("--sentences", type=int, default=2, help="sentences echoed back")

    parser.sub_parsers = {name: sp for name, sp in sub.choices.items()}
    return parser


def _dispatch(args) -> int:
    if args.command == "ingest":
        stats = stages.run_ingest(
            args.corpus, args.length_threshold, args.summary_from, _abbreviations_from_args(args)
        )
        print(json.dumps(stats, indent=2, sort_keys=True))
        return 0

    if args.command == "train-doc2vec":
        cfg = Doc2VecConfig(
            dim=args.dim,
            window=args.window,
            max_vocab=args.max_vocab,
            min_count=args.min_count,
            epochs=args.epochs,
            negative=args.negative,
            alpha=args.alpha,
            min_alpha=args.min_alpha,
            seed=args.seed,
        )
        info = stages.run_train_doc2vec(
            args.corpus, args.out, cfg, norm=_norm_from_args(args),
            workers=args.workers, summary_from=args.summary_from,
            abbreviations=_abbreviations_from_args(args),
        )
        print(dumps_json(info))
        return 0

    if args.command == "build-meta-dataset":
        info = stages.run_build_meta(
            args.corpus,
            args.doc2vec,
            args.out,
            engines=_engines_from_args(args),
            target_mode=args.target_mode,
            length_threshold=args.length_threshold,
            infer_steps=args.infer_steps,
            workers=args.workers,
            sample=args.sample,
            sample_seed=args.sample_seed,
            summary_from=args.summary_from,
            abbreviations=_abbreviations_from_args(args),
        )
        print(dumps_json(info))
        return 0

    if args.command == "train-meta":
        hidden = tuple(int(x) for x in str(args.hidden).split(",") if x.strip())
        info = stages.run_train_meta(
            args.dataset,
            args.out,
            kind=args.model,
            split_spec=_split_from_args(args),
            length_feature=args.length_feature,
            balanced=args.balanced,
            balance_seed=args.balance_seed,
            tree_cfg=TreeConfig(min_samples_split=args.min_split),
            forest_cfg=ForestConfig(
                n_trees=args.trees,
                min_samples_split=args.min_split,
                bootstrap=not args.no_bootstrap,
                max_features=args.max_features,
                seed=args.seed,
            ),
            mlp_cfg=MLPConfig(
                hidden=hidden,
                batch_size=args.batch_size,
                max_epochs=args.max_epochs,
                patience=args.patience,
                validation_fraction=args.val_fraction,
                learning_rate=args.lr,
                seed=args.seed,
            ),
        )
        print(dumps_json(info))
        return 0

    if args.command == "evaluate":
        text = stages.run_evaluate(
            args.dataset,
            predictor_paths=args.predictor,
            report=args.report,
            split_spec=_split_from_args(args),
            out_dir=args.out_dir,
            corpus_path=args.corpus,
            d2v_path=args.doc2vec,
            engines=_engines_from_args(args),
            infer_steps=args.infer_steps,
            abbreviations=_abbreviations_from_args(args),
        )
        print(text, end="")
        return 0

    if args.command == "summarize":
        if args.text is not None:
            text = args.text
        elif args.input:
            text = Path(args.input).read_text(encoding="utf-8")
        else:
            text = sys.stdin.read()
        info = stages.run_summarize(
            text,
            model_name=args.model,
            engines=_engines_from_args(args),
            d2v_path=args.doc2vec,
            predictor_path=args.predictor,
            infer_steps=args.infer_steps,
            abbreviations=_abbreviations_from_args(args),
        )
        print(info["summary"])
        if "predicted_scores" in info:
            print(f"[routed to {info['model']}; predicted scores: "
                  + ", ".join(f"{k}={v:.2f}" for k, v in info["predicted_scores"].items())
                  + "]", file=sys.stderr)
        return 0

    if args.command == "serve-mock":
        try:
            server = MockAbstractiveServer(port=args.port, n_sentences=args.sentences)
        except OSError as exc:
            print(f"metasumm serve-mock: cannot bind port {args.port}: {exc}", file=sys.stderr)
            return 2
        server.serve_forever()
        return 0

    raise ConfigError(f"missing command; run `metasumm --help`")


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        preliminary, _ = parser.parse_known_args(argv)
        if preliminary.config:
            try:
                defaults = _read_config_file(preliminary.config)
            except OSError as exc:
                print(f"metasumm: cannot read config file: {exc}", file=sys.stderr)
                return 1
            except ConfigError as exc:
                print(f"metasumm: error: {exc}", file=sys.stderr)
                return 2
            parser.set_defaults(**defaults)
            for sp in parser.sub_parsers.values():
                sp.set_defaults(**defaults)
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.INFO,
        format="%(levelname)s %(name)s: %(message)s",
    )
    if not args.command:
        parser.print_usage(sys.stderr)
        return 1
    try:
        return _dispatch(args)
    except (TransportError, ServiceError, ProtocolError) as exc:
        print(f"metasumm: transport error: {exc}", file=sys.stderr)
        return 3
    except (ConfigError, DataError) as exc:
        print(f"metasumm: error: {exc}", file=sys.stderr)
        return 2
    except MetasummError as exc:
        print(f"metasumm: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
