"""Command-line entry point: load a checkpoint and serve the wire contract."""

from __future__ import annotations

import argparse
import logging

import uvicorn

from .app import create_app
from .model import Seq2SeqEngine, ServerConfig


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="metasumm-server", description=__doc__)
    parser.add_argument("--model", required=True, help="checkpoint directory or hub id")
    parser.add_argument("--device", default="cpu")
    parser.add_argument("--port", type=int, default=8100)
    parser.add_argument("--host", default="127.0.0.1")
    parser.add_argument("--max-input-tokens", type=int, default=512)
    parser.add_argument("--max-output-tokens", type=int, default=128)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(name)s: %(message)s")
    cfg = ServerConfig(
        model=args.model,
        device=args.device,
        max_input_tokens=args.max_input_tokens,
        max_output_tokens=args.max_output_tokens,
        port=args.port,
    )
    app = create_app(Seq2SeqEngine(cfg))
    uvicorn.run(app, host=args.host, port=cfg.port, log_level="info")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
