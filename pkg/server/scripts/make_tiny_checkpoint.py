#!/usr/bin/env python3
"""Build a tiny randomly-initialized byte-level seq2seq checkpoint.

The checkpoint is architecture-compatible with any real summarization
model the server can load, small enough to build offline in seconds, and
deterministic. Tests use it to exercise the wire contract; for real
summaries point the server at a trained checkpoint instead.
"""

from __future__ import annotations

import sys
from pathlib import Path

import torch
from tokenizers import pre_tokenizers
from transformers import BartConfig, BartForConditionalGeneration, BartTokenizer


def build(outdir: str | Path, seed: int = 0) -> Path:
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    specials = ["<s>", "<pad>", "</s>", "<unk>"]
    alphabet = sorted(pre_tokenizers.ByteLevel.alphabet())
    vocab = {tok: i for i, tok in enumerate(specials + alphabet + ["<mask>"])}
    tokenizer = BartTokenizer(vocab=vocab, merges=[])
    tokenizer.save_pretrained(outdir)

    torch.manual_seed(seed)
    config = BartConfig(
        vocab_size=len(tokenizer),
        d_model=32,
        encoder_layers=1,
        decoder_layers=1,
        encoder_attention_heads=2,
        decoder_attention_heads=2,
        encoder_ffn_dim=64,
        decoder_ffn_dim=64,
        max_position_embeddings=1024,
        pad_token_id=tokenizer.pad_token_id,
        bos_token_id=tokenizer.bos_token_id,
        eos_token_id=tokenizer.eos_token_id,
        decoder_start_token_id=tokenizer.eos_token_id,
        forced_bos_token_id=tokenizer.bos_token_id,
    )
    BartForConditionalGeneration(config).save_pretrained(outdir)
    return outdir


if __name__ == "__main__":
    target = sys.argv[1] if len(sys.argv) > 1 else "tiny-checkpoint"
    print(f"checkpoint written to {build(target)}")
