"""Seq2seq generation engine behind the /summarize endpoint."""

from __future__ import annotations

import logging
import threading
from dataclasses import dataclass

import torch
from transformers import AutoModelForSeq2SeqLM, AutoTokenizer

logger = logging.getLogger("metasumm_server")


@dataclass(frozen=True)
class ServerConfig:
    model: str  # Hugging Face id or local checkpoint directory
    device: str = "cpu"
    max_input_tokens: int = 512
    max_output_tokens: int = 128
    port: int = 8100

    def __post_init__(self) -> None:
        if self.max_input_tokens <= 0 or self.max_output_tokens <= 0:
            raise ValueError("token caps must be positive")


class Seq2SeqEngine:
    """Loads the checkpoint once; generation is serialized behind a lock."""

    def __init__(self, cfg: ServerConfig):
        self.cfg = cfg
        logger.info("loading checkpoint %s on %s", cfg.model, cfg.device)
        self.tokenizer = AutoTokenizer.from_pretrained(cfg.model)
        self.model = AutoModelForSeq2SeqLM.from_pretrained(cfg.model).to(cfg.device)
        self.model.eval()
        self._lock = threading.Lock()
        # never emit special tokens as content; keeps decoded text non-empty
        self._banned = [[tid] for tid in self.tokenizer.all_special_ids]

    def summarize(self, text: str, max_length_words: int | None = None) -> str:
        inputs = self.tokenizer(
            text,
            return_tensors="pt",
            truncation=True,
            max_length=self.cfg.max_input_tokens,
        ).to(self.cfg.device)
        with self._lock, torch.no_grad():
            output_ids = self.model.generate(
                **inputs,
                num_beams=1,
                do_sample=False,
                min_new_tokens=4,
                max_new_tokens=self.cfg.max_output_tokens,
                bad_words_ids=self._banned,
            )
        summary = self.tokenizer.decode(output_ids[0], skip_special_tokens=True).strip()
        if not summary:
            # degenerate decode (possible with untrained checkpoints): fall
            # back to the leading words of the input, keeping the contract
            summary = " ".join(text.split()[: max_length_words or 32])
        if max_length_words is not None:
            summary = " ".join(summary.split()[:max_length_words])
        return summary
