"""Pipeline stages: each writes its artifact atomically plus a manifest."""

from __future__ import annotations

import csv
import io as stdio
import logging
import time
from dataclasses import asdict
from pathlib import Path

import numpy as np

from ..doc2vec import Doc2VecConfig, Doc2VecModel, infer_vector, train
from ..errors import ConfigError, DataError
from ..io import atomic_write_text
from ..metamodel import (
    ForestConfig,
    MetaDataset,
    MLPConfig,
    SplitSpec,
    TreeConfig,
    add_length_feature,
    build_meta_dataset,
    classification_report,
    evaluate_mse,
    final_rouge_comparison,
    balance_dataset,
    load_jsonl,
    load_predictor,
    mean_baseline,
    recommend,
    recommendation_frequencies,
    save_jsonl,
    save_predictor,
    split,
    train_forest,
    train_mlp,
    train_tree,
)
from ..metamodel.predictors import summarizer_scores
from ..summarizers import Engines, SummarizerId
from ..textproc import NormalizationConfig, document
from .artifacts import require_artifact, write_manifest
from .corpus import corpus_stats, read_corpus, to_documents

logger = logging.getLogger("metasumm.pipeline")

MODEL_KINDS = ("mlp", "tree", "forest", "mean")
REPORT_KINDS = ("mse", "classification", "frequencies", "final-rouge")

CLI_MODEL_NAMES = {
    "sumbasic": SummarizerId.sumbasic,
    "graph": SummarizerId.graph_based,
    "t5": SummarizerId.t5_article,
    "hybrid": SummarizerId.hybrid_long,
}


def format_aligned(headers: list[str], rows: list[list[str]]) -> str:
    widths = [max(len(h), *(len(r[i]) for r in rows)) if rows else len(h) for i, h in enumerate(headers)]
    def fmt(cells):
        return "  ".join(c.ljust(w) for c, w in zip(cells, widths)).rstrip()
    lines = [fmt(headers), fmt(["-" * w for w in widths])]
    lines.extend(fmt(r) for r in rows)
    return "\n".join(lines) + "\n"


def csv_text(headers: list[str], rows: list[list[str]]) -> str:
    buf = stdio.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(headers)
    writer.writerows(rows)
    return buf.getvalue()


def run_ingest(
    corpus_path: str,
    length_threshold: int = 512,
    summary_from: str = "field",
    abbreviations: frozenset[str] | None = None,
) -> dict:
    docs = to_documents(read_corpus(corpus_path, summary_from), abbreviations)
    return corpus_stats(docs, length_threshold)


def run_train_doc2vec(
    corpus_path: str,
    out_path: str,
    cfg: Doc2VecConfig,
    norm: NormalizationConfig | None = None,
    workers: int = 1,
    summary_from: str = "field",
    abbreviations: frozenset[str] | None = None,
) -> dict:
    t0 = time.time()
    docs = to_documents(read_corpus(corpus_path, summary_from), abbreviations)
    model = train(docs, cfg, norm=norm, workers=workers)
    model.save(out_path)
    write_manifest(
        out_path,
        stage="train-doc2vec",
        inputs={"corpus": corpus_path},
        config={"doc2vec": asdict(cfg), "workers": workers, "summary_from": summary_from},
        seed=cfg.seed,
        wall_time_s=time.time() - t0,
    )
    return {
        "documents": len(docs),
        "vocabulary": model.vocab.size,
        "epoch_losses": [round(x, 6) for x in model.epoch_losses],
        "model": out_path,
    }


def run_build_meta(
    corpus_path: str,
    d2v_path: str,
    out_path: str,
    engines: Engines,
    target_mode: str = "aggregate",
    length_threshold: int = 512,
    infer_steps: int = 50,
    workers: int = 1,
    sample: int | None = None,
    sample_seed: int = 0,
    summary_from: str = "field",
    abbreviations: frozenset[str] | None = None,
) -> dict:
    t0 = time.time()
    require_artifact(d2v_path, "doc2vec model", "train-doc2vec")
    model = Doc2VecModel.load(d2v_path)
    docs = to_documents(read_corpus(corpus_path, summary_from), abbreviations)
    if sample is not None:
        if sample < 1 or sample > len(docs):
            raise ConfigError(f"--sample must be in [1, {len(docs)}], got {sample}")
        rng = np.random.default_rng(sample_seed)
        keep = sorted(rng.choice(len(docs), size=sample, replace=False).tolist())
        docs = [docs[i] for i in keep]
    dataset = build_meta_dataset(
        docs,
        model,
        engines,
        target_mode=target_mode,
        length_threshold=length_threshold,
        infer_steps=infer_steps,
        workers=workers,
    )
    save_jsonl(dataset, out_path)
    write_manifest(
        out_path,
        stage="build-meta-dataset",
        inputs={"corpus": corpus_path, "doc2vec": d2v_path},
        config={
            "target_mode": target_mode,
            "length_threshold": length_threshold,
            "infer_steps": infer_steps,
            "budget_words": engines.budget.target_words,
            "sample": sample,
            "sample_seed": sample_seed,
            "summary_from": summary_from,
        },
        seed=sample_seed,
        wall_time_s=time.time() - t0,
    )
    return {
        "records": len(dataset),
        "excluded": dataset.provenance.get("excluded", []),
        "feature_dim": dataset.feature_dim,
        "target_dim": dataset.target_dim,
        "dataset": out_path,
    }


def _prepare_splits(
    dataset: MetaDataset, spec: SplitSpec, length_feature: bool
) -> tuple[MetaDataset, MetaDataset, MetaDataset]:
    if length_feature:
        dataset = add_length_feature(dataset)
    return split(dataset, spec)


def run_train_meta(
    dataset_path: str,
    out_path: str,
    kind: str,
    split_spec: SplitSpec,
    length_feature: bool = False,
    balanced: bool = False,
    balance_seed: int = 0,
    tree_cfg: TreeConfig | None = None,
    forest_cfg: ForestConfig | None = None,
    mlp_cfg: MLPConfig | None = None,
) -> dict:
    t0 = time.time()
    require_artifact(dataset_path, "meta dataset", "build-meta-dataset")
    if kind not in MODEL_KINDS:
        raise ConfigError(f"--model must be one of {MODEL_KINDS}, got {kind!r}")
    dataset = load_jsonl(dataset_path)
    train_part, _, _ = _prepare_splits(dataset, split_spec, length_feature)
    if balanced:
        train_part = balance_dataset(train_part, seed=balance_seed)

    if kind == "mean":
        predictor = mean_baseline(train_part)
    elif kind == "tree":
        predictor = train_tree(train_part, tree_cfg)
    elif kind == "forest":
        predictor = train_forest(train_part, forest_cfg)
    else:
        predictor = train_mlp(train_part, mlp_cfg)
    save_predictor(out_path, predictor)

    config: dict = {
        "model": kind,
        "length_feature": length_feature,
        "balanced": balanced,
        "balance_seed": balance_seed,
        "split": asdict(split_spec),
    }
    for name, cfg in (("tree", tree_cfg), ("forest", forest_cfg), ("mlp", mlp_cfg)):
        if cfg is not None:
            cfg_dict = asdict(cfg)
            if name == "mlp":
                cfg_dict["hidden"] = list(cfg_dict["hidden"])
            config[name] = cfg_dict
    write_manifest(
        out_path,
        stage="train-meta",
        inputs={"dataset": dataset_path},
        config=config,
        seed=split_spec.seed,
        wall_time_s=time.time() - t0,
    )
    info = {"model": kind, "train_records": len(train_part), "predictor": out_path}
    if kind == "mlp":
        info["epochs_run"] = len(predictor.val_losses)
        info["best_epoch"] = predictor.best_epoch
    return info


def _maybe_length_feature(dataset: MetaDataset, predictor) -> tuple[MetaDataset, bool]:
    expected = getattr(predictor, "feature_dim", None)
    if expected is not None and expected == dataset.feature_dim + 1:
        return add_length_feature(dataset), True
    return dataset, False


def _f(x: float, places: int = 4) -> str:
    return f"{x:.{places}f}"


def run_evaluate(
    dataset_path: str,
    predictor_paths: list[str],
    report: str,
    split_spec: SplitSpec,
    out_dir: str | None = None,
    corpus_path: str | None = None,
    d2v_path: str | None = None,
    engines: Engines | None = None,
    infer_steps: int = 50,
    abbreviations: frozenset[str] | None = None,
) -> str:
    if report not in REPORT_KINDS:
        raise ConfigError(f"--report must be one of {REPORT_KINDS}, got {report!r}")
    require_artifact(dataset_path, "meta dataset", "build-meta-dataset")
    for p in predictor_paths:
        require_artifact(p, "predictor", "train-meta")
    if report != "mse" and len(predictor_paths) != 1:
        raise ConfigError(f"--report {report} expects exactly one --predictor")
    dataset = load_jsonl(dataset_path)

    if report == "mse":
        headers = ["model", "mse"]
        rows = []
        for path in predictor_paths:
            predictor = load_predictor(path)
            ds, _ = _maybe_length_feature(dataset, predictor)
            _, _, test_part = split(ds, split_spec)
            rows.append([predictor.variant, _f(evaluate_mse(predictor, test_part), 6)])
        title = "mse"
    elif report in ("classification", "frequencies"):
        predictor = load_predictor(predictor_paths[0])
        ds, _ = _maybe_length_feature(dataset, predictor)
        _, _, test_part = split(ds, split_spec)
        if report == "classification":
            rep = classification_report(predictor, test_part)
            headers = ["method", "precision", "recall", "f1-score", "support"]
            rows = [
                [sid.name, _f(m.precision, 2), _f(m.recall, 2), _f(m.f1, 2), str(m.support)]
                for sid, m in rep.per_class.items()
            ]
            rows.append(["accuracy", "", "", _f(rep.accuracy, 2), str(rep.total_support)])
            rows.append(["mse", "", "", _f(rep.mse, 3), ""])
        else:
            freqs = recommendation_frequencies(predictor, test_part)
            headers = ["model", "count"]
            rows = [[sid.name, str(c)] for sid, c in freqs.items()]
            rows.append(["total", str(sum(freqs.values()))])
        title = report
    else:  # final-rouge
        if not (corpus_path and d2v_path and engines):
            raise ConfigError("--report final-rouge needs --corpus, --doc2vec, and engine settings")
        require_artifact(d2v_path, "doc2vec model", "train-doc2vec")
        predictor = load_predictor(predictor_paths[0])
        ds, use_length = _maybe_length_feature(dataset, predictor)
        _, _, test_part = split(ds, split_spec)
        test_ids = {r.doc_id for r in test_part.records}
        docs = [d for d in to_documents(read_corpus(corpus_path), abbreviations) if d.id in test_ids]
        model = Doc2VecModel.load(d2v_path)
        table = final_rouge_comparison(
            docs, engines, predictor, model, length_feature=use_length, infer_steps=infer_steps
        )
        headers = ["model", "rouge-1", "rouge-2", "rouge-l", "aggregate"]
        rows = [
            [name, _f(row.rouge1, 2), _f(row.rouge2, 2), _f(row.rougeL, 2), _f(row.aggregate, 2)]
            for name, row in table.rows.items()
        ]
        title = "final-rouge"

    text = format_aligned(headers, rows)
    if out_dir:
        out = Path(out_dir)
        atomic_write_text(out / f"{title}.txt", text)
        atomic_write_text(out / f"{title}.csv", csv_text(headers, rows))
    return text


def run_summarize(
    text: str,
    model_name: str,
    engines: Engines,
    d2v_path: str | None = None,
    predictor_path: str | None = None,
    infer_steps: int = 50,
    abbreviations: frozenset[str] | None = None,
) -> dict:
    doc = document("stdin", text, abbreviations=abbreviations)
    if not doc.sentences:
        raise DataError("input text is empty")
    if model_name != "auto":
        which = CLI_MODEL_NAMES.get(model_name)
        if which is None:
            raise ConfigError(f"--model must be auto or one of {sorted(CLI_MODEL_NAMES)}")
        result = engines.run(which, doc)
        return {"model": which.name, "summary": result.text}

    if not (d2v_path and predictor_path):
        raise ConfigError("--model auto needs --doc2vec and --predictor")
    require_artifact(d2v_path, "doc2vec model", "train-doc2vec")
    require_artifact(predictor_path, "predictor", "train-meta")
    model = Doc2VecModel.load(d2v_path)
    predictor = load_predictor(predictor_path)
    features = infer_vector(model, doc, steps=infer_steps).astype(np.float64)
    expected = getattr(predictor, "feature_dim", None)
    if expected is not None and expected == len(features) + 1:
        features = np.concatenate((features, [doc.token_count / 1000.0]))
    scores = summarizer_scores(predictor, features)
    which = recommend(predictor, features)
    result = engines.run(which, doc)
    return {
        "model": which.name,
        "summary": result.text,
        "predicted_scores": {sid.name: float(scores[int(sid)]) for sid in SummarizerId},
    }
