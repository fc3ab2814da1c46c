import numpy as np
import pytest

from metasumm.doc2vec import Doc2VecConfig, train
from metasumm.errors import ConfigError, DataError
from metasumm.metamodel import (
    MetaDataset,
    SplitSpec,
    add_length_feature,
    balance_dataset,
    build_meta_dataset,
    load_jsonl,
    save_jsonl,
    split,
)
from metasumm.rouge import aggregate_score, rouge_suite
from metasumm.summarizers import Engines, SummarizerId, SummaryBudget
from metasumm.summarizers.abstractive import AbstractiveClient, AbstractiveClientConfig
from metasumm.textproc import NormalizationConfig, document
from synthetic import dataset_from_arrays, make_two_regime_corpus

NO_STOPWORDS = NormalizationConfig(stopwords=frozenset())


@pytest.fixture(scope="module")
def regime_setup(mock_client):
    docs, regimes = make_two_regime_corpus(seed=0, n_docs=24)
    d2v = train(docs, Doc2VecConfig(dim=16, window=5, epochs=6, seed=1))
    engines = Engines(budget=SummaryBudget(target_words=8), client=mock_client)
    dataset = build_meta_dataset(docs, d2v, engines, length_threshold=20, infer_steps=10)
    return docs, regimes, d2v, engines, dataset


class TestBuildMetaDataset:
    def test_shapes_and_bounds(self, regime_setup):
        docs, _, _, _, dataset = regime_setup
        assert len(dataset) == len(docs)
        assert dataset.target_dim == 4
        y = dataset.target_matrix()
        assert np.isfinite(y).all()
        assert (y >= 0).all() and (y <= 100).all()

    def test_reference_equal_to_sumbasic_output_scores_100(self, regime_setup):
        docs, regimes, _, _, dataset = regime_setup
        for doc, regime, record in zip(docs, regimes, dataset.records):
            if regime == 0:
                assert record.targets[int(SummarizerId.sumbasic)] == pytest.approx(100.0)

    def test_targets_match_recomputation_oracle(self, regime_setup):
        docs, _, _, engines, dataset = regime_setup
        for doc, record in list(zip(docs, dataset.records))[:6]:
            outcomes = engines.run_all(doc)
            for sid in SummarizerId:
                suite = rouge_suite(outcomes[sid].result.text, doc.reference_summary)
                assert record.targets[int(sid)] == pytest.approx(aggregate_score(suite), abs=1e-12)

    def test_missing_reference_raises(self, regime_setup):
        _, _, d2v, engines, _ = regime_setup
        with pytest.raises(DataError, match="reference"):
            build_meta_dataset([document("x", "Nekaj je. Nekaj ni.")], d2v, engines)

    def test_failing_engine_excludes_and_logs(self, regime_setup, caplog):
        docs, _, d2v, _, _ = regime_setup
        dead = Engines(
            budget=SummaryBudget(target_words=8),
            client=AbstractiveClient(
                AbstractiveClientConfig(endpoint="http://127.0.0.1:1", timeout_s=0.2, retries=0)
            ),
        )
        with caplog.at_level("WARNING", logger="metasumm.metamodel"):
            with pytest.raises(DataError, match="no document"):
                build_meta_dataset(docs[:2], d2v, dead)
        assert "excluding document" in caplog.text

    def test_suite_mode_has_16_targets(self, regime_setup, mock_client):
        docs, _, d2v, engines, _ = regime_setup
        ds = build_meta_dataset(docs[:3], d2v, engines, target_mode="suite", infer_steps=5)
        assert ds.target_dim == 16

    def test_workers_preserve_order(self, regime_setup):
        docs, _, d2v, engines, dataset = regime_setup
        parallel = build_meta_dataset(docs, d2v, engines, length_threshold=20, infer_steps=10, workers=4)
        assert [r.doc_id for r in parallel.records] == [r.doc_id for r in dataset.records]
        for a, b in zip(parallel.records, dataset.records):
            assert np.array_equal(a.features, b.features)
            assert np.array_equal(a.targets, b.targets)


class TestSplit:
    def test_90_5_5_on_100(self):
        ds = dataset_from_arrays(np.zeros((100, 3)), np.zeros((100, 4)))
        tr, va, te = split(ds, SplitSpec(0.9, 0.05, 0.05, seed=0))
        assert (len(tr), len(va), len(te)) == (90, 5, 5)

    def test_deterministic(self):
        ds = dataset_from_arrays(np.arange(60).reshape(-1, 1).astype(float), np.zeros((60, 4)))
        a = split(ds, SplitSpec(seed=5))
        b = split(ds, SplitSpec(seed=5))
        for pa, pb in zip(a, b):
            assert [r.doc_id for r in pa.records] == [r.doc_id for r in pb.records]

    def test_partition_is_exhaustive_and_disjoint(self):
        ds = dataset_from_arrays(np.zeros((37, 2)), np.zeros((37, 4)))
        parts = split(ds, SplitSpec(seed=1))
        ids = [r.doc_id for p in parts for r in p.records]
        assert len(ids) == 37
        assert set(ids) == {r.doc_id for r in ds.records}

    def test_fraction_validation(self):
        with pytest.raises(ConfigError):
            SplitSpec(0.5, 0.2, 0.2)
        with pytest.raises(ConfigError):
            SplitSpec(1.0, 0.0, 0.0)

    def test_too_small_dataset(self):
        ds = dataset_from_arrays(np.zeros((2, 2)), np.zeros((2, 4)))
        with pytest.raises(DataError):
            split(ds, SplitSpec())


class TestLengthFeature:
    def test_dimension_grows(self):
        ds = dataset_from_arrays(np.zeros((5, 256)), np.zeros((5, 4)))
        assert add_length_feature(ds).feature_dim == 257

    def test_scaling(self):
        ds = dataset_from_arrays(np.zeros((2, 3)), np.zeros((2, 4)), token_counts=[600, 1500])
        out = add_length_feature(ds)
        assert out.records[0].features[-1] == pytest.approx(0.6)
        assert out.records[1].features[-1] == pytest.approx(1.5)

    def test_original_features_unchanged(self):
        x = np.random.default_rng(0).normal(size=(4, 6))
        ds = dataset_from_arrays(x, np.zeros((4, 4)))
        out = add_length_feature(ds)
        assert np.array_equal(np.stack([r.features[:-1] for r in out.records]), x)


class TestBalance:
    def _mixed(self, n_short, n_long):
        counts = [10] * n_short + [1000] * n_long
        return dataset_from_arrays(
            np.arange(len(counts)).reshape(-1, 1).astype(float),
            np.zeros((len(counts), 4)),
            token_counts=counts,
        )

    def test_downsample_majority(self):
        ds = self._mixed(50, 10)
        out = balance_dataset(ds, seed=0)
        longs = sum(1 for r in out.records if r.length_class.long)
        shorts = len(out) - longs
        assert longs == shorts == 10

    def test_already_balanced_unchanged(self):
        ds = self._mixed(5, 5)
        assert balance_dataset(ds, seed=0) is ds

    def test_order_preserved(self):
        ds = self._mixed(30, 6)
        out = balance_dataset(ds, seed=1)
        ids = [r.doc_id for r in out.records]
        original_order = [r.doc_id for r in ds.records if r.doc_id in set(ids)]
        assert ids == original_order

    def test_absent_class_raises(self):
        ds = self._mixed(5, 0)
        with pytest.raises(DataError, match="both length classes"):
            balance_dataset(ds)


class TestJsonl:
    def test_roundtrip(self, tmp_path, regime_setup):
        *_, dataset = regime_setup
        path = tmp_path / "meta.jsonl"
        save_jsonl(dataset, path)
        loaded = load_jsonl(path, length_threshold=20)
        assert len(loaded) == len(dataset)
        for a, b in zip(loaded.records, dataset.records):
            assert a.doc_id == b.doc_id
            assert np.array_equal(a.features, b.features)
            assert np.array_equal(a.targets, b.targets)
            assert a.length_class == b.length_class
            assert a.token_count == b.token_count

    def test_malformed_line_names_lineno(self, tmp_path):
        path = tmp_path / "bad.jsonl"
        path.write_text('{"id": "a", "features": [1], "targets": [1,2,3,4], '
                        '"length_class": "short", "token_count": 3}\n{"id": "b"}\n')
        with pytest.raises(DataError, match="line 2"):
            load_jsonl(path)

    def test_byte_stable(self, tmp_path, regime_setup):
        *_, dataset = regime_setup
        save_jsonl(dataset, tmp_path / "a.jsonl")
        save_jsonl(dataset, tmp_path / "b.jsonl")
        assert (tmp_path / "a.jsonl").read_bytes() == (tmp_path / "b.jsonl").read_bytes()


def test_dataset_validation():
    with pytest.raises(DataError):
        MetaDataset(records=[], feature_dim=4)
