import numpy as np
import pytest

from metasumm.doc2vec import (
    Doc2VecConfig,
    Doc2VecModel,
    build_vocab,
    infer_vector,
    most_similar,
    ns_loss_and_grads,
    train,
)
from metasumm.errors import DataError
from metasumm.textproc import NormalizationConfig, document
from synthetic import make_cluster_corpus

NO_STOPWORDS = NormalizationConfig(stopwords=frozenset())

CFG = Doc2VecConfig(dim=32, window=5, epochs=20, seed=11)


@pytest.fixture(scope="module")
def cluster_model():
    docs = make_cluster_corpus(seed=1)
    return docs, train(docs, CFG, norm=NO_STOPWORDS)


class TestVocab:
    def test_counts(self):
        vocab = build_vocab([document("d", "a a b")], min_count=1, norm=NO_STOPWORDS)
        assert {w: int(vocab.counts[i]) for i, w in enumerate(vocab.words)} == {"a": 2, "b": 1}

    def test_min_count(self):
        vocab = build_vocab([document("d", "a a b")], min_count=2, norm=NO_STOPWORDS)
        assert vocab.words == ["a"]

    def test_max_vocab_keeps_most_frequent(self):
        vocab = build_vocab([document("d", "a a b")], min_count=1, max_vocab=1, norm=NO_STOPWORDS)
        assert vocab.words == ["a"]

    def test_frequency_ties_break_lexicographically(self):
        vocab = build_vocab([document("d", "b a c a b c")], min_count=1, max_vocab=2, norm=NO_STOPWORDS)
        assert vocab.words == ["a", "b"]

    def test_empty_corpus_raises(self):
        with pytest.raises(DataError):
            build_vocab([], norm=NO_STOPWORDS)

    def test_encode_drops_oov(self):
        vocab = build_vocab([document("d", "a b")], norm=NO_STOPWORDS)
        assert vocab.encode(["a", "zzz", "b"]).tolist() == [vocab.word_ids["a"], vocab.word_ids["b"]]


class TestGradientCheck:
    def test_analytic_matches_central_differences(self):
        """4-word toy model, relative error < 1e-4 at float64."""
        rng = np.random.default_rng(3)
        dim, m, samples = 4, 3, 5
        doc_vec = rng.normal(size=dim)
        ctx = rng.normal(size=(m, dim))
        out = rng.normal(size=(samples, dim))
        labels = np.array([1.0, 0.0, 0.0, 0.0, 0.0])

        loss, g_doc, g_ctx, g_out = ns_loss_and_grads(doc_vec, ctx, out, labels)
        eps = 1e-6

        def numeric(arr):
            grad = np.zeros_like(arr)
            it = np.nditer(arr, flags=["multi_index"])
            while not it.finished:
                i = it.multi_index
                orig = arr[i]
                arr[i] = orig + eps
                hi = ns_loss_and_grads(doc_vec, ctx, out, labels)[0]
                arr[i] = orig - eps
                lo = ns_loss_and_grads(doc_vec, ctx, out, labels)[0]
                arr[i] = orig
                grad[i] = (hi - lo) / (2 * eps)
                it.iternext()
            return grad

        for analytic, array in ((g_doc, doc_vec), (g_ctx, ctx), (g_out, out)):
            numeric_grad = numeric(array)
            rel = np.max(np.abs(analytic - numeric_grad) / (np.abs(numeric_grad) + 1e-8))
            assert rel < 1e-4


class TestTraining:
    def test_vector_shapes(self, cluster_model):
        docs, model = cluster_model
        assert model.word_in.shape[1] == CFG.dim
        assert model.word_out.shape == model.word_in.shape
        assert model.doc_vectors.shape == (len(docs), CFG.dim)

    def test_epoch_losses_decrease_in_descent_phase(self):
        # Once converged, the online-measured mean creeps by ~1%; the
        # monotone-decrease property is pinned to the descent phase.
        docs = make_cluster_corpus(seed=4, docs_per_cluster=25, doc_len=120)
        model = train(docs, Doc2VecConfig(dim=32, window=5, epochs=10, seed=15), norm=NO_STOPWORDS)
        losses = model.epoch_losses[:5]
        assert all(losses[i + 1] < losses[i] for i in range(len(losses) - 1)), losses

    def test_parameters_finite(self, cluster_model):
        _, model = cluster_model
        for arr in (model.word_in, model.word_out, model.doc_vectors):
            assert np.isfinite(arr).all()

    def test_finite_at_higher_learning_rate(self):
        docs = make_cluster_corpus(seed=9, docs_per_cluster=4, doc_len=40)
        model = train(docs, Doc2VecConfig(dim=16, epochs=5, alpha=0.05, seed=1), norm=NO_STOPWORDS)
        assert np.isfinite(model.doc_vectors).all()
        assert np.isfinite(model.word_in).all()

    def test_clusters_separate(self, cluster_model):
        docs, model = cluster_model
        vecs = model.doc_vectors.astype(np.float64)
        unit = vecs / np.linalg.norm(vecs, axis=1, keepdims=True)
        sims = unit @ unit.T
        n = len(docs) // 2
        intra = (sims[:n, :n].sum() - n + sims[n:, n:].sum() - n) / (2 * n * (n - 1))
        inter = sims[:n, n:].mean()
        assert intra > inter

    def test_reproducible_bytes(self, tmp_path):
        docs = make_cluster_corpus(seed=2, docs_per_cluster=4, doc_len=40)
        cfg = Doc2VecConfig(dim=16, epochs=4, seed=5)
        train(docs, cfg, norm=NO_STOPWORDS).save(tmp_path / "a.bin")
        train(docs, cfg, norm=NO_STOPWORDS).save(tmp_path / "b.bin")
        assert (tmp_path / "a.bin").read_bytes() == (tmp_path / "b.bin").read_bytes()

    def test_empty_corpus(self):
        with pytest.raises(DataError):
            train([], CFG, norm=NO_STOPWORDS)

    def test_parallel_mode_trains(self):
        docs = make_cluster_corpus(seed=3, docs_per_cluster=4, doc_len=40)
        model = train(docs, Doc2VecConfig(dim=16, epochs=3, seed=5), norm=NO_STOPWORDS, workers=2)
        assert np.isfinite(model.doc_vectors).all()


class TestInfer:
    def test_infer_ranks_own_vector_high(self, cluster_model):
        docs, model = cluster_model
        vecs = model.doc_vectors.astype(np.float64)
        unit = vecs / np.linalg.norm(vecs, axis=1, keepdims=True)
        cutoff = max(1, int(0.1 * len(docs)))
        for i in (0, 7, 13, 19):
            q = infer_vector(model, docs[i], steps=80)
            sims = unit @ (q / np.linalg.norm(q))
            rank = int((sims > sims[i]).sum())
            assert rank < cutoff, f"doc {i} ranked {rank}"

    def test_empty_document_zero_vector_with_warning(self, cluster_model):
        _, model = cluster_model
        doc = document("oov", "Qqq zzz vvv")
        with pytest.warns(RuntimeWarning, match="no in-vocabulary tokens"):
            vec = infer_vector(model, doc)
        assert np.all(vec == 0.0)

    def test_output_dim(self, cluster_model):
        docs, model = cluster_model
        assert infer_vector(model, docs[0], steps=5).shape == (CFG.dim,)

    def test_deterministic(self, cluster_model):
        docs, model = cluster_model
        a = infer_vector(model, docs[3], steps=20)
        b = infer_vector(model, docs[3], steps=20)
        assert np.array_equal(a, b)


class TestMostSimilar:
    def test_stored_vector_ranks_first(self, cluster_model):
        docs, model = cluster_model
        top = most_similar(model, model.doc_vectors[0], k=3)
        assert top[0][0] == docs[0].id
        assert top[0][1] == pytest.approx(1.0)

    def test_k_results(self, cluster_model):
        _, model = cluster_model
        assert len(most_similar(model, model.doc_vectors[0], k=3)) == 3

    def test_k_larger_than_corpus_returns_all(self, cluster_model):
        docs, model = cluster_model
        assert len(most_similar(model, model.doc_vectors[0], k=10_000)) == len(docs)

    def test_scores_non_increasing(self, cluster_model):
        _, model = cluster_model
        scores = [s for _, s in most_similar(model, model.doc_vectors[2], k=20)]
        assert all(scores[i] >= scores[i + 1] for i in range(len(scores) - 1))

    def test_scale_invariance(self, cluster_model):
        _, model = cluster_model
        base = most_similar(model, model.doc_vectors[1], k=5)
        scaled = most_similar(model, 17.0 * model.doc_vectors[1], k=5)
        assert [d for d, _ in base] == [d for d, _ in scaled]

    def test_k_must_be_positive(self, cluster_model):
        _, model = cluster_model
        with pytest.raises(ValueError):
            most_similar(model, model.doc_vectors[0], k=0)


class TestPersistence:
    def test_roundtrip(self, tmp_path, cluster_model):
        docs, model = cluster_model
        path = tmp_path / "model.bin"
        model.save(path)
        assert path.read_bytes()[:4] == b"D2V1"
        loaded = Doc2VecModel.load(path)
        assert loaded.config == model.config
        assert loaded.vocab.words == model.vocab.words
        assert np.array_equal(loaded.word_in, model.word_in)
        assert np.array_equal(loaded.word_out, model.word_out)
        assert np.array_equal(loaded.doc_vectors, model.doc_vectors)
        assert loaded.doc_ids == model.doc_ids
        # loaded model infers identically
        a = infer_vector(model, docs[0], steps=10)
        b = infer_vector(loaded, docs[0], steps=10)
        assert np.array_equal(a, b)

    def test_float32_little_endian_payload(self, tmp_path, cluster_model):
        _, model = cluster_model
        path = tmp_path / "model.bin"
        model.save(path)
        loaded = Doc2VecModel.load(path)
        assert loaded.word_in.dtype == np.float32
        assert loaded.doc_vectors.dtype == np.float32
