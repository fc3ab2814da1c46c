"""Backend equivalence: the numba kernels and the numpy fallback must agree."""

import subprocess
import sys

import numpy as np
import pytest

from metasumm.kernels import _numbaimpl, _purepy

BACKENDS = [_purepy, _numbaimpl]


def _random_pair(rng, max_len=10, vocab=5):
    a = rng.integers(0, vocab, size=rng.integers(0, max_len)).astype(np.int32)
    b = rng.integers(0, vocab, size=rng.integers(0, max_len)).astype(np.int32)
    return a, b


def test_lcs_backends_agree():
    rng = np.random.default_rng(0)
    for _ in range(400):
        a, b = _random_pair(rng)
        assert _purepy.lcs_len(a, b) == _numbaimpl.lcs_len(a, b)
        assert np.array_equal(_purepy.lcs_ref_mask(a, b), _numbaimpl.lcs_ref_mask(a, b))


def test_best_split_backends_agree():
    rng = np.random.default_rng(1)
    for _ in range(60):
        n = int(rng.integers(2, 40))
        d = int(rng.integers(1, 5))
        x = np.round(rng.normal(size=(n, d)), 2)  # rounded: provoke ties
        y = np.round(rng.normal(size=(n, 4)), 2)
        f1, t1, g1 = _purepy.best_split(x, y)
        f2, t2, g2 = _numbaimpl.best_split(x, y)
        assert f1 == f2
        assert t1 == pytest.approx(t2, abs=1e-12)
        assert g1 == pytest.approx(g2, rel=1e-9, abs=1e-9)


@pytest.mark.parametrize("train_words", [True, False])
def test_d2v_backends_agree(train_words):
    """Both backends must consume the identical LCG stream and agree numerically."""
    rng = np.random.default_rng(2)
    words = rng.integers(0, 20, size=60).astype(np.int32)
    offsets = np.array([0, 30, 60], dtype=np.int64)
    doc_rows = np.array([0, 1], dtype=np.int32)
    order = np.array([0, 1, 0], dtype=np.int32)
    table = rng.integers(0, 20, size=1000).astype(np.int32)

    results = []
    for impl in BACKENDS:
        r = np.random.default_rng(7)
        syn0 = (r.random((20, 8), dtype=np.float32) - 0.5) / 8
        syn1 = (r.random((20, 8), dtype=np.float32) - 0.5) / 8
        dvecs = (r.random((2, 8), dtype=np.float32) - 0.5) / 8
        loss, n_done, state = impl.d2v_train_block(
            words, offsets, doc_rows, order, syn0, syn1, dvecs, table,
            3, 4, 0.025, 1e-4, 0, 90, np.uint64(12345), train_words, True,
        )
        results.append((loss, n_done, int(state), syn0, syn1, dvecs))

    (l1, n1, s1, a0, a1, ad), (l2, n2, s2, b0, b1, bd) = results
    assert n1 == n2 == 90
    assert s1 == s2, "RNG streams diverged between backends"
    assert l1 == pytest.approx(l2, rel=1e-4)
    assert np.allclose(a0, b0, atol=1e-6)
    assert np.allclose(a1, b1, atol=1e-6)
    assert np.allclose(ad, bd, atol=1e-6)


def test_env_flag_selects_fallback():
    code = (
        "import os; os.environ['METASUMM_NO_NUMBA'] = '1'; "
        "import metasumm.kernels as k; "
        "print(k.BACKEND, k.USING_NUMBA, k.FORCED_FALLBACK)"
    )
    out = subprocess.run(
        [sys.executable, "-c", code], capture_output=True, text=True, check=True
    ).stdout.split()
    assert out == ["numpy", "False", "True"]


def test_default_backend_is_numba():
    code = (
        "import os; os.environ.pop('METASUMM_NO_NUMBA', None); "
        "import metasumm.kernels as k; print(k.BACKEND)"
    )
    out = subprocess.run(
        [sys.executable, "-c", code], capture_output=True, text=True, check=True
    ).stdout.strip()
    assert out == "numba"
