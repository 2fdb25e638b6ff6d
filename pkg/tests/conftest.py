import numpy as np
import pytest

from wordpredict.corpus import build_vocabulary, tokenize
from wordpredict.datasets import synthetic_corpus
from wordpredict.ngram import train_ngram_model
from wordpredict.semantic import SemanticSpace, compute_density_table


@pytest.fixture(scope="session")
def tiny_corpus() -> str:
    return synthetic_corpus(n_paragraphs=8, seed=3)


@pytest.fixture(scope="session")
def tiny_model(tiny_corpus):
    tokens = tokenize(tiny_corpus)
    vocab = build_vocabulary(tokens, max_size=500)
    return train_ngram_model(tokens, vocab, order=3)


def make_space(vectors: np.ndarray, words=None, density_m: int = 3) -> SemanticSpace:
    """Hand space from raw vectors (rows are normalized here)."""
    vectors = np.asarray(vectors, dtype=np.float64)
    norms = np.linalg.norm(vectors, axis=1, keepdims=True)
    unit = vectors / norms
    if words is None:
        words = [f"w{i}" for i in range(len(unit))]
    density = compute_density_table(unit, density_m)
    return SemanticSpace(list(words), unit, density, density_m)


def random_space(rng: np.random.Generator, n_words: int, dims: int, words=None) -> SemanticSpace:
    return make_space(rng.standard_normal((n_words, dims)), words=words)


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
