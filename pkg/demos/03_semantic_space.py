# Building the semantic space: windowed co-occurrence counts, truncated
# SVD, unit term vectors, nearest neighbors, and the density table.

import numpy as np

from wordpredict import build_cooccurrence, build_semantic_space, build_vocabulary, tokenize
from wordpredict.datasets import synthetic_corpus, _FUNCTION_WORDS

corpus = synthetic_corpus(60, seed=11)
tokens = tokenize(corpus)
stopwords = set(_FUNCTION_WORDS)

content = build_vocabulary(
    (t for t in tokens if t.is_word() and t.surface not in stopwords),
    max_size=5000,
)
matrix = build_cooccurrence(tokens, content, column_count=100, window_half_width=10)
print("co-occurrence matrix:", matrix.counts.shape, "nnz:", matrix.counts.nnz)

space = build_semantic_space(matrix, k=24, density_m=20)
print("terms:", len(space), "dims:", space.dims)
print("unit norms:", np.allclose(np.linalg.norm(space.vectors, axis=1), 1.0))

# words from the same topic end up close together
for probe in ("boat", "violin", "oven"):
    if probe not in space:
        continue
    neighbors = space.nearest_neighbors(probe, 5, min_cosine=0.2)
    pretty = ", ".join(f"{w} ({c:.2f})" for w, c in neighbors)
    print(f"{probe:8s} -> {pretty}")

# density: mean cosine of the nearest neighbors, a confidence signal
dens = sorted(zip(space.density, space.words), reverse=True)
print("densest terms:", [(w, round(float(d), 3)) for d, w in dens[:5]])
print("sparsest terms:", [(w, round(float(d), 3)) for d, w in dens[-5:]])
