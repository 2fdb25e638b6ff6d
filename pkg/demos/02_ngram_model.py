# Training a backoff n-gram model and querying it.
#
# Counts are smoothed with modified Kneser-Ney (Witten-Bell as the
# fallback for tiny corpora), stored in backoff form, and round-trip
# through the standard ARPA text format.

import tempfile
from pathlib import Path

from wordpredict import (
    build_vocabulary,
    count_ngrams,
    estimate_model,
    export_arpa,
    import_arpa,
    tokenize,
)
from wordpredict.datasets import synthetic_corpus

corpus = synthetic_corpus(40, seed=5)
tokens = tokenize(corpus)
vocab = build_vocabulary(tokens, max_size=5000)

counts = count_ngrams(tokens, order=3, vocab=vocab)
for k in (1, 2, 3):
    print(f"distinct {k}-grams: {len(counts.table(k))}")

model = estimate_model(counts, smoothing="mkn")
print("smoothing used:", model.metadata["smoothing"])

# the distribution over the whole vocabulary sums to one for any history
dist = model.distribution(["the"])
print("sum of P(w | 'the'):", dist.sum())
top = sorted(zip(dist, model.vocab.words), reverse=True)[:5]
for p, w in top:
    print(f"  P({w!r} | 'the') = {p:.4f}")

# unseen histories back off to shorter ones
print("P('wind' | unseen history):", model.probability("wind", ["zzz", "qqq"]))

# ARPA round trip is exact at six decimal places
with tempfile.TemporaryDirectory() as d:
    path = Path(d) / "model.arpa"
    export_arpa(model, path)
    again = import_arpa(path)
    print("round-trip entries:", len(again.logprobs) == len(model.logprobs))
    print(path.read_text().splitlines()[0:4])
