# From typed history to a semantic probability distribution.
#
# The history is the sum of its in-space unit vectors; cosines against
# it are shifted by the minimum and sharpened with a contrast exponent,
# then normalized.  Function words never appear here: they are not in
# the space, which is exactly why the n-gram model stays in the loop.

import numpy as np

from wordpredict import context_vector, lsa_distribution
from wordpredict.service import build_demo_models

_, space = build_demo_models()

history = "the storm pushed the boat toward the harbor".split()
ctx = context_vector(space, history)
print(f"context vector built from {ctx.word_count} in-space words")

for contrast in (1.0, 3.0, 5.0, 8.0):
    dist = lsa_distribution(space, ctx, contrast=contrast)
    top = np.argsort(-dist.probs)[:6]
    pretty = ", ".join(f"{space.words[i]}={dist.probs[i]:.4f}" for i in top)
    print(f"contrast {contrast:3.0f}: {pretty}")

# an empty history carries no signal: uniform fallback, flagged
empty = lsa_distribution(space, context_vector(space, []), contrast=5.0)
print("degenerate fallback:", empty.degenerate, "uniform p:", empty.probs[0])
