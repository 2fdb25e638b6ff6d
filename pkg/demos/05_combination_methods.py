# The integration methods side by side on one context.
#
# baseline: n-gram only.  cache / semantic-cache: additive recency boost
# with a Gaussian decay over cache positions.  rerank: bonus for the
# model's top candidates, scaled by cosine times density.  li / gi:
# fixed-weight linear or geometric interpolation.  cwli / cwgi: per-word
# weights from the density confidence.

import numpy as np

from wordpredict import CombinerConfig, PredictionPipeline, decay_factor
from wordpredict.service import build_demo_models

model, space = build_demo_models()
context = "the crew pulled the rope and the sail".split()

print("decay curve (peak 20, length 300):")
for p in (1, 5, 10, 20, 40, 120, 300):
    print(f"  position {p:3d}: {decay_factor(p, 20, 300):.3f}")

print(f"\ntop-5 after {' '.join(context)!r}:")
for method in ("baseline", "cache", "semantic-cache", "rerank", "li", "gi", "cwli", "cwgi"):
    cfg = CombinerConfig(method=method, order=model.order)
    pipe = PredictionPipeline(model, space, cfg)
    top = pipe.predict_top_n(context, prefix="", n=5)
    pretty = ", ".join(f"{w}={p:.4f}" for w, p in top)
    print(f"  {method:15s} {pretty}")

# prefix filtering and the no-reappear rule drive the typing loop
pipe = PredictionPipeline(model, space, CombinerConfig(method="cwgi", order=model.order))
first = pipe.predict_top_n(context, prefix="s", n=5)
again = pipe.predict_top_n(context, prefix="st", n=5, excluded=set(first.words))
print("\nprefix 's' :", first.words)
print("prefix 'st', earlier offers excluded:", again.words)
