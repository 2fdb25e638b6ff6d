# Keystroke-saving-rate simulation and perplexity.
#
# The simulator types each word of a test text: one keystroke per
# character, one keystroke to select a prediction (the following space
# is then free), previously shown words never reappear for the same
# word.  ksr = (1 - kp/ka) * 100.

from wordpredict import CombinerConfig, PredictionPipeline, load_presets
from wordpredict.evaluate import evaluate_all, render_table, simulate_ksr
from wordpredict.datasets import synthetic_corpus
from wordpredict.service import build_demo_models

model, space = build_demo_models()
test_text = synthetic_corpus(3, seed=123)

pipe = PredictionPipeline(model, space, CombinerConfig(method="cwgi", order=model.order))
report = simulate_ksr(pipe, test_text, per_word=True)
print(f"kp={report.kp} ka={report.ka} ksr={report.ksr:.2f}%")
print("first per-word keystroke counts:", report.per_word[:12])

# all eight shipped presets over two held-out samples, plus the
# correlation between ksr and perplexity across the runs
texts = {
    "sample-1": synthetic_corpus(2, seed=301),
    "sample-2": synthetic_corpus(2, seed=302),
}
presets = load_presets()
for cfg in presets.values():
    cfg.order = model.order
results = evaluate_all(model, space, texts, presets)
print()
print(render_table(results))
