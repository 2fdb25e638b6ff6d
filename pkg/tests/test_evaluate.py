import math
import random

import pytest

from wordpredict.combine import CombinerConfig, PredictionPipeline
from wordpredict.corpus import PUNCTUATION, WORD, tokenize
from wordpredict.evaluate import (
    evaluate_all,
    pearson,
    perplexity,
    render_table,
    simulate_ksr,
)
from wordpredict.ngram import import_arpa

from oracles import (
    AlwaysShowPredictor,
    NeverShowPredictor,
    ScriptedPredictor,
    ShowAfterKPredictor,
    reference_ksr,
)


class TestSimulateKsrHandTraces:
    def test_always_shown_the_cat(self):
        pred = AlwaysShowPredictor(["the", "cat"])
        report = simulate_ksr(pred, "the cat", n=5)
        assert (report.kp, report.ka) == (2, 7)
        assert report.ksr == pytest.approx((1 - 2 / 7) * 100, abs=1e-9)

    def test_never_shown_gives_zero(self):
        report = simulate_ksr(NeverShowPredictor(), "the cat", n=5)
        assert report.kp == report.ka == 7
        assert report.ksr == 0.0

    def test_target_after_first_letter(self):
        pred = ShowAfterKPredictor(["cat"], k=1)
        report = simulate_ksr(pred, "cat", n=5)
        # one letter plus one selection against a 3-character word
        assert (report.kp, report.ka) == (2, 3)

    def test_mid_text_word_counts_following_space(self):
        pred = ShowAfterKPredictor(["cat", "ran"], k=1)
        report = simulate_ksr(pred, "cat ran", n=5)
        assert (report.kp, report.ka) == (4, 7)

    def test_empty_text_rejected(self):
        with pytest.raises(ValueError):
            simulate_ksr(NeverShowPredictor(), "... !")
        with pytest.raises(ValueError):
            simulate_ksr(NeverShowPredictor(), "")

    def test_punctuation_costs_one_each_side(self):
        report = simulate_ksr(NeverShowPredictor(), "oui. bon", n=5)
        # normalized text "oui . bon" = 9 characters, all typed
        assert (report.kp, report.ka) == (9, 9)


class TestKsrOracleEquivalence:
    def test_matches_reference_on_randomized_texts(self):
        rnd = random.Random(42)
        vocab = [
            "car", "cat", "cab", "dog", "door", "sail", "sea", "wind",
            "window", "deck", "tide", "note", "night",
        ]
        for trial in range(25):
            words = [rnd.choice(vocab) for _ in range(rnd.randint(3, 14))]
            # sprinkle punctuation between some words
            text_parts = []
            for w in words:
                text_parts.append(w)
                if rnd.random() < 0.2:
                    text_parts.append(rnd.choice([".", ",", "!"]))
            text = " ".join(text_parts)
            n = rnd.choice([1, 2, 3, 5])
            seed = rnd.randrange(10**6)

            session_pred = ScriptedPredictor(vocab, seed=seed, list_size=n)
            report = simulate_ksr(session_pred, text, n=n)

            oracle_pred = ScriptedPredictor(vocab, seed=seed, list_size=n)
            pieces = [
                (t.surface, t.kind)
                for t in tokenize(text)
                if t.kind in (WORD, PUNCTUATION)
            ]
            kp, ka = reference_ksr(pieces, oracle_pred.list_for, n)
            assert (report.kp, report.ka) == (kp, ka), (trial, text, n, seed)
            assert report.ksr == pytest.approx((1 - kp / ka) * 100, abs=1e-12)

    def test_doubling_list_size_never_hurts(self):
        rnd = random.Random(7)
        vocab = ["car", "cat", "cab", "care", "carp", "dog", "dot", "door", "sail"]
        for trial in range(20):
            words = [rnd.choice(vocab) for _ in range(rnd.randint(3, 10))]
            text = " ".join(words)
            seed = rnd.randrange(10**6)
            for n in (1, 2, 4):
                small = simulate_ksr(ScriptedPredictor(vocab, seed, n), text, n=n)
                big = simulate_ksr(ScriptedPredictor(vocab, seed, 2 * n), text, n=2 * n)
                assert big.kp <= small.kp, (trial, text, n)

    def test_ksr_bounds_and_selection_link(self):
        rnd = random.Random(3)
        vocab = ["alpha", "beta", "gamma", "delta"]
        for trial in range(20):
            text = " ".join(rnd.choice(vocab) for _ in range(rnd.randint(1, 8)))
            pred = ScriptedPredictor(vocab, seed=trial, list_size=3)
            report = simulate_ksr(pred, text, n=3)
            assert 0.0 <= report.ksr < 100.0
            if report.ksr > 0.0:
                assert report.kp < report.ka

    def test_no_selection_implies_zero_ksr(self):
        report = simulate_ksr(NeverShowPredictor(), "alpha beta. gamma", n=5)
        assert report.ksr == 0.0

    def test_per_word_trace_sums_to_kp(self):
        pred = ScriptedPredictor(["car", "cat", "dog"], seed=1, list_size=2)
        report = simulate_ksr(pred, "car dog cat", n=2, per_word=True)
        # separators after typed-out words are charged globally, so the
        # trace can only account for at most kp keystrokes
        assert sum(report.per_word) <= report.kp


UNIFORM_V = 8


@pytest.fixture
def uniform_pipeline(tmp_path):
    words = [f"w{i}" for i in range(UNIFORM_V)]
    lp = math.log10(1.0 / UNIFORM_V)
    lines = ["\\data\\", f"ngram 1={UNIFORM_V + 1}", "", "\\1-grams:"]
    lines += [f"{lp:.6f}\t{w}" for w in words]
    lines += [f"{lp:.6f}\t</s>", "", "\\end\\", ""]
    path = tmp_path / "uniform.arpa"
    path.write_text("\n".join(lines), encoding="utf-8")
    model = import_arpa(path)
    return PredictionPipeline(model, None, CombinerConfig(method="baseline", order=1))


class TestPerplexity:
    def test_uniform_model_equals_vocab_size(self, uniform_pipeline):
        report = perplexity(uniform_pipeline, "w0 w3 w5 w1 w0 w7")
        assert report.perplexity == pytest.approx(UNIFORM_V, abs=1e-6)
        assert report.oov_count == 0

    def test_hand_geometric_mean_of_word_probabilities(self, tiny_model):
        pipe = PredictionPipeline(
            tiny_model, None, CombinerConfig(method="baseline", order=tiny_model.order)
        )
        text = "the boat sail"
        toks = [t.surface for t in tokenize(text)]
        want_logs = []
        prev: list[str] = []
        for w in toks:
            hist = prev[-(tiny_model.order - 1):]
            if len(prev) < tiny_model.order - 1:
                hist = ["<s>"] + hist
            want_logs.append(math.log10(tiny_model.probability(w, hist)))
            prev.append(w)
        want = 10.0 ** (-sum(want_logs) / len(want_logs))
        got = perplexity(pipe, text)
        assert got.perplexity == pytest.approx(want, rel=1e-12)

    def test_identity_limit_matches_bare_model(self, stack_models):
        model, space = stack_models
        base = PredictionPipeline(
            model, None, CombinerConfig(method="baseline", order=model.order)
        )
        li_identity = PredictionPipeline(
            model, space, CombinerConfig(method="li", lambda_lsa=0.0, order=model.order)
        )
        text = "the boat sail wind. the harbor"
        assert perplexity(li_identity, text).perplexity == perplexity(base, text).perplexity

    def test_oov_counted(self, uniform_pipeline):
        report = perplexity(uniform_pipeline, "w0 xyzzy w1")
        assert report.oov_count == 1

    def test_finite_for_all_presets(self, stack_models):
        from wordpredict.combine import load_presets

        model, space = stack_models
        for name, cfg in load_presets().items():
            cfg.order = model.order
            pipe = PredictionPipeline(model, space, cfg)
            report = perplexity(pipe, "the boat sail wind harbor")
            assert math.isfinite(report.perplexity) and report.perplexity >= 1.0


@pytest.fixture(scope="module")
def stack_models():
    from wordpredict.service import build_demo_models

    return build_demo_models()


class TestPearson:
    def test_identical_is_one(self):
        assert pearson([1, 2, 3], [1, 2, 3]) == pytest.approx(1.0, abs=1e-12)

    def test_negated_is_minus_one(self):
        assert pearson([1, 2, 3], [-1, -2, -3]) == pytest.approx(-1.0, abs=1e-12)

    def test_fixed_five_point_hand_value(self):
        xs = [1.0, 2.0, 3.0, 4.0, 5.0]
        ys = [2.0, 1.0, 4.0, 3.0, 7.0]
        mx, my = 3.0, 3.4
        num = sum((x - mx) * (y - my) for x, y in zip(xs, ys))
        den = math.sqrt(sum((x - mx) ** 2 for x in xs)) * math.sqrt(
            sum((y - my) ** 2 for y in ys)
        )
        assert pearson(xs, ys) == pytest.approx(num / den, abs=1e-9)

    def test_zero_variance_rejected(self):
        with pytest.raises(ValueError):
            pearson([1, 1, 1], [1, 2, 3])

    def test_size_mismatch_rejected(self):
        with pytest.raises(ValueError):
            pearson([1, 2], [1, 2, 3])


class TestEvaluateAll:
    def test_all_presets_table_and_correlation(self, stack_models):
        from wordpredict.datasets import synthetic_corpus

        model, space = stack_models
        texts = {
            "t1": synthetic_corpus(1, seed=100),
            "t2": synthetic_corpus(1, seed=101),
        }
        results = evaluate_all(model, space, texts)
        assert len(results["rows"]) == 16
        assert len(results["summary"]) == 8
        assert results["pearson_ksr_perplexity"] is not None
        table = render_table(results)
        assert "baseline" in table and "pearson" in table
        for row in results["rows"]:
            assert 0.0 <= row["ksr"] < 100.0
            assert math.isfinite(row["perplexity"])
