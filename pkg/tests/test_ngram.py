import random

import numpy as np
import pytest

from wordpredict.corpus import BOS, EOS, UNK, build_vocabulary, tokenize
from wordpredict.ngram import (
    ArpaError,
    SmoothingError,
    count_ngrams,
    estimate_model,
    export_arpa,
    import_arpa,
    prune_counts,
    tokens_to_sentences,
)

from oracles import mkn_oracle, wb_oracle


def build(text, order, smoothing="mkn", max_size=100):
    tokens = tokenize(text)
    vocab = build_vocabulary(tokens, max_size=max_size)
    counts = count_ngrams(tokens, order, vocab)
    return counts, estimate_model(counts, smoothing)


def ids(counts, *words):
    return tuple(counts.vocab.id_of(w) for w in words)


class TestCounting:
    def test_bigrams_with_boundaries(self):
        counts, _ = None, None
        tokens = tokenize("a b")
        vocab = build_vocabulary(tokens, max_size=10)
        counts = count_ngrams(tokens, 2, vocab)
        table = counts.table(2)
        assert table == {
            ids(counts, BOS, "a"): 1,
            ids(counts, "a", "b"): 1,
            ids(counts, "b", EOS): 1,
        }

    def test_empty_corpus(self):
        vocab = build_vocabulary([], max_size=10)
        counts = count_ngrams([], 2, vocab)
        assert counts.is_empty()

    def test_unigrams_include_boundaries(self):
        tokens = tokenize("a a a")
        vocab = build_vocabulary(tokens, max_size=10)
        counts = count_ngrams(tokens, 1, vocab)
        table = counts.table(1)
        assert table[ids(counts, "a")] == 3
        assert table[ids(counts, BOS)] == 1
        assert table[ids(counts, EOS)] == 1

    def test_marginal_consistency(self):
        tokens = tokenize("the cat sat. the cat ran. a cat sat")
        vocab = build_vocabulary(tokens, max_size=10)
        counts = count_ngrams(tokens, 3, vocab)
        eos = counts.vocab.id_of(EOS)
        for k in (2, 3):
            lower = counts.table(k - 1)
            sums = {}
            for gram, c in counts.table(k).items():
                sums[gram[:-1]] = sums.get(gram[:-1], 0) + c
            for prefix, total in sums.items():
                if eos in prefix:
                    continue
                if k - 1 == 1 and prefix[0] == counts.vocab.id_of(BOS):
                    continue  # <s> unigrams count sentences, not continuations
                assert lower[prefix] == total


class TestWittenBell:
    def test_hand_computed_bigram(self):
        counts, model = build("a b a b", 2, smoothing="wb")
        # unigram stream a b a b </s>: N=5, T=3, V={a,b,</s>,<unk>}=4
        p_uni_b = (2 + 3 * 0.25) / (5 + 3)
        expected = (2 + 1 * p_uni_b) / (2 + 1)
        assert model.probability("b", ["a"]) == pytest.approx(expected, abs=1e-10)

    def test_normalization_100_random_histories(self, tiny_model):
        rng = np.random.default_rng(1)
        size = len(tiny_model.vocab)
        for _ in range(100):
            hist = list(rng.integers(0, size, size=rng.integers(0, 4)))
            total = tiny_model.distribution(hist).sum()
            assert abs(total - 1.0) < 1e-4

    def test_single_word_corpus_sums_to_one(self):
        counts, model = build("a", 1, smoothing="wb")
        total = model.probability("a") + model.probability(UNK) + model.probability(EOS)
        assert total == pytest.approx(1.0, abs=1e-10)

    def test_matches_oracle_on_random_corpora(self):
        rnd = random.Random(7)
        for trial in range(8):
            n_tokens = rnd.randint(5, 50)
            text = " ".join(rnd.choice("abcde") for _ in range(n_tokens))
            order = rnd.choice([2, 3, 4])
            tokens = tokenize(text)
            vocab = build_vocabulary(tokens, max_size=100)
            counts = count_ngrams(tokens, order, vocab)
            model = estimate_model(counts, "witten-bell")
            ev = counts.vocab
            bos, eos = ev.id_of(BOS), ev.id_of(EOS)
            sentences = tokens_to_sentences(tokens, ev)
            oracle = wb_oracle(sentences, order, bos, eos, len(ev) - 1)
            for _ in range(40):
                w = rnd.randrange(len(ev))
                if w == bos:
                    continue
                hist = tuple(
                    rnd.randrange(len(ev)) for _ in range(rnd.randint(0, order - 1))
                )
                got = model.probability(w, hist)
                want = oracle(w, hist)
                assert got == pytest.approx(want, abs=1e-10), (trial, w, hist)


class TestModifiedKneserNey:
    def test_matches_oracle_on_random_corpora(self):
        rnd = random.Random(13)
        checked = 0
        for trial in range(30):
            n_tokens = rnd.randint(12, 50)
            text = " ".join(rnd.choice("abc") for _ in range(n_tokens))
            order = rnd.choice([2, 3])
            tokens = tokenize(text)
            vocab = build_vocabulary(tokens, max_size=100)
            counts = count_ngrams(tokens, order, vocab)
            ev = counts.vocab
            bos, eos = ev.id_of(BOS), ev.id_of(EOS)
            sentences = tokens_to_sentences(tokens, ev)
            oracle = mkn_oracle(sentences, order, bos, eos, len(ev) - 1)
            model = estimate_model(counts, "mkn")
            if oracle is None:
                assert model.metadata["smoothing"] == "witten-bell"
                assert "warning" in model.metadata
                continue
            assert model.metadata["smoothing"] == "modified-kneser-ney"
            checked += 1
            for _ in range(40):
                w = rnd.randrange(len(ev))
                if w == bos:
                    continue
                hist = tuple(
                    rnd.randrange(len(ev)) for _ in range(rnd.randint(0, order - 1))
                )
                got = model.probability(w, hist)
                want = oracle(w, hist)
                assert got == pytest.approx(want, abs=1e-10), (trial, w, hist)
        assert checked >= 3  # enough corpora actually exercised MKN

    def test_all_singleton_counts_fall_back_to_witten_bell(self):
        counts, model = build("a b c d e", 2)
        assert model.metadata["smoothing"] == "witten-bell"
        assert "witten-bell" in model.metadata["warning"].lower() or model.metadata["warning"]

    def test_normalization(self):
        counts, model = build(
            "the cat sat on the mat. the cat ran. the dog sat on the cat. "
            "a dog ran after the cat. the mat sat. cats and dogs ran",
            3,
        )
        rng = np.random.default_rng(3)
        size = len(model.vocab)
        for _ in range(50):
            hist = list(rng.integers(0, size, size=rng.integers(0, 3)))
            assert abs(model.distribution(hist).sum() - 1.0) < 1e-4

    def test_stored_grams_query_to_stored_value(self, tiny_model):
        for gram, lp in list(tiny_model.logprobs.items())[:200]:
            if tiny_model.vocab.word_of(gram[-1]) == BOS:
                continue
            got = tiny_model.probability(gram[-1], gram[:-1])
            assert got == pytest.approx(10.0 ** lp, rel=1e-12)

    def test_empty_counts_rejected(self):
        vocab = build_vocabulary([], max_size=5)
        counts = count_ngrams([], 2, vocab)
        with pytest.raises(SmoothingError):
            estimate_model(counts)


class TestProbabilityQueries:
    def test_history_truncated_to_order(self, tiny_model):
        long_hist = ["the", "boat", "sail", "wind", "harbor"]
        short = long_hist[-(tiny_model.order - 1):]
        assert tiny_model.probability("the", long_hist) == tiny_model.probability(
            "the", short
        )

    def test_backoff_hand_case(self):
        # "a b. b c" bigram WB model: query unseen bigram (c, a)
        counts, model = build("a b. b c", 2, smoothing="wb")
        ev = counts.vocab
        bow = 10.0 ** model.backoffs[(ev.id_of("c"),)]
        expected = bow * model.probability("a")
        assert model.probability("a", ["c"]) == pytest.approx(expected, rel=1e-12)

    def test_result_in_unit_interval(self, tiny_model):
        rng = np.random.default_rng(11)
        size = len(tiny_model.vocab)
        bos = tiny_model.vocab.id_of(BOS)
        for _ in range(300):
            w = int(rng.integers(0, size))
            if w == bos:
                continue
            hist = list(rng.integers(0, size, size=rng.integers(0, 4)))
            p = tiny_model.probability(w, hist)
            assert 0.0 < p <= 1.0


GOLDEN_ARPA = """\\data\\
ngram 1=3

\\1-grams:
-0.522879\ta
-0.698970\tb
-0.301030\t</s>

\\end\\
"""


class TestArpa:
    def test_golden_unigram_import(self, tmp_path):
        path = tmp_path / "golden.arpa"
        path.write_text(GOLDEN_ARPA, encoding="utf-8")
        model = import_arpa(path)
        assert model.order == 1
        assert model.probability("a") == 10.0 ** -0.522879
        assert model.probability("b") == 10.0 ** -0.698970
        assert model.probability(EOS) == 10.0 ** -0.301030

    def test_round_trip_identity(self, tiny_model, tmp_path):
        first = tmp_path / "first.arpa"
        export_arpa(tiny_model, first)
        imported = import_arpa(first)
        second = tmp_path / "second.arpa"
        export_arpa(imported, second)
        assert first.read_text() == second.read_text()
        again = import_arpa(second)

        def by_surface(model):
            lp = {
                tuple(model.vocab.word_of(i) for i in g): v
                for g, v in model.logprobs.items()
            }
            bw = {
                tuple(model.vocab.word_of(i) for i in g): v
                for g, v in model.backoffs.items()
            }
            return lp, bw

        assert by_surface(imported) == by_surface(again)

    def test_imported_probs_reproduce_file_entries(self, tiny_model, tmp_path):
        path = tmp_path / "m.arpa"
        export_arpa(tiny_model, path)
        imported = import_arpa(path)
        for gram, lp in imported.logprobs.items():
            hist = gram[:-1]
            word = gram[-1]
            if imported.vocab.word_of(word) == BOS:
                continue
            assert imported.probability(word, hist) == 10.0 ** lp

    def test_truncated_file_names_missing_end(self, tmp_path):
        path = tmp_path / "t.arpa"
        path.write_text(GOLDEN_ARPA.replace("\\end\\\n", ""), encoding="utf-8")
        with pytest.raises(ArpaError, match=r"\\end\\"):
            import_arpa(path)

    def test_count_mismatch_reports_line(self, tmp_path):
        bad = GOLDEN_ARPA.replace("ngram 1=3", "ngram 1=4")
        path = tmp_path / "bad.arpa"
        path.write_text(bad, encoding="utf-8")
        with pytest.raises(ArpaError) as err:
            import_arpa(path)
        assert err.value.lineno is not None

    def test_missing_header(self, tmp_path):
        path = tmp_path / "x.arpa"
        path.write_text("not arpa\n", encoding="utf-8")
        with pytest.raises(ArpaError, match="data"):
            import_arpa(path)


class TestPruneCounts:
    def test_threshold_keeps_frequent_bigrams(self):
        tokens = tokenize("a b a b")
        vocab = build_vocabulary(tokens, max_size=10)
        counts = count_ngrams(tokens, 2, vocab)
        pruned = prune_counts(counts, 2)
        assert pruned.table(2) == {ids(counts, "a", "b"): 2}

    def test_min_count_one_is_identity(self):
        tokens = tokenize("the cat sat. the cat ran")
        vocab = build_vocabulary(tokens, max_size=10)
        counts = count_ngrams(tokens, 3, vocab)
        pruned = prune_counts(counts, 1)
        assert pruned.tables == counts.tables

    def test_huge_threshold_empties_higher_orders(self):
        tokens = tokenize("a b a b")
        vocab = build_vocabulary(tokens, max_size=10)
        counts = count_ngrams(tokens, 3, vocab)
        pruned = prune_counts(counts, 99)
        assert pruned.table(2) == {}
        assert pruned.table(3) == {}

    def test_estimation_still_works_after_pruning(self):
        tokens = tokenize("the cat sat. the cat ran. the cat sat again")
        vocab = build_vocabulary(tokens, max_size=10)
        counts = prune_counts(count_ngrams(tokens, 3, vocab), 2)
        model = estimate_model(counts, "wb")
        assert abs(model.distribution(["the"]).sum() - 1.0) < 1e-4
