"""Backoff n-gram language model.

Counting, modified Kneser-Ney / Witten-Bell smoothing, backoff queries,
count pruning, and ARPA import/export.  Probabilities are stored as
log10 (the ARPA convention); the query API returns linear values.

Sentences are padded with a single ``<s>`` / ``</s>`` pair; ``<s>`` is
context-only and never receives probability mass.  Both smoothers
produce interpolated distributions that are converted to backoff form,
so for every stored history the full distribution sums to one.
"""

from __future__ import annotations

import math
import re
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .corpus import BOS, EOS, SENTENCE_BOUNDARY, UNK, WORD, Token, Vocabulary

Gram = tuple[int, ...]

MKN = "modified-kneser-ney"
WITTEN_BELL = "witten-bell"
_SMOOTHING_ALIASES = {
    "mkn": MKN,
    "kneser-ney": MKN,
    MKN: MKN,
    "wb": WITTEN_BELL,
    WITTEN_BELL: WITTEN_BELL,
}


class ArpaError(ValueError):
    """Malformed ARPA file; carries the offending line number."""

    def __init__(self, message: str, lineno: int | None = None):
        self.lineno = lineno
        where = f" (line {lineno})" if lineno is not None else ""
        super().__init__(message + where)


class SmoothingError(ValueError):
    pass


@dataclass
class CountTable:
    """Raw n-gram counts for all orders 1..order, keyed by id tuples."""

    order: int
    vocab: Vocabulary                       # includes <s> and </s>
    tables: list[dict[Gram, int]]           # tables[k-1] holds the k-grams
    total_tokens: int

    def table(self, k: int) -> dict[Gram, int]:
        return self.tables[k - 1]

    def is_empty(self) -> bool:
        return all(not t for t in self.tables)


def tokens_to_sentences(tokens: Iterable[Token], vocab: Vocabulary) -> list[list[int]]:
    """Word ids grouped into sentences; punctuation only splits, never counts."""
    sentences: list[list[int]] = []
    current: list[int] = []
    for tok in tokens:
        if tok.kind == WORD:
            current.append(vocab.id_of(tok.surface))
        elif tok.kind == SENTENCE_BOUNDARY:
            if current:
                sentences.append(current)
            current = []
    if current:
        sentences.append(current)
    return sentences


def count_ngrams(tokens: Iterable[Token], order: int, vocab: Vocabulary) -> CountTable:
    """Count every n-gram of each order <= ``order`` with boundary padding."""
    if order < 1:
        raise ValueError("order must be >= 1")
    ev = vocab.extended([BOS, EOS])
    bos, eos = ev.id_of(BOS), ev.id_of(EOS)
    tables: list[dict[Gram, int]] = [defaultdict(int) for _ in range(order)]
    total = 0
    for sent in tokens_to_sentences(tokens, ev):
        seq = [bos] + sent + [eos]
        total += len(sent)
        for k in range(1, order + 1):
            tab = tables[k - 1]
            for i in range(len(seq) - k + 1):
                tab[tuple(seq[i : i + k])] += 1
    return CountTable(order, ev, [dict(t) for t in tables], total)


def prune_counts(counts: CountTable, min_count: int | dict[int, int]) -> CountTable:
    """Drop n-grams below per-order thresholds.

    A scalar threshold applies to orders >= 2 only (unigrams are the
    vocabulary and stay); a dict gives explicit per-order thresholds.
    After pruning an order, the order below is re-derived as prefix
    marginals of what survived, keeping counts mutually consistent;
    ``</s>``-final grams have no continuations and keep their own counts.
    """
    if isinstance(min_count, int):
        thresholds = {k: min_count for k in range(2, counts.order + 1)}
    else:
        thresholds = dict(min_count)
    eos = counts.vocab.id_of(EOS)
    tables = [dict(t) for t in counts.tables]
    for k in range(counts.order, 0, -1):
        if k < counts.order:
            derived: dict[Gram, int] = defaultdict(int)
            for gram, c in tables[k].items():
                derived[gram[:-1]] += c
            for gram, c in tables[k - 1].items():
                if gram[-1] == eos:
                    derived[gram] = c
            tables[k - 1] = dict(derived)
        t = thresholds.get(k, 1)
        if t > 1:
            tables[k - 1] = {g: c for g, c in tables[k - 1].items() if c >= t}
    return CountTable(counts.order, counts.vocab, tables, counts.total_tokens)


@dataclass
class NGramModel:
    """Backoff model: log10 probabilities plus log10 backoff weights."""

    order: int
    vocab: Vocabulary
    logprobs: dict[Gram, float]
    backoffs: dict[Gram, float]
    metadata: dict = field(default_factory=dict)

    _unigrams: np.ndarray | None = field(default=None, repr=False, compare=False)
    _children: dict[Gram, tuple[np.ndarray, np.ndarray]] | None = field(
        default=None, repr=False, compare=False
    )

    # -- id helpers -------------------------------------------------------

    def _to_id(self, word: int | str) -> int:
        return word if isinstance(word, int) else self.vocab.id_of(word)

    def _history_ids(self, history: Sequence[int | str]) -> Gram:
        ids = tuple(self._to_id(w) for w in history)
        if len(ids) > self.order - 1:
            ids = ids[len(ids) - (self.order - 1) :]
        return ids

    # -- scalar query -----------------------------------------------------

    def probability(self, word: int | str, history: Sequence[int | str] = ()) -> float:
        """Backoff query, returned as a linear probability.

        Uses the longest stored history; otherwise multiplies the backoff
        weight into the next-shorter history's probability.  Histories
        longer than order-1 are truncated on the left.
        """
        wid = self._to_id(word)
        hist = self._history_ids(history)
        log_bow = 0.0
        while True:
            key = hist + (wid,)
            if key in self.logprobs:
                return 10.0 ** (log_bow + self.logprobs[key])
            if not hist:
                # complete unigram coverage is guaranteed for estimated
                # models; imported files may miss words -> treat as unk
                key = (self.vocab.unk_id,)
                return 10.0 ** (log_bow + self.logprobs.get(key, -99.0))
            log_bow += self.backoffs.get(hist, 0.0)
            hist = hist[1:]

    # -- vectorized distribution ------------------------------------------

    def _ensure_indexes(self) -> None:
        if self._unigrams is not None:
            return
        size = len(self.vocab)
        bos = self.vocab.id_of(BOS)
        # words an imported file does not cover keep the -99 convention the
        # scalar query uses, so evaluation never sees a hard zero
        uni = np.full(size, 1e-99)
        children: dict[Gram, tuple[list[int], list[float]]] = defaultdict(
            lambda: ([], [])
        )
        for gram, lp in self.logprobs.items():
            if len(gram) == 1:
                uni[gram[0]] = 10.0 ** lp
            else:
                ids, probs = children[gram[:-1]]
                ids.append(gram[-1])
                probs.append(10.0 ** lp)
        uni[bos] = 0.0
        self._unigrams = uni
        self._children = {
            h: (np.asarray(ids, dtype=np.intp), np.asarray(ps))
            for h, (ids, ps) in children.items()
        }

    def distribution(self, history: Sequence[int | str] = ()) -> np.ndarray:
        """P(w | history) for every vocabulary id; the ``<s>`` slot is zero."""
        self._ensure_indexes()
        hist = self._history_ids(history)
        dist = self._unigrams.copy()
        # longest suffix first would need right-to-left scatter; instead walk
        # from the shortest suffix up so stored probs overwrite backoff mass
        for start in range(len(hist) - 1, -1, -1):
            sub = hist[start:]
            stored = self._children.get(sub)
            bow = 10.0 ** self.backoffs.get(sub, 0.0)
            if bow != 1.0:
                dist *= bow
            if stored is not None:
                ids, probs = stored
                dist[ids] = probs
        return dist


# -- estimation -------------------------------------------------------------


def estimate_model(counts: CountTable, smoothing: str = MKN) -> NGramModel:
    """Estimate a backoff model from counts.

    Modified Kneser-Ney uses the three-discount scheme with discounts
    derived from count-of-count statistics; when those statistics are
    degenerate (tiny corpora, all counts equal) the estimator falls back
    to Witten-Bell and flags it in ``metadata["warning"]``.
    """
    method = _SMOOTHING_ALIASES.get(smoothing)
    if method is None:
        raise ValueError(f"unknown smoothing: {smoothing!r}")
    if counts.is_empty():
        raise SmoothingError("cannot estimate a model from empty counts")
    if method == MKN:
        discounts, reason = _mkn_discounts(counts)
        if discounts is None:
            model = _estimate(counts, WITTEN_BELL, None)
            model.metadata["smoothing"] = WITTEN_BELL
            model.metadata["requested"] = MKN
            model.metadata["warning"] = f"fell back to Witten-Bell: {reason}"
            return model
        return _estimate(counts, MKN, discounts)
    return _estimate(counts, WITTEN_BELL, None)


def _adjusted_tables(counts: CountTable) -> list[dict[Gram, int]]:
    """Kneser-Ney adjusted counts: continuation counts below the top order.

    Grams starting with ``<s>`` keep raw counts (nothing can precede the
    start symbol, so continuation counts would be uniformly zero there).
    """
    bos = counts.vocab.id_of(BOS)
    adjusted: list[dict[Gram, int]] = [dict(counts.table(counts.order))]
    for k in range(counts.order - 1, 0, -1):
        cont: Counter[Gram] = Counter()
        for gram in counts.table(k + 1):
            cont[gram[1:]] += 1
        table = {}
        for gram, raw in counts.table(k).items():
            if gram[0] == bos:
                table[gram] = raw
            else:
                table[gram] = cont.get(gram, 0)
        adjusted.append(table)
    adjusted.reverse()
    return adjusted


def _mkn_discounts(
    counts: CountTable,
) -> tuple[list[tuple[float, float, float]] | None, str | None]:
    """Per-order (D1, D2, D3+) or (None, reason) when not estimable."""
    bos = counts.vocab.id_of(BOS)
    adjusted = _adjusted_tables(counts)
    out: list[tuple[float, float, float]] = []
    for k in range(1, counts.order + 1):
        values = [
            c for g, c in adjusted[k - 1].items() if not (k == 1 and g[0] == bos)
        ]
        if not values:
            out.append((0.0, 0.0, 0.0))  # empty order: never applied
            continue
        n = Counter(values)
        n1, n2, n3, n4 = n[1], n[2], n[3], n[4]
        if n1 == 0 or n2 == 0:
            return None, f"order {k}: count-of-count statistics too sparse"
        y = n1 / (n1 + 2.0 * n2)
        d1 = 1.0 - 2.0 * y * n2 / n1
        d2 = 2.0 - 3.0 * y * n3 / n2 if n2 else 2.0
        d3 = 3.0 - 4.0 * y * n4 / n3 if n3 else 3.0
        if not (0.0 < d1 <= 1.0 and 0.0 < d2 <= 2.0 and 0.0 < d3 <= 3.0):
            return None, f"order {k}: discounts outside their valid range"
        out.append((d1, d2, d3))
    return out, None


def _estimate(
    counts: CountTable,
    method: str,
    discounts: list[tuple[float, float, float]] | None,
) -> NGramModel:
    vocab = counts.vocab
    bos, eos = vocab.id_of(BOS), vocab.id_of(EOS)
    n_predictable = len(vocab) - 1  # everything except <s>
    uniform = 1.0 / n_predictable

    if method == MKN:
        tables = _adjusted_tables(counts)
    else:
        tables = counts.tables

    logprobs: dict[Gram, float] = {}
    backoffs: dict[Gram, float] = {}

    def lower_prob(wid: int, hist: Gram) -> float:
        """Backoff query against the already-built lower orders."""
        log_bow = 0.0
        while True:
            key = hist + (wid,)
            if key in logprobs:
                return 10.0 ** (log_bow + logprobs[key])
            if not hist:
                raise AssertionError("unigram coverage is complete by construction")
            log_bow += backoffs.get(hist, 0.0)
            hist = hist[1:]

    # unigram level: interpolate with the uniform distribution so every
    # vocabulary word (seen or not) gets strictly positive mass
    uni = tables[0]
    total = sum(c for g, c in uni.items() if g[0] != bos)
    if method == MKN:
        d1, d2, d3 = discounts[0]

        def discounted(c: int) -> float:
            return c - (d1 if c == 1 else d2 if c == 2 else d3)

        mass = sum(
            (d1 if c == 1 else d2 if c == 2 else d3)
            for g, c in uni.items()
            if g[0] != bos
        )
        base_weight = mass / total
        for wid in range(len(vocab)):
            if wid == bos:
                continue
            c = uni.get((wid,), 0)
            p = (max(discounted(c), 0.0) / total if c else 0.0) + base_weight * uniform
            logprobs[(wid,)] = math.log10(p)
    else:
        n_types = sum(1 for g in uni if g[0] != bos)
        for wid in range(len(vocab)):
            if wid == bos:
                continue
            c = uni.get((wid,), 0)
            p = (c + n_types * uniform) / (total + n_types)
            logprobs[(wid,)] = math.log10(p)
    logprobs[(bos,)] = -99.0

    # higher orders
    for k in range(2, counts.order + 1):
        by_history: dict[Gram, list[tuple[int, int]]] = defaultdict(list)
        for gram, c in tables[k - 1].items():
            if c > 0:
                by_history[gram[:-1]].append((gram[-1], c))
        for hist, conts in sorted(by_history.items()):
            total = sum(c for _, c in conts)
            if method == MKN:
                d1, d2, d3 = discounts[k - 1]
                mass = sum((d1 if c == 1 else d2 if c == 2 else d3) for _, c in conts)
                gamma = mass / total
                for wid, c in conts:
                    d = d1 if c == 1 else d2 if c == 2 else d3
                    p = max(c - d, 0.0) / total + gamma * lower_prob(wid, hist[1:])
                    logprobs[hist + (wid,)] = math.log10(p)
            else:
                n_types = len(conts)
                gamma = n_types / (total + n_types)
                for wid, c in conts:
                    p = (c + n_types * lower_prob(wid, hist[1:])) / (total + n_types)
                    logprobs[hist + (wid,)] = math.log10(p)
            # interpolated-to-backoff conversion makes the backoff weight
            # equal the interpolation weight exactly
            backoffs[hist] = math.log10(gamma)

    return NGramModel(
        order=counts.order,
        vocab=vocab,
        logprobs=logprobs,
        backoffs=backoffs,
        metadata={"smoothing": method, "total_tokens": counts.total_tokens},
    )


# -- ARPA I/O ----------------------------------------------------------------

_NGRAM_DECL_RE = re.compile(r"ngram (\d+)=(\d+)$")


def export_arpa(model: NGramModel, path: str | Path) -> None:
    """Write the model in ARPA text form, 6 fractional digits throughout."""
    by_order: list[list[Gram]] = [[] for _ in range(model.order)]
    for gram in model.logprobs:
        by_order[len(gram) - 1].append(gram)
    for grams in by_order:
        grams.sort()
    with open(path, "w", encoding="utf-8") as f:
        f.write("\\data\\\n")
        for k in range(1, model.order + 1):
            f.write(f"ngram {k}={len(by_order[k - 1])}\n")
        for k in range(1, model.order + 1):
            f.write(f"\n\\{k}-grams:\n")
            for gram in by_order[k - 1]:
                words = " ".join(model.vocab.word_of(i) for i in gram)
                line = f"{model.logprobs[gram]:.6f}\t{words}"
                if gram in model.backoffs:
                    line += f"\t{model.backoffs[gram]:.6f}"
                f.write(line + "\n")
        f.write("\n\\end\\\n")


def import_arpa(path: str | Path) -> NGramModel:
    """Parse an ARPA file; raises :class:`ArpaError` with a line number."""
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    pos = 0

    def skip_blank() -> None:
        nonlocal pos
        while pos < len(lines) and not lines[pos].strip():
            pos += 1

    skip_blank()
    if pos >= len(lines) or lines[pos].strip() != "\\data\\":
        raise ArpaError("expected \\data\\ header", pos + 1)
    pos += 1
    declared: dict[int, int] = {}
    while pos < len(lines) and lines[pos].strip():
        m = _NGRAM_DECL_RE.match(lines[pos].strip())
        if not m:
            raise ArpaError(f"bad count declaration: {lines[pos]!r}", pos + 1)
        declared[int(m.group(1))] = int(m.group(2))
        pos += 1
    if not declared or sorted(declared) != list(range(1, max(declared) + 1)):
        raise ArpaError("ngram count declarations must cover orders 1..N", pos)
    order = max(declared)

    words: list[str] = []
    index: dict[str, int] = {}

    def intern(word: str) -> int:
        if word not in index:
            index[word] = len(words)
            words.append(word)
        return index[word]

    logprobs: dict[Gram, float] = {}
    backoffs: dict[Gram, float] = {}
    for k in range(1, order + 1):
        skip_blank()
        if pos >= len(lines) or lines[pos].strip() != f"\\{k}-grams:":
            raise ArpaError(f"expected \\{k}-grams: section", pos + 1)
        pos += 1
        seen = 0
        while pos < len(lines) and lines[pos].strip() and not lines[pos].startswith("\\"):
            parts = lines[pos].split()
            if len(parts) == k + 1:
                lp, grams, bow = parts[0], parts[1:], None
            elif len(parts) == k + 2:
                lp, grams, bow = parts[0], parts[1:-1], parts[-1]
            else:
                raise ArpaError(f"malformed {k}-gram entry", pos + 1)
            try:
                gram = tuple(intern(w) for w in grams)
                logprobs[gram] = float(lp)
                if bow is not None:
                    backoffs[gram] = float(bow)
            except ValueError:
                raise ArpaError(f"bad number in {k}-gram entry", pos + 1) from None
            seen += 1
            pos += 1
        if seen != declared[k]:
            raise ArpaError(
                f"section {k} declares {declared[k]} entries but has {seen}", pos
            )
    skip_blank()
    if pos >= len(lines) or lines[pos].strip() != "\\end\\":
        raise ArpaError("missing \\end\\ marker", min(pos + 1, len(lines) + 1))

    # vocabulary: file order, with specials guaranteed present and <unk>
    # moved to id 0
    file_words = list(words)
    ordered = [UNK] + [w for w in file_words if w != UNK]
    for special in (BOS, EOS):
        if special not in ordered:
            ordered.append(special)
    vocab = Vocabulary(ordered, [0] * len(ordered), [False] * len(ordered))
    remap = {old: vocab.id_of(w) for w, old in index.items()}
    logprobs = {tuple(remap[i] for i in g): lp for g, lp in logprobs.items()}
    backoffs = {tuple(remap[i] for i in g): bw for g, bw in backoffs.items()}
    return NGramModel(
        order=order,
        vocab=vocab,
        logprobs=logprobs,
        backoffs=backoffs,
        metadata={"smoothing": "imported", "source": str(path)},
    )


def train_ngram_model(
    tokens: Iterable[Token],
    vocab: Vocabulary,
    order: int = 4,
    smoothing: str = MKN,
    prune: int | dict[int, int] | None = None,
) -> NGramModel:
    """Count, optionally prune, and estimate in one step."""
    counts = count_ngrams(tokens, order, vocab)
    if prune is not None:
        counts = prune_counts(counts, prune)
    return estimate_model(counts, smoothing)
