"""Text ingestion: tokenization, vocabulary construction, stopword handling.

Everything downstream (the language model, the semantic space, the
evaluators) works on the lowercase token stream produced here.
"""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

UNK = "<unk>"
BOS = "<s>"
EOS = "</s>"
SPECIAL_WORDS = (UNK, BOS, EOS)

WORD = "word"
PUNCTUATION = "punctuation"
SENTENCE_BOUNDARY = "sentence-boundary"

_BOUNDARY_SURFACE = EOS


@dataclass(frozen=True, slots=True)
class Token:
    surface: str
    kind: str  # WORD, PUNCTUATION or SENTENCE_BOUNDARY

    def is_word(self) -> bool:
        return self.kind == WORD


@dataclass(frozen=True)
class TokenPolicy:
    lowercase: bool = True
    split_clitics: bool = True          # "l'ami" -> "l'", "ami"
    sentence_final: str = ".!?"


DEFAULT_POLICY = TokenPolicy()

# A word starts with a letter or digit; hyphens and apostrophes are kept
# only between word characters, a trailing apostrophe stays attached
# (French elision: "l'", "d'").
_TOKEN_RE = re.compile(r"(?P<w>[^\W_]+(?:[-'’][^\W_]+)*['’]?)|(?P<p>\S)", re.UNICODE)
_CLITIC_RE = re.compile(r"[^'’]*['’]|[^'’]+", re.UNICODE)


def tokenize(text: str, policy: TokenPolicy = DEFAULT_POLICY) -> list[Token]:
    """Split text into word / punctuation / sentence-boundary tokens.

    Deterministic: lowercases, splits on whitespace, turns every other
    character into a single-char punctuation token.  Sentence-final
    punctuation additionally emits a sentence-boundary token.  Empty
    input yields an empty list.
    """
    if policy.lowercase:
        text = text.lower()
    out: list[Token] = []
    for match in _TOKEN_RE.finditer(text):
        word = match.group("w")
        if word is not None:
            if policy.split_clitics and ("'" in word or "’" in word):
                for piece in _CLITIC_RE.findall(word):
                    out.append(Token(piece, WORD))
            else:
                out.append(Token(word, WORD))
            continue
        punct = match.group("p")
        out.append(Token(punct, PUNCTUATION))
        if punct in policy.sentence_final:
            out.append(Token(_BOUNDARY_SURFACE, SENTENCE_BOUNDARY))
    return out


class Vocabulary:
    """Bidirectional word<->id map with ``<unk>`` fixed at id 0.

    Ids are dense; regular words are ordered by descending count with
    lexicographic tie-breaking, which makes id order a deterministic
    ranking usable for tie-breaks elsewhere.
    """

    unk_id = 0

    def __init__(
        self,
        words: Sequence[str],
        counts: Sequence[int],
        stopword_flags: Sequence[bool],
    ):
        if not words or words[0] != UNK:
            raise ValueError("vocabulary must start with the <unk> entry")
        self.words: list[str] = list(words)
        self.counts: list[int] = list(counts)
        self.stopword: list[bool] = list(stopword_flags)
        if not (len(self.words) == len(self.counts) == len(self.stopword)):
            raise ValueError("parallel vocabulary arrays differ in length")
        self._index: dict[str, int] = {w: i for i, w in enumerate(self.words)}
        if len(self._index) != len(self.words):
            raise ValueError("duplicate word in vocabulary")

    def __len__(self) -> int:
        return len(self.words)

    def __contains__(self, word: str) -> bool:
        return word in self._index

    def id_of(self, word: str) -> int:
        """Map a word to its id; unknown words map to ``unk_id``."""
        return self._index.get(word, self.unk_id)

    def word_of(self, wid: int) -> str:
        return self.words[wid]

    def is_special(self, wid: int) -> bool:
        return self.words[wid] in SPECIAL_WORDS

    def is_stopword(self, wid: int) -> bool:
        return self.stopword[wid]

    def extended(self, extra_words: Iterable[str]) -> "Vocabulary":
        """Copy with extra entries appended (used for boundary symbols)."""
        words = list(self.words)
        counts = list(self.counts)
        flags = list(self.stopword)
        for w in extra_words:
            if w not in self._index:
                words.append(w)
                counts.append(0)
                flags.append(False)
        return Vocabulary(words, counts, flags)

    def save(self, path: str | Path) -> None:
        with open(path, "w", encoding="utf-8") as f:
            f.write("wordpredict-vocab\t1\n")
            for i, w in enumerate(self.words):
                f.write(f"{i}\t{w}\t{self.counts[i]}\t{int(self.stopword[i])}\n")

    @classmethod
    def load(cls, path: str | Path) -> "Vocabulary":
        with open(path, encoding="utf-8") as f:
            header = f.readline().rstrip("\n").split("\t")
            if header[:2] != ["wordpredict-vocab", "1"]:
                raise ValueError(f"{path}: not a vocabulary file (bad header)")
            words, counts, flags = [], [], []
            for lineno, line in enumerate(f, start=2):
                if not line.strip():
                    continue
                wid, word, count, flag = line.rstrip("\n").split("\t")
                if int(wid) != len(words):
                    raise ValueError(f"{path}:{lineno}: ids must be dense")
                words.append(word)
                counts.append(int(count))
                flags.append(bool(int(flag)))
        return cls(words, counts, flags)


def build_vocabulary(
    tokens: Iterable[Token],
    max_size: int,
    min_count: int = 1,
    stopwords: frozenset[str] | set[str] = frozenset(),
) -> Vocabulary:
    """Keep the ``max_size`` most frequent word tokens with count >= min_count.

    Ties break lexicographically.  Everything else maps to ``<unk>``,
    whose count accumulates the dropped occurrences.
    """
    if max_size < 1:
        raise ValueError("max_size must be >= 1")
    freq = Counter(t.surface for t in tokens if t.kind == WORD)
    kept = sorted(
        (w for w, c in freq.items() if c >= min_count),
        key=lambda w: (-freq[w], w),
    )[:max_size]
    unk_count = sum(freq.values()) - sum(freq[w] for w in kept)
    words = [UNK] + kept
    counts = [unk_count] + [freq[w] for w in kept]
    flags = [False] + [w in stopwords for w in kept]
    return Vocabulary(words, counts, flags)


def load_stopwords(path: str | Path) -> set[str]:
    """Read a one-word-per-line stopword file: lowercased, deduplicated."""
    p = Path(path)
    if not p.is_file():
        raise FileNotFoundError(f"stopword file not found: {p}")
    out: set[str] = set()
    for line in p.read_text(encoding="utf-8").splitlines():
        word = line.strip().lower()
        if word:
            out.add(word)
    return out


def word_surfaces(tokens: Iterable[Token]) -> list[str]:
    return [t.surface for t in tokens if t.kind == WORD]
