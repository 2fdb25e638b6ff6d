"""Stateful typing session: one state machine for both the batch
keystroke simulator and the interactive service.

Counting rules
--------------
* selecting a word from the list costs one keystroke and auto-inserts
  the following space;
* typing a character (letters, digits, space, punctuation) costs one
  keystroke;
* words shown in the list are excluded from later lists for the same
  word once another character has been typed;
* ``ka`` is the length of the text entered so far, normalized as tokens
  joined by single spaces, so a fully typed text costs exactly ``ka``
  keystrokes.

Punctuation must be entered as its own token (finish the word with a
space or a selection first); sentence-final punctuation resets the
n-gram sentence context.  A punctuation token does not auto-insert the
following separator, so the next token must be preceded by an explicit
space — the machine tracks that as an "owed" separator.
"""

from __future__ import annotations

from typing import Protocol

from .corpus import EOS, PUNCTUATION, WORD

WORD_CHARS_EXTRA = "-'’"
DEFAULT_SENTENCE_FINAL = ".!?"


def is_word_char(c: str) -> bool:
    return c.isalnum() or c in WORD_CHARS_EXTRA


class InvalidKeyEvent(ValueError):
    pass


class SessionPredictor(Protocol):
    """What a session needs from the prediction side."""

    list_size: int

    def predict(self, prefix: str, n: int, excluded: set[str]) -> list[tuple[str, float]]:
        ...

    def commit_word(self, word: str) -> None:
        ...

    def commit_boundary(self) -> None:
        ...


class PipelinePredictor:
    """Adapter giving a :class:`~wordpredict.combine.PredictionPipeline`
    the session interface, with the combined distribution cached between
    commits (prefix keystrokes only re-filter it)."""

    def __init__(self, pipeline, list_size: int | None = None):
        self.pipeline = pipeline
        self.list_size = list_size or pipeline.config.list_size
        self.context: list[str] = []
        self.cache = pipeline.new_cache()
        self._dist = None

    def distribution(self):
        if self._dist is None:
            self._dist = self.pipeline.distribution(self.context, self.cache)
        return self._dist

    def predict(self, prefix: str, n: int, excluded: set[str]) -> list[tuple[str, float]]:
        return list(self.pipeline.predict_from_dist(self.distribution(), prefix, n, excluded))

    def commit_word(self, word: str) -> None:
        self.context.append(word)
        if self.cache is not None:
            self.pipeline.push_cache(self.cache, self.pipeline.vocab.id_of(word))
        self._dist = None

    def commit_boundary(self) -> None:
        self.context.append(EOS)
        self._dist = None


class PredictionSession:
    """Drives a predictor through char / select / backspace events while
    maintaining the keystroke counters."""

    def __init__(self, predictor: SessionPredictor, sentence_final: str = DEFAULT_SENTENCE_FINAL):
        self.predictor = predictor
        self.sentence_final = sentence_final
        self.committed: list[tuple[str, str]] = []  # (surface, kind)
        self.prefix = ""
        self.offered: set[str] = set()
        self.owed_separator = False
        self.kp = 0
        self.per_word_kp: list[int] = []
        self._word_kp = 0
        self.last_list: list[tuple[str, float]] = self._predict()

    # -- derived state ------------------------------------------------------

    @property
    def ka(self) -> int:
        """Characters of the normalized text entered so far."""
        total = sum(len(s) for s, _ in self.committed)
        if self.committed:
            total += len(self.committed) - 1  # single separators
        if self.prefix:
            total += (1 if self.committed else 0) + len(self.prefix)
        return total

    @property
    def ksr(self) -> float:
        if self.ka == 0:
            return 0.0
        return (1.0 - self.kp / self.ka) * 100.0

    @property
    def text(self) -> str:
        joined = " ".join(s for s, _ in self.committed)
        if self.prefix:
            joined = f"{joined} {self.prefix}" if joined else self.prefix
        return joined

    @property
    def committed_words(self) -> list[str]:
        return [s for s, kind in self.committed if kind == WORD]

    # -- events ---------------------------------------------------------------

    def key_char(self, c: str) -> list[tuple[str, float]]:
        if len(c) != 1:
            raise InvalidKeyEvent("char events carry exactly one character")
        if c == " ":
            self._space()
        elif is_word_char(c):
            if self.owed_separator:
                raise InvalidKeyEvent("type a space after punctuation first")
            self.offered |= {w for w, _ in self.last_list}
            self.prefix += c.lower()
            self.kp += 1
            self._word_kp += 1
        else:
            self._punctuation(c)
        self.last_list = self._predict()
        return self.last_list

    def key_select(self, index: int) -> list[tuple[str, float]]:
        """Select the list entry at ``index`` (0-based); the word is
        committed and the following space is inserted automatically."""
        if self.owed_separator:
            raise InvalidKeyEvent("type a space after punctuation first")
        if not self.last_list:
            raise InvalidKeyEvent("cannot select from an empty prediction list")
        if not 0 <= index < len(self.last_list):
            raise InvalidKeyEvent(
                f"selection index {index} outside the current list of {len(self.last_list)}"
            )
        word = self.last_list[index][0]
        self.kp += 1
        self._word_kp += 1
        self._commit_word(word)
        # auto-inserted space: the separator after this word costs nothing
        self.owed_separator = False
        self.last_list = self._predict()
        return self.last_list

    def key_backspace(self) -> list[tuple[str, float]]:
        """Remove the last prefix character; costs a keystroke, counters
        are not rolled back."""
        if self.prefix:
            self.prefix = self.prefix[:-1]
            self.kp += 1
            self._word_kp += 1
        self.last_list = self._predict()
        return self.last_list

    # -- internals --------------------------------------------------------------

    def _predict(self) -> list[tuple[str, float]]:
        n = self.predictor.list_size
        return self.predictor.predict(self.prefix, n, self.offered)

    def _space(self) -> None:
        if self.prefix:
            self.kp += 1
            self._word_kp += 1
            self._commit_word(self.prefix)
            self.owed_separator = False  # this space is the separator
        elif self.owed_separator:
            self.kp += 1
            self.owed_separator = False
        # a stray space with nothing pending changes nothing and costs nothing

    def _punctuation(self, c: str) -> None:
        if self.prefix:
            raise InvalidKeyEvent(
                "finish the word first (space or selection) before punctuation"
            )
        if self.owed_separator:
            raise InvalidKeyEvent("type a space after punctuation first")
        self.kp += 1
        self.committed.append((c, PUNCTUATION))
        self.per_word_kp.append(1)
        self.owed_separator = True
        if c in self.sentence_final:
            self.predictor.commit_boundary()
        self.offered = set()

    def _commit_word(self, word: str) -> None:
        self.committed.append((word, WORD))
        self.per_word_kp.append(self._word_kp)
        self._word_kp = 0
        self.prefix = ""
        self.offered = set()
        self.predictor.commit_word(word)
