"""Combining the n-gram model with the semantic space.

Implements all integration methods behind one configuration object:

* ``baseline``        n-gram distribution untouched
* ``cache``           additive recency boost with a Gaussian decay curve
* ``semantic-cache``  cache that also admits each word's nearest neighbors
* ``rerank``          cosine-times-density bonus for the model's top-n list
* ``li`` / ``gi``     linear / geometric interpolation with a fixed weight
* ``cwli`` / ``cwgi`` per-word weights scaled by the density confidence

plus top-n prediction with prefix filtering.
"""

from __future__ import annotations

import bisect
import json
import math
from dataclasses import dataclass, field, fields, asdict
from importlib import resources
from pathlib import Path
from typing import Hashable, Iterable, Sequence

import numpy as np

from .corpus import BOS, EOS
from .lsa import ContextVector, context_cosines, context_vector, lsa_distribution
from .ngram import NGramModel
from .semantic import SemanticSpace

METHODS = ("baseline", "cache", "semantic-cache", "rerank", "li", "gi", "cwli", "cwgi")
_CACHE_METHODS = ("cache", "semantic-cache")
_LSA_METHODS = ("semantic-cache", "rerank", "li", "gi", "cwli", "cwgi")

GI_FLOOR = 1e-12  # a true zero would annihilate the geometric product


def decay_factor(position: float, peak: float, length: float) -> float:
    """Gaussian recency curve over cache positions.

    Equals 1 at ``position == peak``; the spread is peak/3 on the recent
    side and length/3 on the old side, so the curve rises to the peak and
    then decays over the rest of the cache.  Absent words score 0 at the
    call sites (there is no position to evaluate).
    """
    sigma = peak / 3.0 if position < peak else length / 3.0
    if sigma <= 0:
        return 0.0
    z = (position - peak) / sigma
    return math.exp(-0.5 * z * z)


class CacheState:
    """Recency buffer of (word, weight) entries, newest first.

    Directly occurred words carry weight 1; in the semantic variant each
    occurrence also enqueues its nearest neighbors right behind it,
    weighted by their cosine.  Because neighbor groups inflate distances
    between occurrences, the effective capacity and peak position scale
    with the observed average group size.
    """

    def __init__(
        self,
        capacity: int,
        peak: float,
        influence: float,
        semantic: bool = False,
        n_neighbors: int | None = None,
        min_cosine: float | None = None,
    ):
        if capacity < 1:
            raise ValueError("cache capacity must be >= 1")
        self.capacity = capacity
        self.peak = peak
        self.influence = influence
        self.semantic = semantic
        self.n_neighbors = n_neighbors
        self.min_cosine = min_cosine
        self.entries: list[tuple[Hashable, float]] = []
        self.words_pushed = 0
        self.entries_pushed = 0

    @property
    def group_factor(self) -> float:
        if not self.semantic or self.words_pushed == 0:
            return 1.0
        return self.entries_pushed / self.words_pushed

    @property
    def effective_capacity(self) -> int:
        return max(1, round(self.capacity * self.group_factor))

    @property
    def effective_peak(self) -> float:
        return self.peak * self.group_factor

    def push(
        self,
        word: Hashable,
        neighbors: Sequence[tuple[Hashable, float]] = (),
    ) -> None:
        """Prepend the word (weight 1) and, right behind it, its neighbors."""
        group = [(word, 1.0)] + [(n, float(w)) for n, w in neighbors]
        self.entries[:0] = group
        self.words_pushed += 1
        self.entries_pushed += len(group)
        del self.entries[self.effective_capacity :]

    def score(self, word: Hashable) -> float:
        """Summed influence * weight * decay over every entry for the word."""
        peak, length = self.effective_peak, float(self.effective_capacity)
        total = 0.0
        for pos, (entry, weight) in enumerate(self.entries, start=1):
            if entry == word:
                total += self.influence * weight * decay_factor(pos, peak, length)
        return total

    def masses(self) -> dict[Hashable, float]:
        peak, length = self.effective_peak, float(self.effective_capacity)
        out: dict[Hashable, float] = {}
        for pos, (entry, weight) in enumerate(self.entries, start=1):
            mass = self.influence * weight * decay_factor(pos, peak, length)
            out[entry] = out.get(entry, 0.0) + mass
        return out


def cache_push(
    state: CacheState, occurred_word: str, space: SemanticSpace | None = None
) -> CacheState:
    """Push a word; in the semantic variant its neighbors come from ``space``."""
    neighbors: list[tuple[str, float]] = []
    if state.semantic and space is not None and occurred_word in space:
        neighbors = space.nearest_neighbors(
            occurred_word, state.n_neighbors, state.min_cosine
        )
    state.push(occurred_word, neighbors)
    return state


def combine_cache(base_dist: np.ndarray, state: CacheState) -> np.ndarray:
    """Add the cache masses onto the base distribution and renormalize.

    Cache keys must be indices into ``base_dist``.  An empty or
    zero-influence cache returns the base values unchanged.
    """
    masses = state.masses()
    total = sum(masses.values())
    out = base_dist.copy()
    if total == 0.0:
        return out
    for idx, mass in masses.items():
        out[idx] += mass
    return out / (1.0 + total)


def partial_rerank_arrays(
    base_dist: np.ndarray,
    cos: np.ndarray,
    density: np.ndarray,
    in_space: np.ndarray,
    n_best: int,
    bonus_scale: float,
) -> np.ndarray:
    """Bonus pass over the base model's top-n candidates.

    In-space members of the top-n list receive bonus_scale * cosine *
    density; the total bonus mass is first removed from those members in
    proportion to their base probability, so words outside the list keep
    their base probability untouched before the final renormalization.
    Negative bonuses (negative cosine or density) are clamped to zero.
    """
    if n_best < 1:
        raise ValueError("n_best must be >= 1")
    order = np.lexsort((np.arange(base_dist.size), -base_dist))
    best = order[:n_best]
    members = best[in_space[best]]
    if members.size == 0:
        return base_dist.copy()
    bonus = np.clip(bonus_scale * cos[members] * density[members], 0.0, None)
    added = bonus.sum()
    if added <= 0.0:
        return base_dist.copy()
    member_mass = base_dist[members].sum()
    if member_mass <= 0.0:
        return base_dist.copy()
    scale = max(0.0, 1.0 - added / member_mass)
    out = base_dist.copy()
    out[members] = base_dist[members] * scale + bonus
    return out / out.sum()


def partial_rerank(
    base_dist: np.ndarray,
    ctx: ContextVector,
    space: SemanticSpace,
    words: Sequence[str],
    n_best: int,
    bonus_scale: float,
) -> np.ndarray:
    """Convenience wrapper mapping ``words`` (aligned with base_dist) onto
    the space to build the cosine/density/in-space arrays."""
    cos_all = context_cosines(space, ctx)
    if cos_all is None:
        return base_dist.copy()
    size = len(base_dist)
    cos = np.zeros(size)
    dens = np.zeros(size)
    in_space = np.zeros(size, dtype=bool)
    for i, w in enumerate(words):
        row = space.index.get(w)
        if row is not None:
            in_space[i] = True
            cos[i] = cos_all[row]
            dens[i] = space.density[row]
    return partial_rerank_arrays(base_dist, cos, dens, in_space, n_best, bonus_scale)


def _check_weight(value: np.ndarray | float) -> None:
    bad = np.any((np.asarray(value) < 0.0) | (np.asarray(value) > 1.0))
    if bad:
        raise ValueError("interpolation weight must lie in [0, 1]")


def linear_interpolate(
    base_dist: np.ndarray,
    lsa_dist: np.ndarray,
    base_weight: np.ndarray | float,
) -> np.ndarray:
    """weight * base + (1 - weight) * lsa.

    With a constant weight both inputs are already normalized, so the
    result is too; per-word weights (the confidence-weighted variant)
    break that and the result is renormalized.
    """
    _check_weight(base_weight)
    out = base_weight * base_dist + (1.0 - np.asarray(base_weight)) * lsa_dist
    if np.ndim(base_weight) > 0:
        out = out / out.sum()
    return out


def geometric_interpolate(
    base_dist: np.ndarray,
    lsa_dist: np.ndarray,
    base_weight: np.ndarray | float,
    floor: float = GI_FLOOR,
) -> np.ndarray:
    """Normalized product base**w * lsa**(1-w); lsa values are floored so
    out-of-space words are penalized rather than annihilated."""
    _check_weight(base_weight)
    w = np.asarray(base_weight, dtype=np.float64)
    out = base_dist**w * np.maximum(lsa_dist, floor) ** (1.0 - w)
    return out / out.sum()


def confidence_lambda(space: SemanticSpace, word: str, weight_scale: float) -> float:
    """Per-word weight of the semantic side: scale * density when the word
    is in space with positive density, otherwise 0."""
    if weight_scale < 0:
        raise ValueError("weight_scale must be >= 0")
    row = space.index.get(word)
    if row is None:
        return 0.0
    d = float(space.density[row])
    return min(weight_scale * d, 1.0) if d > 0.0 else 0.0


# -- configuration ------------------------------------------------------------


@dataclass
class CombinerConfig:
    """One integration method plus every knob it needs.

    Field names follow the JSON config schema; unset method parameters
    are filled with the standard defaults for that method.
    """

    method: str = "baseline"
    order: int = 4
    list_size: int = 5
    gamma: float = 5.0                  # contrast exponent of the LSA distribution
    lambda_lsa: float | None = None     # fixed LSA-side weight (li / gi)
    beta: float | None = None           # method-specific influence constant
    cache_length: int | None = None
    mu: float = 20.0                    # decay peak position
    m: int | None = None                # neighbors per cache push
    theta: float | None = None          # neighbor cosine threshold
    n_best: int | None = None           # rerank candidate pool
    context_window: int | None = None   # None = whole session history

    def __post_init__(self):
        if self.method not in METHODS:
            raise ValueError(f"unknown method {self.method!r}; expected one of {METHODS}")
        if self.method == "cache":
            self.cache_length = self.cache_length or 400
            if self.beta is None:
                self.beta = 0.1 / self.cache_length
        elif self.method == "semantic-cache":
            self.cache_length = self.cache_length or 4000
            self.m = self.m or 10
            self.theta = 0.4 if self.theta is None else self.theta
            self.beta = 0.0001 if self.beta is None else self.beta
        elif self.method == "rerank":
            self.n_best = self.n_best or 1000
            self.beta = 0.001 if self.beta is None else self.beta
        elif self.method == "li":
            self.lambda_lsa = 0.11 if self.lambda_lsa is None else self.lambda_lsa
        elif self.method == "gi":
            self.lambda_lsa = 0.07 if self.lambda_lsa is None else self.lambda_lsa
        elif self.method in ("cwli", "cwgi"):
            self.beta = 0.4 if self.beta is None else self.beta
        if self.gamma <= 0:
            raise ValueError("gamma must be > 0")
        if self.lambda_lsa is not None and not 0.0 <= self.lambda_lsa <= 1.0:
            raise ValueError("lambda_lsa must lie in [0, 1]")
        if self.list_size < 1:
            raise ValueError("list_size must be >= 1")

    @property
    def uses_cache(self) -> bool:
        return self.method in _CACHE_METHODS

    @property
    def uses_space(self) -> bool:
        return self.method in _LSA_METHODS

    def to_json(self) -> str:
        data = {"v": 1}
        data.update({k: v for k, v in asdict(self).items() if v is not None})
        return json.dumps(data, indent=2)

    @classmethod
    def from_dict(cls, data: dict) -> "CombinerConfig":
        known = {f.name for f in fields(cls)}
        return cls(**{k: v for k, v in data.items() if k in known})

    @classmethod
    def from_json(cls, text: str) -> "CombinerConfig":
        return cls.from_dict(json.loads(text))

    @classmethod
    def load(cls, path: str | Path) -> "CombinerConfig":
        return cls.from_json(Path(path).read_text(encoding="utf-8"))


PRESET_NAMES = (
    "baseline",
    "cache",
    "li",
    "gi",
    "cwli",
    "cwgi",
    "rerank",
    "semcache",
)


def load_preset(name: str) -> CombinerConfig:
    """One of the eight shipped preset configurations."""
    ref = resources.files("wordpredict").joinpath(f"presets/{name}.json")
    if not ref.is_file():
        raise KeyError(f"unknown preset {name!r}; shipped presets: {PRESET_NAMES}")
    return CombinerConfig.from_json(ref.read_text(encoding="utf-8"))


def load_presets() -> dict[str, CombinerConfig]:
    return {name: load_preset(name) for name in PRESET_NAMES}


# -- prediction pipeline -------------------------------------------------------


@dataclass
class PredictionList:
    """Top-n (word, probability) pairs, descending probability."""

    items: list[tuple[str, float]]

    @property
    def words(self) -> list[str]:
        return [w for w, _ in self.items]

    def __len__(self) -> int:
        return len(self.items)

    def __iter__(self):
        return iter(self.items)


class PredictionPipeline:
    """Immutable models plus one combiner configuration.

    Sessions own the mutable state (cache, history); the pipeline turns
    (context, cache) into a combined distribution over the model's
    vocabulary and runs prefix-filtered top-n extraction on it.
    """

    def __init__(
        self,
        model: NGramModel,
        space: SemanticSpace | None,
        config: CombinerConfig,
    ):
        if config.uses_space and space is None:
            raise ValueError(f"method {config.method!r} needs a semantic space")
        self.model = model
        self.space = space
        self.config = config
        vocab = model.vocab
        self.vocab = vocab
        size = len(vocab)

        self._predictable = np.ones(size, dtype=bool)
        for wid, word in enumerate(vocab.words):
            if vocab.is_special(wid) or any(ch.isdigit() for ch in word):
                self._predictable[wid] = False

        self._sorted_words = sorted(vocab.words)
        self._sorted_ids = np.asarray(
            [vocab.id_of(w) for w in self._sorted_words], dtype=np.intp
        )

        if space is not None:
            rows = np.full(size, -1, dtype=np.intp)
            lm_ids, space_rows = [], []
            for row, word in enumerate(space.words):
                if word in vocab:
                    wid = vocab.id_of(word)
                    rows[wid] = row
                    lm_ids.append(wid)
                    space_rows.append(row)
            self._space_row_of = rows
            self._space_lm_ids = np.asarray(lm_ids, dtype=np.intp)
            self._space_rows = np.asarray(space_rows, dtype=np.intp)
            self._in_space = rows >= 0
            dens = np.zeros(size)
            dens[self._in_space] = space.density[rows[self._in_space]]
            self._density_lm = dens
            if config.method in ("cwli", "cwgi"):
                self._conf_lambda_lm = np.where(
                    self._in_space & (dens > 0.0),
                    np.minimum(config.beta * dens, 1.0),
                    0.0,
                )

    # -- session plumbing --------------------------------------------------

    def new_cache(self) -> CacheState | None:
        cfg = self.config
        if not cfg.uses_cache:
            return None
        return CacheState(
            capacity=cfg.cache_length,
            peak=cfg.mu,
            influence=cfg.beta,
            semantic=cfg.method == "semantic-cache",
            n_neighbors=cfg.m,
            min_cosine=cfg.theta,
        )

    def cache_neighbor_ids(self, word_id: int) -> list[tuple[int, float]]:
        """Nearest-neighbor (vocab id, cosine) pairs for a semantic push."""
        cfg = self.config
        if cfg.method != "semantic-cache":
            return []
        word = self.vocab.word_of(word_id)
        if self.space is None or word not in self.space:
            return []
        return [
            (self.vocab.id_of(w), c)
            for w, c in self.space.nearest_neighbors(word, cfg.m, cfg.theta)
            if w in self.vocab
        ]

    def push_cache(self, cache: CacheState, word_id: int) -> None:
        cache.push(word_id, self.cache_neighbor_ids(word_id))

    def replay_cache(self, words: Sequence[str]) -> CacheState | None:
        cache = self.new_cache()
        if cache is not None:
            for w in words:
                if w == EOS:
                    continue
                self.push_cache(cache, self.vocab.id_of(w))
        return cache

    # -- distributions ------------------------------------------------------

    def ngram_history(self, context: Sequence[str]) -> list[int]:
        """Last order-1 ids of the current sentence, anchored with <s>.

        ``context`` may contain the boundary marker ``</s>`` to separate
        sentences; only the words after the last marker condition the
        n-gram query.
        """
        sentence: list[str] = []
        for w in context:
            if w == EOS:
                sentence = []
            else:
                sentence.append(w)
        need = self.config.order - 1
        ids = [self.vocab.id_of(w) for w in sentence[-need:]]
        if len(sentence) < need:
            ids = [self.vocab.id_of(BOS)] + ids
        return ids

    def lsa_context(self, context: Sequence[str]) -> ContextVector:
        words = [w for w in context if w != EOS]
        if self.config.context_window is not None:
            words = words[-self.config.context_window :]
        return context_vector(self.space, words)

    def _lsa_probs_lm(self, ctx: ContextVector) -> np.ndarray:
        """LSA distribution scattered onto the LM vocabulary (zeros elsewhere)."""
        dist = lsa_distribution(self.space, ctx, self.config.gamma)
        out = np.zeros(len(self.vocab))
        out[self._space_lm_ids] = dist.probs[self._space_rows]
        total = out.sum()
        if total > 0.0 and abs(total - 1.0) > 1e-9:
            out /= total  # some space words missing from the LM vocabulary
        return out

    def distribution(
        self,
        context: Sequence[str],
        cache: CacheState | None = None,
    ) -> np.ndarray:
        """Combined P(w | context) over the LM vocabulary for the configured
        method.  ``cache`` must be supplied for the cache methods; passing
        None replays it from the context words."""
        base = self.model.distribution(self.ngram_history(context))
        method = self.config.method
        if method == "baseline":
            return base
        if method in _CACHE_METHODS:
            if cache is None:
                cache = self.replay_cache([w for w in context if w != EOS])
            return combine_cache(base, cache)
        ctx = self.lsa_context(context)
        if method == "rerank":
            cos_all = context_cosines(self.space, ctx)
            if cos_all is None:
                return base
            size = len(self.vocab)
            cos = np.zeros(size)
            cos[self._space_lm_ids] = cos_all[self._space_rows]
            return partial_rerank_arrays(
                base, cos, self._density_lm, self._in_space,
                self.config.n_best, self.config.beta,
            )
        lsa_lm = self._lsa_probs_lm(ctx)
        if method == "li":
            return linear_interpolate(base, lsa_lm, 1.0 - self.config.lambda_lsa)
        if method == "gi":
            return geometric_interpolate(base, lsa_lm, 1.0 - self.config.lambda_lsa)
        if method == "cwli":
            return linear_interpolate(base, lsa_lm, 1.0 - self._conf_lambda_lm)
        if method == "cwgi":
            return geometric_interpolate(base, lsa_lm, 1.0 - self._conf_lambda_lm)
        raise AssertionError(method)

    # -- top-n extraction ----------------------------------------------------

    def _candidate_ids(self, prefix: str) -> np.ndarray:
        if not prefix:
            return self._sorted_ids
        prefix = prefix.lower()
        lo = bisect.bisect_left(self._sorted_words, prefix)
        hi = bisect.bisect_right(self._sorted_words, prefix + "\U0010ffff")
        return self._sorted_ids[lo:hi]

    def predict_from_dist(
        self,
        dist: np.ndarray,
        prefix: str,
        n: int,
        excluded: Iterable[str] = (),
    ) -> PredictionList:
        if n < 1:
            raise ValueError("n must be >= 1")
        cands = self._candidate_ids(prefix)
        if cands.size == 0:
            return PredictionList([])
        mask = self._predictable[cands]
        excluded = set(excluded)
        if excluded:
            banned = np.asarray(
                [self.vocab.word_of(i) in excluded for i in cands], dtype=bool
            )
            mask &= ~banned
        cands = cands[mask]
        if cands.size == 0:
            return PredictionList([])
        probs = dist[cands]
        order = np.lexsort((cands, -probs))[:n]
        return PredictionList(
            [(self.vocab.word_of(cands[i]), float(probs[i])) for i in order]
        )

    def predict_top_n(
        self,
        context: Sequence[str],
        prefix: str,
        n: int,
        excluded: Iterable[str] = (),
    ) -> PredictionList:
        """Stateless prediction: combined distribution for the context, then
        prefix filtering, exclusion, and top-n with id tie-breaking."""
        dist = self.distribution(context)
        return self.predict_from_dist(dist, prefix, n, excluded)


def predict_top_n(
    pipeline: PredictionPipeline,
    context: Sequence[str],
    prefix: str,
    n: int,
    excluded: Iterable[str] = (),
) -> PredictionList:
    return pipeline.predict_top_n(context, prefix, n, excluded)
