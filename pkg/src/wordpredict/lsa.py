"""Turning a typed history into a probability distribution over the
semantic vocabulary.

The history is the plain sum of the unit vectors of its in-space words;
similarities against it are sharpened with a contrast exponent and
shifted by the smallest cosine so the least similar word gets exactly
zero probability.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .semantic import SemanticSpace


@dataclass
class ContextVector:
    v: np.ndarray
    word_count: int


@dataclass
class LsaDistribution:
    """Probabilities aligned with ``space.words``; ``degenerate`` marks the
    uniform fallback used when the context carries no signal."""

    probs: np.ndarray
    contrast: float
    degenerate: bool


def context_vector(space: SemanticSpace, history: Iterable[str]) -> ContextVector:
    """Sum of the unit vectors of all in-space history words.

    Out-of-space words are skipped; an empty effective history yields the
    zero vector.  The sum is not re-normalized (cosines against it are
    scale-invariant).
    """
    v = np.zeros(space.dims)
    count = 0
    for word in history:
        row = space.index.get(word)
        if row is not None:
            v += space.vectors[row]
            count += 1
    return ContextVector(v, count)


def lsa_distribution(
    space: SemanticSpace, ctx: ContextVector, contrast: float = 5.0
) -> LsaDistribution:
    """Cosine-derived distribution over the space's vocabulary.

    P(w) is proportional to (cos(w, h) - min_cosine)**contrast.  A zero
    context vector, or a context at equal cosine to every word, has no
    usable signal and falls back to the uniform distribution with the
    ``degenerate`` flag set.
    """
    if contrast <= 0:
        raise ValueError("contrast exponent must be > 0")
    n = len(space)
    if ctx.word_count == 0:
        return LsaDistribution(np.full(n, 1.0 / n), contrast, True)
    norm = np.linalg.norm(ctx.v)
    if norm < 1e-15:
        return LsaDistribution(np.full(n, 1.0 / n), contrast, True)
    cos = space.vectors @ (ctx.v / norm)
    shifted = cos - cos.min()
    weights = shifted**contrast
    denom = weights.sum()
    if denom <= 0.0 or not np.isfinite(denom):
        return LsaDistribution(np.full(n, 1.0 / n), contrast, True)
    return LsaDistribution(weights / denom, contrast, False)


def context_cosines(space: SemanticSpace, ctx: ContextVector) -> np.ndarray | None:
    """Cosine of every term vector against the context, or None when the
    context has no direction."""
    if ctx.word_count == 0:
        return None
    norm = np.linalg.norm(ctx.v)
    if norm < 1e-15:
        return None
    return space.vectors @ (ctx.v / norm)
