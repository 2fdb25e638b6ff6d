"""Batch evaluation: keystroke-saving-rate simulation, perplexity, and
the KSR/perplexity correlation.

The simulator types each test word greedily: it selects the target as
soon as it shows up in the list, otherwise it types the next character.
A selected word gets its following space for free; a typed-out word pays
for it.  Punctuation always costs one keystroke per token and is never
predicted.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .combine import CombinerConfig, PredictionPipeline, load_presets
from .corpus import PUNCTUATION, SENTENCE_BOUNDARY, Token, WORD, tokenize
from .ngram import NGramModel
from .semantic import SemanticSpace
from .session import PipelinePredictor, PredictionSession, SessionPredictor


class ZeroProbabilityError(ValueError):
    def __init__(self, word: str):
        self.word = word
        super().__init__(f"combined probability of {word!r} is zero")


@dataclass
class KsrReport:
    kp: int
    ka: int
    ksr: float
    list_size: int
    per_word: list[int] | None = None

    def to_dict(self) -> dict:
        out = {"kp": self.kp, "ka": self.ka, "ksr": self.ksr, "list_size": self.list_size}
        if self.per_word is not None:
            out["per_word"] = self.per_word
        return out


@dataclass
class PerplexityReport:
    perplexity: float
    word_count: int
    oov_count: int


@dataclass
class EvalReport:
    ksr: KsrReport
    perplexity: float
    word_count: int
    oov_count: int

    def to_dict(self) -> dict:
        return {
            "ksr": self.ksr.to_dict(),
            "perplexity": self.perplexity,
            "word_count": self.word_count,
            "oov_count": self.oov_count,
        }


def _typeable(tokens: Sequence[Token]) -> list[Token]:
    return [t for t in tokens if t.kind in (WORD, PUNCTUATION)]


def simulate_ksr(
    predictor: SessionPredictor | PredictionPipeline,
    text: str,
    n: int | None = None,
    per_word: bool = False,
) -> KsrReport:
    """Type ``text`` through a prediction session and report Eq-style
    keystroke savings: ksr = (1 - kp/ka) * 100.

    ``predictor`` is either a pipeline (wrapped in a session adapter) or
    any object with the session-predictor interface, which is how the
    tests plug in scripted predictors.
    """
    if isinstance(predictor, PredictionPipeline):
        predictor = PipelinePredictor(predictor, list_size=n)
    elif n is not None:
        predictor.list_size = n
    tokens = _typeable(tokenize(text))
    if not any(t.kind == WORD for t in tokens):
        raise ValueError("text must contain at least one word token")

    session = PredictionSession(predictor)
    for tok in tokens:
        if session.prefix:
            # previous word was completed by typing; its separator costs one
            session.key_char(" ")
        elif session.owed_separator:
            session.key_char(" ")
        if tok.kind == PUNCTUATION:
            session.key_char(tok.surface)
            continue
        target = tok.surface
        while session.prefix != target:
            shown = [w for w, _ in session.last_list]
            if target in shown:
                session.key_select(shown.index(target))
                break
            session.key_char(target[len(session.prefix)])
    report = KsrReport(
        kp=session.kp,
        ka=session.ka,
        ksr=session.ksr,
        list_size=predictor.list_size,
        per_word=session.per_word_kp if per_word else None,
    )
    assert 0 <= report.kp <= report.ka
    return report


def perplexity(pipeline: PredictionPipeline, text: str) -> PerplexityReport:
    """10 ** (-mean log10 P'(w|h)) over word tokens, with the same
    stateful updates (cache, context) the KSR simulation performs.

    Unknown words are scored through ``<unk>`` and reported as OOV.
    """
    tokens = tokenize(text)
    if not any(t.kind == WORD for t in tokens):
        raise ValueError("text must contain at least one word token")
    adapter = PipelinePredictor(pipeline)
    vocab = pipeline.vocab
    log_sum = 0.0
    words = 0
    oov = 0
    for tok in tokens:
        if tok.kind == WORD:
            wid = vocab.id_of(tok.surface)
            if wid == vocab.unk_id and tok.surface != vocab.word_of(vocab.unk_id):
                oov += 1
            p = float(adapter.distribution()[wid])
            if p <= 0.0:
                raise ZeroProbabilityError(tok.surface)
            log_sum += math.log10(p)
            words += 1
            adapter.commit_word(tok.surface)
        elif tok.kind == SENTENCE_BOUNDARY:
            adapter.commit_boundary()
    return PerplexityReport(10.0 ** (-log_sum / words), words, oov)


def pearson(xs: Sequence[float], ys: Sequence[float]) -> float:
    """Sample Pearson correlation coefficient."""
    x = np.asarray(xs, dtype=np.float64)
    y = np.asarray(ys, dtype=np.float64)
    if x.shape != y.shape or x.size < 2:
        raise ValueError("need two equally long samples of size >= 2")
    dx = x - x.mean()
    dy = y - y.mean()
    sx = math.sqrt(float(dx @ dx))
    sy = math.sqrt(float(dy @ dy))
    if sx == 0.0 or sy == 0.0:
        raise ValueError("correlation undefined: zero variance input")
    return float(dx @ dy) / (sx * sy)


def evaluate_pipeline(
    pipeline: PredictionPipeline, text: str, n: int | None = None
) -> EvalReport:
    ksr = simulate_ksr(pipeline, text, n=n)
    ppl = perplexity(pipeline, text)
    return EvalReport(ksr, ppl.perplexity, ppl.word_count, ppl.oov_count)


def evaluate_all(
    model: NGramModel,
    space: SemanticSpace | None,
    texts: Mapping[str, str],
    presets: Mapping[str, CombinerConfig] | None = None,
    n: int | None = None,
) -> dict:
    """Run every preset over every test text.

    Returns rows per (preset, text), a per-preset summary, and the
    Pearson correlation between the collected (ksr, perplexity) pairs.
    """
    if presets is None:
        presets = load_presets()
    rows = []
    for name, config in presets.items():
        pipeline = PredictionPipeline(model, space, config)
        for text_name, text in texts.items():
            report = evaluate_pipeline(pipeline, text, n=n)
            rows.append(
                {
                    "preset": name,
                    "text": text_name,
                    "ksr": report.ksr.ksr,
                    "kp": report.ksr.kp,
                    "ka": report.ksr.ka,
                    "perplexity": report.perplexity,
                    "oov": report.oov_count,
                    "words": report.word_count,
                }
            )
    summary = []
    for name in presets:
        mine = [r for r in rows if r["preset"] == name]
        summary.append(
            {
                "preset": name,
                "ksr": sum(r["ksr"] for r in mine) / len(mine),
                "perplexity": sum(r["perplexity"] for r in mine) / len(mine),
            }
        )
    points = [(r["ksr"], r["perplexity"]) for r in rows]
    corr = None
    if len(points) >= 2:
        try:
            corr = pearson([p[0] for p in points], [p[1] for p in points])
        except ValueError:
            corr = None
    return {"rows": rows, "summary": summary, "pearson_ksr_perplexity": corr}


def render_table(results: dict) -> str:
    """Plain-text method-by-metric table plus the correlation line."""
    lines = [f"{'method':<16}{'ksr%':>10}{'perplexity':>14}"]
    for row in results["summary"]:
        lines.append(
            f"{row['preset']:<16}{row['ksr']:>10.2f}{row['perplexity']:>14.2f}"
        )
    corr = results.get("pearson_ksr_perplexity")
    if corr is not None:
        lines.append(f"pearson(ksr, perplexity) = {corr:.3f}")
    return "\n".join(lines)


def write_report(results: dict, path) -> None:
    with open(path, "w", encoding="utf-8") as f:
        json.dump({"v": 1, **results}, f, indent=2)
