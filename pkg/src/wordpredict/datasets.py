"""Deterministic synthetic corpora for demos, tests, and desk-scale runs.

The generator writes topical paragraphs: each paragraph sticks to one
topic whose content words follow a skewed rank distribution, glued
together with high-frequency function words.  The topical repetition
gives the cache something to exploit and the co-occurrence structure
gives the semantic space real neighborhoods, while staying fully
reproducible from a seed.
"""

from __future__ import annotations

import numpy as np

_FUNCTION_WORDS = (
    "the a an of to in on at for with and or but is are was were be it "
    "this that he she they we you not as by from so if then there when"
).split()

_TOPICS = {
    "sailing": (
        "boat sail wind harbor anchor deck mast rope tide wave crew "
        "captain sea storm compass chart knot hull keel rudder voyage "
        "island port starboard gale sailor breeze buoy lighthouse fleet"
    ).split(),
    "cooking": (
        "kitchen recipe flour butter oven dough bread sauce onion garlic "
        "pan knife salt pepper sugar cream soup stew roast simmer boil "
        "chop bake taste dish plate spoon herb spice flavor"
    ).split(),
    "astronomy": (
        "star planet orbit telescope galaxy comet moon eclipse nebula "
        "gravity light spectrum observatory meteor asteroid dust cluster "
        "horizon zenith constellation astronomer dwarf ring satellite "
        "radiation parallax aperture lens mirror transit"
    ).split(),
    "farming": (
        "field crop harvest tractor barn seed soil plough furrow grain "
        "wheat barley cattle sheep pasture fence silo irrigation manure "
        "orchard apple vine farmer meadow hay fodder dairy herd lamb wool"
    ).split(),
    "music": (
        "violin piano chord melody rhythm concert orchestra conductor "
        "tempo note scale tune string bow drum flute horn harmony choir "
        "song singer stage rehearsal score sonata quartet key pitch bar"
    ).split(),
}


def synthetic_corpus(
    n_paragraphs: int = 40,
    sentences_per_paragraph: int = 8,
    seed: int = 7,
) -> str:
    """Topic-structured text; roughly 60 characters per sentence."""
    rng = np.random.default_rng(seed)
    topics = list(_TOPICS)
    func = np.asarray(_FUNCTION_WORDS)
    # zipf-ish weights over each topic's content words
    paragraphs = []
    for _ in range(n_paragraphs):
        topic = topics[rng.integers(len(topics))]
        content = np.asarray(_TOPICS[topic])
        ranks = np.arange(1, len(content) + 1, dtype=np.float64)
        weights = 1.0 / ranks
        weights /= weights.sum()
        sentences = []
        for _ in range(sentences_per_paragraph):
            length = int(rng.integers(5, 12))
            words = []
            for i in range(length):
                if rng.random() < 0.45:
                    words.append(str(func[rng.integers(len(func))]))
                else:
                    words.append(str(rng.choice(content, p=weights)))
            sentences.append(" ".join(words) + ".")
        paragraphs.append(" ".join(sentences))
    return "\n\n".join(paragraphs) + "\n"


def corpus_of_size(target_chars: int, seed: int = 7) -> str:
    """Synthetic corpus of at least ``target_chars`` characters."""
    per_paragraph = 8 * 60  # rough estimate
    n = max(1, target_chars // per_paragraph + 1)
    text = synthetic_corpus(n_paragraphs=n, seed=seed)
    while len(text) < target_chars:
        n = int(n * 1.3) + 1
        text = synthetic_corpus(n_paragraphs=n, seed=seed)
    return text


_SYLLABLES = (
    "ba be bi bo bu da de di do du fa fe fi fo fu ga ge gi go gu "
    "ka ke ki ko ku la le li lo lu ma me mi mo mu na ne ni no nu "
    "pa pe pi po pu ra re ri ro ru sa se si so su ta te ti to tu "
    "va ve vi vo vu cha che chi cho chu sta ste sti sto stu"
).split()


def _pseudo_vocabulary(rng, n_topics: int, words_per_topic: int) -> list[list[str]]:
    """Distinct pronounceable pseudo-words, partitioned into topics."""
    seen: set[str] = set()
    topics: list[list[str]] = []
    for _ in range(n_topics):
        topic: list[str] = []
        while len(topic) < words_per_topic:
            n_syl = int(rng.integers(2, 4))
            word = "".join(_SYLLABLES[rng.integers(len(_SYLLABLES))] for _ in range(n_syl))
            if word not in seen:
                seen.add(word)
                topic.append(word)
        topics.append(topic)
    return topics


def large_synthetic_corpus(
    target_chars: int,
    seed: int = 7,
    n_topics: int = 24,
    words_per_topic: int = 150,
    vocab_seed: int | None = None,
) -> str:
    """Topical corpus with a few thousand distinct content words.

    Scaled for desk runs that want realistic vocabulary sizes (hundreds
    of co-occurrence columns, SVD to tens of dimensions) while remaining
    deterministic and self-contained.  ``vocab_seed`` fixes the topic
    vocabulary independently of the sampling seed, so held-out test text
    can share the training vocabulary.
    """
    vocab_rng = np.random.default_rng(seed if vocab_seed is None else vocab_seed)
    topics = _pseudo_vocabulary(vocab_rng, n_topics, words_per_topic)
    rng = np.random.default_rng(seed)
    func = _FUNCTION_WORDS
    weights_cache = {}

    def topic_weights(n):
        if n not in weights_cache:
            w = 1.0 / np.arange(1, n + 1, dtype=np.float64)
            weights_cache[n] = w / w.sum()
        return weights_cache[n]

    chunks: list[str] = []
    size = 0
    while size < target_chars:
        topic = topics[int(rng.integers(n_topics))]
        weights = topic_weights(len(topic))
        sentences = []
        for _ in range(int(rng.integers(5, 10))):
            length = int(rng.integers(5, 13))
            words = [
                func[rng.integers(len(func))]
                if rng.random() < 0.45
                else topic[int(rng.choice(len(topic), p=weights))]
                for _ in range(length)
            ]
            sentences.append(" ".join(words) + ".")
        chunk = " ".join(sentences)
        chunks.append(chunk)
        size += len(chunk) + 2
    return "\n\n".join(chunks) + "\n"
