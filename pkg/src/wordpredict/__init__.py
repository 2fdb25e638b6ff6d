"""Word prediction engine: backoff n-gram model plus a latent semantic
space, combined through caches, reranking, or interpolation, with a
keystroke-saving evaluator and an interactive prediction service."""

from .combine import (
    CacheState,
    CombinerConfig,
    PredictionList,
    PredictionPipeline,
    cache_push,
    combine_cache,
    confidence_lambda,
    decay_factor,
    geometric_interpolate,
    linear_interpolate,
    load_preset,
    load_presets,
    partial_rerank,
    predict_top_n,
)
from .corpus import (
    Token,
    TokenPolicy,
    Vocabulary,
    build_vocabulary,
    load_stopwords,
    tokenize,
)
from .evaluate import (
    EvalReport,
    KsrReport,
    evaluate_all,
    evaluate_pipeline,
    pearson,
    perplexity,
    simulate_ksr,
)
from .lsa import ContextVector, LsaDistribution, context_vector, lsa_distribution
from .ngram import (
    CountTable,
    NGramModel,
    count_ngrams,
    estimate_model,
    export_arpa,
    import_arpa,
    prune_counts,
    train_ngram_model,
)
from .semantic import (
    CooccurrenceMatrix,
    NotInSpaceError,
    SemanticSpace,
    build_cooccurrence,
    build_semantic_space,
    truncated_svd,
)
from .session import PipelinePredictor, PredictionSession

__version__ = "0.1.0"
