"""anonybench: attribute C programs to authors, measure how well
anonymization resists attribution, and explain what gave the author away."""

__version__ = "0.1.0"

from .anonmetrics import (
    epsilon_threshold,
    is_k_anonymous,
    is_k_uncertain,
    nearest,
    neighborhood_spread,
    score_threshold,
    uncertainty_score,
)
from .attribution import (
    ConfidenceVector,
    EvalResult,
    ForestAttributor,
    LinearAttributor,
    evaluate,
    load_bundle,
    make_learner,
    save_bundle,
)
from .corpus import (
    Corpus,
    FoldPlan,
    Program,
    build_corpus,
    grouped_kfold,
    load_corpus,
    preprocess,
)
from .errors import (
    AnonybenchError,
    ExplainerError,
    IngestionError,
    LexError,
    NormalizeError,
    ParameterError,
    ParseError,
    SchemaError,
    TrainingError,
    TransformerError,
    UnsupportedConstructError,
)
from .features import (
    FeatureId,
    FeaturePipeline,
    FeatureVector,
    canonical_features,
    extract,
    extract_lexical,
    extract_source,
)
from .harness import ScenarioConfig, UncertaintyReport, rescore, run_scenario
from .normalize import (
    DeclueOptions,
    TransformerSpec,
    apply_rule,
    apply_transformer,
    eliminate_clues,
    normalize,
    normalize_source,
    spec_from_name,
    transform_text,
)
from .explain import (
    OcclusionResult,
    RelevanceMap,
    Segment,
    highlight,
    occlude,
    render_highlight_html,
    segment_lines,
)
from .synth import StyleProfile, generate_synthetic_corpus, synthetic_profiles
