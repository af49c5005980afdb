"""Normalization rules, clue elimination, and transformer dispatch."""

from .rules import (
    RULES,
    RULE_ORDER,
    DEFAULT_TYPE_MAP,
    apply_rule,
    normalize,
    normalize_source,
)
from .declue import (
    DEFAULT_DECOYS,
    DEFAULT_STD_HEADERS,
    DeclueOptions,
    eliminate_clues,
    eliminate_clues_source,
    pad_string_body,
    string_logical_length,
)
from .external import (
    TransformerSpec,
    apply_transformer,
    spec_from_name,
    transform_text,
)

__all__ = [
    "RULES",
    "RULE_ORDER",
    "DEFAULT_TYPE_MAP",
    "apply_rule",
    "normalize",
    "normalize_source",
    "DEFAULT_DECOYS",
    "DEFAULT_STD_HEADERS",
    "DeclueOptions",
    "eliminate_clues",
    "eliminate_clues_source",
    "pad_string_body",
    "string_logical_length",
    "TransformerSpec",
    "apply_transformer",
    "spec_from_name",
    "transform_text",
]
