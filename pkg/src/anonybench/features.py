"""Stylometric features over tokens and trees, plus the weighting pipeline.

Five feature categories are extracted per program:

- token-unigram: relative frequency of each distinct token text
- keyword-freq: relative frequency of each C keyword, over all tokens
- ast-node-freq: relative frequency of each node kind
- ast-bigram: relative frequency of parent>child kind pairs, over edges
- ast-depth: max and mean node depth, root at depth 0

Every feature keeps the source spans it came from so explanations can point
back into the code; depth features have no specific region.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from sklearn.base import BaseEstimator

from ._validation import check_is_fitted, check_labels
from .errors import ParameterError, ParseError
from .cparse import lex, parse, to_source
from .cparse.lexer import SourceSpan, Token
from .cparse import nodes as N


@dataclass(frozen=True, order=True)
class FeatureId:
    category: str
    key: str


@dataclass
class FeatureVector:
    """Sparse weights plus the source regions behind each feature."""

    weights: dict[FeatureId, float]
    regions: dict[FeatureId, list[SourceSpan]] = field(default_factory=dict)
    parsed: bool = True


def _token_features(tokens: list[Token], weights, regions) -> None:
    total = len(tokens)
    if total == 0:
        return
    counts: dict[FeatureId, int] = {}
    for tok in tokens:
        fid = FeatureId("token-unigram", tok.text)
        counts[fid] = counts.get(fid, 0) + 1
        regions.setdefault(fid, []).append(tok.span)
        if tok.kind == "keyword":
            kid = FeatureId("keyword-freq", tok.text)
            counts[kid] = counts.get(kid, 0) + 1
            regions.setdefault(kid, []).append(tok.span)
    for fid, c in counts.items():
        weights[fid] = c / total


def extract_lexical(tokens: list[Token]) -> FeatureVector:
    """Token-level features only, for programs that fail to parse."""
    weights: dict[FeatureId, float] = {}
    regions: dict[FeatureId, list[SourceSpan]] = {}
    _token_features(tokens, weights, regions)
    return FeatureVector(weights, regions, parsed=False)


def extract(unit: N.TranslationUnit, tokens: list[Token]) -> FeatureVector:
    """Full feature extraction from a parsed tree and its token stream."""
    weights: dict[FeatureId, float] = {}
    regions: dict[FeatureId, list[SourceSpan]] = {}
    _token_features(tokens, weights, regions)

    nodes = list(N.walk_depth(unit))
    total_nodes = len(nodes)
    depths = []
    node_counts: dict[FeatureId, int] = {}
    for node, depth in nodes:
        depths.append(depth)
        fid = FeatureId("ast-node-freq", node.kind)
        node_counts[fid] = node_counts.get(fid, 0) + 1
        if node.span is not None:
            regions.setdefault(fid, []).append(node.span)
    for fid, c in node_counts.items():
        weights[fid] = c / total_nodes

    edges = list(N.walk_edges(unit))
    total_edges = len(edges)
    edge_counts: dict[FeatureId, int] = {}
    for parent, child in edges:
        fid = FeatureId("ast-bigram", f"{parent.kind}>{child.kind}")
        edge_counts[fid] = edge_counts.get(fid, 0) + 1
        if child.span is not None:
            regions.setdefault(fid, []).append(child.span)
    for fid, c in edge_counts.items():
        weights[fid] = c / total_edges

    weights[FeatureId("ast-depth", "max")] = float(max(depths))
    weights[FeatureId("ast-depth", "avg")] = float(np.mean(depths))
    return FeatureVector(weights, regions, parsed=True)


def extract_source(source: str) -> FeatureVector:
    """Extract features from text, falling back to lexical-only on parse
    failure. Lex failure propagates: such text carries no usable features."""
    tokens = lex(source)
    try:
        unit = parse(tokens)
    except ParseError:
        return extract_lexical(tokens)
    return extract(unit, tokens)


def feature_vector_to_json(fv: FeatureVector) -> dict:
    """Serialize one feature vector, keyed "category:key"."""
    return {
        "parsed": fv.parsed,
        "weights": {
            f"{fid.category}:{fid.key}": fv.weights[fid] for fid in sorted(fv.weights)
        },
        "regions": {
            f"{fid.category}:{fid.key}": [
                [s.start, s.end, s.line_start, s.line_end] for s in spans
            ]
            for fid, spans in sorted(fv.regions.items())
        },
    }


def canonical_features(source: str) -> FeatureVector:
    """Extract from the canonical reprint so span coordinates agree with the
    canonically printed text. Falls back to the raw text when unparseable."""
    tokens = lex(source)
    try:
        unit = parse(tokens)
    except ParseError:
        return extract_lexical(tokens)
    canon = to_source(unit)
    canon_tokens = lex(canon)
    return extract(parse(canon_tokens), canon_tokens)


class FeaturePipeline(BaseEstimator):
    """TF-IDF weighting with mutual-information feature selection.

    idf(f) = ln(N / (1 + df(f))) + 1 over training documents, and the top
    ``select_top`` features by MI between presence and the author label are
    kept, ranked by decreasing MI with ties broken by vocabulary order
    (category, then key).
    """

    def __init__(self, select_top: int = 1500):
        self.select_top = select_top

    def fit(self, vectors: list[FeatureVector], labels) -> "FeaturePipeline":
        if self.select_top <= 0:
            raise ParameterError("select_top must be a positive integer")
        if not vectors:
            raise ParameterError("cannot fit a pipeline on an empty document set")
        y = check_labels(labels, len(vectors))

        vocab = sorted({fid for v in vectors for fid in v.weights})
        index = {fid: i for i, fid in enumerate(vocab)}
        n_docs = len(vectors)
        n_feats = len(vocab)

        presence = np.zeros((n_docs, n_feats), dtype=bool)
        for row, v in enumerate(vectors):
            for fid, w in v.weights.items():
                if w != 0.0:
                    presence[row, index[fid]] = True

        df = presence.sum(axis=0)
        idf = np.log(n_docs / (1.0 + df)) + 1.0

        mi = self._mutual_information(presence, y)

        order = sorted(range(n_feats), key=lambda i: (-mi[i], i))
        keep = self.select_top
        if keep > n_feats:
            warnings.warn(
                f"select_top={keep} exceeds vocabulary size {n_feats}; keeping all features",
                stacklevel=2,
            )
            keep = n_feats
        selected = order[:keep]

        self.vocabulary_ = vocab
        self.idf_ = idf
        self.mi_ = mi
        self.selected_ = np.asarray(selected, dtype=np.intp)
        self.feature_ids_ = [vocab[i] for i in selected]
        self.n_features_ = len(selected)
        return self

    @staticmethod
    def _mutual_information(presence: np.ndarray, y: np.ndarray) -> np.ndarray:
        n_docs, n_feats = presence.shape
        classes = np.unique(y)
        p1 = presence.sum(axis=0) / n_docs
        p0 = 1.0 - p1
        mi = np.zeros(n_feats)
        for c in classes:
            mask = y == c
            pc = mask.sum() / n_docs
            joint1 = presence[mask].sum(axis=0) / n_docs
            joint0 = pc - joint1
            for joint, px in ((joint1, p1), (joint0, p0)):
                with np.errstate(divide="ignore", invalid="ignore"):
                    term = joint * np.log(joint / (px * pc))
                mi += np.where(joint > 0, term, 0.0)
        return mi

    def transform(self, vector: FeatureVector) -> np.ndarray:
        """Weight one document into a dense array over selected features."""
        check_is_fitted(self, "selected_")
        out = np.zeros(self.n_features_)
        for pos, vocab_idx in enumerate(self.selected_):
            fid = self.vocabulary_[vocab_idx]
            w = vector.weights.get(fid, 0.0)
            if w != 0.0:
                out[pos] = w * self.idf_[vocab_idx]
        return out

    def transform_matrix(self, vectors: list[FeatureVector]) -> np.ndarray:
        check_is_fitted(self, "selected_")
        return np.stack([self.transform(v) for v in vectors]) if vectors else np.zeros((0, self.n_features_))

    def to_json(self) -> dict:
        check_is_fitted(self, "selected_")
        return {
            "select_top": self.select_top,
            "vocabulary": [[fid.category, fid.key] for fid in self.vocabulary_],
            "idf": [float(v) for v in self.idf_],
            "selected": [int(i) for i in self.selected_],
        }

    @classmethod
    def from_json(cls, data: dict) -> "FeaturePipeline":
        pipe = cls(select_top=int(data["select_top"]))
        pipe.vocabulary_ = [FeatureId(c, k) for c, k in data["vocabulary"]]
        pipe.idf_ = np.asarray(data["idf"], dtype=np.float64)
        pipe.mi_ = np.zeros(len(pipe.vocabulary_))
        pipe.selected_ = np.asarray(data["selected"], dtype=np.intp)
        pipe.feature_ids_ = [pipe.vocabulary_[i] for i in pipe.selected_]
        pipe.n_features_ = len(pipe.selected_)
        return pipe
