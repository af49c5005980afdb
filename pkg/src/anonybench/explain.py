"""Explanations for attribution decisions.

Two complementary views of why a model attributes a program to an author:

- highlight: exact additive decomposition of a forest's confidence along
  each tree's decision path, mapped back to source spans through the
  feature extractor's region index. bias + sum of contributions equals
  the predicted confidence.
- occlude: model-agnostic line occlusion. Delete one segment at a time,
  re-run the anonymize-then-attribute pipeline, and report the drop in
  target confidence.
"""

from __future__ import annotations

import html as _html
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .attribution import ConfidenceVector, ForestAttributor
from .cparse import SourceSpan, lex, parse, to_source
from .errors import AnonybenchError, ExplainerError, LexError, ParameterError, ParseError
from .features import FeatureId, FeaturePipeline, extract
from .normalize.external import TransformerSpec, transform_text


@dataclass(frozen=True)
class HighlightEntry:
    span: SourceSpan
    feature: FeatureId
    relevance: float


@dataclass(frozen=True)
class RelevanceMap:
    """Additive explanation of one confidence value over canonical source."""

    source: str
    target_index: int
    target_author: Optional[str]
    bias: float
    entries: tuple[HighlightEntry, ...]
    unlocated: dict[FeatureId, float]
    prediction: float

    def total(self) -> float:
        return self.bias + sum(e.relevance for e in self.entries) + sum(
            self.unlocated.values()
        )


def _tree_path_contributions(model: ForestAttributor, x: np.ndarray, t: int):
    """Per-feature contributions of one forest prediction for class t."""
    bias = 0.0
    contrib: dict[int, float] = {}
    for tree in model.trees_:
        node = tree
        bias += node["dist"][t]
        while "feature" in node:
            f = node["feature"]
            child = node["left"] if x[f] <= node["threshold"] else node["right"]
            contrib[f] = contrib.get(f, 0.0) + (child["dist"][t] - node["dist"][t])
            node = child
    n = len(model.trees_)
    return bias / n, {f: c / n for f, c in contrib.items()}


def highlight(
    model: ForestAttributor,
    pipeline: FeaturePipeline,
    source: str,
    target: Optional[str] = None,
) -> RelevanceMap:
    """Explain the forest's confidence for one author over one program.

    target names the author to explain; default is the predicted one.
    Only the forest supports path decomposition."""
    if not isinstance(model, ForestAttributor):
        raise ExplainerError("path decomposition requires the forest model")
    unit = parse(lex(source))
    canonical = to_source(unit)
    tokens = lex(canonical)
    fv = extract(parse(tokens), tokens)
    x = pipeline.transform(fv)

    classes = list(model.classes_)
    if target is None:
        cv = model.confidence_vector(x)
        t = cv.argmax()
    else:
        if target not in classes:
            raise ExplainerError(f"author {target!r} unknown to the model")
        t = classes.index(target)
    prediction = float(model.predict_proba(x[None, :])[0, t])

    bias, contrib = _tree_path_contributions(model, x, t)
    entries: list[HighlightEntry] = []
    unlocated: dict[FeatureId, float] = {}
    for f, value in sorted(contrib.items()):
        fid = pipeline.feature_ids_[f]
        spans = fv.regions.get(fid, [])
        if spans:
            share = value / len(spans)
            for span in spans:
                entries.append(HighlightEntry(span, fid, share))
        else:
            unlocated[fid] = unlocated.get(fid, 0.0) + value
    return RelevanceMap(
        source=canonical,
        target_index=int(t),
        target_author=str(classes[t]),
        bias=bias,
        entries=tuple(entries),
        unlocated=unlocated,
        prediction=prediction,
    )


def render_highlight_html(rmap: RelevanceMap) -> str:
    """Render a relevance map as a standalone HTML fragment.

    Characters are shaded red where relevance pushes toward the target
    author and blue where it pushes away."""
    text = rmap.source
    per_char = np.zeros(len(text))
    for e in rmap.entries:
        span = e.span
        width = max(span.end - span.start, 1)
        per_char[span.start : span.end] += e.relevance / width
    peak = float(np.max(np.abs(per_char))) if len(per_char) else 0.0
    out = [
        "<div class=\"anonybench-highlight\">",
        "<p>author: <b>%s</b> | confidence %.4f | bias %.4f</p>" % (
            _html.escape(str(rmap.target_author)),
            rmap.prediction,
            rmap.bias,
        ),
        "<pre style=\"font-family: monospace\">",
    ]
    i = 0
    while i < len(text):
        j = i
        while j < len(text) and per_char[j] == per_char[i]:
            j += 1
        chunk = _html.escape(text[i:j])
        v = per_char[i]
        if peak > 0 and v != 0:
            alpha = min(abs(v) / peak, 1.0)
            color = (255, 80, 80) if v > 0 else (80, 120, 255)
            chunk = '<span style="background: rgba(%d,%d,%d,%.3f)">%s</span>' % (
                *color,
                alpha,
                chunk,
            )
        out.append(chunk)
        i = j
    out.append("</pre></div>")
    return "".join(out)


@dataclass(frozen=True)
class Segment:
    index: int
    span: SourceSpan
    text: str


@dataclass(frozen=True)
class ScoredSegment:
    segment: Segment
    status: str  # "scored" | "skipped-unparseable"
    relevance: Optional[float]


@dataclass(frozen=True)
class OcclusionResult:
    source: str
    target_index: int
    baseline: float
    segments: tuple[ScoredSegment, ...]


def canonical_text(source: str) -> str:
    """Reprint source canonically; unparseable text passes through."""
    try:
        return to_source(parse(lex(source)))
    except (LexError, ParseError):
        return source


def segment_lines(text: str) -> list[Segment]:
    """Split text into line segments that tile it exactly."""
    segments = []
    offset = 0
    for i, line in enumerate(text.splitlines(keepends=True)):
        span = SourceSpan(offset, offset + len(line), i + 1, i + 1)
        segments.append(Segment(i, span, line))
        offset += len(line)
    return segments


def occlude(
    source: str,
    attributor: Callable[[str], ConfidenceVector],
    target: int,
    anonymizer: Optional[TransformerSpec] = None,
    segmentation: Optional[Callable[[str], list[Segment]]] = None,
    require_parse: bool = True,
) -> OcclusionResult:
    """Score each segment by how much deleting it drops target confidence.

    The attributor maps source text to a confidence vector; the optional
    anonymizer runs before attribution, exactly as an adversary would. A
    failure on the intact program is an error; failures on occluded
    variants mark that segment skipped. relevance = baseline - occluded."""
    spec = anonymizer or TransformerSpec("identity")
    text = canonical_text(source)
    segments = (segmentation or segment_lines)(text)
    if "".join(s.text for s in segments) != text:
        raise ParameterError("segmentation does not tile the text")

    def run(variant: str) -> float:
        cv = attributor(transform_text(variant, spec))
        values = cv.values
        if not 0 <= target < len(values):
            raise ParameterError(
                f"target index {target} out of range for {len(values)} authors"
            )
        return float(values[target])

    baseline = run(text)
    scored: list[ScoredSegment] = []
    for seg in segments:
        variant = text[: seg.span.start] + text[seg.span.end :]
        if require_parse:
            try:
                parse(lex(variant))
            except (LexError, ParseError):
                scored.append(ScoredSegment(seg, "skipped-unparseable", None))
                continue
        try:
            value = run(variant)
        except AnonybenchError:
            scored.append(ScoredSegment(seg, "skipped-unparseable", None))
            continue
        scored.append(ScoredSegment(seg, "scored", baseline - value))
    return OcclusionResult(
        source=text,
        target_index=target,
        baseline=baseline,
        segments=tuple(scored),
    )


def occlusion_to_json(result: OcclusionResult) -> dict:
    return {
        "target": result.target_index,
        "baseline": result.baseline,
        "segments": [
            {
                "index": s.segment.index,
                "line": s.segment.span.line_start,
                "start": s.segment.span.start,
                "end": s.segment.span.end,
                "text": s.segment.text,
                "status": s.status,
                "relevance": s.relevance,
            }
            for s in result.segments
        ],
    }
