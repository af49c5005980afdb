"""Evaluation harness: threat scenarios, fold loops, and reports.

Three scenarios, all grouped by task so no task appears in both train
and test:

- static: train on originals, test on anonymized programs. The attacker
  never saw the anonymizer.
- adaptive-augment: the attacker trains on originals plus anonymized
  copies of the training set, and is scored on both the original and the
  anonymized variant of each test program.
- adaptive-xformed: the attacker trains and tests on anonymized programs
  only.

Every tested sample records the full confidence vector plus the
uncertainty measures, so reports can be re-scored for other k or
epsilon without re-training.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .anonmetrics import (
    epsilon_threshold,
    is_k_anonymous,
    is_k_uncertain,
    uncertainty_score,
)
from .attribution import make_learner
from .corpus import Corpus, Program, grouped_kfold, preprocess
from .errors import ParameterError, SchemaError, TransformerError
from .features import FeaturePipeline, extract_source
from .normalize.external import TransformerSpec, apply_transformer

SCENARIOS = ("static", "adaptive-augment", "adaptive-xformed")

REPORT_FORMAT = "anonybench-report"
REPORT_VERSION = 1


@dataclass(frozen=True)
class ScenarioConfig:
    scenario: str
    technique: TransformerSpec
    learner: str = "forest"
    k: int = 5
    eps: Optional[float] = None  # None resolves to 1/n_authors
    seed: int = 0
    select_top: int = 1500
    learner_params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.scenario not in SCENARIOS:
            raise ParameterError(
                f"unknown scenario {self.scenario!r}; expected one of {SCENARIOS}"
            )
        if self.k < 1:
            raise ParameterError("k must be at least 1")
        if self.eps is not None and self.eps < 0:
            raise ParameterError("eps must be non-negative")
        if self.scenario != "static" and self.technique.kind == "external-command":
            raise ParameterError(
                "adaptive scenarios retrain on transformed programs and require "
                "a built-in technique, not an external command"
            )


@dataclass
class UncertaintyReport:
    config: dict
    aggregates: dict
    histogram: dict
    per_sample: list[dict]
    exclusions: list[dict]

    def to_json(self) -> dict:
        return {
            "format": REPORT_FORMAT,
            "version": REPORT_VERSION,
            "config": self.config,
            "aggregates": self.aggregates,
            "histogram": self.histogram,
            "per_sample": self.per_sample,
            "exclusions": self.exclusions,
        }

    @classmethod
    def from_json(cls, payload: dict) -> "UncertaintyReport":
        if not isinstance(payload, dict) or payload.get("format") != REPORT_FORMAT:
            raise SchemaError("not an uncertainty report")
        if payload.get("version") != REPORT_VERSION:
            raise SchemaError(f"unsupported report version {payload.get('version')!r}")
        for key in ("config", "aggregates", "histogram", "per_sample", "exclusions"):
            if key not in payload:
                raise SchemaError(f"report missing {key!r}")
        return cls(
            config=payload["config"],
            aggregates=payload["aggregates"],
            histogram=payload["histogram"],
            per_sample=payload["per_sample"],
            exclusions=payload["exclusions"],
        )

    def save(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(self.to_json(), fh, indent=2, sort_keys=True)
            fh.write("\n")

    @classmethod
    def load(cls, path) -> "UncertaintyReport":
        with open(path, encoding="utf-8") as fh:
            return cls.from_json(json.load(fh))


def _prepare(corpus: Corpus) -> list[Program]:
    out = []
    for p in corpus.programs:
        out.append(preprocess(p) if p.stage == "raw" else p)
    return out


def _transform_or_exclude(
    program: Program, spec: TransformerSpec, fold: int, side: str, exclusions: list[dict]
) -> Optional[Program]:
    try:
        return apply_transformer(program, spec)
    except TransformerError as exc:
        exclusions.append(
            {
                "author": program.author,
                "task": program.task,
                "fold": fold,
                "side": side,
                "reason": str(exc),
            }
        )
        return None


def run_scenario(corpus: Corpus, config: ScenarioConfig) -> UncertaintyReport:
    """Run one scenario over all task folds and aggregate the results."""
    programs = _prepare(corpus)
    n_authors = len(corpus.authors)
    if n_authors < 2:
        raise ParameterError("need at least 2 authors")
    eps = float(config.eps) if config.eps is not None else epsilon_threshold(n_authors)

    per_sample: list[dict] = []
    exclusions: list[dict] = []
    fold_accuracies: list[float] = []

    for plan in grouped_kfold(corpus):
        fold = plan.fold_index
        train = [programs[i] for i in plan.train_indices]
        test = [programs[i] for i in plan.test_indices]

        train_items: list[tuple[Program, str]] = []
        test_items: list[tuple[Program, str]] = []
        if config.scenario == "static":
            train_items = [(p, "original") for p in train]
            for p in test:
                tp = _transform_or_exclude(p, config.technique, fold, "test", exclusions)
                if tp is not None:
                    test_items.append((tp, "transformed"))
        elif config.scenario == "adaptive-augment":
            for p in train:
                train_items.append((p, "original"))
                tp = _transform_or_exclude(p, config.technique, fold, "train", exclusions)
                if tp is not None:
                    train_items.append((tp, "transformed"))
            for p in test:
                test_items.append((p, "original"))
                tp = _transform_or_exclude(p, config.technique, fold, "test", exclusions)
                if tp is not None:
                    test_items.append((tp, "transformed"))
        else:  # adaptive-xformed
            for p in train:
                tp = _transform_or_exclude(p, config.technique, fold, "train", exclusions)
                if tp is not None:
                    train_items.append((tp, "transformed"))
            for p in test:
                tp = _transform_or_exclude(p, config.technique, fold, "test", exclusions)
                if tp is not None:
                    test_items.append((tp, "transformed"))

        if not train_items or not test_items:
            continue

        vectors = [extract_source(p.source) for p, _ in train_items]
        labels = [p.author for p, _ in train_items]
        pipeline = FeaturePipeline(select_top=config.select_top)
        pipeline.fit(vectors, labels)
        X = pipeline.transform_matrix(vectors)
        model = make_learner(
            config.learner, seed=config.seed + fold, **config.learner_params
        )
        model.fit(X, np.asarray(labels, dtype=object))
        classes = list(model.classes_)
        index_of = {c: i for i, c in enumerate(classes)}

        fold_correct = 0
        fold_total = 0
        for p, variant in test_items:
            if p.author not in index_of:
                exclusions.append(
                    {
                        "author": p.author,
                        "task": p.task,
                        "fold": fold,
                        "side": "test",
                        "reason": "author absent from training classes",
                    }
                )
                continue
            t = index_of[p.author]
            x = pipeline.transform(extract_source(p.source))
            cv = model.confidence_vector(x)
            values = cv.values
            pred = classes[cv.argmax()]
            correct = pred == p.author
            u = uncertainty_score(values, t, config.k)
            per_sample.append(
                {
                    "author": p.author,
                    "task": p.task,
                    "fold": fold,
                    "variant": variant,
                    "author_index": t,
                    "confidences": [float(v) for v in values],
                    "predicted": pred,
                    "correct": bool(correct),
                    "argmax_unique": cv.argmax_unique(),
                    "uncertainty": float(u),
                    "k_anonymous": is_k_anonymous(values, t, config.k),
                    "k_uncertain": is_k_uncertain(values, t, config.k, eps),
                }
            )
            fold_total += 1
            fold_correct += int(correct)
        if fold_total:
            fold_accuracies.append(fold_correct / fold_total)

    return _assemble_report(config, eps, n_authors, fold_accuracies, per_sample, exclusions)


def _assemble_report(
    config: ScenarioConfig,
    eps: float,
    n_authors: int,
    fold_accuracies: list[float],
    per_sample: list[dict],
    exclusions: list[dict],
) -> UncertaintyReport:
    u_values = np.array([s["uncertainty"] for s in per_sample], dtype=float)
    counts, edges = np.histogram(u_values, bins=np.linspace(0.0, 1.0, 11))
    aggregates = {
        "n_authors": n_authors,
        "n_samples": len(per_sample),
        "n_excluded": len(exclusions),
        "n_folds": len(fold_accuracies),
        "accuracy": float(np.mean(fold_accuracies)) if fold_accuracies else 0.0,
        "accuracy_std": float(np.std(fold_accuracies)) if fold_accuracies else 0.0,
        "mean_uncertainty": float(np.mean(u_values)) if len(u_values) else 0.0,
        "k": config.k,
        "eps": eps,
        "k_anonymous_rate": (
            float(np.mean([s["k_anonymous"] for s in per_sample])) if per_sample else 0.0
        ),
        "k_uncertain_rate": (
            float(np.mean([s["k_uncertain"] for s in per_sample])) if per_sample else 0.0
        ),
    }
    cfg = {
        "scenario": config.scenario,
        "technique": config.technique.describe(),
        "learner": config.learner,
        "learner_params": dict(config.learner_params),
        "k": config.k,
        "eps": eps,
        "seed": config.seed,
        "select_top": config.select_top,
    }
    histogram = {
        "bin_edges": [float(e) for e in edges],
        "counts": [int(c) for c in counts],
    }
    return UncertaintyReport(
        config=cfg,
        aggregates=aggregates,
        histogram=histogram,
        per_sample=per_sample,
        exclusions=exclusions,
    )


def rescore(report: UncertaintyReport, k: int, eps: Optional[float] = None) -> UncertaintyReport:
    """Recompute uncertainty measures from stored confidences.

    Accuracy and fold structure are unchanged; only k/eps-dependent
    fields are recomputed."""
    if k < 1:
        raise ParameterError("k must be at least 1")
    n_authors = int(report.aggregates["n_authors"])
    new_eps = float(eps) if eps is not None else epsilon_threshold(n_authors)
    new_samples = []
    for s in report.per_sample:
        values = np.asarray(s["confidences"], dtype=float)
        t = int(s["author_index"])
        s2 = dict(s)
        s2["uncertainty"] = float(uncertainty_score(values, t, k))
        s2["k_anonymous"] = is_k_anonymous(values, t, k)
        s2["k_uncertain"] = is_k_uncertain(values, t, k, new_eps)
        new_samples.append(s2)
    u_values = np.array([s["uncertainty"] for s in new_samples], dtype=float)
    counts, edges = np.histogram(u_values, bins=np.linspace(0.0, 1.0, 11))
    aggregates = dict(report.aggregates)
    aggregates.update(
        {
            "k": k,
            "eps": new_eps,
            "mean_uncertainty": float(np.mean(u_values)) if len(u_values) else 0.0,
            "k_anonymous_rate": (
                float(np.mean([s["k_anonymous"] for s in new_samples])) if new_samples else 0.0
            ),
            "k_uncertain_rate": (
                float(np.mean([s["k_uncertain"] for s in new_samples])) if new_samples else 0.0
            ),
        }
    )
    config = dict(report.config)
    config.update({"k": k, "eps": new_eps})
    return UncertaintyReport(
        config=config,
        aggregates=aggregates,
        histogram={
            "bin_edges": [float(e) for e in edges],
            "counts": [int(c) for c in counts],
        },
        per_sample=new_samples,
        exclusions=report.exclusions,
    )


def report_csv(report: UncertaintyReport) -> str:
    """One aggregate row per report, suitable for concatenating runs."""
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(
        [
            "scenario",
            "technique",
            "learner",
            "accuracy",
            "accuracy_std",
            "mean_uncertainty",
            "k_anonymous_rate",
            "k_uncertain_rate",
            "n_samples",
            "n_excluded",
        ]
    )
    a = report.aggregates
    writer.writerow(
        [
            report.config["scenario"],
            report.config["technique"]["kind"],
            report.config["learner"],
            "%.6f" % a["accuracy"],
            "%.6f" % a["accuracy_std"],
            "%.6f" % a["mean_uncertainty"],
            "%.6f" % a["k_anonymous_rate"],
            "%.6f" % a["k_uncertain_rate"],
            a["n_samples"],
            a["n_excluded"],
        ]
    )
    return buf.getvalue()
