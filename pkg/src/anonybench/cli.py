"""Command line interface.

Subcommands mirror the library layers: corpus inspection, formatting,
feature extraction, training, attribution, protection scoring,
normalization and clue elimination, external transforms, explanations,
scenario evaluation, and synthetic corpus generation.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .anonmetrics import epsilon_threshold
from .attribution import ForestAttributor, load_bundle, make_learner, save_bundle
from .corpus import load_corpus, preprocess
from .errors import AnonybenchError
from .features import FeaturePipeline, extract_source, feature_vector_to_json
from .harness import ScenarioConfig, UncertaintyReport, report_csv, rescore, run_scenario
from .normalize import DeclueOptions, eliminate_clues, normalize, spec_from_name, transform_text
from .cparse import lex, parse, to_source
from .explain import (
    highlight,
    occlude,
    occlusion_to_json,
    render_highlight_html,
)
from .synth import generate_synthetic_corpus


def _read_source(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    return Path(path).read_text(encoding="utf-8")


def _write_out(text: str, out: str | None) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8")


def _declue_options(args) -> DeclueOptions:
    kwargs = {}
    if getattr(args, "min_string_len", None) is not None:
        kwargs["min_string_len"] = args.min_string_len
    if getattr(args, "decoys", None):
        sigs = [
            ln.strip()
            for ln in Path(args.decoys).read_text(encoding="utf-8").splitlines()
            if ln.strip() and not ln.strip().startswith("#")
        ]
        kwargs["decoys"] = tuple(sigs)
    return DeclueOptions(**kwargs)


def _technique(args) -> "TransformerSpec":
    options = None
    if getattr(args, "min_string_len", None) is not None or getattr(args, "decoys", None):
        options = _declue_options(args)
    return spec_from_name(args.technique, options=options)


# --- subcommand handlers ---


def cmd_corpus_check(args) -> int:
    corpus = load_corpus(args.root)
    print(f"authors: {len(corpus.authors)}")
    print(f"tasks: {len(corpus.tasks)}")
    print(f"programs: {len(corpus)}")
    parse_failures = 0
    for p in corpus.programs:
        try:
            parse(lex(preprocess(p).source))
        except AnonybenchError as exc:
            parse_failures += 1
            print(f"unparseable: {p.author}/{p.task}: {exc}")
    for w in corpus.warnings:
        print(f"warning: {w}")
    print(f"parse failures: {parse_failures}")
    return 0 if parse_failures == 0 else 1


def cmd_fmt(args) -> int:
    source = _read_source(args.file)
    _write_out(to_source(parse(lex(source))), args.out)
    return 0


def cmd_extract(args) -> int:
    source = _read_source(args.file)
    fv = extract_source(source)
    payload = feature_vector_to_json(fv)
    _write_out(json.dumps(payload, indent=2, sort_keys=True) + "\n", args.out)
    return 0


def cmd_train(args) -> int:
    corpus = load_corpus(args.root)
    programs = [preprocess(p) for p in corpus.programs]
    vectors = [extract_source(p.source) for p in programs]
    labels = [p.author for p in programs]
    pipeline = FeaturePipeline(select_top=args.select_top)
    pipeline.fit(vectors, labels)
    X = pipeline.transform_matrix(vectors)
    model = make_learner(args.learner, seed=args.seed)
    model.fit(X, np.asarray(labels, dtype=object))
    save_bundle(args.out, pipeline, model)
    print(f"trained {args.learner} on {len(labels)} programs, saved to {args.out}")
    return 0


def cmd_attribute(args) -> int:
    pipeline, model = load_bundle(args.model)
    source = _read_source(args.file)
    x = pipeline.transform(extract_source(source))
    cv = model.confidence_vector(x)
    classes = list(model.classes_)
    pred = classes[cv.argmax()]
    rows = sorted(zip(classes, cv.values), key=lambda r: -r[1])
    for author, conf in rows:
        marker = " <-- predicted" if author == pred else ""
        print(f"{author}\t{conf:.6f}{marker}")
    if args.json:
        payload = {
            "predicted": pred,
            "confidences": {a: float(c) for a, c in zip(classes, cv.values)},
        }
        print(json.dumps(payload, sort_keys=True))
    return 0


def cmd_score(args) -> int:
    report = UncertaintyReport.load(args.report)
    out = rescore(report, k=args.k, eps=None if args.eps == "auto" else float(args.eps))
    a = out.aggregates
    print(f"samples: {a['n_samples']}")
    print(f"k: {a['k']}  eps: {a['eps']:.6f}")
    print(f"mean uncertainty: {a['mean_uncertainty']:.6f}")
    print(f"k-anonymous rate: {a['k_anonymous_rate']:.6f}")
    print(f"k-uncertain rate: {a['k_uncertain_rate']:.6f}")
    if args.out:
        out.save(args.out)
        print(f"saved rescored report to {args.out}")
    return 0


def cmd_normalize(args) -> int:
    source = _read_source(args.file)
    _write_out(to_source(normalize(parse(lex(source)))), args.out)
    return 0


def cmd_declue(args) -> int:
    source = _read_source(args.file)
    unit = normalize(parse(lex(source)))
    unit = eliminate_clues(unit, _declue_options(args))
    _write_out(to_source(unit), args.out)
    return 0


def cmd_xform(args) -> int:
    spec = spec_from_name(f"cmd:{args.cmd}")
    source = _read_source(args.file)
    _write_out(transform_text(source, spec), args.out)
    return 0


def cmd_explain_highlight(args) -> int:
    pipeline, model = load_bundle(args.model)
    if not isinstance(model, ForestAttributor):
        print("highlight requires a forest model", file=sys.stderr)
        return 2
    source = _read_source(args.file)
    rmap = highlight(model, pipeline, source, target=args.author)
    if args.html:
        Path(args.html).write_text(render_highlight_html(rmap), encoding="utf-8")
        print(f"wrote {args.html}")
    print(f"author: {rmap.target_author}")
    print(f"confidence: {rmap.prediction:.6f}")
    print(f"bias: {rmap.bias:.6f}")
    located = sorted(rmap.entries, key=lambda e: -abs(e.relevance))[: args.top]
    for e in located:
        snippet = rmap.source[e.span.start : e.span.end].replace("\n", "\\n")
        print(f"{e.relevance:+.6f}\tline {e.span.line_start}\t{e.feature.category}:{e.feature.key}\t{snippet}")
    return 0


def cmd_explain_occlude(args) -> int:
    pipeline, model = load_bundle(args.model)
    classes = list(model.classes_)

    def attributor(text: str):
        return model.confidence_vector(pipeline.transform(extract_source(text)))

    source = _read_source(args.file)
    if args.author is not None:
        if args.author not in classes:
            print(f"author {args.author!r} unknown to the model", file=sys.stderr)
            return 2
        target = classes.index(args.author)
    else:
        target = attributor(source).argmax()
    spec = spec_from_name(args.xform) if args.xform else None
    result = occlude(
        source,
        attributor,
        target,
        anonymizer=spec,
        require_parse=not args.no_require_parse,
    )
    if args.json:
        _write_out(json.dumps(occlusion_to_json(result), indent=2) + "\n", args.out)
        return 0
    print(f"target: {classes[result.target_index]}  baseline: {result.baseline:.6f}")
    for seg in result.segments:
        text = seg.segment.text.rstrip("\n")
        if seg.status != "scored":
            print(f"   skipped\tline {seg.segment.span.line_start}\t{text}")
        else:
            print(f"{seg.relevance:+.6f}\tline {seg.segment.span.line_start}\t{text}")
    return 0


def cmd_eval(args) -> int:
    corpus = load_corpus(args.root)
    config = ScenarioConfig(
        scenario=args.scenario,
        technique=_technique(args),
        learner=args.learner,
        k=args.k,
        eps=None if args.eps == "auto" else float(args.eps),
        seed=args.seed,
        select_top=args.select_top,
    )
    report = run_scenario(corpus, config)
    a = report.aggregates
    print(f"scenario: {args.scenario}  technique: {args.technique}  learner: {args.learner}")
    print(f"folds: {a['n_folds']}  samples: {a['n_samples']}  excluded: {a['n_excluded']}")
    print(f"accuracy: {a['accuracy']:.4f} (std {a['accuracy_std']:.4f})")
    print(f"mean uncertainty (k={a['k']}): {a['mean_uncertainty']:.4f}")
    print(f"k-uncertain rate (eps={a['eps']:.4f}): {a['k_uncertain_rate']:.4f}")
    if args.out:
        report.save(args.out)
        print(f"saved report to {args.out}")
    if args.csv:
        Path(args.csv).write_text(report_csv(report), encoding="utf-8")
        print(f"saved csv to {args.csv}")
    return 0


def cmd_synth(args) -> int:
    corpus = generate_synthetic_corpus(
        n_authors=args.authors, n_tasks=args.tasks, seed=args.seed
    )
    root = Path(args.out)
    for p in corpus.programs:
        path = root / p.author / f"{p.task}.c"
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(p.source, encoding="utf-8")
    print(f"wrote {len(corpus)} programs under {root}")
    return 0


# --- parser wiring ---


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="anonybench",
        description="authorship attribution workbench for C programs",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("corpus", help="corpus utilities")
    corpus_sub = p.add_subparsers(dest="corpus_command", required=True)
    pc = corpus_sub.add_parser("check", help="validate a corpus directory")
    pc.add_argument("root")
    pc.set_defaults(func=cmd_corpus_check)

    p = sub.add_parser("fmt", help="reprint a program in canonical layout")
    p.add_argument("file")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_fmt)

    p = sub.add_parser("extract", help="extract features from one program")
    p.add_argument("file")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser("train", help="train an attribution model on a corpus")
    p.add_argument("root")
    p.add_argument("--learner", choices=("forest", "linear"), default="forest")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--select-top", type=int, default=1500)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("attribute", help="attribute one program with a trained model")
    p.add_argument("model")
    p.add_argument("file")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_attribute)

    p = sub.add_parser("score", help="rescore a report for another k or eps")
    p.add_argument("report")
    p.add_argument("--k", type=int, default=5)
    p.add_argument("--eps", default="auto")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_score)

    p = sub.add_parser("normalize", help="apply all normalization rules")
    p.add_argument("file")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_normalize)

    p = sub.add_parser("declue", help="normalize then eliminate residual clues")
    p.add_argument("file")
    p.add_argument("--out", default=None)
    p.add_argument("--min-string-len", type=int, default=None)
    p.add_argument("--decoys", default=None, help="file of decoy prototypes, one per line")
    p.set_defaults(func=cmd_declue)

    p = sub.add_parser("xform", help="run an external transformer command")
    p.add_argument("file")
    p.add_argument("--cmd", required=True, help="command template with {in} and optional {out}")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_xform)

    p = sub.add_parser("explain", help="explain an attribution")
    explain_sub = p.add_subparsers(dest="explain_command", required=True)
    ph = explain_sub.add_parser("highlight", help="tree-path relevance over source spans")
    ph.add_argument("model")
    ph.add_argument("file")
    ph.add_argument("--author", default=None)
    ph.add_argument("--html", default=None)
    ph.add_argument("--top", type=int, default=20)
    ph.set_defaults(func=cmd_explain_highlight)
    po = explain_sub.add_parser("occlude", help="line occlusion relevance")
    po.add_argument("model")
    po.add_argument("file")
    po.add_argument("--author", default=None)
    po.add_argument("--xform", default=None, help="identity, normalize, declue, or cmd:<template>")
    po.add_argument("--json", action="store_true")
    po.add_argument("--out", default=None)
    po.add_argument("--no-require-parse", action="store_true")
    po.set_defaults(func=cmd_explain_occlude)

    p = sub.add_parser("eval", help="run a threat scenario over a corpus")
    p.add_argument("root")
    p.add_argument("--scenario", choices=("static", "adaptive-augment", "adaptive-xformed"), default="static")
    p.add_argument("--technique", default="normalize", help="identity, normalize, declue, or cmd:<template>")
    p.add_argument("--learner", choices=("forest", "linear"), default="forest")
    p.add_argument("--k", type=int, default=5)
    p.add_argument("--eps", default="auto")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--select-top", type=int, default=1500)
    p.add_argument("--min-string-len", type=int, default=None)
    p.add_argument("--decoys", default=None)
    p.add_argument("--out", default=None)
    p.add_argument("--csv", default=None)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("synth", help="generate the synthetic style corpus")
    p.add_argument("--authors", type=int, default=10)
    p.add_argument("--tasks", type=int, default=8)
    p.add_argument("--seed", type=int, default=7)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_synth)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except AnonybenchError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
