"""Corpus ingestion, preprocessing, and grouped fold planning.

A corpus is a directory of author subdirectories, each holding one C file
per task. Fold planning groups strictly by task so no task ever appears on
both sides of a split.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field, replace
from pathlib import Path

from .errors import IngestionError, ParameterError, UnsupportedConstructError

STAGES = ("raw", "preprocessed", "normalized", "transformed")


@dataclass(frozen=True)
class Program:
    """One source file tied to its author and task labels."""

    source: str
    author: str
    task: str
    stage: str = "raw"
    path: str | None = field(default=None, compare=False)


@dataclass(frozen=True)
class Corpus:
    programs: tuple[Program, ...]
    authors: tuple[str, ...]
    tasks: tuple[str, ...]
    warnings: tuple[str, ...] = ()

    def __len__(self) -> int:
        return len(self.programs)


@dataclass(frozen=True)
class FoldPlan:
    """Index sets for one grouped train/test split."""

    fold_index: int
    train_tasks: tuple[str, ...]
    test_tasks: tuple[str, ...]
    train_indices: tuple[int, ...]
    test_indices: tuple[int, ...]


def build_corpus(programs: list[Program], warnings: list[str] | None = None) -> Corpus:
    """Assemble a corpus from programs, validating label uniqueness."""
    if not programs:
        raise IngestionError("corpus contains no programs")
    seen: set[tuple[str, str]] = set()
    for p in programs:
        key = (p.author, p.task)
        if key in seen:
            raise IngestionError(f"duplicate program for author {p.author!r} task {p.task!r}")
        seen.add(key)
    authors = tuple(sorted({p.author for p in programs}))
    tasks = tuple(sorted({p.task for p in programs}))
    warns = list(warnings or [])
    for author in authors:
        have = {p.task for p in programs if p.author == author}
        for task in tasks:
            if task not in have:
                warns.append(f"author {author!r} has no file for task {task!r}")
    return Corpus(tuple(programs), authors, tasks, tuple(warns))


def load_corpus(root: str | Path) -> Corpus:
    """Load <root>/<author>/<task>.c files into a corpus.

    Non-directory entries at the root and non-.c files inside author
    directories are skipped with a warning. Duplicate (author, task) pairs,
    undecodable files, and an empty result are ingestion errors.
    """
    root = Path(root)
    if not root.is_dir():
        raise IngestionError(f"corpus root {str(root)!r} is not a directory")
    programs: list[Program] = []
    warnings: list[str] = []
    for entry in sorted(root.iterdir()):
        if not entry.is_dir():
            warnings.append(f"skipped non-directory entry {entry.name!r}")
            continue
        author = entry.name
        for f in sorted(entry.iterdir()):
            if not f.is_file() or f.suffix != ".c":
                warnings.append(f"skipped non-source file {author}/{f.name}")
                continue
            try:
                text = f.read_text(encoding="utf-8")
            except UnicodeDecodeError as exc:
                raise IngestionError(f"cannot decode {author}/{f.name}: {exc}") from None
            programs.append(
                Program(source=text, author=author, task=f.stem, stage="raw", path=str(f))
            )
    if not programs:
        raise IngestionError(f"no programs found under {str(root)!r}")
    return build_corpus(programs, warnings)


# Strings and char literals pass through untouched; comments are replaced by
# whitespace that preserves line numbering.
_COMMENT_AWARE_RE = re.compile(
    r'"(?:\\.|[^"\\\n])*"'
    r"|'(?:\\.|[^'\\\n])+'"
    r"|/\*.*?\*/"
    r"|//[^\n]*",
    re.DOTALL,
)

_DEFINE_RE = re.compile(r"^[ \t]*#[ \t]*define[ \t]+(\w+)(\(?)[ \t]*(.*?)[ \t]*$")
_DIRECTIVE_RE = re.compile(r"^[ \t]*#[ \t]*(\w+)")


def _strip_comments(text: str) -> str:
    def repl(m: re.Match) -> str:
        s = m.group()
        if s.startswith(("/*", "//")):
            return "\n" * s.count("\n") + " "
        return s

    return _COMMENT_AWARE_RE.sub(repl, text)


def _substitute_outside_strings(text: str, mapping: dict[str, str]) -> str:
    if not mapping:
        return text
    name_re = re.compile(r"\b(" + "|".join(re.escape(k) for k in mapping) + r")\b")
    pieces: list[str] = []
    pos = 0
    for m in _COMMENT_AWARE_RE.finditer(text):
        pieces.append(name_re.sub(lambda g: mapping[g.group(1)], text[pos : m.start()]))
        pieces.append(m.group())
        pos = m.end()
    pieces.append(name_re.sub(lambda g: mapping[g.group(1)], text[pos:]))
    return "".join(pieces)


def preprocess(program: Program) -> Program:
    """Strip comments, expand object-like defines, keep includes.

    Accepts raw or already-preprocessed programs and is idempotent.
    Function-like macros and conditional compilation are unsupported.
    """
    if program.stage not in ("raw", "preprocessed"):
        raise ParameterError(
            f"preprocess expects a raw or preprocessed program, got stage {program.stage!r}"
        )
    text = _strip_comments(program.source)
    defines: dict[str, str] = {}
    kept_lines: list[str] = []
    for lineno, line in enumerate(text.split("\n"), start=1):
        m = _DEFINE_RE.match(line)
        if m is not None:
            name, paren, value = m.groups()
            if paren == "(":
                raise UnsupportedConstructError(
                    f"function-like macro {name!r} is not supported", lineno
                )
            defines[name] = value
            kept_lines.append("")
            continue
        d = _DIRECTIVE_RE.match(line)
        if d is not None and d.group(1) not in ("include",):
            raise UnsupportedConstructError(
                f"unsupported preprocessor directive #{d.group(1)}", lineno
            )
        kept_lines.append(line)
    text = "\n".join(kept_lines)
    # Defines may reference each other; substitute to a fixed point (capped).
    for _ in range(10):
        new_text = _substitute_outside_strings(text, defines)
        if new_text == text:
            break
        text = new_text
    return replace(program, source=text, stage="preprocessed")


def grouped_kfold(corpus: Corpus, n_folds: int | None = None) -> list[FoldPlan]:
    """Plan grouped splits: every task's files land in exactly one test fold.

    Default is leave-one-task-out. With fewer folds than tasks, tasks are
    distributed round-robin in sorted order.
    """
    tasks = corpus.tasks
    if n_folds is None:
        n_folds = len(tasks)
    if n_folds < 2:
        raise ParameterError("grouped k-fold needs at least 2 folds")
    if n_folds > len(tasks):
        raise ParameterError(
            f"cannot make {n_folds} folds from {len(tasks)} task groups"
        )
    fold_tasks: list[list[str]] = [[] for _ in range(n_folds)]
    for idx, task in enumerate(tasks):
        fold_tasks[idx % n_folds].append(task)
    plans: list[FoldPlan] = []
    for j in range(n_folds):
        test = set(fold_tasks[j])
        test_idx = tuple(i for i, p in enumerate(corpus.programs) if p.task in test)
        train_idx = tuple(i for i, p in enumerate(corpus.programs) if p.task not in test)
        plans.append(
            FoldPlan(
                fold_index=j,
                train_tasks=tuple(t for t in tasks if t not in test),
                test_tasks=tuple(fold_tasks[j]),
                train_indices=train_idx,
                test_indices=test_idx,
            )
        )
    return plans
