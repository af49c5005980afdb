"""Synthetic authorship corpus with controlled style dimensions.

Each generated author is a style profile over independent habits. Most
habits are exactly the surface forms the normalization rules rewrite
(naming, braces, compound assignment, declaration grouping, parens, main
signature, comma statements, type spellings, early returns), so
normalizing a program erases them. Two habits survive normalization on
purpose: loop construct choice (for vs while) and integer printf format
("%d" vs "%i", identical output). The survivors partition authors into a
small number of residual cells, which pins down how much accuracy any
attributor can retain after normalization.

Every task template renders the same algorithm and constants for every
author; only profile habits vary, so two authors in the same residual
cell normalize to byte-identical programs.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .corpus import Corpus, Program, build_corpus
from .errors import ParameterError

_NAMING = (
    {"i": "i", "j": "j", "n": "n", "acc": "sum", "acc2": "prod", "tmp": "t", "arr": "data", "val": "x", "res": "r"},
    {"i": "idx", "j": "jdx", "n": "len", "acc": "total", "acc2": "result", "tmp": "tmp", "arr": "values", "val": "item", "res": "out"},
    {"i": "a", "j": "b", "n": "m", "acc": "acc", "acc2": "mul", "tmp": "w", "arr": "buf", "val": "v", "res": "q"},
    {"i": "ii", "j": "jj", "n": "nn", "acc": "s1", "acc2": "s2", "tmp": "tt", "arr": "tab", "val": "xx", "res": "rr"},
    {"i": "pos", "j": "cur", "n": "count", "acc": "accum", "acc2": "scale", "tmp": "hold", "arr": "list", "val": "elem", "res": "ret"},
)

_HELPER_POOL = (
    "step", "calc", "work", "proc", "run1", "eval1", "apply1", "doit",
    "solve", "crunch", "grind", "churn", "mixup", "fold1", "meld", "blend",
    "visit", "probe", "scan1", "sweep", "march", "trek", "stride", "pace",
    "carve", "shape", "forge", "craft", "build1", "make1", "form1", "mold",
    "tally", "score1", "gauge", "meter", "weigh", "size1", "rank1", "grade",
    "sift", "cull", "pick1", "glean", "reap1", "mine1", "dig1", "delve",
    "spin1", "twist", "turn1", "whirl", "swirl", "wheel", "round1", "cycle",
    "mark1", "stamp", "brand", "label1", "tag1", "note1", "log1", "jot1",
)


@dataclass(frozen=True)
class StyleProfile:
    """One author's coding habits."""

    naming: int  # index into _NAMING
    helper: str  # habitual helper function name
    int_type: str  # "long" | "long long"
    braces: str  # "always" | "minimal"
    else_style: str  # "chain" | "early"
    incr: str  # "compound" | "plain"
    decls: str  # "multi" | "single"
    parens: str  # "extra" | "plain"
    main_sig: str  # "empty" | "void" | "args"
    comma: str  # "joined" | "separate"
    loop: str  # "for" | "while"   (survives normalization)
    fmt: str  # "%d" | "%i"        (survives normalization)

    @property
    def residual_cell(self) -> tuple[str, str]:
        return (self.loop, self.fmt)

    def names(self) -> dict[str, str]:
        return _NAMING[self.naming]


_DIMS = (
    "naming", "helper", "int_type", "braces", "else_style", "incr",
    "decls", "parens", "main_sig", "comma", "loop", "fmt",
)


def profile_distance(a: StyleProfile, b: StyleProfile) -> int:
    return sum(1 for d in _DIMS if getattr(a, d) != getattr(b, d))


def _draw_profiles(n_authors: int, rng: np.random.Generator) -> list[StyleProfile]:
    if n_authors > len(_HELPER_POOL):
        raise ParameterError(f"at most {len(_HELPER_POOL)} authors supported")
    helpers = [str(h) for h in rng.choice(_HELPER_POOL, size=n_authors, replace=False)]

    def draw(i: int) -> StyleProfile:
        return StyleProfile(
            naming=int(rng.integers(len(_NAMING))),
            helper=helpers[i],
            int_type=("long", "long long")[rng.integers(2)],
            braces=("always", "minimal")[rng.integers(2)],
            else_style=("chain", "early")[rng.integers(2)],
            incr=("compound", "plain")[rng.integers(2)],
            decls=("multi", "single")[rng.integers(2)],
            parens=("extra", "plain")[rng.integers(2)],
            main_sig=("empty", "void", "args")[rng.integers(3)],
            comma=("joined", "separate")[rng.integers(2)],
            # residual dims are assigned round-robin so the cells stay
            # balanced no matter what the rng does
            loop=("for", "while")[i % 2],
            fmt=("%d", "%i")[(i // 2) % 2],
        )

    profiles: list[StyleProfile] = []
    for i in range(n_authors):
        candidate = draw(i)
        for _ in range(200):
            if all(profile_distance(candidate, p) >= 3 for p in profiles):
                break
            candidate = draw(i)
        else:
            raise ParameterError("could not draw pairwise-distinct style profiles")
        profiles.append(candidate)
    return profiles


# --- rendering helpers ---


def _main_open(p: StyleProfile) -> str:
    sig = {"empty": "()", "void": "(void)", "args": "(int argc, char **argv)"}[p.main_sig]
    return f"int main{sig} {{"


def _P(p: StyleProfile, expr: str) -> str:
    return f"({expr})" if p.parens == "extra" else expr


def _incr(p: StyleProfile, var: str, op: str, expr: str) -> str:
    if p.incr == "compound":
        return f"{var} {op}= {expr};"
    return f"{var} = {var} {op} {expr};"


def _decl_lines(p: StyleProfile, groups: list[tuple[str, list[str]]], indent: str) -> list[str]:
    """groups: (ctype, ["name" or "name = init", ...]) in declaration order."""
    out = []
    for ctype, entries in groups:
        if p.decls == "multi" and len(entries) > 1:
            out.append(f"{indent}{ctype} {', '.join(entries)};")
        else:
            for e in entries:
                out.append(f"{indent}{ctype} {e};")
    return out


def _assign_pair(p: StyleProfile, first: str, second: str, indent: str) -> list[str]:
    if p.comma == "joined":
        return [f"{indent}{first}, {second};"]
    return [f"{indent}{first};", f"{indent}{second};"]


def _body(p: StyleProfile, stmts: list[str], indent: str) -> list[str]:
    """Brace a control body according to habit; multi-statement bodies
    always need braces."""
    if p.braces == "always" or len(stmts) > 1:
        return ["{"] + [f"{indent}    {s}" for s in stmts] + [f"{indent}}}"]
    return [""] + [f"{indent}    {stmts[0]}"]


def _attach(header: str, body_lines: list[str]) -> list[str]:
    if body_lines[0] == "{":
        return [f"{header} {{"] + body_lines[1:]
    return [header] + body_lines[1:]


def _count_loop(
    p: StyleProfile, var: str, start: str, cond: str, stmts: list[str], indent: str
) -> list[str]:
    if p.loop == "for":
        header = f"{indent}for ({var} = {start}; {cond}; {var}++)"
        return _attach(header, _body(p, stmts, indent))
    lines = [f"{indent}{var} = {start};"]
    inner = stmts + [f"{var}++;"]
    lines.extend(_attach(f"{indent}while ({cond})", _body(p, inner, indent)))
    return lines


def _ret_helper(p: StyleProfile, cond: str, a: str, b: str) -> list[str]:
    """Body of a two-way selection helper, per else/brace habits."""
    if p.else_style == "chain":
        lines = _attach(f"    if ({cond})", _body(p, [f"return {a};"], "    "))
        if lines[-1].endswith("}"):
            lines[-1] = lines[-1] + " else {"
            lines.append(f"        return {b};")
            lines.append("    }")
        else:
            lines.append("    else")
            lines.append(f"        return {b};")
        return lines
    lines = _attach(f"    if ({cond})", _body(p, [f"return {a};"], "    "))
    lines.append(f"    return {b};")
    return lines


def _printf(p: StyleProfile, expr: str) -> str:
    return f'printf("{p.fmt}\\n", {expr});'


# --- task templates ---
# Each template: draw(rng) -> dict of task constants; render(profile, data) -> source.


def _draw_sum_even_odd(rng):
    return {"values": [int(v) for v in rng.integers(1, 60, size=10)]}


def _render_sum_even_odd(p: StyleProfile, d) -> str:
    nm = p.names()
    arr, i, acc, acc2 = nm["arr"], nm["i"], nm["acc"], nm["acc2"]
    vals = ", ".join(str(v) for v in d["values"])
    lines = ["#include <stdio.h>", "", _main_open(p)]
    lines.append(f"    int {arr}[10] = {{{vals}}};")
    lines.extend(_decl_lines(p, [("int", [i]), (p.int_type, [acc, acc2])], "    "))
    lines.extend(_assign_pair(p, f"{acc} = 0", f"{acc2} = 0", "    "))
    even = _incr(p, acc, "+", _P(p, f"{arr}[{i}]"))
    odd = _incr(p, acc2, "+", _P(p, f"{arr}[{i}]"))
    cond = _P(p, f"{arr}[{i}] % 2") + " == 0"
    branch = _attach(f"        if ({cond})", _body(p, [even], "        "))
    if branch[-1].endswith("}"):
        branch[-1] += " else {"
        branch.append(f"            {odd}")
        branch.append("        }")
    else:
        branch.append("        else")
        branch.append(f"            {odd}")
    inner = [ln[8:] for ln in branch]
    lines.extend(_count_loop(p, i, "0", f"{i} < 10", inner, "    "))
    lines.append("    " + _printf(p, f"(int){acc}"))
    lines.append("    " + _printf(p, f"(int){acc2}"))
    lines.append("    return 0;")
    lines.append("}")
    return "\n".join(lines) + "\n"


def _draw_gcd_pairs(rng):
    pairs = []
    for _ in range(4):
        g = int(rng.integers(2, 12))
        a = g * int(rng.integers(2, 15))
        b = g * int(rng.integers(2, 15))
        pairs.append((a, b))
    return {"pairs": pairs}


def _render_gcd_pairs(p: StyleProfile, d) -> str:
    nm = p.names()
    i, acc, tmp = nm["i"], nm["acc"], nm["tmp"]
    fa, fb = nm["val"], nm["res"]
    n_pairs = len(d["pairs"])
    xs = ", ".join(str(a) for a, _ in d["pairs"])
    ys = ", ".join(str(b) for _, b in d["pairs"])
    lines = ["#include <stdio.h>", ""]
    lines.append(f"{p.int_type} {p.helper}({p.int_type} {fa}, {p.int_type} {fb}) {{")
    lines.append(f"    {p.int_type} {tmp};")
    loop_body = [f"{tmp} = {fb};", f"{fb} = {fa} % {fb};", f"{fa} = {tmp};"]
    lines.extend(_attach(f"    while ({_P(p, f'{fb} != 0')})", _body(p, loop_body, "    ")))
    lines.append(f"    return {fa};")
    lines.append("}")
    lines.append("")
    lines.append(_main_open(p))
    lines.append(f"    int {nm['arr']}[{n_pairs}] = {{{xs}}};")
    lines.append(f"    int {nm['acc2']}[{n_pairs}] = {{{ys}}};")
    lines.extend(_decl_lines(p, [("int", [i]), (p.int_type, [acc])], "    "))
    lines.append(f"    {acc} = 0;")
    call = f"{p.helper}({nm['arr']}[{i}], {nm['acc2']}[{i}])"
    stmt = _incr(p, acc, "+", _P(p, call))
    lines.extend(_count_loop(p, i, "0", f"{i} < {n_pairs}", [stmt], "    "))
    lines.append("    " + _printf(p, f"(int){acc}"))
    lines.append("    return 0;")
    lines.append("}")
    return "\n".join(lines) + "\n"


def _draw_running_max(rng):
    return {"values": [int(v) for v in rng.integers(5, 500, size=12)]}


def _render_running_max(p: StyleProfile, d) -> str:
    nm = p.names()
    arr, i, res = nm["arr"], nm["i"], nm["res"]
    fa, fb = nm["val"], nm["tmp"]
    vals = ", ".join(str(v) for v in d["values"])
    lines = ["#include <stdio.h>", ""]
    lines.append(f"{p.int_type} {p.helper}({p.int_type} {fa}, {p.int_type} {fb}) {{")
    lines.extend(_ret_helper(p, _P(p, f"{fa} > {fb}"), fa, fb))
    lines.append("}")
    lines.append("")
    lines.append(_main_open(p))
    lines.append(f"    int {arr}[12] = {{{vals}}};")
    lines.extend(_decl_lines(p, [("int", [i]), (p.int_type, [res])], "    "))
    lines.append(f"    {res} = 0;")
    stmt = f"{res} = {p.helper}({res}, {arr}[{i}]);"
    lines.extend(_count_loop(p, i, "0", f"{i} < 12", [stmt], "    "))
    lines.append("    " + _printf(p, f"(int){res}"))
    lines.append("    return 0;")
    lines.append("}")
    return "\n".join(lines) + "\n"


def _draw_fibonacci(rng):
    return {"count": int(rng.integers(10, 16))}


def _render_fibonacci(p: StyleProfile, d) -> str:
    nm = p.names()
    i, a, b, t = nm["i"], nm["acc"], nm["acc2"], nm["tmp"]
    lines = ["#include <stdio.h>", "", _main_open(p)]
    lines.extend(_decl_lines(p, [("int", [i]), (p.int_type, [a, b, t])], "    "))
    lines.extend(_assign_pair(p, f"{a} = 0", f"{b} = 1", "    "))
    stmts = [
        _printf(p, f"(int){a}"),
        f"{t} = {a} + {b};",
        f"{a} = {b};",
        f"{b} = {t};",
    ]
    lines.extend(_count_loop(p, i, "0", f"{i} < {d['count']}", stmts, "    "))
    lines.append("    return 0;")
    lines.append("}")
    return "\n".join(lines) + "\n"


def _draw_reverse(rng):
    return {"values": [int(v) for v in rng.integers(1, 90, size=9)]}


def _render_reverse(p: StyleProfile, d) -> str:
    nm = p.names()
    arr, i, t, n = nm["arr"], nm["i"], nm["tmp"], len(d["values"])
    vals = ", ".join(str(v) for v in d["values"])
    lines = ["#include <stdio.h>", "", _main_open(p)]
    lines.append(f"    int {arr}[{n}] = {{{vals}}};")
    lines.extend(_decl_lines(p, [("int", [i, t])], "    "))
    swap = [
        f"{t} = {arr}[{i}];",
        f"{arr}[{i}] = {arr}[{n} - 1 - {i}];",
        f"{arr}[{n} - 1 - {i}] = {t};",
    ]
    lines.extend(_count_loop(p, i, "0", f"{i} < {n} / 2", swap, "    "))
    say = _printf(p, _P(p, f"{arr}[{i}]"))
    lines.extend(_count_loop(p, i, "0", f"{i} < {n}", [say], "    "))
    lines.append("    return 0;")
    lines.append("}")
    return "\n".join(lines) + "\n"


_WORDS = (
    "meadowlark", "undercurrent", "paperweight", "thunderclap", "windowpane",
    "cobblestone", "marmalade", "quicksilver", "horseradish", "candlewick",
)


def _draw_char_sum(rng):
    return {"text": _WORDS[int(rng.integers(len(_WORDS)))]}


def _render_char_sum(p: StyleProfile, d) -> str:
    nm = p.names()
    i, acc = nm["i"], nm["acc"]
    lines = ["#include <stdio.h>", "", _main_open(p)]
    lines.append(f"    char {nm['arr']}[] = \"{d['text']}\";")
    lines.extend(_decl_lines(p, [("int", [i]), (p.int_type, [acc])], "    "))
    lines.append(f"    {acc} = 0;")
    stmt = _incr(p, acc, "+", _P(p, f"{nm['arr']}[{i}]"))
    lines.extend(_count_loop(p, i, "0", f"{nm['arr']}[{i}] != '\\0'", [stmt], "    "))
    lines.append("    " + _printf(p, f"(int){acc}"))
    lines.append("    return 0;")
    lines.append("}")
    return "\n".join(lines) + "\n"


def _draw_power_table(rng):
    return {"base": int(rng.integers(2, 5)), "count": int(rng.integers(7, 11))}


def _render_power_table(p: StyleProfile, d) -> str:
    nm = p.names()
    i, j, acc = nm["i"], nm["j"], nm["acc"]
    fa, fb = nm["val"], nm["res"]
    lines = ["#include <stdio.h>", ""]
    lines.append(f"{p.int_type} {p.helper}(int {fa}, int {fb}) {{")
    lines.append(f"    {p.int_type} {acc};")
    lines.append(f"    int {j};")
    lines.append(f"    {acc} = 1;")
    stmt = _incr(p, acc, "*", _P(p, fa))
    lines.extend(_count_loop(p, j, "0", f"{j} < {fb}", [stmt], "    "))
    lines.append(f"    return {acc};")
    lines.append("}")
    lines.append("")
    lines.append(_main_open(p))
    lines.append(f"    int {i};")
    say = _printf(p, f"(int){p.helper}({d['base']}, {i})")
    lines.extend(_count_loop(p, i, "0", f"{i} < {d['count']}", [say], "    "))
    lines.append("    return 0;")
    lines.append("}")
    return "\n".join(lines) + "\n"


def _draw_count_vowels(rng):
    return {"text": _WORDS[int(rng.integers(len(_WORDS)))] + _WORDS[int(rng.integers(len(_WORDS)))]}


def _render_count_vowels(p: StyleProfile, d) -> str:
    nm = p.names()
    i, acc = nm["i"], nm["acc"]
    lines = ["#include <stdio.h>", "", _main_open(p)]
    lines.append(f"    char {nm['arr']}[] = \"{d['text']}\";")
    lines.extend(_decl_lines(p, [("int", [i]), (p.int_type, [acc])], "    "))
    lines.append(f"    {acc} = 0;")
    c = f"{nm['arr']}[{i}]"
    cond = " || ".join(_P(p, f"{c} == '{v}'") for v in "aeiou")
    stmt = _incr(p, acc, "+", "1")
    inner = _attach(f"        if ({cond})", _body(p, [stmt], "        "))
    inner = [ln[8:] for ln in inner]
    lines.extend(_count_loop(p, i, "0", f"{c} != '\\0'", inner, "    "))
    lines.append("    " + _printf(p, f"(int){acc}"))
    lines.append("    return 0;")
    lines.append("}")
    return "\n".join(lines) + "\n"


TEMPLATES = (
    ("sum-even-odd", _draw_sum_even_odd, _render_sum_even_odd),
    ("gcd-pairs", _draw_gcd_pairs, _render_gcd_pairs),
    ("running-max", _draw_running_max, _render_running_max),
    ("fibonacci", _draw_fibonacci, _render_fibonacci),
    ("reverse", _draw_reverse, _render_reverse),
    ("char-sum", _draw_char_sum, _render_char_sum),
    ("power-table", _draw_power_table, _render_power_table),
    ("count-vowels", _draw_count_vowels, _render_count_vowels),
)


def generate_synthetic_corpus(
    n_authors: int = 10, n_tasks: int = 8, seed: int = 7
) -> Corpus:
    """Deterministic style-controlled corpus: same seed, same bytes."""
    if n_authors < 2:
        raise ParameterError("need at least 2 authors")
    if n_tasks < 1:
        raise ParameterError("need at least 1 task")
    rng = np.random.default_rng(seed)
    profiles = _draw_profiles(n_authors, rng)
    tasks = []
    for j in range(n_tasks):
        name, draw, render = TEMPLATES[j % len(TEMPLATES)]
        tasks.append((f"task{j:02d}", render, draw(rng)))
    programs = []
    for i, profile in enumerate(profiles):
        for task_id, render, data in tasks:
            programs.append(
                Program(
                    source=render(profile, data),
                    author=f"author{i:02d}",
                    task=task_id,
                    stage="raw",
                )
            )
    return build_corpus(programs)


def synthetic_profiles(n_authors: int = 10, seed: int = 7) -> list[StyleProfile]:
    """The profiles generate_synthetic_corpus would assign, for inspection."""
    rng = np.random.default_rng(seed)
    return _draw_profiles(n_authors, rng)
