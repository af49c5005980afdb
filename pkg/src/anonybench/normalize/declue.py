"""Clue elimination: remove attribution signals that survive normalization.

Four independent edits, all semantics-preserving for the observable
behavior of the program: pad short string literals to a fixed length past
a terminator, replace the include list with a standard superset, add a
dead decoy block calling common library functions, and strip parameter
names from function pointer casts.
"""

from __future__ import annotations

import copy
from dataclasses import dataclass, field

from ..errors import ParameterError
from ..cparse import lex, parse, to_source
from ..cparse import nodes as N

DEFAULT_STD_HEADERS: tuple[str, ...] = (
    "assert.h",
    "ctype.h",
    "errno.h",
    "float.h",
    "limits.h",
    "locale.h",
    "math.h",
    "setjmp.h",
    "signal.h",
    "stdarg.h",
    "stddef.h",
    "stdio.h",
    "stdlib.h",
    "string.h",
    "time.h",
)

# Prototypes of the decoy calls placed in the dead block. Chosen from
# headers in the default superset; no math.h entries, so the output links
# without -lm.
DEFAULT_DECOYS: tuple[str, ...] = (
    "int abs(int)",
    "long labs(long)",
    "int atoi(const char *)",
    "long atol(const char *)",
    "unsigned long strlen(const char *)",
    "int strcmp(const char *, const char *)",
    "char *strcpy(char *, const char *)",
    "void *memset(void *, int, unsigned long)",
    "void *memcpy(void *, const void *, unsigned long)",
    "int getchar(void)",
    "int putchar(int)",
    "int rand(void)",
    "void srand(unsigned int)",
    "int isdigit(int)",
    "int isalpha(int)",
    "int toupper(int)",
    "int tolower(int)",
)


@dataclass(frozen=True)
class DeclueOptions:
    min_string_len: int = 32
    headers: tuple[str, ...] = DEFAULT_STD_HEADERS
    decoys: tuple[str, ...] = DEFAULT_DECOYS
    pad_char: str = "#"

    def __post_init__(self):
        if self.min_string_len < 0:
            raise ParameterError("min_string_len must be non-negative")
        if len(self.pad_char) != 1 or self.pad_char in "\"\\":
            raise ParameterError("pad_char must be a single character other than quote or backslash")


_HEX_DIGITS = "0123456789abcdefABCDEF"
_OCTAL_DIGITS = "01234567"


def string_logical_length(body: str) -> int:
    """Number of characters a C string literal body denotes.

    Each escape sequence counts as one character."""
    i = 0
    n = 0
    while i < len(body):
        if body[i] == "\\" and i + 1 < len(body):
            i += 2
            if body[i - 1] == "x":
                while i < len(body) and body[i] in _HEX_DIGITS:
                    i += 1
            elif body[i - 1] in _OCTAL_DIGITS:
                extra = 0
                while extra < 2 and i < len(body) and body[i] in _OCTAL_DIGITS:
                    i += 1
                    extra += 1
        else:
            i += 1
        n += 1
    return n


def pad_string_body(body: str, min_len: int, pad_char: str = "#") -> str:
    """Pad a literal body to min_len logical characters past a NUL.

    The embedded terminator keeps every string operation on the literal
    behaving exactly as before; only the array contents past the end
    change."""
    length = string_logical_length(body)
    if length >= min_len:
        return body
    return body + "\\0" + pad_char * (min_len - length - 1)


def _pad_strings(unit: N.TranslationUnit, options: DeclueOptions) -> None:
    skip: set[int] = set()

    def mark(init) -> None:
        if isinstance(init, N.InitList):
            for item in init.items:
                mark(item)
        elif isinstance(init, N.Literal) and init.category == "string":
            skip.add(id(init))

    # padding a literal that fills a fixed-size char array would overflow it
    for node in N.walk(unit):
        if isinstance(node, N.Declaration):
            for d in node.declarators:
                if d.array_dims:
                    mark(d.init)
    for node in N.walk(unit):
        if isinstance(node, N.Literal) and node.category == "string" and id(node) not in skip:
            body = node.text[1:-1]
            node.text = '"%s"' % pad_string_body(body, options.min_string_len, options.pad_char)


def _replace_headers(unit: N.TranslationUnit, options: DeclueOptions) -> None:
    wanted = list(options.headers)
    seen = set(wanted)
    for item in unit.items:
        if isinstance(item, N.Include) and item.header not in seen:
            seen.add(item.header)
            wanted.append(item.header)
    includes = [N.Include(h, system=True) for h in wanted]
    rest = [item for item in unit.items if not isinstance(item, N.Include)]
    unit.items = includes + rest


def parse_decoy_signature(text: str) -> N.FunctionDef:
    """Parse a prototype-style decoy signature such as "int abs(int)"."""
    try:
        unit = parse(lex(text.strip().rstrip(";") + ";"))
    except Exception as exc:
        raise ParameterError(f"bad decoy signature {text!r}: {exc}") from exc
    if len(unit.items) != 1 or not isinstance(unit.items[0], N.FunctionDef):
        raise ParameterError(f"bad decoy signature {text!r}: not a function prototype")
    return unit.items[0]


def _default_argument(param: N.Declaration) -> N.Expr:
    decl = param.declarators[0]
    if decl.pointer > 0 or decl.array_dims:
        cast_type = N.TypeName(param.type.specifiers, pointer=max(decl.pointer, 1))
        return N.Cast(cast_type, N.Literal("0", "int"))
    if "float" in param.type.specifiers or "double" in param.type.specifiers:
        return N.Literal("0.0", "float")
    return N.Literal("0", "int")


def _decoy_call(sig: N.FunctionDef) -> N.ExprStmt:
    args = [] if sig.takes_void else [_default_argument(p) for p in sig.params]
    return N.ExprStmt(N.Call(N.Identifier(sig.name), args))


def _insert_decoys(unit: N.TranslationUnit, options: DeclueOptions) -> None:
    target = None
    for item in unit.items:
        if isinstance(item, N.FunctionDef) and item.body is not None:
            if item.name == "main":
                target = item
                break
            if target is None:
                target = item
    if target is None or not options.decoys:
        return
    assert target.body is not None
    if target.body.items and _is_dead_block(target.body.items[0]):
        return  # already treated
    calls = [_decoy_call(parse_decoy_signature(s)) for s in options.decoys]
    block = N.IfStmt(N.Literal("0", "int"), N.CompoundStmt(list(calls)), None)
    target.body.items.insert(0, block)


def _is_dead_block(s: N.Stmt) -> bool:
    return (
        isinstance(s, N.IfStmt)
        and s.orelse is None
        and isinstance(s.cond, N.Literal)
        and s.cond.text == "0"
    )


def _strip_cast_param_names(unit: N.TranslationUnit) -> None:
    for node in N.walk(unit):
        if isinstance(node, N.Cast) and node.type.funcptr is not None:
            for param in node.type.funcptr.params:
                for d in param.declarators:
                    d.name = None


def eliminate_clues(
    unit: N.TranslationUnit, options: DeclueOptions | None = None
) -> N.TranslationUnit:
    """Apply all clue-elimination edits to a copy of the tree."""
    opts = options or DeclueOptions()
    u = copy.deepcopy(unit)
    _replace_headers(u, opts)
    _pad_strings(u, opts)
    _strip_cast_param_names(u)
    _insert_decoys(u, opts)
    return u


def eliminate_clues_source(source: str, options: DeclueOptions | None = None) -> str:
    """Parse, eliminate clues, and reprint source text."""
    return to_source(eliminate_clues(parse(lex(source)), options))
