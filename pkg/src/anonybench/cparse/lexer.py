"""Tokenizer for the supported C subset.

Comments are skipped, preprocessor directive lines become single
``include-directive`` tokens (the parser decides whether they are actual
includes), and every other lexeme maps onto one of the fixed token kinds.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from ..errors import LexError

KEYWORDS = frozenset(
    """auto break case char const continue default do double else enum extern
    float for goto if inline int long register restrict return short signed
    sizeof static struct switch typedef union unsigned void volatile
    while""".split()
)

# Longest-first so ">>=" wins over ">>" and ">".
PUNCTUATORS = (
    ">>= <<= ... && || ++ -- += -= *= /= %= &= ^= |= == != <= >= -> << >> "
    "{ } ( ) [ ] ; , . ! ~ * / % + - < > & ^ | = ? : #".split()
)

_TOKEN_RE = re.compile(
    r"""
    (?P<directive>  ^[ \t]*\#[^\n]*)
  | (?P<blockcomment> /\*.*?\*/)
  | (?P<linecomment>  //[^\n]*)
  | (?P<opencomment>  /\*.*\Z)
  | (?P<string>   "(?:\\.|[^"\\\n])*")
  | (?P<openstring> "(?:\\.|[^"\\\n])*)
  | (?P<char>     '(?:\\.|[^'\\\n])+')
  | (?P<openchar> '(?:\\.|[^'\\\n])*)
  | (?P<float>    (?:\d+\.\d*|\.\d+)(?:[eE][+-]?\d+)?[fFlL]?|\d+[eE][+-]?\d+[fFlL]?)
  | (?P<int>      0[xX][0-9a-fA-F]+[uUlL]*|\d+[uUlL]*)
  | (?P<name>     [A-Za-z_]\w*)
  | (?P<punct>    %s)
  | (?P<space>    \s+)
  | (?P<bad>      .)
    """
    % "|".join(re.escape(p) for p in PUNCTUATORS),
    re.VERBOSE | re.DOTALL | re.MULTILINE,
)


@dataclass(frozen=True)
class SourceSpan:
    """Half-open byte range [start, end) with 1-based line numbers."""

    start: int
    end: int
    line_start: int
    line_end: int

    def contains(self, other: "SourceSpan") -> bool:
        return self.start <= other.start and other.end <= self.end


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    span: SourceSpan


def _span(source: str, start: int, end: int) -> SourceSpan:
    line_start = source.count("\n", 0, start) + 1
    line_end = source.count("\n", 0, max(start, end - 1)) + 1
    return SourceSpan(start, end, line_start, line_end)


def lex(source: str) -> list[Token]:
    """Tokenize ``source``, raising LexError on malformed lexemes."""
    tokens: list[Token] = []
    for m in _TOKEN_RE.finditer(source):
        kind = m.lastgroup
        text = m.group()
        start, end = m.start(), m.end()
        line = source.count("\n", 0, start) + 1
        if kind in ("space", "blockcomment", "linecomment"):
            continue
        if kind == "opencomment":
            raise LexError("unterminated block comment", line)
        if kind == "openstring":
            raise LexError("unterminated string literal", line)
        if kind == "openchar":
            raise LexError("unterminated character literal", line)
        if kind == "bad":
            raise LexError(f"unexpected character {text!r}", line)
        if kind == "directive":
            text = text.strip()
            tokens.append(Token("include-directive", text, _span(source, start, end)))
            continue
        if kind == "name":
            tok_kind = "keyword" if text in KEYWORDS else "identifier"
        elif kind == "int":
            tok_kind = "int-literal"
        elif kind == "float":
            tok_kind = "float-literal"
        elif kind == "string":
            tok_kind = "string-literal"
        elif kind == "char":
            tok_kind = "char-literal"
        else:
            tok_kind = "punctuator"
        tokens.append(Token(tok_kind, text, _span(source, start, end)))
    return tokens
