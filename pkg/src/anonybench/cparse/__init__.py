"""Lexing, parsing, and canonical printing for the supported C subset."""

from .lexer import KEYWORDS, SourceSpan, Token, lex
from .parser import parse, parse_source
from .printer import expr_text, to_source
from . import nodes

__all__ = [
    "KEYWORDS",
    "SourceSpan",
    "Token",
    "lex",
    "parse",
    "parse_source",
    "expr_text",
    "to_source",
    "nodes",
]
