"""Recursive-descent parser for the supported C subset.

Every node carries a span covering its source tokens. Constructs that are
recognized C but outside the subset (goto, typedef, enum, union, sizeof,
the conditional operator) raise UnsupportedConstructError naming the
construct and its line.
"""

from __future__ import annotations

import re

from ..errors import ParseError, UnsupportedConstructError
from .lexer import SourceSpan, Token, lex
from . import nodes as N

TYPE_KEYWORDS = frozenset(
    "void char short int long float double signed unsigned struct const".split()
)

ASSIGN_OPS = {
    "=": None,
    "+=": "+", "-=": "-", "*=": "*", "/=": "/", "%=": "%",
    "<<=": "<<", ">>=": ">>", "&=": "&", "^=": "^", "|=": "|",
}

BIN_PREC = {
    "||": 1, "&&": 2, "|": 3, "^": 4, "&": 5,
    "==": 6, "!=": 6,
    "<": 7, ">": 7, "<=": 7, ">=": 7,
    "<<": 8, ">>": 8,
    "+": 9, "-": 9,
    "*": 10, "/": 10, "%": 10,
}

UNARY_OPS = frozenset(["+", "-", "!", "~", "*", "&", "++", "--"])

_LITERAL_CATEGORY = {
    "int-literal": "int",
    "float-literal": "float",
    "string-literal": "string",
    "char-literal": "char",
}

_INCLUDE_RE = re.compile(r'^#\s*include\s*(<[^<>]+>|"[^"]+")\s*$')

_UNSUPPORTED_KEYWORDS = {
    "goto": "goto statements",
    "typedef": "typedef declarations",
    "enum": "enum types",
    "union": "union types",
    "sizeof": "sizeof expressions",
}


def _join_spans(a: SourceSpan, b: SourceSpan) -> SourceSpan:
    return SourceSpan(a.start, b.end, a.line_start, b.line_end)


class _Parser:
    def __init__(self, tokens: list[Token]):
        self.tokens = tokens
        self.i = 0

    # --- token plumbing ---

    def peek(self, offset: int = 0) -> Token | None:
        j = self.i + offset
        return self.tokens[j] if j < len(self.tokens) else None

    def at(self, text: str | None = None, kind: str | None = None) -> bool:
        tok = self.peek()
        if tok is None:
            return False
        if kind is not None and tok.kind != kind:
            return False
        if text is not None and tok.text != text:
            return False
        return True

    def advance(self) -> Token:
        tok = self.peek()
        if tok is None:
            raise ParseError("unexpected end of input")
        self.i += 1
        return tok

    def expect(self, text: str) -> Token:
        tok = self.peek()
        if tok is None:
            raise ParseError(f"expected {text!r}, found end of input")
        if tok.text != text:
            raise ParseError(
                f"expected {text!r}, found {tok.text!r}", tok.span.line_start
            )
        return self.advance()

    def _line(self) -> int | None:
        tok = self.peek()
        return tok.span.line_start if tok is not None else None

    def _check_unsupported(self) -> None:
        tok = self.peek()
        if tok is not None and tok.kind == "keyword":
            label = _UNSUPPORTED_KEYWORDS.get(tok.text)
            if label is not None:
                raise UnsupportedConstructError(
                    f"{label} are not supported", tok.span.line_start
                )

    def _span_from(self, start_index: int) -> SourceSpan:
        first = self.tokens[start_index]
        last = self.tokens[self.i - 1] if self.i > start_index else first
        return _join_spans(first.span, last.span)

    # --- top level ---

    def parse_unit(self) -> N.TranslationUnit:
        start = self.i
        items: list[N.Node] = []
        while self.peek() is not None:
            if self.at(kind="include-directive"):
                items.append(self._parse_include())
            else:
                items.append(self._parse_external())
        unit = N.TranslationUnit(items)
        if self.tokens:
            unit.span = self._span_from(start)
        return unit

    def _parse_include(self) -> N.Include:
        tok = self.advance()
        m = _INCLUDE_RE.match(tok.text)
        if m is None:
            if re.match(r"^#\s*include\b", tok.text):
                raise ParseError(
                    f"malformed include directive: {tok.text}", tok.span.line_start
                )
            raise UnsupportedConstructError(
                f"unsupported preprocessor directive: {tok.text}", tok.span.line_start
            )
        spelled = m.group(1)
        node = N.Include(header=spelled[1:-1], system=spelled.startswith("<"))
        node.span = tok.span
        return node

    def _parse_external(self) -> N.Node:
        self._check_unsupported()
        start = self.i
        if not self._at_type_start():
            tok = self.peek()
            assert tok is not None
            raise ParseError(
                f"expected declaration or function, found {tok.text!r}",
                tok.span.line_start,
            )
        specs, struct = self._parse_specifiers()
        if self.at(";"):
            self.advance()
            decl = N.Declaration(self._typename(specs, struct, 0, start), [])
            decl.span = self._span_from(start)
            return decl
        pointer = 0
        while self.at("*"):
            self.advance()
            pointer += 1
        name_tok = self.peek()
        if name_tok is None or name_tok.kind != "identifier":
            raise ParseError(
                "expected declarator name",
                name_tok.span.line_start if name_tok else None,
            )
        self.advance()
        if self.at("("):
            return self._parse_function(specs, struct, pointer, name_tok.text, start)
        first = self._parse_declarator_rest(name_tok.text, pointer)
        decls = [first]
        while self.at(","):
            self.advance()
            decls.append(self._parse_declarator())
        self.expect(";")
        decl = N.Declaration(self._typename(specs, struct, 0, start), decls)
        decl.span = self._span_from(start)
        return decl

    def _typename(self, specs, struct, pointer, start) -> N.TypeName:
        tn = N.TypeName(tuple(specs), pointer=pointer, struct=struct)
        tn.span = self._span_from(start) if self.i > start else None
        return tn

    def _parse_function(self, specs, struct, pointer, name, start) -> N.FunctionDef:
        type_start = start
        self.expect("(")
        params, takes_void = self._parse_params()
        self.expect(")")
        ret = N.TypeName(tuple(specs), pointer=pointer, struct=struct)
        ret.span = self.tokens[type_start].span
        if self.at(";"):
            self.advance()
            body = None
        else:
            body = self._parse_compound()
        fn = N.FunctionDef(ret, name, params, body, takes_void=takes_void)
        fn.span = self._span_from(start)
        return fn

    # --- declarations ---

    def _at_type_start(self) -> bool:
        tok = self.peek()
        return tok is not None and tok.kind == "keyword" and tok.text in TYPE_KEYWORDS

    def _parse_specifiers(self):
        specs: list[str] = []
        struct: N.StructSpec | None = None
        tok = self.peek()
        start_line = tok.span.line_start if tok else None
        while True:
            tok = self.peek()
            if tok is None or tok.kind != "keyword" or tok.text not in TYPE_KEYWORDS:
                break
            if tok.text == "struct":
                if struct is not None:
                    raise ParseError("duplicate struct specifier", tok.span.line_start)
                self.advance()
                struct = self._parse_struct_spec()
                continue
            specs.append(tok.text)
            self.advance()
        if not specs and struct is None:
            raise ParseError("expected type specifier", start_line)
        return specs, struct

    def _parse_struct_spec(self) -> N.StructSpec:
        tag = None
        if self.at(kind="identifier"):
            tag = self.advance().text
        members = None
        if self.at("{"):
            self.advance()
            members = []
            while not self.at("}"):
                members.append(self._parse_declaration())
            self.expect("}")
        if tag is None and members is None:
            raise ParseError("struct requires a tag or a body", self._line())
        return N.StructSpec(tag, members)

    def _parse_declarator(self) -> N.Declarator:
        pointer = 0
        while self.at("*"):
            self.advance()
            pointer += 1
        tok = self.peek()
        if tok is None or tok.kind != "identifier":
            raise ParseError("expected declarator name", self._line())
        self.advance()
        return self._parse_declarator_rest(tok.text, pointer)

    def _parse_declarator_rest(self, name: str, pointer: int) -> N.Declarator:
        dims: list[N.Expr | None] = []
        while self.at("["):
            self.advance()
            if self.at("]"):
                dims.append(None)
            else:
                dims.append(self.parse_assign())
            self.expect("]")
        init = None
        if self.at("="):
            self.advance()
            init = self._parse_initializer()
        return N.Declarator(name, pointer=pointer, array_dims=dims, init=init)

    def _parse_initializer(self):
        if self.at("{"):
            self.advance()
            items = []
            if not self.at("}"):
                items.append(self._parse_initializer())
                while self.at(","):
                    self.advance()
                    if self.at("}"):
                        break
                    items.append(self._parse_initializer())
            self.expect("}")
            return N.InitList(items)
        return self.parse_assign()

    def _parse_declaration(self) -> N.Declaration:
        self._check_unsupported()
        start = self.i
        specs, struct = self._parse_specifiers()
        decls: list[N.Declarator] = []
        if not self.at(";"):
            decls.append(self._parse_declarator())
            while self.at(","):
                self.advance()
                decls.append(self._parse_declarator())
        self.expect(";")
        node = N.Declaration(self._typename(specs, struct, 0, start), decls)
        node.span = self._span_from(start)
        return node

    def _parse_params(self):
        params: list[N.Declaration] = []
        takes_void = False
        if self.at(")"):
            return params, takes_void
        if self.at("void") and self.peek(1) is not None and self.peek(1).text == ")":
            self.advance()
            return params, True
        while True:
            params.append(self._parse_param())
            if self.at(","):
                self.advance()
                continue
            break
        return params, takes_void

    def _parse_param(self) -> N.Declaration:
        start = self.i
        if not self._at_type_start():
            raise ParseError("expected parameter type", self._line())
        specs, struct = self._parse_specifiers()
        pointer = 0
        while self.at("*"):
            self.advance()
            pointer += 1
        name = None
        if self.at(kind="identifier"):
            name = self.advance().text
        dims: list[N.Expr | None] = []
        while self.at("["):
            self.advance()
            if self.at("]"):
                dims.append(None)
            else:
                dims.append(self.parse_assign())
            self.expect("]")
        decl = N.Declaration(
            self._typename(specs, struct, 0, start),
            [N.Declarator(name, pointer=pointer, array_dims=dims)],
        )
        decl.span = self._span_from(start)
        return decl

    # --- statements ---

    def _parse_compound(self) -> N.CompoundStmt:
        start = self.i
        self.expect("{")
        items: list[N.Stmt] = []
        while not self.at("}"):
            if self.peek() is None:
                raise ParseError("unterminated block, expected '}'")
            items.append(self.parse_stmt())
        self.expect("}")
        node = N.CompoundStmt(items)
        node.span = self._span_from(start)
        return node

    def parse_stmt(self) -> N.Stmt:
        self._check_unsupported()
        tok = self.peek()
        if tok is None:
            raise ParseError("expected statement, found end of input")
        start = self.i
        if tok.text == "{":
            return self._parse_compound()
        if tok.kind == "keyword":
            if tok.text == "if":
                return self._parse_if()
            if tok.text == "for":
                return self._parse_for()
            if tok.text == "while":
                return self._parse_while()
            if tok.text == "do":
                return self._parse_do()
            if tok.text == "switch":
                return self._parse_switch()
            if tok.text == "break":
                self.advance()
                self.expect(";")
                node = N.BreakStmt()
                node.span = self._span_from(start)
                return node
            if tok.text == "continue":
                self.advance()
                self.expect(";")
                node = N.ContinueStmt()
                node.span = self._span_from(start)
                return node
            if tok.text == "return":
                self.advance()
                value = None if self.at(";") else self.parse_expr()
                self.expect(";")
                node = N.ReturnStmt(value)
                node.span = self._span_from(start)
                return node
            if tok.text in ("case", "default"):
                raise ParseError(
                    f"{tok.text!r} label outside switch", tok.span.line_start
                )
            if tok.text in TYPE_KEYWORDS:
                return self._parse_declaration()
        if tok.kind == "include-directive":
            raise ParseError(
                "preprocessor directives are only supported at the top level",
                tok.span.line_start,
            )
        if tok.text == ";":
            self.advance()
            node = N.ExprStmt(None)
            node.span = self._span_from(start)
            return node
        expr = self.parse_expr()
        self.expect(";")
        node = N.ExprStmt(expr)
        node.span = self._span_from(start)
        return node

    def _parse_if(self) -> N.IfStmt:
        start = self.i
        self.expect("if")
        self.expect("(")
        cond = self.parse_expr()
        self.expect(")")
        then = self.parse_stmt()
        orelse = None
        if self.at("else"):
            else_start = self.i
            self.advance()
            body = self.parse_stmt()
            orelse = N.Else(body)
            orelse.span = self._span_from(else_start)
        node = N.IfStmt(cond, then, orelse)
        node.span = self._span_from(start)
        return node

    def _parse_for(self) -> N.ForStmt:
        start = self.i
        self.expect("for")
        self.expect("(")
        init: N.Node | None
        if self.at(";"):
            self.advance()
            init = None
        elif self._at_type_start():
            init = self._parse_declaration()
        else:
            init = self.parse_expr()
            self.expect(";")
        cond = None if self.at(";") else self.parse_expr()
        self.expect(";")
        step = None if self.at(")") else self.parse_expr()
        self.expect(")")
        body = self.parse_stmt()
        node = N.ForStmt(init, cond, step, body)
        node.span = self._span_from(start)
        return node

    def _parse_while(self) -> N.WhileStmt:
        start = self.i
        self.expect("while")
        self.expect("(")
        cond = self.parse_expr()
        self.expect(")")
        body = self.parse_stmt()
        node = N.WhileStmt(cond, body)
        node.span = self._span_from(start)
        return node

    def _parse_do(self) -> N.DoWhileStmt:
        start = self.i
        self.expect("do")
        body = self.parse_stmt()
        self.expect("while")
        self.expect("(")
        cond = self.parse_expr()
        self.expect(")")
        self.expect(";")
        node = N.DoWhileStmt(body, cond)
        node.span = self._span_from(start)
        return node

    def _parse_switch(self) -> N.SwitchStmt:
        start = self.i
        self.expect("switch")
        self.expect("(")
        value = self.parse_expr()
        self.expect(")")
        self.expect("{")
        clauses: list[N.CaseClause] = []
        while not self.at("}"):
            clauses.append(self._parse_case_clause())
        self.expect("}")
        node = N.SwitchStmt(value, clauses)
        node.span = self._span_from(start)
        return node

    def _parse_case_clause(self) -> N.CaseClause:
        start = self.i
        tok = self.peek()
        if tok is None or tok.text not in ("case", "default"):
            raise ParseError(
                "expected 'case' or 'default' inside switch",
                tok.span.line_start if tok else None,
            )
        self.advance()
        value = None
        if tok.text == "case":
            value = self.parse_binary()
        self.expect(":")
        stmts: list[N.Stmt] = []
        while True:
            nxt = self.peek()
            if nxt is None:
                raise ParseError("unterminated switch body")
            if nxt.text in ("case", "default", "}"):
                break
            stmts.append(self.parse_stmt())
        node = N.CaseClause(value, stmts)
        node.span = self._span_from(start)
        return node

    # --- expressions ---

    def parse_expr(self) -> N.Expr:
        first = self.parse_assign()
        if not self.at(","):
            return first
        items = [first]
        while self.at(","):
            self.advance()
            items.append(self.parse_assign())
        node = N.CommaExpr(items)
        node.span = _join_spans(items[0].span, items[-1].span)
        return node

    def parse_assign(self) -> N.Expr:
        left = self.parse_binary()
        tok = self.peek()
        if tok is not None and tok.text == "?":
            raise UnsupportedConstructError(
                "conditional expressions are not supported", tok.span.line_start
            )
        if tok is None or tok.kind != "punctuator" or tok.text not in ASSIGN_OPS:
            return left
        if not self._is_lvalue(left):
            raise ParseError("invalid assignment target", tok.span.line_start)
        self.advance()
        right = self.parse_assign()
        base = ASSIGN_OPS[tok.text]
        if base is None:
            node: N.Expr = N.Assign(left, right)
        else:
            node = N.CompoundAssign(base, left, right)
        node.span = _join_spans(left.span, right.span)
        return node

    def _is_lvalue(self, e: N.Expr) -> bool:
        if isinstance(e, N.Identifier):
            return True
        if isinstance(e, N.BinaryOp) and e.op in ("[]", ".", "->"):
            return True
        if isinstance(e, N.UnaryOp) and e.op == "*" and not e.postfix:
            return True
        if isinstance(e, N.ParenExpr):
            return self._is_lvalue(e.inner)
        return False

    def parse_binary(self, min_prec: int = 1) -> N.Expr:
        left = self.parse_unary()
        while True:
            tok = self.peek()
            if (
                tok is None
                or tok.kind != "punctuator"
                or tok.text not in BIN_PREC
                or BIN_PREC[tok.text] < min_prec
            ):
                return left
            op = tok.text
            self.advance()
            right = self.parse_binary(BIN_PREC[op] + 1)
            node = N.BinaryOp(op, left, right)
            node.span = _join_spans(left.span, right.span)
            left = node

    def parse_unary(self) -> N.Expr:
        self._check_unsupported()
        tok = self.peek()
        if tok is not None and tok.kind == "punctuator" and tok.text in UNARY_OPS:
            self.advance()
            operand = self.parse_unary()
            node = N.UnaryOp(tok.text, operand)
            node.span = _join_spans(tok.span, operand.span)
            return node
        return self.parse_postfix()

    def parse_postfix(self) -> N.Expr:
        expr = self.parse_primary()
        while True:
            tok = self.peek()
            if tok is None or tok.kind != "punctuator":
                return expr
            if tok.text == "(":
                self.advance()
                args: list[N.Expr] = []
                if not self.at(")"):
                    args.append(self.parse_assign())
                    while self.at(","):
                        self.advance()
                        args.append(self.parse_assign())
                close = self.expect(")")
                node = N.Call(expr, args)
                node.span = _join_spans(expr.span, close.span)
                expr = node
            elif tok.text == "[":
                self.advance()
                index = self.parse_expr()
                close = self.expect("]")
                node = N.BinaryOp("[]", expr, index)
                node.span = _join_spans(expr.span, close.span)
                expr = node
            elif tok.text in (".", "->"):
                self.advance()
                name_tok = self.peek()
                if name_tok is None or name_tok.kind != "identifier":
                    raise ParseError(
                        "expected member name",
                        name_tok.span.line_start if name_tok else None,
                    )
                self.advance()
                member = N.Identifier(name_tok.text)
                member.span = name_tok.span
                node = N.BinaryOp(tok.text, expr, member)
                node.span = _join_spans(expr.span, name_tok.span)
                expr = node
            elif tok.text in ("++", "--"):
                self.advance()
                node = N.UnaryOp(tok.text, expr, postfix=True)
                node.span = _join_spans(expr.span, tok.span)
                expr = node
            else:
                return expr

    def parse_primary(self) -> N.Expr:
        tok = self.peek()
        if tok is None:
            raise ParseError("expected expression, found end of input")
        if tok.kind == "identifier":
            self.advance()
            node = N.Identifier(tok.text)
            node.span = tok.span
            return node
        if tok.kind in _LITERAL_CATEGORY:
            self.advance()
            node = N.Literal(tok.text, _LITERAL_CATEGORY[tok.kind])
            node.span = tok.span
            return node
        if tok.text == "(":
            start = self.i
            self.advance()
            if self._at_type_start():
                tn = self.parse_typename()
                self.expect(")")
                operand = self.parse_unary()
                node = N.Cast(tn, operand)
                node.span = _join_spans(tok.span, operand.span)
                return node
            inner = self.parse_expr()
            close = self.expect(")")
            node = N.ParenExpr(inner)
            node.span = _join_spans(tok.span, close.span)
            return node
        self._check_unsupported()
        raise ParseError(
            f"expected expression, found {tok.text!r}", tok.span.line_start
        )

    def parse_typename(self) -> N.TypeName:
        start = self.i
        specs, struct = self._parse_specifiers()
        pointer = 0
        while self.at("*"):
            self.advance()
            pointer += 1
        funcptr = None
        if (
            self.at("(")
            and self.peek(1) is not None
            and self.peek(1).text == "*"
            and self.peek(2) is not None
            and self.peek(2).text == ")"
        ):
            self.advance()
            self.advance()
            self.advance()
            self.expect("(")
            params, takes_void = self._parse_params()
            self.expect(")")
            funcptr = N.FuncPtrSuffix(params, takes_void=takes_void)
        node = N.TypeName(tuple(specs), pointer=pointer, struct=struct, funcptr=funcptr)
        node.span = self._span_from(start)
        return node


def parse(tokens: list[Token]) -> N.TranslationUnit:
    """Parse a token stream into a translation unit."""
    return _Parser(tokens).parse_unit()


def parse_source(source: str) -> N.TranslationUnit:
    """Convenience: lex then parse."""
    return parse(lex(source))
