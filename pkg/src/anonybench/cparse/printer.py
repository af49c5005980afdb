"""Canonical pretty-printer.

Fixed layout: 4-space indent, one statement per line, opening brace on the
statement line, single spaces around binary operators. Parentheses are
printed only where a paren-expr node exists; the printer never invents or
drops grouping, so parse(to_source(a)) == a for parser-produced trees.
"""

from __future__ import annotations

from . import nodes as N

INDENT = "    "


def to_source(node: N.Node) -> str:
    """Render a tree (usually a translation unit) as canonical source."""
    p = _Printer()
    p.render(node)
    return "\n".join(p.lines) + "\n"


def expr_text(e: N.Expr) -> str:
    """Render a single expression as canonical text."""
    return _Printer().expr(e)


class _Printer:
    def __init__(self) -> None:
        self.lines: list[str] = []

    def line(self, indent: int, text: str) -> None:
        self.lines.append(INDENT * indent + text if text else "")

    def render(self, node: N.Node) -> None:
        if isinstance(node, N.TranslationUnit):
            for idx, item in enumerate(node.items):
                if isinstance(item, N.FunctionDef) and idx > 0:
                    self.line(0, "")
                self.top_item(item)
        else:
            self.stmt(node, 0)

    def top_item(self, item: N.Node) -> None:
        if isinstance(item, N.Include):
            mark = ("<", ">") if item.system else ('"', '"')
            self.line(0, f"#include {mark[0]}{item.header}{mark[1]}")
        elif isinstance(item, N.FunctionDef):
            self.function(item)
        else:
            self.stmt(item, 0)

    # --- declarations and functions ---

    def function(self, fn: N.FunctionDef) -> None:
        ret = self.type_text(fn.return_type)
        sep = "" if ret.endswith("*") else " "
        if fn.takes_void:
            params = "void"
        else:
            params = ", ".join(self.param_text(p) for p in fn.params)
        sig = f"{ret}{sep}{fn.name}({params})"
        if fn.body is None:
            self.line(0, sig + ";")
            return
        self.line(0, sig + " {")
        for item in fn.body.items:
            self.stmt(item, 1)
        self.line(0, "}")

    def param_text(self, decl: N.Declaration) -> str:
        d = decl.declarators[0]
        base = self.type_text(decl.type)
        suffix = "*" * d.pointer + (d.name or "")
        for dim in d.array_dims:
            suffix += "[%s]" % ("" if dim is None else self.expr(dim))
        return f"{base} {suffix}" if suffix else base

    def type_text(self, tn: N.TypeName) -> str:
        parts = list(tn.specifiers)
        if tn.struct is not None:
            struct_txt = "struct"
            if tn.struct.tag is not None:
                struct_txt += " " + tn.struct.tag
            parts.append(struct_txt)
        base = " ".join(parts)
        if tn.funcptr is not None:
            if tn.funcptr.takes_void:
                inner = "void"
            else:
                inner = ", ".join(self.param_text(p) for p in tn.funcptr.params)
            return f"{base} {'*' * tn.pointer}(*)({inner})"
        if tn.pointer:
            return f"{base} {'*' * tn.pointer}"
        return base

    def declarator_text(self, d: N.Declarator) -> str:
        txt = "*" * d.pointer + (d.name or "")
        for dim in d.array_dims:
            txt += "[%s]" % ("" if dim is None else self.expr(dim))
        if d.init is not None:
            txt += " = " + self.init_text(d.init)
        return txt

    def init_text(self, init) -> str:
        if isinstance(init, N.InitList):
            return "{" + ", ".join(self.init_text(i) for i in init.items) + "}"
        return self.expr(init)

    def declaration(self, decl: N.Declaration, indent: int, terminator: str = ";") -> None:
        tn = decl.type
        decls = ", ".join(self.declarator_text(d) for d in decl.declarators)
        if tn.struct is not None and tn.struct.members is not None:
            lead = " ".join(list(tn.specifiers) + ["struct"])
            if tn.struct.tag is not None:
                lead += " " + tn.struct.tag
            self.line(indent, lead + " {")
            for member in tn.struct.members:
                self.declaration(member, indent + 1)
            tail = "}" + (" " + decls if decls else "") + terminator
            self.line(indent, tail)
            return
        base = self.type_text(tn)
        text = f"{base} {decls}" if decls else base
        self.line(indent, text + terminator)

    def declaration_inline(self, decl: N.Declaration) -> str:
        decls = ", ".join(self.declarator_text(d) for d in decl.declarators)
        base = self.type_text(decl.type)
        return f"{base} {decls}" if decls else base

    # --- statements ---

    def stmt(self, s: N.Stmt, indent: int) -> None:
        if isinstance(s, N.CompoundStmt):
            self.line(indent, "{")
            for item in s.items:
                self.stmt(item, indent + 1)
            self.line(indent, "}")
        elif isinstance(s, N.Declaration):
            self.declaration(s, indent)
        elif isinstance(s, N.ExprStmt):
            self.line(indent, (self.expr(s.expr) if s.expr is not None else "") + ";")
        elif isinstance(s, N.ReturnStmt):
            if s.value is None:
                self.line(indent, "return;")
            else:
                self.line(indent, f"return {self.expr(s.value)};")
        elif isinstance(s, N.BreakStmt):
            self.line(indent, "break;")
        elif isinstance(s, N.ContinueStmt):
            self.line(indent, "continue;")
        elif isinstance(s, N.IfStmt):
            self.if_stmt(s, indent)
        elif isinstance(s, N.WhileStmt):
            self.headed_body(f"while ({self.expr(s.cond)})", s.body, indent)
        elif isinstance(s, N.ForStmt):
            self.headed_body(self.for_header(s), s.body, indent)
        elif isinstance(s, N.DoWhileStmt):
            self.do_stmt(s, indent)
        elif isinstance(s, N.SwitchStmt):
            self.switch_stmt(s, indent)
        else:
            raise TypeError(f"cannot print node of kind {s.kind!r} as a statement")

    def for_header(self, s: N.ForStmt) -> str:
        if s.init is None:
            init = ""
        elif isinstance(s.init, N.Declaration):
            init = self.declaration_inline(s.init)
        else:
            init = self.expr(s.init)
        cond = "" if s.cond is None else " " + self.expr(s.cond)
        step = "" if s.step is None else " " + self.expr(s.step)
        return f"for ({init};{cond};{step})"

    def headed_body(self, header: str, body: N.Stmt, indent: int) -> None:
        if isinstance(body, N.CompoundStmt):
            self.line(indent, header + " {")
            for item in body.items:
                self.stmt(item, indent + 1)
            self.line(indent, "}")
        else:
            self.line(indent, header)
            self.stmt(body, indent + 1)

    def if_stmt(self, s: N.IfStmt, indent: int, lead: str = "") -> None:
        then = s.then
        if (
            s.orelse is not None
            and not isinstance(then, N.CompoundStmt)
            and _dangling_else_risk(then)
        ):
            then = N.CompoundStmt([then])
        header = f"{lead}if ({self.expr(s.cond)})"
        if isinstance(then, N.CompoundStmt):
            self.line(indent, header + " {")
            for item in then.items:
                self.stmt(item, indent + 1)
            if s.orelse is None:
                self.line(indent, "}")
            else:
                self.else_clause(s.orelse, indent, after_brace=True)
        else:
            self.line(indent, header)
            self.stmt(then, indent + 1)
            if s.orelse is not None:
                self.else_clause(s.orelse, indent, after_brace=False)

    def else_clause(self, orelse: N.Else, indent: int, after_brace: bool) -> None:
        lead = "} else" if after_brace else "else"
        body = orelse.body
        if isinstance(body, N.IfStmt):
            self.if_stmt(body, indent, lead=lead + " ")
        elif isinstance(body, N.CompoundStmt):
            self.line(indent, lead + " {")
            for item in body.items:
                self.stmt(item, indent + 1)
            self.line(indent, "}")
        else:
            self.line(indent, lead)
            self.stmt(body, indent + 1)

    def do_stmt(self, s: N.DoWhileStmt, indent: int) -> None:
        cond = self.expr(s.cond)
        if isinstance(s.body, N.CompoundStmt):
            self.line(indent, "do {")
            for item in s.body.items:
                self.stmt(item, indent + 1)
            self.line(indent, f"}} while ({cond});")
        else:
            self.line(indent, "do")
            self.stmt(s.body, indent + 1)
            self.line(indent, f"while ({cond});")

    def switch_stmt(self, s: N.SwitchStmt, indent: int) -> None:
        self.line(indent, f"switch ({self.expr(s.value)}) {{")
        for clause in s.clauses:
            if clause.value is None:
                self.line(indent + 1, "default:")
            else:
                self.line(indent + 1, f"case {self.expr(clause.value)}:")
            for item in clause.stmts:
                self.stmt(item, indent + 2)
        self.line(indent, "}")

    # --- expressions ---

    def expr(self, e: N.Expr) -> str:
        if isinstance(e, N.Identifier):
            return e.name
        if isinstance(e, N.Literal):
            return e.text
        if isinstance(e, N.ParenExpr):
            return f"({self.expr(e.inner)})"
        if isinstance(e, N.BinaryOp):
            left = self.expr(e.left)
            right = self.expr(e.right)
            if e.op == "[]":
                return f"{left}[{right}]"
            if e.op in (".", "->"):
                return f"{left}{e.op}{right}"
            return f"{left} {e.op} {right}"
        if isinstance(e, N.UnaryOp):
            inner = self.expr(e.operand)
            if e.postfix:
                return f"{inner}{e.op}"
            sep = " " if inner and e.op[-1] in "+-&" and inner[0] == e.op[-1] else ""
            return f"{e.op}{sep}{inner}"
        if isinstance(e, N.Assign):
            return f"{self.expr(e.target)} = {self.expr(e.value)}"
        if isinstance(e, N.CompoundAssign):
            return f"{self.expr(e.target)} {e.op}= {self.expr(e.value)}"
        if isinstance(e, N.Call):
            args = ", ".join(self.expr(a) for a in e.args)
            return f"{self.expr(e.func)}({args})"
        if isinstance(e, N.CommaExpr):
            return ", ".join(self.expr(i) for i in e.items)
        if isinstance(e, N.Cast):
            return f"({self.type_text(e.type)}){self.expr(e.operand)}"
        raise TypeError(f"cannot print node of kind {e.kind!r} as an expression")


def _dangling_else_risk(stmt: N.Stmt) -> bool:
    """True if an unbraced statement ends in an else-less if that would
    capture an else belonging to an enclosing if."""
    if isinstance(stmt, N.IfStmt):
        if stmt.orelse is None:
            return True
        return _dangling_else_risk(stmt.orelse.body)
    if isinstance(stmt, (N.WhileStmt, N.ForStmt)):
        return _dangling_else_risk(stmt.body)
    if isinstance(stmt, N.Else):
        return _dangling_else_risk(stmt.body)
    return False
