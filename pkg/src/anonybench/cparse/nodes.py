"""Typed AST for the supported C subset.

Node equality is structural: spans are carried for provenance but excluded
from comparison, so ``parse(to_source(a)) == a`` can be asserted directly.
Subscript and member access reuse ``binary-op`` with ops ``[]``, ``.`` and
``->`` to keep the node-kind vocabulary closed.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import ClassVar, Iterator, Optional, Union

from .lexer import SourceSpan


@dataclass
class Node:
    kind: ClassVar[str] = "node"
    span: Optional[SourceSpan] = field(default=None, compare=False, kw_only=True)

    @property
    def children(self) -> tuple["Node", ...]:
        return ()


Expr = Node
Stmt = Node


@dataclass
class Identifier(Node):
    kind: ClassVar[str] = "identifier-ref"
    name: str


@dataclass
class Literal(Node):
    """A literal with its verbatim source text (escapes preserved)."""

    kind: ClassVar[str] = "literal"
    text: str
    category: str  # int | float | string | char


@dataclass
class BinaryOp(Node):
    kind: ClassVar[str] = "binary-op"
    op: str
    left: Expr
    right: Expr

    @property
    def children(self) -> tuple[Node, ...]:
        return (self.left, self.right)


@dataclass
class UnaryOp(Node):
    kind: ClassVar[str] = "unary-op"
    op: str
    operand: Expr
    postfix: bool = False

    @property
    def children(self) -> tuple[Node, ...]:
        return (self.operand,)


@dataclass
class Assign(Node):
    kind: ClassVar[str] = "assign"
    target: Expr
    value: Expr

    @property
    def children(self) -> tuple[Node, ...]:
        return (self.target, self.value)


@dataclass
class CompoundAssign(Node):
    """op is the base operator, so ``a += 2`` has op ``+``."""

    kind: ClassVar[str] = "compound-assign"
    op: str
    target: Expr
    value: Expr

    @property
    def children(self) -> tuple[Node, ...]:
        return (self.target, self.value)


@dataclass
class Call(Node):
    kind: ClassVar[str] = "call"
    func: Expr
    args: list[Expr]

    @property
    def children(self) -> tuple[Node, ...]:
        return (self.func, *self.args)


@dataclass
class CommaExpr(Node):
    kind: ClassVar[str] = "comma-expr"
    items: list[Expr]

    @property
    def children(self) -> tuple[Node, ...]:
        return tuple(self.items)


@dataclass
class ParenExpr(Node):
    kind: ClassVar[str] = "paren-expr"
    inner: Expr

    @property
    def children(self) -> tuple[Node, ...]:
        return (self.inner,)


@dataclass
class StructSpec:
    """Struct type specifier; members is None for a bare reference."""

    tag: Optional[str]
    members: Optional[list["Declaration"]] = None


@dataclass
class FuncPtrSuffix:
    """The ``(*)(params)`` part of a function-pointer type name."""

    params: list["Declaration"]
    takes_void: bool = False


@dataclass
class TypeName(Node):
    """Type specifiers plus optional pointer, struct, or function-pointer
    structure. With funcptr set, ``pointer`` applies to the return type."""

    kind: ClassVar[str] = "type-name"
    specifiers: tuple[str, ...]
    pointer: int = 0
    struct: Optional[StructSpec] = None
    funcptr: Optional[FuncPtrSuffix] = None

    @property
    def children(self) -> tuple[Node, ...]:
        out: list[Node] = []
        if self.struct is not None and self.struct.members is not None:
            out.extend(self.struct.members)
        if self.funcptr is not None:
            out.extend(self.funcptr.params)
        return tuple(out)


@dataclass
class Cast(Node):
    kind: ClassVar[str] = "cast"
    type: TypeName
    operand: Expr

    @property
    def children(self) -> tuple[Node, ...]:
        return (self.type, self.operand)


@dataclass
class InitList:
    """Brace initializer; a plain container, not a node."""

    items: list[Expr]


@dataclass
class Declarator:
    """One declared name with its pointer depth, array dims, and initializer."""

    name: Optional[str]
    pointer: int = 0
    array_dims: list[Optional[Expr]] = field(default_factory=list)
    init: Union[Expr, InitList, None] = None


@dataclass
class Declaration(Node):
    kind: ClassVar[str] = "declaration"
    type: TypeName
    declarators: list[Declarator]

    @property
    def children(self) -> tuple[Node, ...]:
        def flatten(init, out: list[Node]) -> None:
            if isinstance(init, InitList):
                for item in init.items:
                    flatten(item, out)
            elif init is not None:
                out.append(init)

        out: list[Node] = [self.type]
        for d in self.declarators:
            for dim in d.array_dims:
                if dim is not None:
                    out.append(dim)
            flatten(d.init, out)
        return tuple(out)


@dataclass
class ExprStmt(Node):
    kind: ClassVar[str] = "expr-stmt"
    expr: Optional[Expr]

    @property
    def children(self) -> tuple[Node, ...]:
        return () if self.expr is None else (self.expr,)


@dataclass
class CompoundStmt(Node):
    kind: ClassVar[str] = "compound-stmt"
    items: list[Stmt]

    @property
    def children(self) -> tuple[Node, ...]:
        return tuple(self.items)


@dataclass
class Else(Node):
    kind: ClassVar[str] = "else"
    body: Stmt

    @property
    def children(self) -> tuple[Node, ...]:
        return (self.body,)


@dataclass
class IfStmt(Node):
    kind: ClassVar[str] = "if"
    cond: Expr
    then: Stmt
    orelse: Optional[Else] = None

    @property
    def children(self) -> tuple[Node, ...]:
        out: tuple[Node, ...] = (self.cond, self.then)
        if self.orelse is not None:
            out = out + (self.orelse,)
        return out


@dataclass
class ForStmt(Node):
    kind: ClassVar[str] = "for"
    init: Union[Declaration, Expr, None]
    cond: Optional[Expr]
    step: Optional[Expr]
    body: Stmt

    @property
    def children(self) -> tuple[Node, ...]:
        out = [c for c in (self.init, self.cond, self.step) if c is not None]
        out.append(self.body)
        return tuple(out)


@dataclass
class WhileStmt(Node):
    kind: ClassVar[str] = "while"
    cond: Expr
    body: Stmt

    @property
    def children(self) -> tuple[Node, ...]:
        return (self.cond, self.body)


@dataclass
class DoWhileStmt(Node):
    kind: ClassVar[str] = "do"
    body: Stmt
    cond: Expr

    @property
    def children(self) -> tuple[Node, ...]:
        return (self.body, self.cond)


@dataclass
class CaseClause(Node):
    """A case (or default, when value is None) label and its statements."""

    kind: ClassVar[str] = "case"
    value: Optional[Expr]
    stmts: list[Stmt]

    @property
    def children(self) -> tuple[Node, ...]:
        out: tuple[Node, ...] = () if self.value is None else (self.value,)
        return out + tuple(self.stmts)


@dataclass
class SwitchStmt(Node):
    kind: ClassVar[str] = "switch"
    value: Expr
    clauses: list[CaseClause]

    @property
    def children(self) -> tuple[Node, ...]:
        return (self.value, *self.clauses)


@dataclass
class BreakStmt(Node):
    kind: ClassVar[str] = "break"


@dataclass
class ContinueStmt(Node):
    kind: ClassVar[str] = "continue"


@dataclass
class ReturnStmt(Node):
    kind: ClassVar[str] = "return"
    value: Optional[Expr] = None

    @property
    def children(self) -> tuple[Node, ...]:
        return () if self.value is None else (self.value,)


@dataclass
class FunctionDef(Node):
    """Function definition, or a prototype when body is None."""

    kind: ClassVar[str] = "function-def"
    return_type: TypeName
    name: str
    params: list[Declaration]
    body: Optional[CompoundStmt]
    takes_void: bool = False

    @property
    def children(self) -> tuple[Node, ...]:
        out: tuple[Node, ...] = (self.return_type, *self.params)
        if self.body is not None:
            out = out + (self.body,)
        return out


@dataclass
class Include(Node):
    kind: ClassVar[str] = "include"
    header: str
    system: bool = True


@dataclass
class TranslationUnit(Node):
    kind: ClassVar[str] = "translation-unit"
    items: list[Node]

    @property
    def children(self) -> tuple[Node, ...]:
        return tuple(self.items)


NODE_KINDS = (
    "translation-unit",
    "function-def",
    "declaration",
    "compound-stmt",
    "if",
    "else",
    "for",
    "while",
    "do",
    "switch",
    "case",
    "break",
    "continue",
    "return",
    "expr-stmt",
    "binary-op",
    "unary-op",
    "assign",
    "compound-assign",
    "call",
    "comma-expr",
    "paren-expr",
    "identifier-ref",
    "literal",
    "cast",
    "type-name",
    "include",
)


def walk(node: Node) -> Iterator[Node]:
    """Preorder traversal."""
    yield node
    for child in node.children:
        yield from walk(child)


def walk_depth(node: Node, depth: int = 0) -> Iterator[tuple[Node, int]]:
    """Preorder traversal with depth, root at 0."""
    yield node, depth
    for child in node.children:
        yield from walk_depth(child, depth + 1)


def walk_edges(node: Node) -> Iterator[tuple[Node, Node]]:
    """Preorder traversal of (parent, child) edges."""
    for child in node.children:
        yield node, child
        yield from walk_edges(child)
