"""Semantics-preserving normalization rules.

Each rule is a pure tree rewrite: it deep-copies its input, rewrites the
copy, and returns it. Rules whose preconditions do not hold for a site
leave that site unchanged rather than rewrite unsoundly. normalize()
applies the fixed rule order repeatedly until a full pass changes nothing.
"""

from __future__ import annotations

import copy

from ..errors import NormalizeError, ParameterError
from ..cparse import lex, parse, to_source
from ..cparse import nodes as N
from ..cparse.parser import BIN_PREC

# --- shared helpers ---


def _clone(node):
    return copy.deepcopy(node)


def _wrap_block(s: N.Stmt) -> N.CompoundStmt:
    return s if isinstance(s, N.CompoundStmt) else N.CompoundStmt([s])


def _has_side_effects(e: N.Node) -> bool:
    for node in N.walk(e):
        if isinstance(node, (N.Call, N.Assign, N.CompoundAssign)):
            return True
        if isinstance(node, N.UnaryOp) and node.op in ("++", "--"):
            return True
    return False


def _is_terminator(s: N.Stmt) -> bool:
    return isinstance(s, (N.ReturnStmt, N.BreakStmt, N.ContinueStmt))


def _block_terminates(s: N.Stmt) -> bool:
    if isinstance(s, N.CompoundStmt):
        return bool(s.items) and _is_terminator(s.items[-1])
    return _is_terminator(s)


def _map_stmt_lists(s: N.Node, fn) -> N.Node:
    """Apply fn to every statement list below s, innermost first."""
    if isinstance(s, N.CompoundStmt):
        items = [_map_stmt_lists(it, fn) for it in s.items]
        s.items = fn(items)
    elif isinstance(s, N.IfStmt):
        s.then = _map_stmt_lists(s.then, fn)
        if s.orelse is not None:
            s.orelse.body = _map_stmt_lists(s.orelse.body, fn)
    elif isinstance(s, (N.WhileStmt, N.ForStmt)):
        s.body = _map_stmt_lists(s.body, fn)
    elif isinstance(s, N.DoWhileStmt):
        s.body = _map_stmt_lists(s.body, fn)
    elif isinstance(s, N.SwitchStmt):
        for clause in s.clauses:
            stmts = [_map_stmt_lists(it, fn) for it in clause.stmts]
            clause.stmts = fn(stmts)
    return s


def _unit_stmt_lists(unit: N.TranslationUnit, fn) -> N.TranslationUnit:
    for item in unit.items:
        if isinstance(item, N.FunctionDef) and item.body is not None:
            _map_stmt_lists(item.body, fn)
    return unit


def _rewrite_expr(e, fn):
    """Bottom-up expression rewrite; fn sees every expression node."""
    if e is None:
        return None
    if isinstance(e, N.BinaryOp):
        e.left = _rewrite_expr(e.left, fn)
        e.right = _rewrite_expr(e.right, fn)
    elif isinstance(e, N.UnaryOp):
        e.operand = _rewrite_expr(e.operand, fn)
    elif isinstance(e, N.Assign):
        e.target = _rewrite_expr(e.target, fn)
        e.value = _rewrite_expr(e.value, fn)
    elif isinstance(e, N.CompoundAssign):
        e.target = _rewrite_expr(e.target, fn)
        e.value = _rewrite_expr(e.value, fn)
    elif isinstance(e, N.Call):
        e.func = _rewrite_expr(e.func, fn)
        e.args = [_rewrite_expr(a, fn) for a in e.args]
    elif isinstance(e, N.CommaExpr):
        e.items = [_rewrite_expr(i, fn) for i in e.items]
    elif isinstance(e, N.ParenExpr):
        e.inner = _rewrite_expr(e.inner, fn)
    elif isinstance(e, N.Cast):
        e.operand = _rewrite_expr(e.operand, fn)
    return fn(e)


def _rewrite_declaration_exprs(decl: N.Declaration, fn) -> None:
    for d in decl.declarators:
        d.array_dims = [None if dim is None else _rewrite_expr(dim, fn) for dim in d.array_dims]
        if isinstance(d.init, N.InitList):
            _rewrite_initlist(d.init, fn)
        elif d.init is not None:
            d.init = _rewrite_expr(d.init, fn)


def _rewrite_initlist(il: N.InitList, fn) -> None:
    out = []
    for item in il.items:
        if isinstance(item, N.InitList):
            _rewrite_initlist(item, fn)
            out.append(item)
        else:
            out.append(_rewrite_expr(item, fn))
    il.items = out


def _rewrite_stmt_exprs(s: N.Node, fn) -> None:
    """Apply an expression rewrite to every expression position below s."""
    if isinstance(s, N.CompoundStmt):
        for it in s.items:
            _rewrite_stmt_exprs(it, fn)
    elif isinstance(s, N.IfStmt):
        s.cond = _rewrite_expr(s.cond, fn)
        _rewrite_stmt_exprs(s.then, fn)
        if s.orelse is not None:
            _rewrite_stmt_exprs(s.orelse.body, fn)
    elif isinstance(s, N.WhileStmt):
        s.cond = _rewrite_expr(s.cond, fn)
        _rewrite_stmt_exprs(s.body, fn)
    elif isinstance(s, N.DoWhileStmt):
        s.cond = _rewrite_expr(s.cond, fn)
        _rewrite_stmt_exprs(s.body, fn)
    elif isinstance(s, N.ForStmt):
        if isinstance(s.init, N.Declaration):
            _rewrite_declaration_exprs(s.init, fn)
        elif s.init is not None:
            s.init = _rewrite_expr(s.init, fn)
        if s.cond is not None:
            s.cond = _rewrite_expr(s.cond, fn)
        if s.step is not None:
            s.step = _rewrite_expr(s.step, fn)
        _rewrite_stmt_exprs(s.body, fn)
    elif isinstance(s, N.SwitchStmt):
        s.value = _rewrite_expr(s.value, fn)
        for clause in s.clauses:
            if clause.value is not None:
                clause.value = _rewrite_expr(clause.value, fn)
            for it in clause.stmts:
                _rewrite_stmt_exprs(it, fn)
    elif isinstance(s, N.ReturnStmt):
        if s.value is not None:
            s.value = _rewrite_expr(s.value, fn)
    elif isinstance(s, N.ExprStmt):
        if s.expr is not None:
            s.expr = _rewrite_expr(s.expr, fn)
    elif isinstance(s, N.Declaration):
        _rewrite_declaration_exprs(s, fn)
    elif isinstance(s, N.FunctionDef):
        if s.body is not None:
            _rewrite_stmt_exprs(s.body, fn)
    elif isinstance(s, N.TranslationUnit):
        for it in s.items:
            _rewrite_stmt_exprs(it, fn)


# --- rules ---


def rule_braces(unit: N.TranslationUnit) -> N.TranslationUnit:
    """Wrap unbraced if/else/loop bodies in blocks; else-if chains stay flat."""
    u = _clone(unit)

    def visit(s: N.Node) -> None:
        if isinstance(s, N.CompoundStmt):
            for it in s.items:
                visit(it)
        elif isinstance(s, N.IfStmt):
            visit(s.then)
            s.then = _wrap_block(s.then)
            if s.orelse is not None:
                body = s.orelse.body
                if isinstance(body, N.IfStmt):
                    visit(body)
                else:
                    visit(body)
                    s.orelse.body = _wrap_block(body)
        elif isinstance(s, (N.WhileStmt, N.ForStmt, N.DoWhileStmt)):
            visit(s.body)
            s.body = _wrap_block(s.body)
        elif isinstance(s, N.SwitchStmt):
            for clause in s.clauses:
                for it in clause.stmts:
                    visit(it)

    for item in u.items:
        if isinstance(item, N.FunctionDef) and item.body is not None:
            visit(item.body)
    return u


def rule_multidecl(unit: N.TranslationUnit) -> N.TranslationUnit:
    """Split multi-declarator declarations into one declaration per name.

    Declarations that define a struct body are not split (splitting would
    duplicate the definition); for-loop headers cannot hold more than one
    declaration and are left as parsed. Struct members are split."""
    u = _clone(unit)

    def split(items: list[N.Stmt]) -> list[N.Stmt]:
        out: list[N.Stmt] = []
        for s in items:
            if isinstance(s, N.Declaration):
                out.extend(_split_declaration(s))
            else:
                out.append(s)
        return out

    u.items = split([_split_members(it) for it in u.items])
    _unit_stmt_lists(u, lambda items: split([_split_members(i) for i in items]))
    return u


def _split_members(s: N.Node) -> N.Node:
    if isinstance(s, N.Declaration):
        struct = s.type.struct
        if struct is not None and struct.members is not None:
            new_members: list[N.Declaration] = []
            for m in struct.members:
                new_members.extend(_split_declaration(m))
            struct.members = new_members
    return s


def _split_declaration(s: N.Declaration) -> list[N.Declaration]:
    defines_struct = s.type.struct is not None and s.type.struct.members is not None
    if len(s.declarators) <= 1 or defines_struct:
        return [s]
    return [N.Declaration(_clone(s.type), [d]) for d in s.declarators]


_NEEDS_OPERAND_PAREN = (N.Assign, N.CompoundAssign, N.CommaExpr)


def _paren_if_loose(e: N.Expr) -> N.Expr:
    if isinstance(e, _NEEDS_OPERAND_PAREN):
        return N.ParenExpr(e)
    if isinstance(e, N.BinaryOp) and e.op not in ("[]", ".", "->"):
        return N.ParenExpr(e)
    return e


def rule_compound_assign(unit: N.TranslationUnit) -> N.TranslationUnit:
    """Expand a op= b into a = a op b when re-evaluating a is safe."""
    u = _clone(unit)

    def fn(e: N.Expr) -> N.Expr:
        if isinstance(e, N.CompoundAssign) and not _has_side_effects(e.target):
            return N.Assign(e.target, N.BinaryOp(e.op, _clone(e.target), _paren_if_loose(e.value)))
        return e

    _rewrite_stmt_exprs(u, fn)
    return u


def rule_comma(unit: N.TranslationUnit) -> N.TranslationUnit:
    """Split comma expression statements into separate statements.

    Applies only inside statement lists; for-loop headers keep their commas."""
    u = _clone(unit)

    def explode(items: list[N.Stmt]) -> list[N.Stmt]:
        out: list[N.Stmt] = []
        for s in items:
            if isinstance(s, N.ExprStmt) and isinstance(s.expr, N.CommaExpr):
                out.extend(N.ExprStmt(item) for item in s.expr.items)
            else:
                out.append(s)
        return out

    _unit_stmt_lists(u, explode)
    return u


def _switch_bound_breaks(stmts: list[N.Stmt]) -> list[N.BreakStmt]:
    """Break statements that would exit the switch these stmts belong to."""
    found: list[N.BreakStmt] = []

    def visit(s: N.Node) -> None:
        if isinstance(s, N.BreakStmt):
            found.append(s)
        elif isinstance(s, N.CompoundStmt):
            for it in s.items:
                visit(it)
        elif isinstance(s, N.IfStmt):
            visit(s.then)
            if s.orelse is not None:
                visit(s.orelse.body)
        elif isinstance(s, (N.WhileStmt, N.ForStmt, N.DoWhileStmt, N.SwitchStmt)):
            return  # break binds to the inner construct
        # other statements cannot contain a break

    for s in stmts:
        visit(s)
    return found


def _convertible_switch(s: N.SwitchStmt) -> bool:
    if _has_side_effects(s.value):
        return False
    defaults = [c for c in s.clauses if c.value is None]
    if len(defaults) > 1:
        return False
    for clause in s.clauses:
        breaks = _switch_bound_breaks(clause.stmts)
        if not breaks:
            continue
        last = clause.stmts[-1] if clause.stmts else None
        if len(breaks) != 1 or breaks[0] is not last:
            return False
    return True


def _clause_exec(clauses: list[N.CaseClause], start: int) -> list[N.Stmt]:
    """Statements executed when entering clause `start`, following
    fall-through until a trailing break/return/continue or the end."""
    out: list[N.Stmt] = []
    for j in range(start, len(clauses)):
        stmts = clauses[j].stmts
        if stmts and isinstance(stmts[-1], N.BreakStmt):
            out.extend(stmts[:-1])
            return out
        out.extend(stmts)
        if stmts and isinstance(stmts[-1], (N.ReturnStmt, N.ContinueStmt)):
            return out
    return out


def _convert_switch(s: N.SwitchStmt) -> list[N.Stmt] | None:
    if not _convertible_switch(s):
        return None
    branches: list[tuple[list[N.Expr], list[N.Stmt]]] = []
    default_exec: list[N.Stmt] | None = None
    pending_values: list[N.Expr] = []
    for idx, clause in enumerate(s.clauses):
        if clause.value is None:
            default_exec = _clause_exec(s.clauses, idx)
            pending_values = []
            continue
        pending_values.append(clause.value)
        if clause.stmts or idx + 1 == len(s.clauses):
            branches.append((pending_values, _clause_exec(s.clauses, idx)))
            pending_values = []
    if pending_values:
        branches.append((pending_values, []))

    chain: N.Stmt | None = None
    if default_exec is not None:
        if not branches:
            return [_clone(st) for st in default_exec]
        chain = N.CompoundStmt([_clone(st) for st in default_exec])
    for values, body in reversed(branches):
        cond: N.Expr | None = None
        for v in values:
            eq = N.BinaryOp("==", _clone(s.value), _clone(v))
            cond = eq if cond is None else N.BinaryOp("||", cond, eq)
        assert cond is not None
        orelse = None if chain is None else N.Else(chain)
        chain = N.IfStmt(cond, N.CompoundStmt([_clone(st) for st in body]), orelse)
    return [] if chain is None else [chain]


def rule_switch2if(unit: N.TranslationUnit) -> N.TranslationUnit:
    """Rewrite switch statements as if/else-if chains.

    Requires a side-effect-free scrutinee and breaks only as a clause's
    final statement; other switches are left unchanged."""
    u = _clone(unit)

    def replace_in_list(items: list[N.Stmt]) -> list[N.Stmt]:
        out: list[N.Stmt] = []
        for s in items:
            if isinstance(s, N.SwitchStmt):
                converted = _convert_switch(s)
                if converted is None:
                    out.append(s)
                else:
                    out.extend(converted)
            else:
                out.append(s)
        return out

    def visit(s: N.Node) -> N.Node:
        if isinstance(s, N.SwitchStmt):
            converted = _convert_switch(s)
            if converted is not None:
                if len(converted) == 1:
                    return visit(converted[0])
                return _map_stmt_lists(N.CompoundStmt(converted), replace_in_list)
        return _map_stmt_lists(s, replace_in_list)

    for item in u.items:
        if isinstance(item, N.FunctionDef) and item.body is not None:
            item.body = visit(item.body)
    return u


def _and_operand(e: N.Expr, right: bool) -> N.Expr:
    if isinstance(e, _NEEDS_OPERAND_PAREN):
        return N.ParenExpr(e)
    if isinstance(e, N.BinaryOp) and e.op not in ("[]", ".", "->"):
        prec = BIN_PREC[e.op]
        if prec < BIN_PREC["&&"] or (right and prec == BIN_PREC["&&"]):
            return N.ParenExpr(e)
    return e


def rule_flatten_if(unit: N.TranslationUnit) -> N.TranslationUnit:
    """Merge if (a) { if (b) S } into if (a && b) S when neither has else."""
    u = _clone(unit)

    def flatten(s: N.Node) -> N.Node:
        if isinstance(s, N.IfStmt):
            while s.orelse is None:
                inner = None
                if isinstance(s.then, N.CompoundStmt) and len(s.then.items) == 1:
                    only = s.then.items[0]
                    if isinstance(only, N.IfStmt) and only.orelse is None:
                        inner = only
                elif isinstance(s.then, N.IfStmt) and s.then.orelse is None:
                    inner = s.then
                if inner is None:
                    break
                cond = N.BinaryOp(
                    "&&", _and_operand(s.cond, right=False), _and_operand(inner.cond, right=True)
                )
                s = N.IfStmt(cond, inner.then, None)
            s.then = flatten(s.then)
            if s.orelse is not None:
                s.orelse.body = flatten(s.orelse.body)
            return s
        if isinstance(s, N.CompoundStmt):
            s.items = [flatten(it) for it in s.items]
        elif isinstance(s, (N.WhileStmt, N.ForStmt, N.DoWhileStmt)):
            s.body = flatten(s.body)
        elif isinstance(s, N.SwitchStmt):
            for clause in s.clauses:
                clause.stmts = [flatten(it) for it in clause.stmts]
        return s

    for item in u.items:
        if isinstance(item, N.FunctionDef) and item.body is not None:
            item.body = flatten(item.body)
    return u


def rule_if_else(unit: N.TranslationUnit) -> N.TranslationUnit:
    """Move the statements after a terminating else-less if into its else.

    Applies when the if body ends in return/break/continue, so execution
    order is preserved exactly."""
    u = _clone(unit)

    def scan(items: list[N.Stmt]) -> list[N.Stmt]:
        for i, s in enumerate(items):
            if (
                isinstance(s, N.IfStmt)
                and s.orelse is None
                and _block_terminates(s.then)
                and i + 1 < len(items)
            ):
                tail = scan(items[i + 1 :])
                s.orelse = N.Else(N.CompoundStmt(tail))
                return items[: i + 1]
        return items

    _unit_stmt_lists(u, scan)
    return u


def _is_void_function(fn: N.FunctionDef) -> bool:
    return fn.return_type.specifiers == ("void",) and fn.return_type.pointer == 0


def rule_unnecessary_return(unit: N.TranslationUnit) -> N.TranslationUnit:
    """Drop bare returns at the end of if/else branches of a void function's
    final if statement, where falling off the end is equivalent."""
    u = _clone(unit)
    for item in u.items:
        if not isinstance(item, N.FunctionDef) or item.body is None:
            continue
        if not _is_void_function(item):
            continue
        body = item.body.items
        idx = None
        for i, s in enumerate(body):
            if isinstance(s, N.IfStmt) and s.orelse is not None:
                rest = body[i + 1 :]
                if all(isinstance(r, N.ReturnStmt) and r.value is None for r in rest):
                    idx = i
        if idx is None:
            continue
        stmt = body[idx]
        assert isinstance(stmt, N.IfStmt) and stmt.orelse is not None
        for branch in (stmt.then, stmt.orelse.body):
            if (
                isinstance(branch, N.CompoundStmt)
                and branch.items
                and isinstance(branch.items[-1], N.ReturnStmt)
                and branch.items[-1].value is None
            ):
                branch.items.pop()
    return u


def rule_void_return(unit: N.TranslationUnit) -> N.TranslationUnit:
    """Give every void function an explicit trailing return."""
    u = _clone(unit)
    for item in u.items:
        if (
            isinstance(item, N.FunctionDef)
            and item.body is not None
            and _is_void_function(item)
        ):
            items = item.body.items
            if not items or not isinstance(items[-1], N.ReturnStmt):
                items.append(N.ReturnStmt(None))
    return u


def rule_main_params(unit: N.TranslationUnit) -> N.TranslationUnit:
    """Force the canonical main signature and a final return 0.

    void main becomes int main with bare returns rewritten; a parameterless
    main gains (int argc, char **argv). A main with an unusual parameter
    list (1 or 3+ parameters) is left alone."""
    u = _clone(unit)
    for item in u.items:
        if not isinstance(item, N.FunctionDef) or item.name != "main":
            continue
        if item.body is None:
            continue
        if _is_void_function(item):
            item.return_type = N.TypeName(("int",))

            def to_return_zero(s: N.Node) -> None:
                if isinstance(s, N.ReturnStmt) and s.value is None:
                    s.value = N.Literal("0", "int")
                for child in s.children:
                    to_return_zero(child)

            to_return_zero(item.body)
        if not item.params:
            item.params = [
                N.Declaration(N.TypeName(("int",)), [N.Declarator("argc")]),
                N.Declaration(N.TypeName(("char",)), [N.Declarator("argv", pointer=2)]),
            ]
            item.takes_void = False
        items = item.body.items
        if not items or not isinstance(items[-1], N.ReturnStmt):
            items.append(N.ReturnStmt(N.Literal("0", "int")))
    return u


# Canonical LP64 spellings keyed by the sorted specifier multiset
# (const excluded). Canonical forms map to themselves so the rule is
# idempotent.
DEFAULT_TYPE_MAP: dict[tuple[str, ...], tuple[str, ...]] = {
    ("long",): ("long", "long"),
    ("int", "long"): ("long", "long"),
    ("int", "long", "long"): ("long", "long"),
    ("long", "long"): ("long", "long"),
    ("long", "unsigned"): ("unsigned", "long", "long"),
    ("int", "long", "unsigned"): ("unsigned", "long", "long"),
    ("long", "long", "unsigned"): ("unsigned", "long", "long"),
    ("int", "long", "long", "unsigned"): ("unsigned", "long", "long"),
    ("signed",): ("int",),
    ("int", "signed"): ("int",),
    ("unsigned",): ("unsigned", "int"),
    ("int", "unsigned"): ("unsigned", "int"),
    ("short",): ("short",),
    ("int", "short"): ("short",),
    ("int", "short", "signed"): ("short",),
    ("short", "signed"): ("short",),
    ("short", "unsigned"): ("unsigned", "short"),
    ("int", "short", "unsigned"): ("unsigned", "short"),
    ("char", "unsigned"): ("unsigned", "char"),
    ("int", "unsigned", "signed"): ("unsigned", "int"),
}


def rule_types(unit: N.TranslationUnit, type_map=None) -> N.TranslationUnit:
    """Map equivalent type spellings onto one canonical spelling per type."""
    mapping = DEFAULT_TYPE_MAP if type_map is None else type_map
    u = _clone(unit)
    for node in N.walk(u):
        if isinstance(node, N.TypeName) and node.specifiers:
            const = "const" in node.specifiers
            key = tuple(sorted(s for s in node.specifiers if s != "const"))
            if key in mapping:
                new = mapping[key]
                node.specifiers = (("const",) + tuple(new)) if const else tuple(new)
    return u


def rule_renaming(unit: N.TranslationUnit) -> N.TranslationUnit:
    """Rename declared variables to var_N and functions to func_N.

    One counter per translation unit, numbering in declaration order; main
    keeps its name; identifiers without a local declaration (library calls,
    external globals) and struct member names are untouched."""
    u = _clone(unit)

    func_map: dict[str, str] = {}
    for item in u.items:
        if isinstance(item, N.FunctionDef) and item.name != "main":
            if item.name not in func_map:
                func_map[item.name] = f"func_{len(func_map)}"

    counter = [0]
    scopes: list[dict[str, str]] = [{}]

    def bind(name: str) -> str:
        new = f"var_{counter[0]}"
        counter[0] += 1
        scopes[-1][name] = new
        return new

    def resolve(name: str) -> str | None:
        for scope in reversed(scopes):
            if name in scope:
                return scope[name]
        return func_map.get(name)

    def fix_expr(e):
        if e is None:
            return
        if isinstance(e, N.Identifier):
            new = resolve(e.name)
            if new is not None:
                e.name = new
        elif isinstance(e, N.BinaryOp):
            fix_expr(e.left)
            if e.op in (".", "->"):
                pass  # member names are not scoped variables
            else:
                fix_expr(e.right)
        elif isinstance(e, N.UnaryOp):
            fix_expr(e.operand)
        elif isinstance(e, (N.Assign, N.CompoundAssign)):
            fix_expr(e.target)
            fix_expr(e.value)
        elif isinstance(e, N.Call):
            fix_expr(e.func)
            for a in e.args:
                fix_expr(a)
        elif isinstance(e, N.CommaExpr):
            for i in e.items:
                fix_expr(i)
        elif isinstance(e, N.ParenExpr):
            fix_expr(e.inner)
        elif isinstance(e, N.Cast):
            fix_expr(e.operand)

    def fix_init(init):
        if isinstance(init, N.InitList):
            for i in init.items:
                fix_init(i)
        elif init is not None:
            fix_expr(init)

    def fix_declaration(decl: N.Declaration) -> None:
        if decl.type.struct is not None and decl.type.struct.members is not None:
            pass  # member declarations keep their names
        for d in decl.declarators:
            if d.name is not None:
                d.name = bind(d.name)
            for dim in d.array_dims:
                if dim is not None:
                    fix_expr(dim)
            fix_init(d.init)

    def fix_stmt(s: N.Node) -> None:
        if isinstance(s, N.CompoundStmt):
            scopes.append({})
            for it in s.items:
                fix_stmt(it)
            scopes.pop()
        elif isinstance(s, N.Declaration):
            fix_declaration(s)
        elif isinstance(s, N.ExprStmt):
            fix_expr(s.expr)
        elif isinstance(s, N.ReturnStmt):
            fix_expr(s.value)
        elif isinstance(s, N.IfStmt):
            fix_expr(s.cond)
            fix_stmt(s.then)
            if s.orelse is not None:
                fix_stmt(s.orelse.body)
        elif isinstance(s, N.WhileStmt):
            fix_expr(s.cond)
            fix_stmt(s.body)
        elif isinstance(s, N.DoWhileStmt):
            fix_stmt(s.body)
            fix_expr(s.cond)
        elif isinstance(s, N.ForStmt):
            scopes.append({})
            if isinstance(s.init, N.Declaration):
                fix_declaration(s.init)
            elif s.init is not None:
                fix_expr(s.init)
            fix_expr(s.cond)
            fix_expr(s.step)
            fix_stmt(s.body)
            scopes.pop()
        elif isinstance(s, N.SwitchStmt):
            fix_expr(s.value)
            scopes.append({})
            for clause in s.clauses:
                fix_expr(clause.value)
                for it in clause.stmts:
                    fix_stmt(it)
            scopes.pop()

    for item in u.items:
        if isinstance(item, N.FunctionDef):
            if item.name in func_map:
                item.name = func_map[item.name]
            scopes.append({})
            for p in item.params:
                for d in p.declarators:
                    if d.name is not None:
                        d.name = bind(d.name)
            if item.body is not None:
                for st in item.body.items:
                    fix_stmt(st)
            scopes.pop()
        elif isinstance(item, N.Declaration):
            fix_declaration(item)
    return u


def rule_paren(unit: N.TranslationUnit) -> N.TranslationUnit:
    """Remove grouping parentheses that do not change the parse.

    Each paren is probed individually: drop it, reprint, reparse, and keep
    the removal only if the reparsed tree matches."""
    u = _clone(unit)
    while True:
        removed = False
        for container, attr, index, child in _paren_slots(u):
            if not isinstance(child, N.ParenExpr):
                continue
            _slot_set(container, attr, index, child.inner)
            try:
                same = parse(lex(to_source(u))) == u
            except Exception:
                same = False
            if same:
                removed = True
                break
            _slot_set(container, attr, index, child)
        if not removed:
            return u


def _slot_set(container, attr, index, value) -> None:
    if index is None:
        setattr(container, attr, value)
    else:
        getattr(container, attr)[index] = value


def _paren_slots(root: N.Node):
    """Yield (container, attr, index, expr) for every expression slot."""

    def expr_slots(container, attr, index, e):
        if e is None:
            return
        yield container, attr, index, e
        if isinstance(e, N.BinaryOp):
            yield from expr_slots(e, "left", None, e.left)
            yield from expr_slots(e, "right", None, e.right)
        elif isinstance(e, N.UnaryOp):
            yield from expr_slots(e, "operand", None, e.operand)
        elif isinstance(e, (N.Assign, N.CompoundAssign)):
            yield from expr_slots(e, "target", None, e.target)
            yield from expr_slots(e, "value", None, e.value)
        elif isinstance(e, N.Call):
            yield from expr_slots(e, "func", None, e.func)
            for i, a in enumerate(e.args):
                yield from expr_slots(e, "args", i, a)
        elif isinstance(e, N.CommaExpr):
            for i, a in enumerate(e.items):
                yield from expr_slots(e, "items", i, a)
        elif isinstance(e, N.ParenExpr):
            yield from expr_slots(e, "inner", None, e.inner)
        elif isinstance(e, N.Cast):
            yield from expr_slots(e, "operand", None, e.operand)
        elif isinstance(e, N.InitList):
            for i, a in enumerate(e.items):
                yield from expr_slots(e, "items", i, a)

    def stmt_slots(s):
        if isinstance(s, (N.TranslationUnit, N.CompoundStmt)):
            for it in s.items:
                yield from stmt_slots(it)
        elif isinstance(s, N.FunctionDef):
            if s.body is not None:
                yield from stmt_slots(s.body)
        elif isinstance(s, N.IfStmt):
            yield from expr_slots(s, "cond", None, s.cond)
            yield from stmt_slots(s.then)
            if s.orelse is not None:
                yield from stmt_slots(s.orelse.body)
        elif isinstance(s, N.WhileStmt):
            yield from expr_slots(s, "cond", None, s.cond)
            yield from stmt_slots(s.body)
        elif isinstance(s, N.DoWhileStmt):
            yield from stmt_slots(s.body)
            yield from expr_slots(s, "cond", None, s.cond)
        elif isinstance(s, N.ForStmt):
            if isinstance(s.init, N.Declaration):
                yield from stmt_slots(s.init)
            else:
                yield from expr_slots(s, "init", None, s.init)
            yield from expr_slots(s, "cond", None, s.cond)
            yield from expr_slots(s, "step", None, s.step)
            yield from stmt_slots(s.body)
        elif isinstance(s, N.SwitchStmt):
            yield from expr_slots(s, "value", None, s.value)
            for clause in s.clauses:
                yield from expr_slots(clause, "value", None, clause.value)
                for it in clause.stmts:
                    yield from stmt_slots(it)
        elif isinstance(s, N.ReturnStmt):
            yield from expr_slots(s, "value", None, s.value)
        elif isinstance(s, N.ExprStmt):
            yield from expr_slots(s, "expr", None, s.expr)
        elif isinstance(s, N.Declaration):
            for d in s.declarators:
                for i, dim in enumerate(d.array_dims):
                    yield from expr_slots(d, "array_dims", i, dim)
                if isinstance(d.init, N.InitList):
                    for i, a in enumerate(d.init.items):
                        yield from expr_slots(d.init, "items", i, a)
                else:
                    yield from expr_slots(d, "init", None, d.init)

    yield from stmt_slots(root)


RULES = {
    "Braces": rule_braces,
    "Multidecl": rule_multidecl,
    "CompoundAssign": rule_compound_assign,
    "Comma": rule_comma,
    "Switch2If": rule_switch2if,
    "FlattenIf": rule_flatten_if,
    "IfElse": rule_if_else,
    "UnnecessaryReturn": rule_unnecessary_return,
    "VoidReturn": rule_void_return,
    "MainParams": rule_main_params,
    "Types": rule_types,
    "Renaming": rule_renaming,
    "Paren": rule_paren,
}

RULE_ORDER = (
    "Braces",
    "Multidecl",
    "CompoundAssign",
    "Comma",
    "Switch2If",
    "FlattenIf",
    "IfElse",
    "UnnecessaryReturn",
    "VoidReturn",
    "MainParams",
    "Types",
    "Renaming",
    "Paren",
)


def apply_rule(unit: N.TranslationUnit, name: str, **kwargs) -> N.TranslationUnit:
    """Apply one named rule; unknown names raise ParameterError."""
    if name not in RULES:
        raise ParameterError(f"unknown rule {name!r}; expected one of {sorted(RULES)}")
    return RULES[name](unit, **kwargs)


def normalize(
    unit: N.TranslationUnit, type_map=None, max_passes: int = 10
) -> N.TranslationUnit:
    """Apply all rules in their fixed order until a pass changes nothing."""
    current = _clone(unit)
    for _ in range(max_passes):
        before = _clone(current)
        for name in RULE_ORDER:
            if name == "Types":
                current = rule_types(current, type_map=type_map)
            else:
                current = RULES[name](current)
        if current == before:
            return current
    raise NormalizeError(
        f"normalization did not reach a fixed point within {max_passes} passes"
    )


def normalize_source(source: str, type_map=None) -> str:
    """Parse, normalize, and reprint source text."""
    return to_source(normalize(parse(lex(source)), type_map=type_map))
