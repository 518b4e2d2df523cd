"""AST node family for the supported JavaScript subset.

Every node carries a SourceAnchor; nodes that can branch control flow
(if, while/do-while, for, ternary, case tests, try/catch, &&, ||) are
branch points, anchored at the token that makes collisions impossible
(statement keyword, case keyword, or the operator itself).
"""
from __future__ import annotations

from dataclasses import dataclass, field


@dataclass(frozen=True)
class SourceAnchor:
    unit: str
    offset: int

    def __str__(self) -> str:
        return f"{self.unit}:{self.offset}"


@dataclass
class Node:
    anchor: SourceAnchor
    branch_point = False


# ---- expressions ----

@dataclass
class Num(Node):
    value: float


@dataclass
class Str(Node):
    value: str


@dataclass
class BoolLit(Node):
    value: bool


@dataclass
class NullLit(Node):
    pass


@dataclass
class RegexLit(Node):
    pattern: str
    flags: str


@dataclass
class Ident(Node):
    name: str


@dataclass
class This(Node):
    pass


@dataclass
class ArrayLit(Node):
    elements: list  # Node or None for elisions


@dataclass
class ObjectLit(Node):
    props: list  # (key: str, value: Node)


@dataclass
class FuncExpr(Node):
    name: str | None
    params: list
    body: list  # statements


@dataclass
class Member(Node):
    base: Node
    field_name: str


@dataclass
class IndexE(Node):
    base: Node
    index: Node


@dataclass
class Call(Node):
    callee: Node
    args: list


@dataclass
class New(Node):
    callee: Node
    args: list


@dataclass
class Unary(Node):
    op: str
    operand: Node
    prefix: bool = True


@dataclass
class Binary(Node):
    op: str
    lhs: Node
    rhs: Node


@dataclass
class Logical(Node):
    op: str  # && or ||
    lhs: Node
    rhs: Node
    branch_point = True


@dataclass
class Ternary(Node):
    cond: Node
    then_expr: Node
    else_expr: Node
    # both arms always execute under forcing, so never a flip target
    branch_point = False


@dataclass
class Assign(Node):
    op: str  # = or compound
    target: Node
    value: Node


# ---- statements ----

@dataclass
class Empty(Node):
    pass


@dataclass
class Block(Node):
    body: list


@dataclass
class VarDecl(Node):
    decls: list  # (name: str, init: Node or None, name_anchor: SourceAnchor)


@dataclass
class ExprStmt(Node):
    expr: Node


@dataclass
class If(Node):
    cond: Node
    then_body: Node
    else_body: Node | None
    branch_point = True


@dataclass
class While(Node):
    cond: Node
    body: Node
    post_test: bool = False  # true for do-while
    branch_point = True


@dataclass
class For(Node):
    init: Node | None
    cond: Node | None
    update: Node | None
    body: Node | None = None

    @property
    def branch_point(self):  # type: ignore[override]
        return self.cond is not None


@dataclass
class ForIn(Node):
    target: Node  # Ident, Member, or IndexE
    declares: bool
    obj: Node
    body: Node
    of_loop: bool = False


@dataclass
class SwitchCase(Node):
    test: Node | None  # None for default
    body: list = field(default_factory=list)

    @property
    def branch_point(self):  # type: ignore[override]
        return self.test is not None


@dataclass
class Switch(Node):
    disc: Node
    cases: list


@dataclass
class TryStmt(Node):
    block: Node
    param: str | None
    handler: Node | None
    finalizer: Node | None

    @property
    def branch_point(self):  # type: ignore[override]
        return self.handler is not None


@dataclass
class Return(Node):
    value: Node | None


@dataclass
class FuncDecl(Node):
    name: str
    params: list
    body: list


@dataclass
class Break(Node):
    pass


@dataclass
class Continue(Node):
    pass


@dataclass
class Throw(Node):
    value: Node


@dataclass
class Program(Node):
    unit: str
    body: list


def display(node: Node) -> str:
    """Compact source-like rendering of simple targets for trace logs."""
    if isinstance(node, Ident):
        return node.name
    if isinstance(node, This):
        return "this"
    if isinstance(node, Member):
        return f"{display(node.base)}.{node.field_name}"
    if isinstance(node, IndexE):
        return f"{display(node.base)}[]"
    if isinstance(node, Call):
        return f"{display(node.callee)}()"
    if isinstance(node, Num):
        return js_num_str(node.value)
    if isinstance(node, Str):
        return repr(node.value)
    return f"<{type(node).__name__.lower()}>"


def js_num_str(x: float) -> str:
    if x != x:
        return "NaN"
    if x == float("inf"):
        return "Infinity"
    if x == float("-inf"):
        return "-Infinity"
    if x == int(x) and abs(x) < 1e21:
        return str(int(x))
    return repr(x)


def iter_child_nodes(node: Node):
    for val in vars(node).values():
        if isinstance(val, Node):
            yield val
        elif isinstance(val, list):
            for item in val:
                if isinstance(item, Node):
                    yield item
                elif isinstance(item, tuple):
                    for part in item:
                        if isinstance(part, Node):
                            yield part


def walk(node: Node):
    yield node
    for child in iter_child_nodes(node):
        yield from walk(child)
