"""Retyping rules for faked values observed in typed positions.

Each rule fires at most once per cell (cells are monotone); the rule
tag names used in trace rows are the public contract of this module:
ER_1, ER_2, R_ASSIGN, R_BINOPERATOR1, R_BINOPERATOR2, R_UNARYOPERATOR,
R_CALL1, R_CALL2, R_NEW, R_INDEX1, R_INDEX2.
"""
from __future__ import annotations

from .jsast import SourceAnchor
from .values import (
    FakedValue, JSObject, deref, make_array, make_faked, tag_name,
)

# operators whose semantics force Number no matter what the other side is
NUMBER_FORCING = {"-", "*", "/", "%", "<<", ">>", ">>>", "&", "|", "^"}
RELATIONAL = {"<", ">", "<=", ">="}
EQUALITY = {"==", "!=", "===", "!=="}
BINARY_OPS = sorted(NUMBER_FORCING | RELATIONAL | EQUALITY | {"+", "instanceof", "in", ","})
UNARY_NUMBER_OPS = {"++", "--", "+", "-", "~"}
UNARY_TOTAL_OPS = {"typeof", "void", "delete"}


class RetypeContext:
    """What the rules need from the running interpreter: a number source
    and a trace sink. The interpreter subclasses/duck-types this."""

    def draw_number(self) -> float:
        raise NotImplementedError

    def log_action(self, anchor: SourceAnchor | None, rule: str, target: str, detail: str = ""):
        raise NotImplementedError


def materialize(ctx: RetypeContext, cell: FakedValue, target: str):
    """Concrete value for a retype target: number, string, bool, object."""
    if target == "number":
        return ctx.draw_number()
    if target == "string":
        return cell.sentinel
    if target == "bool":
        return True
    if target == "object":
        obj = JSObject("Object")
        obj.props.update(cell.props)
        return obj
    raise ValueError(f"unknown retype target {target!r}")


def _single_operand_target(op: str, other, faked_is_left: bool) -> str | None:
    """R-BINOPERATOR1 target tag, or None when the operator is total."""
    if op in NUMBER_FORCING:
        return "number"
    if op == "+" or op in RELATIONAL:
        return "string" if isinstance(other, str) else "number"
    if op in EQUALITY:
        if isinstance(other, str):
            return "string"
        if isinstance(other, bool):
            return "bool"
        return "number"  # numbers, nullish, and objects all settle as Number
    if op == "instanceof":
        return "callable" if not faked_is_left else None
    if op == "in":
        return "string" if faked_is_left else None
    if op == ",":
        return None
    raise ValueError(f"unknown binary operator {op!r}")


def _apply(ctx, anchor, cell: FakedValue, target: str, rule: str, label=None):
    name = label or cell.provenance.name
    if target == "callable":
        cell.become_callable()
        ctx.log_action(anchor, rule, name, "FakedFunction")
        return cell
    value = materialize(ctx, cell, target)
    cell.retype_to(value)
    ctx.log_action(anchor, rule, name, tag_name(value))
    return value


def retype_binary(ctx, anchor, op, lraw, rraw):
    """Apply R-BINOPERATOR1/2 and return concrete (lhs, rhs) operands."""
    lval, rval = deref(lraw), deref(rraw)
    if op == ",":
        return lval, rval  # comma never consults its operands
    lf = isinstance(lval, FakedValue)
    rf = isinstance(rval, FakedValue)
    if lf and rf:
        lval = _apply(ctx, anchor, lval, "number", "R_BINOPERATOR2")
        rval = _apply(ctx, anchor, rval, "number", "R_BINOPERATOR2")
    elif lf:
        target = _single_operand_target(op, rval, faked_is_left=True)
        if target is not None:
            lval = _apply(ctx, anchor, lval, target, "R_BINOPERATOR1")
    elif rf:
        target = _single_operand_target(op, lval, faked_is_left=False)
        if target is not None:
            rval = _apply(ctx, anchor, rval, target, "R_BINOPERATOR1")
    return lval, rval


def retype_unary(ctx, anchor, op, raw):
    """Apply R-UNARYOPERATOR and return the concrete operand."""
    val = deref(raw)
    if not isinstance(val, FakedValue):
        return val
    if op in UNARY_NUMBER_OPS:
        return _apply(ctx, anchor, val, "number", "R_UNARYOPERATOR")
    if op == "!":
        return _apply(ctx, anchor, val, "bool", "R_UNARYOPERATOR")
    if op in UNARY_TOTAL_OPS:
        return val  # typeof/void/delete observe without retyping
    raise ValueError(f"unknown unary operator {op!r}")


def retype_callable(ctx, anchor, cell: FakedValue, via_new: bool) -> FakedValue:
    """R-CALL1 / R-NEW: a faked object used as a callee becomes a faked
    function in place; the call itself yields a fresh faked object."""
    if not cell.callable_faked:
        cell.become_callable()
        ctx.log_action(anchor, "R_NEW" if via_new else "R_CALL1",
                       cell.provenance.name, "FakedFunction")
    return cell


def retype_argument(ctx, anchor, cell: FakedValue, expected: str, label=None):
    """R-CALL2: builtin signature drives the argument's concrete type.
    label names the argument expression in the log (the cell's birth
    name is usually a worse description of what the program passed)."""
    if expected == "function":
        return _apply(ctx, anchor, cell, "callable", "R_CALL2", label)
    return _apply(ctx, anchor, cell, expected, "R_CALL2", label)


def retype_index(ctx, anchor, cell: FakedValue) -> float:
    """R-INDEX2: a faked index settles to Number 0 (runs before R-INDEX1)."""
    cell.retype_to(0.0)
    ctx.log_action(anchor, "R_INDEX2", cell.provenance.name, "Number")
    return 0.0


def retype_index_base(ctx, anchor, cell: FakedValue, index: int) -> JSObject:
    """R-INDEX1: a faked base under a numeric index becomes an array whose
    length is twice the index (at least one slot for index 0)."""
    length = max(1, 2 * index)
    arr = make_array([
        make_faked(f"{cell.provenance.name}[{i}]", "array_element", anchor)
        for i in range(length)
    ])
    arr.faked_array = True
    arr.name = cell.provenance.name
    arr.props.update(cell.props)
    cell.retype_to(arr)
    ctx.log_action(anchor, "R_INDEX1", cell.provenance.name, f"Array(len={length})")
    return arr


def grow_faked_array(arr: JSObject, index: int, anchor) -> None:
    """Out-of-bounds touch on a faked array doubles it until it covers."""
    while len(arr.elements) <= index:
        old = len(arr.elements)
        new_len = max(1, old * 2)
        arr.elements.extend(
            make_faked(f"{arr.name}[{i}]", "array_element", anchor)
            for i in range(old, new_len)
        )


def divisor_for(ctx, anchor, raw, value):
    """Division-by-zero guard: a zero that exists only because a faked
    cell was materialized as Number is replaced by 1; native zeros pass
    through (the engine divides to Infinity like any other)."""
    if value == 0.0 and isinstance(raw, FakedValue) and not raw.is_faked:
        ctx.log_action(anchor, "DIV_ZERO", raw.provenance.name, "substituted 1")
        return 1.0
    return value


def binary_rule_outcome(op: str, position: str) -> str:
    """Static rule table used by the exhaustiveness check: which rule
    governs an operator with a faked operand in the given position
    (left/right/both), and what the operand settles as."""
    if op == ",":
        return "total:no-retype"
    if position == "both":
        return "R_BINOPERATOR2:number,number"
    faked_is_left = position == "left"
    other_probe = 1.0  # a non-string concrete stand-in
    target = _single_operand_target(op, other_probe, faked_is_left)
    return f"R_BINOPERATOR1:{target}" if target else "total:no-retype"


def unary_rule_outcome(op: str) -> str:
    if op in UNARY_NUMBER_OPS:
        return "R_UNARYOPERATOR:number"
    if op == "!":
        return "R_UNARYOPERATOR:bool"
    if op in UNARY_TOTAL_OPS:
        return "total:no-retype"
    raise ValueError(op)
