"""Forced execution of one script unit.

execute() runs a parsed program under a switch sequence: every branch
instance whose anchor is switched takes the forced direction (condition
still evaluated for side effects), every other instance records the
direction it took naturally. Missing values fake themselves into
existence instead of throwing, loops and recursion run under budgets,
and callbacks registered during the run are invoked once at the end
without waiting.
"""
from __future__ import annotations

import re
import sys
import time
import random
from dataclasses import dataclass, field

from . import jsast as ast
from .jsast import SourceAnchor, display, js_num_str
from .lexer import LexError
from .parser import JsSyntaxError, parse
from .retyping import (
    retype_argument, retype_binary, retype_callable, retype_index,
    retype_index_base, retype_unary, divisor_for, grow_faked_array,
    NUMBER_FORCING,
)
from .values import (
    NULL, UNDEFINED, FakedValue, JSObject, deref, make_array, make_faked,
    make_function, tag_name, truthy, type_tag, TypeTag,
)

EVENT_KINDS = (
    "eval_string", "document_write", "faked_function_string_arg",
    "callback_registered", "timer_registered", "shellcode_policy_hit",
    "activex_probe",
)

TERMINATIONS = (
    "normal", "loop_budget", "recursion_cap", "global_timeout",
    "syntax_error_in_dynamic_unit",
)

DEFAULT_SEED = 0
MAX_PRED_INSTANCES = 4096  # per (anchor, direction) per run
MAX_EVENTS = 10000


@dataclass
class Budgets:
    loop_budget_ms: float = 2000.0
    recursion_cap: int = 512
    sample_timeout_s: float = 300.0
    seed: int = DEFAULT_SEED
    activex_mode: str = "throw"  # or "fake"
    spray_chunk_len: int = 65536


@dataclass
class PredicateRecord:
    anchor: SourceAnchor
    taken: bool
    forced: bool


@dataclass
class DetectionEvent:
    kind: str
    payload: str
    anchor: SourceAnchor | None
    in_catch: bool = False
    extra: dict = field(default_factory=dict)


@dataclass
class RecoveryAction:
    anchor: SourceAnchor | None
    kind: str
    target: str
    detail: str = ""


@dataclass
class NewCode:
    name: str
    text: str
    kind: str  # eval, timer_string, document_write, faked_call_arg


@dataclass
class CallbackQueueEntry:
    func: JSObject | None
    source: str | None
    source_name: str | None
    anchor: SourceAnchor
    api: str


@dataclass
class WriteStats:
    total: int = 0
    big: int = 0
    max_len: int = 0


@dataclass
class ExecutionOutcome:
    preds: list
    new_js: list
    events: list
    recoveries: list
    terminated_by: str
    fired_switches: set
    prefix_mismatch: bool
    indexed_writes: dict
    callbacks_invoked: int


class GlobalTimeout(Exception):
    pass


class ThrowSignal(Exception):
    def __init__(self, value):
        super().__init__()
        self.value = value


class BreakSignal(Exception):
    pass


class ContinueSignal(Exception):
    pass


class ReturnSignal(Exception):
    def __init__(self, value):
        super().__init__()
        self.value = value


class Scope:
    __slots__ = ("vars", "parent")

    def __init__(self, parent=None, vars_dict=None):
        self.vars = {} if vars_dict is None else vars_dict
        self.parent = parent


_MISSING = object()

_PERCENT_UNITS = re.compile(r"(?:%u[0-9a-fA-F]{4})+")
_BACKSLASH_UNITS = re.compile(r"(?:\\u[0-9a-fA-F]{4})+")


def shellcode_unit_run(s: str) -> int:
    """Longest run of consecutive %uXXXX / \\uXXXX escape units in s."""
    best = 0
    for m in _PERCENT_UNITS.finditer(s):
        best = max(best, len(m.group(0)) // 6)
    for m in _BACKSLASH_UNITS.finditer(s):
        best = max(best, len(m.group(0)) // 6)
    return best


def looks_like_js(text: str) -> bool:
    """A string argument counts as code when it parses and contains at
    least one statement that is not a lone identifier or literal."""
    if not text.strip():
        return False
    try:
        prog = parse(text, "<probe>")
    except (LexError, JsSyntaxError, RecursionError):
        return False
    lone = (ast.Ident, ast.Num, ast.Str, ast.BoolLit, ast.NullLit, ast.RegexLit)
    for st in prog.body:
        if isinstance(st, ast.ExprStmt) and isinstance(st.expr, lone):
            continue
        if isinstance(st, ast.Empty):
            continue
        return True
    return False


class Interpreter:
    def __init__(self, program: ast.Program, switches=(), budgets: Budgets | None = None,
                 deadline: float | None = None):
        self.program = program
        self.unit = program.unit
        self.budgets = budgets or Budgets()
        self.switches = tuple(switches)
        self.switch_map = {a: d for a, d in self.switches}
        self.deadline = deadline if deadline is not None else (
            time.monotonic() + self.budgets.sample_timeout_s)
        self.rng = random.Random(self.budgets.seed)

        self.preds: list[PredicateRecord] = [
            PredicateRecord(a, d, True) for a, d in self.switches]
        self._pred_counts: dict = {}
        self.fired_switches: set = set()
        self.recoveries: list[RecoveryAction] = []
        self.events: list[DetectionEvent] = []
        self._events_dropped = 0
        self.new_js: list[NewCode] = []
        self._new_js_names: set = set()
        self.indexed_writes: dict[SourceAnchor, WriteStats] = {}
        self._spray_observed: set = set()
        self._big_strings: dict = {}

        self.cbq: list[CallbackQueueEntry] = []
        self._cb_ids: set = set()
        self._cb_cursor = 0
        self.callbacks_invoked = 0
        self.timer_seq = 0
        self.document = None
        self.doc_writes: list[str] = []
        self._eval_counters: dict = {}
        self._write_counter = 0

        self.call_depth = 0
        self.catch_depth = 0
        self.loop_budget_hit = False
        self.recursion_hit = False
        self._step = 0

        from .hostenv import install_globals
        self.global_obj = JSObject("global")
        self.global_scope = Scope(vars_dict=self.global_obj.props)
        self.scope = self.global_scope
        self.this_stack = [self.global_obj]
        self.eval_native = install_globals(self)

    # ---- plumbing ----

    def check_deadline(self):
        if time.monotonic() > self.deadline:
            raise GlobalTimeout()

    def step(self):
        self._step += 1
        if self._step % 1024 == 0:
            self.check_deadline()

    def draw_number(self) -> float:
        return float(self.rng.randint(1, 16))

    def log_action(self, anchor, kind, target, detail=""):
        self.recoveries.append(RecoveryAction(anchor, kind, target, detail))

    def event(self, kind, payload, anchor, extra=None):
        if len(self.events) >= MAX_EVENTS:
            self._events_dropped += 1
            return
        payload = payload if len(payload) <= 4096 else payload[:4096]
        self.events.append(DetectionEvent(
            kind, payload, anchor, self.catch_depth > 0, extra or {}))

    def observe_string(self, s, anchor, where):
        if len(s) < 12:
            return
        units = shellcode_unit_run(s)
        if units >= 8:
            self.event("shellcode_policy_hit", s[:128], anchor,
                       {"units": units, "where": where, "length": len(s)})

    def record_pred(self, anchor, taken):
        key = (anchor, taken)
        n = self._pred_counts.get(key, 0)
        if n < MAX_PRED_INSTANCES:
            self._pred_counts[key] = n + 1
            self.preds.append(PredicateRecord(anchor, taken, False))

    def dynamic_unit_name(self, anchor, tag="eval") -> str:
        # named after the unit the call site sits in, not the unit being
        # run: an eval inside an eval body chains its provenance
        key = (anchor.unit, tag, anchor.offset)
        k = self._eval_counters.get(key, 0) + 1
        self._eval_counters[key] = k
        return f"{anchor.unit}:{tag}@{anchor.offset}#{k}"

    def add_new_js(self, name, text, kind):
        if name in self._new_js_names:
            return
        self._new_js_names.add(name)
        self.new_js.append(NewCode(name, text, kind))

    # ---- run ----

    def run(self) -> ExecutionOutcome:
        terminated = "normal"
        try:
            self.hoist(self.program.body, self.global_scope)
            self.exec_stmts_recovering(self.program.body)
            self.sweep_event_handlers()
            self.drain_callbacks()
            self.sweep_event_handlers()
            self.drain_callbacks()
        except GlobalTimeout:
            terminated = "global_timeout"
        self.harvest_document_writes()
        if terminated == "normal":
            if self.loop_budget_hit:
                terminated = "loop_budget"
            elif self.recursion_hit:
                terminated = "recursion_cap"
        mismatch = any(a not in self.fired_switches for a in self.switch_map)
        if mismatch:
            missing = [str(a) for a in self.switch_map if a not in self.fired_switches]
            self.log_action(None, "PREFIX_MISMATCH", ",".join(missing))
        return ExecutionOutcome(
            preds=self.preds,
            new_js=self.new_js,
            events=self.events,
            recoveries=self.recoveries,
            terminated_by=terminated,
            fired_switches=self.fired_switches,
            prefix_mismatch=mismatch,
            indexed_writes=self.indexed_writes,
            callbacks_invoked=self.callbacks_invoked,
        )

    def exec_stmts_recovering(self, stmts):
        """Top-of-unit statement loop: an uncaught throw abandons only
        the statement that raised it."""
        for st in stmts:
            try:
                self.exec_stmt(st)
            except ThrowSignal as t:
                self.log_action(st.anchor, "UNCAUGHT_THROW", self.to_string(t.value)[:80])
            except RecursionError:
                self.recursion_hit = True
                self.log_action(st.anchor, "RECURSION_CAP", "host stack", "statement abandoned")

    def sweep_event_handlers(self):
        """Handlers assigned as on* properties get invoked once at run
        end, the same no-wait treatment as registered callbacks."""
        containers = [self.global_obj]
        if self.document is not None:
            containers.append(self.document)
            body = deref(self.document.props.get("body", UNDEFINED))
            if isinstance(body, JSObject):
                containers.append(body)
        anchor = SourceAnchor(self.unit, 0)
        for obj in containers:
            for key, val in list(obj.props.items()):
                if not (key.startswith("on") and len(key) > 2):
                    continue
                v = deref(val)
                if isinstance(v, JSObject) and v.is_callable and v.native is None:
                    self.enqueue_callback(v, anchor, f"handler:{key}",
                                          kind="callback_registered")

    def drain_callbacks(self):
        while self._cb_cursor < len(self.cbq):
            entry = self.cbq[self._cb_cursor]
            self._cb_cursor += 1
            self.check_deadline()
            try:
                if entry.func is not None:
                    args = [make_faked(f"{entry.api}:arg{j}", "FFun_return", entry.anchor)
                            for j in range(len(entry.func.params or []))]
                    self.call_user(entry.anchor, entry.func, self.global_obj, args)
                else:
                    prog = parse(entry.source, entry.source_name)
                    self.hoist(prog.body, self.global_scope)
                    saved, self.scope = self.scope, self.global_scope
                    try:
                        self.exec_stmts_recovering(prog.body)
                    finally:
                        self.scope = saved
                self.callbacks_invoked += 1
            except ThrowSignal as t:
                self.log_action(entry.anchor, "UNCAUGHT_THROW",
                                self.to_string(t.value)[:80], "in callback")
                self.callbacks_invoked += 1
            except (LexError, JsSyntaxError) as e:
                self.log_action(entry.anchor, "SYNTAX_IN_EVAL", entry.api, str(e)[:120])
            except RecursionError:
                self.recursion_hit = True
                self.log_action(entry.anchor, "RECURSION_CAP", "host stack", "callback abandoned")

    def harvest_document_writes(self):
        if not self.doc_writes:
            return
        from .hostenv import extract_scripts
        text = "".join(self.doc_writes)
        base = f"{self.unit}:write"
        for name, code in extract_scripts(text, base):
            self.add_new_js(name, code, "document_write")

    # ---- hoisting and scopes ----

    def hoist(self, stmts, scope):
        names: list[str] = []
        funcs: list[ast.FuncDecl] = []
        stack = list(stmts)
        while stack:
            node = stack.pop()
            if isinstance(node, ast.VarDecl):
                names.extend(d[0] for d in node.decls)
            elif isinstance(node, ast.FuncDecl):
                funcs.append(node)
            elif isinstance(node, ast.ForIn):
                if node.declares and isinstance(node.target, ast.Ident):
                    names.append(node.target.name)
                stack.append(node.body)
            elif isinstance(node, (ast.Block,)):
                stack.extend(node.body)
            elif isinstance(node, ast.If):
                stack.append(node.then_body)
                if node.else_body:
                    stack.append(node.else_body)
            elif isinstance(node, ast.While):
                stack.append(node.body)
            elif isinstance(node, ast.For):
                if node.init is not None:
                    stack.append(node.init)
                stack.append(node.body)
            elif isinstance(node, ast.TryStmt):
                stack.append(node.block)
                if node.handler:
                    stack.append(node.handler)
                if node.finalizer:
                    stack.append(node.finalizer)
            elif isinstance(node, ast.Switch):
                for case in node.cases:
                    stack.extend(case.body)
        for name in names:
            if name not in scope.vars:
                scope.vars[name] = UNDEFINED
        for fd in funcs:
            scope.vars[fd.name] = make_function(fd.name, fd.params, fd.body, scope)

    def read_var(self, name, anchor):
        s = self.scope
        while s is not None:
            v = s.vars.get(name, _MISSING)
            if v is not _MISSING:
                return v
            s = s.parent
        cell = make_faked(name, "ER_1_lookup", anchor)
        self.global_scope.vars[name] = cell
        self.log_action(anchor, "ER_1", name, "FakedObject")
        return cell

    def write_var(self, name, value):
        s = self.scope
        while s is not None:
            if name in s.vars:
                s.vars[name] = value
                return
            s = s.parent
        self.global_scope.vars[name] = value

    def peek_var(self, name):
        s = self.scope
        while s is not None:
            v = s.vars.get(name, _MISSING)
            if v is not _MISSING:
                return v
            s = s.parent
        return _MISSING

    # ---- statements ----

    def exec_stmt(self, node):
        self.step()
        m = self._STMT.get(type(node))
        if m is None:
            raise AssertionError(f"no handler for {type(node).__name__}")
        return m(self, node)

    def exec_block(self, node):
        out = None
        for st in node.body:
            v = self.exec_stmt(st)
            if v is not None:
                out = v
        return out

    def exec_empty(self, node):
        return None

    def exec_var(self, node):
        for name, init, name_anchor in node.decls:
            if init is None:
                current = self.peek_var(name)
                if current is UNDEFINED or current is _MISSING:
                    cell = make_faked(name, "ER_2_null_init", name_anchor)
                    self.write_var(name, cell)
                    self.log_action(name_anchor, "ER_2", name, "FakedObject")
                continue
            value = self.eval_expr(init)
            if deref(value) is NULL or deref(value) is UNDEFINED:
                cell = make_faked(name, "ER_2_null_init", name_anchor)
                self.write_var(name, cell)
                self.log_action(name_anchor, "ER_2", name, "FakedObject")
            else:
                self.write_var(name, value)
        return None

    def exec_exprstmt(self, node):
        return self.eval_expr(node.expr)

    def exec_funcdecl(self, node):
        return None  # bound during hoisting

    def exec_if(self, node):
        taken = self.branch(node.anchor, lambda: self.eval_expr(node.cond))
        if taken:
            return self.exec_stmt(node.then_body)
        if node.else_body is not None:
            return self.exec_stmt(node.else_body)
        return None

    def exec_while(self, node):
        start = time.monotonic()
        limit = self.budgets.loop_budget_ms / 1000.0
        out = None
        first = True
        while True:
            self.check_deadline()
            if time.monotonic() - start > limit:
                self.loop_budget_hit = True
                self.log_action(node.anchor, "LOOP_BUDGET", "while",
                                f"{self.budgets.loop_budget_ms:g}ms")
                break
            if node.post_test and first:
                first = False
            else:
                if not self.branch(node.anchor, lambda: self.eval_expr(node.cond)):
                    break
            try:
                v = self.exec_stmt(node.body)
                if v is not None:
                    out = v
            except BreakSignal:
                break
            except ContinueSignal:
                continue
        return out

    def exec_for(self, node):
        if node.init is not None:
            self.exec_stmt(node.init)
        start = time.monotonic()
        limit = self.budgets.loop_budget_ms / 1000.0
        out = None
        while True:
            self.check_deadline()
            if time.monotonic() - start > limit:
                self.loop_budget_hit = True
                self.log_action(node.anchor, "LOOP_BUDGET", "for",
                                f"{self.budgets.loop_budget_ms:g}ms")
                break
            if node.cond is not None:
                if not self.branch(node.anchor, lambda: self.eval_expr(node.cond)):
                    break
            try:
                v = self.exec_stmt(node.body)
                if v is not None:
                    out = v
            except BreakSignal:
                break
            except ContinueSignal:
                pass
            if node.update is not None:
                self.eval_expr(node.update)
        return out

    def exec_forin(self, node):
        obj = deref(self.eval_expr(node.obj))
        items = self._enum_items(obj, node.of_loop)
        if node.declares and isinstance(node.target, ast.Ident):
            if node.target.name not in self.scope.vars:
                self.scope.vars[node.target.name] = UNDEFINED
        out = None
        for item in items:
            self.check_deadline()
            self.assign_target(node.target, item, node.anchor, log_faked=False)
            try:
                v = self.exec_stmt(node.body)
                if v is not None:
                    out = v
            except BreakSignal:
                break
            except ContinueSignal:
                continue
        return out

    def _enum_items(self, obj, of_loop):
        if isinstance(obj, str):
            if of_loop:
                return list(obj)
            return [str(i) for i in range(len(obj))]
        if isinstance(obj, FakedValue):
            keys = list(obj.props.keys())
            return [deref(obj.props[k]) for k in keys] if of_loop else keys
        if isinstance(obj, JSObject):
            if obj.is_array:
                if of_loop:
                    return list(obj.elements)
                idx = [str(i) for i in range(len(obj.elements))]
                return idx + [k for k in obj.props if k != "prototype"]
            if of_loop:
                return list(obj.props.values())
            return list(obj.props.keys())
        return []

    def exec_return(self, node):
        value = UNDEFINED if node.value is None else self.eval_expr(node.value)
        raise ReturnSignal(value)

    def exec_break(self, node):
        raise BreakSignal()

    def exec_continue(self, node):
        raise ContinueSignal()

    def exec_throw(self, node):
        raise ThrowSignal(self.eval_expr(node.value))

    def exec_try(self, node):
        if node.handler is None:
            try:
                return self.exec_stmt(node.block)
            finally:
                self.exec_stmt(node.finalizer)
        anchor = node.anchor
        try:
            if anchor in self.switch_map:
                self.fired_switches.add(anchor)
                if self.switch_map[anchor]:
                    # forced try arm: a genuine throw has nowhere to go
                    try:
                        return self.exec_stmt(node.block)
                    except ThrowSignal as t:
                        self.log_action(anchor, "CAUGHT_SUPPRESSED", "try",
                                        self.to_string(t.value)[:80])
                        return None
                # forced catch arm: the block still runs for its effects
                try:
                    self.exec_stmt(node.block)
                    err = make_faked(node.param, "ER_1_lookup", anchor)
                    self.log_action(anchor, "ER_1", node.param, "forced catch binding")
                except ThrowSignal as t:
                    err = t.value
                return self._run_handler(node, err)
            try:
                v = self.exec_stmt(node.block)
            except ThrowSignal as t:
                self.record_pred(anchor, False)
                return self._run_handler(node, t.value)
            self.record_pred(anchor, True)
            return v
        finally:
            if node.finalizer is not None:
                self.exec_stmt(node.finalizer)

    def _run_handler(self, node, err_value):
        saved = self.scope.vars.get(node.param, _MISSING)
        self.scope.vars[node.param] = err_value
        self.catch_depth += 1
        try:
            return self.exec_stmt(node.handler)
        finally:
            self.catch_depth -= 1
            if saved is _MISSING:
                self.scope.vars.pop(node.param, None)
            else:
                self.scope.vars[node.param] = saved

    def exec_switch(self, node):
        disc = self.eval_expr(node.disc)
        enter = None
        for i, case in enumerate(node.cases):
            if case.test is None:
                continue
            taken = self.branch(
                case.anchor,
                lambda c=case: self._strict_eq_retyped(case.anchor, disc, self.eval_expr(c.test)))
            if taken:
                enter = i
                break
        if enter is None:
            for i, case in enumerate(node.cases):
                if case.test is None:
                    enter = i
                    break
        out = None
        if enter is not None:
            try:
                for case in node.cases[enter:]:
                    for st in case.body:
                        v = self.exec_stmt(st)
                        if v is not None:
                            out = v
            except BreakSignal:
                pass
        return out

    def _strict_eq_retyped(self, anchor, lraw, rraw):
        lval, rval = retype_binary(self, anchor, "===", lraw, rraw)
        return self.strict_equals(lval, rval)

    # ---- branching core ----

    def branch(self, anchor, cond_thunk) -> bool:
        cond_value = cond_thunk()  # side effects always happen
        if anchor in self.switch_map:
            self.fired_switches.add(anchor)
            return self.switch_map[anchor]
        taken = truthy(cond_value)
        self.record_pred(anchor, taken)
        return taken

    # ---- expressions ----

    def eval_expr(self, node):
        self.step()
        m = self._EXPR.get(type(node))
        if m is None:
            raise AssertionError(f"no handler for {type(node).__name__}")
        return m(self, node)

    def ev_num(self, node):
        return node.value

    def ev_str(self, node):
        return node.value

    def ev_bool(self, node):
        return node.value

    def ev_null(self, node):
        return NULL

    def ev_regex(self, node):
        from .hostenv import make_regex_object
        return make_regex_object(node.pattern, node.flags)

    def ev_ident(self, node):
        return self.read_var(node.name, node.anchor)

    def ev_this(self, node):
        return self.this_stack[-1]

    def ev_array(self, node):
        return make_array([
            UNDEFINED if el is None else self.eval_expr(el) for el in node.elements])

    def ev_object(self, node):
        obj = JSObject("Object")
        for key, value in node.props:
            obj.props[key] = self.eval_expr(value)
        return obj

    def ev_funcexpr(self, node):
        fn = make_function(node.name, node.params, node.body, self.scope)
        return fn

    def ev_member(self, node):
        base = self.eval_expr(node.base)
        return self.get_member(base, node.field_name, node.anchor, display(node.base))

    def ev_index(self, node):
        base_raw = self.eval_expr(node.base)
        idx_raw = self.eval_expr(node.index)
        return self.index_read(node.anchor, base_raw, idx_raw, display(node.base))

    def ev_ternary(self, node):
        cond = self.eval_expr(node.cond)
        then_v = self.eval_expr(node.then_expr)
        else_v = self.eval_expr(node.else_expr)
        return then_v if truthy(cond) else else_v

    def ev_logical(self, node):
        lraw = self.eval_expr(node.lhs)
        anchor = node.anchor
        if anchor in self.switch_map:
            self.fired_switches.add(anchor)
            take_rhs = self.switch_map[anchor]
        else:
            take_rhs = truthy(lraw) if node.op == "&&" else not truthy(lraw)
            self.record_pred(anchor, take_rhs)
        if take_rhs:
            return self.eval_expr(node.rhs)
        return lraw

    def ev_assign(self, node):
        if node.op == "=":
            return self.assign_target_expr(node)
        return self.compound_assign(node)

    def ev_unary(self, node):
        op = node.op
        if op == "typeof":
            return self.unary_typeof(node)
        if op == "delete":
            return self.unary_delete(node)
        if op == "void":
            self.eval_expr(node.operand)
            return UNDEFINED
        if op in ("++", "--"):
            return self.unary_incdec(node)
        raw = self.eval_expr(node.operand)
        val = retype_unary(self, node.anchor, op, raw)
        if op == "!":
            return not truthy(val)
        if op == "-":
            return -self.to_number(val)
        if op == "+":
            return self.to_number(val)
        if op == "~":
            return float(~self.to_int32(val))
        raise AssertionError(op)

    def unary_typeof(self, node):
        target = node.operand
        if isinstance(target, ast.Ident):
            v = self.peek_var(target.name)
            if v is _MISSING:
                return "undefined"
        else:
            v = self.eval_expr(target)
        v = deref(v)
        t = type_tag(v)
        return {
            TypeTag.UNDEFINED: "undefined", TypeTag.NULL: "object",
            TypeTag.BOOL: "boolean", TypeTag.NUMBER: "number",
            TypeTag.STRING: "string", TypeTag.FUNCTION: "function",
            TypeTag.OBJECT: "object", TypeTag.FAKED_OBJECT: "object",
            TypeTag.FAKED_FUNCTION: "function",
        }[t]

    def unary_delete(self, node):
        target = node.operand
        if isinstance(target, ast.Member):
            base = deref(self.eval_expr(target.base))
            if isinstance(base, (JSObject, FakedValue)):
                base.props.pop(target.field_name, None)
            return True
        if isinstance(target, ast.IndexE):
            base = deref(self.eval_expr(target.base))
            key = self.to_property_key(deref(self.eval_expr(target.index)))
            if isinstance(base, JSObject) and base.is_array and key.isdigit():
                i = int(key)
                if 0 <= i < len(base.elements):
                    base.elements[i] = UNDEFINED
            elif isinstance(base, (JSObject, FakedValue)):
                base.props.pop(key, None)
            return True
        if isinstance(target, ast.Ident):
            return False
        self.eval_expr(target)
        return True

    def unary_incdec(self, node):
        op = node.op
        target = node.operand
        old_raw = self.read_target(target)
        old = retype_unary(self, node.anchor, op, old_raw)
        old_num = self.to_number(old)
        new_num = old_num + (1.0 if op == "++" else -1.0)
        self.store_target(target, new_num, node.anchor, log_faked=False)
        return new_num if node.prefix else old_num

    def ev_binary(self, node):
        op = node.op
        if op == ",":
            self.eval_expr(node.lhs)
            return self.eval_expr(node.rhs)
        lraw = self.eval_expr(node.lhs)
        rraw = self.eval_expr(node.rhs)
        lval, rval = retype_binary(self, node.anchor, op, lraw, rraw)
        if op in ("/", "%"):
            rval = divisor_for(self, node.anchor, rraw, rval)
        return self.binary_concrete(node.anchor, op, lval, rval)

    def binary_concrete(self, anchor, op, lval, rval):
        if op == "+":
            lp = self.to_primitive(lval)
            rp = self.to_primitive(rval)
            if isinstance(lp, str) or isinstance(rp, str):
                return self.to_string(lp) + self.to_string(rp)
            return self.to_number(lp) + self.to_number(rp)
        if op == "-":
            return self.to_number(lval) - self.to_number(rval)
        if op == "*":
            return self.to_number(lval) * self.to_number(rval)
        if op == "/":
            return self._js_div(self.to_number(lval), self.to_number(rval))
        if op == "%":
            return self._js_mod(self.to_number(lval), self.to_number(rval))
        if op == "<<":
            return float(self._wrap32(self.to_int32(lval) << (self.to_uint32(rval) & 31)))
        if op == ">>":
            return float(self.to_int32(lval) >> (self.to_uint32(rval) & 31))
        if op == ">>>":
            return float(self.to_uint32(lval) >> (self.to_uint32(rval) & 31))
        if op == "&":
            return float(self._wrap32(self.to_int32(lval) & self.to_int32(rval)))
        if op == "|":
            return float(self._wrap32(self.to_int32(lval) | self.to_int32(rval)))
        if op == "^":
            return float(self._wrap32(self.to_int32(lval) ^ self.to_int32(rval)))
        if op in ("<", ">", "<=", ">="):
            return self._compare(op, lval, rval)
        if op == "==":
            return self.loose_equals(lval, rval)
        if op == "!=":
            return not self.loose_equals(lval, rval)
        if op == "===":
            return self.strict_equals(lval, rval)
        if op == "!==":
            return not self.strict_equals(lval, rval)
        if op == "instanceof":
            return self._instanceof(anchor, lval, rval)
        if op == "in":
            return self._in_operator(anchor, lval, rval)
        raise AssertionError(op)

    @staticmethod
    def _wrap32(n: int) -> int:
        n &= 0xFFFFFFFF
        return n - 0x100000000 if n >= 0x80000000 else n

    @staticmethod
    def _js_div(a: float, b: float) -> float:
        if b == 0.0:
            if a == 0.0 or a != a:
                return float("nan")
            return float("inf") if (a > 0) == (str(b)[0] != "-") else float("-inf")
        try:
            return a / b
        except (OverflowError, ZeroDivisionError):
            return float("nan")

    @staticmethod
    def _js_mod(a: float, b: float) -> float:
        if b == 0.0 or a != a or b != b or abs(a) == float("inf"):
            return float("nan")
        if abs(b) == float("inf"):
            return a
        if a == 0.0:
            return a
        try:
            return float(a - b * int(a / b))
        except (OverflowError, ValueError):
            return float("nan")

    def _compare(self, op, lval, rval):
        lp = self.to_primitive(lval)
        rp = self.to_primitive(rval)
        if isinstance(lp, str) and isinstance(rp, str):
            return {"<": lp < rp, ">": lp > rp, "<=": lp <= rp, ">=": lp >= rp}[op]
        ln, rn = self.to_number(lp), self.to_number(rp)
        if ln != ln or rn != rn:
            return False
        return {"<": ln < rn, ">": ln > rn, "<=": ln <= rn, ">=": ln >= rn}[op]

    def _instanceof(self, anchor, lval, rval):
        if not (isinstance(rval, JSObject) and rval.is_callable):
            self.log_action(anchor, "TYPE_RECOVERY", "instanceof", "non-callable rhs")
            return False
        proto = rval.props.get("prototype")
        obj = lval
        seen = 0
        while isinstance(obj, JSObject) and seen < 64:
            if obj.proto is proto and proto is not None:
                return True
            obj = obj.proto
            seen += 1
        return False

    def _in_operator(self, anchor, lval, rval):
        key = self.to_property_key(lval)
        if isinstance(rval, FakedValue):
            return key in rval.props
        if isinstance(rval, JSObject):
            if rval.is_array and key.isdigit():
                return int(key) < len(rval.elements)
            return key in rval.props
        self.log_action(anchor, "TYPE_RECOVERY", "in", "non-object rhs")
        return False

    # ---- member and index access ----

    def get_member(self, base_raw, key, anchor, base_desc):
        base = deref(base_raw)
        from .hostenv import primitive_member
        if base is UNDEFINED or base is NULL:
            self.log_action(anchor, "ER_1", f"{base_desc}.{key}",
                            f"member on {tag_name(base).lower()}")
            return make_faked(f"{base_desc}.{key}", "ER_1_lookup", anchor)
        if isinstance(base, FakedValue):
            if key in base.props:
                return base.props[key]
            cell = make_faked(f"{base.provenance.name or base_desc}.{key}",
                              "ER_1_lookup", anchor)
            base.props[key] = cell
            self.log_action(anchor, "ER_1", f"{base_desc}.{key}", "FakedObject")
            return cell
        if isinstance(base, (str, float, bool)):
            hit = primitive_member(self, base, key)
            if hit is not None:
                return hit
            self.log_action(anchor, "ER_1", f"{base_desc}.{key}", "FakedObject")
            return make_faked(f"{base_desc}.{key}", "ER_1_lookup", anchor)
        if isinstance(base, JSObject):
            if base.is_array:
                if key == "length":
                    return float(len(base.elements))
                if key.lstrip("-").isdigit():
                    i = int(key)
                    if 0 <= i < len(base.elements):
                        return base.elements[i]
                    if base.faked_array and i >= 0:
                        grow_faked_array(base, i, anchor)
                        return base.elements[i]
                    return UNDEFINED
            if base.is_callable and key == "length":
                return float(len(base.params or []))
            obj = base
            seen = 0
            while obj is not None and seen < 64:
                if key in obj.props:
                    return obj.props[key]
                obj = obj.proto
                seen += 1
            hit = primitive_member(self, base, key)
            if hit is not None:
                return hit
            cell = make_faked(f"{base_desc}.{key}", "ER_1_lookup", anchor)
            base.props[key] = cell
            self.log_action(anchor, "ER_1", f"{base_desc}.{key}", "FakedObject")
            return cell
        raise AssertionError(f"get_member on {base!r}")

    def index_read(self, anchor, base_raw, idx_raw, base_desc):
        base = deref(base_raw)
        idx = deref(idx_raw)
        if isinstance(idx, FakedValue):
            idx = retype_index(self, anchor, idx)
        if isinstance(base, FakedValue):
            i = self._as_element_index(idx)
            if i is not None:
                base = retype_index_base(self, anchor, base, i)
                return base.elements[i] if i < len(base.elements) else UNDEFINED
            return self.get_member(base, self.to_property_key(idx), anchor, base_desc)
        if isinstance(base, JSObject) and base.is_array:
            i = self._as_element_index(idx)
            if i is not None:
                if i < len(base.elements):
                    return base.elements[i]
                if base.faked_array:
                    grow_faked_array(base, i, anchor)
                    return base.elements[i]
                return UNDEFINED
        return self.get_member(base_raw, self.to_property_key(idx), anchor, base_desc)

    @staticmethod
    def _as_element_index(idx):
        if isinstance(idx, float) and not isinstance(idx, bool):
            if idx == idx and idx >= 0 and float(idx).is_integer() and idx < 2 ** 32:
                return int(idx)
        return None

    def set_member(self, base_raw, key, value, anchor, base_desc):
        """Returns the prior value at the slot (or _MISSING)."""
        base = deref(base_raw)
        if base is UNDEFINED or base is NULL:
            self.log_action(anchor, "TYPE_RECOVERY", f"{base_desc}.{key}",
                            f"property write on {tag_name(base).lower()}")
            return _MISSING
        if isinstance(base, FakedValue):
            prior = base.props.get(key, _MISSING)
            base.props[key] = value
            return prior
        if isinstance(base, JSObject):
            if base.is_array and key == "length":
                n = self._as_element_index(self.to_number(deref(value)))
                if n is not None:
                    cur = len(base.elements)
                    if n < cur:
                        del base.elements[n:]
                    else:
                        base.elements.extend([UNDEFINED] * (n - cur))
                return _MISSING
            if base.is_array and key.isdigit():
                i = int(key)
                if i < len(base.elements):
                    prior = base.elements[i]
                    base.elements[i] = value
                    return prior
                base.elements.extend([UNDEFINED] * (i - len(base.elements)))
                base.elements.append(value)
                return _MISSING
            prior = base.props.get(key, _MISSING)
            base.props[key] = value
            return prior
        # primitive bases silently drop writes
        return _MISSING

    def index_write(self, anchor, base_raw, idx_raw, value, base_desc):
        base = deref(base_raw)
        idx = deref(idx_raw)
        if isinstance(idx, FakedValue):
            idx = retype_index(self, anchor, idx)
        if isinstance(idx, float) and not isinstance(idx, bool):
            value = self._note_indexed_write(anchor, value)
        if isinstance(base, FakedValue):
            i = self._as_element_index(idx)
            if i is not None:
                arr = retype_index_base(self, anchor, base, i)
                if i >= len(arr.elements):
                    grow_faked_array(arr, i, anchor)
                prior = arr.elements[i]
                arr.elements[i] = value
                return prior, f"{base_desc}[{self.to_property_key(idx)}]"
            key = self.to_property_key(idx)
            prior = base.props.get(key, _MISSING)
            base.props[key] = value
            return prior, f"{base_desc}[{key}]"
        if isinstance(base, JSObject) and base.is_array:
            i = self._as_element_index(idx)
            if i is not None:
                if i >= len(base.elements):
                    if base.faked_array:
                        grow_faked_array(base, i, anchor)
                    else:
                        base.elements.extend([UNDEFINED] * (i + 1 - len(base.elements)))
                prior = base.elements[i]
                base.elements[i] = value
                return prior, f"{base_desc}[{i}]"
        key = self.to_property_key(idx)
        prior = self.set_member(base_raw, key, value, anchor, base_desc)
        return prior, f"{base_desc}[{key}]"

    def _note_indexed_write(self, anchor, value):
        st = self.indexed_writes.get(anchor)
        if st is None:
            st = self.indexed_writes[anchor] = WriteStats()
        st.total += 1
        v = deref(value)
        if isinstance(v, str):
            n = len(v)
            if n > st.max_len:
                st.max_len = n
            if n >= self.budgets.spray_chunk_len:
                st.big += 1
                if anchor not in self._spray_observed:
                    self._spray_observed.add(anchor)
                    self.observe_string(v, anchor, "indexed_write")
                if value is v:
                    # spray loops store the same chunk thousands of times;
                    # keep one shared instance so memory stays bounded
                    value = self._big_strings.setdefault(v, v)
        return value

    # ---- assignment ----

    def read_target(self, target):
        if isinstance(target, ast.Ident):
            return self.read_var(target.name, target.anchor)
        if isinstance(target, ast.Member):
            base = self.eval_expr(target.base)
            return self.get_member(base, target.field_name, target.anchor,
                                   display(target.base))
        if isinstance(target, ast.IndexE):
            base = self.eval_expr(target.base)
            idx = self.eval_expr(target.index)
            return self.index_read(target.anchor, base, idx, display(target.base))
        raise AssertionError("bad assignment target")

    def store_target(self, target, value, anchor, log_faked=True):
        """Write value into the target; log R_ASSIGN when overwriting a
        still-faked slot (assignments only, declarations call with
        log_faked=False)."""
        if isinstance(target, ast.Ident):
            prior = self.peek_var(target.name)
            self.write_var(target.name, value)
            desc = target.name
        elif isinstance(target, ast.Member):
            base = self.eval_expr(target.base)
            desc = f"{display(target.base)}.{target.field_name}"
            prior = self.set_member(base, target.field_name, value, anchor,
                                    display(target.base))
        elif isinstance(target, ast.IndexE):
            base = self.eval_expr(target.base)
            idx = self.eval_expr(target.index)
            prior, desc = self.index_write(anchor, base, idx, value,
                                           display(target.base))
        else:
            raise AssertionError("bad assignment target")
        if log_faked and isinstance(prior, FakedValue) and prior.is_faked:
            self.log_action(anchor, "R_ASSIGN", desc, tag_name(value))
        return value

    def assign_target(self, target, value, anchor, log_faked=True):
        return self.store_target(target, value, anchor, log_faked)

    def assign_target_expr(self, node):
        # evaluation order: member/index bases first, then the value
        target = node.target
        if isinstance(target, ast.Ident):
            value = self.eval_expr(node.value)
            prior = self.peek_var(target.name)
            self.write_var(target.name, value)
            if isinstance(prior, FakedValue) and prior.is_faked:
                self.log_action(node.anchor, "R_ASSIGN", target.name, tag_name(value))
            return value
        if isinstance(target, ast.Member):
            base = self.eval_expr(target.base)
            value = self.eval_expr(node.value)
            prior = self.set_member(base, target.field_name, value, node.anchor,
                                    display(target.base))
            if isinstance(prior, FakedValue) and prior.is_faked:
                self.log_action(node.anchor, "R_ASSIGN",
                                f"{display(target.base)}.{target.field_name}",
                                tag_name(value))
            return value
        if isinstance(target, ast.IndexE):
            base = self.eval_expr(target.base)
            idx = self.eval_expr(target.index)
            value = self.eval_expr(node.value)
            prior, desc = self.index_write(node.anchor, base, idx, value,
                                           display(target.base))
            if isinstance(prior, FakedValue) and prior.is_faked:
                self.log_action(node.anchor, "R_ASSIGN", desc, tag_name(value))
            return value
        raise AssertionError("bad assignment target")

    def compound_assign(self, node):
        op = node.op[:-1]  # "+=" -> "+"
        target = node.target
        old_raw = self.read_target(target)
        rhs_raw = self.eval_expr(node.value)
        lval, rval = retype_binary(self, node.anchor, op, old_raw, rhs_raw)
        if op in ("/", "%"):
            rval = divisor_for(self, node.anchor, rhs_raw, rval)
        result = self.binary_concrete(node.anchor, op, lval, rval)
        self.store_target(target, result, node.anchor, log_faked=False)
        return result

    # ---- calls ----

    def ev_call(self, node):
        callee = node.callee
        if isinstance(callee, ast.Member):
            base_raw = self.eval_expr(callee.base)
            fraw = self.get_member(base_raw, callee.field_name, callee.anchor,
                                   display(callee.base))
            this_val = deref(base_raw)
        elif isinstance(callee, ast.IndexE):
            base_raw = self.eval_expr(callee.base)
            idx_raw = self.eval_expr(callee.index)
            fraw = self.index_read(callee.anchor, base_raw, idx_raw, display(callee.base))
            this_val = deref(base_raw)
        else:
            fraw = self.eval_expr(callee)
            this_val = self.global_obj
        args_raw = [self.eval_expr(a) for a in node.args]
        arg_descs = [display(a) for a in node.args]
        return self.call_value(node.anchor, fraw, this_val, args_raw,
                               display(callee), arg_descs)

    def ev_new(self, node):
        fraw = self.eval_expr(node.callee)
        args_raw = [self.eval_expr(a) for a in node.args]
        arg_descs = [display(a) for a in node.args]
        return self.construct_value(node.anchor, fraw, args_raw,
                                    display(node.callee), arg_descs)

    def call_value(self, anchor, fraw, this_val, args_raw, desc, arg_descs=None):
        self.check_deadline()
        fval = deref(fraw)
        if isinstance(fval, FakedValue):
            retype_callable(self, anchor, fval, via_new=False)
            return self.call_faked(anchor, fval, args_raw, desc)
        if isinstance(fval, JSObject) and fval.native is not None:
            return self.call_native(anchor, fval, this_val, args_raw,
                                    arg_descs=arg_descs)
        if isinstance(fval, JSObject) and fval.body is not None:
            return self.call_user(anchor, fval, this_val, args_raw)
        self.log_action(anchor, "TYPE_RECOVERY", desc,
                        f"call on {tag_name(fval).lower()}")
        return make_faked(f"{desc}()", "FFun_return", anchor)

    def construct_value(self, anchor, fraw, args_raw, desc, arg_descs=None):
        self.check_deadline()
        fval = deref(fraw)
        if isinstance(fval, FakedValue):
            retype_callable(self, anchor, fval, via_new=True)
            return self.call_faked(anchor, fval, args_raw, desc)
        if isinstance(fval, JSObject) and fval.native is not None:
            return self.call_native(anchor, fval, self.global_obj, args_raw,
                                    arg_descs=arg_descs)
        if isinstance(fval, JSObject) and fval.body is not None:
            proto = fval.props.get("prototype")
            obj = JSObject("Object", proto if isinstance(proto, JSObject) else None)
            ret = self.call_user(anchor, fval, obj, args_raw)
            ret_d = deref(ret)
            return ret_d if isinstance(ret_d, JSObject) else obj
        self.log_action(anchor, "TYPE_RECOVERY", desc,
                        f"new on {tag_name(fval).lower()}")
        return make_faked(f"{desc}()", "FFun_return", anchor)

    def call_faked(self, anchor, cell, args_raw, desc):
        for a in args_raw:
            av = deref(a)
            if isinstance(av, JSObject) and av.is_callable and av.native is None:
                self.enqueue_callback(av, anchor, desc, kind="callback_registered")
            elif isinstance(av, str):
                self.observe_string(av, anchor, "faked_call_arg")
                if looks_like_js(av):
                    self.event("faked_function_string_arg", av, anchor)
                    name = self.dynamic_unit_name(anchor, "arg")
                    self.add_new_js(name, av, "faked_call_arg")
        return make_faked(f"{desc}()", "FFun_return", anchor)

    def enqueue_callback(self, fn, anchor, api, kind, source=None, source_name=None):
        if fn is not None:
            if id(fn) in self._cb_ids:
                return
            self._cb_ids.add(id(fn))
        self.cbq.append(CallbackQueueEntry(fn, source, source_name, anchor, api))
        payload = (fn.name or "(anonymous)") if fn is not None else (source or "")[:200]
        self.event(kind, payload, anchor)

    def call_native(self, anchor, fval, this_val, args_raw, arg_descs=None):
        if fval.signature is not None:
            fixed, rest = fval.signature
            for i, a in enumerate(args_raw):
                av = deref(a)
                if isinstance(av, FakedValue):
                    expected = fixed[i] if i < len(fixed) else rest
                    if expected is not None:
                        label = arg_descs[i] if arg_descs and i < len(arg_descs) else None
                        retype_argument(self, anchor, av, expected, label)
        args = [deref(a) for a in args_raw]
        return fval.native(self, this_val, args, anchor)

    def call_user(self, anchor, fn, this_val, args_raw):
        if self.call_depth >= self.budgets.recursion_cap:
            self.recursion_hit = True
            self.log_action(anchor, "RECURSION_CAP", fn.name or "(anonymous)",
                            "call omitted")
            return make_faked(f"{fn.name or 'fn'}()", "FFun_return", anchor)
        scope = Scope(parent=fn.scope)
        params = fn.params or []
        for i, p in enumerate(params):
            scope.vars[p] = args_raw[i] if i < len(args_raw) else UNDEFINED
        scope.vars["arguments"] = make_array(list(args_raw))
        self.hoist(fn.body, scope)
        saved_scope, self.scope = self.scope, scope
        self.this_stack.append(this_val if isinstance(this_val, JSObject) else self.global_obj)
        self.call_depth += 1
        try:
            for st in fn.body:
                self.exec_stmt(st)
            return UNDEFINED
        except ReturnSignal as r:
            return r.value
        finally:
            self.call_depth -= 1
            self.this_stack.pop()
            self.scope = saved_scope

    # ---- direct eval support (installed by hostenv) ----

    def do_eval(self, text, anchor):
        self.event("eval_string", text, anchor, {"length": len(text)})
        self.observe_string(text, anchor, "eval_arg")
        name = self.dynamic_unit_name(anchor)
        self.add_new_js(name, text, "eval")
        try:
            prog = parse(text, name)
        except (LexError, JsSyntaxError) as e:
            self.log_action(anchor, "SYNTAX_IN_EVAL", "eval", str(e)[:120])
            return UNDEFINED
        except RecursionError:
            self.recursion_hit = True
            self.log_action(anchor, "RECURSION_CAP", "eval", "parse too deep")
            return UNDEFINED
        func_scope = self.scope
        self.hoist(prog.body, func_scope)
        out = None
        for st in prog.body:
            v = self.exec_stmt(st)
            if v is not None:
                out = v
        return UNDEFINED if out is None else out

    # ---- conversions ----

    def to_primitive(self, value, hint="default"):
        value = deref(value)
        if isinstance(value, FakedValue):
            return value.sentinel
        if isinstance(value, JSObject):
            if value.time_ms is not None and hint != "string":
                return value.time_ms
            if hint != "string":
                vf = deref(value.props.get("valueOf", UNDEFINED))
                if isinstance(vf, JSObject) and vf.is_callable and vf.body is not None:
                    try:
                        r = deref(self.call_value(None, vf, value, [], "valueOf"))
                        if not isinstance(r, (JSObject, FakedValue)):
                            return r
                    except ThrowSignal:
                        pass
            return self._object_to_string(value, depth=0)
        return value

    def _object_to_string(self, obj, depth):
        if depth > 4:
            return ""
        if obj.is_array:
            parts = []
            for el in obj.elements[:1024]:
                el = deref(el)
                if el is UNDEFINED or el is NULL:
                    parts.append("")
                elif isinstance(el, JSObject):
                    parts.append(self._object_to_string(el, depth + 1))
                else:
                    parts.append(self.to_string(el))
            return ",".join(parts)
        if obj.regex is not None:
            return f"/{obj.regex[0]}/{obj.regex[1]}"
        if obj.is_callable:
            return f"function {obj.name or ''}() {{ [code] }}"
        if obj.time_ms is not None:
            return f"[date {js_num_str(obj.time_ms)}]"
        if "toString" in obj.props:
            f = deref(obj.props["toString"])
            if isinstance(f, JSObject) and f.is_callable and depth < 4:
                try:
                    r = self.call_value(None, f, obj, [], "toString")
                    rd = deref(r)
                    if not isinstance(rd, JSObject):
                        return self.to_string(rd)
                except ThrowSignal:
                    pass
        return "[object Object]"

    def to_string(self, value) -> str:
        value = deref(value)
        if value is UNDEFINED:
            return "undefined"
        if value is NULL:
            return "null"
        if isinstance(value, bool):
            return "true" if value else "false"
        if isinstance(value, float):
            return js_num_str(value)
        if isinstance(value, str):
            return value
        if isinstance(value, FakedValue):
            return value.sentinel
        if isinstance(value, JSObject):
            return self._object_to_string(value, depth=0)
        raise AssertionError(f"to_string on {value!r}")

    def to_number(self, value) -> float:
        value = deref(value)
        if isinstance(value, bool):
            return 1.0 if value else 0.0
        if isinstance(value, float):
            return value
        if value is UNDEFINED:
            return float("nan")
        if value is NULL:
            return 0.0
        if isinstance(value, str):
            return self._string_to_number(value)
        if isinstance(value, FakedValue):
            return float("nan")
        if isinstance(value, JSObject):
            prim = self.to_primitive(value)
            if isinstance(prim, JSObject):
                return float("nan")
            return self.to_number(prim)
        raise AssertionError(f"to_number on {value!r}")

    @staticmethod
    def _string_to_number(s: str) -> float:
        t = s.strip()
        if not t:
            return 0.0
        try:
            if t[:2].lower() == "0x" or t[:3].lstrip("+-")[:2].lower() == "0x":
                neg = t.startswith("-")
                body = t.lstrip("+-")
                return (-1.0 if neg else 1.0) * float(int(body[2:], 16))
            if t in ("Infinity", "+Infinity"):
                return float("inf")
            if t == "-Infinity":
                return float("-inf")
            return float(t)
        except (ValueError, OverflowError):
            return float("nan")

    def to_int32(self, value) -> int:
        n = self.to_number(value)
        if n != n or abs(n) == float("inf"):
            return 0
        return self._wrap32(int(n))

    def to_uint32(self, value) -> int:
        n = self.to_number(value)
        if n != n or abs(n) == float("inf"):
            return 0
        return int(n) & 0xFFFFFFFF

    def to_property_key(self, value) -> str:
        value = deref(value)
        if isinstance(value, float) and not isinstance(value, bool):
            return js_num_str(value)
        return self.to_string(value)

    # ---- equality ----

    def strict_equals(self, a, b) -> bool:
        a, b = deref(a), deref(b)
        ta, tb = type_tag(a), type_tag(b)
        if ta is not tb:
            return False
        if ta in (TypeTag.UNDEFINED, TypeTag.NULL):
            return True
        if ta is TypeTag.NUMBER:
            return a == b  # NaN != NaN falls out of float semantics
        if ta in (TypeTag.BOOL, TypeTag.STRING):
            return a == b
        return a is b

    def loose_equals(self, a, b) -> bool:
        a, b = deref(a), deref(b)
        ta, tb = type_tag(a), type_tag(b)
        if ta is tb or {ta, tb} <= {TypeTag.UNDEFINED, TypeTag.NULL}:
            if ta in (TypeTag.UNDEFINED, TypeTag.NULL) or tb in (TypeTag.UNDEFINED, TypeTag.NULL):
                return ta in (TypeTag.UNDEFINED, TypeTag.NULL) and tb in (TypeTag.UNDEFINED, TypeTag.NULL)
            return self.strict_equals(a, b)
        nullish = (TypeTag.UNDEFINED, TypeTag.NULL)
        if ta in nullish or tb in nullish:
            return False
        objish = (TypeTag.OBJECT, TypeTag.FUNCTION, TypeTag.FAKED_OBJECT, TypeTag.FAKED_FUNCTION)
        if ta in objish and tb in objish:
            return a is b
        if ta in objish:
            return self.loose_equals(self.to_primitive(a), b)
        if tb in objish:
            return self.loose_equals(a, self.to_primitive(b))
        # remaining: mixed primitives compare as numbers
        return self.to_number(a) == self.to_number(b)

    # dispatch tables filled in below
    _STMT: dict = {}
    _EXPR: dict = {}


Interpreter._STMT = {
    ast.Block: Interpreter.exec_block,
    ast.Empty: Interpreter.exec_empty,
    ast.VarDecl: Interpreter.exec_var,
    ast.ExprStmt: Interpreter.exec_exprstmt,
    ast.FuncDecl: Interpreter.exec_funcdecl,
    ast.If: Interpreter.exec_if,
    ast.While: Interpreter.exec_while,
    ast.For: Interpreter.exec_for,
    ast.ForIn: Interpreter.exec_forin,
    ast.Return: Interpreter.exec_return,
    ast.Break: Interpreter.exec_break,
    ast.Continue: Interpreter.exec_continue,
    ast.Throw: Interpreter.exec_throw,
    ast.TryStmt: Interpreter.exec_try,
    ast.Switch: Interpreter.exec_switch,
}

Interpreter._EXPR = {
    ast.Num: Interpreter.ev_num,
    ast.Str: Interpreter.ev_str,
    ast.BoolLit: Interpreter.ev_bool,
    ast.NullLit: Interpreter.ev_null,
    ast.RegexLit: Interpreter.ev_regex,
    ast.Ident: Interpreter.ev_ident,
    ast.This: Interpreter.ev_this,
    ast.ArrayLit: Interpreter.ev_array,
    ast.ObjectLit: Interpreter.ev_object,
    ast.FuncExpr: Interpreter.ev_funcexpr,
    ast.Member: Interpreter.ev_member,
    ast.IndexE: Interpreter.ev_index,
    ast.Ternary: Interpreter.ev_ternary,
    ast.Logical: Interpreter.ev_logical,
    ast.Assign: Interpreter.ev_assign,
    ast.Unary: Interpreter.ev_unary,
    ast.Binary: Interpreter.ev_binary,
    ast.Call: Interpreter.ev_call,
    ast.New: Interpreter.ev_new,
}


def execute(program: ast.Program, switches=(), budgets: Budgets | None = None,
            deadline: float | None = None) -> ExecutionOutcome:
    """Run one unit under a switch sequence and return its outcome."""
    if sys.getrecursionlimit() < 30000:
        sys.setrecursionlimit(30000)
    return Interpreter(program, switches, budgets, deadline).run()
