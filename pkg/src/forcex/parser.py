"""Recursive-descent parser producing anchored ASTs.

Statement terminators follow the three standard automatic-semicolon
rules: insertion before an offending token on a new line (or before
'}'), insertion at end of input, and the restricted productions
(return/throw/break/continue and postfix ++/-- stay on one line).
"""
from __future__ import annotations

from .jsast import (
    ArrayLit, Assign, Binary, Block, BoolLit, Break, Call, Continue, Empty,
    ExprStmt, For, ForIn, FuncDecl, FuncExpr, Ident, If, IndexE, Member,
    New, NullLit, Num, ObjectLit, Program, RegexLit, Return, SourceAnchor,
    Str, Switch, SwitchCase, Ternary, This, Throw, TryStmt, Unary, VarDecl,
    While, Logical, js_num_str,
)
from .lexer import Token, tokenize


class JsSyntaxError(Exception):
    def __init__(self, anchor: SourceAnchor, message: str):
        super().__init__(f"{anchor}: {message}")
        self.anchor = anchor
        self.message = message


ASSIGN_OPS = {"=", "+=", "-=", "*=", "/=", "%=", "<<=", ">>=", ">>>=", "&=", "|=", "^="}

# binary precedence tiers, loosest first; 'in' is conditional on no_in
BINARY_TIERS = [
    ("|",),
    ("^",),
    ("&",),
    ("==", "!=", "===", "!=="),
    ("<", ">", "<=", ">=", "instanceof", "in"),
    ("<<", ">>", ">>>"),
    ("+", "-"),
    ("*", "/", "%"),
]

UNARY_OPS = {"delete", "void", "typeof", "++", "--", "+", "-", "~", "!"}


class _Parser:
    def __init__(self, toks: list[Token], unit: str):
        self.toks = toks
        self.unit = unit
        self.pos = 0
        self.loop_depth = 0
        self.switch_depth = 0
        self.func_depth = 0

    # ---- token plumbing ----

    def peek(self, ahead: int = 0) -> Token:
        return self.toks[min(self.pos + ahead, len(self.toks) - 1)]

    def next(self) -> Token:
        t = self.toks[self.pos]
        if t.kind != "eof":
            self.pos += 1
        return t

    def at(self, tok: Token | None = None) -> SourceAnchor:
        t = tok if tok is not None else self.peek()
        return SourceAnchor(self.unit, t.offset)

    def fail(self, msg: str, tok: Token | None = None):
        raise JsSyntaxError(self.at(tok), msg)

    def expect_punct(self, val: str) -> Token:
        t = self.peek()
        if not t.is_punct(val):
            self.fail(f"expected {val!r}, found {t.value!r}")
        return self.next()

    def expect_kw(self, val: str) -> Token:
        t = self.peek()
        if not t.is_kw(val):
            self.fail(f"expected {val!r}")
        return self.next()

    def expect_ident(self) -> Token:
        t = self.peek()
        if t.kind != "ident":
            self.fail("expected identifier")
        return self.next()

    def eat_semicolon(self):
        t = self.peek()
        if t.is_punct(";"):
            self.next()
            return
        if t.kind == "eof" or t.is_punct("}") or t.nl_before:
            return  # automatic insertion
        self.fail(f"expected ';', found {t.value!r}")

    # ---- program / statements ----

    def parse_program(self) -> Program:
        anchor = SourceAnchor(self.unit, 0)
        body = []
        while self.peek().kind != "eof":
            body.append(self.statement())
        return Program(anchor, self.unit, body)

    def statement(self):
        t = self.peek()
        if t.is_punct("{"):
            return self.block()
        if t.is_punct(";"):
            self.next()
            return Empty(self.at(t))
        if t.kind == "keyword":
            handler = {
                "var": self.var_statement,
                "if": self.if_statement,
                "while": self.while_statement,
                "do": self.do_statement,
                "for": self.for_statement,
                "function": self.function_declaration,
                "return": self.return_statement,
                "try": self.try_statement,
                "switch": self.switch_statement,
                "break": self.break_statement,
                "continue": self.continue_statement,
                "throw": self.throw_statement,
            }.get(t.value)
            if handler:
                return handler()
            if t.value == "with":
                self.fail("with statements are not supported")
        if t.kind == "ident" and self.peek(1).is_punct(":"):
            self.fail("labeled statements are not supported")
        anchor = self.at(t)
        expr = self.expression()
        self.eat_semicolon()
        return ExprStmt(anchor, expr)

    def block(self) -> Block:
        anchor = self.at()
        self.expect_punct("{")
        body = []
        while not self.peek().is_punct("}"):
            if self.peek().kind == "eof":
                self.fail("unterminated block")
            body.append(self.statement())
        self.expect_punct("}")
        return Block(anchor, body)

    def var_statement(self) -> VarDecl:
        anchor = self.at()
        self.expect_kw("var")
        node = self.var_declaration(anchor, no_in=False)
        self.eat_semicolon()
        return node

    def var_declaration(self, anchor: SourceAnchor, no_in: bool) -> VarDecl:
        # caller has consumed 'var'
        decls = []
        while True:
            name_tok = self.expect_ident()
            init = None
            if self.peek().is_punct("="):
                self.next()
                init = self.assignment(no_in)
            decls.append((name_tok.value, init, self.at(name_tok)))
            if self.peek().is_punct(","):
                self.next()
                continue
            break
        return VarDecl(anchor, decls)

    def if_statement(self) -> If:
        anchor = self.at()
        self.expect_kw("if")
        self.expect_punct("(")
        cond = self.expression()
        self.expect_punct(")")
        then_body = self.statement()
        else_body = None
        if self.peek().is_kw("else"):
            self.next()
            else_body = self.statement()
        return If(anchor, cond, then_body, else_body)

    def while_statement(self) -> While:
        anchor = self.at()
        self.expect_kw("while")
        self.expect_punct("(")
        cond = self.expression()
        self.expect_punct(")")
        self.loop_depth += 1
        body = self.statement()
        self.loop_depth -= 1
        return While(anchor, cond, body)

    def do_statement(self) -> While:
        anchor = self.at()
        self.expect_kw("do")
        self.loop_depth += 1
        body = self.statement()
        self.loop_depth -= 1
        self.expect_kw("while")
        self.expect_punct("(")
        cond = self.expression()
        self.expect_punct(")")
        if self.peek().is_punct(";"):
            self.next()
        return While(anchor, cond, body, post_test=True)

    def for_statement(self):
        anchor = self.at()
        self.expect_kw("for")
        self.expect_punct("(")

        init = None
        if self.peek().is_kw("var"):
            var_anchor = self.at()
            self.next()
            init = self.var_declaration(var_anchor, no_in=True)
            if self.peek().is_kw("in") or (self.peek().is_kw("of")):
                if len(init.decls) != 1 or init.decls[0][1] is not None:
                    self.fail("bad for-in declaration")
                of_loop = self.next().value == "of"
                target = Ident(init.decls[0][2], init.decls[0][0])
                return self._for_in_tail(anchor, target, True, of_loop)
        elif not self.peek().is_punct(";"):
            init_anchor = self.at()
            init_expr = self.expression(no_in=True)
            if self.peek().is_kw("in", "of"):
                if not isinstance(init_expr, (Ident, Member, IndexE)):
                    self.fail("bad for-in target")
                of_loop = self.next().value == "of"
                return self._for_in_tail(anchor, init_expr, False, of_loop)
            init = ExprStmt(init_anchor, init_expr)

        self.expect_punct(";")
        cond = None if self.peek().is_punct(";") else self.expression()
        self.expect_punct(";")
        update = None if self.peek().is_punct(")") else self.expression()
        self.expect_punct(")")
        self.loop_depth += 1
        body = self.statement()
        self.loop_depth -= 1
        return For(anchor, init, cond, update, body)

    def _for_in_tail(self, anchor, target, declares, of_loop) -> ForIn:
        obj = self.expression()
        self.expect_punct(")")
        self.loop_depth += 1
        body = self.statement()
        self.loop_depth -= 1
        return ForIn(anchor, target, declares, obj, body, of_loop)

    def function_declaration(self) -> FuncDecl:
        anchor = self.at()
        self.expect_kw("function")
        name = self.expect_ident().value
        params, body = self._function_rest()
        return FuncDecl(anchor, name, params, body)

    def _function_rest(self):
        self.expect_punct("(")
        params = []
        if not self.peek().is_punct(")"):
            while True:
                params.append(self.expect_ident().value)
                if self.peek().is_punct(","):
                    self.next()
                    continue
                break
        self.expect_punct(")")
        self.expect_punct("{")
        self.func_depth += 1
        saved_loop, saved_switch = self.loop_depth, self.switch_depth
        self.loop_depth = self.switch_depth = 0
        body = []
        while not self.peek().is_punct("}"):
            if self.peek().kind == "eof":
                self.fail("unterminated function body")
            body.append(self.statement())
        self.expect_punct("}")
        self.func_depth -= 1
        self.loop_depth, self.switch_depth = saved_loop, saved_switch
        return params, body

    def return_statement(self) -> Return:
        anchor = self.at()
        if self.func_depth == 0:
            self.fail("return outside function")
        self.expect_kw("return")
        value = None
        t = self.peek()
        if not (t.is_punct(";") or t.is_punct("}") or t.kind == "eof" or t.nl_before):
            value = self.expression()
        self.eat_semicolon()
        return Return(anchor, value)

    def try_statement(self) -> TryStmt:
        anchor = self.at()
        self.expect_kw("try")
        block = self.block()
        param = None
        handler = None
        finalizer = None
        if self.peek().is_kw("catch"):
            self.next()
            self.expect_punct("(")
            param = self.expect_ident().value
            self.expect_punct(")")
            handler = self.block()
        if self.peek().is_kw("finally"):
            self.next()
            finalizer = self.block()
        if handler is None and finalizer is None:
            self.fail("try needs catch or finally")
        return TryStmt(anchor, block, param, handler, finalizer)

    def switch_statement(self) -> Switch:
        anchor = self.at()
        self.expect_kw("switch")
        self.expect_punct("(")
        disc = self.expression()
        self.expect_punct(")")
        self.expect_punct("{")
        self.switch_depth += 1
        cases = []
        seen_default = False
        while not self.peek().is_punct("}"):
            t = self.peek()
            if t.is_kw("case"):
                case_anchor = self.at(t)
                self.next()
                test = self.expression()
                self.expect_punct(":")
                cases.append(SwitchCase(case_anchor, test))
            elif t.is_kw("default"):
                if seen_default:
                    self.fail("duplicate default clause")
                seen_default = True
                case_anchor = self.at(t)
                self.next()
                self.expect_punct(":")
                cases.append(SwitchCase(case_anchor, None))
            elif not cases:
                self.fail("statement before first case")
            else:
                cases[-1].body.append(self.statement())
        self.expect_punct("}")
        self.switch_depth -= 1
        return Switch(anchor, disc, cases)

    def break_statement(self) -> Break:
        anchor = self.at()
        self.expect_kw("break")
        if self.loop_depth == 0 and self.switch_depth == 0:
            self.fail("break outside loop or switch")
        self.eat_semicolon()
        return Break(anchor)

    def continue_statement(self) -> Continue:
        anchor = self.at()
        self.expect_kw("continue")
        if self.loop_depth == 0:
            self.fail("continue outside loop")
        self.eat_semicolon()
        return Continue(anchor)

    def throw_statement(self) -> Throw:
        anchor = self.at()
        self.expect_kw("throw")
        if self.peek().nl_before:
            self.fail("newline after throw")
        value = self.expression()
        self.eat_semicolon()
        return Throw(anchor, value)

    # ---- expressions ----

    def expression(self, no_in: bool = False):
        # comma sequence is the loosest binary tier
        expr = self.assignment(no_in)
        while self.peek().is_punct(","):
            op_tok = self.next()
            rhs = self.assignment(no_in)
            expr = Binary(self.at(op_tok), ",", expr, rhs)
        return expr

    def assignment(self, no_in: bool = False):
        expr = self.conditional(no_in)
        t = self.peek()
        if t.kind == "punct" and t.value in ASSIGN_OPS:
            if not isinstance(expr, (Ident, Member, IndexE)):
                self.fail("invalid assignment target", t)
            self.next()
            value = self.assignment(no_in)
            return Assign(self.at(t), t.value, expr, value)
        return expr

    def conditional(self, no_in: bool):
        cond = self.logical_or(no_in)
        if self.peek().is_punct("?"):
            q = self.next()
            then_expr = self.assignment(False)
            self.expect_punct(":")
            else_expr = self.assignment(no_in)
            return Ternary(self.at(q), cond, then_expr, else_expr)
        return cond

    def logical_or(self, no_in: bool):
        expr = self.logical_and(no_in)
        while self.peek().is_punct("||"):
            op_tok = self.next()
            rhs = self.logical_and(no_in)
            expr = Logical(self.at(op_tok), "||", expr, rhs)
        return expr

    def logical_and(self, no_in: bool):
        expr = self.binary(no_in, 0)
        while self.peek().is_punct("&&"):
            op_tok = self.next()
            rhs = self.binary(no_in, 0)
            expr = Logical(self.at(op_tok), "&&", expr, rhs)
        return expr

    def binary(self, no_in: bool, tier: int):
        if tier >= len(BINARY_TIERS):
            return self.unary()
        ops = BINARY_TIERS[tier]
        expr = self.binary(no_in, tier + 1)
        while True:
            t = self.peek()
            matched = None
            if t.kind == "punct" and t.value in ops:
                matched = t.value
            elif t.kind == "keyword" and t.value in ops:
                if t.value == "in" and no_in:
                    break
                matched = t.value
            if matched is None:
                break
            self.next()
            rhs = self.binary(no_in, tier + 1)
            expr = Binary(self.at(t), matched, expr, rhs)
        return expr

    def unary(self):
        t = self.peek()
        if (t.kind == "punct" and t.value in UNARY_OPS) or t.is_kw("delete", "void", "typeof"):
            self.next()
            operand = self.unary()
            if t.value in ("++", "--") and not isinstance(operand, (Ident, Member, IndexE)):
                self.fail("invalid increment target", t)
            return Unary(self.at(t), t.value, operand, prefix=True)
        return self.postfix()

    def postfix(self):
        expr = self.call_or_member()
        t = self.peek()
        if t.is_punct("++", "--") and not t.nl_before:
            if not isinstance(expr, (Ident, Member, IndexE)):
                self.fail("invalid increment target", t)
            self.next()
            return Unary(self.at(t), t.value, expr, prefix=False)
        return expr

    def call_or_member(self):
        if self.peek().is_kw("new"):
            expr = self.new_expression()
        else:
            expr = self.primary()
        return self._member_tail(expr, allow_calls=True)

    def new_expression(self):
        new_tok = self.next()
        if self.peek().is_kw("new"):
            callee = self.new_expression()
        else:
            callee = self._member_tail(self.primary(), allow_calls=False)
        args = []
        if self.peek().is_punct("("):
            args = self.arguments()
        return New(self.at(new_tok), callee, args)

    def _member_tail(self, expr, allow_calls: bool):
        while True:
            t = self.peek()
            if t.is_punct("."):
                self.next()
                name_tok = self.peek()
                if name_tok.kind not in ("ident", "keyword"):
                    self.fail("expected property name")
                self.next()
                expr = Member(self.at(t), expr, name_tok.value)
            elif t.is_punct("["):
                self.next()
                index = self.expression()
                self.expect_punct("]")
                expr = IndexE(self.at(t), expr, index)
            elif allow_calls and t.is_punct("("):
                args = self.arguments()
                expr = Call(self.at(t), expr, args)
            else:
                return expr

    def arguments(self):
        self.expect_punct("(")
        args = []
        if not self.peek().is_punct(")"):
            while True:
                args.append(self.assignment(False))
                if self.peek().is_punct(","):
                    self.next()
                    continue
                break
        self.expect_punct(")")
        return args

    def primary(self):
        t = self.peek()
        anchor = self.at(t)
        if t.kind == "num":
            self.next()
            return Num(anchor, t.value)
        if t.kind == "str":
            self.next()
            return Str(anchor, t.value)
        if t.kind == "regex":
            self.next()
            return RegexLit(anchor, t.value[0], t.value[1])
        if t.kind == "ident":
            self.next()
            return Ident(anchor, t.value)
        if t.is_kw("true", "false"):
            self.next()
            return BoolLit(anchor, t.value == "true")
        if t.is_kw("null"):
            self.next()
            return NullLit(anchor)
        if t.is_kw("this"):
            self.next()
            return This(anchor)
        if t.is_kw("function"):
            self.next()
            name = None
            if self.peek().kind == "ident":
                name = self.next().value
            params, body = self._function_rest()
            return FuncExpr(anchor, name, params, body)
        if t.is_punct("("):
            self.next()
            expr = self.expression()
            self.expect_punct(")")
            return expr
        if t.is_punct("["):
            return self.array_literal()
        if t.is_punct("{"):
            return self.object_literal()
        self.fail(f"unexpected token {t.value!r}")

    def array_literal(self) -> ArrayLit:
        anchor = self.at()
        self.expect_punct("[")
        elements = []
        while not self.peek().is_punct("]"):
            if self.peek().is_punct(","):
                self.next()
                elements.append(None)  # elision
                continue
            elements.append(self.assignment(False))
            if self.peek().is_punct(","):
                self.next()
        self.expect_punct("]")
        return ArrayLit(anchor, elements)

    def object_literal(self) -> ObjectLit:
        anchor = self.at()
        self.expect_punct("{")
        props = []
        while not self.peek().is_punct("}"):
            key_tok = self.peek()
            if key_tok.kind in ("ident", "keyword"):
                if key_tok.value in ("get", "set") and self.peek(1).kind in ("ident", "str", "num", "keyword"):
                    self.fail("property accessors are not supported", key_tok)
                key = key_tok.value
            elif key_tok.kind == "str":
                key = key_tok.value
            elif key_tok.kind == "num":
                key = js_num_str(key_tok.value)
            else:
                self.fail("expected property key", key_tok)
            self.next()
            self.expect_punct(":")
            props.append((key, self.assignment(False)))
            if self.peek().is_punct(","):
                self.next()
            elif not self.peek().is_punct("}"):
                self.fail("expected ',' or '}' in object literal")
        self.expect_punct("}")
        return ObjectLit(anchor, props)


def parse(source: str, unit: str = "<anonymous>") -> Program:
    """Parse source text into a Program; anchors carry the unit name.

    Raises LexError or JsSyntaxError; the engine treats both as a
    syntax failure of the unit.
    """
    return _Parser(tokenize(source), unit).parse_program()
