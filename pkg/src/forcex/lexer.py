"""Tokenizer for the JavaScript subset understood by the engine."""
from __future__ import annotations

from dataclasses import dataclass

KEYWORDS = {
    "var", "function", "return", "if", "else", "while", "do", "for",
    "in", "of", "new", "delete", "typeof", "void", "instanceof", "this",
    "null", "true", "false", "try", "catch", "finally", "switch", "case",
    "default", "break", "continue", "throw", "with",
}

PUNCTUATORS = [
    ">>>=", "===", "!==", ">>>", "<<=", ">>=", "==", "!=", "<=", ">=",
    "&&", "||", "++", "--", "<<", ">>", "+=", "-=", "*=", "/=", "%=",
    "&=", "|=", "^=", "{", "}", "(", ")", "[", "]", ";", ",", "<", ">",
    "+", "-", "*", "/", "%", "&", "|", "^", "!", "~", "?", ":", "=",
    ".",
]

ESCAPES = {
    "n": "\n", "t": "\t", "r": "\r", "b": "\b", "f": "\f", "v": "\v",
    "0": "\0", "'": "'", '"': '"', "\\": "\\", "\n": "",
}

IDENT_START = set("abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ_$")
DIGITS = set("0123456789")
HEX_DIGITS = set("0123456789abcdefABCDEF")


class LexError(Exception):
    def __init__(self, offset: int, reason: str):
        super().__init__(f"lex error at offset {offset}: {reason}")
        self.offset = offset
        self.reason = reason


@dataclass
class Token:
    kind: str  # ident, keyword, num, str, regex, punct, eof
    value: object
    offset: int
    end: int
    nl_before: bool  # line terminator between previous token and this one

    def is_punct(self, *vals: str) -> bool:
        return self.kind == "punct" and self.value in vals

    def is_kw(self, *vals: str) -> bool:
        return self.kind == "keyword" and self.value in vals


# Tokens after which a '/' is a division sign, not a regex literal.
_NO_REGEX_AFTER_PUNCT = {")", "]"}
_NO_REGEX_AFTER_KW = {"this", "true", "false", "null"}


def _regex_allowed(prev: Token | None) -> bool:
    if prev is None:
        return True
    if prev.kind in ("ident", "num", "str", "regex"):
        return False
    if prev.kind == "punct":
        return prev.value not in _NO_REGEX_AFTER_PUNCT
    if prev.kind == "keyword":
        return prev.value not in _NO_REGEX_AFTER_KW
    return True


def tokenize(source: str) -> list[Token]:
    """Lex already-decoded source text into a token list ending with eof.

    Offsets are character offsets into the text; raises LexError on
    malformed literals and stray characters.
    """
    toks: list[Token] = []
    i = 0
    n = len(source)
    nl = False

    def push(kind, value, start, end):
        nonlocal nl
        toks.append(Token(kind, value, start, end, nl))
        nl = False

    while i < n:
        c = source[i]

        if c in "\n\r  ":
            nl = True
            i += 1
            continue
        if c.isspace():
            i += 1
            continue

        if c == "/" and source.startswith("//", i):
            j = i
            while j < n and source[j] not in "\n\r  ":
                j += 1
            i = j
            continue
        if c == "/" and source.startswith("/*", i):
            j = source.find("*/", i + 2)
            if j < 0:
                raise LexError(i, "unterminated block comment")
            if any(ch in source[i:j] for ch in "\n\r  "):
                nl = True
            i = j + 2
            continue

        if c in IDENT_START:
            j = i + 1
            while j < n and (source[j] in IDENT_START or source[j] in DIGITS):
                j += 1
            word = source[i:j]
            push("keyword" if word in KEYWORDS else "ident", word, i, j)
            i = j
            continue

        if c in DIGITS or (c == "." and i + 1 < n and source[i + 1] in DIGITS):
            i = _lex_number(source, i, push)
            continue

        if c in "'\"":
            i = _lex_string(source, i, push)
            continue

        if c == "/" and _regex_allowed(toks[-1] if toks else None):
            i = _lex_regex(source, i, push)
            continue

        for p in PUNCTUATORS:
            if source.startswith(p, i):
                push("punct", p, i, i + len(p))
                i += len(p)
                break
        else:
            raise LexError(i, f"unexpected character {c!r}")

    toks.append(Token("eof", None, n, n, nl))
    return toks


def _lex_number(source, i, push):
    n = len(source)
    start = i
    if source.startswith(("0x", "0X"), i):
        j = i + 2
        while j < n and source[j] in HEX_DIGITS:
            j += 1
        if j == i + 2:
            raise LexError(start, "hex literal needs digits")
        push("num", float(int(source[i + 2:j], 16)), start, j)
        return j
    # legacy octal: leading zero followed only by octal digits
    if source[i] == "0" and i + 1 < n and source[i + 1] in DIGITS:
        j = i + 1
        while j < n and source[j] in DIGITS:
            j += 1
        body = source[i:j]
        if all(ch in "01234567" for ch in body) and (j >= n or source[j] not in ".eE"):
            push("num", float(int(body, 8)), start, j)
            return j
        # fall through to decimal for things like 08 or 0.5
    j = i
    while j < n and source[j] in DIGITS:
        j += 1
    if j < n and source[j] == ".":
        j += 1
        while j < n and source[j] in DIGITS:
            j += 1
    if j < n and source[j] in "eE":
        k = j + 1
        if k < n and source[k] in "+-":
            k += 1
        if k >= n or source[k] not in DIGITS:
            raise LexError(start, "malformed exponent")
        j = k
        while j < n and source[j] in DIGITS:
            j += 1
    push("num", float(source[start:j]), start, j)
    return j


def _lex_string(source, i, push):
    n = len(source)
    quote = source[i]
    start = i
    i += 1
    out: list[str] = []
    while True:
        if i >= n:
            raise LexError(start, "unterminated string")
        c = source[i]
        if c == quote:
            push("str", "".join(out), start, i + 1)
            return i + 1
        if c in "\n\r  ":
            raise LexError(start, "unterminated string")
        if c != "\\":
            out.append(c)
            i += 1
            continue
        if i + 1 >= n:
            raise LexError(start, "unterminated string")
        e = source[i + 1]
        if e == "x":
            if i + 3 >= n or not all(ch in HEX_DIGITS for ch in source[i + 2:i + 4]):
                raise LexError(i, "malformed \\x escape")
            out.append(chr(int(source[i + 2:i + 4], 16)))
            i += 4
        elif e == "u":
            if i + 5 >= n or not all(ch in HEX_DIGITS for ch in source[i + 2:i + 6]):
                raise LexError(i, "malformed \\u escape")
            out.append(chr(int(source[i + 2:i + 6], 16)))
            i += 6
        elif e in ESCAPES:
            out.append(ESCAPES[e])
            i += 2
        elif e == "\r":
            # line continuation, swallow \r\n as one terminator
            i += 3 if source.startswith("\r\n", i + 1) else 2
        else:
            out.append(e)  # unknown escape keeps the character
            i += 2


def _lex_regex(source, i, push):
    n = len(source)
    start = i
    i += 1
    in_class = False
    while True:
        if i >= n or source[i] in "\n\r  ":
            raise LexError(start, "unterminated regex literal")
        c = source[i]
        if c == "\\":
            i += 2
            continue
        if c == "[":
            in_class = True
        elif c == "]":
            in_class = False
        elif c == "/" and not in_class:
            i += 1
            break
        i += 1
    body = source[start + 1:i - 1]
    j = i
    while j < n and (source[j] in IDENT_START or source[j] in DIGITS):
        j += 1
    push("regex", (body, source[i:j]), start, j)
    return j
