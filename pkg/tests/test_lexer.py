"""Tokenizer behavior: token shapes, escapes, the regex/divide split,
and offset bookkeeping that the rest of the engine anchors on."""

from __future__ import annotations

import pytest

from forcex.lexer import LexError, tokenize


def kinds(source):
    return [(t.kind, t.value) for t in tokenize(source) if t.kind != "eof"]


def test_basic_statement_tokens():
    assert kinds("var a = 1;") == [
        ("keyword", "var"), ("ident", "a"), ("punct", "="),
        ("num", 1.0), ("punct", ";"),
    ]


def test_numbers():
    assert kinds("0x1F 3.5 .25 1e3 2E-2") == [
        ("num", 31.0), ("num", 3.5), ("num", 0.25),
        ("num", 1000.0), ("num", 0.02),
    ]


def test_string_escapes():
    toks = kinds(r'"a\nb" ' + r"'\x41B'" + ' "q\\ z"')
    assert toks[0] == ("str", "a\nb")
    assert toks[1] == ("str", "AB")


def test_unknown_escape_passes_through():
    assert kinds(r'"\q"') == [("str", "q")]


def test_line_continuation_in_string():
    assert kinds('"a\\\nb"') == [("str", "ab")]


def test_unterminated_string_raises():
    with pytest.raises(LexError):
        tokenize('"abc')


def test_comments_are_skipped_but_newlines_survive():
    toks = tokenize("a // one\n/* two \n three */ b")
    assert [(t.kind, t.value) for t in toks[:2]] == [("ident", "a"), ("ident", "b")]
    assert toks[1].nl_before


def test_regex_literal_vs_division():
    toks = kinds("a = /ab+c/i; b = x / y;")
    assert toks[2][0] == "regex"
    assert toks[2][1] == ("ab+c", "i")
    div = [t for t in toks if t == ("punct", "/")]
    assert len(div) == 1


def test_regex_allowed_after_punctuation_and_keywords():
    toks = kinds("x = y == /z/ ? 1 : 2; return /w/;")
    assert ("regex", ("z", "")) in toks
    assert ("regex", ("w", "")) in toks


def test_regex_not_allowed_after_closing_paren():
    # (a) / b / c parses as division, not a regex literal
    assert all(t[0] != "regex" for t in kinds("(a) / b / c"))


def test_regex_class_can_hold_slash():
    assert ("regex", ("[/]", "")) in kinds("s.match(/[/]/)")


def test_punctuator_maximal_munch():
    assert [v for k, v in kinds("a >>>= b === c !== d")] == [
        "a", ">>>=", "b", "===", "c", "!==", "d",
    ]


def test_offsets_point_into_source():
    src = "foo + bar"
    toks = tokenize(src)
    assert src[toks[0].offset:toks[0].end] == "foo"
    assert src[toks[2].offset:toks[2].end] == "bar"


def test_nl_before_tracking_for_asi():
    toks = tokenize("return\n42")
    assert toks[0].value == "return"
    assert toks[1].nl_before


def test_keywords_are_not_identifiers():
    toks = tokenize("typeof instanceof in of")
    assert [t.kind for t in toks[:3]] == ["keyword", "keyword", "keyword"]
    # "of" only matters contextually; it stays an identifier-like keyword
    assert toks[3].value == "of"


def test_unexpected_character_raises():
    with pytest.raises(LexError):
        tokenize("var a = 1 @ 2;")


def test_crlf_counts_as_line_break():
    toks = tokenize("a\r\nb")
    assert toks[1].nl_before
