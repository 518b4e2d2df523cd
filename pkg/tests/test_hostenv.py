"""Host surface: URI/escape codecs, numeric parsing, the frozen clock,
builtin behaviors observable from script level, and HTML script extraction."""

import math
import re

import pytest
from hypothesis import given, strategies as st

from forcex import execute, parse, extract_scripts
from forcex.hostenv import (
    FIXED_TIME_MS,
    annexb_escape,
    annexb_unescape,
    js_parse_float,
    js_parse_int,
    num_to_radix,
)
from forcex.interpreter import Interpreter
from forcex.values import JSObject

NAN = float("nan")


# ---- independent escape/unescape oracle ----

_KEEP = set(
    "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789@*_+-./")


def _escape_oracle(s):
    pieces = []
    for ch in s:
        cp = ord(ch)
        if ch in _KEEP:
            pieces.append(ch)
        elif cp < 0x100:
            pieces.append("%{:02X}".format(cp))
        else:
            pieces.append("%u{:04X}".format(cp))
    return "".join(pieces)


# leftmost-longest at each '%' is exactly the Annex B scan order
_UNESC = re.compile(r"%u[0-9a-fA-F]{4}|%[0-9a-fA-F]{2}")


def _unescape_oracle(s):
    def repl(m):
        t = m.group(0)
        return chr(int(t[2:], 16)) if t[1] == "u" else chr(int(t[1:], 16))
    return _UNESC.sub(repl, s)


ESCAPE_PINS = [
    ("", ""),
    ("hello", "hello"),
    ("a b~€\x7f", "a%20b%7E%u20AC%7F"),
    ("@*_+-./", "@*_+-./"),
    ("%u9090", "%25u9090"),
    ("\x00\xff", "%00%FF"),
]

UNESCAPE_PINS = [
    ("", ""),
    ("plain", "plain"),
    ("%41%u0042%zz%u004", "AB%zz%u004"),
    ("%u9090" * 3, "邐" * 3),
    ("%", "%"),
    ("%%41", "%A"),
    ("%u0041", "A"),
    ("%U0041", "%U0041"),
    ("%4g", "%4g"),
    ("%u00g1", "%u00g1"),
]


@pytest.mark.parametrize("raw,expected", ESCAPE_PINS)
def test_escape_pins(raw, expected):
    assert annexb_escape(raw) == expected
    assert _escape_oracle(raw) == expected


@pytest.mark.parametrize("raw,expected", UNESCAPE_PINS)
def test_unescape_pins(raw, expected):
    assert annexb_unescape(raw) == expected
    assert _unescape_oracle(raw) == expected


@given(st.text(alphabet=st.characters(max_codepoint=0xFFFF)))
def test_escape_matches_oracle(s):
    assert annexb_escape(s) == _escape_oracle(s)


@given(st.text(alphabet=st.characters(max_codepoint=0xFFFF)))
def test_unescape_matches_oracle(s):
    assert annexb_unescape(s) == _unescape_oracle(s)


@given(st.text(alphabet=st.characters(max_codepoint=0xFFFF)))
def test_escape_round_trip(s):
    enc = annexb_escape(s)
    assert enc.isascii()
    assert annexb_unescape(enc) == s


# ---- parseInt / parseFloat / toString(radix) ----

PARSE_INT_PINS = [
    (("0x1F", NAN), 31.0),
    ((" 42abc", NAN), 42.0),
    (("08", NAN), 8.0),
    (("ff", 16.0), 255.0),
    (("-0x10", NAN), -16.0),
    (("+7", NAN), 7.0),
    (("z", 36.0), 35.0),
    (("101", 2.0), 5.0),
    (("12", 1.0), None),
    (("12", 37.0), None),
    (("", NAN), None),
    (("   ", NAN), None),
    (("abc", NAN), None),
    (("0x", NAN), None),
]


@pytest.mark.parametrize("args,expected", PARSE_INT_PINS)
def test_parse_int_pins(args, expected):
    got = js_parse_int(*args)
    if expected is None:
        assert got != got
    else:
        assert got == expected


@given(st.integers(min_value=-10**9, max_value=10**9))
def test_parse_int_decimal_identity(n):
    assert js_parse_int(str(n), NAN) == float(n)


@given(st.integers(min_value=0, max_value=2**40),
       st.integers(min_value=2, max_value=36))
def test_parse_int_inverts_radix_format(n, radix):
    rendered = num_to_radix(float(n), radix)
    assert js_parse_int(rendered, float(radix)) == float(n)


PARSE_FLOAT_PINS = [
    ("3.5e2xyz", 350.0),
    ("Infinity", float("inf")),
    ("-Infinity and beyond", float("-inf")),
    ("  .25", 0.25),
    ("1e-3", 0.001),
    ("0x10", 0.0),
    (".", None),
    ("e5", None),
    ("", None),
]


@pytest.mark.parametrize("raw,expected", PARSE_FLOAT_PINS)
def test_parse_float_pins(raw, expected):
    got = js_parse_float(raw)
    if expected is None:
        assert got != got
    else:
        assert got == expected


RADIX_PINS = [
    ((255.0, 16), "ff"),
    ((10.0, 2), "1010"),
    ((0.5, 2), "0.1"),
    ((13.25, 16), "d.4"),
    ((-7.0, 8), "-7"),
    ((0.0, 36), "0"),
    ((35.0, 36), "z"),
    ((NAN, 16), "NaN"),
    ((float("inf"), 2), "Infinity"),
    ((float("-inf"), 2), "-Infinity"),
]


@pytest.mark.parametrize("args,expected", RADIX_PINS)
def test_num_to_radix_pins(args, expected):
    assert num_to_radix(*args) == expected


def test_num_to_radix_ten_matches_js_rendering():
    # radix 10 goes through the normal number-to-string path
    assert num_to_radix(5.0, 10) == "5"
    assert num_to_radix(0.5, 10) == "0.5"


# ---- frozen clock ----

def test_fixed_time_is_stable_constant():
    assert FIXED_TIME_MS == 1350000000000.0


def _js_eval_probe(src):
    """Run src and return the recorded branch outcome of its single if."""
    out = execute(parse(src, "probe"))
    assert out.terminated_by == "normal"
    return out


def js_true(expr):
    out = _js_eval_probe("if (%s) { }" % expr)
    assert len(out.preds) == 1
    return out.preds[0].taken


DATE_CHECKS = [
    "new Date().getTime() == 1350000000000",
    "new Date().valueOf() == 1350000000000",
    "Date.now() == 1350000000000",
    "new Date().getFullYear() == 2012",
    "new Date().getUTCFullYear() == 2012",
    "new Date().getMonth() == 9",
    "new Date().getDate() == 12",
    "new Date().getDay() == 5",
    "new Date().getHours() == 0",
    "new Date().getMinutes() == 0",
    "new Date().getSeconds() == 0",
    "new Date().getMilliseconds() == 0",
    "new Date().getTimezoneOffset() == 0",
    "new Date(0).getFullYear() == 1970",
    "new Date(86400000).getDay() == 5",
    "Date.parse('whatever') == Date.now()",
]


@pytest.mark.parametrize("expr", DATE_CHECKS)
def test_clock_is_frozen(expr):
    assert js_true(expr)


def test_set_time_moves_one_instance_only():
    assert js_true(
        "(function(){ var d = new Date(); d.setTime(0);"
        " return d.getFullYear(); })() == 1970")
    assert js_true("new Date().getFullYear() == 2012")


def test_date_tostring_mentions_frozen_day():
    out = execute(parse(
        "var s = new Date().toString();"
        "if (s.indexOf('Fri Oct 12 2012') == 0) { }", "t"))
    assert out.preds[0].taken


# ---- script-level builtin checks ----

BUILTIN_TRUE = [
    "String.fromCharCode(104, 105) == 'hi'",
    "'abc'.charCodeAt(1) == 98",
    "'hello'.toUpperCase() == 'HELLO'",
    "'  x  '.trim() == 'x'",
    "'a,b,c'.split(',').length == 3",
    "'mississippi'.replace(/ss/g, 'S') == 'miSiSippi'",
    "'Payload'.match(/pay/i) != null",
    "'abcdef'.slice(1, 3) == 'bc'",
    "'abcdef'.substring(4, 2) == 'cd'",
    "(255).toString(16) == 'ff'",
    "Math.max(3, 7, 5) == 7",
    "Math.floor(6.9) == 6",
    "Math.pow(2, 10) == 1024",
    "[3, 1, 2].sort().join('') == '123'",
    "[1, 2, 3].indexOf(2) == 1",
    "parseInt('0x10') == 16",
    "parseFloat('2.5 GHz') == 2.5",
    "isNaN(parseInt('nope'))",
    "unescape('%41') == 'A'",
    "escape(' ') == '%20'",
    "typeof function(){} == 'function'",
    "typeof undefinedThing == 'undefined'",
    "/(\\d+)-(\\d+)/.exec('10-20')[2] == '20'",
]


@pytest.mark.parametrize("expr", BUILTIN_TRUE)
def test_builtin_behavior(expr):
    assert js_true(expr)


def test_window_aliases_are_global_object():
    for expr in ("window == self", "window == top", "window == parent",
                 "this == window"):
        assert js_true(expr)


def test_navigator_exists_but_is_empty():
    # cloaking probes against UA fields must fall to faking, not crash
    out = execute(parse(
        "if (navigator.userAgent.indexOf('MSIE') != -1) { }", "t"))
    assert out.terminated_by == "normal"
    assert len(out.preds) == 1


def test_screen_and_location_have_concrete_fields():
    assert js_true("screen.width == 1024")
    assert js_true("location.href == 'about:blank'")
    assert js_true("document.URL == 'about:blank'")


def test_math_random_is_seeded_not_wallclock():
    a = execute(parse("var x = Math.random(); if (x < 1 && x >= 0) { }", "t"))
    assert a.preds[0].taken


# ---- native signature totality ----

def _walk_natives(obj, seen, found):
    if id(obj) in seen:
        return
    seen.add(id(obj))
    if obj.native is not None:
        found.append(obj)
    for v in obj.props.values():
        if isinstance(v, JSObject):
            _walk_natives(v, seen, found)


def test_every_installed_native_has_a_wellformed_signature():
    """Argument retyping reads these signatures; a malformed one would
    turn a retype into a crash at the first faked argument."""
    from forcex import hostenv

    interp = Interpreter(parse("1;", "sig"))
    natives = []
    _walk_natives(interp.global_obj, set(), natives)
    for kind_table in (hostenv.STRING_METHODS, hostenv.NUMBER_METHODS,
                       hostenv.BOOL_METHODS, hostenv.ARRAY_METHODS,
                       hostenv.FUNCTION_METHODS, hostenv.REGEX_METHODS,
                       hostenv.OBJECT_METHODS):
        for name, (fn, signature) in kind_table.items():
            from forcex.values import make_native
            natives.append(make_native(name, fn, signature))
    assert len(natives) > 80
    allowed = {"number", "string", "bool", "function", None}
    for nat in natives:
        sig = nat.signature
        assert sig is not None, nat.name
        params, rest = sig
        assert isinstance(params, tuple), nat.name
        for p in params:
            assert p in allowed, (nat.name, p)
        assert rest in allowed, (nat.name, rest)


# ---- HTML script extraction ----

def test_extract_inline_scripts_in_order():
    html = """
    <html><head>
    <script>var a = 1;</script>
    <SCRIPT type="text/javascript">var b = 2;</SCRIPT>
    </head><body>
    <script language="jscript">var c = 3;</script>
    </body></html>
    """
    units = extract_scripts(html, "page")
    assert [u[0] for u in units] == [
        "page#script0", "page#script1", "page#script2"]
    assert [u[1].strip() for u in units] == [
        "var a = 1;", "var b = 2;", "var c = 3;"]


def test_extract_skips_external_and_nonjs():
    html = (
        '<script src="evil.js"></script>'
        '<script type="text/vbscript">MsgBox 1</script>'
        '<script type="application/json">{"k": 1}</script>'
        '<script>var real = 1;</script>')
    units = extract_scripts(html, "p")
    assert len(units) == 1
    assert units[0] == ("p#script0", "var real = 1;")


def test_extract_accepts_explicit_js_types():
    html = ('<script type="text/javascript">a;</script>'
            '<script type="application/ecmascript">b;</script>'
            '<script type="text/jscript">c;</script>')
    assert len(extract_scripts(html, "p")) == 3


def test_extract_strips_comment_guards():
    html = "<script><!--\nvar hidden = 1;\n// --></script>"
    units = extract_scripts(html, "p")
    assert units == [("p#script0", "var hidden = 1;")]


def test_extract_runs_unterminated_tail():
    html = "<body><script>var before = 1;</script><script>var tail = 2;"
    units = extract_scripts(html, "p")
    assert units == [("p#script0", "var before = 1;"),
                     ("p#script1", "var tail = 2;")]


def test_extract_handler_attributes():
    html = ('<body onload="boot();" onclick=\'poke(1 &lt; 2);\'>'
            "<script>var x = 1;</script></body>")
    units = extract_scripts(html, "p")
    names = [u[0] for u in units]
    assert names == ["p#onload0", "p#onclick1", "p#script0"]
    # entity references inside attributes arrive decoded
    assert units[1][1] == "poke(1 < 2);"


def test_extract_ignores_handlers_inside_script_text():
    html = "<script>var s = '<div onclick=\"x()\">';</script>"
    units = extract_scripts(html, "p")
    assert len(units) == 1
    assert units[0][0] == "p#script0"


def test_extract_empty_bodies_produce_nothing():
    assert extract_scripts("<script></script><script>   </script>", "p") == []
    assert extract_scripts("no markup at all", "p") == []


def test_extracted_units_run_through_engine():
    html = ('<script>var total = 0;</script>'
            '<body onload="total = total + 1;">')
    units = extract_scripts(html, "p")
    for name, code in units:
        out = execute(parse(code, name))
        assert out.terminated_by == "normal"
