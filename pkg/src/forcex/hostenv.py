"""Host environment installed into every execution.

Models the browser/WSH surface malicious scripts commonly touch: Math,
String, Date, timers, document.write, window, navigator, ActiveXObject.
Everything else self-heals through the faked-object machinery, so the
modeling here stays deliberately shallow. All nondeterminism (random,
clock) is pinned per run.
"""
from __future__ import annotations

import datetime
import functools
import html as html_module
import math
import re

from .jsast import SourceAnchor, js_num_str
from .lexer import LexError
from .parser import JsSyntaxError, parse
from .values import (
    NULL, UNDEFINED, FakedValue, JSObject, deref, make_array, make_faked,
    make_function, make_native, truthy,
)

# midnight UTC, a Friday; every Date in every run reads this instant
FIXED_TIME_MS = 1350000000000.0

ESCAPE_KEEP = frozenset(
    "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789@*_+-./")

_HEX = frozenset("0123456789abcdefABCDEF")


def annexb_escape(s: str) -> str:
    out = []
    for ch in s:
        if ch in ESCAPE_KEEP:
            out.append(ch)
        else:
            code = ord(ch)
            if code < 256:
                out.append("%%%02X" % code)
            else:
                out.append("%%u%04X" % code)
    return "".join(out)


def annexb_unescape(s: str) -> str:
    out = []
    k = 0
    n = len(s)
    while k < n:
        ch = s[k]
        if ch == "%":
            if (k + 6 <= n and s[k + 1] == "u"
                    and all(c in _HEX for c in s[k + 2:k + 6])):
                out.append(chr(int(s[k + 2:k + 6], 16)))
                k += 6
                continue
            if k + 3 <= n and all(c in _HEX for c in s[k + 1:k + 3]):
                out.append(chr(int(s[k + 1:k + 3], 16)))
                k += 3
                continue
        out.append(ch)
        k += 1
    return "".join(out)


def js_parse_int(s: str, radix: float) -> float:
    t = s.strip()
    sign = 1.0
    if t[:1] in ("+", "-"):
        if t[0] == "-":
            sign = -1.0
        t = t[1:]
    r = 0
    if radix == radix and abs(radix) != float("inf"):
        r = int(radix)
    if r in (0, 16) and t[:2].lower() == "0x":
        t = t[2:]
        r = 16
    if r == 0:
        r = 10
    if r < 2 or r > 36:
        return float("nan")
    digits = "0123456789abcdefghijklmnopqrstuvwxyz"[:r]
    i = 0
    while i < len(t) and t[i].lower() in digits:
        i += 1
    if i == 0:
        return float("nan")
    return sign * float(int(t[:i], r))


_FLOAT_PREFIX = re.compile(
    r"[+-]?(?:Infinity|\d+\.?\d*(?:[eE][+-]?\d+)?|\.\d+(?:[eE][+-]?\d+)?)")


def js_parse_float(s: str) -> float:
    m = _FLOAT_PREFIX.match(s.strip())
    if m is None:
        return float("nan")
    t = m.group(0)
    if t.endswith("Infinity"):
        return float("-inf") if t.startswith("-") else float("inf")
    try:
        return float(t)
    except (ValueError, OverflowError):
        return float("nan")


def num_to_radix(n: float, radix: int) -> str:
    if n != n:
        return "NaN"
    if n == float("inf"):
        return "Infinity"
    if n == float("-inf"):
        return "-Infinity"
    if radix == 10:
        return js_num_str(n)
    if n < 0:
        return "-" + num_to_radix(-n, radix)
    digits = "0123456789abcdefghijklmnopqrstuvwxyz"
    ip = int(n)
    frac = n - ip
    if ip == 0:
        out = "0"
    else:
        parts = []
        while ip:
            parts.append(digits[ip % radix])
            ip //= radix
        out = "".join(reversed(parts))
    if frac > 0:
        fparts = []
        for _ in range(20):
            frac *= radix
            d = int(frac)
            fparts.append(digits[d])
            frac -= d
            if frac <= 0:
                break
        fs = "".join(fparts).rstrip("0")
        if fs:
            out += "." + fs
    return out


def _compile_js_regex(pattern: str, flags: str):
    pyflags = 0
    if "i" in flags:
        pyflags |= re.IGNORECASE
    if "m" in flags:
        pyflags |= re.MULTILINE
    p = pattern.replace("[^]", r"[\s\S]")
    try:
        return re.compile(p, pyflags)
    except (re.error, OverflowError):
        return None


def make_regex_object(pattern: str, flags: str) -> JSObject:
    obj = JSObject("RegExp")
    obj.regex = (pattern, flags)
    obj.props["source"] = pattern
    obj.props["global"] = "g" in flags
    obj.props["ignoreCase"] = "i" in flags
    obj.props["multiline"] = "m" in flags
    obj.props["lastIndex"] = 0.0
    return obj


def _finite_int(interp, value, default=0):
    n = interp.to_number(value)
    if n != n or abs(n) == float("inf"):
        return default
    return int(n)


def _clamp_index(interp, value, length, default=0):
    n = interp.to_number(value)
    if n != n:
        return default
    if n < 0:
        return max(length + int(n), 0)
    return min(int(n), length)


# ---- Math ----

def _math1(pyfn, inf_passes=False):
    def nat(interp, this, args, anchor):
        x = interp.to_number(args[0]) if args else float("nan")
        if x != x:
            return float("nan")
        if abs(x) == float("inf"):
            return x if inf_passes else float("nan")
        try:
            return float(pyfn(x))
        except (ValueError, OverflowError):
            return float("nan")
    return nat


def _math_abs(interp, this, args, anchor):
    return abs(interp.to_number(args[0])) if args else float("nan")


def _math_round(interp, this, args, anchor):
    x = interp.to_number(args[0]) if args else float("nan")
    if x != x or abs(x) == float("inf"):
        return x
    return float(math.floor(x + 0.5))


def _math_sqrt(interp, this, args, anchor):
    x = interp.to_number(args[0]) if args else float("nan")
    if x != x or x < 0:
        return float("nan")
    if x == float("inf"):
        return x
    return math.sqrt(x)


def _math_log(interp, this, args, anchor):
    x = interp.to_number(args[0]) if args else float("nan")
    if x != x or x < 0:
        return float("nan")
    if x == 0:
        return float("-inf")
    if x == float("inf"):
        return x
    return math.log(x)


def _math_pow(interp, this, args, anchor):
    a = interp.to_number(args[0]) if args else float("nan")
    b = interp.to_number(args[1]) if len(args) > 1 else float("nan")
    if b == 0:
        return 1.0
    if a != a or b != b:
        return float("nan")
    try:
        r = a ** b
    except OverflowError:
        return float("inf")
    except ZeroDivisionError:
        return float("inf")
    if isinstance(r, complex):
        return float("nan")
    return float(r)


def _math_max(interp, this, args, anchor):
    best = float("-inf")
    for a in args:
        n = interp.to_number(a)
        if n != n:
            return float("nan")
        if n > best:
            best = n
    return best


def _math_min(interp, this, args, anchor):
    best = float("inf")
    for a in args:
        n = interp.to_number(a)
        if n != n:
            return float("nan")
        if n < best:
            best = n
    return best


def _math_random(interp, this, args, anchor):
    return interp.rng.random()


def _math_atan2(interp, this, args, anchor):
    y = interp.to_number(args[0]) if args else float("nan")
    x = interp.to_number(args[1]) if len(args) > 1 else float("nan")
    if y != y or x != x:
        return float("nan")
    return math.atan2(y, x)


# ---- string methods ----

def _this_str(interp, this):
    return this if isinstance(this, str) else interp.to_string(this)


def _str_charat(interp, this, args, anchor):
    s = _this_str(interp, this)
    i = _finite_int(interp, args[0]) if args else 0
    return s[i] if 0 <= i < len(s) else ""


def _str_charcodeat(interp, this, args, anchor):
    s = _this_str(interp, this)
    i = _finite_int(interp, args[0]) if args else 0
    return float(ord(s[i])) if 0 <= i < len(s) else float("nan")


def _str_indexof(interp, this, args, anchor):
    s = _this_str(interp, this)
    needle = interp.to_string(args[0]) if args else "undefined"
    start = _clamp_index(interp, args[1], len(s)) if len(args) > 1 else 0
    return float(s.find(needle, start))


def _str_lastindexof(interp, this, args, anchor):
    s = _this_str(interp, this)
    needle = interp.to_string(args[0]) if args else "undefined"
    return float(s.rfind(needle))


def _str_substring(interp, this, args, anchor):
    s = _this_str(interp, this)
    n = len(s)
    a = min(max(_finite_int(interp, args[0]) if args else 0, 0), n)
    b = min(max(_finite_int(interp, args[1], n), 0), n) if len(args) > 1 \
        and deref(args[1]) is not UNDEFINED else n
    if a > b:
        a, b = b, a
    return s[a:b]


def _str_substr(interp, this, args, anchor):
    s = _this_str(interp, this)
    n = len(s)
    a = _finite_int(interp, args[0]) if args else 0
    if a < 0:
        a = max(n + a, 0)
    a = min(a, n)
    count = _finite_int(interp, args[1], n - a) if len(args) > 1 \
        and deref(args[1]) is not UNDEFINED else n - a
    count = max(count, 0)
    return s[a:a + count]


def _str_slice(interp, this, args, anchor):
    s = _this_str(interp, this)
    n = len(s)
    a = _clamp_index(interp, args[0], n) if args else 0
    b = _clamp_index(interp, args[1], n, n) if len(args) > 1 \
        and deref(args[1]) is not UNDEFINED else n
    return s[a:b] if a < b else ""


def _str_split(interp, this, args, anchor):
    s = _this_str(interp, this)
    sep = args[0] if args else UNDEFINED
    limit = None
    if len(args) > 1 and deref(args[1]) is not UNDEFINED:
        ln = interp.to_number(args[1])
        if ln == ln:
            limit = max(0, int(ln))
    if deref(sep) is UNDEFINED:
        parts = [s]
    elif isinstance(sep, JSObject) and sep.regex is not None:
        rx = _compile_js_regex(*sep.regex)
        if rx is None:
            parts = [s]
        else:
            parts = [p if p is not None else UNDEFINED for p in rx.split(s)]
    else:
        ss = interp.to_string(sep)
        parts = list(s) if ss == "" else s.split(ss)
    if limit is not None:
        parts = parts[:limit]
    return make_array(list(parts))


def _expand_dollars(rstr: str, whole: str, matched: str, groups, prefix: str,
                    suffix: str) -> str:
    out = []
    i = 0
    n = len(rstr)
    while i < n:
        c = rstr[i]
        if c == "$" and i + 1 < n:
            nx = rstr[i + 1]
            if nx == "$":
                out.append("$")
                i += 2
                continue
            if nx == "&":
                out.append(matched)
                i += 2
                continue
            if nx == "`":
                out.append(prefix)
                i += 2
                continue
            if nx == "'":
                out.append(suffix)
                i += 2
                continue
            if nx.isdigit():
                num = nx
                j = i + 2
                if j < n and rstr[j].isdigit() and int(num + rstr[j]) <= len(groups):
                    num += rstr[j]
                    j += 1
                gi = int(num)
                if 1 <= gi <= len(groups):
                    out.append(groups[gi - 1] or "")
                    i = j
                    continue
        out.append(c)
        i += 1
    return "".join(out)


def _call_replacer(interp, fn, anchor, matched, groups, offset, whole):
    call_args = [matched]
    call_args.extend(g if g is not None else UNDEFINED for g in groups)
    call_args.append(float(offset))
    call_args.append(whole)
    r = interp.call_value(anchor, fn, interp.global_obj, call_args, "replace")
    return interp.to_string(r)


def _str_replace(interp, this, args, anchor):
    s = _this_str(interp, this)
    pat = args[0] if args else UNDEFINED
    repl = args[1] if len(args) > 1 else UNDEFINED
    repl_fn = repl if isinstance(repl, JSObject) and repl.is_callable else None
    if isinstance(pat, JSObject) and pat.regex is not None:
        rx = _compile_js_regex(*pat.regex)
        if rx is None:
            return s
        glob = "g" in pat.regex[1]
        out = []
        pos = 0
        for m in rx.finditer(s):
            out.append(s[pos:m.start()])
            if repl_fn is not None:
                out.append(_call_replacer(interp, repl_fn, anchor,
                                          m.group(0), m.groups(), m.start(), s))
            else:
                out.append(_expand_dollars(
                    interp.to_string(repl), s, m.group(0), m.groups(),
                    s[:m.start()], s[m.end():]))
            pos = m.end()
            if not glob:
                break
        out.append(s[pos:])
        return "".join(out)
    pstr = interp.to_string(pat)
    idx = s.find(pstr)
    if idx < 0:
        return s
    if repl_fn is not None:
        rep = _call_replacer(interp, repl_fn, anchor, pstr, (), idx, s)
    else:
        rep = _expand_dollars(interp.to_string(repl), s, pstr, (),
                              s[:idx], s[idx + len(pstr):])
    return s[:idx] + rep + s[idx + len(pstr):]


def _str_match(interp, this, args, anchor):
    s = _this_str(interp, this)
    pat = args[0] if args else UNDEFINED
    if isinstance(pat, JSObject) and pat.regex is not None:
        pattern, flags = pat.regex
    else:
        pattern, flags = interp.to_string(pat), ""
    rx = _compile_js_regex(pattern, flags)
    if rx is None:
        return NULL
    if "g" in flags:
        hits = [m.group(0) for m in rx.finditer(s)]
        return make_array(hits) if hits else NULL
    m = rx.search(s)
    if m is None:
        return NULL
    arr = make_array([m.group(0)] + [g if g is not None else UNDEFINED
                                     for g in m.groups()])
    arr.props["index"] = float(m.start())
    arr.props["input"] = s
    return arr


def _str_search(interp, this, args, anchor):
    s = _this_str(interp, this)
    pat = args[0] if args else UNDEFINED
    if isinstance(pat, JSObject) and pat.regex is not None:
        rx = _compile_js_regex(*pat.regex)
    else:
        rx = _compile_js_regex(interp.to_string(pat), "")
    if rx is None:
        return -1.0
    m = rx.search(s)
    return float(m.start()) if m else -1.0


def _str_concat(interp, this, args, anchor):
    s = _this_str(interp, this)
    return s + "".join(interp.to_string(a) for a in args)


def _str_upper(interp, this, args, anchor):
    return _this_str(interp, this).upper()


def _str_lower(interp, this, args, anchor):
    return _this_str(interp, this).lower()


def _str_trim(interp, this, args, anchor):
    return _this_str(interp, this).strip()


def _str_tostring(interp, this, args, anchor):
    return _this_str(interp, this)


# ---- number / bool methods ----

def _this_num(interp, this):
    return this if isinstance(this, float) else interp.to_number(this)


def _num_tostring(interp, this, args, anchor):
    n = _this_num(interp, this)
    radix = 10
    if args and deref(args[0]) is not UNDEFINED:
        r = interp.to_number(args[0])
        if r == r and 2 <= r <= 36:
            radix = int(r)
    return num_to_radix(n, radix)


def _num_tofixed(interp, this, args, anchor):
    n = _this_num(interp, this)
    if n != n:
        return "NaN"
    if abs(n) == float("inf"):
        return "Infinity" if n > 0 else "-Infinity"
    d = _finite_int(interp, args[0]) if args else 0
    d = min(max(d, 0), 20)
    return f"{n:.{d}f}"


def _num_valueof(interp, this, args, anchor):
    return _this_num(interp, this)


def _bool_tostring(interp, this, args, anchor):
    return "true" if truthy(this) else "false"


def _bool_valueof(interp, this, args, anchor):
    return this if isinstance(this, bool) else truthy(this)


# ---- array methods ----

def _is_arr(this):
    return isinstance(this, JSObject) and this.is_array


def _arr_push(interp, this, args, anchor):
    if not _is_arr(this):
        return UNDEFINED
    this.elements.extend(args)
    return float(len(this.elements))


def _arr_pop(interp, this, args, anchor):
    if not _is_arr(this) or not this.elements:
        return UNDEFINED
    return this.elements.pop()


def _arr_shift(interp, this, args, anchor):
    if not _is_arr(this) or not this.elements:
        return UNDEFINED
    return this.elements.pop(0)


def _arr_unshift(interp, this, args, anchor):
    if not _is_arr(this):
        return UNDEFINED
    this.elements[:0] = args
    return float(len(this.elements))


def _arr_join(interp, this, args, anchor):
    if not _is_arr(this):
        return ""
    sep = ","
    if args and deref(args[0]) is not UNDEFINED:
        sep = interp.to_string(args[0])
    parts = []
    for el in this.elements:
        el = deref(el)
        parts.append("" if el is UNDEFINED or el is NULL else interp.to_string(el))
    return sep.join(parts)


def _arr_reverse(interp, this, args, anchor):
    if _is_arr(this):
        this.elements.reverse()
    return this


def _arr_slice(interp, this, args, anchor):
    if not _is_arr(this):
        return make_array([])
    n = len(this.elements)
    a = _clamp_index(interp, args[0], n) if args else 0
    b = _clamp_index(interp, args[1], n, n) if len(args) > 1 \
        and deref(args[1]) is not UNDEFINED else n
    return make_array(this.elements[a:b] if a < b else [])


def _arr_splice(interp, this, args, anchor):
    if not _is_arr(this):
        return make_array([])
    n = len(this.elements)
    start = _clamp_index(interp, args[0], n) if args else 0
    if len(args) > 1:
        dc = interp.to_number(args[1])
        dc = 0 if dc != dc else int(max(0, min(dc, n - start)))
    else:
        dc = n - start
    removed = this.elements[start:start + dc]
    this.elements[start:start + dc] = list(args[2:])
    return make_array(removed)


def _arr_concat(interp, this, args, anchor):
    base = list(this.elements) if _is_arr(this) else []
    for a in args:
        a = deref(a)
        if isinstance(a, JSObject) and a.is_array:
            base.extend(a.elements)
        else:
            base.append(a)
    return make_array(base)


def _arr_indexof(interp, this, args, anchor):
    if not _is_arr(this):
        return -1.0
    needle = args[0] if args else UNDEFINED
    start = _clamp_index(interp, args[1], len(this.elements)) if len(args) > 1 else 0
    for i in range(start, len(this.elements)):
        if interp.strict_equals(this.elements[i], needle):
            return float(i)
    return -1.0


def _arr_sort(interp, this, args, anchor):
    if not _is_arr(this):
        return this
    cmp = args[0] if args and isinstance(args[0], JSObject) and args[0].is_callable else None
    if cmp is None:
        def key(v):
            v = deref(v)
            return "￿￿" if v is UNDEFINED else interp.to_string(v)
        this.elements.sort(key=key)
    else:
        def pycmp(a, b):
            r = interp.to_number(deref(
                interp.call_value(anchor, cmp, interp.global_obj, [a, b], "sort")))
            if r != r:
                return 0
            return -1 if r < 0 else (1 if r > 0 else 0)
        this.elements.sort(key=functools.cmp_to_key(pycmp))
    return this


def _arr_tostring(interp, this, args, anchor):
    return _arr_join(interp, this, [], anchor)


# ---- function methods ----

def _fn_call(interp, this, args, anchor):
    if not (isinstance(this, JSObject) and this.is_callable):
        return UNDEFINED
    ta = args[0] if args and isinstance(args[0], JSObject) else interp.global_obj
    return interp.call_value(anchor, this, ta, list(args[1:]), this.name or "call")


def _fn_apply(interp, this, args, anchor):
    if not (isinstance(this, JSObject) and this.is_callable):
        return UNDEFINED
    ta = args[0] if args and isinstance(args[0], JSObject) else interp.global_obj
    arr = deref(args[1]) if len(args) > 1 else UNDEFINED
    call_args = list(arr.elements) if isinstance(arr, JSObject) and arr.is_array else []
    return interp.call_value(anchor, this, ta, call_args, this.name or "apply")


def _fn_tostring(interp, this, args, anchor):
    return interp.to_string(this)


# ---- generic object methods ----

def _obj_hasown(interp, this, args, anchor):
    key = interp.to_property_key(args[0]) if args else "undefined"
    if isinstance(this, JSObject):
        if this.is_array and key.isdigit():
            return int(key) < len(this.elements)
        return key in this.props
    return False


def _obj_tostring(interp, this, args, anchor):
    return interp.to_string(this)


def _obj_valueof(interp, this, args, anchor):
    return this


# ---- regex methods ----

def _regex_run(interp, robj, s):
    """Shared test/exec core; honors the g-flag lastIndex protocol."""
    rx = _compile_js_regex(*robj.regex)
    if rx is None:
        return None
    glob = "g" in robj.regex[1]
    start = 0
    if glob:
        ln = interp.to_number(robj.props.get("lastIndex", 0.0))
        start = int(ln) if ln == ln and 0 <= ln <= len(s) else None
        if start is None:
            robj.props["lastIndex"] = 0.0
            return None
    m = rx.search(s, start)
    if glob:
        robj.props["lastIndex"] = float(m.end()) if m else 0.0
    return m


def _regex_test(interp, this, args, anchor):
    if not (isinstance(this, JSObject) and this.regex is not None):
        return False
    s = interp.to_string(args[0]) if args else "undefined"
    return _regex_run(interp, this, s) is not None


def _regex_exec(interp, this, args, anchor):
    if not (isinstance(this, JSObject) and this.regex is not None):
        return NULL
    s = interp.to_string(args[0]) if args else "undefined"
    m = _regex_run(interp, this, s)
    if m is None:
        return NULL
    arr = make_array([m.group(0)] + [g if g is not None else UNDEFINED
                                     for g in m.groups()])
    arr.props["index"] = float(m.start())
    arr.props["input"] = s
    return arr


def _regex_tostring(interp, this, args, anchor):
    if isinstance(this, JSObject) and this.regex is not None:
        return f"/{this.regex[0]}/{this.regex[1]}"
    return "//"


# ---- method tables: name -> (impl, signature) ----

STRING_METHODS = {
    "charAt": (_str_charat, (("number",), None)),
    "charCodeAt": (_str_charcodeat, (("number",), None)),
    "indexOf": (_str_indexof, (("string", "number"), None)),
    "lastIndexOf": (_str_lastindexof, (("string",), None)),
    "substring": (_str_substring, (("number", "number"), None)),
    "substr": (_str_substr, (("number", "number"), None)),
    "slice": (_str_slice, (("number", "number"), None)),
    "split": (_str_split, (("string", "number"), None)),
    "replace": (_str_replace, (("string", "string"), None)),
    "match": (_str_match, (("string",), None)),
    "search": (_str_search, (("string",), None)),
    "concat": (_str_concat, ((), "string")),
    "toUpperCase": (_str_upper, ((), None)),
    "toLowerCase": (_str_lower, ((), None)),
    "trim": (_str_trim, ((), None)),
    "toString": (_str_tostring, ((), None)),
    "valueOf": (_str_tostring, ((), None)),
}

NUMBER_METHODS = {
    "toString": (_num_tostring, (("number",), None)),
    "toFixed": (_num_tofixed, (("number",), None)),
    "valueOf": (_num_valueof, ((), None)),
}

BOOL_METHODS = {
    "toString": (_bool_tostring, ((), None)),
    "valueOf": (_bool_valueof, ((), None)),
}

ARRAY_METHODS = {
    "push": (_arr_push, ((), None)),
    "pop": (_arr_pop, ((), None)),
    "shift": (_arr_shift, ((), None)),
    "unshift": (_arr_unshift, ((), None)),
    "join": (_arr_join, (("string",), None)),
    "reverse": (_arr_reverse, ((), None)),
    "slice": (_arr_slice, (("number", "number"), None)),
    "splice": (_arr_splice, (("number", "number"), None)),
    "concat": (_arr_concat, ((), None)),
    "indexOf": (_arr_indexof, ((None, "number"), None)),
    "sort": (_arr_sort, (("function",), None)),
    "toString": (_arr_tostring, ((), None)),
}

FUNCTION_METHODS = {
    "call": (_fn_call, ((), None)),
    "apply": (_fn_apply, ((), None)),
    "toString": (_fn_tostring, ((), None)),
}

REGEX_METHODS = {
    "test": (_regex_test, (("string",), None)),
    "exec": (_regex_exec, (("string",), None)),
    "toString": (_regex_tostring, ((), None)),
}

OBJECT_METHODS = {
    "hasOwnProperty": (_obj_hasown, (("string",), None)),
    "toString": (_obj_tostring, ((), None)),
    "valueOf": (_obj_valueof, ((), None)),
}


def _cached_method(interp, kind, name, fn, signature):
    cache = interp._method_cache
    key = (kind, name)
    obj = cache.get(key)
    if obj is None:
        obj = make_native(name, fn, signature)
        cache[key] = obj
    return obj


def primitive_member(interp, base, key):
    """Built-in method lookup for primitives and object prototypes.
    Returns None when nothing is modeled (caller fakes the miss)."""
    if isinstance(base, str):
        if key == "length":
            return float(len(base))
        if key.isdigit():
            i = int(key)
            return base[i] if i < len(base) else UNDEFINED
        hit = STRING_METHODS.get(key)
        kind = "string"
    elif isinstance(base, bool):
        hit = BOOL_METHODS.get(key)
        kind = "bool"
    elif isinstance(base, float):
        hit = NUMBER_METHODS.get(key)
        kind = "number"
    elif isinstance(base, JSObject):
        hit = None
        kind = "object"
        if base.regex is not None:
            hit = REGEX_METHODS.get(key)
            kind = "regex"
        elif base.is_array:
            hit = ARRAY_METHODS.get(key)
            kind = "array"
        elif base.is_callable:
            hit = FUNCTION_METHODS.get(key)
            kind = "function"
        if hit is None:
            hit = OBJECT_METHODS.get(key)
            kind = "object"
    else:
        return None
    if hit is None:
        return None
    return _cached_method(interp, kind, key, hit[0], hit[1])


# ---- global constructors and functions ----

def _eval_native(interp, this, args, anchor):
    arg = args[0] if args else UNDEFINED
    if not isinstance(arg, str):
        return arg
    return interp.do_eval(arg, anchor)


def _execscript(interp, this, args, anchor):
    arg = args[0] if args else UNDEFINED
    if isinstance(arg, str):
        interp.do_eval(arg, anchor)
    return UNDEFINED


def _function_ctor(interp, this, args, anchor):
    body_src = interp.to_string(args[-1]) if args else ""
    params = []
    for a in args[:-1]:
        for p in interp.to_string(a).split(","):
            if p.strip():
                params.append(p.strip())
    interp.event("eval_string", body_src, anchor,
                 {"length": len(body_src), "via": "Function"})
    interp.observe_string(body_src, anchor, "eval_arg")
    name = interp.dynamic_unit_name(anchor, "func")
    interp.add_new_js(name, body_src, "eval")
    try:
        body = parse(body_src, name).body
    except (LexError, JsSyntaxError) as e:
        interp.log_action(anchor, "SYNTAX_IN_EVAL", "Function", str(e)[:120])
        body = []
    except RecursionError:
        interp.log_action(anchor, "SYNTAX_IN_EVAL", "Function", "parse too deep")
        body = []
    return make_function("anonymous", params, body, interp.global_scope)


def _parseint(interp, this, args, anchor):
    s = interp.to_string(args[0]) if args else "undefined"
    radix = interp.to_number(args[1]) if len(args) > 1 else float("nan")
    return js_parse_int(s, radix)


def _parsefloat(interp, this, args, anchor):
    return js_parse_float(interp.to_string(args[0]) if args else "undefined")


def _isnan(interp, this, args, anchor):
    n = interp.to_number(args[0]) if args else float("nan")
    return n != n


def _isfinite(interp, this, args, anchor):
    n = interp.to_number(args[0]) if args else float("nan")
    return n == n and abs(n) != float("inf")


def _escape(interp, this, args, anchor):
    return annexb_escape(interp.to_string(args[0]) if args else "undefined")


def _unescape(interp, this, args, anchor):
    raw = interp.to_string(args[0]) if args else "undefined"
    # the %uXXXX runs live in the raw argument; the result only matters
    # when the payload was double-encoded
    interp.observe_string(raw, anchor, "unescape_arg")
    out = annexb_unescape(raw)
    interp.observe_string(out, anchor, "unescape_result")
    return out


def _decode_uri_component(interp, this, args, anchor):
    from urllib.parse import unquote
    return unquote(interp.to_string(args[0]) if args else "undefined",
                   errors="replace")


def _encode_uri_component(interp, this, args, anchor):
    from urllib.parse import quote
    return quote(interp.to_string(args[0]) if args else "undefined",
                 safe="!'()*-._~")


def _decode_uri(interp, this, args, anchor):
    from urllib.parse import unquote
    return unquote(interp.to_string(args[0]) if args else "undefined",
                   errors="replace")


def _encode_uri(interp, this, args, anchor):
    from urllib.parse import quote
    return quote(interp.to_string(args[0]) if args else "undefined",
                 safe="!#$&'()*+,-./:;=?@_~")


def _string_ctor(interp, this, args, anchor):
    return interp.to_string(args[0]) if args else ""


def _string_fromcharcode(interp, this, args, anchor):
    out = []
    for a in args:
        n = interp.to_number(a)
        if n != n or abs(n) == float("inf"):
            out.append("\x00")
        else:
            out.append(chr(int(n) & 0xFFFF))
    return "".join(out)


def _number_ctor(interp, this, args, anchor):
    return interp.to_number(args[0]) if args else 0.0


def _boolean_ctor(interp, this, args, anchor):
    return truthy(args[0]) if args else False


def _object_ctor(interp, this, args, anchor):
    if args and isinstance(args[0], JSObject):
        return args[0]
    return JSObject("Object")


def _array_ctor(interp, this, args, anchor):
    if len(args) == 1 and isinstance(args[0], float) and not isinstance(args[0], bool):
        n = args[0]
        if n == n and n >= 0 and float(n).is_integer() and n < 2 ** 24:
            return make_array([UNDEFINED] * int(n))
        return make_array([n])
    return make_array(list(args))


def _regexp_ctor(interp, this, args, anchor):
    pat = args[0] if args else UNDEFINED
    if isinstance(pat, JSObject) and pat.regex is not None:
        return pat
    pattern = interp.to_string(pat) if args else ""
    flags = interp.to_string(args[1]) if len(args) > 1 \
        and deref(args[1]) is not UNDEFINED else ""
    return make_regex_object(pattern, flags)


def _error_ctor_for(err_name):
    def nat(interp, this, args, anchor):
        obj = JSObject("Error")
        obj.props["name"] = err_name
        obj.props["message"] = interp.to_string(args[0]) if args else ""
        return obj
    return nat


# ---- timers, dialogs, ActiveX ----

def _make_timer(api):
    def nat(interp, this, args, anchor):
        target = args[0] if args else UNDEFINED
        if isinstance(target, JSObject) and target.is_callable and target.native is None:
            interp.enqueue_callback(target, anchor, api, kind="timer_registered")
        elif isinstance(target, str):
            interp.observe_string(target, anchor, "timer_arg")
            name = interp.dynamic_unit_name(anchor, "timer")
            interp.add_new_js(name, target, "timer_string")
            interp.enqueue_callback(None, anchor, api, kind="timer_registered",
                                    source=target, source_name=name)
        interp.timer_seq += 1
        return float(interp.timer_seq)
    return nat


def _cleartimer(interp, this, args, anchor):
    return UNDEFINED


def _alert(interp, this, args, anchor):
    return UNDEFINED


def _confirm(interp, this, args, anchor):
    return True


def _prompt(interp, this, args, anchor):
    return ""


def _activex_ctor(interp, this, args, anchor):
    from .interpreter import ThrowSignal
    progid = interp.to_string(args[0]) if args else ""
    interp.event("activex_probe", progid, anchor)
    if interp.budgets.activex_mode == "fake":
        return make_faked(f"ActiveXObject({progid})", "FFun_return", anchor)
    err = JSObject("Error")
    err.props["name"] = "Error"
    err.props["message"] = "Automation server can't create object"
    raise ThrowSignal(err)


def _register_handler(interp, this, args, anchor):
    evt = interp.to_string(args[0]) if args else ""
    fn = deref(args[1]) if len(args) > 1 else UNDEFINED
    if isinstance(fn, JSObject) and fn.is_callable and fn.native is None:
        interp.enqueue_callback(fn, anchor, f"handler:{evt}",
                                kind="callback_registered")
    return UNDEFINED


def _noop_native(interp, this, args, anchor):
    return UNDEFINED


# ---- document / DOM stubs ----

def _doc_write(interp, this, args, anchor):
    text = "".join(interp.to_string(a) for a in args)
    interp.doc_writes.append(text)
    interp.event("document_write", text, anchor, {"length": len(text)})
    interp.observe_string(text, anchor, "document_write")
    return UNDEFINED


def _doc_writeln(interp, this, args, anchor):
    _doc_write(interp, this, args, anchor)
    interp.doc_writes.append("\n")
    return UNDEFINED


def _el_setattr(interp, this, args, anchor):
    if isinstance(this, JSObject) and args:
        this.props[interp.to_string(args[0])] = args[1] if len(args) > 1 else UNDEFINED
    return UNDEFINED


def _el_getattr(interp, this, args, anchor):
    if isinstance(this, JSObject) and args:
        return this.props.get(interp.to_string(args[0]), NULL)
    return NULL


def _el_appendchild(interp, this, args, anchor):
    return args[0] if args else UNDEFINED


def make_element(tag: str) -> JSObject:
    el = JSObject("Element")
    el.props["tagName"] = tag.upper()
    el.props["style"] = JSObject("Style")
    el.props["innerHTML"] = ""
    el.props["setAttribute"] = make_native(
        "setAttribute", _el_setattr, (("string", None), None))
    el.props["getAttribute"] = make_native(
        "getAttribute", _el_getattr, (("string",), None))
    el.props["appendChild"] = make_native(
        "appendChild", _el_appendchild, ((), None))
    return el


def _doc_createelement(interp, this, args, anchor):
    return make_element(interp.to_string(args[0]) if args else "div")


def _doc_getelementbyid(interp, this, args, anchor):
    el = make_element("div")
    el.props["id"] = interp.to_string(args[0]) if args else ""
    return el


def _doc_getelementsbytag(interp, this, args, anchor):
    return make_array([make_element(interp.to_string(args[0]) if args else "div")])


def _loc_tostring(interp, this, args, anchor):
    if isinstance(this, JSObject):
        return interp.to_string(this.props.get("href", "about:blank"))
    return "about:blank"


def _date_ms(this):
    if isinstance(this, JSObject) and this.time_ms is not None:
        return this.time_ms
    return FIXED_TIME_MS


def _date_dt(this):
    ms = _date_ms(this)
    try:
        return datetime.datetime.fromtimestamp(
            ms / 1000.0, tz=datetime.timezone.utc)
    except (OverflowError, OSError, ValueError):
        return datetime.datetime.fromtimestamp(
            FIXED_TIME_MS / 1000.0, tz=datetime.timezone.utc)


def _date_field(getter):
    def nat(interp, this, args, anchor):
        return float(getter(_date_dt(this), _date_ms(this)))
    return nat


def _date_settime(interp, this, args, anchor):
    ms = interp.to_number(args[0]) if args else float("nan")
    if isinstance(this, JSObject) and ms == ms:
        this.time_ms = ms
        return ms
    return float("nan")


def _date_tostring(interp, this, args, anchor):
    return _date_dt(this).strftime("%a %b %d %Y %H:%M:%S GMT+0000")


DATE_FIELDS = {
    "getTime": lambda dt, ms: ms,
    "valueOf": lambda dt, ms: ms,
    "getFullYear": lambda dt, ms: dt.year,
    "getUTCFullYear": lambda dt, ms: dt.year,
    "getMonth": lambda dt, ms: dt.month - 1,
    "getUTCMonth": lambda dt, ms: dt.month - 1,
    "getDate": lambda dt, ms: dt.day,
    "getUTCDate": lambda dt, ms: dt.day,
    "getDay": lambda dt, ms: (dt.weekday() + 1) % 7,
    "getUTCDay": lambda dt, ms: (dt.weekday() + 1) % 7,
    "getHours": lambda dt, ms: dt.hour,
    "getUTCHours": lambda dt, ms: dt.hour,
    "getMinutes": lambda dt, ms: dt.minute,
    "getUTCMinutes": lambda dt, ms: dt.minute,
    "getSeconds": lambda dt, ms: dt.second,
    "getUTCSeconds": lambda dt, ms: dt.second,
    "getMilliseconds": lambda dt, ms: int(ms) % 1000,
    "getTimezoneOffset": lambda dt, ms: 0,
}


def install_globals(interp) -> JSObject:
    """Bind the host surface into the interpreter's global object.
    Returns the eval native (callers use it for identity checks)."""
    interp._method_cache = {}
    g = interp.global_obj.props

    g["NaN"] = float("nan")
    g["Infinity"] = float("inf")
    g["undefined"] = UNDEFINED

    eval_obj = make_native("eval", _eval_native, (("string",), None))
    g["eval"] = eval_obj
    g["execScript"] = make_native("execScript", _execscript, (("string",), None))
    g["Function"] = make_native("Function", _function_ctor, ((), "string"))
    g["parseInt"] = make_native("parseInt", _parseint, (("string", "number"), None))
    g["parseFloat"] = make_native("parseFloat", _parsefloat, (("string",), None))
    g["isNaN"] = make_native("isNaN", _isnan, (("number",), None))
    g["isFinite"] = make_native("isFinite", _isfinite, (("number",), None))
    g["escape"] = make_native("escape", _escape, (("string",), None))
    g["unescape"] = make_native("unescape", _unescape, (("string",), None))
    g["decodeURIComponent"] = make_native(
        "decodeURIComponent", _decode_uri_component, (("string",), None))
    g["encodeURIComponent"] = make_native(
        "encodeURIComponent", _encode_uri_component, (("string",), None))
    g["decodeURI"] = make_native("decodeURI", _decode_uri, (("string",), None))
    g["encodeURI"] = make_native("encodeURI", _encode_uri, (("string",), None))

    math_obj = JSObject("Math")
    math_obj.props.update({
        "E": math.e, "PI": math.pi, "LN2": math.log(2), "LN10": math.log(10),
        "LOG2E": 1 / math.log(2), "LOG10E": 1 / math.log(10),
        "SQRT2": math.sqrt(2), "SQRT1_2": math.sqrt(0.5),
    })
    for mname, mfn in (
            ("abs", _math_abs), ("round", _math_round), ("sqrt", _math_sqrt),
            ("log", _math_log), ("pow", _math_pow), ("atan2", _math_atan2),
            ("floor", _math1(math.floor, inf_passes=True)),
            ("ceil", _math1(math.ceil, inf_passes=True)),
            ("exp", _math1(math.exp)), ("sin", _math1(math.sin)),
            ("cos", _math1(math.cos)), ("tan", _math1(math.tan)),
            ("atan", _math1(math.atan, inf_passes=False))):
        math_obj.props[mname] = make_native(mname, mfn, ((), "number"))
    math_obj.props["max"] = make_native("max", _math_max, ((), "number"))
    math_obj.props["min"] = make_native("min", _math_min, ((), "number"))
    math_obj.props["random"] = make_native("random", _math_random, ((), None))
    g["Math"] = math_obj

    string_ctor = make_native("String", _string_ctor, (("string",), None))
    string_ctor.props["fromCharCode"] = make_native(
        "fromCharCode", _string_fromcharcode, ((), "number"))
    g["String"] = string_ctor

    number_ctor = make_native("Number", _number_ctor, (("number",), None))
    number_ctor.props.update({
        "MAX_VALUE": 1.7976931348623157e308, "MIN_VALUE": 5e-324,
        "NaN": float("nan"), "POSITIVE_INFINITY": float("inf"),
        "NEGATIVE_INFINITY": float("-inf"),
    })
    g["Number"] = number_ctor

    g["Boolean"] = make_native("Boolean", _boolean_ctor, (("bool",), None))
    g["Object"] = make_native("Object", _object_ctor, ((), None))
    g["Array"] = make_native("Array", _array_ctor, ((), None))
    g["RegExp"] = make_native("RegExp", _regexp_ctor, (("string", "string"), None))
    for err_name in ("Error", "TypeError", "RangeError", "SyntaxError",
                     "ReferenceError", "EvalError", "URIError"):
        g[err_name] = make_native(err_name, _error_ctor_for(err_name),
                                  (("string",), None))

    date_proto = JSObject("Object")
    for dname, getter in DATE_FIELDS.items():
        date_proto.props[dname] = make_native(dname, _date_field(getter), ((), None))
    date_proto.props["setTime"] = make_native(
        "setTime", _date_settime, (("number",), None))
    date_proto.props["toString"] = make_native(
        "toString", _date_tostring, ((), None))
    date_proto.props["toUTCString"] = make_native(
        "toUTCString", _date_tostring, ((), None))

    def _date_ctor(interp_, this, args, anchor):
        obj = JSObject("Date", date_proto)
        if args and isinstance(args[0], float) and not isinstance(args[0], bool) \
                and args[0] == args[0]:
            obj.time_ms = args[0]
        else:
            obj.time_ms = FIXED_TIME_MS
        return obj

    date_ctor = make_native("Date", _date_ctor, ((), None))
    date_ctor.props["prototype"] = date_proto
    date_ctor.props["now"] = make_native(
        "now", lambda i, t, a, an: FIXED_TIME_MS, ((), None))
    date_ctor.props["parse"] = make_native(
        "parse", lambda i, t, a, an: FIXED_TIME_MS, (("string",), None))
    date_ctor.props["UTC"] = make_native(
        "UTC", lambda i, t, a, an: FIXED_TIME_MS, ((), "number"))
    g["Date"] = date_ctor

    g["setTimeout"] = make_native(
        "setTimeout", _make_timer("setTimeout"), (("function", "number"), None))
    g["setInterval"] = make_native(
        "setInterval", _make_timer("setInterval"), (("function", "number"), None))
    g["clearTimeout"] = make_native(
        "clearTimeout", _cleartimer, (("number",), None))
    g["clearInterval"] = make_native(
        "clearInterval", _cleartimer, (("number",), None))

    g["alert"] = make_native("alert", _alert, (("string",), None))
    g["confirm"] = make_native("confirm", _confirm, (("string",), None))
    g["prompt"] = make_native("prompt", _prompt, (("string", "string"), None))

    g["ActiveXObject"] = make_native(
        "ActiveXObject", _activex_ctor, (("string",), None))

    loc = JSObject("Location")
    loc.props.update({
        "href": "about:blank", "protocol": "about:", "host": "",
        "hostname": "", "pathname": "blank", "search": "", "hash": "",
    })
    loc.props["replace"] = make_native("replace", _noop_native, (("string",), None))
    loc.props["assign"] = make_native("assign", _noop_native, (("string",), None))
    loc.props["reload"] = make_native("reload", _noop_native, ((), None))
    loc.props["toString"] = make_native("toString", _loc_tostring, ((), None))
    g["location"] = loc

    doc = JSObject("HTMLDocument")
    doc.props["write"] = make_native("write", _doc_write, ((), "string"))
    doc.props["writeln"] = make_native("writeln", _doc_writeln, ((), "string"))
    doc.props["createElement"] = make_native(
        "createElement", _doc_createelement, (("string",), None))
    doc.props["getElementById"] = make_native(
        "getElementById", _doc_getelementbyid, (("string",), None))
    doc.props["getElementsByTagName"] = make_native(
        "getElementsByTagName", _doc_getelementsbytag, (("string",), None))
    doc.props["appendChild"] = make_native(
        "appendChild", _el_appendchild, ((), None))
    doc.props["attachEvent"] = make_native(
        "attachEvent", _register_handler, (("string", "function"), None))
    doc.props["addEventListener"] = make_native(
        "addEventListener", _register_handler, (("string", "function", "bool"), None))
    doc.props["cookie"] = ""
    doc.props["referrer"] = ""
    doc.props["title"] = ""
    doc.props["domain"] = ""
    doc.props["URL"] = "about:blank"
    doc.props["location"] = loc
    doc.props["body"] = make_element("body")
    g["document"] = doc
    interp.document = doc

    screen = JSObject("Screen")
    screen.props.update({
        "width": 1024.0, "height": 768.0, "availWidth": 1024.0,
        "availHeight": 768.0, "colorDepth": 32.0,
    })
    g["screen"] = screen

    history = JSObject("History")
    history.props["length"] = 1.0
    history.props["back"] = make_native("back", _noop_native, ((), None))
    history.props["forward"] = make_native("forward", _noop_native, ((), None))
    history.props["go"] = make_native("go", _noop_native, (("number",), None))
    g["history"] = history

    # empty on purpose: cloaking checks against it force both branch arms
    g["navigator"] = JSObject("Navigator")

    g["window"] = interp.global_obj
    g["self"] = interp.global_obj
    g["top"] = interp.global_obj
    g["parent"] = interp.global_obj
    g["attachEvent"] = make_native(
        "attachEvent", _register_handler, (("string", "function"), None))
    g["addEventListener"] = make_native(
        "addEventListener", _register_handler, (("string", "function", "bool"), None))
    g["detachEvent"] = make_native(
        "detachEvent", _noop_native, (("string", "function"), None))
    g["removeEventListener"] = make_native(
        "removeEventListener", _noop_native, (("string", "function"), None))

    return eval_obj


# ---- HTML script extraction ----

_SCRIPT_RE = re.compile(r"<script\b([^>]*)>(.*?)</script\s*>", re.I | re.S)
_OPEN_SCRIPT_RE = re.compile(r"<script\b[^>]*>", re.I)
_SRC_ATTR_RE = re.compile(r"\bsrc\s*=", re.I)
_TYPE_ATTR_RE = re.compile(r"""\btype\s*=\s*["']?([^"'\s>]+)""", re.I)
_HANDLER_RE = re.compile(
    r"""\bon([a-zA-Z]+)\s*=\s*(?:"([^"]*)"|'([^']*)')""", re.I)
_LEAD_GUARD_RE = re.compile(r"^\s*<!--[^\n]*\n?")
_TAIL_GUARD_RE = re.compile(r"\n?\s*(?://\s*)?-->\s*$")


def _clean_script_body(body: str) -> str:
    body = _LEAD_GUARD_RE.sub("", body)
    body = _TAIL_GUARD_RE.sub("", body)
    return body


def extract_scripts(html_text: str, base_name: str) -> list:
    """Pull runnable script units out of markup in document order:
    inline <script> bodies (external src skipped) and on* handler
    attributes outside script regions."""
    found = []
    spans = []
    script_i = 0
    for m in _SCRIPT_RE.finditer(html_text):
        spans.append((m.start(), m.end()))
        attrs = m.group(1) or ""
        if _SRC_ATTR_RE.search(attrs):
            continue
        tm = _TYPE_ATTR_RE.search(attrs)
        if tm is not None:
            t = tm.group(1).lower()
            if "javascript" not in t and "ecmascript" not in t and "jscript" not in t:
                continue
        code = _clean_script_body(m.group(2))
        if code.strip():
            found.append((m.start(), f"{base_name}#script{script_i}", code))
            script_i += 1
    # unterminated trailing script tag: run what's there
    last_end = spans[-1][1] if spans else 0
    om = _OPEN_SCRIPT_RE.search(html_text, last_end)
    if om is not None:
        tail = _clean_script_body(html_text[om.end():])
        if tail.strip():
            spans.append((om.start(), len(html_text)))
            found.append((om.start(), f"{base_name}#script{script_i}", tail))
            script_i += 1

    handler_i = 0
    for m in _HANDLER_RE.finditer(html_text):
        if any(a <= m.start() < b for a, b in spans):
            continue
        code = m.group(2) if m.group(2) is not None else m.group(3)
        code = html_module.unescape(code or "")
        if code.strip():
            evt = m.group(1).lower()
            found.append((m.start(), f"{base_name}#on{evt}{handler_i}", code))
            handler_i += 1

    found.sort(key=lambda t: t[0])
    return [(name, code) for _, name, code in found]
