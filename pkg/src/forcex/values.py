"""Runtime value model: primitives, objects, and faked placeholder cells.

A faked value is a mutable heap cell. Retyping writes the concrete
replacement into the cell, so every alias created before the retype
observes it; once concrete, a cell never reverts (reads go through
deref and the rules only ever see still-faked cells).
"""
from __future__ import annotations

import enum
from dataclasses import dataclass

from .jsast import SourceAnchor, js_num_str


class TypeTag(enum.Enum):
    UNDEFINED = "undefined"
    NULL = "null"
    BOOL = "bool"
    NUMBER = "number"
    STRING = "string"
    OBJECT = "object"
    FUNCTION = "function"
    FAKED_OBJECT = "faked_object"
    FAKED_FUNCTION = "faked_function"


class _Undefined:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "undefined"


class _Null:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "null"


UNDEFINED = _Undefined()
NULL = _Null()

FAKED_ORIGINS = ("ER_1_lookup", "ER_2_null_init", "FFun_return", "array_element")


@dataclass(frozen=True)
class FakedProvenance:
    name: str
    origin: str
    birth_anchor: SourceAnchor | None

    def __post_init__(self):
        if self.origin not in FAKED_ORIGINS:
            raise ValueError(f"unknown faked origin {self.origin!r}")


_UNSET = object()


class FakedValue:
    """Placeholder for a value the sample needed but never defined."""

    __slots__ = ("provenance", "callable_faked", "props", "_concrete")

    def __init__(self, provenance: FakedProvenance):
        self.provenance = provenance
        self.callable_faked = False  # True once used in call/new position
        self.props: dict = {}
        self._concrete = _UNSET

    @property
    def is_faked(self) -> bool:
        return self._concrete is _UNSET

    @property
    def concrete(self):
        return None if self._concrete is _UNSET else self._concrete

    def retype_to(self, value) -> None:
        # monotone: first concrete value wins, later calls are no-ops
        if self._concrete is _UNSET:
            self._concrete = value

    def become_callable(self) -> None:
        self.callable_faked = True

    @property
    def sentinel(self) -> str:
        return self.provenance.name or ""

    def __repr__(self):
        if not self.is_faked:
            return f"<faked {self.provenance.name!r} -> {self._concrete!r}>"
        kind = "FakedFunction" if self.callable_faked else "FakedObject"
        return f"<{kind} {self.provenance.name!r}>"


def make_faked(name: str, origin: str, anchor: SourceAnchor | None) -> FakedValue:
    return FakedValue(FakedProvenance(name, origin, anchor))


def deref(value):
    """Resolve a possibly-faked value to what it currently stands for."""
    while isinstance(value, FakedValue) and not value.is_faked:
        value = value._concrete
    return value


class JSObject:
    """Objects, arrays, functions, and host natives share one shape."""

    __slots__ = (
        "props", "class_name", "proto", "elements", "faked_array",
        "params", "body", "scope", "native", "signature", "name",
        "regex", "time_ms",
    )

    def __init__(self, class_name: str = "Object", proto: "JSObject | None" = None):
        self.props: dict = {}
        self.class_name = class_name
        self.proto = proto
        self.elements: list | None = None
        self.faked_array = False
        self.params: list | None = None
        self.body: list | None = None
        self.scope = None
        self.native = None
        self.signature = None
        self.name = ""
        self.regex: tuple | None = None
        self.time_ms: float | None = None

    @property
    def is_callable(self) -> bool:
        return self.native is not None or self.body is not None

    @property
    def is_array(self) -> bool:
        return self.elements is not None

    def __repr__(self):
        if self.is_callable:
            return f"<function {self.name or '(anonymous)'}>"
        if self.is_array:
            return f"<array len={len(self.elements)}>"
        return f"<{self.class_name.lower()}>"


def make_array(elements: list | None = None) -> JSObject:
    obj = JSObject("Array")
    obj.elements = elements if elements is not None else []
    return obj


def make_function(name, params, body, scope) -> JSObject:
    fn = JSObject("Function")
    fn.name = name or ""
    fn.params = params
    fn.body = body
    fn.scope = scope
    fn.props["prototype"] = JSObject("Object")
    return fn


def make_native(name, fn, signature=None) -> JSObject:
    obj = JSObject("Function")
    obj.name = name
    obj.native = fn
    obj.signature = signature
    return obj


def type_tag(value) -> TypeTag:
    value = deref(value)
    if value is UNDEFINED:
        return TypeTag.UNDEFINED
    if value is NULL:
        return TypeTag.NULL
    if isinstance(value, bool):
        return TypeTag.BOOL
    if isinstance(value, float):
        return TypeTag.NUMBER
    if isinstance(value, str):
        return TypeTag.STRING
    if isinstance(value, FakedValue):
        return TypeTag.FAKED_FUNCTION if value.callable_faked else TypeTag.FAKED_OBJECT
    if isinstance(value, JSObject):
        return TypeTag.FUNCTION if value.is_callable else TypeTag.OBJECT
    raise TypeError(f"not a runtime value: {value!r}")


def truthy(value) -> bool:
    value = deref(value)
    if value is UNDEFINED or value is NULL:
        return False
    if isinstance(value, bool):
        return value
    if isinstance(value, float):
        return value == value and value != 0.0
    if isinstance(value, str):
        return value != ""
    return True  # objects and still-faked cells


def tag_name(value) -> str:
    """Short human tag used in trace rows and reports."""
    t = type_tag(value)
    if t is TypeTag.FAKED_OBJECT:
        return "FakedObject"
    if t is TypeTag.FAKED_FUNCTION:
        return "FakedFunction"
    if t is TypeTag.OBJECT:
        v = deref(value)
        if isinstance(v, JSObject) and v.is_array:
            return "Array"
        return "Object"
    return t.value.capitalize()


__all__ = [
    "TypeTag", "UNDEFINED", "NULL", "FakedProvenance", "FakedValue",
    "JSObject", "make_faked", "make_array", "make_function", "make_native",
    "deref", "type_tag", "truthy", "tag_name", "js_num_str", "FAKED_ORIGINS",
]
