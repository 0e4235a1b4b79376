"""Conversion of library objects to plain JSON/YAML trees, and the output schema."""

from __future__ import annotations

from fractions import Fraction

from ..exact_arith import HomPoly3, Mat2, ProjFunc, RatFunc, UniPoly, format_rational


def rat(c) -> str:
    return format_rational(Fraction(c))


def uni_poly(p: UniPoly) -> list:
    return [{"exponents": [k], "coeff": rat(c)} for k, c in enumerate(p.coeffs) if c]


def hom_poly(p: HomPoly3) -> list:
    return [{"exponents": list(e), "coeff": rat(c)} for e, c in sorted(p.terms.items(), reverse=True)]


def sparse_poly(p: dict) -> list:
    return [{"exponents": list(e), "coeff": rat(c)} for e, c in sorted(p.items(), reverse=True) if c]


def func(f) -> dict:
    if isinstance(f, RatFunc):
        return {"num": uni_poly(f.num), "den": uni_poly(f.den)}
    if isinstance(f, ProjFunc):
        return {"num": hom_poly(f.num), "den": hom_poly(f.den)}
    raise TypeError(f"cannot serialize {type(f).__name__}")


def matrix(m: Mat2) -> list:
    return [[func(e) for e in row] for row in m.rows()]


def splitting(s) -> dict:
    return {"e": [s.e1, s.e2], "Ax": matrix(s.A_x), "Ay": matrix(s.A_y)}


def line(L) -> dict:
    return {"form": [rat(c) for c in L.form], "P": [rat(c) for c in L.P], "Q": [rat(c) for c in L.Q]}


def open_set(U) -> dict:
    if hasattr(U, "h"):
        return {"h": uni_poly(U.h)}
    return {"index": U.index, "cuts": [hom_poly(c) for c in U.cuts]}


def pair_rep(rep) -> dict:
    labels = rep.labels
    return {
        "charts": [{"label": str(c.label), "open": open_set(c.open)} for c in rep.charts],
        "F": [{"label": str(i), "value": func(rep.F[i])} for i in labels],
        "M": [{"label": str(i), "a": [func(a) for a in rep.M[i]]} for i in labels],
        "transitions": [
            {"i": str(i), "j": str(j), "matrix": matrix(rep.G[i, j])}
            for i in labels for j in labels if i != j
        ],
        "good": rep.is_good,
        "normal": rep.is_normal,
    }


# -- schema -----------------------------------------------------------------------

_DEFS = {
    "rational": {"type": "string", "pattern": r"^-?\d+(/\d+)?$"},
    "poly": {
        "type": "array",
        "items": {
            "type": "object",
            "required": ["exponents", "coeff"],
            "additionalProperties": False,
            "properties": {
                "exponents": {"type": "array", "items": {"type": "integer", "minimum": 0}},
                "coeff": {"$ref": "#/$defs/rational"},
            },
        },
    },
    "func": {
        "type": "object",
        "required": ["num", "den"],
        "additionalProperties": False,
        "properties": {"num": {"$ref": "#/$defs/poly"}, "den": {"$ref": "#/$defs/poly"}},
    },
    "matrix": {
        "type": "array", "minItems": 2, "maxItems": 2,
        "items": {"type": "array", "minItems": 2, "maxItems": 2, "items": {"$ref": "#/$defs/func"}},
    },
    "splitting": {
        "type": "object",
        "required": ["e", "Ax", "Ay"],
        "properties": {
            "e": {"type": "array", "items": {"type": "integer"}, "minItems": 2, "maxItems": 2},
            "Ax": {"$ref": "#/$defs/matrix"},
            "Ay": {"$ref": "#/$defs/matrix"},
        },
    },
    "point": {"type": "array", "items": {"$ref": "#/$defs/rational"}, "minItems": 3, "maxItems": 3},
    "line": {
        "type": "object",
        "required": ["form", "P", "Q"],
        "properties": {"form": {"$ref": "#/$defs/point"}, "P": {"$ref": "#/$defs/point"}, "Q": {"$ref": "#/$defs/point"}},
    },
    "pair": {
        "type": "object",
        "required": ["charts", "F", "M", "transitions", "good", "normal"],
        "properties": {
            "charts": {"type": "array", "items": {"type": "object", "required": ["label", "open"]}},
            "F": {"type": "array", "items": {
                "type": "object", "required": ["label", "value"],
                "properties": {"label": {"type": "string"}, "value": {"$ref": "#/$defs/func"}}}},
            "M": {"type": "array", "items": {
                "type": "object", "required": ["label", "a"],
                "properties": {"a": {"type": "array", "items": {"$ref": "#/$defs/func"}, "minItems": 3, "maxItems": 3}}}},
            "transitions": {"type": "array", "items": {
                "type": "object", "required": ["i", "j", "matrix"],
                "properties": {"matrix": {"$ref": "#/$defs/matrix"}}}},
            "good": {"type": "boolean"},
            "normal": {"type": "boolean"},
        },
    },
}

_RESULTS = {
    "split-p1": {"$ref": "#/$defs/splitting"},
    "trivialize-a1": {
        "type": "object", "required": ["frames"],
        "properties": {"frames": {"type": "array", "items": {"$ref": "#/$defs/matrix"}}},
    },
    "pushforward": {
        "type": "object", "required": ["n", "representation"],
        "properties": {"n": {"type": "array", "items": {"type": "integer"}}, "representation": {"$ref": "#/$defs/pair"}},
    },
    "restrict-line": {
        "type": "object",
        "required": ["line", "tangent", "n", "t_side", "y_side", "route", "transition", "splitting"],
        "properties": {
            "line": {"$ref": "#/$defs/line"},
            "tangent": {"type": ["boolean", "null"]},
            "n": {"type": "array", "items": {"type": "integer"}},
            "t_side": {"$ref": "#/$defs/pair"},
            "y_side": {"$ref": "#/$defs/pair"},
            "route": {"enum": ["two-chart", "affine-trivialization"]},
            "transition": {"$ref": "#/$defs/matrix"},
            "splitting": {"$ref": "#/$defs/splitting"},
        },
    },
    "jumping-scan": {
        "type": "object", "required": ["n", "mode", "rows"],
        "properties": {
            "n": {"type": "integer"},
            "mode": {"type": "array", "items": {"type": "integer"}},
            "rows": {"type": "array", "items": {
                "type": "object", "required": ["line", "e", "tangent", "jumping"],
                "properties": {
                    "line": {"$ref": "#/$defs/line"},
                    "e": {"type": "array", "items": {"type": "integer"}, "minItems": 2, "maxItems": 2},
                    "tangent": {"type": "boolean"},
                    "jumping": {"type": "boolean"},
                }}},
        },
    },
    "sections": {
        "type": "object", "required": ["bidegree", "degree_bound", "dimension", "saturated", "basis"],
        "properties": {
            "bidegree": {"type": "array", "items": {"type": "integer"}},
            "degree_bound": {"type": "integer"},
            "dimension": {"type": "integer", "minimum": 0},
            "saturated": {"type": "boolean"},
            "variables": {"type": "array", "items": {"type": "string"}},
            "basis": {"type": "array", "items": {
                "type": "object", "required": ["s1", "s2"],
                "properties": {"s1": {"$ref": "#/$defs/poly"}, "s2": {"$ref": "#/$defs/poly"}}}},
        },
    },
    "branch-decompose": {
        "oneOf": [
            {"const": "none"},
            {"type": "object", "required": ["a0", "a1"],
             "properties": {"a0": {"$ref": "#/$defs/poly"}, "a1": {"$ref": "#/$defs/poly"}}},
        ],
    },
    "validate": {
        "type": "object", "required": ["kind", "ok", "failures"],
        "properties": {
            "kind": {"enum": ["pair", "cocycle", "p1-transition"]},
            "ok": {"type": "boolean"},
            "failures": {"type": "array", "items": {"type": "string"}},
        },
    },
}


def output_schema(command: str) -> dict:
    return {
        "$schema": "https://json-schema.org/draft/2020-12/schema",
        "type": "object",
        "required": ["command", "result"],
        "additionalProperties": False,
        "properties": {"command": {"const": command}, "result": _RESULTS[command]},
        "$defs": _DEFS,
    }


COMMANDS = tuple(_RESULTS)
