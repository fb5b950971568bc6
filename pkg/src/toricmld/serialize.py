"""JSON document formats and exact-rational string conversion.

All rationals travel as the string "p/q" ("p" when the denominator is 1)
with the sign on the numerator.  Decimal notation is rejected everywhere:
accepting it would silently convert exact data to binary floating point.
"""

from __future__ import annotations

import json
import re
from fractions import Fraction

from .divisors import ToricDivisor, divisor
from .errors import ParseError
from .fans import Fan, fan
from .fibration import ToricMorphism, morphism
from .singularities import MINUS_INFINITY

_RAT = re.compile(r"^[+-]?\d+(?:/\d+)?$")


def rat_str(x) -> str:
    return str(Fraction(x))


def parse_rat(s) -> Fraction:
    if isinstance(s, bool):
        raise ParseError(f"expected a rational, got {s!r}")
    if isinstance(s, int):
        return Fraction(s)
    if not isinstance(s, str) or not _RAT.match(s):
        raise ParseError(
            f"expected an exact rational like '3/5' or '-2', got {s!r}"
        )
    try:
        return Fraction(s)
    except ZeroDivisionError as exc:
        raise ParseError(f"zero denominator in {s!r}") from exc


def _int(x, what: str) -> int:
    if isinstance(x, bool) or not isinstance(x, int):
        raise ParseError(f"{what} must be an integer, got {x!r}")
    return x


def _int_rows(obj, what: str):
    if not isinstance(obj, list) or any(not isinstance(row, list) for row in obj):
        raise ParseError(f"{what} must be a list of integer rows")
    return tuple(tuple(_int(x, what) for x in row) for row in obj)


def fan_doc(f: Fan) -> dict:
    return {
        "rank": f.rank,
        "rays": [list(r) for r in f.rays],
        "max_cones": [list(c) for c in f.max_cones],
    }


def parse_fan(obj) -> Fan:
    if not isinstance(obj, dict):
        raise ParseError("a fan document must be a JSON object")
    for key in ("rank", "rays", "max_cones"):
        if key not in obj:
            raise ParseError(f"fan document is missing {key!r}")
    rank = _int(obj["rank"], "rank")
    rays = _int_rows(obj["rays"], "rays")
    max_cones = _int_rows(obj["max_cones"], "max_cones")
    return fan(rank, rays, max_cones)


def morphism_doc(m: ToricMorphism) -> dict:
    return {
        "matrix": [list(r) for r in m.matrix],
        "source": fan_doc(m.source),
        "target": fan_doc(m.target),
    }


def parse_morphism(obj) -> ToricMorphism:
    if not isinstance(obj, dict):
        raise ParseError("a morphism document must be a JSON object")
    for key in ("matrix", "source", "target"):
        if key not in obj:
            raise ParseError(f"morphism document is missing {key!r}")
    matrix = _int_rows(obj["matrix"], "matrix")
    return morphism(matrix, parse_fan(obj["source"]), parse_fan(obj["target"]))


def divisor_doc(d: ToricDivisor) -> dict:
    return {"coeffs": [rat_str(c) for c in d.coeffs]}


def parse_divisor(obj, f: Fan) -> ToricDivisor:
    if not isinstance(obj, dict) or "coeffs" not in obj:
        raise ParseError("a divisor document must be an object with 'coeffs'")
    if not isinstance(obj["coeffs"], list):
        raise ParseError("'coeffs' must be a list of rational strings")
    return divisor(f, [parse_rat(c) for c in obj["coeffs"]])


def parse_input(text: str, context: Fan | None = None):
    """Parse a fan, morphism, or divisor document.

    Accepts a bare document or a full command report, in which case the
    report's payload is read; this lets command outputs pipe into other
    commands.  Divisor documents need the fan they refer to as context.
    """
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON at position {exc.pos}: {exc.msg}") from exc
    if isinstance(obj, dict) and "command" in obj and "payload" in obj:
        obj = obj["payload"]
    if not isinstance(obj, dict):
        raise ParseError("expected a JSON object document")
    if "matrix" in obj:
        return parse_morphism(obj)
    if "rays" in obj:
        return parse_fan(obj)
    if "coeffs" in obj:
        if context is None:
            raise ParseError("a divisor document needs a fan for context")
        return parse_divisor(obj, context)
    raise ParseError("unrecognized document: expected fan, morphism, or divisor keys")


def jsonable(x):
    """Recursively convert payload values to JSON-encodable data."""
    if x is MINUS_INFINITY:
        return "-Infinity"
    if isinstance(x, bool) or x is None:
        return x
    if isinstance(x, Fraction):
        return rat_str(x)
    if isinstance(x, int):
        return x
    if isinstance(x, str):
        return x
    if isinstance(x, dict):
        return {str(k): jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [jsonable(v) for v in x]
    if isinstance(x, Fan):
        return fan_doc(x)
    if isinstance(x, ToricMorphism):
        return morphism_doc(x)
    if isinstance(x, ToricDivisor):
        return divisor_doc(x)
    raise TypeError(f"cannot serialize {type(x).__name__}")
