import json
from fractions import Fraction

import pytest

from helpers import (
    blowup_p2,
    cone_over_square,
    ex13_r1_q2,
    ex13_r2_q2,
    p2,
    p3,
    to_a1,
)
from toricmld.divisors import divisor
from toricmld.errors import ParseError, ValidationError
from toricmld.fans import fan
from toricmld.serialize import (
    divisor_doc,
    fan_doc,
    jsonable,
    morphism_doc,
    parse_divisor,
    parse_fan,
    parse_input,
    parse_morphism,
    parse_rat,
    rat_str,
)
from toricmld.singularities import MINUS_INFINITY


class TestRat:
    def test_str_forms(self):
        assert rat_str(Fraction(3, 5)) == "3/5"
        assert rat_str(Fraction(8)) == "8"
        assert rat_str(Fraction(-2, 3)) == "-2/3"
        assert rat_str(5) == "5"
        assert rat_str(Fraction(-7)) == "-7"

    def test_parse(self):
        assert parse_rat("3/5") == Fraction(3, 5)
        assert parse_rat("-2") == Fraction(-2)
        assert parse_rat("-4/6") == Fraction(-2, 3)
        assert parse_rat(7) == Fraction(7)

    def test_round_trip(self):
        for x in [Fraction(3, 5), Fraction(0), Fraction(-41, 2048), Fraction(109)]:
            assert parse_rat(rat_str(x)) == x

    def test_decimals_rejected(self):
        for bad in ["0.5", "1e3", "3/5.0", ".5", "1.0", "", "abc", "1/2/3", True, None, 0.5]:
            with pytest.raises(ParseError):
                parse_rat(bad)

    def test_zero_denominator(self):
        with pytest.raises(ParseError):
            parse_rat("1/0")


class TestFanDocs:
    def test_round_trip(self):
        for f in [p2(), blowup_p2(), ex13_r1_q2(), ex13_r2_q2(), p3(), cone_over_square()]:
            assert parse_fan(fan_doc(f)) == f

    def test_canonical_under_permutation(self):
        doc = {
            "rank": 2,
            "rays": [[-1, -1], [1, 0], [0, 1]],
            "max_cones": [[1, 2], [2, 0], [0, 1]],
        }
        assert parse_fan(doc) == p2()

    def test_non_primitive_ray_rejected(self):
        doc = {"rank": 2, "rays": [[2, 4], [0, 1]], "max_cones": [[0, 1]]}
        with pytest.raises(ValidationError) as err:
            parse_fan(doc)
        assert any(code == "NonPrimitiveRay" for code, _ in err.value.violations)

    def test_malformed(self):
        with pytest.raises(ParseError):
            parse_fan({"rank": 2, "rays": [[1, 0]]})
        with pytest.raises(ParseError):
            parse_fan({"rank": 2, "rays": [[1.5, 0]], "max_cones": [[0]]})
        with pytest.raises(ParseError):
            parse_fan({"rank": True, "rays": [], "max_cones": []})
        with pytest.raises(ParseError):
            parse_fan([1, 2, 3])


class TestMorphismDocs:
    def test_round_trip(self):
        for f in [to_a1(ex13_r1_q2()), to_a1(ex13_r2_q2())]:
            assert parse_morphism(morphism_doc(f)) == f

    def test_incompatible_rejected(self):
        doc = morphism_doc(to_a1(ex13_r1_q2()))
        doc["matrix"] = [[0, -1]]  # flips the fiber ray out of the target
        with pytest.raises(ValidationError):
            parse_morphism(doc)

    def test_missing_key(self):
        doc = morphism_doc(to_a1(ex13_r1_q2()))
        del doc["target"]
        with pytest.raises(ParseError):
            parse_morphism(doc)


class TestDivisorDocs:
    def test_round_trip(self):
        f = ex13_r1_q2()
        d = divisor(f, [Fraction(1, 2), Fraction(-3, 7), Fraction(2)])
        assert parse_divisor(divisor_doc(d), f) == d

    def test_length_mismatch(self):
        with pytest.raises(ValidationError) as err:
            parse_divisor({"coeffs": ["1", "2"]}, p2())
        assert any(code == "LengthMismatch" for code, _ in err.value.violations)

    def test_decimal_coefficient_rejected(self):
        with pytest.raises(ParseError):
            parse_divisor({"coeffs": ["0.5", "1", "1"]}, p2())


class TestParseInput:
    def test_dispatch(self):
        assert parse_input(json.dumps(fan_doc(p2()))) == p2()
        m = to_a1(ex13_r1_q2())
        assert parse_input(json.dumps(morphism_doc(m))) == m
        f = p2()
        d = divisor(f, [1, 0, 0])
        assert parse_input(json.dumps(divisor_doc(d)), context=f) == d

    def test_report_unwrap(self):
        report = {"command": "x", "status": "ok", "payload": fan_doc(p2())}
        assert parse_input(json.dumps(report)) == p2()

    def test_divisor_needs_context(self):
        with pytest.raises(ParseError):
            parse_input(json.dumps({"coeffs": ["1"]}))

    def test_bad_json_reports_position(self):
        with pytest.raises(ParseError) as err:
            parse_input('{"rank": 2,,}')
        assert "position" in str(err.value)

    def test_unrecognized(self):
        with pytest.raises(ParseError):
            parse_input('{"foo": 1}')
        with pytest.raises(ParseError):
            parse_input("[1,2]")


class TestJsonable:
    def test_values(self):
        assert jsonable(Fraction(3, 5)) == "3/5"
        assert jsonable(MINUS_INFINITY) == "-Infinity"
        assert jsonable(((1, 2), Fraction(1, 2))) == [[1, 2], "1/2"]
        assert jsonable({"a": Fraction(7)}) == {"a": "7"}
        assert jsonable(None) is None
        assert jsonable(True) is True
        assert jsonable(p2()) == fan_doc(p2())

    def test_rejects_unknown(self):
        with pytest.raises(TypeError):
            jsonable(object())

    def test_deterministic_bytes(self):
        a = json.dumps(jsonable({"fan": fan_doc(p2()), "v": Fraction(1, 3)}))
        b = json.dumps(jsonable({"fan": fan_doc(p2()), "v": Fraction(1, 3)}))
        assert a == b
