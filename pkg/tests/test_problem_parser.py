"""Tests for problem documents and their builders."""
import json
from fractions import Fraction

import pytest

from app.errors import ProblemParseError, TorimultError
from app.models import MonomialFractionalIdeal, TWeilDivisor
from app.services.gallery import GALLERY, gallery_names, gallery_text
from app.services.problem_parser import (
    build_boundary, build_pair, build_variety, parse_problem, problem_to_dict,
    serialize_problem,
)


def _document(**overrides):
    data = {
        'lattice_rank': 2,
        'cone_rays': [[1, 0], [1, 2]],
        'divisors': {'L': ['1', '0']},
        'ideals': {'maximal': [[0, 1], [1, 0], [2, -1]]},
        'pairs': {'vertex': [{'coeff': '1', 'body': 'maximal'}]},
        'boundaries': {},
    }
    data.update(overrides)
    return json.dumps(data, indent=2)


def _line_of(text, token):
    for number, line in enumerate(text.splitlines(), start=1):
        if token in line:
            return number
    raise AssertionError(f"{token} not in text")


class TestParseProblem:

    @pytest.mark.parametrize('name', gallery_names())
    def test_gallery_examples_parse(self, name):
        doc = parse_problem(gallery_text(name))
        assert problem_to_dict(doc) == GALLERY[name]

    def test_serialize_is_stable(self, example):
        doc = example('quadric-cone')
        text = serialize_problem(doc)
        assert serialize_problem(parse_problem(text)) == text

    def test_rationals_are_exact(self):
        doc = parse_problem(_document(divisors={'L': ['2/4', '-3']}))
        assert doc.divisors['L'] == (Fraction(1, 2), Fraction(-3))

    def test_json_syntax_error_position(self):
        text = '{\n  "lattice_rank": 2,\n  "cone_rays": [[1, 0] [1, 2]]\n}'
        with pytest.raises(ProblemParseError) as exc:
            parse_problem(text)
        assert exc.value.line == 3
        assert str(exc.value).startswith('line 3, column ')

    def test_float_coefficient(self):
        text = _document(divisors={'L': [0.5, '0']})
        with pytest.raises(ProblemParseError) as exc:
            parse_problem(text)
        assert exc.value.line == _line_of(text, '"L"')

    def test_malformed_rational(self):
        with pytest.raises(ProblemParseError):
            parse_problem(_document(divisors={'L': ['1/0', '0']}))

    def test_undefined_body(self):
        text = _document(pairs={'vertex': [{'coeff': '1', 'body': 'nowhere'}]})
        with pytest.raises(ProblemParseError) as exc:
            parse_problem(text)
        assert 'nowhere' in exc.value.message
        assert exc.value.line == _line_of(text, '"nowhere"')

    def test_negative_pair_coefficient(self):
        with pytest.raises(ProblemParseError) as exc:
            parse_problem(_document(pairs={'vertex': [{'coeff': '-1', 'body': 'maximal'}]}))
        assert 'negative' in exc.value.message

    def test_names_are_global(self):
        with pytest.raises(ProblemParseError) as exc:
            parse_problem(_document(boundaries={'L': ['0', '0']}))
        assert "'L'" in exc.value.message

    def test_wrong_vector_length(self):
        text = _document(ideals={'maximal': [[0, 1, 0]]})
        with pytest.raises(ProblemParseError) as exc:
            parse_problem(text)
        assert exc.value.line == _line_of(text, '"maximal"')

    def test_wrong_coefficient_count(self):
        with pytest.raises(ProblemParseError):
            parse_problem(_document(divisors={'L': ['1']}))

    def test_unknown_top_level_key(self):
        text = _document(extra=1)
        with pytest.raises(ProblemParseError) as exc:
            parse_problem(text)
        assert exc.value.line == _line_of(text, '"extra"')

    def test_bad_rank(self):
        with pytest.raises(ProblemParseError):
            parse_problem(_document(lattice_rank=0))

    def test_empty_ideal(self):
        with pytest.raises(ProblemParseError):
            parse_problem(_document(ideals={'maximal': []}))

    def test_top_level_must_be_object(self):
        with pytest.raises(ProblemParseError):
            parse_problem('[1, 2]')


class TestBuilders:

    def test_build_pair(self, example):
        doc = example('quadric-cone')
        X = build_variety(doc)
        P = build_pair(doc, 'vertex', X)
        assert len(P.terms) == 1
        assert isinstance(P.terms[0].body, MonomialFractionalIdeal)
        line = build_pair(doc, 'line', X)
        assert isinstance(line.terms[0].body, TWeilDivisor)
        assert line.terms[0].name == 'L'

    def test_build_boundary(self, example):
        doc = example('quadric-cone')
        boundary = build_boundary(doc, 'half', build_variety(doc))
        assert boundary.slope == (Fraction(1, 2), 0)

    def test_unknown_name(self, example):
        doc = example('quadric-cone')
        with pytest.raises(TorimultError) as exc:
            build_pair(doc, 'missing', build_variety(doc))
        assert exc.value.code == 'UNKNOWN_NAME'

    def test_unknown_example(self):
        with pytest.raises(TorimultError) as exc:
            gallery_text('missing')
        assert exc.value.code == 'UNKNOWN_EXAMPLE'
