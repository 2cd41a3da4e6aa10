"""Problem document parser.

Reads the JSON problem format:

    {
      "lattice_rank": 2,
      "cone_rays": [[1, 0], [1, 2]],
      "divisors": {"L": ["1", "0"]},
      "ideals": {"maximal": [[0, 1], [1, 0], [2, -1]]},
      "pairs": {"vertex": [{"coeff": "1", "body": "maximal"}]},
      "boundaries": {"half": ["1/2", "1/2"]}
    }

Vectors are integer arrays, rationals are strings ``p`` or ``p/q``. Every
error is reported with the line and column of the offending token.
"""
import json
import logging
from fractions import Fraction
from typing import Optional

from app.errors import ProblemParseError, TorimultError
from app.models import (
    AffineToricVariety, BoundarySpec, MonomialFractionalIdeal, PairSpec,
    PairTerm, ProblemDocument, TWeilDivisor,
)
from app.services.divisors import make_boundary
from app.services.toric import affine_toric_variety
from app.utils import format_rational, parse_rational

logger = logging.getLogger(__name__)

TOP_LEVEL_KEYS = ('lattice_rank', 'cone_rays', 'divisors', 'ideals', 'pairs', 'boundaries')
NAMED_SECTIONS = ('divisors', 'ideals', 'pairs', 'boundaries')


class _Locator:
    """Maps JSON paths back to positions in the raw text."""

    def __init__(self, text: str):
        self.text = text

    def _position(self, offset: int) -> tuple[int, int]:
        line = self.text.count('\n', 0, offset) + 1
        column = offset - (self.text.rfind('\n', 0, offset) + 1) + 1
        return line, column

    def find(self, *keys: str) -> tuple[int, int]:
        """Position of the last key found when searching the keys in order."""
        offset = 0
        found = None
        for key in keys:
            hit = self.text.find(json.dumps(key), offset)
            if hit < 0:
                break
            found = hit
            offset = hit + 1
        if found is None:
            return 1, 1
        return self._position(found)

    def error(self, message: str, *keys: str) -> ProblemParseError:
        line, column = self.find(*keys)
        return ProblemParseError(message, line=line, column=column)


def _parse_vector(value, rank: int, locate: _Locator, *keys: str) -> tuple[int, ...]:
    if not isinstance(value, list) or len(value) != rank:
        raise locate.error(f"expected an integer vector of length {rank}", *keys)
    for entry in value:
        if isinstance(entry, bool) or not isinstance(entry, int):
            raise locate.error(f"vector entries must be integers, got {entry!r}", *keys)
    return tuple(value)


def _parse_rationals(value, length: int, locate: _Locator, *keys: str) -> tuple[Fraction, ...]:
    if not isinstance(value, list) or len(value) != length:
        raise locate.error(f"expected {length} rational coefficients", *keys)
    result = []
    for entry in value:
        if not isinstance(entry, str):
            raise locate.error(f"rationals must be strings like \"p/q\", got {entry!r}", *keys)
        try:
            result.append(parse_rational(entry))
        except ValueError as e:
            raise locate.error(str(e), *keys) from e
    return tuple(result)


def _section(data: dict, key: str, locate: _Locator) -> dict:
    value = data.get(key, {})
    if not isinstance(value, dict):
        raise locate.error(f"'{key}' must be an object", key)
    return value


def parse_problem(text: str, source: Optional[str] = None) -> ProblemDocument:
    """
    Parse and validate a problem document.

    Args:
        text: Raw JSON text
        source: Optional file name, kept on the document

    Returns:
        ProblemDocument

    Raises:
        ProblemParseError: On malformed JSON or any violated document rule
    """
    locate = _Locator(text)
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ProblemParseError(e.msg, line=e.lineno, column=e.colno) from e

    if not isinstance(data, dict):
        raise ProblemParseError('top level must be an object')
    for key in data:
        if key not in TOP_LEVEL_KEYS:
            raise locate.error(f"unknown key '{key}'", key)

    rank = data.get('lattice_rank')
    if isinstance(rank, bool) or not isinstance(rank, int) or rank < 1:
        raise locate.error("'lattice_rank' must be a positive integer", 'lattice_rank')

    raw_rays = data.get('cone_rays')
    if not isinstance(raw_rays, list) or not raw_rays:
        raise locate.error("'cone_rays' must be a nonempty list", 'cone_rays')
    rays = [_parse_vector(r, rank, locate, 'cone_rays') for r in raw_rays]

    seen = {}
    for section in NAMED_SECTIONS:
        for name in _section(data, section, locate):
            if name in seen:
                raise locate.error(f"name '{name}' is used in both '{seen[name]}' and '{section}'", section, name)
            seen[name] = section

    divisors = {
        name: _parse_rationals(value, len(rays), locate, 'divisors', name)
        for name, value in _section(data, 'divisors', locate).items()
    }
    boundaries = {
        name: _parse_rationals(value, len(rays), locate, 'boundaries', name)
        for name, value in _section(data, 'boundaries', locate).items()
    }

    ideals = {}
    for name, value in _section(data, 'ideals', locate).items():
        if not isinstance(value, list) or not value:
            raise locate.error(f"ideal '{name}' needs at least one generator", 'ideals', name)
        ideals[name] = tuple(_parse_vector(g, rank, locate, 'ideals', name) for g in value)

    pairs = {}
    for name, value in _section(data, 'pairs', locate).items():
        if not isinstance(value, list):
            raise locate.error(f"pair '{name}' must be a list of terms", 'pairs', name)
        terms = []
        for term in value:
            if not isinstance(term, dict) or set(term) != {'coeff', 'body'}:
                raise locate.error(f"pair '{name}' terms need exactly 'coeff' and 'body'", 'pairs', name)
            (coeff,) = _parse_rationals([term['coeff']], 1, locate, 'pairs', name)
            if coeff < 0:
                raise locate.error(f"pair '{name}' has a negative coefficient", 'pairs', name)
            body = term['body']
            if not isinstance(body, str) or (body not in divisors and body not in ideals):
                raise locate.error(f"pair '{name}' refers to undefined body '{body}'", 'pairs', name, body)
            terms.append((coeff, body))
        pairs[name] = tuple(terms)

    logger.debug(
        "parsed problem: rank %d, %d rays, %d divisors, %d ideals, %d pairs, %d boundaries",
        rank, len(rays), len(divisors), len(ideals), len(pairs), len(boundaries),
    )
    return ProblemDocument(
        lattice_rank=rank,
        cone_rays=rays,
        divisors=divisors,
        ideals=ideals,
        pairs=pairs,
        boundaries=boundaries,
        source=source,
    )


def problem_to_dict(doc: ProblemDocument) -> dict:
    """Canonical JSON-ready form: names sorted, rationals in lowest terms."""
    return {
        'lattice_rank': doc.lattice_rank,
        'cone_rays': [list(r) for r in doc.cone_rays],
        'divisors': {n: [format_rational(c) for c in doc.divisors[n]] for n in sorted(doc.divisors)},
        'ideals': {n: [list(g) for g in doc.ideals[n]] for n in sorted(doc.ideals)},
        'pairs': {
            n: [{'coeff': format_rational(c), 'body': b} for c, b in doc.pairs[n]]
            for n in sorted(doc.pairs)
        },
        'boundaries': {n: [format_rational(c) for c in doc.boundaries[n]] for n in sorted(doc.boundaries)},
    }


def serialize_problem(doc: ProblemDocument) -> str:
    return json.dumps(problem_to_dict(doc), indent=2, ensure_ascii=False) + '\n'


# ---------------------------------------------------------------------------
# Builders
# ---------------------------------------------------------------------------

def _lookup(doc: ProblemDocument, section: str, name: str):
    table = getattr(doc, section)
    if name not in table:
        known = ', '.join(sorted(table)) or 'none'
        raise TorimultError(f"no {section[:-1]} named '{name}' (known: {known})", code='UNKNOWN_NAME')
    return table[name]


def build_variety(doc: ProblemDocument) -> AffineToricVariety:
    return affine_toric_variety(doc.cone_rays)


def build_divisor(doc: ProblemDocument, name: str, X: AffineToricVariety) -> TWeilDivisor:
    return TWeilDivisor.of(X.rays, _lookup(doc, 'divisors', name))


def build_ideal(doc: ProblemDocument, name: str, X: AffineToricVariety) -> MonomialFractionalIdeal:
    return MonomialFractionalIdeal.of(_lookup(doc, 'ideals', name), X)


def build_body(doc: ProblemDocument, name: str, X: AffineToricVariety):
    if name in doc.divisors:
        return build_divisor(doc, name, X)
    return build_ideal(doc, name, X)


def build_pair(doc: ProblemDocument, name: str, X: AffineToricVariety) -> PairSpec:
    terms = _lookup(doc, 'pairs', name)
    return PairSpec.of(X, [PairTerm(coeff, build_body(doc, body, X), body) for coeff, body in terms])


def build_boundary(doc: ProblemDocument, name: str, X: AffineToricVariety) -> BoundarySpec:
    return make_boundary(X, _lookup(doc, 'boundaries', name))
