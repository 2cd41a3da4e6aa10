"""Built-in example problems.

The coordinates are pinned; tests and the ``examples`` command rely on them.
"""
import json

from app.errors import TorimultError
from app.models import ProblemDocument
from app.services.problem_parser import parse_problem

GALLERY = {
    # A₁ singularity, L and M the two boundary rays
    'quadric-cone': {
        'lattice_rank': 2,
        'cone_rays': [[1, 0], [1, 2]],
        'divisors': {
            'L': ['1', '0'],
            'M': ['0', '1'],
        },
        'ideals': {
            'maximal': [[0, 1], [1, 0], [2, -1]],
        },
        'pairs': {
            'trivial': [],
            'vertex': [{'coeff': '1', 'body': 'maximal'}],
            'line': [{'coeff': '1', 'body': 'L'}],
        },
        'boundaries': {
            'half': ['1/2', '1/2'],
        },
    },
    # xy = zw; D is not Q-Cartier
    'conifold': {
        'lattice_rank': 3,
        'cone_rays': [[0, 0, 1], [1, 0, 1], [0, 1, 1], [1, 1, 1]],
        'divisors': {
            'D': ['1', '0', '0', '0'],
            'minusD': ['-1', '0', '0', '0'],
        },
        'ideals': {
            'maximal': [[-1, 0, 1], [0, -1, 1], [0, 1, 0], [1, 0, 0]],
        },
        'pairs': {
            'trivial': [],
            'vertex': [{'coeff': '1', 'body': 'maximal'}],
        },
        'boundaries': {
            'half': ['1/2', '1/2', '0', '0'],
        },
    },
    # K_X is not Q-Cartier
    'nqg-cone': {
        'lattice_rank': 3,
        'cone_rays': [[1, 0, 0], [0, 1, 0], [0, 0, 1], [1, 2, -1]],
        'divisors': {
            'canonical': ['-1', '-1', '-1', '-1'],
            'D1': ['1', '0', '0', '0'],
        },
        'ideals': {
            'maximal': [[0, 1, 0], [0, 1, 1], [0, 1, 2], [1, 0, 0], [1, 0, 1]],
        },
        'pairs': {
            'trivial': [],
            'vertex': [{'coeff': '1', 'body': 'maximal'}],
        },
        'boundaries': {
            'half': ['1/2', '1/4', '0', '0'],
        },
    },
    'cusp-plane': {
        'lattice_rank': 2,
        'cone_rays': [[1, 0], [0, 1]],
        'divisors': {},
        'ideals': {
            'cusp-ideal': [[2, 0], [0, 3]],
            'line-ideal': [[1, 0]],
        },
        'pairs': {
            'cusp': [{'coeff': '1', 'body': 'cusp-ideal'}],
            'line': [{'coeff': '1', 'body': 'line-ideal'}],
        },
        'boundaries': {},
    },
}


def gallery_names() -> list[str]:
    return list(GALLERY)


def gallery_text(name: str) -> str:
    """The example as problem-file JSON text."""
    if name not in GALLERY:
        raise TorimultError(
            f"unknown example '{name}' (known: {', '.join(GALLERY)})", code='UNKNOWN_EXAMPLE',
        )
    return json.dumps(GALLERY[name], indent=2) + '\n'


def load_example(name: str) -> ProblemDocument:
    return parse_problem(gallery_text(name), source=f"{name}.json")
