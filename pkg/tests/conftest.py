"""Shared fixtures."""
import random

import pytest

from app import create_app
from app.services import affine_toric_variety, gallery_text, load_example


@pytest.fixture
def app():
    app = create_app('testing')
    yield app


@pytest.fixture
def runner(app):
    return app.test_cli_runner()


@pytest.fixture
def rng():
    return random.Random(20240617)


@pytest.fixture
def plane():
    return affine_toric_variety([(1, 0), (0, 1)])


@pytest.fixture
def space():
    return affine_toric_variety([(1, 0, 0), (0, 1, 0), (0, 0, 1)])


@pytest.fixture
def quadric():
    return affine_toric_variety([(1, 0), (1, 2)])


@pytest.fixture
def conifold():
    return affine_toric_variety([(0, 0, 1), (1, 0, 1), (0, 1, 1), (1, 1, 1)])


@pytest.fixture
def nqg():
    return affine_toric_variety([(1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 2, -1)])


@pytest.fixture
def example():
    """Parsed gallery document by name."""
    return load_example


@pytest.fixture
def problem_file(tmp_path):
    """Write a gallery example to disk and return its path as a string."""
    def write(name):
        path = tmp_path / f"{name}.json"
        path.write_text(gallery_text(name), encoding='utf-8')
        return str(path)
    return write
