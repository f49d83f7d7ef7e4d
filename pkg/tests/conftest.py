import json

import pytest

from dimres import witnesses


@pytest.fixture
def m1():
    return witnesses.m1()


@pytest.fixture
def m2():
    return witnesses.m2()


@pytest.fixture
def m3():
    return witnesses.m3()


@pytest.fixture
def write_model(tmp_path):
    """Write a model document to a temporary JSON file and return its path."""
    def write(doc, name="model.json"):
        path = tmp_path / name
        path.write_text(json.dumps(doc))
        return str(path)
    return write
