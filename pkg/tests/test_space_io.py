import json

import pytest

from src.services.catalog_service import CatalogService
from src.services.complex_service import ComplexService
from src.utils.exceptions import InvalidComplexError, SpaceFileError
from src.utils.space_io import dumps_space, loads_space, read_space, space_to_document, write_space


def test_written_space_reads_back(tmp_path):
    X = CatalogService.lens(1)
    path = tmp_path / "lens1.space"
    write_space(X, path)
    Y = read_space(path)
    assert Y.name == "lens1"
    assert sorted(Y.ids) == sorted(X.ids)
    assert all(dict(Y.terms(c)) == dict(X.terms(c)) for c in X.ids)
    assert ComplexService.validate(Y) == []


def test_document_is_sorted_by_dimension_then_id():
    document = space_to_document(CatalogService.disk_conj())
    keys = [(cell.dim, cell.id) for cell in document.cells]
    assert keys == sorted(keys)


def test_dumps_is_deterministic():
    assert dumps_space(CatalogService.torus_t020()) == dumps_space(CatalogService.torus_t020())


def test_point_file_contents():
    data = json.loads(dumps_space(CatalogService.point()))
    assert data == {"boundary": {}, "cells": [{"dim": 0, "id": "pt", "orbit": "fixed"}]}


def test_malformed_files_are_rejected():
    with pytest.raises(SpaceFileError):
        loads_space('{"cells": [{"id": "x", "dim": 0.5, "orbit": "free"}]}')
    with pytest.raises(SpaceFileError):
        loads_space('{"cells": [{"id": "x", "dim": 0, "orbit": "sideways"}]}')
    with pytest.raises(SpaceFileError):
        loads_space("not json")


def test_invalid_complexes_are_rejected():
    text = json.dumps({
        "cells": [{"id": "v", "dim": 0, "orbit": "fixed"}, {"id": "e", "dim": 2, "orbit": "fixed"}],
        "boundary": {"e": [{"cell": "v", "a": 1}]},
    })
    with pytest.raises(InvalidComplexError):
        loads_space(text)


def test_missing_file(tmp_path):
    with pytest.raises(SpaceFileError):
        read_space(tmp_path / "absent.space")
