import json

import pytest

from positroids import BoundedAffinePermutation
from positroids import diagram


@pytest.fixture
def perm_a():
    """The running rank-3 example on 8 elements."""
    return BoundedAffinePermutation.from_window([3, 4, 8, 7, 6, 9, 10, 13])


@pytest.fixture
def family_a(perm_a):
    return diagram.ranked_essential_family(perm_a)


@pytest.fixture
def bonin_perm():
    """Parallel connection of four rank-2 triangles, on 9 elements."""
    return BoundedAffinePermutation.from_window([3, 10, 8, 6, 13, 11, 9, 16, 14])


@pytest.fixture
def write_json(tmp_path):
    def write(name, obj):
        path = tmp_path / name
        path.write_text(json.dumps(obj))
        return str(path)

    return write
