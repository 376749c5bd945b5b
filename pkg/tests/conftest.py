import json
import random
from fractions import Fraction

import pytest

from signject.ratmat import RationalMatrix, rank


def random_matrix(rng, rows, cols, lo=-5, hi=5):
    return RationalMatrix(
        [[Fraction(rng.randint(lo, hi)) for _ in range(cols)] for _ in range(rows)],
        rows,
        cols,
    )


def random_full_rank(rng, rows, cols, lo=-5, hi=5, tries=200):
    """rows <= cols assumed; resample until the row rank is full."""
    for _ in range(tries):
        M = random_matrix(rng, rows, cols, lo, hi)
        if rank(M) == min(rows, cols):
            return M
    raise RuntimeError("could not draw a full-rank matrix")


def write_matrix(path, M: RationalMatrix):
    path.write_text(json.dumps(M.to_json_dict()))
    return str(path)


@pytest.fixture
def rng():
    return random.Random(20240824)
