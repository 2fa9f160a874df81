import json
from itertools import combinations

import numpy as np
import pytest

from mubkit.serialize import square_from_json, square_to_json
from mubkit.squares import (
    LatinSquare,
    all_pairwise_orthogonal,
    are_orthogonal,
    extra_squares,
    is_prime,
    mols_prime,
)


def pair_counts(a, b):
    """Brute-force oracle: s x s table counting each superimposed symbol pair."""
    s = a.side
    counts = np.zeros((s, s), dtype=int)
    for i in range(s):
        for j in range(s):
            counts[a.cells[i][j] - 1, b.cells[i][j] - 1] += 1
    return counts


def test_mols_s3_first_square_matches_table():
    assert mols_prime(3)[0].cells == ((1, 2, 3), (2, 3, 1), (3, 1, 2))


def test_mols_s2():
    squares = mols_prime(2)
    assert len(squares) == 1
    assert squares[0].cells == ((1, 2), (2, 1))


def test_mols_s5_all_pairs_orthogonal():
    squares = mols_prime(5)
    assert len(squares) == 4
    pairs = list(combinations(squares, 2))
    assert len(pairs) == 6
    for a, b in pairs:
        assert np.all(pair_counts(a, b) == 1)
        assert are_orthogonal(a, b)


@pytest.mark.parametrize("s", [1, 4, 6, 9])
def test_mols_rejects_non_prime(s):
    with pytest.raises(ValueError):
        mols_prime(s)


def test_orthogonality_examples():
    l1, l2 = mols_prime(3)
    assert np.all(pair_counts(l1, l2) == 1)
    assert are_orthogonal(l1, l2)
    assert not are_orthogonal(l1, l1)
    rows, cols = extra_squares(3)
    assert are_orthogonal(rows, cols)


def test_orthogonality_side_mismatch():
    with pytest.raises(ValueError):
        are_orthogonal(mols_prime(3)[0], mols_prime(5)[0])


def test_extra_squares_s3():
    rows, cols = extra_squares(3)
    assert rows.cells == ((1, 1, 1), (2, 2, 2), (3, 3, 3))
    assert cols.cells == ((1, 2, 3), (1, 2, 3), (1, 2, 3))
    assert np.all(pair_counts(rows, mols_prime(3)[0]) == 1)
    assert are_orthogonal(rows, mols_prime(3)[0])


@pytest.mark.parametrize("s", [2, 3, 5, 7, 11, 13])
def test_full_family_pairwise_orthogonal(s):
    family = mols_prime(s) + list(extra_squares(s))
    assert len(family) == s + 1
    assert all_pairwise_orthogonal(family)
    for sq in mols_prime(s):
        # re-validating through the constructor checks the Latin invariant
        LatinSquare(sq.side, sq.cells, "latin")


def test_cells_with_one_per_row():
    sq = mols_prime(3)[0]
    assert sq.cells_with(1) == [(1, 1), (2, 3), (3, 2)]
    for ell in range(1, 4):
        cells = sq.cells_with(ell)
        assert sorted(i for i, _ in cells) == [1, 2, 3]
        assert sorted(j for _, j in cells) == [1, 2, 3]


@pytest.mark.parametrize("cells, kind", [
    ([[1, 2], [1, 2]], "latin"),
    ([[1, 1], [1, 1]], "row_square"),
    ([[1, 2], [2, 1]], "column_square"),
    ([[1, 2, 3], [2, 3, 1]], "latin"),
])
def test_invalid_squares_rejected(cells, kind):
    with pytest.raises(ValueError):
        LatinSquare(len(cells[0]), cells, kind)


def test_square_json_roundtrip():
    sq = mols_prime(5)[2]
    data = json.loads(square_to_json(sq))
    assert list(data) == ["side", "kind", "cells"]
    assert square_from_json(square_to_json(sq)) == sq


def test_is_prime():
    assert [n for n in range(20) if is_prime(n)] == [2, 3, 5, 7, 11, 13, 17, 19]
