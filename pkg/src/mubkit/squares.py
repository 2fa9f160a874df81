"""Latin squares over the symbols 1..s.

Only prime sides get a mutually orthogonal family (the affine squares
``k*i + j mod s``). The row and column squares complete it to s+1 pairwise
orthogonal arrangements.
"""

from dataclasses import dataclass
from itertools import combinations

import numpy as np

KINDS = ("latin", "row_square", "column_square")


def is_prime(n):
    n = int(n)
    if n < 2:
        return False
    f = 2
    while f * f <= n:
        if n % f == 0:
            return False
        f += 1
    return True


@dataclass(frozen=True)
class LatinSquare:
    side: int
    cells: tuple
    kind: str = "latin"

    def __post_init__(self):
        s = self.side
        cells = tuple(tuple(int(x) for x in row) for row in self.cells)
        object.__setattr__(self, "cells", cells)
        if s < 2:
            raise ValueError("side must be at least 2")
        if self.kind not in KINDS:
            raise ValueError(f"unknown kind {self.kind!r}")
        if len(cells) != s or any(len(row) != s for row in cells):
            raise ValueError("cells must be an s x s array")
        arr = np.array(cells)
        symbols = set(range(1, s + 1))
        if self.kind == "latin":
            for line in list(arr) + list(arr.T):
                if set(line.tolist()) != symbols or len(line) != s:
                    raise ValueError("rows and columns must be permutations of 1..s")
        elif self.kind == "row_square":
            if not np.array_equal(arr, np.repeat(np.arange(1, s + 1)[:, None], s, axis=1)):
                raise ValueError("row square must have cell(i, j) = i")
        else:
            if not np.array_equal(arr, np.repeat(np.arange(1, s + 1)[None, :], s, axis=0)):
                raise ValueError("column square must have cell(i, j) = j")

    def __getitem__(self, ij):
        i, j = ij
        return self.cells[i - 1][j - 1]

    def cells_with(self, symbol):
        """1-based cells (i, j) holding ``symbol``, ascending by row then column."""
        return [
            (i + 1, j + 1)
            for i in range(self.side)
            for j in range(self.side)
            if self.cells[i][j] == symbol
        ]

    def to_dict(self):
        return {"side": self.side, "kind": self.kind, "cells": [list(r) for r in self.cells]}

    @classmethod
    def from_dict(cls, data):
        return cls(side=int(data["side"]), cells=data["cells"], kind=data.get("kind", "latin"))


def mols_prime(s):
    """The s-1 affine squares with cell(i, j) = (k(i-1) + (j-1) mod s) + 1, k = 1..s-1."""
    if not is_prime(s):
        raise ValueError(f"side {s} is not prime")
    squares = []
    for k in range(1, s):
        cells = [[(k * i + j) % s + 1 for j in range(s)] for i in range(s)]
        squares.append(LatinSquare(s, cells, "latin"))
    return squares


def extra_squares(s):
    if s < 2:
        raise ValueError("side must be at least 2")
    rows = LatinSquare(s, [[i] * s for i in range(1, s + 1)], "row_square")
    cols = LatinSquare(s, [list(range(1, s + 1)) for _ in range(s)], "column_square")
    return rows, cols


def are_orthogonal(a, b):
    """True iff superimposing the squares gives every ordered symbol pair once."""
    if a.side != b.side:
        raise ValueError(f"side mismatch: {a.side} vs {b.side}")
    pairs = {(a.cells[i][j], b.cells[i][j]) for i in range(a.side) for j in range(a.side)}
    return len(pairs) == a.side**2


def orthogonal_family(s):
    """mols_prime(s) followed by the row and column squares."""
    return mols_prime(s) + list(extra_squares(s))


def all_pairwise_orthogonal(squares):
    return all(are_orthogonal(a, b) for a, b in combinations(squares, 2))
