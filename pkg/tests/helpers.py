"""Shared test oracles, independent of the library's elimination path."""

import itertools


def det_oracle(field, mat):
    """Determinant by permutation expansion."""
    n = mat.nrows
    assert mat.ncols == n
    total = 0
    for perm in itertools.permutations(range(n)):
        inversions = sum(
            1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j]
        )
        term = 1
        for i in range(n):
            term = field.mul(term, mat.at(i, perm[i]))
        if inversions % 2:
            term = field.neg(term)
        total = field.add(total, term)
    return total
