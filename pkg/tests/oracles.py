"""Independent brute-force oracles used only by tests.

These deliberately avoid the library's SNF machinery so that agreement
with the deciders is meaningful.
"""

from itertools import product as iter_product
from math import gcd


def det_mod(rows, n):
    """Determinant by cofactor expansion, reduced mod n at the end."""

    def det(mat):
        size = len(mat)
        if size == 0:
            return 1
        if size == 1:
            return mat[0][0]
        total = 0
        for j in range(size):
            if mat[0][j]:
                minor = [row[:j] + row[j + 1:] for row in mat[1:]]
                term = mat[0][j] * det(minor)
                total += -term if j % 2 else term
        return total

    return det(rows) % n


def abelian_brute_force(matrix_rows, n, rank):
    """Is the k x r matrix extendable to an invertible r x r matrix mod n?

    Exhaustive search over all completions with entries mod n; n >= 2.
    """
    k = len(matrix_rows)
    assert n >= 2 and k <= rank
    units = {x for x in range(n) if gcd(x, n) == 1}
    rows = [list(r) for r in matrix_rows]
    if k == rank:
        return det_mod(rows, n) in units
    for extra in iter_product(iter_product(range(n), repeat=rank),
                              repeat=rank - k):
        candidate = rows + [list(r) for r in extra]
        if det_mod(candidate, n) in units:
            return True
    return False
