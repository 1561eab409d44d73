"""Integer matrix elimination over arbitrary-precision integers.

Matrices are lists of lists of Python ints.  The sizes here are tiny
(at most a few hundred entries), but intermediate values of integer
elimination can exceed machine words, so everything stays in pure
Python integers.
"""

from __future__ import annotations


def smith_normal_form(matrix):
    """Return the invariant factors of an integer matrix.

    The result is the list of nonzero diagonal entries ``d_1 | d_2 | ...``
    of the Smith normal form, each positive.
    """
    a = [list(map(int, row)) for row in matrix]
    nrows = len(a)
    ncols = len(a[0]) if nrows else 0
    factors = []
    t = 0
    while True:
        # locate a pivot in the untouched lower-right block
        pivot = None
        for i in range(t, nrows):
            for j in range(t, ncols):
                if a[i][j] != 0:
                    if pivot is None or abs(a[i][j]) < abs(a[pivot[0]][pivot[1]]):
                        pivot = (i, j)
        if pivot is None:
            break
        pi, pj = pivot
        a[t], a[pi] = a[pi], a[t]
        for row in a:
            row[t], row[pj] = row[pj], row[t]

        # clear row t and column t; the pivot may need to be re-chosen
        # when a division leaves a smaller remainder.
        while True:
            p = a[t][t]
            done = True
            for i in range(t + 1, nrows):
                if a[i][t] != 0:
                    q = a[i][t] // p
                    for j in range(t, ncols):
                        a[i][j] -= q * a[t][j]
                    if a[i][t] != 0:
                        a[t], a[i] = a[i], a[t]
                        done = False
                        break
            if not done:
                continue
            for j in range(t + 1, ncols):
                if a[t][j] != 0:
                    q = a[t][j] // p
                    for i in range(t, nrows):
                        a[i][j] -= q * a[i][t]
                    if a[t][j] != 0:
                        for i in range(t, nrows):
                            a[i][t], a[i][j] = a[i][j], a[i][t]
                        done = False
                        break
            if done:
                break
        factors.append(abs(a[t][t]))
        t += 1
        if t == nrows or t == ncols:
            break

    # enforce the divisibility chain d_k | d_{k+1}
    for i in range(len(factors)):
        for j in range(i + 1, len(factors)):
            if factors[j] % factors[i] != 0:
                import math

                g = math.gcd(factors[i], factors[j])
                factors[i], factors[j] = g, factors[i] * factors[j] // g
    return factors


def rank(matrix):
    """Rank of an integer matrix (number of nonzero invariant factors)."""
    return len([d for d in smith_normal_form(matrix) if d != 0])


def nullity(matrix):
    """Dimension of the integer kernel (columns minus rank)."""
    nrows = len(matrix)
    ncols = len(matrix[0]) if nrows else 0
    return ncols - rank(matrix)
