"""Exact linear algebra over the integers.

Everything here works on plain lists of Python ints, so there is no
overflow anywhere; matrices are small (ranks of the groups involved, or
monomial counts in bounded certificate searches).
"""

from __future__ import annotations

from math import gcd


def identity_matrix(n):
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def copy_matrix(a):
    return [list(row) for row in a]


def mat_mul(a, b):
    rows, inner, cols = len(a), len(b), len(b[0]) if b else 0
    out = [[0] * cols for _ in range(rows)]
    for i in range(rows):
        ai = a[i]
        oi = out[i]
        for t in range(inner):
            x = ai[t]
            if x:
                bt = b[t]
                for j in range(cols):
                    oi[j] += x * bt[j]
    return out


def mat_vec(a, v):
    return [sum(x * y for x, y in zip(row, v)) for row in a]


def det(m):
    """Determinant by fraction-free (Bareiss) elimination."""
    n = len(m)
    if n == 0:
        return 1
    a = copy_matrix(m)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k]:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def invert_unimodular(m):
    """Inverse of an integer matrix with determinant +-1 (adjugate route)."""
    n = len(m)
    d = det(m)
    if d not in (1, -1):
        raise ValueError("matrix is not unimodular (det %d)" % d)
    inv = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            # adjugate entry (i, j) = cofactor of m at (j, i)
            minor = [[m[r][c] for c in range(n) if c != i]
                     for r in range(n) if r != j]
            cof = det(minor)
            if (i + j) % 2:
                cof = -cof
            inv[i][j] = cof * d  # dividing by d = +-1 is multiplying by it
    return inv


def smith_normal_form(m):
    """Return (D, U, V) with U*m*V = D, U and V unimodular, D diagonal with
    a divisibility chain d1 | d2 | ... and nonnegative entries.

    Pivoting is deterministic: the smallest-absolute-value nonzero entry of
    the remaining block, scanned row-major, wins.
    """
    rows = len(m)
    cols = len(m[0]) if rows else 0
    a = copy_matrix(m)
    u = identity_matrix(rows)
    v = identity_matrix(cols)

    def row_swap(i, j):
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]

    def col_swap(i, j):
        for r in a:
            r[i], r[j] = r[j], r[i]
        for r in v:
            r[i], r[j] = r[j], r[i]

    def row_add(i, j, q):
        # row i -= q * row j
        if q:
            a[i] = [x - q * y for x, y in zip(a[i], a[j])]
            u[i] = [x - q * y for x, y in zip(u[i], u[j])]

    def col_add(i, j, q):
        # col i -= q * col j
        if q:
            for r in a:
                r[i] -= q * r[j]
            for r in v:
                r[i] -= q * r[j]

    def row_negate(i):
        a[i] = [-x for x in a[i]]
        u[i] = [-x for x in u[i]]

    def pivot_at(t):
        best = None
        for i in range(t, rows):
            for j in range(t, cols):
                x = a[i][j]
                if x and (best is None or abs(x) < abs(a[best[0]][best[1]])):
                    best = (i, j)
        return best

    def clear_block(t):
        while True:
            piv = pivot_at(t)
            if piv is None:
                return False
            if piv != (t, t):
                if piv[0] != t:
                    row_swap(t, piv[0])
                if piv[1] != t:
                    col_swap(t, piv[1])
            dirty = False
            for i in range(t + 1, rows):
                if a[i][t]:
                    row_add(i, t, a[i][t] // a[t][t])
                    if a[i][t]:
                        dirty = True
            for j in range(t + 1, cols):
                if a[t][j]:
                    col_add(j, t, a[t][j] // a[t][t])
                    if a[t][j]:
                        dirty = True
            if not dirty and all(a[i][t] == 0 for i in range(t + 1, rows)) \
                    and all(a[t][j] == 0 for j in range(t + 1, cols)):
                if a[t][t] < 0:
                    row_negate(t)
                return True

    t = 0
    while t < min(rows, cols):
        if not clear_block(t):
            break
        t += 1

    # Enforce the divisibility chain d_i | d_{i+1}.
    changed = True
    while changed:
        changed = False
        k = min(rows, cols)
        for i in range(k - 1):
            di, dj = a[i][i], a[i + 1][i + 1]
            if di and dj % di != 0:
                # fold d_{i+1} into the (i,i) position and rediagonalize
                col_add(i, i + 1, -1)
                clear_block(i)
                clear_block(i + 1)
                changed = True
    return a, u, v


def diagonal_of(d):
    k = min(len(d), len(d[0]) if d else 0)
    return [d[i][i] for i in range(k)]


def solve_integer(a, b):
    """One integer solution x of a @ x = b, or None if there is none."""
    rows = len(a)
    cols = len(a[0]) if rows else 0
    d, u, v = smith_normal_form(a)
    c = mat_vec(u, b)
    y = [0] * cols
    k = min(rows, cols)
    for i in range(rows):
        if i < k and d[i][i]:
            if c[i] % d[i][i]:
                return None
            y[i] = c[i] // d[i][i]
        elif c[i]:
            return None
    return mat_vec(v, y)


def solve_modular(a, b, modulus):
    """One solution x of a @ x = b (mod modulus), or None.

    modulus = 0 means plain integer solving.  For modulus > 0 the system is
    lifted to a @ x + modulus * y = b over the integers, which is exact for
    composite moduli too.
    """
    if modulus == 0:
        return solve_integer(a, b)
    rows = len(a)
    cols = len(a[0]) if rows else 0
    lifted = [list(a[i]) + [modulus if j == i else 0 for j in range(rows)]
              for i in range(rows)]
    x = solve_integer(lifted, b)
    if x is None:
        return None
    return [xi % modulus for xi in x[:cols]]


def gcd_list(values):
    g = 0
    for x in values:
        g = gcd(g, x)
    return g
