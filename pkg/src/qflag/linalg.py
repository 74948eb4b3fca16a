"""Exact linear algebra over Q and over Z/p.

Matrices are lists of lists of Fractions (dense) or lists of ``{col: value}``
dicts (sparse).
"""

from __future__ import annotations

from fractions import Fraction

PRIME = (1 << 61) - 1


def to_fraction_matrix(rows) -> list[list[Fraction]]:
    return [[Fraction(x) for x in r] for r in rows]


def rref(rows):
    """Reduced row echelon form over Q. Returns (matrix, pivot columns)."""
    m = [list(map(Fraction, r)) for r in rows]
    pivots = []
    r = 0
    ncols = len(m[0]) if m else 0
    for c in range(ncols):
        p = next((k for k in range(r, len(m)) if m[k][c] != 0), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for k in range(len(m)):
            if k != r and m[k][c] != 0:
                f = m[k][c]
                m[k] = [a - f * b for a, b in zip(m[k], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m, pivots


def rank(rows) -> int:
    if not rows:
        return 0
    return len(rref(rows)[1])


def det(rows) -> Fraction:
    m = [list(map(Fraction, r)) for r in rows]
    n = len(m)
    out = Fraction(1)
    for c in range(n):
        p = next((k for k in range(c, n) if m[k][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            m[c], m[p] = m[p], m[c]
            out = -out
        out *= m[c][c]
        for k in range(c + 1, n):
            if m[k][c] != 0:
                f = m[k][c] / m[c][c]
                m[k] = [a - f * b for a, b in zip(m[k], m[c])]
    return out


def solve(rows, rhs):
    """One solution of rows * x = rhs over Q, or None when inconsistent."""
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    m, pivots = rref(aug)
    ncols = len(rows[0])
    if ncols in pivots:
        return None
    x = [Fraction(0)] * ncols
    for r, c in enumerate(pivots):
        x[c] = m[r][-1]
    return x


def in_span(vectors, target) -> bool:
    """Whether target is a Q-linear combination of vectors."""
    if not vectors:
        return all(x == 0 for x in target)
    cols = [list(col) for col in zip(*vectors)]
    return solve(cols, list(target)) is not None


def matmul(a, b):
    return [[sum(x * y for x, y in zip(row, col)) for col in zip(*b)] for row in a]


def identity(n):
    return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


# --------------------------------------------------------------------------
# sparse modular elimination

def solve_mod_p(rows: list[dict[int, int]], rhs: list[int], ncols: int, p: int = PRIME):
    """Solve a sparse system modulo p.

    Returns (solution, full_rank) where solution lists residues in
    ``[0, p)`` and full_rank says whether the solution is unique.  Returns
    (None, False) if the system is inconsistent mod p.
    """
    pivot_rows: dict[int, tuple[dict[int, int], int]] = {}
    for row, b in zip(rows, rhs):
        row = {c: v % p for c, v in row.items() if v % p}
        b %= p
        while row:
            c = min(row)
            if c in pivot_rows:
                prow, pb = pivot_rows[c]
                f = row[c]
                for k, v in prow.items():
                    nv = (row.get(k, 0) - f * v) % p
                    if nv:
                        row[k] = nv
                    else:
                        row.pop(k, None)
                b = (b - f * pb) % p
                continue
            inv = pow(row[c], p - 2, p)
            row = {k: v * inv % p for k, v in row.items()}
            pivot_rows[c] = (row, b * inv % p)
            break
        else:
            if b:
                return None, False
    x = [0] * ncols
    for c in sorted(pivot_rows, reverse=True):
        prow, b = pivot_rows[c]
        s = b
        for k, v in prow.items():
            if k != c:
                s = (s - v * x[k]) % p
        x[c] = s
    return x, len(pivot_rows) == ncols


def symmetric_lift(x: int, p: int = PRIME) -> int:
    return x - p if x > p // 2 else x
