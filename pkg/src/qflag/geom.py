"""Flags as exact rational matrices.

A flag is the column-span filtration of an invertible matrix.  Everything
here is computed with ``fractions.Fraction``.

>>> M = psi_plus(2, QMatrix.identity(3))
>>> [[int(v) for v in row] for row in M.rows]
[[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]]
>>> w, R = flag_canonical_form(M)
>>> str(w)
'1324'
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations

from .forest import (
    BnForest,
    RMINUS,
    RPLUS,
    Node,
    canonical_word,
    fixed_set,
)
from .linalg import det, rank, solve
from .permnc import (
    Permutation,
    inversions,
    is_noncrossing,
    kreweras_leq,
    absolute_length,
    noncrossing_inversions,
)

__all__ = [
    "QMatrix",
    "STAR",
    "CellPattern",
    "psi",
    "psi_minus",
    "psi_plus",
    "g_insert",
    "g_prime_insert",
    "flag_canonical_form",
    "plucker",
    "plucker_vector",
    "plucker_support",
    "sample_orbit_point",
    "sample_generic_point",
    "GenericityError",
    "in_qfl",
    "nc_cell_pattern",
    "cell_pattern",
    "cell_membership",
    "chart_weights",
    "related_i",
    "random_step",
    "cone_is_simplicial",
    "moment_vertices",
    "polypositroid_facets",
    "Inequality",
    "skeleton_edges",
    "is_root_direction",
    "realized_vertex_sets",
    "random_generic_flag",
    "cell_point",
    "chart_plucker",
    "chart_degree",
    "expected_chart_degree",
]

PARAMETER_POOL = tuple(Fraction(v) for v in (1, -1, 2, -2, 3, -3, 5, -5)) + (
    Fraction(1, 2), Fraction(-1, 2))


@dataclass(frozen=True)
class QMatrix:
    rows: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        rows = tuple(tuple(Fraction(v) for v in r) for r in self.rows)
        if any(len(r) != len(rows) for r in rows):
            raise ValueError("matrix must be square")
        object.__setattr__(self, "rows", rows)

    @property
    def n(self) -> int:
        return len(self.rows)

    @classmethod
    def identity(cls, n: int) -> "QMatrix":
        return cls(tuple(tuple(int(i == j) for j in range(n)) for i in range(n)))

    @classmethod
    def permutation(cls, w: Permutation) -> "QMatrix":
        """Column i is e_{w(i)}."""
        return cls(tuple(tuple(int(w(j + 1) == i + 1) for j in range(w.n)) for i in range(w.n)))

    def entry(self, r: int, c: int) -> Fraction:
        """1-based access."""
        return self.rows[r - 1][c - 1]

    def columns(self, k: int) -> list[list[Fraction]]:
        return [[row[c] for row in self.rows] for c in range(k)]

    def det(self) -> Fraction:
        return det(self.rows) if self.n else Fraction(1)

    def __matmul__(self, other: "QMatrix") -> "QMatrix":
        cols = list(zip(*other.rows))
        return QMatrix(tuple(tuple(sum(a * b for a, b in zip(row, col)) for col in cols)
                             for row in self.rows))

    def to_json(self):
        return [[str(v) for v in r] for r in self.rows]

    @classmethod
    def from_json(cls, data) -> "QMatrix":
        return cls(tuple(tuple(Fraction(v) for v in r) for r in data))


# --------------------------------------------------------------------------
# building maps

def psi(i: int, j: int, M: QMatrix) -> QMatrix:
    """Insert row i and column j meeting in a single 1."""
    m = M.n + 1
    if not (1 <= i <= m and 1 <= j <= m):
        raise ValueError("index out of range")
    out = []
    for k in range(1, m + 1):
        row = []
        for l in range(1, m + 1):
            if k == i and l == j:
                row.append(Fraction(1))
            elif k == i or l == j:
                row.append(Fraction(0))
            else:
                row.append(M.entry(k - (k > i), l - (l > j)))
        out.append(tuple(row))
    return QMatrix(tuple(out))


def psi_minus(i: int, M: QMatrix) -> QMatrix:
    return psi(i, i, M)


def psi_plus(i: int, M: QMatrix) -> QMatrix:
    return psi(i, i + 1, M)


def _with_entry(M: QMatrix, r: int, c: int, value) -> QMatrix:
    rows = [list(row) for row in M.rows]
    rows[r - 1][c - 1] = Fraction(value)
    return QMatrix(tuple(tuple(row) for row in rows))


def g_insert(i: int, M: QMatrix, c) -> QMatrix:
    """psi_plus(i, M) with the (i, i) entry set to the nonzero value c."""
    if Fraction(c) == 0:
        raise ValueError("parameter must be nonzero")
    return _with_entry(psi_plus(i, M), i, i, c)


def g_prime_insert(i: int, M: QMatrix, c) -> QMatrix:
    """For M whose column i is e_j with j < i: psi_minus(i, M) with entry
    (j, i) set to c."""
    if Fraction(c) == 0:
        raise ValueError("parameter must be nonzero")
    col = [M.entry(r, i) for r in range(1, M.n + 1)]
    ones = [r for r, v in enumerate(col, 1) if v != 0]
    if len(ones) != 1 or col[ones[0] - 1] != 1 or ones[0] >= i:
        raise ValueError(f"column {i} is not a basis vector e_j with j < {i}")
    return _with_entry(psi_minus(i, M), ones[0], i, c)


# --------------------------------------------------------------------------
# canonical forms and Plücker coordinates

def flag_canonical_form(M: QMatrix) -> tuple[Permutation, QMatrix]:
    """The representative of M B in the cell pattern of its Bruhat cell.

    Column by column: clear the rows already holding a pivot, then take the
    lowest remaining nonzero entry as the pivot and scale it to 1."""
    n = M.n
    cols = [[M.rows[r][c] for r in range(n)] for c in range(n)]
    pivot_row: list[int] = []
    for c in range(n):
        col = cols[c]
        for k, r in enumerate(pivot_row):
            if col[r] != 0:
                f = col[r]
                col = [a - f * b for a, b in zip(col, cols[k])]
        free = [r for r in range(n) if r not in pivot_row and col[r] != 0]
        if not free:
            raise ValueError("singular matrix")
        r = max(free)
        inv = 1 / col[r]
        cols[c] = [a * inv for a in col]
        pivot_row.append(r)
    w = Permutation(tuple(r + 1 for r in pivot_row))
    R = QMatrix(tuple(tuple(cols[c][r] for c in range(n)) for r in range(n)))
    return w, R


def plucker(M: QMatrix, w: Permutation) -> Fraction:
    """Product over k < n of the minor on rows w(1..k) and columns 1..k."""
    out = Fraction(1)
    for k in range(1, M.n):
        rows = [M.rows[w(a) - 1][:k] for a in range(1, k + 1)]
        out *= det(rows)
        if out == 0:
            return out
    return out


def plucker_vector(M: QMatrix) -> dict[Permutation, Fraction]:
    return {Permutation(p): plucker(M, Permutation(p))
            for p in permutations(range(1, M.n + 1))}


def plucker_support(M: QMatrix) -> frozenset[Permutation]:
    if M.det() == 0:
        raise ValueError("singular matrix")
    return frozenset(w for w, v in plucker_vector(M).items() if v != 0)


def in_qfl(M: QMatrix) -> bool:
    return all(is_noncrossing(w) for w in plucker_support(M))


# --------------------------------------------------------------------------
# orbit sampling

class GenericityError(RuntimeError):
    pass


def sample_orbit_point(F: BnForest, seed: int) -> QMatrix:
    """A point of the open orbit, built letter by letter from the canonical
    word; e-letters draw their parameter from a small pool."""
    rng = random.Random(seed)
    M = QMatrix(())
    for a in canonical_word(F):
        if a.kind == RMINUS:
            M = psi_minus(a.index, M)
        elif a.kind == RPLUS:
            M = psi_plus(a.index, M)
        else:
            M = g_insert(a.index, M, rng.choice(PARAMETER_POOL))
    return M


def sample_generic_point(F: BnForest, seed: int, max_failures: int = 3):
    """Retry until the support is the whole fixed set.

    Returns (matrix, number of retries).  Raises GenericityError after
    max_failures consecutive degenerate draws."""
    target = frozenset(w.perm for w in fixed_set(F))
    for attempt in range(max_failures):
        M = sample_orbit_point(F, seed * 1009 + attempt)
        if plucker_support(M) == target:
            return M, attempt
    raise GenericityError(f"{max_failures} degenerate samples for {F!r} at seed {seed}")


# --------------------------------------------------------------------------
# cells

STAR = "*"


@dataclass(frozen=True)
class CellPattern:
    w: Permutation
    stars: frozenset[tuple[int, int]]  # (row, column), 1-based

    def entry(self, r: int, c: int):
        if self.w(c) == r:
            return 1
        return STAR if (r, c) in self.stars else 0

    def grid(self) -> list[list]:
        n = self.w.n
        return [[self.entry(r, c) for c in range(1, n + 1)] for r in range(1, n + 1)]

    def __str__(self) -> str:
        return "\n".join(" ".join(str(v) for v in row) for row in self.grid())


def cell_pattern(w: Permutation) -> CellPattern:
    return CellPattern(w, frozenset((w(j), i) for (i, j) in inversions(w)))


def nc_cell_pattern(w) -> CellPattern:
    w = getattr(w, "perm", w)
    return CellPattern(w, frozenset((w(j), i) for (i, j) in noncrossing_inversions(w)))


def cell_membership(M: QMatrix) -> tuple[Permutation, bool]:
    """Bruhat cell of M and whether its canonical form fits the NC pattern."""
    w, R = flag_canonical_form(M)
    if not is_noncrossing(w):
        return w, False
    allowed = nc_cell_pattern(w).stars
    for r in range(1, M.n + 1):
        for c in range(1, M.n + 1):
            if w(c) != r and (r, c) not in allowed and R.entry(r, c) != 0:
                return w, False
    return w, True


def chart_weights(w) -> list[tuple[int, int]]:
    """Weights t_p - t_q of the NC chart at w, as pairs (p, q)."""
    w = getattr(w, "perm", w)
    return sorted((w(j), w(i)) for (i, j) in noncrossing_inversions(w))


def cone_is_simplicial(w) -> bool:
    """Generators e_{w(j)} - e_{w(i)} over InvNC(w) are independent and the
    cone they span meets the roots only in the generators."""
    w = getattr(w, "perm", w)
    n = w.n
    gens = []
    for p, q in chart_weights(w):
        v = [0] * n
        v[p - 1] += 1
        v[q - 1] -= 1
        gens.append(v)
    if gens and rank(gens) != len(gens):
        return False
    for a in range(1, n + 1):
        for b in range(1, n + 1):
            if a == b:
                continue
            root = [0] * n
            root[a - 1], root[b - 1] = 1, -1
            if root in gens:
                continue
            if not gens:
                continue
            cols = [list(c) for c in zip(*gens)]
            sol = solve(cols, root)
            if sol is not None and all(s >= 0 for s in sol):
                return False
    return True


# --------------------------------------------------------------------------
# the one-step relation

def _span_equal(A: QMatrix, B: QMatrix, k: int) -> bool:
    if k == 0:
        return True
    a, b = A.columns(k), B.columns(k)
    return rank(a) == k and rank(a + b) == k


def _step_condition(M: QMatrix, i: int) -> bool:
    n = M.n
    e = [Fraction(int(r == i - 1)) for r in range(n)]
    cols = M.columns(i + 1)
    if rank(cols + [e]) != rank(cols):
        return False
    return all(M.rows[i - 1][c] == 0 for c in range(i - 1))


def related_i(A: QMatrix, B: QMatrix, i: int) -> bool:
    if A.n != B.n or not 1 <= i < A.n:
        raise ValueError("bad sizes or index")
    if A.det() == 0 or B.det() == 0:
        raise ValueError("singular matrix")
    if not all(_span_equal(A, B, k) for k in range(1, A.n + 1) if k != i):
        return False
    return _step_condition(A, i)


def random_step(M: QMatrix, rng: random.Random):
    """One step of the relation from M, or None if no index allows it.
    Returns (index, new matrix)."""
    options = [i for i in range(1, M.n) if _step_condition(M, i)]
    if not options:
        return None
    i = rng.choice(options)
    while True:
        a, b, c, d = (rng.choice(PARAMETER_POOL + (Fraction(0),)) for _ in range(4))
        if a * d - b * c != 0:
            break
    rows = []
    for row in M.rows:
        row = list(row)
        u, v = row[i - 1], row[i]
        row[i - 1], row[i] = a * u + b * v, c * u + d * v
        rows.append(tuple(row))
    return i, QMatrix(tuple(rows))


# --------------------------------------------------------------------------
# moment polytopes

def _check_dominant(lam) -> None:
    if any(a <= b for a, b in zip(lam, lam[1:])):
        raise ValueError("lambda must be strictly decreasing")


def moment_vertices(F: BnForest, lam) -> frozenset[tuple]:
    lam = tuple(Fraction(v) for v in lam)
    _check_dominant(lam)
    return frozenset(w.perm.act(lam) for w in fixed_set(F))


@dataclass(frozen=True)
class Inequality:
    coeffs: tuple[int, ...]
    rhs: Fraction
    sense: str  # ">=" or "<="

    def holds(self, z) -> bool:
        s = sum(c * v for c, v in zip(self.coeffs, z))
        return s >= self.rhs if self.sense == ">=" else s <= self.rhs

    def to_json(self):
        return {"coeffs": list(self.coeffs), "rhs": str(self.rhs), "sense": self.sense}

    def __str__(self) -> str:
        lhs = " + ".join(f"z{k}" for k, c in enumerate(self.coeffs, 1) if c)
        return f"{lhs} {self.sense} {self.rhs}"


def _subtree_labels(t) -> set[int]:
    if not isinstance(t, Node):
        return set()
    return {t.label} | _subtree_labels(t.left) | _subtree_labels(t.right)


def polypositroid_facets(T: BnForest, lam) -> list[Inequality]:
    """For each internal label i: the sum of z over Right(T, i) is at least
    the matching sum of lambda_{j+1}, and over Left(T, i) at most the sum of
    lambda_j."""
    lam = tuple(Fraction(v) for v in lam)
    _check_dominant(lam)
    n = T.n
    out = []
    for v in sorted(T.nodes(), key=lambda v: v.label):
        for side, sense in ((v.right, ">="), (v.left, "<=")):
            labels = {v.label} | _subtree_labels(side)
            coeffs = tuple(int(k in labels) for k in range(1, n + 1))
            if sense == ">=":
                rhs = sum(lam[j] for j in labels)
            else:
                rhs = sum(lam[j - 1] for j in labels)
            out.append(Inequality(coeffs, rhs, sense))
    return out


def skeleton_edges(F: BnForest, lam) -> list[tuple[tuple, tuple]]:
    """Vertex pairs of fixed points covering each other in Kreweras order."""
    lam = tuple(Fraction(v) for v in lam)
    pts = sorted(fixed_set(F), key=lambda w: w.perm.word)
    out = []
    for u in pts:
        for w in pts:
            if kreweras_leq(u, w) and absolute_length(w) == absolute_length(u) + 1:
                out.append((u.perm.act(lam), w.perm.act(lam)))
    return out


def is_root_direction(p, q) -> bool:
    d = [a - b for a, b in zip(p, q)]
    nz = [v for v in d if v != 0]
    return len(nz) == 2 and nz[0] == -nz[1]


def realized_vertex_sets(n: int, forests) -> dict[frozenset, int]:
    """Fixed-point sets realised by the given forests, with multiplicity;
    used to explore which NC vertex sets arise."""
    out: dict[frozenset, int] = {}
    for F in forests:
        key = frozenset(w.perm for w in fixed_set(F))
        out[key] = out.get(key, 0) + 1
    return out



def random_generic_flag(n: int, rng: random.Random, max_failures: int = 3) -> QMatrix:
    """Random integer matrix whose Plücker support is all of S_n."""
    for _ in range(max_failures):
        M = QMatrix(tuple(tuple(rng.randint(-30, 30) for _ in range(n)) for _ in range(n)))
        if M.det() != 0 and len(plucker_support(M)) == _factorial(n):
            return M
    raise GenericityError(f"{max_failures} degenerate random flags at n = {n}")


def _factorial(n: int) -> int:
    out = 1
    for k in range(2, n + 1):
        out *= k
    return out


def cell_point(pattern: CellPattern, values: dict[tuple[int, int], Fraction]) -> QMatrix:
    """Fill a cell pattern: 1 at the pivots, the given values at stars."""
    n = pattern.w.n
    rows = []
    for r in range(1, n + 1):
        row = []
        for c in range(1, n + 1):
            v = pattern.entry(r, c)
            row.append(Fraction(values.get((r, c), 0)) if v == STAR else Fraction(v))
        rows.append(tuple(row))
    return QMatrix(tuple(rows))


# --------------------------------------------------------------------------
# symbolic Plücker coordinates on a cell chart

def _poly_mul(p: dict, q: dict) -> dict:
    out: dict = {}
    for a, x in p.items():
        for b, y in q.items():
            key = tuple(sorted(a + b))
            out[key] = out.get(key, 0) + x * y
    return {k: v for k, v in out.items() if v}


def _symbolic_det(grid) -> dict:
    """Determinant of a matrix of entries {monomial: coeff} by Laplace
    expansion along the first row; monomials are sorted tuples of names."""
    n = len(grid)
    if n == 0:
        return {(): 1}
    out: dict = {}
    for c in range(n):
        if not grid[0][c]:
            continue
        minor = [row[:c] + row[c + 1:] for row in grid[1:]]
        term = _poly_mul(grid[0][c], _symbolic_det(minor))
        sign = -1 if c % 2 else 1
        for k, v in term.items():
            out[k] = out.get(k, 0) + sign * v
    return {k: v for k, v in out.items() if v}


def chart_plucker(w: Permutation, u: Permutation) -> dict:
    """Pl_u on the full cell chart of w, as a polynomial in the star entries
    (named by their (row, column) positions)."""
    pat = cell_pattern(w)
    n = w.n
    grid = []
    for r in range(1, n + 1):
        row = []
        for c in range(1, n + 1):
            v = pat.entry(r, c)
            row.append({((r, c),): 1} if v == STAR else ({(): 1} if v == 1 else {}))
        grid.append(row)
    out = {(): 1}
    for k in range(1, n):
        sub = [grid[u(a) - 1][:k] for a in range(1, k + 1)]
        out = _poly_mul(out, _symbolic_det(sub))
    return out


def chart_degree(w: Permutation, monomial) -> tuple[int, ...]:
    """Weight of a chart monomial; the entry at (w(j), i) has weight
    e_{w(j)} - e_{w(i)}."""
    out = [0] * w.n
    for (r, c) in monomial:
        out[r - 1] += 1
        out[w(c) - 1] -= 1
    return tuple(out)


def expected_chart_degree(w: Permutation, u: Permutation) -> tuple[int, ...]:
    """Torus weight of Pl_u / Pl_w on the chart of w:
    sum_i (w^-1(i) - u^-1(i)) e_i."""
    wi, ui = w.inverse(), u.inverse()
    return tuple(wi(i) - ui(i) for i in range(1, w.n + 1))
