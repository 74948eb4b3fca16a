"""Edge-labelled graphs on permutations and their graph cohomology rings.

A class assigns a t-polynomial to every vertex, and along every edge
w -- (a b)w the difference of the two values must be divisible by the
edge label t_a - t_b.

>>> G = build_nc_gkm(3)
>>> len(G.vertices), len(G.edges)
(5, 6)
>>> is_gkm_class(G, class_from_poly(x(1, 3), 3))
True
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .forest import BnForest, enumerate_forests, for_to_nc
from .permnc import (
    Permutation,
    bruhat_leq,
    cayley_edge,
    enumerate_nc,
    noncrossing_inversions,
)
from .polyalg import MPoly, const, div_linear, ev, forest_poly_double, t, x

__all__ = [
    "GkmEdge",
    "GkmGraph",
    "GkmClass",
    "build_nc_gkm",
    "build_sn_gkm",
    "is_gkm_class",
    "class_from_poly",
    "flowup_class",
    "diagonal_factors",
    "verify_flowup_basis",
    "expand_in_flowup",
    "linear_extension",
]


def _t_slot(i: int, N: int) -> int:
    return N + i - 1


@dataclass(frozen=True)
class GkmEdge:
    u: Permutation
    w: Permutation
    pair: tuple[int, int]  # w = (a b) u with a < b

    def label(self, N: int) -> MPoly:
        a, b = self.pair
        return t(a, N) - t(b, N)


@dataclass(frozen=True)
class GkmGraph:
    n: int
    vertices: tuple[Permutation, ...]
    edges: tuple[GkmEdge, ...]

    def neighbours(self, v: Permutation) -> list[tuple[Permutation, tuple[int, int]]]:
        out = []
        for e in self.edges:
            if e.u == v:
                out.append((e.w, e.pair))
            elif e.w == v:
                out.append((e.u, e.pair))
        return out

    def down_labels(self, v: Permutation) -> list[MPoly]:
        """Labels of edges from v to Bruhat-smaller neighbours."""
        return [t(a, self.n) - t(b, self.n) for (u, (a, b)) in self.neighbours(v)
                if u.length() < v.length()]

    def to_json(self):
        return {
            "n": self.n,
            "vertices": [v.to_json() for v in self.vertices],
            "edges": [[e.u.to_json(), e.w.to_json(), str(e.label(self.n))] for e in self.edges],
        }


@dataclass
class GkmClass:
    n: int
    values: dict[Permutation, MPoly] = field(default_factory=dict)

    def __getitem__(self, w: Permutation) -> MPoly:
        return self.values[w]

    def __sub__(self, other: "GkmClass") -> "GkmClass":
        return GkmClass(self.n, {w: self.values[w] - other.values[w] for w in self.values})

    def scaled(self, c: MPoly) -> "GkmClass":
        return GkmClass(self.n, {w: c * v for w, v in self.values.items()})

    def is_zero(self) -> bool:
        return all(v.is_zero() for v in self.values.values())

    def to_json(self):
        return {str(w): str(v) for w, v in sorted(self.values.items())}


def _build(n: int, vertices) -> GkmGraph:
    vertices = tuple(sorted(vertices, key=lambda w: (w.length(), w.word)))
    edges = []
    for k, u in enumerate(vertices):
        for w in vertices[k + 1:]:
            pair = cayley_edge(u, w)
            if pair is not None:
                edges.append(GkmEdge(u, w, pair))
    return GkmGraph(n, vertices, tuple(edges))


def build_nc_gkm(n: int) -> GkmGraph:
    """Cayley graph of transpositions restricted to NC_n."""
    return _build(n, [w.perm for w in enumerate_nc(n)])


def build_sn_gkm(n: int) -> GkmGraph:
    from itertools import permutations
    return _build(n, [Permutation(p) for p in permutations(range(1, n + 1))])


def _divisible(f: MPoly, a: int, b: int) -> bool:
    N = f.N
    _, rem = div_linear(f, _t_slot(a, N), t(b, N))
    return rem.is_zero()


def is_gkm_class(G: GkmGraph, c: GkmClass) -> bool:
    if set(c.values) != set(G.vertices):
        return False
    for e in G.edges:
        a, b = e.pair
        if not _divisible(c[e.u] - c[e.w], a, b):
            return False
    return True


def class_from_poly(f: MPoly, n: int, vertices=None) -> GkmClass:
    """w -> f(x_i = t_{w(i)}) on NC_n (or on the given vertices)."""
    if vertices is None:
        vertices = [w.perm for w in enumerate_nc(n)]
    return GkmClass(n, {w: ev(w, f) for w in vertices})


def flowup_class(F: BnForest, n: int | None = None) -> GkmClass:
    n = F.n if n is None else n
    return class_from_poly(forest_poly_double(F, n), n)


def diagonal_factors(v: Permutation) -> list[tuple[int, int]]:
    """Pairs (p, q) with the displayed diagonal equal to prod (t_p - t_q)."""
    return [(v(j), v(i)) for (i, j) in sorted(noncrossing_inversions(v))]


def _product(n: int, factors) -> MPoly:
    out = const(1, n)
    for p, q in factors:
        out = out * (t(p, n) - t(q, n))
    return out


def linear_extension(vertices) -> list[Permutation]:
    return sorted(vertices, key=lambda w: (w.length(), w.word))


def verify_flowup_basis(n: int) -> dict:
    """Check vanishing below the index and the diagonal value for every
    forest class.  Signs are reported as s with value = s * prod (t_{v(j)} - t_{v(i)})."""
    nc = [w.perm for w in enumerate_nc(n)]
    failures = []
    signs = {}
    seen = set()
    for F in enumerate_forests(n):
        v = for_to_nc(F).perm
        seen.add(v)
        c = flowup_class(F, n)
        for w in nc:
            if not bruhat_leq(v, w) and not c[w].is_zero():
                failures.append({"forest": repr(F), "vertex": str(w), "reason": "nonzero below"})
        shown = _product(n, diagonal_factors(v))
        if c[v] == shown:
            signs[str(v)] = 1
        elif c[v] == -shown:
            signs[str(v)] = -1
        else:
            failures.append({"forest": repr(F), "vertex": str(v), "reason": "diagonal"})
    if seen != set(nc):
        failures.append({"reason": "forest indices do not cover NC_n"})
    return {"n": n, "cases": len(nc), "failures": failures, "signs": signs}


def _divide_by_linear_product(f: MPoly, factors) -> MPoly | None:
    N = f.N
    for p, q in factors:
        f, rem = div_linear(f, _t_slot(p, N), t(q, N))
        if not rem.is_zero():
            return None
    return f


def expand_in_flowup(c: GkmClass) -> dict[BnForest, MPoly]:
    """Coefficients q_F in Z[t] with c = sum q_F * (forest class of F).

    Raises ArithmeticError if some division fails, which happens exactly
    when c is not a class."""
    n = c.n
    basis = {for_to_nc(F).perm: F for F in enumerate_forests(n)}
    classes = {v: flowup_class(F, n) for v, F in basis.items()}
    residual = GkmClass(n, dict(c.values))
    coeffs = {}
    for v in linear_extension(basis):
        diag = classes[v][v]
        q = _divide_by_linear_product(residual[v], diagonal_factors(v))
        if q is None:
            raise ArithmeticError(f"value at {v} not divisible by its diagonal")
        shown = _product(n, diagonal_factors(v))
        if diag == -shown:
            q = -q
        elif diag != shown:
            raise ArithmeticError(f"unexpected diagonal at {v}")
        coeffs[basis[v]] = q
        if not q.is_zero():
            residual = residual - classes[v].scaled(q)
    if not residual.is_zero():
        raise ArithmeticError("reconstruction left a nonzero residual")
    return coeffs


def reconstruct(coeffs: dict[BnForest, MPoly], n: int) -> GkmClass:
    out = class_from_poly(const(0, n), n)
    for F, q in coeffs.items():
        if not q.is_zero():
            f = flowup_class(F, n)
            out = GkmClass(n, {w: out[w] + q * f[w] for w in out.values})
    return out


def perturbed(c: GkmClass, w: Permutation) -> GkmClass:
    vals = dict(c.values)
    vals[w] = vals[w] + const(1, c.n)
    return GkmClass(c.n, vals)

