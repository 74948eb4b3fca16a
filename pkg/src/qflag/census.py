"""Counting formulas, generating series and the batch verification suites.

>>> count_faces(3).by_k
(5, 6, 2)
>>> fq_count(3)
(1, 2, 2)
>>> [sum(row) for row in series_Gcox(5)[1:]]  # u = 1
[1, 2, 6, 22, 90]
"""

from __future__ import annotations

import json
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from itertools import combinations, permutations
from math import comb

from . import forest as fo
from . import geom, gkm
from . import polyalg as pa
from .permnc import (
    Permutation,
    absolute_length,
    backward_long_cycle,
    bruhat_leq,
    catalan,
    enumerate_nc,
    enumerate_nc_blocks,
    inversions,
    is_noncrossing,
    kreweras_join,
    kreweras_leq,
    kreweras_meet,
    noncrossing_inversions,
)

REPORT_VERSION = 1

SUITES = (
    "enumeration", "tamari", "flowup", "duality", "plucker",
    "paving", "positivity", "borel", "gkm", "polytope",
)


# --------------------------------------------------------------------------
# closed forms

def face_count_formula(n: int, k: int) -> int:
    """Borel's triangle entry: number of orbits of dimension k."""
    if n == 0:
        return int(k == 0)
    if not 0 <= k <= n - 1:
        return 0
    num = comb(2 * n, n - k - 1) * comb(n + k - 1, k)
    assert num % n == 0
    return num // n


def forest_count_formula(n: int, k: int) -> int:
    """Forests in Forest_n with k internal nodes."""
    if n == 0:
        return int(k == 0)
    if not 0 <= k <= n - 1:
        return 0
    num = (n - k) * comb(n + k, k)
    assert num % (n + k) == 0
    return num // (n + k)


@dataclass(frozen=True)
class CountTable:
    n: int
    by_k: tuple[int, ...]

    @property
    def total(self) -> int:
        return sum(self.by_k)

    def rows(self):
        return [(self.n, k, c) for k, c in enumerate(self.by_k)]


class CountMismatch(AssertionError):
    pass


def _table_from_sizes(n: int, sizes) -> tuple[int, ...]:
    out = [0] * max(n, 1)
    for s in sizes:
        out[s] += 1
    return tuple(out)


def count_faces(n: int, enumerate_check: bool = False) -> CountTable:
    closed = tuple(face_count_formula(n, k) for k in range(max(n, 1)))
    if enumerate_check:
        counted = _table_from_sizes(n, (F.size() for F in fo.enumerate_normal_forms(n)))
        if counted != closed:
            raise CountMismatch(f"faces n={n}: formula {closed} vs enumeration {counted}")
    return CountTable(n, closed)


def count_forests(n: int, enumerate_check: bool = False) -> CountTable:
    closed = tuple(forest_count_formula(n, k) for k in range(max(n, 1)))
    if enumerate_check:
        counted = _table_from_sizes(n, (F.size() for F in fo.enumerate_forests(n)))
        if counted != closed:
            raise CountMismatch(f"forests n={n}: formula {closed} vs enumeration {counted}")
    return CountTable(n, closed)


# --------------------------------------------------------------------------
# series: index n holds the coefficient of z^n as a list over powers of u

def _padd(p, q):
    out = [0] * max(len(p), len(q))
    for k, c in enumerate(p):
        out[k] += c
    for k, c in enumerate(q):
        out[k] += c
    return out


def _pmul(p, q):
    if not p or not q:
        return []
    out = [0] * (len(p) + len(q) - 1)
    for a, x in enumerate(p):
        for b, y in enumerate(q):
            out[a + b] += x * y
    return out


def _shift_u(p):
    return [0] + list(p)


def _trim(p):
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return p


def series_G(order: int) -> list[list[int]]:
    """Coefficients of G(z, u) up to z^order.

    G is the root with G(0, u) = 1 of (z + u) G^2 - (1 + 2u) G + (1 + u) = 0;
    comparing z^n coefficients gives
    g_n = u * sum_{a+b=n, 0<a,b} g_a g_b + sum_{a+b=n-1} g_a g_b."""
    if order > 12:
        raise ValueError("order at most 12")
    g = [[1]]
    for n in range(1, order + 1):
        inner = []
        for a in range(1, n):
            inner = _padd(inner, _pmul(g[a], g[n - a]))
        outer = []
        for a in range(0, n):
            outer = _padd(outer, _pmul(g[a], g[n - 1 - a]))
        g.append(_trim(_padd(_shift_u(inner), outer)))
    return g


def series_Gcox(order: int) -> list[list[int]]:
    """Coefficients of the tree series up to z^order (constant term 1).

    Root with Y(0, u) = 1 of u Y^2 - (1 + 2u - z) Y + 1 + u = 0, i.e.
    y_n = y_{n-1} + u * sum_{a+b=n, 0<a,b} y_a y_b."""
    if order > 12:
        raise ValueError("order at most 12")
    y = [[1]]
    for n in range(1, order + 1):
        inner = []
        for a in range(1, n):
            inner = _padd(inner, _pmul(y[a], y[n - a]))
        y.append(_trim(_padd(y[n - 1], _shift_u(inner))))
    return y


def _series_mul(p, q, order):
    out = [[] for _ in range(order + 1)]
    for a, x in enumerate(p[: order + 1]):
        for b, y in enumerate(q[: order + 1 - a]):
            out[a + b] = _padd(out[a + b], _pmul(x, y))
    return [_trim(c) for c in out]


def compose_G_from_Gcox(order: int) -> list[list[int]]:
    """G computed by iterating G = Gcox(z G, u) to a fixed point."""
    y = series_Gcox(order)
    G = [[1]] + [[] for _ in range(order)]
    for _ in range(order + 1):
        zG = [[]] + G[:order]
        new = [[] for _ in range(order + 1)]
        power = [[1]] + [[] for _ in range(order)]
        for k in range(order + 1):
            for n in range(order + 1):
                new[n] = _padd(new[n], _pmul(y[k], power[n]))
            power = _series_mul(power, zG, order)
        new = [_trim(c) for c in new]
        if new == G:
            break
        G = new
    return G


def large_schroeder(count: int) -> list[int]:
    """1, 2, 6, 22, ... by the recurrence (n+1) S_n = 3(2n-1) S_{n-1} - (n-2) S_{n-2}."""
    s = [1, 2]
    for n in range(2, count):
        s.append((3 * (2 * n - 1) * s[-1] - (n - 2) * s[-2]) // (n + 1))
    return s[:count]


# --------------------------------------------------------------------------
# points over finite fields

def _poly_from_shifted(coeffs) -> list[int]:
    """Expand sum_k a_k (q - 1)^k in powers of q."""
    out = [0] * len(coeffs)
    for k, a in enumerate(coeffs):
        for j in range(k + 1):
            out[j] += a * comb(k, j) * (-1) ** (k - j)
    return out


def fq_count(n: int) -> tuple[int, ...]:
    """Coefficients in q of the point count; both displayed expressions are
    computed and must agree."""
    by_forest = list(count_forests(n).by_k)
    by_face = _poly_from_shifted(list(count_faces(n).by_k))
    if _trim(by_forest) != _trim(by_face):
        raise CountMismatch(f"F_q identity fails at n={n}: {by_forest} vs {by_face}")
    return tuple(by_forest)


def hhmp_counts(n: int) -> tuple[int, tuple[int, ...]]:
    """Number of RESeq_n words without r+ letters, total and by e-count."""
    by_k = [0] * n
    for word in fo.enumerate_reseq(n, kinds=(fo.RMINUS, fo.E)):
        by_k[sum(a.kind == fo.E for a in word)] += 1
    return sum(by_k), tuple(by_k)


def hhmp_formulas(n: int) -> tuple[int, tuple[int, ...]]:
    total = 1
    for k in range(1, n + 1):
        total *= 2 * k - 1
    poly = [1]
    for k in range(1, n + 1):
        poly = _pmul(poly, [k, k - 1])
    return total, tuple(_trim(poly) or [0])


# --------------------------------------------------------------------------
# suites

class _Cases:
    def __init__(self):
        self.count = 0
        self.failures: list[dict] = []

    def check(self, ok: bool, **info):
        self.count += 1
        if not ok:
            self.failures.append(info)


def _rng(seed: int, suite: str, m: int) -> random.Random:
    return random.Random(f"{seed}:{suite}:{m}")


def _suite_enumeration(m: int, seed: int, c: _Cases):
    ncs = enumerate_nc(m)
    c.check(len(ncs) == catalan(m), what="|NC| = Catalan", m=m)
    if m <= 7:
        c.check([w.perm for w in ncs] == [w.perm for w in enumerate_nc_blocks(m)],
                what="NC generators agree", m=m)
    c.check(len(fo.enumerate_trees(m)) == catalan(m - 1), what="|Tree| = Catalan(m-1)", m=m)
    try:
        count_forests(m, enumerate_check=True)
        c.check(True)
    except CountMismatch as e:
        c.check(False, what=str(e))
    if m <= 7:
        try:
            count_faces(m, enumerate_check=True)
            c.check(True)
        except CountMismatch as e:
            c.check(False, what=str(e))
        G = series_G(m)
        c.check(_trim(G[m]) == _trim(list(count_faces(m).by_k)), what="[z^m] G", m=m)
        G2 = compose_G_from_Gcox(m)
        c.check(G2[m] == G[m], what="G = Gcox(zG)", m=m)
        trees = [F for F in fo.enumerate_normal_forms(m)
                 if F.n == m and fo.ncperm(F).perm == backward_long_cycle(m)]
        c.check(_trim(list(_table_from_sizes(m, (F.size() for F in trees))))
                == series_Gcox(m)[m], what="[z^m] Gcox vs trees", m=m)
    c.check(sum(series_Gcox(m)[m]) == large_schroeder(m)[m - 1], what="Schroeder", m=m)
    try:
        q = fq_count(m)
        c.check(sum(q) == catalan(m) and q[-1] == catalan(m - 1), what="fq specialisations", m=m)
    except CountMismatch as e:
        c.check(False, what=str(e))
    if m <= 6:
        c.check(hhmp_counts(m) == hhmp_formulas(m), what="HHMP census", m=m)


def boolean_sublattice_ok(F: fo.BnForest) -> bool:
    """The map S -> product of tau over the nodes outside S (S a set of black
    nodes) is an order isomorphism onto the fixed set that carries unions and
    intersections to Kreweras joins and meets."""
    black = sorted(F.black())
    order = fo.preorder_labels(F)
    nodes = F.node_map()
    image = {}
    for r in range(len(black) + 1):
        for S in combinations(black, r):
            w = fo.tau_product(F.n, [(a, nodes[a].hi) for a in order if a not in S])
            image[frozenset(S)] = w
    if len(set(image.values())) != len(image):
        return False
    for S, w in image.items():
        for T, v in image.items():
            # dropping more nodes gives a finer partition
            if (T <= S) != kreweras_leq(w, v):
                return False
            if kreweras_meet(w, v).perm != image[S | T]:
                return False
            if kreweras_join(w, v).perm != image[S & T]:
                return False
    return True


def _suite_tamari(m: int, seed: int, c: _Cases):
    forests = fo.enumerate_bnfor(m)
    by_fixed: dict = {}
    for F in forests:
        fs = fo.fixed_set(F)
        c.check(fs == fo.fixed_set_from_vertices(F), what="tau route = vertex route", F=repr(F))
        c.check(len(fs) == 2 ** F.size() and all(is_noncrossing(w.perm) for w in fs),
                what="fixed set size", F=repr(F))
        c.check(boolean_sublattice_ok(F), what="Boolean sublattice", F=repr(F))
        nf = fo.tamari_normal_form(F)
        c.check(fo.fixed_set(nf) == fs, what="rotation invariance", F=repr(F))
        c.check(fo.for_to_nc(nf).perm == fo.bruhat_max(fs), what="Bruhat max", F=repr(F))
        by_fixed.setdefault(fs, set()).add(nf)
    c.check(all(len(v) == 1 for v in by_fixed.values()), what="equal fixed sets <=> same normal form", m=m)
    c.check(len(by_fixed) == sum(count_faces(m).by_k), what="number of normal forms", m=m)
    if m <= 4:
        nfs = fo.enumerate_normal_forms(m)
        sets = {G: fo.fixed_set(G) for G in nfs}
        for G in nfs:
            for F in nfs:
                c.check((sets[G] <= sets[F]) == fo.containment_by_faces(G, F),
                        what="containment", G=repr(G), F=repr(F))


def _suite_duality(m: int, seed: int, c: _Cases):
    forests = fo.enumerate_forests(m)
    polys = {G: pa.forest_poly_double(G, m) for G in forests}
    for F in forests:
        for G in forests:
            val = pa.phi_apply(F, polys[G])
            c.check(val == pa.const(int(F == G), m), what="duality", F=repr(F), G=repr(G))


def _suite_flowup(m: int, seed: int, c: _Cases):
    rep = gkm.verify_flowup_basis(m)
    c.count += rep["cases"]
    c.failures.extend(rep["failures"])
    for F in fo.enumerate_forests(m):
        v = fo.for_to_nc(F).perm
        c.check(rep["signs"].get(str(v)) == (-1) ** len(noncrossing_inversions(v)),
                what="diagonal sign (-1)^|InvNC|", v=str(v))


def _suite_plucker(m: int, seed: int, c: _Cases):
    rng = _rng(seed, "plucker", m)
    nseeds = 20
    for F in fo.enumerate_bnfor(m):
        fs = frozenset(w.perm for w in fo.fixed_set(F))
        for s in range(nseeds):
            try:
                M, _ = geom.sample_generic_point(F, seed * 100 + s)
            except geom.GenericityError as e:
                c.check(False, what=str(e))
                continue
            sup = geom.plucker_support(M)
            c.check(sup == fs and all(is_noncrossing(w) for w in sup),
                    what="support = fixed set", F=repr(F), seed=s)
        M = geom.sample_orbit_point(F, seed)
        step = geom.random_step(M, rng)
        if step is not None:
            i, M2 = step
            c.check(geom.related_i(M, M2, i) and geom.in_qfl(M2), what="one step stays", F=repr(F))
    if m in (3, 4):
        for k in range(50):
            M = geom.random_generic_flag(m, rng)
            c.check(not geom.in_qfl(M), what="generic flag outside", k=k)


def _suite_paving(m: int, seed: int, c: _Cases):
    G = gkm.build_nc_gkm(m)
    for F in fo.enumerate_bnfor(m):
        for s in range(5):
            M = geom.sample_orbit_point(F, seed * 100 + s)
            w, fits = geom.cell_membership(M)
            c.check(fits, what="fits NC pattern", F=repr(F), seed=s)
    for v in G.vertices:
        down = sorted((b, a) for (u, (a, b)) in G.neighbours(v) if u.length() < v.length())
        weights = sorted((max(p, q), min(p, q)) for p, q in geom.chart_weights(v))
        c.check(down == weights, what="chart weights = down labels", v=str(v))
        extra = sorted(inversions(v) - noncrossing_inversions(v))
        if extra:
            i, j = extra[0]
            pat = geom.cell_pattern(v)
            M = geom.cell_point(pat, {(v(j), i): 1})
            c.check(not geom.cell_membership(M)[1] and not geom.in_qfl(M),
                    what="non-NC star leaves QFl", v=str(v))
    if m <= 6:
        for w in enumerate_nc(m):
            c.check(geom.cone_is_simplicial(w), what="cone", w=str(w.perm))


def _suite_positivity(m: int, seed: int, c: _Cases):
    for w in permutations(range(1, m + 1)):
        S = pa.schubert_double(Permutation(w))
        for F in fo.enumerate_forests(m):
            val = pa.phi_apply(F, S)
            res = pa.graham_positive(val, m)
            c.check(res is True, what="Graham positive", w="".join(map(str, w)), F=repr(F),
                    result=str(res))


def _suite_borel(m: int, seed: int, c: _Cases):
    rng = _rng(seed, "borel", m)
    for k in range(100):
        f = pa.random_poly(m, 4, rng)
        coeffs, rem = pa.expand_forest_basis(f, m)
        c.check(pa.ideal_member(rem, m), what="remainder in kernel", k=k)
        recon = rem
        for F, q in coeffs.items():
            recon = recon + q * pa.forest_poly_double(F, m)
        c.check(recon == f, what="reconstruction", k=k)
    for g in pa.ideal_generators(m, 4):
        c.check(pa.ideal_member(g, m), what="generator vanishes on NC")
    for F in fo.enumerate_lt_forests(m, 4):
        if m in fo.lter(F):
            P = pa.forest_poly_double(F, m)
            c.check(pa.ideal_member(P, m), what="lifted single in kernel", F=repr(F))
            c.check(pa.in_single_ideal(pa.forest_poly_single(F, m), m),
                    what="single in ideal", F=repr(F))


def _suite_gkm(m: int, seed: int, c: _Cases):
    rng = _rng(seed, "gkm", m)
    G = gkm.build_nc_gkm(m)
    covers = sum(1 for u in G.vertices for w in G.vertices
                 if kreweras_leq(u, w) and absolute_length(w) == absolute_length(u) + 1)
    c.check(covers == len(G.edges), what="edges = Kreweras covers", m=m)
    for k in range(20 if m <= 4 else 5):
        f = pa.random_poly(m, 3, rng)
        cl = gkm.class_from_poly(f, m)
        c.check(gkm.is_gkm_class(G, cl), what="polynomial class valid", k=k)
        try:
            q = gkm.expand_in_flowup(cl)
            c.check(gkm.reconstruct(q, m).values == cl.values, what="flowup round trip", k=k)
        except ArithmeticError as e:
            c.check(False, what=str(e), k=k)
        c.check(cl.is_zero() == pa.ideal_member(f, m), what="zero class <=> ideal", k=k)
        if G.edges:
            v = G.vertices[rng.randrange(len(G.vertices))]
            c.check(not gkm.is_gkm_class(G, gkm.perturbed(cl, v)), what="perturbed", k=k)


def _suite_polytope(m: int, seed: int, c: _Cases):
    lam = tuple(range(m, 0, -1))
    for T in fo.enumerate_trees(m):
        facets = geom.polypositroid_facets(T, lam)
        verts = geom.moment_vertices(T, lam)
        c.check(all(q.holds(v) for v in verts for q in facets), what="vertices satisfy facets",
                T=repr(T))
    for F in fo.enumerate_bnfor(m):
        for p, q in geom.skeleton_edges(F, lam):
            c.check(geom.is_root_direction(p, q), what="edge parallel to a root", F=repr(F))


_SUITE_FUNCS = {
    "enumeration": _suite_enumeration,
    "tamari": _suite_tamari,
    "flowup": _suite_flowup,
    "duality": _suite_duality,
    "plucker": _suite_plucker,
    "paving": _suite_paving,
    "positivity": _suite_positivity,
    "borel": _suite_borel,
    "gkm": _suite_gkm,
    "polytope": _suite_polytope,
}

SUITE_LIMITS = {
    "enumeration": 8, "tamari": 5, "flowup": 5, "duality": 5, "plucker": 4,
    "paving": 4, "positivity": 4, "borel": 4, "gkm": 5, "polytope": 5,
}


def _run_one(args):
    name, m, seed = args
    cases = _Cases()
    _SUITE_FUNCS[name](m, seed, cases)
    return m, cases.count, cases.failures


def run_suite(name: str, n: int, seed: int = 0, jobs: int = 1) -> dict:
    """Run a suite for every size 1..n.  The report does not depend on jobs."""
    if name not in _SUITE_FUNCS:
        raise KeyError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
    if not 1 <= n <= SUITE_LIMITS[name]:
        raise ValueError(f"suite {name} supports 1 <= n <= {SUITE_LIMITS[name]}")
    tasks = [(name, m, seed) for m in range(1, n + 1)]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_run_one, tasks))
    else:
        results = [_run_one(t) for t in tasks]
    results.sort()
    failures = []
    for m, _, fails in results:
        failures.extend(dict(f, m=m) for f in fails)
    return {
        "version": REPORT_VERSION,
        "suite": name,
        "n": n,
        "seed": seed,
        "cases": sum(r[1] for r in results),
        "cases_by_n": {str(m): k for m, k, _ in results},
        "failures": failures,
        "passed": not failures,
    }


def report_json(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True)
