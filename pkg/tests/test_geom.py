import random
from fractions import Fraction
from itertools import permutations

import pytest

from qflag import forest as fo
from qflag import geom as g
from qflag.gkm import build_nc_gkm
from qflag.linalg import rank
from qflag.permnc import (
    Permutation,
    enumerate_nc,
    inversions,
    noncrossing_inversions,
)

F_ = Fraction


def mat(rows):
    return g.QMatrix(tuple(tuple(F_(v) for v in row) for row in rows))


def random_matrix(n, rng, lo=-9, hi=9):
    while True:
        M = mat([[rng.randint(lo, hi) for _ in range(n)] for _ in range(n)])
        if M.det() != 0:
            return M


def upper_triangular(n, rng):
    rows = [[0] * n for _ in range(n)]
    for r in range(n):
        rows[r][r] = rng.choice([1, -1, 2, -3, F_(1, 2)])
        for c in range(r + 1, n):
            rows[r][c] = rng.randint(-5, 5)
    return mat(rows)


def cyc(n, *cycles):
    return Permutation.from_cycles(n, cycles)


# pattern maps

def test_psi_displayed_shapes():
    a, b, c, d, e, f, gg, h, i = range(11, 20)
    M = mat([[a, b, c], [d, e, f], [gg, h, i]])
    assert g.psi_minus(2, M) == mat([[a, 0, b, c], [0, 1, 0, 0], [d, 0, e, f], [gg, 0, h, i]])
    assert g.psi_plus(2, M) == mat([[a, b, 0, c], [0, 0, 1, 0], [d, e, 0, f], [gg, h, 0, i]])


def test_psi_minus_of_point():
    assert g.psi_minus(1, g.QMatrix.identity(1)) == g.QMatrix.identity(2)


def test_g_insert():
    M = g.g_insert(1, g.QMatrix.identity(1), 5)
    assert M == mat([[5, 1], [1, 0]])
    with pytest.raises(ValueError):
        g.g_insert(1, g.QMatrix.identity(1), 0)


def test_g_prime_displayed_example():
    a, b, c, d, e, f = range(21, 27)
    M = mat([[a, 1, b], [c, 0, d], [e, 0, f]])
    assert g.g_prime_insert(2, M, 7) == mat([[a, 7, 1, b], [0, 1, 0, 0], [c, 0, 0, d], [e, 0, 0, f]])
    with pytest.raises(ValueError):
        g.g_prime_insert(1, M, 7)


def test_g1g2_equals_g3g1():
    a, b, c, d, e, f, gg, h, i = range(31, 40)
    M = mat([[a, b, c], [d, e, f], [gg, h, i]])
    p, q = F_(2), F_(-3)
    left = g.g_insert(1, g.g_insert(2, M, q), p)
    right = g.g_insert(3, g.g_insert(1, M, p), q)
    assert left == right
    assert left == mat([[p, 1, 0, 0, 0], [a, 0, b, 0, c], [0, 0, q, 1, 0],
                        [d, 0, e, 0, f], [gg, 0, h, 0, i]])


def _apply(kind, i, M, c):
    if kind == "-":
        return g.psi_minus(i, M)
    if kind == "+":
        return g.psi_plus(i, M)
    return g.g_insert(i, M, c)


def test_building_relations_hold_on_matrices():
    # A_j B_i = B_{i+1} A_j, for i >= j when A is psi_minus and i > j otherwise
    rng = random.Random(7)
    count = 0
    for m in range(1, 5):
        M = random_matrix(m, rng)
        for A in "-+G":
            for Bk in "-+G":
                for i in range(1, (m + 1 if Bk == "-" else m) + 1):
                    for j in range(1, i + 1):
                        if j == i and A != "-":
                            continue
                        c1, c2 = rng.choice(g.PARAMETER_POOL), rng.choice(g.PARAMETER_POOL)
                        left = _apply(A, j, _apply(Bk, i, M, c2), c1)
                        right = _apply(Bk, i + 1, _apply(A, j, M, c1), c2)
                        assert left == right
                        count += 1
    assert count > 100


def test_g_and_g_prime_give_the_same_coset():
    rng = random.Random(8)
    for _ in range(20):
        m = rng.randint(2, 4)
        i = rng.randint(2, m)
        jj = rng.randint(1, i - 1)
        M = random_matrix(m, rng)
        rows = [list(r) for r in M.rows]
        for r in range(m):
            rows[r][i - 1] = F_(int(r == jj - 1))
        M = g.QMatrix(tuple(tuple(r) for r in rows))
        if M.det() == 0:
            continue
        for c in g.PARAMETER_POOL:
            lhs = g.flag_canonical_form(g.g_insert(i, M, c))
            rhs = g.flag_canonical_form(g.g_prime_insert(i, M, 1 / c))
            assert lhs == rhs


# canonical forms and Plücker coordinates

def test_canonical_form_of_permutation_matrix():
    for w in permutations(range(1, 5)):
        w = Permutation(w)
        P = g.QMatrix.permutation(w)
        assert g.flag_canonical_form(P) == (w, P)


def test_canonical_form_right_coset_invariance():
    rng = random.Random(9)
    for k in range(1000):
        n = 2 + k % 3
        M = random_matrix(n, rng, -3, 3)
        U = upper_triangular(n, rng)
        assert g.flag_canonical_form(M @ U) == g.flag_canonical_form(M)


def test_generic_lower_unitriangular_is_in_the_big_cell():
    # generic means Pl_{w0} != 0; the canonical form must then land in the w0 cell
    rng = random.Random(10)
    for n in range(2, 6):
        w0 = Permutation(tuple(range(n, 0, -1)))
        for _ in range(5):
            rows = [[1 if r == c else (rng.randint(-20, 20) if r > c else 0)
                     for c in range(n)] for r in range(n)]
            M = mat(rows)
            if g.plucker(M, w0) == 0:
                continue
            assert g.flag_canonical_form(M)[0] == w0


def test_plucker_supports_of_permutation_matrices():
    assert g.plucker_support(g.QMatrix.identity(4)) == {Permutation.identity(4)}
    for w in permutations(range(1, 5)):
        w = Permutation(w)
        assert g.plucker_support(g.QMatrix.permutation(w)) == {w}


def test_singular_matrix_rejected():
    with pytest.raises(ValueError):
        g.plucker_support(mat([[1, 1], [1, 1]]))


@pytest.mark.parametrize("n", range(1, 5))
def test_sampled_support_is_the_fixed_set(n):
    for F in fo.enumerate_bnfor(n):
        target = {w.perm for w in fo.fixed_set(F)}
        for seed in range(20):
            M, _ = g.sample_generic_point(F, seed)
            assert g.plucker_support(M) == target
            assert g.in_qfl(M)


def test_degenerate_draws_are_rare():
    retries = sum(g.sample_generic_point(F, s)[1]
                  for F in fo.enumerate_bnfor(4) for s in range(5))
    assert retries == 0


def test_sample_without_black_nodes_is_permutation_matrix():
    F = fo.forest_from_reseq("r1- r1- r2+ r1-")
    assert F.size() == 0
    M = g.sample_orbit_point(F, 0)
    assert M == g.QMatrix.permutation(fo.ncperm(F).perm)
    assert g.plucker_support(M) == {fo.ncperm(F).perm}


def test_sample_two_leaf_tree():
    M = g.sample_orbit_point(fo.forest_from_reseq("r1- e1"), 3)
    assert M.n == 2 and M.entry(1, 2) == 1 and M.entry(2, 1) == 1 and M.entry(2, 2) == 0
    assert M.entry(1, 1) != 0


def test_equivalent_words_give_the_same_flag():
    # the two sides of e2 e1 = e1 e3 with parameters moved along with their letter
    M = g.psi_minus(1, g.psi_minus(1, g.psi_minus(1, g.QMatrix(()))))
    p, q = F_(2), F_(5)
    left = g.g_insert(1, g.g_insert(2, M, p), q)
    right = g.g_insert(3, g.g_insert(1, M, q), p)
    assert g.flag_canonical_form(left) == g.flag_canonical_form(right)


def test_rotation_relations_up_to_right_cosets():
    # Psi_{i+1}^+ Psi_i^+ = Psi_i^+ Psi_i^+ and Psi_{i+1}^+ P_i = P_i Psi_i^+,
    # compared through canonical forms of the right cosets
    rng = random.Random(11)
    cf = g.flag_canonical_form
    for _ in range(20):
        m = rng.randint(1, 3)
        M = random_matrix(m, rng)
        i = rng.randint(1, m)
        up = g.psi_plus(i, M)
        assert cf(g.psi_plus(i + 1, g.psi_plus(i, M))) == cf(g.psi_plus(i, up))
        assert cf(g.psi_plus(i + 1, g.psi_minus(i, M))) == cf(g.psi_minus(i, up))
        for c in g.PARAMETER_POOL:
            assert cf(g.psi_plus(i + 1, g.g_insert(i, M, c))) == cf(g.g_insert(i, up, c))


def test_random_flags_leave_qfl():
    rng = random.Random(12)
    for n in (3, 4):
        for _ in range(50):
            assert not g.in_qfl(g.random_generic_flag(n, rng))
    assert g.in_qfl(g.QMatrix.identity(3))


# cells and charts

def test_fig7_patterns():
    w = cyc(6, (6, 3, 2, 1), (5, 4))
    assert len(g.cell_pattern(w).stars) == 8
    assert len(g.nc_cell_pattern(w).stars) == 5
    assert g.nc_cell_pattern(Permutation.identity(4)).stars == frozenset()


def test_sampled_points_fit_nc_pattern():
    for n in range(1, 5):
        for F in fo.enumerate_bnfor(n):
            for seed in range(3):
                w, fits = g.cell_membership(g.sample_orbit_point(F, seed))
                assert fits


def test_non_nc_star_leaves_qfl():
    for n in range(3, 5):
        for w in enumerate_nc(n):
            v = w.perm
            for (i, j) in sorted(inversions(v) - noncrossing_inversions(v)):
                M = g.cell_point(g.cell_pattern(v), {(v(j), i): 1})
                assert g.cell_membership(M) == (v, False)
                assert not g.in_qfl(M)


def test_chart_weights():
    assert g.chart_weights(Permutation.identity(3)) == []
    v = cyc(4, (4, 3, 1))
    assert g.chart_weights(v) == sorted((v(j), v(i)) for (i, j) in noncrossing_inversions(v))


@pytest.mark.parametrize("n", range(1, 6))
def test_chart_weights_are_down_edges(n):
    G = build_nc_gkm(n)
    for v in G.vertices:
        down = sorted((b, a) for (u, (a, b)) in G.neighbours(v) if u.length() < v.length())
        weights = sorted((max(p, q), min(p, q)) for p, q in g.chart_weights(v))
        assert down == weights


def test_cones_are_simplicial():
    for n in range(1, 7):
        for w in enumerate_nc(n):
            assert g.cone_is_simplicial(w)


def test_full_inversion_weights_are_dependent():
    # control: without the noncrossing restriction the weights of w0 at n = 3
    # (e1 - e2, e1 - e3, e2 - e3) are linearly dependent
    w0 = Permutation((3, 2, 1))
    gens = []
    for (i, j) in inversions(w0):
        v = [0, 0, 0]
        v[w0(j) - 1] += 1
        v[w0(i) - 1] -= 1
        gens.append(v)
    assert len(gens) == 3 and rank(gens) == 2
    assert len(noncrossing_inversions(w0)) == 2


def test_chart_plucker_homogeneous():
    n = 3
    for w in permutations(range(1, n + 1)):
        w = Permutation(w)
        for u in permutations(range(1, n + 1)):
            u = Permutation(u)
            poly = g.chart_plucker(w, u)
            degrees = {g.chart_degree(w, m) for m in poly}
            assert len(degrees) <= 1
            if degrees:
                assert degrees == {g.expected_chart_degree(w, u)}


# the one-step relation

def test_related_i_reflexive_and_psi_pair():
    rng = random.Random(13)
    for _ in range(20):
        m = rng.randint(1, 3)
        H = random_matrix(m, rng)
        i = rng.randint(1, m)
        A, B = g.psi_minus(i, H), g.psi_plus(i, H)
        assert g.related_i(A, B, i)
        assert g.related_i(A, A, i)


def test_related_i_negative():
    M = mat([[1, 1, 0], [1, 0, 0], [0, 0, 1]])
    N = mat([[1, 0, 0], [0, 1, 0], [0, 0, 1]])
    assert not g.related_i(M, N, 2)
    with pytest.raises(ValueError):
        g.related_i(M, N, 3)


def test_random_steps_stay_in_qfl():
    rng = random.Random(14)
    steps = 0
    for n in range(2, 5):
        for F in fo.enumerate_bnfor(n):
            M = g.sample_orbit_point(F, rng.randrange(1000))
            for _ in range(3):
                step = g.random_step(M, rng)
                if step is None:
                    break
                i, M2 = step
                assert g.related_i(M, M2, i)
                assert g.in_qfl(M2)
                M = M2
                steps += 1
    assert steps >= 50


# moment polytopes

FIG6_TREE = fo.forest_from_trees(4, [fo.Node(fo.BLACK, fo.Node(fo.BLACK, 1, 2), fo.Node(fo.BLACK, 3, 4))])


def test_fig6_vertices_from_subwords():
    lam = (4, 3, 2, 1)
    words = [[], [(2, 4)], [(3, 4)], [(1, 2)], [(2, 4), (3, 4)], [(2, 4), (1, 2)],
             [(3, 4), (1, 2)], [(2, 4), (3, 4), (1, 2)]]
    expected = {fo.tau_product(4, w).act(tuple(F_(v) for v in lam)) for w in words}
    assert g.moment_vertices(FIG6_TREE, lam) == expected


def test_fig6_facets():
    lam = (4, 3, 2, 1)
    got = {(q.coeffs, q.sense, q.rhs) for q in g.polypositroid_facets(FIG6_TREE, lam)}
    expected = {
        ((1, 0, 0, 0), ">=", 3), ((1, 0, 0, 0), "<=", 4),
        ((0, 1, 1, 0), ">=", 3), ((1, 1, 0, 0), "<=", 7),
        ((0, 0, 1, 0), ">=", 1), ((0, 0, 1, 0), "<=", 2),
    }
    assert got == expected
    verts = g.moment_vertices(FIG6_TREE, lam)
    for q in g.polypositroid_facets(FIG6_TREE, lam):
        assert all(q.holds(v) for v in verts)
        tight = [v for v in verts if sum(a * b for a, b in zip(q.coeffs, v)) == q.rhs]
        assert len(tight) >= 2


def test_lambda_must_be_strict():
    with pytest.raises(ValueError):
        g.moment_vertices(FIG6_TREE, (1, 1, 1, 1))


def test_no_black_nodes_gives_a_point():
    F = fo.empty_forest(4)
    assert len(g.moment_vertices(F, (4, 3, 2, 1))) == 1


@pytest.mark.parametrize("n", range(2, 6))
def test_polytope_facets_and_edges(n):
    lam = tuple(range(n, 0, -1))
    for T in fo.enumerate_trees(n):
        verts = g.moment_vertices(T, lam)
        assert all(q.holds(v) for q in g.polypositroid_facets(T, lam) for v in verts)
    for F in fo.enumerate_bnfor(n):
        edges = g.skeleton_edges(F, lam)
        assert len(edges) == F.size() * 2 ** max(F.size() - 1, 0)
        assert all(g.is_root_direction(p, q) for p, q in edges)
