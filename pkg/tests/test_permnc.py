from itertools import permutations

import pytest

from qflag.permnc import (
    Permutation,
    absolute_length,
    backward_long_cycle,
    bruhat_leq,
    catalan,
    cayley_edge,
    enumerate_nc,
    enumerate_nc_blocks,
    insert_fixed_point,
    inversions,
    is_noncrossing,
    kreweras_join,
    kreweras_leq,
    kreweras_meet,
    noncrossing,
    noncrossing_inversions,
)


def cyc(n, *cycles):
    return Permutation.from_cycles(n, cycles)


def test_arc_diagram_example_is_noncrossing():
    w = cyc(6, (6, 3, 2, 1), (5, 4))
    assert str(w) == "612543"
    assert is_noncrossing(w)
    assert w.cycle_str() == "(6321)(54)"


def test_identity_and_crossing():
    assert is_noncrossing(Permutation.identity(5))
    assert not is_noncrossing(Permutation.parse("3412"))
    # forward cycles are not allowed
    assert not is_noncrossing(Permutation.parse("231"))


def test_blocks_reproduce_permutation():
    for n in range(1, 7):
        for w in enumerate_nc(n):
            assert cyc(n, *w.blocks) == w.perm


def test_composition_and_inverse():
    for word in permutations(range(1, 5)):
        w = Permutation(word)
        assert w * w.inverse() == Permutation.identity(4)
        assert w.inverse() * w == Permutation.identity(4)
    u, w = Permutation.parse("2314"), Permutation.parse("1342")
    assert all((u * w)(i) == u(w(i)) for i in range(1, 5))


def test_act_on_vectors():
    u = Permutation.parse("231")
    assert u.act(("a", "b", "c")) == ("c", "a", "b")


def test_kreweras_examples():
    small = noncrossing(cyc(6, (6, 3), (2, 1), (5, 4)))
    big = noncrossing(cyc(6, (6, 3, 2, 1), (5, 4)))
    assert kreweras_leq(small, big)
    assert not kreweras_leq(big, small)
    for w in enumerate_nc(4):
        assert kreweras_leq(w, w)
        assert kreweras_leq(noncrossing(Permutation.identity(4)), w)


def test_cayley_edge_examples():
    ident = Permutation.identity(3)
    assert cayley_edge(ident, Permutation.parse("213")) == (1, 2)
    assert cayley_edge(ident, ident) is None
    u, w = cyc(3, (2, 1)), cyc(3, (3, 2, 1))
    # w u^-1 = (2 3) under (u * w)(i) = u(w(i)); (1 3) multiplies on the right
    assert cayley_edge(u, w) == (2, 3)
    assert Permutation.transposition(3, 2, 3) * u == w
    assert u * Permutation.transposition(3, 1, 3) == w


def test_kreweras_covers_are_cayley_edges():
    for n in range(1, 6):
        ncs = enumerate_nc(n)
        for u in ncs:
            for w in ncs:
                cover = kreweras_leq(u, w) and absolute_length(w) == absolute_length(u) + 1
                edge = cayley_edge(u, w) is not None
                comparable = kreweras_leq(u, w) or kreweras_leq(w, u)
                assert cover == (edge and comparable and absolute_length(w) > absolute_length(u))
                assert edge == (cover or (kreweras_leq(w, u) and
                                          absolute_length(u) == absolute_length(w) + 1))


def _bruhat_by_covers(n):
    # u < w covers: w = u (i j) with length going up by one
    perms = [Permutation(p) for p in permutations(range(1, n + 1))]
    up = {u: set() for u in perms}
    for u in perms:
        for i in range(1, n + 1):
            for j in range(i + 1, n + 1):
                w = u * Permutation.transposition(n, i, j)
                if w.length() == u.length() + 1:
                    up[u].add(w)
    closure = {}
    for u in sorted(perms, key=lambda p: -p.length()):
        s = {u}
        for w in up[u]:
            s |= closure[w]
        closure[u] = s
    return perms, closure


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_bruhat_tableau_matches_cover_closure(n):
    perms, closure = _bruhat_by_covers(n)
    for u in perms:
        for w in perms:
            assert bruhat_leq(u, w) == (w in closure[u])


def test_bruhat_small_cases():
    ident = Permutation.identity(3)
    s1, s2 = Permutation.parse("213"), Permutation.parse("132")
    assert bruhat_leq(ident, s1) and bruhat_leq(ident, s2)
    assert not bruhat_leq(s1, s2) and not bruhat_leq(s2, s1)


def test_inversion_sets():
    w = Permutation.parse("612543")
    assert len(inversions(w)) == 8
    assert len(noncrossing_inversions(w)) == 5
    assert inversions(Permutation.identity(4)) == frozenset()
    assert noncrossing_inversions(Permutation.identity(4)) == frozenset()
    assert noncrossing_inversions(backward_long_cycle(3)) == {(1, 2), (1, 3)}
    with pytest.raises(ValueError):
        noncrossing_inversions(Permutation.parse("3412"))


def test_noncrossing_inversions_subset():
    for n in range(1, 7):
        for w in enumerate_nc(n):
            assert noncrossing_inversions(w) <= inversions(w)


@pytest.mark.parametrize("n", range(1, 9))
def test_catalan_counts(n):
    assert len(enumerate_nc(n)) == catalan(n)


def test_small_counts():
    assert [w.perm for w in enumerate_nc(1)] == [Permutation.identity(1)]
    assert len(enumerate_nc(3)) == 5
    assert len(enumerate_nc(4)) == 14


@pytest.mark.parametrize("n", range(1, 8))
def test_generators_agree(n):
    assert [w.perm for w in enumerate_nc(n)] == [w.perm for w in enumerate_nc_blocks(n)]


def test_block_generator_beyond_filter():
    assert len(enumerate_nc(9)) == catalan(9)


def test_meet_and_join_are_lattice_operations():
    ncs = enumerate_nc(5)
    for a in ncs[::3]:
        for b in ncs:
            m, j = kreweras_meet(a, b), kreweras_join(a, b)
            lower = [c for c in ncs if kreweras_leq(c, a) and kreweras_leq(c, b)]
            upper = [c for c in ncs if kreweras_leq(a, c) and kreweras_leq(b, c)]
            assert m in lower and all(kreweras_leq(c, m) for c in lower)
            assert j in upper and all(kreweras_leq(j, c) for c in upper)


def test_insert_fixed_point():
    w = Permutation.parse("21")
    assert insert_fixed_point(w, 2) == Permutation.parse("321")
    assert insert_fixed_point(w, 1) == Permutation.parse("132")


def test_json_shapes():
    w = noncrossing(cyc(4, (4, 1), (3, 2)))
    assert w.perm.to_json() == [4, 3, 2, 1]
    assert w.to_json() == [[4, 1], [3, 2]]
