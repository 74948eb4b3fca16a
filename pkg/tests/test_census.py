import json

import pytest

from qflag import census as cs
from qflag import forest as fo
from qflag.permnc import backward_long_cycle, catalan


def test_face_counts_small():
    assert cs.count_faces(3).by_k == (5, 6, 2)
    assert cs.count_faces(1).by_k == (1,)
    assert cs.count_faces(3).total == 13


@pytest.mark.parametrize("n", range(1, 8))
def test_face_counts_by_enumeration(n):
    sizes = [F.size() for F in fo.enumerate_normal_forms(n)]
    assert tuple(sizes.count(k) for k in range(n)) == cs.count_faces(n).by_k
    cs.count_faces(n, enumerate_check=True)


@pytest.mark.parametrize("n", range(1, 9))
def test_forest_counts_by_enumeration(n):
    table = cs.count_forests(n, enumerate_check=True)
    sizes = [F.size() for F in fo.enumerate_forests(n)]
    assert tuple(sizes.count(k) for k in range(n)) == table.by_k
    assert table.total == catalan(n)


def test_forest_count_small():
    assert cs.count_forests(3).by_k == (1, 2, 2)


def test_series_matches_enumeration():
    G = cs.series_G(7)
    assert cs._trim(G[1]) == [1]
    for n in range(1, 8):
        assert cs._trim(G[n]) == list(cs.count_faces(n).by_k)


def test_series_composition_route():
    assert cs.compose_G_from_Gcox(7) == cs.series_G(7)


def test_gcox_matches_tree_enumeration():
    Gc = cs.series_Gcox(6)
    for n in range(1, 7):
        trees = [F for F in fo.enumerate_normal_forms(n)
                 if fo.ncperm(F).perm == backward_long_cycle(n)]
        sizes = [F.size() for F in trees]
        assert [sizes.count(k) for k in range(n)] == Gc[n][:n] + [0] * (n - len(Gc[n]))


def test_schroeder_numbers():
    Gc = cs.series_Gcox(6)
    assert [sum(Gc[n]) for n in range(1, 7)] == [1, 2, 6, 22, 90, 394]
    assert cs.large_schroeder(6) == [1, 2, 6, 22, 90, 394]


def test_fq_small():
    assert cs.fq_count(1) == (1,)
    assert cs.fq_count(2) == (1, 1)
    assert cs.fq_count(3) == (1, 2, 2)


@pytest.mark.parametrize("n", range(1, 9))
def test_fq_identity(n):
    coeffs = cs.fq_count(n)
    assert sum(coeffs) == catalan(n)
    assert coeffs[-1] == catalan(n - 1)
    faces = cs.count_faces(n).by_k
    forests = cs.count_forests(n).by_k
    # degree n - 1 on both sides, so n + 1 evaluations determine the polynomials
    for q in range(-2, n + 2):
        assert sum(c * q ** k for k, c in enumerate(forests)) == \
            sum(f * (q - 1) ** k for k, f in enumerate(faces))


def test_hhmp_census():
    for n in range(1, 7):
        total, by_dim = cs.hhmp_counts(n)
        assert (total, by_dim) == cs.hhmp_formulas(n)
    assert cs.hhmp_formulas(3)[0] == 15


# suites and reports

def test_unknown_suite():
    with pytest.raises(KeyError):
        cs.run_suite("nope", 2)


def test_suite_size_limit():
    with pytest.raises(ValueError):
        cs.run_suite("duality", 9)


def test_report_schema():
    rep = cs.run_suite("enumeration", 3, seed=4)
    assert rep["passed"] and rep["failures"] == []
    assert set(rep) >= {"version", "suite", "n", "seed", "cases", "failures"}
    assert rep["cases"] == sum(rep["cases_by_n"].values())
    json.loads(cs.report_json(rep))


def test_duality_case_count():
    rep = cs.run_suite("duality", 4)
    assert rep["passed"]
    assert rep["cases_by_n"]["4"] == 14 ** 2


def test_reports_are_deterministic():
    a = cs.report_json(cs.run_suite("plucker", 3, seed=2))
    b = cs.report_json(cs.run_suite("plucker", 3, seed=2, jobs=2))
    assert a == b


@pytest.mark.parametrize("name", cs.SUITES)
def test_every_suite_passes_small(name):
    rep = cs.run_suite(name, 3, seed=1)
    assert rep["passed"], rep["failures"][:3]
    assert rep["cases"] > 0
