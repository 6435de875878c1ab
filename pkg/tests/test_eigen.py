import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.optimize import linear_sum_assignment

from salmine.eigen import (ConstructionError, ConvergenceError, eigenvalues, format_complex,
                           hessenberg, jordan_matrix, jordan_test_matrix, parse_complex,
                           read_matrix_csv, write_matrix_csv)

TEXTBOOK_3X3 = np.array([[1.0, 1.0, -1.0], [0.0, 0.0, 2.0], [0.0, -1.0, 3.0]])


def multiset_gap(a, b) -> float:
    """Largest distance in the best one-to-one pairing of two spectra."""
    d = np.abs(np.asarray(a)[:, None] - np.asarray(b)[None, :])
    r, c = linear_sum_assignment(d)
    return float(d[r, c].max())


def random_matrix(rng, n, complex_entries=False):
    a = rng.standard_normal((n, n))
    if complex_entries:
        a = a + 1j * rng.standard_normal((n, n))
    return a


def test_identity():
    assert multiset_gap(eigenvalues(np.eye(2)), [1, 1]) == 0.0


def test_textbook_defective_matrix():
    assert multiset_gap(eigenvalues(TEXTBOOK_3X3), [1, 1, 2]) < 1e-8


def test_companion_of_z_squared_plus_one():
    assert multiset_gap(eigenvalues([[0.0, -1.0], [1.0, 0.0]]), [1j, -1j]) < 1e-12


def test_one_by_one_and_bad_input():
    assert eigenvalues([[3.5]]).tolist() == [3.5]
    with pytest.raises(ValueError):
        eigenvalues(np.ones((2, 3)))
    with pytest.raises(ValueError):
        eigenvalues([[np.nan]])


def test_hessenberg_is_similar_and_upper_hessenberg():
    rng = np.random.default_rng(1)
    a = random_matrix(rng, 7, complex_entries=True)
    h = hessenberg(a)
    assert np.allclose(np.tril(h, -2), 0.0)
    assert multiset_gap(np.linalg.eigvals(h), np.linalg.eigvals(a)) < 1e-9


def test_invariants_on_500_random_matrices():
    rng = np.random.default_rng(2024)
    for k in range(500):
        n = int(rng.integers(1, 13))
        a = random_matrix(rng, n, complex_entries=bool(k % 2))
        ev = eigenvalues(a)
        assert len(ev) == n
        norm = np.linalg.norm(a, 2)
        assert abs(ev.sum() - np.trace(a)) <= 1e-8 * n * norm
        det = np.linalg.det(a)
        assert abs(np.prod(ev) - det) <= 1e-6 * max(abs(det), 1e-12) + 1e-12 * norm ** n
        assert multiset_gap(ev, np.linalg.eigvals(a)) < 1e-6 * max(norm, 1.0)
        b = rng.standard_normal((n, n)) + 3 * np.eye(n)
        similar = b @ a @ np.linalg.inv(b)
        assert multiset_gap(eigenvalues(similar), ev) <= 1e-6 * np.linalg.cond(b) * max(norm, 1.0)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 12), st.integers(0, 2 ** 32 - 1))
def test_real_spectra_are_conjugate_closed(n, seed):
    ev = eigenvalues(random_matrix(np.random.default_rng(seed), n))
    assert multiset_gap(ev, ev.conj()) < 1e-8 * max(1.0, np.abs(ev).max())


def test_convergence_error_carries_partial_spectrum():
    a = random_matrix(np.random.default_rng(5), 6)
    with pytest.raises(ConvergenceError) as info:
        eigenvalues(a, max_iter=2)
    err = info.value
    assert err.iterations == 2
    assert len(err.partial) < 6
    full = np.linalg.eigvals(a)
    for z in err.partial:
        assert np.abs(full - z).min() < 1e-8


def test_jordan_matrix_blocks():
    j = jordan_matrix([(1, 2), (2, 1)])
    assert j.tolist() == [[1, 1, 0], [0, 1, 0], [0, 0, 2]]


def test_jordan_test_matrix_identity_basis():
    a = jordan_test_matrix([(1, 1), (1, 1), (2, 1)], seed=None)
    assert np.array_equal(a, np.diag([1.0, 1.0, 2.0]))


@pytest.mark.parametrize("structure", [[(5, 3)], [(2, 2), (-1, 1), (3, 1)],
                                       [(-1, 1), (-2, 1), (7, 3), (7, 3)], [(1 + 1j, 2)]])
def test_jordan_test_matrix_spectrum(structure):
    want = [complex(l) for l, r in structure for _ in range(r)]
    for seed in range(10):
        a = jordan_test_matrix(structure, seed=seed)
        assert a.shape == (len(want),) * 2
        assert np.isrealobj(a) == all(complex(l).imag == 0 for l, _ in structure)
        assert multiset_gap(eigenvalues(a), want) < 1e-6 * 100


def test_jordan_test_matrix_is_seeded():
    s = [(7, 3), (1, 1)]
    assert np.array_equal(jordan_test_matrix(s, seed=4), jordan_test_matrix(s, seed=4))
    assert not np.array_equal(jordan_test_matrix(s, seed=4), jordan_test_matrix(s, seed=5))


def test_jordan_test_matrix_errors():
    with pytest.raises(ValueError):
        jordan_test_matrix([(1, 1)], cond_cap=0.5)
    with pytest.raises(ConstructionError):
        jordan_test_matrix([(1, 1)] * 6, cond_cap=1.0, max_tries=3)


@pytest.mark.parametrize("text,value", [("1+2i", 1 + 2j), ("-0.5-1e-3i", -0.5 - 1e-3j),
                                        ("3", 3), ("2i", 2j), ("2+i", 2 + 1j), ("1-2j", 1 - 2j)])
def test_parse_complex(text, value):
    assert parse_complex(text) == value


def test_parse_complex_rejects_garbage():
    with pytest.raises(ValueError):
        parse_complex("abc")


def test_matrix_csv_round_trip(tmp_path):
    rng = np.random.default_rng(9)
    for a in (random_matrix(rng, 4), random_matrix(rng, 3, complex_entries=True)):
        path = tmp_path / "m.csv"
        write_matrix_csv(path, a)
        back = read_matrix_csv(path)
        assert np.array_equal(back, a)
        assert np.isrealobj(back) == np.isrealobj(a)
    assert format_complex(-0.0 - 1j) == "-0.0-1.0i"


def test_matrix_csv_must_be_square(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("1,2\n3\n")
    with pytest.raises(ValueError):
        read_matrix_csv(path)
