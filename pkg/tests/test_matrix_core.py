import itertools
import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from randassign.matrix_core import (
    UNASSIGNED,
    CostMatrix,
    EnumerationTooLarge,
    GeneralizedPermutation,
    MatrixFormatError,
    brute_force_optimum,
    enumerate_injections,
    evaluate,
    format_csv_matrix,
    format_json_matrix,
    injection_count,
    parse_csv_matrix,
    parse_json_matrix,
    read_matrix,
    row_maxima_sum,
    transpose,
)

A = CostMatrix([[1, 2], [3, 5]])
B = CostMatrix([[3, 1, 2], [9, 8, 7]])


def perm(*one_based):
    return GeneralizedPermutation.from_one_based(one_based)


def small_matrices(max_n=4, max_extra=2):
    return st.integers(1, max_n).flatmap(
        lambda n: st.integers(n, n + max_extra).flatmap(
            lambda m: arrays(np.float64, (n, m), elements=st.floats(-10, 10, allow_nan=False))
        )
    )


class TestCostMatrix:
    def test_rejects_non_finite(self):
        with pytest.raises(ValueError):
            CostMatrix([[1.0, math.inf]])
        with pytest.raises(ValueError):
            CostMatrix([[math.nan]])

    def test_rejects_empty_and_ragged(self):
        with pytest.raises(ValueError):
            CostMatrix(np.zeros((0, 3)))
        with pytest.raises(ValueError):
            CostMatrix([1.0, 2.0])

    def test_entries_are_read_only(self):
        with pytest.raises(ValueError):
            A.entries[0, 0] = 7.0

    def test_from_flat_row_major(self):
        m = CostMatrix.from_flat(2, 3, [1, 2, 3, 4, 5, 6])
        assert m.entries[1, 0] == 4.0
        with pytest.raises(ValueError):
            CostMatrix.from_flat(2, 2, [1, 2, 3])


class TestPermutation:
    def test_injective(self):
        with pytest.raises(ValueError):
            perm(1, 1)

    def test_one_based_round_trip(self):
        p = perm(2, 1)
        assert p.assignment == (1, 0)
        assert p.one_based() == [2, 1]

    def test_range_checked_against_matrix(self):
        with pytest.raises(ValueError):
            evaluate(A, perm(1, 3))
        with pytest.raises(ValueError):
            evaluate(A, perm(1))


class TestEvaluate:
    def test_examples(self):
        assert evaluate(CostMatrix([[5.0]]), perm(1)) == 5.0
        assert evaluate(B, perm(1, 2)) == 11.0
        assert evaluate(A, perm(2, 1)) == 5.0

    @given(small_matrices())
    def test_bounded_by_row_maxima(self, x):
        m = CostMatrix(x)
        top = row_maxima_sum(m)
        for p in enumerate_injections(m.n, m.m):
            assert evaluate(m, p) <= top + 1e-12


class TestEnumeration:
    def test_counts(self):
        assert [p.one_based() for p in enumerate_injections(1, 3)] == [[1], [2], [3]]
        assert len(list(enumerate_injections(2, 3))) == 6
        assert len(list(enumerate_injections(2, 2))) == 2

    @pytest.mark.parametrize("n,m", [(n, m) for m in range(1, 8) for n in range(1, m + 1)])
    def test_distinct_and_complete(self, n, m):
        items = [p.assignment for p in enumerate_injections(n, m)]
        assert len(items) == len(set(items)) == math.perm(m, n) == injection_count(n, m)
        assert items == sorted(items)

    def test_cap(self):
        with pytest.raises(EnumerationTooLarge):
            list(enumerate_injections(9, 12, cap=1000))
        with pytest.raises(ValueError):
            list(enumerate_injections(3, 2))


class TestBruteForce:
    def test_examples(self):
        r = brute_force_optimum(A, "max")
        assert (r.value, r.permutation.one_based()) == (6.0, [1, 2])
        r = brute_force_optimum(A, "min")
        assert (r.value, r.permutation.one_based()) == (5.0, [2, 1])
        r = brute_force_optimum(B, "max")
        assert (r.value, r.permutation.one_based()) == (11.0, [1, 2])

    def test_tall_matrix_leaves_rows_unassigned(self):
        r = brute_force_optimum(transpose(B), "max")
        assert r.value == 11.0
        assert r.permutation.assignment.count(UNASSIGNED) == 1

    @given(small_matrices())
    @settings(max_examples=60)
    def test_negation_and_transpose(self, x):
        m = CostMatrix(x)
        top = brute_force_optimum(m, "max").value
        assert top == pytest.approx(-brute_force_optimum(-m, "min").value, abs=1e-9)
        assert top == pytest.approx(brute_force_optimum(transpose(m), "max").value, abs=1e-9)


def test_row_maxima_and_transpose_examples():
    assert row_maxima_sum(A) == 7.0
    assert row_maxima_sum(B) == 12.0
    assert row_maxima_sum(CostMatrix([[-4.0]])) == -4.0
    assert transpose(A) == CostMatrix([[1, 3], [2, 5]])
    assert transpose(CostMatrix([[1, 2, 3]])).shape == (3, 1)
    assert transpose(transpose(B)) == B


class TestFormats:
    def test_csv_round_trip(self):
        assert parse_csv_matrix(format_csv_matrix(B)) == B

    def test_json_round_trip(self):
        assert parse_json_matrix(format_json_matrix(B)) == B
        doc = json.loads(format_json_matrix(B))
        assert (doc["n"], doc["m"]) == (2, 3)

    @pytest.mark.parametrize("text,where", [
        ("1,2\n3,x\n", "line 2, column 2"),
        ("1,2\n3\n", "line 2, column 2"),
        ("1,nan\n", "line 1, column 2"),
    ])
    def test_csv_errors_locate_the_cell(self, text, where):
        with pytest.raises(MatrixFormatError, match=where):
            parse_csv_matrix(text)

    def test_json_errors(self):
        with pytest.raises(MatrixFormatError):
            parse_json_matrix('{"n": 2, "m": 2, "data": [1, 2, 3]}')
        with pytest.raises(MatrixFormatError, match="line 1"):
            parse_json_matrix("{nope")

    def test_read_matrix_detects_format(self, tmp_path):
        (tmp_path / "a.csv").write_text(format_csv_matrix(A))
        (tmp_path / "a.txt").write_text(format_json_matrix(A))
        assert read_matrix(tmp_path / "a.csv") == A
        assert read_matrix(tmp_path / "a.txt") == A


def test_lexicographic_tie_break_matches_itertools():
    m = CostMatrix(np.ones((2, 3)))
    first = next(itertools.permutations(range(3), 2))
    assert brute_force_optimum(m, "max").permutation.assignment == first
