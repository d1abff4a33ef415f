from fractions import Fraction

import numpy as np
import pytest
import scipy.optimize

from multispec.linear import (mat, rank, inverse, solve_unique, sigma_for,
                              nonneg_solution, cone_feasible, in_row_space)


def test_rank_and_inverse():
    assert rank(mat([[1, 2], [2, 4]])) == 1
    assert rank(mat([[1, 0], [0, 1]])) == 2
    assert rank([]) == 0
    m = mat([[3, 2], [1, 1]])
    inv = inverse(m)
    assert inv == mat([[1, -2], [-1, 3]])
    with pytest.raises(ValueError):
        inverse(mat([[1, 1], [1, 1]]))
    assert solve_unique(m, [Fraction(1), Fraction(0)]) == \
        [Fraction(1), Fraction(-1)]


def test_in_row_space():
    rows = mat([[1, 1, 0], [0, 1, 1]])
    assert in_row_space(rows, [Fraction(1), Fraction(2), Fraction(1)])
    assert not in_row_space(rows, [Fraction(1), Fraction(0), Fraction(0)])


def test_sigma_examples():
    assert sigma_for([[3, 2], [1, 1]]) == 1
    assert sigma_for([[Fraction(1, 2), 1], [0, 1]]) == 2
    assert sigma_for([[0, 0]]) == 1
    assert sigma_for([[Fraction(2, 1), Fraction(4, 1)]]) == Fraction(1, 2)


def test_nonneg_solution_exactness():
    cols = [[Fraction(1), Fraction(0)], [Fraction(1), Fraction(1)],
            [Fraction(-1), Fraction(2)]]
    target = [Fraction(1), Fraction(5)]
    x = nonneg_solution(cols, target)
    assert x is not None and all(xi >= 0 for xi in x)
    for i in range(2):
        assert sum(x[j] * cols[j][i] for j in range(3)) == target[i]


def test_nonneg_solution_against_float_lp():
    rng = np.random.default_rng(321)
    agree = 0
    for _ in range(200):
        n_cols = int(rng.integers(2, 6))
        dim = int(rng.integers(2, 5))
        cols = [[Fraction(int(rng.integers(-3, 4))) for _ in range(dim)]
                for _ in range(n_cols)]
        target = [Fraction(int(rng.integers(-4, 5))) for _ in range(dim)]
        exact = nonneg_solution(cols, target)
        a_eq = np.array([[float(cols[j][i]) for j in range(n_cols)]
                         for i in range(dim)])
        res = scipy.optimize.linprog(
            c=np.zeros(n_cols), A_eq=a_eq,
            b_eq=np.array([float(t) for t in target]),
            bounds=[(0, None)] * n_cols, method="highs")
        if exact is not None:
            assert res.status == 0, (cols, target)
            for i in range(dim):
                assert sum(exact[j] * cols[j][i]
                           for j in range(n_cols)) == target[i]
            assert all(x >= 0 for x in exact)
        else:
            assert res.status != 0, (cols, target)
        agree += 1
    assert agree == 200


def test_cone_feasible_scaling_invariance():
    cols = [[Fraction(1), Fraction(-1)], [Fraction(0), Fraction(1)]]
    target = [Fraction(2), Fraction(1)]
    assert cone_feasible(cols, target)
    assert cone_feasible(cols, [4 * t for t in target])
    bad = [Fraction(-1), Fraction(0)]
    assert not cone_feasible(cols, bad)
    assert not cone_feasible(cols, [3 * t for t in bad])
