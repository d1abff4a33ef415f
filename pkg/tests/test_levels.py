import math
from fractions import Fraction

import numpy as np
import pytest

from multispec.deformation import deformation, point, rank_and_normalize
from multispec.levels import (build_levels, build_generalized_levels,
                              canonical, effective_exponent, evaluate_level,
                              is_strict, level_eq, lmax, lmin, lmono, lpow,
                              lprod, sol_lambda, subst_lambda,
                              PermutationBudgetExceeded)
from multispec.monomials import mono, tau
from multispec.semigroup import run_pipeline


def fam_for(rows, zeros=frozenset()):
    d = deformation(rows)
    pl = run_pipeline(d, None, point(zero_blocks=zeros))
    return d, build_levels(pl)


def test_sol_lambda_examples():
    assert sol_lambda(mono("t1/l4"), 4) == mono("t1")
    assert sol_lambda(mono("t3/(l4*l5)"), 4) == mono("t3/l5")
    assert sol_lambda(mono("l4^(-1)"), 4) == mono("1")
    with pytest.raises(ValueError):
        sol_lambda(mono("t1*l4"), 4)


def test_levels_normal_type():
    d, fam = fam_for([[1, 0, 1], [0, 1, 1], [0, 0, 1]])
    assert level_eq(fam.rho_Lambda[1], lmono("t1"))
    assert level_eq(fam.rho_Lambda[2], lmono("t2"))
    assert level_eq(fam.rho_Lambda[3], lmono("t3/(t1*t2)"))


def test_levels_transitive_families():
    d, fam = fam_for([[1, 0, 1], [0, 1, 1], [0, 0, 1], [1, 1, 1]])
    mx = lmax(lmono("t1"), lmono("t2"))
    assert level_eq(fam.rho_Lambda[1], lprod(lmono("t1"), lpow(mx, -1)))
    assert level_eq(fam.rho_Lambda[4], mx)

    d, fam = fam_for([[1, 0, 0], [0, 1, 0], [1, 1, 1], [1, 1, 0], [0, 1, 1]])
    assert level_eq(fam.rho_Lambda[1],
                    lpow(lmax(lmono("1"), lmono("t2/(t1*t3)")), -1))
    assert level_eq(fam.rho_Lambda[3], lmono("1"))
    assert level_eq(fam.rho_Lambda[5], lmono("t3"))


def test_empty_branch_set_gives_one():
    # an action whose parameter never appears negatively yields the constant
    d = deformation([[1, 0], [0, 1]])
    fam = build_levels(run_pipeline(d, None, point()))
    assert set(fam.rho_stages) == set()


def test_levels_require_non_fixed_point():
    d = deformation([[1, 0, 1], [0, 1, 1]])
    pl = run_pipeline(d, None, point(zero_blocks={1, 2}))
    with pytest.raises(ValueError):
        build_levels(pl)


def test_effective_exponent_examples():
    e = lmax(lmono("t1"), lmono("t2"))
    assert effective_exponent(e, {1: Fraction(1)}) == 0
    assert effective_exponent(lmono("1"), {1: Fraction(5)}) == 0
    e = lmin(lmono("1"), lmono("t1*t3/t2"))
    assert effective_exponent(e, {1: Fraction(1)}) == 1


def test_is_strict_examples():
    d, fam = fam_for([[1, 0, 0], [0, 1, 0], [1, 1, 1], [1, 1, 0], [0, 1, 1]])
    assert fam.strict == {1: True, 2: True, 3: False, 4: True, 5: True}
    d, fam = fam_for([[1, 0, 1], [0, 1, 1], [0, 0, 1], [1, 1, 1]])
    assert all(fam.strict.values())
    d, fam = fam_for([[1, 0, 0], [0, 1, 0], [0, 0, 1], [1, 0, 1], [0, 1, 1]])
    assert all(fam.strict.values())


def test_last_action_always_strict():
    for rows in ([[1, 0, 1], [0, 1, 1], [0, 0, 1], [1, 1, 1]],
                 [[1, 0, 0], [0, 1, 0], [1, 1, 1], [1, 1, 0], [0, 1, 1]],
                 [[1, 0, 0], [0, 1, 0], [0, 0, 1], [1, 0, 1], [0, 1, 1]]):
        d, fam = fam_for(rows)
        last = fam.elim_order[-1] if fam.elim_order else d.ell
        assert fam.strict[last]


def test_non_degenerate_always_strict():
    for rows in ([[1, 0], [0, 1]], [[3, 2], [1, 1]],
                 [[1, 1, 0], [0, 1, 1]], [[1, 0, 1], [0, 1, 1], [0, 0, 1]]):
        d, fam = fam_for(rows)
        assert all(fam.strict.values())


def test_generalized_levels():
    d = deformation([[1, 0, 0], [0, 1, 0], [1, 1, 1], [1, 1, 0], [0, 1, 1]])
    p = point()
    ghat = build_generalized_levels(d, rank_and_normalize(d, p), p)
    assert all(ghat.strict.values())
    # the problematic action gains a genuine decay branch
    assert not level_eq(ghat.rho_Lambda[3], lmono("1"))

    # single action: only the identity ordering
    d1 = deformation([[1, 1]])
    g1 = build_generalized_levels(d1, rank_and_normalize(d1, p), p)
    f1 = build_levels(run_pipeline(d1, None, p))
    assert level_eq(g1.rho_Lambda[1], f1.rho_Lambda[1])

    # the generalized family of a non-degenerate action equals the plain one
    d324 = deformation([[1, 0, 1], [0, 1, 1], [0, 0, 1]])
    g = build_generalized_levels(d324, rank_and_normalize(d324, p), p)
    f = build_levels(run_pipeline(d324, None, p))
    for j in range(1, 4):
        assert level_eq(g.rho_Lambda[j], f.rho_Lambda[j])

    with pytest.raises(PermutationBudgetExceeded):
        build_generalized_levels(d, rank_and_normalize(d, p), p, max_perms=3)


def test_evaluate_level_examples():
    d, fam = fam_for([[1, 0, 1], [0, 1, 1], [0, 0, 1], [1, 1, 1]])
    assert math.isclose(evaluate_level(fam.rho_Lambda[4], {1: 2, 2: 5, 3: 1}), 5.0)
    assert evaluate_level(lmono("1"), {1: 3}) == 1.0
    d, fam = fam_for([[1, 0, 1], [0, 1, 1], [0, 0, 1]])
    assert math.isclose(evaluate_level(fam.rho_Lambda[3], {1: 2, 2: 3, 3: 12}), 2.0)


def test_canonical_identities():
    # products and powers distribute through the lattice nodes
    e1 = lprod(lmono("t1"), lpow(lmax(lmono("t1"), lmono("t2")), -1))
    assert level_eq(e1, lmin(lmono("1"), lmono("t1/t2")))
    e2 = lpow(lmax(lmono("1"), lmono("t2/(t1*t3)")), -1)
    assert level_eq(e2, lmin(lmono("1"), lmono("t1*t3/t2")))
    # operand order is irrelevant
    assert level_eq(lmax(lmono("t1"), lmono("t2")),
                    lmax(lmono("t2"), lmono("t1")))


def test_roundtrip_scales_numerically():
    # evaluating the restricted levels reproduces the selected scales
    rng = np.random.default_rng(42)
    for rows in ([[1, 0, 1], [0, 1, 1], [0, 0, 1], [1, 1, 1]],
                 [[1, 0, 0], [0, 1, 0], [0, 0, 1], [1, 0, 1], [0, 1, 1]],
                 [[1, 0, 0], [0, 1, 0], [1, 1, 1], [1, 1, 0], [0, 1, 1]]):
        d = deformation(rows)
        pl = run_pipeline(d, None, point())
        fam = build_levels(pl)
        for _ in range(100):
            taus = {k: float(np.exp(rng.uniform(-2, 2)))
                    for k in pl.r.sel_cols}
            lam_vals = {j: evaluate_level(fam.rho_Lambda[j], taus)
                        for j in range(1, d.ell + 1)}
            for kpos, k in enumerate(pl.r.sel_cols):
                phi_k = 1.0
                for j in range(1, d.ell + 1):
                    phi_k *= lam_vals[j] ** float(d.entry(j, k))
                assert math.isclose(phi_k, taus[k], rel_tol=1e-10)


def test_effective_exponent_matches_numeric_slope():
    rng = np.random.default_rng(7)
    for rows in ([[1, 0, 1], [0, 1, 1], [0, 0, 1], [1, 1, 1]],
                 [[1, 0, 0], [0, 1, 0], [1, 1, 1], [1, 1, 0], [0, 1, 1]]):
        d = deformation(rows)
        pl = run_pipeline(d, None, point())
        fam = build_levels(pl)
        t = 1e-6
        for j in range(1, d.ell + 1):
            taus = {k: float(np.exp(rng.uniform(-0.5, 0.5)))
                    for k in pl.r.sel_cols}
            scaled = {k: taus[k] * t ** float(d.entry(j, k))
                      for k in pl.r.sel_cols}
            base = evaluate_level(fam.rho_Lambda[j], taus)
            moved = evaluate_level(fam.rho_Lambda[j], scaled)
            slope = math.log(moved / base) / math.log(t)
            exact = effective_exponent(
                fam.rho_Lambda[j],
                {k: d.entry(j, k) for k in range(1, d.m + 1)})
            assert abs(slope - float(exact)) < 0.05


def test_two_sided_scaling_bound():
    # scaling one selected coordinate moves each level by at most its
    # leaf-exponent bound in either direction
    rng = np.random.default_rng(11)
    rows = [[1, 0, 0], [0, 1, 0], [0, 0, 1], [1, 0, 1], [0, 1, 1]]
    d = deformation(rows)
    pl = run_pipeline(d, None, point())
    fam = build_levels(pl)
    from multispec.levels import _leaves
    for j, e in fam.rho_Lambda.items():
        n_bound = max((abs(leaf.exponent(tau(k))) for leaf in _leaves(e)
                       for k in pl.r.sel_cols), default=Fraction(0))
        for t in (2.0, 10.0, 100.0):
            for k in pl.r.sel_cols:
                taus = {kk: float(np.exp(rng.uniform(-1, 1)))
                        for kk in pl.r.sel_cols}
                scaled = dict(taus)
                scaled[k] = taus[k] * t
                r0 = evaluate_level(e, taus)
                r1 = evaluate_level(e, scaled)
                bound = t ** float(n_bound)
                assert r1 <= r0 * bound * (1 + 1e-9)
                assert r1 >= r0 / bound * (1 - 1e-9)
