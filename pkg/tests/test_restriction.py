
import pytest

from multispec.deformation import (deformation, point, rank_and_normalize,
                                   derive_monomials)
from multispec.monomials import mono, pair
from multispec.restriction import (log_at_exp_beta, check_same_rank,
                                   check_rank_plus_one, check_restriction,
                                   check_H2_subfamily, extended_matrix,
                                   RestrictionCase)
from multispec.semigroup import run_pipeline, radical_member, Verdict


def test_log_at_exp_beta():
    assert log_at_exp_beta(mono("t2/(t1*t3)"), [1, 1, 1]) == -1
    assert log_at_exp_beta(mono("t1*t3/t2"), [0, 1, 0]) == -1
    assert log_at_exp_beta(mono("1"), [1, 2, 3]) == 0
    # parameter exponents are dropped
    assert log_at_exp_beta(mono("t1/l4"), [2, 0, 0]) == 2


def test_row_pairings():
    for rows in ([[1, 1, 0], [0, 1, 1]], [[3, 2], [1, 1]],
                 [[1, 0, 1], [0, 1, 1], [0, 0, 1]],
                 [[1, 1, 0, 1], [0, 1, 1, 0]]):
        d = deformation(rows)
        r = rank_and_normalize(d, point())
        der = derive_monomials(d, r)
        # solved inverses pair with the selected rows by Kronecker delta
        for jpos, j in enumerate(r.sel_rows):
            for ipos, i in enumerate(r.sel_rows):
                got = log_at_exp_beta(der.phi_inv[j], list(d.row(i)))
                assert got == (1 if i == j else 0)
        # quotients pair to zero with every row of the matrix
        for k, psi in der.psi.items():
            for i in range(1, d.ell + 1):
                assert log_at_exp_beta(psi, list(d.row(i))) == 0


def test_value_log_dichotomy():
    # zero-valued stage pairs pair non-negatively with the matrix rows,
    # nonzero-valued ones pair to zero
    for rows, zeros in (([[1, 1, 0], [0, 1, 1]], set()),
                        ([[1, 1, 0, 1], [0, 1, 1, 0]], {3})):
        d = deformation(rows)
        p = point(zero_blocks=zeros)
        pl = run_pipeline(d, None, p)
        for pr in pl.Fq:
            for i in range(1, d.ell + 1):
                lv = log_at_exp_beta(pr.f, list(d.row(i)))
                if pr.v.is_zero:
                    assert lv >= 0
                else:
                    assert lv == 0


def test_same_rank_examples():
    d = deformation([[1, 0, 0], [0, 1, 1], [0, 0, 1]])
    p = point()
    v = check_same_rank(d, rank_and_normalize(d, p), p, [1, 1, 1])
    assert v.holds and v.sufficient_nonneg_combination
    assert v.case is RestrictionCase.SAME_RANK

    d242 = deformation([[1, 0, 1], [0, 1, 1], [0, 0, 1]])
    p = point()
    v = check_same_rank(d242, rank_and_normalize(d242, p), p, [1, 1, 1])
    assert not v.holds
    assert any(str(w.pair.f) == "t1^(-1)*t2^(-1)*t3" for w in v.witnesses)
    p = point(zero_blocks={2})
    v = check_same_rank(d242, rank_and_normalize(d242, p), p, [1, 1, 1])
    assert v.holds

    d_low = deformation([[1, 1, 0], [0, 1, 1]])
    p3 = point(zero_blocks={3})
    with pytest.raises(ValueError):
        check_same_rank(d_low, rank_and_normalize(d_low, p3), p3, [1, 0, 0])


def test_rank_plus_one_examples():
    dM = deformation([[1, 0, 0], [0, 1, 0]])
    p = point(zero_blocks={3})
    v = check_rank_plus_one(dM, rank_and_normalize(dM, p), p, [0, 0, 1])
    assert v.holds and v.pivot == 3

    d250 = deformation([[1, 1, 0, 1], [0, 1, 1, 0]])
    p = point(zero_blocks={3})
    r = rank_and_normalize(d250, p)
    v = check_rank_plus_one(d250, r, p, [1, 1, 1, 0])
    assert not v.holds
    assert any(str(w.pair.f) == "t1*t4^(-1)" and "nonzero" in w.condition
               for w in v.witnesses)
    v = check_rank_plus_one(d250, r, p, [1, 1, 1, 1])
    assert v.holds
    with pytest.raises(ValueError):
        check_rank_plus_one(d250, r, p, [1, 1, 0, 1])  # in the row space


def test_transformed_monomials():
    dM = deformation([[1, 0, 0], [0, 1, 0]])
    p = point(zero_blocks={3})
    v = check_rank_plus_one(dM, rank_and_normalize(dM, p), p, [0, 0, 1])
    assert v.transformed["phi_inv"][1] == mono("t1")
    assert v.transformed["phi_inv_new"][3] == mono("t3")


def test_dispatch():
    d = deformation([[1, 1, 0], [0, 1, 1]])
    p = point(zero_blocks={3})
    v = check_restriction(d, p, [1, 1, 1])
    assert v.case is RestrictionCase.RANK_PLUS_ONE and v.holds


def test_restriction_verdicts_match_membership():
    # a failing verdict's witness has no power in the extended stage
    d = deformation([[1, 1, 0], [0, 1, 1]])
    p = point(zero_blocks={3})
    v = check_rank_plus_one(d, rank_and_normalize(d, p), p, [1, 0, 0])
    assert not v.holds
    d_b = extended_matrix(d, [1, 0, 0])
    pl_b = run_pipeline(d_b, None, p)
    for w in v.witnesses:
        if w.pair.v.is_zero:
            assert radical_member(w.pair, pl_b.Fq).verdict is Verdict.NO


def test_h2_subfamily():
    rep = check_H2_subfamily([{1}, {2}, {3}], {1, 2})
    assert rep.holds and not rep.failing_pairs
    rep = check_H2_subfamily([{1, 2, 3}, {2, 3}, {3}], {1, 2})
    assert rep.holds
    assert rep.steps[0]["closed_form"] == {1: "t1", 2: "t2/t1", 3: "t3/t2"}
    rep = check_H2_subfamily([{1, 2}, {2, 3}], {1})
    assert not rep.holds and rep.failing_pairs == ((1, 2),)
