import pytest

from mcmkit.cisupport import (
    CIPresentation,
    direct_sum_annihilator_test,
    eisenbud_operators,
    support_annihilator_window,
)
from mcmkit.errors import UsageError
from mcmkit.modules import GradedModule, free_module, residue_field_module
from mcmkit.rings import WeightedPolyRing


def two_squares(p=7):
    return WeightedPolyRing(p, ["x", "y"]).quotient(["x^2", "y^2"])


def dual_numbers(p=7):
    return WeightedPolyRing(p, ["x"]).quotient(["x^2"])


def test_ci_presentation_accepts_regular_sequence():
    ci = CIPresentation.from_ring(two_squares())
    assert ci.codimension == 2


def test_ci_presentation_rejects_non_regular():
    A = WeightedPolyRing(7, ["x", "y"]).quotient(["x^2", "x*y"])
    with pytest.raises(UsageError):
        CIPresentation.from_ring(A)


def test_single_operator_is_isomorphism_on_k():
    # A = k[x]/(x^2): the single operator acts bijectively Ext^n -> Ext^(n+2)
    A = dual_numbers()
    ci = CIPresentation.from_ring(A)
    k = residue_field_module(A)
    ext = eisenbud_operators(ci, k, H=8)
    assert ext.betti[:9] == [1] * 9
    for n in range(0, 7):
        op = ext.operator(0, n)
        assert op.shape == (1, 1)
        assert op[0, 0] != 0


def test_defining_identity_exact():
    # recompute d~^2 and check it equals sum u_j t~_j by re-solving: the solve
    # succeeding at every position is the identity; spot-check dims instead
    A = two_squares()
    ci = CIPresentation.from_ring(A)
    k = residue_field_module(A)
    ext = eisenbud_operators(ci, k, H=10)
    assert ext.betti[:11] == [i + 1 for i in range(11)]
    for j in range(2):
        for n in range(0, 9):
            assert ext.operator(j, n).shape == (n + 3, n + 1)


def test_operators_commute_exactly():
    A = two_squares()
    ci = CIPresentation.from_ring(A)
    k = residue_field_module(A)
    ext = eisenbud_operators(ci, k, H=10)
    assert ext.commute_exactly()


def test_operators_jointly_surjective_on_k():
    # dim Ext^(n+2) = n + 3 and the two operators' images span it
    A = two_squares()
    ci = CIPresentation.from_ring(A)
    k = residue_field_module(A)
    ext = eisenbud_operators(ci, k, H=8)
    from mcmkit.linalg import RowSpace

    # Ext*(k) is T-free with generators in t-degrees 0 and 1, so joint
    # surjectivity holds from n >= 1 on
    for n in range(1, 6):
        span = RowSpace(A.field, ext.betti[n + 2])
        for j in range(2):
            span.add_matrix(ext.operator(j, n).transpose())
        assert span.dim == ext.betti[n + 2]


def test_free_module_trivial_operators():
    A = two_squares()
    ci = CIPresentation.from_ring(A)
    F = free_module(A, [0])
    ext = eisenbud_operators(ci, F, H=6)
    assert ext.betti[1:] == [0] * (len(ext.betti) - 1)


def test_support_k_codim_two_full_variety():
    # V*(k) = P^1: no annihilator forms up to the bound; cx = 2
    A = two_squares()
    ci = CIPresentation.from_ring(A)
    k = residue_field_module(A)
    ext = eisenbud_operators(ci, k, H=10)
    rep = support_annihilator_window(ext, tdeg_max=2)
    assert rep.ann_window[1] == []
    assert rep.ann_window[2] == []
    assert rep.cx_from_variety == 2
    assert rep.dim_estimate == 1
    assert rep.is_point is False


def test_support_periodic_module_is_point():
    # M = A/(x): periodic, cx 1, annihilator contains a linear form
    A = two_squares()
    ci = CIPresentation.from_ring(A)
    M = GradedModule(A, [0], [1], [["x"]], label="A/(x)")
    ext = eisenbud_operators(ci, M, H=10)
    rep = support_annihilator_window(ext, tdeg_max=2)
    assert len(rep.ann_window[1]) == 1
    assert rep.cx_from_variety == 1
    assert rep.is_point is True


def test_support_hypersurface_point_trivially():
    # c = 1: a periodic cokernel has variety P^0
    A = dual_numbers()
    ci = CIPresentation.from_ring(A)
    k = residue_field_module(A)
    ext = eisenbud_operators(ci, k, H=8)
    rep = support_annihilator_window(ext, tdeg_max=2)
    assert rep.cx_from_variety == 1
    assert rep.ann_window[1] == []  # the single operator acts invertibly


def test_direct_sum_annihilator_intersection():
    # A/(x) and A/(y) have distinct point supports; the sum sees both
    A = two_squares()
    ci = CIPresentation.from_ring(A)
    M1 = GradedModule(A, [0], [1], [["x"]], label="A/(x)")
    M2 = GradedModule(A, [0], [1], [["y"]], label="A/(y)")
    assert direct_sum_annihilator_test(ci, M1, M2, H=8, tdeg_max=2)


def test_distinct_points_have_distinct_windows():
    from mcmkit.cisupport import annihilator_windows_agree

    A = two_squares()
    ci = CIPresentation.from_ring(A)
    M1 = GradedModule(A, [0], [1], [["x"]], label="A/(x)")
    M2 = GradedModule(A, [0], [1], [["y"]], label="A/(y)")
    r1 = support_annihilator_window(eisenbud_operators(ci, M1, H=8), 2)
    r2 = support_annihilator_window(eisenbud_operators(ci, M2, H=8), 2)
    assert not annihilator_windows_agree(r1, r2)


def test_gulliksen_growth_matches_cx():
    # piece growth of Ext*(k): polynomial of degree cx - 1 = 1
    A = two_squares()
    k = residue_field_module(A)
    from mcmkit.resolution import growth_report

    rep = growth_report(k, H=10)
    assert rep.cx_estimate - 1 == 1
