import pytest

from mcmkit.catalog import load_catalog
from mcmkit.errors import UsageError
from mcmkit.homs import hom_space, is_isomorphic
from mcmkit.mf import coker_module, mf_transpose
from mcmkit.modules import (
    free_module,
    invariants,
    maximal_ideal_module,
    residue_field_module,
)
from mcmkit.functors import (
    cosyzygy,
    dual,
    link,
    lift_map,
    mcm_approx,
    mcm_approx_cm,
    stable_hom_dims,
    stable_part,
    tau,
    transpose,
)
from mcmkit.resolution import mcm_test, resolve, syzygy
from mcmkit.rings import WeightedPolyRing


def dual_numbers(p=7):
    return WeightedPolyRing(p, ["x"]).quotient(["x^2"])


def cusp(p=7):
    return WeightedPolyRing(p, ["x", "y"], [3, 2]).quotient(["x^2+y^3"])


def test_dual_of_free_is_free():
    A = cusp()
    F = free_module(A, [0])
    D = dual(F)
    assert D.num_gens == 1 and D.num_rels == 0


def test_dual_refuses_non_mcm():
    A = cusp()
    k = residue_field_module(A)
    with pytest.raises(UsageError):
        dual(k)


def test_double_dual_identity():
    A = cusp()
    m = maximal_ideal_module(A)
    DD = dual(dual(m))
    assert is_isomorphic(DD, m)


def test_double_dual_on_catalog():
    cat = load_catalog("ade:A3:dim1")
    for name, M in cat.modules():
        assert is_isomorphic(dual(dual(M)), M), name


def test_dual_of_coker_is_coker_of_transpose():
    cat = load_catalog("ade:A4:dim1")
    for (name, mf), (_, M) in zip(cat.mfs, cat.modules()):
        D1 = dual(M)
        D2 = coker_module(mf_transpose(mf), ring=cat.ring)
        assert is_isomorphic(D1, D2), name


def test_transpose_of_free_is_zero():
    A = cusp()
    F = free_module(A, [0])
    assert transpose(F).minimized().num_gens == 0


def test_transpose_of_k_over_dual_numbers():
    A = dual_numbers()
    k = residue_field_module(A)
    tr = transpose(k)
    assert is_isomorphic(tr, k)


def test_transpose_is_dual_of_second_syzygy():
    # Tr(M) = (Syz_2 M)* for MCM M
    cat = load_catalog("ade:A2:dim1")
    for name, M in cat.modules():
        t1 = transpose(M)
        t2 = dual(syzygy(M, 2))
        assert is_isomorphic(t1, t2), name


def test_link_involution_on_catalog():
    cat = load_catalog("ade:A2:dim1")
    for name, M in cat.modules():
        assert is_isomorphic(link(link(M)), M), name


def test_link_equals_cosyzygy_of_dual():
    # Syz_{-1}(D(M)) = link(M)
    cat = load_catalog("ade:A3:dim1")
    for name, M in cat.modules():
        lhs = cosyzygy(dual(M), 1)
        rhs = link(M)
        assert is_isomorphic(lhs, rhs), name


def test_cosyzygy_inverts_syzygy():
    cat = load_catalog("ade:A2:dim1")
    name, M = cat.modules()[0]
    S1 = syzygy(M, 1)
    back = cosyzygy(S1, 1)
    assert is_isomorphic(back, M)


def test_cosyzygy_two_route_oracle_against_shift():
    # Syz_-1 of an MF cokernel: the dual route must agree with the shift route
    from mcmkit.mf import mf_shift

    cat = load_catalog("ade:A4:dim1")
    for (name, mf), (_, M) in zip(cat.mfs, cat.modules()):
        route1 = cosyzygy(M, 1)
        route2 = coker_module(mf_shift(mf), ring=cat.ring)
        assert is_isomorphic(route1, route2), name


def test_syzygy_of_cosyzygy():
    cat = load_catalog("ade:A3:dim1")
    name, M = cat.modules()[1]
    C1 = cosyzygy(M, 1)
    back = syzygy(C1, 1)
    assert is_isomorphic(back, M)


def test_tau_dimension_one_is_first_syzygy():
    cat = load_catalog("ade:A2:dim1")
    name, M = cat.modules()[0]
    assert is_isomorphic(tau(M), syzygy(M, 1))


def test_tau_dimension_two_is_identity():
    cat = load_catalog("ade:A1:dim2")
    name, M = cat.modules()[0]
    assert is_isomorphic(tau(M), M)


def test_mcm_approx_of_mcm_is_itself():
    cat = load_catalog("ade:A2:dim1")
    name, M = cat.modules()[0]
    assert is_isomorphic(mcm_approx(M), M)


def test_mcm_approx_of_k_over_curve():
    # X(k) over a 1-dim hypersurface: MCM, and X(k) = (Syz_1 k)* stably
    A = cusp()
    k = residue_field_module(A)
    X = mcm_approx(k)
    assert mcm_test(X)
    expect = dual(syzygy(k, 1))
    xs, _ = stable_part(X)
    es, _ = stable_part(expect)
    assert is_isomorphic(xs, es)


def test_mcm_approx_two_routes_agree():
    # k is CM of codim = dim A: the duality construction must agree stably
    A = cusp()
    k = residue_field_module(A)
    a, _ = stable_part(mcm_approx(k))
    b, _ = stable_part(mcm_approx_cm(k))
    assert is_isomorphic(a, b)


def test_mcm_approx_commutes_with_syzygy():
    # X(Syz_1(M)) = Syz_1(X(M)) stably
    A = cusp()
    k = residue_field_module(A)
    lhs, _ = stable_part(mcm_approx(syzygy(k, 1)))
    rhs, _ = stable_part(syzygy(mcm_approx(k), 1))
    assert is_isomorphic(lhs, rhs)


def test_lift_of_identity_is_cover_unit():
    from mcmkit.homs import identity_hom

    cat = load_catalog("ade:A2:dim1")
    name, M = cat.modules()[0]
    f1 = lift_map(identity_hom(M))
    assert f1.is_cover_unit()


def test_lift_commutes_with_differential():
    # Psi d_2^M = d_2^N Psi' is implied; check Phi d_1 = d_1 Psi directly
    cat = load_catalog("ade:A4:dim1")
    (n1, M), (n2, N) = cat.modules()[0], cat.modules()[1]
    hs = hom_space(M, N)
    if hs.dim == 0:
        pytest.skip("no maps between these vertices")
    f = hs.basis()[0]
    f1 = lift_map(f)
    ring = M.ring
    resM = resolve(M, 2)
    resN = resolve(N, 2)
    P = resM.minimal.presentation
    Q = resN.minimal.presentation
    for k in range(N.num_gens):
        for j in range(M.num_rels):
            lhs = ring.zero()
            for i in range(M.num_gens):
                if f.phi[k][i].is_zero() or P[i][j].is_zero():
                    continue
                t = f.phi[k][i] * P[i][j]
                lhs = t if lhs.is_zero() else lhs + t
            rhs = ring.zero()
            for l in range(N.num_rels):
                if Q[k][l].is_zero() or f1.phi[l][j].is_zero():
                    continue
                t = Q[k][l] * f1.phi[l][j]
                rhs = t if rhs.is_zero() else rhs + t
            assert (lhs - rhs).is_zero()


def test_stable_hom_from_free_vanishes():
    A = cusp()
    F = free_module(A, [0])
    m = maximal_ideal_module(A)
    dim, beta, stab = stable_hom_dims(F, m)
    assert stab == 0


def test_stable_hom_k_k_dual_numbers():
    A = dual_numbers()
    k = residue_field_module(A)
    dim, beta, stab = stable_hom_dims(k, k)
    assert (dim, beta, stab) == (1, 0, 1)


def test_stable_identity_nonzero():
    cat = load_catalog("ade:A2:dim1")
    name, M = cat.modules()[0]
    dim, beta, stab = stable_hom_dims(M, M)
    assert stab >= 1


def test_dualized_ses_is_exact_dimensionwise():
    # 0 -> Syz1(M) -> F -> M -> 0 dualizes to an exact sequence of MCMs
    cat = load_catalog("ade:A2:dim1")
    name, M = cat.modules()[0]
    S = syzygy(M, 1)
    F = free_module(M.ring, M.gen_degs)
    DM, DS, DF = dual(M), dual(S), dual(F)
    for d in range(-6, 7):
        assert DF.hilbert_function(d) == DM.hilbert_function(d) + DS.hilbert_function(d)


def test_e_multiplicity_preserved_by_dual():
    cat = load_catalog("ade:A3:dim1")
    for name, M in cat.modules():
        e1 = invariants(M).multiplicity_e
        e2 = invariants(dual(M)).multiplicity_e
        assert e1 == e2, name
