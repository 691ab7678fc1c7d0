"""Stable-category operators: dual, transpose, linkage, cosyzygy, X(-).

Everything is derived from two constructions: the dual of a map of free
modules (transpose the matrix, negate the twists) and syzygy extraction.
The dual module M* is the kernel of the dualized presentation; the
transpose Tr(M) is its cokernel; horizontal linkage is Syz_1 of the
transpose; cosyzygies dualize syzygies of the dual; and the MCM
approximation of any module is a cosyzygy of a deep syzygy, which is
where the module lands in the stable category.
"""

from __future__ import annotations

import warnings
from typing import Optional, Tuple

from .errors import UsageError
from .homs import Hom, hom_space, strip_free_summands
from .linalg import DenseMatrix
from .modules import GradedModule, free_module, invariants
from .resolution import ext_module, mcm_test, resolve, syzygy
from .rings import RingElement

__all__ = [
    "dual",
    "transpose",
    "link",
    "cosyzygy",
    "syzygy_signed",
    "tau",
    "mcm_approx",
    "mcm_approx_cm",
    "stable_part",
    "lift_map",
    "stable_hom_dims",
]


def dual(M: GradedModule, degree_cap: Optional[int] = None, check: bool = True) -> GradedModule:
    """M* = Hom(M, A); defined here for maximal Cohen-Macaulay modules."""
    if check and not mcm_test(M, degree_cap=degree_cap):
        raise UsageError("dual is only exact on maximal Cohen-Macaulay modules")
    out = ext_module(M, 0, degree_cap=degree_cap).minimized()
    out.label = f"D({M.label})" if M.label else "dual"
    return out


def transpose(M: GradedModule, degree_cap: Optional[int] = None) -> GradedModule:
    """Tr(M): cokernel of the dualized minimal presentation."""
    Mm = M.minimized()
    if Mm.num_rels == 0:
        out = GradedModule(M.ring, [], [], [], label="Tr", check=False)
        return out
    gen_degs = tuple(-b for b in Mm.rel_degs)
    rel_degs = tuple(-a for a in Mm.gen_degs)
    entries = tuple(
        tuple(Mm.presentation[i][j] for i in range(Mm.num_gens))
        for j in range(Mm.num_rels)
    )
    out = GradedModule(M.ring, gen_degs, rel_degs, entries,
                       label=f"Tr({M.label})" if M.label else "Tr", check=False)
    return out.minimized()


def link(M: GradedModule, degree_cap: Optional[int] = None, strip: bool = True) -> GradedModule:
    """Horizontal linkage: Syz_1 of the transpose."""
    Mm = M.minimized()
    if strip:
        stable, frees = strip_free_summands(Mm)
        if frees:
            warnings.warn("link: free summands stripped from the input")
            Mm = stable
    tr = transpose(Mm, degree_cap=degree_cap)
    if tr.minimized().num_gens == 0:
        return tr.minimized()
    out = syzygy(tr, 1, degree_cap=degree_cap)
    out.label = f"link({M.label})" if M.label else "link"
    return out


def cosyzygy(M: GradedModule, n: int, degree_cap: Optional[int] = None) -> GradedModule:
    """Syz_{-n}(M) for n >= 1, computed as the dual of Syz_n(M*)."""
    if n < 1:
        raise UsageError("cosyzygy index must be >= 1")
    if not mcm_test(M, degree_cap=degree_cap):
        raise UsageError("cosyzygy requires a maximal Cohen-Macaulay module")
    Md = dual(M, degree_cap=degree_cap, check=False)
    S = syzygy(Md, n, degree_cap=degree_cap)
    S = S.minimized()
    if S.num_gens == 0:
        return S
    out = dual(S, degree_cap=degree_cap, check=False)
    out.label = f"Syz{-n}({M.label})" if M.label else f"Syz{-n}"
    return out


def syzygy_signed(M: GradedModule, n: int, degree_cap: Optional[int] = None) -> GradedModule:
    if n >= 0:
        return syzygy(M, n, degree_cap=degree_cap)
    return cosyzygy(M, -n, degree_cap=degree_cap)


def tau(M: GradedModule, d: Optional[int] = None, degree_cap: Optional[int] = None) -> GradedModule:
    """Auslander-Reiten translate over a Gorenstein ring: Syz_{2-d}."""
    if d is None:
        d = M.ring.krull_dim()
    return syzygy_signed(M, 2 - d, degree_cap=degree_cap)


def stable_part(M: GradedModule) -> Tuple[GradedModule, list]:
    return strip_free_summands(M)


def mcm_approx(M: GradedModule, degree_cap: Optional[int] = None) -> GradedModule:
    """Maximal Cohen-Macaulay approximation X(M), up to free summands.

    Computed in the stable category: push M down to a deep syzygy
    (always MCM) and come back up with cosyzygies.  For a module that is
    already MCM this is the module itself.
    """
    Mm = M.minimized()
    if Mm.num_gens == 0:
        return Mm
    if mcm_test(Mm, degree_cap=degree_cap):
        return Mm
    t = max(M.ring.krull_dim(), 1)
    S = syzygy(Mm, t, degree_cap=degree_cap).minimized()
    S, _ = strip_free_summands(S)
    if S.num_gens == 0:
        # finite projective dimension: approximation is free
        return free_module(M.ring, [0], label="X(free)")
    out = cosyzygy(S, t, degree_cap=degree_cap)
    out.label = f"X({M.label})" if M.label else "X"
    return out


def mcm_approx_cm(M: GradedModule, degree_cap: Optional[int] = None) -> GradedModule:
    """X(M) for a Cohen-Macaulay module, via duality in its codimension.

    Uses the codimension-n construction: X(M) = (Syz_n of Ext^n(M, A))*.
    Serves as the independent second route for the stable-category
    computation in mcm_approx.
    """
    Mm = M.minimized()
    ring = M.ring
    inv = invariants(Mm)
    n = ring.krull_dim() - max(inv.dim, 0)
    if n == 0:
        if not mcm_test(Mm, degree_cap=degree_cap):
            raise UsageError("codim-0 input is not Cohen-Macaulay")
        return Mm
    Mv = ext_module(Mm, n, degree_cap=degree_cap).minimized()
    if Mv.num_gens == 0:
        raise UsageError("input is not Cohen-Macaulay of the computed codimension")
    S = syzygy(Mv, n, degree_cap=degree_cap).minimized()
    out = dual(S, degree_cap=degree_cap, check=False)
    out.label = f"Xcm({M.label})" if M.label else "Xcm"
    return out


def lift_map(h: Hom, degree_cap: Optional[int] = None) -> Hom:
    """The induced map Syz_1(M) -> Syz_1(N) on first syzygies.

    Solves the relation witness Psi with Phi P = Q Psi; Psi is exactly
    the matrix of the lift on the syzygy generators.  Lifts are unique
    up to maps factoring through free modules.
    """
    M, N = h.source, h.target
    ring = M.ring
    field = ring.field
    resM = resolve(M, 2, degree_cap=degree_cap)
    resN = resolve(N, 2, degree_cap=degree_cap)
    Mm, Nm = resM.minimal, resN.minimal
    if Mm.num_gens != M.num_gens or Nm.num_gens != N.num_gens:
        raise UsageError("lift_map expects minimally presented source and target")
    SM = resM.syzygy_module(1)
    SN = resN.syzygy_module(1)
    # unknown Psi: N.num_rels x M.num_rels
    layout = []
    off = 0
    for l in range(Nm.num_rels):
        for j in range(Mm.num_rels):
            d = Mm.rel_degs[j] - Nm.rel_degs[l]
            dim = ring.hilbert_function(d)
            layout.append((l, j, off, dim, d))
            off += dim
    nunk = off
    eqs = []
    rhs_parts = []
    for k in range(Nm.num_gens):
        for j in range(Mm.num_rels):
            d_eq = Mm.rel_degs[j] - Nm.gen_degs[k]
            eq_dim = ring.hilbert_function(d_eq)
            if eq_dim == 0:
                continue
            row = DenseMatrix.zeros(field, eq_dim, nunk)
            arr = row.numpy() if field.characteristic else row.rows()
            for (l, jj, o, dim, d) in layout:
                if jj != j or dim == 0:
                    continue
                q = Nm.presentation[k][l]
                if q.is_zero():
                    continue
                mm = ring.mult_matrix(q.poly, d)
                if field.characteristic:
                    arr[:, o:o + dim] = (arr[:, o:o + dim] + mm.numpy()) % field.p
                else:
                    mrows = mm.rows()
                    for r in range(eq_dim):
                        for c in range(dim):
                            arr[r][o + c] = arr[r][o + c] + mrows[r][c]
            if field.characteristic:
                row = DenseMatrix(field, arr, _internal=True)
            else:
                row = DenseMatrix(field, arr, _internal=True)
            # rhs: coords of (Phi P)_{k j}
            acc = ring.zero()
            for i in range(Mm.num_gens):
                a, b = h.phi[k][i], Mm.presentation[i][j]
                if a.is_zero() or b.is_zero():
                    continue
                term = a * b
                acc = term if acc.is_zero() else acc + term
            coords = ring.std_coords(acc.poly, d_eq) if not acc.is_zero() else \
                [field.element(0)] * eq_dim
            eqs.append(row)
            rhs_parts.append(DenseMatrix.column(field, coords))
    if not eqs:
        sol = DenseMatrix.zeros(field, nunk, 1)
    else:
        mat = eqs[0]
        rhs = rhs_parts[0]
        for m_, r_ in zip(eqs[1:], rhs_parts[1:]):
            mat = mat.vstack(m_)
            rhs = rhs.vstack(r_)
        sol = mat.solve(rhs)
        if sol is None:
            raise UsageError("input map does not carry relations into relations")
    phi = [[None] * SM.num_gens for _ in range(SN.num_gens)]
    for (l, j, o, dim, d) in layout:
        coeffs = [sol[o + t, 0] for t in range(dim)] if dim else []
        poly = ring.poly_from_std_coords(coeffs, d) if dim else {}
        phi[l][j] = RingElement(ring, poly, d if poly else None)
    return Hom(SM, SN, tuple(tuple(r) for r in phi))


def stable_hom_dims(M: GradedModule, N: GradedModule) -> Tuple[int, int, int]:
    """(dim Hom, dim beta, dim stable Hom) in internal degree zero."""
    hs = hom_space(M, N)
    return hs.dim, hs.beta_dim(), hs.stable_dim()
