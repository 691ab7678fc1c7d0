"""Matrix factorizations of hypersurface equations.

A matrix factorization of f is a pair of square homogeneous matrices
with phi psi = psi phi = f . Id over the ambient polynomial ring.  The
cokernel of phi mod f is a maximal Cohen-Macaulay module over Q/(f),
and the two-periodicity of its resolution is the shift phi <-> psi.

Twists are recovered from the nonzero entries: fixing the first row
degree to 0 propagates along rows and columns; validation then reduces
to exact polynomial matrix products.
"""

from __future__ import annotations

from typing import Optional, Sequence, Tuple

from .errors import Inconclusive, UsageError
from .linalg import DenseMatrix
from .modules import GradedModule
from .rings import QuotientRing, RingElement, WeightedPolyRing

__all__ = [
    "MatrixFactorization",
    "mf_shift",
    "mf_transpose",
    "coker_module",
    "from_resolution_tail",
]


def _solve_twists(ambient: QuotientRing, entries) -> Tuple[Tuple[int, ...], Tuple[int, ...]]:
    """Row/column degrees making the matrix homogeneous (row 0 pinned to 0)."""
    n = len(entries)
    row = [None] * n
    col = [None] * n
    degs = {}
    for i in range(n):
        for j in range(n):
            e = entries[i][j]
            if not e.is_zero():
                degs[(i, j)] = ambient.ambient.poly_degree(e.poly)
    # BFS over the bipartite constraint graph col_j - row_i = deg(i, j)
    for start in range(n):
        if row[start] is not None:
            continue
        row[start] = 0
        stack = [("r", start)]
        while stack:
            kind, idx = stack.pop()
            if kind == "r":
                for j in range(n):
                    d = degs.get((idx, j))
                    if d is None:
                        continue
                    want = row[idx] + d
                    if col[j] is None:
                        col[j] = want
                        stack.append(("c", j))
                    elif col[j] != want:
                        raise UsageError("degree-inconsistent matrix factorization entries")
            else:
                for i in range(n):
                    d = degs.get((i, idx))
                    if d is None:
                        continue
                    want = col[idx] - d
                    if row[i] is None:
                        row[i] = want
                        stack.append(("r", i))
                    elif row[i] != want:
                        raise UsageError("degree-inconsistent matrix factorization entries")
    row = [0 if r is None else r for r in row]
    col = [0 if c is None else c for c in col]
    return tuple(row), tuple(col)


class MatrixFactorization:
    """A pair (phi, psi) with phi psi = psi phi = f . Id over k[x_1..x_m]."""

    def __init__(self, ambient: WeightedPolyRing, f, phi, psi, label: str = ""):
        self.poly_ring = ambient.quotient([]) if isinstance(ambient, WeightedPolyRing) else ambient
        if self.poly_ring.relations:
            raise UsageError("matrix factorizations live over the ambient polynomial ring")
        self.label = label
        self.f = self.poly_ring.element(f)
        if self.f.is_zero() or self.f.degree is None:
            raise UsageError("hypersurface equation must be nonzero and homogeneous")
        n = len(phi)
        if n == 0 or any(len(r) != n for r in phi) or len(psi) != n or any(len(r) != n for r in psi):
            raise UsageError("phi and psi must be square of the same size")
        self.size = n
        self.phi = tuple(tuple(self.poly_ring.element(e) for e in row) for row in phi)
        self.psi = tuple(tuple(self.poly_ring.element(e) for e in row) for row in psi)
        self.row_degs, self.col_degs = _solve_twists(self.poly_ring, self.phi)
        self._quotient: Optional[QuotientRing] = None

    def __repr__(self):
        tag = self.label or "mf"
        return f"<{tag}: {self.size}x{self.size} of {self.f!r}>"

    def validate(self) -> bool:
        """Both products equal f . Id exactly."""
        for a, b in ((self.phi, self.psi), (self.psi, self.phi)):
            for i in range(self.size):
                for j in range(self.size):
                    acc = self.poly_ring.zero()
                    for k in range(self.size):
                        x, y = a[i][k], b[k][j]
                        if x.is_zero() or y.is_zero():
                            continue
                        term = x * y
                        acc = term if acc.is_zero() else acc + term
                    expect = self.f if i == j else self.poly_ring.zero()
                    if not (acc - expect).is_zero():
                        return False
        return True

    def is_reduced(self) -> bool:
        """No unit entries in either matrix."""
        for grid in (self.phi, self.psi):
            for row in grid:
                for e in row:
                    if e.is_unit():
                        return False
        return True

    def quotient_ring(self) -> QuotientRing:
        if self._quotient is None:
            self._quotient = self.poly_ring.ambient.quotient([self.f.poly])
        return self._quotient


def mf_shift(mf: MatrixFactorization) -> MatrixFactorization:
    """Swap phi and psi: realizes Syz_1 on cokernels."""
    return MatrixFactorization(
        mf.poly_ring, mf.f.poly,
        [[e for e in row] for row in mf.psi],
        [[e for e in row] for row in mf.phi],
        label=f"shift({mf.label})" if mf.label else "shift",
    )


def mf_transpose(mf: MatrixFactorization) -> MatrixFactorization:
    """Transpose both matrices: realizes the dual on cokernels."""
    n = mf.size
    return MatrixFactorization(
        mf.poly_ring, mf.f.poly,
        [[mf.phi[j][i] for j in range(n)] for i in range(n)],
        [[mf.psi[j][i] for j in range(n)] for i in range(n)],
        label=f"tr({mf.label})" if mf.label else "tr",
    )


def coker_module(mf: MatrixFactorization, ring: Optional[QuotientRing] = None,
                 validate: bool = True) -> GradedModule:
    """coker(phi) as a graded module over Q/(f); trivial blocks stripped."""
    if validate and not mf.validate():
        raise UsageError("matrix factorization does not multiply to f . Id")
    A = ring if ring is not None else mf.quotient_ring()
    entries = [[A.element(e.poly) for e in row] for row in mf.phi]
    M = GradedModule(A, mf.row_degs, mf.col_degs, entries,
                     label=f"coker({mf.label})" if mf.label else "coker", check=False)
    return M.minimized()


def from_resolution_tail(M: GradedModule, H: int = 8,
                         degree_cap: Optional[int] = None) -> Tuple[MatrixFactorization, int]:
    """Extract a matrix factorization from the 2-periodic resolution tail.

    Returns (mf, n) with coker(mf) isomorphic to Syz_n(M).  The lift of
    the differential to the polynomial ring is the normal form itself;
    the companion matrix is solved from phi psi = f . Id, which succeeds
    exactly once the resolution has stabilized.
    """
    from .resolution import resolve

    ring = M.ring
    if len(ring.relations) != 1:
        raise UsageError("resolution-tail extraction needs a hypersurface ring")
    fpoly = ring.relations[0]
    poly_ring = ring.ambient.quotient([])
    f = poly_ring.element(fpoly)
    df = f.degree
    res = resolve(M, H + 1, degree_cap=degree_cap)
    for n in range(H - 1):
        step = res.differential(n + 1)
        bn, bn1 = len(step.row_degs), len(step.col_degs)
        if bn == 0 or bn != bn1:
            continue
        phi = [[poly_ring.element(step.entries[i][j].poly)
                for j in range(bn1)] for i in range(bn)]
        psi = _solve_companion(poly_ring, f, phi, step.row_degs, step.col_degs)
        if psi is None:
            continue
        mf = MatrixFactorization(poly_ring, f.poly,
                                 [[e.poly for e in row] for row in phi],
                                 [[e.poly for e in row] for row in psi],
                                 label=f"tail{n}({M.label})" if M.label else f"tail{n}")
        if mf.validate():
            return mf, n
    raise Inconclusive(
        f"inconclusive: resolution did not stabilize to a matrix factorization within {H} steps")


def _solve_companion(poly_ring: QuotientRing, f: RingElement, phi,
                     row_degs: Sequence[int], col_degs: Sequence[int]):
    """Solve phi psi = f . Id for psi over the polynomial ring."""
    n = len(phi)
    df = f.degree
    field = poly_ring.field
    psi = [[None] * n for _ in range(n)]
    for j in range(n):
        # unknown column j of psi: entries psi[k][j] of degree df + row_degs[j] - col_degs[k]
        layout = []
        off = 0
        for k in range(n):
            d = df + row_degs[j] - col_degs[k]
            dim = poly_ring.hilbert_function(d)
            layout.append((off, dim, d))
            off += dim
        nunk = off
        eq_rows = []
        rhs_rows = []
        for i in range(n):
            d_eq = df + row_degs[j] - row_degs[i]
            eq_dim = poly_ring.hilbert_function(d_eq)
            row_block = DenseMatrix.zeros(field, eq_dim, nunk)
            for k in range(n):
                e = phi[i][k]
                o, dim, d = layout[k]
                if e.is_zero() or dim == 0 or eq_dim == 0:
                    continue
                mm = poly_ring.mult_matrix(e.poly, d)
                sub = DenseMatrix.zeros(field, eq_dim, nunk)
                if field.characteristic:
                    arr = sub.numpy()
                    arr[:, o:o + dim] = mm.numpy()
                    sub = DenseMatrix(field, arr, _internal=True)
                else:
                    rows = sub.rows()
                    mrows = mm.rows()
                    for r in range(eq_dim):
                        for c in range(dim):
                            rows[r][o + c] = mrows[r][c]
                    sub = DenseMatrix(field, rows, _internal=True)
                row_block = row_block + sub
            eq_rows.append(row_block)
            target = [field.element(0)] * eq_dim
            if i == j and eq_dim:
                target = poly_ring.std_coords(f.poly, df)
            rhs_rows.append(DenseMatrix.column(field, target))
        mat = eq_rows[0]
        rhs = rhs_rows[0]
        for blk, rb in zip(eq_rows[1:], rhs_rows[1:]):
            mat = mat.vstack(blk)
            rhs = rhs.vstack(rb)
        sol = mat.solve(rhs)
        if sol is None:
            return None
        for k in range(n):
            o, dim, d = layout[k]
            coeffs = [sol[o + t, 0] for t in range(dim)]
            poly = poly_ring.poly_from_std_coords(coeffs, d)
            psi[k][j] = RingElement(poly_ring, poly, d if poly else None)
    return psi
