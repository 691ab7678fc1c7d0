"""Degree-zero Hom spaces, isomorphism testing, Krull-Schmidt splitting.

A degree-0 homomorphism M -> N is a matrix Phi on the free covers that
carries relations into relations: Phi P = Q Psi for some Psi.  Two
matrices induce the same map iff they differ by Q Theta.  All three
conditions are linear over k, so Hom(M, N) is the kernel of one linear
system modulo the span of another; everything is a finite rref.

The endomorphism algebra End(M) is a finite-dimensional k-algebra.
Splitting M is done by factoring minimal polynomials of endomorphisms
(an element whose minimal polynomial has two coprime factors yields an
exact idempotent by CRT); indecomposability is certified by exhibiting
the radical and checking that End/rad is a finite field.
"""

from __future__ import annotations

import itertools
import random
from typing import Dict, List, Optional, Tuple

import numpy as np

from .errors import Inconclusive, UsageError
from .linalg import QQ, DenseMatrix, RowSpace
from .modules import GradedModule, MElem, submodule_presentation
from .rings import RingElement

__all__ = [
    "Hom",
    "HomSpace",
    "hom_space",
    "identity_hom",
    "compose",
    "is_isomorphic",
    "EndAlgebra",
    "end_algebra",
    "Decomposition",
    "decompose",
    "strip_free_summands",
]


class Hom:
    """A degree-0 homomorphism, with its witness on relations."""

    __slots__ = ("source", "target", "phi", "flat")

    def __init__(self, source: GradedModule, target: GradedModule, phi, flat=None):
        self.source = source
        self.target = target
        self.phi = phi  # target.num_gens x source.num_gens ring-element grid
        self.flat = flat  # flattened coordinates in the Phi layout (optional)

    def entry(self, k: int, i: int) -> RingElement:
        return self.phi[k][i]

    def constant_blocks(self) -> Dict[int, DenseMatrix]:
        """Per-degree scalar blocks of the induced map M/mM -> N/mN."""
        field = self.source.ring.field
        degs = sorted(set(self.source.gen_degs) | set(self.target.gen_degs))
        out = {}
        for d in degs:
            rows_idx = [k for k, a in enumerate(self.target.gen_degs) if a == d]
            cols_idx = [i for i, a in enumerate(self.source.gen_degs) if a == d]
            mat = [[self.phi[k][i].constant_coefficient() for i in cols_idx] for k in rows_idx]
            out[d] = DenseMatrix.from_rows(field, mat, len(cols_idx)) if rows_idx else \
                DenseMatrix.zeros(field, 0, len(cols_idx))
        return out

    def is_cover_unit(self) -> bool:
        """True iff the induced map on minimal covers is invertible (Nakayama)."""
        if sorted(self.source.gen_degs) != sorted(self.target.gen_degs):
            return False
        for d, block in self.constant_blocks().items():
            if block.nrows != block.ncols:
                return False
            if block.nrows and block.rank() != block.nrows:
                return False
        return True

    def apply(self, elem: MElem) -> MElem:
        """Image of a module element."""
        M, N = self.source, self.target
        if elem.module is not M:
            raise UsageError("element not in the source module")
        d = elem.degree
        src = M.piece(d)
        tgt = N.piece(d)
        out = [M.ring.field.element(0)] * tgt.total
        for i in range(M.num_gens):
            seg = list(elem.vec[src.offsets[i]: src.offsets[i] + src.block_dims[i]])
            if not any(seg):
                continue
            poly = M.ring.poly_from_std_coords(seg, d - M.gen_degs[i])
            for k in range(N.num_gens):
                e = self.phi[k][i]
                if e.is_zero():
                    continue
                prod = M.ring.normal_form(_pmul(M.ring, e.poly, poly))
                coords = M.ring.std_coords(prod, d - N.gen_degs[k])
                off = tgt.offsets[k]
                for t, c in enumerate(coords):
                    out[off + t] = out[off + t] + c
        return N.element(d, out)


def _pmul(ring, a, b):
    from .rings import poly_mul
    return poly_mul(a, b, ring.field)


class HomSpace:
    """The k-space of degree-0 homomorphisms M -> N.

    ``basis`` spans Hom(M, N); ``beta_dim``/``beta_space`` give the
    subspace of maps factoring through a free module.  Coordinates of
    arbitrary maps are read off after reduction modulo the trivial span
    (matrices of the form Q Theta).
    """

    def __init__(self, source: GradedModule, target: GradedModule):
        self.source = source
        self.target = target
        ring = source.ring
        if ring.key != target.ring.key:
            raise UsageError("hom space across different rings")
        self.ring = ring
        self.field = ring.field
        M, N = source, target
        # Phi layout
        self.blocks = []  # (k, i, offset, dim, degree)
        off = 0
        for k in range(N.num_gens):
            for i in range(M.num_gens):
                d = M.gen_degs[i] - N.gen_degs[k]
                dim = ring.hilbert_function(d)
                self.blocks.append((k, i, off, dim, d))
                off += dim
        self.phi_dim = off
        self._block_index = {(k, i): (o, dim, d) for (k, i, o, dim, d) in self.blocks}
        self._solve()

    # -- system assembly ------------------------------------------------

    def _solve(self):
        M, N, ring = self.source, self.target, self.ring
        field = self.field
        # Psi layout
        psi_blocks = []
        off = 0
        for l in range(N.num_rels):
            for j in range(M.num_rels):
                d = M.rel_degs[j] - N.rel_degs[l]
                dim = ring.hilbert_function(d)
                psi_blocks.append((l, j, off, dim, d))
                off += dim
        psi_dim = off
        # equations: for each (k, j), coords in A_{bM_j - aN_k}
        eq_rows = 0
        eq_offsets = {}
        for k in range(N.num_gens):
            for j in range(M.num_rels):
                d = M.rel_degs[j] - N.gen_degs[k]
                eq_offsets[(k, j)] = (eq_rows, ring.hilbert_function(d), d)
                eq_rows += ring.hilbert_function(d)
        nunk = self.phi_dim + psi_dim

        if eq_rows == 0 or nunk == 0:
            sys_mat = DenseMatrix.zeros(field, max(eq_rows, 0), nunk)
        else:
            if field != QQ:
                arr = np.zeros((eq_rows, nunk), dtype=np.int64)
            else:
                arr = [[field.element(0)] * nunk for _ in range(eq_rows)]
            # Phi P terms
            for (k, i, o, dim, d) in self.blocks:
                if dim == 0:
                    continue
                for j in range(M.num_rels):
                    entry = M.presentation[i][j]
                    if entry.is_zero():
                        continue
                    r0, rdim, _ = eq_offsets[(k, j)]
                    mm = ring.mult_matrix(entry.poly, d)
                    _acc_block(arr, field, r0, o, mm, +1)
            # -Q Psi terms
            for (l, j, o, dim, d) in psi_blocks:
                if dim == 0:
                    continue
                for k in range(N.num_gens):
                    entry = N.presentation[k][l]
                    if entry.is_zero():
                        continue
                    r0, rdim, _ = eq_offsets[(k, j)]
                    mm = ring.mult_matrix(entry.poly, d)
                    _acc_block(arr, field, r0, self.phi_dim + o, mm, -1)
            if field != QQ:
                sys_mat = DenseMatrix(field, arr % field.p, _internal=True)
            else:
                sys_mat = DenseMatrix(field, arr, _internal=True)

        ker = sys_mat.kernel_basis()  # columns
        # trivial span: Phi = Q Theta
        self.trivial = RowSpace(field, self.phi_dim)
        for l in range(N.num_rels):
            for i in range(M.num_gens):
                d = M.gen_degs[i] - N.rel_degs[l]
                for upos in range(ring.hilbert_function(d)):
                    vec = [field.element(0)] * self.phi_dim
                    coords_u = [field.element(0)] * ring.hilbert_function(d)
                    coords_u[upos] = field.element(1)
                    upoly = ring.poly_from_std_coords(coords_u, d)
                    if not upoly:
                        continue
                    for k in range(N.num_gens):
                        entry = N.presentation[k][l]
                        if entry.is_zero():
                            continue
                        prod = ring.normal_form(_pmul(ring, entry.poly, upoly))
                        o, bdim, bd = self._block_index[(k, i)]
                        cc = ring.std_coords(prod, bd)
                        for t, c in enumerate(cc):
                            vec[o + t] = vec[o + t] + c
                    self.trivial.add(vec)
        # canonical basis of Hom = kernel projections reduced mod trivial
        self.space = RowSpace(field, self.phi_dim)
        for col in ker.transpose().rows():
            proj = col[: self.phi_dim]
            self.space.add(self.trivial.reduce(proj))
        self._basis_homs: Optional[List[Hom]] = None
        # beta subspace: maps with a representative satisfying Phi P = 0
        self._beta: Optional[RowSpace] = None

    @property
    def dim(self) -> int:
        return self.space.dim

    # -- classes and representatives ------------------------------------

    def reduce_flat(self, flat):
        return self.trivial.reduce(flat)

    def coords(self, flat):
        red = self.trivial.reduce(flat)
        piv = self.space.pivots()
        c = [red[p] for p in piv]
        remainder = self.space.reduce(red)
        if (isinstance(remainder, np.ndarray) and remainder.any()) or (
            not isinstance(remainder, np.ndarray) and any(x != 0 for x in remainder)
        ):
            raise UsageError("vector is not a homomorphism class in this space")
        return c

    def from_flat(self, flat) -> Hom:
        flat = self.trivial.reduce(flat)
        ring = self.ring
        phi = []
        for k in range(self.target.num_gens):
            row = []
            for i in range(self.source.num_gens):
                o, dim, d = self._block_index[(k, i)]
                seg = list(flat[o: o + dim])
                poly = ring.poly_from_std_coords(seg, d)
                row.append(RingElement(ring, poly, d if poly else None))
            phi.append(row)
        return Hom(self.source, self.target, tuple(tuple(r) for r in phi), flat=flat)

    def flat_of_phi(self, phi) -> list:
        ring = self.ring
        vec = [self.field.element(0)] * self.phi_dim
        for (k, i, o, dim, d) in self.blocks:
            entry = phi[k][i]
            if isinstance(entry, RingElement):
                poly = entry.poly
            else:
                poly = ring.normal_form(ring.ambient.parse(entry)) if isinstance(entry, str) else entry
            if not poly:
                continue
            cc = ring.std_coords(poly, d)
            for t, c in enumerate(cc):
                vec[o + t] = c
        return vec

    def basis(self) -> List[Hom]:
        if self._basis_homs is None:
            self._basis_homs = [self.from_flat(row) for row in self.space.basis_matrix().rows()]
        return self._basis_homs

    def element_from_coords(self, coeffs) -> Hom:
        rows = self.space.basis_matrix().rows()
        field = self.field
        flat = [field.element(0)] * self.phi_dim
        for c, row in zip(coeffs, rows):
            c = field.element(c)
            if c == 0:
                continue
            for t in range(self.phi_dim):
                flat[t] = flat[t] + c * row[t]
        if field != QQ:
            flat = [int(x) % field.p for x in flat]
        return self.from_flat(flat)

    def zero(self) -> Hom:
        return self.from_flat([self.field.element(0)] * self.phi_dim)

    # -- beta subspace ----------------------------------------------------

    def beta_space(self) -> RowSpace:
        """Span of classes of maps factoring through a free module."""
        if self._beta is not None:
            return self._beta
        M, N, ring = self.source, self.target, self.ring
        field = self.field
        # Hom(M, N-cover): matrices H with H P = 0 exactly
        eq_rows = 0
        eq_offsets = {}
        for k in range(N.num_gens):
            for j in range(M.num_rels):
                d = M.rel_degs[j] - N.gen_degs[k]
                eq_offsets[(k, j)] = (eq_rows, d)
                eq_rows += ring.hilbert_function(d)
        if eq_rows and self.phi_dim:
            if field != QQ:
                arr = np.zeros((eq_rows, self.phi_dim), dtype=np.int64)
            else:
                arr = [[field.element(0)] * self.phi_dim for _ in range(eq_rows)]
            for (k, i, o, dim, d) in self.blocks:
                if dim == 0:
                    continue
                for j in range(M.num_rels):
                    entry = M.presentation[i][j]
                    if entry.is_zero():
                        continue
                    r0, _ = eq_offsets[(k, j)]
                    mm = ring.mult_matrix(entry.poly, d)
                    _acc_block(arr, field, r0, o, mm, +1)
            if field != QQ:
                mat = DenseMatrix(field, arr % field.p, _internal=True)
            else:
                mat = DenseMatrix(field, arr, _internal=True)
            ker = mat.kernel_basis()
        else:
            ker = DenseMatrix.identity(field, self.phi_dim)
        beta = RowSpace(field, self.phi_dim)
        for col in ker.transpose().rows():
            beta.add(self.trivial.reduce(col))
        self._beta = beta
        return beta

    def beta_dim(self) -> int:
        return self.beta_space().dim

    def stable_dim(self) -> int:
        return self.dim - self.beta_dim()


def _acc_block(arr, field, r0, c0, mm: DenseMatrix, sign: int):
    if mm.nrows == 0 or mm.ncols == 0:
        return
    if field != QQ:
        arr[r0: r0 + mm.nrows, c0: c0 + mm.ncols] += sign * mm.numpy()
    else:
        rows = mm.rows()
        for r in range(mm.nrows):
            for c in range(mm.ncols):
                arr[r0 + r][c0 + c] = arr[r0 + r][c0 + c] + sign * rows[r][c]


def hom_space(M: GradedModule, N: GradedModule) -> HomSpace:
    cache = getattr(M, "_hom_cache", None)
    if cache is None:
        cache = {}
        M._hom_cache = cache
    got = cache.get(id(N))
    if got is not None and got[0] is N:
        return got[1]
    hs = HomSpace(M, N)
    cache[id(N)] = (N, hs)
    return hs


def identity_hom(M: GradedModule) -> Hom:
    ring = M.ring
    one = ring.one()
    zero = ring.zero()
    phi = tuple(
        tuple(one if i == k else zero for i in range(M.num_gens))
        for k in range(M.num_gens)
    )
    return Hom(M, M, phi)


def compose(g: Hom, f: Hom) -> Hom:
    """g after f."""
    if g.source is not f.target and g.source.gen_degs != f.target.gen_degs:
        raise UsageError("composition mismatch")
    M, L = f.source, g.target
    ring = M.ring
    phi = []
    for l in range(L.num_gens):
        row = []
        for i in range(M.num_gens):
            acc = ring.zero(degree=M.gen_degs[i] - L.gen_degs[l])
            for k in range(f.target.num_gens):
                a, b = g.phi[l][k], f.phi[k][i]
                if a.is_zero() or b.is_zero():
                    continue
                acc = acc + a * b
            row.append(acc)
        phi.append(row)
    return Hom(M, L, tuple(tuple(r) for r in phi))


# ---------------------------------------------------------------------------
# isomorphism testing
# ---------------------------------------------------------------------------

EXHAUSTIVE_BUDGET = 1 << 20


def _unit_search(hs: HomSpace, rng: random.Random, tries: int):
    """Find a hom with invertible cover map; None if search fails.

    Returns (hom, certified_absent): certified_absent=True means an
    exhaustive search proved there is no such hom.
    """
    if sorted(hs.source.gen_degs) != sorted(hs.target.gen_degs):
        return None, True
    m = hs.dim
    if m == 0:
        return None, True
    basis = hs.basis()
    for h in basis:
        if h.is_cover_unit():
            return h, False
    field = hs.field
    if field != QQ:
        p = field.p
        for _ in range(tries):
            coeffs = [rng.randrange(p) for _ in range(m)]
            if not any(coeffs):
                continue
            h = hs.element_from_coords(coeffs)
            if h.is_cover_unit():
                return h, False
        # exhaustive fallback over scalar combinations
        if p ** m <= EXHAUSTIVE_BUDGET:
            for coeffs in itertools.product(range(p), repeat=m):
                if not any(coeffs):
                    continue
                h = hs.element_from_coords(coeffs)
                if h.is_cover_unit():
                    return h, False
            return None, True
        raise Inconclusive(
            f"inconclusive: unit search budget exhausted (hom dim {m}, p={p})")
    else:
        for _ in range(tries):
            coeffs = [rng.randrange(-3, 4) for _ in range(m)]
            if not any(coeffs):
                continue
            h = hs.element_from_coords(coeffs)
            if h.is_cover_unit():
                return h, False
        raise Inconclusive("inconclusive: unit search over QQ is randomized only")


def is_isomorphic(M: GradedModule, N: GradedModule, seed: int = 0, tries: int = 64,
                  up_to_shift: bool = True) -> bool:
    """Graded isomorphism test (by default up to a degree shift).

    Searches Hom(M, N) and Hom(N, M) for maps invertible on minimal
    covers; two surjections in opposite directions force bijectivity.
    """
    if M.ring.key != N.ring.key:
        raise UsageError("isomorphism test across different rings")
    A = M.minimized()
    B = N.minimized()
    if A.num_gens == 0 or B.num_gens == 0:
        return A.num_gens == B.num_gens
    if up_to_shift:
        A, _ = A.normalized()
        B, _ = B.normalized()
    if sorted(A.gen_degs) != sorted(B.gen_degs):
        return False
    if sorted(A.rel_degs) != sorted(B.rel_degs):
        return False
    window = max(list(A.rel_degs) + list(A.gen_degs)) + 2 * A.ring.max_weight + 2
    for d in range(A.min_gen_degree(), window + 1):
        if A.hilbert_function(d) != B.hilbert_function(d):
            return False
    rng = random.Random(seed)
    f, absent = _unit_search(hom_space(A, B), rng, tries)
    if f is None:
        return False
    g, absent = _unit_search(hom_space(B, A), rng, tries)
    return g is not None


# ---------------------------------------------------------------------------
# endomorphism algebras
# ---------------------------------------------------------------------------

class EndAlgebra:
    """End(M) as an abstract k-algebra with a multiplication table."""

    def __init__(self, M: GradedModule):
        self.module = M
        self.hs = hom_space(M, M)
        self.field = self.hs.field
        self.dim = self.hs.dim
        basis = self.hs.basis()
        self.table = []  # table[i][j] = coords of basis_i o basis_j
        for hi in basis:
            row = []
            for hj in basis:
                comp = compose(hi, hj)
                row.append(self.hs.coords(self.hs.flat_of_phi(comp.phi)))
            self.table.append(row)
        self.one = self.hs.coords(self.hs.flat_of_phi(identity_hom(M).phi))

    def mul(self, x, y):
        field = self.field
        out = [field.element(0)] * self.dim
        for i, xi in enumerate(x):
            if xi == 0:
                continue
            for j, yj in enumerate(y):
                if yj == 0:
                    continue
                c = field.element(xi * yj)
                tij = self.table[i][j]
                for l in range(self.dim):
                    out[l] = out[l] + c * tij[l]
        if field != QQ:
            out = [int(v) % field.p for v in out]
        return out

    def power(self, x, n: int):
        out = list(self.one)
        base = list(x)
        while n:
            if n & 1:
                out = self.mul(out, base)
            base = self.mul(base, base)
            n >>= 1
        return out

    def scale_add(self, a, x, y):
        """a*x + y"""
        field = self.field
        a = field.element(a)
        out = [a * xi + yi for xi, yi in zip(x, y)]
        if field != QQ:
            out = [int(v) % field.p for v in out]
        return out

    def zero(self):
        return [self.field.element(0)] * self.dim

    def min_poly(self, x) -> List:
        """Monic minimal polynomial coefficients, low degree first."""
        space = RowSpace(self.field, self.dim)
        powers = [list(self.one)]
        space.add(self.one)
        cur = list(self.one)
        while True:
            cur = self.mul(cur, x)
            if not space.add(cur):
                break
            powers.append(list(cur))
        # cur = sum of previous powers: solve
        mat = DenseMatrix.from_rows(self.field, powers, self.dim).transpose()
        rhs = DenseMatrix.column(self.field, cur)
        sol = mat.solve(rhs)
        coeffs = [self.field.element(-sol[i, 0]) for i in range(len(powers))]
        if self.field != QQ:
            coeffs = [int(c) % self.field.p for c in coeffs]
        coeffs.append(self.field.element(1))
        return coeffs  # x^n - sum c_i x^i ; stored low-first

    def evaluate_poly(self, coeffs, x):
        """Evaluate a polynomial (low-first coefficients) at x."""
        out = self.zero()
        for c in reversed(coeffs):
            out = self.mul(out, x)
            out = self.scale_add(c, self.one, out)
        return out

    def is_nilpotent(self, x) -> bool:
        mp = self.min_poly(x)
        return all(c == 0 for c in mp[:-1])

    def left_mult_matrix(self, x) -> DenseMatrix:
        cols = []
        for j in range(self.dim):
            e = self.zero()
            e[j] = self.field.element(1)
            cols.append(self.mul(x, e))
        return DenseMatrix.from_rows(self.field, cols, self.dim).transpose()

    def is_unit(self, x) -> bool:
        return self.left_mult_matrix(x).rank() == self.dim


def end_algebra(M: GradedModule) -> EndAlgebra:
    return EndAlgebra(M)


# -- univariate polynomial helpers over GF(p) -------------------------------

def _poly_trim(c):
    while c and c[-1] == 0:
        c.pop()
    return c


def _poly_divmod(a, b, p):
    a = list(a)
    out = [0] * max(0, len(a) - len(b) + 1)
    binv = pow(b[-1], p - 2, p)
    while len(a) >= len(b) and any(a):
        if a[-1] == 0:
            a.pop()
            continue
        shift = len(a) - len(b)
        q = (a[-1] * binv) % p
        out[shift] = q
        for i, bc in enumerate(b):
            a[shift + i] = (a[shift + i] - q * bc) % p
        _poly_trim(a)
    return _poly_trim(out), _poly_trim(a)


def _poly_mulp(a, b, p):
    out = [0] * (len(a) + len(b) - 1) if a and b else []
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    return _poly_trim(out)


def _poly_xgcd(a, b, p):
    r0, r1 = list(a), list(b)
    s0, s1 = [1], []
    t0, t1 = [], [1]
    while r1:
        q, r = _poly_divmod(r0, r1, p)
        r0, r1 = r1, r
        s0, s1 = s1, _poly_sub(s0, _poly_mulp(q, s1, p), p)
        t0, t1 = t1, _poly_sub(t0, _poly_mulp(q, t1, p), p)
    lead = r0[-1]
    inv = pow(lead, p - 2, p)
    return ([c * inv % p for c in r0], [c * inv % p for c in s0], [c * inv % p for c in t0])


def _poly_sub(a, b, p):
    n = max(len(a), len(b))
    out = [0] * n
    for i in range(n):
        out[i] = ((a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0)) % p
    return _poly_trim(out)


def _factor_min_poly(coeffs, p):
    """Factor a monic polynomial over GF(p) via sympy; list of (coeffs, mult)."""
    from sympy import Poly, symbols

    t = symbols("t")
    f = Poly(list(reversed(coeffs)), t, modulus=p)
    _, factors = f.factor_list()
    out = []
    for poly, mult in factors:
        cs = [int(c) % p for c in reversed(poly.all_coeffs())]
        out.append((cs, mult))
    return out


def splitting_idempotent(E: EndAlgebra, x) -> Optional[list]:
    """A nontrivial idempotent in k[x], or None when k[x] is local."""
    if E.field == QQ:
        raise Inconclusive("inconclusive: decomposition over QQ not supported")
    p = E.field.p
    mp = [int(c) % p for c in E.min_poly(x)]
    factors = _factor_min_poly(mp, p)
    if len(factors) < 2:
        return None
    q_c, q_mult = factors[0]
    q_power = [1]
    for _ in range(q_mult):
        q_power = _poly_mulp(q_power, q_c, p)
    rest, remainder = _poly_divmod(mp, q_power, p)
    assert not remainder
    g, u, v = _poly_xgcd(q_power, rest, p)
    assert g == [1]
    # e = v * rest mod mp: congruent to 1 mod q^mult, 0 mod rest
    _, e_poly = _poly_divmod(_poly_mulp(v, rest, p), mp, p)
    e = E.evaluate_poly(e_poly, x)
    check = E.mul(e, e)
    assert check == e, "CRT idempotent failed to square to itself"
    if all(c == 0 for c in e) or e == E.one:
        return None
    return e


def local_certificate(E: EndAlgebra, rng: random.Random, samples: int = 160):
    """Certify that E is local.

    Returns (True, rad_basis_rowspace, residue_degree) on success or
    (None, None, None) when no certificate was found within budget.
    """
    if E.field == QQ:
        return None, None, None
    p = E.field.p
    n = E.dim
    if n == 1:
        return True, RowSpace(E.field, 1), 1
    basis_elems = []
    for j in range(n):
        e = E.zero()
        e[j] = 1
        basis_elems.append(e)
    for s in (1, 2, 3, 4):
        if s > n:
            break
        R = RowSpace(E.field, n)
        pool = list(basis_elems)
        for _ in range(samples):
            pool.append([rng.randrange(p) for _ in range(n)])
        for g in pool:
            h = _poly_sub_vec(E.power(g, p ** s), g, p)
            if any(h) and E.is_nilpotent(h):
                R.add(h)
        # ideal closure; every member must stay nilpotent in a local algebra
        bad = False
        changed = True
        while changed and not bad:
            changed = False
            for row in R.basis_matrix().rows():
                r = [int(v) for v in row]
                for b in basis_elems:
                    for prod in (E.mul(r, b), E.mul(b, r)):
                        if not any(prod):
                            continue
                        if not E.is_nilpotent(prod):
                            bad = True
                            break
                        if R.add(prod):
                            changed = True
                    if bad:
                        break
                if bad:
                    break
        if bad or R.dim != n - s:
            continue
        if _verify_local(E, R, s):
            return True, R, s
    return None, None, None


def _poly_sub_vec(a, b, p):
    return [(x - y) % p for x, y in zip(a, b)]


def _verify_local(E: EndAlgebra, R: RowSpace, s: int) -> bool:
    """Check: R is a nilpotent ideal and E/R = GF(p^s)."""
    p = E.field.p
    n = E.dim
    rad_rows = [list(map(int, r)) for r in R.basis_matrix().rows()]
    basis_elems = []
    for j in range(n):
        e = E.zero()
        e[j] = 1
        basis_elems.append(e)
    # ideal
    for r in rad_rows:
        for b in basis_elems:
            if not R.contains(E.mul(r, b)) or not R.contains(E.mul(b, r)):
                return False
    # nilpotent: iterate span of products
    cur = [list(r) for r in rad_rows]
    for _ in range(n + 1):
        if not cur:
            break
        nxt = RowSpace(E.field, n)
        for x in cur:
            for r in rad_rows:
                prod = E.mul(x, r)
                if any(prod):
                    nxt.add(prod)
        cur = [list(map(int, r)) for r in nxt.basis_matrix().rows()]
    if cur:
        return False
    # E/R: commutative, x^(p^s) = x, exactly one Berlekamp component
    quots = []
    for b in basis_elems:
        red = R.reduce(b)
        if any(red):
            quots.append(b)
    for x in quots:
        for y in quots:
            comm = _poly_sub_vec(E.mul(x, y), E.mul(y, x), p)
            if not R.contains(comm):
                return False
    for x in quots:
        if not R.contains(_poly_sub_vec(E.power(x, p ** s), x, p)):
            return False
    # Berlekamp component count on E/R: dim ker(Frob - id) must be 1
    # coordinates on E/R: complement of R's pivots
    piv = set(R.pivots())
    free_cols = [c for c in range(n) if c not in piv]
    frob_rows = []
    for c in free_cols:
        e = E.zero()
        e[c] = 1
        img = R.reduce(E.power(e, p))
        frob_rows.append([int(img[cc]) for cc in free_cols])
    mat = DenseMatrix.from_rows(E.field, frob_rows, len(free_cols)).transpose()
    mat = mat - DenseMatrix.identity(E.field, len(free_cols))
    return len(free_cols) - mat.rank() == 1


# ---------------------------------------------------------------------------
# Krull-Schmidt decomposition
# ---------------------------------------------------------------------------

class Decomposition:
    """Result of a Krull-Schmidt split."""

    def __init__(self, summands: List[Tuple[GradedModule, int]], certified: bool,
                 residue_degrees: List[int]):
        self.summands = summands
        self.certified = certified
        self.residue_degrees = residue_degrees

    @property
    def total(self) -> int:
        return sum(m for _, m in self.summands)

    def __repr__(self):
        items = ", ".join(f"{mod!r}^{mult}" for mod, mult in self.summands)
        flag = "" if self.certified else " (inconclusive)"
        return f"Decomposition[{items}]{flag}"


def _image_module(M: GradedModule, h: Hom, label: str) -> GradedModule:
    gens = [h.apply(g) for g in M.generators()]
    N, _ = submodule_presentation(M, gens, label=label)
    return N


def decompose(M: GradedModule, seed: int = 0, tries: int = 24,
              _depth: int = 0) -> Decomposition:
    """Split into indecomposables with multiplicities (Krull-Schmidt).

    Splitting uses exact CRT idempotents from factored minimal
    polynomials of (pseudo)random endomorphisms; indecomposability is
    certified through the radical of End(M).
    """
    Mm = M.minimized()
    if Mm.num_gens == 0:
        return Decomposition([], True, [])
    rng = random.Random(seed + 7 * _depth)
    E = end_algebra(Mm)
    if E.dim == 1:
        return Decomposition([(Mm, 1)], True, [1])
    # try to split
    idem = None
    candidates = []
    for j in range(E.dim):
        e = E.zero()
        e[j] = 1
        candidates.append(e)
    if E.field != QQ:
        p = E.field.p
        for _ in range(tries):
            candidates.append([rng.randrange(p) for _ in range(E.dim)])
    for x in candidates:
        if not any(x):
            continue
        idem = splitting_idempotent(E, x)
        if idem is not None:
            break
    if idem is None:
        ok, rad, s = local_certificate(E, rng)
        if ok:
            return Decomposition([(Mm, 1)], True, [s])
        return Decomposition([(Mm, 1)], False, [0])
    e_hom = E.hs.element_from_coords(idem)
    one_minus = E.hs.element_from_coords(
        _poly_sub_vec(E.one, idem, E.field.p) if E.field != QQ
        else [a - b for a, b in zip(E.one, idem)])
    part1 = _image_module(Mm, e_hom, f"{Mm.label}.1" if Mm.label else "part1")
    part2 = _image_module(Mm, one_minus, f"{Mm.label}.2" if Mm.label else "part2")
    d1 = decompose(part1, seed=seed, tries=tries, _depth=_depth + 1)
    d2 = decompose(part2, seed=seed, tries=tries, _depth=_depth + 1)
    merged: List[Tuple[GradedModule, int]] = []
    residue: List[int] = []
    for dec in (d1, d2):
        for (mod, mult), rdeg in zip(dec.summands, dec.residue_degrees):
            for idx, (m0, c0) in enumerate(merged):
                if is_isomorphic(m0, mod, seed=seed):
                    merged[idx] = (m0, c0 + mult)
                    break
            else:
                merged.append((mod, mult))
                residue.append(rdeg)
    # verification: the direct sum of the parts is the module we started with
    rebuilt = GradedModule.direct_sum(
        [mod for mod, mult in merged for _ in range(mult)])
    certified = d1.certified and d2.certified and is_isomorphic(rebuilt, Mm, seed=seed)
    return Decomposition(merged, certified, residue)


# ---------------------------------------------------------------------------
# free summands
# ---------------------------------------------------------------------------

def strip_free_summands(M: GradedModule, max_rounds: int = 64):
    """Split off free summands; returns (stable_part, free_degrees).

    A free summand A(-d) exists iff the composition pairing
    Hom(M, A(-d)) x Hom(A(-d), M) -> End(A(-d)) = k is nonzero.
    """
    from .modules import free_module

    cur = M.minimized()
    free_degrees: List[int] = []
    for _ in range(max_rounds):
        if cur.num_gens == 0:
            break
        found = False
        for d in sorted(set(cur.gen_degs)):
            F = free_module(cur.ring, [d], label="A")
            down = hom_space(cur, F)
            up = hom_space(F, cur)
            if down.dim == 0 or up.dim == 0:
                continue
            pair = None
            for f in down.basis():
                for g in up.basis():
                    c = compose(f, g).phi[0][0].constant_coefficient()
                    if c != 0:
                        pair = (f, g, c)
                        break
                if pair:
                    break
            if pair is None:
                continue
            f, g, c = pair
            # e = g o (f/c) is idempotent with image the free summand
            f_scaled = Hom(cur, F, tuple(
                tuple(x.scale(cur.ring.field.inv(c)) for x in row) for row in f.phi))
            e = compose(g, f_scaled)
            one_minus = _one_minus_hom(e)
            rest = _image_module(cur, one_minus, cur.label)
            free_degrees.append(d)
            cur = rest.minimized()
            found = True
            break
        if not found:
            break
    return cur, sorted(free_degrees)


def _one_minus_hom(e: Hom) -> Hom:
    M = e.source
    ring = M.ring
    one = ring.one()
    zero = ring.zero()
    phi = []
    for k in range(M.num_gens):
        row = []
        for i in range(M.num_gens):
            ident = one if i == k else zero
            val = ident - e.phi[k][i] if not e.phi[k][i].is_zero() else ident
            row.append(val)
        phi.append(row)
    return Hom(M, M, tuple(tuple(r) for r in phi))
