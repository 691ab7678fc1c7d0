"""Finitely presented graded modules and their degreewise linear algebra.

A module is a cokernel presentation: generators with degrees, relations
with degrees, and a homogeneous matrix over the ring whose entry (i, j)
has degree rel_degs[j] - gen_degs[i].  The degree-d piece of the module
is the quotient of the degree-d piece of the free cover by the span of
the relation columns, computed once and cached.

Elements carry their canonical reduced coordinate vector on the free
cover, so equality, membership and multiplication are all exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .errors import DegreeBoundExceeded, UsageError
from .linalg import DenseMatrix, RowSpace
from .rings import QuotientRing, RingElement, fit_hilbert_samuel

__all__ = [
    "GradedModule",
    "MElem",
    "ModuleInvariants",
    "SubmoduleTracker",
    "free_module",
    "residue_field_module",
    "maximal_ideal_module",
    "submodule_presentation",
]


class _ModulePiece:
    """Degree-d data of a module: free-cover layout and relation span."""

    __slots__ = ("degree", "offsets", "block_dims", "total", "rel_space", "std", "std_index")

    def __init__(self, degree, offsets, block_dims, total, rel_space, std):
        self.degree = degree
        self.offsets = offsets
        self.block_dims = block_dims
        self.total = total
        self.rel_space = rel_space
        self.std = std
        self.std_index = {c: i for i, c in enumerate(std)}

    @property
    def dim(self) -> int:
        return len(self.std)

    def reduce(self, vec):
        return self.rel_space.reduce(vec)

    def coords(self, vec):
        """Quotient coordinates of a vector on the free cover."""
        red = self.rel_space.reduce(vec)
        return np.array([red[c] for c in self.std], dtype=red.dtype) if isinstance(red, np.ndarray) \
            else [red[c] for c in self.std]

    def lift(self, coords):
        """Canonical free-cover vector with the given quotient coordinates."""
        if isinstance(coords, np.ndarray):
            vec = np.zeros(self.total, dtype=np.int64)
        else:
            vec = [0] * self.total
        for c, x in zip(self.std, coords):
            vec[c] = x
        return vec


class MElem:
    """Homogeneous element of a module, as a reduced free-cover vector."""

    __slots__ = ("module", "degree", "vec")

    def __init__(self, module: "GradedModule", degree: int, vec):
        self.module = module
        self.degree = degree
        self.vec = vec

    def is_zero(self) -> bool:
        if isinstance(self.vec, np.ndarray):
            return not self.vec.any()
        return all(x == 0 for x in self.vec)

    def coords(self):
        return self.module.piece(self.degree).coords(self.vec)

    def __repr__(self):
        return f"MElem(deg={self.degree})"


class GradedModule:
    """Finitely presented graded module over a QuotientRing."""

    def __init__(self, ring: QuotientRing, gen_degs: Sequence[int], rel_degs: Sequence[int],
                 presentation, label: str = "", check: bool = True):
        self.ring = ring
        self.gen_degs = tuple(int(d) for d in gen_degs)
        self.rel_degs = tuple(int(d) for d in rel_degs)
        self.label = label
        g, r = len(self.gen_degs), len(self.rel_degs)
        rows: List[List[RingElement]] = []
        for i in range(g):
            row = []
            for j in range(r):
                entry = presentation[i][j]
                if not isinstance(entry, RingElement):
                    entry = ring.element(entry, degree=None)
                row.append(entry)
            rows.append(row)
        self.presentation = tuple(tuple(row) for row in rows)
        if check:
            self._validate()
        self._pieces: Dict[int, _ModulePiece] = {}
        self._mult_cache: Dict[tuple, DenseMatrix] = {}

    def _validate(self):
        for i, a in enumerate(self.gen_degs):
            for j, b in enumerate(self.rel_degs):
                e = self.presentation[i][j]
                if e.ring.key != self.ring.key:
                    raise UsageError("presentation entry from a different ring")
                if not e.is_zero():
                    d = self.ring.ambient.poly_degree(e.poly)
                    if d != b - a:
                        raise UsageError(
                            f"entry ({i},{j}) has degree {d}, expected {b - a}"
                        )

    # -- bookkeeping ----------------------------------------------------

    @property
    def num_gens(self) -> int:
        return len(self.gen_degs)

    @property
    def num_rels(self) -> int:
        return len(self.rel_degs)

    def is_zero_module(self) -> bool:
        if self.num_gens == 0:
            return True
        return all(
            self.hilbert_function(d) == 0
            for d in range(self.min_gen_degree(),
                           self.max_gen_degree() + self.ring.max_weight + 1)
        )

    def min_gen_degree(self) -> int:
        return min(self.gen_degs) if self.gen_degs else 0

    def max_gen_degree(self) -> int:
        return max(self.gen_degs) if self.gen_degs else 0

    def __repr__(self):
        tag = self.label or "module"
        return f"<{tag}: gens{list(self.gen_degs)} rels{list(self.rel_degs)}>"

    # -- degreewise pieces ------------------------------------------------

    def free_layout(self, d: int):
        offsets, dims = [], []
        total = 0
        for a in self.gen_degs:
            offsets.append(total)
            k = self.ring.hilbert_function(d - a)
            dims.append(k)
            total += k
        return offsets, dims, total

    def piece(self, d: int) -> _ModulePiece:
        got = self._pieces.get(d)
        if got is not None:
            return got
        offsets, dims, total = self.free_layout(d)
        space = RowSpace(self.ring.field, total)
        for j, b in enumerate(self.rel_degs):
            src_dim = self.ring.hilbert_function(d - b)
            if src_dim == 0:
                continue
            blocks = []
            for i in range(self.num_gens):
                entry = self.presentation[i][j]
                if entry.is_zero():
                    blocks.append(DenseMatrix.zeros(self.ring.field, dims[i], src_dim))
                else:
                    blocks.append(self.ring.mult_matrix(entry.poly, d - b))
            col_mat = blocks[0] if len(blocks) == 1 else _vstack_all(blocks)
            for col in col_mat.transpose().rows():
                space.add(col)
        pivots = set(space.pivots())
        std = tuple(c for c in range(total) if c not in pivots)
        piece = _ModulePiece(d, offsets, dims, total, space, std)
        self._pieces[d] = piece
        return piece

    def hilbert_function(self, d: int) -> int:
        return self.piece(d).dim

    def hilbert_window(self, lo: int, hi: int) -> Dict[int, int]:
        return {d: self.hilbert_function(d) for d in range(lo, hi + 1)}

    # -- elements -----------------------------------------------------------

    def element(self, degree: int, fvec) -> MElem:
        pc = self.piece(degree)
        return MElem(self, degree, pc.reduce(fvec))

    def generator(self, i: int) -> MElem:
        d = self.gen_degs[i]
        pc = self.piece(d)
        vec = [self.ring.field.element(0)] * pc.total
        # the constant monomial sits somewhere in block i; find its coordinate
        unit = self.ring.std_coords({self.ring.ambient.unit_mono: self.ring.field.element(1)}, 0)
        off = pc.offsets[i]
        for t, c in enumerate(unit):
            vec[off + t] = c
        return self.element(d, vec)

    def generators(self) -> List[MElem]:
        return [self.generator(i) for i in range(self.num_gens)]

    def column_element(self, j: int) -> MElem:
        """Relation column j as an element of the free cover module."""
        d = self.rel_degs[j]
        pc = self.piece(d)
        vec = [self.ring.field.element(0)] * pc.total
        for i in range(self.num_gens):
            entry = self.presentation[i][j]
            if entry.is_zero():
                continue
            coords = self.ring.std_coords(entry.poly, d - self.gen_degs[i])
            off = pc.offsets[i]
            for t, c in enumerate(coords):
                vec[off + t] = c
        return MElem(self, d, vec)  # NOT reduced: used on the free cover

    def mult_operator(self, poly_entry, d: int) -> DenseMatrix:
        """Multiplication by a homogeneous ring element on quotient coords.

        Returns the matrix M_d -> M_{d+e} in quotient coordinates.
        """
        entry = poly_entry if isinstance(poly_entry, RingElement) else self.ring.element(poly_entry)
        e = self.ring.ambient.poly_degree(entry.poly)
        key = (tuple(sorted(entry.poly.items())), d)
        got = self._mult_cache.get(key)
        if got is not None:
            return got
        src = self.piece(d)
        if e is None:
            out = DenseMatrix.zeros(self.ring.field, 0, src.dim)
            self._mult_cache[key] = out
            return out
        tgt = self.piece(d + e)
        cols = []
        for pos in range(src.dim):
            unit = [self.ring.field.element(0)] * src.dim
            unit[pos] = self.ring.field.element(1)
            fvec = src.lift(unit)
            out_vec = [self.ring.field.element(0)] * tgt.total
            for i in range(self.num_gens):
                seg = fvec[src.offsets[i]: src.offsets[i] + src.block_dims[i]]
                if not any(seg):
                    continue
                mm = self.ring.mult_matrix(entry.poly, d - self.gen_degs[i])
                img = mm @ DenseMatrix.column(self.ring.field, list(seg))
                off = tgt.offsets[i]
                for t in range(img.nrows):
                    out_vec[off + t] = out_vec[off + t] + img[t, 0]
            cols.append(list(tgt.coords(out_vec)))
        if cols:
            mat = DenseMatrix.from_rows(self.ring.field, cols, tgt.dim).transpose()
        else:
            mat = DenseMatrix.zeros(self.ring.field, tgt.dim, 0)
        self._mult_cache[key] = mat
        return mat

    # -- constructions ---------------------------------------------------------

    def degree_shift(self, s: int) -> "GradedModule":
        """The same module with all degrees raised by s."""
        if s == 0:
            return self
        return GradedModule(
            self.ring,
            [a + s for a in self.gen_degs],
            [b + s for b in self.rel_degs],
            self.presentation,
            label=f"{self.label}<{s}>" if self.label else "",
            check=False,
        )

    def normalized(self) -> Tuple["GradedModule", int]:
        """Shift so the minimum generator degree is 0; returns (module, shift)."""
        if not self.gen_degs:
            return self, 0
        s = -self.min_gen_degree()
        return self.degree_shift(s), s

    @staticmethod
    def direct_sum(parts: Sequence["GradedModule"], label: str = "") -> "GradedModule":
        parts = [p for p in parts]
        if not parts:
            raise UsageError("direct sum of nothing; build a zero module explicitly")
        ring = parts[0].ring
        if any(p.ring.key != ring.key for p in parts):
            raise UsageError("direct sum over mixed rings")
        gen_degs: List[int] = []
        rel_degs: List[int] = []
        for p in parts:
            gen_degs.extend(p.gen_degs)
            rel_degs.extend(p.rel_degs)
        zero = ring.zero()
        rows = []
        for pi, p in enumerate(parts):
            for i in range(p.num_gens):
                row: List[RingElement] = []
                for qi, q in enumerate(parts):
                    if qi == pi:
                        row.extend(p.presentation[i])
                    else:
                        row.extend([zero] * q.num_rels)
                rows.append(row)
        return GradedModule(ring, gen_degs, rel_degs, rows, label=label, check=False)

    def minimized(self) -> "GradedModule":
        """Minimal presentation: no unit entries, no redundant relations."""
        gen_degs = list(self.gen_degs)
        rel_degs = list(self.rel_degs)
        P: List[List[RingElement]] = [list(row) for row in self.presentation]

        # kill unit entries (generator i is defined by relation j)
        while True:
            unit_pos = None
            for i in range(len(gen_degs)):
                for j in range(len(rel_degs)):
                    if gen_degs[i] == rel_degs[j] and not P[i][j].is_zero():
                        unit_pos = (i, j)
                        break
                if unit_pos:
                    break
            if unit_pos is None:
                break
            i, j = unit_pos
            u = P[i][j].constant_coefficient()
            uinv = self.ring.field.inv(u)
            for l in range(len(rel_degs)):
                if l == j or P[i][l].is_zero():
                    continue
                factor = P[i][l].scale(uinv)
                for r in range(len(gen_degs)):
                    P[r][l] = P[r][l] - P[r][j] * factor
            del gen_degs[i]
            del rel_degs[j]
            P = [[row[l] for l in range(len(row)) if l != j]
                 for r, row in enumerate(P) if r != i]

        # drop zero columns
        keep = [j for j in range(len(rel_degs)) if any(not P[i][j].is_zero() for i in range(len(gen_degs)))]
        rel_degs = [rel_degs[j] for j in keep]
        P = [[row[j] for j in keep] for row in P]

        M = GradedModule(self.ring, gen_degs, rel_degs, P, label=self.label, check=False)
        return _drop_redundant_relations(M)

    def presentation_matrix_transpose(self) -> List[List[RingElement]]:
        return [[self.presentation[i][j] for i in range(self.num_gens)] for j in range(self.num_rels)]


def _vstack_all(blocks: List[DenseMatrix]) -> DenseMatrix:
    out = blocks[0]
    for b in blocks[1:]:
        out = out.vstack(b)
    return out


def _drop_redundant_relations(M: GradedModule) -> GradedModule:
    """Remove relation columns lying in the submodule generated by the others."""
    while True:
        dropped = False
        order = sorted(range(M.num_rels), key=lambda j: -M.rel_degs[j])
        for j in order:
            others = [l for l in range(M.num_rels) if l != j]
            d = M.rel_degs[j]
            # span of the other columns at degree d, inside the free cover
            free = free_module(M.ring, M.gen_degs)
            span = RowSpace(M.ring.field, free.piece(d).total)
            for l in others:
                b = M.rel_degs[l]
                for u in M.ring.degree_basis(d - b):
                    upoly = {u: M.ring.field.element(1)}
                    vec = [M.ring.field.element(0)] * free.piece(d).total
                    for i in range(M.num_gens):
                        entry = M.presentation[i][l]
                        if entry.is_zero():
                            continue
                        prod = M.ring.normal_form(
                            _poly_mul_ring(M.ring, entry.poly, upoly))
                        coords = M.ring.std_coords(prod, d - M.gen_degs[i])
                        off = free.piece(d).offsets[i]
                        for t, c in enumerate(coords):
                            vec[off + t] = vec[off + t] + c
                    span.add(vec)
            target = M.column_element(j).vec
            if span.contains(target):
                keep = others
                M = GradedModule(
                    M.ring, M.gen_degs, [M.rel_degs[l] for l in keep],
                    [[row[l] for l in keep] for row in M.presentation],
                    label=M.label, check=False)
                dropped = True
                break
        if not dropped:
            return M


def _poly_mul_ring(ring, a, b):
    from .rings import poly_mul
    return poly_mul(a, b, ring.field)


def free_module(ring: QuotientRing, gen_degs: Sequence[int], label: str = "") -> GradedModule:
    return GradedModule(ring, gen_degs, [], [[] for _ in gen_degs], label=label or "free", check=False)


def residue_field_module(ring: QuotientRing) -> GradedModule:
    """k = A/m as a graded module (generator in degree 0)."""
    gens = [ring.element(v) for v in ring.variables]
    return GradedModule(
        ring, [0], list(ring.weights), [[g for g in gens]], label="k", check=False
    )


def maximal_ideal_module(ring: QuotientRing) -> GradedModule:
    """The maximal ideal m as a module: submodule of A generated by the variables."""
    A = free_module(ring, [0], label="A")
    gens = []
    for v, w in zip(ring.variables, ring.weights):
        poly = ring.normal_form(ring.ambient.parse(v))
        vec = ring.std_coords(poly, w)
        gens.append(MElem(A, w, list(vec)))
    N, _ = submodule_presentation(A, gens, label="m")
    return N


class SubmoduleTracker:
    """Degreewise span of the submodule generated by given elements.

    Maintains, for each degree, a RowSpace in the quotient coordinates
    of the ambient module.  Extending to a new degree uses the variable
    multiplication operators, so the cost is one rref per degree.
    """

    def __init__(self, module: GradedModule, start_degree: Optional[int] = None):
        self.module = module
        self.spaces: Dict[int, RowSpace] = {}
        self.gens_by_degree: Dict[int, List] = {}
        self.min_degree = start_degree if start_degree is not None else module.min_gen_degree()
        self._frontier = self.min_degree - 1

    def add_generator(self, elem: MElem):
        coords = list(elem.coords())
        self.gens_by_degree.setdefault(elem.degree, []).append(coords)
        if elem.degree <= self._frontier:
            # re-propagate: clear everything above
            for d in list(self.spaces):
                if d >= elem.degree:
                    del self.spaces[d]
            self._frontier = min(self._frontier, elem.degree - 1)

    def space(self, d: int) -> RowSpace:
        if d < self.min_degree:
            return RowSpace(self.module.ring.field, self.module.piece(d).dim)
        for deg in range(self._frontier + 1, d + 1):
            self._extend(deg)
        self._frontier = max(self._frontier, d)
        if d not in self.spaces:
            self._extend(d)
        return self.spaces[d]

    def _extend(self, d: int):
        if d in self.spaces:
            return
        ring = self.module.ring
        space = RowSpace(ring.field, self.module.piece(d).dim)
        for var, w in zip(ring.variables, ring.weights):
            prev = self.spaces.get(d - w)
            if prev is None or prev.dim == 0:
                continue
            op = self.module.mult_operator(ring.element(var), d - w)
            img = op @ prev.basis_matrix().transpose()
            space.add_matrix(img.transpose())
        for coords in self.gens_by_degree.get(d, []):
            space.add(coords)
        self.spaces[d] = space

    def dim(self, d: int) -> int:
        return self.space(d).dim

    def contains(self, elem: MElem) -> bool:
        return self.space(elem.degree).contains(list(elem.coords()))


def submodule_presentation(C: GradedModule, elements: Sequence[MElem],
                           label: str = "",
                           degree_cap: Optional[int] = None,
                           stall: Optional[int] = None) -> Tuple[GradedModule, List[MElem]]:
    """Minimal presentation of the submodule of C generated by elements.

    Generators are pruned to a minimal generating set; relations are
    captured degree by degree until a stall window passes with no new
    relation generators (every scanned degree is certified by comparing
    span dimensions against exact kernel dimensions).
    """
    ring = C.ring
    elems = [e for e in elements if not e.is_zero()]
    elems.sort(key=lambda e: e.degree)

    # prune generators already in the span of the others
    kept: List[MElem] = []
    tracker = SubmoduleTracker(C, start_degree=min((e.degree for e in elems), default=0))
    for e in elems:
        if tracker.contains(e):
            continue
        kept.append(e)
        tracker.add_generator(e)
    if not kept:
        return GradedModule(ring, [], [], [], label=label, check=False), []

    gen_degs = [e.degree for e in kept]
    maxw = ring.max_weight
    if stall is None:
        stall = max((max(ring.relation_degrees) if ring.relation_degrees else 2), 2 * maxw) + 1
    if degree_cap is None:
        degree_cap = max(gen_degs) + 6 * maxw + stall + 8

    # free cover of the submodule and the relation tracker inside it
    F = free_module(ring, gen_degs)
    rel_tracker = SubmoduleTracker(F, start_degree=min(gen_degs))
    rel_cols: List[MElem] = []

    d = min(gen_degs)
    last_event = max(gen_degs)
    while d <= degree_cap:
        # matrix of the evaluation map F_d -> C_d in quotient coords
        tgt = C.piece(d)
        blocks = []
        for e in kept:
            src_dim = ring.hilbert_function(d - e.degree)
            if src_dim == 0:
                blocks.append(DenseMatrix.zeros(ring.field, tgt.dim, src_dim))
                continue
            cols = []
            for u in ring.degree_basis(d - e.degree):
                prod_vec = _scale_elem_by_mono(C, e, u, d)
                cols.append(list(tgt.coords(prod_vec)))
            blocks.append(DenseMatrix.from_rows(ring.field, cols, tgt.dim).transpose())
        mat = blocks[0]
        for b in blocks[1:]:
            mat = mat.hstack(b)
        ker = mat.kernel_basis()
        span = rel_tracker.space(d)
        new = []
        for col in ker.transpose().rows():
            if span.contains(col):
                continue
            fvec = F.piece(d).lift(list(col))
            elem = MElem(F, d, F.piece(d).reduce(fvec))
            rel_tracker.add_generator(elem)
            rel_cols.append(elem)
            span = rel_tracker.space(d)
            new.append(elem)
        if new:
            last_event = d
        if d >= last_event + stall and d >= max(gen_degs) + stall:
            break
        d += 1
    else:
        raise DegreeBoundExceeded(
            f"inconclusive: degree bound (submodule relations still appearing at {degree_cap})")

    # assemble presentation columns as ring elements
    rel_degs = [e.degree for e in rel_cols]
    rows: List[List[RingElement]] = [[] for _ in kept]
    for e in rel_cols:
        pc = F.piece(e.degree)
        for i in range(len(kept)):
            seg = list(e.vec[pc.offsets[i]: pc.offsets[i] + pc.block_dims[i]])
            poly = ring.poly_from_std_coords(seg, e.degree - gen_degs[i])
            rows[i].append(RingElement(ring, poly, e.degree - gen_degs[i] if poly else None))
    N = GradedModule(ring, gen_degs, rel_degs, rows, label=label, check=False)
    return N, kept


def _scale_elem_by_mono(C: GradedModule, e: MElem, mono, d: int):
    """u * e inside C, as a free-cover vector of degree d = deg(e) + wdeg(u)."""
    ring = C.ring
    src = C.piece(e.degree)
    tgt = C.piece(d)
    out = [ring.field.element(0)] * tgt.total
    upoly = {mono: ring.field.element(1)}
    for i in range(C.num_gens):
        seg = list(e.vec[src.offsets[i]: src.offsets[i] + src.block_dims[i]])
        if not any(seg):
            continue
        poly = ring.poly_from_std_coords(seg, e.degree - C.gen_degs[i])
        prod = ring.normal_form(_poly_mul_ring(ring, poly, upoly))
        coords = ring.std_coords(prod, d - C.gen_degs[i])
        off = tgt.offsets[i]
        for t, c in enumerate(coords):
            out[off + t] = out[off + t] + c
    return out


@dataclass
class ModuleInvariants:
    mu: int
    hilbert_window: Dict[int, int]
    length: Optional[int]  # None means infinite
    multiplicity_e: int
    dim: int
    rank: Fraction
    rank_integral: bool

    def as_dict(self):
        return {
            "mu": self.mu,
            "hilbert_window": dict(self.hilbert_window),
            "length": self.length,
            "e": self.multiplicity_e,
            "dim": self.dim,
            "rank": [self.rank.numerator, self.rank.denominator],
            "rank_integral": self.rank_integral,
        }


def module_length(M: GradedModule, horizon: Optional[int] = None) -> Optional[int]:
    """Total k-dimension, or None when the module is infinite length."""
    if M.num_gens == 0:
        return 0
    lo = M.min_gen_degree()
    maxw = M.ring.max_weight
    if horizon is None:
        horizon = M.max_gen_degree() + sum(M.ring.relation_degrees) + 8 * maxw + 10
    total = 0
    zeros = 0
    d = lo
    while d <= horizon:
        h = M.hilbert_function(d)
        total += h
        if h == 0:
            zeros += 1
            if zeros >= maxw and d > M.max_gen_degree():
                return total
        else:
            zeros = 0
        d += 1
    return None


def hs_lengths(M: GradedModule, s_max: int) -> List[int]:
    """Hilbert-Samuel values length(M / m^s M) for s = 1..s_max."""
    ring = M.ring
    maxw = ring.max_weight
    lo = M.min_gen_degree()
    hi = M.max_gen_degree()
    out = []
    # frontier spaces: B[0] = full piece; B[s] = m * B[s-1]
    spaces: Dict[int, Dict[int, RowSpace]] = {0: {}}

    def full_space(d: int) -> RowSpace:
        got = spaces[0].get(d)
        if got is None:
            pc = M.piece(d)
            got = RowSpace(ring.field, pc.dim)
            ident = DenseMatrix.identity(ring.field, pc.dim)
            got.add_matrix(ident)
            spaces[0][d] = got
        return got

    def space(s: int, d: int) -> RowSpace:
        if d < lo:
            return RowSpace(ring.field, M.piece(d).dim)
        if s == 0:
            return full_space(d)
        level = spaces.setdefault(s, {})
        got = level.get(d)
        if got is not None:
            return got
        pc = M.piece(d)
        sp = RowSpace(ring.field, pc.dim)
        for var, w in zip(ring.variables, ring.weights):
            prev = space(s - 1, d - w)
            if prev.dim == 0:
                continue
            op = M.mult_operator(ring.element(var), d - w)
            img = op @ prev.basis_matrix().transpose()
            sp.add_matrix(img.transpose())
        level[d] = sp
        return sp

    for s in range(1, s_max + 1):
        cutoff = hi + s * maxw
        total = 0
        for d in range(lo, cutoff):
            total += M.piece(d).dim - space(s, d).dim
        out.append(total)
    return out


def invariants(M: GradedModule, s_max: int = 12, window: int = 10) -> ModuleInvariants:
    """Minimal generator count, length, Hilbert-Samuel multiplicity, rank."""
    Mmin = M.minimized()
    if Mmin.num_gens == 0:
        return ModuleInvariants(0, {}, 0, 0, -1, Fraction(0), True)
    lo = Mmin.min_gen_degree()
    hw = Mmin.hilbert_window(lo, lo + window)
    length = module_length(Mmin)
    if length == 0:
        return ModuleInvariants(0, hw, 0, 0, -1, Fraction(0), True)
    if length is not None:
        # finite length: dimension 0, multiplicity = length
        dim, e = 0, length
    else:
        values = hs_lengths(Mmin, s_max)
        dim, e = fit_hilbert_samuel(values)
    eA = M.ring.multiplicity()
    rank = Fraction(e, eA) if dim == M.ring.krull_dim() else Fraction(0)
    return ModuleInvariants(
        mu=Mmin.num_gens,
        hilbert_window=hw,
        length=length,
        multiplicity_e=e,
        dim=dim,
        rank=rank,
        rank_integral=(rank.denominator == 1),
    )
