"""Minimal graded free resolutions, syzygies, Ext, and Betti growth.

A resolution window is built one homological step at a time.  Each step
captures the kernel of the previous differential degree by degree: the
kernel piece in a given degree is an exact rref computation, new minimal
generators are the part not yet reached by lower-degree generators, and
the scan stops once a stall window passes with nothing new.  Because the
input presentations are minimal and kernel generators are taken
minimally, every differential has entries in the maximal ideal, so the
window is a minimal resolution and Betti numbers are just rank counts.

The dualized complex gives Ext^i(M, A), the depth test, and the MCM
test (Ext^i(M, A) = 0 for 1 <= i <= dim A over a Gorenstein quotient).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

from .errors import DegreeBoundExceeded, UsageError
from .linalg import DenseMatrix
from .modules import (
    GradedModule,
    MElem,
    SubmoduleTracker,
    free_module,
    invariants,
    submodule_presentation,
)
from .rings import QuotientRing, RingElement

__all__ = [
    "FreeResolution",
    "resolve",
    "syzygy",
    "detect_period",
    "GrowthReport",
    "growth_report",
    "ext_is_zero",
    "ext_module",
    "depth",
    "mcm_test",
    "ulrich_test",
]


def default_stall(ring: QuotientRing) -> int:
    rd = max(ring.relation_degrees) if ring.relation_degrees else 2
    return max(rd, 2 * ring.max_weight) + 1


@dataclass
class Step:
    """One differential F_i -> F_{i-1}: rows over F_{i-1}, cols over F_i."""

    row_degs: Tuple[int, ...]
    col_degs: Tuple[int, ...]
    entries: Tuple[Tuple[RingElement, ...], ...]  # len(row_degs) x len(col_degs)

    def transpose_data(self):
        rows = len(self.row_degs)
        cols = len(self.col_degs)
        ent = tuple(
            tuple(self.entries[r][c] for r in range(rows)) for c in range(cols)
        )
        return ent


def kernel_step(ring: QuotientRing, row_degs: Sequence[int], col_degs: Sequence[int],
                entries, degree_cap: int, stall: Optional[int] = None) -> Step:
    """Minimal generators of the kernel of a map of free modules.

    The map sends the j-th source generator (degree col_degs[j]) to the
    column (entries[k][j])_k in the target.  Returns the next
    differential as a Step with row_degs = col_degs.
    """
    if stall is None:
        stall = default_stall(ring)
    field = ring.field
    if not col_degs:
        return Step(tuple(col_degs), (), ())
    if not row_degs:
        # kernel of the zero map: the whole source, generated by its basis
        one = ring.one()
        zero = ring.zero()
        ident = tuple(
            tuple(one if i == j else zero for j in range(len(col_degs)))
            for i in range(len(col_degs))
        )
        return Step(tuple(col_degs), tuple(col_degs), ident)
    src = free_module(ring, col_degs)
    tracker = SubmoduleTracker(src, start_degree=min(col_degs))
    found: List[MElem] = []
    d = min(col_degs)
    last_event = max(col_degs)
    while d <= degree_cap:
        src_pc = src.piece(d)
        if src_pc.total:
            blocks = []
            for j, c in enumerate(col_degs):
                cdim = ring.hilbert_function(d - c)
                col_blocks = []
                for k, r in enumerate(row_degs):
                    e = entries[k][j]
                    tdim = ring.hilbert_function(d - r)
                    if e.is_zero() or cdim == 0 or tdim == 0:
                        col_blocks.append(DenseMatrix.zeros(field, tdim, cdim))
                    else:
                        col_blocks.append(ring.mult_matrix(e.poly, d - c))
                blk = col_blocks[0]
                for b in col_blocks[1:]:
                    blk = blk.vstack(b)
                blocks.append(blk)
            mat = blocks[0]
            for b in blocks[1:]:
                mat = mat.hstack(b)
            ker = mat.kernel_basis()
            if ker.ncols:
                span = tracker.space(d)
                for col in ker.transpose().rows():
                    if span.contains(col):
                        continue
                    vec = src_pc.lift(list(col))
                    elem = MElem(src, d, src_pc.reduce(vec))
                    tracker.add_generator(elem)
                    found.append(elem)
                    span = tracker.space(d)
                    last_event = d
        if d >= last_event + stall and d >= max(col_degs) + stall:
            break
        d += 1
    else:
        raise DegreeBoundExceeded(
            f"inconclusive: degree bound (kernel capture still active at degree {degree_cap})")

    new_col_degs = tuple(e.degree for e in found)
    rows = []
    for k in range(len(col_degs)):
        row = []
        for e in found:
            pc = src.piece(e.degree)
            seg = list(e.vec[pc.offsets[k]: pc.offsets[k] + pc.block_dims[k]])
            poly = ring.poly_from_std_coords(seg, e.degree - col_degs[k])
            row.append(RingElement(ring, poly, e.degree - col_degs[k] if poly else None))
        rows.append(tuple(row))
    return Step(tuple(col_degs), new_col_degs, tuple(rows))


class FreeResolution:
    """A minimal free resolution window of a module."""

    def __init__(self, module: GradedModule, degree_cap: Optional[int], stall: Optional[int]):
        self.module = module
        self.minimal = module.minimized()
        self.ring = module.ring
        self.degree_cap = degree_cap
        self.stall = stall
        first = Step(
            tuple(self.minimal.gen_degs),
            tuple(self.minimal.rel_degs),
            self.minimal.presentation,
        )
        self.steps: List[Step] = [first]

    def _auto_cap(self, H: int) -> int:
        if self.degree_cap is not None:
            return self.degree_cap
        ring = self.ring
        rd = max(ring.relation_degrees) if ring.relation_degrees else 2
        base = max(list(self.minimal.gen_degs) + list(self.minimal.rel_degs) + [0])
        return base + (H + 2) * max(rd, 2 * ring.max_weight) + 8

    def extend(self, H: int):
        """Ensure differentials up to step H are computed."""
        while len(self.steps) < H:
            prev = self.steps[-1]
            if not prev.col_degs:
                # already hit a zero step: free tail
                self.steps.append(Step(prev.col_degs, (), ()))
                continue
            nxt = kernel_step(
                self.ring, prev.row_degs, prev.col_degs, prev.entries,
                degree_cap=self._auto_cap(len(self.steps) + 2), stall=self.stall)
            self.steps.append(nxt)

    def betti(self, i: int) -> int:
        if i == 0:
            return self.minimal.num_gens
        self.extend(i)
        return len(self.steps[i - 1].col_degs)

    def betti_table(self, H: int) -> List[Tuple[int, int, Tuple[int, ...]]]:
        """Rows (i, beta_i, generator degrees of F_i)."""
        self.extend(H)
        out = [(0, self.minimal.num_gens, tuple(self.minimal.gen_degs))]
        for i in range(1, H + 1):
            out.append((i, len(self.steps[i - 1].col_degs), self.steps[i - 1].col_degs))
        return out

    def betti_numbers(self, H: int) -> List[int]:
        return [b for _, b, _ in self.betti_table(H)]

    def differential(self, i: int) -> Step:
        if i < 1:
            raise UsageError("differentials are indexed from 1")
        self.extend(i)
        return self.steps[i - 1]

    def syzygy_module(self, n: int) -> GradedModule:
        """Syz_n(M) = image of the n-th differential, presented by the next one."""
        if n == 0:
            return self.minimal
        self.extend(n + 1)
        gen_step = self.steps[n - 1]
        rel_step = self.steps[n]
        label = f"Syz{n}({self.module.label})" if self.module.label else f"Syz{n}"
        return GradedModule(
            self.ring, gen_step.col_degs, rel_step.col_degs, rel_step.entries,
            label=label, check=False)

    def verify_exactness(self, H: int) -> bool:
        """d_i . d_{i+1} = 0 exactly, for every computed adjacent pair."""
        self.extend(H)
        for i in range(len(self.steps) - 1):
            a, b = self.steps[i], self.steps[i + 1]
            for r in range(len(a.row_degs)):
                for c in range(len(b.col_degs)):
                    acc = self.ring.zero()
                    for m in range(len(a.col_degs)):
                        x, y = a.entries[r][m], b.entries[m][c]
                        if x.is_zero() or y.is_zero():
                            continue
                        term = x * y
                        acc = term if acc.is_zero() else acc + term
                    if not acc.is_zero():
                        return False
        return True


def resolve(M: GradedModule, H: int, degree_cap: Optional[int] = None,
            stall: Optional[int] = None) -> FreeResolution:
    """Minimal resolution window of M with H differentials."""
    cache = getattr(M, "_resolution", None)
    if cache is None or (degree_cap is not None and cache.degree_cap not in (None, degree_cap)):
        cache = FreeResolution(M, degree_cap, stall)
        M._resolution = cache
    cache.extend(H)
    return cache


def syzygy(M: GradedModule, n: int, degree_cap: Optional[int] = None) -> GradedModule:
    """Syz_n(M) for n >= 0 (cosyzygies live in the stable-functor layer)."""
    if n < 0:
        raise UsageError("syzygy index must be >= 0 here; use cosyzygy for n < 0")
    return resolve(M, n + 1, degree_cap=degree_cap).syzygy_module(n)


def detect_period(M: GradedModule, p_max: int = 2, n_max: int = 6,
                  degree_cap: Optional[int] = None, seed: int = 0):
    """Smallest (n0, p) with Syz_{n0+p}(M) isomorphic to Syz_{n0}(M).

    Isomorphism is tested up to degree shift, matching the local-ring
    statement.  None means "not detected within bounds", never a proof.
    """
    from .homs import is_isomorphic

    res = resolve(M, n_max + p_max + 1, degree_cap=degree_cap)
    syzygies = {n: res.syzygy_module(n) for n in range(n_max + p_max + 1)}
    for n0 in range(n_max + 1):
        for p in range(1, p_max + 1):
            if is_isomorphic(syzygies[n0 + p], syzygies[n0], seed=seed):
                return (n0, p)
    return None


@dataclass
class GrowthReport:
    cx_estimate: int
    cx_confident: bool
    curv_estimate: float
    window: int
    finite_projdim: bool
    extremal: Optional[bool] = None

    def as_dict(self):
        return {
            "cx": self.cx_estimate,
            "cx_confident": self.cx_confident,
            "curv": round(self.curv_estimate, 6),
            "window": self.window,
            "finite_projdim": self.finite_projdim,
            "extremal": self.extremal,
        }


def _poly_growth_degree(seq: List[int], tail: int = 3) -> Optional[int]:
    """Degree of eventual polynomial growth of seq, or None if undetected."""
    if not seq:
        return None
    diffs = list(seq)
    for order in range(0, len(seq)):
        if len(diffs) >= tail and all(x == 0 for x in diffs[-tail:]):
            return order - 1
        diffs = [b - a for a, b in zip(diffs, diffs[1:])]
        if not diffs:
            break
    return None


def growth_report(M: GradedModule, H: int = 12, degree_cap: Optional[int] = None,
                  compare_with_k: bool = False) -> GrowthReport:
    """Betti growth statistics: complexity and curvature estimates.

    Complexity is fitted on the even and odd Betti subsequences (CI
    Betti numbers are quasi-polynomial of period two); curvature is the
    max of beta_n^(1/n) over the last third of the window.  Estimates,
    not certificates: the report carries its window size.
    """
    res = resolve(M, H, degree_cap=degree_cap)
    betti = res.betti_numbers(H)
    window = len(betti) - 1
    tail = betti[max(1, H // 3):]
    if all(b == 0 for b in betti[-2:]):
        report = GrowthReport(0, True, 0.0, window, True)
    else:
        even = [b for i, b in enumerate(betti) if i % 2 == 0][1:]
        odd = [b for i, b in enumerate(betti) if i % 2 == 1][1:]
        deg_e = _poly_growth_degree(even)
        deg_o = _poly_growth_degree(odd)
        confident = deg_e is not None and deg_o is not None and H >= 6
        if deg_e is None and deg_o is None:
            # growth outpaced every polynomial fit inside the window; report
            # an upper-bound placeholder, flagged low-confidence
            cx = len(M.ring.relations) if M.ring.is_complete_intersection() else window
            confident = False
        else:
            cx = max(d for d in (deg_e, deg_o) if d is not None) + 1
        curv = max(b ** (1.0 / n) for n, b in enumerate(betti, start=0) if n >= max(1, 2 * H // 3))
        report = GrowthReport(cx, confident, curv, window, False)
    if compare_with_k:
        from .modules import residue_field_module

        k = residue_field_module(M.ring)
        kr = growth_report(k, H=H, degree_cap=degree_cap)
        if M.ring.is_complete_intersection():
            report.extremal = report.cx_estimate == kr.cx_estimate and report.cx_confident
        else:
            report.extremal = (
                not report.finite_projdim
                and kr.curv_estimate > 1.0
                and report.curv_estimate >= 0.85 * kr.curv_estimate
            )
    return report


# ---------------------------------------------------------------------------
# the dualized complex: Ext^i(M, A), depth, MCM test
# ---------------------------------------------------------------------------

def _dual_cokernel(res: FreeResolution, i: int) -> GradedModule:
    """coker(T_i : F_{i-1}* -> F_i*); for i = 0 the free module F_0*."""
    ring = res.ring
    if i == 0:
        degs = tuple(-a for a in res.minimal.gen_degs)
        return free_module(ring, degs, label="F0*")
    step = res.differential(i)
    gen_degs = tuple(-c for c in step.col_degs)
    rel_degs = tuple(-r for r in step.row_degs)
    entries = step.transpose_data()  # cols x rows: entry[j][k] = d_i[k][j]
    return GradedModule(ring, gen_degs, rel_degs, entries, label=f"cokerT{i}", check=False)


def _dual_kernel_elements(res: FreeResolution, i: int, degree_cap: Optional[int],
                          target: GradedModule) -> List[MElem]:
    """Kernel generators of T_{i+1}: F_i* -> F_{i+1}*, as elements of target.

    target must be a module whose free cover is F_i* (e.g. the cokernel
    of T_i); the returned elements are reduced there.
    """
    ring = res.ring
    step = res.differential(i + 1)
    src_degs = tuple(-c for c in ((res.minimal.gen_degs) if i == 0 else res.differential(i).col_degs))
    tgt_degs = tuple(-c for c in step.col_degs)
    # T_{i+1} entry (row over F_{i+1}*, col over F_i*) = d_{i+1}[col][row]
    rows = len(tgt_degs)
    cols = len(src_degs)
    entries = tuple(
        tuple(step.entries[c][r] for c in range(cols)) for r in range(rows)
    )
    cap = degree_cap if degree_cap is not None else (
        max(src_degs, default=0) + 4 * default_stall(ring) + 8)
    ker_step = kernel_step(ring, tgt_degs, src_degs, entries, degree_cap=cap)
    src = free_module(ring, src_degs)
    out = []
    for idx, d in enumerate(ker_step.col_degs):
        pc = src.piece(d)
        vec = [ring.field.element(0)] * pc.total
        for k in range(len(src_degs)):
            e = ker_step.entries[k][idx]
            if e.is_zero():
                continue
            coords = ring.std_coords(e.poly, d - src_degs[k])
            off = pc.offsets[k]
            for t, c in enumerate(coords):
                vec[off + t] = vec[off + t] + c
        out.append(target.element(d, vec))
    return out


def ext_is_zero(M: GradedModule, i: int, degree_cap: Optional[int] = None) -> bool:
    """Whether Ext^i(M, A) vanishes."""
    if i < 0:
        raise UsageError("negative Ext index")
    res = resolve(M, i + 2, degree_cap=degree_cap)
    target = _dual_cokernel(res, i)
    gens = _dual_kernel_elements(res, i, degree_cap, target)
    return all(g.is_zero() for g in gens)


def ext_module(M: GradedModule, i: int, degree_cap: Optional[int] = None) -> GradedModule:
    """Ext^i(M, A) as a finitely presented graded module."""
    res = resolve(M, i + 2, degree_cap=degree_cap)
    target = _dual_cokernel(res, i)
    gens = [g for g in _dual_kernel_elements(res, i, degree_cap, target) if not g.is_zero()]
    if not gens:
        return GradedModule(M.ring, [], [], [], label=f"Ext{i}", check=False)
    N, _ = submodule_presentation(target, gens, label=f"Ext{i}({M.label})" if M.label else f"Ext{i}")
    return N


def depth(M: GradedModule, degree_cap: Optional[int] = None) -> int:
    """depth via local duality: dim A - max{ i : Ext^i(M, A) != 0 }."""
    ring = M.ring
    if not ring.is_gorenstein():
        raise UsageError("depth test implemented over Gorenstein quotients only")
    d = ring.krull_dim()
    top = 0
    for i in range(d + 1):
        if not ext_is_zero(M, i, degree_cap=degree_cap):
            top = i
    return d - top


def mcm_test(M: GradedModule, degree_cap: Optional[int] = None) -> bool:
    """Maximal Cohen-Macaulay: Ext^i(M, A) = 0 for 1 <= i <= dim A."""
    ring = M.ring
    if not ring.is_gorenstein():
        raise UsageError("MCM test implemented over Gorenstein quotients only")
    if M.minimized().num_gens == 0:
        return True
    d = ring.krull_dim()
    return all(ext_is_zero(M, i, degree_cap=degree_cap) for i in range(1, d + 1))


def ulrich_test(M: GradedModule, degree_cap: Optional[int] = None) -> bool:
    """e(M) = mu(M); requires an MCM input."""
    if not mcm_test(M, degree_cap=degree_cap):
        raise UsageError("ulrich test requires a maximal Cohen-Macaulay module")
    inv = invariants(M)
    return inv.multiplicity_e == inv.mu
