"""Weighted-graded polynomial rings and quotients by homogeneous ideals.

No Groebner bases: in the graded setting every question about the
quotient A = k[x_1..x_m]/(f_1..f_r) is answered one degree at a time by
row reduction.  The degree-d piece of the ideal is spanned by the
products (monomial of degree d - deg f_j) * f_j, and the quotient piece
gets the canonical basis of "standard monomials" (non-pivot columns of
the reduced span).  Elements are kept in normal form: supported on
standard monomials only.

Polynomials are dicts mapping exponent tuples to nonzero coefficients.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .errors import DegreeBoundExceeded, UsageError
from .linalg import (
    QQ,
    DenseMatrix,
    RowSpace,
    field_of_characteristic,
    intersect_rowspaces,
)

Mono = Tuple[int, ...]
Poly = Dict[Mono, object]

# hard guard against runaway degreewise scans
MAX_INTERNAL_DEGREE = 512


def poly_add(a: Poly, b: Poly, field) -> Poly:
    out = dict(a)
    qq = field == QQ
    for m, c in b.items():
        v = out.get(m, 0) + c
        if not qq:
            v %= field.p
        if v:
            out[m] = v
        else:
            out.pop(m, None)
    return out


def poly_scale(a: Poly, c, field) -> Poly:
    c = field.element(c)
    if c == 0:
        return {}
    if field == QQ:
        return {m: v * c for m, v in a.items()}
    p = field.p
    return {m: (v * c) % p for m, v in a.items()}


def poly_mul(a: Poly, b: Poly, field) -> Poly:
    out: Poly = {}
    if field == QQ:
        for m1, c1 in a.items():
            for m2, c2 in b.items():
                m = tuple(e1 + e2 for e1, e2 in zip(m1, m2))
                v = out.get(m, Fraction(0)) + c1 * c2
                if v:
                    out[m] = v
                elif m in out:
                    del out[m]
        return out
    p = field.p
    for m1, c1 in a.items():
        for m2, c2 in b.items():
            m = tuple(e1 + e2 for e1, e2 in zip(m1, m2))
            v = (out.get(m, 0) + c1 * c2) % p
            if v:
                out[m] = v
            elif m in out:
                del out[m]
    return out


def poly_key(a: Poly) -> tuple:
    return tuple(sorted(a.items()))


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\^)|(\*)|(\+)|(-)|(\()|(\)))")


class _Parser:
    """Recursive-descent parser for polynomial strings.

    Integer coefficients, '^' powers, '*' optional (juxtaposition
    multiplies), parentheses allowed.
    """

    def __init__(self, text: str, ring: "WeightedPolyRing"):
        self.ring = ring
        self.tokens = []
        pos = 0
        while pos < len(text):
            m = _TOKEN.match(text, pos)
            if not m or m.end() == pos:
                if text[pos:].strip() == "":
                    break
                raise UsageError(f"cannot tokenize polynomial at: {text[pos:]!r}")
            pos = m.end()
            for kind, val in enumerate(m.groups()):
                if val is not None:
                    if kind == 1:
                        self.tokens.extend(self._split_names(val))
                    else:
                        self.tokens.append((kind, val))
                    break
        self.i = 0

    def _split_names(self, text: str):
        """Split a run of letters into known variable names, longest first."""
        if text in self.ring.var_index:
            return [(1, text)]
        names = sorted(self.ring.variables, key=len, reverse=True)
        out = []
        rest = text
        while rest:
            for name in names:
                if rest.startswith(name):
                    out.append((1, name))
                    rest = rest[len(name):]
                    break
            else:
                raise UsageError(f"unknown variable {rest!r}")
        return out

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else (None, None)

    def next(self):
        t = self.peek()
        self.i += 1
        return t

    def parse(self) -> Poly:
        p = self.expr()
        if self.i != len(self.tokens):
            raise UsageError(f"trailing tokens in polynomial: {self.tokens[self.i:]}")
        return p

    def expr(self) -> Poly:
        sign = 1
        kind, _ = self.peek()
        if kind in (4, 5):
            self.next()
            sign = 1 if kind == 4 else -1
        out = poly_scale(self.term(), sign, self.ring.field)
        while True:
            kind, _ = self.peek()
            if kind == 4:
                self.next()
                out = poly_add(out, self.term(), self.ring.field)
            elif kind == 5:
                self.next()
                out = poly_add(out, poly_scale(self.term(), -1, self.ring.field), self.ring.field)
            else:
                return out

    def term(self) -> Poly:
        out = self.factor()
        while True:
            kind, _ = self.peek()
            if kind == 3:
                self.next()
                out = poly_mul(out, self.factor(), self.ring.field)
            elif kind in (0, 1, 6):  # juxtaposition
                out = poly_mul(out, self.factor(), self.ring.field)
            else:
                return out

    def factor(self) -> Poly:
        kind, val = self.next()
        if kind == 0:
            base: Poly = {self.ring.unit_mono: self.ring.field.element(int(val))}
            if base[self.ring.unit_mono] == 0:
                base = {}
        elif kind == 1:
            if val not in self.ring.var_index:
                raise UsageError(f"unknown variable {val!r}")
            e = [0] * len(self.ring.variables)
            e[self.ring.var_index[val]] = 1
            base = {tuple(e): self.ring.field.element(1)}
        elif kind == 6:
            base = self.expr()
            kind2, _ = self.next()
            if kind2 != 7:
                raise UsageError("unbalanced parenthesis in polynomial")
        else:
            raise UsageError("expected a coefficient, variable or '('")
        kind, _ = self.peek()
        if kind == 2:
            self.next()
            kind2, val2 = self.next()
            if kind2 != 0:
                raise UsageError("exponent must be a nonnegative integer")
            n = int(val2)
            out: Poly = {self.ring.unit_mono: self.ring.field.element(1)}
            for _ in range(n):
                out = poly_mul(out, base, self.ring.field)
            return out
        return base


class WeightedPolyRing:
    """Polynomial ring with positive integer weights on the variables."""

    def __init__(self, characteristic: int, variables: Sequence[str], weights: Optional[Sequence[int]] = None):
        self.field = field_of_characteristic(characteristic)
        self.variables = tuple(variables)
        if len(set(self.variables)) != len(self.variables):
            raise UsageError("variable names must be distinct")
        self.weights = tuple(int(w) for w in (weights if weights is not None else [1] * len(self.variables)))
        if len(self.weights) != len(self.variables):
            raise UsageError("one weight per variable required")
        if any(w < 1 for w in self.weights):
            raise UsageError("weights must be >= 1")
        self.var_index = {v: i for i, v in enumerate(self.variables)}
        self.unit_mono: Mono = (0,) * len(self.variables)
        self._mono_cache: Dict[int, Tuple[Mono, ...]] = {}

    @property
    def characteristic(self) -> int:
        return self.field.characteristic

    @property
    def key(self):
        return (self.characteristic, self.variables, self.weights)

    def __eq__(self, other):
        return isinstance(other, WeightedPolyRing) and other.key == self.key

    def __hash__(self):
        return hash(self.key)

    def __repr__(self):
        w = "" if all(x == 1 for x in self.weights) else f", weights={list(self.weights)}"
        return f"GF({self.characteristic})" if False else (
            f"k[{','.join(self.variables)}](char {self.characteristic}{w})"
        )

    def wdeg(self, mono: Mono) -> int:
        return sum(e * w for e, w in zip(mono, self.weights))

    def poly_degree(self, poly: Poly) -> Optional[int]:
        """Weighted degree of a homogeneous polynomial; None for 0."""
        if not poly:
            return None
        degs = {self.wdeg(m) for m in poly}
        if len(degs) != 1:
            raise UsageError("polynomial is not weighted-homogeneous")
        return degs.pop()

    def monomials(self, d: int) -> Tuple[Mono, ...]:
        """All monomials of weighted degree d, lex-descending (deterministic)."""
        if d < 0:
            return ()
        if d > MAX_INTERNAL_DEGREE:
            raise DegreeBoundExceeded(f"inconclusive: degree bound (internal degree {d})")
        cached = self._mono_cache.get(d)
        if cached is not None:
            return cached
        out: List[Mono] = []
        nvars = len(self.variables)

        def rec(i: int, rem: int, acc: List[int]):
            if i == nvars - 1:
                if rem % self.weights[i] == 0:
                    out.append(tuple(acc + [rem // self.weights[i]]))
                return
            w = self.weights[i]
            for e in range(rem // w, -1, -1):
                rec(i + 1, rem - e * w, acc + [e])

        rec(0, d, [])
        res = tuple(sorted(out, reverse=True))
        self._mono_cache[d] = res
        return res

    def parse(self, text: str) -> Poly:
        return _Parser(text, self).parse()

    def poly_to_str(self, poly: Poly) -> str:
        if not poly:
            return "0"
        parts = []
        for mono in sorted(poly, reverse=True):
            c = poly[mono]
            factors = []
            for v, e in zip(self.variables, mono):
                if e == 1:
                    factors.append(v)
                elif e > 1:
                    factors.append(f"{v}^{e}")
            body = "*".join(factors)
            if not body:
                parts.append(str(c))
            elif c == 1:
                parts.append(body)
            else:
                parts.append(f"{c}*{body}")
        return " + ".join(parts).replace("+ -", "- ")

    def quotient(self, relations: Iterable) -> "QuotientRing":
        return QuotientRing(self, relations)


class _Piece:
    """Degree-d data of a quotient ring: monomials, ideal span, basis."""

    __slots__ = ("degree", "monos", "index", "rel_space", "std", "std_index")

    def __init__(self, degree, monos, index, rel_space, std, std_index):
        self.degree = degree
        self.monos = monos
        self.index = index
        self.rel_space = rel_space
        self.std = std
        self.std_index = std_index

    @property
    def dim(self) -> int:
        return len(self.std)


class QuotientRing:
    """A weighted-graded quotient k[x_1..x_m]/(f_1..f_r).

    Relations may be empty, in which case this is the ambient polynomial
    ring itself (used as the lifting target for matrix factorizations
    and Eisenbud operators).
    """

    def __init__(self, ambient: WeightedPolyRing, relations: Iterable):
        self.ambient = ambient
        self.field = ambient.field
        rels: List[Poly] = []
        for rel in relations:
            poly = ambient.parse(rel) if isinstance(rel, str) else dict(rel)
            if not poly:
                raise UsageError("zero relation")
            d = ambient.poly_degree(poly)
            if d is not None and d < 1:
                raise UsageError("relations must have positive degree")
            rels.append(poly)
        self.relations = tuple(rels)
        self.relation_degrees = tuple(ambient.poly_degree(r) for r in self.relations)
        self._pieces: Dict[int, _Piece] = {}
        self._mult_cache: Dict[tuple, DenseMatrix] = {}
        self._dim_cache: Optional[int] = None
        self._e_cache: Optional[int] = None

    # -- identity ------------------------------------------------------

    @property
    def key(self):
        return (self.ambient.key, tuple(poly_key(r) for r in self.relations))

    def __eq__(self, other):
        return isinstance(other, QuotientRing) and other.key == self.key

    def __hash__(self):
        return hash(self.key)

    def __repr__(self):
        rels = ", ".join(self.ambient.poly_to_str(r) for r in self.relations)
        return f"{self.ambient!r}/({rels})"

    @property
    def characteristic(self) -> int:
        return self.ambient.characteristic

    @property
    def variables(self):
        return self.ambient.variables

    @property
    def weights(self):
        return self.ambient.weights

    @property
    def max_weight(self) -> int:
        return max(self.weights)

    def is_trivial_quotient(self) -> bool:
        return not self.relations

    # -- degreewise pieces ----------------------------------------------

    def piece(self, d: int) -> _Piece:
        got = self._pieces.get(d)
        if got is not None:
            return got
        monos = self.ambient.monomials(d) if d >= 0 else ()
        index = {m: i for i, m in enumerate(monos)}
        space = RowSpace(self.field, len(monos))
        for rel, rd in zip(self.relations, self.relation_degrees):
            for u in self.ambient.monomials(d - rd):
                prod = poly_mul({u: self.field.element(1)}, rel, self.field)
                vec = [self.field.element(0)] * len(monos)
                for m, c in prod.items():
                    vec[index[m]] = c
                space.add(vec)
        pivots = set(space.pivots())
        std = tuple(i for i in range(len(monos)) if i not in pivots)
        std_index = {c: i for i, c in enumerate(std)}
        piece = _Piece(d, monos, index, space, std, std_index)
        self._pieces[d] = piece
        return piece

    def degree_basis(self, d: int) -> Tuple[Mono, ...]:
        """Standard-monomial basis of the degree-d piece."""
        if d < 0:
            return ()
        pc = self.piece(d)
        return tuple(pc.monos[i] for i in pc.std)

    def hilbert_function(self, d: int) -> int:
        if d < 0:
            return 0
        return self.piece(d).dim

    # -- normal forms -----------------------------------------------------

    def normal_form(self, poly: Poly) -> Poly:
        """Reduce a polynomial modulo the ideal, degree by degree."""
        if not poly:
            return {}
        by_deg: Dict[int, Poly] = {}
        for m, c in poly.items():
            by_deg.setdefault(self.ambient.wdeg(m), {})[m] = c
        out: Poly = {}
        for d, part in by_deg.items():
            pc = self.piece(d)
            vec = [self.field.element(0)] * len(pc.monos)
            for m, c in part.items():
                vec[pc.index[m]] = c
            red = pc.rel_space.reduce(vec)
            for i in pc.std:
                c = red[i]
                if c:
                    out[pc.monos[i]] = int(c) if self.field != QQ else c
        return out

    def std_coords(self, poly: Poly, d: int):
        """Coordinates of a (normal-form) degree-d polynomial over the basis."""
        pc = self.piece(d)
        vec = [self.field.element(0)] * pc.dim
        for m, c in poly.items():
            vec[pc.std_index[pc.index[m]]] = c
        return vec

    def poly_from_std_coords(self, coords, d: int) -> Poly:
        pc = self.piece(d)
        out: Poly = {}
        for i, c in enumerate(coords):
            c = self.field.element(c)
            if c:
                out[pc.monos[pc.std[i]]] = c
        return out

    # -- elements ---------------------------------------------------------

    def element(self, value, degree: Optional[int] = None) -> "RingElement":
        if isinstance(value, RingElement):
            if value.ring.key != self.key:
                raise UsageError("element belongs to a different ring")
            return value
        if isinstance(value, str):
            poly = self.ambient.parse(value)
        elif isinstance(value, dict):
            poly = dict(value)
        else:  # scalar
            c = self.field.element(value)
            poly = {self.ambient.unit_mono: c} if c else {}
        poly = self.normal_form(poly)
        d = self.ambient.poly_degree(poly)
        if d is None:
            d = degree
        elif degree is not None and degree != d:
            raise UsageError(f"element has degree {d}, expected {degree}")
        return RingElement(self, poly, d)

    def zero(self, degree: Optional[int] = None) -> "RingElement":
        return RingElement(self, {}, degree)

    def one(self) -> "RingElement":
        return self.element(1)

    def gens(self) -> Tuple["RingElement", ...]:
        return tuple(self.element(v) for v in self.variables)

    # -- multiplication operators ------------------------------------------

    def mult_matrix(self, poly: Poly, srcdeg: int) -> DenseMatrix:
        """Matrix of multiplication by a homogeneous normal-form poly.

        Maps std coords of A_srcdeg to std coords of A_{srcdeg+deg}.
        """
        e = self.ambient.poly_degree(poly)
        if e is None:
            src = self.piece(srcdeg)
            return DenseMatrix.zeros(self.field, 0, src.dim)
        key = (poly_key(poly), srcdeg)
        got = self._mult_cache.get(key)
        if got is not None:
            return got
        src = self.piece(srcdeg)
        tgt = self.piece(srcdeg + e)
        cols = []
        for ci in src.std:
            mono = src.monos[ci]
            prod = self.normal_form(poly_mul({mono: self.field.element(1)}, poly, self.field))
            cols.append(self.std_coords(prod, srcdeg + e))
        if cols:
            mat = DenseMatrix.from_rows(self.field, cols, tgt.dim).transpose()
        else:
            mat = DenseMatrix.zeros(self.field, tgt.dim, 0)
        self._mult_cache[key] = mat
        return mat

    # -- ring invariants -----------------------------------------------------

    def hilbert_series_ci(self, bound: int) -> List[int]:
        """Coefficients of prod(1-t^deg fi) / prod(1-t^wj) up to bound."""
        num = [0] * (bound + 1)
        num[0] = 1
        for d in self.relation_degrees:
            new = list(num)
            for i in range(bound + 1 - d):
                new[i + d] -= num[i]
            num = new
        coeffs = list(num)
        for w in self.weights:
            # divide by (1 - t^w): running sums
            for i in range(w, bound + 1):
                coeffs[i] += coeffs[i - w]
        return coeffs

    def ci_check(self, bound: Optional[int] = None) -> bool:
        """Koszul criterion, degreewise: Hilbert series matches the CI product."""
        if bound is None:
            bound = sum(self.relation_degrees) + sum(self.weights) + 6
        expect = self.hilbert_series_ci(bound)
        if any(c < 0 for c in expect):
            return False
        return all(self.hilbert_function(d) == expect[d] for d in range(bound + 1))

    def is_complete_intersection(self) -> bool:
        if not hasattr(self, "_ci_flag"):
            self._ci_flag = self.ci_check()
        return self._ci_flag

    def is_artinian(self, horizon: Optional[int] = None) -> bool:
        if horizon is None:
            horizon = sum(self.relation_degrees) + sum(self.weights) + 4
        d = 0
        zeros = 0
        while d <= horizon:
            if self.hilbert_function(d) == 0:
                zeros += 1
                if zeros >= self.max_weight:
                    return True
            else:
                zeros = 0
            d += 1
        return False

    def krull_dim(self) -> int:
        if self._dim_cache is not None:
            return self._dim_cache
        if self.is_complete_intersection():
            dim = len(self.variables) - len(self.relations)
        elif self.is_artinian():
            dim = 0
        else:
            dim, _ = self.hilbert_samuel_fit()
        self._dim_cache = dim
        return dim

    def socle_dimension(self, horizon: Optional[int] = None) -> int:
        """dim of (0 : m) for an Artinian quotient."""
        if horizon is None:
            horizon = sum(self.relation_degrees) + sum(self.weights) + 4
        total = 0
        for d in range(horizon + 1):
            pc = self.piece(d)
            if pc.dim == 0:
                continue
            space = None
            for var in self.variables:
                poly = self.normal_form(self.ambient.parse(var))
                mm = self.mult_matrix(poly, d)
                ker = mm.kernel_basis()
                ks = RowSpace(self.field, pc.dim)
                ks.add_matrix(ker.transpose())
                space = ks if space is None else intersect_rowspaces(space, ks, self.field, pc.dim)
            if space is not None:
                total += space.dim
        return total

    def is_gorenstein(self) -> bool:
        """Complete intersections, or Artinian with one-dimensional socle."""
        if self.is_complete_intersection():
            return True
        if self.is_artinian():
            return self.socle_dimension() == 1
        return False

    def maximal_ideal_piece(self, s: int, d: int):
        """Span of (m^s)_d as std coordinates inside A_d."""
        pc = self.piece(d)
        space = RowSpace(self.field, pc.dim)
        for i in pc.std:
            mono = pc.monos[i]
            if sum(mono) >= s:
                vec = [self.field.element(0)] * pc.dim
                vec[pc.std_index[i]] = self.field.element(1)
                space.add(vec)
        # pieces of the ideal generated by non-standard monomials of big support
        for i, mono in enumerate(pc.monos):
            if i in pc.std_index or sum(mono) < s:
                continue
            nf = self.normal_form({mono: self.field.element(1)})
            space.add(self.std_coords(nf, d))
        return space

    def hs_length(self, s: int) -> int:
        """Length of A/m^s."""
        total = 0
        d = 0
        cutoff = s * self.max_weight
        while d < cutoff:
            total += self.piece(d).dim - self.maximal_ideal_piece(s, d).dim
            d += 1
        return total

    def hilbert_samuel_fit(self, s_max: int = 14):
        """(dim, e) from the Hilbert-Samuel function of the ring."""
        values = [self.hs_length(s) for s in range(1, s_max + 1)]
        return fit_hilbert_samuel(values)

    def multiplicity(self) -> int:
        if self._e_cache is None:
            dim, e = self.hilbert_samuel_fit()
            if self._dim_cache is None:
                self._dim_cache = dim
            self._e_cache = e
        return self._e_cache


def fit_hilbert_samuel(values: List[int], tail: int = 3):
    """Detect stabilized finite differences of the HS function.

    Returns (order, constant): the order of the first difference that is
    eventually constant (= Krull dimension) and the constant itself
    (= multiplicity).  Raises Inconclusive when the window is too short.
    """
    diffs = list(values)
    for order in range(0, len(values)):
        if len(diffs) >= tail + 1:
            window = diffs[-(tail + 1):]
            if all(x == window[0] for x in window) and window[0] != 0:
                return order, window[0]
        diffs = [b - a for a, b in zip(diffs, diffs[1:])]
        if not diffs:
            break
    raise DegreeBoundExceeded("inconclusive: Hilbert-Samuel window too short to stabilize")


class RingElement:
    """Homogeneous element of a quotient ring, kept in normal form."""

    __slots__ = ("ring", "poly", "degree")

    def __init__(self, ring: QuotientRing, poly: Poly, degree: Optional[int]):
        self.ring = ring
        self.poly = poly
        self.degree = degree

    def is_zero(self) -> bool:
        return not self.poly

    def _check(self, other: "RingElement"):
        if self.ring.key != other.ring.key:
            raise UsageError("mixed-ring operands")

    def __add__(self, other: "RingElement") -> "RingElement":
        self._check(other)
        if not other.poly:
            return self
        if not self.poly:
            return other
        if self.degree != other.degree:
            raise UsageError("adding elements of different degrees")
        out = poly_add(self.poly, other.poly, self.ring.field)
        return RingElement(self.ring, out, self.degree)

    def __sub__(self, other: "RingElement") -> "RingElement":
        return self + other.scale(-1)

    def scale(self, c) -> "RingElement":
        out = poly_scale(self.poly, c, self.ring.field)
        return RingElement(self.ring, out, self.degree)

    def __neg__(self):
        return self.scale(-1)

    def __mul__(self, other: "RingElement") -> "RingElement":
        self._check(other)
        deg = None
        if self.degree is not None and other.degree is not None:
            deg = self.degree + other.degree
        if not self.poly or not other.poly:
            return RingElement(self.ring, {}, deg)
        prod = poly_mul(self.poly, other.poly, self.ring.field)
        return RingElement(self.ring, self.ring.normal_form(prod), deg)

    def __eq__(self, other):
        if not isinstance(other, RingElement):
            return NotImplemented
        return self.ring.key == other.ring.key and self.poly == other.poly

    def __hash__(self):
        return hash((self.ring.key, poly_key(self.poly)))

    def __repr__(self):
        return self.ring.ambient.poly_to_str(self.poly)

    def constant_coefficient(self):
        """Scalar part (coefficient of the unit monomial)."""
        return self.poly.get(self.ring.ambient.unit_mono, self.ring.field.element(0))

    def is_unit(self) -> bool:
        return bool(self.poly) and self.ring.ambient.poly_degree(self.poly) == 0
