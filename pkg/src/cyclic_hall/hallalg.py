"""Generic Hall algebras of nilpotent representations of Q_m and Q_infinity.

Elements are stored in the basis ``f_x = v^(dim O_x) u_x`` where ``u_x`` is
the characteristic function of the isomorphism class ``x``.  The twisted
product is

    u_A * u_B = v^tau(dim A, dim B) * sum_L g^L_{A,B}(v^-2) u_L,

with ``A`` the quotient and ``B`` the sub, ``g`` the Hall number
``#{U <= L : U ~ B, L/U ~ A}`` and
``tau(d, e) = sum_i d_i e_i + sum_i d_i e_(i+1)``.

The production path never enumerates subspaces.  Left multiplication by a
semisimple module has a closed form (``semisimple_quotient_counts``): the
submodules with semisimple quotient contain the radical, so they are
parametrised by graded subspaces of the top, and the automorphism group of
``L`` acts on each vertex's top through the parabolic of the flag by
segment length.  Every other product is reduced to these through the
radical-layer monomials.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from functools import lru_cache
from itertools import product as iproduct
from typing import Iterable, Mapping

from .errors import InvariantError, SizeLimitError, SpanningError, WindowError
from .laurent import ONE, ZERO, LaurentInt, gaussian_binomial, poly_in_v, poly_mul
from .multiseg import (
    DimensionVector,
    Label,
    Multisegment,
    PeriodicMultisegment,
    degeneration_leq,
    dimension_vector,
    format_multisegment,
    labels_with_dimension,
    radical_layers,
    rank_vector,
    semisimple_label,
)

# q = v^Q_EXPONENT; flipping this sign flips every convention below together
Q_EXPONENT = -2
DEFAULT_ORDER_LIMIT = 6
CONVENTION_TAG = f"q=v^{Q_EXPONENT};tau=dd+d(e+1);f=v^dimO;quot-first;linext=rank-lex"


@dataclass(frozen=True)
class Algebra:
    """``period`` m for Q_m; ``None`` with a segment ``window`` for Q_infinity."""

    period: int | None
    window: tuple[int, int] | None = None

    @classmethod
    def cyclic(cls, m: int) -> "Algebra":
        if m < 1:
            raise ValueError("period must be positive")
        return cls(m, None)

    @classmethod
    def linear(cls, lo: int, hi: int) -> "Algebra":
        if lo > hi:
            raise ValueError("window must satisfy lo <= hi")
        return cls(None, (lo, hi))

    @property
    def tag(self) -> str:
        if self.period is not None:
            return f"per({self.period})"
        return f"lin({self.window[0]},{self.window[1]})"

    def check_label(self, x: Label) -> None:
        if x.period != self.period:
            raise ValueError(f"label {format_multisegment(x)} does not belong to {self.tag}")
        if self.period is None and self.window is not None:
            lo, hi = self.window
            for i, j, _ in x.blocks():
                if i < lo or j > hi:
                    raise WindowError(f"segment [{i},{j}] leaves window [{lo},{hi}]")

    def unit_label(self) -> Label:
        return Multisegment() if self.period is None else PeriodicMultisegment(self.period)

    def dv(self, entries) -> DimensionVector:
        return DimensionVector(self.period, entries)


def algebra_of(x: Label, window: tuple[int, int] | None = None) -> Algebra:
    if x.period is not None:
        return Algebra.cyclic(x.period)
    if window is None:
        ends = [e for i, j, _ in x.blocks() for e in (i, j)] or [0]
        window = (min(ends), max(ends))
    return Algebra.linear(*window)


class HallElement:
    """Finite combination of ``f_x`` with LaurentInt coefficients."""

    __slots__ = ("algebra", "terms")

    def __init__(self, algebra: Algebra, terms: Mapping[Label, LaurentInt] | None = None):
        self.algebra = algebra
        clean: dict[Label, LaurentInt] = {}
        for x, c in (terms or {}).items():
            c = c if isinstance(c, LaurentInt) else LaurentInt(c)
            if c:
                algebra.check_label(x)
                clean[x] = clean.get(x, ZERO) + c
        self.terms = {x: c for x, c in clean.items() if c}

    def __add__(self, other: "HallElement") -> "HallElement":
        self._same(other)
        out = dict(self.terms)
        for x, c in other.terms.items():
            out[x] = out.get(x, ZERO) + c
        return HallElement(self.algebra, out)

    def __sub__(self, other: "HallElement") -> "HallElement":
        return self + other.scale(LaurentInt(-1))

    def scale(self, c: LaurentInt | int) -> "HallElement":
        c = c if isinstance(c, LaurentInt) else LaurentInt(c)
        return HallElement(self.algebra, {x: c * a for x, a in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, HallElement):
            return product(self, other)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def coefficient(self, x: Label) -> LaurentInt:
        return self.terms.get(x, ZERO)

    def _same(self, other: "HallElement") -> None:
        if self.algebra.period != other.algebra.period:
            raise ValueError("elements of different algebras")

    def __eq__(self, other):
        if not isinstance(other, HallElement):
            return NotImplemented
        return self.algebra.period == other.algebra.period and self.terms == other.terms

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = [f"({c})*f{format_multisegment(x)}" for x, c in sorted(self.terms.items(), key=lambda t: t[0].sort_key())]
        return " + ".join(parts)


# --- dimension-vector and Hom data ---

def twist(dq: DimensionVector, ds: DimensionVector) -> int:
    """tau(dim quotient, dim sub)."""
    total = 0
    for i, a in dq.entries:
        b = ds[i]
        nxt = ds[(i + 1) % dq.period] if dq.period is not None else ds[i + 1]
        total += a * b + a * nxt
    return total


def segment_hom(a: int, b: int, c: int, d: int, period: int | None) -> int:
    """dim Hom(S_[a,b], S_[c,d]): images are the end pieces [u, d] with u = a."""
    lo = max(c, d - b + a)
    if lo > d:
        return 0
    if period is None:
        return 1 if lo <= a <= d else 0
    r = a % period
    return (d - r) // period - (lo - 1 - r) // period


def dim_hom(x: Label, y: Label) -> int:
    return sum(
        mx * my * segment_hom(a, b, c, d, x.period)
        for a, b, mx in x.blocks()
        for c, d, my in y.blocks()
    )


def orbit_dim(x: Label) -> int:
    dv = dimension_vector(x)
    return sum(n * n for _, n in dv.entries) - dim_hom(x, x)


# --- semisimple left multiplication ---

@lru_cache(maxsize=None)
def semisimple_quotient_counts(module: Label, quot_dv: DimensionVector) -> dict[Label, tuple[int, ...]]:
    """Hall polynomials g^L_{S_d, U} in q for every sub class U, as coefficient tuples."""
    by_vertex: dict[int, list[tuple[int, int, int]]] = {}
    for i, j, mult in module.blocks():
        v = module.vertex(i)
        by_vertex.setdefault(v, []).append((j - i + 1, i, mult))
    for v, c in quot_dv.entries:
        if v not in by_vertex:
            return {}
    per_vertex = []
    for v, blocks in sorted(by_vertex.items()):
        blocks.sort()
        need = quot_dv[v]
        options = []
        for drops in iproduct(*[range(mult + 1) for _, _, mult in blocks]):
            if sum(drops) != need:
                continue
            poly = [1]
            dropped_shorter = 0
            segs: dict[tuple[int, int], int] = {}
            for (length, i, mult), drop in zip(blocks, drops):
                keep = mult - drop
                # cell of W relative to the flag of tops ordered by length
                poly = poly_mul(poly, [0] * (keep * dropped_shorter) + gaussian_binomial(mult, keep))
                dropped_shorter += drop
                if keep:
                    segs[(i, i + length - 1)] = segs.get((i, i + length - 1), 0) + keep
                if drop and length > 1:
                    segs[(i + 1, i + length - 1)] = segs.get((i + 1, i + length - 1), 0) + drop
            options.append((poly, segs))
        if not options:
            return {}
        per_vertex.append(options)
    out: dict[Label, list[int]] = {}
    for combo in iproduct(*per_vertex):
        poly = [1]
        segs: dict[tuple[int, int], int] = {}
        for p, s in combo:
            poly = poly_mul(poly, p)
            for key, c in s.items():
                segs[key] = segs.get(key, 0) + c
        sub = Multisegment(segs) if module.period is None else PeriodicMultisegment(module.period, segs)
        prev = out.get(sub, [])
        n = max(len(prev), len(poly))
        out[sub] = [(prev[t] if t < len(prev) else 0) + (poly[t] if t < len(poly) else 0) for t in range(n)]
    return {k: tuple(v) for k, v in out.items()}


@lru_cache(maxsize=None)
def graded_labels(dv: DimensionVector) -> tuple[Label, ...]:
    """Labels of a graded piece in the fixed linear extension of the degeneration order."""
    labels = labels_with_dimension(dv)
    return tuple(sorted(labels, key=lambda x: (rank_vector(x, dv), format_multisegment(x))))


@lru_cache(maxsize=None)
def _left_semisimple_table(quot_dv: DimensionVector, sub_dv: DimensionVector) -> dict[Label, dict[Label, LaurentInt]]:
    """N -> {L: coefficient of f_L in f_{S_d} * f_N}."""
    table: dict[Label, dict[Label, LaurentInt]] = {}
    tw = twist(quot_dv, sub_dv)
    for module in graded_labels(quot_dv + sub_dv):
        o_l = orbit_dim(module)
        for sub, poly in semisimple_quotient_counts(module, quot_dv).items():
            coeff = poly_in_v(list(poly), Q_EXPONENT).shift(orbit_dim(sub) + tw - o_l)
            table.setdefault(sub, {})[module] = coeff
    return table


def left_semisimple(dv: DimensionVector, a: HallElement) -> HallElement:
    """f_d * a."""
    out: dict[Label, LaurentInt] = {}
    for n_label, c in a.terms.items():
        row = _left_semisimple_table(dv, dimension_vector(n_label)).get(n_label, {})
        for module, coeff in row.items():
            out[module] = out.get(module, ZERO) + c * coeff
    return HallElement(a.algebra, out)


# --- monomials ---

Word = tuple[DimensionVector, ...]


def monomial_of(x: Label) -> list[DimensionVector]:
    """Radical layers of M_x, top first (the leftmost factor is the top quotient)."""
    return radical_layers(x)


def expand_word(algebra: Algebra, word: Iterable[DimensionVector]) -> HallElement:
    elem = HallElement(algebra, {algebra.unit_label(): ONE})
    for dv in reversed(tuple(word)):
        elem = left_semisimple(dv, elem)
    return elem


@lru_cache(maxsize=None)
def _monomial_expansion(x: Label, algebra: Algebra) -> dict[Label, LaurentInt]:
    elem = expand_word(algebra, monomial_of(x))
    lead = elem.coefficient(x)
    if lead != ONE:
        raise SpanningError(f"monomial of {format_multisegment(x)} has leading coefficient {lead}")
    for y in elem.terms:
        if y != x and not degeneration_leq(y, x):
            raise SpanningError(
                f"monomial of {format_multisegment(x)} contains non-degeneration {format_multisegment(y)}"
            )
    return elem.terms


@lru_cache(maxsize=None)
def _words_of(x: Label, algebra: Algebra) -> tuple[tuple[Word, LaurentInt], ...]:
    """f_x as a combination of monomial words (triangular inversion)."""
    acc: dict[Word, LaurentInt] = {tuple(monomial_of(x)): ONE}
    for y, c in _monomial_expansion(x, algebra).items():
        if y == x:
            continue
        for word, d in _words_of(y, algebra):
            acc[word] = acc.get(word, ZERO) - c * d
    return tuple((w, c) for w, c in acc.items() if c)


def words_of(x: Label, algebra: Algebra | None = None) -> dict[Word, LaurentInt]:
    algebra = algebra or algebra_of(x)
    return dict(_words_of(x, _pieceless(algebra)))


def _pieceless(algebra: Algebra) -> Algebra:
    # Hall structure constants do not depend on the window; share caches
    return Algebra(algebra.period, None) if algebra.period is None else algebra


def _check_limit(x: Label, limit: int) -> None:
    if x.order > limit:
        raise SizeLimitError(f"order {x.order} exceeds limit {limit}")


# --- public operations ---

def f_of(x: Label, algebra: Algebra | None = None) -> HallElement:
    algebra = algebra or algebra_of(x)
    return HallElement(algebra, {x: ONE})


def u_of(x: Label, algebra: Algebra | None = None) -> HallElement:
    """Characteristic function ``u_x = v^(-dim O_x) f_x``."""
    return f_of(x, algebra).scale(LaurentInt.monomial(-orbit_dim(x)))


def f_d(dv: DimensionVector, algebra: Algebra | None = None) -> HallElement:
    x = semisimple_label(dv)
    return f_of(x, algebra)


def product(a: HallElement, b: HallElement, limit: int = DEFAULT_ORDER_LIMIT) -> HallElement:
    a._same(b)
    alg = _pieceless(a.algebra)
    out = HallElement(a.algebra, {})
    for x, cx in a.terms.items():
        for y in b.terms:
            _check_limit_pair(x, y, limit)
        for word, cw in _words_of(x, alg):
            elem = HallElement(alg, dict(b.terms))
            for dv in reversed(word):
                elem = left_semisimple(dv, elem)
            out = out + HallElement(a.algebra, {z: cx * cw * c for z, c in elem.terms.items()})
    return out


def _check_limit_pair(x: Label, y: Label, limit: int) -> None:
    if x.order + y.order > limit:
        raise SizeLimitError(f"product of total order {x.order + y.order} exceeds limit {limit}")


@lru_cache(maxsize=None)
def _bar_of_f(x: Label, algebra: Algebra) -> tuple[tuple[Label, LaurentInt], ...]:
    acc: dict[Label, LaurentInt] = {}
    for word, c in _words_of(x, algebra):
        for z, d in expand_word(algebra, word).terms.items():
            acc[z] = acc.get(z, ZERO) + c.bar() * d
    return tuple((z, c) for z, c in acc.items() if c)


def bar(a: HallElement) -> HallElement:
    """Ring map with v -> v^-1 fixing every f_d, multiplicative on their products."""
    alg = _pieceless(a.algebra)
    out: dict[Label, LaurentInt] = {}
    for x, c in a.terms.items():
        for z, d in _bar_of_f(x, alg):
            out[z] = out.get(z, ZERO) + c.bar() * d
    return HallElement(a.algebra, out)


def specialize_v1(a: HallElement) -> HallElement:
    return HallElement(a.algebra, {x: LaurentInt(c.at_one()) for x, c in a.terms.items()})


def coefficients_at_v1(a: HallElement) -> dict[Label, int]:
    return {x: c.at_one() for x, c in a.terms.items() if c.at_one()}


# --- canonical basis ---

@dataclass(frozen=True)
class BasisConversion:
    """``to_b[i][j]``: coefficient of f_{labels[j]} in b_{labels[i]}; ``to_f`` is its inverse."""

    algebra: Algebra
    dv: DimensionVector
    labels: tuple[Label, ...]
    to_b: tuple[tuple[LaurentInt, ...], ...]
    to_f: tuple[tuple[LaurentInt, ...], ...]

    def index(self, x: Label) -> int:
        return self.labels.index(x)

    def b_of(self, x: Label) -> HallElement:
        row = self.to_b[self.index(x)]
        return HallElement(self.algebra, {y: c for y, c in zip(self.labels, row)})

    def at_v1(self) -> list[list[int]]:
        return [[c.at_one() for c in row] for row in self.to_b]

    def extension_hash(self) -> str:
        text = CONVENTION_TAG + "|" + ";".join(format_multisegment(x) for x in self.labels)
        return hashlib.sha256(text.encode()).hexdigest()[:16]


def bar_matrix(dv: DimensionVector, algebra: Algebra | None = None) -> tuple[tuple[Label, ...], list[list[LaurentInt]]]:
    algebra = _pieceless(algebra or Algebra(dv.period))
    labels = graded_labels(dv)
    pos = {x: n for n, x in enumerate(labels)}
    mat = [[ZERO] * len(labels) for _ in labels]
    for n, x in enumerate(labels):
        for z, c in _bar_of_f(x, algebra):
            mat[n][pos[z]] = c
    return labels, mat


def unitriangular_inverse(mat: list[list[LaurentInt]]) -> list[list[LaurentInt]]:
    """Inverse of a lower unitriangular matrix."""
    n = len(mat)
    inv = [[ONE if i == j else ZERO for j in range(n)] for i in range(n)]
    for i in range(n):
        for j in range(i - 1, -1, -1):
            acc = ZERO
            for k in range(j, i):
                if mat[i][k]:
                    acc = acc + mat[i][k] * inv[k][j]
            inv[i][j] = -acc
    return inv


_CANON_MEMO: dict[tuple[Algebra, DimensionVector], BasisConversion] = {}
_DEFAULT_CACHE = None


def set_default_canon_cache(cache) -> None:
    """Persistent cache consulted when ``canonical_basis`` gets no explicit one."""
    global _DEFAULT_CACHE
    _DEFAULT_CACHE = cache


def clear_memory_caches() -> None:
    _CANON_MEMO.clear()
    for fn in (semisimple_quotient_counts, graded_labels, _left_semisimple_table,
               _monomial_expansion, _words_of, _bar_of_f):
        fn.cache_clear()


def canonical_basis(dv: DimensionVector, algebra: Algebra | None = None,
                    limit: int = DEFAULT_ORDER_LIMIT, cache=None) -> BasisConversion:
    """Bar-invariant b_x = f_x + sum_{y<x} c_xy f_y with c_xy in vZ[v]."""
    if dv.total > limit:
        raise SizeLimitError(f"graded piece of order {dv.total} exceeds limit {limit}")
    algebra = algebra or (Algebra.cyclic(dv.period) if dv.period is not None else Algebra.linear(
        min(dv.support(), default=0), max(dv.support(), default=0)))
    key = (_pieceless(algebra), dv)
    cache = cache if cache is not None else _DEFAULT_CACHE
    if key in _CANON_MEMO:
        conv = _CANON_MEMO[key]
        return BasisConversion(algebra, dv, conv.labels, conv.to_b, conv.to_f)
    if cache is not None:
        hit = cache.get(algebra, dv)
        if hit is not None:
            _check_conversion(hit)
            _CANON_MEMO[key] = hit
            return hit
    labels, bmat = bar_matrix(dv, algebra)
    n = len(labels)
    for i in range(n):
        if bmat[i][i] != ONE or any(bmat[i][j] for j in range(i + 1, n)):
            raise InvariantError(f"bar involution is not unitriangular on {dv}")
    coeffs = [[ZERO] * n for _ in range(n)]
    for x in range(n):
        coeffs[x][x] = ONE
        for z in range(x - 1, -1, -1):
            rhs = ZERO
            for y in range(z + 1, x + 1):
                if coeffs[x][y] and bmat[y][z]:
                    rhs = rhs + coeffs[x][y].bar() * bmat[y][z]
            if rhs.bar() != -rhs:
                raise InvariantError(
                    f"no bar-invariant correction for {format_multisegment(labels[x])} at "
                    f"{format_multisegment(labels[z])}: {rhs}"
                )
            coeffs[x][z] = rhs.positive_part()
    to_b = tuple(tuple(row) for row in coeffs)
    to_f = tuple(tuple(row) for row in unitriangular_inverse(coeffs))
    conv = BasisConversion(algebra, dv, labels, to_b, to_f)
    _CANON_MEMO[key] = conv
    if cache is not None:
        cache.put(conv)
    return conv


def _check_conversion(conv: BasisConversion) -> None:
    n = len(conv.labels)
    for i in range(n):
        if conv.to_b[i][i] != ONE or any(conv.to_b[i][j] for j in range(i + 1, n)):
            raise InvariantError(f"cached basis for {conv.dv} is not unitriangular")
        for j in range(i):
            c = conv.to_b[i][j]
            if c and c.min_degree() < 1:
                raise InvariantError(f"cached basis for {conv.dv} has an entry outside vZ[v]")


def canonical_element(x: Label, algebra: Algebra | None = None) -> HallElement:
    algebra = algebra or algebra_of(x)
    return canonical_basis(dimension_vector(x), algebra).b_of(x)


# --- cache file for canonical bases ---

CANON_HEADER = "cyclic-hall canon v1"


def format_matrix(mat) -> str:
    return ";".join(",".join(c.serialize() for c in row) for row in mat)


def parse_matrix(text: str) -> list[list[LaurentInt]]:
    if not text:
        return []
    return [[LaurentInt.parse(c) for c in row.split(",")] for row in text.split(";")]


def _algebra_key(algebra: Algebra) -> str:
    # structure constants are window-independent
    return _pieceless(algebra).tag if algebra.period is not None else "lin"


class CanonCache:
    """``algebra|dv|linear-extension-hash|matrix`` records (F->B matrices)."""

    def __init__(self, path=None):
        from pathlib import Path

        self.path = Path(path) if path is not None else None
        self._data: dict[tuple[str, str], tuple[str, str]] = {}
        self._dirty = False
        if self.path is not None and self.path.exists():
            self.load()

    def load(self) -> None:
        lines = self.path.read_text().splitlines()
        if not lines or lines[0].strip() != CANON_HEADER:
            return
        for line in lines[1:]:
            if line.strip():
                alg, dv, h, mat = line.split("|")
                self._data[(alg, dv)] = (h, mat)

    def get(self, algebra: Algebra, dv: DimensionVector) -> BasisConversion | None:
        hit = self._data.get((_algebra_key(algebra), str(dv)))
        if hit is None:
            return None
        h, text = hit
        labels = graded_labels(dv)
        probe = BasisConversion(algebra, dv, labels, (), ())
        if probe.extension_hash() != h:
            return None  # conventions or ordering changed
        to_b = parse_matrix(text)
        if len(to_b) != len(labels):
            return None
        to_f = unitriangular_inverse(to_b)
        return BasisConversion(algebra, dv, labels, tuple(map(tuple, to_b)), tuple(map(tuple, to_f)))

    def put(self, conv: BasisConversion) -> None:
        self._data[(_algebra_key(conv.algebra), str(conv.dv))] = (conv.extension_hash(), format_matrix(conv.to_b))
        self._dirty = True

    def __len__(self) -> int:
        return len(self._data)

    def dumps(self) -> str:
        rows = [CANON_HEADER]
        for (alg, dv), (h, mat) in sorted(self._data.items()):
            rows.append(f"{alg}|{dv}|{h}|{mat}")
        return "\n".join(rows) + "\n"

    def save(self) -> None:
        if self.path is None or not self._dirty:
            return
        from .hallcount import atomic_write

        atomic_write(self.path, self.dumps())
        self._dirty = False
