"""Brute-force Hall numbers over prime fields.

This is the independent oracle: explicit nilpotent representations, graded
subspace enumeration in reduced echelon form, and Hall polynomials
recovered by interpolation over several primes.

Convention: ``count_submodules(M, sub, quot)`` counts subrepresentations
``X`` of ``M`` with ``X ~ sub`` and ``M/X ~ quot``.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, product
from pathlib import Path

from .errors import InvariantError, SizeLimitError
from .laurent import format_qpoly, gaussian_binomial, parse_qpoly, poly_eval, poly_trim
from .multiseg import (
    DimensionVector,
    Label,
    Multisegment,
    PeriodicMultisegment,
    dimension_vector,
    format_multisegment,
    parse_label,
)

DEFAULT_ORDER_LIMIT = 6
DEFAULT_ENUMERATION_BUDGET = 3_000_000

Vector = tuple[int, ...]
Matrix = tuple[Vector, ...]  # rows


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    f = 2
    while f * f <= n:
        if n % f == 0:
            return False
        f += 1
    return True


def primes_from(start: int = 2):
    n = start
    while True:
        if is_prime(n):
            yield n
        n += 1


# --- linear algebra mod p ---

def mat_vec(a: Matrix, x: Vector, p: int) -> Vector:
    return tuple(sum(r * c for r, c in zip(row, x)) % p for row in a)


def mat_mul(a: Matrix, b: Matrix, p: int, inner: int) -> Matrix:
    """a (r x inner) times b (inner x c)."""
    cols = len(b[0]) if b else 0
    return tuple(
        tuple(sum(a[i][t] * b[t][j] for t in range(inner)) % p for j in range(cols))
        for i in range(len(a))
    )


def rref(rows, p: int) -> list[list[int]]:
    """Reduced row echelon form; zero rows dropped."""
    m = [list(r) for r in rows]
    out: list[list[int]] = []
    if not m:
        return out
    ncols = len(m[0])
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c] % p), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = pow(m[r][c], -1, p)
        m[r] = [(x * inv) % p for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] % p:
                f = m[i][c]
                m[i] = [(x - f * y) % p for x, y in zip(m[i], m[r])]
        r += 1
        if r == len(m):
            break
    return [row for row in m[:r]]


def rank(rows, p: int) -> int:
    return len(rref(rows, p))


def echelon_subspaces(n: int, k: int, p: int):
    """Every k-dim subspace of F_p^n once, as its RREF basis."""
    for pivots in combinations(range(n), k):
        free = []
        for r, c in enumerate(pivots):
            for col in range(c + 1, n):
                if col not in pivots:
                    free.append((r, col))
        for values in product(range(p), repeat=len(free)):
            basis = [[0] * n for _ in range(k)]
            for r, c in enumerate(pivots):
                basis[r][c] = 1
            for (r, col), val in zip(free, values):
                basis[r][col] = val
            yield tuple(tuple(row) for row in basis)


def count_subspaces(n: int, k: int, p: int) -> int:
    return poly_eval(gaussian_binomial(n, k), p)


# --- representations ---

@dataclass(frozen=True)
class FFRep:
    """Nilpotent representation over F_p.

    ``arrows[v]`` is the matrix of ``v -> succ(v)``, shape
    ``dims[succ(v)] x dims[v]``; absent or zero-size arrows are omitted.
    """

    p: int
    period: int | None
    dims: tuple[tuple[int, int], ...]
    arrows: tuple[tuple[int, Matrix], ...]

    def dim(self, v: int) -> int:
        if self.period is not None:
            v %= self.period
        return dict(self.dims).get(v, 0)

    def succ(self, v: int) -> int:
        return (v + 1) % self.period if self.period is not None else v + 1

    def vertices(self) -> list[int]:
        return [v for v, _ in self.dims]

    def arrow(self, v: int) -> Matrix:
        found = dict(self.arrows).get(v)
        if found is not None:
            return found
        return tuple(tuple(0 for _ in range(self.dim(v))) for _ in range(self.dim(self.succ(v))))

    @property
    def total(self) -> int:
        return sum(d for _, d in self.dims)

    def dimension_vector(self) -> DimensionVector:
        return DimensionVector(self.period, self.dims)

    def apply_path(self, v: int, length: int, x: Vector) -> Vector:
        for _ in range(length):
            x = mat_vec(self.arrow(v), x, self.p)
            v = self.succ(v)
        return x

    def path_matrix_columns(self, v: int, length: int) -> list[Vector]:
        """Images of the standard basis of M_v under the length-``length`` path."""
        n = self.dim(v)
        cols = []
        for t in range(n):
            e = tuple(1 if s == t else 0 for s in range(n))
            cols.append(self.apply_path(v, length, e))
        return cols

    def conjugate(self, g: dict[int, Matrix], ginv: dict[int, Matrix]) -> "FFRep":
        """Arrow at v becomes g[succ v] * A_v * g[v]^-1."""
        new = []
        for v in self.vertices():
            w = self.succ(v)
            if self.dim(w) == 0 or self.dim(v) == 0:
                continue
            a = self.arrow(v)
            left = mat_mul(g[w], a, self.p, self.dim(w))
            new.append((v, mat_mul(left, ginv[v], self.p, self.dim(v))))
        return FFRep(self.p, self.period, self.dims, tuple(new))


def rep_from_multisegment(x: Label, p: int, limit: int = DEFAULT_ORDER_LIMIT) -> FFRep:
    """Direct sum of Jordan chains, one per segment."""
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if x.order > limit:
        raise SizeLimitError(f"order {x.order} exceeds limit {limit}")
    index: dict[tuple[int, int], tuple[int, int]] = {}  # (chain, t) -> (vertex, position)
    dims: dict[int, int] = {}
    chain = 0
    for i, j, mult in x.blocks():
        for _ in range(mult):
            for t in range(i, j + 1):
                v = x.vertex(t)
                index[(chain, t)] = (v, dims.get(v, 0))
                dims[v] = dims.get(v, 0) + 1
            chain += 1
    if x.period is None:
        verts = list(range(min(dims), max(dims) + 1)) if dims else []
    else:
        verts = list(range(x.period))
    succ = (lambda v: (v + 1) % x.period) if x.period is not None else (lambda v: v + 1)
    mats: dict[int, list[list[int]]] = {
        v: [[0] * dims.get(v, 0) for _ in range(dims.get(succ(v), 0))] for v in verts
    }
    for (c, t), (v, pos) in index.items():
        nxt = index.get((c, t + 1))
        if nxt is not None:
            w, pos2 = nxt
            mats[v][pos2][pos] = 1
    arrows = tuple(
        (v, tuple(tuple(row) for row in mats[v]))
        for v in verts
        if dims.get(v, 0) and dims.get(succ(v), 0)
    )
    return FFRep(p, x.period, tuple((v, dims.get(v, 0)) for v in verts if dims.get(v, 0) or x.period), arrows)


def label_from_ranks(period: int | None, dims: dict[int, int], ranks: dict[tuple[int, int], int],
                     total: int) -> Label:
    """Invert path ranks: #segments starting at v of length exactly l."""

    def r(v: int, ell: int) -> int:
        if period is not None:
            v %= period
        if ell == 0:
            return dims.get(v, 0)
        if ell > total:
            return 0
        return ranks.get((v, ell), 0)

    verts = range(period) if period is not None else sorted(dims)
    segs = {}
    for v in verts:
        for ell in range(1, total + 1):
            c = r(v, ell - 1) - r(v - 1, ell) - r(v, ell) + r(v - 1, ell + 1)
            if c < 0:
                raise InvariantError(f"negative block count at vertex {v}, length {ell}")
            if c:
                segs[(v, v + ell - 1)] = c
    if period is None:
        return Multisegment(segs)
    return PeriodicMultisegment(period, segs)


def iso_class(rep: FFRep) -> Label:
    n = rep.total
    if rep.period is not None:
        for v in rep.vertices():
            if any(any(col) for col in rep.path_matrix_columns(v, n)):
                raise ValueError("representation is not nilpotent")
    ranks = {}
    for v in rep.vertices():
        for ell in range(1, n + 1):
            ranks[(v, ell)] = rank(rep.path_matrix_columns(v, ell), rep.p)
    label = label_from_ranks(rep.period, dict(rep.dims), ranks, n)
    if label.order != n:
        raise InvariantError("rank inversion lost dimension")
    return label


# --- submodule enumeration ---

def _reduce(vec: list[int], basis: tuple[Vector, ...], pivots: tuple[int, ...], p: int) -> list[int]:
    vec = list(vec)
    for row, c in zip(basis, pivots):
        f = vec[c]
        if f:
            vec = [(x - f * y) % p for x, y in zip(vec, row)]
    return vec


def _pivots(basis: tuple[Vector, ...]) -> tuple[int, ...]:
    return tuple(next(i for i, x in enumerate(row) if x) for row in basis)


def graded_subspace_count(rep: FFRep, sub_dims: dict[int, int]) -> int:
    total = 1
    for v in rep.vertices():
        total *= count_subspaces(rep.dim(v), sub_dims.get(v, 0), rep.p)
    return total


def iter_submodules(rep: FFRep, sub_dims: dict[int, int], budget: int = DEFAULT_ENUMERATION_BUDGET):
    """Yield arrow-stable graded subspaces as {vertex: RREF basis}."""
    verts = rep.vertices()
    for v, e in sub_dims.items():
        if e and (v not in verts or e > rep.dim(v)):
            return
    work = graded_subspace_count(rep, sub_dims)
    if work > budget:
        raise SizeLimitError(f"{work} graded subspaces exceed the enumeration budget {budget}")
    choices = [list(echelon_subspaces(rep.dim(v), sub_dims.get(v, 0), rep.p)) for v in verts]
    pivots = [[_pivots(b) for b in ch] for ch in choices]
    pos = {v: n for n, v in enumerate(verts)}
    p = rep.p

    def stable(v: int, basis_v, basis_w, piv_w) -> bool:
        a = rep.arrow(v)
        for x in basis_v:
            y = mat_vec(a, x, p)
            if any(_reduce(y, basis_w, piv_w, p)):
                return False
        return True

    # depth-first over vertices, checking each arrow once both ends are fixed
    chosen: list = [None] * len(verts)
    chosen_piv: list = [None] * len(verts)

    def rec(n: int):
        if n == len(verts):
            yield {verts[t]: chosen[t] for t in range(len(verts))}
            return
        v = verts[n]
        for basis, piv in zip(choices[n], pivots[n]):
            chosen[n], chosen_piv[n] = basis, piv
            ok = True
            prev = n - 1
            # arrow from previous vertex into v
            if prev >= 0 and rep.succ(verts[prev]) == v:
                ok = stable(verts[prev], chosen[prev], basis, piv)
            # closing arrow of the cycle
            if ok and n == len(verts) - 1 and rep.period is not None and rep.succ(v) in pos:
                first = pos[rep.succ(v)]
                ok = stable(v, basis, chosen[first], chosen_piv[first])
            elif ok and rep.period is None and rep.succ(v) not in pos:
                ok = True
            if ok:
                yield from rec(n + 1)

    yield from rec(0)


def _path_table(rep: FFRep) -> dict[tuple[int, int], tuple[int, Matrix]]:
    """(v, l) -> (target vertex, rows of the path map) for the nonzero paths only."""
    table = {}
    for v in rep.vertices():
        n = rep.dim(v)
        cols = [tuple(1 if s == t else 0 for s in range(n)) for t in range(n)]
        w = v
        for ell in range(1, rep.total + 1):
            cols = [mat_vec(rep.arrow(w), c, rep.p) for c in cols]
            w = rep.succ(w)
            if not any(any(c) for c in cols):
                break
            # store the transposed map as rows acting on coordinates of M_v
            rows = tuple(tuple(c[r] for c in cols) for r in range(rep.dim(w)))
            table[(v, ell)] = (w, rows, tuple(cols))
    return table


def _classify(rep: FFRep, sub: dict[int, tuple[Vector, ...]], table) -> tuple[Label, Label]:
    n = rep.total
    p = rep.p
    sub_dims = {v: len(b) for v, b in sub.items() if b}
    quot_dims = {v: rep.dim(v) - sub_dims.get(v, 0) for v in rep.vertices()}
    sub_ranks, quot_ranks = {}, {}
    for (v, ell), (w, rows, cols) in table.items():
        basis_v = sub.get(v, ())
        if basis_v:
            sub_ranks[(v, ell)] = rank([mat_vec(rows, x, p) for x in basis_v], p)
        target = sub.get(w, ())
        quot_ranks[(v, ell)] = rank(list(cols) + list(target), p) - len(target)
    s = label_from_ranks(rep.period, sub_dims, sub_ranks, n)
    q = label_from_ranks(rep.period, {v: d for v, d in quot_dims.items() if d}, quot_ranks, n)
    return s, q


def submodule_census(rep: FFRep, sub_dims: dict[int, int],
                     budget: int = DEFAULT_ENUMERATION_BUDGET) -> dict[tuple[Label, Label], int]:
    """Tally (iso class of X, iso class of M/X) over all submodules X of graded dim ``sub_dims``."""
    table = _path_table(rep)
    tally: dict[tuple[Label, Label], int] = {}
    for sub in iter_submodules(rep, sub_dims, budget):
        key = _classify(rep, sub, table)
        tally[key] = tally.get(key, 0) + 1
    return tally


@lru_cache(maxsize=4096)
def _census_cached(label: Label, sub_dv: DimensionVector, p: int, budget: int):
    rep = rep_from_multisegment(label, p, limit=10**6)
    return submodule_census(rep, dict(sub_dv.entries), budget)


def count_submodules(module: Label, sub: Label, quot: Label, p: int,
                     max_dim: int = 5, budget: int = DEFAULT_ENUMERATION_BUDGET) -> int:
    """#{X <= M : X ~ sub, M/X ~ quot} over F_p."""
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if module.order > max_dim:
        raise SizeLimitError(f"module dimension {module.order} exceeds enumeration bound {max_dim}")
    if module.period != sub.period or module.period != quot.period:
        raise ValueError("labels live on different quivers")
    dm, ds, dq = dimension_vector(module), dimension_vector(sub), dimension_vector(quot)
    if ds + dq != dm:
        return 0
    census = _census_cached(module, ds, p, budget)
    return census.get((sub, quot), 0)


def degree_bound(module: Label, sub: Label) -> int:
    """Degree of the number of graded subspaces: sum e_v (d_v - e_v)."""
    dm, ds = dimension_vector(module), dimension_vector(sub)
    return sum(ds[v] * (dm[v] - ds[v]) for v in dm.support())


def interpolate(points: list[tuple[int, int]]) -> list[int]:
    """Integer polynomial through the points; raises if coefficients are not integral."""
    n = len(points)
    coeffs = [Fraction(0)] * n
    for i, (xi, yi) in enumerate(points):
        basis = [Fraction(1)]
        denom = Fraction(1)
        for j, (xj, _) in enumerate(points):
            if j == i:
                continue
            basis = [Fraction(0)] + basis
            for t in range(len(basis) - 1):
                basis[t] -= xj * basis[t + 1]
            denom *= xi - xj
        for t in range(n):
            coeffs[t] += yi * basis[t] / denom
    if any(c.denominator != 1 for c in coeffs):
        raise InvariantError(f"non-integral interpolant through {points}")
    return poly_trim([int(c) for c in coeffs])


def hall_polynomial(module: Label, quot: Label, sub: Label, max_dim: int = 5,
                    budget: int = DEFAULT_ENUMERATION_BUDGET, cache: "HallPolyCache | None" = None) -> list[int]:
    """g(q) with g(p) = count_submodules(M, sub, quot) at every sampled prime.

    Interpolates through ``deg + 1`` primes and checks one held-out prime.
    """
    if cache is not None:
        hit = cache.get(module, quot, sub)
        if hit is not None:
            return hit
    if module.order > max_dim:
        raise SizeLimitError(f"module dimension {module.order} exceeds enumeration bound {max_dim}")
    dm, ds, dq = dimension_vector(module), dimension_vector(sub), dimension_vector(quot)
    if ds + dq != dm:
        result: list[int] = []
    else:
        deg = degree_bound(module, sub)
        gen = primes_from(2)
        sample = [next(gen) for _ in range(deg + 1)]
        held_out = next(gen)
        points = [(p, count_submodules(module, sub, quot, p, max_dim, budget)) for p in sample]
        result = interpolate(points)
        check = count_submodules(module, sub, quot, held_out, max_dim, budget)
        if poly_eval(result, held_out) != check:
            raise InvariantError(
                f"Hall polynomial {format_qpoly(result)} fails at held-out prime {held_out}"
            )
    if cache is not None:
        cache.put(module, quot, sub, result)
    return result


# --- persistent cache ---

HALLPOLY_HEADER = "cyclic-hall hallpoly v1"


def _quiver_tag(label: Label) -> str:
    return "inf" if label.period is None else str(label.period)


class HallPolyCache:
    """``m|M|N|P|poly`` records; N is the quotient and P the sub class."""

    def __init__(self, path: str | os.PathLike | None = None):
        self.path = Path(path) if path is not None else None
        self._data: dict[tuple[str, str, str, str], list[int]] = {}
        self._dirty = False
        if self.path is not None and self.path.exists():
            self.load()

    def _key(self, module: Label, quot: Label, sub: Label):
        return (_quiver_tag(module), format_multisegment(module), format_multisegment(quot),
                format_multisegment(sub))

    def get(self, module: Label, quot: Label, sub: Label) -> list[int] | None:
        return self._data.get(self._key(module, quot, sub))

    def put(self, module: Label, quot: Label, sub: Label, poly: list[int]) -> None:
        self._data[self._key(module, quot, sub)] = list(poly)
        self._dirty = True

    def __len__(self) -> int:
        return len(self._data)

    def load(self) -> None:
        lines = self.path.read_text().splitlines()
        if not lines or lines[0].strip() != HALLPOLY_HEADER:
            return  # foreign or stale cache: start cold
        for line in lines[1:]:
            if not line.strip():
                continue
            m, mod, quot, sub, poly = line.split("|")
            for text in (mod, quot, sub):
                parse_label(text)
            self._data[(m, mod, quot, sub)] = parse_qpoly(poly)

    def dumps(self) -> str:
        rows = [HALLPOLY_HEADER]
        for key in sorted(self._data):
            rows.append("|".join(key) + "|" + format_qpoly(self._data[key]))
        return "\n".join(rows) + "\n"

    def save(self) -> None:
        if self.path is None or not self._dirty:
            return
        atomic_write(self.path, self.dumps())
        self._dirty = False


def atomic_write(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_name(path.name + f".tmp{os.getpid()}")
    tmp.write_text(text)
    os.replace(tmp, path)
