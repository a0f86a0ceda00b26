"""Root-system combinatorics for the finite-dimensional modules at ``m = h``.

Roots are integer vectors in the simple-root basis, so heights are
coordinate sums.  Cartan entries follow ``A[i][j] = <alpha_i^vee, alpha_j>``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import gcd

from .errors import InvariantError

Root = tuple[int, ...]

# Coxeter numbers for checking the generated root data
COXETER = {
    "A": lambda r: r + 1,
    "B": lambda r: 2 * r,
    "C": lambda r: 2 * r,
    "D": lambda r: 2 * r - 2,
    "E": lambda r: {6: 12, 7: 18, 8: 30}[r],
    "F": lambda r: 12,
    "G": lambda r: 6,
}


def parse_type(text: str) -> tuple[str, int]:
    match = re.fullmatch(r"\s*([A-Ga-g])_?(\d+)\s*", text)
    if not match:
        raise ValueError(f"malformed Cartan type: {text!r}")
    letter, rank = match.group(1).upper(), int(match.group(2))
    valid = {
        "A": rank >= 1, "B": rank >= 2, "C": rank >= 2, "D": rank >= 4,
        "E": rank in (6, 7, 8), "F": rank == 4, "G": rank == 2,
    }
    if not valid[letter]:
        raise ValueError(f"no Cartan type {letter}{rank}")
    return letter, rank


def cartan_matrix(kind: str, rank: int | None = None) -> list[list[int]]:
    if rank is None:
        kind, rank = parse_type(kind)
    else:
        kind, rank = parse_type(f"{kind}{rank}")
    a = [[2 if i == j else 0 for j in range(rank)] for i in range(rank)]

    def link(i, j):
        a[i][j] = a[j][i] = -1

    if kind in "ABCD":
        for i in range(rank - 1):
            link(i, i + 1)
        if kind == "B":
            a[rank - 1][rank - 2] = -2  # alpha_r short
        elif kind == "C":
            a[rank - 2][rank - 1] = -2  # alpha_r long
        elif kind == "D":
            a[rank - 2][rank - 1] = a[rank - 1][rank - 2] = 0
            link(rank - 3, rank - 1)
    elif kind == "E":
        # Bourbaki: 1-3-4-5-6(-7-8), 2 attached to 4
        for i, j in [(0, 2), (2, 3), (3, 4), (1, 3)] + [(t, t + 1) for t in range(4, rank - 1)]:
            link(i, j)
    elif kind == "F":
        link(0, 1)
        link(2, 3)
        a[1][2], a[2][1] = -1, -2  # alpha_1, alpha_2 long
    elif kind == "G":
        a[0][1], a[1][0] = -3, -1  # alpha_1 short
    return a


@dataclass(frozen=True)
class RootSystem:
    cartan: tuple[tuple[int, ...], ...]
    roots: tuple[Root, ...]  # positive roots, by height then reverse-lexicographic

    @property
    def rank(self) -> int:
        return len(self.cartan)

    @staticmethod
    def height(alpha: Root) -> int:
        return sum(alpha)

    @property
    def highest_root(self) -> Root:
        return self.roots[-1]

    @property
    def coxeter_number(self) -> int:
        return self.height(self.highest_root) + 1

    def simple_roots(self) -> list[Root]:
        return [r for r in self.roots if self.height(r) == 1]

    def index_of(self, alpha: Root) -> int:
        return self.roots.index(alpha)


def generate_roots(cartan, bound: int = 1000) -> RootSystem:
    """Positive roots by alpha_i-string extension, layer by layer in height."""
    cartan = tuple(tuple(row) for row in cartan)
    r = len(cartan)
    if any(cartan[i][i] != 2 for i in range(r)):
        raise ValueError("Cartan matrix must have 2 on the diagonal")
    simple = [tuple(1 if t == i else 0 for t in range(r)) for i in range(r)]
    known = set(simple)
    layer = list(simple)
    while layer:
        nxt = set()
        for beta in layer:
            for i in range(r):
                p = 0
                down = list(beta)
                while True:
                    down[i] -= 1
                    if tuple(down) in known:
                        p += 1
                    else:
                        break
                pairing = sum(cartan[i][j] * beta[j] for j in range(r))
                if p - pairing > 0:
                    up = list(beta)
                    up[i] += 1
                    nxt.add(tuple(up))
        known |= nxt
        layer = sorted(nxt)
        if len(known) > bound:
            raise ValueError("root closure did not terminate: not of finite type")
    roots = sorted(known, key=lambda a: (sum(a), tuple(-c for c in a)))
    top = roots[-1]
    if not all(all(c <= t for c, t in zip(a, top)) for a in roots):
        raise InvariantError("highest root is not unique")
    return RootSystem(cartan, tuple(roots))


def root_system(kind: str) -> RootSystem:
    return generate_roots(cartan_matrix(kind))


@dataclass(frozen=True)
class PiK:
    k: int
    a: int
    b: int
    elements: tuple[tuple[Root, int], ...]

    def format_lines(self) -> list[str]:
        return [f"({','.join(str(c) for c in alpha)};{level})" for alpha, level in self.elements]


def _check_k(rs: RootSystem, k: int) -> None:
    if k < 1:
        raise ValueError("k must be a positive integer")
    if gcd(k, rs.coxeter_number) != 1:
        raise ValueError(f"gcd(k={k}, h={rs.coxeter_number}) must be 1")


def pi_k(rs: RootSystem, k: int) -> PiK:
    """Roots of height b at level a and negative roots of height b-h at level a+1."""
    _check_k(rs, k)
    h = rs.coxeter_number
    a, b = divmod(k, h)
    elements = [(alpha, a) for alpha in rs.roots if rs.height(alpha) == b]
    elements += [(tuple(-c for c in alpha), a + 1) for alpha in rs.roots if rs.height(alpha) == h - b]
    if len(elements) != rs.rank + 1:
        raise InvariantError(f"|Pi_{k}| = {len(elements)}, expected {rs.rank + 1}")
    return PiK(k, a, b, tuple(elements))


def _weights(rs: RootSystem, k: int) -> list[tuple[int, ...]]:
    return [alpha + (level,) for alpha, level in pi_k(rs, k).elements]


def rank_q(vectors) -> int:
    rows = [[Fraction(c) for c in v] for v in vectors]
    rank = 0
    cols = len(rows[0]) if rows else 0
    for col in range(cols):
        piv = next((i for i in range(rank, len(rows)) if rows[i][col]), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        for i in range(len(rows)):
            if i != rank and rows[i][col]:
                f = rows[i][col] / rows[rank][col]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[rank])]
        rank += 1
    return rank


def orbit_count(rs: RootSystem, k: int) -> int:
    """Torus orbits on the span of Pi_k: 2^(r+1), checked on the k=1 weights."""
    _check_k(rs, k)
    weights = _weights(rs, 1)
    if rank_q(weights) != len(weights):
        raise InvariantError("weights of Pi_1 are linearly dependent")
    # the count for general k is transported from k=1
    return 2 ** (rs.rank + 1)


def orbit_count_direct(rs: RootSystem, k: int) -> int:
    """Count orbits by support: one orbit per support with independent weights."""
    weights = _weights(rs, k)
    total = 0
    for size in range(len(weights) + 1):
        for subset in combinations(weights, size):
            if size and rank_q(subset) != size:
                raise InvariantError("dependent weights give infinitely many orbits")
            total += 1
    return total


def dim_simple(rs: RootSystem, k: int) -> int:
    _check_k(rs, k)
    return k ** rs.rank
