"""Multisegments, periodic multisegments and their quiver dictionary.

A segment ``[i, j]`` is a Jordan block with basis vectors sitting at
vertices ``i, i+1, ..., j`` (reduced mod ``m`` on the cyclic quiver); the
arrow ``t -> t+1`` sends the vector at ``t`` to the one at ``t+1`` and kills
the vector at ``j``.  So ``i`` is the top and ``j`` the socle of the block.

Text grammar::

    multisegment := "{" seg (";" seg)* "}" | "{}"
    seg          := "[" int "," int "]" ":" posint
    periodic     := "per(" posint ")" multisegment
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations_with_replacement, product
from typing import Iterator, NamedTuple, Union


class Segment(NamedTuple):
    i: int
    j: int

    @property
    def length(self) -> int:
        return self.j - self.i + 1


def _normalize_counts(counts, period: int | None) -> tuple[tuple[Segment, int], ...]:
    acc: dict[Segment, int] = {}
    items = counts.items() if isinstance(counts, dict) else counts
    for seg, mult in items:
        i, j = seg
        if j < i:
            raise ValueError(f"segment [{i},{j}] has i > j")
        if not isinstance(mult, int) or mult < 0:
            raise ValueError(f"multiplicity must be a nonnegative integer, got {mult!r}")
        if period is not None:
            r = i % period
            i, j = r, j - (i - r)
        key = Segment(i, j)
        acc[key] = acc.get(key, 0) + mult
    return tuple(sorted((s, c) for s, c in acc.items() if c > 0))


class _SegmentBag:
    """Shared behaviour of finite and periodic multisegments."""

    counts: tuple[tuple[Segment, int], ...]
    period: int | None

    def blocks(self) -> Iterator[tuple[int, int, int]]:
        for seg, mult in self.counts:
            yield seg.i, seg.j, mult

    def as_dict(self) -> dict[Segment, int]:
        return dict(self.counts)

    @property
    def order(self) -> int:
        return sum(seg.length * mult for seg, mult in self.counts)

    def __len__(self) -> int:
        return sum(mult for _, mult in self.counts)

    def is_empty(self) -> bool:
        return not self.counts

    def vertex(self, t: int) -> int:
        return t if self.period is None else t % self.period

    def sort_key(self):
        return (self.order, tuple((s.i, s.j, c) for s, c in self.counts))


@dataclass(frozen=True)
class Multisegment(_SegmentBag):
    """Finite multiset of integer segments (a nilpotent rep of the linear quiver)."""

    counts: tuple[tuple[Segment, int], ...] = ()
    period: None = field(default=None, init=False, repr=False, compare=False)

    def __init__(self, counts=()):
        object.__setattr__(self, "counts", _normalize_counts(counts, None))

    def __str__(self) -> str:
        return format_multisegment(self)

    def __lt__(self, other: "Multisegment") -> bool:
        return self.sort_key() < other.sort_key()


@dataclass(frozen=True)
class PeriodicMultisegment(_SegmentBag):
    """Translation classes of segments under ``[i,j] -> [i+m, j+m]``.

    Each class is keyed by its representative with ``0 <= i < m``.
    """

    period: int
    counts: tuple[tuple[Segment, int], ...] = ()

    def __init__(self, period: int, counts=()):
        if not isinstance(period, int) or period < 1:
            raise ValueError(f"period must be a positive integer, got {period!r}")
        object.__setattr__(self, "period", period)
        object.__setattr__(self, "counts", _normalize_counts(counts, period))

    def __str__(self) -> str:
        return format_multisegment(self)

    def __lt__(self, other: "PeriodicMultisegment") -> bool:
        return self.sort_key() < other.sort_key()


Label = Union[Multisegment, PeriodicMultisegment]


@dataclass(frozen=True)
class DimensionVector:
    """Graded dimension.

    ``period`` is ``m`` for the cyclic quiver (vertices ``0..m-1``) or ``None``
    for the linear quiver, where only the finite support is stored.
    """

    period: int | None
    entries: tuple[tuple[int, int], ...]

    def __init__(self, period: int | None, entries):
        items = entries.items() if isinstance(entries, dict) else entries
        acc: dict[int, int] = {}
        for vtx, val in items:
            if val < 0:
                raise ValueError("dimension vectors are nonnegative")
            if period is not None:
                vtx %= period
            acc[vtx] = acc.get(vtx, 0) + val
        object.__setattr__(self, "period", period)
        object.__setattr__(self, "entries", tuple(sorted((k, v) for k, v in acc.items() if v)))

    @classmethod
    def cyclic(cls, values) -> "DimensionVector":
        values = list(values)
        return cls(len(values), enumerate(values))

    @classmethod
    def linear(cls, mapping) -> "DimensionVector":
        return cls(None, mapping)

    def __getitem__(self, vtx: int) -> int:
        if self.period is not None:
            vtx %= self.period
        for k, v in self.entries:
            if k == vtx:
                return v
        return 0

    @property
    def total(self) -> int:
        return sum(v for _, v in self.entries)

    def support(self) -> list[int]:
        return [k for k, _ in self.entries]

    def vertices(self) -> list[int]:
        """Vertices relevant to rank tables: all of Z/m, or the support span."""
        if self.period is not None:
            return list(range(self.period))
        if not self.entries:
            return []
        return list(range(self.entries[0][0], self.entries[-1][0] + 1))

    def as_tuple(self) -> tuple[int, ...]:
        if self.period is None:
            raise ValueError("linear dimension vectors have no fixed length")
        return tuple(self[v] for v in range(self.period))

    def __add__(self, other: "DimensionVector") -> "DimensionVector":
        if self.period != other.period:
            raise ValueError("dimension vectors of different quivers")
        return DimensionVector(self.period, list(self.entries) + list(other.entries))

    def fold(self, m: int) -> "DimensionVector":
        return DimensionVector(m, self.entries)

    def __str__(self) -> str:
        if self.period is not None:
            return "(" + ",".join(str(x) for x in self.as_tuple()) + ")"
        return "{" + ",".join(f"{k}:{v}" for k, v in self.entries) + "}"


# --- basic operations ---

def _count_congruent(lo: int, hi: int, residue: int, m: int | None) -> int:
    """#{t in [lo, hi] : t = residue (mod m)}; m None means equality."""
    if hi < lo:
        return 0
    if m is None:
        return 1 if lo <= residue <= hi else 0
    r = residue % m
    return (hi - r) // m - (lo - 1 - r) // m


def shift(x: Label, n: int) -> Label:
    """``x[n]``: the segment ``[i,j]`` moves to ``[i-n, j-n]``."""
    moved = [((s.i - n, s.j - n), c) for s, c in x.counts]
    if x.period is None:
        return Multisegment(moved)
    return PeriodicMultisegment(x.period, moved)


def dimension_vector(x: Label) -> DimensionVector:
    acc: dict[int, int] = {}
    for i, j, mult in x.blocks():
        for t in range(i, j + 1):
            vtx = x.vertex(t)
            acc[vtx] = acc.get(vtx, 0) + mult
    return DimensionVector(x.period, acc)


def fold(x: Multisegment, m: int) -> PeriodicMultisegment:
    if m < 1:
        raise ValueError("m must be positive")
    return PeriodicMultisegment(m, x.counts)


def translates_in_window(seg: Segment, m: int, lo: int, hi: int) -> list[Segment]:
    """All ``[i+km, j+km]`` inside ``[lo, hi]``."""
    out = []
    k = -((seg.i - lo) // m)  # smallest k with i + km >= lo
    while seg.j + k * m <= hi:
        if seg.i + k * m >= lo:
            out.append(Segment(seg.i + k * m, seg.j + k * m))
        k += 1
    return out


def fiber_size(x: PeriodicMultisegment, window: tuple[int, int]) -> int:
    lo, hi = window
    total = 1
    for seg, mult in x.counts:
        w = len(translates_in_window(seg, x.period, lo, hi))
        total *= math.comb(w + mult - 1, mult)
    return total


def unfold_fiber(x: PeriodicMultisegment, window: tuple[int, int]) -> list[Multisegment]:
    """All finite multisegments inside ``window`` folding onto ``x``."""
    lo, hi = window
    if lo > hi:
        raise ValueError("window must satisfy lo <= hi")
    choices = []
    for seg, mult in x.counts:
        spots = translates_in_window(seg, x.period, lo, hi)
        if not spots:
            return []
        choices.append(list(combinations_with_replacement(spots, mult)))
    out = []
    for pick in product(*choices):
        bag: dict[Segment, int] = {}
        for group in pick:
            for s in group:
                bag[s] = bag.get(s, 0) + 1
        out.append(Multisegment(bag))
    return sorted(out)


def path_rank(x: Label, vertex: int, length: int) -> int:
    """Rank of the length-``length`` arrow path leaving ``vertex``."""
    if length < 1:
        raise ValueError("path length must be >= 1")
    return sum(mult * _count_congruent(i, j - length, vertex, x.period) for i, j, mult in x.blocks())


def rank_vector(x: Label, dv: DimensionVector | None = None) -> tuple[int, ...]:
    dv = dv if dv is not None else dimension_vector(x)
    n = dv.total
    return tuple(path_rank(x, v, ell) for ell in range(1, n + 1) for v in dv.vertices())


def degeneration_leq(x: Label, y: Label) -> bool:
    """True iff the orbit of x lies in the closure of the orbit of y."""
    dx, dy = dimension_vector(x), dimension_vector(y)
    if dx != dy:
        raise ValueError(f"dimension vectors differ: {dx} vs {dy}")
    return all(a <= b for a, b in zip(rank_vector(x, dx), rank_vector(y, dx)))


def semisimple_label(dv: DimensionVector) -> Label:
    segs = [((v, v), c) for v, c in dv.entries]
    if dv.period is None:
        return Multisegment(segs)
    return PeriodicMultisegment(dv.period, segs)


def radical_layers(x: Label) -> list[DimensionVector]:
    """Dimension vectors of rad^t / rad^(t+1), top layer first."""
    depth = max((j - i + 1 for i, j, _ in x.blocks()), default=0)
    layers = []
    for t in range(depth):
        acc: dict[int, int] = {}
        for i, j, mult in x.blocks():
            if i + t <= j:
                vtx = x.vertex(i + t)
                acc[vtx] = acc.get(vtx, 0) + mult
        layers.append(DimensionVector(x.period, acc))
    return layers


def _segment_types(dv: DimensionVector) -> list[tuple[Segment, dict[int, int]]]:
    n = dv.total
    types = []
    if dv.period is not None:
        m = dv.period
        for i in range(m):
            for length in range(1, n + 1):
                contrib: dict[int, int] = {}
                for t in range(i, i + length):
                    contrib[t % m] = contrib.get(t % m, 0) + 1
                if all(dv[v] >= c for v, c in contrib.items()):
                    types.append((Segment(i, i + length - 1), contrib))
    else:
        sup = set(dv.support())
        for i in sorted(sup):
            j = i
            while j in sup:
                types.append((Segment(i, j), {t: 1 for t in range(i, j + 1)}))
                j += 1
    return types


def labels_with_dimension(dv: DimensionVector) -> list[Label]:
    """Every iso class (label) with dimension vector ``dv``, sorted."""
    types = _segment_types(dv)
    remaining = dict(dv.entries)
    found: list[dict[Segment, int]] = []
    current: dict[Segment, int] = {}

    def rec(idx: int) -> None:
        if not any(remaining.values()):
            found.append(dict(current))
            return
        if idx == len(types):
            return
        seg, contrib = types[idx]
        # every vertex still needing mass must be reachable by a later type
        reps = 0
        while True:
            rec(idx + 1)
            if any(remaining.get(v, 0) < c for v, c in contrib.items()):
                break
            for v, c in contrib.items():
                remaining[v] -= c
            reps += 1
            current[seg] = reps
        for v, c in contrib.items():
            remaining[v] += c * reps
        current.pop(seg, None)

    rec(0)
    if dv.period is None:
        labels = [Multisegment(c) for c in found]
    else:
        labels = [PeriodicMultisegment(dv.period, c) for c in found]
    return sorted(labels)


# --- text grammar ---

_SEG_RE = re.compile(r"\[(-?\d+),(-?\d+)\]:(\d+)")


def format_multisegment(x: Label) -> str:
    body = "{" + ";".join(f"[{s.i},{s.j}]:{c}" for s, c in x.counts) + "}"
    if x.period is None:
        return body
    return f"per({x.period}){body}"


def _parse_body(text: str) -> list[tuple[tuple[int, int], int]]:
    if not (text.startswith("{") and text.endswith("}")):
        raise ValueError(f"multisegment must be braced: {text!r}")
    inner = text[1:-1]
    if not inner:
        return []
    segs = []
    for piece in inner.split(";"):
        match = _SEG_RE.fullmatch(piece)
        if not match:
            raise ValueError(f"malformed segment {piece!r}")
        i, j, c = (int(g) for g in match.groups())
        if c < 1:
            raise ValueError(f"multiplicity must be positive in {piece!r}")
        if j < i:
            raise ValueError(f"segment [{i},{j}] has i > j")
        segs.append(((i, j), c))
    return segs


def parse_label(text: str) -> Label:
    """Parse either grammar; whitespace is ignored."""
    text = "".join(text.split())
    match = re.fullmatch(r"per\((\d+)\)(\{.*\})", text)
    if match:
        m = int(match.group(1))
        if m < 1:
            raise ValueError("period must be positive")
        return PeriodicMultisegment(m, _parse_body(match.group(2)))
    return Multisegment(_parse_body(text))


def parse_multisegment(text: str) -> Multisegment:
    x = parse_label(text)
    if not isinstance(x, Multisegment):
        raise ValueError(f"expected a finite multisegment, got {text!r}")
    return x


def parse_periodic(text: str) -> PeriodicMultisegment:
    x = parse_label(text)
    if not isinstance(x, PeriodicMultisegment):
        raise ValueError(f"expected a periodic multisegment, got {text!r}")
    return x


# --- periodic pairs ---

@dataclass(frozen=True, order=True)
class SpectralLabel:
    """``z = base * tau^(numerator/m)``; ``base`` is an opaque generic label."""

    base: str
    numerator: int = 0

    def exponent(self, m: int) -> Fraction:
        return Fraction(self.numerator, m)


@dataclass(frozen=True)
class PeriodicPair:
    period: int
    k: int
    components: tuple[tuple[PeriodicMultisegment, SpectralLabel], ...]

    def __post_init__(self):
        if math.gcd(self.period, self.k) != 1 or self.k == 0:
            raise ValueError(f"need gcd(m, k) = 1, got m={self.period}, k={self.k}")
        bases = [z.base for _, z in self.components]
        if len(set(bases)) != len(bases):
            raise ValueError("spectral labels must be pairwise inequivalent")
        for sigma, _ in self.components:
            if sigma.period != self.period:
                raise ValueError("all components must share the period")

    @property
    def order(self) -> int:
        return sum(s.order for s, _ in self.components)


def tau_move(pair: PeriodicPair, index: int, n: int) -> PeriodicPair:
    """z_a -> z_a tau^n."""
    comps = list(pair.components)
    sigma, z = comps[index]
    comps[index] = (sigma, SpectralLabel(z.base, z.numerator + n * pair.period))
    return PeriodicPair(pair.period, pair.k, tuple(comps))


def zeta_move(pair: PeriodicPair, index: int, n: int) -> PeriodicPair:
    """(sigma_a, z_a) -> (sigma_a[-n], z_a zeta^n) with zeta = tau^(k/m)."""
    comps = list(pair.components)
    sigma, z = comps[index]
    comps[index] = (shift(sigma, -n), SpectralLabel(z.base, z.numerator + n * pair.k))
    return PeriodicPair(pair.period, pair.k, tuple(comps))


def permute_move(pair: PeriodicPair, perm: list[int]) -> PeriodicPair:
    return PeriodicPair(pair.period, pair.k, tuple(pair.components[p] for p in perm))


def canonical_pair(pair: PeriodicPair) -> PeriodicPair:
    """Representative with every exponent reduced to 0.

    Since gcd(m, k) = 1, ``e + m*a + k*b = 0`` is solvable; ``b`` is unique
    mod m, and shifting an m-periodic sigma only depends on ``b mod m``.
    """
    m, k = pair.period, pair.k
    k_inv = pow(k % m, -1, m) if m > 1 else 0
    comps = []
    for sigma, z in pair.components:
        b = (-z.numerator * k_inv) % m if m > 1 else 0
        # after the zeta move by b the numerator is e + k b, a multiple of m
        comps.append((shift(sigma, -b), SpectralLabel(z.base, 0)))
    comps.sort(key=lambda c: (c[0].sort_key(), c[1]))
    return PeriodicPair(m, k, tuple(comps))


def graded_series(sigma: Label, k: int, window: tuple[int, int] | None = None) -> dict[int, int]:
    """Coefficients of sum sigma_ij (t^(ki) + ... + t^(kj)).

    Finite multisegments give a finite sum.  Periodic ones run over the full
    periodic extension and therefore need a degree ``window``.
    """
    if k == 0:
        raise ValueError("k must be nonzero")
    out: dict[int, int] = {}
    if sigma.period is None:
        for i, j, mult in sigma.blocks():
            for t in range(i, j + 1):
                out[k * t] = out.get(k * t, 0) + mult
    else:
        if window is None:
            raise ValueError("periodic series need a degree window")
        dv = dimension_vector(sigma)
        lo, hi = window
        for deg in range(lo, hi + 1):
            if deg % k == 0 and dv[deg // k]:
                out[deg] = dv[deg // k]
    if window is not None:
        out = {d: c for d, c in out.items() if window[0] <= d <= window[1]}
    return {d: c for d, c in sorted(out.items()) if c}


def pair_consistency(sigma: Label, series: dict[int, int], k: int,
                     window: tuple[int, int] | None = None) -> bool:
    """Does ``series`` agree with the graded dimension generated by ``sigma``?"""
    if window is None and sigma.period is not None:
        degs = list(series) or [0]
        window = (min(degs), max(degs))
    expected = graded_series(sigma, k, window)
    given = {d: c for d, c in series.items() if c and (window is None or window[0] <= d <= window[1])}
    return expected == given


# pair := "pair(" m "," k ")[" comp ("|" comp)* "]"   comp := base "^" int "=" periodic
_PAIR_RE = re.compile(r"pair\((\d+),(-?\d+)\)\[(.*)\]")
_COMP_RE = re.compile(r"([A-Za-z_][A-Za-z0-9_]*)\^(-?\d+)=(.*)")


def format_pair(pair: PeriodicPair) -> str:
    comps = "|".join(f"{z.base}^{z.numerator}={format_multisegment(s)}" for s, z in pair.components)
    return f"pair({pair.period},{pair.k})[{comps}]"


def parse_pair(text: str) -> PeriodicPair:
    text = "".join(text.split())
    match = _PAIR_RE.fullmatch(text)
    if not match:
        raise ValueError(f"malformed periodic pair: {text!r}")
    m, k, body = int(match.group(1)), int(match.group(2)), match.group(3)
    comps = []
    for part in body.split("|") if body else []:
        cm = _COMP_RE.fullmatch(part)
        if not cm:
            raise ValueError(f"malformed pair component: {part!r}")
        sigma = parse_periodic(cm.group(3))
        if sigma.period != m:
            raise ValueError(f"component period {sigma.period} differs from {m}")
        comps.append((sigma, SpectralLabel(cm.group(1), int(cm.group(2)))))
    return PeriodicPair(m, k, tuple(comps))
