"""Folding coproduct and induced-module multiplicities.

``coproduct`` sends ``f_x`` (cyclic quiver, at v=1) to the sum of ``f_y``
over the linear-quiver lifts ``y`` of ``x`` that fit in a finite window.
Multiplicities are coefficients of linear canonical basis elements in the
image of a cyclic canonical basis element:

    m(x, y) = sum_z C_xz(1) * sum_{w in fiber(z), dim w = dim y} Cinv_wy(1)

where ``C`` is the F->B matrix of the cyclic piece and ``Cinv`` the B->F
matrix of the linear piece of ``dim y``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import InvariantError, SizeLimitError, WindowError
from .hallalg import (
    DEFAULT_ORDER_LIMIT,
    Algebra,
    HallElement,
    canonical_basis,
    graded_labels,
)
from .laurent import LaurentInt
from .multiseg import (
    DimensionVector,
    Multisegment,
    PeriodicMultisegment,
    dimension_vector,
    fold,
    format_multisegment,
    unfold_fiber,
)


@dataclass
class MultiplicityReport:
    """Nonzero multiplicities around one fixed label.

    With ``x`` set, ``entries`` maps linear labels ``y`` (inside ``window``)
    to ``m(x, y)``.  With ``xbar`` set, it maps periodic labels ``x`` to
    ``m(x, xbar)``.
    """

    entries: dict
    window: tuple[int, int]
    stable: bool
    period: int
    x: PeriodicMultisegment | None = None
    xbar: Multisegment | None = None
    diagnostics: list[str] = field(default_factory=list)

    def header(self) -> str:
        center = format_multisegment(self.x) if self.x is not None else format_multisegment(self.xbar)
        key = "x" if self.x is not None else "xbar"
        lo, hi = self.window
        return f"# {key}={center} m={self.period} window=[{lo},{hi}] stable={'yes' if self.stable else 'no'}"

    def sorted_entries(self):
        return sorted(self.entries.items(), key=lambda t: t[0].sort_key())

    def to_tsv(self) -> str:
        rows = [self.header()]
        rows += [f"{format_multisegment(k)}\t{v}" for k, v in self.sorted_entries()]
        return "\n".join(rows) + "\n"

    def to_structured(self) -> dict:
        return {
            "x": format_multisegment(self.x) if self.x is not None else None,
            "xbar": format_multisegment(self.xbar) if self.xbar is not None else None,
            "m": self.period,
            "window": list(self.window),
            "stable": self.stable,
            "entries": [[format_multisegment(k), v] for k, v in self.sorted_entries()],
        }


def _check_window(window: tuple[int, int]) -> tuple[int, int]:
    lo, hi = window
    if lo > hi:
        raise ValueError("window must satisfy lo <= hi")
    return lo, hi


def doubled(window: tuple[int, int]) -> tuple[int, int]:
    lo, hi = window
    w = hi - lo + 1
    return lo - (w + 1) // 2, hi + w // 2


def default_window(xbar: Multisegment, m: int) -> tuple[int, int]:
    ends = [e for i, j, _ in xbar.blocks() for e in (i, j)] or [0]
    margin = m * max(xbar.order, 1)
    return min(ends) - margin, max(ends) + margin


def _inside(y: Multisegment, window: tuple[int, int]) -> bool:
    lo, hi = window
    return all(lo <= i and j <= hi for i, j, _ in y.blocks())


def coproduct(a: HallElement, window: tuple[int, int]) -> HallElement:
    """Delta at v=1, truncated to lifts inside ``window``."""
    lo, hi = _check_window(window)
    if a.algebra.period is None:
        raise ValueError("coproduct takes an element of a cyclic-quiver algebra")
    out: dict[Multisegment, LaurentInt] = {}
    for x, c in a.terms.items():
        value = c.at_one()
        if not value:
            continue
        lifts = unfold_fiber(x, (lo, hi))
        if not lifts:
            raise WindowError(f"no lift of {format_multisegment(x)} fits in window [{lo},{hi}]")
        for y in lifts:
            out[y] = out.get(y, LaurentInt(0)) + LaurentInt(value)
    return HallElement(Algebra.linear(lo, hi), out)


def _dv_window(dv: DimensionVector) -> tuple[int, int]:
    sup = dv.support() or [0]
    return min(sup), max(sup)


def _multiplicity_once(x: PeriodicMultisegment, xbar: Multisegment,
                       window: tuple[int, int], limit: int) -> int:
    m = x.period
    dvx = dimension_vector(x)
    dvy = dimension_vector(xbar)
    if dvy.fold(m) != dvx:
        return 0
    cyc = canonical_basis(dvx, Algebra.cyclic(m), limit=limit)
    lin = canonical_basis(dvy, Algebra.linear(*_dv_window(dvy)), limit=limit)
    col = lin.index(xbar)
    lin_pos = {y: n for n, y in enumerate(lin.labels)}
    row = cyc.to_b[cyc.index(x)]
    # only lifts of graded dimension dim(xbar) contribute; they live on its support
    lo, hi = _dv_window(dvy)
    span = (max(lo, window[0]), min(hi, window[1]))
    total = 0
    for z, c in zip(cyc.labels, row):
        cz = c.at_one()
        if not cz or span[0] > span[1]:
            continue
        for w in unfold_fiber(z, span):
            n = lin_pos.get(w)
            if n is not None:
                total += cz * lin.to_f[n][col].at_one()
    return total


def multiplicity_with_report(x: PeriodicMultisegment, xbar: Multisegment,
                             window: tuple[int, int] | None = None,
                             limit: int = DEFAULT_ORDER_LIMIT) -> tuple[int, bool, tuple[int, int]]:
    if not isinstance(x, PeriodicMultisegment) or not isinstance(xbar, Multisegment):
        raise ValueError("multiplicity takes a periodic label and a linear label")
    if x.order != xbar.order:
        raise ValueError(f"orders differ: {x.order} vs {xbar.order}")
    if x.order > limit:
        raise SizeLimitError(f"order {x.order} exceeds limit {limit}")
    window = _check_window(window) if window is not None else default_window(xbar, x.period)
    if not _inside(xbar, window):
        raise WindowError(f"{format_multisegment(xbar)} does not fit in window {list(window)}")
    value = _multiplicity_once(x, xbar, window, limit)
    wide = doubled(window)
    again = _multiplicity_once(x, xbar, wide, limit)
    return value, value == again, window


def multiplicity(x: PeriodicMultisegment, xbar: Multisegment,
                 window: tuple[int, int] | None = None,
                 limit: int = DEFAULT_ORDER_LIMIT) -> int:
    value, stable, window = multiplicity_with_report(x, xbar, window, limit)
    if not stable:
        raise WindowError(
            f"multiplicity of {format_multisegment(x)} at {format_multisegment(xbar)} "
            f"changed when window {list(window)} was doubled"
        )
    if value < 0:
        raise InvariantError(f"negative multiplicity {value}")
    return value


def _delta_once(x: PeriodicMultisegment, window: tuple[int, int], limit: int) -> dict[Multisegment, int]:
    """Delta(b_x) in the window, expanded in the linear canonical basis."""
    cyc = canonical_basis(dimension_vector(x), Algebra.cyclic(x.period), limit=limit)
    row = cyc.to_b[cyc.index(x)]
    in_f: dict[Multisegment, int] = {}
    for z, c in zip(cyc.labels, row):
        cz = c.at_one()
        if cz:
            for w in unfold_fiber(z, window):
                in_f[w] = in_f.get(w, 0) + cz
    by_dv: dict[DimensionVector, dict[Multisegment, int]] = {}
    for w, c in in_f.items():
        by_dv.setdefault(dimension_vector(w), {})[w] = c
    out: dict[Multisegment, int] = {}
    for dv, part in by_dv.items():
        lin = canonical_basis(dv, Algebra.linear(*_dv_window(dv)), limit=limit)
        for n, w in enumerate(lin.labels):
            c = part.get(w, 0)
            if not c:
                continue
            for col, y in enumerate(lin.labels):
                e = lin.to_f[n][col].at_one()
                if e:
                    out[y] = out.get(y, 0) + c * e
    return {y: c for y, c in out.items() if c}


def delta_report(x: PeriodicMultisegment, window: tuple[int, int],
                 limit: int = DEFAULT_ORDER_LIMIT) -> MultiplicityReport:
    """All nonzero m(x, y) for lifts y inside ``window``."""
    window = _check_window(window)
    if x.order > limit:
        raise SizeLimitError(f"order {x.order} exceeds limit {limit}")
    entries = _delta_once(x, window, limit)
    wide = _delta_once(x, doubled(window), limit)
    diagnostics = [
        f"{format_multisegment(y)}: {c} vs {wide.get(y, 0)}"
        for y, c in entries.items() if wide.get(y, 0) != c
    ]
    diagnostics += [
        f"{format_multisegment(y)}: 0 vs {c}"
        for y, c in wide.items() if _inside(y, window) and y not in entries
    ]
    report = MultiplicityReport(entries, window, not diagnostics, x.period, x=x, diagnostics=diagnostics)
    if any(c < 0 for c in entries.values()):
        raise InvariantError(f"negative multiplicity in Delta(b) of {format_multisegment(x)}")
    return report


def induce_standard(xbar: Multisegment, m: int) -> PeriodicMultisegment:
    return fold(xbar, m)


def induce_simple(xbar: Multisegment, m: int, window: tuple[int, int] | None = None,
                  limit: int = DEFAULT_ORDER_LIMIT) -> MultiplicityReport:
    """Composition factors m(x, xbar) over every periodic x of the right dimension."""
    if xbar.order > limit:
        raise SizeLimitError(f"order {xbar.order} exceeds limit {limit}")
    window = _check_window(window) if window is not None else default_window(xbar, m)
    dv = dimension_vector(xbar).fold(m)
    entries: dict[PeriodicMultisegment, int] = {}
    diagnostics = []
    for x in graded_labels(dv):
        value, stable, _ = multiplicity_with_report(x, xbar, window, limit)
        if not stable:
            diagnostics.append(f"{format_multisegment(x)} unstable")
        if value < 0:
            raise InvariantError(f"negative multiplicity at {format_multisegment(x)}")
        if value:
            entries[x] = value
    return MultiplicityReport(entries, window, not diagnostics, m, xbar=xbar, diagnostics=diagnostics)


def decomposition_matrix(dv: DimensionVector, algebra: Algebra | None = None,
                         limit: int = DEFAULT_ORDER_LIMIT) -> tuple[tuple, list[list[int]]]:
    """``D[i][j]`` = coefficient of f_{labels[j]} in b_{labels[i]} at v=1."""
    conv = canonical_basis(dv, algebra, limit=limit)
    return conv.labels, conv.at_v1()
