"""Independent reference implementations used only by the tests.

Nothing here imports the production algorithms: tableaux, partitions and
subspaces are enumerated from scratch.
"""

from __future__ import annotations

from itertools import product


def partitions(n: int, largest: int | None = None):
    largest = n if largest is None else largest
    if n == 0:
        yield ()
        return
    for first in range(min(n, largest), 0, -1):
        for rest in partitions(n - first, first):
            yield (first,) + rest


def dominates(lam, mu) -> bool:
    """lam >= mu in dominance order (same size)."""
    a = b = 0
    for t in range(max(len(lam), len(mu))):
        a += lam[t] if t < len(lam) else 0
        b += mu[t] if t < len(mu) else 0
        if a < b:
            return False
    return True


def kostka(lam, mu) -> int:
    """Semistandard tableaux of shape lam and content mu, filled cell by cell."""
    cells = [(r, c) for r, length in enumerate(lam) for c in range(length)]
    remaining = list(mu)
    grid: dict[tuple[int, int], int] = {}

    def fill(idx: int) -> int:
        if idx == len(cells):
            return 1
        r, c = cells[idx]
        total = 0
        for val in range(len(remaining)):
            if not remaining[val]:
                continue
            if c > 0 and grid[(r, c - 1)] > val:
                continue  # rows weakly increase
            if r > 0 and grid[(r - 1, c)] >= val:
                continue  # columns strictly increase
            grid[(r, c)] = val
            remaining[val] -= 1
            total += fill(idx + 1)
            remaining[val] += 1
            del grid[(r, c)]
        return total

    return fill(0)


def jordan_partition(label) -> tuple[int, ...]:
    """Segment lengths of a period-1 label, as a partition."""
    parts = []
    for i, j, mult in label.blocks():
        parts += [j - i + 1] * mult
    return tuple(sorted(parts, reverse=True))


def all_vectors(n: int, p: int):
    return product(range(p), repeat=n)


def stable_subspace_count(dims: dict[int, int], arrows: dict[int, list[list[int]]],
                          succ, sub_dims: dict[int, int], p: int) -> int:
    """Count arrow-stable graded subspaces by testing every graded subset of vectors.

    A graded subspace is recorded as the frozenset of its vectors; only
    usable for tiny dimensions.
    """

    def subspaces(n: int, k: int):
        seen = set()
        for gens in product(list(all_vectors(n, p)), repeat=k):
            span = {tuple([0] * n)}
            for g in gens:
                span = {tuple((a + t * b) % p for a, b in zip(s, g)) for s in span for t in range(p)}
            if len(span) == p**k:
                seen.add(frozenset(span))
        return seen

    verts = sorted(dims)
    choices = [subspaces(dims[v], sub_dims.get(v, 0)) for v in verts]
    count = 0
    for combo in product(*choices):
        pick = dict(zip(verts, combo))
        ok = True
        for v in verts:
            w = succ(v)
            if w not in pick or v not in arrows:
                continue
            a = arrows[v]
            for vec in pick[v]:
                img = tuple(sum(a[r][c] * vec[c] for c in range(len(vec))) % p for r in range(len(a)))
                if img not in pick[w]:
                    ok = False
                    break
            if not ok:
                break
        count += ok
    return count
