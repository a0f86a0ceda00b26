"""Laurent polynomials in one variable ``v`` with integer coefficients.

Also holds the small one-variable integer polynomial helpers (Gaussian
binomials, substitution ``q -> v^e``) used by the Hall algebra code.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Iterable, Mapping


class LaurentInt:
    """Immutable element of Z[v, v^-1].

    Stored as a sorted tuple of ``(exponent, coefficient)`` pairs with no
    zero coefficients.
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[int, int] | Iterable[tuple[int, int]] | int = 0):
        if isinstance(terms, int):
            items = [(0, terms)]
        elif isinstance(terms, Mapping):
            items = list(terms.items())
        else:
            items = list(terms)
        acc: dict[int, int] = {}
        for e, c in items:
            acc[e] = acc.get(e, 0) + c
        self._terms = tuple(sorted((e, c) for e, c in acc.items() if c != 0))
        self._hash = hash(self._terms)

    @classmethod
    def monomial(cls, exponent: int, coefficient: int = 1) -> "LaurentInt":
        return cls(((exponent, coefficient),))

    @property
    def terms(self) -> tuple[tuple[int, int], ...]:
        return self._terms

    def as_dict(self) -> dict[int, int]:
        return dict(self._terms)

    def coefficient(self, exponent: int) -> int:
        for e, c in self._terms:
            if e == exponent:
                return c
        return 0

    def is_zero(self) -> bool:
        return not self._terms

    def min_degree(self) -> int:
        if not self._terms:
            raise ValueError("zero has no degree")
        return self._terms[0][0]

    def max_degree(self) -> int:
        if not self._terms:
            raise ValueError("zero has no degree")
        return self._terms[-1][0]

    def bar(self) -> "LaurentInt":
        """The ring involution v -> v^-1."""
        return LaurentInt((-e, c) for e, c in self._terms)

    def positive_part(self) -> "LaurentInt":
        return LaurentInt((e, c) for e, c in self._terms if e > 0)

    def at_one(self) -> int:
        return sum(c for _, c in self._terms)

    def evaluate(self, value):
        """Evaluate at a nonzero number; ints are promoted to Fraction for negative powers."""
        if isinstance(value, int):
            value = Fraction(value)
        return sum(c * value**e for e, c in self._terms)

    def shift(self, n: int) -> "LaurentInt":
        """Multiply by v^n."""
        return LaurentInt((e + n, c) for e, c in self._terms)

    def nonnegative(self) -> bool:
        return all(c >= 0 for _, c in self._terms)

    def __add__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return LaurentInt(self._terms + other._terms)

    __radd__ = __add__

    def __neg__(self):
        return LaurentInt((e, -c) for e, c in self._terms)

    def __sub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        acc: dict[int, int] = {}
        for e1, c1 in self._terms:
            for e2, c2 in other._terms:
                acc[e1 + e2] = acc.get(e1 + e2, 0) + c1 * c2
        return LaurentInt(acc)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            if len(self._terms) == 1 and self._terms[0][1] in (1, -1):
                e, c = self._terms[0]
                return LaurentInt.monomial(e * n, c if n % 2 else 1)
            raise ValueError("only units may be raised to negative powers")
        result = ONE
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, int):
            other = LaurentInt(other)
        if not isinstance(other, LaurentInt):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        return self._hash

    def __bool__(self):
        return bool(self._terms)

    def __repr__(self):
        return f"LaurentInt({self.serialize()})"

    def __str__(self):
        if not self._terms:
            return "0"
        parts = []
        for e, c in reversed(self._terms):
            if e == 0:
                mono = str(abs(c))
            else:
                power = "v" if e == 1 else f"v^{e}"
                mono = power if abs(c) == 1 else f"{abs(c)}*{power}"
            sign = "-" if c < 0 else "+"
            parts.append((sign, mono))
        out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, mono in parts[1:]:
            out += f" {sign} {mono}"
        return out

    def serialize(self) -> str:
        """Cache form: ``(-1:2)(0:1)``; zero is ``0``."""
        if not self._terms:
            return "0"
        return "".join(f"({e}:{c})" for e, c in self._terms)

    @classmethod
    def parse(cls, text: str) -> "LaurentInt":
        text = "".join(text.split())
        if text == "0":
            return cls()
        pairs = re.findall(r"\((-?\d+):(-?\d+)\)", text)
        if "".join(f"({e}:{c})" for e, c in pairs) != text or not pairs:
            raise ValueError(f"malformed Laurent polynomial: {text!r}")
        return cls((int(e), int(c)) for e, c in pairs)


def _coerce(x):
    if isinstance(x, LaurentInt):
        return x
    if isinstance(x, int):
        return LaurentInt(x)
    return NotImplemented


ZERO = LaurentInt()
ONE = LaurentInt(1)
V = LaurentInt.monomial(1)


# --- integer polynomials in q, as coefficient lists (index = degree) ---

def poly_trim(p: list[int]) -> list[int]:
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return p


def poly_add(a: list[int], b: list[int]) -> list[int]:
    n = max(len(a), len(b))
    return poly_trim([(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)])


def poly_mul(a: list[int], b: list[int]) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return poly_trim(out)


def poly_eval(p: list[int], q):
    total = 0
    for c in reversed(p):
        total = total * q + c
    return total


def gaussian_binomial(n: int, k: int) -> list[int]:
    """[n choose k]_q as a coefficient list."""
    if k < 0 or k > n:
        return []
    # rows of Pascal's rule [n,k] = [n-1,k-1] + q^k [n-1,k]
    row: list[list[int]] = [[1]]
    for i in range(1, n + 1):
        new = [[1]]
        for j in range(1, i):
            new.append(poly_add(row[j - 1], [0] * j + row[j]))
        new.append([1])
        row = new
    return row[k]


def poly_in_v(p: list[int], exponent: int) -> LaurentInt:
    """Substitute q = v^exponent."""
    return LaurentInt((exponent * d, c) for d, c in enumerate(p) if c)


def format_qpoly(p: list[int]) -> str:
    """``c0+c1*q+...``; zero is ``0``. Zero coefficients are omitted except c0."""
    p = poly_trim(p)
    if not p:
        return "0"
    parts = []
    for d, c in enumerate(p):
        if d == 0:
            parts.append(str(c))
        elif c:
            mono = "q" if d == 1 else f"q^{d}"
            parts.append(f"{c}*{mono}")
    return "+".join(parts).replace("+-", "-")


def parse_qpoly(text: str) -> list[int]:
    text = "".join(text.split())
    coeffs: dict[int, int] = {}
    pos = 0
    for match in re.finditer(r"([+-]?)(\d+)(\*q(?:\^(\d+))?)?", text):
        if match.start() != pos:
            break
        pos = match.end()
        coef = int(match.group(2)) * (-1 if match.group(1) == "-" else 1)
        if match.group(3) is None:
            deg = 0
        else:
            deg = 1 if match.group(4) is None else int(match.group(4))
        coeffs[deg] = coeffs.get(deg, 0) + coef
    if not coeffs or pos != len(text):
        raise ValueError(f"malformed polynomial: {text!r}")
    return poly_trim([coeffs.get(i, 0) for i in range(max(coeffs) + 1)])
