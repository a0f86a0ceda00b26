from math import gcd

import pytest

from cyclic_hall import affine_comb as A
from cyclic_hall.errors import InvariantError

TYPES = ["A1", "A2", "A3", "A4", "B2", "B3", "C3", "D4", "D5", "E6", "E7", "E8", "F4", "G2"]
POSITIVE_ROOTS = {"A": lambda r: r * (r + 1) // 2, "B": lambda r: r * r, "C": lambda r: r * r,
                  "D": lambda r: r * (r - 1), "E": lambda r: {6: 36, 7: 63, 8: 120}[r],
                  "F": lambda r: 24, "G": lambda r: 6}


@pytest.mark.parametrize("kind", TYPES)
def test_root_counts_and_coxeter_numbers(kind):
    rs = A.root_system(kind)
    letter, r = A.parse_type(kind)
    assert len(rs.roots) == POSITIVE_ROOTS[letter](r)
    assert rs.coxeter_number == A.COXETER[letter](r)
    # h * r = 2 * #positive roots
    assert rs.coxeter_number * r == 2 * len(rs.roots)


def test_small_rank_examples():
    assert A.root_system("A1").roots == ((1,),)
    assert set(A.root_system("A2").roots) == {(1, 0), (0, 1), (1, 1)}
    a3 = A.root_system("A3")
    assert len(a3.roots) == 6 and a3.coxeter_number == 4 and a3.highest_root == (1, 1, 1)


def test_non_finite_type_rejected():
    with pytest.raises(ValueError):
        A.generate_roots([[2, -2], [-2, 2]])
    with pytest.raises(ValueError):
        A.parse_type("D3")


def test_pi_k_examples():
    a2 = A.root_system("A2")
    assert A.pi_k(a2, 1).elements == (((1, 0), 0), ((0, 1), 0), ((-1, -1), 1))
    assert A.pi_k(a2, 2).elements == (((1, 1), 0), ((-1, 0), 1), ((0, -1), 1))
    assert A.pi_k(A.root_system("A1"), 3).elements == (((1,), 1), ((-1,), 2))
    assert A.pi_k(a2, 1).format_lines() == ["(1,0;0)", "(0,1;0)", "(-1,-1;1)"]


def test_pi_k_gcd_precondition():
    with pytest.raises(ValueError):
        A.pi_k(A.root_system("A3"), 2)


@pytest.mark.parametrize("kind", ["A1", "A2", "A3", "A4", "B2", "C3", "D4"])
def test_pi_k_shape(kind):
    rs = A.root_system(kind)
    h, r = rs.coxeter_number, rs.rank
    for k in range(1, 2 * h + 1):
        if gcd(k, h) != 1:
            continue
        pk = A.pi_k(rs, k)
        a, b = divmod(k, h)
        assert len(pk.elements) == r + 1
        for alpha, level in pk.elements:
            assert (sum(alpha), level) in ((b, a), (b - h, a + 1))
        n_b = sum(1 for x in rs.roots if sum(x) == b)
        n_hb = sum(1 for x in rs.roots if sum(x) == h - b)
        assert n_b + n_hb == r + 1


@pytest.mark.parametrize("kind", ["A1", "A2", "A3", "B2", "C3", "D4", "G2"])
def test_pi_1_is_affine_simple_system(kind):
    rs = A.root_system(kind)
    theta = tuple(-c for c in rs.highest_root)
    assert A.pi_k(rs, 1).elements == tuple((a, 0) for a in rs.simple_roots()) + ((theta, 1),)


@pytest.mark.parametrize("kind", ["A1", "A2", "A3", "A4", "B2", "C3"])
def test_orbit_counts(kind):
    rs = A.root_system(kind)
    h = rs.coxeter_number
    for k in range(1, 2 * h + 1):
        if gcd(k, h) == 1:
            assert A.orbit_count(rs, k) == 2 ** (rs.rank + 1) == A.orbit_count_direct(rs, k)


def test_dependent_weights_detected(monkeypatch):
    monkeypatch.setattr(A, "_weights", lambda rs, k: [(1, 0), (-1, 0)])
    rs = A.root_system("A1")
    with pytest.raises(InvariantError):
        A.orbit_count_direct(rs, 1)
    with pytest.raises(InvariantError):
        A.orbit_count(rs, 1)


def test_dimensions():
    assert A.dim_simple(A.root_system("A2"), 2) == 4
    assert A.dim_simple(A.root_system("A3"), 5) == 125
    for kind in TYPES:
        assert A.dim_simple(A.root_system(kind), 1) == 1
