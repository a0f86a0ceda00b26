from itertools import product

import pytest

from cyclic_hall import hallalg as H
from cyclic_hall.errors import SizeLimitError, WindowError
from cyclic_hall.hallcount import rep_from_multisegment
from cyclic_hall.laurent import ONE, V, ZERO, LaurentInt
from cyclic_hall.multiseg import DimensionVector, dimension_vector, degeneration_leq, parse_label

P = parse_label
cyc = DimensionVector.cyclic


def pieces(m, max_order, min_order=1):
    for d in range(min_order, max_order + 1):
        for dv in product(range(d + 1), repeat=m):
            if sum(dv) == d:
                yield cyc(dv)


def brute_hom_dim(x, y, p=2):
    """log_p of the number of graded maps commuting with the arrows."""
    rx, ry = rep_from_multisegment(x, p), rep_from_multisegment(y, p)
    verts = sorted(set(rx.vertices()) | set(ry.vertices()))
    shapes = [(v, ry.dim(v), rx.dim(v)) for v in verts]
    count = 0
    entries = sum(r * c for _, r, c in shapes)
    for flat in product(range(p), repeat=entries):
        maps, pos = {}, 0
        for v, r, c in shapes:
            maps[v] = [list(flat[pos + i * c: pos + (i + 1) * c]) for i in range(r)]
            pos += r * c
        ok = True
        for v in verts:
            w = rx.succ(v)
            # phi_w A_v == B_v phi_v
            a, b = rx.arrow(v), ry.arrow(v)
            for col in range(rx.dim(v)):
                left = [sum(maps[w][i][k] * a[k][col] for k in range(rx.dim(w))) % p for i in range(ry.dim(w))]
                right = [sum(b[i][k] * maps[v][k][col] for k in range(ry.dim(v))) % p for i in range(ry.dim(w))]
                if left != right:
                    ok = False
                    break
            if not ok:
                break
        count += ok
    n = 0
    while p**n < count:
        n += 1
    assert p**n == count
    return n


class TestHom:
    def test_examples(self):
        assert H.orbit_dim(P("per(1){[0,0]:1}")) == 0
        assert H.dim_hom(P("per(1){[0,1]:1}"), P("per(1){[0,1]:1}")) == 2
        assert H.orbit_dim(P("per(1){[0,1]:1}")) == 2
        assert H.dim_hom(P("per(1){[0,0]:2}"), P("per(1){[0,0]:2}")) == 4
        assert H.orbit_dim(P("per(1){[0,0]:2}")) == 0

    @pytest.mark.parametrize("m", [1, 2, 3])
    def test_segment_formula_against_enumeration(self, m):
        labels = [x for dv in pieces(m, 3) for x in H.graded_labels(dv)]
        for x, y in product(labels, repeat=2):
            if x.order + y.order <= 5:
                assert H.dim_hom(x, y) == brute_hom_dim(x, y), (x, y)

    def test_linear_formula_against_enumeration(self):
        labels = ["{[0,1]:1}", "{[1,2]:1}", "{[0,0]:1;[1,1]:1}", "{[0,2]:1}", "{[1,1]:1}"]
        for a, b in product(labels, repeat=2):
            x, y = P(a), P(b)
            assert H.dim_hom(x, y) == brute_hom_dim(x, y), (a, b)


class TestProduct:
    def test_jordan_square(self):
        s = P("per(1){[0,0]:1}")
        prod = H.f_of(s) * H.f_of(s)
        assert prod.terms == {P("per(1){[0,0]:2}"): V * V + ONE, P("per(1){[0,1]:1}"): ONE}
        # the same product on characteristic functions carries the twist v^2
        u = H.u_of(s) * H.u_of(s)
        assert u.coefficient(P("per(1){[0,1]:1}")) * LaurentInt.monomial(H.orbit_dim(P("per(1){[0,1]:1}"))) \
            == LaurentInt.monomial(2)

    def test_unit(self):
        a = H.f_of(P("per(2){[0,1]:1}")).scale(V) + H.f_of(P("per(2){[1,1]:2}"))
        one = H.f_of(P("per(2){}"))
        assert one * a == a and a * one == a

    def test_two_extensions(self):
        prod = H.f_of(P("per(2){[0,0]:1}")) * H.f_of(P("per(2){[1,1]:1}"))
        assert set(prod.terms) == {P("per(2){[0,0]:1;[1,1]:1}"), P("per(2){[0,1]:1}")}
        rev = H.f_of(P("per(2){[1,1]:1}")) * H.f_of(P("per(2){[0,0]:1}"))
        assert set(rev.terms) == {P("per(2){[0,0]:1;[1,1]:1}"), P("per(2){[1,2]:1}")}

    def test_linear_window(self):
        alg = H.Algebra.linear(0, 1)
        a = H.f_of(P("{[0,0]:1}"), alg)
        b = H.f_of(P("{[1,1]:1}"), alg)
        assert set((a * b).terms) == {P("{[0,0]:1;[1,1]:1}"), P("{[0,1]:1}")}
        with pytest.raises(WindowError):
            H.f_of(P("{[2,2]:1}"), alg)

    def test_size_limit(self):
        big = H.f_of(P("per(1){[0,0]:4}"))
        with pytest.raises(SizeLimitError):
            H.product(big, big)

    @pytest.mark.parametrize("m", [1, 2, 3])
    def test_associative(self, m):
        labels = [x for dv in pieces(m, 2) for x in H.graded_labels(dv)]
        checked = 0
        for a, b, c in product(labels, repeat=3):
            if a.order + b.order + c.order > 4:
                continue
            fa, fb, fc = H.f_of(a), H.f_of(b), H.f_of(c)
            assert (fa * fb) * fc == fa * (fb * fc)
            checked += 1
        assert checked > 0


class TestMonomials:
    def test_semisimple_is_one_factor(self):
        dv = cyc([2, 1])
        assert H.monomial_of(H.semisimple_label(dv)) == [dv]

    def test_jordan_block(self):
        x = P("per(1){[0,1]:1}")
        assert H.monomial_of(x) == [cyc([1]), cyc([1])]
        expanded = H.expand_word(H.Algebra.cyclic(1), H.monomial_of(x))
        assert expanded.coefficient(x) == ONE
        assert set(expanded.terms) == {x, P("per(1){[0,0]:2}")}

    def test_cyclic_chain_top_first(self):
        x = P("per(2){[0,1]:1}")
        assert H.monomial_of(x) == [cyc([1, 0]), cyc([0, 1])]
        assert H.expand_word(H.Algebra.cyclic(2), H.monomial_of(x)).coefficient(x) == ONE

    @pytest.mark.parametrize("m", [1, 2, 3])
    def test_unitriangular_spanning(self, m):
        alg = H.Algebra.cyclic(m)
        for dv in pieces(m, 4):
            for x in H.graded_labels(dv):
                expanded = H.expand_word(alg, H.monomial_of(x))
                assert expanded.coefficient(x) == ONE
                assert all(y == x or degeneration_leq(y, x) for y in expanded.terms)


class TestBar:
    def test_generators_fixed(self):
        fd = H.f_d(cyc([1, 2]))
        assert H.bar(fd) == fd
        assert H.bar(fd.scale(V)) == fd.scale(LaurentInt.monomial(-1))

    def test_jordan_block(self):
        x, ss = P("per(1){[0,1]:1}"), P("per(1){[0,0]:2}")
        assert H.bar(H.f_of(x)).terms == {x: ONE, ss: LaurentInt({2: 1, -2: -1})}

    @pytest.mark.parametrize("m", [1, 2, 3])
    def test_involution(self, m):
        for dv in pieces(m, 4):
            for x in H.graded_labels(dv):
                f = H.f_of(x).scale(LaurentInt({1: 2, -3: 1}))
                assert H.bar(H.bar(f)) == f

    def test_multiplicative(self):
        a, b = H.f_of(P("per(2){[0,1]:1}")), H.f_of(P("per(2){[1,1]:1}"))
        assert H.bar(a * b) == H.bar(a) * H.bar(b)


class TestCanonicalBasis:
    def test_single_orbit(self):
        conv = H.canonical_basis(cyc([0, 1]))
        assert conv.to_b == ((ONE,),) and conv.to_f == ((ONE,),)

    def test_jordan_two(self):
        conv = H.canonical_basis(cyc([2]))
        assert [str(x) for x in conv.labels] == ["per(1){[0,0]:2}", "per(1){[0,1]:1}"]
        assert conv.to_b == ((ONE, ZERO), (LaurentInt.monomial(2), ONE))
        assert H.specialize_v1(conv.b_of(P("per(1){[0,1]:1}"))).terms == {
            P("per(1){[0,1]:1}"): ONE, P("per(1){[0,0]:2}"): ONE}

    def test_linear_two_vertices(self):
        dv = DimensionVector.linear({0: 1, 1: 1})
        conv = H.canonical_basis(dv, H.Algebra.linear(0, 1))
        b = conv.b_of(P("{[0,1]:1}"))
        assert b.coefficient(P("{[0,1]:1}")) == ONE
        assert b.coefficient(P("{[0,0]:1;[1,1]:1}")).at_one() == 1
        assert H.bar(b) == b

    @pytest.mark.parametrize("m", [1, 2, 3])
    def test_properties(self, m):
        for dv in pieces(m, 4):
            conv = H.canonical_basis(dv)
            n = len(conv.labels)
            for i, x in enumerate(conv.labels):
                b = conv.b_of(x)
                assert H.bar(b) == b
                for j in range(n):
                    c = conv.to_b[i][j]
                    if i == j:
                        assert c == ONE
                    elif c:
                        assert j < i and c.min_degree() >= 1 and c.nonnegative()
                        assert degeneration_leq(conv.labels[j], x)
            for i in range(n):
                for j in range(n):
                    entry = sum((conv.to_b[i][k] * conv.to_f[k][j] for k in range(n)), ZERO)
                    assert entry == (ONE if i == j else ZERO)

    def test_piece_size_limit(self):
        with pytest.raises(SizeLimitError):
            H.canonical_basis(cyc([7]))


class TestCanonCache:
    def test_roundtrip(self, tmp_path):
        path = tmp_path / "canon.cache"
        cache = H.CanonCache(path)
        dv = cyc([2, 1])
        H.clear_memory_caches()
        conv = H.canonical_basis(dv, cache=cache)
        cache.save()
        lines = path.read_text().splitlines()
        assert lines[0] == "cyclic-hall canon v1"
        assert lines[1].startswith("per(2)|(2,1)|")
        H.clear_memory_caches()
        again = H.canonical_basis(dv, cache=H.CanonCache(path))
        assert again.to_b == conv.to_b and again.to_f == conv.to_f

    def test_hash_mismatch_is_recomputed(self, tmp_path):
        path = tmp_path / "canon.cache"
        path.write_text("cyclic-hall canon v1\nper(1)|(2)|deadbeef|(0:1),0;(0:7),(0:1)\n")
        H.clear_memory_caches()
        conv = H.canonical_basis(cyc([2]), cache=H.CanonCache(path))
        assert conv.to_b[1][0] == LaurentInt.monomial(2)


from hypothesis import given, settings, strategies as st  # noqa: E402

_SMALL = [x for dv in pieces(2, 2) for x in H.graded_labels(dv)]
_coeffs = st.dictionaries(st.integers(-2, 2), st.integers(-3, 3), max_size=2).map(LaurentInt)
_elements = st.dictionaries(st.sampled_from(_SMALL), _coeffs, min_size=1, max_size=2).map(
    lambda t: H.HallElement(H.Algebra.cyclic(2), t))


@settings(max_examples=40, deadline=None)
@given(_elements, _elements, _elements)
def test_associative_and_bar_multiplicative_on_combinations(a, b, c):
    assert (a * b) * c == a * (b * c)
    assert H.bar(a * b) == H.bar(a) * H.bar(b)
