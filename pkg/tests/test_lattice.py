import itertools
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import assume, given, settings, strategies as st

from alab.lattice import (SubgroupLattice, Subtorus, TorsionPoint, enumerate_dual,
                          hermite_normal_form, lattice_norm, parse_lattice,
                          parse_lattice_sequence, shortest_vector, slice_count,
                          smith_normal_form)

matrices = st.integers(1, 3).flatmap(
    lambda d: st.lists(st.lists(st.integers(-6, 6), min_size=d, max_size=d),
                       min_size=d, max_size=d))


def lattice_from(rows):
    assume(round(abs(np.linalg.det(np.array(rows, dtype=float)))) != 0)
    return SubgroupLattice(tuple(map(tuple, rows)))


def brute_dual(gamma):
    """All t in (1/index) Z^d / Z^d with basis^T t integral."""
    n, d = gamma.index, gamma.dims
    cols = gamma.columns()
    out = set()
    for num in itertools.product(range(n), repeat=d):
        if all(sum(a * c for a, c in zip(num, col)) % n == 0 for col in cols):
            out.add(tuple(Fraction(a, n) for a in num))
    return out


class TestSmithHermite:
    @settings(max_examples=60, deadline=None)
    @given(matrices)
    def test_snf_factorisation(self, rows):
        S, D, T = smith_normal_form(rows)
        A = np.array(rows, dtype=object)
        prod = np.array(S, dtype=object) @ A @ np.array(T, dtype=object)
        assert (prod == np.array(D, dtype=object)).all()
        diag = [D[i][i] for i in range(len(rows))]
        for a, b in zip(diag, diag[1:]):
            assert a == 0 and b == 0 or (a != 0 and b % a == 0)

    def test_hnf_canonical(self):
        a = SubgroupLattice(((2, 1), (0, 2)))
        b = SubgroupLattice.from_columns([(2, 0), (3, 2)])   # column op: c2 + c1
        assert a == b and hash(a) == hash(b)
        assert hermite_normal_form(a.basis) == hermite_normal_form(b.basis)


class TestDual:
    def test_small(self):
        pts = list(enumerate_dual(SubgroupLattice.scaled(2, 1)))
        assert [p.angles for p in pts] == [(Fraction(0),), (Fraction(1, 2),)]

    def test_diagonal(self):
        pts = {p.angles for p in enumerate_dual(SubgroupLattice.scaled(3, 2))}
        assert pts == {(Fraction(a, 3), Fraction(b, 3)) for a in range(3) for b in range(3)}

    def test_skew(self):
        g = SubgroupLattice.from_columns([(2, 0), (1, 2)])
        pts = {p.angles for p in enumerate_dual(g)}
        assert len(pts) == 4 and pts == brute_dual(g)

    @settings(max_examples=40, deadline=None)
    @given(matrices)
    def test_dual_is_annihilator(self, rows):
        g = lattice_from(rows)
        assume(g.index ** g.dims <= 4000)
        pts = [p.angles for p in enumerate_dual(g)]
        assert len(pts) == len(set(pts)) == g.index
        assert set(pts) == brute_dual(g)

    def test_streaming_ranges(self):
        g = SubgroupLattice.from_columns([(4, 1, 0), (0, 3, 1), (1, 0, 5)])
        whole, e = g.dual_numerators()
        parts = [g.dual_numerators(lo, lo + 7)[0] for lo in range(0, g.index, 7)]
        assert (np.concatenate(parts) == whole).all()

    def test_singular(self):
        with pytest.raises(ValueError):
            SubgroupLattice(((1, 2), (2, 4)))


class TestTorsionPoint:
    def test_order_and_reduction(self):
        p = TorsionPoint((Fraction(7, 6), Fraction(-1, 4)))
        assert p.angles == (Fraction(1, 6), Fraction(3, 4)) and p.order == 12
        assert p.conjugate().angles == (Fraction(5, 6), Fraction(1, 4))
        assert p.numerators() == (2, 9)


class TestNorm:
    def test_examples(self):
        assert lattice_norm(SubgroupLattice.scaled(7, 3)) == 7
        assert lattice_norm(SubgroupLattice.from_columns([(3, 1), (1, 3)])) == 2
        assert lattice_norm(SubgroupLattice.from_columns([(1, 0), (0, 5)])) == 1
        sv = shortest_vector(SubgroupLattice.from_columns([(3, 1), (1, 3)]))
        assert sv.norm == 2 and sv.search_radius >= 2

    @settings(max_examples=40, deadline=None)
    @given(matrices, st.integers(-3, 3))
    def test_unimodular_invariance(self, rows, q):
        g = lattice_from(rows)
        d = g.dims
        assume(d >= 2)
        cols = g.columns()
        cols[0] = tuple(a + q * b for a, b in zip(cols[0], cols[1]))
        h = SubgroupLattice.from_columns(cols)
        assert h == g and lattice_norm(h) == lattice_norm(g)

    @settings(max_examples=30, deadline=None)
    @given(matrices)
    def test_norm_matches_brute_force(self, rows):
        g = lattice_from(rows)
        best = min(max(abs(x) for x in v) for v in itertools.product(range(-12, 13), repeat=g.dims)
                   if any(v) and g.contains(v))
        assert lattice_norm(g) == best


class TestSlice:
    def test_examples(self):
        for n in (2, 3, 5):
            g = SubgroupLattice.scaled(n, 2)
            assert slice_count(g, (1, 1)) == n
            assert slice_count(g, Subtorus((0, 1))) == n
        g = SubgroupLattice.from_columns([(2, 0), (1, 2)])
        assert slice_count(g, (1, 2)) == g.index

    def test_brute_force(self):
        g = SubgroupLattice.from_columns([(3, 1), (1, 3)])
        m = (1, -2)
        hits = sum(1 for p in enumerate_dual(g) if sum(a * b for a, b in zip(p.angles, m)) % 1 == 0)
        assert slice_count(g, m) == hits

    def test_zero_vector(self):
        with pytest.raises(ValueError):
            Subtorus((0, 0))

    @settings(max_examples=80, deadline=None)
    @given(matrices, st.data())
    def test_order_identity_and_bound(self, rows, data):
        g = lattice_from(rows)
        m = tuple(data.draw(st.lists(st.integers(-6, 6), min_size=g.dims, max_size=g.dims)))
        assume(any(m))
        assert slice_count(g, m) * g.order_of(m) == g.index
        assert slice_count(g, m) <= Fraction(max(abs(x) for x in m), lattice_norm(g)) * g.index


class TestParse:
    def test_forms(self):
        assert parse_lattice("diag:2,3") == SubgroupLattice.diagonal([2, 3])
        assert parse_lattice("mat:2,1;0,2").basis == ((2, 1), (0, 2))
        seq = parse_lattice_sequence("diag-range:3:9:2", 2)
        assert [g.descriptor() for g in seq] == ["diag:3,3", "diag:5,5", "diag:7,7", "diag:9,9"]
        assert len(parse_lattice_sequence("diag:2,2 | mat:3,0;0,3", 2)) == 2

    @pytest.mark.parametrize("bad", ["diag:", "mat:1,2;3", "foo:1", "diag:0,1", "mat:1,2;2,4"])
    def test_bad(self, bad):
        with pytest.raises(ValueError):
            parse_lattice(bad)
