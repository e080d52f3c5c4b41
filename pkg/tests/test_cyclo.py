from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from alab import cyclo
from alab.laurent import eval_at_angles, parse_laurent
from alab.lattice import SubgroupLattice, TorsionPoint

from conftest import poly_strategy


def tp(*angles):
    return TorsionPoint(tuple(Fraction(a) for a in angles))


class TestCyclotomic:
    @pytest.mark.parametrize("N, coeffs", [(1, (-1, 1)), (2, (1, 1)), (6, (1, -1, 1)),
                                           (8, (1, 0, 0, 0, 1)), (12, (1, 0, -1, 0, 1))])
    def test_known(self, N, coeffs):
        assert cyclo.cyclotomic(N) == coeffs

    @pytest.mark.parametrize("N", [7, 15, 30, 36, 105])
    def test_product_over_divisors(self, N):
        prod = [1]
        for e in range(1, N + 1):
            if N % e == 0:
                prod = list(np.convolve(prod, cyclo.cyclotomic(e)))
        assert prod == [-1] + [0] * (N - 1) + [1]

    def test_rem(self):
        # x^3 - 1 = (x - 1)(x^2 + x + 1)
        assert not any(cyclo.poly_rem([-1, 0, 0, 1], cyclo.cyclotomic(3)))
        assert any(cyclo.poly_rem([1, 0, 0, 1], cyclo.cyclotomic(3)))


class TestTorsionEval:
    def test_order_six_zero(self):
        f = parse_laurent("3 - u1 - u1^-1 - u2 - u2^-1", 2)
        v = cyclo.torsion_eval(f, tp(Fraction(1, 6), 0))
        assert v.exact_zero and v.order == 6 and abs(v.approx) < 1e-12

    def test_circle_point(self):
        f = parse_laurent("1 + u1 + u2 + u3", 3)
        assert cyclo.torsion_eval(f, tp(Fraction(1, 2), Fraction(1, 8), Fraction(5, 8))).exact_zero

    def test_nonzero(self):
        f = parse_laurent("2 - u1 - u2", 2)
        v = cyclo.torsion_eval(f, tp(Fraction(1, 2), Fraction(1, 2)))
        assert not v.exact_zero and abs(v.approx - 4) < 1e-12

    def test_tiny_but_nonzero(self):
        # |f| at a torsion point can be small without vanishing
        f = parse_laurent("u1 - 1", 1)
        assert not cyclo.is_exact_zero(f, tp(Fraction(1, 1000)))
        assert cyclo.is_exact_zero(f, tp(0))

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            cyclo.torsion_eval(parse_laurent("u1", 1), tp(0, 0))


@settings(max_examples=500, deadline=None)
@given(poly_strategy(2, max_terms=5, max_exp=3, max_coef=3), st.integers(1, 12),
       st.integers(0, 11), st.integers(0, 11))
def test_exact_agrees_with_numeric(f, N, a, b):
    omega = TorsionPoint.from_numerators((a % N, b % N), N)
    z = cyclo.is_exact_zero(f, omega)
    val = abs(eval_at_angles(f, [float(x) for x in omega.angles]))
    # algebraic integers of this size that are not zero sit far above 1e-9
    assert z == (val < 1e-9)


@settings(max_examples=100, deadline=None)
@given(poly_strategy(2), st.integers(1, 10), st.integers(0, 9), st.integers(0, 9))
def test_conjugation_and_adjoint(f, N, a, b):
    omega = TorsionPoint.from_numerators((a % N, b % N), N)
    z = cyclo.is_exact_zero(f, omega)
    assert cyclo.is_exact_zero(f, omega.conjugate()) == z
    assert cyclo.is_exact_zero(f.adjoint(), omega) == z


def test_mask_matches_pointwise():
    f = parse_laurent("1 + u1 + u2 + u3", 3)
    A, e = SubgroupLattice.scaled(4, 3).dual_numerators()
    mask = cyclo.exact_zero_mask(f, A, e)
    direct = [cyclo.is_exact_zero(f, TorsionPoint.from_numerators(r, e)) for r in A]
    assert mask.tolist() == direct and mask.sum() == 9
