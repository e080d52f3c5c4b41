import math

import pytest
from hypothesis import given, settings, strategies as st

from alab.laurent import LaurentPoly, parse_laurent
from alab.lattice import SubgroupLattice, parse_lattice_sequence
from alab.mahler import DegenerateSumError
from alab.periodic import fix_component_dim, fix_log_count, growth_series

from conftest import poly_strategy

CIRCLES = parse_laurent("1 + u1 + u2 + u3", 3)
HARMONIC = parse_laurent("2 - u1 - u2", 2)


class TestComponentDim:
    @pytest.mark.parametrize("n, expect", [(2, 3), (5, 0), (6, 15), (9, 0), (10, 27)])
    def test_census(self, n, expect):
        assert fix_component_dim(CIRCLES, SubgroupLattice.scaled(n, 3)) == expect

    @pytest.mark.parametrize("n", [1, 3, 8, 13])
    def test_single_point(self, n):
        assert fix_component_dim(HARMONIC, SubgroupLattice.scaled(n, 2)) == 1

    def test_mismatch(self):
        with pytest.raises(ValueError):
            fix_component_dim(HARMONIC, SubgroupLattice.scaled(3, 3))


class TestLogCount:
    @pytest.mark.parametrize("n", [3, 10, 25])
    def test_linear(self, n):
        assert fix_log_count(parse_laurent("u1 - 2", 1), SubgroupLattice.scaled(n, 1)) == \
            pytest.approx(math.log(2 ** n - 1), rel=1e-12)

    def test_constant(self):
        g = SubgroupLattice.scaled(4, 2)
        assert fix_log_count(LaurentPoly.constant(5, 2), g) == pytest.approx(16 * math.log(5))

    def test_harmonic_two(self):
        # nonzero points (-1,1), (1,-1), (-1,-1): values 2, 2, 4
        assert fix_log_count(HARMONIC, SubgroupLattice.scaled(2, 2)) == pytest.approx(math.log(16))

    def test_all_zero(self):
        with pytest.raises(DegenerateSumError):
            fix_log_count(parse_laurent("u1 - 1", 1), SubgroupLattice.scaled(1, 1))


@settings(max_examples=40, deadline=None)
@given(poly_strategy(2, max_terms=4, max_exp=2, max_coef=3), st.integers(1, 6))
def test_adjoint_zero_count(f, n):
    if f.is_zero():
        return
    g = SubgroupLattice.scaled(n, 2)
    assert fix_component_dim(f, g) == fix_component_dim(f.adjoint(), g)


class TestGrowth:
    def test_linear_rates(self):
        gammas = [SubgroupLattice.scaled(n, 1) for n in range(5, 41)]
        t = growth_series(parse_laurent("u1 - 2", 1), gammas)
        assert t.final_error <= 1e-6 and t.trend_ok() and not t.empirical_only

    def test_circles(self):
        gammas = parse_lattice_sequence("diag-range:3:15:2", 3)
        t = growth_series(CIRCLES, gammas, target_grid=128)
        assert abs(t.target - 0.4262784) < 2e-3
        assert t.errors()[-1] < t.errors()[0]
        assert all(r.excluded_zeros == 0 for r in t.rows)

    def test_unit(self):
        t = growth_series(parse_laurent("u1 u2^-1", 2), [SubgroupLattice.scaled(n, 2) for n in (2, 3)])
        assert all(abs(r.rate) < 1e-14 for r in t.rows)

    def test_toral_flag(self):
        f = parse_laurent("3 - u1 - u1^-1 - u2 - u2^-1", 2)
        t = growth_series(f, [SubgroupLattice.scaled(n, 2) for n in (4, 7)])
        assert t.empirical_only and "toral" in t.verdict_note

    def test_norms_must_increase(self):
        with pytest.raises(ValueError):
            growth_series(HARMONIC, [SubgroupLattice.scaled(4, 2), SubgroupLattice.scaled(3, 2)])

    def test_csv(self):
        t = growth_series(HARMONIC, [SubgroupLattice.scaled(n, 2) for n in (2, 3)], target_grid=64)
        lines = t.to_csv().splitlines()
        assert lines[0].startswith("gamma,index,norm") and len(lines) == 3
