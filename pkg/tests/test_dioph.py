import math

import pytest

from alab.dioph import (NoUnitaryRootError, gelfond_table, lift_to_atoral, psi_lattice,
                        quantitative_ratio, unitary_roots)
from alab.laurent import parse_laurent
from alab.lattice import SubgroupLattice
from alab.variety import sample_variety

SALEM = parse_laurent("u1^4 - u1^3 - u1^2 - u1 + 1", 1)
CIRCLES = parse_laurent("1 + u1 + u2 + u3", 3)


class TestRoots:
    def test_salem_pair(self):
        free, torsion = unitary_roots(SALEM)
        assert len(free) == 2 and not torsion
        re = sorted(r.value.real for r in free)
        # u + 1/u = (1 - sqrt 13) / 2 on the circle
        assert re[0] == pytest.approx((1 - math.sqrt(13)) / 4, abs=1e-12)
        assert all(r.modulus_defect < 1e-12 and not r.borderline for r in free)

    def test_torsion_only(self):
        free, torsion = unitary_roots(parse_laurent("u1 - 1", 1))
        assert not free and torsion[0].torsion_order == 1
        free, torsion = unitary_roots(parse_laurent("u1^4 + u1^3 + u1^2 + u1 + 1", 1))
        assert not free and {r.torsion_order for r in torsion} == {5}

    def test_mixed(self):
        free, torsion = unitary_roots(SALEM * parse_laurent("u1^2 + 1", 1))
        assert len(free) == 2 and [r.torsion_order for r in torsion] == [4, 4]

    def test_errors(self):
        with pytest.raises(NoUnitaryRootError):
            unitary_roots(parse_laurent("u1^2 - u1 - 1", 1))
        with pytest.raises(NoUnitaryRootError):
            unitary_roots(parse_laurent("3 u1^2", 1))
        with pytest.raises(ValueError):
            unitary_roots(parse_laurent("u1 - u2", 2))


class TestGelfond:
    def test_violations_only_early(self):
        # the bound is asymptotic: lambda^11 is already within 0.05 of 1
        t = gelfond_table(SALEM, 512, 0.05)
        assert len(t.rows) == 1024 and t.violations > 0 and t.last_violation <= 33
        assert all(r.gap > r.bound for r in t.rows if r.n > 33)

    def test_gap_at_eleven(self):
        t = gelfond_table(SALEM, 20, 0.5)
        assert t.violations == 0 and t.min_margin > 0
        r11 = [r for r in t.rows if r.n == 11][0]
        assert r11.gap == pytest.approx(0.0497, abs=1e-3)

    def test_dist_bounds_gap(self):
        # the chord to the nearest n-th root of unity, scaled by n, bounds |lambda^n - 1|
        for r in gelfond_table(SALEM, 64, 0.05).rows:
            assert r.gap <= r.n * r.dist + 1e-12

    def test_degenerate(self):
        t = gelfond_table(parse_laurent("u1 - 1", 1), 10, 0.05)
        assert not t.rows and len(t.degenerate) == 1

    def test_bad_args(self):
        with pytest.raises(ValueError):
            gelfond_table(SALEM, 10, 0.0)
        with pytest.raises(ValueError):
            gelfond_table(SALEM, 0, 0.1)

    def test_csv(self):
        lines = gelfond_table(SALEM, 3, 0.1).to_csv().splitlines()
        assert lines[0] == "root,angle,n,gap,dist,bound,violation" and len(lines) == 7


class TestRatio:
    def test_empty_variety(self):
        f = parse_laurent("u1^2 - u1 - 1", 1)
        gs = [SubgroupLattice.scaled(n, 1) for n in (5, 10, 20)]
        s = quantitative_ratio(f, gs, [1 / n for n in (5, 10, 20)], sample_variety(f))
        assert s.M == (0, 0, 0) and s.verdict == "zero"

    def test_circles_decrease(self):
        ns = list(range(5, 16, 2))
        gs = [SubgroupLattice.scaled(n, 3) for n in ns]
        s = quantitative_ratio(CIRCLES, gs, [4 / n for n in ns], sample_variety(CIRCLES, 32))
        assert s.verdict == "decreasing" and min(s.M) > 0

    def test_harmonic_tiny_radii(self):
        f = parse_laurent("2 - u1 - u2", 2)
        ns = [4, 8, 16, 32]
        s = quantitative_ratio(f, [SubgroupLattice.scaled(n, 2) for n in ns],
                               [n ** -2 for n in ns], sample_variety(f, 64))
        assert s.ratios[-1] <= s.ratios[0]

    def test_validation(self):
        s = sample_variety(CIRCLES, 16)
        g = [SubgroupLattice.scaled(3, 3)]
        with pytest.raises(ValueError):
            quantitative_ratio(CIRCLES, g, [0.5, 0.25], s)
        with pytest.raises(ValueError):
            quantitative_ratio(CIRCLES, g, [1.5], s)
        with pytest.raises(ValueError):
            quantitative_ratio(CIRCLES, [], [], s)


class TestLift:
    def test_shape(self):
        h = lift_to_atoral(parse_laurent("u1 - 1", 1))
        assert h.dims == 2
        assert h == parse_laurent("4 - u1 - u1^-1 - u2 - u2^-1", 2)

    def test_zero(self):
        with pytest.raises(ValueError):
            lift_to_atoral(parse_laurent("0", 2))

    def test_psi_lattice(self):
        g = psi_lattice(SubgroupLattice.scaled(3, 2), 5)
        assert g.index == 45 and g.contains((0, 0, 5)) and g.contains((3, 0, 0))
        assert not g.contains((0, 0, 1))
        with pytest.raises(ValueError):
            psi_lattice(SubgroupLattice.scaled(3, 2), 0)
