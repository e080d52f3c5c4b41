"""Growth of periodic-point counts, a Gelfond-type scan and the counting ratio."""
from alab import parse_laurent
from alab.dioph import gelfond_table, quantitative_ratio
from alab.lattice import SubgroupLattice
from alab.periodic import growth_series
from alab.variety import sample_variety


def main():
    f = parse_laurent("1 + u1 + u2 + u3", 3)
    table = growth_series(f, [SubgroupLattice.scaled(n, 3) for n in range(3, 22, 2)], target_grid=256)
    print(f"rates for 1 + u1 + u2 + u3 over odd n (target {table.target:.6f})")
    print(table.to_csv(), end="")

    salem = parse_laurent("u1^4 - u1^3 - u1^2 - u1 + 1", 1)
    for eps in (0.05, 0.1):
        t = gelfond_table(salem, 512, eps)
        print(f"\neps={eps}: {t.violations} violations of |xi^n - 1| > exp(-eps n), "
              f"last at n = {t.last_violation}")

    # r_n = 1/n leaves no torsion points within chordal distance r_n of the circles
    ns = list(range(5, 16, 2))
    s = quantitative_ratio(f, [SubgroupLattice.scaled(n, 3) for n in ns], [4 / n for n in ns],
                           sample_variety(f, 32))
    print(f"\ncounting ratio with r_n = 4/n: {s.verdict}")
    print(s.to_csv(), end="")


if __name__ == "__main__":
    main()
