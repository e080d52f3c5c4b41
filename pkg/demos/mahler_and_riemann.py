"""Mahler measures three ways, and Riemann sums over torsion points converging to them.

    python3 demos/mahler_and_riemann.py
"""
import math

from alab import mahler, parse_laurent
from alab.lattice import SubgroupLattice

ZETA3 = 1.2020569031595942


def main():
    golden = parse_laurent("u1^2 - u1 - 1", 1)
    print("m(u^2 - u - 1)")
    print(f"  Jensen        {math.log((1 + math.sqrt(5)) / 2):.12f}")
    print(f"  quadrature    {mahler.mahler_quadrature(golden, 4096).value:.12f}")
    print(f"  resultant 40  {mahler.resultant_growth(golden, 40):.12f}")

    f = parse_laurent("1 + u1 + u2 + u3", 3)
    target = 7 * ZETA3 / (2 * math.pi ** 2)
    print(f"\nm(1 + u1 + u2 + u3), closed form {target:.9f}")
    print(f"  quadrature 256: {mahler.mahler_quadrature(f, 256).value:.9f}")
    print("  n   excluded  riemann      error")
    for n in (4, 5, 8, 9, 16, 17, 24, 25):
        est = mahler.riemann_sum_log(f, SubgroupLattice.scaled(n, 3))
        print(f"  {n:<3} {est.excluded_zeros:<9} {est.value:.9f}  {est.value - target:+.2e}")


if __name__ == "__main__":
    main()
