"""Torsion points on unitary varieties: the order-30 scan and the circle census."""
from alab import parse_laurent
from alab.lattice import SubgroupLattice
from alab.periodic import fix_component_dim
from alab.variety import torsion_scan


def main():
    curve = parse_laurent("3 - u1 - u1^-1 - u2 - u2^-1", 2)
    pts = torsion_scan(curve, 30)
    print("torsion points of order <= 30 on U(3 - u - 1/u - v - 1/v):")
    for p in pts:
        print("  order", p.order, tuple(str(a) for a in p.angles))

    circles = parse_laurent("1 + u1 + u2 + u3", 3)
    print("\nzeros of 1 + u1 + u2 + u3 on Omega_{nZ^3} (expect 3n - 3 for even n, 0 for odd):")
    print("  " + " ".join(f"{n}:{fix_component_dim(circles, SubgroupLattice.scaled(n, 3))}"
                          for n in range(1, 21)))


if __name__ == "__main__":
    main()
