"""Homoclinic coefficients of 1/f* and the effect of a vanishing multiplier.

For f = 2 - u1 - u2 the plain coefficients decay like n^-1/2 along the
diagonal and are not summable; multiplying by (u1 - 1)^3 fixes that.
"""
import argparse

from alab import LaurentPoly, parse_laurent
from alab import homoclinic as hc
from alab.variety import sample_variety


def main():
    ap = argparse.ArgumentParser(description=__doc__.split("\n")[0])
    ap.add_argument("--grid", type=int, default=1024)
    ap.add_argument("--radius", type=int, default=16)
    args = ap.parse_args()

    f = parse_laurent("2 - u1 - u2", 2)
    one = LaurentPoly.constant(1, 2)
    for extrapolate in (False, True):
        w = hc.fourier_window(f, one, 1, 8, args.grid, aliasing_check=False, extrapolate=extrapolate)
        err = max(abs(w.coeff(n) - hc.harmonic_coefficient(n)) for n in w.indices())
        print(f"binomial formula, grid {args.grid}, extrapolate={extrapolate}: max err {err:.2e}")

    plain = hc.summability_report(hc.fourier_window(f, one, 1, args.radius, args.grid,
                                                    aliasing_check=False))
    print(f"\ng = 1: diagonal decay exponent {plain.decay_exponent:.3f}, tail ratio {plain.tail_ratio:.2f}")

    found = hc.multiplier_search(f, sample_variety(f, 64), R=args.radius)
    print(f"search: g = {found.g}, k = {found.k} via {found.template}")
    print(f"  tail ratio {found.summability.tail_ratio:.2f}, residual {found.residual.max_deviation:.1e}")


if __name__ == "__main__":
    main()
